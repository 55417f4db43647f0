"""Boundary value solvers and spectral Dirichlet-to-Neumann maps (Nystrom lane).

The Dirichlet-to-Neumann map follows the convention  f -> -gamma_N(u)  for
the solution u of (-Laplace - z)u = 0 with gamma_D u = f; assembled purely
from single-layer calculus as

    dtn(z) = -(1/2 I + K#_z) V_z^{-1},
    ntd(z) = -dtn(z)^{-1}.

Near the Dirichlet spectrum (or on curves of logarithmic capacity one at
z = 0) the single-layer trace degenerates; operations then fail loudly with
a conditioning diagnostic instead of continuing silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BackendUnsupported, NearSingular, QuadratureUnavailable
from .geometry import BoundaryGrid
from .layerpot import (
    BoundaryOperator,
    assemble_single_layer_trace,
    evaluate_potential,
    evaluate_potential_gradient,
    neumann_trace_of_single_layer,
)
from .specfun import as_complex

COND_LIMIT = 1e12


@dataclass(frozen=True)
class SpectralParameter:
    """Spectral parameter with optional certified distances to the spectra."""

    z: complex
    dirichlet_distance: float | None = None
    neumann_distance: float | None = None


def as_spectral(z) -> SpectralParameter:
    if isinstance(z, SpectralParameter):
        return z
    return SpectralParameter(as_complex(z))


class LayerField:
    """Interior solution represented by a single-layer density."""

    __slots__ = ("backend", "z", "density")

    def __init__(self, backend: "BemBackend", z: complex, density: np.ndarray):
        self.backend = backend
        self.z = as_complex(z)
        self.density = np.asarray(density, dtype=complex)

    def value(self, points):
        return evaluate_potential(self.backend.grid, self.density, self.z, points)

    def gradient(self, points):
        return evaluate_potential_gradient(self.backend.grid, self.density, self.z, points)

    def laplacian(self, points):
        return -self.z * self.value(points)

    def gamma_dirichlet(self) -> np.ndarray:
        return self.backend.single_layer(self.z) @ self.density

    def gamma_neumann(self) -> np.ndarray:
        return self.backend.neumann_trace(self.z) @ self.density

    def helmholtz_apply(self, z):
        z = as_complex(z)
        if z == self.z:
            return _ZeroLayerField(self.backend)
        return _ScaledLayerField(self, self.z - z)

    def __add__(self, other):
        if isinstance(other, LayerField) and other.z == self.z:
            return LayerField(self.backend, self.z, self.density + other.density)
        raise BackendUnsupported("layer fields combine only at equal spectral parameters")

    def __rmul__(self, c):
        return LayerField(self.backend, self.z, as_complex(c) * self.density)


class _ZeroLayerField:
    __slots__ = ("backend",)

    def __init__(self, backend):
        self.backend = backend

    def value(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(len(pts), dtype=complex)
        return out if np.asarray(points).ndim > 1 else complex(out[0])

    def gamma_dirichlet(self):
        return np.zeros(self.backend.grid.n, dtype=complex)

    gamma_neumann = gamma_dirichlet


class _ScaledLayerField:
    __slots__ = ("base", "factor")

    def __init__(self, base: LayerField, factor: complex):
        self.base = base
        self.factor = factor

    @property
    def backend(self):
        return self.base.backend

    def value(self, points):
        return self.factor * self.base.value(points)

    def gamma_dirichlet(self):
        return self.factor * self.base.gamma_dirichlet()

    def gamma_neumann(self):
        return self.factor * self.base.gamma_neumann()


class BemBackend:
    """Boundary-operator backend over a Nystrom grid (no interior resolvents)."""

    def __init__(self, grid: BoundaryGrid):
        self.grid = grid
        self.name = f"bem-{grid.spec.kind}"
        self._cache: dict = {}

    @property
    def nboundary(self) -> int:
        return self.grid.n

    @property
    def boundary_weights(self) -> np.ndarray:
        return self.grid.weighted_measure

    @property
    def token(self) -> str:
        return self.grid.token

    def single_layer(self, z) -> np.ndarray:
        z = as_complex(z)
        key = ("V", z)
        if key not in self._cache:
            self._cache[key] = assemble_single_layer_trace(self.grid, z).matrix
        return self._cache[key]

    def neumann_trace(self, z) -> np.ndarray:
        z = as_complex(z)
        key = ("T", z)
        if key not in self._cache:
            self._cache[key] = neumann_trace_of_single_layer(self.grid, z).matrix
        return self._cache[key]

    def single_layer_solve(self, z, rhs) -> np.ndarray:
        V = self.single_layer(z)
        cond = np.linalg.cond(V)
        if cond > COND_LIMIT:
            raise NearSingular(
                f"single-layer trace at z = {z} has condition {cond:.3e}; "
                "near the Dirichlet spectrum or a capacity degeneracy"
            )
        return np.linalg.solve(V, rhs)

    def dtn(self, z) -> np.ndarray:
        z = as_complex(z)
        key = ("dtn", z)
        if key not in self._cache:
            inv = self.single_layer_solve(z, np.eye(self.grid.n))
            self._cache[key] = -self.neumann_trace(z) @ inv
        return self._cache[key]

    def ntd(self, z) -> np.ndarray:
        M = self.dtn(z)
        cond = np.linalg.cond(M)
        if cond > COND_LIMIT:
            raise NearSingular(f"Dirichlet-to-Neumann map at z = {z} is near-singular")
        return -np.linalg.inv(M)

    def harmonic_extension(self, w, g) -> LayerField:
        return LayerField(self, w, self.single_layer_solve(w, np.asarray(g, dtype=complex)))

    def boundary_inner(self, f, g) -> complex:
        return complex(np.sum(self.boundary_weights * np.conj(f) * g))

    def inner(self, u, v):
        raise QuadratureUnavailable("layer-density backend has no interior quadrature")


def solve_dirichlet(grid, z, f) -> LayerField:
    """Field u with (-Laplace - z)u = 0 and gamma_D u = f; u = S_z V_z^{-1} f."""
    backend = grid if isinstance(grid, BemBackend) else BemBackend(grid)
    zp = as_spectral(z)
    if zp.dirichlet_distance is not None and zp.dirichlet_distance == 0.0:
        raise NearSingular("z certified to lie on the Dirichlet spectrum")
    return backend.harmonic_extension(zp.z, np.asarray(f, dtype=complex))


def solve_neumann(grid, z, g) -> LayerField:
    """Field u with (-Laplace - z)u = 0 and gamma_N u = g."""
    backend = grid if isinstance(grid, BemBackend) else BemBackend(grid)
    zp = as_spectral(z)
    if zp.neumann_distance is not None and zp.neumann_distance == 0.0:
        raise NearSingular("z certified to lie on the Neumann spectrum")
    T = backend.neumann_trace(zp.z)
    cond = np.linalg.cond(T)
    if cond > COND_LIMIT:
        raise NearSingular(
            f"interior Neumann trace at z = {zp.z} has condition {cond:.3e}; "
            "z is (numerically) a Neumann eigenvalue"
        )
    return LayerField(backend, zp.z, np.linalg.solve(T, np.asarray(g, dtype=complex)))


def dtn(grid, z) -> BoundaryOperator:
    """Dirichlet-to-Neumann matrix on the grid (convention f -> -gamma_N u)."""
    backend = grid if isinstance(grid, BemBackend) else BemBackend(grid)
    zp = as_spectral(z)
    if zp.dirichlet_distance is not None and zp.dirichlet_distance == 0.0:
        raise NearSingular("z certified to lie on the Dirichlet spectrum")
    return BoundaryOperator(backend.dtn(zp.z), "DtN", zp.z, backend.token)


def ntd(grid, z) -> BoundaryOperator:
    """Neumann-to-Dirichlet matrix, the negative inverse of dtn."""
    backend = grid if isinstance(grid, BemBackend) else BemBackend(grid)
    zp = as_spectral(z)
    if zp.neumann_distance is not None and zp.neumann_distance == 0.0:
        raise NearSingular("z certified to lie on the Neumann spectrum")
    return BoundaryOperator(backend.ntd(zp.z), "NtD", zp.z, backend.token)
