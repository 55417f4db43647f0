"""Closed-form backends: unit interval, Fourier-Bessel disk, wedge fixture.

Both model backends expose the same surface the extension factory and the
resolvent-formula checks are written against:

* boundary vectors (pairs of endpoint values on the interval, Fourier
  coefficients ``k = -K..K`` on the disk),
* spectral Dirichlet-to-Neumann / Neumann-to-Dirichlet matrices,
* harmonic extensions, Dirichlet and Neumann reference resolvents,
* explicit bases of ``ker(-Laplace_max - w)``,
* interior L2 inner products at spectral quadrature accuracy.

Everything here is a closed form plus Gauss-Legendre quadrature, so the
backends serve as independent oracles for the boundary-element lane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NearEigenvalue
from .specfun import (
    as_complex,
    bessel_j,
    bessel_j_prime,
    bessel_y,
    bessel_y_prime,
    sqrt_upper,
)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _gauss(a: float, b: float):
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
    w = 0.5 * (b - a) * _GL_WEIGHTS
    return x, w


# ---------------------------------------------------------------------------
# closed-form boundary operators
# ---------------------------------------------------------------------------

def interval_dtn(z) -> np.ndarray:
    """Dirichlet-to-Neumann matrix of (-d^2/dx^2 - z) on (0, 1).

    Equals (sqrt(z)/sin sqrt(z)) [[-cos sqrt(z), 1], [1, -cos sqrt(z)]] with
    the limit [[-1, 1], [1, -1]] at z = 0; the sign maps Dirichlet data to
    minus the outward Neumann trace.
    """
    z = as_complex(z)
    if z == 0:
        return np.array([[-1.0, 1.0], [1.0, -1.0]], dtype=complex)
    k = sqrt_upper(z)
    s = np.sin(k)
    if abs(s) < 1e-13 * max(1.0, abs(k)):
        raise NearEigenvalue(f"z = {z} is numerically a Dirichlet eigenvalue of the interval")
    c = np.cos(k)
    return (k / s) * np.array([[-c, 1.0], [1.0, -c]], dtype=complex)


def disk_mode_dtn(k: int, z, radius: float = 1.0) -> complex:
    """Mode-k Dirichlet-to-Neumann value on a disk: -sqrt(z) J'_k / J_k at sqrt(z) R."""
    k = abs(int(k))
    z = as_complex(z)
    if radius <= 0:
        raise DomainError("disk radius must be positive")
    if z == 0:
        return complex(-k / radius)
    kap = sqrt_upper(z)
    jk = bessel_j(k, kap * radius)
    if abs(jk) < 1e-290:
        raise NearEigenvalue(f"z = {z} is numerically a Dirichlet eigenvalue of mode {k}")
    return complex(-kap * bessel_j_prime(k, kap * radius) / jk)


# ---------------------------------------------------------------------------
# wedge corner fixture
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WedgeMode:
    """Re-entrant corner of opening angle in (pi, 2 pi); evaluation only."""

    opening: float

    def __post_init__(self):
        if not np.pi < self.opening < 2.0 * np.pi:
            raise DomainError("wedge opening must lie in (pi, 2 pi)")

    @property
    def exponent(self) -> float:
        return np.pi / self.opening

    def cutoff(self, r):
        """C-infinity profile: 1 for r <= 1/4, 0 for r >= 1/2."""
        r = np.asarray(r, dtype=float)
        t = np.clip((r - 0.25) / 0.25, 0.0, 1.0)

        def bump(s):
            out = np.zeros_like(s)
            pos = s > 0
            out[pos] = np.exp(-1.0 / s[pos])
            return out

        up, down = bump(1.0 - t), bump(t)
        return up / (up + down)


def wedge_singular_function(mode: WedgeMode, r, theta):
    """Value of the corner mode  cutoff(r) r^(pi/w) sin(pi theta / w)."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    if np.any(theta < -1e-14) or np.any(theta > mode.opening + 1e-14):
        raise DomainError("angle outside the wedge opening")
    a = mode.exponent
    val = mode.cutoff(r) * r**a * np.sin(a * theta)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# interval backend
# ---------------------------------------------------------------------------

class IntervalField:
    """Closed-form field on (0, 1): callables for u, u' and u''."""

    __slots__ = ("backend", "fn", "dfn", "lapfn")

    def __init__(self, backend, fn, dfn, lapfn):
        self.backend = backend
        self.fn = fn
        self.dfn = dfn
        self.lapfn = lapfn

    def value(self, x):
        return self.fn(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self.dfn(np.asarray(x, dtype=float))

    def laplacian(self, x):
        return self.lapfn(np.asarray(x, dtype=float))

    def gamma_dirichlet(self) -> np.ndarray:
        return np.array([self.fn(0.0), self.fn(1.0)], dtype=complex)

    def gamma_neumann(self) -> np.ndarray:
        # outward normals at the endpoints are -1 and +1
        return np.array([-self.dfn(0.0), self.dfn(1.0)], dtype=complex)

    def helmholtz_apply(self, z):
        z = as_complex(z)
        return IntervalField(
            self.backend,
            lambda x: -self.lapfn(x) - z * self.fn(x),
            None,
            None,
        )

    def __add__(self, other):
        if other.backend is not self.backend:
            raise DomainError("cannot combine fields from different backends")
        return IntervalField(
            self.backend,
            lambda x: self.fn(x) + other.fn(x),
            lambda x: self.dfn(x) + other.dfn(x),
            lambda x: self.lapfn(x) + other.lapfn(x),
        )

    def __rmul__(self, c):
        c = as_complex(c)
        return IntervalField(
            self.backend,
            lambda x: c * self.fn(x),
            lambda x: c * self.dfn(x),
            lambda x: c * self.lapfn(x),
        )


def barycentric_interpolant(nodes, values):
    """Deterministic barycentric polynomial interpolant through the nodes.

    Capacity scaling keeps the weight products in floating range for the
    Gauss grids used here; the evaluation is exact at the nodes.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=complex)
    cap = 0.25 * (np.max(nodes) - np.min(nodes))
    w = np.ones(len(nodes))
    for j in range(len(nodes)):
        w[j] = 1.0 / np.prod((nodes[j] - np.delete(nodes, j)) / cap)

    def interp(x):
        x = np.asarray(x, dtype=float)
        diff = x[..., None] - nodes
        hit = diff == 0.0
        diff = np.where(hit, 1.0, diff)
        num = np.sum(w * values / diff, axis=-1)
        den = np.sum(w / diff, axis=-1)
        out = num / den
        if np.any(hit):
            exact = values[np.argmax(hit, axis=-1)]
            out = np.where(np.any(hit, axis=-1), exact, out)
        return out if out.ndim else complex(out)

    return interp


def _callable_or_interp(f, nodes):
    if callable(f):
        return f
    vals = np.asarray(f, dtype=complex)
    if vals.shape != nodes.shape:
        raise DomainError("sampled data must match the backend quadrature nodes")
    return barycentric_interpolant(nodes, vals)


class Model1D:
    """Unit-interval backend; all boundary operators are 2x2 matrices."""

    name = "interval"
    nboundary = 2

    def __init__(self):
        self.boundary_weights = np.ones(2)
        self.quad_nodes, self.quad_weights = _gauss(0.0, 1.0)
        # build-time self test of the closed-form boundary operator
        ref = np.array([[-1.0, 1.0], [1.0, -1.0]])
        if np.max(np.abs(interval_dtn(0.0) - ref)) > 1e-14:
            raise AssertionError("interval DtN self-test failed")

    # -- boundary operators -------------------------------------------------
    def dtn(self, z) -> np.ndarray:
        return interval_dtn(z)

    def ntd(self, z) -> np.ndarray:
        return -np.linalg.inv(interval_dtn(z))

    # -- fields --------------------------------------------------------------
    def field(self, fn, dfn=None, lapfn=None) -> IntervalField:
        return IntervalField(self, fn, dfn, lapfn)

    def constant(self, c=1.0) -> IntervalField:
        c = as_complex(c)
        return IntervalField(
            self,
            lambda x: c * np.ones_like(x),
            lambda x: np.zeros_like(x, dtype=complex),
            lambda x: np.zeros_like(x, dtype=complex),
        )

    def polynomial(self, coeffs) -> IntervalField:
        p = np.polynomial.Polynomial(coeffs)
        dp = p.deriv()
        d2p = dp.deriv()
        return IntervalField(self, lambda x: p(x) + 0j, lambda x: dp(x) + 0j, lambda x: d2p(x) + 0j)

    def harmonic_extension(self, w, g) -> IntervalField:
        """Solution of (-u'' - w u) = 0 with Dirichlet data g = (u(0), u(1))."""
        w = as_complex(w)
        g0, g1 = (as_complex(v) for v in np.asarray(g).ravel())
        if w == 0:
            return IntervalField(
                self,
                lambda x: g0 * (1 - x) + g1 * x,
                lambda x: (g1 - g0) * np.ones_like(x),
                lambda x: np.zeros_like(x, dtype=complex),
            )
        k = sqrt_upper(w)
        s = np.sin(k)
        if abs(s) < 1e-13 * max(1.0, abs(k)):
            raise NearEigenvalue(f"w = {w} is a Dirichlet eigenvalue; extension undefined")
        fn = lambda x: (g0 * np.sin(k * (1 - x)) + g1 * np.sin(k * x)) / s
        dfn = lambda x: (-g0 * k * np.cos(k * (1 - x)) + g1 * k * np.cos(k * x)) / s
        return IntervalField(self, fn, dfn, lambda x: -w * fn(x))

    def homogeneous_basis(self, w):
        """Two explicit solutions of (-u'' - w u) = 0 spanning the kernel."""
        w = as_complex(w)
        if w == 0:
            return [self.polynomial([1.0]), self.polynomial([0.0, 1.0])]
        k = sqrt_upper(w)
        c = IntervalField(
            self,
            lambda x: np.cos(k * x),
            lambda x: -k * np.sin(k * x),
            lambda x: -w * np.cos(k * x),
        )
        s = IntervalField(
            self,
            lambda x: np.sin(k * x),
            lambda x: k * np.cos(k * x),
            lambda x: -w * np.sin(k * x),
        )
        return [c, s]

    def _resolvent(self, w, f, reference: str) -> IntervalField:
        w = as_complex(w)
        k = sqrt_upper(w)
        fc = _callable_or_interp(f, self.quad_nodes)
        if reference == "dirichlet":
            if w == 0:
                uL, duL = (lambda x: x), (lambda x: np.ones_like(x))
                uR, duR = (lambda x: 1 - x), (lambda x: -np.ones_like(x))
                wronsk = -1.0
            else:
                uL, duL = (lambda x: np.sin(k * x)), (lambda x: k * np.cos(k * x))
                uR = lambda x: np.sin(k * (1 - x))
                duR = lambda x: -k * np.cos(k * (1 - x))
                wronsk = -k * np.sin(k)
        elif reference == "neumann":
            if w == 0:
                raise NearEigenvalue("0 is a Neumann eigenvalue of the interval")
            uL, duL = (lambda x: np.cos(k * x)), (lambda x: -k * np.sin(k * x))
            uR = lambda x: np.cos(k * (1 - x))
            duR = lambda x: k * np.sin(k * (1 - x))
            wronsk = k * np.sin(k)
        else:
            raise DomainError(f"unknown reference {reference!r}")
        if abs(wronsk) < 1e-13 * max(1.0, abs(w)):
            raise NearEigenvalue(f"w = {w} is a {reference} eigenvalue of the interval")

        def u(x):
            x = np.asarray(x, dtype=float)
            out = np.empty(x.shape, dtype=complex)
            for idx, xi in np.ndenumerate(x):
                xs1, ws1 = _gauss(0.0, float(xi))
                xs2, ws2 = _gauss(float(xi), 1.0)
                out[idx] = -(
                    uR(xi) * np.sum(ws1 * uL(xs1) * fc(xs1))
                    + uL(xi) * np.sum(ws2 * uR(xs2) * fc(xs2))
                ) / wronsk
            return out if out.ndim else complex(out)

        def du(x):
            x = np.asarray(x, dtype=float)
            out = np.empty(x.shape, dtype=complex)
            for idx, xi in np.ndenumerate(x):
                xs1, ws1 = _gauss(0.0, float(xi))
                xs2, ws2 = _gauss(float(xi), 1.0)
                out[idx] = -(
                    duR(xi) * np.sum(ws1 * uL(xs1) * fc(xs1))
                    + duL(xi) * np.sum(ws2 * uR(xs2) * fc(xs2))
                ) / wronsk
            return out if out.ndim else complex(out)

        ufn = u
        return IntervalField(self, ufn, du, lambda x: -w * ufn(x) - fc(x))

    def resolvent_dirichlet(self, w, f) -> IntervalField:
        return self._resolvent(w, f, "dirichlet")

    def resolvent_neumann(self, w, f) -> IntervalField:
        return self._resolvent(w, f, "neumann")

    def h2n_field(self, b) -> IntervalField:
        """Cubic with zero Dirichlet trace and Neumann trace b = (b0, b1)."""
        b0, b1 = (as_complex(v) for v in np.asarray(b).ravel())
        # p = x(1-x)((b0-b1)x - b0) gives -p'(0) = b0, p'(1) = b1
        a3 = -(b0 - b1)
        a2 = (b0 - b1) + b0
        a1 = -b0
        return self.polynomial([0.0, a1, a2, a3])

    def h20_family(self, count: int, rng) -> list:
        """H2_0 surrogates: x^2 (1-x)^2 times random low-order polynomials."""
        base = np.polynomial.Polynomial([0.0, 0.0, 1.0]) * np.polynomial.Polynomial(
            [1.0, -2.0, 1.0]
        )
        out = []
        for _ in range(count):
            coeffs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            out.append(self.polynomial((base * np.polynomial.Polynomial(coeffs)).coef))
        return out

    # -- inner products ------------------------------------------------------
    def inner(self, u, v) -> complex:
        uu = u.value(self.quad_nodes) if hasattr(u, "value") else u(self.quad_nodes)
        vv = v.value(self.quad_nodes) if hasattr(v, "value") else v(self.quad_nodes)
        return complex(np.sum(self.quad_weights * np.conj(uu) * vv))

    def boundary_inner(self, f, g) -> complex:
        return complex(np.sum(self.boundary_weights * np.conj(f) * g))

    def norm(self, u) -> float:
        return float(np.sqrt(abs(self.inner(u, u))))


# ---------------------------------------------------------------------------
# disk backend
# ---------------------------------------------------------------------------

class _Profile:
    """Radial profile of one Fourier mode: value, d/dr, radial Laplacian part."""

    __slots__ = ("val", "dval", "lap")

    def __init__(self, val, dval, lap):
        self.val = val
        self.dval = dval
        self.lap = lap


def _profile_sum(p, q):
    return _Profile(
        lambda r: p.val(r) + q.val(r),
        lambda r: p.dval(r) + q.dval(r),
        lambda r: p.lap(r) + q.lap(r),
    )


def _profile_scale(c, p):
    return _Profile(lambda r: c * p.val(r), lambda r: c * p.dval(r), lambda r: c * p.lap(r))


class DiskField:
    """Fourier-mode field on a disk: u = sum_k profile_k(r) e^(i k theta)."""

    __slots__ = ("backend", "profiles")

    def __init__(self, backend, profiles: dict):
        self.backend = backend
        self.profiles = dict(profiles)

    def value(self, r, theta):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
        for k, p in self.profiles.items():
            out = out + p.val(r) * np.exp(1j * k * theta)
        return out

    def laplacian(self, r, theta):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
        for k, p in self.profiles.items():
            out = out + p.lap(r) * np.exp(1j * k * theta)
        return out

    def gradient(self, r, theta):
        """Cartesian gradient, shape (..., 2)."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        gr = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
        gt = np.zeros_like(gr)
        for k, p in self.profiles.items():
            phase = np.exp(1j * k * theta)
            gr = gr + p.dval(r) * phase
            gt = gt + 1j * k * p.val(r) / r * phase
        gx = gr * np.cos(theta) - gt * np.sin(theta)
        gy = gr * np.sin(theta) + gt * np.cos(theta)
        return np.stack([gx, gy], axis=-1)

    def gamma_dirichlet(self) -> np.ndarray:
        b = self.backend
        out = np.zeros(b.nboundary, dtype=complex)
        for k, p in self.profiles.items():
            out[b.mode_index(k)] = p.val(b.radius)
        return out

    def gamma_neumann(self) -> np.ndarray:
        b = self.backend
        out = np.zeros(b.nboundary, dtype=complex)
        for k, p in self.profiles.items():
            out[b.mode_index(k)] = p.dval(b.radius)
        return out

    def helmholtz_apply(self, z):
        z = as_complex(z)
        profiles = {
            k: _Profile(
                lambda r, p=p: -p.lap(r) - z * p.val(r),
                None,
                None,
            )
            for k, p in self.profiles.items()
        }
        return DiskField(self.backend, profiles)

    def __add__(self, other):
        if other.backend is not self.backend:
            raise DomainError("cannot combine fields from different backends")
        merged = dict(self.profiles)
        for k, p in other.profiles.items():
            merged[k] = _profile_sum(merged[k], p) if k in merged else p
        return DiskField(self.backend, merged)

    def __rmul__(self, c):
        c = as_complex(c)
        return DiskField(self.backend, {k: _profile_scale(c, p) for k, p in self.profiles.items()})


class DiskModel:
    """Fourier-Bessel disk backend truncated at modes |k| <= mode_cutoff."""

    name = "disk"

    def __init__(self, radius: float = 1.0, mode_cutoff: int = 8, radial_nodes: int = 64):
        if radius <= 0:
            raise DomainError("disk radius must be positive")
        self.radius = float(radius)
        self.mode_cutoff = int(mode_cutoff)
        self.modes = list(range(-self.mode_cutoff, self.mode_cutoff + 1))
        self.nboundary = len(self.modes)
        # L2(boundary) inner product of trigonometric coefficients
        self.boundary_weights = np.full(self.nboundary, 2.0 * np.pi * self.radius)
        nodes, weights = np.polynomial.legendre.leggauss(radial_nodes)
        self.quad_nodes = 0.5 * self.radius * (nodes + 1.0)
        self.quad_weights = 0.5 * self.radius * weights
        if abs(disk_mode_dtn(3, 0.0, self.radius) + 3.0 / self.radius) > 1e-14:
            raise AssertionError("disk DtN self-test failed")

    def mode_index(self, k: int) -> int:
        return k + self.mode_cutoff

    def truncation_tail(self) -> float:
        """Magnitude of the first omitted static Dirichlet-to-Neumann value."""
        return (self.mode_cutoff + 1) / self.radius

    # -- boundary operators ---------------------------------------------------
    def dtn(self, z) -> np.ndarray:
        return np.diag([disk_mode_dtn(k, z, self.radius) for k in self.modes])

    def ntd(self, z) -> np.ndarray:
        return -np.linalg.inv(self.dtn(z))

    # -- fields -----------------------------------------------------------------
    def harmonic_profile(self, k: int, w) -> _Profile:
        """Regular radial solution of mode k at parameter w, normalized at r = R."""
        w = as_complex(w)
        k = int(k)
        ak = abs(k)
        R = self.radius
        if w == 0:
            if ak == 0:
                return _Profile(
                    lambda r: np.ones_like(np.asarray(r, dtype=float), dtype=complex),
                    lambda r: np.zeros_like(np.asarray(r, dtype=float), dtype=complex),
                    lambda r: np.zeros_like(np.asarray(r, dtype=float), dtype=complex),
                )
            scale = R ** (-ak)
            return _Profile(
                lambda r: scale * np.asarray(r, dtype=float) ** ak + 0j,
                lambda r: scale * ak * np.asarray(r, dtype=float) ** (ak - 1) + 0j,
                lambda r: np.zeros_like(np.asarray(r, dtype=float), dtype=complex),
            )
        kap = sqrt_upper(w)
        jR = bessel_j(ak, kap * R)
        if abs(jR) < 1e-290:
            raise NearEigenvalue(f"w = {w} is a Dirichlet eigenvalue of mode {k}")
        val = lambda r: bessel_j(ak, kap * np.asarray(r, dtype=float)) / jR
        dval = lambda r: kap * bessel_j_prime(ak, kap * np.asarray(r, dtype=float)) / jR
        return _Profile(val, dval, lambda r: -w * val(r))

    def harmonic_extension(self, w, g) -> DiskField:
        g = np.asarray(g, dtype=complex)
        if g.shape != (self.nboundary,):
            raise DomainError("boundary vector has the wrong length")
        profiles = {}
        for k in self.modes:
            c = g[self.mode_index(k)]
            if c != 0:
                profiles[k] = _profile_scale(c, self.harmonic_profile(k, w))
        return DiskField(self, profiles)

    def homogeneous_basis(self, w):
        out = []
        for k in self.modes:
            out.append(DiskField(self, {k: self.harmonic_profile(k, w)}))
        return out

    def field_from_modes(self, profiles: dict) -> DiskField:
        return DiskField(self, profiles)

    def mode_poly_field(self, k: int, povers: dict) -> DiskField:
        """Field c r^p e^(i k theta); radial Laplacian computed termwise."""
        k = int(k)
        items = [(int(p), as_complex(c)) for p, c in povers.items()]

        def val(r):
            r = np.asarray(r, dtype=float)
            return sum(c * r**p for p, c in items)

        def dval(r):
            r = np.asarray(r, dtype=float)
            return sum((c * p * r ** (p - 1) for p, c in items if p != 0), 0.0 * r + 0j)

        def lap(r):
            r = np.asarray(r, dtype=float)
            # radial part of Laplacian on r^p e^(ik theta): (p^2 - k^2) r^(p-2)
            return sum(c * (p**2 - k**2) * r ** (p - 2) for p, c in items)

        return DiskField(self, {k: _Profile(val, dval, lap)})

    def _radial_resolvent_profile(self, k: int, w, fk, reference: str) -> _Profile:
        """Green solution of the mode-k radial problem with data fk(r)."""
        w = as_complex(w)
        ak = abs(int(k))
        R = self.radius
        kap = sqrt_upper(w)
        if w == 0:
            raise NearEigenvalue("static disk resolvent not supported; shift the parameter")
        jR = bessel_j(ak, kap * R)
        jpR = bessel_j_prime(ak, kap * R)
        uL = lambda r: bessel_j(ak, kap * np.asarray(r, dtype=float))
        duL = lambda r: kap * bessel_j_prime(ak, kap * np.asarray(r, dtype=float))
        if reference == "dirichlet":
            if abs(jR) < 1e-250:
                raise NearEigenvalue(f"w = {w} is a Dirichlet eigenvalue of mode {k}")
            a, b = bessel_y(ak, kap * R), jR
            scale = (2.0 / np.pi) * jR
        else:
            if abs(jpR) < 1e-250:
                raise NearEigenvalue(f"w = {w} is a Neumann eigenvalue of mode {k}")
            a, b = bessel_y_prime(ak, kap * R), jpR
            scale = (2.0 / np.pi) * jpR
        uR = lambda r: bessel_j(ak, kap * np.asarray(r, dtype=float)) * a - bessel_y(
            ak, kap * np.asarray(r, dtype=float)
        ) * b
        duR = lambda r: kap * (
            bessel_j_prime(ak, kap * np.asarray(r, dtype=float)) * a
            - bessel_y_prime(ak, kap * np.asarray(r, dtype=float)) * b
        )
        fc = _callable_or_interp(fk, self.quad_nodes)

        def combine(r, left, right):
            out = np.empty(np.asarray(r, dtype=float).shape, dtype=complex)
            rr = np.asarray(r, dtype=float)
            for idx, ri in np.ndenumerate(rr):
                xs1, ws1 = _gauss(0.0, float(ri))
                xs2, ws2 = _gauss(float(ri), R)
                out[idx] = (
                    right(ri) * np.sum(ws1 * uL(xs1) * xs1 * fc(xs1))
                    + left(ri) * np.sum(ws2 * uR(xs2) * xs2 * fc(xs2))
                ) / scale
            return out if out.ndim else complex(out)

        val = lambda r: combine(r, uL, uR)
        dval = lambda r: combine(r, duL, duR)
        return _Profile(val, dval, lambda r: -w * val(r) - fc(np.asarray(r, dtype=float)))

    def _resolvent(self, w, f, reference: str) -> DiskField:
        if isinstance(f, DiskField):
            data = {k: p.val for k, p in f.profiles.items()}
        elif isinstance(f, dict):
            data = f
        else:
            raise DomainError("disk interior data must be a DiskField or {mode: callable}")
        profiles = {
            int(k): self._radial_resolvent_profile(int(k), w, fk, reference)
            for k, fk in data.items()
        }
        return DiskField(self, profiles)

    def resolvent_dirichlet(self, w, f) -> DiskField:
        return self._resolvent(w, f, "dirichlet")

    def resolvent_neumann(self, w, f) -> DiskField:
        return self._resolvent(w, f, "neumann")

    def h2n_field(self, b) -> DiskField:
        """Field with zero Dirichlet trace and Neumann trace coefficients b."""
        b = np.asarray(b, dtype=complex)
        field = None
        R = self.radius
        for k in self.modes:
            c = b[self.mode_index(k)]
            if c == 0:
                continue
            ak = abs(k)
            # r^ak (r^2 - R^2) e^(ik theta): smooth, vanishing Dirichlet trace
            scale = c / (2.0 * R ** (ak + 1))
            mode_field = self.mode_poly_field(k, {ak + 2: scale, ak: -scale * R**2})
            field = mode_field if field is None else field + mode_field
        if field is None:
            field = DiskField(self, {})
        return field

    def h20_family(self, count: int, rng) -> list:
        out = []
        R = self.radius
        for _ in range(count):
            k = int(rng.integers(-min(3, self.mode_cutoff), min(3, self.mode_cutoff) + 1))
            c = complex(rng.standard_normal(), rng.standard_normal())
            ak = abs(k)
            # (r^2 - R^2)^2 r^ak e^(ik theta): vanishing Dirichlet and Neumann traces
            out.append(
                self.mode_poly_field(
                    k,
                    {ak + 4: c, ak + 2: -2.0 * c * R**2, ak: c * R**4},
                )
            )
        return out

    # -- inner products ---------------------------------------------------------
    def inner(self, u, v) -> complex:
        if not isinstance(u, DiskField) or not isinstance(v, DiskField):
            raise DomainError("disk inner product needs DiskField arguments")
        total = 0.0 + 0j
        for k, pu in u.profiles.items():
            pv = v.profiles.get(k)
            if pv is None:
                continue
            total += 2.0 * np.pi * np.sum(
                self.quad_weights
                * np.conj(pu.val(self.quad_nodes))
                * pv.val(self.quad_nodes)
                * self.quad_nodes
            )
        return complex(total)

    def boundary_inner(self, f, g) -> complex:
        return complex(np.sum(self.boundary_weights * np.conj(f) * g))

    def norm(self, u) -> float:
        return float(np.sqrt(abs(self.inner(u, u))))
