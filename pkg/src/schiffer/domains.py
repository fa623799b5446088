"""Cut systems of polynomial disk maps, their level curves, collars and quadrature rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as P
from shapely.geometry import LinearRing, Point, Polygon

from .errors import InvalidEps, InvalidOrder, InversionFailure, LengthMismatch
from .surface_models import SurfaceModel, reduce_lattice, torus_distance

DISJOINT_TOL = 1e-6
MEMBERSHIP_TOL = 1e-10


@dataclass(frozen=True)
class ConformalDomain:
    """Image of the unit disk under f(zeta) = sum_j c_j zeta^j; f(0) is the base point."""
    coeffs: tuple
    label: str = ""

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coeffs)
        if len(c) < 2 or c[1] == 0:
            raise ValueError("need c_1 != 0")
        while len(c) > 2 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def center(self) -> complex:
        return self.coeffs[0]

    @property
    def scale(self) -> float:
        return abs(self.coeffs[1])

    def f(self, zeta):
        return P.polyval(np.asarray(zeta, dtype=complex), self.coeffs)

    def df(self, zeta):
        return P.polyval(np.asarray(zeta, dtype=complex), P.polyder(self.coeffs))

    def area(self) -> float:
        return float(np.pi * sum(j * abs(c) ** 2 for j, c in enumerate(self.coeffs)))

    def inverse(self, w, tol: float = 1e-14, maxiter: int = 50):
        """zeta with f(zeta) = w by Newton's method."""
        w = np.asarray(w, dtype=complex)
        zeta = (w - self.coeffs[0]) / self.coeffs[1]
        for _ in range(maxiter):
            step = (self.f(zeta) - w) / self.df(zeta)
            zeta = zeta - step
            if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(zeta))):
                return zeta
        raise InversionFailure("Newton iteration did not converge in %d steps" % maxiter)

    def contains(self, w, tol: float = MEMBERSHIP_TOL):
        """True where w lies in the open domain (|f^-1(w)| < 1 - tol)."""
        w = np.asarray(w, dtype=complex)
        inside = np.zeros(w.shape, dtype=bool)
        # Newton from the linear guess is only trusted near the domain
        near = np.abs(w - self.center) < 2.5 * sum(abs(c) for c in self.coeffs[1:])
        if np.any(near):
            zeta = self.inverse(w[near])
            inside[near] = np.abs(zeta) < 1 - tol
        return inside


@dataclass(frozen=True)
class SurfaceConfig:
    surface: SurfaceModel
    domains: tuple
    q: complex
    epsilon: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(self.domains))
        object.__setattr__(self, "q", complex(self.q))
        if len(self.domains) < 1:
            raise ValueError("need at least one domain")

    @property
    def n(self) -> int:
        return len(self.domains)


class QuadKind(str, Enum):
    AREA = "area"
    CONTOUR = "contour"


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: QuadKind
    zeta: np.ndarray | None = None     # chart pre-images of the nodes
    dwdt: np.ndarray | None = None     # dw/dtheta for contour rules

    def integrate(self, values):
        values = np.asarray(values)
        if self.kind is QuadKind.CONTOUR:
            return np.sum(values * self.dwdt * self.weights, axis=-1)
        return np.sum(values * self.weights, axis=-1)


@dataclass(frozen=True)
class LevelCurve:
    s: float
    samples: np.ndarray
    zeta: np.ndarray
    dwdt: np.ndarray

    @property
    def M(self) -> int:
        return len(self.samples)


def _gauss_radial(a: float, b: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return a + (b - a) * (x + 1) / 2, w * (b - a) / 2


def area_quadrature(dom: ConformalDomain, n_r: int = 32, n_t: int = 256, r_in: float = 0.0) -> QuadratureRule:
    """Gauss-Legendre (radius) x trapezoid (angle) on {r_in < |zeta| < 1}, pushed through f."""
    if n_r < 2 or n_t < 4:
        raise InvalidOrder("need n_r >= 2 and n_t >= 4")
    r, wr = _gauss_radial(r_in, 1.0, n_r)
    t = 2 * np.pi * np.arange(n_t) / n_t
    zeta = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    jac = np.abs(dom.df(zeta)) ** 2
    weights = (wr * r)[:, None].repeat(n_t, axis=1).ravel() * (2 * np.pi / n_t) * jac
    return QuadratureRule(dom.f(zeta), weights, QuadKind.AREA, zeta=zeta)


def annulus_quadrature(r_in: float, r_out: float, n_r: int = 32, n_t: int = 256, center: complex = 0j) -> QuadratureRule:
    """Tensor rule on {r_in < |z - center| < r_out}; r_in = 0 gives a disk."""
    if n_r < 2 or n_t < 4:
        raise InvalidOrder("need n_r >= 2 and n_t >= 4")
    r, wr = _gauss_radial(r_in, r_out, n_r)
    t = 2 * np.pi * np.arange(n_t) / n_t
    z = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    weights = (wr * r)[:, None].repeat(n_t, axis=1).ravel() * (2 * np.pi / n_t)
    return QuadratureRule(center + z, weights, QuadKind.AREA, zeta=z)


def level_curve(dom: ConformalDomain, s: float, M: int = 256, shift: complex = 0j) -> LevelCurve:
    """M samples of the level curve {g_Omega(., p) = s}, positively oriented about p.

    With shift = a (|a| < 1) the base point is p = f(a) and the curve is the image of
    |xi| = e^-s under zeta = (xi + a)/(1 + conj(a) xi).
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    if M < 4:
        raise InvalidOrder("need M >= 4")
    t = 2 * np.pi * np.arange(M) / M
    xi = np.exp(-s) * np.exp(1j * t)
    a = complex(shift)
    zeta = (xi + a) / (1 + np.conj(a) * xi)
    dzeta_dxi = (1 - abs(a) ** 2) / (1 + np.conj(a) * xi) ** 2
    dwdt = dom.df(zeta) * dzeta_dxi * 1j * xi
    return LevelCurve(float(s), dom.f(zeta), zeta, dwdt)


def contour_rule(curve: LevelCurve) -> QuadratureRule:
    return QuadratureRule(curve.samples, np.full(curve.M, 2 * np.pi / curve.M), QuadKind.CONTOUR,
                          zeta=curve.zeta, dwdt=curve.dwdt)


def contour_integral(curve: LevelCurve, integrand_samples) -> complex:
    """Trapezoid rule for the integral of integrand(w) dw along the curve."""
    v = np.asarray(integrand_samples)
    if v.shape[-1] != curve.M:
        raise LengthMismatch("integrand samples do not match the curve")
    return np.sum(v * curve.dwdt, axis=-1) * (2 * np.pi / curve.M)


@dataclass(frozen=True)
class Collar:
    """Annular chart f({e^-eps < |zeta| < 1}) (interior collar) or, for a circle on the
    sphere, the exterior collar {rho < |z - c| < rho e^eps}."""
    domain: ConformalDomain
    eps: float
    exterior: bool = False

    @property
    def inner_radius(self) -> float:
        return float(np.exp(-self.eps))

    def inner_curve(self, M: int = 256) -> LevelCurve:
        return level_curve(self.domain, self.eps, M)

    def outer_curve(self, M: int = 256) -> LevelCurve:
        return level_curve(self.domain, 0.0, M)

    def quadrature(self, n_r: int = 32, n_t: int = 256) -> QuadratureRule:
        if self.exterior:
            c, rho = self.domain.center, self.domain.scale
            return annulus_quadrature(rho, rho * np.exp(self.eps), n_r, n_t, center=c)
        return area_quadrature(self.domain, n_r, n_t, r_in=self.inner_radius)

    def area(self) -> float:
        return float(np.sum(self.quadrature(16, 64).weights))


def collar(dom: ConformalDomain, eps: float, exterior: bool = False) -> Collar:
    if not eps > 0:
        raise InvalidEps("collar depth must be positive")
    if exterior and dom.degree != 1:
        raise InvalidEps("exterior collars are only provided for circles")
    return Collar(dom, float(eps), exterior)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    location: tuple = field(default=())

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def _injectivity(dom: ConformalDomain, label: str) -> list[Violation]:
    out = []
    crit = P.polyroots(P.polyder(dom.coeffs)) if dom.degree > 1 else np.array([])
    inside = [complex(r) for r in np.atleast_1d(crit) if abs(r) <= 1 + 1e-12]
    if inside:
        out.append(Violation("InjectivityViolation", f"{label}: f' vanishes at {inside[0]:.6g}", (inside[0],)))
    # |f'| > 0 on a 64 x 64 polar grid
    r = np.linspace(0, 1, 64)
    t = 2 * np.pi * np.arange(64) / 64
    grid = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    dmin = np.min(np.abs(dom.df(grid)))
    if dmin <= 0 and not inside:
        out.append(Violation("InjectivityViolation", f"{label}: f' = 0 on the grid", ()))
    ring = LinearRing(np.column_stack([dom.f(np.exp(2j * np.pi * np.arange(4096) / 4096)).real,
                                       dom.f(np.exp(2j * np.pi * np.arange(4096) / 4096)).imag]))
    if not ring.is_simple:
        out.append(Violation("InjectivityViolation", f"{label}: boundary curve is not simple", ()))
    return out


def validate_config(cfg: SurfaceConfig) -> list[Violation]:
    out: list[Violation] = []
    S = cfg.surface
    M = 1024
    t = np.exp(2j * np.pi * np.arange(M) / M)
    bnd = []
    polys = []
    for k, dom in enumerate(cfg.domains):
        label = dom.label or f"domain {k}"
        out.extend(_injectivity(dom, label))
        b = dom.f(t)
        bnd.append(b)
        polys.append(Polygon(np.column_stack([b.real, b.imag])))
        if S.is_torus:
            # lattice coordinates w = x + y tau must span less than one period
            y = b.imag / S.tau.imag
            x = (b - y * S.tau).real
            if np.ptp(x) >= 1 or np.ptp(y) >= 1:
                out.append(Violation("FundamentalDomainViolation", f"{label} does not fit in one fundamental domain", (k,)))
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            if S.is_torus:
                d = np.min(torus_distance(S.tau, bnd[i][:, None], bnd[j][None, :]))
            else:
                d = np.min(np.abs(bnd[i][:, None] - bnd[j][None, :]))
            nested = polys[i].contains(Point(bnd[j][0].real, bnd[j][0].imag)) or \
                polys[j].contains(Point(bnd[i][0].real, bnd[i][0].imag))
            if d <= DISJOINT_TOL or nested or (not S.is_torus and polys[i].intersects(polys[j])):
                out.append(Violation("DisjointnessViolation", f"domains {i} and {j} are not disjoint (gap {d:.3g})", (i, j)))
    q = cfg.q
    for k, b in enumerate(bnd):
        if S.is_torus:
            q0 = q
            d = np.min(torus_distance(S.tau, q0, b))
            yq = reduce_lattice(q - cfg.domains[k].center, S.tau)[0] + cfg.domains[k].center
            inside = polys[k].contains(Point(yq.real, yq.imag))
        else:
            d = np.min(np.abs(q - b))
            inside = polys[k].contains(Point(q.real, q.imag))
        if inside or d <= DISJOINT_TOL:
            out.append(Violation("AnchorViolation", f"q is not in the complement of domain {k}", (k,)))
    if cfg.epsilon <= 0:
        out.append(Violation("CollarViolation", "epsilon must be positive", ()))
    return out


def separation(cfg: SurfaceConfig, z, k: int):
    """Distance from points z to the boundary of domain k (surface metric)."""
    b = cfg.domains[k].f(np.exp(2j * np.pi * np.arange(512) / 512))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if cfg.surface.is_torus:
        return np.min(torus_distance(cfg.surface.tau, z[:, None], b[None, :]), axis=1)
    return np.min(np.abs(z[:, None] - b[None, :]), axis=1)


def in_domain(cfg: SurfaceConfig, z, k: int):
    """Membership of z in Omega_k; on the torus z is first moved to the translate nearest the center."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    dom = cfg.domains[k]
    if cfg.surface.is_torus:
        z = reduce_lattice(z - dom.center, cfg.surface.tau)[0] + dom.center
    return dom.contains(z)


def nearest_translate(cfg: SurfaceConfig, z, k: int):
    """The lattice translate of z closest to the center of domain k (identity on the sphere)."""
    z = np.asarray(z, dtype=complex)
    if not cfg.surface.is_torus:
        return z
    dom = cfg.domains[k]
    return reduce_lattice(z - dom.center, cfg.surface.tau)[0] + dom.center
