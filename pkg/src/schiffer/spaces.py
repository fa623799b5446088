"""Finite expansions of harmonic Dirichlet functions and Bergman one-forms.

Every region exposes one family of single-valued holomorphic functions ``funcs``, a
family of real single-valued harmonic extras ``logs`` (log terms and, on the torus,
the two dipoles at the first pole center), and the form basis

    holomorphic forms:      [d funcs | d-parts of logs]   (dw coefficients)
    antiholomorphic forms:  complex conjugates of the above.

Antiholomorphic form coefficients are linear: alpha_bar = sum_j c_j conj(e_j).
Regions are evaluated in chart coordinates: zeta for the domains Omega_k, w elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .domains import (ConformalDomain, QuadKind, QuadratureRule, SurfaceConfig,
                      annulus_quadrature, area_quadrature, level_curve)
from .errors import DegenerateGram, DomainMismatch, NotExact
from .surface_models import dgreen_dw, green_values, pole_function, reduce_lattice


class Chirality(str, Enum):
    HOLO = "holo"
    ANTIHOLO = "antiholo"


class BasisKind(str, Enum):
    DISK_MONOMIAL = "disk_monomial"
    LAURENT = "laurent"
    TORUS_RATIONAL = "torus_rational"


@dataclass(frozen=True)
class BasisSpec:
    kind: BasisKind
    truncation: int


class Region:
    """Base class; subclasses define the chart and the function families."""
    region_id: tuple = ()
    basis: BasisSpec

    def to_chart(self, w):
        return np.asarray(w, dtype=complex)

    def from_chart(self, c):
        return np.asarray(c, dtype=complex)

    def chart_of_rule(self, rule: QuadratureRule):
        return rule.nodes

    def funcs(self, c):
        raise NotImplementedError

    def dfuncs(self, c):
        raise NotImplementedError

    def logs(self, c):
        c = np.asarray(c)
        return np.zeros(c.shape + (0,))

    def dlogs(self, c):
        c = np.asarray(c)
        return np.zeros(c.shape + (0,), dtype=complex)

    @property
    def n_funcs(self) -> int:
        return self.funcs(np.array([self.sample_point()])).shape[-1]

    @property
    def n_logs(self) -> int:
        return self.logs(np.array([self.sample_point()])).shape[-1]

    def sample_point(self):
        raise NotImplementedError

    def form_cols(self, c):
        """dw coefficients of the holomorphic form basis at chart points c."""
        return np.concatenate([self.dfuncs(c), self.dlogs(c)], axis=-1)

    @property
    def n_forms(self) -> int:
        return self.n_funcs + self.n_logs


class DiskRegion(Region):
    """Omega_k with pulled-back monomials zeta^n (n = 1..N); forms zeta^n dzeta (n = 0..N-1)."""

    def __init__(self, domain: ConformalDomain, N: int, index: int = 0, surface=None):
        self.domain = domain
        self.surface = surface
        self.N = int(N)
        self.index = index
        self.region_id = ("omega", index)
        self.basis = BasisSpec(BasisKind.DISK_MONOMIAL, self.N)

    def to_chart(self, w):
        w = np.asarray(w, dtype=complex)
        if self.surface is not None and self.surface.is_torus:
            c = self.domain.center
            w = reduce_lattice(w - c, self.surface.tau)[0] + c
        return self.domain.inverse(w)

    def from_chart(self, c):
        return self.domain.f(c)

    def chart_of_rule(self, rule):
        return rule.zeta

    def sample_point(self):
        return 0.1 + 0.1j

    def funcs(self, c):
        c = np.asarray(c, dtype=complex)
        return c[..., None] ** np.arange(1, self.N + 1)

    def dfuncs(self, c):
        c = np.asarray(c, dtype=complex)
        n = np.arange(1, self.N + 1)
        return n * c[..., None] ** (n - 1) / self.domain.df(c)[..., None]

    def form_cols(self, c):
        c = np.asarray(c, dtype=complex)
        return c[..., None] ** np.arange(self.N) / self.domain.df(c)[..., None]

    @property
    def n_funcs(self):
        return self.N

    @property
    def n_logs(self):
        return 0

    @property
    def n_forms(self):
        return self.N

    def form_norms_sq(self):
        """Exact norms of zeta^n dzeta (conformal invariance of the pairing)."""
        return np.pi / (np.arange(self.N) + 1.0)


class SigmaRegion(Region):
    """Complement Sigma of the closed domains.

    Sphere: ((w - c_k)/rho_k)^-m, m = 1..N, with log-differences log|w-c_1| - log|w-c_k|.
    Torus: rho_k^m Z_m(w - c_k) for m = 2..N+1, rho_1 (psi(w-c_k) - psi(w-c_1)) for k >= 2,
    Green's functions g(w; c_k, c_1) for k >= 2, and two dipoles at c_1.
    """

    def __init__(self, cfg: SurfaceConfig, N: int):
        self.cfg = cfg
        self.N = int(N)
        self.S = cfg.surface
        self.region_id = ("sigma",)
        kind = BasisKind.TORUS_RATIONAL if self.S.is_torus else BasisKind.LAURENT
        self.basis = BasisSpec(kind, self.N)
        self.centers = np.array([d.center for d in cfg.domains])
        self.scales = np.array([d.scale for d in cfg.domains])

    def sample_point(self):
        return self.cfg.q

    def funcs(self, w):
        w = np.asarray(w, dtype=complex)
        cols = []
        if not self.S.is_torus:
            for c, r in zip(self.centers, self.scales):
                u = (w - c) / r
                cols.append(u[..., None] ** (-np.arange(1, self.N + 1)))
            return np.concatenate(cols, axis=-1)
        for c, r in zip(self.centers, self.scales):
            cols.append(np.stack([r**m * pole_function(self.S, w - c, m)
                                  for m in range(2, self.N + 2)], axis=-1))
        r1 = self.scales[0]
        if len(self.centers) > 1:
            psi1 = pole_function(self.S, w - self.centers[0], 1)
            cols.append(np.stack([r1 * (pole_function(self.S, w - c, 1) - psi1)
                                  for c in self.centers[1:]], axis=-1))
        return np.concatenate(cols, axis=-1)

    def dfuncs(self, w):
        w = np.asarray(w, dtype=complex)
        cols = []
        if not self.S.is_torus:
            for c, r in zip(self.centers, self.scales):
                u = (w - c) / r
                m = np.arange(1, self.N + 1)
                cols.append(-m / r * u[..., None] ** (-m - 1))
            return np.concatenate(cols, axis=-1)
        for c, r in zip(self.centers, self.scales):
            cols.append(np.stack([-m * r**m * pole_function(self.S, w - c, m + 1)
                                  for m in range(2, self.N + 2)], axis=-1))
        r1 = self.scales[0]
        if len(self.centers) > 1:
            z1 = pole_function(self.S, w - self.centers[0], 2)
            cols.append(np.stack([-r1 * (pole_function(self.S, w - c, 2) - z1)
                                  for c in self.centers[1:]], axis=-1))
        return np.concatenate(cols, axis=-1)

    def logs(self, w):
        w = np.asarray(w, dtype=complex)
        c1 = self.centers[0]
        cols = [green_values(self.S, w, c, c1) for c in self.centers[1:]]
        if self.S.is_torus:
            r1 = self.scales[0]
            psi = pole_function(self.S, w - c1, 1)
            cols.append(r1 * psi.real)
            cols.append(r1 * (psi.imag + 2 * np.pi / self.S.tau.imag * (w - c1).imag))
        if not cols:
            return np.zeros(w.shape + (0,))
        return np.stack(cols, axis=-1)

    def dlogs(self, w):
        w = np.asarray(w, dtype=complex)
        c1 = self.centers[0]
        cols = [dgreen_dw(self.S, w, c, c1) for c in self.centers[1:]]
        if self.S.is_torus:
            r1 = self.scales[0]
            z2 = pole_function(self.S, w - c1, 2)
            cols.append(-0.5 * r1 * z2)
            cols.append(r1 * (0.5j * z2 - 1j * np.pi / self.S.tau.imag))
        if not cols:
            return np.zeros(w.shape + (0,), dtype=complex)
        return np.stack(cols, axis=-1)

    @property
    def n_funcs(self):
        n = len(self.centers)
        return n * self.N + (n - 1 if self.S.is_torus else 0)

    @property
    def n_logs(self):
        n = len(self.centers)
        return n - 1 + (2 if self.S.is_torus else 0)

    def boundary_rules(self, M: int = 256):
        """Contour rules on each Gamma_k, oriented positively with respect to Sigma."""
        rules = []
        for dom in self.cfg.domains:
            lc = level_curve(dom, 0.0, M)
            rules.append(QuadratureRule(lc.samples, np.full(M, 2 * np.pi / M), QuadKind.CONTOUR,
                                        zeta=lc.zeta, dwdt=-lc.dwdt))
        return rules

    def collar_points(self, radii=(1.2, 1.45), M: int = 128):
        pts = []
        t = np.exp(2j * np.pi * np.arange(M) / M)
        for dom in self.cfg.domains:
            for R in radii:
                pts.append(dom.f(R * t))
        return np.concatenate(pts)


class AnnulusRegion(Region):
    """Concentric annulus r_in < |w - c| < r_out with Laurent functions and log|w - c|."""

    def __init__(self, r_in: float, r_out: float, N: int, center: complex = 0j, tag: str = "annulus"):
        self.r_in, self.r_out, self.N, self.center = float(r_in), float(r_out), int(N), complex(center)
        self.region_id = (tag, self.r_in, self.r_out)
        self.basis = BasisSpec(BasisKind.LAURENT, self.N)
        self._s = np.sqrt(self.r_in * self.r_out)

    def sample_point(self):
        return self.center + self._s

    def contains(self, w):
        d = np.abs(np.asarray(w) - self.center)
        return (d > self.r_in) & (d < self.r_out)

    def _powers(self):
        n = np.arange(1, self.N + 1)
        return np.concatenate([n, -n])

    def funcs(self, w):
        u = (np.asarray(w, dtype=complex) - self.center) / self._s
        return u[..., None] ** self._powers()

    def dfuncs(self, w):
        u = (np.asarray(w, dtype=complex) - self.center) / self._s
        p = self._powers()
        return p / self._s * u[..., None] ** (p - 1)

    def logs(self, w):
        return np.log(np.abs(np.asarray(w, dtype=complex) - self.center) / self._s)[..., None]

    def dlogs(self, w):
        return (0.5 / (np.asarray(w, dtype=complex) - self.center))[..., None]

    @property
    def n_funcs(self):
        return 2 * self.N

    @property
    def n_logs(self):
        return 1

    def quadrature(self, n_r: int = 40, n_t: int = 256):
        return annulus_quadrature(self.r_in, self.r_out, n_r, n_t, self.center)


class DiskChartRegion(Region):
    """Round disk |w - c| < r with monomials ((w - c)/r)^n, n = 1..N."""

    def __init__(self, radius: float, N: int, center: complex = 0j, tag: str = "disk"):
        self.r_in, self.r_out, self.N, self.center = 0.0, float(radius), int(N), complex(center)
        self.region_id = (tag, self.r_out)
        self.basis = BasisSpec(BasisKind.DISK_MONOMIAL, self.N)

    def sample_point(self):
        return self.center + 0.1 * self.r_out

    def contains(self, w):
        return np.abs(np.asarray(w) - self.center) < self.r_out

    def funcs(self, w):
        u = (np.asarray(w, dtype=complex) - self.center) / self.r_out
        return u[..., None] ** np.arange(1, self.N + 1)

    def dfuncs(self, w):
        u = (np.asarray(w, dtype=complex) - self.center) / self.r_out
        n = np.arange(1, self.N + 1)
        return n / self.r_out * u[..., None] ** (n - 1)

    @property
    def n_funcs(self):
        return self.N

    @property
    def n_logs(self):
        return 0

    def quadrature(self, n_r: int = 40, n_t: int = 256):
        return annulus_quadrature(0.0, self.r_out, n_r, n_t, self.center)


@dataclass(frozen=True)
class HarmonicExpansion:
    """h = sum a_j F_j + sum b_j conj(F_j) + sum d_k L_k + constant."""
    region: Region
    holo_coeffs: np.ndarray
    antiholo_coeffs: np.ndarray
    constant: complex = 0j
    log_coeffs: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.holo_coeffs, dtype=complex)
        b = np.asarray(self.antiholo_coeffs, dtype=complex)
        d = np.zeros(self.region.n_logs, dtype=complex) if self.log_coeffs is None \
            else np.asarray(self.log_coeffs, dtype=complex)
        object.__setattr__(self, "holo_coeffs", a)
        object.__setattr__(self, "antiholo_coeffs", b)
        object.__setattr__(self, "log_coeffs", d)
        object.__setattr__(self, "constant", complex(self.constant))

    @property
    def domain_id(self):
        return self.region.region_id

    def at_chart(self, c):
        c = np.asarray(c, dtype=complex)
        F = self.region.funcs(c)
        out = F @ self.holo_coeffs + np.conj(F) @ self.antiholo_coeffs + self.constant
        if self.log_coeffs.size:
            out = out + self.region.logs(c) @ self.log_coeffs
        return out

    def __call__(self, w):
        return self.at_chart(self.region.to_chart(w))

    def holomorphic_part(self) -> "HarmonicExpansion":
        return replace(self, antiholo_coeffs=np.zeros_like(self.antiholo_coeffs),
                       log_coeffs=np.zeros_like(self.log_coeffs))

    def antiholomorphic_part(self) -> "HarmonicExpansion":
        return replace(self, holo_coeffs=np.zeros_like(self.holo_coeffs), constant=0j,
                       log_coeffs=np.zeros_like(self.log_coeffs))

    def __add__(self, other: "HarmonicExpansion"):
        if other.region.region_id != self.region.region_id:
            raise DomainMismatch("expansions live on different regions")
        return HarmonicExpansion(self.region, self.holo_coeffs + other.holo_coeffs,
                                 self.antiholo_coeffs + other.antiholo_coeffs,
                                 self.constant + other.constant, self.log_coeffs + other.log_coeffs)

    def scale(self, s: complex) -> "HarmonicExpansion":
        return HarmonicExpansion(self.region, s * self.holo_coeffs, s * self.antiholo_coeffs,
                                 s * self.constant, s * self.log_coeffs)

    def shift(self, c: complex) -> "HarmonicExpansion":
        return replace(self, constant=self.constant + c)


@dataclass(frozen=True)
class FormExpansion:
    region: Region
    chirality: Chirality
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "chirality", Chirality(self.chirality))

    @property
    def domain_id(self):
        return self.region.region_id

    @property
    def basis(self):
        return self.region.basis

    def at_chart(self, c):
        """dw (holomorphic) or dwbar (antiholomorphic) coefficient at chart points."""
        cols = self.region.form_cols(c)
        if self.chirality is Chirality.ANTIHOLO:
            cols = np.conj(cols)
        return cols @ self.coeffs

    def __call__(self, w):
        return self.at_chart(self.region.to_chart(w))

    def __add__(self, other):
        if other.domain_id != self.domain_id or other.chirality != self.chirality:
            raise DomainMismatch("incompatible forms")
        return FormExpansion(self.region, self.chirality, self.coeffs + other.coeffs)

    def scale(self, s):
        return FormExpansion(self.region, self.chirality, s * self.coeffs)


def default_rule(region: Region, n_r: int = 32, n_t: int = 256) -> QuadratureRule:
    if isinstance(region, DiskRegion):
        return area_quadrature(region.domain, n_r, n_t)
    if isinstance(region, (AnnulusRegion, DiskChartRegion)):
        return region.quadrature(n_r, n_t)
    if isinstance(region, SigmaRegion):
        return region.boundary_rules(n_t)
    raise DomainMismatch("no default quadrature for this region")


def _stokes_pair(h1: HarmonicExpansion, u2, v2, rules):
    """(dh1, dh2) over Sigma from boundary values; u2, v2 give the dw / dwbar coefficients of dh2."""
    total = 0j
    for rule in rules:
        w = rule.nodes
        h = h1(w)
        dw = rule.dwdt * rule.weights
        total += np.sum(0.5j * h * np.conj(u2(w)) * np.conj(dw) - 0.5j * h * np.conj(v2(w)) * dw)
    return total


def inner_product_forms(a: FormExpansion, b: FormExpansion, quad=None) -> complex:
    """(a, b) = 1/2 iint a ^ *conj(b)."""
    if a.domain_id != b.domain_id:
        raise DomainMismatch("forms on different regions")
    if a.chirality != b.chirality:
        return 0j
    quad = default_rule(a.region) if quad is None else quad
    if isinstance(quad, list):
        # Sigma: Stokes with the primitive of a
        H = primitive(a)
        if a.chirality is Chirality.HOLO:
            return _stokes_pair(H, b, lambda w: np.zeros_like(w), quad)
        return _stokes_pair(H, lambda w: np.zeros_like(w), b, quad)
    c = a.region.chart_of_rule(quad)
    return np.sum(a.at_chart(c) * np.conj(b.at_chart(c)) * quad.weights)


def form_norm(a: FormExpansion, quad=None) -> float:
    return float(np.sqrt(max(inner_product_forms(a, a, quad).real, 0.0)))


def primitive(a: FormExpansion) -> HarmonicExpansion:
    """Single-valued primitive of an exact form (constant left at zero)."""
    reg = a.region
    J = reg.n_funcs
    if isinstance(reg, DiskRegion):
        coef = a.coeffs / np.arange(1, reg.N + 1)
    else:
        if np.any(np.abs(a.coeffs[J:]) > 1e-12 * max(1.0, np.max(np.abs(a.coeffs)))):
            raise NotExact("form has a non-exact component")
        coef = a.coeffs[:J]
    zero = np.zeros(J, dtype=complex)
    if a.chirality is Chirality.HOLO:
        return HarmonicExpansion(reg, coef, zero)
    return HarmonicExpansion(reg, zero, coef)


def gram(region: Region, chirality: Chirality = Chirality.HOLO, quad=None) -> np.ndarray:
    """G_ij = (e_i, e_j) for the form basis of the region."""
    quad = default_rule(region) if quad is None else quad
    n = region.n_forms
    if isinstance(quad, list):
        # Sigma, exact forms only: (dF_i, dF_j) = (i/2) sum oint F_i conj(F_j') conj(dw)
        J = region.n_funcs
        G = np.zeros((J, J), dtype=complex)
        for rule in quad:
            F = region.funcs(rule.nodes)
            dF = region.dfuncs(rule.nodes)
            dw = rule.dwdt * rule.weights
            G += 0.5j * (F * np.conj(dw)[:, None]).T @ np.conj(dF)
        G = 0.5 * (G + G.conj().T)
        return G if chirality is Chirality.HOLO else np.conj(G)
    c = region.chart_of_rule(quad)
    cols = region.form_cols(c)
    G = (cols * quad.weights[:, None]).T @ np.conj(cols)
    G = 0.5 * (G + G.conj().T)
    return G[:n, :n] if chirality is Chirality.HOLO else np.conj(G[:n, :n])


def dirichlet_inner(h1: HarmonicExpansion, h2: HarmonicExpansion, quad=None) -> complex:
    if h1.domain_id != h2.domain_id:
        raise DomainMismatch("functions on different regions")
    d1, db1 = split_harmonic(h1)
    d2, db2 = split_harmonic(h2)
    quad = default_rule(h1.region) if quad is None else quad
    if isinstance(quad, list):
        return _stokes_pair(h1, d2, db2, quad)
    return inner_product_forms(d1, d2, quad) + inner_product_forms(db1, db2, quad)


def dirichlet_norm(h: HarmonicExpansion, quad=None) -> float:
    return float(np.sqrt(max(dirichlet_inner(h, h, quad).real, 0.0)))


def split_harmonic(h: HarmonicExpansion) -> tuple[FormExpansion, FormExpansion]:
    """(d h, dbar h) as form expansions."""
    reg = h.region
    if isinstance(reg, DiskRegion):
        n = np.arange(1, reg.N + 1)
        return (FormExpansion(reg, Chirality.HOLO, n * h.holo_coeffs),
                FormExpansion(reg, Chirality.ANTIHOLO, n * h.antiholo_coeffs))
    return (FormExpansion(reg, Chirality.HOLO, np.concatenate([h.holo_coeffs, h.log_coeffs])),
            FormExpansion(reg, Chirality.ANTIHOLO, np.concatenate([h.antiholo_coeffs, h.log_coeffs])))


# ---------------------------------------------------------------- per-configuration spaces

def domain_regions(cfg: SurfaceConfig, N: int) -> list[DiskRegion]:
    return [DiskRegion(d, N, k, cfg.surface) for k, d in enumerate(cfg.domains)]


def _check_tuple(cfg, items):
    if len(items) != cfg.n:
        raise DomainMismatch("expected one expansion per domain")
    for k, it in enumerate(items):
        if it.domain_id != ("omega", k):
            raise DomainMismatch(f"item {k} is not on domain {k}")


def v_defect(cfg: SurfaceConfig, abar, n_r: int = 32, n_t: int = 256) -> np.ndarray:
    """sum_k iint_{Omega_k} beta ^ alpha_bar_k for the compact basis beta (dz on the torus)."""
    _check_tuple(cfg, abar)
    if not cfg.surface.is_torus:
        return np.zeros(0, dtype=complex)
    total = 0j
    for a in abar:
        if a.chirality is not Chirality.ANTIHOLO:
            raise DomainMismatch("v_defect takes antiholomorphic forms")
        rule = area_quadrature(a.region.domain, n_r, n_t)
        # dz ^ (u dwbar) = -2i u dA
        total += -2j * np.sum(a.at_chart(rule.zeta) * rule.weights)
    return np.array([total])


def w_defect(cfg: SurfaceConfig, h, route: str = "area", M: int = 256) -> np.ndarray:
    """v_defect of (dbar h_k); the contour route uses -sum_k oint_{Gamma_k} h_k dz (Stokes)."""
    _check_tuple(cfg, h)
    if not cfg.surface.is_torus:
        return np.zeros(0, dtype=complex)
    if route == "area":
        return v_defect(cfg, [split_harmonic(hk)[1] for hk in h])
    total = 0j
    for hk in h:
        lc = level_curve(hk.region.domain, 0.0, M)
        total += -np.sum(hk.at_chart(lc.zeta) * lc.dwdt) * (2 * np.pi / M)
    return np.array([total])


def restricted_conj_dz(cfg: SurfaceConfig, regions) -> list[FormExpansion]:
    """conj(dz) restricted to each Omega_k: dzbar = conj(f'(zeta)) dzetabar."""
    out = []
    for reg in regions:
        c = np.zeros(reg.N, dtype=complex)
        coeffs = reg.domain.coeffs
        for j in range(1, len(coeffs)):
            if j - 1 >= reg.N:
                raise DegenerateGram("truncation too small to hold conj(dz)")
            c[j - 1] = np.conj(j * coeffs[j])
        out.append(FormExpansion(reg, Chirality.ANTIHOLO, c))
    return out


def project_V(cfg: SurfaceConfig, abar):
    """Orthogonal projection of an antiholomorphic tuple onto V."""
    _check_tuple(cfg, abar)
    if not cfg.surface.is_torus:
        return list(abar)
    gam = restricted_conj_dz(cfg, [a.region for a in abar])
    num = sum(inner_product_forms(a, g) for a, g in zip(abar, gam))
    den = sum(inner_product_forms(g, g) for g in gam).real
    if den <= 0:
        raise DegenerateGram("conj(dz) restricts to zero")
    return [a + g.scale(-num / den) for a, g in zip(abar, gam)]


def random_harmonic(region: Region, rng: np.random.Generator, decay: float = 0.6,
                    holo: bool = True, antiholo: bool = True, logs: bool = False) -> HarmonicExpansion:
    J = region.n_funcs
    if isinstance(region, SigmaRegion):
        per = region.N
        m = np.concatenate([np.arange(1, per + 1)] * len(region.centers)
                           + ([np.ones(J - per * len(region.centers))] if J > per * len(region.centers) else []))
    else:
        m = np.arange(1, J + 1) if not isinstance(region, AnnulusRegion) else \
            np.concatenate([np.arange(1, region.N + 1)] * 2)
    w = decay ** (m - 1)
    z = lambda: (rng.standard_normal(J) + 1j * rng.standard_normal(J)) * w
    a = z() if holo else np.zeros(J, dtype=complex)
    b = z() if antiholo else np.zeros(J, dtype=complex)
    d = (rng.standard_normal(region.n_logs) + 1j * rng.standard_normal(region.n_logs)) if logs \
        else np.zeros(region.n_logs, dtype=complex)
    c = complex(rng.standard_normal(), rng.standard_normal())
    return HarmonicExpansion(region, a, b, c, d)


def random_antiholo_forms(regions, rng: np.random.Generator, decay: float = 0.6, n_modes: int | None = None):
    out = []
    for reg in regions:
        N = reg.N if n_modes is None else min(n_modes, reg.N)
        c = np.zeros(reg.N, dtype=complex)
        c[:N] = (rng.standard_normal(N) + 1j * rng.standard_normal(N)) * decay ** np.arange(N)
        out.append(FormExpansion(reg, Chirality.ANTIHOLO, c))
    return out
