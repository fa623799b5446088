"""Schiffer comparison operators T and S, restriction, adjoint checks and finite sections.

T acts on antiholomorphic tuples alpha_bar = (a_k dwbar) on the domains:

    T alpha_bar (z) = -2i * SIGN * sum_k iint_{Omega_k} lam(z, w) a_k(w) dA(w)   (dz coefficient)

where lam is the sign-free kernel of ``surface_models.schiffer_coefficient``.  On the target's
own domain the integral is a principal value; it is evaluated through the jump operator,
T(Omega_j, Omega_j) dbar H = -d J_q(Gamma_j) H for the antiholomorphic primitive H.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import SurfaceConfig, area_quadrature, in_domain, separation
from .errors import DegenerateGram, DomainMismatch, NestingViolation, QuadratureOverflow, TargetMembership
from .jump import dJ
from .spaces import (AnnulusRegion, BasisSpec, Chirality, DiskChartRegion, DiskRegion, FormExpansion,
                     Region, SigmaRegion, domain_regions, gram, primitive)
from .surface_models import (SCHIFFER_SIGN, bergman_kernel_compact, compact_holomorphic_basis,
                             schiffer_coefficient)

OVERFLOW_CELLS = 5


@dataclass(frozen=True)
class QuadSettings:
    n_r: int = 48
    n_t: int = 256
    M: int = 256


def _cell_width(dom, n_t):
    t = np.exp(2j * np.pi * np.arange(n_t) / n_t)
    return float(np.max(np.abs(dom.df(t)))) * 2 * np.pi / n_t


def _membership(cfg, z, target):
    inside = np.zeros((cfg.n, len(z)), dtype=bool)
    for k in range(cfg.n):
        inside[k] = in_domain(cfg, z, k)
    if target == "sigma":
        ok = ~inside.any(axis=0)
    else:
        ok = inside[target]
    if not np.all(ok):
        raise TargetMembership(f"point not in target region {target!r}")


def _area_term(cfg, abar_k, z, n_r, n_t, sign):
    dom = abar_k.region.domain
    rule = area_quadrature(dom, n_r, n_t)
    a = abar_k.at_chart(rule.zeta) * rule.weights
    lam = schiffer_coefficient(cfg.surface, z[:, None], rule.nodes[None, :])
    return -2j * sign * (lam @ a)


def _self_term(cfg, abar_j, j, z, M, sign):
    H = primitive(abar_j)
    items = [None] * cfg.n
    items[j] = H
    return -sign * dJ(cfg, items, z, M)


def apply_T(cfg: SurfaceConfig, abar, target, z, quad: QuadSettings = QuadSettings(),
            sign: int = SCHIFFER_SIGN, check: bool = True):
    """dz coefficient of T(O, target) alpha_bar at points z; target is "sigma" or a domain index."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if len(abar) != cfg.n:
        raise DomainMismatch("expected one form per domain")
    if check:
        _membership(cfg, z, target)
        for k, a in enumerate(abar):
            if a is None or target == k:
                continue
            if np.min(separation(cfg, z, k)) < OVERFLOW_CELLS * _cell_width(cfg.domains[k], quad.n_t):
                raise QuadratureOverflow(f"point too close to Gamma_{k} for the area rule")
    out = np.zeros(z.shape, dtype=complex)
    for k, a in enumerate(abar):
        if a is None:
            continue
        if a.chirality is not Chirality.ANTIHOLO:
            raise DomainMismatch("T acts on antiholomorphic forms")
        if target == k:
            out += _self_term(cfg, a, k, z, quad.M, sign)
        else:
            out += _area_term(cfg, a, z, quad.n_r, quad.n_t, sign)
    return out


def apply_T_contour(cfg: SurfaceConfig, abar, z, M: int = 256, sign: int = SCHIFFER_SIGN):
    """T alpha_bar at z off the curves via -SIGN * sum_k oint lam(z, w) H_k(w) dw (Stokes route)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return -sign * dJ(cfg, [None if a is None else primitive(a) for a in abar], z, M)


def T_on_domain(cfg: SurfaceConfig, abar, j: int, N_out: int, r: float = 0.5, M_fft: int = 128,
                quad: QuadSettings = QuadSettings(), sign: int = SCHIFFER_SIGN) -> FormExpansion:
    """T(O, Omega_j) alpha_bar as a holomorphic expansion sum b_n zeta^n dzeta on Omega_j."""
    dom = cfg.domains[j]
    zeta = r * np.exp(2j * np.pi * np.arange(M_fft) / M_fft)
    vals = apply_T(cfg, abar, j, dom.f(zeta), quad, sign, check=False) * dom.df(zeta)
    c = np.fft.fft(vals) / M_fft
    b = c[:N_out] / r ** np.arange(N_out)
    return FormExpansion(DiskRegion(dom, N_out, j, cfg.surface), Chirality.HOLO, b)


def T_matrix(cfg: SurfaceConfig, N: int, z, quad: QuadSettings = QuadSettings(),
             sign: int = SCHIFFER_SIGN, skip=()):
    """Matrix taking stacked antiholomorphic coefficients (domain-major, N per domain) to the
    dz coefficient of T at points z, by area quadrature.  Domains in ``skip`` get zero columns."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    blocks = []
    for k, reg in enumerate(domain_regions(cfg, N)):
        if k in skip:
            blocks.append(np.zeros((len(z), N), dtype=complex))
            continue
        rule = area_quadrature(reg.domain, quad.n_r, quad.n_t)
        cols = np.conj(reg.form_cols(rule.zeta)) * rule.weights[:, None]
        lam = schiffer_coefficient(cfg.surface, z[:, None], rule.nodes[None, :])
        blocks.append(-2j * sign * (lam @ cols))
    return np.hstack(blocks)


def stack(abar) -> np.ndarray:
    return np.concatenate([a.coeffs for a in abar])


SIGMA_FIT_RADII = (1.6, 2.0)
SIGMA_FIT_QUAD = QuadSettings(n_r=32, n_t=128)


def sigma_fit_points(cfg: SurfaceConfig, radii=SIGMA_FIT_RADII, M: int = 64):
    t = np.exp(2j * np.pi * np.arange(M) / M)
    return np.concatenate([dom.f(R * t) for dom in cfg.domains for R in radii])


def T_on_sigma_many(cfg: SurfaceConfig, N: int, coeffs: np.ndarray, N_sigma: int,
                    quad: QuadSettings = SIGMA_FIT_QUAD, sign: int = SCHIFFER_SIGN,
                    exact_only: bool = False):
    """Fit T(O, Sigma) of several stacked coefficient columns in the Sigma form basis.
    Returns (Sigma region, coefficient matrix, max relative residual)."""
    reg = SigmaRegion(cfg, N_sigma)
    pts = sigma_fit_points(cfg)
    vals = T_matrix(cfg, N, pts, quad, sign) @ np.asarray(coeffs).reshape(n_rows(cfg, N), -1)
    A = reg.form_cols(pts)
    if exact_only:
        A = A[:, :reg.n_funcs]
    sol, *_ = np.linalg.lstsq(A, vals, rcond=None)
    res = float(np.max(np.abs(A @ sol - vals)) / max(1e-300, np.max(np.abs(vals))))
    if exact_only:
        sol = np.vstack([sol, np.zeros((reg.n_logs, sol.shape[1]), dtype=complex)])
    return reg, sol, res


def n_rows(cfg, N):
    return cfg.n * N


def T_on_sigma(cfg: SurfaceConfig, abar, N_sigma: int, quad: QuadSettings = SIGMA_FIT_QUAD,
               sign: int = SCHIFFER_SIGN, exact_only: bool = False):
    """T(O, Sigma) alpha_bar fitted in the Sigma form basis from samples away from the curves;
    returns (form, relative residual)."""
    N = abar[0].region.N
    reg, sol, res = T_on_sigma_many(cfg, N, stack(abar)[:, None], N_sigma, quad, sign, exact_only)
    return FormExpansion(reg, Chirality.HOLO, sol[:, 0]), res


def apply_S_compact(cfg: SurfaceConfig, alpha, n_r: int = 32, n_t: int = 256) -> np.ndarray:
    """Coefficients of S(O, R) alpha over the compact basis (dz on the torus, empty on the sphere)."""
    basis = compact_holomorphic_basis(cfg.surface)
    if not basis:
        return np.zeros(0, dtype=complex)
    kappa = complex(bergman_kernel_compact(cfg.surface, 0j, 0j))
    total = 0j
    for a in alpha:
        if a is None:
            continue
        if a.chirality is not Chirality.HOLO:
            raise DomainMismatch("S acts on holomorphic forms")
        rule = area_quadrature(a.region.domain, n_r, n_t)
        total += np.sum(a.at_chart(rule.zeta) * rule.weights)
    # K_R wedge alpha = kappa dz dwbar ^ a dw = 2i kappa a dA
    return np.array([2j * kappa * total])


def apply_Sbar_compact(cfg: SurfaceConfig, abar, n_r: int = 32, n_t: int = 256) -> np.ndarray:
    """dzbar coefficient of conj(S(O, R) conj(alpha_bar))."""
    if not cfg.surface.is_torus:
        return np.zeros(0, dtype=complex)
    conj = [None if a is None else FormExpansion(a.region, Chirality.HOLO, np.conj(a.coeffs)) for a in abar]
    return np.conj(apply_S_compact(cfg, conj, n_r, n_t))


# ---------------------------------------------------------------- open regions

def _laurent_norms(reg: AnnulusRegion, powers):
    """||u^p du||^2 over the annulus in the scaled variable u = (w - c)/s, times s^2 (dA of w)."""
    a, b = reg.r_in / reg._s, reg.r_out / reg._s
    out = np.empty(len(powers))
    for i, p in enumerate(powers):
        out[i] = 2 * np.pi * np.log(b / a) if p == -1 else np.pi * (b ** (2 * p + 2) - a ** (2 * p + 2)) / (p + 1)
    return out


def bergman_kernel_open(region: Region, z, w, truncation: int | None = None):
    """dA-normalized Bergman kernel K(z, w): alpha(z) = iint K(z, w) a(w) dA(w)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if isinstance(region, DiskRegion):
        dom = region.domain
        zt, wt = dom.inverse(z), dom.inverse(w)
        return 1.0 / (dom.df(zt) * np.conj(dom.df(wt)) * np.pi * (1 - zt * np.conj(wt)) ** 2)
    if isinstance(region, DiskChartRegion):
        R = region.r_out
        u, v = (z - region.center) / R, (w - region.center) / R
        return 1.0 / (np.pi * R**2 * (1 - u * np.conj(v)) ** 2)
    if isinstance(region, AnnulusRegion):
        N = region.N if truncation is None else truncation
        p = np.arange(-N - 1, N)
        nrm = _laurent_norms(region, p)
        s = region._s
        u = (z - region.center) / s
        v = (w - region.center) / s
        terms = (u[..., None] ** p) * (np.conj(v)[..., None] ** p) / nrm
        return np.sum(terms, axis=-1) / s**2
    raise DomainMismatch("no Bergman kernel model for this region")


def _check_nesting(inner: Region, outer: Region):
    for r in (inner, outer):
        if not isinstance(r, (AnnulusRegion, DiskChartRegion)):
            raise NestingViolation("nesting is only validated for concentric chart regions")
    if abs(inner.center - outer.center) > 1e-14:
        raise NestingViolation("regions are not concentric")
    if inner.r_in < outer.r_in or inner.r_out > outer.r_out:
        raise NestingViolation(f"{inner.region_id} is not contained in {outer.region_id}")


def apply_S_open(inner: Region, outer: Region, alpha: FormExpansion, z, n_r: int = 48, n_t: int = 256):
    """S(Sigma, Sigma') alpha at z in Sigma': integrate K_{Sigma'}(z, .) a over Sigma only."""
    _check_nesting(inner, outer)
    if alpha.region.region_id != inner.region_id:
        raise DomainMismatch("alpha does not live on the inner region")
    rule = inner.quadrature(n_r, n_t)
    a = alpha(rule.nodes) * rule.weights
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if isinstance(outer, AnnulusRegion):
        # separable series: sum_p u^p (sum_w conj(v)^p a_w) / norm_p
        p = np.arange(-outer.N - 1, outer.N)
        nrm = _laurent_norms(outer, p)
        v = (rule.nodes - outer.center) / outer._s
        mom = (np.conj(v)[:, None] ** p).T @ a
        u = (z - outer.center) / outer._s
        return (u[:, None] ** p) @ (mom / nrm) / outer._s**2
    if isinstance(outer, DiskChartRegion):
        # 1/(1 - u conj(v))^2 = sum_n (n+1) (u conj(v))^n, with |v| bounded by the inner radius
        R = outer.r_out
        v = (rule.nodes - outer.center) / R
        rho = float(np.max(np.abs(v)))
        P = int(min(4000, np.ceil(np.log(1e-18) / np.log(max(rho, 1e-3))) + 20))
        mom = np.empty(P, dtype=complex)
        cv = np.conj(v)
        term = a.astype(complex)
        for k in range(P):
            mom[k] = term.sum()
            term = term * cv
        u = (z - outer.center) / R
        acc = np.zeros(z.shape, dtype=complex)
        for k in range(P - 1, -1, -1):
            acc = acc * u + (k + 1) * mom[k]
        return acc / (np.pi * R**2)
    out = np.empty(z.shape, dtype=complex)
    for i in range(0, len(z), 512):
        out[i:i + 512] = bergman_kernel_open(outer, z[i:i + 512, None], rule.nodes[None, :]) @ a
    return out


def restriction(inner: Region, outer: Region, beta: FormExpansion, n_r: int = 48, n_t: int = 256):
    """R(Sigma', Sigma) beta re-expanded in the inner basis by Gram least squares; returns (form, residual)."""
    _check_nesting(inner, outer)
    rule = inner.quadrature(n_r, n_t)
    cols = inner.form_cols(rule.nodes)
    vals = beta(rule.nodes)
    G = (cols * rule.weights[:, None]).T @ np.conj(cols)
    rhs = (vals * rule.weights) @ np.conj(cols)
    c = np.linalg.solve(G.T, rhs)
    res = float(np.sqrt(np.sum(np.abs(cols @ c - vals) ** 2 * rule.weights)))
    return FormExpansion(inner, Chirality.HOLO, c), res


def adjoint_check(inner: Region, outer: Region, alpha: FormExpansion, beta: FormExpansion,
                  n_r: int = 48, n_t: int = 256) -> float:
    """|<S alpha, beta>_{Sigma'} - <alpha, R beta>_Sigma| / (||alpha|| ||beta||)."""
    ro = outer.quadrature(n_r, n_t)
    ri = inner.quadrature(n_r, n_t)
    Sa = apply_S_open(inner, outer, alpha, ro.nodes, n_r, n_t)
    lhs = np.sum(Sa * np.conj(beta(ro.nodes)) * ro.weights)
    Rb, _ = restriction(inner, outer, beta, n_r, n_t)
    rhs = np.sum(alpha(ri.nodes) * np.conj(Rb(ri.nodes)) * ri.weights)
    na = np.sqrt(np.sum(np.abs(alpha(ri.nodes)) ** 2 * ri.weights))
    nb = np.sqrt(np.sum(np.abs(beta(ro.nodes)) ** 2 * ro.weights))
    return float(abs(lhs - rhs) / (na * nb))


# ---------------------------------------------------------------- finite sections

@dataclass(frozen=True)
class OperatorSection:
    rows_basis: BasisSpec
    cols_basis: BasisSpec
    matrix: np.ndarray
    singular_values: np.ndarray

    @classmethod
    def from_matrix(cls, rows, cols, matrix):
        sv = np.linalg.svd(matrix, compute_uv=False)
        return cls(rows, cols, matrix, np.sort(sv)[::-1])

    @property
    def condition(self) -> float:
        return float(self.singular_values[0] / self.singular_values[-1])


def _orthonormalizer(G):
    """Upper factor R with G = R^H R; coordinates c map to orthonormal coordinates R c."""
    G = 0.5 * (G + G.conj().T)
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise DegenerateGram("Gram matrix is not positive definite") from exc
    return L.conj().T


def _domain_form_norms(regions):
    return np.concatenate([np.sqrt(r.form_norms_sq()) for r in regions])


def antiholo_basis(cfg: SurfaceConfig, N: int):
    """Orthonormal antiholomorphic basis vectors of the truncated direct sum, as per-domain tuples."""
    regions = domain_regions(cfg, N)
    nrm = _domain_form_norms(regions)
    out = []
    for k, reg in enumerate(regions):
        for n in range(N):
            c = np.zeros(N, dtype=complex)
            c[n] = 1.0 / nrm[k * N + n]
            tup = [FormExpansion(r, Chirality.ANTIHOLO, np.zeros(N, dtype=complex)) for r in regions]
            tup[k] = FormExpansion(reg, Chirality.ANTIHOLO, c)
            out.append(tup)
    return regions, out


def V_basis(cfg: SurfaceConfig, N: int):
    """Orthonormal coordinates (columns) spanning V inside the truncated direct sum."""
    from .spaces import v_defect
    regions, basis = antiholo_basis(cfg, N)
    dim = len(basis)
    if not cfg.surface.is_torus:
        return regions, basis, np.eye(dim, dtype=complex)
    row = np.array([v_defect(cfg, b)[0] for b in basis])
    _, _, Vh = np.linalg.svd(row[None, :])
    Q = Vh[1:].conj().T
    return regions, basis, Q


def combine(regions, basis, coords):
    """Tuple sum_i coords_i basis_i."""
    N = regions[0].N
    coeffs = [np.zeros(N, dtype=complex) for _ in regions]
    for c, tup in zip(coords, basis):
        for k, f in enumerate(tup):
            coeffs[k] = coeffs[k] + c * f.coeffs
    return [FormExpansion(r, Chirality.ANTIHOLO, c) for r, c in zip(regions, coeffs)]


def to_coords(regions, abar):
    """Orthonormal coordinates of a tuple in the truncated direct sum."""
    nrm = _domain_form_norms(regions)
    return np.concatenate([a.coeffs for a in abar]) * nrm


def section_T_sigma(cfg: SurfaceConfig, N: int, N_sigma: int | None = None, on_V: bool = True,
                    quad: QuadSettings = QuadSettings(), sign: int = SCHIFFER_SIGN):
    """Section of T(O, Sigma) from (V or the full sum) to A(Sigma)_e in orthonormal coordinates."""
    N_sigma = N + 2 if N_sigma is None else N_sigma
    regions, basis, Q = V_basis(cfg, N)
    if not on_V:
        Q = np.eye(len(basis), dtype=complex)
    sig = SigmaRegion(cfg, N_sigma)
    R = _orthonormalizer(gram(sig, quad=sig.boundary_rules(quad.M)))
    # columns of Q are orthonormal coordinates; convert to raw coefficients
    nrm = _domain_form_norms(regions)
    _, sol, fit = T_on_sigma_many(cfg, N, Q / nrm[:, None], N_sigma, sign=sign, exact_only=True)
    mat = R @ sol[:sig.n_funcs]
    return OperatorSection.from_matrix(sig.basis, regions[0].basis, mat), fit


def section_S_open(inner: Region, outer: Region, n_r: int = 48, n_t: int = 256):
    """Section of S(Sigma, Sigma') between orthonormalized truncated bases."""
    _check_nesting(inner, outer)
    ri, ro = inner.quadrature(n_r, n_t), outer.quadrature(n_r, n_t)
    Gi, Go = gram(inner, quad=ri), gram(outer, quad=ro)
    Ri, Ro = _orthonormalizer(Gi), _orthonormalizer(Go)
    # matrix of <S e_i, e'_j>, computed from S e_i sampled on Sigma'
    n_in = inner.n_forms
    colsO = outer.form_cols(ro.nodes)
    A = np.zeros((outer.n_forms, n_in), dtype=complex)
    for i in range(n_in):
        c = np.zeros(n_in, dtype=complex)
        c[i] = 1.0
        Se = apply_S_open(inner, outer, FormExpansion(inner, Chirality.HOLO, c), ro.nodes, n_r, n_t)
        A[:, i] = (Se * ro.weights) @ np.conj(colsO)
    # coefficients of S e_i in the outer basis, then orthonormal coordinates on both sides
    coef = np.linalg.solve(Go.T, A)
    mat = Ro @ coef @ np.linalg.inv(Ri)
    return OperatorSection.from_matrix(outer.basis, inner.basis, mat)


def assemble_section(op: str, cfg=None, N: int = 8, **kw) -> OperatorSection:
    """Finite sections by tag: "T_sigma" (full sum), "T_V" (restricted to V), "S_open"."""
    if op in ("T_sigma", "T_V"):
        sec, _ = section_T_sigma(cfg, N, on_V=(op == "T_V"), **kw)
        return sec
    if op == "S_open":
        return section_S_open(kw["inner"], kw["outer"])
    raise ValueError(f"unknown operator tag {op!r}")
