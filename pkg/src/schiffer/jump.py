"""The Cauchy-type jump operator J_q(Gamma), its collar variant J', and the jump solver.

J_q h(z) = -(1/(pi i)) sum_k oint_{Gamma_k} d_w g(w; z, q) h_k(w), with the contour taken as the
limit of level curves.  For finite expansions the limit is the boundary trace itself, so the
default is s = 0; a positive s triggers the two-level settling test.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import LevelCurve, SurfaceConfig, level_curve, nearest_translate
from .errors import FitResidualExceeded, LimitNotSettled, NotInW, PointOnCurve
from .spaces import (DiskRegion, HarmonicExpansion, SigmaRegion, domain_regions, w_defect)
from .surface_models import bergman_kernel_compact, dgreen_dw, schiffer_coefficient

ON_CURVE_TOL = 1e-9
SETTLE_TOL = 1e-10


def _curves(cfg: SurfaceConfig, s: float, M: int, shift=None) -> list[LevelCurve]:
    shifts = [0j] * cfg.n if shift is None else list(shift)
    return [level_curve(dom, s, M, a) for dom, a in zip(cfg.domains, shifts)]


def _check_off(cfg, z, curves):
    for k, lc in enumerate(curves):
        zz = nearest_translate(cfg, z, k % cfg.n) if cfg.surface.is_torus else z
        d = np.min(np.abs(np.atleast_1d(zz)[:, None] - lc.samples[None, :]))
        if d < ON_CURVE_TOL:
            raise PointOnCurve(f"evaluation point lies on the contour around domain {k}")


def _values(item, lc: LevelCurve):
    """Samples of h_k on the level curve: expansions, callables of zeta, or raw arrays."""
    if item is None:
        return np.zeros(lc.M, dtype=complex)
    if isinstance(item, HarmonicExpansion):
        return item.at_chart(lc.zeta)
    if callable(item):
        return np.asarray(item(lc.zeta), dtype=complex)
    v = np.asarray(item, dtype=complex)
    return v


def _J_at(cfg, h, z, curves):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.zeros(z.shape, dtype=complex)
    for item, lc in zip(h, curves):
        if item is None:
            continue
        v = _values(item, lc) * lc.dwdt * (2 * np.pi / lc.M)
        K = dgreen_dw(cfg.surface, lc.samples[None, :], z[:, None], cfg.q)
        out += -(K @ v) / (np.pi * 1j)
    return out


def apply_J(cfg: SurfaceConfig, h, z, s: float = 0.0, M: int = 256, shift=None,
            tol: float = SETTLE_TOL):
    """J_q h at points z.  h is a per-domain tuple (entries may be None)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if s <= 0:
        curves = _curves(cfg, 0.0, M, shift)
        _check_off(cfg, z, curves)
        return _J_at(cfg, h, z, curves)
    c1, c2 = _curves(cfg, s, M, shift), _curves(cfg, s / 2, M, shift)
    _check_off(cfg, z, c1 + c2)
    v1, v2 = _J_at(cfg, h, z, c1), _J_at(cfg, h, z, c2)
    gap = float(np.max(np.abs(v1 - v2)))
    if gap > tol:
        raise LimitNotSettled(f"level-curve values differ by {gap:.3g}")
    return v2


def dJ(cfg: SurfaceConfig, h, z, M: int = 256, s: float = 0.0):
    """dz coefficient of d J_q h: sum_k oint lam(z, w) h_k(w) dw."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    curves = _curves(cfg, s, M)
    _check_off(cfg, z, curves)
    out = np.zeros(z.shape, dtype=complex)
    for item, lc in zip(h, curves):
        if item is None:
            continue
        v = _values(item, lc) * lc.dwdt * (2 * np.pi / lc.M)
        out += schiffer_coefficient(cfg.surface, z[:, None], lc.samples[None, :]) @ v
    return out


def dbarJ(cfg: SurfaceConfig, h, z, M: int = 256):
    """dzbar coefficient of dbar J_q h: -conj(kappa) sum_k oint h_k dw (constant in z)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    kappa = complex(bergman_kernel_compact(cfg.surface, 0j, 0j))
    total = 0j
    for item, lc in zip(h, _curves(cfg, 0.0, M)):
        if item is None:
            continue
        total += np.sum(_values(item, lc) * lc.dwdt) * (2 * np.pi / lc.M)
    return np.full(z.shape, -np.conj(kappa) * total)


def dJ_fd(cfg: SurfaceConfig, h, z, step: float = 1e-3, M: int = 256):
    """(d_z, d_zbar) of J_q h by fourth-order central differences (spot checks only)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))

    def diff(e):
        f = lambda d: apply_J(cfg, h, z + d * e, M=M)
        return (-f(2 * step) + 8 * f(step) - 8 * f(-step) + f(-2 * step)) / (12 * step)

    fx, fy = diff(1.0), diff(1j)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def circle_dbar(F, z, r, M: int = 32):
    """Disk average of d_zbar F over |w - z| < r, from oint F dw = 2i iint dbar F dA.
    Exact (up to rounding) for F = holomorphic + c * conj(w)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = np.broadcast_to(np.asarray(r, dtype=float), z.shape)
    t = np.exp(2j * np.pi * np.arange(M) / M)
    w = z[:, None] + r[:, None] * t[None, :]
    vals = np.asarray(F(w.ravel())).reshape(w.shape)
    integral = np.sum(vals * (1j * r[:, None] * t[None, :]), axis=1) * (2 * np.pi / M)
    return integral / (2j * np.pi * r**2)


# ---------------------------------------------------------------- collar variant

@dataclass(frozen=True)
class CollarData:
    """Laurent data u(zeta) = sum_{n=-N}^{N} a_n zeta^n (+ conj and log|zeta| parts) on a collar."""
    domain_index: int
    eps: float
    holo: np.ndarray                       # a_n for n = -N..N
    antiholo: np.ndarray | None = None     # b_n multiplying conj(zeta)^n, n = -N..N
    log_coeff: complex = 0j

    @property
    def N(self) -> int:
        return (len(self.holo) - 1) // 2

    def at_chart(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        n = np.arange(-self.N, self.N + 1)
        P = zeta[..., None] ** n
        out = P @ np.asarray(self.holo, dtype=complex)
        if self.antiholo is not None:
            out = out + np.conj(P) @ np.asarray(self.antiholo, dtype=complex)
        if self.log_coeff:
            out = out + self.log_coeff * np.log(np.abs(zeta))
        return out

    @property
    def is_holomorphic(self) -> bool:
        return (self.antiholo is None or not np.any(self.antiholo)) and not self.log_coeff


def apply_J_prime(cfg: SurfaceConfig, u, z, s: float | None = None, M: int = 256,
                  tol: float = SETTLE_TOL):
    """J' on collar data: level curves inside the collar (default s = eps/2, settled against s/2)."""
    s = 0.5 * cfg.epsilon if s is None else s
    items = [None if uk is None else uk.at_chart for uk in u]
    if s <= 0:
        return apply_J(cfg, items, z, 0.0, M)
    return apply_J(cfg, items, z, s, M, tol=tol)


def x_eps_defect(cfg: SurfaceConfig, u, s: float | None = None, M: int = 256) -> np.ndarray:
    """sum_k oint_{gamma_k} u_k dz for gamma_k the level curve at height s (torus only)."""
    if not cfg.surface.is_torus:
        return np.zeros(0, dtype=complex)
    s = 0.5 * cfg.epsilon if s is None else s
    total = 0j
    for uk, dom in zip(u, cfg.domains):
        if uk is None:
            continue
        lc = level_curve(dom, s, M)
        total += np.sum(uk.at_chart(lc.zeta) * lc.dwdt) * (2 * np.pi / M)
    return np.array([total])


# ---------------------------------------------------------------- jump solver

@dataclass(frozen=True)
class JumpSolution:
    h_k: tuple
    h_sigma: HarmonicExpansion
    residual: float
    fit_residual: float


def _fit_lstsq(A, b):
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    res = float(np.max(np.abs(A @ sol - b))) if b.size else 0.0
    return sol, res


def fit_domain_part(cfg, h, k: int, N: int, radii=(0.55, 0.75), M: int = 128):
    """Expansion of (J_q h)|_{Omega_k} in [1, zeta^n, conj(zeta)^n] by least squares on interior circles."""
    reg = DiskRegion(cfg.domains[k], N, k, cfg.surface)
    t = np.exp(2j * np.pi * np.arange(M) / M)
    zeta = np.concatenate([r * t for r in radii])
    vals = apply_J(cfg, h, cfg.domains[k].f(zeta))
    F = reg.funcs(zeta)
    A = np.hstack([np.ones((len(zeta), 1)), F, np.conj(F)])
    sol, res = _fit_lstsq(A, vals)
    return HarmonicExpansion(reg, sol[1:N + 1], sol[N + 1:], sol[0]), res


def fit_sigma_part(cfg, h, N: int, radii=(1.2, 1.45), M: int = 128):
    """Expansion of (J_q h)|_Sigma in the Sigma harmonic family by least squares on exterior circles."""
    reg = SigmaRegion(cfg, N)
    pts = reg.collar_points(radii, M)
    vals = apply_J(cfg, h, pts)
    F = reg.funcs(pts)
    L = reg.logs(pts)
    A = np.hstack([np.ones((len(pts), 1)), F, np.conj(F), L])
    J = F.shape[1]
    sol, res = _fit_lstsq(A, vals)
    out = HarmonicExpansion(reg, sol[1:J + 1], sol[J + 1:2 * J + 1], sol[0], sol[2 * J + 1:])
    return out.shift(-out(np.array([cfg.q]))[0]), res


def jump_solve(cfg: SurfaceConfig, h, N: int | None = None, N_sigma: int | None = None,
               M: int = 256, tol_w: float = 1e-10, tol_fit: float = 1e-6) -> JumpSolution:
    """Plemelj-Sokhotski decomposition H = -H_Sigma + H_k of the boundary data of h."""
    N = h[0].region.N if N is None else N
    N_sigma = N + 4 if N_sigma is None else N_sigma
    wd = w_defect(cfg, h)
    if wd.size and np.max(np.abs(wd)) > tol_w:
        raise NotInW(f"w_defect {np.max(np.abs(wd)):.3g} exceeds {tol_w:g}")
    parts, fits = [], []
    for k in range(cfg.n):
        p, r = fit_domain_part(cfg, h, k, N)
        parts.append(p)
        fits.append(r)
    hs, r = fit_sigma_part(cfg, h, N_sigma)
    fits.append(r)
    fit_res = max(fits)
    if fit_res > tol_fit:
        raise FitResidualExceeded(f"re-expansion residual {fit_res:.3g}")
    t = np.exp(2j * np.pi * np.arange(M) / M)
    res = 0.0
    for k, dom in enumerate(cfg.domains):
        H = h[k].at_chart(t)
        res = max(res, float(np.max(np.abs(H + hs(dom.f(t)) - parts[k].at_chart(t)))))
    return JumpSolution(tuple(parts), hs, res, fit_res)


def holomorphic_defect(sol: JumpSolution) -> float:
    vals = [np.max(np.abs(p.antiholo_coeffs)) if p.antiholo_coeffs.size else 0.0 for p in sol.h_k]
    vals.append(np.max(np.abs(sol.h_sigma.antiholo_coeffs)) if sol.h_sigma.antiholo_coeffs.size else 0.0)
    vals.append(np.max(np.abs(sol.h_sigma.log_coeffs)) if sol.h_sigma.log_coeffs.size else 0.0)
    return float(max(vals))


def jump_inverse_check(cfg: SurfaceConfig, u_O, u_sigma: HarmonicExpansion, N: int | None = None) -> float:
    """Assemble h = -O(Sigma, O) u_Sigma + u_O, solve, and return the distance to (u_O, u_Sigma).
    The domain truncation is widened so the trace of u_Sigma (pole orders up to N_sigma + 1) fits."""
    from .boundary_transmission import transmit_sigma_to_domain
    N = max(u_O[0].region.N if N is None else N, u_sigma.region.N + 1) + 8
    pad = lambda a: np.concatenate([a, np.zeros(N - len(a), dtype=complex)])
    big = [HarmonicExpansion(DiskRegion(cfg.domains[k], N, k, cfg.surface), pad(u.holo_coeffs),
                             pad(u.antiholo_coeffs), u.constant) for k, u in enumerate(u_O)]
    h = [b + transmit_sigma_to_domain(cfg, u_sigma, k, N).scale(-1.0) for k, b in enumerate(big)]
    sol = jump_solve(cfg, h, N, u_sigma.region.N)
    err = 0.0
    for a, b in zip(sol.h_k, big):
        err = max(err, float(np.max(np.abs(a.holo_coeffs - b.holo_coeffs))),
                  float(np.max(np.abs(a.antiholo_coeffs - b.antiholo_coeffs))),
                  abs(a.constant - b.constant))
    # compare Sigma parts by values on collar circles (bases may be sized differently)
    reg = SigmaRegion(cfg, u_sigma.region.N)
    pts = reg.collar_points((1.2, 1.45), 64)
    err = max(err, float(np.max(np.abs(sol.h_sigma(pts) - u_sigma(pts)))))
    return err


def default_regions(cfg: SurfaceConfig, N: int):
    return domain_regions(cfg, N)
