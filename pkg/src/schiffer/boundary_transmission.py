"""Boundary traces, transmission across the curves, bounce from collars, and exact-form transmission.

Traces are ordinary continuous boundary values: every expansion used here is analytic up to
the curves.  Transmission into a domain is a Fourier re-expansion of the trace in the disk
chart; transmission into Sigma is a joint least-squares Dirichlet solve over all curves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import ConformalDomain, LevelCurve, SurfaceConfig, level_curve
from .errors import IllConditionedFit, NotExact, RegionMismatch
from .jump import CollarData
from .spaces import (Chirality, DiskRegion, FormExpansion, HarmonicExpansion, SigmaRegion,
                     split_harmonic)

COND_CAP = 1e10
PERIOD_TOL = 1e-8


@dataclass(frozen=True)
class BoundaryTrace:
    curve: LevelCurve
    fourier: np.ndarray       # c_m for m = 0..M-1 in numpy FFT order, samples = sum c_m e^{i m theta}

    def mode(self, m: int) -> complex:
        return complex(self.fourier[m % len(self.fourier)])

    @property
    def samples(self):
        return np.fft.ifft(self.fourier) * len(self.fourier)

    def decay_rate(self) -> float:
        """Geometric decay rate of |c_m| estimated from the upper half of the resolved modes."""
        M = len(self.fourier)
        m = np.arange(1, M // 2)
        a = np.maximum(np.abs(self.fourier[m]), np.abs(self.fourier[-m]))
        good = a > 1e-14 * max(np.max(a), 1e-300)
        if good.sum() < 2:
            return 0.0
        slope = np.polyfit(m[good], np.log(a[good]), 1)[0]
        return float(np.exp(slope))


def _sample(h, dom: ConformalDomain, lc: LevelCurve, k: int | None):
    reg = h.region
    if isinstance(reg, DiskRegion):
        if reg.domain != dom:
            raise RegionMismatch("expansion lives on a different domain")
        return h.at_chart(lc.zeta)
    if isinstance(reg, SigmaRegion):
        if dom not in reg.cfg.domains:
            raise RegionMismatch("curve does not bound this Sigma")
        return h(lc.samples)
    raise RegionMismatch("trace needs a domain or Sigma expansion")


def trace(h: HarmonicExpansion, dom: ConformalDomain, M: int = 256) -> BoundaryTrace:
    lc = level_curve(dom, 0.0, M)
    v = _sample(h, dom, lc, None)
    return BoundaryTrace(lc, np.fft.fft(v) / M)


def _domain_from_modes(reg: DiskRegion, c: np.ndarray) -> HarmonicExpansion:
    M = len(c)
    N = reg.N
    if 2 * N + 1 > M:
        raise RegionMismatch("truncation exceeds the number of resolved modes")
    holo = c[1:N + 1]
    anti = c[M - np.arange(1, N + 1)]
    return HarmonicExpansion(reg, holo, anti, c[0])


def transmit_sigma_to_domain(cfg: SurfaceConfig, h: HarmonicExpansion, j: int, N: int,
                             M: int = 256) -> HarmonicExpansion:
    """O(Sigma, Omega_j) h: the harmonic expansion on Omega_j with the same trace on Gamma_j."""
    if not isinstance(h.region, SigmaRegion):
        raise RegionMismatch("source must be a Sigma expansion")
    dom = cfg.domains[j]
    tr = trace(h, dom, max(M, 4 * N + 4))
    return _domain_from_modes(DiskRegion(dom, N, j, cfg.surface), tr.fourier)


def transmit_domains_to_sigma(cfg: SurfaceConfig, h, N_sigma: int, oversample: int = 4,
                              M: int | None = None):
    """O(O, Sigma) (h_1..h_n): joint boundary least squares; returns (expansion, residual)."""
    reg = SigmaRegion(cfg, N_sigma)
    J, E = reg.n_funcs, reg.n_logs
    unknowns = 1 + 2 * J + E
    M = max(256, int(np.ceil(oversample * unknowns / cfg.n))) if M is None else M
    rows, rhs = [], []
    for k, dom in enumerate(cfg.domains):
        lc = level_curve(dom, 0.0, M)
        F = reg.funcs(lc.samples)
        rows.append(np.hstack([np.ones((M, 1)), F, np.conj(F), reg.logs(lc.samples)]))
        item = h[k] if k < len(h) else None
        rhs.append(np.zeros(M, dtype=complex) if item is None else _sample(item, dom, lc, k))
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    As = A / scale
    sv = np.linalg.svd(As, compute_uv=False)
    cond = sv[0] / sv[-1]
    if not np.isfinite(cond) or cond > COND_CAP:
        raise IllConditionedFit(f"boundary collocation condition number {cond:.3g}")
    sol, *_ = np.linalg.lstsq(As, b, rcond=None)
    sol = sol / scale
    res = float(np.max(np.abs(A @ sol - b))) if b.size else 0.0
    out = HarmonicExpansion(reg, sol[1:J + 1], sol[J + 1:2 * J + 1], sol[0], sol[2 * J + 1:])
    return out, res


def transmit(cfg: SurfaceConfig, source, target, h, N: int = 16, M: int = 256):
    """Dispatch: source/target are "sigma" or a domain index.  Domain sources take a tuple
    (or a single expansion when there is one domain); a Sigma target returns (expansion, residual)."""
    if source == "sigma" and target != "sigma":
        return transmit_sigma_to_domain(cfg, h, int(target), N, M)
    if target == "sigma" and source != "sigma":
        items = list(h) if isinstance(h, (list, tuple)) else [None] * cfg.n
        if not isinstance(h, (list, tuple)):
            items[int(source)] = h
        return transmit_domains_to_sigma(cfg, items, N)
    raise RegionMismatch("source and target must be on opposite sides of the curves")


def bounce(dom: ConformalDomain, collar_h: CollarData, N: int | None = None, index: int = 0,
           M: int = 256, surface=None) -> HarmonicExpansion:
    """G(Omega_eps, Omega): the expansion on Omega_k with the trace of the collar data on |zeta| = 1."""
    N = collar_h.N if N is None else N
    t = np.exp(2j * np.pi * np.arange(M) / M)
    c = np.fft.fft(collar_h.at_chart(t)) / M
    return _domain_from_modes(DiskRegion(dom, N, index, surface), c)


# ---------------------------------------------------------------- exact forms

def sigma_periods(cfg: SurfaceConfig, beta: FormExpansion, M: int = 256, R: float = 1.2) -> np.ndarray:
    """Periods of a holomorphic form on Sigma: one loop around each Gamma_k (and the two lattice
    cycles on the torus, taken along lines avoiding the domains)."""
    out = []
    t = np.exp(2j * np.pi * np.arange(M) / M)
    for dom in cfg.domains:
        w = dom.f(R * t)
        dw = dom.df(R * t) * 1j * R * t
        out.append(np.sum(beta(w) * dw) * 2 * np.pi / M)
    if cfg.surface.is_torus:
        tau = cfg.surface.tau
        x = np.arange(M) / M
        y0 = _free_line(cfg, horizontal=True)
        x0 = _free_line(cfg, horizontal=False)
        out.append(np.sum(beta(x + y0 * tau)) / M)
        out.append(np.sum(beta(x0 + x * tau)) * tau / M)
    return np.array(out)


def _free_line(cfg, horizontal: bool) -> float:
    """A lattice coordinate whose line stays away from every domain."""
    tau = cfg.surface.tau
    cand = np.linspace(0, 1, 401)[:-1]
    best, bestd = 0.0, -1.0
    bnd = np.concatenate([d.f(np.exp(2j * np.pi * np.arange(256) / 256)) for d in cfg.domains])
    y = bnd.imag / tau.imag
    x = (bnd - y * tau).real
    coord = y if horizontal else x
    for c in cand:
        d = np.min(np.abs(((coord - c) + 0.5) % 1.0 - 0.5))
        if d > bestd:
            best, bestd = c, d
    return best


def sigma_primitive(cfg: SurfaceConfig, beta: FormExpansion, tol: float = PERIOD_TOL) -> HarmonicExpansion:
    """Single-valued primitive of an exact holomorphic Sigma form, anchored at H(q) = 0."""
    reg = beta.region
    if not isinstance(reg, SigmaRegion):
        raise RegionMismatch("expected a Sigma form")
    per = sigma_periods(cfg, beta)
    scale = max(1.0, float(np.max(np.abs(beta.coeffs))))
    if np.max(np.abs(per)) > tol * scale:
        raise NotExact(f"form has period {np.max(np.abs(per)):.3g}")
    J = reg.n_funcs
    coef = beta.coeffs[:J]
    zero = np.zeros(J, dtype=complex)
    if beta.chirality is Chirality.HOLO:
        H = HarmonicExpansion(reg, coef, zero)
    else:
        H = HarmonicExpansion(reg, zero, coef)
    return H.shift(-H(np.array([cfg.q]))[0])


def transmit_exact_forms(cfg: SurfaceConfig, beta: FormExpansion, j: int, N: int, M: int = 256):
    """O_e(Sigma, Omega_j) beta = d O(Sigma, Omega_j) d^-1 beta as (holomorphic, antiholomorphic) parts."""
    H = sigma_primitive(cfg, beta)
    h = transmit_sigma_to_domain(cfg, H, j, N, M)
    return split_harmonic(h)
