"""Green's functions and kernel coefficients on the sphere and on complex tori.

Conventions used throughout the package:

* The compact Green's function g(w; z, q) is harmonic in w away from z and q,
  behaves like -log|w - z| at z and like +log|w - q| at q.
* The Schiffer kernel is returned as the coefficient ``ell`` of ``dz dw``.
  ``schiffer_coefficient`` gives the sign-free part ``lam = -d_z d_w g / (pi i)``
  and ``schiffer_kernel`` multiplies it by ``SCHIFFER_SIGN``.  The sign is pinned
  by requiring ``d J h = -T dbar h`` outside the curves (see tests/test_sign_audit.py).
* Area integrals of forms use ``dw ^ dwbar = -2i dA``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import lgamma
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import NonConvergent, SingularEvaluation

SERIES_RTOL = 1e-16
SINGULAR_TOL = 1e-12
SCHIFFER_SIGN = 1
_MAX_TERMS = 400


class SurfaceKind(str, Enum):
    SPHERE = "sphere"
    TORUS = "torus"


@dataclass(frozen=True)
class SurfaceModel:
    kind: SurfaceKind
    tau: complex | None = None

    def __post_init__(self):
        kind = SurfaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SurfaceKind.TORUS:
            if self.tau is None:
                raise ValueError("torus requires tau")
            tau = complex(self.tau)
            if tau.imag <= 0:
                raise NonConvergent("Im(tau) must be positive")
            object.__setattr__(self, "tau", tau)
        else:
            object.__setattr__(self, "tau", None)

    @classmethod
    def sphere(cls) -> "SurfaceModel":
        return cls(SurfaceKind.SPHERE)

    @classmethod
    def torus(cls, tau: complex) -> "SurfaceModel":
        return cls(SurfaceKind.TORUS, tau)

    @property
    def is_torus(self) -> bool:
        return self.kind is SurfaceKind.TORUS

    @property
    def genus(self) -> int:
        return 1 if self.is_torus else 0


@dataclass(frozen=True)
class GreenValue:
    value: float
    is_singular: bool = False


@dataclass(frozen=True)
class OneFormDescriptor:
    """Holomorphic one-form on the compact surface, given by its dz coefficient."""
    label: str
    coefficient: Callable[[np.ndarray], np.ndarray]
    norm_sq: float


def _nome(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise NonConvergent("Im(tau) must be positive")
    return np.exp(1j * np.pi * tau)


def theta1(u, tau, deriv_order: int = 0):
    """Jacobi theta_1(u|tau) = 2 sum (-1)^n q^((n+1/2)^2) sin((2n+1) pi u), or a u-derivative."""
    if deriv_order not in (0, 1, 2, 3):
        raise ValueError("deriv_order must be 0..3")
    tau = complex(tau)
    if tau.imag <= 0:
        raise NonConvergent("Im(tau) must be positive")
    u = np.asarray(u, dtype=complex)
    total = np.zeros_like(u)
    runmax = 0.0
    for n in range(_MAX_TERMS):
        k = (2 * n + 1) * np.pi
        amp = 2.0 * (-1) ** n * np.exp(1j * np.pi * tau * (n + 0.5) ** 2) * k**deriv_order
        term = amp * np.sin(k * u + deriv_order * np.pi / 2)
        total = total + term
        m = float(np.max(np.abs(term))) if term.size else 0.0
        runmax = max(runmax, m)
        if n > 0 and m <= SERIES_RTOL * runmax:
            break
    else:
        raise NonConvergent("theta series did not settle")
    return total[()] if total.ndim == 0 else total


def reduce_lattice(u, tau):
    """Write u = u0 + a + b tau with |Im u0| <= Im(tau)/2 and |Re u0| <= 1/2 (a, b integers)."""
    u = np.asarray(u, dtype=complex)
    b = np.round(u.imag / tau.imag)
    u1 = u - b * tau
    a = np.round(u1.real)
    return u1 - a, a, b


def torus_distance(tau, a, b):
    """Distance between a and b on C / (Z + tau Z)."""
    d = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    d0, _, _ = reduce_lattice(d, complex(tau))
    best = np.abs(d0)
    for m in (-1, 0, 1):
        for n in (-1, 0, 1):
            best = np.minimum(best, np.abs(d0 + m + n * tau))
    return best


@lru_cache(maxsize=None)
def _cot_poly(m: int) -> np.ndarray:
    # sum_k (u-k)^(-m) as a polynomial in Y = pi cot(pi u)
    if m == 1:
        return np.array([0.0, 1.0])
    prev = _cot_poly(m - 1)
    return P.polymul([np.pi**2, 0.0, 1.0], P.polyder(prev)) / (m - 1)


def _cot_sum(u, m):
    """sum over integers k of (u - k)^(-m), m >= 2, for |Re u| <= 1/2."""
    out = np.empty_like(u)
    small = np.abs(u.imag) < 0.25
    if np.any(small):
        us = u[small]
        Y = np.pi * np.cos(np.pi * us) / np.sin(np.pi * us)
        out[small] = P.polyval(Y, _cot_poly(m))
    big = ~small
    if np.any(big):
        # pi cot(pi u) = -i pi - 2 pi i sum_j x^j with x = e^{2 pi i u} (Im u > 0),
        # and the mirror expansion in e^{-2 pi i u} below the real axis
        scale = (-1) ** (m - 1) * np.exp(-lgamma(m))
        for sgn in (1, -1):
            sel = big & ((u.imag > 0) if sgn == 1 else (u.imag < 0))
            if not np.any(sel):
                continue
            x = np.exp(sgn * 2j * np.pi * u[sel])
            xmax = float(np.max(np.abs(x)))
            acc = np.zeros_like(x)
            xj = np.ones_like(x)
            runmax = 0.0
            for j in range(1, _MAX_TERMS):
                xj = xj * x
                fac = scale * (-sgn * 2j * np.pi) * (sgn * 2j * np.pi * j) ** (m - 1)
                acc = acc + fac * xj
                bound = abs(fac) * xmax**j
                runmax = max(runmax, bound)
                if bound <= 1e-18 * runmax:
                    break
            out[sel] = acc
    return out


def _elliptic_sum(u, m, tau):
    """(-1)^(m-1)/(m-1)! d^(m-1)/du^(m-1) of 4 pi sum_n s_n sin(2 pi n u)."""
    q = _nome(tau)
    if u.size == 0:
        return np.zeros_like(u)
    lfac = lgamma(m)
    ymax = float(np.max(np.abs(u.imag)))
    ph = np.exp(0.5j * np.pi * (m - 1))
    coefs = []
    runmax = 0.0
    for n in range(1, _MAX_TERMS):
        q2n = q ** (2 * n)
        if q2n == 0:
            break
        s_n = q2n / (1 - q2n)
        mag = np.exp(np.log(abs(s_n)) + (m - 1) * np.log(2 * np.pi * n) - lfac)
        coefs.append((-1) ** (m - 1) * 4 * np.pi * mag * (s_n / abs(s_n)) / 2j)
        bound = 4 * np.pi * mag * np.cosh(2 * np.pi * n * ymax)
        runmax = max(runmax, bound)
        if n > m and bound <= 1e-18 * runmax:
            break
    # sin(2 pi n u + (m-1) pi/2) = (ph x^n - x^-n / ph) / 2i with x = e^{2 pi i u}; Horner in x and 1/x
    x = np.exp(2j * np.pi * u)
    xi = 1.0 / x
    pa = np.zeros_like(u)
    pb = np.zeros_like(u)
    for c in reversed(coefs):
        pa = (pa + c * ph) * x
        pb = (pb + c / ph) * xi
    return pa - pb


def pole_function(S: SurfaceModel, u, m: int):
    """Single-valued function with principal part u^-m at the origin (m >= 1).

    Sphere: u^-m.  Torus: for m >= 2 the elliptic function
    (-1)^(m-1)/(m-1)! psi^(m-1)(u) with psi = (log theta_1)'; for m = 1 this is psi itself,
    which is only quasi-periodic: psi(u + tau) = psi(u) - 2 pi i.
    """
    u = np.asarray(u, dtype=complex)
    if not S.is_torus:
        return u ** (-m)
    tau = S.tau
    u0, _, b = reduce_lattice(u, tau)
    if m == 1:
        Y = np.pi * np.cos(np.pi * u0) / np.sin(np.pi * u0)
        return Y + _elliptic_sum(u0, 1, tau) - 2j * np.pi * b
    shape = u0.shape
    flat = u0.ravel()
    return (_cot_sum(flat, m) + _elliptic_sum(flat, m, tau)).reshape(shape)


def log_theta1_derivative(u, tau):
    """psi(u) = theta_1'(u)/theta_1(u) (quasi-periodic)."""
    return pole_function(SurfaceModel.torus(tau), u, 1)


def _check_pole(S, w, a, what):
    d = torus_distance(S.tau, w, a) if S.is_torus else np.abs(np.asarray(w) - np.asarray(a))
    if np.any(d < SINGULAR_TOL):
        raise SingularEvaluation(f"evaluation point collides with {what}")


def green_values(S: SurfaceModel, w, z, q):
    """Vectorized g(w; z, q) (w0 normalization dropped)."""
    w = np.asarray(w, dtype=complex)
    _check_pole(S, w, z, "z")
    _check_pole(S, w, q, "q")
    if not S.is_torus:
        return np.log(np.abs(w - q)) - np.log(np.abs(w - z))
    tau = S.tau
    C = -2 * np.pi / tau.imag
    return (np.log(np.abs(theta1(w - q, tau))) - np.log(np.abs(theta1(w - z, tau)))
            + C * w.imag * (complex(z) - complex(q)).imag)


def green_function(S: SurfaceModel, w: complex, z: complex, q: complex) -> GreenValue:
    try:
        return GreenValue(float(green_values(S, w, z, q)), False)
    except SingularEvaluation:
        raise


def dgreen_dw(S: SurfaceModel, w, z, q):
    """Coefficient of d_w g(w; z, q) with respect to dw."""
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if not S.is_torus:
        return 0.5 * (1.0 / (w - q) - 1.0 / (w - z))
    tau = S.tau
    return (0.5 * (pole_function(S, w - q, 1) - pole_function(S, w - z, 1))
            + 1j * np.pi / tau.imag * (z - q).imag)


def schiffer_coefficient(S: SurfaceModel, z, w):
    """Sign-free kernel lam(z, w) = -d_z d_w g / (pi i)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if not S.is_torus:
        return 1.0 / (2j * np.pi * (w - z) ** 2)
    return pole_function(S, w - z, 2) / (2j * np.pi) + 1j / (2 * S.tau.imag)


def schiffer_kernel(S: SurfaceModel, z, w, q=None, sign: int = SCHIFFER_SIGN):
    """Coefficient ell with L_R(z, w) = ell dz dw.  Independent of q."""
    _check_pole(S, w, z, "z")
    return sign * schiffer_coefficient(S, z, w)


def bergman_kernel_compact(S: SurfaceModel, z, w):
    """Coefficient kappa with K_R = kappa dz dwbar."""
    shape = np.broadcast(np.asarray(z), np.asarray(w)).shape
    if not S.is_torus:
        return np.zeros(shape, dtype=complex)[()]
    return np.full(shape, -1j / (2 * S.tau.imag), dtype=complex)[()]


def compact_holomorphic_basis(S: SurfaceModel) -> list[OneFormDescriptor]:
    if not S.is_torus:
        return []
    return [OneFormDescriptor("dz", lambda w: np.ones_like(np.asarray(w, dtype=complex)), S.tau.imag)]


def fundamental_domain_quadrature(S: SurfaceModel, n: int = 32):
    """Gauss-Legendre tensor rule on {x + y tau : 0 <= x, y <= 1}; returns (nodes, weights)."""
    x, wx = np.polynomial.legendre.leggauss(n)
    x = (x + 1) / 2
    wx = wx / 2
    X, Y = np.meshgrid(x, x, indexing="ij")
    W = np.outer(wx, wx) * S.tau.imag
    return (X + Y * S.tau).ravel(), W.ravel()
