"""Pins the global Schiffer sign by the Sigma derivative identity d J h = -T dbar h on a closed-form example."""
import numpy as np
import pytest

from schiffer.domains import ConformalDomain, SurfaceConfig
from schiffer.jump import apply_J, dJ, dJ_fd
from schiffer.schiffer_ops import apply_T
from schiffer.spaces import Chirality, FormExpansion, HarmonicExpansion, domain_regions
from schiffer.surface_models import SCHIFFER_SIGN, SurfaceModel, green_values, schiffer_coefficient, theta1

Q = 2.0
CFG = SurfaceConfig(SurfaceModel.sphere(), [ConformalDomain((0, 1))], Q)
REG = domain_regions(CFG, 4)[0]
ZBAR = HarmonicExpansion(REG, np.zeros(4), np.r_[1, 0, 0, 0])     # h = zbar, dbar h = dzbar
DZBAR = FormExpansion(REG, Chirality.ANTIHOLO, np.r_[1, 0, 0, 0])
Z = np.array([1.5, -2 + 1j, 3j])


def test_closed_form_jump_derivative():
    # J zbar = 1/q - 1/z outside, so d J = z^-2 dz, checked by finite differences of J itself
    assert np.max(np.abs(apply_J(CFG, [ZBAR], Z) - (1 / Q - 1 / Z))) < 1e-13
    assert np.max(np.abs(dJ(CFG, [ZBAR], Z) - Z**-2.0)) < 1e-13
    assert np.max(np.abs(dJ_fd(CFG, [ZBAR], Z)[0] - Z**-2.0)) < 1e-9


def test_sign_is_plus_one():
    assert SCHIFFER_SIGN == 1
    resid = dJ(CFG, [ZBAR], Z) + apply_T(CFG, [DZBAR], "sigma", Z, sign=SCHIFFER_SIGN)
    assert np.max(np.abs(resid)) < 1e-12


def test_flipped_sign_breaks_the_identity():
    resid = dJ(CFG, [ZBAR], Z) + apply_T(CFG, [DZBAR], "sigma", Z, sign=-SCHIFFER_SIGN)
    assert np.allclose(resid, 2 * Z**-2.0, atol=1e-12)


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.8j])
def test_torus_kernel_constant(tau):
    """lam - Z_2/(2 pi i) equals i/(2 Im tau), with lam from finite differences of the Green's function."""
    S = SurfaceModel.torus(tau)
    z, w, q, h = 0.2 + 0.15j, 0.55 + 0.4j, 0.8 + 0.7j, 1e-3

    def d(fn, x):
        return 0.5 * ((fn(x + h) - fn(x - h)) - 1j * (fn(x + 1j * h) - fn(x - 1j * h))) / (2 * h)

    lam_fd = -d(lambda zz: d(lambda ww: green_values(S, ww, zz, q), w), z) / (np.pi * 1j)
    u = w - z
    t0, t1, t2 = theta1(u, tau), theta1(u, tau, 1), theta1(u, tau, 2)
    Z2 = -(t2 * t0 - t1**2) / t0**2
    const = 0.5j / tau.imag
    assert abs(lam_fd - Z2 / (2j * np.pi) - const) < 1e-6
    assert abs(schiffer_coefficient(S, z, w) - Z2 / (2j * np.pi) - const) < 1e-12
