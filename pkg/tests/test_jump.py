import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schiffer.domains import ConformalDomain, SurfaceConfig
from schiffer.errors import LimitNotSettled, NotInW, PointOnCurve
from schiffer.jump import (CollarData, apply_J, apply_J_prime, circle_dbar, dJ, dJ_fd, holomorphic_defect,
                           jump_inverse_check, jump_solve)
from schiffer.spaces import HarmonicExpansion, SigmaRegion, domain_regions, random_harmonic
from schiffer.surface_models import SurfaceModel

SPHERE = SurfaceModel.sphere()
Q = 2.0
DISK_CFG = SurfaceConfig(SPHERE, [ConformalDomain((0, 1))], Q)
TWO_CFG = SurfaceConfig(SPHERE, [ConformalDomain((-1.5, 0.6, 0.05)), ConformalDomain((1.5, 0.6))], 0)
TORUS_CFG = SurfaceConfig(SurfaceModel.torus(1j), [ConformalDomain((0.25 + 0.25j, 0.12)),
                                                   ConformalDomain((0.7 + 0.6j, 0.12))], 0.5 + 0.85j)
INSIDE = np.array([0.1, -0.3 + 0.2j, 0.5j])
OUTSIDE = np.array([1.5, -3 + 1j, 1.2j])


def e(k, N=6):
    v = np.zeros(N, dtype=complex)
    v[k] = 1
    return v


REG = domain_regions(DISK_CFG, 6)[0]
ZBAR = HarmonicExpansion(REG, np.zeros(6), e(0))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_J_of_holomorphic_monomials(n):
    h = [HarmonicExpansion(REG, e(n - 1), np.zeros(6))]
    assert np.max(np.abs(apply_J(DISK_CFG, h, INSIDE) - INSIDE**n)) < 1e-13
    assert np.max(np.abs(apply_J(DISK_CFG, h, OUTSIDE))) < 1e-13


def test_J_of_conjugate_closed_form():
    # zbar = 1/z on the circle: J is 1/q inside and 1/q - 1/z outside
    assert np.max(np.abs(apply_J(DISK_CFG, [ZBAR], INSIDE) - 1 / Q)) < 1e-13
    assert np.max(np.abs(apply_J(DISK_CFG, [ZBAR], OUTSIDE) - (1 / Q - 1 / OUTSIDE))) < 1e-13


@pytest.mark.parametrize("cfg", [DISK_CFG, TWO_CFG, TORUS_CFG], ids=["disk", "two", "torus"])
def test_J_vanishes_at_anchor(cfg):
    rng = np.random.default_rng(5)
    h = [random_harmonic(r, rng) for r in domain_regions(cfg, 6)]
    assert abs(apply_J(cfg, h, np.array([cfg.q]))[0]) < 1e-12


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.complex_numbers(max_magnitude=5))
def test_J_linear(seed, a):
    rng = np.random.default_rng(seed)
    regs = domain_regions(TWO_CFG, 6)
    h1 = [random_harmonic(r, rng) for r in regs]
    h2 = [random_harmonic(r, rng) for r in regs]
    z = np.array([0.2j, -1.5 + 0.1, 3.0])
    lhs = apply_J(TWO_CFG, [x.scale(a) + y for x, y in zip(h1, h2)], z)
    rhs = a * apply_J(TWO_CFG, h1, z) + apply_J(TWO_CFG, h2, z)
    assert np.max(np.abs(lhs - rhs)) < 1e-11 * (1 + abs(a)) * max(1, np.max(np.abs(rhs)))


def test_dJ_routes():
    rng = np.random.default_rng(9)
    h = [random_harmonic(r, rng) for r in domain_regions(TWO_CFG, 6)]
    z = np.array([0.1 + 0.2j, 3.0 - 1j])
    d, db = dJ_fd(TWO_CFG, h, z)
    assert np.max(np.abs(dJ(TWO_CFG, h, z) - d)) < 1e-7
    assert np.max(np.abs(db)) < 1e-7
    # J is holomorphic off the curves: the disk average of dbar vanishes
    F = lambda w: apply_J(TWO_CFG, h, w)
    assert np.max(np.abs(circle_dbar(F, z, 0.1))) < 1e-12


def test_J_prime_examples():
    cfg = DISK_CFG
    u = [CollarData(0, cfg.epsilon, e(3, 5))]                 # zeta
    assert np.max(np.abs(apply_J_prime(cfg, u, INSIDE[:1]) - INSIDE[:1])) < 1e-13
    u = [CollarData(0, cfg.epsilon, e(1, 5))]                 # zeta^-1
    assert abs(apply_J_prime(cfg, u, np.array([0.3]))[0] - 1 / Q) < 1e-13
    assert abs(apply_J_prime(cfg, u, np.array([3.0]))[0] - (1 / Q - 1 / 3)) < 1e-13


def test_jump_solve_closed_form():
    sol = jump_solve(DISK_CFG, [ZBAR])
    assert sol.residual < 1e-10 and sol.fit_residual < 1e-10
    assert abs(sol.h_k[0].constant - 1 / Q) < 1e-10
    assert np.max(np.abs(sol.h_k[0].holo_coeffs)) < 1e-10 and np.max(np.abs(sol.h_k[0].antiholo_coeffs)) < 1e-10
    assert np.max(np.abs(sol.h_sigma(OUTSIDE) - (1 / Q - 1 / OUTSIDE))) < 1e-10
    assert holomorphic_defect(sol) < 1e-10


def test_jump_inverse_on_disk():
    sig = SigmaRegion(DISK_CFG, 4)
    u_sigma = HarmonicExpansion(sig, np.array([0.5, 0.2j, 0, 0.1]), np.zeros(4))
    u_sigma = u_sigma.shift(-u_sigma(np.array([Q]))[0])
    u_O = [HarmonicExpansion(REG, np.r_[1, 0.3, 0, 0, 0, 0], np.zeros(6), 0.7)]
    assert jump_inverse_check(DISK_CFG, u_O, u_sigma) < 1e-10


@pytest.mark.parametrize("cfg,tol", [(TWO_CFG, 1e-8), (TORUS_CFG, 1e-6)], ids=["two", "torus"])
def test_jump_inverse_random(cfg, tol):
    rng = np.random.default_rng(21)
    u_O = [random_harmonic(r, rng, decay=0.5, antiholo=False) for r in domain_regions(cfg, 8)]
    sig = SigmaRegion(cfg, 8)
    u_sigma = random_harmonic(sig, rng, decay=0.5, antiholo=False)
    u_sigma = u_sigma.shift(-u_sigma(np.array([cfg.q]))[0])
    assert jump_inverse_check(cfg, u_O, u_sigma) < tol


def test_errors():
    with pytest.raises(PointOnCurve):
        apply_J(DISK_CFG, [ZBAR], np.array([1.0 + 0j]))
    regs = domain_regions(TORUS_CFG, 4)
    bad = [HarmonicExpansion(regs[0], np.zeros(4), e(0, 4)), HarmonicExpansion(regs[1], np.zeros(4), np.zeros(4))]
    with pytest.raises(NotInW):
        jump_solve(TORUS_CFG, bad)
    u = [CollarData(0, DISK_CFG.epsilon, np.zeros(5), log_coeff=1.0)]
    with pytest.raises(LimitNotSettled):
        apply_J_prime(DISK_CFG, u, np.array([0.1]))
