import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schiffer.domains import ConformalDomain, SurfaceConfig
from schiffer.errors import DomainMismatch, NotExact
from schiffer.spaces import (AnnulusRegion, Chirality, DiskChartRegion, DiskRegion, FormExpansion,
                             HarmonicExpansion, SigmaRegion, dirichlet_inner, dirichlet_norm,
                             domain_regions, form_norm, gram, inner_product_forms, primitive, project_V,
                             random_antiholo_forms, random_harmonic, split_harmonic, v_defect, w_defect)
from schiffer.surface_models import SurfaceModel

SPHERE = SurfaceModel.sphere()
TORUS = SurfaceModel.torus(1j)
UNIT = DiskRegion(ConformalDomain((0, 1)), 8)
TORUS_CFG = SurfaceConfig(TORUS, [ConformalDomain((0.25 + 0.25j, 0.12)), ConformalDomain((0.7 + 0.6j, 0.12))],
                          0.5 + 0.85j)


def unit_vec(n, k, N=8):
    e = np.zeros(N, dtype=complex)
    e[k] = 1
    return e


def test_monomial_forms_orthogonal():
    for n in range(4):
        for m in range(4):
            a = FormExpansion(UNIT, Chirality.HOLO, unit_vec(8, n))
            b = FormExpansion(UNIT, Chirality.HOLO, unit_vec(8, m))
            expect = np.pi / (n + 1) if n == m else 0
            assert abs(inner_product_forms(a, b) - expect) < 1e-12


def test_cross_chirality_is_zero():
    a = FormExpansion(UNIT, Chirality.HOLO, unit_vec(8, 0))
    b = FormExpansion(UNIT, Chirality.ANTIHOLO, unit_vec(8, 0))
    assert inner_product_forms(a, b) == 0


def test_pairing_is_conformally_invariant():
    reg = DiskRegion(ConformalDomain((0.3, 0.7, 0.1)), 6)
    assert np.allclose(np.real(np.diag(gram(reg))), reg.form_norms_sq(), atol=1e-11)
    assert np.allclose(gram(reg), np.diag(reg.form_norms_sq()), atol=1e-11)


def test_dirichlet_examples():
    h = HarmonicExpansion(UNIT, unit_vec(8, 0), np.zeros(8))        # h = z
    assert abs(dirichlet_norm(h) ** 2 - np.pi) < 1e-12
    g = HarmonicExpansion(UNIT, unit_vec(8, 1), unit_vec(8, 0))     # z^2 + zbar
    assert abs(dirichlet_norm(g) ** 2 - (2 * np.pi + np.pi)) < 1e-12
    assert abs(dirichlet_inner(h, h.shift(5 + 2j)) - np.pi) < 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), c=st.complex_numbers(max_magnitude=10))
def test_dirichlet_seminorm_ignores_constants(seed, c):
    h = random_harmonic(UNIT, np.random.default_rng(seed))
    assert abs(dirichlet_norm(h.shift(c)) - dirichlet_norm(h)) < 1e-10 * max(1, dirichlet_norm(h))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_split_is_pythagorean(seed):
    reg = AnnulusRegion(0.5, 1.0, 6)
    h = random_harmonic(reg, np.random.default_rng(seed), logs=True)
    d, db = split_harmonic(h)
    total = dirichlet_norm(h) ** 2
    assert abs(total - form_norm(d) ** 2 - form_norm(db) ** 2) < 1e-9 * max(1, total)


def test_split_examples():
    d, db = split_harmonic(HarmonicExpansion(UNIT, unit_vec(8, 2), unit_vec(8, 0)))
    assert np.allclose(d.coeffs, 3 * unit_vec(8, 2)) and np.allclose(db.coeffs, unit_vec(8, 0))
    reg = AnnulusRegion(0.5, 2.0, 3)
    # log|w| splits into dw/(2w) and dwbar/(2 wbar)
    d, db = split_harmonic(HarmonicExpansion(reg, np.zeros(6), np.zeros(6), 0, [1]))
    w = 0.7 + 0.3j
    assert abs(d(w) - 0.5 / w) < 1e-14 and abs(db(w) - 0.5 / np.conj(w)) < 1e-14


def test_primitive_roundtrip_and_non_exact():
    reg = AnnulusRegion(0.5, 2.0, 3)
    h = random_harmonic(reg, np.random.default_rng(3), antiholo=False)
    d, _ = split_harmonic(h)
    p = primitive(d)
    w = np.array([0.9 + 0.1j, -0.3 + 1.2j])
    assert np.allclose(p(w) - p(w[0]), h(w) - h(w[0]), atol=1e-12)
    with pytest.raises(NotExact):
        primitive(FormExpansion(reg, Chirality.HOLO, np.r_[np.zeros(6), 1]))


def test_gram_hermitian_positive_definite():
    for reg in (UNIT, AnnulusRegion(0.5, 1.0, 5), DiskChartRegion(0.5, 6)):
        G = gram(reg)
        assert np.allclose(G, G.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(G).min() > 0
        np.linalg.cholesky(G)


def test_annulus_gram_closed_form():
    reg = AnnulusRegion(0.5, 1.0, 3)
    G = gram(reg)
    s2 = 0.5
    # ||d u^n|| with u = w/sqrt(r_in r_out): 2 pi n^2 s^-2n int r^(2n-1) dr = pi n (r_out^2n - r_in^2n) / s^2n
    for j, n in enumerate([1, 2, 3, -1, -2, -3]):
        expect = np.pi * abs(n) * abs(1.0 ** (2 * n) - 0.5 ** (2 * n)) / s2 ** n
        assert abs(G[j, j] - expect) < 1e-10 * expect


def test_sigma_gram_stokes_matches_area():
    """Contour Gram on the complement of the unit disk: ||d w^-m||^2 = pi m."""
    cfg = SurfaceConfig(SPHERE, [ConformalDomain((0, 1))], 3)
    sig = SigmaRegion(cfg, 4)
    G = gram(sig)
    assert np.allclose(G, np.diag(np.pi * np.arange(1, 5)), atol=1e-12)


def test_v_defect_examples():
    regs = domain_regions(TORUS_CFG, 6)
    assert v_defect(SurfaceConfig(SPHERE, [ConformalDomain((0, 1))], 3),
                    [FormExpansion(DiskRegion(ConformalDomain((0, 1)), 4), Chirality.ANTIHOLO, np.ones(4))]).size == 0
    # dzetabar restricts to dwbar / 0.12, so the defect is -2i * area / 0.12
    one = [FormExpansion(regs[0], Chirality.ANTIHOLO, unit_vec(6, 0, 6)),
           FormExpansion(regs[1], Chirality.ANTIHOLO, np.zeros(6))]
    assert abs(v_defect(TORUS_CFG, one)[0] - (-2j * np.pi * 0.12)) < 1e-12
    hi = [FormExpansion(r, Chirality.ANTIHOLO, unit_vec(6, 3, 6)) for r in regs]
    assert abs(v_defect(TORUS_CFG, hi)[0]) < 1e-14
    with pytest.raises(DomainMismatch):
        v_defect(TORUS_CFG, hi[:1])


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_project_V_idempotent_and_in_V(seed):
    regs = domain_regions(TORUS_CFG, 6)
    a = random_antiholo_forms(regs, np.random.default_rng(seed))
    p = project_V(TORUS_CFG, a)
    assert abs(v_defect(TORUS_CFG, p)[0]) <= 1e-12 * max(1, max(form_norm(x) for x in a))
    pp = project_V(TORUS_CFG, p)
    assert max(np.max(np.abs(x.coeffs - y.coeffs)) for x, y in zip(p, pp)) < 1e-12


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_w_defect_routes_agree(seed):
    rng = np.random.default_rng(seed)
    h = [random_harmonic(r, rng) for r in domain_regions(TORUS_CFG, 6)]
    a, b = w_defect(TORUS_CFG, h, "area"), w_defect(TORUS_CFG, h, "contour")
    assert abs(a[0] - b[0]) < 1e-10 * max(1, abs(a[0]))
