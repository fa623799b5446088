import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schiffer.domains import (ConformalDomain, SurfaceConfig, area_quadrature, collar, contour_integral,
                              in_domain, level_curve, validate_config)
from schiffer.errors import InvalidEps, InvalidOrder, LengthMismatch
from schiffer.experiments_cli import load_config, shipped_configs
from schiffer.surface_models import SurfaceModel

SPHERE = SurfaceModel.sphere()
UNIT = ConformalDomain((0, 1))


def kinds(cfg):
    return sorted(v.kind for v in validate_config(cfg))


def test_validate_examples():
    assert validate_config(SurfaceConfig(SPHERE, [UNIT], 3)) == []
    overlap = SurfaceConfig(SPHERE, [UNIT, ConformalDomain((1, 1))], 5)
    assert "DisjointnessViolation" in kinds(overlap)
    assert "InjectivityViolation" in kinds(SurfaceConfig(SPHERE, [ConformalDomain((0, 1, 1))], 5))


def test_validate_mutations():
    assert "AnchorViolation" in kinds(SurfaceConfig(SPHERE, [UNIT], 0.5))
    assert "CollarViolation" in kinds(SurfaceConfig(SPHERE, [UNIT], 3, epsilon=-1))
    torus = SurfaceModel.torus(1j)
    assert "FundamentalDomainViolation" in kinds(SurfaceConfig(torus, [ConformalDomain((0.5 + 0.5j, 0.6))], 0.1))
    nested = SurfaceConfig(SPHERE, [ConformalDomain((0, 2)), ConformalDomain((0, 0.5))], 5)
    assert "DisjointnessViolation" in kinds(nested)


def test_shipped_configs_valid():
    paths = shipped_configs()
    assert len(paths) == 4
    for p in paths:
        lc = load_config(p)
        if lc.surface_cfg is not None:
            assert validate_config(lc.surface_cfg) == []


def test_area_quadrature_examples():
    assert abs(area_quadrature(UNIT, 16, 64).weights.sum() - np.pi) < 1e-12
    assert abs(area_quadrature(ConformalDomain((0, 1, 0.1)), 16, 64).weights.sum() - 1.02 * np.pi) < 1e-10
    r = area_quadrature(UNIT, 16, 64)
    assert abs(r.integrate(np.abs(r.nodes) ** 2) - np.pi / 2) < 1e-12
    with pytest.raises(InvalidOrder):
        area_quadrature(UNIT, 1, 64)


def test_area_quadrature_geometric_convergence():
    dom = ConformalDomain((0.1, 0.8, 0.1j))
    fn = lambda w: np.exp(w) * np.conj(w)
    ref = area_quadrature(dom, 40, 256).integrate(fn(area_quadrature(dom, 40, 256).nodes))
    errs = []
    for n in (4, 8, 16):
        r = area_quadrature(dom, n, 4 * n)
        errs.append(abs(r.integrate(fn(r.nodes)) - ref))
    assert errs[0] > errs[1] > errs[2] or errs[2] < 1e-12


def test_level_curve_examples():
    lc = level_curve(UNIT, 0.0, 4)
    assert np.allclose(lc.samples, [1, 1j, -1, -1j], atol=1e-15)
    assert np.allclose(np.abs(level_curve(UNIT, np.log(2), 64).samples), 0.5)
    dom = ConformalDomain((0, 2, 0.2))
    lc = level_curve(dom, 0.1, 64)
    assert np.max(np.abs(-np.log(np.abs(dom.inverse(lc.samples))) - 0.1)) < 1e-10


def test_level_curves_nest():
    dom = ConformalDomain((0.3, 1, 0.2))
    outer = level_curve(dom, 0.1, 128)
    inner = level_curve(dom, 0.3, 128)
    # winding number of the outer curve about each inner sample is one
    for w in inner.samples[::16]:
        wind = contour_integral(outer, 1 / (outer.samples - w)) / (2j * np.pi)
        assert abs(wind - 1) < 1e-10


def test_contour_integral_examples():
    lc = level_curve(UNIT, 0.0, 64)
    assert abs(contour_integral(lc, 1 / lc.samples) - 2j * np.pi) < 1e-13
    assert abs(contour_integral(lc, lc.samples**2)) < 1e-13
    dom = ConformalDomain((0, 1, 0, 0.3))
    lc = level_curve(dom, 0.0, 256)
    assert abs(contour_integral(lc, 1 / (lc.samples - dom.center)) - 2j * np.pi) < 1e-10
    with pytest.raises(LengthMismatch):
        contour_integral(lc, np.ones(10))


@settings(max_examples=20, deadline=None)
@given(a=st.floats(-1, 1), b=st.floats(-1, 1), s=st.floats(0, 0.5))
def test_exact_differential_has_no_period(a, b, s):
    dom = ConformalDomain((0.2, 1, 0.1 * complex(a, b)))
    lc = level_curve(dom, s, 128)
    F_prime = np.exp(lc.samples) * (1 + lc.samples)    # derivative of w e^w
    assert abs(contour_integral(lc, F_prime)) < 1e-10


def test_collar_examples():
    c = collar(UNIT, np.log(2))
    assert np.allclose(np.abs(c.inner_curve(64).samples), 0.5)
    assert np.allclose(c.inner_curve(64).samples, level_curve(UNIT, np.log(2), 64).samples)
    assert abs(c.quadrature(16, 64).weights.sum() - np.pi * 0.75) < 1e-12
    ext = collar(UNIT, np.log(2), exterior=True)
    assert abs(ext.quadrature(16, 64).weights.sum() - np.pi * 3) < 1e-12
    with pytest.raises(InvalidEps):
        collar(UNIT, 0.0)


def test_inverse_and_membership():
    dom = ConformalDomain((-1.5, 0.6, 0.05))
    zeta = 0.7 * np.exp(1j * np.linspace(0, 6, 9))
    assert np.max(np.abs(dom.inverse(dom.f(zeta)) - zeta)) < 1e-13
    cfg = SurfaceConfig(SPHERE, [dom], 0)
    assert in_domain(cfg, dom.f(zeta), 0).all()
    assert not in_domain(cfg, dom.f(1.6 * zeta), 0).any()
