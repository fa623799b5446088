"""The ten acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from schiffer.experiments import (COVERAGE, Settings, best_approx_residual, derivative_identity_residuals, harmonic_target,
                                  left_inverse_random, omega_grid, random_tuple, region_from_spec,
                                  sigma_grid, surjectivity_witness)
from schiffer.experiments_cli import load_config, shipped_configs
from schiffer.jump import jump_solve
from schiffer.schiffer_ops import adjoint_check, section_S_open, section_T_sigma
from schiffer.spaces import Chirality, FormExpansion, HarmonicExpansion, domain_regions
from schiffer.surface_models import (bergman_kernel_compact, compact_holomorphic_basis,
                                     fundamental_domain_quadrature, green_values)

CONFIGS = {p.stem[0]: load_config(p) for p in shipped_configs()}
ST = Settings()


def cfg(letter):
    return CONFIGS[letter].surface_cfg


def test_criterion_01_jump_closed_form(acceptance_record):
    t0 = time.perf_counter()
    c = cfg("a")
    q = c.q
    reg = domain_regions(c, 16)[0]
    sol = jump_solve(c, [HarmonicExpansion(reg, np.zeros(16), np.eye(16)[0])])
    z = np.array([1.5, -2 + 0.5j, 3j, 10.0])
    err = max(abs(sol.h_k[0].constant - 1 / q), np.max(np.abs(sol.h_k[0].holo_coeffs)),
              np.max(np.abs(sol.h_k[0].antiholo_coeffs)), np.max(np.abs(sol.h_sigma(z) - (-1 / z + 1 / q))))
    dt = time.perf_counter() - t0
    ok = err < 1e-9 and sol.residual < 1e-9 and dt < 5
    acceptance_record(1, "jump closed form on the unit disk",
                      ok, f"coefficient error {err:.2e}, boundary residual {sol.residual:.2e}, {dt:.2f} s")
    assert ok


def test_criterion_02_T_isometry_disk(acceptance_record):
    sec, fit = section_T_sigma(cfg("a"), 8, 8)
    m = sec.matrix
    off = float(np.max(np.abs(m - np.diag(np.diag(m)))))
    dev = float(np.max(np.abs(sec.singular_values - 1)))
    ok = off < 1e-8 and dev < 1e-8
    acceptance_record(2, "T section on the disk is diagonal and isometric", ok,
                      f"off-diagonal {off:.2e}, |s - 1| {dev:.2e}, fit {fit:.1e}")
    assert ok


@pytest.mark.parametrize("letter", ["b", "c"])
def test_criterion_03_left_inverse(letter, acceptance_record):
    worst = left_inverse_random(cfg(letter), ST.N, np.random.default_rng([7, 3]), 20)
    ok = worst < 1e-6
    acceptance_record(3, f"left inverse on V, config ({letter})", ok, f"worst relative error {worst:.2e}")
    assert ok


def test_criterion_04_surjectivity_witness(acceptance_record):
    worst_T, worst_v = surjectivity_witness(cfg("b"), ST, np.random.default_rng([7, 4]), 10)
    ok = worst_T < 1e-6 and worst_v < 1e-8
    acceptance_record(4, "constructive preimages of exact forms", ok,
                      f"pointwise {worst_T:.2e}, v_defect {worst_v:.2e}")
    assert ok


@pytest.mark.parametrize("letter", ["a", "b", "c"])
def test_criterion_05_derivative_identities(letter, acceptance_record):
    c = cfg(letter)
    rng = np.random.default_rng([7, 5])
    zs = sigma_grid(c, 50, rng)
    zo = [omega_grid(c, j, 50, rng) for j in range(c.n)]
    h = random_tuple(c, ST.N, rng)
    r = derivative_identity_residuals(c, h, zs, zo, ST.quad)
    ok = max(r) < 1e-6
    acceptance_record(5, f"derivative identities, config ({letter})", ok,
                      "residuals " + ", ".join(f"{x:.1e}" for x in r))
    assert ok


@pytest.mark.parametrize("pair", ["disk_in_disk", "annulus_in_annulus"])
def test_criterion_06_adjoint(pair, acceptance_record):
    spec = next(p for p in CONFIGS["d"].nested["adjoint_pairs"] if p["label"] == pair)
    inner = region_from_spec(spec["inner"], 8, "inner")
    outer = region_from_spec(spec["outer"], 8, "outer")
    rng = np.random.default_rng([7, 6])
    z = lambda n: rng.standard_normal(n) + 1j * rng.standard_normal(n)
    worst = max(adjoint_check(inner, outer, FormExpansion(inner, Chirality.HOLO, z(inner.n_forms)),
                              FormExpansion(outer, Chirality.HOLO, z(outer.n_forms))) for _ in range(20))
    ok = worst < 1e-7
    acceptance_record(6, f"S is the adjoint of restriction, {pair}", ok, f"worst discrepancy {worst:.2e}")
    assert ok


@pytest.mark.parametrize("pair", ["disk_in_disk", "annulus_in_annulus"])
def test_criterion_07_S_spectrum(pair, acceptance_record):
    spec = next(p for p in CONFIGS["d"].nested["adjoint_pairs"] if p["label"] == pair)
    tails, smin = [], np.inf
    for n in (4, 8, 12, 16):
        sv = section_S_open(region_from_spec(spec["inner"], n, "i"), region_from_spec(spec["outer"], n, "o")).singular_values
        smin = min(smin, float(sv[-1]))
        tails.append(float(sv[-1]))
    dec = all(b < a for a, b in zip(tails, tails[1:]))
    ok = smin > 1e-10 and dec
    acceptance_record(7, f"S section spectrum, {pair}", ok,
                      "tails " + ", ".join(f"{t:.2e}" for t in tails))
    assert ok


def test_criterion_08_density(acceptance_record):
    tri = {t["label"]: t for t in CONFIGS["d"].nested["triples"]}
    pos = tri["annulus_triple"]
    _, dtarget = harmonic_target("1/z")
    final = best_approx_residual(region_from_spec(pos["sigma"], 16, "s"), region_from_spec(pos["sigma_pp"], 16, "m"), dtarget)
    gap_spec = tri["annulus_in_disk"]
    rel = []
    for N in (2, 4, 8, 12, 16):
        inner = region_from_spec(gap_spec["sigma"], N, "s")
        r = best_approx_residual(inner, region_from_spec(gap_spec["sigma_pp"], N, "m"), dtarget)
        rel.append(abs(r**2 - 3 * np.pi) / (3 * np.pi))
    ok = final < 1e-6 and max(rel) < 1e-2
    acceptance_record(8, "density and its failure without isotopy", ok,
                      f"final residual {final:.2e}, counterexample deviation {max(rel):.1e}")
    assert ok


def test_criterion_09_torus_foundations(acceptance_record):
    S = cfg("c").surface
    rng = np.random.default_rng([7, 9])
    per = 0.0
    for _ in range(50):
        w, z, q = (complex(rng.uniform(), rng.uniform()) for _ in range(3))
        if min(abs(w - z), abs(w - q), abs(z - q)) < 0.1:
            continue
        g = green_values(S, w, z, q)
        per = max(per, abs(green_values(S, w + 1, z, q) - g), abs(green_values(S, w + S.tau, z, q) - g))
    nodes, wts = fundamental_domain_quadrature(S, 16)
    dz = compact_holomorphic_basis(S)[0].coefficient(nodes)
    norm_err = abs(np.sum(np.abs(dz) ** 2 * wts) - S.tau.imag)
    z0 = 0.3 + 0.2j
    rep = abs(2j * np.sum(bergman_kernel_compact(S, z0, nodes) * dz * wts) - 1)
    ok = per < 1e-10 and norm_err < 1e-10 and rep < 1e-8
    acceptance_record(9, "torus Green function, dz norm and Bergman kernel", ok,
                      f"periodicity {per:.1e}, norm {norm_err:.1e}, reproducing {rep:.1e}")
    assert ok


def test_criterion_10_full_run(tmp_path, acceptance_record):
    env = {**os.environ, "SCHIFFER_OUT": str(tmp_path)}
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "schiffer", "all"], env=env, capture_output=True, text=True,
                          timeout=900)
    dt = time.perf_counter() - t0
    report = json.loads((tmp_path / "report.json").read_text())
    cov = report["meta"]["coverage"]
    covered = {c["theorem"] for c in cov if c["covered"]}
    configs = {c["name"] for c in report["meta"]["configs"]}
    ok = (proc.returncode == 0 and dt < 600 and covered == set(COVERAGE) and len(configs) == 4
          and all(c["pass"] for c in report["checks"]))
    acceptance_record(10, "full run on the shipped configs", ok,
                      f"exit {proc.returncode}, {len(report['checks'])} checks, {dt:.0f} s, "
                      f"{len(covered)}/{len(COVERAGE)} theorems covered")
    assert ok, proc.stdout[-2000:]
