"""Command line entry point: config ingestion, experiment orchestration and JSON/CSV reports.

Exit codes: 0 when every check passes, 2 when some check fails, 3 when a config is invalid.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .domains import ConformalDomain, SurfaceConfig, validate_config
from .errors import ConfigInvalid, SchifferError
from .experiments import (COVERAGE, Check, Settings, Table, Tolerances, adjoint_suite,
                          density_suite, identity_audit, isomorphism_suite, jump_suite)
from .surface_models import SurfaceModel

EXPERIMENTS = ("identities", "isomorphism", "jump", "density", "adjoint", "all")
EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 2, 3
CONFIG_DIR = Path(__file__).parent / "configs"
# tolerances that are lower bounds or detection thresholds; a global --tol leaves them alone
_FIXED_TOLS = ("control", "iso_floor", "sv_floor", "counterexample_rel")


@dataclass
class LoadedConfig:
    name: str
    digest: str
    surface_cfg: SurfaceConfig | None
    nested: dict | None
    truncation: int
    quad: dict
    tolerances: dict


@dataclass
class ExperimentConfig:
    config_paths: list
    experiment: str = "all"
    truncation: int | None = None
    seed: int = 7
    tol: float | None = None
    out_dir: Path = Path("schiffer_out")
    quad: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigInvalid([f"unknown experiment {self.experiment!r}"])
        if self.truncation is not None and self.truncation < 2:
            raise ConfigInvalid(["truncation must be at least 2"])
        if self.tol is not None and not self.tol > 0:
            raise ConfigInvalid(["tolerance must be positive"])


def _c(pair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def shipped_configs() -> list[Path]:
    return sorted(CONFIG_DIR.glob("*.json"))


def load_config(path) -> LoadedConfig:
    """Parse a JSON config; raises ConfigInvalid with every violation found."""
    raw = Path(path).read_bytes()
    try:
        d = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid([f"not valid JSON: {exc}"]) from exc
    name = d.get("name", Path(path).stem)
    violations = []
    cfg = None
    if "domains" in d:
        try:
            s = d.get("surface", {"kind": "sphere"})
            S = SurfaceModel.torus(_c(s["tau"])) if s.get("kind") == "torus" else SurfaceModel.sphere()
            doms = [ConformalDomain(tuple(_c(c) for c in dd["coeffs"]), dd.get("label", ""))
                    for dd in d["domains"]]
            cfg = SurfaceConfig(S, doms, _c(d["q"]), float(d.get("epsilon", 0.2)))
        except (KeyError, TypeError, ValueError, SchifferError) as exc:
            raise ConfigInvalid([f"malformed config: {exc}"]) from exc
        violations += [str(v) for v in validate_config(cfg)]
    nested = d.get("nested")
    if cfg is None and nested is None:
        violations.append("config needs 'domains' or 'nested'")
    N = int(d.get("truncation", 16))
    if N < 2:
        violations.append("truncation must be at least 2")
    tols = d.get("tolerances", {}) or {}
    known = {f.name for f in fields(Tolerances)}
    for k, v in tols.items():
        if k not in known:
            violations.append(f"unknown tolerance {k!r}")
        elif not float(v) > 0:
            violations.append(f"tolerance {k!r} must be positive")
    if violations:
        raise ConfigInvalid(violations)
    return LoadedConfig(name, hashlib.sha256(raw).hexdigest()[:16], cfg, nested, N,
                        d.get("quadrature", {}) or {}, tols)


def settings_for(lc: LoadedConfig, ex: ExperimentConfig) -> Settings:
    tol = replace(Tolerances(), **{k: float(v) for k, v in lc.tolerances.items()})
    if ex.tol is not None:
        keep = {k: getattr(tol, k) for k in _FIXED_TOLS}
        tol = replace(Tolerances(**{f.name: ex.tol for f in fields(Tolerances)}), **keep)
    q = {**lc.quad, **ex.quad}
    return Settings(N=ex.truncation or lc.truncation, n_r=int(q.get("n_r", 48)), n_t=int(q.get("n_t", 256)),
                    M=int(q.get("M", 256)), seed=ex.seed, tol=tol)


def run_config(lc: LoadedConfig, ex: ExperimentConfig, log=print):
    """Run the requested suites on one config; returns (checks, tables)."""
    st = settings_for(lc, ex)
    want = lambda e: ex.experiment in (e, "all")
    checks: list[Check] = []
    tables: list[Table] = []
    timings = {}

    def run(tag, fn):
        t0 = time.perf_counter()
        # each suite draws from its own stream, so subcommands reproduce the matching part of `all`
        rng = np.random.default_rng([st.seed, EXPERIMENTS.index(tag)])
        try:
            out = fn(rng)
        except SchifferError as exc:
            # a solver guard tripping is a failed check, not a crash
            out = [Check(f"{lc.name}:{tag}_aborted", "suite completion", float("inf"), 0.0,
                         detail=f"{type(exc).__name__}: {exc}")]
        timings[tag] = round(time.perf_counter() - t0, 1)
        c, t = out if isinstance(out, tuple) else (out, [])
        checks.extend(c)
        tables.extend(t)
        log(f"  {lc.name}/{tag}: {sum(x.passed for x in c)}/{len(c)} passed ({timings[tag]} s)")

    cfg = lc.surface_cfg
    if cfg is not None:
        if want("identities"):
            run("identities", lambda rng: identity_audit(cfg, st, lc.name, rng))
        if want("isomorphism"):
            run("isomorphism", lambda rng: isomorphism_suite(cfg, st, lc.name, rng))
        if want("jump"):
            run("jump", lambda rng: jump_suite(cfg, st, lc.name, rng))
    if lc.nested is not None:
        if want("density"):
            run("density", lambda rng: density_suite(lc.nested, st, lc.name))
        if want("adjoint"):
            run("adjoint", lambda rng: adjoint_suite(lc.nested, st, lc.name, rng))
    return checks, tables


def coverage_manifest(checks: list[Check]) -> list[dict]:
    """For each result family, the checks of this run that exercise it."""
    out = []
    for theorem, keys in COVERAGE.items():
        hits = sorted({c.name for c in checks for k in keys if c.name.split(":", 1)[-1].startswith(k)})
        out.append({"theorem": theorem, "checks": hits, "covered": bool(hits)})
    return out


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def emit_report(report: dict, tables: list[Table], out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    for t in tables:
        with open(out_dir / f"{t.name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(t.header)
            for row in t.rows:
                w.writerow([_fmt(x) for x in row])
    path = out_dir / "report.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=False) + "\n")
    return path


def run_experiment(ex: ExperimentConfig, log=print):
    """Load every config, run, and write the report; returns (report, exit code)."""
    loaded, invalid = [], []
    for p in ex.config_paths:
        try:
            loaded.append(load_config(p))
        except ConfigInvalid as exc:
            invalid.append((str(p), exc.violations))
    if invalid:
        for p, vs in invalid:
            log(f"invalid config {p}:")
            for v in vs:
                log(f"  - {v}")
        return None, EXIT_INVALID
    checks, tables = [], []
    for lc in loaded:
        c, t = run_config(lc, ex, log)
        checks += c
        tables += t
    cov = coverage_manifest(checks) if ex.experiment == "all" else []
    report = {
        "meta": {
            "version": __version__,
            "experiment": ex.experiment,
            "seed": ex.seed,
            "truncation": ex.truncation,
            "tolerance_override": ex.tol,
            "configs": [{"name": lc.name, "hash": lc.digest} for lc in loaded],
            "coverage": cov,
        },
        "checks": [c.as_dict() for c in checks],
        "tables": [{"name": t.name, "path": f"{t.name}.csv", "columns": t.header} for t in tables],
    }
    emit_report(report, tables, Path(ex.out_dir))
    failed = [c for c in checks if not c.passed]
    if cov:
        log("coverage manifest:")
        for item in cov:
            log(f"  [{'x' if item['covered'] else ' '}] {item['theorem']}: {len(item['checks'])} checks")
    log(f"{len(checks) - len(failed)}/{len(checks)} checks passed; report in {Path(ex.out_dir) / 'report.json'}")
    for c in failed:
        log(f"  FAIL {c.name}: measured {c.measured:.3e} vs {c.tolerance:.1e} ({c.anchor})")
    return report, (EXIT_FAIL if failed else EXIT_OK)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schiffer", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", action="append", default=None,
                   help="config JSON (repeatable); defaults to every shipped config")
    p.add_argument("--out", default=None, help="output directory (or set SCHIFFER_OUT)")
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tol", type=float, default=None, help="override every upper-bound tolerance")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out or os.environ.get("SCHIFFER_OUT") or "schiffer_out"
    try:
        ex = ExperimentConfig(args.config or [str(p) for p in shipped_configs()], args.experiment,
                              args.truncation, args.seed, args.tol, Path(out))
    except ConfigInvalid as exc:
        for v in exc.violations:
            print(f"invalid option: {v}", file=sys.stderr)
        return EXIT_INVALID
    _, code = run_experiment(ex)
    return code


if __name__ == "__main__":
    sys.exit(main())
