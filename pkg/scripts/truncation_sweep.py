"""Singular values of the T section on V and the left-inverse residual as the truncation grows."""
import argparse
from dataclasses import dataclass

from schiffer.experiments import left_inverse_section
from schiffer.experiments_cli import load_config
from schiffer.schiffer_ops import section_T_sigma


@dataclass
class SweepConfig:
    config: str
    truncations: tuple = (4, 8, 12, 16)


def sweep(sc: SweepConfig):
    cfg = load_config(sc.config).surface_cfg
    print(f"{'N':>4} {'s_max':>12} {'s_min':>12} {'fit':>10} {'left_inv':>10}")
    for n in sc.truncations:
        sec, fit = section_T_sigma(cfg, n, n + 4)
        li = left_inverse_section(cfg, n)
        print(f"{n:4d} {sec.singular_values[0]:12.8f} {sec.singular_values[-1]:12.8f} {fit:10.2e} {li:10.2e}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("config")
    p.add_argument("--N", type=int, nargs="+", default=[4, 8, 12, 16])
    a = p.parse_args()
    sweep(SweepConfig(a.config, tuple(a.N)))
