"""Best-approximation residuals of 1/z on an annulus by restrictions from a larger region."""
import argparse
from dataclasses import dataclass

import numpy as np

from schiffer.experiments import best_approx_residual, harmonic_target
from schiffer.spaces import AnnulusRegion, DiskChartRegion


@dataclass
class DensityConfig:
    r_in: float = 0.5
    r_out: float = 1.0
    mid_in: float = 0.3          # 0 gives the disk |z| < mid_out (no isotopy)
    mid_out: float = 1.5
    target: str = "1/z"
    truncations: tuple = (2, 4, 8, 12, 16)


def sweep(dc: DensityConfig):
    _, dtarget = harmonic_target(dc.target)
    print(f"{'N':>4} {'residual':>12} {'residual^2':>12}")
    for n in dc.truncations:
        inner = AnnulusRegion(dc.r_in, dc.r_out, n, tag="sigma")
        mid = AnnulusRegion(dc.mid_in, dc.mid_out, n, tag="mid") if dc.mid_in > 0 else DiskChartRegion(dc.mid_out, n)
        r = best_approx_residual(inner, mid, dtarget)
        print(f"{n:4d} {r:12.4e} {r * r:12.6f}")
    if dc.mid_in == 0:
        print(f"expected gap pi (r_in^-2 - r_out^-2) = {np.pi * (dc.r_in**-2 - dc.r_out**-2):.6f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--mid-in", type=float, default=0.3)
    p.add_argument("--mid-out", type=float, default=1.5)
    p.add_argument("--target", default="1/z")
    a = p.parse_args()
    sweep(DensityConfig(mid_in=a.mid_in, mid_out=a.mid_out, target=a.target))
