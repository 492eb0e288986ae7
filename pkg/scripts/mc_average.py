"""Compare the Haar average of det(I + y U^T B U + z C) with the exact
derivative-sum formula, for a sweep of sample sizes."""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from rzamalgam import format_poly
from rzamalgam.amalgamation import mc_deviation, mc_orthogonal_amalgam, operator_formula


def _m(rows):
    return [[Fraction(v) for v in r] for r in rows]


@dataclass
class Config:
    B: list = field(default_factory=lambda: _m([[1, 0, 0], [0, 2, 0], [0, 0, -1]]))
    C: list = field(default_factory=lambda: _m([[1, 1, 0], [1, 0, 1], [0, 1, 2]]))
    sizes: tuple = (1000, 5000, 20000, 80000)
    seed: int = 42


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--sizes", type=lambda s: tuple(int(v) for v in s.split(",")), default=Config.sizes)
    cfg = Config(**vars(ap.parse_args()))
    y, z = [("y", cfg.B)], [("z", cfg.C)]
    exact = operator_formula(y, z)
    print("exact:", format_poly(exact))
    print(f"{'N':>8} {'max|dev|':>10} {'max dev/SE':>11}")
    for n in cfg.sizes:
        dev, zmax = mc_deviation(mc_orthogonal_amalgam(y, z, N=n, seed=cfg.seed), exact)
        print(f"{n:>8} {dev:>10.4f} {zmax:>11.2f}")


if __name__ == "__main__":
    main()
