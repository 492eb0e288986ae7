"""Cross-check exact root counting and exact PSD testing against numpy."""

import argparse
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from rzamalgam import UPoly
from rzamalgam.linalg import is_psd
from rzamalgam.realroot import count_real_roots


@dataclass
class Config:
    trials: int = 1000
    seed: int = 0
    max_deg: int = 8
    max_dim: int = 6


def real_roots_numpy(cs):
    """Distinct real roots from numpy.roots; unreliable near multiple roots."""
    r = np.roots([float(c) for c in reversed(cs)])
    real = sorted(v.real for v in r if abs(v.imag) < 1e-7)
    return len([v for i, v in enumerate(real) if i == 0 or abs(v - real[i - 1]) > 1e-6])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for k, v in vars(Config()).items():
        ap.add_argument(f"--{k.replace('_', '-')}", type=int, default=v)
    cfg = Config(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)

    disagree = 0
    for _ in range(cfg.trials):
        deg = rng.randint(1, cfg.max_deg)
        roots = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rng.randint(0, deg))]
        cs = [Fraction(1)]
        for r in roots:
            cs = [a - r * b for a, b in zip([Fraction(0)] + cs, cs + [Fraction(0)])]
        while len(cs) <= deg:
            cs = [a + b for a, b in zip([Fraction(0)] + cs, cs + [Fraction(0)])]
            cs = [c + Fraction(rng.randint(0, 3)) if i == 0 else c for i, c in enumerate(cs)]
        disagree += count_real_roots(UPoly(cs)) != real_roots_numpy(cs)
    print(f"root counts: {disagree}/{cfg.trials} differ from numpy.roots (multiple roots confuse it)")

    skipped = wrong = 0
    for _ in range(cfg.trials):
        d = rng.randint(1, cfg.max_dim)
        V = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(rng.randint(1, d + 2))]
        G = np.array(V).T @ np.array(V) - rng.randint(0, 4) * np.eye(d, dtype=int)
        lam = np.linalg.eigvalsh(G.astype(float)).min()
        if abs(lam) < 1e-9:
            skipped += 1
            continue
        wrong += is_psd([[Fraction(int(v)) for v in row] for row in G]) != (lam > 0)
    print(f"PSD: {wrong} disagreements, {skipped} near-singular skipped of {cfg.trials}")
    return 1 if wrong else 0


if __name__ == "__main__":
    raise SystemExit(main())
