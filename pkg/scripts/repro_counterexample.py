"""Rebuild the matroid pair and print the full step-by-step report."""

import argparse
import json
from dataclasses import dataclass

from rzamalgam.repro import run_counterexample


@dataclass
class Config:
    samples: int = 500
    seed: int = 42
    json: bool = False


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--json", action="store_true")
    cfg = Config(**vars(ap.parse_args()))
    rep = run_counterexample(cfg.samples, cfg.seed)
    print(json.dumps(rep.to_dict(), indent=2) if cfg.json else rep.text())
    return 0 if rep.status == "pass" else 3


if __name__ == "__main__":
    raise SystemExit(main())
