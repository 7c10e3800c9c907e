"""Print both exponent tables, exact and rounded, plus the quadratic-form variants."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from symmoments.moments import TABLE_D2, TABLE_L2, theta, theta_bqf


@dataclass
class Config:
    lmax: int = 8
    dmax: int = 8
    places: int = 9


def main(cfg: Config) -> None:
    print(f"{'d':>2} {'l':>2}  {'theta':>14} {'bqf h=1':>14} {'bqf h>1':>14}  exact")
    pairs = [(2, l) for l in range(3, cfg.lmax + 1)] + [(d, 2) for d in range(3, cfg.dmax + 1)]
    for d, l in pairs:
        r = theta(d, l, cfg.places)
        h1 = theta_bqf(d, l, True, cfg.places)
        h2 = theta_bqf(d, l, False, cfg.places)
        printed = (TABLE_D2 if d == 2 else TABLE_L2).get(l if d == 2 else d)
        mark = ""
        if printed is not None:
            mark = "  ok" if r.rounded(len(printed) - 2) == printed else f"  MISMATCH {printed}"
        print(f"{d:>2} {l:>2}  {r.theta_decimal:>14} {h1.theta_decimal:>14} {h2.theta_decimal:>14}  "
              f"{r.theta_exact}{mark}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmax", type=int, default=Config.lmax)
    ap.add_argument("--dmax", type=int, default=Config.dmax)
    ap.add_argument("--places", type=int, default=Config.places)
    main(Config(**vars(ap.parse_args())))
