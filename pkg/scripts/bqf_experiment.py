"""Class groups, the character decomposition of r(n, Q) and λ-weighted sums over form values."""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from symmoments.eigenform import obtain_delta
from symmoments.moments import bqf_moment_sum
from symmoments.quadform import class_counts, class_group, is_fundamental, verify_character_decomposition
from symmoments.sympow import sym_series


@dataclass
class Config:
    discs: tuple[int, ...] = (-3, -4, -7, -8, -11, -15, -20, -23, -24, -84, -420)
    N: int = 10**5
    d: int = 1
    l: int = 2
    cache_dir: str | None = None


def main(cfg: Config) -> None:
    S = sym_series(obtain_delta(cfg.N, cfg.cache_dir), cfg.d)
    print(f"{'D':>6} {'h':>3} {'structure':>10} {'residual':>10}  form        sum/x")
    for D in cfg.discs:
        G = class_group(D)
        counts = class_counts(G, cfg.N)
        for k, form in enumerate(G.forms):
            res = verify_character_decomposition(G, form, min(cfg.N, 10**4)) if is_fundamental(D) else float("nan")
            ratio = bqf_moment_sum(S, cfg.l, form, cfg.N, counts[k]) / cfg.N
            struct = "x".join(map(str, G.structure)) or "1"
            print(f"{D:>6} {G.h:>3} {struct:>10} {res:>10.2e}  {str(form):<10} {ratio:.6f}")
        sys.stdout.flush()


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--d", type=int, default=Config.d)
    ap.add_argument("--l", type=int, default=Config.l)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()
    main(Config(N=args.N, d=args.d, l=args.l, cache_dir=args.cache_dir))
