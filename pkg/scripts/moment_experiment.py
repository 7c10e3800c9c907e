"""Moment sums of λ_{Sym^d Δ}(n)^l with main-term fits, over a grid of (d, l).

Writes one CSV row per (d, l) with the fitted coefficients, the residual
exponent estimate and the proven exponent θ_{d,l} where the theorem applies.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from symmoments.eigenform import obtain_delta
from symmoments.errors import HypothesisViolated
from symmoments.moments import default_cutoffs, fit_main_term, moment_sum, moment_sums, theta
from symmoments.sympow import sym_series


@dataclass
class Config:
    N: int = 10**6
    pairs: list[tuple[int, int]] = field(default_factory=lambda: [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2)])
    samples: int = 400
    cache_dir: str | None = None


def main(cfg: Config, out=sys.stdout) -> None:
    t0 = time.perf_counter()
    base = obtain_delta(cfg.N, cfg.cache_dir)
    print(f"# Δ to N={cfg.N} in {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["d", "l", "degree", "coefficients", "residual_exponent", "theta", "S(N)/N", "S(N/100)/(N/100)"])
    xs = default_cutoffs(cfg.N, cfg.samples)
    series = {}
    for d, l in cfg.pairs:
        S = series.setdefault(d, sym_series(base, d))
        fit = fit_main_term(d, l, xs, moment_sums(S, l, xs))
        try:
            th = theta(d, l).theta_decimal
        except HypothesisViolated:
            th = ""
        lo = cfg.N // 100
        writer.writerow([d, l, "" if fit.degree is None else fit.degree,
                         " ".join("%.6g" % c for c in fit.fitted_coeffs),
                         "%.4f" % fit.residual_exponent_estimate, th,
                         "%.6g" % (moment_sum(S, l, cfg.N) / cfg.N), "%.6g" % (moment_sum(S, l, lo) / lo)])


def parse_pairs(text: str) -> list[tuple[int, int]]:
    return [tuple(int(v) for v in p.split(",")) for p in text.split()]


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--pairs", type=parse_pairs, default=None, help='space separated d,l pairs, e.g. "1,2 2,2"')
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()
    cfg = Config(N=args.N, samples=args.samples, cache_dir=args.cache_dir)
    if args.pairs:
        cfg.pairs = args.pairs
    main(cfg)
