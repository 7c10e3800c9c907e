"""Error-term exponents and desk-scale moment sums of λ_{Sym^d f}(n)^l.

Exponents are exact rationals built from K_{0,d,l}, K_{1,d,l}, K_{2,d,l}
and (d+1)^l; decimals are only ever renderings of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinat import kostka_closed_form
from .errors import HypothesisViolated, InsufficientSamples, OutOfRange
from .quadform import QuadForm, representation_counts
from .sympow import SymPowerSeries

VARIANTS = ("plain", "bqf_h1", "bqf_hgt1")

# the two exponent tables printed alongside the main theorem
TABLE_D2 = {3: "0.918287938", 4: "0.973534972", 5: "0.991304348", 6: "0.99713291", 7: "0.999051362", 8: "0.999685565"}
TABLE_L2 = {3: "0.865814696", 4: "0.916334661", 5: "0.942701228", 6: "0.958250497", 7: "0.968205905", 8: "0.974970203"}


def render_decimal(value: Fraction, places: int) -> str:
    """Correctly rounded (half-even) fixed-point rendering of an exact rational."""
    scaled = round(value * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def render_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ThetaReport:
    d: int
    l: int
    variant: str
    theta_exact: Fraction
    theta_decimal: str
    denominator_terms: tuple[int, int, int]
    dimension: int

    def rounded(self, places: int) -> str:
        return render_decimal(self.theta_exact, places)

    def as_dict(self) -> dict:
        K0, K1, K2 = self.denominator_terms
        return {
            "d": self.d,
            "l": self.l,
            "variant": self.variant,
            "theta": render_fraction(self.theta_exact),
            "theta_decimal": self.theta_decimal,
            "K0": K0,
            "K1": K1,
            "K2": K2,
            "dim": self.dimension,
        }


def _check_hypothesis(d: int, l: int, unchecked: bool) -> None:
    if d < 1 or l < 1:
        raise HypothesisViolated(f"need d >= 1 and l >= 1, got d={d}, l={l}")
    if not unchecked and (l < 2 or d * l <= 4):
        raise HypothesisViolated(f"(d, l) = ({d}, {l}) outside l >= 2, d*l > 4")


def _theta_report(d: int, l: int, variant: str, places: int, unchecked: bool) -> ThetaReport:
    _check_hypothesis(d, l, unchecked)
    K0, K1, K2 = (kostka_closed_form(i, d, l) for i in range(3))
    dim = (d + 1) ** l
    if variant == "plain":
        denom = Fraction(dim, 2) - Fraction(4, 21) * K0 - Fraction(1, 3) * K1 - Fraction(5, 14) * K2
        theta = 1 - 1 / denom
    elif variant == "bqf_h1":
        denom = Fraction(dim) - Fraction(8, 21) * K0 - Fraction(2, 3) * K1 - Fraction(5, 7) * K2
        theta = 1 - 1 / denom
    elif variant == "bqf_hgt1":
        denom = Fraction(3 * dim - K0)
        theta = 1 - 3 / denom
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if denom <= 0:
        raise HypothesisViolated(f"nonpositive denominator at (d, l) = ({d}, {l})")
    return ThetaReport(d, l, variant, theta, render_decimal(theta, places), (K0, K1, K2), dim)


def theta(d: int, l: int, places: int = 9, unchecked: bool = False) -> ThetaReport:
    """Exponent θ_{d,l} of the error term in Σ_{n<=x} λ_{Sym^d f}(n)^l."""
    return _theta_report(d, l, "plain", places, unchecked)


def theta_bqf(d: int, l: int, class_number_one: bool, places: int = 9, unchecked: bool = False) -> ThetaReport:
    """Exponent θ_{d,l,Q} for the sum over values of a binary quadratic form."""
    return _theta_report(d, l, "bqf_h1" if class_number_one else "bqf_hgt1", places, unchecked)


def main_term_degree(d: int, l: int) -> int | None:
    """deg P_{d,l} = K_{0,d,l} - 1, or None when the main term vanishes."""
    if d == 0:
        return 0  # λ ≡ 1: S(x) = floor(x)
    K0 = kostka_closed_form(0, d, l)
    return K0 - 1 if K0 else None


# -- partial sums ------------------------------------------------------------

def _powers(series: SymPowerSeries, l: int, x: int) -> np.ndarray:
    if not 1 <= x <= series.N:
        raise OutOfRange(f"x={x} outside 1..{series.N}")
    return series.values[1 : x + 1] ** l


def moment_sum(series: SymPowerSeries, l: int, x: int) -> float:
    """Σ_{n<=x} λ_{Sym^d f}(n)^l, correctly rounded (math.fsum)."""
    return math.fsum(_powers(series, l, x).tolist())


def moment_sums(series: SymPowerSeries, l: int, xs: Sequence[int]) -> list[float]:
    """moment_sum at every cutoff in xs, each identical to a fresh fsum of its prefix.

    Each segment between cutoffs is reduced to an exact expansion (repeated
    fsum of the remainder), so the prefix state stays exact without rescanning.
    """
    if not xs:
        return []
    terms = _powers(series, l, max(xs)).tolist()
    comps: list[float] = []
    prefix: dict[int, float] = {}
    prev = 0
    for x in sorted(set(xs)):
        seg, neg = terms[prev:x], []
        while (r := math.fsum(seg + neg)) != 0.0:
            comps.append(r)
            neg.append(-r)
        prefix[x] = math.fsum(comps)
        prev = x
    return [prefix[x] for x in xs]


def bqf_moment_sum(series: SymPowerSeries, l: int, form: QuadForm, x: int,
                   counts: np.ndarray | None = None) -> float:
    """Σ_{0 < Q(n1,n2) <= x} λ_{Sym^d f}(Q(n1,n2))^l = Σ_{n<=x} λ(n)^l r(n, Q).

    The lattice point (0, 0) is left out: λ is only defined for n >= 1.
    """
    if x < 1:
        return 0.0
    powers = _powers(series, l, x)
    r = representation_counts(form, x) if counts is None else counts[: x + 1]
    return math.fsum((powers * r[1 : x + 1]).tolist())


def log_spaced_cutoffs(lo: int, hi: int, count: int) -> list[int]:
    return sorted({int(round(v)) for v in np.geomspace(lo, hi, count)})


def default_cutoffs(N: int, count: int = 400) -> list[int]:
    """Log-spaced cutoffs over the top two decades [N/100, N]."""
    return log_spaced_cutoffs(max(1, N // 100), N, count)


@dataclass(frozen=True)
class MomentFit:
    d: int
    l: int
    x_samples: tuple[int, ...]
    sums: tuple[float, ...]
    fitted_coeffs: tuple[float, ...]  # P(log x) coefficients, constant term first
    residual_exponent_estimate: float
    window: tuple[int, int]

    @property
    def degree(self) -> int | None:
        return len(self.fitted_coeffs) - 1 if self.fitted_coeffs else None

    def main_term(self, x: float) -> float:
        if not self.fitted_coeffs:
            return 0.0
        return x * float(np.polynomial.polynomial.polyval(math.log(x), self.fitted_coeffs))

    def residuals(self) -> list[float]:
        return [s - self.main_term(x) for x, s in zip(self.x_samples, self.sums)]


def _block_rms_slope(X: np.ndarray, R: np.ndarray, blocks: int) -> float:
    """Slope of log RMS(R) against log x over log-equal blocks of the samples.

    Pointwise log|R| is dominated by sign changes of the residual; pooling
    into blocks first keeps the estimate stable under resampling.
    """
    edges = np.geomspace(X[0], X[-1], blocks + 1)
    edges[-1] = np.inf
    centres, rms = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mask = (X >= a) & (X < b)
        r = float(np.sqrt(np.mean(R[mask] ** 2))) if mask.any() else 0.0
        if r > 0:
            centres.append(float(np.mean(np.log(X[mask]))))
            rms.append(math.log(r))
    if len(rms) < 2:
        raise InsufficientSamples("fewer than two nonzero residual blocks in the largest decade")
    return float(np.polyfit(centres, rms, 1)[0])


def fit_main_term(d: int, l: int, xs: Sequence[int], sums: Sequence[float], blocks: int = 8) -> MomentFit:
    """Least-squares fit of S(x)/x by a polynomial of degree K_{0,d,l} - 1 in log x.

    The residual exponent is a log-log regression of |S(x) - x P(log x)|
    against x over the largest decade of samples, pooled into blocks;
    -inf when the fit is exact.
    """
    if len(xs) != len(sums):
        raise ValueError("xs and sums differ in length")
    order = sorted(range(len(xs)), key=lambda k: xs[k])
    X = np.array([xs[k] for k in order], dtype=float)
    S = np.array([sums[k] for k in order], dtype=float)
    deg = main_term_degree(d, l)
    need = (deg if deg is not None else 0) + 2
    if len(X) < need:
        raise InsufficientSamples(f"need at least {need} samples, got {len(X)}")
    if deg is None:
        coeffs: tuple[float, ...] = ()
        R = S
    else:
        c = np.polynomial.polynomial.polyfit(np.log(X), S / X, deg)
        coeffs = tuple(float(v) for v in c)
        R = S - X * np.polynomial.polynomial.polyval(np.log(X), c)
    in_window = X >= X[-1] / 10
    if in_window.sum() < 2:
        raise InsufficientSamples("need two samples in the largest decade")
    Xw, Rw = X[in_window], np.abs(R[in_window])
    scale = max(1.0, float(np.max(np.abs(S))))
    if not (Rw > 1e-12 * scale).any():
        slope = -math.inf
    else:
        slope = _block_rms_slope(Xw, Rw, blocks)
    return MomentFit(d, l, tuple(int(x) for x in X), tuple(float(s) for s in S), coeffs, slope,
                     (int(Xw[0]), int(Xw[-1])))
