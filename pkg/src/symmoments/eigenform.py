"""Normalized Hecke eigenvalues of level-1 eigenforms.

The built-in form is Δ = q ∏(1 - q^n)^24 of weight 12.  Its coefficients
are computed exactly: Jacobi's identity ∏(1 - q^n)^3 = Σ (-1)^k (2k+1)
q^{k(k+1)/2} gives a series A with O(√N) terms, A^2 comes from its pairwise
products, and A^8 from two dense squarings.  |τ(n)| reaches ~1e35 at
n = 1e6, far past a machine word, so the squarings run by float FFT modulo
small primes (small enough that rounding is exact) and the integers are
rebuilt by CRT.

Other eigenforms enter through :func:`load_coefficients`.
"""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import is_prime, prime_power_split, primes_upto
from .errors import ExactRangeExceeded, FormatError, InvariantViolation, OutOfRange

EXACT_BOUND = 10**6
TOL = 1e-9
DEGENERATE_TOL = 1e-12

FFT_ROUNDING_SLACK = 0.1


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """λ(n) = a(n) / n^{(k-1)/2} for 1 <= n <= N.

    Arrays are indexed by n directly: ``normalized[0]`` is a NaN
    placeholder and ``raw[0]`` is 0.
    """

    weight: int
    label: str
    normalized: np.ndarray
    raw: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.normalized.setflags(write=False)

    @property
    def N(self) -> int:
        return len(self.normalized) - 1

    @property
    def exact(self) -> bool:
        return self.raw is not None

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.N:
            raise OutOfRange(f"n={n} outside 1..{self.N}")
        return float(self.normalized[n])

    def a(self, n: int) -> int:
        if self.raw is None:
            raise ValueError(f"{self.label} carries no exact coefficients")
        return self.raw[n]


@dataclass(frozen=True)
class SatakeAngle:
    p: int
    theta: float
    degenerate: bool


def _eta_cubed_terms(N: int) -> list[tuple[int, int]]:
    """(exponent, coefficient) pairs of ∏(1 - q^n)^3 below q^N."""
    terms = []
    k = 0
    while k * (k + 1) // 2 < N:
        terms.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return terms


def crt_moduli(N: int) -> list[int]:
    """Primes small enough for exact float64 FFT squaring at length ~2N,
    with product exceeding twice the bound |τ(n)| <= d(n) n^{11/2} <= 2 n^6."""
    L = 2 * N
    # centred residues are < 2^(bits-1); worst-case FFT error ~ 2^-53 |x|^2 L log2 L
    bits = int((53 - math.log2(L * math.log2(max(L, 2))) - 5) // 2) + 1
    bits = max(8, min(bits, 16))
    need = 4 * N**6 + 1
    out, prod = [], 1
    candidate = 2**bits - 1
    while prod <= need:
        while not is_prime(candidate):
            candidate -= 1
        out.append(candidate)
        prod *= candidate
        candidate -= 1
    return out


def _square_mod(x: np.ndarray, p: int, N: int) -> np.ndarray:
    """x^2 truncated below q^N, modulo p; x holds centred residues."""
    size = 1 << (2 * N - 1).bit_length()
    f = np.fft.rfft(x.astype(np.float64), size)
    y = np.fft.irfft(f * f, size)[:N]
    r = np.rint(y)
    if np.max(np.abs(y - r), initial=0.0) > FFT_ROUNDING_SLACK:
        raise ExactRangeExceeded("FFT rounding too large for exact squaring")
    return _centre(np.remainder(r, p).astype(np.int64), p)


def _centre(x: np.ndarray, p: int) -> np.ndarray:
    return np.where(x > p // 2, x - p, x)


def _delta_residues(N: int, primes: list[int]) -> np.ndarray:
    """Coefficients of (∏(1 - q^n)^3)^8 below q^N modulo each prime."""
    terms = _eta_cubed_terms(N)
    exps = np.array([e for e, _ in terms], dtype=np.int64)
    coefs = np.array([c for _, c in terms], dtype=np.float64)
    # sparse square: pairwise products, exact in float64 (|sum| < 2^53)
    pair_exp = np.add.outer(exps, exps).ravel()
    pair_coef = np.multiply.outer(coefs, coefs).ravel()
    keep = pair_exp < N
    square = np.rint(np.bincount(pair_exp[keep], weights=pair_coef[keep], minlength=N)).astype(np.int64)
    out = np.empty((len(primes), N), dtype=np.int64)
    for k, p in enumerate(primes):
        x = _centre(square % p, p)
        x = _square_mod(x, p, N)
        x = _square_mod(x, p, N)
        out[k] = x % p
    return out


def _crt(residues: np.ndarray, primes: list[int]) -> list[int]:
    """Garner reconstruction to the symmetric range (-M/2, M/2)."""
    digits = []
    for k, pk in enumerate(primes):
        t = residues[k].copy()
        for j in range(k):
            inv = pow(primes[j], -1, pk)
            t = ((t - digits[j]) % pk) * inv % pk
        digits.append(t)
    # Horner in int64 over groups whose modulus product stays below 2^62,
    # then combine the groups with Python ints
    groups: list[tuple[np.ndarray, int]] = []
    k = 0
    while k < len(primes):
        acc, span, j = np.zeros_like(digits[0]), 1, k
        while j < len(primes) and span * primes[j] < 2**62:
            span *= primes[j]
            j += 1
        for i in range(j - 1, k - 1, -1):
            acc = acc * primes[i] + digits[i]
        groups.append((acc, span))
        k = j
    value = groups[-1][0].astype(object)
    for acc, span in reversed(groups[:-1]):
        value = value * span + acc.astype(object)
    M = math.prod(primes)
    half = M // 2
    return [int(v) - M if v > half else int(v) for v in value]


def normalize(raw: list[int] | tuple[int, ...], weight: int) -> np.ndarray:
    N = len(raw) - 1
    a = np.array([float(x) for x in raw], dtype=np.float64)
    n = np.arange(N + 1, dtype=np.float64)
    lam = np.full(N + 1, np.nan)
    lam[1:] = a[1:] / n[1:] ** ((weight - 1) / 2)
    return lam


def delta_coefficients(N: int, exact_bound: int = EXACT_BOUND, allow_big: bool = False) -> CoefficientSeries:
    """Exact τ(1..N) and λ(n) = τ(n) / n^{11/2}."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > exact_bound and not allow_big:
        raise ExactRangeExceeded(f"N={N} above exact bound {exact_bound}; pass allow_big=True")
    primes = crt_moduli(N)
    residues = _delta_residues(N, primes)
    # a(n) is the coefficient of q^{n-1} of the 8th power
    raw = [0] + _crt(residues, primes)
    return CoefficientSeries(weight=12, label="delta", normalized=normalize(raw, 12), raw=tuple(raw))


def validate(series: CoefficientSeries) -> None:
    """Raise InvariantViolation naming the first failed check."""
    N, k = series.N, series.weight
    lam = series.normalized
    if abs(lam[1] - 1.0) > TOL:
        raise InvariantViolation("normalization", f"λ(1) = {lam[1]!r}")
    primes = primes_upto(N)
    big = np.abs(lam[primes]) > 2 + TOL
    if big.any():
        p = int(primes[np.argmax(big)])
        raise InvariantViolation("Deligne", f"|λ({p})| = {abs(lam[p])!r} > 2")
    if series.raw is not None:
        _validate_exact(series)
    _check_multiplicative(lam, N)
    _check_hecke(lam, N)


def _check_multiplicative(lam: np.ndarray, N: int) -> None:
    if N < 6:
        return
    _, q, m = prime_power_split(N)
    idx = np.nonzero(m[2:] > 1)[0] + 2
    err = np.abs(lam[idx] - lam[q[idx]] * lam[m[idx]])
    if (err > TOL).any():
        n = int(idx[np.argmax(err > TOL)])
        raise InvariantViolation("multiplicativity", f"λ({n}) != λ({q[n]})λ({m[n]})")


def _check_hecke(lam: np.ndarray, N: int) -> None:
    for p in primes_upto(math.isqrt(N)):
        p = int(p)
        prev, cur, r = 1.0, lam[p], 1
        while p ** (r + 1) <= N:
            expect = lam[p] * cur - prev
            if abs(lam[p ** (r + 1)] - expect) > TOL:
                raise InvariantViolation("Hecke", f"λ({p}^{r + 1}) breaks the prime-power recursion")
            prev, cur, r = cur, lam[p ** (r + 1)], r + 1


def _validate_exact(series: CoefficientSeries) -> None:
    a, N, k = series.raw, series.N, series.weight
    if a[1] != 1:
        raise InvariantViolation("normalization", f"a(1) = {a[1]}")
    spf, q, m = prime_power_split(N)
    for p in primes_upto(N).tolist():
        if a[p] * a[p] > 4 * p ** (k - 1):
            raise InvariantViolation("Deligne", f"a({p})^2 > 4 {p}^{k - 1}")
        pk1 = p ** (k - 1)
        r = 1
        while p ** (r + 1) <= N:
            if a[p ** (r + 1)] != a[p] * a[p**r] - pk1 * a[p ** (r - 1)]:
                raise InvariantViolation("Hecke", f"a({p}^{r + 1}) breaks the prime-power recursion")
            r += 1
    qs, ms = q.tolist(), m.tolist()
    for n in range(2, N + 1):
        if ms[n] > 1 and a[n] != a[qs[n]] * a[ms[n]]:
            raise InvariantViolation("multiplicativity", f"a({n}) != a({qs[n]})a({ms[n]})")


def ramanujan_691_failures(series: CoefficientSeries, upto: int = 1000) -> list[int]:
    """n <= upto with τ(n) ≢ σ_11(n) mod 691 (empty for Δ)."""
    upto = min(upto, series.N)
    sig = [0] * (upto + 1)
    for d in range(1, upto + 1):
        dd = pow(d, 11, 691)
        for n in range(d, upto + 1, d):
            sig[n] += dd
    return [n for n in range(1, upto + 1) if (series.a(n) - sig[n]) % 691]


def satake_angle(series: CoefficientSeries, p: int) -> SatakeAngle:
    return satake_angle_from_value(p, series[p])


def satake_angle_from_value(p: int, lam_p: float) -> SatakeAngle:
    if abs(lam_p) > 2 + TOL:
        raise OutOfRange(f"|λ({p})| = {abs(lam_p)!r} exceeds the Deligne bound")
    theta = math.acos(min(1.0, max(-1.0, lam_p / 2)))
    return SatakeAngle(p, theta, abs(abs(lam_p) - 2) <= DEGENERATE_TOL)


# -- CSV interchange -------------------------------------------------------

def cache_path(label: str, N: int, cache_dir: str | os.PathLike | None = None) -> Path:
    return Path(cache_dir or ".") / f"{label}_N{N}.csv"


def write_coefficients(series: CoefficientSeries, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write("n,a,lambda\n")
        for n in range(1, series.N + 1):
            a = str(series.raw[n]) if series.raw is not None else ""
            fh.write(f"{n},{a},{series.normalized[n]:.17g}\n")
    return path


def load_coefficients(path: str | os.PathLike, weight: int, label: str | None = None) -> CoefficientSeries:
    """Read an ``n,a,lambda`` CSV and validate it before returning."""
    path = Path(path)
    if weight < 12 or weight % 2:
        raise FormatError(f"weight must be even and >= 12, got {weight}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header not in (["n", "a", "lambda"], ["n", "lambda"]):
            raise FormatError(f"bad header {header!r}; expected n,a,lambda")
        has_a = len(header) == 3
        raw: list[int] | None = [0] if has_a else None
        lam = [math.nan]
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(f"line {lineno}: expected {len(header)} fields")
            try:
                n = int(row[0])
                value = float(row[-1])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
            if n != len(lam):
                raise FormatError(f"line {lineno}: rows must be n = 1..N contiguous, got n={n}")
            lam.append(value)
            if raw is not None:
                if row[1] == "":
                    raw = None
                else:
                    try:
                        raw.append(int(row[1]))
                    except ValueError:
                        raise FormatError(f"line {lineno}: a must be a decimal integer") from None
    if len(lam) < 2:
        raise FormatError("no coefficient rows")
    if label is None:
        label = path.stem.rsplit("_N", 1)[0]
    series = CoefficientSeries(weight, label, np.array(lam), tuple(raw) if raw is not None else None)
    if raw is not None:
        ref = normalize(raw, weight)
        if np.max(np.abs(ref[1:] - series.normalized[1:]) / np.maximum(1.0, np.abs(ref[1:]))) > TOL:
            raise InvariantViolation("consistency", "lambda column disagrees with a / n^((k-1)/2)")
    validate(series)
    return series


def truncate(series: CoefficientSeries, N: int) -> CoefficientSeries:
    if not 1 <= N <= series.N:
        raise OutOfRange(f"cannot truncate length {series.N} to {N}")
    raw = series.raw[: N + 1] if series.raw is not None else None
    return CoefficientSeries(series.weight, series.label, np.array(series.normalized[: N + 1]), raw)


def find_cached(label: str, N: int, cache_dir: str | os.PathLike | None = None) -> Path | None:
    """Smallest cached ``<label>_N<M>.csv`` with M >= N, if any."""
    best: tuple[int, Path] | None = None
    for path in Path(cache_dir or ".").glob(f"{label}_N*.csv"):
        try:
            M = int(path.stem.rsplit("_N", 1)[1])
        except ValueError:
            continue
        if M >= N and (best is None or M < best[0]):
            best = (M, path)
    return best[1] if best else None


def obtain_delta(N: int, cache_dir: str | os.PathLike | None = None) -> CoefficientSeries:
    """Δ to length N, read from the cache when a long enough file exists."""
    path = find_cached("delta", N, cache_dir) if cache_dir is not None else None
    if path is None:
        return delta_coefficients(N)
    return truncate(load_coefficients(path, 12, "delta"), N)
