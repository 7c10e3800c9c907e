"""Symmetric-power Hecke eigenvalues and local Euler factors.

At a prime p with Satake parameters α = e^{iθ}, β = e^{-iθ} the local data
of Sym^d f is the multiset {α^{d-t} β^t : 0 <= t <= d} = {e^{imθ} : m = d,
d-2, ..., -d}.  Everything is computed in real arithmetic from x = λ_f(p):
cos(mθ) = T_m(x/2) and the trace U_d(x/2), both by three-term recurrences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .arith import prime_power_split, primes_upto
from .combinat import tensor_power_multiplicities
from .eigenform import CoefficientSeries, satake_angle_from_value


@dataclass(frozen=True)
class LocalFactor:
    """P_p(T) = Σ coeffs[k] T^k, the reciprocal of the p-part of L(Sym^d f, s)."""

    p: int
    d: int
    coeffs: np.ndarray

    def roots(self) -> np.ndarray:
        return np.roots(self.coeffs[::-1])


@dataclass(frozen=True, eq=False)
class SymPowerSeries:
    d: int
    base: CoefficientSeries
    values: np.ndarray  # indexed by n, values[0] unused

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])


def chebyshev_u(d: int, x: float) -> float:
    """U_d(x) by U_{k+1} = 2x U_k - U_{k-1}."""
    prev, cur = 0.0, 1.0
    for _ in range(d):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev_u_array(d: int, x: np.ndarray) -> np.ndarray:
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for _ in range(d):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev_t_list(d: int, x: float) -> list[float]:
    """[T_0(x), ..., T_d(x)]."""
    out = [1.0, x]
    for _ in range(d - 1):
        out.append(2 * x * out[-1] - out[-2])
    return out[: d + 1]


def local_factor_from_value(p: int, lam_p: float, d: int) -> LocalFactor:
    satake_angle_from_value(p, lam_p)  # Deligne bound
    cos_m = chebyshev_t_list(d, lam_p / 2)
    poly = np.array([1.0])
    for m in range(d, 0, -2):
        poly = np.convolve(poly, [1.0, -2.0 * cos_m[m], 1.0])
    if d % 2 == 0:
        poly = np.convolve(poly, [1.0, -1.0])
    return LocalFactor(p, d, poly)


def sym_local_factor(series: CoefficientSeries, p: int, d: int) -> LocalFactor:
    return local_factor_from_value(p, series[p], d)


def prime_power_values(lam_p: float, d: int, rmax: int, p: int = 0) -> list[float]:
    """λ_{Sym^d f}(p^r) for r = 0..rmax from Σ_r λ(p^r) T^r = 1 / P_p(T)."""
    P = local_factor_from_value(p, lam_p, d).coeffs
    h = [1.0]
    for r in range(1, rmax + 1):
        h.append(-sum(P[k] * h[r - k] for k in range(1, min(r, d + 1) + 1)))
    return h


def sym_eigenvalue(series: CoefficientSeries, p: int, r: int, d: int) -> float:
    return prime_power_values(series[p], d, r, p)[r]


def sym_series(series: CoefficientSeries, d: int, N: int | None = None) -> SymPowerSeries:
    N = series.N if N is None else N
    if N > series.N:
        raise ValueError(f"base series has length {series.N} < {N}")
    if d == 1:
        values = np.array(series.normalized[: N + 1], dtype=np.float64)
        return SymPowerSeries(d, series, values)
    values = np.full(N + 1, np.nan)
    if N >= 1:
        values[1] = 1.0
    primes = primes_upto(N)
    large = primes[primes * primes > N]
    values[large] = chebyshev_u_array(d, series.normalized[large] / 2)
    for p in primes[primes * primes <= N].tolist():
        rmax = 1
        while p ** (rmax + 1) <= N:
            rmax += 1
        h = prime_power_values(series.normalized[p], d, rmax, p)
        for r in range(1, rmax + 1):
            values[p**r] = h[r]
    if N >= 6:
        _, q, m = prime_power_split(N)
        # λ(n) = λ(q) λ(m) with q the spf-power part; m < n, so sweeping in
        # order of the number of distinct prime factors fills every entry
        pending = np.nonzero(m[: N + 1] > 1)[0]
        while len(pending):
            ready = ~np.isnan(values[m[pending]])
            idx = pending[ready]
            values[idx] = values[q[idx]] * values[m[idx]]
            pending = pending[~ready]
    return SymPowerSeries(d, series, values)


def verify_tensor_identity(series: CoefficientSeries, d: int, l: int, p: int) -> float:
    """|λ_{Sym^d}(p)^l - Σ_i K_{i,d,l} λ_{Sym^i}(p)| at one prime.

    Evaluated exactly: λ(p)^2 = a(p)^2 / p^{k-1} is rational on the integer
    path (otherwise the stored float is taken as an exact rational).  In
    doubles the left side alone carries an ulp above 1e-9 once |λ|^l > 2^23.
    """
    if series.raw is not None:
        lam_sq = Fraction(series.a(p) ** 2, p ** (series.weight - 1))
    else:
        lam_sq = Fraction(series[p]) ** 2
    return tensor_identity_residual(lam_sq, d, l)


def _u_even_part(t: Fraction, top: int) -> list[Fraction]:
    """R_0..R_top with U_k(x/2) = x^{k mod 2} R_k(x^2), t = x^2."""
    R = [Fraction(1), Fraction(1)]
    for k in range(1, top):
        R.append(t * R[k] - R[k - 1] if k % 2 else R[k] - R[k - 1])
    return R[: top + 1]


def tensor_identity_residual(lam_sq: Fraction, d: int, l: int, K: Mapping[int, int] | None = None) -> float:
    """Exact residual of the decomposition at a prime with λ(p)^2 = lam_sq."""
    K = tensor_power_multiplicities(d, l) if K is None else K
    R = _u_even_part(lam_sq, max(d, d * l))
    eps = (d * l) % 2
    lhs = lam_sq ** (((d % 2) * l - eps) // 2) * R[d] ** l
    rhs = sum((m * R[i] for i, m in K.items()), Fraction(0))
    return math.sqrt(lam_sq) ** eps * float(abs(lhs - rhs))


def tensor_identity_residual_float(lam_p: float, d: int, l: int) -> float:
    """Same identity in double precision; absolute error grows like ulp(|λ|^l)."""
    x = lam_p / 2
    lhs = chebyshev_u(d, x) ** l
    K = tensor_power_multiplicities(d, l)
    rhs = math.fsum(m * chebyshev_u(i, x) for i, m in K.items())
    return abs(lhs - rhs)


def _truncated_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a, b)[: order + 1]


def _truncated_pow(a: np.ndarray, e: int, order: int) -> np.ndarray:
    out = np.zeros(order + 1)
    out[0] = 1.0
    base = np.zeros(order + 1)
    base[: min(len(a), order + 1)] = a[: order + 1]
    while e:
        if e & 1:
            out = _truncated_mul(out, base, order)
        e >>= 1
        if e:
            base = _truncated_mul(base, base, order)
    return out


def verify_local_u_factor(series: CoefficientSeries, d: int, l: int, p: int, order: int = 4) -> list[float]:
    """Coefficients c_0..c_order of (Σ_j λ_{Sym^d}(p^j)^l T^j) · ∏_i P_{p,i}(T)^{K_{i,d,l}}.

    This is the p-part of D / L; c_1 = 0 is what lets U converge past Re s = 1/2.
    """
    return local_u_factor(series[p], d, l, order, p)


def local_u_factor(lam_p: float, d: int, l: int, order: int = 4, p: int = 0) -> list[float]:
    if not 0 <= order <= 6:
        raise ValueError("order must be between 0 and 6")
    h = np.array(prime_power_values(lam_p, d, order, p)) ** l
    acc = h[: order + 1]
    for i, k in tensor_power_multiplicities(d, l).items():
        P = local_factor_from_value(p, lam_p, i).coeffs
        acc = _truncated_mul(acc, _truncated_pow(P, k, order), order)
    return acc.tolist()
