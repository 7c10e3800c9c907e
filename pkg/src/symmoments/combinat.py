"""Partitions, Kostka numbers K_{i,d,l} and two-row Weyl module bookkeeping.

K_{i,d,l} is the multiplicity of Sym^i V inside (Sym^d V)^{⊗l} for a
two-dimensional V.  It is computed four independent ways:

* ``kostka_closed_form``  alternating binomial sum,
* ``kostka_recursive``    layer-by-layer Clebsch-Gordan recursion (memoized),
* ``kostka_generating``   differences of coefficients of (1 + x + ... + x^d)^l,
* ``kostka_tableau``      exhaustive semistandard tableau enumeration.

Everything here is exact integer arithmetic.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterable, Iterator, Mapping

from .errors import OracleBoundExceeded

DEFAULT_TABLEAU_BOUND = 24


@dataclass(frozen=True, init=False)
class Partition:
    """Weakly decreasing tuple of nonnegative ints, trailing zeros stripped."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int], weight: int | None = None):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if weight is not None and sum(parts) != weight:
            raise ValueError(f"{parts} is not a partition of {weight}")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, k: int) -> int:
        return self.parts[k] if k < len(self.parts) else 0

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def padded(self, m: int) -> tuple[int, ...]:
        return self.parts + (0,) * max(0, m - len(self.parts))

    def __repr__(self) -> str:
        return f"Partition({self.parts})"


class MultiplicityVector(Mapping[int, int]):
    """Finite map i -> multiplicity of Sym^i; absent keys read as 0."""

    def __init__(self, coefficients: Mapping[int, int] | None = None):
        coefficients = dict(coefficients or {})
        if any(m < 0 for m in coefficients.values()):
            raise ValueError("multiplicities must be nonnegative")
        self._c = {i: m for i, m in sorted(coefficients.items()) if m}

    def __getitem__(self, i: int) -> int:
        return self._c.get(i, 0)

    def __iter__(self) -> Iterator[int]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return self._c == {i: m for i, m in other.items() if m}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __repr__(self) -> str:
        return f"MultiplicityVector({self._c})"

    def __str__(self) -> str:
        return " ".join(f"{i}:{m}" for i, m in self._c.items())

    def dimension(self) -> int:
        """Dimension of ⊕ m_i Sym^i V with dim V = 2."""
        return sum((i + 1) * m for i, m in self._c.items())

    def tensor(self, j: int) -> "MultiplicityVector":
        """Tensor every summand with Sym^j and regroup."""
        out: dict[int, int] = {}
        for i, m in self._c.items():
            for k, one in clebsch_gordan(i, j).items():
                out[k] = out.get(k, 0) + m * one
        return MultiplicityVector(out)


def _in_support(i: int, d: int, l: int) -> bool:
    return 0 <= i <= d * l and (d * l - i) % 2 == 0


def _check_dl(d: int, l: int) -> None:
    if d < 1 or l < 1:
        raise ValueError(f"need d >= 1 and l >= 1, got d={d}, l={l}")


def kostka_closed_form(i: int, d: int, l: int) -> int:
    _check_dl(d, l)
    if not _in_support(i, d, l):
        return 0
    if l == 1:
        return 1 if i == d else 0
    half = (d * l - i) // 2
    return sum(
        (-1) ** j * comb(l, j) * comb(half - j * (d + 1) + l - 2, l - 2)
        for j in range(half // (d + 1) + 1)
    )


class KostkaTable:
    """Unbounded memo of full rows K_{., d, l}, built by the CG recursion.

    Readers never block; writers take a lock and insert-if-absent, so
    concurrent use from several threads is safe.
    """

    def __init__(self):
        self._rows: dict[tuple[int, int], tuple[int, ...]] = {}
        self._lock = threading.Lock()

    def row(self, d: int, l: int) -> tuple[int, ...]:
        """(K_{0,d,l}, ..., K_{dl,d,l})."""
        _check_dl(d, l)
        hit = self._rows.get((d, l))
        if hit is not None:
            return hit
        start = max((ll for (dd, ll) in list(self._rows) if dd == d and ll < l), default=0)
        if start == 0:
            prev = tuple(1 if i == d else 0 for i in range(d + 1))
            start = 1
            self._insert(d, 1, prev)
        else:
            prev = self._rows[(d, start)]
        for ll in range(start + 1, l + 1):
            # Sym^k ⊗ Sym^d contains Sym^i iff |k-d| <= i <= k+d with matching
            # parity, so K_{i,d,ll} = K_{|i-d|,d,ll-1} + ... + K_{i+d,d,ll-1}.
            # Starting the sum at i-d instead (with K = 0 below zero) overcounts
            # whenever i < d.
            top = d * (ll - 1)
            cur = [0] * (d * ll + 1)
            for i in range(d * ll + 1):
                cur[i] = sum(prev[k] for k in range(abs(i - d), min(i + d, top) + 1, 2))
            prev = tuple(cur)
            self._insert(d, ll, prev)
        return prev

    def _insert(self, d: int, l: int, row: tuple[int, ...]) -> None:
        with self._lock:
            self._rows.setdefault((d, l), row)

    def __getitem__(self, key: tuple[int, int, int]) -> int:
        i, d, l = key
        if not _in_support(i, d, l):
            _check_dl(d, l)
            return 0
        return self.row(d, l)[i]

    def __len__(self) -> int:
        return len(self._rows)


_TABLE = KostkaTable()


def kostka_recursive(i: int, d: int, l: int, table: KostkaTable | None = None) -> int:
    return (table or _TABLE)[i, d, l]


def box_power_coefficients(d: int, l: int) -> list[int]:
    """Coefficients C_{j,d,l} of (1 + x + ... + x^d)^l, j = 0..dl."""
    coeffs = [1]
    for _ in range(l):
        nxt = [0] * (len(coeffs) + d)
        for j, c in enumerate(coeffs):
            for k in range(d + 1):
                nxt[j + k] += c
        coeffs = nxt
    return coeffs


def kostka_generating(i: int, d: int, l: int) -> int:
    _check_dl(d, l)
    if not 0 <= i <= d * l:
        return 0
    C = box_power_coefficients(d, l)

    def coef(j: int) -> int:
        return C[j] if 0 <= j < len(C) else 0

    return coef((d * l - i) // 2) - coef((d * l - i - 1) // 2)


def kostka_tableau(i: int, d: int, l: int, bound: int = DEFAULT_TABLEAU_BOUND) -> int:
    """Count SSYT of shape ((dl+i)/2, (dl-i)/2) with content (d, ..., d).

    Entries 1..l are placed in increasing order; for each value we try
    every split between the two rows and keep the filling only if rows
    stay weakly increasing and columns strictly increasing.  Exponential
    in general, hence the bound on dl.
    """
    _check_dl(d, l)
    if d * l > bound:
        raise OracleBoundExceeded(f"d*l = {d * l} exceeds tableau oracle bound {bound}")
    if not _in_support(i, d, l):
        return 0
    top_len, bottom_len = (d * l + i) // 2, (d * l - i) // 2

    def fill(value: int, top: list[int], bottom: list[int]) -> int:
        if value > l:
            return int(len(top) == top_len and len(bottom) == bottom_len)
        total = 0
        for in_top in range(d + 1):
            new_top = top + [value] * in_top
            new_bottom = bottom + [value] * (d - in_top)
            if len(new_top) > top_len or len(new_bottom) > bottom_len:
                continue
            if all(new_top[c] < new_bottom[c] for c in range(len(bottom), len(new_bottom))
                   if c < len(new_top)) and len(new_bottom) <= len(new_top):
                total += fill(value + 1, new_top, new_bottom)
        return total

    return fill(1, [], [])


def tensor_power_multiplicities(d: int, l: int) -> MultiplicityVector:
    """(Sym^d V)^{⊗l} = ⊕_i K_{i,d,l} Sym^i V."""
    return MultiplicityVector(dict(enumerate(_TABLE.row(d, l))))


def clebsch_gordan(i: int, j: int) -> MultiplicityVector:
    if i < 0 or j < 0:
        raise ValueError("symmetric power indices must be nonnegative")
    return MultiplicityVector({k: 1 for k in range(abs(i - j), i + j + 1, 2)})


def iterated_clebsch_gordan(d: int, l: int) -> MultiplicityVector:
    vec = MultiplicityVector({d: 1})
    for _ in range(l - 1):
        vec = vec.tensor(d)
    return vec


def weyl_dim(lam: Partition, m: int) -> int:
    """dim S_λ V for dim V = m (zero if λ has more than m rows)."""
    if len(lam) > m:
        return 0
    parts = lam.padded(m)
    value = prod(
        (Fraction(parts[a] - parts[b] + b - a, b - a) for a in range(m) for b in range(a + 1, m)),
        start=Fraction(1),
    )
    assert value.denominator == 1
    return int(value)


def irrep_multiplicity_m_lambda(lam: Partition) -> int:
    """Dimension m_λ of the S_d irreducible attached to λ, via shifted parts."""
    d, k = lam.weight, len(lam)
    if d < 1:
        raise ValueError("need a partition of d >= 1")
    shifted = [lam[r] + k - 1 - r for r in range(k)]
    num = factorial(d) * prod(shifted[a] - shifted[b] for a in range(k) for b in range(a + 1, k))
    den = prod(factorial(s) for s in shifted)
    assert num % den == 0
    return num // den
