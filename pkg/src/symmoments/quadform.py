"""Positive definite binary quadratic forms, class groups and their characters.

Character values are kept as exact exponents q in Q/Z (χ = exp(2πi q)) and
only turned into complex numbers at evaluation time.

Orientation: the form (a, b, c) is matched with the ideal class of
(a, (-b + √D)/2).  r(n, Q) is invariant under Q -> Q^{-1} = (a, -b, c)
((x, y) -> (x, -y)), so the character formula for r(n, Q) vanishes under
either orientation; this one is used throughout.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as cartesian

import numpy as np

from .arith import divisors, is_squarefree, kronecker
from .errors import InvalidDiscriminant, NonFundamentalDiscriminant, NotPositiveDefinite

DISC_BOUND = 10**6


@dataclass(frozen=True, order=True)
class QuadForm:
    """a x^2 + b x y + c y^2 with a > 0 and b^2 - 4ac < 0."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.D >= 0:
            raise NotPositiveDefinite(f"{self} is not positive definite")

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    @property
    def primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return abs(b) <= a <= c and not (b < 0 and (a == -b or a == c))

    def inverse(self) -> "QuadForm":
        return reduce(QuadForm(self.a, -self.b, self.c))

    def twist(self, p: int, q: int, r: int, s: int) -> "QuadForm":
        """Q(p x + q y, r x + s y) for ps - qr = 1."""
        if p * s - q * r != 1:
            raise ValueError("twist must lie in SL_2(Z)")
        a, b, c = self.a, self.b, self.c
        return QuadForm(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )


def _normalize(a: int, b: int, c: int) -> tuple[int, int, int]:
    # move b into (-a, a] by x -> x + r y
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce(form: QuadForm) -> QuadForm:
    """Unique reduced form properly equivalent to ``form``."""
    a, b, c = _normalize(form.a, form.b, form.c)
    while a > c or (a == c and b < 0):
        a, b, c = _normalize(c, -b, a)
    return QuadForm(a, b, c)


def _xgcd(x: int, y: int) -> tuple[int, int, int]:
    """(u, v, g) with u x + v y = g = gcd(x, y) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if x < 0:
        return -u0, -v0, -x
    return u0, v0, x


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Dirichlet composition of two primitive forms of the same discriminant."""
    D = f1.D
    if f2.D != D:
        raise InvalidDiscriminant(f"cannot compose discriminants {D} and {f2.D}")
    if f1.a > f2.a:
        f1, f2 = f2, f1
    a1, b1, _ = f1.a, f1.b, f1.c
    a2, b2, c2 = f2.a, f2.b, f2.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        y1, _, d = _xgcd(a2, a1)
    if s % d == 0:
        x2, y2, d1 = 0, -1, d
    else:
        x2, v, d1 = _xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce(QuadForm(a3, b3, c3))


def check_discriminant(D: int, bound: int = DISC_BOUND) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise InvalidDiscriminant(f"D={D} must be negative and ≡ 0, 1 mod 4")
    if -D > bound:
        raise InvalidDiscriminant(f"|D|={-D} exceeds the configured bound {bound}")


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def unit_count(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


def reduced_forms(D: int) -> list[QuadForm]:
    """Primitive reduced forms of discriminant D, principal form first."""
    out = []
    for a in range(1, math.isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0) or math.gcd(a, b, c) != 1:
                continue
            out.append(QuadForm(a, b, c))
    return out


def _invariant_factors(rows: list[list[int]]) -> tuple[int, ...]:
    """Invariant factors (>1) of Z^k / row span, via Smith diagonalisation."""
    M = [row[:] for row in rows]
    k = len(M)
    diag = []
    for t in range(k):
        while True:
            entries = [(abs(M[i][j]), i, j) for i in range(t, k) for j in range(t, k) if M[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            M[t], M[i] = M[i], M[t]
            for row in M:
                row[t], row[j] = row[j], row[t]
            piv = M[t][t]
            clean = True
            for i in range(t + 1, k):
                q = M[i][t] // piv
                M[i] = [x - q * y for x, y in zip(M[i], M[t])]
                clean &= M[i][t] == 0
            for j in range(t + 1, k):
                q = M[t][j] // piv
                for row in M:
                    row[j] -= q * row[t]
                clean &= M[t][j] == 0
            if clean:
                break
        diag.append(abs(M[t][t]))
    # regroup into a divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = math.gcd(diag[i], diag[j])
            if g:
                diag[i], diag[j] = g, diag[i] * diag[j] // g
    return tuple(x for x in diag if x != 1)


@dataclass(frozen=True, eq=False)
class ClassGroup:
    D: int
    forms: tuple[QuadForm, ...]
    _index: dict = field(repr=False)
    _table: dict = field(default_factory=dict, repr=False)

    @property
    def h(self) -> int:
        return len(self.forms)

    @property
    def w(self) -> int:
        return unit_count(self.D)

    def index(self, form: QuadForm) -> int:
        red = reduce(form)
        if red.D != self.D:
            raise InvalidDiscriminant(f"{form} has discriminant {red.D}, not {self.D}")
        return self._index[red]

    def mul(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        hit = self._table.get(key)
        if hit is None:
            hit = self._index[compose(self.forms[i], self.forms[j])]
            self._table[key] = hit
        return hit

    def inv(self, i: int) -> int:
        return self._index[self.forms[i].inverse()]

    @cached_property
    def _presentation(self):
        """Generators g_k with relative orders m_k and relations
        g_k^{m_k} = ∏_{j<k} g_j^{c_kj}; coords[x] = exponent vector of x."""
        coords = {0: ()}
        gens, orders, relations = [], [], []
        while len(coords) < self.h:
            g = next(x for x in range(self.h) if x not in coords)
            x, m = g, 1
            while x not in coords:
                x, m = self.mul(x, g), m + 1
            gens.append(g)
            orders.append(m)
            relations.append(coords[x])
            new = dict(coords)
            power = 0
            for j in range(1, m):
                power = g if j == 1 else self.mul(power, g)
                for elt, vec in coords.items():
                    new[self.mul(elt, power)] = vec + (j,)
            coords = {e: v + (0,) * (len(gens) - len(v)) for e, v in new.items()}
        return gens, orders, relations, coords

    @cached_property
    def structure(self) -> tuple[int, ...]:
        _, orders, relations, _ = self._presentation
        k = len(orders)
        if k == 0:
            return ()
        rows = []
        for t in range(k):
            row = [-c for c in relations[t]] + [0] * (k - len(relations[t]))
            row[t] += orders[t]
            rows.append(row)
        return _invariant_factors(rows)

    @cached_property
    def characters(self) -> list[tuple[Fraction, ...]]:
        """Character table as exponents: characters[χ][c] = q with χ(c) = e^{2πiq}.

        Index 0 is the trivial character.
        """
        _, orders, relations, coords = self._presentation
        assignments: list[tuple[Fraction, ...]] = [()]
        for m, rel in zip(orders, relations):
            nxt = []
            for qs in assignments:
                base = sum((c * q for c, q in zip(rel, qs)), Fraction(0))
                nxt.extend(qs + (((base + t) / m) % 1,) for t in range(m))
            assignments = nxt
        table = []
        for qs in assignments:
            table.append(tuple(sum((e * q for e, q in zip(coords[c], qs)), Fraction(0)) % 1 for c in range(self.h)))
        return table

    def chi(self, k: int, c: int) -> complex:
        return cmath.exp(2j * math.pi * self.characters[k][c])

    def character_matrix(self) -> np.ndarray:
        """[χ_k(c)] as complex array, characters by rows."""
        q = np.array([[float(x) for x in row] for row in self.characters])
        return np.exp(2j * np.pi * q)


def class_group(D: int, bound: int = DISC_BOUND) -> ClassGroup:
    check_discriminant(D, bound)
    forms = tuple(reduced_forms(D))
    return ClassGroup(D, forms, {f: i for i, f in enumerate(forms)})


# -- representation numbers ------------------------------------------------

def count_representations(form: QuadForm, n: int) -> int:
    """#{(x, y) in Z^2 : Q(x, y) = n}, solving the quadratic in x for each y."""
    if n < 1:
        raise ValueError("n must be positive")
    a, b, c, D = form.a, form.b, form.c, form.D
    ymax = math.isqrt(4 * a * n // -D)
    total = 0
    for y in range(-ymax, ymax + 1):
        disc = D * y * y + 4 * a * n
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for num in {-b * y + s, -b * y - s}:
            if num % (2 * a) == 0:
                total += 1
    return total


def representation_counts(form: QuadForm, N: int) -> np.ndarray:
    """r(n, Q) for 0 <= n <= N by walking the lattice points of Q <= N."""
    a, b, c, D = form.a, form.b, form.c, form.D
    counts = np.zeros(N + 1, dtype=np.int64)
    ymax = math.isqrt(4 * a * N // -D)
    for y in range(-ymax, ymax + 1):
        disc = D * y * y + 4 * a * N
        if disc < 0:
            continue
        s = math.isqrt(disc)
        lo = -((b * y + s) // (2 * a)) - 1
        hi = (-b * y + s) // (2 * a) + 1
        x = np.arange(lo, hi + 1, dtype=np.int64)
        vals = a * x * x + b * y * x + c * y * y
        vals = vals[vals <= N]
        counts += np.bincount(vals, minlength=N + 1)
    return counts


def ideal_count(D: int, n: int) -> int:
    """Number of integral ideals of norm n in Q(√D): Σ_{m | n} (D/m)."""
    if not is_fundamental(D):
        raise NonFundamentalDiscriminant(f"D={D} is not a fundamental discriminant")
    return sum(kronecker(D, m) for m in divisors(n))


@dataclass(frozen=True, eq=False)
class ThetaCoefficients:
    chi: int
    values: np.ndarray  # indexed by n, values[0] unused

    def __getitem__(self, n: int) -> complex:
        return complex(self.values[n])


def class_counts(G: ClassGroup, N: int) -> np.ndarray:
    """r(n, Q_c) for every class c, shape (h, N + 1)."""
    return np.stack([representation_counts(f, N) for f in G.forms])


def theta_coefficients(G: ClassGroup, chi: int, N: int, counts: np.ndarray | None = None) -> ThetaCoefficients:
    """a_χ(n) = Σ_c χ(c) r(n, Q_c) / w_D."""
    if not is_fundamental(G.D):
        raise NonFundamentalDiscriminant(f"D={G.D} is not a fundamental discriminant")
    counts = class_counts(G, N) if counts is None else counts
    row = G.character_matrix()[chi]
    values = row @ counts[:, : N + 1] / G.w
    values[0] = 0
    return ThetaCoefficients(chi, values)


def verify_character_decomposition(G: ClassGroup, form: QuadForm, N: int) -> float:
    """max_n |r(n, Q) - (w/h) Σ_χ conj χ(a_Q) a_χ(n)| over 1 <= n <= N.

    The left side is solved per n; the right side is rebuilt from a bulk
    lattice enumeration of every class.
    """
    if not is_fundamental(G.D):
        raise NonFundamentalDiscriminant(f"D={G.D} is not a fundamental discriminant")
    cls = G.index(form)
    counts = class_counts(G, N)
    X = G.character_matrix()
    theta = X @ counts / G.w  # theta[χ, n]
    recon = (G.w / G.h) * (np.conj(X[:, cls]) @ theta)
    direct = np.array([0] + [count_representations(form, n) for n in range(1, N + 1)])
    return float(np.max(np.abs(recon[1:] - direct[1:]), initial=0.0))
