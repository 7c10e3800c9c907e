"""Named invariant checks behind ``symmoments verify``.

Every check takes a :class:`VerifyContext` and raises
:class:`InvariantViolation` on failure.  Suites are addressable by check
name, by module name, or as ``all``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, isqrt
from typing import Callable

import numpy as np

from . import combinat, eigenform, moments, quadform, sympow
from .arith import prime_power_split, primes_upto
from .errors import InvariantViolation, SymMomentsError

CHECK_DISCS = (-3, -4, -7, -8, -11, -15, -20, -23, -24)


@dataclass
class VerifyContext:
    N: int = 10_000
    cache_dir: str | None = None
    oracle_bound: int = combinat.DEFAULT_TABLEAU_BOUND
    seed: int = 20240501
    _series: dict = field(default_factory=dict, repr=False)

    @cached_property
    def delta(self) -> eigenform.CoefficientSeries:
        return eigenform.obtain_delta(self.N, self.cache_dir)

    def sym(self, d: int) -> sympow.SymPowerSeries:
        if d not in self._series:
            self._series[d] = sympow.sym_series(self.delta, d)
        return self._series[d]

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    run: Callable[[VerifyContext], None]
    doc: str


REGISTRY: dict[str, Check] = {}


def check(name: str, module: str):
    def wrap(fn: Callable[[VerifyContext], None]):
        REGISTRY[name] = Check(name, module, fn, (fn.__doc__ or "").strip())
        return fn
    return wrap


def fail(name: str, detail: str) -> None:
    raise InvariantViolation(name, detail)


# -- combinat --------------------------------------------------------------

@check("kostka-oracles", "combinat")
def _kostka_oracles(ctx: VerifyContext) -> None:
    """closed form = recursion = generating function (= tableaux when dl <= bound), d, l <= 5."""
    for d in range(1, 6):
        for l in range(1, 6):
            for i in range(-1, d * l + 2):
                vals = {combinat.kostka_closed_form(i, d, l), combinat.kostka_recursive(i, d, l),
                        combinat.kostka_generating(i, d, l)}
                if d * l <= ctx.oracle_bound and 0 <= i:
                    vals.add(combinat.kostka_tableau(i, d, l, bound=ctx.oracle_bound))
                if len(vals) != 1:
                    fail("kostka-oracles", f"K_({i},{d},{l}) routes disagree: {sorted(vals)}")
    got = [combinat.kostka_closed_form(0, 2, l) for l in range(1, 9)]
    if got != [0, 1, 1, 3, 6, 15, 36, 91]:
        fail("kostka-oracles", f"K_(0,2,l) = {got}")


@check("dimension-identity", "combinat")
def _dimension_identity(ctx: VerifyContext) -> None:
    """Σ (i+1) K_{i,d,l} = (d+1)^l for d, l <= 6."""
    for d in range(1, 7):
        for l in range(1, 7):
            total = sum((i + 1) * combinat.kostka_closed_form(i, d, l) for i in range(d * l + 1))
            if total != (d + 1) ** l:
                fail("dimension-identity", f"(d, l) = ({d}, {l}): {total} != {(d + 1) ** l}")


@check("parity-vanishing", "combinat")
def _parity_vanishing(ctx: VerifyContext) -> None:
    """For l >= 2, K_{i,d,l} = 0 exactly when dl - i is odd or i is outside [0, dl].

    At l = 1 the support is {d} alone.
    """
    for d in range(1, 6):
        for l in range(1, 6):
            for i in range(-3, d * l + 4):
                zero = combinat.kostka_closed_form(i, d, l) == 0
                if l == 1:
                    expect = i != d
                else:
                    expect = (d * l - i) % 2 == 1 or not 0 <= i <= d * l
                if zero != expect:
                    fail("parity-vanishing", f"K_({i},{d},{l}) zero={zero}")


@check("clebsch-gordan", "combinat")
def _clebsch_gordan(ctx: VerifyContext) -> None:
    """Kostka multiplicities agree with iterated Clebsch-Gordan, d <= 4, l <= 5."""
    for d in range(1, 5):
        for l in range(1, 6):
            if combinat.tensor_power_multiplicities(d, l) != combinat.iterated_clebsch_gordan(d, l):
                fail("clebsch-gordan", f"(d, l) = ({d}, {l})")


@check("main-term-degree", "combinat")
def _main_term_degree(ctx: VerifyContext) -> None:
    """K_{0,1,2m} = C(2m, m) - C(2m, m-1)."""
    for m in range(1, 10):
        if combinat.kostka_closed_form(0, 1, 2 * m) != comb(2 * m, m) - comb(2 * m, m - 1):
            fail("main-term-degree", f"m = {m}")


@check("weyl-dimension", "combinat")
def _weyl_dimension(ctx: VerifyContext) -> None:
    """weyl_dim(λ, 2) = λ1 - λ2 + 1 for two-row λ."""
    for l1 in range(0, 12):
        for l2 in range(0, l1 + 1):
            if combinat.weyl_dim(combinat.Partition((l1, l2)), 2) != l1 - l2 + 1:
                fail("weyl-dimension", f"λ = ({l1}, {l2})")


# -- eigenform -------------------------------------------------------------

@check("eigenform-integrity", "eigenform")
def _eigenform_integrity(ctx: VerifyContext) -> None:
    """Normalization, Deligne, multiplicativity and the Hecke recursion on Δ."""
    eigenform.validate(ctx.delta)


@check("ramanujan-691", "eigenform")
def _ramanujan(ctx: VerifyContext) -> None:
    """τ(n) ≡ σ_11(n) mod 691 for n <= 1000."""
    bad = eigenform.ramanujan_691_failures(ctx.delta, 1000)
    if bad:
        fail("ramanujan-691", f"first failure at n = {bad[0]}")


@check("hecke-regeneration", "eigenform")
def _hecke_regeneration(ctx: VerifyContext) -> None:
    """Rebuilding λ(n) from prime powers by multiplicativity reproduces the series."""
    N = ctx.delta.N
    _, q, m = prime_power_split(N)
    qs, ms = q.tolist(), m.tolist()
    lam = ctx.delta.normalized.tolist()
    rebuilt = list(lam)
    for n in range(2, N + 1):
        if ms[n] > 1:
            rebuilt[n] = rebuilt[qs[n]] * rebuilt[ms[n]]
    err = max((abs(x - y) for x, y in zip(rebuilt[1:], lam[1:])), default=0.0)
    if err > eigenform.TOL:
        fail("hecke-regeneration", f"float rebuild off by {err:.3g}")
    if ctx.delta.raw is not None:
        a = list(ctx.delta.raw)
        for n in range(2, N + 1):
            if ms[n] > 1:
                a[n] = a[qs[n]] * a[ms[n]]
        if tuple(a) != ctx.delta.raw:
            fail("hecke-regeneration", "integer rebuild differs")


# -- sympow ----------------------------------------------------------------

def _some_primes(ctx: VerifyContext, limit: int = 1000) -> list[int]:
    return primes_upto(min(limit, ctx.N)).tolist()


@check("chebyshev", "sympow")
def _chebyshev(ctx: VerifyContext) -> None:
    """λ_{Sym^d}(p) = U_d(λ(p)/2), d <= 12."""
    primes = _some_primes(ctx)
    for p in ctx.rng().choice(primes, size=min(20, len(primes)), replace=False).tolist():
        x = ctx.delta[p] / 2
        for d in range(13):
            got = sympow.sym_eigenvalue(ctx.delta, p, 1, d)
            if abs(got - sympow.chebyshev_u(d, x)) > 1e-10:
                fail("chebyshev", f"p = {p}, d = {d}")


def complex_sym_eigenvalue(theta: float, d: int, r: int) -> float:
    """h_r of the d+1 Satake roots e^{imθ}: sum over monomials of total degree r."""
    roots = [cmath.exp(1j * m * theta) for m in range(d, -d - 1, -2)]
    h = [1.0 + 0j] + [0j] * r
    for z in roots:
        for k in range(1, r + 1):
            h[k] += z * h[k - 1]
    return h[r].real


@check("complex-oracle", "sympow")
def _complex_oracle(ctx: VerifyContext) -> None:
    """Recurrence values of λ_{Sym^d}(p^r) match the complex monomial sum, d, r <= 6."""
    for theta in ctx.rng().uniform(0, math.pi, size=25).tolist():
        lam = 2 * math.cos(theta)
        for d in range(7):
            h = sympow.prime_power_values(lam, d, 6)
            for r in range(7):
                if abs(h[r] - complex_sym_eigenvalue(theta, d, r)) > 1e-9:
                    fail("complex-oracle", f"θ = {theta!r}, d = {d}, r = {r}")


@check("unitarity", "sympow")
def _unitarity(ctx: VerifyContext) -> None:
    """|λ_{Sym^d}(p)| <= d + 1 at every computed prime."""
    primes = primes_upto(ctx.N)
    for d in range(1, 9):
        vals = np.abs(ctx.sym(d).values[primes])
        if (vals > d + 1 + 1e-9).any():
            fail("unitarity", f"d = {d}, p = {int(primes[np.argmax(vals)])}")


@check("tensor-identity", "sympow")
def _tensor_identity(ctx: VerifyContext) -> None:
    """λ_{Sym^d}(p)^l = Σ K_{i,d,l} λ_{Sym^i}(p) for p < 1000, dl <= 24."""
    for p in _some_primes(ctx):
        for d in range(1, 25):
            for l in range(1, 24 // d + 1):
                res = sympow.verify_tensor_identity(ctx.delta, d, l, p)
                if res >= 1e-9:
                    fail("tensor-identity", f"(d, l, p) = ({d}, {l}, {p}): residual {res:.3g}")


@check("u-factor", "sympow")
def _u_factor(ctx: VerifyContext) -> None:
    """Local U-factor has c0 = 1 and c1 = 0 at the first 25 primes."""
    for p in _some_primes(ctx, 100)[:25]:
        for d, l in ((1, 2), (2, 2), (2, 3), (3, 2), (1, 3), (1, 4)):
            c = sympow.verify_local_u_factor(ctx.delta, d, l, p)
            if abs(c[0] - 1) > 1e-9 or abs(c[1]) > 1e-9:
                fail("u-factor", f"(d, l, p) = ({d}, {l}, {p}): c0 = {c[0]!r}, c1 = {c[1]!r}")


# -- quadform --------------------------------------------------------------

@check("reduce-invariance", "quadform")
def _reduce_invariance(ctx: VerifyContext) -> None:
    """Reduction is idempotent and constant on SL2(Z) orbits."""
    rng = ctx.rng()
    for D in (-3, -4, -20, -23, -47, -84, -420):
        for f in quadform.reduced_forms(D):
            if quadform.reduce(f) != f:
                fail("reduce-invariance", f"{f} not fixed")
            for _ in range(20):
                p, q, k = (int(v) for v in rng.integers(-5, 6, size=3))
                g, (u, v) = _ext_gcd(p, q)
                if g != 1:
                    continue
                # [[p, q], [k p - v, k q + u]] has determinant p u + q v = 1
                twisted = f.twist(p, q, k * p - v, k * q + u)
                if quadform.reduce(twisted) != f:
                    fail("reduce-invariance", f"{f} twisted by ({p}, {q}, {k}) reduces elsewhere")


def _ext_gcd(a: int, b: int) -> tuple[int, tuple[int, int]]:
    """g = gcd(a, b) >= 0 with a u + b v = g."""
    r0, r1, u0, u1, v0, v1 = a, b, 1, 0, 0, 1
    while r1:
        k = r0 // r1
        r0, r1, u0, u1, v0, v1 = r1, r0 - k * r1, u1, u0 - k * u1, v1, v0 - k * v1
    if r0 < 0:
        r0, u0, v0 = -r0, -u0, -v0
    return r0, (u0, v0)


@check("group-laws", "quadform")
def _group_laws(ctx: VerifyContext) -> None:
    """Associativity, identity and inverses of composition for |D| <= 2000."""
    for D in range(-3, -2001, -1):
        if D % 4 not in (0, 1):
            continue
        G = quadform.class_group(D)
        h = G.h
        T = np.array([[G.mul(i, j) for j in range(h)] for i in range(h)])
        if (T[0] != np.arange(h)).any():
            fail("group-laws", f"D = {D}: principal form is not the identity")
        inv = [G.inv(i) for i in range(h)]
        if any(T[i, inv[i]] != 0 for i in range(h)):
            fail("group-laws", f"D = {D}: inverse law fails")
        idx = np.arange(h)
        left = T[T[:, :, None], idx[None, None, :]]  # (i j) k
        right = T[idx[:, None, None], T[None, :, :]]  # i (j k)
        if not np.array_equal(left, right):
            fail("group-laws", f"D = {D}: associativity fails")


@check("gauss-sum", "quadform")
def _gauss_sum(ctx: VerifyContext) -> None:
    """Σ_c r(n, Q_c) = w_D · #{ideals of norm n}."""
    n_max = min(ctx.N, 10_000)
    for D in CHECK_DISCS:
        G = quadform.class_group(D)
        total = quadform.class_counts(G, n_max).sum(axis=0)
        for n in range(1, n_max + 1):
            if total[n] != G.w * quadform.ideal_count(D, n):
                fail("gauss-sum", f"D = {D}, n = {n}")


@check("circle", "quadform")
def _circle(ctx: VerifyContext) -> None:
    """Σ_{n<=x} r(n, x^2 + y^2) within πx ± 8√x."""
    Q = quadform.QuadForm(1, 0, 1)
    for x in (10**3, 10**4, 10**5):
        total = int(quadform.representation_counts(Q, x)[1:].sum())
        if abs(total - math.pi * x) > 8 * math.sqrt(x):
            fail("circle", f"x = {x}: {total}")


@check("character-decomposition", "quadform")
def _character_decomposition(ctx: VerifyContext) -> None:
    """r(n, Q) = (w/h) Σ_χ conj χ(Q) a_χ(n) for every class."""
    n_max = min(ctx.N, 10_000)
    for D in CHECK_DISCS:
        G = quadform.class_group(D)
        for f in G.forms:
            res = quadform.verify_character_decomposition(G, f, n_max)
            if res >= 1e-9:
                fail("character-decomposition", f"D = {D}, Q = {f}: residual {res:.3g}")


@check("character-orthogonality", "quadform")
def _orthogonality(ctx: VerifyContext) -> None:
    """The character matrix is h times a unitary matrix."""
    for D in CHECK_DISCS + (-84, -420, -3299, -4420):
        G = quadform.class_group(D)
        X = G.character_matrix()
        if np.abs(X @ X.conj().T - G.h * np.eye(G.h)).max() > 1e-12 * G.h:
            fail("character-orthogonality", f"D = {D}")


# -- moments ---------------------------------------------------------------

@check("theta-tables", "moments")
def _theta_tables(ctx: VerifyContext) -> None:
    """Both printed exponent tables, matched at their printed precision."""
    for table, make in ((moments.TABLE_D2, lambda v: moments.theta(2, v)),
                        (moments.TABLE_L2, lambda v: moments.theta(v, 2))):
        for v, printed in table.items():
            got = make(v).rounded(len(printed) - 2)
            if got != printed:
                fail("theta-tables", f"entry {v}: {got} != {printed}")


@check("theta-monotone", "moments")
def _theta_monotone(ctx: VerifyContext) -> None:
    """θ increases in l for d = 2 and in d for l = 2."""
    rows = ([moments.theta(2, l).theta_exact for l in range(3, 9)],
            [moments.theta(d, 2).theta_exact for d in range(3, 9)])
    for row in rows:
        if any(a >= b for a, b in zip(row, row[1:])):
            fail("theta-monotone", str(row))


@check("summation-exact", "moments")
def _summation_exact(ctx: VerifyContext) -> None:
    """Compensated sums of integer-valued terms are exact."""
    ones = ctx.sym(0)
    xs = moments.default_cutoffs(ctx.N, 50)
    if moments.moment_sums(ones, 3, xs) != [float(x) for x in xs]:
        fail("summation-exact", "d = 0 moment sums differ from floor(x)")
    if moments.moment_sum(ones, 1, ctx.N) != ctx.N:
        fail("summation-exact", f"d = 0 sum to {ctx.N}")


def lattice_count(form: quadform.QuadForm, x: int) -> int:
    """#{(u, v) != (0, 0) : Q(u, v) <= x}, counted row by row with isqrt."""
    a, b, c, D = form.a, form.b, form.c, form.D
    total = 0
    for v in range(-isqrt(4 * a * x // -D), isqrt(4 * a * x // -D) + 1):
        disc = D * v * v + 4 * a * x
        if disc < 0:
            continue
        s = isqrt(disc)
        # a u^2 + b v u + c v^2 <= x  <=>  |2au + bv| <= sqrt(disc)
        lo = -((b * v + s) // (2 * a))
        hi = (s - b * v) // (2 * a)
        total += max(0, hi - lo + 1)
    return total - 1


@check("bqf-trivial-sum", "moments")
def _bqf_trivial(ctx: VerifyContext) -> None:
    """bqf_moment_sum with d = 0, l = 1 equals the lattice point count."""
    ones = ctx.sym(0)
    for form in (quadform.QuadForm(1, 0, 1), quadform.QuadForm(2, 2, 3), quadform.QuadForm(1, 1, 6)):
        for x in sorted({1, 2, 10, 999, ctx.N}):
            got = moments.bqf_moment_sum(ones, 1, form, x)
            if got != lattice_count(form, x):
                fail("bqf-trivial-sum", f"Q = {form}, x = {x}: {got} != {lattice_count(form, x)}")


@check("odd-moment-decay", "moments")
def _odd_moment_decay(ctx: VerifyContext) -> None:
    """|S(x)|/x at x = N is below its value at N/100 when dl is odd (d = 1, l = 3, 5)."""
    lo = max(1, ctx.N // 100)
    for l in (3, 5):
        S = ctx.sym(1)
        a, b = abs(moments.moment_sum(S, l, lo)) / lo, abs(moments.moment_sum(S, l, ctx.N)) / ctx.N
        if not b < a:
            fail("odd-moment-decay", f"l = {l}: {b!r} at {ctx.N} vs {a!r} at {lo}")


@check("main-term-fit", "moments")
def _main_term_fit(ctx: VerifyContext) -> None:
    """Degree-0 fit for (d, l) = (1, 2) is positive with residual exponent < 1."""
    xs = moments.default_cutoffs(ctx.N)
    fit = moments.fit_main_term(1, 2, xs, moments.moment_sums(ctx.sym(1), 2, xs))
    if not fit.fitted_coeffs[0] > 0 or not fit.residual_exponent_estimate < 1:
        fail("main-term-fit", f"coefficient {fit.fitted_coeffs[0]!r}, exponent {fit.residual_exponent_estimate!r}")


# -- running ---------------------------------------------------------------

MODULES = ("combinat", "eigenform", "sympow", "quadform", "moments")


def resolve(suite: str) -> list[Check]:
    if suite == "all":
        return list(REGISTRY.values())
    if suite in MODULES:
        return [c for c in REGISTRY.values() if c.module == suite]
    if suite in REGISTRY:
        return [REGISTRY[suite]]
    raise KeyError(suite)


@dataclass(frozen=True)
class Outcome:
    name: str
    passed: bool
    detail: str = ""


def run_suite(suite: str, ctx: VerifyContext) -> list[Outcome]:
    """Run every check in the suite; a check fails on any package error."""
    out = []
    for c in resolve(suite):
        try:
            c.run(ctx)
        except SymMomentsError as exc:
            out.append(Outcome(c.name, False, f"{type(exc).__name__}: {exc}"))
        else:
            out.append(Outcome(c.name, True))
    return out
