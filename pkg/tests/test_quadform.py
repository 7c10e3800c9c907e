import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from symmoments.errors import InvalidDiscriminant, NonFundamentalDiscriminant, NotPositiveDefinite
from symmoments.quadform import (
    QuadForm,
    class_counts,
    class_group,
    compose,
    count_representations,
    ideal_count,
    is_fundamental,
    reduce,
    reduced_forms,
    representation_counts,
    theta_coefficients,
    unit_count,
    verify_character_decomposition,
)

DISCS = (-3, -4, -7, -8, -11, -15, -20, -23, -24)
ALL_D = [D for D in range(-3, -2001, -1) if D % 4 in (0, 1)]


def brute_r(form: QuadForm, n: int) -> int:
    bound = 2 * math.isqrt(n) + 2 + int(math.sqrt(4 * form.c * n / -form.D)) + int(math.sqrt(4 * form.a * n / -form.D))
    return sum(1 for x in range(-bound, bound + 1) for y in range(-bound, bound + 1) if form(x, y) == n)


def class_number_brute(D: int) -> int:
    """Reduced primitive forms counted straight from the definition."""
    h = 0
    for a in range(1, math.isqrt(-D) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c >= a and not (a == c and b < 0) and math.gcd(a, math.gcd(b, c)) == 1:
                h += 1
    return h


def _completion(p: int, q: int) -> tuple[int, int]:
    """(u, v) with p u + q v = 1 for coprime p, q."""
    r0, r1, u0, u1, v0, v1 = p, q, 1, 0, 0, 1
    while r1:
        k = r0 // r1
        r0, r1, u0, u1, v0, v1 = r1, r0 - k * r1, u1, u0 - k * u1, v1, v0 - k * v1
    return (u0, v0) if r0 == 1 else (-u0, -v0)


COPRIME = [(1, 0)] + [(p, q) for p in range(-5, 6) for q in range(-5, 6) if math.gcd(p, q) == 1 and (p, q) != (1, 0)]


@st.composite
def sl2(draw):
    p, q = draw(st.sampled_from(COPRIME))
    u, v = _completion(p, q)
    k = draw(st.integers(-5, 5))
    return p, q, k * p - v, k * q + u


class TestForms:
    def test_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            QuadForm(1, 0, -1)
        with pytest.raises(NotPositiveDefinite):
            QuadForm(-1, 0, -1)
        assert QuadForm(2, 2, 3).D == -20

    def test_twist_must_be_unimodular(self):
        with pytest.raises(ValueError):
            QuadForm(1, 0, 1).twist(2, 0, 0, 1)

    @given(st.sampled_from([(D, f) for D in (-20, -23, -47, -84, -420, -3299) for f in reduced_forms(D)]), sl2())
    def test_reduce_is_class_invariant(self, Df, M):
        _, f = Df
        g = f.twist(*M)
        assert reduce(g) == f
        assert reduce(reduce(g)) == reduce(g)

    @given(st.integers(1, 30), st.integers(-30, 30), st.integers(1, 30))
    def test_reduce_lands_on_reduced(self, a, b, c):
        assume(b * b - 4 * a * c < 0)
        f = reduce(QuadForm(a, b, c))
        assert f.is_reduced and f.D == b * b - 4 * a * c

    def test_representation_examples(self):
        assert count_representations(QuadForm(1, 0, 5), 3) == 0
        assert count_representations(QuadForm(2, 2, 3), 3) == 4
        assert count_representations(QuadForm(1, 0, 1), 25) == 12

    @given(st.sampled_from([QuadForm(1, 0, 1), QuadForm(1, 1, 1), QuadForm(2, 2, 3), QuadForm(3, 2, 5)]),
           st.integers(1, 200))
    def test_counts_against_brute_force(self, f, n):
        assert count_representations(f, n) == brute_r(f, n)

    @pytest.mark.parametrize("f", [QuadForm(1, 0, 1), QuadForm(2, 1, 3), QuadForm(3, 2, 7)])
    def test_bulk_matches_per_n(self, f):
        r = representation_counts(f, 500)
        assert r[0] == 1
        assert [int(v) for v in r[1:]] == [count_representations(f, n) for n in range(1, 501)]

    @pytest.mark.parametrize("x", [10**3, 10**4, 10**5])
    def test_circle(self, x):
        total = int(representation_counts(QuadForm(1, 0, 1), x)[1:].sum())
        assert abs(total - math.pi * x) <= 8 * math.sqrt(x)


class TestDiscriminants:
    @pytest.mark.parametrize("D", [0, 5, -1, -2, -5])
    def test_invalid(self, D):
        with pytest.raises(InvalidDiscriminant):
            class_group(D)

    def test_bound(self):
        with pytest.raises(InvalidDiscriminant):
            class_group(-10**6 - 3)
        with pytest.raises(InvalidDiscriminant):
            class_group(-23, bound=20)

    def test_fundamental(self):
        assert [D for D in (-3, -4, -7, -8, -12, -16, -20, -27, -28) if is_fundamental(D)] == [-3, -4, -7, -8, -20]

    def test_non_fundamental_rejected_on_ideal_side(self):
        G = class_group(-12)
        assert G.h == 1
        with pytest.raises(NonFundamentalDiscriminant):
            ideal_count(-12, 3)
        with pytest.raises(NonFundamentalDiscriminant):
            theta_coefficients(G, 0, 10)

    def test_unit_count(self):
        assert [unit_count(D) for D in (-3, -4, -7)] == [6, 4, 2]


class TestClassGroup:
    @pytest.mark.parametrize("D,h,structure", [
        (-3, 1, ()), (-20, 2, (2,)), (-23, 3, (3,)), (-84, 4, (2, 2)), (-420, 8, (2, 2, 2)),
        (-47, 5, (5,)), (-3299, 27, (3, 9)), (-4420, 16, (2, 2, 4)), (-56, 4, (4,)),
    ])
    def test_structure(self, D, h, structure):
        G = class_group(D)
        assert G.h == h and G.structure == structure
        assert math.prod(structure) == h

    @pytest.mark.parametrize("D", ALL_D[::7])
    def test_class_number(self, D):
        assert class_group(D).h == class_number_brute(D)

    @given(st.sampled_from(ALL_D), st.data())
    def test_group_laws(self, D, data):
        G = class_group(D)
        i, j, k = (data.draw(st.integers(0, G.h - 1)) for _ in range(3))
        assert G.mul(0, i) == i
        assert G.mul(i, G.inv(i)) == 0
        assert G.mul(i, j) == G.mul(j, i)
        assert G.mul(G.mul(i, j), k) == G.mul(i, G.mul(j, k))

    @given(st.sampled_from(ALL_D), st.data())
    def test_compose_respects_twists(self, D, data):
        forms = reduced_forms(D)
        f = data.draw(st.sampled_from(forms))
        g = data.draw(st.sampled_from(forms))
        M = data.draw(sl2())
        assert compose(f.twist(*M), g) == compose(f, g)

    @pytest.mark.parametrize("D", DISCS + (-84, -420, -3299, -4420))
    def test_characters(self, D):
        G = class_group(D)
        X = G.character_matrix()
        assert np.allclose(X @ X.conj().T, G.h * np.eye(G.h), atol=1e-12)
        assert all(q == 0 for q in G.characters[0])
        # homomorphism, exactly in Q/Z
        for chi in G.characters:
            for i in range(G.h):
                for j in range(G.h):
                    assert (chi[i] + chi[j] - chi[G.mul(i, j)]) % 1 == 0
        assert all(isinstance(q, Fraction) for q in G.characters[-1])


class TestIdeals:
    def test_examples(self):
        assert ideal_count(-20, 3) == 2
        assert ideal_count(-4, 5) == 2
        assert ideal_count(-4, 3) == 0

    @pytest.mark.parametrize("D", DISCS)
    def test_gauss_sum(self, D):
        G = class_group(D)
        total = class_counts(G, 3000).sum(axis=0)
        assert all(total[n] == G.w * ideal_count(D, n) for n in range(1, 3001))

    def test_theta_examples(self):
        G = class_group(-20)
        nontrivial = next(k for k in range(G.h) if any(G.characters[k]))
        assert theta_coefficients(G, nontrivial, 10)[3] == pytest.approx(-2)
        assert theta_coefficients(class_group(-4), 0, 10)[5] == pytest.approx(2)

    @pytest.mark.parametrize("D", DISCS)
    def test_decomposition(self, D):
        G = class_group(D)
        for f in G.forms:
            assert verify_character_decomposition(G, f, 2000) < 1e-9

    def test_decomposition_notices_wrong_class(self):
        # r(n) for the principal form differs from the non-principal one on D = -23
        G = class_group(-23)
        r0 = representation_counts(G.forms[0], 200)
        r1 = representation_counts(G.forms[1], 200)
        assert not np.array_equal(r0, r1)
