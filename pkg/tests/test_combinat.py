import itertools
import threading
from collections import Counter
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from symmoments.combinat import (
    KostkaTable,
    MultiplicityVector,
    Partition,
    box_power_coefficients,
    clebsch_gordan,
    irrep_multiplicity_m_lambda,
    iterated_clebsch_gordan,
    kostka_closed_form,
    kostka_generating,
    kostka_recursive,
    kostka_tableau,
    tensor_power_multiplicities,
    weyl_dim,
)
from symmoments.errors import OracleBoundExceeded


def weight_multiplicities(d: int, l: int) -> Counter:
    """Weights of (Sym^d V)^{⊗l} under the torus: sums of l entries of {d, d-2, ..., -d}."""
    return Counter(sum(c) for c in itertools.product(range(-d, d + 1, 2), repeat=l))


def kostka_by_characters(i: int, d: int, l: int) -> int:
    """Highest-weight count: mult(weight i) - mult(weight i + 2)."""
    w = weight_multiplicities(d, l)
    return w[i] - w[i + 2] if i >= 0 else 0


def ssyt_count(shape: tuple[int, ...], m: int) -> int:
    """Brute-force SSYT of the given shape with entries in 1..m."""
    cells = [(r, c) for r, n in enumerate(shape) for c in range(n)]
    count = 0
    for values in itertools.product(range(1, m + 1), repeat=len(cells)):
        T = dict(zip(cells, values))
        if all(T[r, c] <= T[r, c + 1] for r, c in cells if (r, c + 1) in T) and \
           all(T[r, c] < T[r + 1, c] for r, c in cells if (r + 1, c) in T):
            count += 1
    return count


def hook_length_dim(lam: tuple[int, ...]) -> int:
    n = sum(lam)
    conj = [sum(1 for p in lam if p > c) for c in range(lam[0])] if lam else []
    hooks = 1
    for r, row in enumerate(lam):
        for c in range(row):
            hooks *= (row - c - 1) + (conj[c] - r - 1) + 1
    return factorial(n) // hooks


class TestPartition:
    def test_trailing_zeros_are_canonical(self):
        assert Partition((3, 1, 0, 0)) == Partition((3, 1))
        assert hash(Partition((2, 0))) == hash(Partition((2,)))
        assert Partition((3, 1))[5] == 0
        assert Partition((3, 1)).padded(4) == (3, 1, 0, 0)

    @pytest.mark.parametrize("parts", [(1, 2), (3, -1)])
    def test_rejects_bad_parts(self, parts):
        with pytest.raises(ValueError):
            Partition(parts)

    def test_weight_check(self):
        assert Partition((2, 1), weight=3).weight == 3
        with pytest.raises(ValueError):
            Partition((2, 1), weight=4)


class TestMultiplicityVector:
    def test_render_and_dimension(self):
        K = tensor_power_multiplicities(2, 2)
        assert str(K) == "0:1 2:1 4:1"
        assert K.dimension() == 9
        assert K[1] == 0 and K[99] == 0

    def test_zero_entries_dropped(self):
        assert MultiplicityVector({0: 0, 2: 3}) == {2: 3}
        assert len(MultiplicityVector({0: 0, 2: 3})) == 1

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            MultiplicityVector({1: -1})

    @given(st.integers(1, 5), st.integers(1, 5))
    def test_tensor_step(self, d, l):
        assert tensor_power_multiplicities(d, l).tensor(d) == tensor_power_multiplicities(d, l + 1)


class TestKostka:
    def test_known_sequence(self):
        assert [kostka_closed_form(0, 2, l) for l in range(1, 9)] == [0, 1, 1, 3, 6, 15, 36, 91]

    def test_known_decomposition(self):
        assert tensor_power_multiplicities(2, 3) == {0: 1, 2: 3, 4: 2, 6: 1}
        assert kostka_closed_form(0, 2, 4) == 3

    def test_catalan_like_column(self):
        # d = 1: ballot numbers C(l, (l-i)/2) - C(l, (l-i)/2 - 1)
        for l in range(1, 12):
            for i in range(l % 2, l + 1, 2):
                m = (l - i) // 2
                assert kostka_closed_form(i, 1, l) == comb(l, m) - (comb(l, m - 1) if m else 0)

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    def test_routes_match_character_oracle(self, d, l, data):
        i = data.draw(st.integers(-2, d * l + 2))
        expect = kostka_by_characters(i, d, l)
        assert kostka_closed_form(i, d, l) == expect
        assert kostka_recursive(i, d, l) == expect
        assert kostka_generating(i, d, l) == expect

    @given(st.integers(1, 9), st.integers(1, 9), st.data())
    def test_closed_recursive_generating_agree(self, d, l, data):
        i = data.draw(st.integers(-3, d * l + 3))
        a = kostka_closed_form(i, d, l)
        assert a == kostka_recursive(i, d, l) == kostka_generating(i, d, l)

    @given(st.integers(1, 10), st.integers(1, 8))
    def test_weighted_dimension_identity(self, d, l):
        assert sum((i + 1) * kostka_closed_form(i, d, l) for i in range(d * l + 1)) == (d + 1) ** l

    def test_unweighted_sum_is_not_the_dimension(self):
        assert sum(kostka_closed_form(i, 1, 2) for i in range(3)) == 2 != 4

    @pytest.mark.parametrize("d,l", [(1, 6), (2, 4), (3, 3), (4, 2), (2, 6)])
    def test_tableau_oracle(self, d, l):
        for i in range(d * l + 1):
            assert kostka_tableau(i, d, l) == kostka_closed_form(i, d, l)

    def test_tableau_bound(self):
        with pytest.raises(OracleBoundExceeded):
            kostka_tableau(0, 5, 5)
        assert kostka_tableau(1, 5, 5, bound=25) == kostka_closed_form(1, 5, 5)

    def test_box_power(self):
        assert box_power_coefficients(1, 3) == [1, 3, 3, 1]
        assert box_power_coefficients(2, 2) == [1, 2, 3, 2, 1]

    @pytest.mark.parametrize("d,l", [(0, 2), (2, 0)])
    def test_bad_arguments(self, d, l):
        with pytest.raises(ValueError):
            kostka_closed_form(0, d, l)

    def test_concurrent_table_readers(self):
        table = KostkaTable()
        results: dict[int, list[int]] = {}

        def work(tid: int) -> None:
            results[tid] = [table[i, d, l] for d in range(1, 7) for l in range(1, 7) for i in range(d * l + 1)]

        threads = [threading.Thread(target=work, args=(t,)) for t in range(6)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        expect = [kostka_closed_form(i, d, l) for d in range(1, 7) for l in range(1, 7) for i in range(d * l + 1)]
        assert all(r == expect for r in results.values())


class TestClebschGordan:
    def test_rule(self):
        assert clebsch_gordan(2, 3) == {1: 1, 3: 1, 5: 1}
        assert clebsch_gordan(0, 4) == {4: 1}

    @given(st.integers(1, 4), st.integers(1, 5))
    def test_iterated_matches_kostka(self, d, l):
        assert iterated_clebsch_gordan(d, l) == tensor_power_multiplicities(d, l)

    @given(st.integers(0, 8), st.integers(0, 8))
    def test_dimension_multiplies(self, i, j):
        assert clebsch_gordan(i, j).dimension() == (i + 1) * (j + 1)


class TestWeyl:
    def test_examples(self):
        assert weyl_dim(Partition((3, 1)), 2) == 3
        assert irrep_multiplicity_m_lambda(Partition((2, 1))) == 2
        assert irrep_multiplicity_m_lambda(Partition((1, 1))) == 1

    @given(st.integers(0, 12), st.integers(0, 12))
    def test_two_row_dimension(self, a, b):
        lam = Partition((max(a, b), min(a, b)))
        assert weyl_dim(lam, 2) == lam[0] - lam[1] + 1

    def test_too_many_rows(self):
        assert weyl_dim(Partition((1, 1, 1)), 2) == 0

    @pytest.mark.parametrize("lam,m", [((2, 1), 3), ((2, 2), 3), ((3, 1), 3), ((2, 1, 1), 3), ((2,), 4), ((1, 1), 4)])
    def test_against_tableau_count(self, lam, m):
        assert weyl_dim(Partition(lam), m) == ssyt_count(lam, m)

    @pytest.mark.parametrize("lam", [(1,), (3,), (2, 1), (3, 2), (2, 2, 1), (4, 2, 1), (3, 3, 2, 1)])
    def test_m_lambda_hook_length(self, lam):
        assert irrep_multiplicity_m_lambda(Partition(lam)) == hook_length_dim(lam)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_sum_of_squares(self, n):
        parts = []

        def gen(rest, top, acc):
            if rest == 0:
                parts.append(tuple(acc))
                return
            for p in range(min(rest, top), 0, -1):
                gen(rest - p, p, acc + [p])

        gen(n, n, [])
        assert sum(irrep_multiplicity_m_lambda(Partition(p)) ** 2 for p in parts) == factorial(n)
