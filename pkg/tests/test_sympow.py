import cmath
import math
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symmoments.arith import primes_upto
from symmoments.combinat import MultiplicityVector, tensor_power_multiplicities
from symmoments.errors import OutOfRange
from symmoments.sympow import (
    chebyshev_t_list,
    chebyshev_u,
    local_factor_from_value,
    local_u_factor,
    prime_power_values,
    sym_eigenvalue,
    sym_local_factor,
    sym_series,
    tensor_identity_residual,
    tensor_identity_residual_float,
    verify_local_u_factor,
    verify_tensor_identity,
)

PRIMES = primes_upto(1000).tolist()
angles = st.floats(min_value=1e-3, max_value=math.pi - 1e-3)


def complete_homogeneous(theta: float, d: int, r: int) -> float:
    """h_r over the roots e^{imθ}, m = d, d-2, ..., -d, summed monomial by monomial."""
    roots = [cmath.exp(1j * m * theta) for m in range(d, -d - 1, -2)]
    return sum(math.prod(c) for c in combinations_with_replacement(roots, r)).real if r else 1.0


class TestChebyshev:
    @given(st.sampled_from(PRIMES), st.integers(0, 12))
    def test_sym_eigenvalue_is_u(self, delta_1e4, p, d):
        x = delta_1e4[p] / 2
        assert sym_eigenvalue(delta_1e4, p, 1, d) == pytest.approx(chebyshev_u(d, x), abs=1e-10)

    @given(angles, st.integers(0, 12))
    def test_trig_forms(self, theta, d):
        x = math.cos(theta)
        assert chebyshev_u(d, x) == pytest.approx(math.sin((d + 1) * theta) / math.sin(theta), abs=1e-8)
        assert chebyshev_t_list(d, x)[d] == pytest.approx(math.cos(d * theta), abs=1e-10)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_degenerate_angles(self, sign):
        for d in range(10):
            assert chebyshev_u(d, float(sign)) == sign**d * (d + 1)
            assert prime_power_values(2.0 * sign, d, 1)[1] == pytest.approx(sign**d * (d + 1))


class TestPrimePowers:
    @given(angles, st.integers(0, 6), st.integers(0, 6))
    def test_complex_oracle(self, theta, d, r):
        got = prime_power_values(2 * math.cos(theta), d, r)[r]
        assert got == pytest.approx(complete_homogeneous(theta, d, r), abs=1e-9)

    @given(angles)
    def test_hecke_recursion_for_d1(self, theta):
        lam = 2 * math.cos(theta)
        h = prime_power_values(lam, 1, 8)
        for r in range(1, 8):
            assert h[r + 1] == pytest.approx(lam * h[r] - h[r - 1], abs=1e-12)

    @given(angles, st.integers(1, 8))
    def test_roots_on_unit_circle(self, theta, d):
        F = local_factor_from_value(2, 2 * math.cos(theta), d)
        assert len(F.coeffs) == d + 2
        assert np.allclose(np.abs(F.roots()), 1.0, atol=1e-6)

    def test_local_factor_shape(self, delta_1e4):
        F = sym_local_factor(delta_1e4, 2, 1)
        assert np.allclose(F.coeffs, [1, -delta_1e4[2], 1])
        F2 = sym_local_factor(delta_1e4, 3, 2)
        # (1 - α^2 T)(1 - T)(1 - β^2 T): constant 1, top coefficient -1
        assert F2.coeffs[0] == 1 and F2.coeffs[-1] == pytest.approx(-1)

    def test_deligne_guard(self):
        with pytest.raises(OutOfRange):
            local_factor_from_value(2, 2.1, 3)


class TestSeries:
    def test_unitarity(self, delta_1e4):
        p = primes_upto(10**4)
        for d in range(1, 9):
            assert np.all(np.abs(sym_series(delta_1e4, d).values[p]) <= d + 1 + 1e-12)

    def test_d1_is_the_base(self, delta_1e4):
        assert np.array_equal(sym_series(delta_1e4, 1).values[1:], delta_1e4.normalized[1:])

    def test_trivial_power(self, delta_1e4):
        assert np.all(sym_series(delta_1e4, 0, 1000).values[1:] == 1.0)

    @given(st.integers(2, 100), st.integers(2, 100), st.integers(2, 4))
    def test_multiplicative(self, delta_1e4, m, n, d):
        if math.gcd(m, n) != 1:
            return
        S = sym_series(delta_1e4, d, 10**4)
        assert S[m * n] == pytest.approx(S[m] * S[n], rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_prime_powers_match_recurrence(self, delta_1e4, d):
        S = sym_series(delta_1e4, d)
        for p in (2, 3, 5, 7):
            r = int(math.log(10**4, p))
            h = prime_power_values(delta_1e4[p], d, r)
            for k in range(1, r + 1):
                assert S[p**k] == pytest.approx(h[k], abs=1e-12)

    def test_sym2_is_symmetric_square_coefficient(self, delta_1e4):
        # λ_{Sym^2}(p) = λ(p^2) for Δ
        S = sym_series(delta_1e4, 2)
        for p in (2, 3, 5, 7, 97):
            assert S[p] == pytest.approx(delta_1e4[p * p], abs=1e-12)

    def test_too_long(self, delta_1e4):
        with pytest.raises(ValueError):
            sym_series(delta_1e4, 2, 10**4 + 1)


class TestTensorIdentity:
    def test_exact_on_delta(self, delta_1e4):
        for p in PRIMES[:40]:
            for d, l in ((1, 24), (2, 12), (3, 8), (4, 6), (6, 4), (12, 2), (24, 1), (5, 3)):
                assert verify_tensor_identity(delta_1e4, d, l, p) < 1e-9

    def test_wrong_multiplicities_are_detected(self, delta_1e4):
        K = dict(tensor_power_multiplicities(2, 3))
        K[2] -= 1
        lam_sq = Fraction(delta_1e4.a(5) ** 2, 5**11)
        assert tensor_identity_residual(lam_sq, 2, 3, MultiplicityVector(K)) > 1e-3

    @given(angles, st.integers(1, 4), st.integers(1, 4))
    def test_float_version_small_cases(self, theta, d, l):
        assert tensor_identity_residual_float(2 * math.cos(theta), d, l) < 1e-9

    @given(st.fractions(min_value=0, max_value=4, max_denominator=10**6), st.integers(1, 6), st.integers(1, 4))
    def test_exact_residual_vanishes(self, lam_sq, d, l):
        assert tensor_identity_residual(lam_sq, d, l) == 0.0


class TestUFactor:
    @pytest.mark.parametrize("d,l", [(1, 2), (2, 2), (2, 3), (3, 2), (1, 3), (2, 4)])
    def test_first_coefficients(self, delta_1e4, d, l):
        for p in PRIMES[:25]:
            c = verify_local_u_factor(delta_1e4, d, l, p)
            assert c[0] == pytest.approx(1.0, abs=1e-12)
            assert abs(c[1]) < 1e-9

    def test_d1_l1_is_trivial(self):
        # L(f) is its own Euler factor, so the U-factor is 1
        c = local_u_factor(0.7, 1, 1, order=5)
        assert c == pytest.approx([1, 0, 0, 0, 0, 0], abs=1e-12)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            local_u_factor(0.5, 1, 2, order=7)
