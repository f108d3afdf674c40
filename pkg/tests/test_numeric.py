"""Unit tests for diagres.numeric.

Full-bound exhaustive sweeps (the stated verification ranges) run in
test_acceptance.py; here the same sweep code runs on reduced ranges
for quick regression, alongside frozen examples and property tests.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sweeps
from diagres.errors import NonPrime, PrimeTooSmall
from diagres.numeric import (
    Valuation,
    binom,
    binom_valuation,
    digit_bounds,
    digit_expand,
    padic_val,
    round_third,
)


class TestBinom:
    def test_standard_value(self):
        assert binom(5, 2) == 10

    def test_negative_lower_index_is_zero(self):
        assert binom(3, -2) == 0

    def test_upper_below_lower_is_zero(self):
        assert binom(2, 5) == 0

    def test_negative_upper_index(self):
        assert binom(-1, 2) == 1
        assert binom(-1, 3) == -1
        assert binom(-3, 5) == -21

    def test_zero_cases(self):
        assert binom(0, 0) == 1
        assert binom(-7, 0) == 1


class TestPadicVal:
    def test_zero_is_infinite(self):
        assert padic_val(0, 3).is_infinite

    def test_exact_power(self):
        assert padic_val(45, 3) == 2

    def test_binomial_factor(self):
        assert padic_val(binom(6, 3), 2) == 2

    def test_negative_input(self):
        assert padic_val(-45, 3) == 2

    def test_nonprime_rejected(self):
        with pytest.raises(NonPrime):
            padic_val(12, 6)

    def test_infinity_dominates(self):
        inf = padic_val(0, 5)
        assert inf >= 10**9
        assert inf >= Valuation(7)
        assert (Valuation(3) + inf).is_infinite


class TestBinomValuation:
    def test_matches_direct(self):
        for m, i, p in [(2000, 700, 3), (100, 37, 5), (60, 30, 7), (9, 4, 13)]:
            assert binom_valuation(m, i, p) == padic_val(binom(m, i), p)

    def test_zero_binomial(self):
        assert binom_valuation(3, 7, 5).is_infinite
        assert binom_valuation(4, -1, 5).is_infinite

    def test_negative_upper(self):
        assert binom_valuation(-1, 2, 3) == padic_val(binom(-1, 2), 3)
        assert binom_valuation(-6, 4, 3) == padic_val(binom(-6, 4), 3)

    @given(st.integers(0, 5000), st.integers(0, 5000), st.sampled_from([2, 3, 5, 7, 11, 13]))
    @settings(max_examples=300, deadline=None)
    def test_agrees_with_direct_everywhere(self, m, i, p):
        assert binom_valuation(m, i, p) == padic_val(binom(m, i), p)


class TestRoundThird:
    def test_table(self):
        assert round_third(6) == 2
        assert round_third(7) == 2
        assert round_third(8) == 3

    def test_negatives(self):
        assert round_third(-1) == 0
        assert round_third(-2) == -1
        assert round_third(-4) == -1

    @given(st.integers(-10**6, 10**6))
    @settings(max_examples=200, deadline=None)
    def test_closest_integer(self, b):
        r = round_third(b)
        assert abs(3 * r - b) <= 1


class TestDigits:
    def test_bounds(self):
        assert digit_bounds(5) == (1, 2)
        assert digit_bounds(7) == (1, 4)
        assert digit_bounds(13) == (3, 8)
        assert digit_bounds(11) == (3, 6)

    def test_small_prime_rejected(self):
        with pytest.raises(PrimeTooSmall):
            digit_bounds(3)
        with pytest.raises(PrimeTooSmall):
            digit_expand(10, 2)

    def test_nonprime_rejected(self):
        with pytest.raises(NonPrime):
            digit_bounds(9)

    def test_zero_is_empty(self):
        assert digit_expand(0, 7).digits == []

    def test_frozen_expansions(self):
        assert digit_expand(8, 5).digits == [-2, 2]
        assert digit_expand(7, 5).digits == [2, 1]

    def test_digit_legality(self):
        for p in (5, 7, 11, 13):
            u, v = digit_bounds(p)
            for m in range(-500, 501):
                for digit in digit_expand(m, p).digits:
                    if digit % 2 == 0:
                        assert abs(digit) <= v
                    else:
                        assert abs(digit) <= u

    @given(st.integers(-10**5, 10**5), st.sampled_from([5, 7, 11, 13]))
    @settings(max_examples=400, deadline=None)
    def test_round_trip(self, m, p):
        exp = digit_expand(m, p)
        assert exp.evaluate() == m


class TestSweepsReduced:
    """Reduced-range runs of the shared sweeps; full ranges in acceptance."""

    def test_facts_identities_small(self):
        assert sweeps.facts_sweep(40) > 0

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_valuation_identities_small(self, p):
        assert sweeps.theorem4_sweep(p, 300) > 0

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_carry_table_small(self, p):
        assert sweeps.aug21_sweep(p, 12) > 0

    def test_base3_table_small(self):
        assert sweeps.l8_sweep(60, 20) > 0
