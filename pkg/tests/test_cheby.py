"""Tests for the Chebyshev-style families and their q-weighted variants."""

import math
import random

import pytest

from skeinlab.cheby import (
    VARS_X,
    VARS_XR,
    boundary_form,
    cheb_cosine,
    cheb_sine,
    qdiff_sine_sum,
    qdiff_sine_sum_closed,
    qweighted_cosine,
)
from skeinlab.ring import CPoly, Laurent, q_power_diff

X = CPoly.variable("x", VARS_X)
ONE = CPoly.one(VARS_X)


def test_sine_family_small_values() -> None:
    assert cheb_sine(0).is_zero()
    assert cheb_sine(1) == ONE
    assert cheb_sine(2) == X
    assert cheb_sine(3) == X * X - ONE
    assert cheb_sine(4) == X**3 - 2 * X


def test_cosine_family_small_values() -> None:
    assert cheb_cosine(0) == CPoly.constant(2, VARS_X)
    assert cheb_cosine(1) == X
    assert cheb_cosine(2) == X * X - CPoly.constant(2, VARS_X)


def test_negative_index_extensions() -> None:
    for n in range(0, 8):
        assert cheb_sine(-n) == -cheb_sine(n)
        assert cheb_cosine(-n) == cheb_cosine(n)


def test_cosine_is_sine_difference() -> None:
    for n in range(0, 20):
        assert cheb_cosine(n) == cheb_sine(n + 1) - cheb_sine(n - 1)


def test_sine_skip_recursion() -> None:
    # p(n+1) = (x^2 - 2) p(n-1) - p(n-3), stepping by two.
    x2m2 = X * X - CPoly.constant(2, VARS_X)
    for n in range(3, 16):
        assert cheb_sine(n + 1) == x2m2 * cheb_sine(n - 1) - cheb_sine(n - 3)


def test_trig_model_numeric() -> None:
    rng = random.Random(20260817)
    for _ in range(50):
        psi = rng.uniform(0.2, math.pi - 0.2)
        x = 2.0 * math.cos(psi)
        n = rng.randint(0, 24)
        # Monomial evaluation near x = 2 cancels heavily, hence the loose bound.
        sine_val = cheb_sine(n).evaluate(1.0, {"x": x})
        assert sine_val * math.sin(psi) == pytest.approx(math.sin(n * psi), abs=1e-6)
        cos_val = cheb_cosine(n).evaluate(1.0, {"x": x})
        assert cos_val == pytest.approx(2.0 * math.cos(n * psi), abs=1e-6)


def test_qdiff_sum_small_values() -> None:
    assert qdiff_sine_sum(0).is_zero()
    assert qdiff_sine_sum(1).is_zero()
    assert qdiff_sine_sum(2) == CPoly.constant(q_power_diff(1), VARS_X)
    assert qdiff_sine_sum(3) == X * q_power_diff(2)


def test_qdiff_sum_two_routes_agree() -> None:
    for n in range(0, 40):
        assert qdiff_sine_sum(n) == qdiff_sine_sum_closed(n)


def test_qdiff_adjacent_sum_is_full_prefix() -> None:
    for n in range(1, 20):
        prefix = CPoly.zero(VARS_X)
        for j in range(1, n):
            prefix = prefix + cheb_sine(j) * q_power_diff(j)
        assert qdiff_sine_sum(n - 1) + qdiff_sine_sum(n) == prefix


def test_qweighted_cosine_values() -> None:
    assert qweighted_cosine(2) == cheb_sine(3) * Laurent.q_power(4) - cheb_sine(
        1
    ) * Laurent.q_power(-4)
    for n in range(0, 16):
        # Difference from the plain cosine family factors through q^n - q^-n.
        lhs = cheb_cosine(n) - qweighted_cosine(n)
        rhs = (
            cheb_sine(n + 1) * Laurent.q_power(n)
            + cheb_sine(n - 1) * Laurent.q_power(-n)
        ) * (-q_power_diff(n))
        assert lhs == rhs


def test_boundary_form_base_case() -> None:
    x = CPoly.variable("x", VARS_XR)
    r = CPoly.variable("r", VARS_XR)
    assert boundary_form(1) == (r - x) * Laurent.q_power(1)


def test_boundary_form_classical_point() -> None:
    x = CPoly.variable("x", VARS_XR)
    r = CPoly.variable("r", VARS_XR)
    for n in range(1, 12):
        expected = (r - x) * cheb_sine(n).extend(VARS_XR)
        assert boundary_form(n).specialize_classical() == expected.specialize_classical()


def test_memoization_returns_same_object() -> None:
    assert cheb_sine(10) is cheb_sine(10)
    assert boundary_form(5) is boundary_form(5)
