"""Tests for the rewriting engine, the matrix lemma, and the element
derivations."""

import random

import pytest

from skeinlab.ncrewrite import (
    Mat2Poly,
    NcAlgebraSpec,
    NcElement,
    collar_algebra,
    derive_e_n,
    exterior_algebra,
    matrix_cosine,
    matrix_cosine_closed,
    presentation_algebra,
    twisted_companion,
    verify_commute_many,
    verify_matrix_lemma,
)
from skeinlab.cheby import VARS_X, VARS_XR, boundary_form
from skeinlab.ring import CPoly, Laurent, Q, QINV, Q_PLUS_QINV


def random_element(rng: random.Random, spec: NcAlgebraSpec, max_len: int = 5) -> NcElement:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        word = tuple(
            rng.randrange(len(spec.generators)) for _ in range(rng.randint(0, max_len))
        )
        terms[word] = Laurent({rng.randint(-3, 3): rng.randint(-5, 5)})
    return NcElement(spec, terms)


def test_rules_must_decrease() -> None:
    with pytest.raises(ValueError):
        NcAlgebraSpec("bad", ("a", "b"), {(1, 0): [(Laurent.one(), (1, 0))]})
    with pytest.raises(ValueError):
        NcAlgebraSpec("bad", ("a", "b"), {(1, 0): [(Laurent.one(), (1, 1))]})
    # A genuinely decreasing rule is accepted.
    NcAlgebraSpec("ok", ("a", "b"), {(1, 0): [(Laurent.one(), (0, 1))]})


def test_collar_single_step() -> None:
    spec = collar_algebra()
    nf = spec.normal_form_word(spec.word("x", "t1"))
    expected = {
        spec.word("t1", "x"): Laurent.q_power(2),
        spec.word("l1"): QINV - Laurent.q_power(3),
        spec.word("c"): Laurent.one() - Laurent.q_power(2),
    }
    assert nf == expected


def test_collar_normal_words_have_trailing_x() -> None:
    # Every generator commutes past x one way or another, so a normalized
    # word can carry x only as a suffix block.
    rng = random.Random(20260817)
    spec = collar_algebra()
    xg = spec.index("x")
    for _ in range(80):
        elem = random_element(rng, spec).normalize()
        for word in elem.terms:
            seen_x = False
            for g in word:
                if g == xg:
                    seen_x = True
                else:
                    assert not seen_x, f"x inside word {spec.word_names(word)}"


def test_confluence_leftmost_vs_rightmost() -> None:
    rng = random.Random(7)
    for spec in (collar_algebra(), exterior_algebra()):
        for _ in range(60):
            elem = random_element(rng, spec)
            assert elem.normalize() == elem.normalize_rightmost()


def test_normalize_idempotent_and_multiplicative() -> None:
    rng = random.Random(13)
    spec = collar_algebra()
    for _ in range(40):
        a = random_element(rng, spec, max_len=3)
        b = random_element(rng, spec, max_len=3)
        na = a.normalize()
        assert na.normalize() == na
        assert (a * b).normalize() == (na * b.normalize()).normalize()


def test_presentation_algebra_is_free() -> None:
    spec = presentation_algebra()
    word = spec.word("x", "t", "r", "l1")
    assert spec.normal_form_word(word) == {word: Laurent.one()}


def test_twisted_companion_entries() -> None:
    A = twisted_companion()
    x = CPoly.variable("x", VARS_X)
    assert A.a == x * Laurent.q_power(2)
    assert A.b == CPoly.constant(Q - Laurent.q_power(-3), VARS_X)
    assert A.c == CPoly.constant(QINV - Laurent.q_power(3), VARS_X)
    assert A.d == x * Laurent.q_power(-2)


def test_matrix_cosine_recursion_base() -> None:
    A = twisted_companion()
    assert matrix_cosine(0) == Mat2Poly.identity(2)
    assert matrix_cosine(1) == A
    assert matrix_cosine(2) == A * A - Mat2Poly.identity(2)
    assert matrix_cosine_closed(0) == Mat2Poly.identity(2)
    assert matrix_cosine_closed(1) == A


def test_matrix_lemma_range() -> None:
    report = verify_matrix_lemma(32)
    assert report.ok, f"first failure at n={report.first_failure}"


def test_commute_many_both_routes() -> None:
    for n in range(1, 17):
        result = verify_commute_many(n, route="both")
        assert result.route_a_ok, f"route a failed at n={n}: {result.residual}"
        assert result.route_b_ok, f"route b failed at n={n}: {result.residual}"
        assert result.ok


def test_commute_many_single_routes() -> None:
    ra = verify_commute_many(3, route="a")
    assert ra.route_a_ok and ra.route_b_ok is None
    rb = verify_commute_many(3, route="b")
    assert rb.route_b_ok and rb.route_a_ok is None


def test_commute_many_mutation_detected() -> None:
    for n in range(1, 9):
        result = verify_commute_many(n, route="both", mutate=True)
        assert not result.ok
        assert result.residual is not None
        assert "route" in result.residual


def test_commute_many_rejects_bad_args() -> None:
    with pytest.raises(ValueError):
        verify_commute_many(0)
    with pytest.raises(ValueError):
        verify_commute_many(2, route="c")


def test_derive_e_n_range() -> None:
    for n in range(1, 17):
        d = derive_e_n(n)
        assert d.ok, f"n={n}: {d.detail}"
        assert d.strand_coeff == boundary_form(n) * QINV


def test_derive_e_n_word_shapes() -> None:
    spec = presentation_algebra()
    tg, l1g = spec.index("t"), spec.index("l1")
    for n in (1, 2, 5, 9):
        d = derive_e_n(n)
        for word in d.element.terms:
            assert word[-1] == tg or word[0] == l1g


def test_derive_e_one_base_case() -> None:
    d = derive_e_n(1)
    assert d.ok
    x = CPoly.variable("x", VARS_XR)
    r = CPoly.variable("r", VARS_XR)
    assert d.strand_coeff == r - x
    assert d.band_coeff == CPoly.constant(Q_PLUS_QINV, VARS_X)
    ext = exterior_algebra()
    expected = NcElement(ext, {(ext.index("l1"),): Q, (ext.index("l1p"),): -Q})
    assert d.base_case_reduced == expected
