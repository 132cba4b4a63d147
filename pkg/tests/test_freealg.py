from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ladic_monodromy.freealg import (AlgebraElement, AlgebraSignature, PrecisionError, antipode,
                                     binomial, contract, coproduct, counit, exp_elem, from_text,
                                     group_element, is_grouplike, is_primitive, log_elem, mul,
                                     power_of_generator, tensor, to_text)
from ladic_monodromy.padic import PadicScalar

from oracles import (deshuffle_coproduct, general_binomial, generator_power, series_exp,
                     series_log, series_mul)

ELL, M = 3, 16


def sig_of(rank=2, degree=4, grades=None):
    return AlgebraSignature.simple(ELL, M, degree, grades or [1] * rank)


def from_series(sig, series):
    return AlgebraElement(sig, {w: c for w, c in series.items() if len(w) <= sig.degree})


def series_elements(rank, degree):
    word = st.lists(st.integers(0, rank - 1), max_size=degree).map(tuple)
    coeff = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 9))
    return st.dictionaries(word, coeff, max_size=6)


@settings(max_examples=60, deadline=None)
@given(series_elements(2, 4), series_elements(2, 4))
def test_product_matches_rational_series(a, b):
    sig = sig_of()
    x, y = from_series(sig, a), from_series(sig, b)
    assert x * y == from_series(sig, series_mul(a, b, sig.degree))


@settings(max_examples=40, deadline=None)
@given(series_elements(2, 3), series_elements(2, 3), series_elements(2, 3))
def test_product_is_associative_and_distributive(a, b, c):
    sig = sig_of(degree=3)
    x, y, z = (from_series(sig, s) for s in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_grade_truncated_product_drops_heavy_words():
    sig = AlgebraSignature.simple(ELL, M, 4, [1, 2])
    x, y = AlgebraElement.generator(sig, 0), AlgebraElement.generator(sig, 1)
    assert mul(y, y, max_grade=3).is_zero()
    assert mul(x, y, max_grade=3) == x * y


@pytest.mark.parametrize("e", [Fraction(-1, 3), Fraction(1, 2), 5, -2, Fraction(7, 4)])
def test_binomial_coefficients(e):
    for i in range(8):
        expected = general_binomial(e, i)
        assert binomial(e, i, ELL, M) == PadicScalar.from_rational(expected, ELL, M)


def test_generator_power_matches_series():
    sig = sig_of(rank=1, degree=6)
    for e in (3, -1, Fraction(1, 4)):
        assert power_of_generator(sig, 0, e) == from_series(sig, generator_power(0, e, 6))


def test_group_element_is_product_of_powers():
    sig = sig_of(degree=5)
    g = group_element(sig, [(0, 2), (1, -1), (0, 1)])
    expected = series_mul(series_mul(generator_power(0, 2, 5), generator_power(1, -1, 5), 5),
                          generator_power(0, 1, 5), 5)
    assert g == from_series(sig, expected)
    assert is_grouplike(g)


def test_coproduct_of_monomial_matches_deshuffle():
    sig = sig_of(degree=4)
    for word in [(0,), (0, 1), (1, 1, 0), (0, 1, 0, 1)]:
        d = coproduct(AlgebraElement.monomial(sig, word))
        expected = {k: v for k, v in deshuffle_coproduct(word, 4).items()}
        got = {(l, r): c for (l, r), c in d.items()}
        assert set(got) == set(expected)
        for key, c in expected.items():
            assert got[key] == sig.scalar(c)


@settings(max_examples=30, deadline=None)
@given(series_elements(2, 4), series_elements(2, 4))
def test_coproduct_is_multiplicative(a, b):
    sig = sig_of()
    x, y = from_series(sig, a), from_series(sig, b)
    assert coproduct(x * y) == coproduct(x) * coproduct(y)


@settings(max_examples=30, deadline=None)
@given(series_elements(2, 4))
def test_antipode_and_counit_axioms(a):
    sig = sig_of()
    x = from_series(sig, a)
    unit_part = AlgebraElement.scalar(sig, 1).scale(counit(x))
    delta = coproduct(x)
    assert contract(delta, left=antipode) == unit_part
    assert contract(delta, right=antipode) == unit_part
    assert contract(delta, left=lambda y: AlgebraElement.scalar(sig, 1).scale(counit(y))) == x


def test_antipode_of_grouplike_is_inverse():
    sig = sig_of(degree=5)
    g = group_element(sig, [(0, 1), (1, 2)])
    assert antipode(g) * g == AlgebraElement.one(sig)
    assert antipode(antipode(g)) == g
    assert counit(g) == sig.scalar(1)


def test_log_of_grouplike_is_primitive_and_exp_inverts():
    sig = sig_of(degree=5)
    g = group_element(sig, [(0, 1), (1, 1)])
    lg = log_elem(g)
    assert is_primitive(lg)
    assert exp_elem(lg) == g


def test_log_matches_rational_series():
    sig = sig_of(rank=1, degree=7)
    one_plus_x = {(): Fraction(1), (0,): Fraction(1)}
    assert log_elem(from_series(sig, one_plus_x)) == from_series(sig, series_log(one_plus_x, 7))
    assert exp_elem(AlgebraElement.generator(sig, 0)) == \
        from_series(sig, series_exp({(0,): Fraction(1)}, 7))


def test_series_beyond_precision_guard_raises():
    sig = AlgebraSignature.simple(3, 2, 12, [1])
    with pytest.raises(PrecisionError):
        exp_elem(AlgebraElement.generator(sig, 0))


def test_log_requires_augmentation_one():
    sig = sig_of()
    with pytest.raises(ValueError):
        log_elem(AlgebraElement.generator(sig, 0))


def test_tensor_is_bilinear():
    sig = sig_of(degree=3)
    x, y = AlgebraElement.generator(sig, 0), AlgebraElement.generator(sig, 1)
    assert tensor(x + y, x) == tensor(x, x) + tensor(y, x)


@settings(max_examples=30, deadline=None)
@given(series_elements(2, 4))
def test_text_round_trip(a):
    sig = sig_of()
    x = from_series(sig, a)
    assert from_text(sig, to_text(x)) == x


def test_text_parse_errors_name_the_line():
    sig = sig_of()
    with pytest.raises(ValueError, match="line 2"):
        from_text(sig, "X1\t0\t1\nbad line\n")


def test_signature_rejects_bad_parameters():
    with pytest.raises(ValueError):
        AlgebraSignature.simple(4, 10, 3)
    with pytest.raises(ValueError):
        AlgebraSignature.simple(3, 10, 3, [3])
