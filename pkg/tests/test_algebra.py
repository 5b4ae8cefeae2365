from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from horidgca.algebra import (
    ANY_DEGREE,
    INHOMOGENEOUS,
    AlgebraError,
    GradedElement,
    decompose_by_generator,
    degree_of,
    make_algebra,
)
from horidgca.verify import koszul_oracle, mixed_signature

SIG = mixed_signature()
NAMES = SIG.names


def word_product(word):
    out = SIG.one()
    for n in word:
        out = out * SIG.gen(n)
    return out


words = st.lists(st.sampled_from(NAMES), max_size=7)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def homogeneous(draw):
    """A homogeneous element built from words of equal degree."""
    deg = draw(st.integers(0, 6))
    out = SIG.zero()
    for _ in range(draw(st.integers(1, 3))):
        w = draw(words)
        if SIG.monomial_degree(tuple((SIG[n].ordinal, 1) for n in w)) == deg:
            out = out + draw(coeffs) * word_product(w)
    return out


def test_odd_generators_anticommute():
    a, b = SIG.gens("a1", "b1")
    assert a * b == -(b * a)
    assert a * a == 0


def test_even_generators_commute_with_everything():
    x, a, c = SIG.gens("x2", "a1", "c3")
    assert x * a == a * x
    assert x * c == c * x


def test_normal_form_orders_by_generator():
    a, b, c = SIG.gens("a1", "b1", "c3")
    assert str(c * b * a) == "-a1*b1*c3"


def test_degree_of_zero_and_mixed():
    x, a = SIG.gens("x2", "a1")
    assert degree_of(SIG.zero()) == ANY_DEGREE
    assert degree_of(x + a) == INHOMOGENEOUS
    assert degree_of(x * a) == 3


def test_rational_coefficients_render():
    y = SIG.gen("c3")
    assert str(y / 2) == "1/2*c3"
    assert str(-y + Fraction(3, 4)) == "3/4 - c3"


@given(words)
@settings(max_examples=300, deadline=None)
def test_product_matches_bubble_sort_oracle(word):
    assert word_product(word) == koszul_oracle(SIG, word)


@given(homogeneous(), homogeneous())
@settings(max_examples=200, deadline=None)
def test_graded_commutativity(a, b):
    if not a or not b:
        return
    sign = (-1) ** (degree_of(a) * degree_of(b))
    assert a * b == sign * (b * a)


@given(homogeneous(), homogeneous(), homogeneous())
@settings(max_examples=150, deadline=None)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(homogeneous(), homogeneous(), homogeneous())
@settings(max_examples=100, deadline=None)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(homogeneous())
@settings(max_examples=150, deadline=None)
def test_odd_elements_square_to_zero(a):
    if a and degree_of(a) % 2:
        assert a * a == 0


def test_invertible_generator_powers():
    sig = make_algebra([("x", 2), ("u", 2)], invertible=["u"])
    u, x = sig.gens("u", "x")
    assert u ** -2 * u ** 2 == 1
    assert degree_of(u ** -3) == -6
    with pytest.raises(AlgebraError):
        x ** -1


def test_presentation_validation():
    with pytest.raises(AlgebraError):
        make_algebra([("x", 2), ("x", 3)])
    with pytest.raises(AlgebraError):
        make_algebra([("t", 0)])
    with pytest.raises(AlgebraError):
        make_algebra([("a", 1)], invertible=["a"])
    assert make_algebra([("t", 0)], allow_degree_zero=True)["t"].degree == 0


def test_signature_mismatch_is_rejected():
    other = make_algebra([("z", 2)])
    with pytest.raises(AlgebraError):
        SIG.gen("x2") + other.gen("z")


def test_to_other_signature_reorders_with_sign():
    a, b = SIG.gens("a1", "b1")
    flipped = make_algebra([("b1", 1), ("a1", 1)])
    fa, fb = flipped.gens("a1", "b1")
    assert (a * b).to(flipped) == -(fb * fa)
    assert str((a * b).to(flipped)) == "-b1*a1"


def test_decompose_by_generator_absorbs_sign():
    a, b, c = SIG.gens("a1", "b1", "c3")
    x = SIG.gen("x2")
    elem = x * c + a * b * c + 3 * x
    alpha, beta = decompose_by_generator(elem, SIG["b1"])
    assert alpha == x * c + 3 * x
    assert alpha + b * beta == elem
    assert not beta.contains("b1")


def test_elements_hash_consistently():
    a = SIG.gen("x2") + 1
    b = 1 + SIG.gen("x2")
    assert a == b and hash(a) == hash(b)
    assert GradedElement(SIG, {(): 0}) == 0
