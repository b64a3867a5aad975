from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import class_strategy, complex_catalog_up_to_12
from fracindex import catalog as cat
from fracindex.errors import DomainError, SeriesOrderError, UnknownSeriesError
from fracindex.exact_algebra import exp_class, integrate, ring_mul, truncated_power_ring
from fracindex.genera import (
    CHERN,
    CharData,
    chern_character,
    direct_sum,
    elementary_from_power_sums,
    genus_class,
    genus_series,
    line_bundle,
    pontryagin_from_chern,
    power_sums,
    trivial_bundle,
)
from oracles import splitting_chern_character, splitting_genus, taylor_coefficients

# two degree-2 generators, top degree 12: room for rank <= 3 data with mixed monomials
TEST_RING = truncated_power_ring((("u", 2), ("v", 2)), (6, 6), 12, {(6, 0): 1, (3, 3): 2, (0, 6): -1})


def chern_data_strategy(ring, max_rank=3):
    @st.composite
    def build(draw):
        rank = draw(st.integers(0, max_rank))
        classes = tuple(draw(class_strategy(ring, degree=2 * i)) for i in range(1, rank + 1))
        return CharData(ring, rank, CHERN, classes)

    return build()


# -- series --------------------------------------------------------------------------

def test_todd_order_two():
    assert genus_series("Todd", 2).coefficients == (1, Fraction(1, 2), Fraction(1, 12))


def test_a_hat_order_two():
    assert genus_series("A-hat", 2).coefficients == (1, 0, Fraction(-1, 24))


def test_a_hat_order_zero():
    assert genus_series("A-hat", 0).coefficients == (1,)


@pytest.mark.parametrize("name", ["A-hat", "Todd", "L"])
def test_series_match_sympy_taylor_expansion(name):
    assert list(genus_series(name, 12).coefficients) == taylor_coefficients(name, 12)


def test_unknown_series():
    with pytest.raises(UnknownSeriesError):
        genus_series("elliptic", 3)


def test_aliases():
    assert genus_series("a-hat", 2) == genus_series("A-hat", 2)
    assert genus_series("todd", 1).name == "Todd"


# -- genus classes --------------------------------------------------------------------

def test_a_hat_of_cp2():
    M = cat.cp(2)
    a_hat = genus_class(genus_series("A-hat", 2), M.tangent)
    assert a_hat == M.ring.parse_class("1 - 1/8x^2")
    assert a_hat == splitting_genus("A-hat", M.tangent.classes, 2, M.ring)


@settings(max_examples=20, deadline=None)
@given(data=chern_data_strategy(TEST_RING))
def test_todd_low_degree_part(data):
    td = genus_class(genus_series("Todd", 6), data)
    assert td.truncate(2) == TEST_RING.one() + data.elementary(1) / 2


def test_genus_of_trivial_data():
    ring = cat.cp(3).ring
    assert genus_class(genus_series("A-hat", 3), trivial_bundle(ring, 0)) == ring.one()
    assert genus_class(genus_series("Todd", 3), trivial_bundle(ring, 4)) == ring.one()


def test_series_too_short():
    M = cat.cp(4)
    with pytest.raises(SeriesOrderError):
        genus_class(genus_series("A-hat", 3), M.tangent)


def test_todd_needs_chern_mode():
    M = cat.cp(2)
    with pytest.raises(DomainError):
        genus_class(genus_series("Todd", 2), pontryagin_from_chern(M.tangent))


@pytest.mark.parametrize("name", ["A-hat", "Todd", "L"])
@settings(max_examples=12, deadline=None)
@given(data=chern_data_strategy(TEST_RING))
def test_genus_matches_splitting_oracle(name, data):
    got = genus_class(genus_series(name, 6), data)
    assert got == splitting_genus(name, data.classes, data.rank, TEST_RING)


@pytest.mark.parametrize("name", ["A-hat", "L"])
@settings(max_examples=10, deadline=None)
@given(data=chern_data_strategy(TEST_RING))
def test_pontryagin_route_agrees_with_chern_route(name, data):
    series = genus_series(name, 6)
    assert genus_class(series, pontryagin_from_chern(data)) == genus_class(series, data)


@pytest.mark.parametrize("name", ["A-hat", "Todd", "L"])
@settings(max_examples=15, deadline=None)
@given(d1=chern_data_strategy(TEST_RING, 2), d2=chern_data_strategy(TEST_RING, 2))
def test_multiplicativity(name, d1, d2):
    series = genus_series(name, 6)
    assert genus_class(series, direct_sum(d1, d2)) == ring_mul(genus_class(series, d1), genus_class(series, d2))


# -- Chern character ---------------------------------------------------------------------

def test_ch_trivial():
    ring = cat.cp(2).ring
    assert chern_character(trivial_bundle(ring, 3)) == ring.scalar(3)


def test_ch_line_bundle_is_exponential():
    ring = cat.cp(2).ring
    assert chern_character(line_bundle(ring.monomial("x"))) == ring.parse_class("1 + x + 1/2x^2")


@settings(max_examples=20, deadline=None)
@given(c1=class_strategy(TEST_RING, degree=2), c2=class_strategy(TEST_RING, degree=4))
def test_ch_rank_two_degree_four(c1, c2):
    E = CharData(TEST_RING, 2, CHERN, (c1, c2))
    assert chern_character(E).degree_part(4) == (ring_mul(c1, c1) - 2 * c2) / 2


@settings(max_examples=15, deadline=None)
@given(data=chern_data_strategy(TEST_RING))
def test_ch_matches_splitting_oracle(data):
    assert chern_character(data) == splitting_chern_character(data.classes, data.rank, TEST_RING)


@settings(max_examples=20, deadline=None)
@given(d1=chern_data_strategy(TEST_RING, 2), d2=chern_data_strategy(TEST_RING, 2))
def test_ch_is_additive(d1, d2):
    assert chern_character(direct_sum(d1, d2)) == chern_character(d1) + chern_character(d2)


@settings(max_examples=20, deadline=None)
@given(a=class_strategy(TEST_RING, degree=2), b=class_strategy(TEST_RING, degree=2))
def test_ch_line_tensor_rule(a, b):
    lhs = chern_character(line_bundle(a + b))
    assert lhs == ring_mul(chern_character(line_bundle(a)), chern_character(line_bundle(b)))


def test_ch_rejects_pontryagin():
    with pytest.raises(DomainError):
        chern_character(pontryagin_from_chern(cat.cp(2).tangent))


# -- Pontryagin classes ---------------------------------------------------------------------

def test_p1_of_cp2():
    M = cat.cp(2)
    p = pontryagin_from_chern(M.tangent)
    assert p.classes == (M.ring.parse_class("3x^2"),)
    # oracle: (1+x)^3 (1-x)^3 = 1 - 3x^2 (truncated), p1 = -(degree-4 part)
    one, x = M.ring.one(), M.ring.monomial("x")
    prod = ring_mul((one + x) ** 3, (one - x) ** 3)
    assert p.classes[0] == -prod.degree_part(4)


def test_p1_of_line_bundle():
    ring = cat.cp(2).ring
    x = ring.monomial("x")
    assert pontryagin_from_chern(line_bundle(x)).classes[0] == ring_mul(x, x)


def test_pontryagin_of_trivial():
    ring = cat.cp(3).ring
    assert pontryagin_from_chern(trivial_bundle(ring, 3)).classes == ()


def test_newton_round_trip():
    ring = TEST_RING
    e = [ring.parse_class("u + 2v"), ring.parse_class("u*v - v^2"), ring.parse_class("u^3")]
    s = power_sums(e, 6, ring.one())
    assert elementary_from_power_sums(s, 3, ring.one()) == e


# -- Todd = Â · exp(c1/2) ------------------------------------------------------------------

@pytest.mark.parametrize("M", complex_catalog_up_to_12(), ids=lambda m: m.label)
def test_todd_a_hat_identity_on_catalog(M):
    n = M.real_dimension // 2
    todd = genus_class(genus_series("Todd", n), M.tangent)
    a_hat = genus_class(genus_series("A-hat", n), pontryagin_from_chern(M.tangent))
    assert todd == ring_mul(a_hat, exp_class(M.c1 / 2))


@settings(max_examples=15, deadline=None)
@given(data=chern_data_strategy(TEST_RING))
def test_todd_a_hat_identity_random(data):
    todd = genus_class(genus_series("Todd", 6), data)
    a_hat = genus_class(genus_series("A-hat", 6), pontryagin_from_chern(data))
    assert todd == ring_mul(a_hat, exp_class(data.elementary(1) / 2))


def test_l_genus_gives_signature():
    # signature of CP2 is 1, of the K3 model is -16
    assert integrate(genus_class(genus_series("L", 2), cat.cp(2).tangent)) == 1
    assert integrate(genus_class(genus_series("L", 2), cat.hypersurface(1, 4).tangent)) == -16
