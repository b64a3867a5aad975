import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracindex.errors import DomainError, EllipticityError, WindowError
from fracindex.lab import (
    GaussianRational,
    GradedOperator,
    LinearPath,
    LoopSymbol,
    adjoint_index_check,
    certify,
    composition_additivity_check,
    doubled_index,
    homotopy_sweep,
    mckean_singer_check,
    parametrix,
    parse_complex_rational,
    parse_symbol,
    rotation_symbol,
    symbol_from_doc,
    symbol_index,
    symbol_to_doc,
    toeplitz_compress,
    trace_commutator_index,
    winding_number,
)
from fracindex.lab.operators import exact_value
from lab_suite import monomial_suite, numeric_suite, random_graded_operator, random_pair, random_perturbed_symbol
from oracles import brute_force_supertrace, geometric_parametrix, quadrature_winding


def e(k, c=1, size=1):
    return LoopSymbol.monomial(k, c, size)


# -- Gaussian rationals and parsing -------------------------------------------------

def test_gaussian_arithmetic():
    z = GaussianRational(Fraction(1), Fraction(2))
    assert z * z.conjugate() == GaussianRational(Fraction(5))
    assert z * z.inverse() == GaussianRational(Fraction(1))
    assert str(z / 3) == "1/3+2/3i"


@pytest.mark.parametrize("text,re,im", [("1+2i", 1, 2), ("i/3", 0, Fraction(1, 3)), ("-0.25", Fraction(-1, 4), 0),
                                        ("(1-i)", 1, -1), ("3/4i", 0, Fraction(3, 4))])
def test_parse_complex_rational(text, re, im):
    assert parse_complex_rational(text) == GaussianRational(Fraction(re), Fraction(im))


def test_parse_symbol():
    a = parse_symbol("2+e^{it}")
    assert a.exact and a.freqs == (0, 1)
    b = parse_symbol("(1+2i)e^{-3it}")
    assert b.block(-3)[0][0] == GaussianRational(Fraction(1), Fraction(2))
    d = parse_symbol("diag(e^{it}, e^{-it})")
    assert d.size == 2


def test_symbol_document_round_trip():
    for a in [parse_symbol("2+e^{it}"), parse_symbol("diag(e^{2it}, 1/3)"), LoopSymbol.numeric({0: 2.0, 1: 0.5j})]:
        back = symbol_from_doc(symbol_to_doc(a))
        assert back.exact == a.exact and back.freqs == a.freqs
        assert np.allclose(back.evaluate(np.linspace(0, 6, 7)), a.evaluate(np.linspace(0, 6, 7)))


def test_symbol_document_matrix_entries():
    doc = {"size": 2, "coefficients": {"0": [["1", "0"], ["0", "1"]], "1": [["0", "1/2"], ["0", "0"]]}}
    a = symbol_from_doc(doc)
    assert a.exact and a.block(1)[0][1] == GaussianRational(Fraction(1, 2))


def test_symbol_algebra():
    a = e(1) + e(0, 2)
    assert (a @ e(-1)).freqs == (-1, 0)
    assert a.adjoint().freqs == (-1, 0)
    assert (a - a).coeffs == {}
    th = np.linspace(0, 2 * np.pi, 9)
    assert np.allclose((a @ a.adjoint()).evaluate(th)[:, 0, 0], np.abs(2 + np.exp(1j * th)) ** 2)


def test_exact_inverse():
    a = LoopSymbol.blocks([[e(0), e(1)], [e(0, 0), e(0)]])
    inv = a.exact_inverse()
    prod = a @ inv
    assert prod.freqs == (0,) and prod.block(0) == e(0, 1, 2).block(0)
    assert parse_symbol("2+e^{it}").exact_inverse() is None


# -- compression ------------------------------------------------------------------------

def test_compress_identity():
    assert np.array_equal(toeplitz_compress(e(0), 8).dense(), np.eye(9))


def test_compress_shift():
    T = toeplitz_compress(e(1), 8).dense()
    assert np.array_equal(T, np.eye(9, k=-1))


def test_compress_tridiagonal():
    T = toeplitz_compress(e(1) + e(-1), 8).dense()
    assert np.array_equal(T, np.eye(9, k=1) + np.eye(9, k=-1))
    assert not np.diag(T).any()


def test_compress_needs_room():
    with pytest.raises(WindowError):
        toeplitz_compress(e(3), 11)


# -- parametrix -------------------------------------------------------------------------

def test_parametrix_of_shift_is_backward_shift():
    par = parametrix(e(1), K=16)
    assert par.exact
    assert np.array_equal(par.operator.dense(), np.eye(17, k=1))


def test_parametrix_geometric_series():
    par = parametrix(parse_symbol("2+e^{it}"), order=20)
    ref = geometric_parametrix(2.0, 20)
    got = par.symbol
    for k, v in ref.items():
        assert abs(got.block(k)[0, 0] - v) < 1e-14
    assert all(abs(got.block(-k)[0, 0]) < 1e-14 for k in range(1, 21))
    assert par.coeff_error < 1e-12


def test_parametrix_constant_matrix():
    c = LoopSymbol.numeric({0: [[2.0, 1.0], [0.0, 4.0]]})
    par = parametrix(c, order=3)
    assert np.allclose(par.symbol.block(0), np.linalg.inv([[2.0, 1.0], [0.0, 4.0]]))
    assert all(np.abs(par.symbol.block(k)).max() < 1e-14 for k in (1, 2, 3))


def test_parametrix_residuals_decay_with_order():
    a = LoopSymbol.numeric({0: 1.0, 1: 0.6})
    K = 80
    A = toeplitz_compress(a, K).dense()

    def residual(order):
        B = parametrix(a, order=order, K=K).operator.dense()
        return np.abs((B @ A - np.eye(K + 1))[20:40, 20:40]).max()

    assert residual(16) < residual(8) < residual(4)


def test_parametrix_exact_corner():
    # for a Laurent unit, AB - Id and BA - Id vanish outside the first bandwidth rows
    a = LoopSymbol.blocks([[e(1), e(2)], [e(0, 0), e(-1)]])
    par = parametrix(a, K=24)
    A, B = toeplitz_compress(a, 24).dense(), par.operator.dense()
    bw = a.bandwidth + par.symbol.bandwidth
    n = 2 * 25
    band = slice(2 * bw, n - 2 * bw)
    assert np.abs((A @ B - np.eye(n))[band, band]).max() == 0
    assert np.abs((B @ A - np.eye(n))[band, band]).max() == 0


def test_parametrix_rejects_non_elliptic():
    with pytest.raises(EllipticityError):
        parametrix(parse_symbol("1+e^{it}"))


# -- trace commutator index -------------------------------------------------------------------

def test_identity_has_index_zero():
    A = toeplitz_compress(e(0), 16)
    ti = trace_commutator_index(A, A)
    assert ti.exact == GaussianRational(Fraction(0))


@pytest.mark.parametrize("k", range(-3, 4))
def test_monomial_index_exact(k):
    a = e(k)
    A = toeplitz_compress(a, 64)
    B = parametrix(a, K=64).operator
    ti = trace_commutator_index(A, B)
    assert exact_value(ti) == -k
    assert ti.bound == 0


def test_window_too_large():
    A = toeplitz_compress(e(2), 16)
    B = parametrix(e(2), K=16).operator
    with pytest.raises(WindowError):
        trace_commutator_index(A, B, W=13)
    assert exact_value(trace_commutator_index(A, B, W=8)) == -2


def test_window_too_small():
    A = toeplitz_compress(e(3), 32)
    B = parametrix(e(3), K=32).operator
    with pytest.raises(WindowError):
        trace_commutator_index(A, B, W=1)


def test_mismatched_truncations():
    with pytest.raises(WindowError):
        trace_commutator_index(toeplitz_compress(e(1), 16), parametrix(e(1), K=20).operator)


def test_numeric_index_2_plus_shift():
    ti = symbol_index(parse_symbol("2+e^{it}").to_numeric())
    assert abs(ti.value) < 1e-12
    assert ti.bound < 1e-9


def test_parametrix_independence():
    a = LoopSymbol.numeric({0: 1.0, 1: 0.7, -2: 0.2})
    values = [symbol_index(a, order=m) for m in (8, 16, 40)]
    for x in values[1:]:
        assert abs(x.value - values[0].value) <= x.bound + values[0].bound + 1e-12
    exact = [exact_value(symbol_index(e(2), order=m)) for m in (2, 5, 9)]
    assert exact == [-2, -2, -2]


# -- winding -----------------------------------------------------------------------------

@pytest.mark.parametrize("k", range(-4, 5))
def test_winding_monomial(k):
    assert winding_number(e(k)) == k


def test_winding_examples():
    assert winding_number(parse_symbol("diag(e^{it}, e^{-it})")) == 0
    assert winding_number(parse_symbol("2+e^{it}")) == 0
    assert winding_number(parse_symbol("2+e^{it}").to_numeric()) == 0
    assert winding_number(LoopSymbol.numeric({0: 0.5, 1: 1.0})) == 1


def test_winding_non_elliptic():
    with pytest.raises(EllipticityError):
        winding_number(parse_symbol("1-e^{it}"))


def test_certificate_refines_near_zero():
    cert = certify(LoopSymbol.numeric({0: 1.0, 1: 0.999}))
    assert cert.margin > 0 and cert.depth > 0


def test_winding_and_index_against_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(8):
        a, expected = random_perturbed_symbol(rng)
        q = quadrature_winding(a)
        assert abs(q - expected) < 1e-9
        assert winding_number(a) == expected
        ti = symbol_index(a)
        assert abs(ti.value + expected) < 1e-9


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_index_is_minus_winding(seed):
    a, expected = random_perturbed_symbol(np.random.default_rng(seed))
    ti = symbol_index(a)
    assert abs(ti.value + winding_number(a)) < 1e-9
    assert abs(ti.value + expected) <= max(ti.bound, 1e-12) * 10


# -- homotopy --------------------------------------------------------------------------------

def test_homotopy_shift_plus_constant():
    res = homotopy_sweep(LinearPath(e(1).to_numeric(), (e(1) + e(0, Fraction(1, 2))).to_numeric()), steps=11)
    assert res.constant and res.spread < 1e-9
    assert all(abs(v + 1) < 1e-9 for v in res.values)
    assert res.deviations == []


def test_homotopy_constant_path():
    a = parse_symbol("3+e^{2it}")
    res = homotopy_sweep([a, a], steps=5)
    assert len(set(round(v, 12) for v in res.values)) == 1


def test_homotopy_reports_failing_parameter():
    with pytest.raises(EllipticityError) as info:
        homotopy_sweep([e(0).to_numeric(), e(1).to_numeric()], steps=11)
    assert info.value.parameter == pytest.approx(0.5)


def test_homotopy_needs_two_steps():
    with pytest.raises(DomainError):
        homotopy_sweep([e(0), e(1)], steps=1)


# -- composition -------------------------------------------------------------------------------

def test_additivity_shifts():
    res = composition_additivity_check(e(1), e(2))
    assert res.exact and res.agrees
    assert exact_value(res.lhs) == -3


def test_additivity_with_identity():
    a = parse_symbol("diag(e^{it}, e^{-2it})")
    res = composition_additivity_check(e(0, 1, 2), a)
    assert res.agrees and exact_value(res.lhs) == 1


def test_additivity_numeric():
    res = composition_additivity_check(parse_symbol("2+e^{it}"), e(1))
    assert res.agrees and abs(res.lhs.value + 1) < 1e-9


def test_additivity_random_pairs():
    rng = np.random.default_rng(11)
    for _ in range(4):
        assert composition_additivity_check(*random_pair(rng)).agrees


# -- adjoint / reality -------------------------------------------------------------------------

def test_adjoint_of_shift():
    res = adjoint_index_check(e(1))
    assert exact_value(res.index) == -1 and exact_value(res.adjoint_index) == 1
    assert res.antisymmetric and res.rotation_zero
    assert abs(res.doubled_index.value) < 1e-12


def test_self_adjoint_symbol_has_index_zero():
    a = LoopSymbol.numeric({0: 2.0, 1: 0.5, -1: 0.5})  # 2 + cos θ
    res = adjoint_index_check(a)
    assert abs(res.index.value) < 1e-9
    assert res.max_imag < 1e-12


def test_rotation_at_quarter_turn_is_identity():
    r = rotation_symbol(e(3), math.pi / 2)
    assert r.exact and r.freqs == (0,)
    assert exact_value(symbol_index(r)) == 0


def test_doubled_index_vanishes():
    for a in monomial_suite()[:4] + numeric_suite(count=2):
        assert abs(doubled_index(a).value) < 1e-9


# -- McKean-Singer ------------------------------------------------------------------------------

@pytest.mark.parametrize("m,n", [(3, 5), (5, 3), (4, 4)])
def test_zero_map(m, n):
    res = mckean_singer_check(GradedOperator(np.zeros((n, m))))
    assert all(abs(s - (m - n)) < 1e-12 for s in res.supertraces)
    assert res.index == m - n


def test_random_full_rank_8_by_5():
    rng = np.random.default_rng(0)
    d = rng.normal(size=(8, 5)) + 1j * rng.normal(size=(8, 5))
    res = mckean_singer_check(GradedOperator(d))
    assert res.index == -3
    assert res.spread < 1e-12 and res.max_deviation < 1e-12
    assert res.constant


def test_invertible_square():
    rng = np.random.default_rng(1)
    res = mckean_singer_check(GradedOperator(rng.normal(size=(6, 6)) + 6 * np.eye(6)))
    assert res.index == 0 and res.max_deviation < 1e-12


def test_supertrace_against_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(5):
        D = random_graded_operator(rng, max_dim=6, with_gram=False)
        res = mckean_singer_check(D, (0.1, 1.0))
        for t, s in zip(res.t_grid, res.supertraces):
            assert abs(s - brute_force_supertrace(D.d_plus, t)) < 1e-9


def test_gram_matrices_change_adjoint_not_index():
    rng = np.random.default_rng(9)
    D = random_graded_operator(rng, max_dim=7)
    plain = GradedOperator(D.d_plus)
    assert mckean_singer_check(D).index == mckean_singer_check(plain).index
    # the adjoint respects the inner products: <D u, v>_F = <u, D* v>_E
    u = rng.normal(size=D.dim_e)
    v = rng.normal(size=D.dim_f)
    lhs = np.vdot(v, D.gram_f @ (D.d_plus @ u))
    rhs = np.vdot(D.adjoint() @ v, D.gram_e @ u)
    assert abs(lhs - rhs) < 1e-9


def test_heat_times_must_be_positive():
    with pytest.raises(DomainError):
        mckean_singer_check(GradedOperator(np.eye(2)), (0.0, 1.0))


def test_bad_gram_matrix():
    with pytest.raises(DomainError):
        GradedOperator(np.eye(2), gram_e=-np.eye(2))
