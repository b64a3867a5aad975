import copy
import json
from fractions import Fraction

import pytest

from fracindex import catalog as cat
from fracindex.errors import BasisOverflowError, DegreeError, DomainError, PairingError, SchemaError, TruncationError
from fracindex.exact_algebra import integrate, ring_mul
from fracindex.genera import PONTRYAGIN, genus_class, genus_series
from oracles import hypersurface_closed_form


def a_hat_integral(M):
    return integrate(genus_class(genus_series("A-hat", M.real_dimension // 2), M.pontryagin()))


def cp2_document():
    return json.loads(cat.fixture_path("cp2.json").read_text())


# -- constructors ---------------------------------------------------------------

@pytest.mark.parametrize("n,expected", [(1, 0), (2, Fraction(-1, 8)), (4, Fraction(3, 128))])
def test_cp_a_hat(n, expected):
    assert a_hat_integral(cat.cp(n)) == expected


@pytest.mark.parametrize("n", range(1, 7))
def test_cp_pairing(n):
    ring = cat.cp(n).ring
    x = ring.monomial("x")
    assert integrate(x ** n) == 1
    for k in range(n):
        assert integrate(x ** k) == 0


@pytest.mark.parametrize("n", range(1, 5))
def test_cp_first_chern_class(n):
    M = cat.cp(n)
    assert M.c1 == (n + 1) * M.ring.monomial("x")
    assert M.c1_parity_even == (n % 2 == 1)


def test_quintic_fourfold():
    M = cat.hypersurface(2, 5)
    h = M.ring.monomial("h")
    assert integrate(h ** 4) == 5
    assert integrate(h * h) == 0
    assert a_hat_integral(M) == Fraction(63, 128)
    assert not M.c1_parity_even


def test_k3_model():
    M = cat.hypersurface(1, 4)
    assert M.c1.is_zero()
    assert M.c1_parity_even
    assert integrate(M.tangent.elementary(2)) == 24
    p1 = M.pontryagin().classes[0]
    assert p1 == ring_mul(M.c1, M.c1) - 2 * M.tangent.elementary(2)
    assert a_hat_integral(M) == 2 == -integrate(p1) / 24


@pytest.mark.parametrize("n,d", [(n, d) for n in (1, 2, 3) for d in range(1, 7)])
def test_hypersurface_c1_and_parity(n, d):
    M = cat.hypersurface(n, d)
    assert M.c1 == (2 * n + 2 - d) * M.ring.monomial("h")
    assert M.c1_parity_even == (d % 2 == 0)


def test_odd_hypersurfaces_never_spin():
    assert not any(cat.hypersurface(n, 2 * d + 1).c1_parity_even for n in range(1, 5) for d in range(1, 7))


def test_product_examples():
    assert a_hat_integral(cat.product(cat.cp(1), cat.cp(1))) == 0
    assert a_hat_integral(cat.product(cat.cp(2), cat.cp(2))) == Fraction(1, 64)


def test_product_renames_clashing_generators():
    M = cat.product(cat.cp(1), cat.cp(1))
    assert [g[0] for g in M.ring.generators] == ["x", "y"]
    assert integrate(M.ring.parse_class("x*y")) == 1


@pytest.mark.parametrize("M", [cat.cp(2), cat.hypersurface(1, 4), cat.cp(4)], ids=lambda m: m.label)
def test_product_with_point(M):
    P = cat.product(M, cat.point())
    assert P.real_dimension == M.real_dimension
    assert a_hat_integral(P) == a_hat_integral(M)
    top = M.real_dimension // 2
    assert integrate(P.tangent.elementary(top)) == integrate(M.tangent.elementary(top))


def test_product_basis_cap():
    with pytest.raises(BasisOverflowError):
        cat.product(cat.cp(6), cat.cp(6), basis_cap=10)


def test_product_needs_complex_models():
    with pytest.raises(DomainError):
        cat.product(cat.hopkins_example(), cat.cp(1))


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 2), (1, 3), (2, 4)])
def test_product_multiplicativity(a, b):
    M1, M2 = cat.cp(a), cat.cp(b)
    assert a_hat_integral(cat.product(M1, M2)) == a_hat_integral(M1) * a_hat_integral(M2)


def test_product_multiplicativity_hypersurfaces():
    M1, M2 = cat.hypersurface(1, 3), cat.hypersurface(1, 5)
    assert a_hat_integral(cat.product(M1, M2)) == a_hat_integral(M1) * a_hat_integral(M2)


# -- cobordism records ------------------------------------------------------------

def test_hopkins_record():
    Z = cat.hopkins_example()
    assert a_hat_integral(Z) == Fraction(3, 128)
    assert not Z.is_complex and not Z.c1_parity_even
    assert Z.tangent.mode == PONTRYAGIN
    assert Z.annotations["W3"] == "nonzero"


def test_record_passes_numbers_through():
    assert a_hat_integral(cat.cobordism_record("anything", cat.cp(2))) == Fraction(-1, 8)


def test_record_metadata_round_trip():
    Z = cat.hopkins_example()
    back = cat.load_manifold(json.dumps(cat.dump_manifold(Z)))
    assert back.label == Z.label
    assert dict(back.annotations) == dict(Z.annotations)
    assert back.is_complex == Z.is_complex and back.c1_parity_even == Z.c1_parity_even
    assert back.tangent.classes == Z.tangent.classes
    assert a_hat_integral(back) == Fraction(3, 128)


# -- JSON documents --------------------------------------------------------------------

def test_fixture_matches_cp2():
    M = cat.load_manifold(cat.fixture_path("cp2.json"))
    assert M == cat.cp(2)


def test_load_from_text_and_dict():
    doc = cp2_document()
    assert cat.load_manifold(doc) == cat.load_manifold(json.dumps(doc))


@pytest.mark.parametrize("M", [cat.cp(3), cat.hypersurface(2, 5), cat.product(cat.cp(1), cat.cp(2))],
                         ids=lambda m: m.label)
def test_dump_load_round_trip(M):
    assert cat.load_manifold(json.dumps(cat.dump_manifold(M))) == M


def test_rationals_serialize_bit_exact():
    doc = cat.dump_manifold(cat.hypersurface(1, 3))
    assert all(isinstance(q, str) for q in doc["pairing"].values())
    assert cat.load_manifold(doc).ring.pairing == cat.hypersurface(1, 3).ring.pairing


def test_reject_odd_degree_generator():
    doc = cp2_document()
    doc["generators"][0]["degree"] = 3
    with pytest.raises(DegreeError):
        cat.load_manifold(doc)


def test_reject_nonzero_cube_on_four_manifold():
    doc = cp2_document()
    doc["basis"].append("x^3")
    doc["products"]["x*x^2"] = {"x^3": "1"}
    with pytest.raises(TruncationError):
        cat.load_manifold(doc)


def test_reject_zero_pairing():
    doc = cp2_document()
    doc["pairing"] = {"x^2": "0"}
    with pytest.raises(PairingError):
        cat.load_manifold(doc)


def test_reject_schema_violation():
    doc = cp2_document()
    del doc["tangent"]
    with pytest.raises(SchemaError):
        cat.load_manifold(doc)


def test_reject_bad_rational():
    doc = cp2_document()
    doc["pairing"] = {"x^2": "one"}
    with pytest.raises(SchemaError):
        cat.load_manifold(doc)


def test_diagnostics_are_distinct():
    kinds = set()
    for mutate in (
        lambda d: d["generators"][0].update(degree=3),
        lambda d: d.update(pairing={"x^2": "0"}),
        lambda d: d.pop("label"),
    ):
        doc = copy.deepcopy(cp2_document())
        mutate(doc)
        with pytest.raises(Exception) as info:
            cat.load_manifold(doc)
        kinds.add(type(info.value))
    assert len(kinds) == 3


def test_reject_contradicting_parity_flag():
    doc = cp2_document()
    doc["c1_parity_even"] = True
    with pytest.raises(DegreeError):
        cat.load_manifold(doc)


# -- properties -------------------------------------------------------------------

GRID = [(n, d) for n in range(1, 5) for d in range(1, 7)]


@pytest.mark.parametrize("n,d", GRID)
def test_hypersurface_closed_form(n, d):
    assert a_hat_integral(cat.hypersurface(n, 2 * d + 1)) == hypersurface_closed_form(n, 2 * d + 1)


@pytest.mark.parametrize("n,d", [(n, d) for n, d in GRID if d >= n])
def test_non_integrality(n, d):
    assert a_hat_integral(cat.hypersurface(n, 2 * d + 1)).denominator > 1


@pytest.mark.parametrize("n,d", [(1, 2), (1, 4), (1, 6), (2, 2), (2, 4), (2, 6), (3, 2), (3, 4)])
def test_spin_hypersurfaces_integral(n, d):
    M = cat.hypersurface(n, d)
    assert M.c1_parity_even
    assert a_hat_integral(M).denominator == 1


# -- name resolution ----------------------------------------------------------------

@pytest.mark.parametrize("name,label", [("pt", "pt"), ("cp3", "CP3"), ("k3", "V2(4)"), ("v4_5", "V4(5)"),
                                        ("hopkins", "Hopkins-surgery")])
def test_resolve(name, label):
    assert cat.resolve(name).label == label


def test_resolve_product_and_path():
    assert cat.resolve("cp1xcp1") == cat.product(cat.cp(1), cat.cp(1))
    assert cat.resolve(str(cat.fixture_path("cp2.json"))) == cat.cp(2)


def test_resolve_unknown():
    with pytest.raises(DomainError):
        cat.resolve("torus")


def test_catalog_entries_resolve():
    for row in cat.catalog_entries():
        assert cat.resolve(row["name"]).label == row["label"]
