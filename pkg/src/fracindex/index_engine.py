"""Exact evaluation of the Dirac, spin^c and Dolbeault index formulas."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .catalog import ManifoldModel, class_to_doc
from .errors import DomainError, ModelMismatchError
from .exact_algebra import CohClass, exp_class, format_rational, integrate, ring_mul
from .genera import CHERN, CharData, chern_character, genus_class, genus_series, trivial_bundle


@dataclass(frozen=True)
class TwistSpec:
    """Line-bundle twists: exp(c1(L')/2) and exp(c1(L)/N)."""

    l_prime_c1: Optional[CohClass] = None
    l_c1: Optional[CohClass] = None
    root_order: int = 1

    def __post_init__(self):
        if not isinstance(self.root_order, int) or self.root_order < 1:
            raise DomainError(f"root order N must be a positive integer, got {self.root_order!r}")
        for name in ("l_prime_c1", "l_c1"):
            c = getattr(self, name)
            if c is not None and not c.is_homogeneous(2):
                raise DomainError(f"{name} must be a degree-2 class")

    def factor(self, ring) -> CohClass:
        exponent = ring.zero()
        if self.l_prime_c1 is not None:
            exponent = exponent + self.l_prime_c1 / 2
        if self.l_c1 is not None:
            exponent = exponent + self.l_c1 / self.root_order
        return exp_class(exponent)


@dataclass(frozen=True)
class IndexReport:
    value: Fraction
    is_integer: bool
    inputs_digest: str
    formula: str
    manifold: str = ""

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def as_row(self) -> dict:
        return {
            "manifold": self.manifold,
            "formula": self.formula,
            "value": format_rational(self.value),
            "denominator": self.denominator,
            "integer": self.is_integer,
            "digest": self.inputs_digest,
        }


def _digest(formula: str, M: ManifoldModel, E: CharData | None, twist: TwistSpec | None) -> str:
    payload = {
        "formula": formula,
        "manifold": M.label,
        "dimension": M.real_dimension,
        "tangent": [class_to_doc(c) for c in M.tangent.classes],
    }
    if E is not None:
        payload["bundle"] = {"rank": E.rank, "classes": [class_to_doc(c) for c in E.classes]}
    if twist is not None:
        payload["twist"] = {
            "l_prime": class_to_doc(twist.l_prime_c1) if twist.l_prime_c1 is not None else None,
            "l": class_to_doc(twist.l_c1) if twist.l_c1 is not None else None,
            "N": twist.root_order,
        }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _report(value: Fraction, formula: str, M, E=None, twist=None) -> IndexReport:
    return IndexReport(value, value.denominator == 1, _digest(formula, M, E, twist), formula, M.label)


def a_hat_class(M: ManifoldModel) -> CohClass:
    series = genus_series("A-hat", M.real_dimension // 2)
    return genus_class(series, M.tangent)


def todd_class(M: ManifoldModel) -> CohClass:
    if not M.is_complex:
        raise DomainError(f"{M.label} is not a complex model; the Todd class needs Chern data")
    return genus_class(genus_series("Todd", M.real_dimension // 2), M.tangent)


def _check_bundle(M: ManifoldModel, E: CharData) -> None:
    if E.ring is not M.ring and E.ring != M.ring:
        raise ModelMismatchError(f"bundle data does not live in the ring of {M.label}")
    if E.mode != CHERN:
        raise DomainError("twisting bundles must be given by Chern classes")


def dirac_index(M: ManifoldModel, E: CharData | None = None) -> IndexReport:
    """∫ Â(M) ch(E)."""
    E = trivial_bundle(M.ring) if E is None else E
    _check_bundle(M, E)
    value = integrate(ring_mul(a_hat_class(M), chern_character(E)))
    return _report(value, "dirac", M, E)


def spinc_index(M: ManifoldModel, E: CharData | None = None, twist: TwistSpec | None = None) -> IndexReport:
    """∫ Â(M) exp(c1(L')/2) ch(E) exp(c1(L)/N)."""
    E = trivial_bundle(M.ring) if E is None else E
    twist = TwistSpec() if twist is None else twist
    _check_bundle(M, E)
    for c in (twist.l_prime_c1, twist.l_c1):
        if c is not None and c.ring is not M.ring and c.ring != M.ring:
            raise ModelMismatchError("twist class does not live in the manifold's ring")
    integrand = ring_mul(ring_mul(a_hat_class(M), twist.factor(M.ring)), chern_character(E))
    return _report(integrate(integrand), "spinc", M, E, twist)


def dolbeault_index(M: ManifoldModel) -> IndexReport:
    """∫ Â(M) exp(c1(M)/2); equal to the Todd genus."""
    if not M.is_complex:
        raise DomainError(f"{M.label} is not a complex model; the Dolbeault index needs c1")
    value = integrate(ring_mul(a_hat_class(M), exp_class(M.c1 / 2)))
    return _report(value, "dolbeault", M)


def fractionality_report(reports: Iterable[IndexReport]) -> list:
    """One row per report: value, reduced denominator and integrality."""
    return [r.as_row() for r in reports]
