"""Ready-made manifold models and the JSON manifold format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

import jsonschema

from .errors import BasisOverflowError, DegreeError, DomainError, SchemaError, TruncationError
from .exact_algebra import (
    CohClass,
    RingModel,
    as_rational,
    format_rational,
    ring_mul,
    tensor_ring,
    truncated_power_ring,
)
from .genera import CHERN, PONTRYAGIN, CharData, char_data_from_total, pontryagin_from_chern

DEFAULT_BASIS_CAP = 4096


@dataclass(frozen=True)
class ManifoldModel:
    real_dimension: int
    ring: RingModel
    tangent: CharData
    is_complex: bool
    c1_parity_even: bool
    label: str
    annotations: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.real_dimension % 2:
            raise DegreeError("manifold models must be even-dimensional")
        if self.ring.top_degree != self.real_dimension:
            raise DegreeError(
                f"ring top degree {self.ring.top_degree} differs from real dimension {self.real_dimension}"
            )
        if self.tangent.ring is not self.ring and self.tangent.ring != self.ring:
            raise DegreeError("tangent classes do not live in the model's ring")
        if self.is_complex and self.tangent.mode != CHERN:
            raise DomainError("complex models carry chern-mode tangent data")

    @property
    def c1(self) -> CohClass:
        return self.tangent.c1

    def pontryagin(self) -> CharData:
        if self.tangent.mode == PONTRYAGIN:
            return self.tangent
        return pontryagin_from_chern(self.tangent)


def _integral_c1_parity(c1: CohClass) -> bool:
    return all(c.denominator == 1 and c.numerator % 2 == 0 for c in c1.coeffs)


def point() -> ManifoldModel:
    ring = truncated_power_ring((), (), 0, {(): 1})
    return ManifoldModel(0, ring, CharData(ring, 0, CHERN, ()), True, True, "pt")


@lru_cache(maxsize=None)
def cp(n: int) -> ManifoldModel:
    """Complex projective space: Q[x]/(x^(n+1)), total Chern class (1+x)^(n+1)."""
    if n < 1:
        raise DomainError("cp(n) needs n >= 1")
    ring = truncated_power_ring((("x", 2),), (n,), 2 * n, {(n,): 1})
    x = ring.monomial("x")
    total = (ring.one() + x) ** (n + 1)
    tangent = char_data_from_total(ring, n, total)
    return ManifoldModel(2 * n, ring, tangent, True, _integral_c1_parity(tangent.c1), f"CP{n}")


@lru_cache(maxsize=None)
def hypersurface(n: int, d: int) -> ManifoldModel:
    """Degree-``d`` hypersurface in CP^(2n+1), modelled on the subring generated by the hyperplane class h.

    Normalized by ∫h^(2n) = d; c(T) = (1+h)^(2n+2) / (1+dh).
    """
    if n < 1 or d < 1:
        raise DomainError("hypersurface(n, d) needs n >= 1 and d >= 1")
    top = 2 * n
    ring = truncated_power_ring((("h", 2),), (top,), 2 * top, {(top,): d})
    h = ring.monomial("h")
    inv = ring.zero()
    for k in range(top + 1):
        inv = inv + (-d) ** k * h ** k
    total = ring_mul((ring.one() + h) ** (2 * n + 2), inv)
    tangent = char_data_from_total(ring, top, total)
    return ManifoldModel(2 * top, ring, tangent, True, d % 2 == 0, f"V{2 * n}({d})")


def _rename_generators(left: RingModel, right: RingModel) -> list:
    used = {g[0] for g in left.generators}
    names = []
    spare = [c for c in "yzuvwstrqp"]
    for name, _ in right.generators:
        if name in used:
            cand = next((c for c in spare if c not in used), None)
            if cand is None:
                i = 2
                while f"{name}{i}" in used:
                    i += 1
                cand = f"{name}{i}"
            name = cand
        used.add(name)
        names.append(name)
    return names


def product(m1: ManifoldModel, m2: ManifoldModel, basis_cap: int = DEFAULT_BASIS_CAP) -> ManifoldModel:
    """Künneth product of two complex models; tangent data is the Whitney sum of the pullbacks."""
    if not (m1.is_complex and m2.is_complex):
        raise DomainError("product() is defined for complex-mode models")
    size = m1.ring.dimension * m2.ring.dimension
    if size > basis_cap:
        raise BasisOverflowError(f"product basis would have {size} monomials (cap {basis_cap})")
    names2 = _rename_generators(m1.ring, m2.ring)
    ring = tensor_ring(m1.ring, m2.ring, names2)
    k1, k2 = len(m1.ring.generators), len(m2.ring.generators)

    def pull(c: CohClass, left: bool) -> CohClass:
        coeffs = [Fraction(0)] * ring.dimension
        for i in c.support:
            m = c.ring.basis[i]
            full = m + (0,) * k2 if left else (0,) * k1 + m
            coeffs[ring.index[full]] = c.coeffs[i]
        return CohClass(ring, tuple(coeffs))

    total = ring_mul(pull(m1.tangent.total_class(), True), pull(m2.tangent.total_class(), False))
    tangent = char_data_from_total(ring, m1.tangent.rank + m2.tangent.rank, total)
    return ManifoldModel(
        m1.real_dimension + m2.real_dimension,
        ring,
        tangent,
        True,
        m1.c1_parity_even and m2.c1_parity_even,
        f"{m1.label}x{m2.label}",
    )


def cobordism_record(label: str, reference: ManifoldModel, annotations: Mapping | None = None) -> ManifoldModel:
    """A manifold known only through its oriented cobordism class.

    Pontryagin numbers (hence ∫Â) are those of ``reference``; the record is
    not complex and not spin.  ``annotations`` is free-form, unverified metadata.
    """
    notes = {"cobordant_to": reference.label}
    notes.update(annotations or {})
    return ManifoldModel(
        reference.real_dimension,
        reference.ring,
        reference.pontryagin(),
        False,
        False,
        label,
        notes,
    )


def hopkins_example() -> ManifoldModel:
    return cobordism_record(
        "Hopkins-surgery",
        cp(4),
        {"H2_integral": "0", "W3": "nonzero", "construction": "surgery on a degree-2 sphere in CP4"},
    )


# -- JSON manifold documents --------------------------------------------------

MANIFOLD_SCHEMA = {
    "type": "object",
    "required": ["label", "real_dimension", "generators", "basis", "pairing", "tangent"],
    "properties": {
        "label": {"type": "string"},
        "real_dimension": {"type": "integer", "minimum": 0},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "degree"],
                "properties": {
                    "name": {"type": "string", "pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
                    "degree": {"type": "integer"},
                },
                "additionalProperties": False,
            },
        },
        "basis": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "products": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": {"type": "string"}},
        },
        "pairing": {"type": "object", "additionalProperties": {"type": "string"}},
        "tangent": {
            "type": "object",
            "required": ["mode", "classes"],
            "properties": {
                "mode": {"enum": [CHERN, PONTRYAGIN]},
                "rank": {"type": "integer", "minimum": 0},
                "classes": {
                    "type": "array",
                    "items": {"type": "object", "additionalProperties": {"type": "string"}},
                },
            },
            "additionalProperties": False,
        },
        "complex": {"type": "boolean"},
        "c1_parity_even": {"type": "boolean"},
        "annotations": {"type": "object", "additionalProperties": {"type": "string"}},
    },
    "additionalProperties": False,
}


def class_to_doc(c: CohClass) -> dict:
    return {m: format_rational(q) for m, q in c.to_terms().items()}


def class_from_doc(ring: RingModel, doc: Mapping) -> CohClass:
    return ring.element(doc)


def _rational_field(value: str, where: str) -> Fraction:
    try:
        return as_rational(value)
    except DomainError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def load_manifold(document) -> ManifoldModel:
    """Validate a manifold document (dict, JSON text or path) and build the model.

    Raises SchemaError for shape problems, DegreeError/TruncationError for
    degree inconsistencies and PairingError for a vanishing fundamental class.
    """
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = json.loads(Path(document).read_text(encoding="utf-8"))
    elif isinstance(document, str):
        document = json.loads(document)
    try:
        jsonschema.validate(document, MANIFOLD_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"manifold document invalid at {path}: {exc.message}") from None

    generators = tuple((g["name"], g["degree"]) for g in document["generators"])
    names = [g[0] for g in generators]
    shell = _MonomialParser(names)
    basis = tuple(shell.parse(m) for m in document["basis"])
    top = document["real_dimension"]
    # RingModel.__post_init__ enforces even degrees and truncation of the basis.
    probe = RingModel(generators, basis, {}, top, {})
    index = probe.index

    def idx(text: str) -> int:
        m = shell.parse(text)
        if m not in index:
            degree = probe.monomial_degree(m)
            if degree > top:
                raise TruncationError(f"monomial {text!r} of degree {degree} exceeds dimension {top}")
            raise DegreeError(f"monomial {text!r} is not in the basis")
        return index[m]

    products = {}
    for key, terms in document.get("products", {}).items():
        # each side of "m1*m2" may itself contain '*'
        pair = _split_product_key(key, idx)
        parsed = tuple((idx(m), _rational_field(q, f"products[{key!r}]")) for m, q in terms.items())
        products[pair] = parsed
    pairing = {}
    for m, q in document["pairing"].items():
        pairing[idx(m)] = _rational_field(q, f"pairing[{m!r}]")
    ring = RingModel(generators, basis, products, top, pairing)
    ring.validate()

    tan = document["tangent"]
    classes = tuple(ring.element({m: _rational_field(q, "tangent") for m, q in c.items()}) for c in tan["classes"])
    is_complex = document.get("complex", tan["mode"] == CHERN)
    step = 2 if tan["mode"] == CHERN else 4
    rank = tan.get("rank", top // 2 if tan["mode"] == CHERN else top)
    for i, c in enumerate(classes, start=1):
        if not c.is_homogeneous(step * i):
            raise DegreeError(f"tangent class {i} is not homogeneous of degree {step * i}")
    tangent = CharData(ring, rank, tan["mode"], classes)
    if is_complex:
        parity = _integral_c1_parity(tangent.c1)
        if "c1_parity_even" in document and document["c1_parity_even"] != parity:
            raise DegreeError("c1_parity_even flag contradicts the tangent c1")
    else:
        parity = bool(document.get("c1_parity_even", False))
    return ManifoldModel(top, ring, tangent, bool(is_complex), parity, document["label"],
                         dict(document.get("annotations", {})))


def _split_product_key(key: str, idx) -> tuple:
    parts = key.split("*")
    for cut in range(1, len(parts)):
        left, right = "*".join(parts[:cut]), "*".join(parts[cut:])
        try:
            return idx(left), idx(right)
        except DegreeError:
            continue
    raise DegreeError(f"product key {key!r} is not of the form basis*basis")


class _MonomialParser:
    def __init__(self, names):
        self.names = list(names)

    def parse(self, text: str) -> tuple:
        exps = [0] * len(self.names)
        text = text.strip()
        if text == "1":
            return tuple(exps)
        for factor in text.split("*"):
            name, _, power = factor.strip().partition("^")
            if name not in self.names:
                raise SchemaError(f"unknown generator {name!r} in monomial {text!r}")
            try:
                exps[self.names.index(name)] += int(power) if power else 1
            except ValueError:
                raise SchemaError(f"bad exponent in monomial {text!r}") from None
        return tuple(exps)


def dump_manifold(model: ManifoldModel) -> dict:
    ring = model.ring
    fmt = ring.format_monomial
    products = {}
    n = ring.dimension
    for i in range(n):
        for j in range(i, n):
            if i == ring.unit_index or j == ring.unit_index:
                continue
            terms = {fmt(ring.basis[k]): format_rational(c) for k, c in ring.product_terms(i, j) if c}
            if terms:
                products[f"{fmt(ring.basis[i])}*{fmt(ring.basis[j])}"] = terms
    doc = {
        "label": model.label,
        "real_dimension": model.real_dimension,
        "generators": [{"name": nme, "degree": d} for nme, d in ring.generators],
        "basis": [fmt(m) for m in ring.basis],
        "products": products,
        "pairing": {fmt(ring.basis[k]): format_rational(v) for k, v in ring.pairing.items() if v},
        "tangent": {
            "mode": model.tangent.mode,
            "rank": model.tangent.rank,
            "classes": [class_to_doc(c) for c in model.tangent.classes],
        },
        "complex": model.is_complex,
        "c1_parity_even": model.c1_parity_even,
    }
    if model.annotations:
        doc["annotations"] = {str(k): str(v) for k, v in model.annotations.items()}
    return doc


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("fracindex") / "data" / name))


# -- name resolution -------------------------------------------------------------

BUILTIN_NAMES = {
    "pt": "a point",
    "cp<n>": "complex projective n-space, e.g. cp2",
    "v<2n>_<d>": "degree-d hypersurface in CP^(2n+1), e.g. v4_5 (quintic fourfold)",
    "k3": "quartic surface v2_4",
    "hopkins": "cobordism record of the Hopkins surgery example (cobordant to CP4)",
    "<a>x<b>": "product of two built-ins, e.g. cp1xcp1",
}


def resolve(name: str) -> ManifoldModel:
    """Resolve a built-in name or a path to a JSON manifold document."""
    path = Path(name)
    if path.suffix == ".json" or path.exists():
        return load_manifold(path)
    key = name.strip().lower()
    if "x" in key and not key.endswith(".json"):
        parts = key.split("x")
        if len(parts) > 1 and all(parts):
            out = resolve(parts[0])
            for part in parts[1:]:
                out = product(out, resolve(part))
            return out
    if key in ("pt", "point"):
        return point()
    if key == "k3":
        return hypersurface(1, 4)
    if key == "hopkins":
        return hopkins_example()
    if key.startswith("cp") and key[2:].isdigit():
        return cp(int(key[2:]))
    if key.startswith("v") and "_" in key:
        dim, _, deg = key[1:].partition("_")
        if dim.isdigit() and deg.isdigit() and int(dim) % 2 == 0:
            return hypersurface(int(dim) // 2, int(deg))
    raise DomainError(f"unknown manifold {name!r}; built-ins: {', '.join(BUILTIN_NAMES)} or a JSON path")


def catalog_entries() -> list:
    rows = []
    for label, model in [
        ("pt", point()),
        *[(f"cp{n}", cp(n)) for n in range(1, 7)],
        ("k3", hypersurface(1, 4)),
        *[(f"v{2 * n}_{2 * d + 1}", hypersurface(n, 2 * d + 1)) for n in (1, 2) for d in (1, 2)],
        ("hopkins", hopkins_example()),
    ]:
        rows.append({
            "name": label,
            "label": model.label,
            "real_dimension": model.real_dimension,
            "complex": model.is_complex,
            "c1_parity_even": model.c1_parity_even,
        })
    return rows


def with_label(model: ManifoldModel, label: str) -> ManifoldModel:
    return replace(model, label=label)
