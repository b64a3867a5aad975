"""Exact rational arithmetic and truncated graded rings modelling H^even(Z; Q).

A :class:`RingModel` is a finite monomial basis with a product table, a top
degree and a linear functional on the top-degree part (the fundamental
class).  Elements are :class:`CohClass` values with exact ``Fraction``
coefficients.  Degrees are real degrees, so a first Chern class has degree 2.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence, Union

from .errors import DegreeError, DomainError, ModelMismatchError, PairingError, TruncationError

Rational = Fraction
RationalLike = Union[int, Fraction, str]
Monomial = tuple  # exponent vector, one entry per generator

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction; floats are refused to keep results exact."""
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise DomainError(f"not a rational literal: {value!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise DomainError(f"zero denominator in {value!r}")
        return Fraction(int(m.group(1)), den)
    raise DomainError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers); inverse of :func:`as_rational`."""
    return str(Fraction(q))


@dataclass(frozen=True, eq=False)
class RingModel:
    """Truncated commutative ring on an explicit monomial basis.

    ``products`` maps an ordered pair of basis indices to a tuple of
    ``(basis index, coefficient)`` terms.  Missing pairs multiply to zero,
    except that the unit monomial always acts as the identity.
    """

    generators: tuple  # ((name, degree), ...)
    basis: tuple  # (exponent tuple, ...)
    products: Mapping
    top_degree: int
    pairing: Mapping  # basis index -> Fraction, top-degree indices only

    def __post_init__(self):
        names = [g[0] for g in self.generators]
        if len(set(names)) != len(names):
            raise DegreeError(f"duplicate generator names {names}")
        for name, deg in self.generators:
            if deg <= 0 or deg % 2:
                raise DegreeError(f"generator {name!r} has degree {deg}; only even positive degrees are allowed")
        if self.top_degree < 0 or self.top_degree % 2:
            raise DegreeError(f"top degree {self.top_degree} must be even and nonnegative")
        if len(set(self.basis)) != len(self.basis):
            raise DegreeError("repeated basis monomial")
        for m in self.basis:
            if len(m) != len(self.generators) or any(e < 0 for e in m):
                raise DegreeError(f"malformed monomial {m}")
            if self.monomial_degree(m) > self.top_degree:
                raise TruncationError(
                    f"basis monomial {self.format_monomial(m)} has degree "
                    f"{self.monomial_degree(m)} above the top degree {self.top_degree}"
                )
        if self.unit_index is None:
            raise DegreeError("basis must contain the unit monomial 1")

    # -- basis bookkeeping -------------------------------------------------

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * g[1] for e, g in zip(m, self.generators))

    @cached_property
    def degrees(self) -> tuple:
        return tuple(self.monomial_degree(m) for m in self.basis)

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.basis)}

    @cached_property
    def unit_index(self):
        return self.index.get((0,) * len(self.generators))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def indices_of_degree(self, degree: int) -> tuple:
        return tuple(i for i, d in enumerate(self.degrees) if d == degree)

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for e, (name, _) in zip(m, self.generators):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_monomial(self, text: str) -> Monomial:
        names = [g[0] for g in self.generators]
        exps = [0] * len(names)
        text = text.strip()
        if text == "1":
            return tuple(exps)
        for factor in text.split("*"):
            factor = factor.strip()
            name, _, power = factor.partition("^")
            if name not in names:
                raise DegreeError(f"unknown generator {name!r} in monomial {text!r}")
            try:
                p = int(power) if power else 1
            except ValueError:
                raise DegreeError(f"bad exponent in monomial {text!r}") from None
            if p < 0:
                raise DegreeError(f"negative exponent in monomial {text!r}")
            exps[names.index(name)] += p
        return tuple(exps)

    def basis_index(self, monomial) -> int:
        m = self.parse_monomial(monomial) if isinstance(monomial, str) else tuple(monomial)
        try:
            return self.index[m]
        except KeyError:
            raise DegreeError(f"{self.format_monomial(m)} is not a basis monomial") from None

    # -- products ------------------------------------------------------------

    def product_terms(self, i: int, j: int) -> tuple:
        u = self.unit_index
        if i == u:
            return ((j, Fraction(1)),)
        if j == u:
            return ((i, Fraction(1)),)
        terms = self.products.get((i, j))
        if terms is None:
            terms = self.products.get((j, i), ())
        return terms

    def validate(self) -> None:
        """Check degree additivity, truncation, commutativity, associativity and the pairing.

        Raises DegreeError, TruncationError or PairingError.
        """
        n = self.dimension
        degs = self.degrees
        for (i, j), terms in self.products.items():
            if not (0 <= i < n and 0 <= j < n):
                raise DegreeError(f"product table refers to unknown basis index ({i}, {j})")
            target = degs[i] + degs[j]
            nonzero = [(k, c) for k, c in terms if c != 0]
            if target > self.top_degree and nonzero:
                raise TruncationError(
                    f"{self.format_monomial(self.basis[i])}*{self.format_monomial(self.basis[j])} "
                    f"has degree {target} > {self.top_degree} but is nonzero"
                )
            for k, _ in nonzero:
                if degs[k] != target:
                    raise DegreeError(
                        f"{self.format_monomial(self.basis[i])}*{self.format_monomial(self.basis[j])} "
                        f"lands in degree {degs[k]}, expected {target}"
                    )
            if (j, i) in self.products:
                a = _normalize_terms(terms)
                b = _normalize_terms(self.products[(j, i)])
                if a != b:
                    raise DegreeError("product table is not commutative")
        basis_elems = [self.basis_element(i) for i in range(n)]
        for a, b, c in itertools.product(basis_elems, repeat=3):
            if degs[a.support[0]] + degs[b.support[0]] + degs[c.support[0]] > self.top_degree:
                continue
            if (a * b) * c != a * (b * c):
                raise DegreeError("product table is not associative")
        top = set(self.indices_of_degree(self.top_degree))
        for k in self.pairing:
            if k not in top:
                raise DegreeError(f"pairing defined on non-top monomial {self.format_monomial(self.basis[k])}")
        if not any(self.pairing.get(k, 0) != 0 for k in top):
            raise PairingError("fundamental pairing vanishes on every top-degree monomial")

    # -- element constructors -------------------------------------------------

    def zero(self) -> "CohClass":
        return CohClass(self, (Fraction(0),) * self.dimension)

    def scalar(self, q: RationalLike) -> "CohClass":
        coeffs = [Fraction(0)] * self.dimension
        coeffs[self.unit_index] = as_rational(q)
        return CohClass(self, tuple(coeffs))

    def one(self) -> "CohClass":
        return self.scalar(1)

    def basis_element(self, i: int) -> "CohClass":
        coeffs = [Fraction(0)] * self.dimension
        coeffs[i] = Fraction(1)
        return CohClass(self, tuple(coeffs))

    def monomial(self, text: str) -> "CohClass":
        return self.basis_element(self.basis_index(text))

    def element(self, terms: Mapping) -> "CohClass":
        """Build a class from ``{monomial string: rational}``."""
        coeffs = [Fraction(0)] * self.dimension
        for mono, q in terms.items():
            coeffs[self.basis_index(mono)] += as_rational(q)
        return CohClass(self, tuple(coeffs))

    def parse_class(self, text: str) -> "CohClass":
        """Parse a linear combination such as ``"3x"``, ``"x - 1/2*y"`` or ``"2*x^2 + 1"``."""
        return self.element(_parse_linear_combination(text))

    # -- structural equality (two independently built models compare equal) --

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RingModel):
            return NotImplemented
        if (self.generators, self.basis, self.top_degree) != (other.generators, other.basis, other.top_degree):
            return False
        if {k: v for k, v in self.pairing.items() if v} != {k: v for k, v in other.pairing.items() if v}:
            return False
        n = self.dimension
        return all(
            _normalize_terms(self.product_terms(i, j)) == _normalize_terms(other.product_terms(i, j))
            for i in range(n)
            for j in range(i, n)
        )

    def __hash__(self):
        return hash((self.generators, self.basis, self.top_degree))

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"RingModel([{gens}], dim={self.dimension}, top={self.top_degree})"


def _normalize_terms(terms) -> tuple:
    acc: dict = {}
    for k, c in terms:
        acc[k] = acc.get(k, Fraction(0)) + Fraction(c)
    return tuple(sorted((k, c) for k, c in acc.items() if c != 0))


_TERM_RE = re.compile(
    r"^(?P<coef>[+-]?\s*(?:\d+(?:\s*/\s*\d+)?)?)\s*\*?\s*(?P<mono>[A-Za-z][\w^*]*)?$"
)


def _parse_linear_combination(text: str) -> dict:
    out: dict = {}
    s = text.replace(" ", "")
    if not s:
        raise DomainError("empty class expression")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    if "".join(pieces) != s:
        raise DomainError(f"cannot parse class expression {text!r}")
    for piece in pieces:
        m = _TERM_RE.match(piece)
        if not m:
            raise DomainError(f"cannot parse term {piece!r}")
        coef, mono = m.group("coef"), m.group("mono")
        if coef in ("", "+"):
            q = Fraction(1)
        elif coef == "-":
            q = Fraction(-1)
        else:
            q = as_rational(coef)
        key = mono if mono else "1"
        if mono is None and coef in ("", "+", "-"):
            raise DomainError(f"cannot parse term {piece!r}")
        out[key] = out.get(key, Fraction(0)) + q
    return out


def truncated_power_ring(generators: Sequence, max_exponents: Sequence[int], top_degree: int,
                         pairing: Mapping) -> RingModel:
    """Ring ``Q[g_1..g_r] / (g_i^(e_i+1), everything above top_degree)``.

    ``pairing`` maps top-degree monomial exponent tuples to their integrals.
    """
    generators = tuple((str(n), int(d)) for n, d in generators)
    ranges = [range(e + 1) for e in max_exponents]
    basis = []
    for m in itertools.product(*ranges):
        if sum(e * g[1] for e, g in zip(m, generators)) <= top_degree:
            basis.append(m)
    basis.sort(key=lambda m: (sum(e * g[1] for e, g in zip(m, generators)), tuple(-e for e in m)))
    basis = tuple(basis)
    index = {m: i for i, m in enumerate(basis)}
    products = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                products[(i, j)] = ((index[c], Fraction(1)),)
    pair = {index[tuple(m)]: as_rational(v) for m, v in pairing.items()}
    ring = RingModel(generators, basis, products, top_degree, pair)
    return ring


def tensor_ring(r1: RingModel, r2: RingModel, names2: Sequence[str] | None = None) -> RingModel:
    """Künneth model of a product: basis m1⊗m2, pairing ∫⊗∫."""
    gens2 = r2.generators if names2 is None else tuple((n, d) for n, (_, d) in zip(names2, r2.generators))
    generators = r1.generators + tuple(gens2)
    pairs = list(itertools.product(range(r1.dimension), range(r2.dimension)))
    pairs.sort(key=lambda p: (r1.degrees[p[0]] + r2.degrees[p[1]], -r1.degrees[p[0]], p))
    basis = tuple(r1.basis[i] + r2.basis[j] for i, j in pairs)
    index = {p: k for k, p in enumerate(pairs)}
    products = {}
    for (i1, j1), (i2, j2) in itertools.product(pairs, repeat=2):
        if r1.degrees[i1] + r1.degrees[i2] + r2.degrees[j1] + r2.degrees[j2] > r1.top_degree + r2.top_degree:
            continue
        terms = []
        for k1, c1 in r1.product_terms(i1, i2):
            for k2, c2 in r2.product_terms(j1, j2):
                terms.append((index[(k1, k2)], c1 * c2))
        terms = _normalize_terms(terms)
        if terms:
            products[(index[(i1, j1)], index[(i2, j2)])] = terms
    pairing = {}
    for (i, j), k in index.items():
        v = r1.pairing.get(i, 0) * r2.pairing.get(j, 0)
        if v:
            pairing[k] = Fraction(v)
    return RingModel(generators, basis, products, r1.top_degree + r2.top_degree, pairing)


@dataclass(frozen=True, eq=False)
class CohClass:
    """Element of a :class:`RingModel`; coefficients are indexed by basis position."""

    ring: RingModel
    coeffs: tuple

    @property
    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)

    @property
    def components(self) -> dict:
        """Homogeneous components: degree -> coefficient vector over that degree's basis."""
        out = {}
        for d in sorted(set(self.ring.degrees)):
            idx = self.ring.indices_of_degree(d)
            vec = tuple(self.coeffs[i] for i in idx)
            if any(vec):
                out[d] = vec
        return out

    def degree_part(self, degree: int) -> "CohClass":
        coeffs = tuple(c if d == degree else Fraction(0) for c, d in zip(self.coeffs, self.ring.degrees))
        return CohClass(self.ring, coeffs)

    def truncate(self, max_degree: int) -> "CohClass":
        coeffs = tuple(c if d <= max_degree else Fraction(0) for c, d in zip(self.coeffs, self.ring.degrees))
        return CohClass(self.ring, coeffs)

    @property
    def constant(self) -> Fraction:
        return self.coeffs[self.ring.unit_index]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_homogeneous(self, degree: int) -> bool:
        return all(c == 0 or d == degree for c, d in zip(self.coeffs, self.ring.degrees))

    def _check(self, other: "CohClass") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise ModelMismatchError(f"classes live in different rings: {self.ring!r} vs {other.ring!r}")

    def __add__(self, other):
        if not isinstance(other, CohClass):
            other = self.ring.scalar(other)
        self._check(other)
        return CohClass(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CohClass):
            return ring_mul(self, other)
        q = as_rational(other)
        return CohClass(self.ring, tuple(q * a for a in self.coeffs))

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        q = as_rational(other)
        if q == 0:
            raise ZeroDivisionError("division of a class by zero")
        return self * (1 / q)

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not defined")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, CohClass):
            return (self.ring is other.ring or self.ring == other.ring) and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def to_terms(self) -> dict:
        """``{monomial string: Fraction}`` over the nonzero coefficients."""
        return {self.ring.format_monomial(self.ring.basis[i]): self.coeffs[i] for i in self.support}

    def __repr__(self):
        if self.is_zero():
            return "CohClass(0)"
        body = " + ".join(f"{format_rational(c)}*{m}" for m, c in self.to_terms().items())
        return f"CohClass({body})"


def ring_mul(a: CohClass, b: CohClass) -> CohClass:
    """Graded product, truncated above the top degree."""
    a._check(b)
    ring = a.ring
    acc = [Fraction(0)] * ring.dimension
    top = ring.top_degree
    degs = ring.degrees
    for i in a.support:
        ci = a.coeffs[i]
        for j in b.support:
            if degs[i] + degs[j] > top:
                continue
            cij = ci * b.coeffs[j]
            for k, c in ring.product_terms(i, j):
                acc[k] += cij * c
    return CohClass(ring, tuple(acc))


def exp_class(a: CohClass) -> CohClass:
    """``sum a^k / k!``; finite because positive-degree classes are nilpotent."""
    if a.constant != 0:
        raise DomainError("exp_class needs a class with zero degree-0 part")
    out = a.ring.one()
    term = a.ring.one()
    k = 0
    while True:
        k += 1
        term = ring_mul(term, a) / k
        if term.is_zero():
            return out
        out = out + term


def integrate(a: CohClass) -> Fraction:
    """Pair the top-degree component with the fundamental class."""
    return sum((a.coeffs[k] * v for k, v in a.ring.pairing.items()), Fraction(0))

