"""Multiplicative sequences, the Chern character and Chern -> Pontryagin conversion.

Everything goes through power sums of formal roots.  A genus with
characteristic series Q(x) is evaluated as

    prod_i Q(x_i) = exp( sum_k l_k * s_k ),    log Q(x) = sum_k l_k x^k,

where s_k is the k-th power sum of the roots, recovered from the
elementary symmetric functions (the Chern or Pontryagin classes) with
Newton's identities.  No splitting ring is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import DomainError, ModelMismatchError, SeriesOrderError, UnknownSeriesError
from .exact_algebra import CohClass, RingModel, exp_class, ring_mul

CHERN = "chern"
PONTRYAGIN = "pontryagin"

_ALIASES = {
    "a-hat": "A-hat", "ahat": "A-hat", "a_hat": "A-hat", "â": "A-hat",
    "todd": "Todd", "td": "Todd",
    "l": "L", "hirzebruch-l": "L", "signature": "L",
}


# -- exact power series on coefficient lists --------------------------------

def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


def series_inverse(a: Sequence[Fraction], order: int) -> list:
    """Reciprocal of a power series with nonzero constant term."""
    if not a or a[0] == 0:
        raise DomainError("series with zero constant term has no reciprocal")
    a = list(a) + [Fraction(0)] * max(0, order + 1 - len(a))
    inv = [Fraction(1) / a[0]]
    for n in range(1, order + 1):
        s = sum((a[k] * inv[n - k] for k in range(1, n + 1)), Fraction(0))
        inv.append(-s / a[0])
    return inv


def series_log(a: Sequence[Fraction], order: int) -> list:
    """log of a series with constant term 1, via (log a)' = a'/a."""
    if a[0] != 1:
        raise DomainError("series_log needs constant term 1")
    a = list(a) + [Fraction(0)] * max(0, order + 1 - len(a))
    deriv = [k * a[k] for k in range(1, order + 1)]
    q = series_mul(deriv, series_inverse(a, order), order - 1) if order >= 1 else []
    return [Fraction(0)] + [q[k - 1] / k for k in range(1, order + 1)]


def _sinh_over_x(order: int, scale: Fraction) -> list:
    # sinh(s x)/(s x) = sum (s x)^(2k) / (2k+1)!
    return [scale ** n / factorial(n + 1) if n % 2 == 0 else Fraction(0) for n in range(order + 1)]


def _characteristic_series(name: str, order: int) -> list:
    if name == "A-hat":
        return series_inverse(_sinh_over_x(order, Fraction(1, 2)), order)
    if name == "Todd":
        # (1 - e^{-x})/x = sum (-1)^n x^n / (n+1)!
        denom = [Fraction((-1) ** n, factorial(n + 1)) for n in range(order + 1)]
        return series_inverse(denom, order)
    if name == "L":
        cosh = [Fraction(1, factorial(n)) if n % 2 == 0 else Fraction(0) for n in range(order + 1)]
        return series_mul(cosh, series_inverse(_sinh_over_x(order, Fraction(1)), order), order)
    raise UnknownSeriesError(name)


@dataclass(frozen=True)
class GenusSeries:
    """Taylor coefficients of Q(x), normalized so Q(0) = 1."""

    name: str
    coefficients: tuple

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_even(self) -> bool:
        return all(c == 0 for c in self.coefficients[1::2])

    def log_coefficients(self) -> list:
        return series_log(list(self.coefficients), self.order)


def genus_series(name: str, order: int) -> GenusSeries:
    """Exact coefficients of (x/2)/sinh(x/2), x/(1-e^-x) or x/tanh(x) up to ``x^order``."""
    if order < 0:
        raise DomainError("series order must be nonnegative")
    canonical = _ALIASES.get(str(name).lower(), name)
    if canonical not in ("A-hat", "Todd", "L"):
        raise UnknownSeriesError(f"unknown genus series {name!r}; expected A-hat, Todd or L")
    return GenusSeries(canonical, tuple(_characteristic_series(canonical, order)))


# -- characteristic data ----------------------------------------------------

@dataclass(frozen=True)
class CharData:
    """Characteristic classes of a bundle: c_1..c_r (chern) or p_1..p_k (pontryagin).

    ``rank`` is the complex rank in chern mode and the real rank in
    pontryagin mode.  ``classes[i]`` has degree 2(i+1) resp. 4(i+1).
    """

    ring: RingModel
    rank: int
    mode: str
    classes: tuple

    def __post_init__(self):
        if self.mode not in (CHERN, PONTRYAGIN):
            raise DomainError(f"unknown characteristic data mode {self.mode!r}")
        if self.rank < 0:
            raise DomainError("rank must be nonnegative")
        step = 2 if self.mode == CHERN else 4
        for i, c in enumerate(self.classes):
            if c.ring is not self.ring and c.ring != self.ring:
                raise ModelMismatchError("characteristic class from a different ring")
            if not c.is_homogeneous(step * (i + 1)):
                raise DomainError(f"{self.mode} class {i + 1} must be homogeneous of degree {step * (i + 1)}")
        limit = self.rank if self.mode == CHERN else self.rank // 2
        if any(not c.is_zero() for c in self.classes[limit:]):
            raise DomainError(f"{self.mode} classes beyond what rank {self.rank} allows are nonzero")

    def elementary(self, i: int) -> CohClass:
        """i-th class, with the conventions e_0 = 1 and e_i = 0 past the stored list."""
        if i == 0:
            return self.ring.one()
        if i <= len(self.classes):
            return self.classes[i - 1]
        return self.ring.zero()

    @property
    def c1(self) -> CohClass:
        if self.mode != CHERN:
            raise DomainError("c1 is only defined for chern-mode data")
        return self.elementary(1)

    def total_class(self) -> CohClass:
        out = self.ring.one()
        for c in self.classes:
            out = out + c
        return out


def char_data_from_total(ring: RingModel, rank: int, total: CohClass, mode: str = CHERN) -> CharData:
    """Split a total class 1 + c_1 + c_2 + ... into homogeneous pieces."""
    step = 2 if mode == CHERN else 4
    if total.constant != 1:
        raise DomainError("total characteristic class must have constant term 1")
    n = ring.top_degree // step
    classes = tuple(total.degree_part(step * i) for i in range(1, n + 1))
    while classes and classes[-1].is_zero():
        classes = classes[:-1]
    if mode == CHERN and len(classes) > rank:
        raise DomainError(f"total class has c_{len(classes)} but rank is {rank}")
    return CharData(ring, rank, mode, classes)


def trivial_bundle(ring: RingModel, rank: int = 1) -> CharData:
    return CharData(ring, rank, CHERN, ())


def line_bundle(c1: CohClass) -> CharData:
    return char_data_from_total(c1.ring, 1, c1.ring.one() + c1)


def direct_sum(*bundles: CharData) -> CharData:
    """Whitney sum: formal roots concatenate, total classes multiply."""
    if not bundles:
        raise DomainError("direct_sum needs at least one bundle")
    mode = bundles[0].mode
    if any(b.mode != mode for b in bundles):
        raise DomainError("cannot add chern and pontryagin data")
    total = bundles[0].total_class()
    for b in bundles[1:]:
        total = ring_mul(total, b.total_class())
    return char_data_from_total(bundles[0].ring, sum(b.rank for b in bundles), total, mode)


# -- Newton identities ------------------------------------------------------

def power_sums(elementary: Sequence[CohClass], count: int, one: CohClass) -> list:
    """Power sums s_1..s_count of formal roots from e_1, e_2, ... via Newton's identities.

    s_k = sum_{i=1}^{k-1} (-1)^(i-1) e_i s_{k-i} + (-1)^(k-1) k e_k
    """
    zero = one * 0

    def e(i):
        return elementary[i - 1] if i <= len(elementary) else zero

    s = [None]
    for k in range(1, count + 1):
        acc = (-1) ** (k - 1) * k * e(k)
        for i in range(1, k):
            ei = e(i)
            if not ei.is_zero():
                acc = acc + (-1) ** (i - 1) * ring_mul(ei, s[k - i])
        s.append(acc)
    return s[1:]


def elementary_from_power_sums(sums: Sequence[CohClass], count: int, one: CohClass) -> list:
    """Inverse Newton: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} s_i."""
    e = [one]
    for k in range(1, count + 1):
        acc = one * 0
        for i in range(1, k + 1):
            if i <= len(sums):
                acc = acc + (-1) ** (i - 1) * ring_mul(e[k - i], sums[i - 1])
        e.append(acc / k)
    return e[1:]


def genus_class(series: GenusSeries, bundle: CharData) -> CohClass:
    """Multiplicative-sequence class of ``bundle`` for the characteristic series ``series``."""
    ring = bundle.ring
    top = ring.top_degree
    if series.order < top // 2:
        raise SeriesOrderError(
            f"{series.name} series of order {series.order} is too short for top degree {top} "
            f"(need order >= {top // 2})"
        )
    one = ring.one()
    logq = series.log_coefficients()
    if bundle.mode == CHERN:
        count = top // 2
        sums = power_sums(bundle.classes, count, one)
        exponent = ring.zero()
        for k in range(1, count + 1):
            if logq[k]:
                exponent = exponent + logq[k] * sums[k - 1]
    else:
        if not series.is_even:
            raise DomainError(f"{series.name} is not an even series; it needs chern-mode data")
        # Q(x) = R(x^2); the Pontryagin classes are elementary in the squared roots.
        count = top // 4
        sums = power_sums(bundle.classes, count, one)
        exponent = ring.zero()
        for j in range(1, count + 1):
            if logq[2 * j]:
                exponent = exponent + logq[2 * j] * sums[j - 1]
    return exp_class(exponent)


def chern_character(bundle: CharData) -> CohClass:
    """rank + sum_k s_k / k! over formal Chern roots."""
    if bundle.mode != CHERN:
        raise DomainError("the Chern character needs chern-mode data")
    ring = bundle.ring
    count = ring.top_degree // 2
    out = ring.scalar(bundle.rank)
    for k, s in enumerate(power_sums(bundle.classes, count, ring.one()), start=1):
        out = out + s / factorial(k)
    return out


def pontryagin_from_chern(bundle: CharData) -> CharData:
    """Pontryagin classes of the underlying real bundle.

    sum_k (-1)^k p_k = c(E) c(conj E) with c_i(conj E) = (-1)^i c_i(E).
    """
    if bundle.mode != CHERN:
        raise DomainError("pontryagin_from_chern needs chern-mode data")
    ring = bundle.ring
    conj = ring.one()
    for i, c in enumerate(bundle.classes, start=1):
        conj = conj + (-1) ** i * c
    prod = ring_mul(bundle.total_class(), conj)
    classes = tuple((-1) ** k * prod.degree_part(4 * k) for k in range(1, ring.top_degree // 4 + 1))
    while classes and classes[-1].is_zero():
        classes = classes[:-1]
    return CharData(ring, 2 * bundle.rank, PONTRYAGIN, classes)
