"""Toeplitz compressions, parametrices and the windowed trace-commutator index.

The half-line model: a loop symbol a acts on sequences indexed by modes
0..K through the block matrix T(a)_{mn} = a_{m-n}.  For an elliptic a with
parametrix b ≈ a^{-1}, the index is Tr(T(a)T(b) - Id) - Tr(T(b)T(a) - Id),
with both traces restricted to modes 0..W.  The window keeps clear of the
truncation corner at mode K, so every traced entry equals the entry of the
untruncated half-line operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from ..errors import DomainError, EllipticityError, WindowError
from . import _kernels
from .gaussian import ZERO, GaussianRational
from .symbols import LoopSymbol

MAX_REFINEMENT_DEPTH = 16
MIN_GRID = 64
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Certificate:
    """Proof that det a(θ) has no zero on the circle.

    Numeric certificates rest on a Lipschitz bound for det a (Bernstein
    on its exact trigonometric-polynomial coefficients): with grid step h,
    min |det| over the grid > lipschitz * h rules out zeros and keeps each
    grid step's phase increment below π/2.
    """

    symbolic: bool
    grid_size: int = 0
    min_abs_det: float = 0.0
    lipschitz: float = 0.0
    depth: int = 0

    @property
    def margin(self) -> float:
        if self.symbolic:
            return math.inf
        return self.min_abs_det - self.lipschitz * 2 * math.pi / self.grid_size


def _det_degree(symbol: LoopSymbol) -> tuple:
    lo = min(symbol.freqs, default=0)
    hi = max(symbol.freqs, default=0)
    return symbol.size * min(lo, 0), symbol.size * max(hi, 0)


def _grid(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def det_samples(symbol: LoopSymbol, n: int) -> np.ndarray:
    return _kernels.det_batch(np.ascontiguousarray(symbol.evaluate(_grid(n))))


def _det_lipschitz(symbol: LoopSymbol) -> float:
    lo, hi = _det_degree(symbol)
    span = hi - lo
    n = 1 << max(4, int(math.ceil(math.log2(2 * span + 2))))
    d = det_samples(symbol, n)
    coeffs = np.fft.fft(d) / n
    freqs = np.fft.fftfreq(n, 1.0 / n)
    # coefficients outside [lo, hi] are roundoff; keep them in the bound anyway
    return float(np.sum(np.abs(freqs) * np.abs(coeffs)) * (1 + 1e-9)) + float(n * _EPS * np.abs(d).max())


def certify(symbol: LoopSymbol, parameter=None) -> Certificate:
    """Certify ellipticity; raises EllipticityError after MAX_REFINEMENT_DEPTH dyadic refinements."""
    if not symbol.coeffs:
        raise EllipticityError("the zero symbol is not elliptic", parameter)
    mono = symbol.monomial_determinant()
    if mono is not None:
        return Certificate(symbolic=True)
    lip = _det_lipschitz(symbol)
    lo, hi = _det_degree(symbol)
    n = max(MIN_GRID, 1 << int(math.ceil(math.log2(2 * (hi - lo) + 2))))
    scale = max(1.0, lip)
    for depth in range(MAX_REFINEMENT_DEPTH + 1):
        d = np.abs(det_samples(symbol, n))
        low = float(d.min())
        if low <= 1e-13 * scale:
            where = 2 * math.pi * int(d.argmin()) / n
            raise EllipticityError(
                f"det a(θ) vanishes near θ = {where:.6g} (|det| = {low:.3g})", parameter
            )
        if low > lip * 2 * math.pi / n:
            return Certificate(False, n, low, lip, depth)
        n *= 2
    raise EllipticityError(
        f"could not certify ellipticity after {MAX_REFINEMENT_DEPTH} refinements (min |det| = {low:.3g})",
        parameter,
    )


def winding_number(symbol: LoopSymbol) -> int:
    """Winding number of det a(θ) around 0."""
    mono = symbol.monomial_determinant()
    if mono is not None:
        return mono[1]
    cert = certify(symbol)
    total, worst = _kernels.phase_increments(det_samples(symbol, cert.grid_size))
    turns = total / (2 * math.pi)
    k = round(turns)
    if abs(turns - k) > 1e-6 or worst >= math.pi / 2 + 1e-9:
        raise EllipticityError(f"phase tracking inconsistent (turns = {turns!r}, max step = {worst!r})")
    return int(k)


@dataclass(frozen=True, eq=False)
class HalfLineOperator:
    """Compression of a loop symbol to modes 0..K (Toeplitz: constant along block diagonals)."""

    size: int
    K: int
    diagonals: Mapping  # offset m-n -> s×s block (exact tuples or complex arrays)
    exact: bool
    coeff_error: float = 0.0  # bound on |computed - true| symbol coefficients
    symbol: Optional[LoopSymbol] = field(default=None, repr=False)

    @property
    def bandwidth(self) -> int:
        return max((abs(k) for k in self.diagonals), default=0)

    @property
    def shape(self) -> tuple:
        n = self.size * (self.K + 1)
        return n, n

    def block(self, m: int, n: int):
        if not (0 <= m <= self.K and 0 <= n <= self.K):
            raise IndexError((m, n))
        return self.diagonals.get(m - n)

    def dense(self) -> np.ndarray:
        sym = LoopSymbol(self.size, self.diagonals, self.exact)
        freqs, arr = sym.arrays()
        return _kernels.toeplitz_dense(freqs, arr, self.K)

    def adjoint(self) -> "HalfLineOperator":
        sym = LoopSymbol(self.size, self.diagonals, self.exact).adjoint()
        return HalfLineOperator(self.size, self.K, sym.coeffs, self.exact, self.coeff_error, sym)


def toeplitz_compress(symbol: LoopSymbol, K: int, coeff_error: float = 0.0) -> HalfLineOperator:
    """Block matrix with (m, n) entry a_{m-n} on modes 0..K."""
    if K < 4 * symbol.bandwidth or K < 1:
        raise WindowError(f"truncation K = {K} is below 4 x bandwidth ({symbol.bandwidth})")
    return HalfLineOperator(symbol.size, K, dict(symbol.coeffs), symbol.exact, coeff_error, symbol)


@dataclass(frozen=True)
class Parametrix:
    operator: HalfLineOperator
    symbol: LoopSymbol
    order: int
    exact: bool
    coeff_error: float
    certificate: Certificate


def inverse_coefficients(symbol: LoopSymbol, order: int, max_samples: int = 1 << 18):
    """Fourier coefficients of a(θ)^{-1} for |k| <= order, with an aliasing error estimate.

    The estimate is the largest change of any kept coefficient when the
    sample count doubles; sampling grows until that change is at roundoff.
    """
    n = max(MIN_GRID, 1 << int(math.ceil(math.log2(8 * (order + symbol.bandwidth + 1)))))

    def coeffs_at(n):
        inv = _kernels.inv_batch(np.ascontiguousarray(symbol.evaluate(_grid(n))))
        return np.fft.fft(inv, axis=0) / n

    prev = coeffs_at(n)
    ks = np.arange(-order, order + 1)
    while True:
        cur = coeffs_at(2 * n)
        diff = float(np.abs(cur[ks % (2 * n)] - prev[ks % n]).max())
        scale = float(np.abs(cur[ks % (2 * n)]).max())
        n *= 2
        if diff <= 64 * _EPS * max(scale, 1.0) or 2 * n > max_samples:
            break
        prev = cur
    table = {int(k): cur[k % n] for k in ks}
    return table, diff + 64 * _EPS * max(scale, 1.0)


def parametrix(symbol: LoopSymbol, order: Optional[int] = None, K: Optional[int] = None) -> Parametrix:
    """Compression of the degree-``order`` Fourier truncation of a^{-1}.

    Exact when a is a unit of the Laurent ring (det a a monomial); then
    ``order`` defaults to the inverse's bandwidth.  Otherwise the inverse is
    sampled and transformed numerically, ``order`` defaulting to 32.
    """
    cert = certify(symbol)
    inv = symbol.exact_inverse() if symbol.exact else None
    if inv is not None:
        order = inv.bandwidth if order is None else order
        if order < 0:
            raise DomainError("parametrix order must be nonnegative")
        b = inv.truncate(order)
        err = 0.0
    else:
        order = 32 if order is None else order
        if order < 0:
            raise DomainError("parametrix order must be nonnegative")
        table, err = inverse_coefficients(symbol.to_numeric(), order)
        b = LoopSymbol(symbol.size, table, exact=False)
    if K is None:
        K = max(4 * max(order, symbol.bandwidth, 1), 64)
    return Parametrix(toeplitz_compress(b, K, err), b, order, inv is not None, err, cert)


@dataclass(frozen=True)
class TraceIndex:
    """Windowed Tr(AB - Id) - Tr(BA - Id).

    ``exact`` holds the GaussianRational value when both operators are
    exact; ``bound`` bounds |value - true index| from parametrix coefficient
    error and floating-point roundoff (0 for exact results).
    """

    value: complex
    exact: Optional[GaussianRational]
    bound: float
    window: int

    @property
    def real(self) -> float:
        return float(self.value.real)

    @property
    def imag(self) -> float:
        return float(self.value.imag)

    def rounded(self) -> int:
        return int(round(self.real))


def max_window(A: HalfLineOperator, B: HalfLineOperator) -> int:
    return min(A.K, B.K) - 2 * (A.bandwidth + B.bandwidth)


def trace_commutator_index(A: HalfLineOperator, B: HalfLineOperator, W: Optional[int] = None) -> TraceIndex:
    """Tr(AB - Id) - Tr(BA - Id) over modes 0..W (the identities cancel on equal windows)."""
    if A.size != B.size:
        raise DomainError(f"operator sizes differ: {A.size} vs {B.size}")
    if A.K != B.K:
        raise WindowError(f"operators truncated at different K ({A.K} vs {B.K})")
    limit = max_window(A, B)
    W = limit if W is None else W
    if W > limit:
        raise WindowError(
            f"window W = {W} too large: need W <= K - 2*(bandwidths) = {limit} "
            f"(K = {A.K}, bandwidths {A.bandwidth}, {B.bandwidth})"
        )
    need = min(A.bandwidth, B.bandwidth)
    if W < need:
        raise WindowError(f"window W = {W} cannot contain the index defect (needs W >= {need}); raise K")
    band = max(A.bandwidth, B.bandwidth)
    if A.exact and B.exact:
        value = _exact_windowed_trace(A, B, W)
        return TraceIndex(complex(value), value, 0.0, W)
    raw, mag = _kernels.windowed_commutator_trace(
        np.ascontiguousarray(A.dense()), np.ascontiguousarray(B.dense()), A.size, W, A.K, band
    )
    return TraceIndex(complex(raw), None, _error_bound(A, B, mag), W)


def _error_bound(A: HalfLineOperator, B: HalfLineOperator, roundoff_mass: float) -> float:
    # index error from coefficient error: sum_n |n| * (|a_n| |db| + |b| |da|) * sqrt(s)
    def weighted(op):
        return sum(abs(k) * float(np.linalg.norm(np.asarray(blk, dtype=complex))) for k, blk in _numeric_blocks(op))

    s = math.sqrt(A.size)
    coeff = s * (weighted(A) * B.coeff_error * (2 * A.bandwidth + 1)
                 + weighted(B) * A.coeff_error * (2 * B.bandwidth + 1))
    return float(coeff + 16 * _EPS * roundoff_mass)


def _numeric_blocks(op: HalfLineOperator):
    for k, blk in op.diagonals.items():
        if op.exact:
            yield k, [[complex(x) for x in r] for r in blk]
        else:
            yield k, blk


def _exact_windowed_trace(A: HalfLineOperator, B: HalfLineOperator, W: int) -> GaussianRational:
    s = A.size
    total = ZERO
    for m in range(W + 1):
        for n in range(A.K + 1):
            a_mn, b_nm = A.diagonals.get(m - n), B.diagonals.get(n - m)
            if a_mn is not None and b_nm is not None:
                total = total + _exact_trace_product(a_mn, b_nm, s)
            b_mn, a_nm = B.diagonals.get(m - n), A.diagonals.get(n - m)
            if b_mn is not None and a_nm is not None:
                total = total - _exact_trace_product(b_mn, a_nm, s)
    return total


def _exact_trace_product(x, y, s) -> GaussianRational:
    acc = ZERO
    for i in range(s):
        for l in range(s):
            if x[i][l] and y[l][i]:
                acc = acc + x[i][l] * y[l][i]
    return acc


def symbol_index(symbol: LoopSymbol, order: Optional[int] = None, K: Optional[int] = None,
                 W: Optional[int] = None) -> TraceIndex:
    """Index of T(a) computed from a parametrix, sizing K so the window fits."""
    probe = parametrix(symbol, order, K=None)
    order = probe.order
    bw_b = probe.symbol.bandwidth
    if W is None:
        W = max(8, 2 * max(symbol.bandwidth, bw_b))
    need_K = max(W + 2 * (symbol.bandwidth + bw_b), 4 * max(symbol.bandwidth, bw_b, 1))
    if K is None:
        K = need_K
    elif K < need_K:
        raise WindowError(f"K = {K} too small for window {W} (need {need_K})")
    A = toeplitz_compress(symbol, K)
    B = toeplitz_compress(probe.symbol, K, probe.coeff_error)
    return trace_commutator_index(A, B, W)


def exact_value(ti: TraceIndex) -> Optional[Fraction]:
    """Real Fraction value of an exact, real index; None otherwise."""
    if ti.exact is None or ti.exact.im != 0:
        return None
    return ti.exact.re
