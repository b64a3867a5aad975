"""Property experiments on the trace-commutator index, and finite-dimensional McKean–Singer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..errors import DomainError, EllipticityError
from .gaussian import ZERO
from .operators import TraceIndex, certify, parametrix, symbol_index, toeplitz_compress, trace_commutator_index
from .symbols import LoopSymbol

from ..tolerances import DEFAULT_T_GRID, INDEX_TOLERANCE, SUPERTRACE_TOLERANCE


# -- homotopy -------------------------------------------------------------------

@dataclass(frozen=True)
class LinearPath:
    """a_t = (1 - t) start + t end."""

    start: LoopSymbol
    end: LoopSymbol

    def __call__(self, t: float) -> LoopSymbol:
        if t == 0:
            return self.start
        if t == 1:
            return self.end
        return self.start.scale(1.0 - t) + self.end.scale(float(t))


@dataclass(frozen=True)
class HomotopyResult:
    parameters: tuple
    indices: tuple  # TraceIndex per step
    tolerance: float

    @property
    def values(self) -> list:
        return [ti.real for ti in self.indices]

    @property
    def spread(self) -> float:
        v = self.values
        return max(v) - min(v)

    @property
    def constant(self) -> bool:
        return self.spread < self.tolerance

    @property
    def deviations(self) -> list:
        """Steps whose index differs from the first by at least the tolerance."""
        v = self.values
        return [t for t, x in zip(self.parameters, v) if abs(x - v[0]) >= self.tolerance]


def homotopy_sweep(path: Union[Callable, LinearPath, Sequence[LoopSymbol]], steps: int = 11,
                   order: Optional[int] = None, tolerance: float = INDEX_TOLERANCE) -> HomotopyResult:
    """Index at t = 0, 1/(steps-1), ..., 1; EllipticityError names the first t that fails."""
    if steps < 2:
        raise DomainError("a homotopy sweep needs at least two steps")
    if isinstance(path, (list, tuple)):
        path = LinearPath(path[0], path[1])
    ts = [j / (steps - 1) for j in range(steps)]
    out = []
    for t in ts:
        a = path(t)
        try:
            certify(a, parameter=t)
        except EllipticityError as exc:
            raise EllipticityError(f"ellipticity lost at t = {t:g}: {exc}", t) from None
        out.append(symbol_index(a, order))
    return HomotopyResult(tuple(ts), tuple(out), tolerance)


# -- composition ---------------------------------------------------------------

@dataclass(frozen=True)
class AdditivityResult:
    lhs: TraceIndex
    rhs: complex
    parts: tuple

    @property
    def exact(self) -> bool:
        return self.lhs.exact is not None and all(p.exact is not None for p in self.parts)

    @property
    def agrees(self) -> bool:
        if self.exact:
            total = ZERO
            for p in self.parts:
                total = total + p.exact
            return self.lhs.exact == total
        return abs(self.lhs.value - self.rhs) < INDEX_TOLERANCE


def composition_additivity_check(a1: LoopSymbol, a2: LoopSymbol, order: Optional[int] = None) -> AdditivityResult:
    """ind(a2 a1) against ind(a1) + ind(a2)."""
    i1 = symbol_index(a1, order)
    i2 = symbol_index(a2, order)
    lhs = symbol_index(a2 @ a1, order)
    return AdditivityResult(lhs, i1.value + i2.value, (i1, i2))


# -- adjoint / reality -----------------------------------------------------------

def rotation_symbol(symbol: LoopSymbol, angle: float) -> LoopSymbol:
    """[[sin φ Id, cos φ a*], [-cos φ a, sin φ Id]]; φ = 0 gives the antisymmetric doubling."""
    s, c = math.sin(angle), math.cos(angle)
    if abs(c) < 1e-15:
        s, c = math.copysign(1.0, s), 0.0
    if abs(s) < 1e-15:
        s, c = 0.0, math.copysign(1.0, c)
    n = symbol.size
    ident = LoopSymbol.monomial(0, 1, n)
    zero = LoopSymbol(n, {}, exact=True)

    def mult(sym, x):
        if x == 0:
            return zero
        if x in (1.0, -1.0):
            return sym.scale(int(x))
        return sym.scale(float(x))

    return LoopSymbol.blocks([
        [mult(ident, s), mult(symbol.adjoint(), c)],
        [mult(symbol, -c), mult(ident, s)],
    ])


@dataclass(frozen=True)
class AdjointResult:
    index: TraceIndex
    adjoint_index: TraceIndex
    doubled_index: TraceIndex  # index of [[0, P*], [-P, 0]] with parametrix [[0, -Q], [Q*, 0]]
    rotation: tuple  # (angle, TraceIndex) pairs

    @property
    def antisymmetric(self) -> bool:
        return abs(self.index.value + self.adjoint_index.value) < INDEX_TOLERANCE

    @property
    def max_imag(self) -> float:
        vals = [self.index, self.adjoint_index, self.doubled_index] + [r for _, r in self.rotation]
        return max(abs(v.imag) for v in vals)

    @property
    def rotation_zero(self) -> bool:
        return all(abs(r.value) < INDEX_TOLERANCE for _, r in self.rotation)


def doubled_index(symbol: LoopSymbol, order: Optional[int] = None) -> TraceIndex:
    """Index of P~ = [[0, P*], [-P, 0]] using the block parametrix [[0, -Q], [Q*, 0]]."""
    par = parametrix(symbol, order)
    q = par.symbol
    n = symbol.size
    zero = LoopSymbol(n, {}, exact=True)
    p_tilde = LoopSymbol.blocks([[zero, symbol.adjoint()], [-symbol, zero]])
    q_tilde = LoopSymbol.blocks([[zero, -q], [q.adjoint(), zero]])
    bw = max(p_tilde.bandwidth, q_tilde.bandwidth, 1)
    W = max(8, 2 * bw)
    K = max(W + 2 * (p_tilde.bandwidth + q_tilde.bandwidth), 4 * bw)
    A = toeplitz_compress(p_tilde, K)
    B = toeplitz_compress(q_tilde, K, par.coeff_error)
    return trace_commutator_index(A, B, W)


def adjoint_index_check(symbol: LoopSymbol, angles: Optional[Sequence[float]] = None,
                        order: Optional[int] = None) -> AdjointResult:
    """ind(A*) = -ind(A), the doubled operator, and the rotation family over ``angles``."""
    if angles is None:
        angles = [j * math.pi / 8 for j in range(9)]  # 0 .. π
    ind = symbol_index(symbol, order)
    ind_adj = symbol_index(symbol.adjoint(), order)
    doubled = doubled_index(symbol, order)
    rot = tuple((float(phi), symbol_index(rotation_symbol(symbol, phi), order)) for phi in angles)
    return AdjointResult(ind, ind_adj, doubled, rot)


# -- McKean–Singer -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedOperator:
    """D+ : E -> F as an (dim F) x (dim E) matrix, with optional Gram matrices of the inner products."""

    d_plus: np.ndarray
    gram_e: Optional[np.ndarray] = None
    gram_f: Optional[np.ndarray] = None

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.d_plus, dtype=np.complex128))
        object.__setattr__(self, "d_plus", d)
        n, m = d.shape
        for name, dim in (("gram_e", m), ("gram_f", n)):
            g = getattr(self, name)
            if g is None:
                continue
            g = np.asarray(g, dtype=np.complex128)
            if g.shape != (dim, dim):
                raise DomainError(f"{name} must be {dim}x{dim}, got {g.shape}")
            if not np.allclose(g, g.conj().T) or np.linalg.eigvalsh(g).min() <= 0:
                raise DomainError(f"{name} is not a positive definite Hermitian matrix")
            object.__setattr__(self, name, g)

    @property
    def dim_e(self) -> int:
        return self.d_plus.shape[1]

    @property
    def dim_f(self) -> int:
        return self.d_plus.shape[0]

    def orthonormal_form(self) -> np.ndarray:
        """Matrix of D+ in orthonormal bases of E and F (Cholesky of the Gram matrices)."""
        d = self.d_plus
        if self.gram_f is not None:
            d = np.linalg.cholesky(self.gram_f).conj().T @ d
        if self.gram_e is not None:
            d = d @ np.linalg.inv(np.linalg.cholesky(self.gram_e).conj().T)
        return d

    def adjoint(self) -> np.ndarray:
        """D+* with respect to the given inner products."""
        ge = np.eye(self.dim_e) if self.gram_e is None else self.gram_e
        gf = np.eye(self.dim_f) if self.gram_f is None else self.gram_f
        return np.linalg.solve(ge, self.d_plus.conj().T @ gf)


@dataclass(frozen=True)
class McKeanSingerResult:
    t_grid: tuple
    supertraces: tuple
    kernel_dim: int
    cokernel_dim: int

    @property
    def index(self) -> int:
        return self.kernel_dim - self.cokernel_dim

    @property
    def spread(self) -> float:
        return float(np.std(self.supertraces)) if self.supertraces else 0.0

    @property
    def max_deviation(self) -> float:
        return max((abs(s - self.index) for s in self.supertraces), default=0.0)

    @property
    def constant(self) -> bool:
        return self.spread < SUPERTRACE_TOLERANCE and self.max_deviation < SUPERTRACE_TOLERANCE


def mckean_singer_check(D: GradedOperator, t_grid: Sequence[float] = DEFAULT_T_GRID) -> McKeanSingerResult:
    """Str exp(-t D^2) = Tr exp(-t D+*D+) - Tr exp(-t D+D+*) for each t, plus dim ker D+ - dim ker D+*."""
    ts = tuple(float(t) for t in t_grid)
    if any(t <= 0 for t in ts):
        raise DomainError("heat times must be positive")
    d = D.orthonormal_form()
    lam_e = np.clip(np.linalg.eigvalsh(d.conj().T @ d), 0.0, None)
    lam_f = np.clip(np.linalg.eigvalsh(d @ d.conj().T), 0.0, None)
    traces = tuple(float(np.exp(-t * lam_e).sum() - np.exp(-t * lam_f).sum()) for t in ts)
    sv = np.linalg.svd(d, compute_uv=False)
    tol = max(d.shape) * _eps() * (sv.max() if sv.size else 0.0)
    rank = int((sv > tol).sum())
    return McKeanSingerResult(ts, traces, D.dim_e - rank, D.dim_f - rank)


def _eps() -> float:
    return float(np.finfo(float).eps)
