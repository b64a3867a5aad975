"""Matrix-valued trigonometric polynomials a(θ) = Σ_k a_k e^{ikθ} on the circle."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..errors import DomainError
from . import _kernels
from .gaussian import ONE, ZERO, GaussianRational, parse_complex_rational

EXACT_SIZE_LIMIT = 6


def _is_zero_block(block, exact) -> bool:
    if exact:
        return not any(x for row in block for x in row)
    return not np.any(block)


@dataclass(frozen=True, eq=False)
class LoopSymbol:
    """Fourier table of an s×s loop; exact blocks are tuples of GaussianRational rows."""

    size: int
    coeffs: Mapping
    exact: bool = False

    def __post_init__(self):
        clean = {}
        for k, block in self.coeffs.items():
            if self.exact:
                block = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in block)
                shape = (len(block), len(block[0]) if block else 0)
            else:
                block = np.asarray(block, dtype=np.complex128).reshape(self.size, self.size)
                block.setflags(write=False)
                shape = block.shape
            if shape != (self.size, self.size):
                raise DomainError(f"coefficient {k} has shape {shape}, expected {(self.size, self.size)}")
            if not _is_zero_block(block, self.exact):
                clean[int(k)] = block
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def monomial(cls, k: int, c=1, size: int = 1) -> "LoopSymbol":
        c = GaussianRational.coerce(c)
        block = tuple(tuple(c if i == j else ZERO for j in range(size)) for i in range(size))
        return cls(size, {k: block}, exact=True)

    @classmethod
    def constant(cls, c, size: int = 1) -> "LoopSymbol":
        if isinstance(c, (complex, float)):
            return cls(size, {0: complex(c) * np.eye(size)}, exact=False)
        return cls.monomial(0, c, size)

    @classmethod
    def numeric(cls, coeffs: Mapping) -> "LoopSymbol":
        blocks = {int(k): np.atleast_2d(np.asarray(v, dtype=np.complex128)) for k, v in coeffs.items()}
        size = next(iter(blocks.values())).shape[0] if blocks else 1
        return cls(size, blocks, exact=False)

    @classmethod
    def diagonal(cls, entries) -> "LoopSymbol":
        """Block-diagonal symbol from scalar (1×1) symbols."""
        entries = list(entries)
        s = len(entries)
        if any(e.size != 1 for e in entries):
            raise DomainError("diagonal() takes scalar symbols")
        exact = all(e.exact for e in entries)
        freqs = sorted({k for e in entries for k in e.coeffs})
        out = {}
        for k in freqs:
            if exact:
                out[k] = tuple(
                    tuple(entries[i].coeffs.get(k, ((ZERO,),))[0][0] if i == j else ZERO for j in range(s))
                    for i in range(s)
                )
            else:
                blk = np.zeros((s, s), dtype=np.complex128)
                for i, e in enumerate(entries):
                    blk[i, i] = complex(e.block(k)[0][0]) if e.exact else e.block(k)[0, 0]
                out[k] = blk
        return cls(s, out, exact=exact)

    @classmethod
    def blocks(cls, rows) -> "LoopSymbol":
        """Assemble a block matrix symbol from a grid of equally sized symbols."""
        rows = [list(r) for r in rows]
        s = rows[0][0].size
        if any(e.size != s for r in rows for e in r) or any(len(r) != len(rows) for r in rows):
            raise DomainError("block symbols must be square grids of equal-size symbols")
        n = len(rows) * s
        exact = all(e.exact for r in rows for e in r)
        freqs = sorted({k for r in rows for e in r for k in e.coeffs})
        out = {}
        for k in freqs:
            if exact:
                grid = [[ZERO] * n for _ in range(n)]
            else:
                grid = np.zeros((n, n), dtype=np.complex128)
            for bi, r in enumerate(rows):
                for bj, e in enumerate(r):
                    blk = e.block(k)
                    for i in range(s):
                        for j in range(s):
                            x = blk[i][j]
                            grid[bi * s + i][bj * s + j] = x if exact else complex(x)
            out[k] = tuple(tuple(row) for row in grid) if exact else grid
        return cls(n, out, exact=exact)

    # -- basic data ------------------------------------------------------------

    @property
    def freqs(self) -> tuple:
        return tuple(self.coeffs)

    @property
    def bandwidth(self) -> int:
        return max((abs(k) for k in self.coeffs), default=0)

    def block(self, k):
        if k in self.coeffs:
            return self.coeffs[k]
        if self.exact:
            return tuple(tuple(ZERO for _ in range(self.size)) for _ in range(self.size))
        return np.zeros((self.size, self.size), dtype=np.complex128)

    def arrays(self):
        """(frequencies int64[n], coefficients complex128[n, s, s]) for the kernels."""
        freqs = np.array(self.freqs or (0,), dtype=np.int64)
        out = np.zeros((len(freqs), self.size, self.size), dtype=np.complex128)
        for a, k in enumerate(self.freqs):
            blk = self.coeffs[k]
            out[a] = [[complex(x) for x in row] for row in blk] if self.exact else blk
        return freqs, out

    def to_numeric(self) -> "LoopSymbol":
        if not self.exact:
            return self
        freqs, arr = self.arrays()
        return LoopSymbol(self.size, {int(k): arr[a] for a, k in enumerate(freqs)}, exact=False)

    def evaluate(self, thetas) -> np.ndarray:
        freqs, arr = self.arrays()
        return _kernels.eval_symbol(freqs, arr, np.ascontiguousarray(thetas, dtype=np.float64))

    # -- algebra ------------------------------------------------------------------

    def _pair(self, other):
        if self.size != other.size:
            raise DomainError(f"symbol sizes differ: {self.size} vs {other.size}")
        if self.exact and other.exact:
            return self, other, True
        return self.to_numeric(), other.to_numeric(), False

    def __add__(self, other):
        if not isinstance(other, LoopSymbol):
            other = LoopSymbol.constant(other, self.size)
        a, b, exact = self._pair(other)
        out = {}
        for k in set(a.coeffs) | set(b.coeffs):
            x, y = a.block(k), b.block(k)
            if exact:
                out[k] = tuple(tuple(p + q for p, q in zip(r1, r2)) for r1, r2 in zip(x, y))
            else:
                out[k] = x + y
        return LoopSymbol(self.size, out, exact)

    __radd__ = __add__

    def scale(self, c) -> "LoopSymbol":
        if self.exact and not isinstance(c, (complex, float)):
            c = GaussianRational.coerce(c)
            return LoopSymbol(self.size, {k: tuple(tuple(c * x for x in r) for r in b) for k, b in self.coeffs.items()}, True)
        num = self.to_numeric()
        return LoopSymbol(self.size, {k: complex(c) * b for k, b in num.coeffs.items()}, False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LoopSymbol) else LoopSymbol.constant(other, self.size).scale(-1))

    def __matmul__(self, other: "LoopSymbol") -> "LoopSymbol":
        """Pointwise matrix product a(θ)b(θ), i.e. Fourier convolution."""
        a, b, exact = self._pair(other)
        out = {}
        for (k, x), (l, y) in itertools.product(a.coeffs.items(), b.coeffs.items()):
            if exact:
                prod = _exact_matmul(x, y)
                out[k + l] = _exact_add(out[k + l], prod) if k + l in out else prod
            else:
                out[k + l] = out.get(k + l, 0) + x @ y
        return LoopSymbol(self.size, out, exact)

    def adjoint(self) -> "LoopSymbol":
        """Pointwise conjugate transpose: (a*)_k = (a_{-k})^H."""
        out = {}
        for k, b in self.coeffs.items():
            if self.exact:
                out[-k] = tuple(tuple(b[j][i].conjugate() for j in range(self.size)) for i in range(self.size))
            else:
                out[-k] = b.conj().T
        return LoopSymbol(self.size, out, self.exact)

    def truncate(self, order: int) -> "LoopSymbol":
        return LoopSymbol(self.size, {k: b for k, b in self.coeffs.items() if abs(k) <= order}, self.exact)

    # -- exact Laurent determinant / inverse -----------------------------------

    def det_laurent(self) -> dict:
        """det a(θ) as an exact Laurent polynomial {frequency: GaussianRational}."""
        if not self.exact:
            raise DomainError("exact determinant needs an exact symbol")
        if self.size > EXACT_SIZE_LIMIT:
            raise DomainError(f"exact mode supports sizes up to {EXACT_SIZE_LIMIT}")
        entries = [[{k: self.coeffs[k][i][j] for k in self.coeffs if self.coeffs[k][i][j]}
                    for j in range(self.size)] for i in range(self.size)]
        return _laurent_det(entries)

    def monomial_determinant(self):
        """(c, k) when det a = c·e^{ikθ} with c ≠ 0, else None."""
        if not self.exact or self.size > EXACT_SIZE_LIMIT:
            return None
        det = self.det_laurent()
        if len(det) == 1:
            (k, c), = det.items()
            return c, k
        return None

    def exact_inverse(self):
        """Pointwise inverse as an exact symbol, when a is a unit of the Laurent ring; else None."""
        mono = self.monomial_determinant()
        if mono is None:
            return None
        c, k = mono
        s = self.size
        entries = [[{f: self.coeffs[f][i][j] for f in self.coeffs if self.coeffs[f][i][j]}
                    for j in range(s)] for i in range(s)]
        scale = c.inverse()
        out: dict = {}
        for i in range(s):
            for j in range(s):
                # inverse[i][j] = cofactor(j, i) / det
                minor = [[entries[r][q] for q in range(s) if q != i] for r in range(s) if r != j]
                cof = _laurent_det(minor) if minor else {0: ONE}
                sign = -1 if (i + j) % 2 else 1
                for f, v in cof.items():
                    blk = out.setdefault(f - k, [[ZERO] * s for _ in range(s)])
                    blk[i][j] = blk[i][j] + v * scale * sign
        return LoopSymbol(s, {f: tuple(tuple(r) for r in b) for f, b in out.items()}, exact=True)

    def describe(self) -> str:
        if self.size == 1 and self.exact:
            terms = []
            for k, b in self.coeffs.items():
                c = b[0][0]
                terms.append(f"({c})" + (f"e^{{{k}it}}" if k else ""))
            return " + ".join(terms) or "0"
        return f"LoopSymbol(size={self.size}, freqs={list(self.freqs)}, exact={self.exact})"

    def __repr__(self):
        return self.describe()


def _exact_matmul(x, y):
    n = len(x)
    return tuple(
        tuple(sum((x[i][l] * y[l][j] for l in range(n)), ZERO) for j in range(n)) for i in range(n)
    )


def _exact_add(x, y):
    return tuple(tuple(p + q for p, q in zip(r1, r2)) for r1, r2 in zip(x, y))


def _laurent_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, ZERO) + x * y
    return {k: v for k, v in out.items() if v}


def _laurent_det(entries) -> dict:
    """Leibniz expansion; fine for the small sizes exact mode allows."""
    n = len(entries)
    total: dict = {}
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = {0: ONE if inversions % 2 == 0 else -ONE}
        for r in range(n):
            term = _laurent_mul(term, entries[r][perm[r]])
            if not term:
                break
        for k, v in term.items():
            total[k] = total.get(k, ZERO) + v
    return {k: v for k, v in total.items() if v}


# -- the one-line symbol grammar ----------------------------------------------

_EXP_RE = re.compile(
    r"e\^\{\s*(?:(?P<pre>[+-]?\d*)\s*\*?\s*i|i\s*\*?\s*(?P<post>[+-]?\d*))\s*\*?\s*(?:t|θ|theta)\s*\}"
)


def _split_top(text: str, sep: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def _split_terms(text: str) -> list:
    """Split on top-level + and - (keeping the sign with the term)."""
    terms, depth, cur = [], 0, ""
    for idx, ch in enumerate(text):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("*", "/")):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_symbol(text: str) -> LoopSymbol:
    """Parse ``"2 + e^{it}"``, ``"(1+2i)e^{-3it}"``, ``"1/2*e^{2it} - i"`` or ``"diag(e^{it}, e^{-it})"``.

    Coefficients are exact complex rationals; the result is an exact symbol.
    """
    s = text.strip()
    if s.lower().startswith("diag(") and s.endswith(")"):
        return LoopSymbol.diagonal(parse_symbol(p) for p in _split_top(s[5:-1], ","))
    coeffs: dict = {}
    for term in _split_terms(s.replace(" ", "")):
        m = _EXP_RE.search(term)
        if m:
            raw = m.group("pre") if m.group("pre") is not None else m.group("post")
            k = int(raw) if raw not in ("", "+", "-") else (-1 if raw == "-" else 1)
            coef_txt = (term[: m.start()] + term[m.end():]).strip().rstrip("*")
            if term[m.end():].strip():
                raise DomainError(f"unexpected text after exponential in {term!r}")
            if coef_txt in ("", "+"):
                c = ONE
            elif coef_txt == "-":
                c = -ONE
            else:
                c = parse_complex_rational(coef_txt)
        else:
            k = 0
            c = parse_complex_rational(term)
        coeffs[k] = coeffs.get(k, ZERO) + c
    return LoopSymbol(1, {k: ((c,),) for k, c in coeffs.items()}, exact=True)


# -- JSON symbol documents ------------------------------------------------------

def _entry(value):
    """(value, exact?) from a JSON entry: rational/complex string, number or [re, im]."""
    if isinstance(value, str):
        return parse_complex_rational(value), True
    if isinstance(value, bool):
        raise DomainError("boolean matrix entry")
    if isinstance(value, int):
        return GaussianRational(value), True
    if isinstance(value, float):
        return complex(value), False
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1])), False
    raise DomainError(f"unsupported matrix entry {value!r}")


def symbol_from_doc(doc) -> LoopSymbol:
    """Build a symbol from ``{"expr": "..."}`` or ``{"size": s, "coefficients": {"k": [[...]]}}``."""
    if isinstance(doc, str):
        return parse_symbol(doc)
    if "expr" in doc:
        return parse_symbol(doc["expr"])
    try:
        table = doc["coefficients"]
    except (KeyError, TypeError):
        raise DomainError("symbol document needs 'expr' or 'coefficients'") from None
    parsed = {}
    exact = True
    for k, value in table.items():
        if isinstance(value, list) and value and all(isinstance(r, list) for r in value):
            rows = value
        else:
            rows = [[value]]
        block = []
        for row in rows:
            out_row = []
            for v in row:
                val, ex = _entry(v)
                exact = exact and ex
                out_row.append(val)
            block.append(out_row)
        parsed[int(k)] = block
    size = int(doc.get("size", len(next(iter(parsed.values()))) if parsed else 1))
    if not exact:
        parsed = {k: [[complex(x) for x in r] for r in b] for k, b in parsed.items()}
    return LoopSymbol(size, parsed, exact=exact)


def symbol_to_doc(symbol: LoopSymbol) -> dict:
    table = {}
    for k, b in symbol.coeffs.items():
        if symbol.exact:
            table[str(k)] = [[str(x) for x in r] for r in b]
        else:
            table[str(k)] = [[[float(x.real), float(x.imag)] for x in r] for r in b]
    return {"size": symbol.size, "coefficients": table}
