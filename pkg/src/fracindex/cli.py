"""Command-line front end.

    fracindex catalog list|show NAME
    fracindex genus --series a-hat --order 2 [--manifold cp2]
    fracindex index --manifold cp2 --bundle trivial [--twist "lprime=3x;l=x;N=2"] [--formula ...]
    fracindex lab winding|index|homotopy|compose|adjoint|heat ...

Rows are written as JSON (default), CSV or a markdown table.  Exact values
are always serialized as "p/q" strings.  FRACINDEX_OUTPUT_DIR, when set,
is the default directory for --out files (and for output when --out is omitted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import catalog as cat
from .errors import DomainError, EllipticityError, FracIndexError
from .exact_algebra import format_rational, integrate
from .genera import CHERN, CharData, char_data_from_total, direct_sum, genus_class, genus_series, line_bundle, trivial_bundle
from .index_engine import TwistSpec, dirac_index, dolbeault_index, fractionality_report, spinc_index
from .tolerances import DEFAULT_T_GRID, INDEX_TOLERANCE, SUPERTRACE_TOLERANCE

OUTPUT_DIR_ENV = "FRACINDEX_OUTPUT_DIR"
FORMATS = ("json", "csv", "markdown")


@dataclass
class RunConfig:
    command: str
    action: Optional[str] = None
    options: dict = field(default_factory=dict)
    output_format: str = "json"
    out: Optional[str] = None
    tolerance_index: float = INDEX_TOLERANCE
    tolerance_supertrace: float = SUPERTRACE_TOLERANCE
    K: Optional[int] = None
    M: Optional[int] = None
    W: Optional[int] = None
    t_grid: tuple = DEFAULT_T_GRID

    def validate(self) -> None:
        if self.command not in ("genus", "index", "catalog", "lab"):
            raise DomainError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise DomainError(f"unknown output format {self.output_format!r}")
        if not (self.tolerance_index > 0 and self.tolerance_supertrace > 0):
            raise DomainError("tolerances must be strictly positive")
        for name in ("K", "M", "W"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise DomainError(f"--{name} must be nonnegative")
        if any(t <= 0 for t in self.t_grid):
            raise DomainError("heat times must be positive")


# -- input helpers ------------------------------------------------------------------

def _load_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _looks_like_path(text: str) -> bool:
    return text.endswith(".json") or Path(text).is_file()


def parse_bundle(spec: Optional[str], M: cat.ManifoldModel) -> CharData:
    """``trivial``, ``trivial:r``, ``line:<class>``, ``tangent``, comma-joined sums, or a JSON path."""
    if spec is None:
        return trivial_bundle(M.ring)
    if _looks_like_path(spec):
        doc = _load_json(spec)
        if "total" in doc:
            return char_data_from_total(M.ring, int(doc["rank"]), M.ring.element(doc["total"]))
        classes = tuple(M.ring.element(c) for c in doc.get("classes", []))
        return CharData(M.ring, int(doc.get("rank", len(classes))), doc.get("mode", CHERN), classes)
    parts = []
    for piece in spec.split(","):
        kind, _, arg = piece.strip().partition(":")
        kind = kind.lower()
        if kind == "trivial":
            parts.append(trivial_bundle(M.ring, int(arg) if arg else 1))
        elif kind == "line":
            parts.append(line_bundle(M.ring.parse_class(arg.replace("c1", _c1_text(M)))))
        elif kind == "tangent":
            parts.append(M.tangent)
        else:
            raise DomainError(f"unknown bundle spec {piece!r}")
    return parts[0] if len(parts) == 1 else direct_sum(*parts)


def _c1_text(M: cat.ManifoldModel) -> str:
    terms = M.c1.to_terms()
    return "(" + "+".join(f"{format_rational(q)}*{m}" for m, q in terms.items()) + ")" if terms else "0"


def parse_twist(spec: Optional[str], M: cat.ManifoldModel) -> Optional[TwistSpec]:
    """``lprime=<class>;l=<class>;N=<int>`` (``c1`` means c1 of the manifold) or a JSON path."""
    if spec is None:
        return None
    if _looks_like_path(spec):
        doc = _load_json(spec)
        lp = doc.get("l_prime_c1")
        l = doc.get("l_c1")
        return TwistSpec(
            M.ring.element(lp) if lp is not None else None,
            M.ring.element(l) if l is not None else None,
            int(doc.get("N", 1)),
        )
    fields = {}
    for piece in spec.split(";"):
        if not piece.strip():
            continue
        key, _, value = piece.partition("=")
        fields[key.strip().lower()] = value.strip()
    unknown = set(fields) - {"lprime", "l", "n"}
    if unknown:
        raise DomainError(f"unknown twist fields {sorted(unknown)}")

    def cls(text):
        if text is None:
            return None
        if text.lower() == "c1":
            return M.c1
        return M.ring.parse_class(text)

    try:
        n = int(fields.get("n", "1"))
    except ValueError:
        raise DomainError(f"twist N must be an integer, got {fields['n']!r}") from None
    return TwistSpec(cls(fields.get("lprime")), cls(fields.get("l")), n)


def load_symbol(text: str):
    # the lab (and numba) is imported only by lab commands
    from .lab.symbols import parse_symbol, symbol_from_doc

    if _looks_like_path(text):
        return symbol_from_doc(_load_json(text))
    return parse_symbol(text)


# -- command bodies ----------------------------------------------------------------

def _cmd_catalog(cfg: RunConfig) -> list:
    if cfg.action in (None, "list"):
        return cat.catalog_entries()
    if cfg.action == "show":
        name = cfg.options.get("name")
        if not name:
            raise DomainError("catalog show needs a manifold name")
        return [cat.dump_manifold(cat.resolve(name))]
    raise DomainError(f"unknown catalog action {cfg.action!r}")


def _cmd_genus(cfg: RunConfig) -> list:
    opts = cfg.options
    name = opts.get("series", "a-hat")
    order = opts.get("order")
    manifold = opts.get("manifold")
    if manifold:
        M = cat.resolve(manifold)
        series = genus_series(name, M.real_dimension // 2 if order is None else order)
        g = genus_class(series, M.tangent)
        return [{
            "series": series.name,
            "manifold": M.label,
            "class": cat.class_to_doc(g),
            "integral": format_rational(integrate(g)),
        }]
    series = genus_series(name, 2 if order is None else order)
    return [{"series": series.name, "order": series.order,
             "coefficients": [format_rational(c) for c in series.coefficients]}]


def _cmd_index(cfg: RunConfig) -> list:
    opts = cfg.options
    names = opts.get("manifold") or []
    if isinstance(names, str):
        names = [names]
    if not names:
        raise DomainError("index needs --manifold")
    formula = opts.get("formula")
    reports = []
    for name in names:
        M = cat.resolve(name)
        twist = parse_twist(opts.get("twist"), M)
        which = formula or ("spinc" if twist is not None else "dirac")
        if which == "dolbeault":
            reports.append(dolbeault_index(M))
            continue
        E = parse_bundle(opts.get("bundle"), M)
        if which == "dirac":
            reports.append(dirac_index(M, E))
        elif which == "spinc":
            reports.append(spinc_index(M, E, twist))
        else:
            raise DomainError(f"unknown formula {which!r}")
    return fractionality_report(reports)


def _index_row(label: str, ti) -> dict:
    return {"symbol": label, "index": _fmt_index(ti), "imag": ti.imag, "exact": ti.exact is not None,
            "bound": ti.bound, "window": ti.window}


def _fmt_index(ti):
    if ti.exact is not None:
        return str(ti.exact)
    return ti.real


def _lab_index(cfg: RunConfig, symbol, warnings: list):
    from .lab.operators import parametrix, toeplitz_compress, trace_commutator_index

    par = parametrix(symbol, cfg.M)
    bw_a, bw_b = symbol.bandwidth, par.symbol.bandwidth
    W = cfg.W if cfg.W is not None else max(8, 2 * max(bw_a, bw_b))
    need = max(W + 2 * (bw_a + bw_b), 4 * max(bw_a, bw_b, 1))
    K = cfg.K
    if K is None:
        K = need
    elif K < need:
        warnings.append(f"K = {K} violates the window rule for W = {W}, M = {par.order}; using K = {need}")
        K = need
    A = toeplitz_compress(symbol, K)
    B = toeplitz_compress(par.symbol, K, par.coeff_error)
    return trace_commutator_index(A, B, W)


def _cmd_lab(cfg: RunConfig, warnings: list) -> list:
    from .lab import experiments as exps
    from .lab.operators import winding_number
    from .lab.symbols import symbol_from_doc

    opts = cfg.options
    action = cfg.action
    symbols = [load_symbol(s) for s in (opts.get("symbol") or [])]
    tol = cfg.tolerance_index

    def need(n):
        if len(symbols) < n:
            raise DomainError(f"lab {action} needs {n} --symbol argument(s)")

    if action == "winding":
        need(1)
        return [{"symbol": s_txt, "winding": winding_number(s)} for s_txt, s in zip(opts["symbol"], symbols)]
    if action == "index":
        need(1)
        rows = []
        for s_txt, s in zip(opts["symbol"], symbols):
            ti = _lab_index(cfg, s, warnings)
            row = _index_row(s_txt, ti)
            row["winding"] = winding_number(s)
            rows.append(row)
        return rows
    if action == "homotopy":
        if opts.get("path"):
            doc = _load_json(opts["path"])
            start, end = symbol_from_doc(doc["start"]), symbol_from_doc(doc["end"])
            steps = int(doc.get("steps", opts.get("steps", 11)))
        else:
            need(2)
            start, end = symbols[0], symbols[1]
            steps = opts.get("steps", 11)
        res = exps.homotopy_sweep(exps.LinearPath(start, end), steps, cfg.M, tol)
        return [{"t": t, "index": _fmt_index(ti), "imag": ti.imag, "bound": ti.bound,
                 "constant": res.constant} for t, ti in zip(res.parameters, res.indices)]
    if action == "compose":
        need(2)
        res = exps.composition_additivity_check(symbols[0], symbols[1], cfg.M)
        lhs = res.lhs
        if res.exact:
            rhs = str(sum((p.exact for p in res.parts[1:]), res.parts[0].exact))
        else:
            rhs = res.rhs.real
        agrees = res.agrees if res.exact else abs(lhs.value - res.rhs) < tol
        return [{"a1": opts["symbol"][0], "a2": opts["symbol"][1], "lhs": _fmt_index(lhs), "rhs": rhs,
                 "agrees": agrees}]
    if action == "adjoint":
        need(1)
        res = exps.adjoint_index_check(symbols[0], order=cfg.M)
        rows = [
            {"quantity": "ind(A)", "angle": "", "index": _fmt_index(res.index), "imag": res.index.imag},
            {"quantity": "ind(A*)", "angle": "", "index": _fmt_index(res.adjoint_index), "imag": res.adjoint_index.imag},
            {"quantity": "ind(P~)", "angle": "", "index": _fmt_index(res.doubled_index), "imag": res.doubled_index.imag},
        ]
        rows += [{"quantity": "rotation", "angle": phi, "index": _fmt_index(ti), "imag": ti.imag}
                 for phi, ti in res.rotation]
        return rows
    if action == "heat":
        if opts.get("operator"):
            doc = _load_json(opts["operator"])
            D = exps.GradedOperator(_matrix(doc["d_plus"]), _maybe_matrix(doc.get("gram_e")),
                                    _maybe_matrix(doc.get("gram_f")))
            t_grid = tuple(doc.get("t_grid", cfg.t_grid))
        elif opts.get("random"):
            rows_, cols_ = opts["random"]
            rng = np.random.default_rng(opts.get("seed", 0))
            D = exps.GradedOperator(rng.normal(size=(rows_, cols_)))
            t_grid = cfg.t_grid
        else:
            raise DomainError("lab heat needs --operator FILE or --random ROWS COLS")
        res = exps.mckean_singer_check(D, t_grid)
        return [{"t": t, "supertrace": s, "kernel_difference": res.index,
                 "constant": res.spread < cfg.tolerance_supertrace} for t, s in zip(res.t_grid, res.supertraces)]
    raise DomainError(f"unknown lab action {action!r}")


def _matrix(rows):
    return np.array([[complex(x) if not isinstance(x, list) else complex(x[0], x[1]) for x in r] for r in rows])


def _maybe_matrix(rows):
    return None if rows is None else _matrix(rows)


# -- emitters -----------------------------------------------------------------------

def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: Sequence[dict], fmt: str) -> str:
    rows = [_jsonable(r) for r in rows]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    headers = []
    for r in rows:
        for k in r:
            if k not in headers:
                headers.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        for r in rows:
            w.writerow([_cell(r.get(h, "")) for h in headers])
        return buf.getvalue()
    if not rows:
        return ""
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(h, "")).replace("|", "\\|") for h in headers) + " |")
    return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    warnings: list = []
    try:
        cfg.validate()
        if cfg.command == "catalog":
            rows = _cmd_catalog(cfg)
        elif cfg.command == "genus":
            rows = _cmd_genus(cfg)
        elif cfg.command == "index":
            rows = _cmd_index(cfg)
        else:
            rows = _cmd_lab(cfg, warnings)
    except EllipticityError as exc:
        where = f" (t = {exc.parameter:g})" if exc.parameter is not None else ""
        print(f"error: ellipticity certificate failed{where}: {exc}", file=stderr)
        return 3
    except (FracIndexError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    for w in warnings:
        print(f"warning: {w}", file=stderr)
    text = render(rows, cfg.output_format)
    target = _output_path(cfg)
    if target is not None:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    if target is None or cfg.out is None:
        stdout.write(text)
    return 0


def _output_path(cfg: RunConfig) -> Optional[Path]:
    base = os.environ.get(OUTPUT_DIR_ENV)
    ext = {"json": "json", "csv": "csv", "markdown": "md"}[cfg.output_format]
    if cfg.out:
        p = Path(cfg.out)
        return p if p.is_absolute() or not base else Path(base) / p
    if base:
        name = cfg.command + (f"-{cfg.action}" if cfg.action else "")
        return Path(base) / f"{name}.{ext}"
    return None


# -- argument parsing ---------------------------------------------------------------

def _t_grid(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t-grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMATS, default="json")
    common.add_argument("--out", default=None, help="write output here (relative to $%s if set)" % OUTPUT_DIR_ENV)
    common.add_argument("--tolerance-index", type=float, default=INDEX_TOLERANCE)
    common.add_argument("--tolerance-supertrace", type=float, default=SUPERTRACE_TOLERANCE)

    p = argparse.ArgumentParser(prog="fracindex", description="Exact index formulas and a Toeplitz index lab.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list or show built-in manifold models")
    c.add_argument("action", choices=("list", "show"), nargs="?", default="list")
    c.add_argument("name", nargs="?")

    g = sub.add_parser("genus", parents=[common], help="genus series coefficients or a manifold's genus class")
    g.add_argument("--series", default="a-hat")
    g.add_argument("--order", type=int, default=None)
    g.add_argument("--manifold", default=None)

    i = sub.add_parser("index", parents=[common], help="evaluate index formulas exactly")
    i.add_argument("--manifold", action="append", required=True, help="name or JSON path; repeat for a table")
    i.add_argument("--bundle", default=None)
    i.add_argument("--twist", default=None)
    i.add_argument("--formula", choices=("dirac", "spinc", "dolbeault"), default=None)

    lab = sub.add_parser("lab", parents=[common], help="half-line operator experiments")
    lab.add_argument("action", choices=("winding", "index", "homotopy", "compose", "adjoint", "heat"))
    lab.add_argument("--symbol", action="append", default=None, help='e.g. "2+e^{it}" or a JSON path')
    lab.add_argument("--path", default=None, help="JSON homotopy description {start, end, steps}")
    lab.add_argument("--steps", type=int, default=11)
    lab.add_argument("--operator", default=None, help="JSON graded operator {d_plus, gram_e, gram_f, t_grid}")
    lab.add_argument("--random", type=int, nargs=2, metavar=("ROWS", "COLS"), default=None)
    lab.add_argument("--seed", type=int, default=0)
    lab.add_argument("--K", type=int, default=None)
    lab.add_argument("--M", type=int, default=None)
    lab.add_argument("--W", type=int, default=None)
    lab.add_argument("--t-grid", type=_t_grid, default=DEFAULT_T_GRID)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    skip = {"command", "action", "output_format", "out", "tolerance_index", "tolerance_supertrace",
            "K", "M", "W", "t_grid"}
    options = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(
        command=ns.command,
        action=getattr(ns, "action", None),
        options=options,
        output_format=ns.output_format,
        out=ns.out,
        tolerance_index=ns.tolerance_index,
        tolerance_supertrace=ns.tolerance_supertrace,
        K=getattr(ns, "K", None),
        M=getattr(ns, "M", None),
        W=getattr(ns, "W", None),
        t_grid=getattr(ns, "t_grid", DEFAULT_T_GRID),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    raise SystemExit(main())
