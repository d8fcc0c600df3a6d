"""Command line front end.

Exit codes: 0 pass, 1 verified false, 2 input or precision error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .connection import GaugeError, check_biunitary, direct_sum, product, renormalize
from .fusion import dimension, fusion_graph, verify_case
from .gauge import decompose, find_equivalence, is_indecomposable
from .graphs import NumericError, StructuralError, lemma1_positivity, pf_data, string_dim
from .io import InputError, graph_to_dict, load_connection, load_graph, save_connection, save_gauge, dumps
from .scalar import Case, ConfigError, FieldContext, ScalarDomainError, ScalarParseError, fast_context, make_context

FAST_MAX_PRECISION = 16


@dataclass
class RunConfig:
    case: Optional[Case] = None
    precision: int = 60
    tol: Optional[float] = None
    format: str = "json"
    seed: int = 0
    inputs: List[str] = field(default_factory=list)

    def context(self, case: Case | str | None = None) -> FieldContext:
        case = Case(case or self.case or Case.SQRT13)
        if self.precision <= FAST_MAX_PRECISION:
            return fast_context(case, self.tol) if self.tol else fast_context(case)
        return make_context(case, self.precision, self.tol)


class Outcome(Exception):
    def __init__(self, code: int, report: Dict[str, Any]):
        super().__init__(report.get("error", ""))
        self.code = code
        self.report = report


def _case_of(path: str, cfg: RunConfig) -> Case:
    try:
        d = json.loads(Path(path).read_text())
    except FileNotFoundError as e:
        raise InputError(f"{path}: no such file") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from e
    if isinstance(d, dict) and "case" in d:
        if cfg.case and Case(d["case"]) is not cfg.case:
            raise InputError(f"{path}: file is for {d['case']}, --case says {cfg.case.value}")
        return Case(d["case"])
    return cfg.case or Case.SQRT13


def _load(path: str, cfg: RunConfig, ctx: Optional[FieldContext] = None):
    ctx = ctx or cfg.context(_case_of(path, cfg))
    return load_connection(path, ctx), ctx


def _res(x) -> str:
    return f"{float(x):.3e}"


# -- subcommands ------------------------------------------------------------------------

def cmd_check(args, cfg: RunConfig):
    conn, ctx = _load(args.path, cfg)
    rep = check_biunitary(conn)
    out = {"file": args.path, "case": ctx.case.value, "pass": rep.passed,
           "unitarity_residual": _res(rep.unitarity_residual),
           "renormalization_residual": _res(rep.renormalization_residual),
           "worst_block": list(rep.worst_block) if rep.worst_block else None}
    return (0 if rep.passed else 1), out


def cmd_compose(args, cfg: RunConfig):
    a, ctx = _load(args.a, cfg)
    b, _ = _load(args.b, cfg, ctx)
    c = direct_sum(a, b) if args.sum else product(a, b)
    save_connection(c, args.output)
    return 0, {"output": args.output, "name": c.name, "dimension": f"{float(dimension(c)):.12f}"}


def cmd_dual(args, cfg: RunConfig):
    a, _ = _load(args.path, cfg)
    c = renormalize(a)
    save_connection(c, args.output)
    return 0, {"output": args.output, "name": c.name}


def cmd_equiv(args, cfg: RunConfig):
    a, ctx = _load(args.a, cfg)
    b, _ = _load(args.b, cfg, ctx)
    res = find_equivalence(a, b, cfg.seed)
    out: Dict[str, Any] = {"equivalent": res.gauge is not None}
    if res.gauge is None:
        out["diagnostic"] = res.diagnostic
        return 1, out
    out["residual"] = _res(res.residual)
    out["nontrivial_blocks"] = res.gauge.nontrivial_blocks(ctx)
    if args.output:
        save_gauge(res.gauge, args.output, ctx)
        out["output"] = args.output
    return 0, out


def cmd_decompose(args, cfg: RunConfig):
    a, ctx = _load(args.path, cfg)
    dec = decompose(a, cfg.seed)
    summands = []
    for k, s in enumerate(dec.summands):
        item = {"multiplicity": s.multiplicity, "dimension": f"{float(dimension(s.connection)):.12f}",
                "left_edges": int(s.connection.square.left.mult.sum()),
                "right_edges": int(s.connection.square.right.mult.sum())}
        if args.output:
            Path(args.output).mkdir(parents=True, exist_ok=True)
            p = Path(args.output) / f"summand{k}.json"
            save_connection(s.connection, p)
            item["file"] = str(p)
        summands.append(item)
    return 0, {"end_dimension": dec.end_dimension, "classes": len(summands), "summands": summands}


def cmd_indecomposable(args, cfg: RunConfig):
    a, _ = _load(args.path, cfg)
    rep = is_indecomposable(a)
    return (0 if rep.indecomposable else 1), {
        "indecomposable": rep.indecomposable, "end_dimension": rep.end_dimension,
        "single_edge_vertices": [f"{lvl}:{v}" for lvl, v in rep.single_edge_vertices]}


def cmd_pf(args, cfg: RunConfig):
    g = load_graph(args.graph)
    pf = pf_data(g, args.basepoint or g.basepoint or g.even[0], cfg.context())
    return 0, {"graph": g.name, "norm": f"{float(pf.norm):.15f}",
               "weights": {v: f"{float(w):.15f}" for v, w in pf.weights.items()}}


def cmd_lemma1(args, cfg: RunConfig):
    g = load_graph(args.graph)
    rep = lemma1_positivity(g, args.basepoint, tol=cfg.context().tol)
    return (0 if rep.passed else 1), {"graph": g.name, "basepoint": rep.basepoint, "pass": rep.passed,
                                      "minima": rep.minima, "basepoint_row_minima": rep.anchored_minima}


def cmd_string_dim(args, cfg: RunConfig):
    g = load_graph(args.graph)
    prof = string_dim(g, args.basepoint or g.basepoint or g.even[0], args.length)
    return 0, {"length": prof.length, "blocks": prof.blocks, "total_dim": prof.total_dim,
               "structure": prof.structure()}


def cmd_fusion_graph(args, cfg: RunConfig):
    a, _ = _load(args.path, cfg)
    fg = fusion_graph(a, max_depth=args.max_depth, seed=cfg.seed)
    out: Dict[str, Any] = {"finite": fg.finite, "depth": fg.depth, "even": fg.even, "odd": fg.odd,
                           "frobenius_symmetric": fg.frobenius_ok, "dimension_defect": _res(fg.dimension_defect)}
    if fg.graph is None:
        out["note"] = fg.note
        return 1, out
    out["graph"] = graph_to_dict(fg.graph)
    if args.output:
        Path(args.output).write_text(dumps(graph_to_dict(fg.graph)))
        out["output"] = args.output
    return 0, out


def cmd_verify(args, cfg: RunConfig):
    rep = verify_case(cfg.context(args.case), cfg.seed, args.max_depth)
    if not rep["passed"]:
        rep["failing"] = [s["title"] for s in rep["sections"] if not s["passed"]]
    return (0 if rep["passed"] else 1), rep


# -- plumbing ----------------------------------------------------------------------------------

def _common_flags(suppress: bool) -> argparse.ArgumentParser:
    # the subcommand copy uses SUPPRESS so flags given before the subcommand are not reset
    def d(v):
        return argparse.SUPPRESS if suppress else v
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=d(60), help="decimal digits (<= 16 selects double precision)")
    common.add_argument("--tol", type=float, default=d(None))
    common.add_argument("--format", choices=("json", "text"), default=d("json"))
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--case", choices=[c.value for c in Case], default=d(None))
    return common


def build_parser() -> argparse.ArgumentParser:
    top, common = _common_flags(False), _common_flags(True)

    p = argparse.ArgumentParser(prog="conncalc", parents=[top],
                                description="Biunitary connections on bipartite graphs: checks, products, decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="biunitarity of a connection file")
    s.add_argument("path")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("compose", parents=[common], help="direct sum or product of two connections")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--sum", action="store_true")
    g.add_argument("--product", action="store_true")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("dual", parents=[common], help="renormalized (contragredient) connection")
    s.add_argument("path")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("equiv", parents=[common], help="find a vertical gauge between two connections")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("decompose", parents=[common], help="irreducible summands with multiplicities")
    s.add_argument("path")
    s.add_argument("-o", "--output", help="directory for summand files")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("indecomposable", parents=[common])
    s.add_argument("path")
    s.set_defaults(func=cmd_indecomposable)

    for name, func in (("pf", cmd_pf), ("lemma1", cmd_lemma1)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("graph")
        s.add_argument("--basepoint")
        s.set_defaults(func=func)

    s = sub.add_parser("string-dim", parents=[common])
    s.add_argument("graph")
    s.add_argument("--length", type=int, required=True)
    s.add_argument("--basepoint")
    s.set_defaults(func=cmd_string_dim)

    s = sub.add_parser("fusion-graph", parents=[common], help="principal graph generated by a connection")
    s.add_argument("path")
    s.add_argument("--max-depth", type=int, default=12)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fusion_graph)

    s = sub.add_parser("verify", parents=[common], help="full verification for a bundled case")
    s.add_argument("case", choices=[c.value for c in Case])
    s.add_argument("--max-depth", type=int, default=12)
    s.set_defaults(func=cmd_verify)
    return p


def _text(obj: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def emit(report: Dict[str, Any], fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=1, default=str) + "\n")
    else:
        stream.write("\n".join(_text(report)) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    cfg = RunConfig(Case(args.case) if args.case else None, args.precision, args.tol, args.format, args.seed)
    try:
        code, report = args.func(args, cfg)
    except (InputError, ScalarParseError, ScalarDomainError, StructuralError, ConfigError, GaugeError,
            NumericError, KeyError, ValueError, OSError) as e:
        code, report = 2, {"error": type(e).__name__, "message": str(e)}
    emit(report, cfg.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
