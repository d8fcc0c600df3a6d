"""JSON files for graphs, automorphisms, connections and gauges.

Graph:        {name, even, odd, edges: [[even, odd, mult]], basepoint}
Automorphism: {graph: ref, map: {vertex: vertex}}
Connection:   {case, name, dense, square: {upper, lower, left, right, mu, base_upper, base_lower},
               entries: [{top, left, bottom, right, value}]}
Gauge:        {case, left: [{p, r, matrix}], right: [{q, s, matrix}]}

A graph reference is a file name relative to the referring file, an inline
graph object, or {"transpose": ref}.  Edge references are [from, to] or
[from, to, copy] with 1-based copies; a missing copy means copy 1.
Scalars are expressions in the language of ``scalar``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple

import numpy as np

from .connection import V0, V1, V2, V3, Cell, Connection, Gauge, WeightedSquare, connection_from_entries
from .graphs import BipartiteGraph, StructuralError, transpose
from .scalar import Case, FieldContext, format_scalar, parse_scalar

LEVELS = ("V0", "V1", "V2", "V3")


class InputError(ValueError):
    """A file could not be read or does not follow the expected layout."""


def data_dir(case: Case | str) -> Path:
    return Path(str(resources.files("conncalc") / "data" / Case(case).value))


def bundled(case: Case | str, name: str) -> Path:
    p = data_dir(case) / name
    if not p.suffix:
        p = p.with_suffix(".json")
    return p


def _read(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as e:
        raise InputError(f"{path}: no such file") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from e


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


# -- graphs -------------------------------------------------------------------

def graph_from_dict(d: Mapping[str, Any]) -> BipartiteGraph:
    try:
        return BipartiteGraph.from_edges(d.get("name", ""), list(d["even"]), list(d["odd"]),
                                         [tuple(e) for e in d["edges"]], d.get("basepoint"))
    except KeyError as e:
        raise InputError(f"graph is missing field {e}") from e


def graph_to_dict(g: BipartiteGraph) -> Dict[str, Any]:
    return {"name": g.name, "even": list(g.even), "odd": list(g.odd),
            "edges": [[x, y, k] for x, y, k in g.edges()], "basepoint": g.basepoint}


def load_graph(path: Path | str) -> BipartiteGraph:
    return graph_from_dict(_read(Path(path)))


def save_graph(g: BipartiteGraph, path: Path | str) -> None:
    Path(path).write_text(dumps(graph_to_dict(g)))


def resolve_graph(ref: Any, base: Path) -> BipartiteGraph:
    if isinstance(ref, str):
        return load_graph(base / ref)
    if isinstance(ref, Mapping) and "transpose" in ref:
        return transpose(resolve_graph(ref["transpose"], base))
    if isinstance(ref, Mapping):
        return graph_from_dict(ref)
    raise InputError(f"bad graph reference {ref!r}")


def load_automorphism(path: Path | str) -> Tuple[BipartiteGraph, Dict[str, str]]:
    path = Path(path)
    d = _read(path)
    return resolve_graph(d["graph"], path.parent), dict(d["map"])


# -- connections -----------------------------------------------------------------

def _square_from_dict(d: Mapping[str, Any], base: Path, ctx: FieldContext) -> WeightedSquare:
    try:
        graphs = {k: resolve_graph(d[k], base) for k in ("upper", "lower", "left", "right")}
        mu = {lvl: {v: parse_scalar(e, ctx).real for v, e in d["mu"][LEVELS[lvl]].items()}
              for lvl in (V0, V1, V2, V3)}
        return WeightedSquare(graphs["upper"], graphs["lower"], graphs["left"], graphs["right"], mu,
                              d["base_upper"], d["base_lower"])
    except KeyError as e:
        raise InputError(f"square is missing field {e}") from e


def _edge(ref) -> Tuple[str, str, int]:
    if not isinstance(ref, (list, tuple)) or len(ref) not in (2, 3):
        raise InputError(f"bad edge reference {ref!r}")
    copy = int(ref[2]) if len(ref) == 3 else 1
    if copy < 1:
        raise InputError(f"edge copy must be >= 1 in {ref!r}")
    return str(ref[0]), str(ref[1]), copy - 1


def _cell(e: Mapping[str, Any]) -> Cell:
    try:
        return Cell(_edge(e["top"]), _edge(e["left"]), _edge(e["bottom"]), _edge(e["right"]))
    except KeyError as err:
        raise InputError(f"entry is missing field {err}") from err


def _check_case(d: Mapping[str, Any], ctx: FieldContext, path: Path) -> None:
    if "case" in d and Case(d["case"]) is not ctx.case:
        raise InputError(f"{path}: file is for case {d['case']}, context is {ctx.case.value}")


def read_entries(path: Path | str, ctx: FieldContext) -> Tuple[WeightedSquare, Dict[Cell, Any], Dict[str, Any]]:
    path = Path(path)
    d = _read(path)
    _check_case(d, ctx, path)
    sq = _square_from_dict(d["square"], path.parent, ctx)
    entries = {}
    for e in d.get("entries", []):
        cell = _cell(e)
        if cell in entries:
            raise InputError(f"{path}: duplicate entry for {cell}")
        entries[cell] = parse_scalar(e["value"], ctx)
    return sq, entries, d


def load_connection(path: Path | str, ctx: FieldContext) -> Connection:
    sq, entries, d = read_entries(path, ctx)
    if d.get("partial"):
        raise InputError(f"{path}: partial fixture, not a full connection; use load_fixture")
    return connection_from_entries(sq, entries, ctx, d.get("name", Path(path).stem), dense=bool(d.get("dense", False)))


def load_fixture(path: Path | str, ctx: FieldContext) -> Tuple[WeightedSquare, Dict[Cell, Any]]:
    """Partial tables (only some cells known); blanks mean unknown, not zero."""
    sq, entries, _ = read_entries(path, ctx)
    return sq, entries


def _edge_out(e) -> List[Any]:
    return [e[0], e[1], e[2] + 1]


def square_to_dict(sq: WeightedSquare, ctx: FieldContext) -> Dict[str, Any]:
    return {"upper": graph_to_dict(sq.upper), "lower": graph_to_dict(sq.lower),
            "left": graph_to_dict(sq.left), "right": graph_to_dict(sq.right),
            "mu": {LEVELS[lvl]: {v: format_scalar(w, ctx) for v, w in sq.mu[lvl].items()} for lvl in (V0, V1, V2, V3)},
            "base_upper": sq.base_upper, "base_lower": sq.base_lower}


def connection_to_dict(conn: Connection, dense: bool = True) -> Dict[str, Any]:
    ctx = conn.ctx
    entries = []
    for cell, v in conn.items():
        if not dense and v == 0:
            continue
        entries.append({"top": _edge_out(cell.top), "left": _edge_out(cell.left),
                        "bottom": _edge_out(cell.bottom), "right": _edge_out(cell.right),
                        "value": format_scalar(v, ctx)})
    return {"case": ctx.case.value, "name": conn.name, "dense": dense,
            "square": square_to_dict(conn.square, ctx), "entries": entries}


def save_connection(conn: Connection, path: Path | str, dense: bool = True) -> None:
    Path(path).write_text(dumps(connection_to_dict(conn, dense)))


# -- gauges ---------------------------------------------------------------------------

def gauge_to_dict(g: Gauge, ctx: FieldContext) -> Dict[str, Any]:
    def mat(u):
        return [[format_scalar(x, ctx) for x in row] for row in u]
    return {"case": ctx.case.value,
            "left": [{"p": p, "r": r, "matrix": mat(u)} for (p, r), u in sorted(g.left.items())],
            "right": [{"q": q, "s": s, "matrix": mat(u)} for (q, s), u in sorted(g.right.items())]}


def gauge_from_dict(d: Mapping[str, Any], ctx: FieldContext) -> Gauge:
    def mat(rows):
        vals = [[parse_scalar(x, ctx) for x in row] for row in rows]
        out = np.empty((len(vals), len(vals[0]) if vals else 0), dtype=object)
        for i, row in enumerate(vals):
            if len(row) != out.shape[1]:
                raise InputError("ragged gauge matrix")
            out[i, :] = row
        return out
    try:
        left = {(b["p"], b["r"]): mat(b["matrix"]) for b in d.get("left", [])}
        right = {(b["q"], b["s"]): mat(b["matrix"]) for b in d.get("right", [])}
    except KeyError as e:
        raise InputError(f"gauge block is missing field {e}") from e
    return Gauge(left, right)


def load_gauge(path: Path | str, ctx: FieldContext) -> Gauge:
    path = Path(path)
    d = _read(path)
    _check_case(d, ctx, path)
    return gauge_from_dict(d, ctx)


def save_gauge(g: Gauge, path: Path | str, ctx: FieldContext) -> None:
    Path(path).write_text(dumps(gauge_to_dict(g, ctx)))
