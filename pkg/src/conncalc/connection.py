"""Four-graph squares, connection tables and the connection calculus.

Conventions.  Vertex levels are V0 (top-left), V1 (top-right), V2
(bottom-right), V3 (bottom-left).  The upper graph joins V0-V1, the lower
graph V3-V2, the left graph V0-V3 and the right graph V1-V2.  A cell is a
square with corners p in V0, q in V1, r in V3, s in V2.

A table is stored as one matrix per corner pair (p, s): rows are the
left-then-bottom paths p -> r -> s, labelled (r, left copy, bottom copy),
columns are the top-then-right paths p -> q -> s, labelled (q, top copy,
right copy).  Copies are 0-based internally and 1-based in files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .graphs import BipartiteGraph, StructuralError, compose_graphs, identity_matching, transpose
from .linalg import conj_t, entry_bits
from .scalar import FieldContext

V0, V1, V2, V3 = 0, 1, 2, 3

RowLabel = Tuple[str, int, int]   # (r, left copy, bottom copy)
ColLabel = Tuple[str, int, int]   # (q, top copy, right copy)
Edge = Tuple[str, str, int]       # (from, to, copy), copy 0-based


@dataclass(frozen=True)
class Cell:
    top: Edge
    left: Edge
    bottom: Edge
    right: Edge

    def __post_init__(self):
        p, q, _ = self.top
        p2, r, _ = self.left
        r2, s, _ = self.bottom
        q2, s2, _ = self.right
        if p != p2 or q != q2 or r != r2 or s != s2:
            raise StructuralError(f"cell corners do not match: {self}")

    @property
    def corners(self) -> Tuple[str, str, str, str]:
        return self.top[0], self.top[1], self.left[1], self.bottom[1]


@dataclass(frozen=True, eq=False)
class WeightedSquare:
    upper: BipartiteGraph
    lower: BipartiteGraph
    left: BipartiteGraph
    right: BipartiteGraph
    mu: Mapping[int, Mapping[str, mpfr]]
    base_upper: str
    base_lower: str

    def __post_init__(self):
        if self.upper.even != self.left.even:
            raise StructuralError("upper and left graphs disagree on V0")
        if self.upper.odd != self.right.even:
            raise StructuralError("upper and right graphs disagree on V1")
        if self.lower.even != self.left.odd:
            raise StructuralError("lower and left graphs disagree on V3")
        if self.lower.odd != self.right.odd:
            raise StructuralError("lower and right graphs disagree on V2")
        for lvl, names in enumerate(self.levels):
            missing = [v for v in names if v not in self.mu.get(lvl, {})]
            if missing:
                raise StructuralError(f"mu missing on level V{lvl}: {missing}")
        if self.base_upper not in self.V0 or self.base_lower not in self.V3:
            raise StructuralError("basepoints must lie in V0 and V3")

    @property
    def V0(self):
        return self.upper.even

    @property
    def V1(self):
        return self.upper.odd

    @property
    def V2(self):
        return self.lower.odd

    @property
    def V3(self):
        return self.lower.even

    @property
    def levels(self):
        return (self.V0, self.V1, self.V2, self.V3)

    def same_horizontals(self, other: "WeightedSquare") -> bool:
        return self.upper.same_as(other.upper) and self.lower.same_as(other.lower)

    def same_verticals(self, other: "WeightedSquare") -> bool:
        return self.left.same_as(other.left) and self.right.same_as(other.right)

    @cached_property
    def _adj(self):
        def table(g: BipartiteGraph):
            out: Dict[str, List[Tuple[str, int]]] = {}
            for x, y, k in g.edges():
                out.setdefault(x, []).append((y, k))
            return out
        return table(self.upper), table(self.lower), table(self.left), table(self.right)

    @cached_property
    def block_labels(self) -> Dict[Tuple[str, str], Tuple[List[RowLabel], List[ColLabel]]]:
        up, lo, le, ri = self._adj
        out = {}
        for p in self.V0:
            rows_by_s: Dict[str, List[RowLabel]] = {}
            for r, ml in le.get(p, []):
                for s, mb in lo.get(r, []):
                    lst = rows_by_s.setdefault(s, [])
                    lst.extend((r, i, l) for i in range(ml) for l in range(mb))
            cols_by_s: Dict[str, List[ColLabel]] = {}
            for q, mt in up.get(p, []):
                for s, mr in ri.get(q, []):
                    lst = cols_by_s.setdefault(s, [])
                    lst.extend((q, k, j) for k in range(mt) for j in range(mr))
            for s in self.V2:
                rows, cols = rows_by_s.get(s, []), cols_by_s.get(s, [])
                if rows or cols:
                    out[(p, s)] = (rows, cols)
        return out

    @cached_property
    def row_pos(self) -> Dict[Tuple[str, str], Dict[RowLabel, int]]:
        return {k: {lab: n for n, lab in enumerate(v[0])} for k, v in self.block_labels.items()}

    @cached_property
    def col_pos(self) -> Dict[Tuple[str, str], Dict[ColLabel, int]]:
        return {k: {lab: n for n, lab in enumerate(v[1])} for k, v in self.block_labels.items()}

    def cells(self) -> List[Cell]:
        out = []
        for (p, s), (rows, cols) in self.block_labels.items():
            for r, i, l in rows:
                for q, k, j in cols:
                    out.append(Cell((p, q, k), (p, r, i), (r, s, l), (q, s, j)))
        return out

    def vertical_dimension(self, ctx: FieldContext) -> Tuple[mpfr, mpfr]:
        """(d, residual): the common harmonic eigenvalue of the vertical graphs.

        d is read off the left graph at the upper basepoint; the residual is
        the largest deviation of (M mu)(v)/mu(v) from d over V0 (left graph)
        and V1 (right graph).
        """
        with ctx.workspace():
            def ratios(g: BipartiteGraph, src: int, dst: int):
                vals = []
                for x in g.even:
                    tot = gmpy2.fsum(mpfr(int(k)) * self.mu[dst][y] for y, k in g.neighbors_of_even(x))
                    vals.append((x, tot / self.mu[src][x]))
                return vals
            left = ratios(self.left, V0, V3)
            right = ratios(self.right, V1, V2)
            d = dict(left).get(self.base_upper, left[0][1] if left else mpfr(0))
            res = max([abs(v - d) for _, v in left + right] or [mpfr(0)])
            return d, res

    def horizontal_residual(self, ctx: FieldContext) -> mpfr:
        """Largest eigen-equation defect of mu on the two horizontal graphs."""
        with ctx.workspace():
            worst = mpfr(0)
            norms = []
            for g, a, b in ((self.upper, V0, V1), (self.lower, V3, V2)):
                ma, mb = self.mu[a], self.mu[b]
                num = gmpy2.fsum(mpfr(int(k)) * mb[y] for y, k in g.neighbors_of_even(g.even[0]))
                norm = num / ma[g.even[0]]
                norms.append(norm)
                for x in g.even:
                    t = gmpy2.fsum(mpfr(int(k)) * mb[y] for y, k in g.neighbors_of_even(x))
                    worst = max(worst, abs(t - norm * ma[x]) / ma[x])
                for y in g.odd:
                    t = gmpy2.fsum(mpfr(int(k)) * ma[x] for x, k in g.neighbors_of_odd(y))
                    worst = max(worst, abs(t - norm * mb[y]) / mb[y])
            return max(worst, abs(norms[0] - norms[1]))

    def with_verticals(self, left: BipartiteGraph, right: BipartiteGraph) -> "WeightedSquare":
        return WeightedSquare(self.upper, self.lower, left, right, self.mu, self.base_upper, self.base_lower)


def _zeros(n: int, m: int, ctx: FieldContext) -> np.ndarray:
    z = ctx.zero()
    out = np.empty((n, m), dtype=object)
    out.fill(z)
    return out


def _eye(n: int, ctx: FieldContext) -> np.ndarray:
    out = _zeros(n, n, ctx)
    one = ctx.one()
    for k in range(n):
        out[k, k] = one
    return out


def max_abs(m: np.ndarray) -> mpfr:
    if m.size == 0:
        return mpfr(0)
    return max(abs(x) for x in m.flat)


@dataclass(frozen=True, eq=False)
class Connection:
    square: WeightedSquare
    blocks: Mapping[Tuple[str, str], np.ndarray]
    ctx: FieldContext
    name: str = ""

    @property
    def is_zero(self) -> bool:
        return not self.square.left.mult.any() and not self.square.right.mult.any()

    def block(self, p: str, s: str) -> np.ndarray:
        return self.blocks[(p, s)]

    def entry(self, cell: Cell) -> mpc:
        p, q, r, s = cell.corners
        key = (p, s)
        if key not in self.blocks:
            return self.ctx.zero()
        i = self.square.row_pos[key].get((r, cell.left[2], cell.bottom[2]))
        j = self.square.col_pos[key].get((q, cell.top[2], cell.right[2]))
        if i is None or j is None:
            raise StructuralError(f"cell {cell} is not a cell of this square")
        return self.blocks[key][i, j]

    def items(self) -> Iterable[Tuple[Cell, mpc]]:
        for (p, s), (rows, cols) in self.square.block_labels.items():
            W = self.blocks[(p, s)]
            for a, (r, i, l) in enumerate(rows):
                for b, (q, k, j) in enumerate(cols):
                    yield Cell((p, q, k), (p, r, i), (r, s, l), (q, s, j)), W[a, b]

    @cached_property
    def float_blocks(self) -> Dict[Tuple[str, str], np.ndarray]:
        return {k: np.array(v, dtype=complex).reshape(v.shape) for k, v in self.blocks.items()}

    def dimension(self) -> mpfr:
        return self.square.vertical_dimension(self.ctx)[0]

    def renamed(self, name: str) -> "Connection":
        return Connection(self.square, self.blocks, self.ctx, name)

    def __repr__(self):
        L, R = self.square.left.mult, self.square.right.mult
        return f"Connection({self.name!r}, left edges={int(L.sum())}, right edges={int(R.sum())})"


def connection_from_entries(square: WeightedSquare, entries: Mapping[Cell, mpc], ctx: FieldContext,
                            name: str = "", dense: bool = False) -> Connection:
    """Build a table; with ``dense`` every cell must be listed, otherwise blanks are zero."""
    blocks = {k: _zeros(len(r), len(c), ctx) for k, (r, c) in square.block_labels.items()}
    seen = set()
    for cell, val in entries.items():
        p, q, r, s = cell.corners
        key = (p, s)
        i = square.row_pos.get(key, {}).get((r, cell.left[2], cell.bottom[2]))
        j = square.col_pos.get(key, {}).get((q, cell.top[2], cell.right[2]))
        if i is None or j is None:
            raise StructuralError(f"{name}: entry for a non-existent cell {cell}")
        blocks[key][i, j] = ctx.scalar(val)
        seen.add((key, i, j))
    if dense:
        absent = [c for c in square.cells() if _cell_key(square, c) not in seen]
        if absent:
            raise StructuralError(f"{name}: {len(absent)} cells missing, e.g. {absent[:5]}")
    return Connection(square, blocks, ctx, name)


def _cell_key(square: WeightedSquare, cell: Cell):
    p, q, r, s = cell.corners
    key = (p, s)
    return key, square.row_pos[key][(r, cell.left[2], cell.bottom[2])], square.col_pos[key][(q, cell.top[2], cell.right[2])]


# -- biunitarity --------------------------------------------------------------

@dataclass(frozen=True)
class BiunitarityReport:
    unitarity_residual: mpfr
    renormalization_residual: mpfr
    passed: bool
    worst_block: Tuple[str, str] | None = None

    def as_dict(self) -> dict:
        return {"unitarity_residual": float(self.unitarity_residual),
                "renormalization_residual": float(self.renormalization_residual),
                "pass": self.passed}


def unitarity_residual(blocks: Mapping[Tuple[str, str], np.ndarray], ctx: FieldContext):
    worst, where = mpfr(0), None
    with ctx.workspace():
        for key, W in blocks.items():
            n, m = W.shape
            if n != m:
                return mpfr("inf"), key
            res = max_abs(W.dot(conj_t(W)) - _eye(n, ctx))
            if res > worst:
                worst, where = res, key
    return worst, where


def check_biunitary(conn: Connection) -> BiunitarityReport:
    """Unitarity of every (p, s) block and of every block of the renormalized table.

    The renormalization axiom is equivalent to unitarity of the contragredient
    table, so its residual is measured there.
    """
    u, where = unitarity_residual(conn.blocks, conn.ctx)
    rn, where2 = unitarity_residual(renormalize(conn).blocks, conn.ctx)
    passed = u < conn.ctx.tol and rn < conn.ctx.tol
    return BiunitarityReport(u, rn, passed, where if u >= rn else where2)


# -- sum ------------------------------------------------------------------------

def direct_sum(a: Connection, b: Connection, name: str | None = None) -> Connection:
    """Block sum; vertical edges of ``a`` come first in every multiplicity space."""
    sa, sb = a.square, b.square
    if not sa.same_horizontals(sb):
        raise StructuralError("direct sum needs identical horizontal graphs")
    left = BipartiteGraph(f"{sa.left.name}+{sb.left.name}", sa.V0, sa.V3, sa.left.mult + sb.left.mult)
    right = BipartiteGraph(f"{sa.right.name}+{sb.right.name}", sa.V1, sa.V2, sa.right.mult + sb.right.mult)
    sq = sa.with_verticals(left, right)
    ctx = a.ctx
    blocks = {}
    with ctx.workspace():
        for key, (rows, cols) in sq.block_labels.items():
            p, s = key
            W = _zeros(len(rows), len(cols), ctx)
            for src, offset_l, offset_r in ((a, None, None), (b, sa.left, sa.right)):
                if key not in src.blocks:
                    continue
                Ws = src.blocks[key]
                srows, scols = src.square.block_labels[key]
                ri = [sq.row_pos[key][(r, i + (offset_l.m(p, r) if offset_l is not None else 0), l)]
                      for r, i, l in srows]
                ci = [sq.col_pos[key][(q, k, j + (offset_r.m(q, s) if offset_r is not None else 0))]
                      for q, k, j in scols]
                W[np.ix_(ri, ci)] = Ws
            blocks[key] = W
    return Connection(sq, blocks, ctx, name or f"({a.name}+{b.name})")


def sum_of(parts: Sequence[Connection], name: str | None = None) -> Connection:
    if not parts:
        raise StructuralError("empty sum")
    out = parts[0]
    for c in parts[1:]:
        out = direct_sum(out, c)
    return out.renamed(name) if name else out


def zero_connection(square: WeightedSquare, ctx: FieldContext, name: str = "0") -> Connection:
    left = BipartiteGraph("0", square.V0, square.V3, np.zeros_like(square.left.mult))
    right = BipartiteGraph("0", square.V1, square.V2, np.zeros_like(square.right.mult))
    sq = square.with_verticals(left, right)
    return Connection(sq, {}, ctx, name)


# -- product --------------------------------------------------------------------

def _composite_labels(g1: BipartiteGraph, g2: BipartiteGraph) -> Dict[Tuple[str, str], List[Tuple[str, int, int]]]:
    """Copies of composite edge x->z, enumerated as (y, copy in g1, copy in g2)."""
    out: Dict[Tuple[str, str], List[Tuple[str, int, int]]] = {}
    for x in g1.even:
        for y, m1 in g1.neighbors_of_even(x):
            for z, m2 in g2.neighbors_of_even(y):
                lst = out.setdefault((x, z), [])
                lst.extend((y, i1, i2) for i1 in range(m1) for i2 in range(m2))
    return out


def product(a: Connection, b: Connection, name: str | None = None) -> Connection:
    """Vertical composition: a sits on top of b, composite vertical edges are length-2 paths."""
    sa, sb = a.square, b.square
    if not sa.lower.same_as(sb.upper):
        raise StructuralError(f"product {a.name}.{b.name}: lower graph of the first must equal upper graph of the second")
    ctx = a.ctx
    with ctx.workspace():
        for lvl_a, lvl_b in ((V3, V0), (V2, V1)):
            for v, w in sa.mu[lvl_a].items():
                if abs(w - sb.mu[lvl_b][v]) > ctx.tol * max(1, abs(w)):
                    raise StructuralError(f"product {a.name}.{b.name}: mu disagrees at {v}")
    left = compose_graphs(sa.left, sb.left, f"{sa.left.name}.{sb.left.name}")
    right = compose_graphs(sa.right, sb.right, f"{sa.right.name}.{sb.right.name}")
    mu = {V0: sa.mu[V0], V1: sa.mu[V1], V2: sb.mu[V2], V3: sb.mu[V3]}
    sq = WeightedSquare(sa.upper, sb.lower, left, right, mu, sa.base_upper, sb.base_lower)
    lcomp = _composite_labels(sa.left, sb.left)
    rcomp = _composite_labels(sa.right, sb.right)
    # position of each composite copy inside its multiplicity space
    lidx = {(x, z): {lab: n for n, lab in enumerate(v)} for (x, z), v in lcomp.items()}
    ridx = {(x, z): {lab: n for n, lab in enumerate(v)} for (x, z), v in rcomp.items()}
    blocks = {key: _zeros(len(r), len(c), ctx) for key, (r, c) in sq.block_labels.items()}
    with ctx.workspace():
        for (p, s1), Wa in a.blocks.items():
            arows, acols = sa.block_labels[(p, s1)]
            by_r1: Dict[str, Dict[Tuple[int, int], int]] = {}
            for n, (r1, i1, l) in enumerate(arows):
                by_r1.setdefault(r1, {})[(i1, l)] = n
            for r1, arow_of in by_r1.items():
                m1 = sa.left.m(p, r1)
                nl = sa.lower.m(r1, s1)
                for s2 in sb.V2:
                    if (r1, s2) not in b.blocks:
                        continue
                    Wb = b.blocks[(r1, s2)]
                    brows, bcols = sb.block_labels[(r1, s2)]
                    bcol_of = {(l, j2): n for n, (q, l, j2) in enumerate(bcols) if q == s1}
                    if not bcol_of:
                        continue
                    key = (p, s2)
                    W = blocks[key]
                    rpos, cpos = sq.row_pos[key], sq.col_pos[key]
                    m2r = sb.right.m(s1, s2)
                    for i1 in range(m1):
                        for j2 in range(m2r):
                            # (brows x acols) block summed over the middle edge copy l
                            M = None
                            for l in range(nl):
                                ia, ib = arow_of[(i1, l)], bcol_of[(l, j2)]
                                term = np.outer(Wb[:, ib], Wa[ia, :])
                                M = term if M is None else M + term
                            rows = [rpos[(r2, lidx[(p, r2)][(r1, i1, i2)], l2)] for r2, i2, l2 in brows]
                            cols = [cpos[(q, k, ridx[(q, s2)][(s1, j1, j2)])] for q, k, j1 in acols]
                            W[np.ix_(rows, cols)] = M
    return Connection(sq, blocks, ctx, name or f"{a.name}{b.name}")


# -- renormalization ------------------------------------------------------------

def renormalize(conn: Connection, name: str | None = None) -> Connection:
    """The contragredient: reflect the square and conjugate with the weight factor.

    new(p'=r, q'=s, r'=p, s'=q) = sqrt(mu(p) mu(s) / (mu(r) mu(q))) * conj(old(p, q, r, s)),
    with the vertical edges transposed and the horizontal edges exchanged.
    """
    sq = conn.square
    ctx = conn.ctx
    new = WeightedSquare(sq.lower, sq.upper, transpose(sq.left), transpose(sq.right),
                         {V0: sq.mu[V3], V1: sq.mu[V2], V2: sq.mu[V1], V3: sq.mu[V0]},
                         sq.base_lower, sq.base_upper)
    blocks = {}
    with ctx.workspace():
        roots = {}

        def weight(lvl, v):
            key = (lvl, v)
            if key not in roots:
                roots[key] = gmpy2.sqrt(sq.mu[lvl][v])
            return roots[key]

        for key, (rows, cols) in new.block_labels.items():
            rp, qs = key  # new p' = old r, new s' = old q
            W = _zeros(len(rows), len(cols), ctx)
            for a_, (p, i, k) in enumerate(rows):       # new row: (old p, left copy, old top copy)
                for b_, (s, l, j) in enumerate(cols):   # new col: (old s, old bottom copy, right copy)
                    old = conn.blocks.get((p, s))
                    if old is None:
                        continue
                    ri = sq.row_pos[(p, s)].get((rp, i, l))
                    ci = sq.col_pos[(p, s)].get((qs, k, j))
                    if ri is None or ci is None:
                        continue
                    f = (weight(V0, p) * weight(V2, s)) / (weight(V3, rp) * weight(V1, qs))
                    W[a_, b_] = f * old[ri, ci].conjugate()
            blocks[key] = W
    return Connection(new, blocks, ctx, name or f"~{conn.name}")


# -- trivial and automorphism connections ------------------------------------------

def _square_for_graph(graph: BipartiteGraph, mu_even: Mapping[str, mpfr], mu_odd: Mapping[str, mpfr],
                      left: BipartiteGraph, right: BipartiteGraph, base: str) -> WeightedSquare:
    mu = {V0: dict(mu_even), V1: dict(mu_odd), V2: dict(mu_odd), V3: dict(mu_even)}
    return WeightedSquare(graph, graph, left, right, mu, base, base)


def trivial_connection(graph: BipartiteGraph, mu_even: Mapping[str, mpfr], mu_odd: Mapping[str, mpfr],
                       ctx: FieldContext, name: str = "1") -> Connection:
    return automorphism_connection(graph, {v: v for v in graph.even + graph.odd}, mu_even, mu_odd, ctx, name)


def automorphism_connection(graph: BipartiteGraph, vertex_map: Mapping[str, str], mu_even: Mapping[str, mpfr],
                            mu_odd: Mapping[str, mpfr], ctx: FieldContext, name: str = "sigma") -> Connection:
    """Cell value delta(sigma(p), r) delta(sigma(q), s), on the matched bottom edge copy."""
    ev, od = graph.even, graph.odd
    sig = dict(vertex_map)
    if sorted(sig.get(v, "") for v in ev) != sorted(ev) or sorted(sig.get(v, "") for v in od) != sorted(od):
        raise StructuralError(f"{name}: map is not a bijection on each side")
    for x, y, k in graph.edges():
        if graph.m(sig[x], sig[y]) != k:
            raise StructuralError(f"{name}: map is not a graph automorphism at edge {x}-{y}")
    with ctx.workspace():
        for v in ev:
            if abs(mu_even[v] - mu_even[sig[v]]) > ctx.tol * max(1, abs(mu_even[v])):
                raise StructuralError(f"{name}: map does not preserve mu at {v}")
        for v in od:
            if abs(mu_odd[v] - mu_odd[sig[v]]) > ctx.tol * max(1, abs(mu_odd[v])):
                raise StructuralError(f"{name}: map does not preserve mu at {v}")
    left = BipartiteGraph.from_edges(f"{name}_left", ev, ev, [(v, sig[v], 1) for v in ev])
    right = BipartiteGraph.from_edges(f"{name}_right", od, od, [(v, sig[v], 1) for v in od])
    sq = _square_for_graph(graph, mu_even, mu_odd, left, right, graph.basepoint or ev[0])
    entries = {}
    one = ctx.one()
    for p, q, k in graph.edges():
        for c in range(k):
            entries[Cell((p, q, c), (p, sig[p], 0), (sig[p], sig[q], c), (q, sig[q], 0))] = one
    return connection_from_entries(sq, entries, ctx, name)


# -- gauges -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Gauge:
    """Block unitaries on the vertical multiplicity spaces; absent blocks are identities."""
    left: Mapping[Tuple[str, str], np.ndarray] = field(default_factory=dict)
    right: Mapping[Tuple[str, str], np.ndarray] = field(default_factory=dict)

    def inverse(self) -> "Gauge":
        return Gauge({k: conj_t(v) for k, v in self.left.items()}, {k: conj_t(v) for k, v in self.right.items()})

    def compose(self, other: "Gauge") -> "Gauge":
        """Apply ``self`` first, then ``other``."""
        out_l, out_r = {}, {}
        bits = entry_bits(*self.left.values(), *self.right.values(), *other.left.values(), *other.right.values())
        with gmpy2.context(precision=bits):
            for src, dst, side in ((self.left, other.left, out_l), (self.right, other.right, out_r)):
                for k in set(src) | set(dst):
                    a, b = src.get(k), dst.get(k)
                    side[k] = a.dot(b) if a is not None and b is not None else (a if a is not None else b)
        return Gauge(out_l, out_r)

    def unitarity_residual(self, ctx: FieldContext) -> mpfr:
        with ctx.workspace():
            worst = mpfr(0)
            for u in list(self.left.values()) + list(self.right.values()):
                if u.shape[0] != u.shape[1]:
                    return mpfr("inf")
                worst = max(worst, max_abs(u.dot(conj_t(u)) - _eye(u.shape[0], ctx)))
            return worst

    def nontrivial_blocks(self, ctx: FieldContext) -> int:
        n = 0
        with ctx.workspace():
            for u in list(self.left.values()) + list(self.right.values()):
                if u.shape[0] > 1 or abs(u[0, 0] - 1) > ctx.tol:
                    n += 1
        return n


class GaugeError(ValueError):
    pass


def apply_gauge(conn: Connection, gauge: Gauge, check: bool = True, name: str | None = None) -> Connection:
    """u_S^* . W . u_T blockwise (left blocks act on rows, right blocks on columns)."""
    ctx = conn.ctx
    sq = conn.square
    if check:
        for (p, r), u in gauge.left.items():
            if u.shape != (sq.left.m(p, r),) * 2:
                raise GaugeError(f"left gauge block ({p},{r}) has shape {u.shape}, expected multiplicity {sq.left.m(p, r)}")
        for (q, s), u in gauge.right.items():
            if u.shape != (sq.right.m(q, s),) * 2:
                raise GaugeError(f"right gauge block ({q},{s}) has shape {u.shape}, expected multiplicity {sq.right.m(q, s)}")
        if gauge.unitarity_residual(ctx) > ctx.tol:
            raise GaugeError("gauge blocks are not unitary within tol")
    blocks = {}
    with ctx.workspace():
        for key, W in conn.blocks.items():
            p, s = key
            rows, cols = sq.block_labels[key]
            W = W.copy()
            groups: Dict[Tuple[str, int], List[int]] = {}
            for n, (r, i, l) in enumerate(rows):
                groups.setdefault((r, l), []).append(n)
            for (r, l), idx in groups.items():
                u = gauge.left.get((p, r))
                if u is not None:
                    W[idx, :] = conj_t(u).dot(W[idx, :])
            groups = {}
            for n, (q, k, j) in enumerate(cols):
                groups.setdefault((q, k), []).append(n)
            for (q, k), idx in groups.items():
                u = gauge.right.get((q, s))
                if u is not None:
                    W[:, idx] = W[:, idx].dot(u)
            blocks[key] = W
    return Connection(sq, blocks, ctx, name or conn.name)


def identity_gauge(square: WeightedSquare, ctx: FieldContext) -> Gauge:
    return Gauge({(x, y): _eye(k, ctx) for x, y, k in square.left.edges()},
                 {(x, y): _eye(k, ctx) for x, y, k in square.right.edges()})


def random_gauge(square: WeightedSquare, ctx: FieldContext, rng: np.random.Generator) -> Gauge:
    """Haar-ish random unitary blocks (QR of a complex Gaussian), rounded into the context."""
    from .linalg import to_mp_unitary
    def block(k):
        z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        return to_mp_unitary(q, ctx)
    return Gauge({(x, y): block(k) for x, y, k in square.left.edges()},
                 {(x, y): block(k) for x, y, k in square.right.edges()})


def max_entry_difference(a: Connection, b: Connection) -> mpfr:
    """Largest |a - b| over all cells (the two tables must share a square)."""
    if not (a.square.same_horizontals(b.square) and a.square.same_verticals(b.square)):
        return mpfr("inf")
    with a.ctx.workspace():
        worst = mpfr(0)
        for key, W in a.blocks.items():
            worst = max(worst, max_abs(W - b.blocks[key]))
        return worst


def relabel_vertical_identity(square: WeightedSquare) -> bool:
    """True when both vertical graphs are identity matchings (same names, multiplicity one)."""
    L, R = square.left, square.right
    return (L.even == L.odd and R.even == R.odd
            and np.array_equal(L.mult, np.eye(len(L.even), dtype=np.int64))
            and np.array_equal(R.mult, np.eye(len(R.even), dtype=np.int64)))


__all__ = [
    "V0", "V1", "V2", "V3", "Cell", "WeightedSquare", "Connection", "BiunitarityReport", "Gauge", "GaugeError",
    "connection_from_entries", "check_biunitary", "direct_sum", "sum_of", "zero_connection", "product",
    "renormalize", "trivial_connection", "automorphism_connection", "apply_gauge", "identity_gauge",
    "random_gauge", "max_entry_difference", "identity_matching",
]
