"""Intertwiners, gauge equivalence, decomposition into irreducibles.

An intertwiner from b to a is a pair of block maps x_S (on left vertical
edges) and x_T (on right vertical edges) with

    W^a X_T = X_S W^b   on every (p, s) block,

where X_S acts on rows (r, i, l) through x_S(p, r) on the left copy i and X_T
on columns (q, k, j) through x_T(q, s) on the right copy j.  With this
placement a unitary intertwiner u satisfies apply_gauge(a, u) == b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .connection import (Connection, Gauge, WeightedSquare, apply_gauge, conj_t, max_abs, max_entry_difference,
                         sum_of, zero_connection, _zeros)
from .graphs import BipartiteGraph, NumericError
from .linalg import PrecisionError, SparseSystem, hermitian_eig, inverse_sqrt_psd, null_space, range_basis
from .scalar import FieldContext

Key = Tuple[str, str]
CLUSTER_FACTOR = 1e6


@dataclass(frozen=True)
class Layout:
    """Block shapes of the unknowns: ('L', (p, r)) and ('R', (q, s)) keys, in a fixed order."""
    blocks: Tuple[Tuple[str, Key, int, int], ...]

    @property
    def size(self) -> int:
        return sum(m * n for _, _, m, n in self.blocks)

    def offsets(self) -> Dict[Tuple[str, Key], int]:
        out, off = {}, 0
        for side, key, m, n in self.blocks:
            out[(side, key)] = off
            off += m * n
        return out

    def split(self, v: np.ndarray) -> Gauge:
        left, right, off = {}, {}, 0
        for side, key, m, n in self.blocks:
            blk = np.array(v[off:off + m * n], dtype=object).reshape(m, n)
            (left if side == "L" else right)[key] = blk
            off += m * n
        return Gauge(left, right)

    def flatten(self, g: Gauge) -> np.ndarray:
        parts = []
        for side, key, m, n in self.blocks:
            parts.extend((g.left if side == "L" else g.right)[key].reshape(-1))
        out = np.empty(len(parts), dtype=object)
        out[:] = parts
        return out


def _layout(a: Connection, b: Connection) -> Layout:
    la, lb, ra, rb = a.square.left, b.square.left, a.square.right, b.square.right
    blocks = []
    for p in la.even:
        for r in la.odd:
            m, n = la.m(p, r), lb.m(p, r)
            if m and n:
                blocks.append(("L", (p, r), m, n))
    for q in ra.even:
        for s in ra.odd:
            m, n = ra.m(q, s), rb.m(q, s)
            if m and n:
                blocks.append(("R", (q, s), m, n))
    return Layout(tuple(blocks))


@dataclass
class IntertwinerBasis:
    dimension: int
    basis: List[Gauge]
    layout: Layout
    residual: mpfr
    gap: float
    note: str = ""


def _shares_horizontals(a: Connection, b: Connection) -> bool:
    sa, sb = a.square, b.square
    if not sa.same_horizontals(sb):
        return False
    with a.ctx.workspace():
        for lvl in range(4):
            for v, w in sa.mu[lvl].items():
                if abs(w - sb.mu[lvl][v]) > a.ctx.tol * max(1, abs(w)):
                    return False
    return True


def intertwiner_system(a: Connection, b: Connection) -> Tuple[SparseSystem, Layout]:
    sa, sb = a.square, b.square
    lay = _layout(a, b)
    off = lay.offsets()
    rows, cols, vals = [], [], []
    neq = 0
    keys = [k for k in sa.block_labels if k in sb.block_labels]
    with a.ctx.workspace():
        for key in keys:
            p, s = key
            rows_a, cols_a = sa.block_labels[key]
            rows_b, cols_b = sb.block_labels[key]
            Wa, Wb = a.blocks[key], b.blocks[key]
            acols: Dict[Tuple[str, int], List[Tuple[int, int]]] = {}
            for n, (q, k, j) in enumerate(cols_a):
                acols.setdefault((q, k), []).append((n, j))
            brows: Dict[Tuple[str, int], List[Tuple[int, int]]] = {}
            for n, (r, i, l) in enumerate(rows_b):
                brows.setdefault((r, l), []).append((n, i))
            for ia, (r, i, l) in enumerate(rows_a):
                for ib, (q, k, j2) in enumerate(cols_b):
                    touched = False
                    tkey = ("R", (q, s))
                    if tkey in off:
                        mb = sb.right.m(q, s)
                        for na, j in acols.get((q, k), []):
                            w = Wa[ia, na]
                            if w != 0:
                                rows.append(neq); cols.append(off[tkey] + j * mb + j2); vals.append(w)
                                touched = True
                    skey = ("L", (p, r))
                    if skey in off:
                        mb = sb.left.m(p, r)
                        for nb, i2 in brows.get((r, l), []):
                            w = Wb[nb, ib]
                            if w != 0:
                                rows.append(neq); cols.append(off[skey] + i * mb + i2); vals.append(-w)
                                touched = True
                    if touched:
                        neq += 1
    return SparseSystem.from_lists(neq, lay.size, rows, cols, vals), lay


def intertwiner_space(a: Connection, b: Connection) -> IntertwinerBasis:
    """Basis of all (x_S, x_T) with W^a X_T = X_S W^b."""
    if not _shares_horizontals(a, b):
        return IntertwinerBasis(0, [], Layout(()), mpfr(0), float("inf"), "horizontal graphs or mu differ")
    system, lay = intertwiner_system(a, b)
    if lay.size == 0:
        return IntertwinerBasis(0, [], lay, mpfr(0), float("inf"), "no common vertical edges")
    ns = null_space(system, a.ctx)
    return IntertwinerBasis(len(ns.basis), [lay.split(v) for v in ns.basis], lay, ns.residual, ns.gap)


# -- small algebra helpers on block maps ---------------------------------------------

def _bm_mul(x: Gauge, y: Gauge) -> Gauge:
    return Gauge({k: x.left[k].dot(y.left[k]) for k in x.left}, {k: x.right[k].dot(y.right[k]) for k in x.right})


def _bm_adj(x: Gauge) -> Gauge:
    return Gauge({k: conj_t(v) for k, v in x.left.items()}, {k: conj_t(v) for k, v in x.right.items()})


def _bm_lin(coeffs: Sequence, xs: Sequence[Gauge]) -> Gauge:
    left = {k: sum((c * x.left[k] for c, x in zip(coeffs, xs)), np.zeros_like(xs[0].left[k]) + mpc(0))
            for k in xs[0].left}
    right = {k: sum((c * x.right[k] for c, x in zip(coeffs, xs)), np.zeros_like(xs[0].right[k]) + mpc(0))
             for k in xs[0].right}
    return Gauge(left, right)


def _bm_add(x: Gauge, y: Gauge, c=1) -> Gauge:
    return Gauge({k: x.left[k] + c * y.left[k] for k in x.left}, {k: x.right[k] + c * y.right[k] for k in x.right})


def _bm_scale(x: Gauge, c) -> Gauge:
    return Gauge({k: c * v for k, v in x.left.items()}, {k: c * v for k, v in x.right.items()})


def _bm_inner(x: Gauge, y: Gauge) -> mpc:
    """Hilbert-Schmidt <x, y> = tr(x* y) summed over blocks."""
    tot = mpc(0)
    for side_x, side_y in ((x.left, y.left), (x.right, y.right)):
        for k, v in side_x.items():
            w = side_y[k]
            tot += sum((p.conjugate() * q for p, q in zip(v.flat, w.flat)), mpc(0))
    return tot


def _bm_norm(x: Gauge) -> mpfr:
    return gmpy2.sqrt(_bm_inner(x, x).real)


def _bm_identity(lay: Layout) -> Gauge:
    left, right = {}, {}
    for side, key, m, n in lay.blocks:
        e = np.empty((m, m), dtype=object)
        e.fill(mpc(0))
        for t in range(m):
            e[t, t] = mpc(1)
        (left if side == "L" else right)[key] = e
    return Gauge(left, right)


# -- equivalence ----------------------------------------------------------------------

@dataclass
class EquivalenceResult:
    gauge: Optional[Gauge]
    residual: mpfr
    diagnostic: str = ""

    def __bool__(self):
        return self.gauge is not None


def _same_vertical_multiplicities(a: Connection, b: Connection) -> bool:
    return a.square.same_verticals(b.square) or (
        a.square.left.even == b.square.left.even and a.square.left.odd == b.square.left.odd
        and a.square.right.even == b.square.right.even and a.square.right.odd == b.square.right.odd
        and np.array_equal(a.square.left.mult, b.square.left.mult)
        and np.array_equal(a.square.right.mult, b.square.right.mult))


def _rebase(b: Connection, sq: WeightedSquare) -> Connection:
    """Same table on a square whose graphs agree with b's up to names."""
    return Connection(sq, b.blocks, b.ctx, b.name)


def find_equivalence(a: Connection, b: Connection, seed: int = 0) -> EquivalenceResult:
    """A vertical gauge u with apply_gauge(a, u) == b, or a diagnostic."""
    ctx = a.ctx
    if not _shares_horizontals(a, b):
        return EquivalenceResult(None, mpfr("inf"), "graph mismatch: horizontal graphs differ")
    if not _same_vertical_multiplicities(a, b):
        return EquivalenceResult(None, mpfr("inf"), "graph mismatch: vertical graphs differ")
    b = _rebase(b, a.square)
    if not a.square.left.mult.any() and not a.square.right.mult.any():
        return EquivalenceResult(Gauge({}, {}), mpfr(0))
    hom = intertwiner_space(a, b)
    if hom.dimension == 0:
        return EquivalenceResult(None, mpfr("inf"), "no unitary intertwiner: intertwiner space is zero")
    rng = np.random.default_rng(seed)
    with ctx.workspace():
        for attempt in range(3):
            coeffs = [mpc(complex(z)) for z in rng.normal(size=hom.dimension) + 1j * rng.normal(size=hom.dimension)]
            x = _bm_lin(coeffs, hom.basis)
            try:
                u = _polar(x, ctx)
            except NumericError:
                continue
            u = _fix_phase(u)
            res = max_entry_difference(apply_gauge(a, u, check=False), b)
            if res < ctx.tol:
                return EquivalenceResult(u, res)
        return EquivalenceResult(None, res if "res" in locals() else mpfr("inf"),
                                 "no unitary intertwiner: polar part of a generic intertwiner fails")


def equivalent(a: Connection, b: Connection, seed: int = 0) -> Optional[Gauge]:
    return find_equivalence(a, b, seed).gauge


def _fix_phase(u: Gauge) -> Gauge:
    """Remove the global phase so that the first 1x1 block (in sorted order) is 1."""
    for side in (u.left, u.right):
        for k in sorted(side):
            if side[k].shape == (1, 1):
                z = side[k][0, 0]
                return _bm_scale(u, z.conjugate() / abs(z))
    return u


def _polar(x: Gauge, ctx: FieldContext) -> Gauge:
    def pol(m):
        if m.shape[0] != m.shape[1]:
            raise NumericError("non-square intertwiner block")
        if m.shape == (1, 1):
            z = m[0, 0]
            if abs(z) <= ctx.tol:
                raise NumericError("singular intertwiner block")
            out = np.empty((1, 1), dtype=object)
            out[0, 0] = z / abs(z)
            return out
        return m.dot(inverse_sqrt_psd(conj_t(m).dot(m), ctx))
    return Gauge({k: pol(v) for k, v in x.left.items()}, {k: pol(v) for k, v in x.right.items()})


# -- decomposition -----------------------------------------------------------------------

@dataclass
class Summand:
    connection: Connection
    multiplicity: int


@dataclass
class Decomposition:
    summands: List[Summand]
    end_dimension: int
    seed_used: int

    @property
    def classes(self) -> int:
        return len(self.summands)

    def multiplicities(self) -> List[int]:
        return [s.multiplicity for s in self.summands]


def _orthonormalize(basis: List[Gauge], lay: Layout, ctx: FieldContext) -> List[Gauge]:
    from .linalg import gram_schmidt
    vecs = gram_schmidt([lay.flatten(g) for g in basis], ctx)
    return [lay.split(v) for v in vecs]


def _float_blocks(x: Gauge) -> List[np.ndarray]:
    return [np.array(v, dtype=complex) for v in x.left.values()] + [np.array(v, dtype=complex) for v in x.right.values()]


def _fmul(x: List[np.ndarray], y: List[np.ndarray]) -> List[np.ndarray]:
    return [a @ b for a, b in zip(x, y)]


def _fnorm(x: List[np.ndarray]) -> float:
    return float(np.sqrt(sum(np.vdot(a, a).real for a in x)))


def _minimal_projections(basis: List[Gauge], lay: Layout, ctx: FieldContext, rng) -> Optional[List[Gauge]]:
    """Spectral projections of a random self-adjoint element, or None if one is not minimal.

    With h = x + x* and L the matrix of left multiplication by h in the
    orthonormal basis, the projection onto the lambda-eigenspace of h is the
    image of the unit under the lambda-spectral projection of L.
    """
    n = len(basis)
    coeffs = [mpc(complex(z)) for z in rng.normal(size=n) + 1j * rng.normal(size=n)]
    x = _bm_lin(coeffs, basis)
    h = _bm_add(x, _bm_adj(x))
    F = np.array([lay.flatten(b) for b in basis], dtype=object)
    HB = np.array([lay.flatten(_bm_mul(h, b)) for b in basis], dtype=object)
    L = np.conjugate(F).dot(HB.T)
    vals, vecs = hermitian_eig(L, ctx)
    # in double precision mode tol itself already sits far above the eigenvalue error
    thr = (1 if ctx.fast else CLUSTER_FACTOR) * ctx.tol * max(1, max(abs(v) for v in vals))
    clusters: List[List[int]] = []
    for k, v in enumerate(vals):
        if clusters and v - vals[clusters[-1][-1]] <= thr:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    if len(clusters) > 1:
        centers = [sum(vals[k] for k in c) / len(c) for c in clusters]
        if min(centers[k + 1] - centers[k] for k in range(len(centers) - 1)) < 1e3 * thr:
            return None
    unit = np.conjugate(F).dot(lay.flatten(_bm_identity(lay)))
    projs = []
    for c in clusters:
        V = vecs[:, c]
        coords = V.dot(np.conjugate(V).T.dot(unit))
        projs.append(lay.split(coords.dot(F)))
    # minimality: P b P is a multiple of P for every basis element (decided in double precision)
    fb = [_float_blocks(b) for b in basis]
    cut = max(CLUSTER_FACTOR * ctx.tol, 1e-8)
    for P in projs:
        fp = _float_blocks(P)
        pp = _fnorm(fp) ** 2
        for b in fb:
            q = _fmul(_fmul(fp, b), fp)
            t = sum(np.vdot(a, c) for a, c in zip(fp, q)) / pp
            if _fnorm([c - t * a for a, c in zip(fp, q)]) > cut * max(1.0, _fnorm(b)):
                return None
    return projs


def _group_classes(projs: List[Gauge], basis: List[Gauge], ctx: FieldContext) -> List[List[int]]:
    """Minimal projections P_i, P_j are equivalent iff P_i A P_j != 0."""
    parent = list(range(len(projs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i
    fp = [_float_blocks(P) for P in projs]
    fb = [_float_blocks(b) for b in basis]
    cut = max(CLUSTER_FACTOR * ctx.tol, 1e-8)
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            if find(i) == find(j):
                continue
            for b in fb:
                if _fnorm(_fmul(_fmul(fp[i], b), fp[j])) > cut * max(1.0, _fnorm(b)):
                    parent[find(j)] = find(i)
                    break
    groups: Dict[int, List[int]] = {}
    for i in range(len(projs)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def sub_connection(conn: Connection, P: Gauge, name: str = "") -> Connection:
    """The summand cut out by a projection in the self-intertwiner algebra."""
    ctx = conn.ctx
    sq = conn.square
    with ctx.workspace():
        VS = {k: range_basis(v, ctx) for k, v in P.left.items()}
        VT = {k: range_basis(v, ctx) for k, v in P.right.items()}
    L, R = sq.left, sq.right
    lm = np.zeros_like(L.mult)
    rm = np.zeros_like(R.mult)
    for (p, r), v in VS.items():
        lm[L.even_index[p], L.odd_index[r]] = v.shape[1]
    for (q, s), v in VT.items():
        rm[R.even_index[q], R.odd_index[s]] = v.shape[1]
    left = BipartiteGraph(L.name, L.even, L.odd, lm)
    right = BipartiteGraph(R.name, R.even, R.odd, rm)
    new = sq.with_verticals(left, right)
    blocks = {}
    with ctx.workspace():
        for key, (rows, cols) in new.block_labels.items():
            p, s = key
            W = conn.blocks[key]
            orows, ocols = sq.block_labels[key]
            rpos, cpos = sq.row_pos[key], sq.col_pos[key]
            out = _zeros(len(rows), len(cols), ctx)
            # rows: (r, new left copy, l) <- sum_i conj(VS[i, new]) * old row (r, i, l)
            A = _zeros(len(rows), len(orows), ctx)
            for n, (r, inew, l) in enumerate(rows):
                v = VS[(p, r)]
                for i in range(v.shape[0]):
                    A[n, rpos[(r, i, l)]] = v[i, inew].conjugate()
            B = _zeros(len(ocols), len(cols), ctx)
            for n, (q, k, jnew) in enumerate(cols):
                v = VT[(q, s)]
                for j in range(v.shape[0]):
                    B[cpos[(q, k, j)], n] = v[j, jnew]
            out = A.dot(W).dot(B)
            blocks[key] = out
    return Connection(new, blocks, ctx, name)


def decompose(conn: Connection, seed: int = 0, max_attempts: int = 8) -> Decomposition:
    """Irreducible summands with multiplicities (one representative per class)."""
    ctx = conn.ctx
    if conn.is_zero:
        return Decomposition([], 0, seed)
    end = intertwiner_space(conn, conn)
    if end.dimension == 0:
        raise NumericError("self-intertwiner space is zero for a nonzero connection")
    with ctx.workspace():
        basis = _orthonormalize(end.basis, end.layout, ctx)
        if end.dimension == 1:
            return Decomposition([Summand(conn, 1)], 1, seed)
        for attempt in range(max_attempts):
            rng = np.random.default_rng([seed, attempt])
            projs = _minimal_projections(basis, end.layout, ctx, rng)
            if projs is not None:
                break
        else:
            raise PrecisionError("could not separate the self-intertwiner algebra; raise the precision")
        groups = _group_classes(projs, basis, ctx)
    summands = []
    for k, g in enumerate(sorted(groups, key=lambda g: g[0])):
        part = sub_connection(conn, projs[g[0]], f"{conn.name}[{k}]")
        summands.append(Summand(part, len(g)))
    return Decomposition(summands, end.dimension, seed)


# -- indecomposability and subtraction ---------------------------------------------------

@dataclass
class IndecomposableReport:
    indecomposable: bool
    end_dimension: int
    single_edge_vertices: List[Tuple[str, str]] = field(default_factory=list)

    def __bool__(self):
        return self.indecomposable


def single_edge_vertices(conn: Connection) -> List[Tuple[str, str]]:
    """Vertices meeting exactly one (simple) vertical edge, which forces a one-dimensional commutant."""
    out = []
    sq = conn.square
    for level, g, by_even in (("V0", sq.left, True), ("V3", sq.left, False),
                              ("V1", sq.right, True), ("V2", sq.right, False)):
        m = g.mult if by_even else g.mult.T
        names = g.even if by_even else g.odd
        for v, row in zip(names, m):
            if row.sum() == 1:
                out.append((level, v))
    return out


def is_indecomposable(conn: Connection) -> IndecomposableReport:
    end = intertwiner_space(conn, conn)
    return IndecomposableReport(end.dimension == 1, end.dimension, single_edge_vertices(conn))


def subtract(a: Connection, b: Connection, seed: int = 0) -> Optional[Connection]:
    """a minus one copy of each summand of b; None if some summand of b is missing from a."""
    da = decompose(a, seed)
    pool = [[s.connection, s.multiplicity] for s in da.summands]
    for sb in decompose(b, seed).summands:
        for _ in range(sb.multiplicity):
            for entry in pool:
                if entry[1] > 0 and equivalent(entry[0], sb.connection, seed) is not None:
                    entry[1] -= 1
                    break
            else:
                return None
    parts = [c for c, m in pool for _ in range(m)]
    name = f"({a.name}-{b.name})"
    if not parts:
        return zero_connection(a.square, a.ctx, name)
    return sum_of(parts, name)
