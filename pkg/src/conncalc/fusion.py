"""Gauge classes of irreducible connections and the fusion rules they generate.

Classes are kept in a registry; class identity is decided only by
``equivalent``.  Expressions such as (aa~)^2 - 3 aa~ + 1 are evaluated as
formal sums: products distribute over direct sums, so a product of sums is
decomposed one pair of irreducible representatives at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .connection import (V0, V1, Connection, Gauge, automorphism_connection, check_biunitary, product,
                         renormalize, sum_of, trivial_connection)
from .gauge import (_same_vertical_multiplicities, decompose, find_equivalence, intertwiner_space,
                    is_indecomposable, single_edge_vertices)
from .graphs import BipartiteGraph, StructuralError, isomorphic, lemma1_positivity
from .io import bundled, load_automorphism, load_connection, load_graph, read_entries
from .scalar import Case, FieldContext, parse_scalar

ClassId = str


class RegistryError(KeyError):
    """A formal sum refers to a class the registry does not know."""


def dimension(conn: Connection) -> mpfr:
    """Statistical dimension: the common harmonic eigenvalue of the vertical graphs."""
    if conn.is_zero:
        return mpfr(0)
    d, res = conn.square.vertical_dimension(conn.ctx)
    if res > 1e3 * conn.ctx.tol * max(1, d):
        raise StructuralError(f"{conn.name}: vertical graphs are not harmonic (defect {float(res):.3g})")
    return d


# -- formal sums ----------------------------------------------------------------------

@dataclass(frozen=True)
class FormalSum:
    """Integer combination of class ids; zero coefficients are dropped."""
    coeffs: Tuple[Tuple[ClassId, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[ClassId, int]) -> "FormalSum":
        return cls(tuple(sorted((k, int(v)) for k, v in mapping.items() if v)))

    @classmethod
    def single(cls, cid: ClassId, n: int = 1) -> "FormalSum":
        return cls.of({cid: n})

    def as_dict(self) -> Dict[ClassId, int]:
        return dict(self.coeffs)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = self.as_dict()
        for k, v in other.coeffs:
            out[k] = out.get(k, 0) + v
        return FormalSum.of(out)

    def __neg__(self) -> "FormalSum":
        return FormalSum.of({k: -v for k, v in self.coeffs})

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __rmul__(self, n: int) -> "FormalSum":
        return FormalSum.of({k: n * v for k, v in self.coeffs})

    @property
    def is_positive(self) -> bool:
        return all(v >= 0 for _, v in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def single_class(self) -> Optional[ClassId]:
        """The class id if this is exactly one irreducible with coefficient 1."""
        if len(self.coeffs) == 1 and self.coeffs[0][1] == 1:
            return self.coeffs[0][0]
        return None

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(k if v == 1 else f"{v}*{k}" for k, v in self.coeffs).replace("+ -", "- ")


def inner_product(x: FormalSum, y: FormalSum) -> int:
    """<x, y> = dim Hom(x, y), extended bilinearly."""
    yd = y.as_dict()
    return sum(v * yd.get(k, 0) for k, v in x.coeffs)


# -- registry ---------------------------------------------------------------------------

@dataclass
class ClassEntry:
    cid: ClassId
    connection: Connection
    dim: mpfr
    label: str = ""


class ClassRegistry:
    """Pairwise inequivalent irreducible connections with stable ids c0, c1, ..."""

    def __init__(self, ctx: FieldContext, seed: int = 0):
        self.ctx = ctx
        self.seed = seed
        self.classes: List[ClassEntry] = []
        self._products: Dict[Tuple[ClassId, ClassId], FormalSum] = {}
        # (product dimension, sum of summand dimensions) for each decomposed product
        self.dimension_log: List[Tuple[str, mpfr, mpfr, mpfr]] = []

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, cid: ClassId) -> ClassEntry:
        for e in self.classes:
            if e.cid == cid:
                return e
        raise RegistryError(cid)

    def find(self, conn: Connection) -> Optional[ClassId]:
        d = dimension(conn)
        for e in self.classes:
            if not conn.square.same_horizontals(e.connection.square):
                continue
            if not _same_vertical_multiplicities(conn, e.connection):
                continue
            with self.ctx.workspace():
                far = abs(e.dim - d) > 1e3 * self.ctx.tol * max(1, d)
            if far:
                continue
            if find_equivalence(e.connection, conn, self.seed):
                return e.cid
        return None

    def register(self, conn: Connection, label: str = "") -> ClassId:
        """Id of the class of an irreducible connection, adding it if new."""
        cid = self.find(conn)
        if cid is None:
            cid = f"c{len(self.classes)}"
            self.classes.append(ClassEntry(cid, conn.renamed(label or cid), dimension(conn), label))
        elif label and not self[cid].label:
            self[cid].label = label
        return cid

    def expand(self, conn: Connection) -> FormalSum:
        """Decompose and register every summand."""
        out: Dict[ClassId, int] = {}
        for s in decompose(conn, self.seed).summands:
            cid = self.register(s.connection)
            out[cid] = out.get(cid, 0) + s.multiplicity
        return FormalSum.of(out)

    def multiply(self, x: FormalSum, y: FormalSum) -> FormalSum:
        total = FormalSum()
        for a, m in x.coeffs:
            for b, n in y.coeffs:
                total = total + (m * n) * self._product(a, b)
        return total

    def _product(self, a: ClassId, b: ClassId) -> FormalSum:
        if (a, b) not in self._products:
            ea, eb = self[a], self[b]
            conn = product(ea.connection, eb.connection, f"{a}.{b}")
            fs = self.expand(conn)
            with self.ctx.workspace():
                self.dimension_log.append((f"{a}.{b}", dimension(conn), ea.dim * eb.dim, self.dim(fs)))
            self._products[(a, b)] = fs
        return self._products[(a, b)]

    def dim(self, x: FormalSum) -> mpfr:
        with self.ctx.workspace():
            return gmpy2.fsum(v * self[k].dim for k, v in x.coeffs) if x.coeffs else mpfr(0)

    def connection(self, x: FormalSum, name: str = "") -> Connection:
        """A connection realizing a positive, nonzero formal sum."""
        if not x.is_positive or x.is_zero:
            raise ValueError(f"only nonzero positive sums have connections, got {x}")
        parts = [self[k].connection for k, v in x.coeffs for _ in range(v)]
        return parts[0].renamed(name or str(x)) if len(parts) == 1 else sum_of(parts, name or str(x))

    def dimension_defect(self) -> mpfr:
        """Worst |d(ab) - d(a)d(b)| and |d(ab) - sum of summand dimensions| over decomposed products."""
        with self.ctx.workspace():
            worst = mpfr(0)
            for _, d, dd, ds in self.dimension_log:
                worst = max(worst, abs(d - dd), abs(d - ds))
            return worst


# -- bundled case data -------------------------------------------------------------------

@dataclass
class CaseBundle:
    ctx: FieldContext
    graph: BipartiteGraph            # principal graph (upper graph of alpha)
    dual_graph: BipartiteGraph       # lower graph of alpha
    alpha: Connection
    alpha_dual: Connection
    trivial: Connection
    sigma: Connection
    sigma_map: Dict[str, str]


def load_bundle(ctx: FieldContext) -> CaseBundle:
    case = ctx.case
    alpha = load_connection(bundled(case, "alpha"), ctx)
    g, m = load_automorphism(bundled(case, "sigma"))
    mu_e, mu_o = alpha.square.mu[V0], alpha.square.mu[V1]
    return CaseBundle(ctx, alpha.square.upper, alpha.square.lower, alpha, renormalize(alpha, "alpha~"),
                      trivial_connection(alpha.square.upper, mu_e, mu_o, ctx, "1"),
                      automorphism_connection(g, m, mu_e, mu_o, ctx, "sigma"), m)


# -- reports ------------------------------------------------------------------------------

def _fmt(x) -> str:
    return f"{float(x):.3e}"


def _limit(ctx: FieldContext, high: str) -> mpfr:
    """Fixed high-precision acceptance threshold; the context tolerance in double precision mode."""
    return mpfr(ctx.tol) if ctx.fast else mpfr(high)


@dataclass
class Condition:
    name: str
    passed: bool
    details: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, object]:
        return {"name": self.name, "passed": self.passed, **self.details}


@dataclass
class HypothesisReport:
    title: str
    conditions: List[Condition]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def as_dict(self) -> Dict[str, object]:
        return {"title": self.title, "passed": self.passed, "conditions": [c.as_dict() for c in self.conditions]}


def _irreducible_and_distinct(name: str, items: Sequence[Tuple[str, Connection]]) -> Condition:
    """End dimension 1 for each item and Hom dimension 0 for each pair."""
    ends = {}
    for label, c in items:
        ends[label] = intertwiner_space(c, c).dimension
    homs = {}
    for (la, a), (lb, b) in combinations(items, 2):
        homs[f"{la} | {lb}"] = intertwiner_space(a, b).dimension
    ok = all(v == 1 for v in ends.values()) and all(v == 0 for v in homs.values())
    return Condition(name, ok, {"end_dimensions": ends, "hom_dimensions": homs})


def _single(reg: ClassRegistry, fs: FormalSum, what: str) -> Tuple[Optional[Connection], str]:
    cid = fs.single_class()
    if cid is None:
        return None, f"{what} evaluates to {fs}, not a single irreducible"
    return reg[cid].connection.renamed(what), ""


def _equivalence_condition(name: str, a: Connection, b: Connection, seed: int) -> Tuple[Condition, Optional[Gauge]]:
    res = find_equivalence(a, b, seed)
    ctx = a.ctx
    details: Dict[str, object] = {"residual": _fmt(res.residual) if res.gauge is not None else "inf"}
    if res.gauge is None:
        details["diagnostic"] = res.diagnostic
    else:
        details["gauge_unitarity"] = _fmt(res.gauge.unitarity_residual(ctx))
        details["nontrivial_blocks"] = res.gauge.nontrivial_blocks(ctx)
        details["blocks"] = len(res.gauge.left) + len(res.gauge.right)
    return Condition(name, res.gauge is not None and res.residual < ctx.tol, details), res.gauge


def eigenvalues_2x2(u: np.ndarray) -> Tuple[mpc, mpc]:
    tr = u[0, 0] + u[1, 1]
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    disc = gmpy2.sqrt(tr * tr - 4 * det)
    return (tr + disc) / 2, (tr - disc) / 2


def conjugacy_distance(u: np.ndarray, v: np.ndarray) -> mpfr:
    """How far two 2x2 unitaries are from being conjugate up to a phase.

    Both spectra are compared after rotating u's spectrum onto v's, over
    both pairings of eigenvalues.
    """
    eu, ev = eigenvalues_2x2(u), eigenvalues_2x2(v)
    best = mpfr("inf")
    for a, b in ((eu[0], eu[1]), (eu[1], eu[0])):
        phase = ev[0] / a
        phase = phase / abs(phase)
        best = min(best, max(abs(phase * a - ev[0]), abs(phase * b - ev[1])))
    return best


def _ucc_check(bundle: CaseBundle, seed: int) -> Dict[str, object]:
    """X against its sigma-conjugate: compare the 2x2 (c, c) witness blocks with the reference u(c/c)_2."""
    import json
    ctx = bundle.ctx
    x = load_connection(bundled(ctx.case, "x"), ctx)
    sxs = product(product(bundle.sigma, x), bundle.sigma, "sigma.X.sigma")
    res = find_equivalence(x, sxs, seed)
    out: Dict[str, object] = {"residual": _fmt(res.residual) if res.gauge is not None else "inf"}
    if res.gauge is None:
        out["passed"] = False
        return out
    raw = json.loads(bundled(ctx.case, "lemma_vectors").read_text())
    with ctx.workspace():
        ref = np.array([[parse_scalar(e, ctx) for e in row] for row in raw["u_cc"]], dtype=object)
        printed = np.array([[parse_scalar(e, ctx) for e in row] for row in raw["u_cc_printed"]], dtype=object)
        blocks = [(side, k, u) for side, blk in (("left", res.gauge.left), ("right", res.gauge.right))
                  for k, u in blk.items() if u.shape == (2, 2)]
        dist = [conjugacy_distance(u, ref) for _, _, u in blocks]
        col = printed[0, 0].conjugate() * printed[0, 1] + printed[1, 0].conjugate() * printed[1, 1]
    out["blocks_2x2"] = [f"{s}:{k[0]}/{k[1]}" for s, k, _ in blocks]
    out["conjugacy_distance"] = [_fmt(d) for d in dist]
    out["printed_column_overlap"] = _fmt(abs(col))
    out["passed"] = bool(dist) and max(dist) < _limit(ctx, "1e-35")
    return out


def orthonormal_basis_lemma(ctx: FieldContext) -> Condition:
    """u1, u2, u3 are orthonormal and each f vector is g[0] u2 + g[1] u3 (no u1 component)."""
    import json
    raw = json.loads(bundled(ctx.case, "lemma_vectors").read_text())
    with ctx.workspace():
        U = [[parse_scalar(e, ctx) for e in raw[k]] for k in ("u1", "u2", "u3")]
        gram = max(abs(sum(a.conjugate() * b for a, b in zip(U[i], U[j])) - (1 if i == j else 0))
                   for i in range(3) for j in range(3))
        worst = mpfr(0)
        for key, vec in raw["f"].items():
            f = [parse_scalar(e, ctx) for e in vec]
            g = [parse_scalar(e, ctx) for e in raw["g_vectors"][key]]
            coords = [sum(u[k].conjugate() * f[k] for k in range(3)) for u in U]
            worst = max(worst, abs(coords[0]), abs(coords[1] - g[0]), abs(coords[2] - g[1]))
    ok = gram < _limit(ctx, "1e-40") and worst < _limit(ctx, "1e-40")
    return Condition("orthonormal basis lemma", bool(ok), {"gram_residual": _fmt(gram), "expansion_residual": _fmt(worst),
                                                           "expansions": len(raw["f"])})


def verify_lemma2_hypotheses(bundle: CaseBundle, seed: int = 0,
                             registry: Optional[ClassRegistry] = None) -> HypothesisReport:
    """The connection statements behind the sqrt13 key lemma."""
    ctx = bundle.ctx
    reg = registry if registry is not None else ClassRegistry(ctx, seed)
    s, a = bundle.sigma, bundle.alpha
    one = FormalSum.single(reg.register(bundle.trivial, "1"))
    A = FormalSum.single(reg.register(a, "alpha"))
    aa = reg.expand(product(a, bundle.alpha_dual))
    Y, err_y = _single(reg, aa - one, "Y")
    G, err_g = _single(reg, reg.multiply(aa, A) - 2 * A, "G")
    conds = []
    if Y is None or G is None:
        conds.append(Condition("expressions", False, {"diagnostic": err_y or err_g}))
        return HypothesisReport("sqrt13 key lemma", conds)
    s2 = product(s, s, "sigma^2")
    nn = [("1", bundle.trivial), ("sigma", s), ("sigma^2", s2), ("Y", Y),
          ("sigma.Y", product(s, Y)), ("sigma^2.Y", product(s2, Y))]
    nm = [("alpha", a), ("sigma.alpha", product(s, a)), ("sigma^2.alpha", product(s2, a)), ("G", G)]
    conds.append(_irreducible_and_distinct("N-N connections indecomposable and pairwise inequivalent", nn))
    conds.append(_irreducible_and_distinct("N-M connections irreducible and pairwise inequivalent", nm))
    c3, _ = _equivalence_condition("sigma.Y ~ Y.sigma^2", product(s, Y, "sigma.Y"), product(Y, s2, "Y.sigma^2"), seed)
    conds.append(c3)
    conds.append(orthonormal_basis_lemma(ctx))
    ucc = _ucc_check(bundle, seed)
    conds.append(Condition("X ~ sigma.X.sigma, (c,c) block conjugate to u(c/c)_2",
                           bool(ucc.pop("passed")), ucc))
    return HypothesisReport("sqrt13 key lemma", conds)


def _sqrt17_objects(bundle: CaseBundle, reg: ClassRegistry):
    s, a = bundle.sigma, bundle.alpha
    one = FormalSum.single(reg.register(bundle.trivial, "1"))
    A = FormalSum.single(reg.register(a, "alpha"))
    S = FormalSum.single(reg.register(s, "sigma"))
    aa = reg.expand(product(a, bundle.alpha_dual))
    aa2 = reg.multiply(aa, aa)
    exprs = {
        "Y": aa - one,
        "Z": aa2 - 3 * aa + one,
        "G": reg.multiply(aa, A) - 2 * A,
        "E": reg.multiply(aa2, A) - 4 * reg.multiply(aa, A) + 3 * A,
    }
    exprs["R"] = reg.multiply(reg.multiply(exprs["Y"], S), exprs["Y"]) - reg.multiply(reg.multiply(S, exprs["Y"]), S)
    return exprs


def verify_lemma3_hypotheses(bundle: CaseBundle, seed: int = 0,
                             registry: Optional[ClassRegistry] = None) -> HypothesisReport:
    """The connection statements behind the sqrt17 key lemma."""
    ctx = bundle.ctx
    reg = registry if registry is not None else ClassRegistry(ctx, seed)
    s, a = bundle.sigma, bundle.alpha
    exprs = _sqrt17_objects(bundle, reg)
    conn: Dict[str, Connection] = {}
    conds = []
    for k in ("Y", "Z", "G", "E"):
        c, err = _single(reg, exprs[k], k)
        if c is None:
            conds.append(Condition("expressions", False, {"diagnostic": err, "lemma1_violation": not exprs[k].is_positive}))
            return HypothesisReport("sqrt17 key lemma", conds)
        conn[k] = c
    Y, Z, G, E = conn["Y"], conn["Z"], conn["G"], conn["E"]
    sa = product(s, a, "sigma.alpha")
    ysa = product(Y, sa, "Y.sigma.alpha")
    nn = [("1", bundle.trivial), ("sigma", s), ("Y", Y), ("sigma.Y", product(s, Y)), ("Y.sigma", product(Y, s)),
          ("sigma.Y.sigma", product(product(s, Y), s)), ("Z", Z), ("sigma.Z", product(s, Z))]
    nm = [("alpha", a), ("sigma.alpha", sa), ("G", G), ("sigma.G", product(s, G)), ("E", E), ("Y.sigma.alpha", ysa)]
    conds.append(_irreducible_and_distinct("N-N connections indecomposable and pairwise inequivalent", nn))
    c2 = _irreducible_and_distinct("N-M connections irreducible and pairwise inequivalent", nm)
    c2.details["single_edge_vertices_of_Y.sigma.alpha"] = [f"{lvl}:{v}" for lvl, v in single_edge_vertices(ysa)]
    conds.append(c2)
    c3, _ = _equivalence_condition("sigma.Y.sigma.alpha ~ Y.sigma.alpha",
                                   product(s, product(Y, sa), "sigma.Y.sigma.alpha"), ysa, seed)
    conds.append(c3)
    return HypothesisReport("sqrt17 key lemma", conds)


# -- index identities -----------------------------------------------------------------------

def index_identity_checks(ctx: FieldContext, dims: Optional[Mapping[str, mpfr]] = None) -> HypothesisReport:
    """Polynomial identities of the generator and, when dimensions are supplied, the sqrt17 dimension relations.

    ``dims`` may hold 'G', 'Z', 'SZ', 'R', 'E.alpha~'.
    """
    dims = dict(dims or {})
    conds = []
    with ctx.workspace():
        x = ctx.generator.real
        x2 = x * x
        if ctx.case is Case.SQRT13:
            r = abs(x2 * x2 - 5 * x2 + 3)
            conds.append(Condition("lambda^4 - 5 lambda^2 + 3 = 0", r < _limit(ctx, "1e-55"), {"residual": _fmt(r)}))
            r = abs(x * (x2 * x - 2 * x) - 3 * (x2 - 1))
            conds.append(Condition("lambda(lambda^3 - 2 lambda) - 3(lambda^2 - 1) = 0", r < _limit(ctx, "1e-50"),
                                   {"residual": _fmt(r)}))
        else:
            r = abs(x2 * x2 - 5 * x2 + 2)
            conds.append(Condition("beta^4 - 5 beta^2 + 2 = 0", r < _limit(ctx, "1e-55"), {"residual": _fmt(r)}))
        lim = 1e3 * ctx.tol
        if "G" in dims:
            r = abs(dims["G"] - (x2 * x - 2 * x))
            conds.append(Condition("d(G) = x^3 - 2x", r < lim, {"residual": _fmt(r)}))
        if "Z" in dims and "SZ" in dims:
            r = abs(dims["Z"] - dims["SZ"])
            conds.append(Condition("d(Z) = d(SZ)", r < lim, {"residual": _fmt(r)}))
        if "Z" in dims and "R" in dims:
            # printed with -1; the principal graph weights give +1
            r = abs(dims["R"] - (dims["Z"] + 1))
            conds.append(Condition("d(R) = d(Z) + 1", r < lim,
                                   {"residual": _fmt(r), "printed_sign_defect": _fmt(abs(dims["R"] - (dims["Z"] - 1)))}))
        if all(k in dims for k in ("E.alpha~", "Z", "SZ", "R")):
            r = abs(dims["E.alpha~"] - dims["Z"] - dims["SZ"] - dims["R"])
            conds.append(Condition("d(E.alpha~) = d(Z) + d(SZ) + d(R)", r < lim, {"residual": _fmt(r)}))
    return HypothesisReport("index identities", conds)


def sqrt17_dimensions(bundle: CaseBundle, reg: ClassRegistry) -> Dict[str, mpfr]:
    exprs = _sqrt17_objects(bundle, reg)
    out = {k: reg.dim(v) for k, v in exprs.items() if v.single_class()}
    if exprs["Z"].single_class():
        out["SZ"] = dimension(product(bundle.sigma, reg[exprs["Z"].single_class()].connection))
    if exprs["E"].single_class():
        out["E.alpha~"] = dimension(product(reg[exprs["E"].single_class()].connection, bundle.alpha_dual))
    return out


# -- fusion graph ------------------------------------------------------------------------------

@dataclass
class FusionGraph:
    graph: Optional[BipartiteGraph]
    finite: bool
    depth: int
    even: List[ClassId]
    odd: List[ClassId]
    frobenius_ok: bool
    dimension_defect: mpfr
    note: str = ""


def fusion_graph(generator: Connection, registry: Optional[ClassRegistry] = None, max_depth: int = 12,
                 seed: int = 0) -> FusionGraph:
    """Principal graph of a generator: alternate right multiplication by it and by its contragredient."""
    ctx = generator.ctx
    reg = registry if registry is not None else ClassRegistry(ctx, seed)
    sq = generator.square
    dual = renormalize(generator, f"~{generator.name}")
    triv = trivial_connection(sq.upper, sq.mu[V0], sq.mu[V1], ctx, "1")
    t = reg.register(triv, "1")
    g = reg.register(generator, generator.name)
    if g == t:
        graph = BipartiteGraph.from_edges(f"fusion({generator.name})", [t], [], [], t)
        return FusionGraph(graph, True, 0, [t], [], True, reg.dimension_defect(), "trivial generator")
    gfs, dfs = FormalSum.single(g), FormalSum.single(reg.register(dual, dual.name))
    even, odd = [t], []
    down: Dict[Tuple[ClassId, ClassId], int] = {}   # (even, odd) -> mult of odd in even.generator
    up: Dict[Tuple[ClassId, ClassId], int] = {}     # (even, odd) -> mult of even in odd.dual
    frontier, side, depth = [t], 0, 0
    while frontier and depth < max_depth:
        new = []
        for x in frontier:
            fs = reg.multiply(FormalSum.single(x), gfs if side == 0 else dfs)
            for y, m in fs.coeffs:
                if side == 0:
                    down[(x, y)] = m
                    if y not in odd:
                        odd.append(y)
                        new.append(y)
                else:
                    up[(y, x)] = m
                    if y not in even:
                        even.append(y)
                        new.append(y)
        frontier, side, depth = new, 1 - side, depth + 1
    finite = not frontier
    if not finite:
        return FusionGraph(None, False, depth, even, odd, False, reg.dimension_defect(),
                           "not finite depth within budget")
    frob = all(down.get(k, 0) == up.get(k, 0) for k in set(down) | set(up))
    edges = [(x, y, m) for (x, y), m in sorted(down.items())]
    graph = BipartiteGraph.from_edges(f"fusion({generator.name})", even, odd, edges, t)
    return FusionGraph(graph, True, depth, even, odd, frob, reg.dimension_defect())


# -- consolidated verification ---------------------------------------------------------------------

def verify_case(ctx: FieldContext, seed: int = 0, max_depth: int = 12) -> Dict[str, object]:
    """Everything the classification argument needs, as one JSON-ready report."""
    bundle = load_bundle(ctx)
    reg = ClassRegistry(ctx, seed)
    sections: List[Dict[str, object]] = []

    bu = check_biunitary(bundle.alpha)
    sections.append({"title": "alpha biunitary", "passed": bu.passed,
                     "unitarity": _fmt(bu.unitarity_residual),
                     "renormalization": _fmt(bu.renormalization_residual)})
    for g in (bundle.graph, bundle.dual_graph):
        rep = lemma1_positivity(g, tol=ctx.tol)
        sections.append({"title": f"positivity on {g.name}", "passed": rep.passed, "minima": rep.minima})

    if ctx.case is Case.SQRT13:
        lemma = verify_lemma2_hypotheses(bundle, seed, reg)
        dims: Dict[str, mpfr] = {}
    else:
        lemma = verify_lemma3_hypotheses(bundle, seed, reg)
        dims = sqrt17_dimensions(bundle, reg)
    sections.append(lemma.as_dict())
    sections.append(index_identity_checks(ctx, dims).as_dict())

    fg = fusion_graph(bundle.alpha, reg, max_depth, seed)
    iso = fg.graph is not None and isomorphic(fg.graph, bundle.graph)
    sections.append({"title": "fusion graph of alpha", "passed": bool(iso and fg.frobenius_ok
                                                                      and fg.dimension_defect < 1e3 * ctx.tol),
                     "finite": fg.finite, "depth": fg.depth, "even": len(fg.even), "odd": len(fg.odd),
                     "isomorphic_to_principal_graph": iso, "frobenius_symmetric": fg.frobenius_ok,
                     "dimension_defect": _fmt(fg.dimension_defect), "note": fg.note,
                     "edges": [[x, y, m] for x, y, m in fg.graph.edges()] if fg.graph else []})
    sections.append({"title": "class table", "passed": True,
                     "classes": [{"id": e.cid, "label": e.label, "dim": f"{float(e.dim):.12f}"} for e in reg.classes]})
    return {"case": ctx.case.value, "precision": ctx.precision, "tol": f"{ctx.tol:.1e}", "seed": seed,
            "passed": all(s["passed"] for s in sections), "sections": sections}
