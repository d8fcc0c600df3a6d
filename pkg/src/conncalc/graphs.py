"""Bipartite multiplicity graphs, Perron-Frobenius data, positivity of the four polynomial matrices and string dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import gmpy2
import networkx as nx
import numpy as np
from gmpy2 import mpfr

from .scalar import FieldContext


class StructuralError(ValueError):
    """Malformed graph, square or connection."""


class NumericError(RuntimeError):
    """An iterative computation failed to converge or a rank decision was ambiguous."""


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    name: str
    even: Tuple[str, ...]
    odd: Tuple[str, ...]
    mult: np.ndarray  # int, shape (len(even), len(odd))
    basepoint: str | None = None

    def __post_init__(self):
        m = np.asarray(self.mult, dtype=np.int64).reshape(len(self.even), len(self.odd))
        if (m < 0).any():
            raise StructuralError(f"{self.name}: negative multiplicity")
        if len(set(self.even)) != len(self.even) or len(set(self.odd)) != len(self.odd):
            raise StructuralError(f"{self.name}: duplicate vertex names")
        m.setflags(write=False)
        object.__setattr__(self, "even", tuple(self.even))
        object.__setattr__(self, "odd", tuple(self.odd))
        object.__setattr__(self, "mult", m)
        if self.basepoint is not None and self.basepoint not in self.even and self.basepoint not in self.odd:
            raise StructuralError(f"{self.name}: basepoint {self.basepoint!r} not a vertex")

    @classmethod
    def from_edges(cls, name: str, even: Sequence[str], odd: Sequence[str],
                   edges: Iterable[Tuple[str, str, int] | Tuple[str, str]], basepoint: str | None = None):
        ie = {v: k for k, v in enumerate(even)}
        io = {v: k for k, v in enumerate(odd)}
        m = np.zeros((len(even), len(odd)), dtype=np.int64)
        for e in edges:
            x, y = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            if x not in ie or y not in io:
                raise StructuralError(f"{name}: edge {x}-{y} has an unknown endpoint")
            m[ie[x], io[y]] += k
        return cls(name, tuple(even), tuple(odd), m, basepoint)

    @property
    def even_index(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.even)}

    @property
    def odd_index(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.odd)}

    def m(self, x: str, y: str) -> int:
        ie, io = self.even_index, self.odd_index
        if x not in ie or y not in io:
            return 0
        return int(self.mult[ie[x], io[y]])

    def edges(self) -> List[Tuple[str, str, int]]:
        return [(self.even[i], self.odd[j], int(self.mult[i, j]))
                for i in range(len(self.even)) for j in range(len(self.odd)) if self.mult[i, j]]

    def neighbors_of_even(self, x: str) -> List[Tuple[str, int]]:
        i = self.even_index[x]
        return [(self.odd[j], int(k)) for j, k in enumerate(self.mult[i]) if k]

    def neighbors_of_odd(self, y: str) -> List[Tuple[str, int]]:
        j = self.odd_index[y]
        return [(self.even[i], int(k)) for i, k in enumerate(self.mult[:, j]) if k]

    def is_connected(self) -> bool:
        n = len(self.even) + len(self.odd)
        if n == 0:
            return False
        return nx.is_connected(self.to_networkx())

    def validate_horizontal(self) -> None:
        if not self.is_connected():
            raise StructuralError(f"{self.name}: horizontal graph must be connected")
        if (self.mult.sum(axis=1) == 0).any() or (self.mult.sum(axis=0) == 0).any():
            raise StructuralError(f"{self.name}: isolated vertex in horizontal graph")

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v in self.even:
            g.add_node(("e", v), side=0)
        for v in self.odd:
            g.add_node(("o", v), side=1)
        for x, y, k in self.edges():
            g.add_edge(("e", x), ("o", y), mult=k)
        return g

    def same_as(self, other: "BipartiteGraph") -> bool:
        return (self.even == other.even and self.odd == other.odd
                and np.array_equal(self.mult, other.mult))

    def __repr__(self):
        return f"BipartiteGraph({self.name!r}, {len(self.even)}+{len(self.odd)} vertices, {int(self.mult.sum())} edges)"


def transpose(g: BipartiteGraph) -> BipartiteGraph:
    return BipartiteGraph(g.name + "^t", g.odd, g.even, g.mult.T.copy(), g.basepoint)


def compose_graphs(g1: BipartiteGraph, g2: BipartiteGraph, name: str | None = None) -> BipartiteGraph:
    """Multiplicity of x-z is the number of length-2 paths x-y-z."""
    if g1.odd != g2.even:
        raise StructuralError(f"cannot compose {g1.name} with {g2.name}: side mismatch")
    base = g1.basepoint if g1.basepoint in g1.even else None
    return BipartiteGraph(name or f"{g1.name}.{g2.name}", g1.even, g2.odd, g1.mult @ g2.mult, base)


def identity_matching(vertices: Sequence[str], name: str = "id") -> BipartiteGraph:
    return BipartiteGraph(name, tuple(vertices), tuple(vertices), np.eye(len(vertices), dtype=np.int64))


def isomorphic(g1: BipartiteGraph, g2: BipartiteGraph, respect_basepoint: bool = False) -> bool:
    """Isomorphism preserving sides and edge multiplicities."""
    if sorted(g1.mult.sum(axis=1)) != sorted(g2.mult.sum(axis=1)):
        return False
    a, b = g1.to_networkx(), g2.to_networkx()
    if respect_basepoint:
        for g, src in ((a, g1), (b, g2)):
            for node in g.nodes:
                g.nodes[node]["base"] = node[1] == src.basepoint and node[0] == ("e" if src.basepoint in src.even else "o")
    nm = (lambda x, y: x["side"] == y["side"] and x.get("base", False) == y.get("base", False))
    return nx.is_isomorphic(a, b, node_match=nm, edge_match=lambda x, y: x["mult"] == y["mult"])


# -- Perron-Frobenius ---------------------------------------------------------

@dataclass(frozen=True)
class PFData:
    norm: mpfr
    weights: Mapping[str, mpfr]
    even_weights: Mapping[str, mpfr] = field(repr=False, default_factory=dict)
    odd_weights: Mapping[str, mpfr] = field(repr=False, default_factory=dict)
    residual: mpfr = mpfr(0)
    iterations: int = 0


def pf_data(graph: BipartiteGraph, basepoint: str, ctx: FieldContext, max_iter: int = 100000) -> PFData:
    """Perron-Frobenius norm and weights by power iteration on G^t G, normalized at ``basepoint``.

    The iteration is seeded with the double precision eigenvector; the
    known closed forms are never used here.
    """
    if not graph.is_connected():
        raise StructuralError(f"{graph.name}: PF data needs a connected graph")
    if basepoint not in graph.even and basepoint not in graph.odd:
        raise StructuralError(f"{graph.name}: basepoint {basepoint!r} not a vertex")
    G = graph.mult.astype(float)
    _, _, vt = np.linalg.svd(G)
    seed = np.abs(vt[0]) + 1e-3
    with ctx.workspace():
        Gm = [[mpfr(int(x)) for x in row] for row in graph.mult]
        ne, no = G.shape
        w = [mpfr(float(x)) for x in seed]
        tol = mpfr(ctx.tol) / 100
        norm = mpfr(0)
        res = mpfr("inf")
        it = 0
        while it < max_iter:
            it += 1
            u = [gmpy2.fsum(Gm[i][j] * w[j] for j in range(no)) for i in range(ne)]
            v = [gmpy2.fsum(Gm[i][j] * u[i] for i in range(ne)) for j in range(no)]
            s = gmpy2.sqrt(gmpy2.fsum(x * x for x in v))
            v = [x / s for x in v]
            norm = gmpy2.sqrt(s)
            u = [gmpy2.fsum(Gm[i][j] * v[j] for j in range(no)) / norm for i in range(ne)]
            r1 = max(abs(gmpy2.fsum(Gm[i][j] * v[j] for j in range(no)) - norm * u[i]) for i in range(ne))
            r2 = max(abs(gmpy2.fsum(Gm[i][j] * u[i] for i in range(ne)) - norm * v[j]) for j in range(no))
            res = max(r1, r2)
            w = v
            if res < tol * norm:
                break
        else:
            raise NumericError(f"{graph.name}: power iteration did not converge, last residual {float(res):.3g}")
        scale = u[graph.even_index[basepoint]] if basepoint in graph.even else v[graph.odd_index[basepoint]]
        ew = {x: u[i] / scale for i, x in enumerate(graph.even)}
        ow = {y: v[j] / scale for j, y in enumerate(graph.odd)}
    weights = dict(ew)
    weights.update(ow)
    return PFData(norm, weights, ew, ow, res, it)


# -- positivity -----------------------------------------------------------------

LEMMA1_NAMES = ("GG^t-1", "GG^tG-2G", "(GG^t)^2-3GG^t+1", "(GG^t)^2G-4GG^tG+3G")


@dataclass(frozen=True)
class Lemma1Report:
    graph: str
    basepoint: str
    minima: Dict[str, int]
    anchored_minima: Dict[str, int]
    passed: bool


def lemma1_matrices(graph: BipartiteGraph) -> Dict[str, np.ndarray]:
    G = graph.mult.astype(object)
    A = G.dot(G.T)
    one = np.eye(len(graph.even), dtype=np.int64).astype(object)
    return {
        LEMMA1_NAMES[0]: A - one,
        LEMMA1_NAMES[1]: A.dot(G) - 2 * G,
        LEMMA1_NAMES[2]: A.dot(A) - 3 * A + one,
        LEMMA1_NAMES[3]: A.dot(A).dot(G) - 4 * A.dot(G) + 3 * G,
    }


def lemma1_positivity(graph: BipartiteGraph, basepoint: str | None = None, tol: float = 0.0) -> Lemma1Report:
    """Entrywise minima of the four Chebyshev-type matrices (exact integers).

    ``anchored_minima`` reads the basepoint row only (the entries that are
    bimodule multiplicities); the pass flag needs the whole matrices >= -tol.
    """
    if not graph.is_connected():
        raise StructuralError(f"{graph.name}: positivity check needs a connected graph")
    basepoint = basepoint or graph.basepoint or graph.even[0]
    if basepoint not in graph.even:
        raise StructuralError(f"{graph.name}: basepoint must be an even vertex")
    row = graph.even_index[basepoint]
    mats = lemma1_matrices(graph)
    minima = {k: int(np.min(v)) for k, v in mats.items()}
    anchored = {k: int(np.min(v[row])) for k, v in mats.items()}
    passed = all(v >= -tol for v in minima.values())
    return Lemma1Report(graph.name, basepoint, minima, anchored, passed)


# -- string algebras --------------------------------------------------------------

@dataclass(frozen=True)
class StringDimProfile:
    length: int
    blocks: Dict[str, int]
    total_dim: int

    def structure(self) -> str:
        parts = ["C" if n == 1 else f"M{n}(C)" for n in sorted(self.blocks.values())]
        return " + ".join(parts) if parts else "0"


def string_dim(graph: BipartiteGraph, basepoint: str, length: int) -> StringDimProfile:
    """Path counts of exactly ``length`` steps from the basepoint, alternating sides."""
    if length < 0:
        raise StructuralError("length must be non-negative")
    if basepoint in graph.even:
        side, vec = 0, np.zeros(len(graph.even), dtype=object)
        vec[graph.even_index[basepoint]] = 1
    elif basepoint in graph.odd:
        side, vec = 1, np.zeros(len(graph.odd), dtype=object)
        vec[graph.odd_index[basepoint]] = 1
    else:
        raise StructuralError(f"{graph.name}: basepoint {basepoint!r} not a vertex")
    G = graph.mult.astype(object)
    for _ in range(length):
        vec = vec.dot(G) if side == 0 else G.dot(vec)
        side ^= 1
    names = graph.even if side == 0 else graph.odd
    blocks = {names[k]: int(c) for k, c in enumerate(vec) if c}
    return StringDimProfile(length, blocks, sum(c * c for c in blocks.values()))


def string_dim_by_powers(graph: BipartiteGraph, basepoint: str, length: int) -> int:
    """Cross-check of ``string_dim(...).total_dim`` through matrix powers."""
    G = graph.mult.astype(object)
    A = G.dot(G.T)
    i = graph.even_index[basepoint]
    if length % 2 == 0:
        return int(np.linalg.matrix_power(A, length)[i, i]) if length else 1
    row = np.linalg.matrix_power(A, (length - 1) // 2).dot(G)[i] if length > 1 else G[i]
    return int(sum(x * x for x in row))
