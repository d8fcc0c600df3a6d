import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conncalc.connection import (apply_gauge, check_biunitary, direct_sum, max_entry_difference, product,
                                 random_gauge, sum_of)
from conncalc.fusion import dimension
from conncalc.gauge import (decompose, equivalent, find_equivalence, intertwiner_space, is_indecomposable,
                            subtract)
from conncalc.io import bundled, load_connection
from conncalc.linalg import PrecisionError, SparseSystem, null_space


def test_intertwiner_dimensions(bundle13):
    a, ad = bundle13.alpha, bundle13.alpha_dual
    assert intertwiner_space(a, a).dimension == 1
    aa = product(a, ad)
    assert intertwiner_space(aa, aa).dimension == 2
    sa = product(bundle13.sigma, a)
    assert intertwiner_space(a, sa).dimension == 0


def test_horizontal_mismatch_gives_zero(bundle13):
    rep = intertwiner_space(bundle13.alpha, bundle13.trivial)
    assert rep.dimension == 0 and rep.note


def test_equivalent_to_itself_is_identity(bundle13):
    a = bundle13.alpha
    u = equivalent(a, a)
    assert u is not None and u.nontrivial_blocks(a.ctx) == 0


def test_equivalence_relation(irr13):
    b = irr13.bundle
    rng = np.random.default_rng(5)
    Y = irr13.Y
    Y1 = apply_gauge(Y, random_gauge(Y.square, Y.ctx, rng))
    Y2 = apply_gauge(Y, random_gauge(Y.square, Y.ctx, rng))
    u01, u12 = equivalent(Y, Y1), equivalent(Y1, Y2)
    assert u01 is not None and u12 is not None
    # symmetry by inversion, transitivity by composition
    assert max_entry_difference(apply_gauge(Y1, u01.inverse()), Y) < 1e-40
    assert max_entry_difference(apply_gauge(Y, u01.compose(u12)), Y2) < 1e-40
    assert equivalent(Y2, Y) is not None
    # pairwise inequivalent standard classes
    s2 = product(b.sigma, b.sigma)
    nn = [b.trivial, b.sigma, s2, Y, product(b.sigma, Y), product(s2, Y)]
    for i in range(len(nn)):
        for j in range(i + 1, len(nn)):
            assert equivalent(nn[i], nn[j]) is None


def test_inequivalent_diagnostics(bundle13):
    res = find_equivalence(bundle13.alpha, product(bundle13.sigma, bundle13.alpha))
    assert res.gauge is None and "graph mismatch" in res.diagnostic
    res = find_equivalence(bundle13.alpha, bundle13.trivial)
    assert res.gauge is None


def test_decompose_alpha_alpha_dual(irr13, ctx13):
    b = irr13.bundle
    dec = decompose(product(b.alpha, b.alpha_dual))
    assert sorted(dec.multiplicities()) == [1, 1] and dec.end_dimension == 2
    x = load_connection(bundled("sqrt13", "x"), ctx13)
    parts = [s.connection for s in dec.summands]
    assert sum(equivalent(p, b.trivial) is not None for p in parts) == 1
    assert sum(equivalent(p, x) is not None for p in parts) == 1
    for p in parts:
        assert check_biunitary(p).passed and is_indecomposable(p)


def test_decompose_double(bundle13):
    a = bundle13.alpha
    dec = decompose(direct_sum(a, a))
    assert dec.multiplicities() == [2] and equivalent(dec.summands[0].connection, a) is not None


def test_decompose_scrambled_sum(irr13):
    b = irr13.bundle
    sa = product(b.sigma, b.alpha)
    c = direct_sum(sa, irr13.G)
    c = apply_gauge(c, random_gauge(c.square, c.ctx, np.random.default_rng(11)))
    dec = decompose(c)
    assert dec.multiplicities() == [1, 1]
    found = [s.connection for s in dec.summands]
    assert any(equivalent(f, sa) is not None for f in found)
    assert any(equivalent(f, irr13.G) is not None for f in found)


def test_summands_reassemble(irr13):
    b = irr13.bundle
    c = sum_of([b.sigma, irr13.Y, irr13.Y])
    c = apply_gauge(c, random_gauge(c.square, c.ctx, np.random.default_rng(2)))
    dec = decompose(c)
    parts = [s.connection for s in dec.summands for _ in range(s.multiplicity)]
    rebuilt = sum_of(parts)
    assert np.array_equal(rebuilt.square.left.mult, c.square.left.mult)
    assert equivalent(rebuilt, c) is not None


def test_is_indecomposable(bundle13, irr17):
    a = bundle13.alpha
    rep = is_indecomposable(a)
    assert rep and rep.end_dimension == 1 and ("V0", "*") in rep.single_edge_vertices
    rep = is_indecomposable(direct_sum(a, product(product(bundle13.sigma, bundle13.sigma), a)))
    assert not rep and rep.end_dimension == 2
    b = irr17.bundle
    ysa = product(irr17.Y, product(b.sigma, b.alpha))
    rep = is_indecomposable(ysa)
    assert rep and ("V0", "*") in rep.single_edge_vertices


def test_subtract(irr13, ctx13):
    b = irr13.bundle
    a = b.alpha
    x = load_connection(bundled("sqrt13", "x"), ctx13)
    assert equivalent(subtract(product(a, b.alpha_dual), b.trivial), x) is not None
    z = subtract(a, a)
    assert z.is_zero
    g = subtract(product(product(a, b.alpha_dual), a), direct_sum(a, a))
    assert equivalent(g, irr13.G) is not None
    assert subtract(a, product(b.sigma, a)) is None


def test_schur_polar_part(irr13):
    """A nonzero intertwiner between equivalent irreducibles is a multiple of a unitary."""
    Y = irr13.Y
    Y1 = apply_gauge(Y, random_gauge(Y.square, Y.ctx, np.random.default_rng(8)))
    hom = intertwiner_space(Y, Y1)
    assert hom.dimension == 1
    x = hom.basis[0]
    with Y.ctx.workspace():
        for u in list(x.left.values()) + list(x.right.values()):
            m = u.dot(np.array([[v.conjugate() for v in row] for row in u.T], dtype=object))
            scale = m[0, 0]
            for i in range(m.shape[0]):
                for j in range(m.shape[1]):
                    assert abs(m[i, j] - (scale if i == j else 0)) < 1e-40 * max(1, abs(scale))


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_decompose_gauge_invariant(seed):
    from conncalc.fusion import load_bundle
    from conncalc.scalar import make_context
    b = load_bundle(make_context("sqrt13"))
    c = direct_sum(b.sigma, direct_sum(b.trivial, b.trivial))
    d = apply_gauge(c, random_gauge(c.square, c.ctx, np.random.default_rng(seed)))
    dims = sorted((s.multiplicity, float(dimension(s.connection))) for s in decompose(d, seed % 7).summands)
    assert dims == [(1, 1.0), (2, 1.0)]


def test_ambiguous_rank_raises(ctx13):
    """Singular values straddling the cut without a clear gap are refused."""
    n = 6
    rows, cols, vals = [], [], []
    svals = [1.0, 1e-3, 1e-7, 1e-12, 1e-20, 1e-30]
    for k, s in enumerate(svals):
        rows.append(k)
        cols.append(k)
        vals.append(ctx13.scalar(s))
    system = SparseSystem.from_lists(n, n, rows, cols, vals)
    with pytest.raises(PrecisionError):
        null_space(system, ctx13)
