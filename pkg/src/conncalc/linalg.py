"""Mixed-precision linear algebra.

Structure (ranks, null spaces) is discovered in double precision and the
answers are then polished at the working precision by iterative
refinement: the residual is evaluated with gmpy2 and the correction solved
with the double precision pseudo-inverse.  Small Hermitian eigenproblems go
through mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import gmpy2
import mpmath
import numpy as np
import scipy.sparse as sp
from gmpy2 import mpc, mpfr

from .graphs import NumericError
from .scalar import FieldContext

RANK_GAP = 1e6


class PrecisionError(NumericError):
    """A rank decision fell inside the ambiguity band; raise the precision."""


def to_mp(a: np.ndarray, ctx: FieldContext) -> np.ndarray:
    with ctx.workspace():
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            out[idx] = mpc(complex(x))
        return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.array(a, dtype=complex).reshape(a.shape)


def vdot(x: np.ndarray, y: np.ndarray) -> mpc:
    """<x, y> = sum conj(x) y."""
    return sum((xi.conjugate() * yi for xi, yi in zip(x, y)), mpc(0))


def norm(x: np.ndarray) -> mpfr:
    return gmpy2.sqrt(gmpy2.fsum(gmpy2.norm(v) for v in x))


def gram_schmidt(vectors: Sequence[np.ndarray], ctx: FieldContext) -> List[np.ndarray]:
    """Modified Gram-Schmidt, applied twice for stability."""
    with ctx.workspace():
        out: List[np.ndarray] = []
        for v in vectors:
            w = v.copy()
            for _ in range(2):
                for u in out:
                    w = w - vdot(u, w) * u
            nrm = norm(w)
            if nrm == 0:
                raise NumericError("Gram-Schmidt on dependent vectors")
            out.append(w / nrm)
        return out


def to_mp_unitary(q: np.ndarray, ctx: FieldContext) -> np.ndarray:
    """A double precision unitary, re-orthonormalized at the working precision."""
    cols = gram_schmidt([to_mp(q[:, k], ctx) for k in range(q.shape[1])], ctx)
    out = np.empty(q.shape, dtype=object)
    for k, c in enumerate(cols):
        out[:, k] = c
    return out


def _to_mpmath(x, dps: int):
    x = mpc(x)
    def conv(r):
        m, e = r.as_mantissa_exp()
        return mpmath.mp.make_mpf(mpmath.libmp.from_man_exp(int(m), int(e)))
    return mpmath.mpc(conv(x.real), conv(x.imag))


def _from_mpmath(z) -> mpc:
    z = mpmath.mpc(z)
    def conv(r):
        sign, man, exp, bc = r._mpf_
        if not man:
            return mpfr(0)
        v = gmpy2.mul_2exp(mpfr(man), exp)
        return -v if sign else v
    return mpc(conv(z.real), conv(z.imag))


def hermitian_eig(H: np.ndarray, ctx: FieldContext) -> Tuple[List[mpfr], np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a small Hermitian matrix."""
    n = H.shape[0]
    with mpmath.workdps(ctx.precision + 15):
        M = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                M[i, j] = _to_mpmath(H[i, j], ctx.precision)
        M = (M + M.H) / 2
        E, Q = mpmath.eighe(M)
        with ctx.workspace():
            vals = [_from_mpmath(E[k]).real for k in range(n)]
            vecs = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    vecs[i, j] = _from_mpmath(Q[i, j])
    return vals, vecs


def inverse_sqrt_psd(H: np.ndarray, ctx: FieldContext) -> np.ndarray:
    vals, vecs = hermitian_eig(H, ctx)
    with ctx.workspace():
        if min(vals) <= ctx.tol:
            raise NumericError("inverse square root of a singular matrix")
        d = np.array([1 / gmpy2.sqrt(v) for v in vals], dtype=object)
        return (vecs * d).dot(conj_t(vecs))


def entry_bits(*arrays: np.ndarray) -> int:
    """Largest working precision among the mpc entries (53 if there are none)."""
    return max((x.precision[0] for a in arrays for x in a.flat if isinstance(x, mpc)), default=53)


def conj_t(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose.  Runs at the entries' own precision, so it is safe outside a workspace."""
    out = np.empty((m.shape[1], m.shape[0]), dtype=object)
    with gmpy2.context(precision=entry_bits(m)):
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                out[j, i] = mpc(m[i, j]).conjugate()
    return out


def range_basis(P: np.ndarray, ctx: FieldContext) -> np.ndarray:
    """Orthonormal basis (as columns) of the range of a Hermitian projection.

    Pivoted deflation: the column with the largest diagonal entry,
    normalized, is a unit vector in the range; subtract its projector and
    repeat rank = round(trace) times.
    """
    with ctx.workspace():
        n = P.shape[0]
        tr = gmpy2.fsum(P[k, k].real for k in range(n))
        rank = int(round(float(tr)))
        if abs(tr - rank) > 1e-6:
            raise NumericError(f"projection trace {float(tr):.6g} is not an integer")
        R = P.copy()
        cols = []
        for _ in range(rank):
            k = max(range(n), key=lambda c: R[c, c].real)
            piv = R[k, k].real
            if piv <= 0:
                raise NumericError("projection deflation broke down")
            v = R[:, k] / gmpy2.sqrt(piv)
            cols.append(v)
            R = R - np.outer(v, np.array([x.conjugate() for x in v], dtype=object))
        out = np.empty((n, rank), dtype=object)
        for k, v in enumerate(cols):
            out[:, k] = v
        return out


# -- sparse homogeneous systems ---------------------------------------------------

@dataclass
class SparseSystem:
    """A x = 0 with A given by coordinates; ``vals`` are working-precision scalars."""
    nrows: int
    ncols: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def from_lists(cls, nrows: int, ncols: int, rows: List[int], cols: List[int], vals: List[mpc]):
        order = np.argsort(np.asarray(rows, dtype=np.int64), kind="stable")
        r = np.asarray(rows, dtype=np.int64)[order]
        c = np.asarray(cols, dtype=np.int64)[order]
        v = np.empty(len(vals), dtype=object)
        v[:] = vals
        return cls(nrows, ncols, r, c, v[order])

    def float_matrix(self) -> sp.csr_matrix:
        return sp.csr_matrix((np.array(self.vals, dtype=complex), (self.rows, self.cols)),
                             shape=(self.nrows, self.ncols))

    def apply(self, x: np.ndarray) -> np.ndarray:
        """A x at the working precision (rows without entries are omitted)."""
        if len(self.vals) == 0:
            return np.empty(0, dtype=object)
        prods = self.vals * x[self.cols]
        starts = np.flatnonzero(np.r_[True, self.rows[1:] != self.rows[:-1]])
        return np.add.reduceat(prods, starts)

    def touched_rows(self) -> np.ndarray:
        if len(self.rows) == 0:
            return self.rows
        starts = np.flatnonzero(np.r_[True, self.rows[1:] != self.rows[:-1]])
        return self.rows[starts]


@dataclass
class NullSpace:
    basis: List[np.ndarray]          # orthonormal, working precision
    singular_values: np.ndarray      # double precision, descending
    gap: float
    residual: mpfr


def null_space(system: SparseSystem, ctx: FieldContext, max_refine: int = 12) -> NullSpace:
    n = system.ncols
    if n == 0:
        return NullSpace([], np.zeros(0), float("inf"), mpfr(0))
    A = system.float_matrix()
    if A.shape[0] * n <= 1_000_000:
        s, V = _svd_dense(A.toarray(), n)
        smax = s[0] if len(s) and s[0] > 0 else 1.0
        rel = s / smax
        dropped = rel < 1e-9
        drop_max = max(rel[dropped].max() if dropped.any() else 0.0, 1e-14)
    else:
        # normal equations resolve only s >~ 1e-8 smax; the dropped side is
        # re-measured directly as the singular values of A V_null
        s, V = _svd_normal(A, n)
        smax = s[0] if len(s) and s[0] > 0 else 1.0
        rel = s / smax
        dropped = rel < 1e-6
        if dropped.any():
            direct = np.linalg.svd(A.dot(V[:, dropped]), compute_uv=False) / smax
            s = s.copy()
            s[dropped] = np.sort(np.r_[direct, np.zeros(int(dropped.sum()) - len(direct))])[::-1]
            rel = s / smax
        drop_max = max(rel[dropped].max() if dropped.any() else 0.0, 1e-14)
    kept_min = rel[~dropped].min() if (~dropped).any() else float("inf")
    gap = kept_min / drop_max
    if (~dropped).any() and gap < RANK_GAP:
        raise PrecisionError(f"rank decision ambiguous: gap {gap:.3g} < {RANK_GAP:g}")
    k = int(dropped.sum())
    if k == 0:
        return NullSpace([], s, gap, mpfr(0))
    Vn = V[:, dropped]
    Vr = V[:, ~dropped]
    sr = s[~dropped]
    AH = A.conj().T.tocsr()

    def correction(res_float):
        t = AH.dot(res_float)
        return Vr.dot((Vr.conj().T.dot(t)) / sr ** 2)

    with ctx.workspace():
        tol = mpfr(ctx.tol)
        basis = []
        worst = mpfr(0)
        touched = system.touched_rows()
        for col in range(k):
            z = to_mp(Vn[:, col], ctx)
            res = mpfr("inf")
            for _ in range(max_refine):
                r = system.apply(z)
                res = max((abs(x) for x in r), default=mpfr(0))
                if res < tol * 1e-6 or ctx.fast:
                    break
                rf = np.zeros(system.nrows, dtype=complex)
                rf[touched] = np.array(r, dtype=complex)
                dz = correction(rf)
                z = z - to_mp(dz, ctx)
            basis.append(z)
        basis = gram_schmidt(basis, ctx)
        for z in basis:
            r = system.apply(z)
            worst = max(worst, max((abs(x) for x in r), default=mpfr(0)))
        if worst > tol:
            raise PrecisionError(f"null vectors did not refine below tol (residual {float(worst):.3g})")
    return NullSpace(basis, s, gap, worst)


def _svd_dense(A: np.ndarray, n: int):
    if A.shape[0] == 0:
        return np.zeros(n), np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    s_full = np.zeros(n)
    s_full[:len(s)] = s
    return s_full, vh.conj().T


def _svd_normal(A: sp.csr_matrix, n: int):
    G = (A.conj().T @ A).toarray()
    w, V = np.linalg.eigh(G)
    w = np.clip(w, 0, None)
    order = np.argsort(w)[::-1]
    return np.sqrt(w[order]), V[:, order]
