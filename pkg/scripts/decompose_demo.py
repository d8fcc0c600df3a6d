"""Decompose alpha.alpha~ and alpha.alpha~.alpha for a bundled case, with a scrambled copy as a sanity check."""

import sys

import numpy as np

from conncalc.connection import apply_gauge, product, random_gauge
from conncalc.fusion import ClassRegistry, dimension, load_bundle
from conncalc.scalar import make_context

case = sys.argv[1] if len(sys.argv) > 1 else "sqrt13"
ctx = make_context(case)
b = load_bundle(ctx)
reg = ClassRegistry(ctx)
reg.register(b.trivial, "1")
reg.register(b.alpha, "alpha")

aa = product(b.alpha, b.alpha_dual, "alpha.alpha~")
aaa = product(aa, b.alpha, "alpha.alpha~.alpha")
scrambled = apply_gauge(aaa, random_gauge(aaa.square, ctx, np.random.default_rng(1)))
for conn in (aa, aaa, scrambled):
    fs = reg.expand(conn)
    print(f"{conn.name}: d = {float(dimension(conn)):.12f}")
    for cid, m in fs.coeffs:
        e = reg[cid]
        print(f"  {m} x {cid:4s} {e.label or '':6s} d = {float(e.dim):.12f}")
print(f"dimension defect over all products: {float(reg.dimension_defect()):.1e}")
