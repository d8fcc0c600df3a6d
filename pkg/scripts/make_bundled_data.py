"""Write the bundled JSON data (graphs, sigma maps, connection tables) from hand transcriptions.

Tables are transcribed in the vertex names of the bundled graphs.  Blank
cells of a connection table are zero; partial fixtures list only the
printed numeric cells.  Run from the repository root:

    python3 scripts/make_bundled_data.py
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "conncalc" / "data"


def dump(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")


def graph(name, even, odd, edges, basepoint=None):
    return {"name": name, "even": even, "odd": odd,
            "edges": [[e[0], e[1], e[2] if len(e) > 2 else 1] for e in edges], "basepoint": basepoint}


def product_minus_identity(g1, g2, name):
    """(g1 g2^t) - 1 as an inline graph; g1, g2 share their even side."""
    ev, od = g1["even"], g1["odd"]
    idx_o = {v: k for k, v in enumerate(od)}
    idx_e = {v: k for k, v in enumerate(ev)}

    def mat(g):
        m = np.zeros((len(ev), len(od)), dtype=int)
        for x, y, k in g["edges"]:
            m[idx_e[x], idx_o[y]] += k
        return m
    m = mat(g1) @ mat(g2).T - np.eye(len(ev), dtype=int)
    assert (m >= 0).all()
    edges = [[ev[i], ev[j], int(m[i, j])] for i in range(len(ev)) for j in range(len(ev)) if m[i, j]]
    return {"name": name, "even": ev, "odd": ev, "edges": edges, "basepoint": None}


def entry(p, q, r, s, value, top=1, left=1, bottom=1, right=1):
    return {"top": [p, q, top], "left": [p, r, left], "bottom": [r, s, bottom], "right": [q, s, right],
            "value": value}


def table(rows):
    """{(p, r, left copy): {(q, s, right copy): value}} -> entries; horizontal edges are simple."""
    out = []
    for (p, r, lc), cols in rows.items():
        for col, val in cols.items():
            q, s, rc = col
            out.append(entry(p, q, r, s, val, left=lc, right=rc))
    return out


def conj(expr: str) -> str:
    return expr.replace("+i*", "#").replace("-i*", "+i*").replace("#", "-i*")


# ============================== sqrt13 ==============================

L1, L2, L3, L4 = ("sqrt(lambda^2-1)", "sqrt(lambda^2-2)", "sqrt(lambda^2-3)", "sqrt(lambda^2-4)")
RHO = "((-sqrt(lambda^2-4)+i*sqrt(8-lambda^2))/2)"
TAU = "((-sqrt(lambda^2-1)-i*sqrt(5-lambda^2))/2)"
RHOB, TAUB = conj(RHO), conj(TAU)
S = TAUB  # gauge number of the symmetric gauge
SB = TAU


def sqrt13():
    d = OUT / "sqrt13"
    even = ["*", "b", "b_s", "b_ss", "*_s", "*_ss"]
    odd = ["a", "c", "a_s", "a_ss"]
    nums = ["1", "2", "3", "4"]
    g0 = graph("G0", even, odd, [("*", "a"), ("b", "a"), ("b", "c"), ("b_s", "c"), ("b_s", "a_s"),
                                 ("b_ss", "c"), ("b_ss", "a_ss"), ("*_s", "a_s"), ("*_ss", "a_ss")], "*")
    g1 = graph("G1", odd, nums, [("a", "1"), ("a", "2"), ("c", "2"), ("c", "3"), ("c", "4"),
                                 ("a_s", "4"), ("a_ss", "4")], "a")
    g2 = dict(g1, name="G2")
    g3 = graph("G3", even, odd, [("*", "a"), ("b", "a"), ("b", "c"), ("b_s", "c"), ("b_s", "a_s"),
                                 ("b_ss", "c"), ("b_ss", "a_ss"), ("*_s", "a_ss"), ("*_ss", "a_s")], "*")
    for g in (g0, g1, g2, g3):
        dump(d / f"{g['name']}.json", g)
    sigma = {"*": "*_s", "*_s": "*_ss", "*_ss": "*", "b": "b_s", "b_s": "b_ss", "b_ss": "b",
             "a": "a_s", "a_s": "a_ss", "a_ss": "a", "c": "c"}
    dump(d / "sigma.json", {"graph": "G0.json", "map": sigma})

    mu_even = {"*": "1", "b": "lambda^2-1", "b_s": "lambda^2-1", "b_ss": "lambda^2-1", "*_s": "1", "*_ss": "1"}
    mu_odd = {"a": "lambda", "c": "lambda^3-2*lambda", "a_s": "lambda", "a_ss": "lambda"}
    mu_num = {"1": "1", "2": "lambda^2-1", "3": "lambda^2-2", "4": "lambda^2"}

    # alpha: upper G0, left G3, lower G1, right G2.  Cells (p, r | q, s).
    alpha = {
        ("*", "a"): {("a", "1"): "1", ("a", "2"): "1"},
        ("b", "a"): {("a", "1"): "1", ("a", "2"): "-1/(lambda^2-1)", ("c", "2"): f"lambda*{L2}/(lambda^2-1)"},
        ("b", "c"): {("a", "2"): f"lambda*{L2}/(lambda^2-1)", ("c", "2"): "1/(lambda^2-1)",
                     ("c", "3"): "1", ("c", "4"): "1"},
        ("b_s", "c"): {("c", "2"): RHOB, ("c", "3"): TAUB, ("c", "4"): f"1/{L1}", ("a_s", "4"): f"{L2}/{L1}"},
        ("b_s", "a_s"): {("c", "4"): f"{L2}/{L1}", ("a_s", "4"): f"-1/{L1}"},
        ("b_ss", "c"): {("c", "2"): RHO, ("c", "3"): TAU, ("c", "4"): f"1/{L1}", ("a_ss", "4"): f"{L2}/{L1}"},
        ("b_ss", "a_ss"): {("c", "4"): f"{L2}/{L1}", ("a_ss", "4"): f"-1/{L1}"},
        ("*_s", "a_ss"): {("a_s", "4"): "1"},
        ("*_ss", "a_s"): {("a_ss", "4"): "1"},
    }
    sq_alpha = {"upper": "G0.json", "lower": "G1.json", "left": "G3.json", "right": "G2.json",
                "mu": {"V0": mu_even, "V1": mu_odd, "V2": mu_num, "V3": mu_odd},
                "base_upper": "*", "base_lower": "a"}
    entries = [entry(p, q, r, s, v) for (p, r), cols in alpha.items() for (q, s), v in cols.items()]
    dump(d / "alpha.json", {"case": "sqrt13", "name": "alpha", "dense": False, "square": sq_alpha,
                            "entries": entries})

    # alpha~: upper G1, left G3^t, lower G0, right G2^t.  Cells (p', r' | q', s').
    dual = {
        ("a", "*"): {("1", "a"): "1/lambda", ("2", "a"): f"{L1}/lambda"},
        ("a", "b"): {("1", "a"): f"{L1}/lambda", ("2", "a"): "-1/lambda", ("2", "c"): "1"},
        ("c", "b"): {("2", "a"): "1", ("2", "c"): f"1/(lambda*(lambda^2-2))", ("3", "c"): "1/sqrt(3)",
                     ("4", "c"): f"{L1}/(lambda^2-2)"},
        ("c", "b_s"): {("2", "c"): f"(lambda^2-1)*{RHO}/(lambda*(lambda^2-2))", ("3", "c"): f"{TAU}/sqrt(3)",
                       ("4", "c"): "1/(lambda^2-2)", ("4", "a_s"): "1"},
        ("c", "b_ss"): {("2", "c"): f"(lambda^2-1)*{RHOB}/(lambda*(lambda^2-2))", ("3", "c"): f"{TAUB}/sqrt(3)",
                        ("4", "c"): "1/(lambda^2-2)", ("4", "a_ss"): "1"},
        ("a_s", "b_s"): {("4", "c"): "1", ("4", "a_s"): "-1"},
        ("a_s", "*_ss"): {("4", "a_ss"): "1"},
        ("a_ss", "b_ss"): {("4", "c"): "1", ("4", "a_ss"): "-1"},
        ("a_ss", "*_s"): {("4", "a_s"): "1"},
    }
    sq_dual = {"upper": "G1.json", "lower": "G0.json", "left": {"transpose": "G3.json"},
               "right": {"transpose": "G2.json"},
               "mu": {"V0": mu_odd, "V1": mu_num, "V2": mu_odd, "V3": mu_even},
               "base_upper": "a", "base_lower": "*"}
    entries = [entry(p, q, r, s, v) for (p, r), cols in dual.items() for (q, s), v in cols.items()]
    dump(d / "alpha_dual.json", {"case": "sqrt13", "name": "alpha~", "dense": False, "square": sq_dual,
                                 "entries": entries})

    # alpha alpha~ - 1: upper = lower = G0, left = G3 G3^t - 1, right = G2 G2^t - 1.
    # Rows are left edges (p, r, copy), columns right edges (q, s, copy); top p-q and bottom r-s are simple.
    xl = product_minus_identity(g3, g3, "X_left")
    xr = product_minus_identity(g2, g2, "X_right")
    g = {
        "bb": ("-1/sqrt(3)", f"-{L2}/lambda"),
        "bsbs": ("(lambda^2-3)/sqrt(3)", "0"),
        "bbs": ("-1/sqrt(3)", f"{L2}/(2*lambda)+i*(lambda^2-3)/(2*lambda)"),
        "bsb": ("-1/sqrt(3)", f"{L2}/(2*lambda)-i*(lambda^2-3)/(2*lambda)"),
        "bsbss": ("-sqrt((lambda^2-4)/3)", f"-(lambda^2-2)/(2*sqrt(3))+i*{L3}/2"),
        "bssbs": ("-sqrt((lambda^2-4)/3)", f"-(lambda^2-2)/(2*sqrt(3))-i*{L3}/2"),
    }
    g["bssbss"] = g["bsbs"]
    g["bssb"] = g["bbs"]
    g["bbss"] = g["bsb"]
    AA, CA, AC = ("a", "a", 1), ("c", "a", 1), ("a", "c", 1)
    CC2, CC3 = ("c", "c", 1), ("c", "c", 2)
    AsC, AssC, CAs, AssAs, CAss, AsAss = (("a_s", "c", 1), ("a_ss", "c", 1), ("c", "a_s", 1),
                                          ("a_ss", "a_s", 1), ("c", "a_ss", 1), ("a_s", "a_ss", 1))

    def with_g(cols, key):
        cols = dict(cols)
        cols[CC2], cols[CC3] = g[key]
        return cols
    printed = {
        ("*", "b", 1): {AA: "1"},
        ("b", "*", 1): {AA: f"1/{L1}", CA: f"{L2}/{L1}"},
        ("b", "b", 1): with_g({AA: f"-{L2}/{L1}", CA: f"1/{L1}", AC: f"{L4}/{L2}"}, "bb"),
        ("b", "b_s", 1): with_g({AC: f"{RHOB}/{L2}", CAs: "1"}, "bbs"),
        ("b", "b_ss", 1): with_g({AC: f"{RHO}/{L2}", CAss: "1"}, "bbss"),
        ("b_s", "b", 1): with_g({CA: RHO, AsC: f"1/{L2}"}, "bsb"),
        ("b_s", "b_s", 1): with_g({AsC: f"1/{L2}", CAs: "1"}, "bsbs"),
        ("b_s", "b_ss", 1): with_g({AsC: f"{L4}/{L2}", CAss: f"1/{L1}", AsAss: f"{L2}/{L1}"}, "bsbss"),
        ("b_s", "*_ss", 1): {CAss: f"{L2}/{L1}", AsAss: f"-1/{L1}"},
        ("b_ss", "b", 1): with_g({CA: RHOB, AssC: f"1/{L2}"}, "bssb"),
        ("b_ss", "b_s", 1): with_g({AssC: f"{L4}/{L2}", CAs: f"1/{L1}", AssAs: f"{L2}/{L1}"}, "bssbs"),
        ("b_ss", "b_ss", 1): with_g({AssC: f"1/{L2}", CAss: "1"}, "bssbss"),
        ("b_ss", "*_s", 1): {CAs: f"{L2}/{L1}", AssAs: f"-1/{L1}"},
        ("*_s", "b_ss", 1): {AsC: "1", AsAss: "-1"},
        ("*_ss", "b_s", 1): {AssC: "1", AssAs: "-1"},
    }
    # Two corrections make the printed table biunitary and equal (up to gauge) to the computed
    # alpha alpha~ - 1 of the bundled alpha:
    #  * the (*b, ac) cell is blank in print, but it is a 1x1 unitarity block; the symmetric-gauge
    #    table lists it as 1 with unit gauge numbers;
    #  * the four rho-valued cells in columns ac / ca are conjugated: as printed, the (b, c) block
    #    has off-diagonal Gram entries of modulus 0.459 against the printed g-vectors.
    x_rows = {k: dict(v) for k, v in printed.items()}
    x_rows[("*", "b", 1)][AC] = "1"
    x_rows[("b", "b_s", 1)][AC] = f"{RHO}/{L2}"
    x_rows[("b", "b_ss", 1)][AC] = f"{RHOB}/{L2}"
    x_rows[("b_s", "b", 1)][CA] = RHOB
    x_rows[("b_ss", "b", 1)][CA] = RHO
    sq_x = {"upper": "G0.json", "lower": "G0.json", "left": xl, "right": xr,
            "mu": {"V0": mu_even, "V1": mu_odd, "V2": mu_odd, "V3": mu_even},
            "base_upper": "*", "base_lower": "*"}
    dump(d / "x.json", {"case": "sqrt13", "name": "X", "dense": False, "square": sq_x,
                        "entries": table(x_rows)})
    dump(d / "x_printed.json", {"case": "sqrt13", "name": "X (as printed)", "partial": True, "square": sq_x,
                                "entries": table(printed)})

    # symmetric gauge: row numbers multiply rows, column numbers multiply columns
    rownum = {("*", "b"): "1", ("b", "*"): "1", ("b", "b"): "1", ("b", "b_s"): f"{S}^2",
              ("b", "b_ss"): f"{SB}^2", ("b_s", "b"): f"{SB}^2", ("b_s", "b_s"): "1", ("b_s", "b_ss"): SB,
              ("b_s", "*_ss"): SB, ("b_ss", "b"): f"{S}^2", ("b_ss", "b_s"): S, ("b_ss", "b_ss"): "1",
              ("b_ss", "*_s"): S, ("*_s", "b_ss"): SB, ("*_ss", "b_s"): S}
    colnum = {("a", "a"): "1", ("c", "a"): "1", ("a", "c"): "1", ("a_s", "c"): S, ("a_ss", "c"): SB,
              ("c", "a_s"): SB, ("a_ss", "a_s"): f"-{SB}", ("c", "a_ss"): S, ("a_s", "a_ss"): f"-{S}"}
    dump(d / "x_symmetric_gauge.json", {
        "case": "sqrt13",
        # apply_gauge computes u_S^* W u_T, so the left block is the conjugate row number
        "left": [{"p": p, "r": r, "matrix": [[conj(v)]]} for (p, r), v in rownum.items()],
        "right": [{"q": q, "s": s, "matrix": [[v]]} for (q, s), v in colnum.items()],
    })
    x6_rows = {
        ("*", "b", 1): {AA: "1", AC: "1"},
        ("b", "*", 1): {AA: f"1/{L1}", CA: f"{L2}/{L1}"},
        ("b", "b", 1): {AA: f"-{L2}/{L1}", CA: f"1/{L1}", AC: f"{L4}/{L2}"},
        ("b", "b_s", 1): {AC: f"{SB}/{L2}", CAs: S},
        ("b", "b_ss", 1): {AC: f"{S}/{L2}", CAss: SB},
        ("b_s", "b", 1): {CA: S, AsC: f"{SB}/{L2}"},
        ("b_s", "b_s", 1): {AsC: f"{S}/{L2}", CAs: SB},
        ("b_s", "b_ss", 1): {AsC: f"{L4}/{L2}", CAss: f"1/{L1}", AsAss: f"-{L2}/{L1}"},
        ("b_s", "*_ss", 1): {CAss: f"{L2}/{L1}", AsAss: f"1/{L1}"},
        ("b_ss", "b", 1): {CA: SB, AssC: f"{S}/{L2}"},
        ("b_ss", "b_s", 1): {AssC: f"{L4}/{L2}", CAs: f"1/{L1}", AssAs: f"-{L2}/{L1}"},
        ("b_ss", "b_ss", 1): {AssC: f"{SB}/{L2}", CAss: S},
        ("b_ss", "*_s", 1): {CAs: f"{L2}/{L1}", AssAs: f"1/{L1}"},
        ("*_s", "b_ss", 1): {AsC: "1", AsAss: "1"},
        ("*_ss", "b_s", 1): {AssC: "1", AssAs: "1"},
    }
    dump(d / "x_symmetric.json", {"case": "sqrt13", "name": "X (symmetric gauge, printed cells)",
                                  "partial": True, "square": sq_x, "entries": table(x6_rows)})

    # orthonormal-basis lemma vectors and the expansions they produce
    dump(d / "lemma_vectors.json", {
        "u1": ["1/sqrt(3)", "1/lambda", f"1/{L2}"],
        "u2": [f"{L2}/3", f"{L2}/(lambda*sqrt(3))", "-(lambda^2-3)/sqrt(3)"],
        "u3": ["(lambda^2-2)/(lambda*sqrt(3))", "-(lambda^2-2)/3", "0"],
        # f_xy keyed like g_vectors; f_{b_ss b_s} is printed with conjugated rho, tau,
        # which contradicts its own stated expansion, so the unconjugated values are used
        "f": {
            "bbs": [f"{RHO}/(lambda*(lambda^2-2))", f"{TAU}/sqrt(3)", "1/(lambda^2-2)"],
            "bbss": [f"{RHOB}/(lambda*(lambda^2-2))", f"{TAUB}/sqrt(3)", "1/(lambda^2-2)"],
            "bsbss": [f"(lambda^2-1)*{RHOB}^2/(lambda*(lambda^2-2))", f"{TAUB}^2/sqrt(3)",
                      f"1/((lambda^2-2)*{L1})"],
            "bssbs": [f"(lambda^2-1)*{RHO}^2/(lambda*(lambda^2-2))", f"{TAU}^2/sqrt(3)",
                      f"1/((lambda^2-2)*{L1})"],
        },
        "g_vectors": {k: list(v) for k, v in g.items()},
        # printed u(c/c)_2; the column inner product is nonzero, so it is not unitary as printed
        "u_cc_printed": [["-1/2-i*(lambda^2-2)*sqrt(lambda^2-2)/6", "(lambda^2-2)/(lambda*sqrt(3))"],
                         ["i*(lambda^2-2)/(lambda*sqrt(3))", "-1/2+i*(lambda^2-2)*sqrt(lambda^2-2)/6"]],
        # unitary repair: lower-left entry -k instead of i*k (trace -1, det 1)
        "u_cc": [["-1/2-i*(lambda^2-2)*sqrt(lambda^2-2)/6", "(lambda^2-2)/(lambda*sqrt(3))"],
                 ["-(lambda^2-2)/(lambda*sqrt(3))", "-1/2+i*(lambda^2-2)*sqrt(lambda^2-2)/6"]],
    })


# ============================== sqrt17 ==============================

B1, B2, BM1, GAM = "sqrt(beta^2-1)", "sqrt(beta^2-2)", "sqrt(beta^2+1)", "sqrt(2*beta^2-1)"
B1P, B2P, BM1P, GAMP = "(beta^2-1)", "(beta^2-2)", "(beta^2+1)", "(2*beta^2-1)"


def sqrt17():
    d = OUT / "sqrt17"
    even = ["*", "b", "d", "f", "h", "h~", "d~", "b~", "*~"]
    odd = ["a", "c", "e", "g", "c~", "a~"]
    upper_odd = ["A", "C", "E", "G", "C~", "A~"]
    nums = ["1", "2", "3", "4", "5", "6"]
    g0 = graph("G0", even, odd, [("*", "a"), ("b", "a"), ("b", "c"), ("d", "c"), ("d", "e"), ("f", "e"),
                                 ("f", "g"), ("h", "g"), ("h~", "g"), ("d~", "e"), ("d~", "c~"), ("b~", "c~"),
                                 ("b~", "a~"), ("*~", "a~")], "*")
    g1_edges = [("a", "1"), ("a", "2"), ("c", "2"), ("c", "3"), ("e", "3"), ("e", "4"), ("e", "5"),
                ("c~", "5"), ("g", "5"), ("g", "6"), ("a~", "6")]
    g1 = graph("G1", odd, nums, g1_edges, "a")
    g2 = graph("G2", upper_odd, nums, [(x.upper(), y) for x, y in g1_edges], "A")
    g3 = graph("G3", even, upper_odd, [("*", "A"), ("b", "A"), ("b", "C"), ("d", "C"), ("d", "E"), ("f", "E"),
                                       ("f", "G"), ("h", "G"), ("h~", "C~"), ("h~", "A~"), ("d~", "E"),
                                       ("d~", "C~"), ("b~", "G"), ("*~", "A~")], "*")
    for g in (g0, g1, g2, g3):
        dump(d / f"{g['name']}.json", g)
    sigma = {"*": "*~", "*~": "*", "b": "b~", "b~": "b", "d": "d~", "d~": "d", "h": "h~", "h~": "h",
             "f": "f", "a": "a~", "a~": "a", "c": "c~", "c~": "c", "e": "e", "g": "g"}
    dump(d / "sigma.json", {"graph": "G0.json", "map": sigma})

    w_even = {"*": "1", "b": "beta^2-1", "d": "2*beta^2-1", "f": "2*beta^2", "h": "beta^2-1"}
    mu_even = dict(w_even)
    mu_even.update({"h~": "beta^2-1", "d~": "2*beta^2-1", "b~": "beta^2-1", "*~": "1"})
    mu_odd = {"a": "beta", "c": "beta^3-2*beta", "e": "beta^3+beta", "g": "beta^3-beta",
              "c~": "beta^3-2*beta", "a~": "beta"}
    mu_upper = {k.upper(): v for k, v in mu_odd.items()}
    mu_num = {"1": "1", "2": "beta^2-1", "3": "2*beta^2-1", "4": "beta^2+1", "5": "3*beta^2-2", "6": "beta^2"}

    # alpha: upper G0, left G3, lower G2 (capital names), right G1.  Cells (p, r | q, s).
    alpha = {
        ("*", "A"): {("a", "1"): "1", ("a", "2"): "1"},
        ("b", "A"): {("a", "1"): "1", ("a", "2"): f"-1/{B1P}", ("c", "2"): f"beta*{B2}/{B1P}"},
        ("b", "C"): {("a", "2"): f"beta*{B2}/{B1P}", ("c", "2"): f"1/{B1P}", ("c", "3"): "1"},
        ("d", "C"): {("c", "2"): "1", ("c", "3"): f"-1/{GAMP}", ("e", "3"): f"2*beta*{B1}/{GAMP}"},
        ("d", "E"): {("c", "3"): f"2*beta*{B1}/{GAMP}", ("e", "3"): f"1/{GAMP}", ("e", "4"): "1", ("e", "5"): "1"},
        ("f", "E"): {("e", "3"): "1", ("e", "4"): "-1", ("e", "5"): f"1/{B2P}", ("g", "5"): f"{BM1}/{B2P}"},
        ("f", "G"): {("e", "5"): f"{BM1}/{B2P}", ("g", "5"): f"-1/{B2P}", ("g", "6"): "1"},
        ("h", "G"): {("g", "5"): "1", ("g", "6"): "1"},
        ("h~", "C~"): {("g", "5"): "1"},
        ("h~", "A~"): {("g", "6"): "1"},
        ("d~", "E"): {("e", "3"): "1", ("e", "4"): "1", ("e", "5"): f"-{B2}/{GAM}", ("c~", "5"): f"{BM1}/{GAM}"},
        ("d~", "C~"): {("e", "5"): f"{BM1}/{GAM}", ("c~", "5"): f"{B2}/{GAM}"},
        ("b~", "G"): {("c~", "5"): "1", ("a~", "6"): "1"},
        ("*~", "A~"): {("a~", "6"): "1"},
    }
    sq_alpha = {"upper": "G0.json", "lower": "G2.json", "left": "G3.json", "right": "G1.json",
                "mu": {"V0": mu_even, "V1": mu_odd, "V2": mu_num, "V3": mu_upper},
                "base_upper": "*", "base_lower": "A"}
    entries = [entry(p, q, r, s, v) for (p, r), cols in alpha.items() for (q, s), v in cols.items()]
    dump(d / "alpha.json", {"case": "sqrt17", "name": "alpha", "dense": False, "square": sq_alpha,
                            "entries": entries})

    # alpha~: upper G2, left G3^t, lower G0, right G1^t.  Cells (p', r' | q', s').
    dual = {
        ("A", "*"): {("1", "a"): "1/beta", ("2", "a"): f"{B1}/beta"},
        ("A", "b"): {("1", "a"): f"{B1}/beta", ("2", "a"): "-1/beta", ("2", "c"): "1"},
        ("C", "b"): {("2", "a"): "1", ("2", "c"): f"1/(beta*{B2P})", ("3", "c"): f"{B1P}/(sqrt(2)*{B2P})"},
        ("C", "d"): {("2", "c"): f"{B1P}/(sqrt(2)*{B2P})", ("3", "c"): f"-1/(beta*{B2P})", ("3", "e"): "1"},
        ("E", "d"): {("3", "c"): "1", ("3", "e"): f"1/(beta*{BM1P})", ("4", "e"): f"{B1}/(sqrt(2)*{BM1})",
                     ("5", "e"): f"beta^2/{BM1P}"},
        ("E", "f"): {("3", "e"): f"beta*{B1}/{BM1P}", ("4", "e"): f"-sqrt(2)/{BM1}", ("5", "e"): f"{B1}/{BM1P}",
                     ("5", "g"): "1"},
        ("E", "d~"): {("3", "e"): f"{GAMP}/(beta*{BM1P})", ("4", "e"): f"{B1}/(sqrt(2)*{BM1})",
                      ("5", "e"): f"-{B2P}/{BM1P}", ("5", "c~"): "1"},
        ("C~", "d~"): {("5", "e"): "1", ("5", "c~"): "1"},
        ("C~", "h~"): {("5", "g"): "1"},
        ("G", "f"): {("5", "e"): "1", ("5", "g"): f"-1/{B1}", ("6", "g"): f"{B2}/{B1}"},
        ("G", "h"): {("5", "g"): f"{B2}/{B1}", ("6", "g"): f"1/{B1}"},
        ("G", "b~"): {("5", "c~"): "1", ("6", "a~"): "1"},
        ("A~", "h~"): {("6", "g"): "1"},
        ("A~", "*~"): {("6", "a~"): "1"},
    }
    sq_dual = {"upper": "G2.json", "lower": "G0.json", "left": {"transpose": "G3.json"},
               "right": {"transpose": "G1.json"},
               "mu": {"V0": mu_upper, "V1": mu_num, "V2": mu_odd, "V3": mu_even},
               "base_upper": "A", "base_lower": "*"}
    entries = [entry(p, q, r, s, v) for (p, r), cols in dual.items() for (q, s), v in cols.items()]
    dump(d / "alpha_dual.json", {"case": "sqrt17", "name": "alpha~", "dense": False, "square": sq_dual,
                                 "entries": entries})

    # alpha alpha~ - 1, printed numeric cells only (the symbolic unknowns are left out)
    xl = product_minus_identity(g3, g3, "X_left")
    xr = product_minus_identity(g1, g1, "X_right")
    r = "sqrt((beta^2+1)/(2*beta^2-1))"
    rows = {
        ("*", "b"): {("a", "a"): "1", ("a", "c"): "1"},
        ("b", "*"): {("a", "a"): f"1/{B1}", ("c", "a"): f"{B2}/{B1}"},
        ("b", "b"): {("a", "a"): f"-{B2}/{B1}", ("c", "a"): f"1/{B1}", ("a", "c"): "1/(sqrt(2)*beta)",
                     ("c", "c"): f"-{GAM}/(sqrt(2)*beta)"},
        ("b", "d"): {("a", "c"): "1/(sqrt(2)*beta)", ("c", "c"): f"-{GAM}/(sqrt(2)*beta)", ("c", "e"): "1"},
        ("d", "b"): {("c", "a"): "1", ("c", "c"): "1/beta^2", ("e", "c"): "sqrt(beta^4-1)/beta^2"},
        ("d", "d"): {("c", "c"): "-sqrt(beta^4-1)/beta^2", ("e", "c"): "1/beta^2",
                     ("c", "e"): f"{B2}/(beta^2*{BM1})"},
        ("d", "f"): {("c", "e"): f"{B2P}/{B1P}", ("e", "g"): "1"},
        ("d", "d~"): {("c", "e"): f"2*{B1}/{BM1P}", ("e", "c~"): "1"},
        ("f", "d"): {("e", "c"): "1", ("g", "e"): f"sqrt(3*beta^2-1)/(2*{BM1})"},
        ("f", "f"): {("g", "e"): "-1/2", ("e", "g"): f"-{B1}/(sqrt(2)*beta)", ("g", "g"): f"{BM1}/(sqrt(2)*beta)"},
        ("f", "h"): {("e", "g"): f"{BM1}/(sqrt(2)*beta)", ("g", "g"): f"{B1}/(sqrt(2)*beta)"},
        ("f", "d~"): {("g", "e"): f"-1/{BM1}", ("e", "c~"): f"1/{B2P}", ("g", "c~"): f"{BM1}/{B2P}"},
        ("f", "b~"): {("e", "c~"): f"{BM1}/{B2P}", ("g", "c~"): f"-1/{B2P}", ("g", "a~"): "1"},
        ("h", "f"): {("g", "e"): "1", ("g", "g"): "1"},
        ("h", "b~"): {("g", "c~"): "1", ("g", "a~"): "1"},
        ("h~", "h~"): {("g", "g"): "1"},
        ("h~", "d~"): {("g", "e"): "1", ("g", "c~"): "1"},
        ("h~", "*~"): {("g", "a~"): "1"},
        ("d~", "d"): {("e", "c"): "1", ("c~", "e"): f"{B2}/{BM1}"},
        ("d~", "f"): {("c~", "e"): f"1/{B1P}", ("e", "g"): f"-{r}", ("c~", "g"): r},
        ("d~", "h~"): {("e", "g"): r, ("c~", "g"): f"-{r}"},
        ("d~", "d~"): {("c~", "e"): f"{B2}/{BM1}", ("e", "c~"): "1"},
        ("b~", "f"): {("c~", "e"): "1", ("c~", "g"): f"-1/{B1}", ("a~", "g"): f"{B2}/{B1}"},
        ("b~", "h"): {("c~", "g"): f"{B2}/{B1}", ("a~", "g"): f"1/{B1}"},
        ("*~", "h~"): {("a~", "g"): "1"},
    }
    entries = []
    for (p, rr), cols in rows.items():
        for (q, s), v in cols.items():
            entries.append(entry(p, q, rr, s, v))
    sq_x = {"upper": "G0.json", "lower": "G0.json", "left": xl, "right": xr,
            "mu": {"V0": mu_even, "V1": mu_odd, "V2": mu_odd, "V3": mu_even},
            "base_upper": "*", "base_lower": "*"}
    dump(d / "x_printed.json", {"case": "sqrt17", "name": "X (printed numeric cells)", "partial": True,
                                "square": sq_x, "entries": entries})


if __name__ == "__main__":
    sqrt13()
    sqrt17()
    print(f"wrote {OUT}")
