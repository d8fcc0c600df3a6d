import json

import numpy as np
import pytest

from conncalc.connection import apply_gauge, max_entry_difference, random_gauge
from conncalc.graphs import isomorphic
from conncalc.io import (InputError, bundled, gauge_from_dict, gauge_to_dict, load_connection, load_fixture,
                         load_gauge, load_graph, save_connection, save_gauge, save_graph)


def test_graph_round_trip(tmp_path):
    g = load_graph(bundled("sqrt17", "G0"))
    save_graph(g, tmp_path / "g.json")
    h = load_graph(tmp_path / "g.json")
    assert h.even == g.even and h.odd == g.odd and h.edges() == g.edges()
    assert isomorphic(g, h)


@pytest.mark.parametrize("dense", [True, False])
def test_connection_round_trip(tmp_path, bundle13, dense):
    a = bundle13.alpha
    save_connection(a, tmp_path / "a.json", dense=dense)
    b = load_connection(tmp_path / "a.json", bundle13.ctx)
    assert b.name == a.name
    assert max_entry_difference(a, b) < 1e-55


def test_gauge_round_trip(tmp_path, bundle13):
    ctx = bundle13.ctx
    g = random_gauge(bundle13.alpha.square, ctx, np.random.default_rng(3))
    save_gauge(g, tmp_path / "u.json", ctx)
    h = load_gauge(tmp_path / "u.json", ctx)
    a1 = apply_gauge(bundle13.alpha, g)
    a2 = apply_gauge(bundle13.alpha, h)
    assert max_entry_difference(a1, a2) < 1e-55
    assert gauge_to_dict(h, ctx) == gauge_to_dict(g, ctx)


def test_case_mismatch(ctx17):
    with pytest.raises(InputError):
        load_connection(bundled("sqrt13", "alpha"), ctx17)


def test_partial_fixture_is_not_a_connection(ctx13):
    with pytest.raises(InputError):
        load_connection(bundled("sqrt13", "x_printed"), ctx13)
    sq, entries = load_fixture(bundled("sqrt13", "x_printed"), ctx13)
    assert entries


def test_malformed_files(tmp_path, ctx13):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InputError):
        load_connection(p, ctx13)
    with pytest.raises(InputError):
        load_connection(tmp_path / "missing.json", ctx13)
    with pytest.raises(InputError):
        gauge_from_dict({"left": [{"p": "*", "matrix": [["1"]]}]}, ctx13)
    with pytest.raises(InputError):
        gauge_from_dict({"left": [{"p": "*", "r": "1", "matrix": [["1", "0"], ["1"]]}]}, ctx13)


def test_duplicate_entry(tmp_path, bundle13):
    save_connection(bundle13.alpha, tmp_path / "a.json", dense=False)
    d = json.loads((tmp_path / "a.json").read_text())
    d["entries"].append(d["entries"][0])
    (tmp_path / "a.json").write_text(json.dumps(d))
    with pytest.raises(InputError):
        load_connection(tmp_path / "a.json", bundle13.ctx)
