import json
import subprocess
import sys

import pytest

from diacats import cli
from diacats import diagram as dg
from diacats import fincat as fc
from diacats import fixtures as fx
from diacats import jsonio as io
from diacats import localizer as lc
from diacats import simplicial as sp
from diacats.errors import SchemaError


def roundtrip_fincat(c):
    return io.decode_fincat(json.loads(io.dumps(io.encode_fincat(c))))


def test_fincat_roundtrip():
    c = fx.fence_poset()
    c2 = roundtrip_fincat(c)
    assert c2.objects == c.objects
    assert c2.compose_table == c.compose_table


def test_site_and_diagram_roundtrip():
    ps = fx.pseudocircle_site()
    s2 = io.decode_site(json.loads(io.dumps(io.encode_site(ps))))
    assert s2.covers == ps.covers
    fence = fx.fence_poset()
    lbls = {"a": "{a}", "b": "{b}", "U": "{a,b,c}", "V": "{a,b,d}"}
    d = dg.DiaObj(fence, fc.FinFunctor(
        "S", fence, ps.cat, lbls,
        {m.id: "%s<=%s" % (lbls[m.dom], lbls[m.cod])
         for m in fence.morphisms})).validate()
    d2 = io.decode_diagram(json.loads(io.dumps(io.encode_diagram(d))), ps)
    assert d2.key() == d.key()


def test_split_roundtrip():
    ps = fx.pseudocircle_site()
    u, aug = sp.cech_cover(ps, [ps.cat.id_of("{a,b,c,d}")], 3)
    u2 = io.decode_split(json.loads(io.dumps(io.encode_split(u))), ps)
    assert sp.split_equal(u, u2)


def test_universe_roundtrip():
    u = lc.poset_universe(fx.terminal_site(), 2)
    u2 = io.decode_universe(json.loads(io.dumps(io.encode_universe(u))))
    assert len(u2.objects) == len(u.objects)
    assert len(u2.morphisms) == len(u.morphisms)


def test_schema_error_on_garbage():
    with pytest.raises(SchemaError):
        io.decode_fincat({"schema": "wrong.v9"})
    with pytest.raises(SchemaError):
        io.decode_simpset({"schema": "simp.v1"})


def run_cli(args):
    return cli.main(args)


def test_cli_validate_and_homology(tmp_path):
    cat_file = tmp_path / "fence.json"
    cat_file.write_text(io.dumps(io.encode_fincat(fx.fence_poset())))
    out = tmp_path / "r.json"
    assert run_cli(["validate", "--cat", str(cat_file), "--out", str(out)]) == 0
    nerve_file = tmp_path / "nerve.json"
    nerve_file.write_text(io.dumps(io.encode_simpset(
        sp.nerve_of_category(fx.fence_poset(), 4))))
    assert run_cli(["homology", "--simp", str(nerve_file), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["report"]["betti"]["0"] == 1 and rep["report"]["betti"]["1"] == 1
    assert rep["pi0"] == 1


def test_cli_malformed_json_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli(["validate", "--cat", str(bad)]) == 2


def test_cli_determinism(tmp_path):
    cat_file = tmp_path / "c.json"
    cat_file.write_text(io.dumps(io.encode_fincat(fx.pseudocircle_site().cat)))
    o1, o2 = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(["tw", "--cat", str(cat_file), "--variant", "tw", "--out", str(o1)])
    run_cli(["tw", "--cat", str(cat_file), "--variant", "tw", "--out", str(o2)])
    assert o1.read_bytes() == o2.read_bytes()


def test_cli_cech_and_limits(tmp_path):
    out = tmp_path / "r.json"
    assert run_cli(["cech", "--site", "pseudocircle",
                    "--family", "{a,b,c}<={a,b,c,d}", "{a,b,d}<={a,b,c,d}",
                    "--trunc", "3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["levels"] == [2, 2, 2, 2]
    cat_file = tmp_path / "c.json"
    cat_file.write_text(io.dumps(io.encode_fincat(fx.pseudocircle_site().cat)))
    assert run_cli(["limits", "--cat", str(cat_file),
                    "--product", "{a,b,c}", "{a,b,d}", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["result"]["apex"] == "{a,b}"


def test_cli_localize(tmp_path):
    cat_file = tmp_path / "c.json"
    cat_file.write_text(io.dumps(io.encode_fincat(fc.chain_category(1))))
    weq = tmp_path / "w.json"
    weq.write_text(json.dumps(["0<=0", "1<=1", "0<=1"]))
    out = tmp_path / "r.json"
    assert run_cli(["localize", "--cat", str(cat_file), "--weq", str(weq),
                    "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["inverted"] == ["0<=0", "0<=1", "1<=1"]
    assert all(v == 1 for v in rep["class_counts"].values())


def test_cli_localizer_closure(tmp_path):
    u = lc.poset_universe(fx.terminal_site(), 2)
    ufile = tmp_path / "u.json"
    ufile.write_text(io.dumps(io.encode_universe(u)))
    out = tmp_path / "r.json"
    assert run_cli(["localizer-closure", "--universe", str(ufile),
                    "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["members"]) == 10
    assert run_cli(["localizer-check", "--universe", str(ufile),
                    "--weq", str(tmp_path / "none")]) in (0, 1, 2)


def test_cli_compare_checks():
    for check in ["hocolimnerve", "pointwisenerve"]:
        assert run_cli(["compare", check, "--trunc", "3", "--seed", "1"]) == 0


def test_cli_quasi_iso(tmp_path):
    d2 = sp.delta_simpset(2, 3)
    bd2 = sp.boundary_delta(2, 3)
    incl = sp.inclusion_map(bd2, d2)
    payload = {"src": io.encode_simpset(bd2), "tgt": io.encode_simpset(d2),
               "val": {s: [list(v[0]), v[1]] for s, v in incl.val.items()}}
    mfile = tmp_path / "m.json"
    mfile.write_text(io.dumps(payload))
    assert run_cli(["quasi-iso", "--map", str(mfile)]) == 1


def test_console_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "diacats.cli", "compare", "hocolimnerve",
         "--trunc", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"ok": true' in proc.stdout
