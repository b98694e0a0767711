import io
import json

import pytest

from ramapprox.cli import run

QUARTIC = "z^4+20*z^2+292"
SHIFTED_QUARTIC = "z^4+2*z^3+4*z^2+12*z+12"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def js(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def test_approximants_json():
    res = js("approximants", "--json", "--base", "qp:2", QUARTIC)
    assert [(s["phi"], s["mu"]) for s in res["chain"]] == [
        (["0", "1"], "1/2"), (["2", "0", "1"], "4"), (["292", "0", "20", "0", "1"], "inf")]


def test_json_flag_position_is_free():
    assert js("--json", "approximants", QUARTIC) == js("approximants", QUARTIC, "--json")


def test_approximants_dot():
    code, out, _ = call("approximants", "--dot", QUARTIC)
    assert code == 0 and out.startswith("digraph") and "z^2+2, s=4" in out


def test_text_output():
    code, out, _ = call("bounds", "--p", "2", "--d", "2")
    assert code == 0 and "A: 3" in out and "B: 2" in out


def test_ramified_approx_and_min_disk():
    res = js("ramified-approx", "--json", SHIFTED_QUARTIC)
    assert (res["e"], res["f"]) == (2, 1) and len(res["phi"]) == 3
    res = js("min-disk", "--json", QUARTIC)
    assert res["phi"] == ["2", "0", "1"] and res["s"] == "3"


def test_diskoid_val():
    res = js("diskoid-val", "--json", "--phi", "z^2+2", "--s", "4", QUARTIC)
    assert res["value"] == "8"


def test_ec_semistable():
    res = js("ec-semistable", "--json", "--base", "qp:5", "--a6", "5")
    assert res["degree"] == 6 and res["reduction"] == "Good" and res["L"]["f"] == 1


def test_dyn_commands():
    res = js("dyn-ordres", "--json", "--deg", "2", "--f0", "p,0,0", "--f1", "0,0,1", "--center", "0", "--t", "-1")
    assert res["ordres"] == "2" and res["ordres_at"] == "0"
    res = js("dyn-semistable", "--json", "--f0", "p,0,0", "--f1", "0,0,1")
    assert res["t"] == "-1" and res["ordres_after"] == "0" and res["semistable"]
    assert res["map"]["F0"] == ["2", "0", "0"]


def test_bounds_json():
    assert js("bounds", "--json", "--p", "3", "--d", "4")["A"] == 15


def test_domain_error_exit_code():
    code, out, err = call("approximants", "z^2-1")
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "NotIrreducible" and "certificate" in payload


@pytest.mark.parametrize("argv", [[], ["nope"], ["approximants", "z^^2"], ["bounds", "--p", "2"],
                                  ["approximants", "--base", "zz:3", "z"]])
def test_usage_error_exit_code(argv):
    code, _, _ = call(*argv)
    assert code == 1


def test_batch_preserves_order_and_reports_worst(tmp_path):
    reqs = [
        {"cmd": "approximants", "base": "qp:2", "input": QUARTIC},
        {"cmd": "approximants", "base": "qp:2", "input": "z^2-1"},
        {"cmd": "bounds", "input": {"p": 2, "d": 2}},
        {"cmd": "min-disk", "base": "qp:2", "input": {"poly": SHIFTED_QUARTIC}},
    ]
    path = tmp_path / "req.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in reqs) + "\n")
    code, out, _ = call("--batch", str(path))
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 4 and code == 2
    assert [x["ok"] for x in lines] == [True, False, True, True]
    assert lines[1]["error"] == "NotIrreducible"
    assert lines[3]["result"]["r"] == "3/4"


def test_batch_usage_errors_do_not_abort(tmp_path):
    path = tmp_path / "req.jsonl"
    path.write_text('{"cmd": "frobnicate"}\nnot json\n{"cmd": "bounds", "input": {"p": 0, "d": 5}}\n')
    code, out, _ = call("--batch", str(path))
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 1 and len(lines) == 3 and lines[2]["result"]["A"] == 6


def test_json_output_is_stable():
    a = call("ramified-approx", "--json", SHIFTED_QUARTIC)[1]
    b = call("ramified-approx", "--json", SHIFTED_QUARTIC)[1]
    assert a == b


def test_trace_logging(monkeypatch):
    monkeypatch.setenv("MACLANE_LOG", "trace")
    code, _, err = call("approximants", QUARTIC)
    assert code == 0 and "ramapprox.maclane" in err
    monkeypatch.setenv("MACLANE_LOG", "off")
    code, _, err = call("approximants", QUARTIC)
    assert code == 0 and err == ""
