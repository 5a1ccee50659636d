import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitclosure.cli import run
from orbitclosure.parser import parse_expr
from orbitclosure.poly import ratfunc_equal
from orbitclosure.selftest import FIXTURES, load_fixture


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--json")
    return code, json.loads(text)


def test_separate_example():
    code, doc = call_json("separate", "additive.toy", "--point", "2,0", "--point", "3,0", "--degree", "1")
    assert code == 0
    assert doc["result"]["outcome"] == "Distinct" and doc["result"]["witness"] == "x - 2"
    assert set(doc) == {"command", "input", "params", "result", "flags", "timing_ms"}
    assert set(doc["params"]) == {"degree", "max_len", "window", "seed", "mode"}
    assert {"skipped_words", "unstable", "outside_domain"} <= set(doc["flags"])


def test_invariants_example():
    code, doc = call_json("invariants", "additive.toy", "--degree", "2")
    assert code == 0 and doc["result"]["basis"] == ["1", "x", "x^2"]


def test_density_example():
    code, doc = call_json("density", "squaring.toy", "--point", "3")
    assert code == 0 and doc["result"][0]["verdict"] == "evidence-for-dense"


def test_system_path(tmp_path):
    f = tmp_path / "sys.toy"
    f.write_text("vars: x, y\nmonoid: true\ngen: x, x + y\n")
    code, out = call("separate", str(f), "--point", "2,0", "--point", "3,0")
    assert code == 0 and "Distinct" in out and "x - 2" in out


def test_outside_domain_exit_1():
    code, doc = call_json("orbit", "rational.toy", "--point", "0,1")
    assert code == 1 and doc["flags"]["outside_domain"] and doc["flags"]["skipped_words"] == [[0]]


def test_unstable_exit_1():
    code, doc = call_json("ideal", "additive.toy", "--point", "a", "--degree", "2", "--len-limit", "2")
    assert code == 1 and doc["flags"]["unstable"]


@pytest.mark.parametrize("argv", [
    ["separate", "additive.toy", "--point", "a"],
    ["ideal", "no_such_file.toy"],
    ["ideal", "additive.toy", "--point", "1,2,3"],
    ["ideal", "additive.toy", "--point", "zz"],
    ["invariants", "additive.toy", "--verify", "x", "0"],
    ["ideal", "additive.toy", "--field", "Fp 4"],
    ["ideal", "additive.toy", "--window", "0"],
])
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        run(["ideal", "additive.toy", "--mode", "weird"], out=io.StringIO())
    assert e.value.code == 2


def test_bad_system_file_exit_2(tmp_path):
    f = tmp_path / "bad.toy"
    f.write_text("field: Fp 4\nvars: x\ngen: x\n")
    assert call("ideal", str(f))[0] == 2


def test_phi_check_non_monoid(tmp_path):
    f = tmp_path / "sq.toy"
    f.write_text("vars: x\ngen: x^2\npoint p: 3\n")
    code, doc = call_json("phi-check", str(f))
    assert code == 0 and doc["result"][0]["fiber"] is None


def test_prime_field_override():
    code, doc = call_json("generic-rank", "additive.toy", "--field", "Fp 1000003", "--seed", "3")
    assert code == 0 and doc["result"]["r"] == 2


def test_selftest_passes():
    code, out = call("selftest")
    assert code == 0 and "FAIL" not in out


COMMANDS = [
    ("orbit", []), ("ideal", []), ("hilbert", []), ("generic-rank", []), ("exceptional", []),
    ("phi-check", []), ("invariants", ["--verify", "x", "1"]), ("density", ["--inv-degree", "3"]),
]


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("cmd,extra", COMMANDS)
def test_seeded_json_is_byte_identical(name, cmd, extra):
    argv = [cmd, name, "--seed", "11", "--json", *extra]
    c1, a = call(*argv)
    c2, b = call(*argv)
    assert a == b and c1 == c2 and c1 in (0, 1)
    assert json.loads(a)["timing_ms"] is None


def _expressions(doc):
    res = doc["result"]
    items = res if isinstance(res, list) else [res]
    for it in items:
        for key in ("basis", "proxy", "generators"):
            yield from it.get(key, [])
        if it.get("witness"):
            yield it["witness"]
        for r in (it.get("verify") or {}).get("residues", []):
            yield r["residue"]


@pytest.mark.parametrize("name", FIXTURES)
def test_json_expressions_round_trip(name):
    system = load_fixture(name)
    cmds = [["ideal", "--degree", "2"], ["exceptional"], ["invariants", "--degree", "3", "--verify", "x + 1", "x"],
            ["phi-check"]]
    pts = list(system.named_points)
    if len(pts) >= 2:
        cmds.append(["separate", "--point", pts[0], "--point", pts[-1]])
    for c in cmds:
        _, doc = call_json(c[0], name, *c[1:])
        for text in _expressions(doc):
            e = parse_expr(text, system.vars)
            assert ratfunc_equal(parse_expr(e.to_str(system.vars), system.vars), e)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(FIXTURES), st.sampled_from(["ideal", "separate", "density", "orbit"]),
       st.integers(0, 3))
def test_exit_status_contract(name, cmd, d):
    system = load_fixture(name)
    pts = list(system.named_points)[:2]
    argv = [cmd, name, "--degree", str(d), "--json", "--inv-degree", "2"] if cmd == "density" else \
        [cmd, name, "--degree", str(d), "--json"]
    for p in pts:
        argv += ["--point", p]
    code, text = call(*argv)
    doc = json.loads(text)
    flagged = doc["flags"]["unstable"] or doc["flags"]["outside_domain"]
    assert code == (1 if flagged else 0)
