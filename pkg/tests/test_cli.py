"""Session language, runner and command-line interface."""

import json
import re

import pytest

from dgcm.cli.dsl import DSLError, format_session, parse_session
from dgcm.cli.main import main
from dgcm.cli.runner import (EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_PARSE, EXIT_PASS,
                             EXIT_RESOURCE, exit_code, run_session, to_json, to_table)
from dgcm.fixtures import fixture_names, fixture_text

SMALL = """\
field Q
ring A = poly(x, y)
dg R = base(A)
module Rm = regular(R)
depth Rm
"""


# ---------------------------------------------------------------- parsing

@pytest.mark.parametrize("name", fixture_names())
def test_fixture_round_trip_is_a_fixed_point(name):
    s = parse_session(fixture_text(name))
    t = format_session(s)
    assert parse_session(t) == s
    assert format_session(parse_session(t)) == t


def test_inst_a_has_one_dg_binding():
    s = parse_session(fixture_text("inst-a"))
    assert [st.name for st in s.statements if st.kind == "dg"] == ["R1"]


def test_parse_is_deterministic():
    assert parse_session(fixture_text("inst-b")) == parse_session(fixture_text("inst-b"))


@pytest.mark.parametrize("text,line,col", [
    ("field Q\nring A = poly(x, y)\ndg R = koszul(A; z)\n", 3, 18),
    ("field Q\nring A = poly(x, y)\ndg R = base(A)\ndg R = base(A)\n", 4, 4),
    ("field Q\nring A = poly(x, y)\nideal I = (x + * y)\n", 3, 16),
    ("field Q\nring A = poly(x, y)\ndepth M\n", 3, 7),
    ("field Q\nring A = poly(x, y)\nfrobnicate A\n", 3, 1),
    ("bound 0\n", 1, 7),
])
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(DSLError) as e:
        parse_session(text)
    assert (e.value.line, e.value.col) == (line, col), str(e.value)


def test_per_command_bound_override():
    s = parse_session(SMALL.replace("depth Rm", "depth Rm bound=2"))
    assert s.commands[0].bound == 2
    doc = run_session(s)
    assert doc["reports"][0]["command"] == "depth Rm bound=2"
    assert doc["reports"][0]["report"]["bounds"]["rhom_window"] is not None
    with pytest.raises(DSLError):
        parse_session(SMALL.replace("depth Rm", "depth Rm bound=x"))


# ---------------------------------------------------------------- running

def test_run_small_session():
    doc = run_session(parse_session(SMALL))
    assert doc["schema"] == "dgcm-report/1"
    assert doc["reports"][0]["report"]["invariants"]["depth"] == 2
    assert exit_code(doc) == EXIT_PASS


def test_inst_a_construct_then_check_passes():
    doc = run_session(parse_session(fixture_text("inst-a")))
    by_cmd = {e["command"]: e["report"] for e in doc["reports"]}
    assert by_cmd["construct-mcm R1 -> M"]["status"] == "pass"
    assert by_cmd["mcm-check M"]["status"] == "pass"
    assert by_cmd["mcm-dual-check M"]["status"] == "pass"


def test_inst_e_construct_is_rejected():
    doc = run_session(parse_session(fixture_text("inst-e")))
    by_cmd = {e["command"]: e["report"] for e in doc["reports"]}
    rep = next(v for k, v in by_cmd.items() if k.startswith("construct-mcm"))
    assert rep["status"] == "hypothesis-rejected"


def test_inst_b_oracle_agrees():
    doc = run_session(parse_session(fixture_text("inst-b")), use_oracle=True)
    oracle = doc["reports"][-1]
    assert oracle["command"] == "oracle" and oracle["report"]["status"] == "pass"


def test_exit_code_precedence():
    def doc(**kw):
        s = {"pass": 0, "fail": 0, "hypothesis-rejected": 0, "resource-bound": 0}
        s.update(kw)
        return {"summary": s}
    assert exit_code(doc(**{"pass": 3})) == EXIT_PASS
    assert exit_code(doc(fail=1)) == EXIT_FAIL
    assert exit_code(doc(fail=1, **{"hypothesis-rejected": 1})) == EXIT_HYPOTHESIS
    assert exit_code(doc(fail=1, **{"resource-bound": 1, "hypothesis-rejected": 1})) \
        == EXIT_RESOURCE
    assert len({EXIT_PASS, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_RESOURCE, EXIT_PARSE}) == 5


def _numbers(text):
    return set(re.findall(r"-?\d+", text))


@pytest.mark.parametrize("name", ["inst-a", "inst-b"])
def test_table_numbers_appear_in_json(name):
    doc = run_session(parse_session(fixture_text(name)))
    js = to_json(doc)
    tab = to_table(doc)
    assert _numbers(tab) <= _numbers(js)
    for entry in doc["reports"]:
        for k, v in entry["report"]["invariants"].items():
            if isinstance(v, int):
                assert re.search(rf"\b{re.escape(k)}\s+{v}\b", tab)


# ---------------------------------------------------------------- command line

def test_cli_fixtures_list(capsys):
    assert main(["fixtures", "list"]) == 0
    out = capsys.readouterr().out
    for n in fixture_names():
        assert n in out


def test_cli_fixtures_show(capsys):
    assert main(["fixtures", "show", "inst-b"]) == 0
    assert capsys.readouterr().out == fixture_text("inst-b")


def test_cli_run_json_and_exit_code(tmp_path, capsys):
    f = tmp_path / "s.dg"
    f.write_text(SMALL)
    assert main(["run", str(f), "--json"]) == EXIT_PASS
    doc = json.loads(capsys.readouterr().out)
    assert doc["fixture"] == "s"


def test_cli_exit_codes_on_fixtures(capsys):
    assert main(["run", "inst-d"]) == EXIT_FAIL        # deliberate negative checks
    assert main(["run", "inst-e"]) == EXIT_HYPOTHESIS
    capsys.readouterr()


def test_cli_resource_bound_exit(tmp_path, capsys):
    f = tmp_path / "s.dg"
    f.write_text("""field Q
ring A = poly(x, y)
dg R = koszul(A; x, x)
module Rm = regular(R)
module M = shift(Rm, -1)
mcm-check M
""")
    assert main(["run", str(f), "--bound", "1"]) == EXIT_RESOURCE
    capsys.readouterr()


def test_cli_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.dg"
    f.write_text("field Q\nring A = poly(x, y)\ndg R = koszul(A; z)\n")
    assert main(["run", str(f)]) == EXIT_PARSE
    assert f"{f}:3:18:" in capsys.readouterr().err


def test_cli_output_file_and_table(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["run", "inst-b", "--table", "-o", str(out)]) == EXIT_FAIL
    assert out.read_text().startswith("schema dgcm-report/1")
    assert capsys.readouterr().out == ""


def test_cli_cache_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("DGCM_CACHE_DIR", str(tmp_path / "cache"))
    main(["run", "inst-b", "--json"])
    first = capsys.readouterr().out
    assert len(list((tmp_path / "cache").iterdir())) == 1
    main(["run", "inst-b", "--json"])
    assert capsys.readouterr().out == first


def test_cli_rejects_bad_bound(capsys):
    assert main(["run", "inst-b", "--bound", "0"]) == EXIT_PARSE
    capsys.readouterr()
