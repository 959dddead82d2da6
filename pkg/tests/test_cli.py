import io
import json
import os
import random
import subprocess
import sys
from importlib.resources import files
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from symdet.algebra_core import FieldSpec, ParseError, RingSpec
from symdet.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_OK, run
from symdet.cmf import parse_cmf, format_cmf
from symdet.formmatrix import random_symmetric_matrix
from symdet.monad import expected_bundle_sum

DATA = files("symdet.data")
GOLDEN = Path(__file__).parent / "golden"
SEXTIC = str(DATA.joinpath("sextic_example.cmf"))
DIAGONAL = str(DATA.joinpath("diagonal_counterexample.cmf"))
NONSYM = str(DATA.joinpath("nonsymmetric_example.cmf"))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def cli_json(*argv):
    code, out, err = cli(*argv, "--json")
    return code, json.loads(out) if out else None


# ------------------------------------------------------------------ CMF format

@given(st.integers(0, 10_000), st.integers(1, 3), st.sampled_from([FieldSpec.rationals(), FieldSpec.prime(31991)]))
@settings(max_examples=40, deadline=None)
def test_cmf_round_trip(seed, n, fld):
    R = RingSpec.standard(("y0", "y1", "y2", "y3"), fld)
    rng = random.Random(seed)
    m = random_symmetric_matrix(R, [-rng.randint(0, 1) for _ in range(n)], rng, shift=-2, density=0.6)
    back = parse_cmf(format_cmf(m)).matrix
    assert back == m
    assert back.source.twists == m.source.twists


def test_cmf_round_trip_with_summands_and_comments():
    doc = parse_cmf(Path(SEXTIC).read_text())
    doc.summands = expected_bundle_sum(4, 0, 6)
    again = parse_cmf(format_cmf(doc))
    assert again.matrix == doc.matrix
    assert again.summands == doc.summands
    assert again.comments == doc.comments


def test_cmf_symmetric_shorthand():
    text = "field q\nvars y0 y1 y2 y3\ntwists 0 -2\nsym\nentry 1 1 : y0^5\nentry 1 2 : y1^3\nentry 2 2 : y2\n"
    m = parse_cmf(text).matrix
    assert m.entries[1][0] == m.entries[0][1]


@pytest.mark.parametrize("text,needle", [
    ("field q\nvars y0 y1\nentry 1 1 : y0\n", "missing twists"),
    ("field q\nvars y0 y1\ntwists 0 -2\nentry 1 1 : y0^4\n", "entry (1,1)"),
    ("field q\nvars y0 y1\ntwists 0\nentry 1 1 : y0 +\n", "line 4"),
    ("field fp 12\nvars y0\n", "line 1"),
    ("vars y0\nbogus 1\n", "unknown directive"),
    ("field q\ntwists 0\n", "missing vars"),
    ("field q\nvars y0\ntwists 0 -2\nentry 3 1 : y0^5\n", "outside"),
])
def test_cmf_errors(text, needle):
    with pytest.raises(ParseError) as exc:
        parse_cmf(text)
    assert needle in str(exc.value)


# ------------------------------------------------------------------ exit codes

def test_verify_pass_and_fail_codes():
    assert cli("verify", SEXTIC, "--pg", "4", "--q", "0", "--K2", "6")[0] == EXIT_OK
    assert cli("verify", DIAGONAL)[0] == EXIT_FAIL
    code, rep = cli_json("verify", NONSYM)
    assert code == EXIT_FAIL
    assert rep["verification"]["checks"]["symmetric"]["status"] == "fail"


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.cmf"
    bad.write_text("field q\nvars y0 y1\nentry 1 1 : y0\n")
    code, _, err = cli("verify", str(bad))
    assert code == EXIT_INPUT and "missing twists" in err
    assert cli("verify", str(tmp_path / "absent.cmf"))[0] == EXIT_INPUT
    assert cli("table", "--pg", "4")[0] == EXIT_INPUT
    assert cli("geography")[0] == EXIT_INPUT
    assert cli("geography", "--family", "torus:3")[0] == EXIT_INPUT
    assert cli("verify", SEXTIC, "--budget", "bogus=1")[0] == EXIT_INPUT
    assert cli("verify", SEXTIC, "--order", "nonsense")[0] == EXIT_INPUT
    assert cli("nosuchcommand")[0] == EXIT_INPUT


def test_budget_exit_code():
    code, rep = cli_json("verify", SEXTIC, "--pg", "4", "--q", "0", "--K2", "6", "--budget", "basis=1")
    assert code == EXIT_BUDGET
    assert rep["status"] == "budget_exceeded"


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("SYMDET_BUDGET", "basis=1")
    assert cli("verify", SEXTIC, "--pg", "4", "--q", "0", "--K2", "6")[0] == EXIT_BUDGET


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symdet", "table", "--pg", "4", "--q", "1", "--K2", "12"],
                          capture_output=True, text=True, env={**os.environ, "SYMDET_BUDGET": ""})
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].split() == ["1", "4", "16", "40"]


# ------------------------------------------------------------------ command outputs

def test_geography_pencil_forces_K2_16():
    code, rep = cli_json("geography", "--pg", "4", "--q", "3", "--pencil")
    assert code == EXIT_OK
    assert rep["inequalities"]["forced"]["K2"] == 16


def test_geography_family_and_strata():
    code, rep = cli_json("geography", "--family", "quotient:1,1,2", "--strata", "--bundles")
    assert code == EXIT_OK
    fam = rep["family"]["invariants"]
    assert (fam["pg"], fam["q"], fam["K2"]) == (4, 0, 6)
    assert len(rep["strata"]) == 10
    assert len(rep["bundle_types"]) == 4


def test_table_m2_reports_serre_symmetry():
    code, rep = cli_json("table", "--pg", "4", "--q", "1", "--K2", "12", "--m", "2")
    assert code == EXIT_OK and rep["serre_symmetric"] is True


def test_loci_command():
    code, rep = cli_json("loci", SEXTIC, "--pg", "4", "--q", "0", "--K2", "6")
    assert code == EXIT_OK
    assert rep["loci"]["gamma"]["degree"] == 3
    assert rep["loci"]["T"]["empty"] is True


def test_construct_sextic_output_verifies(tmp_path):
    code, rep = cli_json("construct", "sextic", "--seed", "5")
    assert code == EXIT_OK
    path = tmp_path / "s.cmf"
    path.write_text(rep["sextic"]["cmf"])
    assert cli("verify", str(path), "--pg", "4", "--q", "0", "--K2", "6")[0] == EXIT_OK


def test_construct_cover():
    code, rep = cli_json("construct", "cover")
    assert code == EXIT_OK
    assert rep["cover"]["quadric_check"]["total_dim"] == 21


def test_symmetrize_command(tmp_path):
    assert cli("symmetrize", SEXTIC)[0] == EXIT_OK
    code, rep = cli_json("symmetrize", NONSYM)
    assert code == EXIT_FAIL and "no lift found" in rep["error"]


def test_output_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = cli("table", "--pg", "4", "--q", "1", "--K2", "12", "--json", "--output", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["table"]["rows"]["h0"] == [1, 4, 16, 40]


def test_field_override_changes_the_field():
    code, rep = cli_json("verify", SEXTIC, "--field", "fp:31991", "--pg", "4", "--q", "0", "--K2", "6")
    assert code == EXIT_OK
    assert rep["configuration"]["field"] == "fp:31991"


# ------------------------------------------------------------------ determinism and golden reports

GOLDEN_CASES = {
    "table_4_1_12.json": ("table", "--pg", "4", "--q", "1", "--K2", "12"),
    "geography_4_3_pencil.json": ("geography", "--pg", "4", "--q", "3", "--pencil"),
    "verify_sextic_example.json": ("verify", SEXTIC, "--pg", "4", "--q", "0", "--K2", "6"),
}


def _normalized(report):
    cfg = report["configuration"]
    if "input" in cfg:
        cfg["input"] = Path(cfg["input"]).name
    cfg["budget"] = None
    return report


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_reports(name):
    code, rep = cli_json(*GOLDEN_CASES[name])
    assert code == EXIT_OK
    want = json.loads((GOLDEN / name).read_text())
    assert _normalized(rep) == want


def test_reports_are_byte_identical_across_runs():
    args = ("verify", SEXTIC, "--pg", "4", "--q", "0", "--K2", "6", "--json")
    assert cli(*args)[1] == cli(*args)[1]
    first = cli("construct", "sextic", "--seed", "3", "--json")[1]
    assert first == cli("construct", "sextic", "--seed", "3", "--json")[1]
