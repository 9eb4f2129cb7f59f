from __future__ import annotations

import json
import subprocess
import sys

import pytest

from treegroups.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out else None), err


def orders(doc):
    return [r["order"] for r in doc["tables"][0]["rows"]]


def test_info(capsys):
    code, doc, _ = run_json(capsys, "info", "--group", "grigorchuk", "--depth", "3")
    assert code == 0 and orders(doc) == [2, 8, 128]
    assert doc["tool"] == "treegroups" and doc["command"] == "info"
    code, doc, _ = run_json(capsys, "info", "--group", "trivial", "--depth", "1")
    assert orders(doc) == [1] and doc["tables"][0]["rows"][0]["transitive"] is False
    code, doc, _ = run_json(capsys, "info", "--group", "wreath:2", "--depth", "2")
    row = doc["tables"][0]["rows"][1]
    assert row["order"] == 60 ** 6 and row["transitive"]


def test_unknown_group(capsys):
    code, out, err = run(capsys, "info", "--group", "nope")
    assert code == 2 and "unknown group" in err and out == ""


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["info"])
    assert info.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "commensurate", "--group", "grigorchuk", "--subgroup", "G", "--elements", "a*^")
    assert code == 2
    code, _, err = run(capsys, "commensurate", "--group", "grigorchuk", "--subgroup", "G")
    assert code == 2 and "--elements" in err
    code, _, _ = run(capsys, "schlichting", "--group", "grigorchuk")
    assert code == 2


def test_branch_check(capsys):
    code, doc, _ = run_json(capsys, "branch-check", "--group", "grigorchuk", "--depth", "6")
    assert code == 0
    assert all(r["transitive"] for r in doc["tables"][0]["rows"])
    assert len(doc["tables"]) == 3
    assert doc["result"]["verdict"] in ("branch-evidence", "weakly-branch-evidence")
    assert all(t["flags"]["monotone_nondecreasing"] for t in doc["tables"][1:])
    code, doc, _ = run_json(capsys, "branch-check", "--group", "trivial")
    assert doc["result"]["verdict"] == "fails-transitivity"
    code, doc, _ = run_json(capsys, "branch-check", "--group", "gupta-sidki:3", "--depth", "4")
    assert all(r["transitive"] for r in doc["tables"][0]["rows"]) and len(doc["tables"]) == 3


def test_branch_check_truncated(capsys):
    code, doc, _ = run_json(capsys, "branch-check", "--group", "wreath:3", "--depth", "9", "--rist-level", "1")
    assert code == 0 and doc["flags"]["truncated"]
    assert [r["level"] for r in doc["tables"][0]["rows"]] == list(range(1, 9))


def test_commensurate(capsys):
    code, doc, _ = run_json(capsys, "commensurate", "--group", "wreath:2", "--subgroup", "O",
                            "--elements", "x", "--depth", "2")
    assert code == 0 and [r["value"] for r in doc["tables"][0]["rows"]] == [4, 4]
    code, doc, _ = run_json(capsys, "commensurate", "--group", "wreath:2", "--subgroup", "O",
                            "--elements", "y", "--depth", "2")
    assert [r["value"] for r in doc["tables"][0]["rows"]] == [1, 1]
    code, doc, _ = run_json(capsys, "commensurate", "--group", "grigorchuk", "--subgroup", "normal:b",
                            "--elements", "a,a*c", "--depth", "5")
    for t in doc["tables"]:
        assert [r["value"] for r in t["rows"]] == [1] * 5


def test_schlichting(capsys):
    code, doc, _ = run_json(capsys, "schlichting", "--group", "wreath:1", "--subgroup", "O", "--level", "1")
    assert code == 0 and doc["result"]["coset_count"] == 5 and doc["result"]["kernel_order"] == 1
    code, doc, _ = run_json(capsys, "schlichting", "--group", "grigorchuk", "--subgroup", "G", "--level", "3")
    assert doc["result"]["coset_count"] == 1
    code, doc, _ = run_json(capsys, "schlichting", "--group", "wreath:2", "--subgroup", "O",
                            "--level", "2", "--cap", "100")
    assert code == 0 and doc["flags"]["overflow"] and doc["result"]["coset_count"] == 15625


@pytest.mark.slow
def test_schlichting_level_two(capsys):
    code, doc, _ = run_json(capsys, "schlichting", "--group", "wreath:2", "--subgroup", "O",
                            "--level", "2", "--cap", "20000")
    assert doc["result"]["coset_count"] == 15625 and doc["result"]["transitive"]
    assert doc["result"]["image_order"] * doc["result"]["kernel_order"] == 60 ** 6


def test_ji_and_containment(capsys):
    code, doc, _ = run_json(capsys, "ji", "--group", "wreath:2", "--rist-level", "1", "--depth", "2")
    assert code == 0 and doc["tables"][0]["rows"][-1]["value"] == 1
    code, doc, _ = run_json(capsys, "ji", "--group", "grigorchuk", "--rist-level", "1", "--depth", "6")
    assert doc["tables"][0]["flags"]["monotone_nondecreasing"]
    code, doc, _ = run_json(capsys, "containment", "--group", "grigorchuk", "--subgroup", "G", "--depth", "4")
    assert code == 0 and doc["result"]["m"] == 0
    code, doc, err = run_json(capsys, "containment", "--group", "grigorchuk", "--subgroup", "gen:b", "--depth", "3")
    assert code == 3 and "witness" in doc["result"] and "not normal" in err


def test_formats(capsys):
    code, out, _ = run(capsys, "info", "--group", "grigorchuk", "--depth", "2", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "table,level,vertices,order,transitive"
    assert lines[1].startswith("level quotients,1,2,2,")
    code, out, _ = run(capsys, "info", "--group", "grigorchuk", "--depth", "2")
    assert "level quotients" in out and "128" not in out


def test_timings_are_opt_in(capsys):
    _, doc, _ = run_json(capsys, "info", "--group", "grigorchuk", "--depth", "2")
    assert "seconds" not in doc["tables"][0]["rows"][0]
    _, doc, _ = run_json(capsys, "info", "--group", "grigorchuk", "--depth", "2", "--timings")
    assert "seconds" in doc["tables"][0]["rows"][0]


def test_byte_identical_subprocess():
    cmd = [sys.executable, "-m", "treegroups", "commensurate", "--group", "wreath:2", "--subgroup", "O",
           "--elements", "x,x@1", "--depth", "2", "--format", "json", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
