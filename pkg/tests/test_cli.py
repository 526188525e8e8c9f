"""CLI, experiments and reporting tests."""
import json
import subprocess
import sys

import pytest

from unital_forge.cli import main
from unital_forge.errors import (
    InvalidParameters, IoFailure, UnknownExperiment,
)
from unital_forge.experiments import REGISTRY, run
from unital_forge.reporting import (
    CHECK_FIELDS, REPORT_FIELDS, SCHEMA, all_passed, canonical_json,
    make_check, make_report, report_write,
)


def test_registry_names():
    assert set(REGISTRY) == {"wantz-is-unital", "stabilizer-order",
                             "onan-absent-wantz", "vj-obstruction", "all"}


def test_run_unknown_experiment():
    with pytest.raises(UnknownExperiment):
        run("no-such-thing", q=3)


def test_run_wantz_is_unital_q3():
    report = run("wantz-is-unital", q=3)
    check = report["checks"][0]
    assert check["status"] == "pass"
    assert check["witness"]["pairs_swept"] == 81
    assert check["witness"]["unitals_found"] == 18
    assert check["witness"]["mismatches"] == []


def test_run_stabilizer_order_q3():
    report = run("stabilizer-order", q=3)
    check = report["checks"][0]
    assert check["status"] == "pass"
    assert check["witness"]["order"] == 24


def test_run_onan_absent_wantz_q5():
    report = run("onan-absent-wantz", q=5)
    check = report["checks"][0]
    assert check["status"] == "pass"
    assert check["witness"]["configs_found"] == 0


def test_run_all_q3_statuses():
    report = run("all", q=3)
    statuses = {c["name"]: c["status"] for c in report["checks"]}
    assert statuses == {
        "wantz-is-unital": "pass",
        "stabilizer-order": "pass",
        "onan-absent-wantz": "pass",
        "vj-obstruction-j1": "inapplicable",
    }
    assert all_passed(report)


def test_thread_count_does_not_change_canonical_json():
    canons = [canonical_json(run("all", q=3, threads=t), keep_volatile=False)
              for t in (1, 4)]
    assert canons[0] == canons[1]
    assert '"elapsed_ms"' not in canons[0]
    assert '"fingerprint"' not in canons[0]


def test_report_field_order_and_schema():
    report = run("wantz-is-unital", q=3)
    parsed = json.loads(canonical_json(report))
    assert list(parsed) == list(REPORT_FIELDS)
    assert parsed["schema"] == SCHEMA
    for check in parsed["checks"]:
        assert list(check) == list(CHECK_FIELDS)
    fp = parsed["fingerprint"]
    assert {"python", "numpy", "numba", "backend",
            "threads", "cache_used"} <= set(fp)


def test_report_write_text_one_line_per_check():
    report = make_report("demo", {"q": 3}, [
        make_check("alpha", "pass", None, 1),
        make_check("beta", "fail", {"n": 2}, 1),
        make_check("gamma", "inapplicable", None, 0),
    ])
    text = report_write(report, "text")
    lines = text.splitlines()
    assert sum(l.startswith(("PASS", "FAIL", "INAPPLICABLE"))
               for l in lines) == 3
    assert not all_passed(report)


def test_report_write_json_round_trips(tmp_path):
    report = run("stabilizer-order", q=3)
    out = tmp_path / "rep.json"
    text = report_write(report, "json", str(out))
    assert json.loads(out.read_text()) == json.loads(text)


def test_report_write_rejects_unknown_format():
    report = make_report("demo", {}, [])
    with pytest.raises(InvalidParameters):
        report_write(report, "xml")


def test_report_write_bad_path():
    report = make_report("demo", {}, [])
    with pytest.raises(IoFailure):
        report_write(report, "json", "/no/such/dir/report.json")


def test_make_check_rejects_unknown_status():
    with pytest.raises(InvalidParameters):
        make_check("x", "maybe", None, 0)


def test_cli_field_verb(capsys):
    assert main(["field", "--q", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_field_cache_roundtrip(tmp_path, capsys):
    assert main(["field", "--q", "3", "--cache", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "cache-roundtrip" in out
    assert list(tmp_path.glob("gftb_*.bin"))


def test_cli_nearfield_and_plane_verbs(capsys):
    assert main(["nearfield", "--q", "3"]) == 0
    assert main(["plane", "--q", "3"]) == 0
    assert "plane-axioms" in capsys.readouterr().out


def test_cli_unital_verb_pass_and_fail(capsys):
    assert main(["unital", "--family", "wantz", "--q", "3",
                 "--a", "0", "--b", "1"]) == 0
    assert main(["unital", "--family", "wantz", "--q", "3",
                 "--a", "3", "--b", "0"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_unital_set_families(capsys):
    assert main(["unital", "--family", "V", "--q", "7", "--j", "1"]) == 0
    assert main(["unital", "--family", "B", "--q", "3",
                 "--a", "1", "--b", "0"]) == 0
    capsys.readouterr()


def test_cli_unital_json_report(capsys):
    assert main(["unital", "--family", "hermitian", "--q", "3",
                 "--report", "json"]) == 0
    parsed = json.loads(capsys.readouterr().out)
    assert parsed["schema"] == SCHEMA
    assert parsed["checks"][0]["status"] == "pass"


def test_cli_onan_verb(capsys):
    assert main(["onan", "--family", "wantz", "--q", "3"]) == 0
    assert main(["onan", "--family", "V", "--q", "7", "--j", "1"]) == 0
    assert main(["onan", "--family", "V", "--q", "3", "--j", "1"]) == 0
    assert "INAPPLICABLE" in capsys.readouterr().out
    assert main(["onan", "--family", "U", "--q", "5",
                 "--b", "1", "--j", "3"]) == 1
    assert main(["onan", "--family", "B", "--q", "3"]) == 2
    capsys.readouterr()


def test_cli_poly_verb(capsys):
    assert main(["poly", "--q", "7", "--j", "4"]) == 0
    capsys.readouterr()


def test_cli_experiments_exit_codes(capsys):
    assert main(["experiments", "stabilizer-order", "--q", "3"]) == 0
    assert main(["experiments", "bogus", "--q", "3"]) == 2
    assert main(["experiments", "vj-obstruction", "--q", "7"]) == 1
    capsys.readouterr()


def test_cli_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["experiments", "stabilizer-order", "--q", "3",
                 "--report", "json", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["experiment"] == "stabilizer-order"


def test_cli_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["unital", "--family", "nonsense"])
    assert exc.value.code == 2


def test_console_script_installed():
    proc = subprocess.run(["unital-forge", "poly", "--q", "5", "--j", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
