import csv
import json
import os

import pytest

from e2e import MANIFEST, full_pipeline, ok, tree_digest
from kernscan.checkers import KIND_NAMES
from kernscan.cli import UsageError, build_parser, resolve_config, run


def _args(*argv):
    return build_parser().parse_args(list(argv))


# --- exit codes -------------------------------------------------------------


def test_unknown_flag_is_usage_error(capsys):
    assert run(["check", "--frobnicate"], {}) == 1
    assert "usage:" in capsys.readouterr().err


def test_bogus_checker_is_usage_error(tmp_path):
    assert run(["check", "--manifest", MANIFEST, "--out", str(tmp_path), "--checkers", "Bogus"], {}) == 1


def test_bad_censor_mode_is_usage_error(tmp_path):
    assert run(["stats", "survival", "--db", str(tmp_path), "--censor", "sometimes"], {}) == 1


def test_missing_required_setting_is_usage_error():
    assert run(["check"], {}) == 1


def test_unknown_version_is_usage_error(tmp_path):
    assert run(["check", "--manifest", MANIFEST, "--out", str(tmp_path), "--version", "9.9"], {}) == 1


def test_missing_db_is_io_error(tmp_path):
    assert run(["correlate", "--db", str(tmp_path / "nothing")], {}) == 3


def test_missing_manifest_is_io_error(tmp_path):
    assert run(["check", "--manifest", str(tmp_path / "m.json"), "--out", str(tmp_path)], {}) == 3


def test_malformed_manifest_is_io_error(tmp_path):
    m = tmp_path / "m.json"
    m.write_text("{not json")
    assert run(["check", "--manifest", str(m), "--out", str(tmp_path / "o")], {}) == 3


def test_error_threshold_exceeded(tmp_path):
    tree = tmp_path / "trees" / "v1"
    tree.mkdir(parents=True)
    (tree / "bad.c").write_text("int f(void)\n{\n#if A\n}\n#else\n}\n#endif\nint x;\n/* open\n")
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"versions": [{"name": "v1", "date": "2004-01-01", "root": "trees/v1"}]}))
    argv = ["check", "--manifest", str(m), "--out", str(tmp_path / "o"), "--jobs", "1"]
    assert run(argv + ["--max-errors", "0"], {}) == 2
    assert run(argv + ["--max-errors", "100"], {}) == 0


def test_bad_worksheet_is_analysis_error(tmp_path, corpus_db):
    sheet = tmp_path / "w.txt"
    with open(os.path.join(corpus_db, "worksheet.txt")) as fh:
        sheet.write_text(fh.read().replace("status = unknown", "status = maybe", 1))
    assert run(["triage", "apply", "--db", corpus_db, "--worksheet", str(sheet)], {}) == 2


def test_help_and_version_exit_zero(capsys):
    assert run(["--help"], {}) == 0
    assert run(["--version"], {}) == 0


# --- configuration precedence -----------------------------------------------


def test_flag_beats_env_beats_default():
    env = {"KERNSCAN_CHECKERS": "Lock,Free", "KERNSCAN_JOBS": "3", "KERNSCAN_OUT": "/env/out",
           "KERNSCAN_CENSOR": "max_bound"}
    cfg = resolve_config(_args("check", "--checkers", "Null", "--jobs", "2"), env)
    assert cfg.checkers == ("Null",) and cfg.jobs == 2 and cfg.out == "/env/out"
    assert cfg.censor == "max_bound"
    cfg = resolve_config(_args("check"), env)
    assert cfg.checkers == ("Lock", "Free") and cfg.jobs == 3
    cfg = resolve_config(_args("check"), {})
    assert cfg.checkers == KIND_NAMES and cfg.jobs == (os.cpu_count() or 1) and cfg.out is None
    assert cfg.censor == "midpoint"


def test_env_integer_validated():
    with pytest.raises(UsageError):
        resolve_config(_args("check"), {"KERNSCAN_JOBS": "many"})


def test_env_supplies_manifest_and_out(tmp_path):
    env = {"KERNSCAN_MANIFEST": MANIFEST, "KERNSCAN_OUT": str(tmp_path), "KERNSCAN_CHECKERS": "Lock"}
    assert run(["check", "--jobs", "1"], env) == 0
    assert sorted(f for f in os.listdir(tmp_path / "2.6.0") if f.endswith(".reports.jsonl")) == ["Lock.reports.jsonl"]


def test_var_threshold_flag(tmp_path):
    ok(["check", "--manifest", MANIFEST, "--out", str(tmp_path / "a"), "--checkers", "Var", "--jobs", "1"])
    ok(["check", "--manifest", MANIFEST, "--out", str(tmp_path / "b"), "--checkers", "Var", "--jobs", "1",
        "--var-threshold", "100000"])

    def count(d):
        with open(tmp_path / d / "2.6.0" / "Var.reports.jsonl") as fh:
            return sum(1 for _ in fh)

    assert count("b") == 0 < count("a")


# --- commands ---------------------------------------------------------------


def test_check_single_version(tmp_path):
    out = tmp_path / "o"
    ok(["check", "--manifest", MANIFEST, "--version", "2.6.0", "--out", str(out), "--jobs", "1"])
    assert (out / "2.6.0" / "Lock.reports.jsonl").exists()
    assert not (out / "2.6.1").exists()


def test_events_dump(tmp_path, capsys):
    src = tmp_path / "a.c"
    src.write_text("int f(int *p)\n{\n\tif (!p)\n\t\treturn -1;\n\treturn *p;\n}\n")
    assert run(["events", str(src)], {}) == 0
    out = capsys.readouterr().out
    assert "NullTest" in out and "Deref" in out
    assert run(["events", str(src), "--out", str(tmp_path / "e.txt")], {}) == 0
    assert (tmp_path / "e.txt").read_text() == out


def test_closures_dump(capsys):
    assert run(["closures", "--manifest", MANIFEST, "--version", "2.6.0", "--jobs", "1"], {}) == 0
    rows = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert any(r["role"] == "blocking" and r["name"] == "schedule" for r in rows)


@pytest.fixture(scope="module")
def pipeline_db(tmp_path_factory):
    db = str(tmp_path_factory.mktemp("e2e") / "db")
    full_pipeline(db, jobs=1)
    return db


def test_survival_table(pipeline_db):
    with open(os.path.join(pipeline_db, "stats", "survival_midpoint.csv")) as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["survival"] == "1.0"
    s = [float(r["survival"]) for r in rows]
    assert all(a >= b for a, b in zip(s, s[1:]))


def test_triage_empties_worksheet(pipeline_db, tmp_path):
    ok(["triage", "export", "--db", pipeline_db, "--worksheet", str(tmp_path / "w.txt")])
    assert (tmp_path / "w.txt").read_text() == ""


def test_introduced_eliminated_conserve(pipeline_db):
    with open(os.path.join(pipeline_db, "report", "introduced_eliminated.csv")) as fh:
        rows = list(csv.DictReader(fh))
    prev = None
    for r in rows:
        faults = int(r["faults"])
        if prev is not None:
            assert faults == prev + int(r["introduced"]) - int(r["eliminated"])
        prev = faults


def test_rerun_is_byte_identical(pipeline_db):
    before = tree_digest(pipeline_db)
    ok(["correlate", "--db", pipeline_db])
    ok(["report", "--db", pipeline_db])
    ok(["stats", "rate", "--db", pipeline_db])
    assert tree_digest(pipeline_db) == before


def test_missing_table_input_skipped_with_diagnostic(tmp_path, capsys):
    # a db with check output but no correlation: report still writes what it can
    ok(["check", "--manifest", MANIFEST, "--out", str(tmp_path), "--jobs", "1"])
    capsys.readouterr()
    code = run(["report", "--db", str(tmp_path)], {})
    err = capsys.readouterr().err
    assert code == 0
    assert "skipped" in err
    assert (tmp_path / "report" / "faults_per_version.csv").exists()
