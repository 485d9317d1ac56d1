import json
from pathlib import Path

import jsonschema
import pytest

from rainbowindex.cli import main
from rainbowindex.colorings import CompleteGraphColoring, read_coloring, write_coloring

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def validate(name: str, text: str) -> dict:
    doc = json.loads(text)
    jsonschema.validate(doc, load_schema(name))
    return doc


# --- bounds -----------------------------------------------------------------

def test_bounds_basic(capsys):
    code, out, err = run(capsys, "bounds", "-k", "3", "-l", "1")
    assert code == 0
    doc = validate("bound_report", out)
    assert doc["N1"] == 572
    assert doc["N2"]["value"] == 6
    assert doc["N"] == 572
    assert "N1" in err  # human table on stderr


def test_bounds_with_eps(capsys):
    code, out, _ = run(capsys, "bounds", "-k", "3", "-l", "100", "--eps", "1/2")
    assert code == 0
    doc = validate("bound_report", out)
    assert doc["n_threshold"] == 894
    assert doc["N"] == 894


def test_bounds_rejects_small_k(capsys):
    code, _, err = run(capsys, "bounds", "-k", "2", "-l", "1")
    assert code == 2
    assert "error" in err


def test_bounds_rejects_malformed_eps(capsys):
    with pytest.raises(SystemExit) as exc:
        run(capsys, "bounds", "-k", "3", "-l", "1", "--eps", "half")
    assert exc.value.code == 2


# --- verify -----------------------------------------------------------------

def test_verify_pass_and_fail(capsys, tmp_path):
    mono = tmp_path / "mono.coloring"
    write_coloring(CompleteGraphColoring(6, 3, (1,) * 15), mono)
    code, out, _ = run(capsys, "verify", str(mono), "-k", "3", "-l", "1")
    assert code == 1
    doc = validate("verification_report", out)
    assert doc["pass"] is False
    assert doc["witness_S"] == [1, 2, 3]

    found = tmp_path / "found.coloring"
    code, out, _ = run(capsys, "search", "-n", "6", "-k", "3", "-l", "1",
                       "-t", "3", "--seed", "4", "-o", str(found))
    assert code == 0
    code, out, _ = run(capsys, "verify", str(found), "-k", "3", "-l", "1",
                       "--mode", "full")
    assert code == 0
    doc = validate("verification_report", out)
    assert doc["pass"] is True


def test_verify_truncated_file_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.coloring"
    bad.write_text("6 3\n1 2 3\n")
    code, _, err = run(capsys, "verify", str(bad), "-k", "3", "-l", "1")
    assert code == 2
    assert "error" in err


def test_verify_missing_file_is_usage_error(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope"), "-k", "3", "-l", "1")
    assert code == 2


# --- search -----------------------------------------------------------------

def test_search_writes_coloring_and_witness(capsys, tmp_path):
    out_file = tmp_path / "k6.coloring"
    witness = tmp_path / "k6.witness"
    code, out, _ = run(capsys, "search", "-n", "6", "-k", "3", "-l", "2", "-t", "3",
                       "--strategy", "local", "--mode", "full", "--seed", "2",
                       "-o", str(out_file), "--witness-out", str(witness))
    assert code == 0
    doc = validate("search_report", out)
    assert doc["found"] is True
    coloring = read_coloring(out_file)
    assert coloring.n == 6
    dump = witness.read_text()
    assert "# S = {1,2,3}" in dump
    assert "T: (" in dump


def test_search_budget_exhaustion_exits_3(capsys):
    code, out, _ = run(capsys, "search", "-n", "6", "-k", "3", "-l", "6", "-t", "3",
                       "--strategy", "random", "--search-budget", "5", "--seed", "1")
    assert code == 3
    doc = validate("search_report", out)
    assert doc["found"] is False
    assert doc["definitive_nonexistence"] is False


def test_search_exhaustive_refutation(capsys):
    code, out, _ = run(capsys, "search", "-n", "4", "-k", "3", "-l", "1", "-t", "1",
                       "--strategy", "exhaustive", "--search-budget", "10")
    assert code == 3
    doc = validate("search_report", out)
    assert doc["definitive_nonexistence"] is True


# --- oracle -----------------------------------------------------------------

def test_oracle_k4_example(capsys, tmp_path):
    path = tmp_path / "k4.coloring"
    write_coloring(CompleteGraphColoring(4, 3, (1, 2, 1, 3, 2, 3)), path)
    code, out, _ = run(capsys, "oracle", str(path), "-S", "1,2,3", "--mode", "full")
    assert code == 0
    doc = validate("oracle_report", out)
    assert doc["max"] == 2
    assert len(doc["witness"]) == 2


def test_oracle_budget_exceeded_is_usage_error(capsys, tmp_path):
    path = tmp_path / "k9.coloring"
    import rainbowindex
    write_coloring(rainbowindex.random_coloring(9, 3, rainbowindex.SeededStream(0)), path)
    code, _, err = run(capsys, "oracle", str(path), "-S", "1,2,3",
                       "--mode", "full", "--budget", "6")
    assert code == 2
    assert "candidate" in err


# --- tail -------------------------------------------------------------------

def test_tail_report(capsys):
    code, out, _ = run(capsys, "tail", "-n", "7", "-k", "3", "-l", "1")
    assert code == 0
    doc = validate("tail_report", out)
    assert doc["exact_tail"]["rational"] == "2401/6561"
    assert doc["anomaly"] is False


# --- mc ---------------------------------------------------------------------

def test_mc_bs(capsys):
    code, out, _ = run(capsys, "mc", "bs", "-n", "7", "-k", "3", "-l", "1",
                       "--samples", "20000", "--seed", "1")
    assert code == 0
    doc = validate("trial_summary", out)
    assert abs(doc["estimate"] - 0.366) < 0.02
    assert doc["comparators"]["exact_tail"] == pytest.approx(0.3659503124523701)


def test_mc_bs_zero_samples_rejected(capsys):
    code, _, err = run(capsys, "mc", "bs", "-n", "7", "-k", "3", "-l", "1",
                       "--samples", "0")
    assert code == 2
    assert "error" in err


def test_mc_as_all_saves_witness(capsys, tmp_path):
    witness = tmp_path / "witness.coloring"
    code, out, _ = run(capsys, "mc", "as-all", "-n", "6", "-k", "3", "-l", "1",
                       "-t", "3", "--samples", "50", "--seed", "3",
                       "--save-witness", str(witness))
    assert code == 0
    doc = validate("trial_summary", out)
    if doc["successes"]:
        assert witness.exists()
        saved = read_coloring(witness)
        assert saved.n == 6


def test_mc_sweep_csv(capsys):
    code, out, err = run(capsys, "mc", "sweep", "-k", "3", "-l", "1", "-t", "3",
                         "--n", "6:12:3", "--samples", "80", "--seed", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == ("n,samples,successes,estimate,wilson_lo,wilson_hi,"
                        "exact_tail,chernoff,union_bound")
    assert len(lines) == 4
    assert "threshold" in err


def test_mc_sweep_bad_range(capsys):
    code, _, _ = run(capsys, "mc", "sweep", "-k", "3", "-l", "1", "-t", "3",
                     "--n", "12:6:2", "--samples", "10")
    assert code == 2


# --- manifest / replay ------------------------------------------------------

def test_manifest_written_and_replay_identical(capsys, tmp_path):
    manifest = tmp_path / "run.json"
    code, out, _ = run(capsys, "--manifest", str(manifest),
                       "bounds", "-k", "3", "-l", "2")
    assert code == 0
    doc = validate("run_manifest", manifest.read_text())
    assert doc["subcommand"] == "bounds"
    code, replay_out, err = run(capsys, "replay", str(manifest))
    assert code == 0
    assert replay_out == out
    assert "byte-identical" in err


def test_replay_detects_drift(capsys, tmp_path):
    manifest = tmp_path / "run.json"
    code, _, _ = run(capsys, "--manifest", str(manifest), "bounds", "-k", "3", "-l", "2")
    doc = json.loads(manifest.read_text())
    doc["output_sha256"] = "0" * 64
    manifest.write_text(json.dumps(doc))
    code, _, err = run(capsys, "replay", str(manifest))
    assert code == 1
    assert "DIFFERS" in err


# --- repro ------------------------------------------------------------------

def test_repro_theta(capsys):
    code, out, _ = run(capsys, "repro", "theta")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_repro_thresholds(capsys):
    code, out, _ = run(capsys, "repro", "thresholds")
    assert code == 0
    assert out.count("[PASS]") == 4


def test_repro_averaging(capsys):
    code, out, _ = run(capsys, "repro", "averaging", "-n", "8", "--samples", "60")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_repro_k6(capsys, tmp_path):
    code, out, _ = run(capsys, "repro", "k6", "--out-dir", str(tmp_path / "certs"))
    assert code == 0
    assert out.count("[PASS]") == 2
    saved = sorted(p.name for p in (tmp_path / "certs").iterdir())
    assert saved == ["k6_ell1.coloring", "k6_ell2.coloring"]
