"""End-to-end CLI behavior through main(argv): output shapes, env
fallbacks, and the exit-code contract (0 pass, 1 verification failure,
2 usage, 3 convergence/tolerance)."""

import json
import math

import pytest

from wreduce.cli import main
from wreduce.reduce import reduce_unit_witten


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    # keep ambient WREDUCE_* settings out of every test
    import os

    for key in list(os.environ):
        if key.startswith("WREDUCE_"):
            monkeypatch.delenv(key)


# ---------------------------------------------------------------------------
# parser-level behavior

def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "eval" in capsys.readouterr().out


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 2
    capsys.readouterr()


def test_wrong_reduce_arity_is_usage_error(capsys):
    assert main(["reduce", "1", "1"]) == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# eval

def test_eval_zeta_text(capsys):
    assert main(["eval", "Z(2)"]) == 0
    out = capsys.readouterr().out
    assert "1.64493" in out
    assert "+/-" in out
    assert "terms=" in out and "elapsed=" in out


def test_eval_accepts_w4_spelling(capsys):
    assert main(["eval", "W4(2,3,4,0,0,0)"]) == 0
    capsys.readouterr()


def test_eval_json_payload(capsys):
    assert main(["eval", "Z(2)", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"expression", "midpoint", "radius", "terms", "elapsed_ms"}
    assert abs(doc["midpoint"] - math.pi**2 / 6) <= doc["radius"]
    assert doc["expression"] == "1 * Z(2)"


def test_eval_csv_header(capsys):
    assert main(["eval", "MT(2,2,2)", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("expression,midpoint,radius,terms,elapsed_ms\n")
    assert '"1 * MT(2,2,2)"' in out


def test_eval_divergence_gate_exits_three(capsys):
    assert main(["eval", "W(1,1,1,1,1,0)"]) == 3
    assert "CONVERGENCE_UNVERIFIED" in capsys.readouterr().err


def test_eval_parse_error_exits_two(capsys):
    assert main(["eval", "Q(3)"]) == 2
    assert "INADMISSIBLE_INDEX" in capsys.readouterr().err


def test_eval_malformed_env_tol_exits_two(capsys, monkeypatch):
    monkeypatch.setenv("WREDUCE_TOL", "abc")
    assert main(["eval", "Z(2)"]) == 2
    assert "WREDUCE_TOL" in capsys.readouterr().err


def test_eval_invalid_env_tol_exits_three(capsys, monkeypatch):
    monkeypatch.setenv("WREDUCE_TOL", "-1")
    assert main(["eval", "Z(2)"]) == 3
    assert "TOLERANCE_UNREACHABLE" in capsys.readouterr().err


def test_env_format_honored_and_flag_wins(capsys, monkeypatch):
    monkeypatch.setenv("WREDUCE_FORMAT", "json")
    assert main(["eval", "Z(2)"]) == 0
    json.loads(capsys.readouterr().out)
    assert main(["eval", "Z(2)", "--format", "text"]) == 0
    assert "+/-" in capsys.readouterr().out


def test_eval_out_writes_file(capsys, tmp_path):
    target = tmp_path / "ev.txt"
    assert main(["eval", "Z(3)", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert "+/-" in target.read_text(encoding="utf-8")


def test_unwritable_out_exits_two(capsys):
    assert main(["eval", "Z(2)", "--out", "/no-such-dir/x.txt"]) == 2
    assert "cannot write" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# reduce

def test_reduce_unit_family_matches_library_render(capsys):
    assert main(["reduce", "1", "1", "1", "1", "1"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == reduce_unit_witten(1, 1, 1).render()


def test_reduce_full_output_is_terminal(capsys):
    assert main(["reduce", "2", "2", "2", "2", "2", "--full"]) == 0
    out = capsys.readouterr().out
    assert "W(" not in out and "MT(" not in out
    assert "E(" in out


def test_reduce_rejects_nonpositive_exponents(capsys):
    assert main(["reduce", "0", "1", "1", "1", "1"]) == 2
    capsys.readouterr()


def test_reduce_variant_flag_changes_discriminating_point(capsys):
    assert main(["reduce", "2", "1", "2", "1", "2", "--variant", "eq22"]) == 0
    good = capsys.readouterr().out
    assert main(["reduce", "2", "1", "2", "1", "2", "--variant", "paper-final"]) == 0
    bad = capsys.readouterr().out
    assert good != bad


def test_reduce_variants_agree_at_unit_collapsed_pair(capsys):
    assert main(["reduce", "1", "1", "2", "1", "1", "--variant", "eq22"]) == 0
    good = capsys.readouterr().out
    assert main(["reduce", "1", "1", "2", "1", "1", "--variant", "paper-final"]) == 0
    assert capsys.readouterr().out == good


def test_reduce_json_then_eval_round_trip(capsys):
    assert main(["reduce", "2", "1", "2", "1", "2", "--full", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["input"] == "W(2,1,2,1,0,2)"
    assert main(["eval", doc["reduction"], "--format", "json"]) == 0
    reduced = json.loads(capsys.readouterr().out)
    assert main(["eval", "W(2,1,2,1,0,2)", "--format", "json"]) == 0
    direct = json.loads(capsys.readouterr().out)
    tol = reduced["radius"] + direct["radius"]
    assert abs(reduced["midpoint"] - direct["midpoint"]) <= tol


# ---------------------------------------------------------------------------
# verify

def test_verify_named_flags(capsys):
    assert main(["verify", "THM21_EQ5", "--a", "1", "--b", "2", "--s", "2", "2", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("THM21_EQ5|(1,2,2,2,2)|")
    assert "|PASS|" in out


def test_verify_positional_params(capsys):
    assert main(["verify", "HWZ_EQ3", "2", "2", "2"]) == 0
    assert "|PASS|" in capsys.readouterr().out


def test_verify_missing_named_flag_exits_two(capsys):
    assert main(["verify", "THM21_EQ5", "--a", "1"]) == 2
    assert "--b" in capsys.readouterr().err


def test_verify_wrong_s_arity_exits_two(capsys):
    assert main(["verify", "SYMMETRY_EQ6", "--s", "1", "2", "3"]) == 2
    assert "6 values" in capsys.readouterr().err


def test_verify_unknown_identity_exits_two(capsys):
    assert main(["verify", "NOT_AN_ID", "1", "2"]) == 2
    assert "unknown identity id" in capsys.readouterr().err


def test_verify_probe_defaults_to_rejected_transcription(capsys):
    argv = ["verify", "TYPO_PROBE", "--a", "2", "--b", "1", "--c", "2",
            "--d", "1", "--f", "2"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "|(2,1,2,1,2,1)|" in out
    assert "|FAIL|" in out


def test_verify_probe_variant_flag_selects_validated_one(capsys):
    argv = ["verify", "TYPO_PROBE", "--a", "2", "--b", "1", "--c", "2",
            "--d", "1", "--f", "2", "--variant", "eq22"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "|(2,1,2,1,2,0)|" in out
    assert "|PASS|" in out


def test_verify_inconclusive_exit_logic(capsys):
    argv = ["verify", "FACTOR_EQ12", "2", "1", "2", "1"]
    assert main(argv) == 1
    assert "|INCONCLUSIVE|" in capsys.readouterr().out
    assert main(argv + ["--allow-inconclusive"]) == 0
    capsys.readouterr()


def test_verify_exact_surrogate_instance(capsys):
    argv = ["verify", "LEMMA21_INSTANCE", "--mode", "0", "--a", "2",
            "--b", "1", "--s", "1"]
    assert main(argv) == 0
    assert "|PASS|" in capsys.readouterr().out


def test_verify_out_writes_line_and_csv(capsys, tmp_path):
    target = tmp_path / "one.txt"
    assert main(["verify", "HWZ_EQ3", "2", "2", "2", "--out", str(target)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS: wrote")
    assert target.exists()
    assert (tmp_path / "one.txt.summary.csv").exists()


def test_verify_json_document(capsys):
    assert main(["verify", "HWZ_EQ3", "2", "2", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["reports"]) == 1
    row = doc["reports"][0]
    assert row["verdict"] == "PASS"
    assert row["identity_id"] == "HWZ_EQ3"
    assert "probe_summary" not in doc


# ---------------------------------------------------------------------------
# sweep

def test_sweep_small_family(capsys):
    assert main(["sweep", "--ids", "LEMMA24_EQ20", "--weight", "6"]) == 0
    captured = capsys.readouterr()
    lines = [l for l in captured.out.strip().split("\n") if l]
    assert len(lines) == 6
    assert all("|PASS|" in l for l in lines)
    assert "6 records: 6 PASS, 0 FAIL, 0 INCONCLUSIVE" in captured.err


def test_sweep_env_weight_and_flag_override(capsys, monkeypatch):
    monkeypatch.setenv("WREDUCE_WEIGHT", "6")
    assert main(["sweep", "--ids", "HWZ_EQ3"]) == 0
    assert "20 records" in capsys.readouterr().err
    assert main(["sweep", "--ids", "HWZ_EQ3", "--weight", "5"]) == 0
    assert "10 records" in capsys.readouterr().err


def test_sweep_probe_reports_summary_on_stderr(capsys):
    assert main(["sweep", "--ids", "TYPO_PROBE"]) == 0
    captured = capsys.readouterr()
    assert "8 records: 5 PASS, 3 FAIL, 0 INCONCLUSIVE" in captured.err
    assert "typo probe: variant 'eq22' validated" in captured.err


def test_sweep_unknown_ids_exit_two(capsys):
    assert main(["sweep", "--ids", "HWZ_EQ3,BOGUS"]) == 2
    assert "BOGUS" in capsys.readouterr().err


def test_sweep_weight_above_cap_exits_two(capsys):
    assert main(["sweep", "--weight", "12"]) == 2
    assert "UNSUPPORTED_PARAMS" in capsys.readouterr().err


def test_sweep_thread_count_does_not_change_stdout(capsys):
    argv = ["sweep", "--ids", "LEMMA24_EQ19", "--weight", "8"]
    assert main(argv + ["--threads", "1"]) == 0
    first = capsys.readouterr().out
    assert main(argv + ["--threads", "2"]) == 0
    assert capsys.readouterr().out == first


def test_sweep_out_writes_pair_of_files(capsys, tmp_path):
    target = tmp_path / "report.txt"
    argv = ["sweep", "--ids", "LEMMA24_EQ20", "--weight", "6", "--out", str(target)]
    assert main(argv) == 0
    assert "wrote" in capsys.readouterr().out
    assert target.exists()
    assert (tmp_path / "report.txt.summary.csv").exists()


def test_sweep_json_document_carries_probe_summary(capsys):
    assert main(["sweep", "--ids", "TYPO_PROBE", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["reports"]) == 8
    assert "validated" in doc["probe_summary"]
