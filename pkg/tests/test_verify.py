"""Catalog construction, verdict logic, sweeps, and report formats."""

import csv
import io
import math

import pytest

import oracles
from wreduce.errors import UnsupportedParams
from wreduce.exact import LinearCombination, MordellTornheim3, WittenSl4
from wreduce.series import SummationConfig
from wreduce.verify import (
    DEFAULT_SWEEP_IDS,
    IDENTITY_IDS,
    IdentityRecord,
    Report,
    build_identity,
    check,
    default_parameters,
    expected_fail,
    failure_count,
    format_report_line,
    format_report_lines,
    format_summary_csv,
    inconclusive_count,
    probe_summary,
    sweep,
    symmetry_tuples,
    write_reports,
)


def _mirror(s):
    return (s[2], s[1], s[0], s[4], s[3], s[5])


# ---------------------------------------------------------------------------
# record builders

def test_symmetry_record_pairs_atom_with_its_mirror():
    rec = build_identity("SYMMETRY_EQ6", (1, 2, 3, 1, 2, 3))
    assert rec.lhs == LinearCombination.from_atom(WittenSl4((1, 2, 3, 1, 2, 3)))
    assert rec.rhs == LinearCombination.from_atom(
        WittenSl4(_mirror((1, 2, 3, 1, 2, 3)))
    )


def test_region_records_hold_the_same_atom_on_both_sides():
    for ident, slots in [
        ("REGION_EQ13", (2, 2, 0, 2, 0, 2)),
        ("REGION_EQ14", (2, 0, 2, 2, 0, 2)),
        ("REGION_EQ15", (0, 0, 2, 2, 2, 2)),
    ]:
        rec = build_identity(ident, (2, 2, 2, 2))
        atom = LinearCombination.from_atom(WittenSl4(slots))
        assert rec.lhs == atom
        assert rec.rhs == atom
        assert rec.note


def test_region_builders_reject_small_or_misshapen_params():
    for bad in [(1, 2, 2, 2), (2, 2, 2), (2, 2, 2, 2, 2)]:
        with pytest.raises(UnsupportedParams):
            build_identity("REGION_EQ13", bad)


def test_probe_appends_rejected_variant_by_default():
    rec = build_identity("TYPO_PROBE", (2, 1, 2, 1, 2))
    assert rec.parameters == (2, 1, 2, 1, 2, 1)
    assert expected_fail(rec)
    rec0 = build_identity("TYPO_PROBE", (2, 1, 2, 1, 2, 0))
    assert not expected_fail(rec0)


def test_unknown_identity_and_bad_arity_raise():
    with pytest.raises(UnsupportedParams):
        build_identity("NO_SUCH_ID", (1, 2, 3))
    with pytest.raises(UnsupportedParams):
        build_identity("HWZ_EQ3", (1, 2))
    with pytest.raises(UnsupportedParams):
        build_identity("THM21_EQ5", (1, 2, 3))
    with pytest.raises(UnsupportedParams):
        build_identity("LEMMA24_EQ19", (1, 2, 3))


def test_identity_id_list_is_fixed():
    assert len(IDENTITY_IDS) == 15
    assert DEFAULT_SWEEP_IDS == tuple(
        i for i in IDENTITY_IDS if i != "TYPO_PROBE"
    )


# ---------------------------------------------------------------------------
# default grids

def test_default_grid_sizes():
    assert len(default_parameters("SYMMETRY_EQ6")) == 20
    assert len(default_parameters("HWZ_EQ3")) == 120
    assert len(default_parameters("THM21_EQ5")) == 18
    assert len(default_parameters("THM21_EQ5", 18)) == 72
    assert len(default_parameters("THM22_FINAL")) == 252
    assert len(default_parameters("LEMMA24_EQ18")) == 56
    assert len(default_parameters("TYPO_PROBE")) == 8


def test_default_sweep_record_total():
    total = sum(len(default_parameters(i)) for i in DEFAULT_SWEEP_IDS)
    assert total == 571


def test_symmetry_tuples_are_seeded_and_mirror_free():
    ts = symmetry_tuples()
    assert ts == symmetry_tuples()
    assert len(ts) == 20
    for t in ts:
        assert t != _mirror(t)
        assert sum(t) <= 18


# ---------------------------------------------------------------------------
# verdicts

def test_check_pass_on_double_sum_reduction(cfg6):
    rep = check(build_identity("HWZ_EQ3", (2, 2, 2)), cfg6)
    assert rep.verdict == "PASS"
    assert rep.gap <= rep.budget
    assert rep.detail == ""
    assert rep.tolerance == cfg6.tolerance


def test_check_fail_on_rejected_transcription(cfg6):
    rep = check(build_identity("TYPO_PROBE", (2, 1, 2, 1, 2, 1)), cfg6)
    assert rep.verdict == "FAIL"
    assert rep.gap > 2 * rep.budget
    assert expected_fail(rep.record)
    assert failure_count([rep]) == 0
    assert inconclusive_count([rep]) == 0


def test_check_pass_on_validated_transcription(cfg6):
    rep = check(build_identity("TYPO_PROBE", (2, 1, 2, 1, 2, 0)), cfg6)
    assert rep.verdict == "PASS"


def test_check_turns_evaluation_errors_into_inconclusive(cfg6):
    # the slowly decaying pair sum cannot be certified to 1e-6 within the
    # configured budget, which must surface as a verdict, not a crash
    rep = check(build_identity("FACTOR_EQ12", (2, 1, 2, 1)), cfg6)
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.detail.startswith("TOLERANCE_UNREACHABLE:")
    assert math.isnan(rep.gap) and math.isnan(rep.budget)
    assert failure_count([rep]) == 0
    assert inconclusive_count([rep]) == 1


def test_region_checks_pass_at_tight_tolerance(cfg8):
    for ident in ("REGION_EQ13", "REGION_EQ14", "REGION_EQ15"):
        rep = check(build_identity(ident, (2, 2, 2, 2)), cfg8)
        assert rep.verdict == "PASS", (ident, rep.detail)
        assert rep.budget < 1e-7


def test_region_evaluator_agrees_with_brute_force(cfg8):
    from wreduce.verify import _region_value

    for ident, slots in [
        ("REGION_EQ13", (2, 2, 0, 2, 0, 2)),
        ("REGION_EQ14", (2, 0, 2, 2, 0, 2)),
        ("REGION_EQ15", (0, 0, 2, 2, 2, 2)),
    ]:
        ev = _region_value(ident, (2, 2, 2, 2), cfg8)
        mid, rad = oracles.w4_ref(slots, 400)
        assert abs(ev.midpoint - mid) <= ev.radius + rad, ident


# ---------------------------------------------------------------------------
# sweeps

def test_sweep_rejects_weight_cap_above_limit():
    with pytest.raises(UnsupportedParams):
        sweep(weight_cap=12)


def test_sweep_deduplicates_ids_and_keeps_order(cfg6):
    once = sweep(ids=["HWZ_EQ3"], weight_cap=6, cfg=cfg6)
    twice = sweep(ids=["HWZ_EQ3", "HWZ_EQ3"], weight_cap=6, cfg=cfg6)
    assert len(once) == len(twice) == 20
    assert [r.record.parameters for r in once] == [
        r.record.parameters for r in twice
    ]


def test_sweep_empty_ids_gives_empty_report(cfg6):
    assert sweep(ids=[], cfg=cfg6) == []
    assert format_report_lines([]) == ""


def test_sweep_parallel_output_is_byte_identical(cfg6):
    ids = ["LEMMA24_EQ19", "LEMMA24_EQ20"]
    serial = sweep(ids=ids, weight_cap=8, cfg=cfg6, threads=1)
    parallel = sweep(ids=ids, weight_cap=8, cfg=cfg6, threads=2)
    assert format_report_lines(serial, timings=False) == format_report_lines(
        parallel, timings=False
    )


def test_probe_sweep_discriminates_variants(cfg6):
    reports = sweep(ids=["TYPO_PROBE"], cfg=cfg6)
    assert len(reports) == 8
    line = probe_summary(reports)
    assert "variant 'eq22' validated" in line
    assert "failed at 3 of 4 grid points" in line
    assert failure_count(reports) == 0


def test_probe_summary_edge_wordings(cfg6):
    assert probe_summary([]) == ""
    reports = sweep(ids=["TYPO_PROBE"], cfg=cfg6)
    ok_only = [r for r in reports if r.record.parameters[-1] == 0]
    assert "no transcription failed" in probe_summary(ok_only)
    bad_only = [r for r in reports if r.verdict == "FAIL"]
    assert "nothing validated" in probe_summary(bad_only)


# ---------------------------------------------------------------------------
# report formats

def _nan_report():
    rec = IdentityRecord(
        identity_id="HWZ_EQ3",
        parameters=(1, 1, 1),
        lhs=LinearCombination.from_atom(MordellTornheim3(1, 1, 1)),
        rhs=LinearCombination.from_atom(MordellTornheim3(1, 1, 1)),
    )
    return Report(
        record=rec,
        lhs_eval=None,
        rhs_eval=None,
        gap=math.nan,
        budget=math.nan,
        verdict="INCONCLUSIVE",
        detail="UNSUPPORTED_PARAMS: pipes | are | not | field breaks",
        runtime_ms=7,
        tolerance=1e-6,
    )


def test_report_line_has_thirteen_fields(cfg6):
    rep = check(build_identity("HWZ_EQ3", (2, 2, 2)), cfg6)
    fields = format_report_line(rep).split("|")
    assert len(fields) == 13
    assert fields[0] == "HWZ_EQ3"
    assert fields[1] == "(2,2,2)"
    assert fields[10] == "PASS"
    assert fields[11] == "0"
    assert float(fields[4]) == rep.lhs_eval.midpoint


def test_report_line_escapes_pipes_and_blanks_nan():
    rep = _nan_report()
    fields = format_report_line(rep, timings=True).split("|")
    assert len(fields) == 13
    assert fields[4] == fields[8] == fields[9] == ""
    assert fields[11] == "7"
    assert fields[12] == "UNSUPPORTED_PARAMS: pipes / are / not / field breaks"


def test_runtime_column_is_zeroed_without_timings():
    rep = _nan_report()
    assert format_report_line(rep, timings=False).split("|")[11] == "0"


def test_format_lines_appends_probe_comment(cfg6):
    reports = sweep(ids=["TYPO_PROBE"], cfg=cfg6)
    text = format_report_lines(reports)
    lines = text.strip().split("\n")
    assert len(lines) == 9
    assert lines[-1].startswith("# typo probe:")


def test_summary_csv_round_trips(cfg6):
    reports = [check(build_identity("HWZ_EQ3", (2, 2, 2)), cfg6), _nan_report()]
    rows = list(csv.reader(io.StringIO(format_summary_csv(reports))))
    assert rows[0][:2] == ["identity_id", "params"]
    assert len(rows) == 3
    assert all(len(r) == 13 for r in rows)
    assert rows[1][10] == "PASS"
    assert rows[2][12].count("|") == 0


def test_write_reports_creates_both_files(tmp_path, cfg6):
    reports = [check(build_identity("HWZ_EQ3", (2, 2, 2)), cfg6)]
    path = tmp_path / "out.txt"
    csv_path = write_reports(reports, str(path))
    assert csv_path == str(path) + ".summary.csv"
    assert path.read_text(encoding="utf-8") == format_report_lines(reports)
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2 and rows[1][0] == "HWZ_EQ3"
