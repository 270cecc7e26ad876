"""Command-line front end.

Four subcommands:

    wreduce eval "MT(2,2,2)"          certified numeric evaluation
    wreduce reduce 2 2 2 2 2 --full   symbolic reduction of W(a,b,c,d,0,f)
    wreduce verify THM21_EQ5 --a 1 --b 2 --s 2 2 2
    wreduce sweep --weight 8 --out report.txt

Configuration resolves flag > WREDUCE_<FLAG> environment variable >
default.  Exit codes are a stable contract: 0 all pass, 1 verification
failure, 2 usage error, 3 convergence or tolerance error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional, Sequence

from .errors import InadmissibleIndex, UnsupportedParams, WreduceError
from .exact import parse
from .reduce import VARIANTS, reduce_witten
from .series import SummationConfig, eval_lincomb
from .verify import (
    DEFAULT_WEIGHT_CAP,
    IDENTITY_IDS,
    build_identity,
    check,
    failure_count,
    format_report_line,
    format_report_lines,
    format_summary_csv,
    inconclusive_count,
    probe_summary,
    sweep,
    write_reports,
)

_FORMATS = ("text", "json", "csv")

# environment fallbacks mirror the long flags with a WREDUCE_ prefix
_ENV_SPEC = {
    "tol": ("WREDUCE_TOL", float),
    "max_terms": ("WREDUCE_MAX_TERMS", int),
    "threads": ("WREDUCE_THREADS", int),
    "format": ("WREDUCE_FORMAT", str),
    "out": ("WREDUCE_OUT", str),
    "variant": ("WREDUCE_VARIANT", str),
    "weight": ("WREDUCE_WEIGHT", int),
    "ids": ("WREDUCE_IDS", str),
}


class _UsageError(Exception):
    pass


def _resolve(args: argparse.Namespace, name: str, default):
    """flag > environment > default, with typed env parsing."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    env_name, conv = _ENV_SPEC[name]
    raw = os.environ.get(env_name)
    if raw is None or raw == "":
        return default
    try:
        return conv(raw)
    except ValueError as exc:
        raise _UsageError(f"bad {env_name} value {raw!r}: {exc}") from exc


def _config(args: argparse.Namespace) -> SummationConfig:
    tol = _resolve(args, "tol", 1e-6)
    max_terms = _resolve(args, "max_terms", 10**6)
    return SummationConfig(tolerance=tol, max_terms=max_terms).validated()


def _format(args: argparse.Namespace) -> str:
    fmt = _resolve(args, "format", "text")
    if fmt not in _FORMATS:
        raise _UsageError(f"unknown format {fmt!r}; choose from {', '.join(_FORMATS)}")
    return fmt


def _variant(args: argparse.Namespace) -> str:
    variant = _resolve(args, "variant", "eq22")
    if variant not in VARIANTS:
        raise _UsageError(
            f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}"
        )
    return variant


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") or not text else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")


# ---------------------------------------------------------------------------
# eval

def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fmt = _format(args)
    lc = parse(args.expression)
    t0 = time.perf_counter()
    ev = eval_lincomb(lc, cfg)
    elapsed_ms = (time.perf_counter() - t0) * 1000
    if fmt == "json":
        text = json.dumps(
            {
                "expression": lc.render(),
                "midpoint": ev.midpoint,
                "radius": ev.radius,
                "terms": ev.terms,
                "elapsed_ms": round(elapsed_ms, 3),
            },
            sort_keys=True,
        )
    elif fmt == "csv":
        text = "expression,midpoint,radius,terms,elapsed_ms\n" + ",".join(
            [
                '"' + lc.render() + '"',
                repr(ev.midpoint),
                repr(ev.radius),
                str(ev.terms),
                f"{elapsed_ms:.3f}",
            ]
        )
    else:
        text = (
            f"{ev.midpoint!r} +/- {ev.radius:.3e}"
            f"  (terms={ev.terms}, elapsed={elapsed_ms:.1f} ms)"
        )
    _emit(text, _resolve(args, "out", None))
    return 0


# ---------------------------------------------------------------------------
# reduce

def _cmd_reduce(args: argparse.Namespace) -> int:
    from .exact import WittenSl4

    fmt = _format(args)
    variant = _variant(args)
    a, b, c, d, f = args.indices
    if min(a, b, c, d, f) < 1:
        raise _UsageError("reduce takes five positive integers a b c d f")
    atom = WittenSl4((a, b, c, d, 0, f))
    expand = bool(args.full)
    lc = reduce_witten(
        atom,
        variant=variant,
        expand_remainder=expand,
        expand_mt=expand or bool(args.mt_expand),
    )
    if fmt == "json":
        text = json.dumps(
            {
                "input": f"W({a},{b},{c},{d},0,{f})",
                "variant": variant,
                "full": expand,
                "terms": len(lc.items()),
                "reduction": lc.render(),
            },
            sort_keys=True,
        )
    elif fmt == "csv":
        text = "input,variant,reduction\n" + ",".join(
            [f'"W({a},{b},{c},{d},0,{f})"', variant, '"' + lc.render() + '"']
        )
    else:
        text = lc.render()
    _emit(text, _resolve(args, "out", None))
    return 0


# ---------------------------------------------------------------------------
# verify

# named-flag slots, in catalog parameter order, for each identity family
_PARAM_SLOTS = {
    "SYMMETRY_EQ6": (("s", 6),),
    "FACTOR_EQ12": (("a", 1), ("b", 1), ("c", 1), ("d", 1)),
    "REGION_EQ13": (("a", 1), ("b", 1), ("c", 1), ("d", 1)),
    "REGION_EQ14": (("a", 1), ("b", 1), ("c", 1), ("d", 1)),
    "REGION_EQ15": (("a", 1), ("b", 1), ("c", 1), ("d", 1)),
    "COMBINE_EQ16": (("s", 2), ("i", 1), ("t", 1)),
    "COMBINE_EQ17": (("s", 2), ("i", 1), ("t", 1)),
    "LEMMA21_INSTANCE": (("mode", 1), ("a", 1), ("b", 1), ("s", 0)),
    "HWZ_EQ3": (("a", 1), ("b", 1), ("c", 1)),
    "THM21_EQ5": (("a", 1), ("b", 1), ("s", 3)),
    "LEMMA24_EQ18": (("a", 1), ("b", 1), ("d", 1)),
    "LEMMA24_EQ19": (("a", 1), ("d", 1)),
    "LEMMA24_EQ20": (("a", 1), ("d", 1)),
    "THM22_FINAL": (("a", 1), ("b", 1), ("c", 1), ("d", 1), ("f", 1)),
    "TYPO_PROBE": (("a", 1), ("b", 1), ("c", 1), ("d", 1), ("f", 1)),
}


def _verify_params(args: argparse.Namespace) -> tuple[int, ...]:
    ident = args.identity_id
    if ident not in _PARAM_SLOTS:
        raise _UsageError(
            f"unknown identity id {ident!r}; known ids: {', '.join(IDENTITY_IDS)}"
        )
    if args.params:
        return tuple(args.params)
    values: list[int] = []
    for name, arity in _PARAM_SLOTS[ident]:
        got = getattr(args, name, None)
        if got is None:
            raise _UsageError(
                f"{ident} needs --{name} (or give all parameters positionally)"
            )
        if name == "s":
            if arity and len(got) != arity:
                raise _UsageError(f"{ident} takes {arity} values for --s, got {len(got)}")
            values.extend(got)
        else:
            values.append(got)
    if ident == "TYPO_PROBE" and getattr(args, "variant", None) is not None:
        values.append(VARIANTS.index(_variant(args)))
    return tuple(values)


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fmt = _format(args)
    timings = bool(args.timings)
    params = _verify_params(args)
    record = build_identity(args.identity_id, params)
    reports = [check(record, cfg)]
    out = _resolve(args, "out", None)
    if fmt == "json":
        _emit(_reports_json(reports, timings), out)
    elif fmt == "csv":
        _emit(format_summary_csv(reports, timings), out)
    else:
        body = format_report_lines(reports, timings)
        if out:
            csv_path = write_reports(reports, out, timings)
            print(f"{reports[0].verdict}: wrote {out} and {csv_path}")
        else:
            sys.stdout.write(body)
    fails = failure_count(reports)
    bad = inconclusive_count(reports)
    if fails:
        return 1
    if bad and not args.allow_inconclusive:
        return 1
    return 0


# ---------------------------------------------------------------------------
# sweep

def _reports_json(reports, timings: bool) -> str:
    rows = []
    for rep in reports:
        rows.append(
            {
                "identity_id": rep.record.identity_id,
                "params": list(rep.record.parameters),
                "lhs": rep.record.lhs.render(),
                "rhs": rep.record.rhs.render(),
                "lhs_mid": rep.lhs_eval.midpoint if rep.lhs_eval else None,
                "lhs_rad": rep.lhs_eval.radius if rep.lhs_eval else None,
                "rhs_mid": rep.rhs_eval.midpoint if rep.rhs_eval else None,
                "rhs_rad": rep.rhs_eval.radius if rep.rhs_eval else None,
                "gap": None if rep.gap != rep.gap else rep.gap,
                "budget": None if rep.budget != rep.budget else rep.budget,
                "verdict": rep.verdict,
                "runtime_ms": rep.runtime_ms if timings else 0,
                "detail": rep.detail,
            }
        )
    doc: dict = {"reports": rows}
    summary = probe_summary(reports)
    if summary:
        doc["probe_summary"] = summary
    return json.dumps(doc, sort_keys=True)


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fmt = _format(args)
    timings = bool(args.timings)
    weight = _resolve(args, "weight", DEFAULT_WEIGHT_CAP)
    threads = _resolve(args, "threads", os.cpu_count() or 1)
    ids_text = _resolve(args, "ids", None)
    ids = None
    if ids_text:
        ids = [piece.strip() for piece in ids_text.split(",") if piece.strip()]
        unknown = [i for i in ids if i not in IDENTITY_IDS]
        if unknown:
            raise _UsageError(
                f"unknown identity ids: {', '.join(unknown)}; "
                f"known ids: {', '.join(IDENTITY_IDS)}"
            )
    reports = sweep(ids=ids, weight_cap=weight, cfg=cfg, threads=threads)
    out = _resolve(args, "out", None)
    if fmt == "json":
        _emit(_reports_json(reports, timings), out)
    elif fmt == "csv":
        _emit(format_summary_csv(reports, timings), out)
    else:
        if out:
            csv_path = write_reports(reports, out, timings)
            print(f"wrote {out} and {csv_path}")
        else:
            sys.stdout.write(format_report_lines(reports, timings))
    verdicts = {"PASS": 0, "FAIL": 0, "INCONCLUSIVE": 0}
    for rep in reports:
        verdicts[rep.verdict] += 1
    print(
        f"{len(reports)} records: {verdicts['PASS']} PASS, "
        f"{verdicts['FAIL']} FAIL, {verdicts['INCONCLUSIVE']} INCONCLUSIVE",
        file=sys.stderr,
    )
    summary = probe_summary(reports)
    if summary:
        print(summary, file=sys.stderr)
    fails = failure_count(reports)
    bad = inconclusive_count(reports)
    if fails:
        return 1
    if bad and not args.allow_inconclusive:
        return 1
    return 0


# ---------------------------------------------------------------------------
# parser assembly

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tol", type=float, default=None, help="certified radius target")
    sub.add_argument(
        "--max-terms", type=int, default=None, dest="max_terms",
        help="per-axis term budget for 1-D and 2-D sums",
    )
    sub.add_argument(
        "--format", choices=_FORMATS, default=None, help="output format"
    )
    sub.add_argument("--out", default=None, help="write output to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wreduce",
        description="Reduce and verify rank-3 Witten zeta values",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate an expression numerically")
    p_eval.add_argument("expression", help='e.g. "MT(2,2,2)" or "Z(2)*E(2,1)"')
    _add_common(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_red = subs.add_parser("reduce", help="reduce W(a,b,c,d,0,f) symbolically")
    p_red.add_argument("indices", type=int, nargs=5, metavar="N")
    p_red.add_argument(
        "--variant", choices=VARIANTS, default=None,
        help="binomial-weight transcription to use",
    )
    p_red.add_argument(
        "--full", action="store_true",
        help="expand remainders and double sums down to Euler sums",
    )
    p_red.add_argument(
        "--mt-expand", action="store_true", dest="mt_expand",
        help="expand double sums into depth-two Euler sums",
    )
    _add_common(p_red)
    p_red.set_defaults(func=_cmd_reduce)

    p_ver = subs.add_parser("verify", help="check one catalog identity")
    p_ver.add_argument("identity_id", metavar="IDENTITY")
    p_ver.add_argument("params", type=int, nargs="*", metavar="N",
                       help="parameters in catalog order")
    for name in ("a", "b", "c", "d", "f", "i", "t", "mode"):
        p_ver.add_argument(f"--{name}", type=int, default=None)
    p_ver.add_argument("--s", type=int, nargs="+", default=None)
    p_ver.add_argument(
        "--variant", choices=VARIANTS, default=None,
        help="transcription selector for the typo probe",
    )
    p_ver.add_argument("--timings", action="store_true")
    p_ver.add_argument("--allow-inconclusive", action="store_true",
                       dest="allow_inconclusive")
    _add_common(p_ver)
    p_ver.set_defaults(func=_cmd_verify)

    p_sw = subs.add_parser("sweep", help="check whole identity grids")
    p_sw.add_argument("--ids", default=None,
                      help="comma-separated identity ids (default: all but the probe)")
    p_sw.add_argument("--weight", type=int, default=None, help="total weight cap")
    p_sw.add_argument("--threads", type=int, default=None)
    p_sw.add_argument("--timings", action="store_true")
    p_sw.add_argument("--allow-inconclusive", action="store_true",
                      dest="allow_inconclusive")
    _add_common(p_sw)
    p_sw.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed its message; fold --help's 0 through
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InadmissibleIndex, UnsupportedParams) as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except WreduceError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 3
    except OSError as exc:
        path = getattr(exc, "filename", None) or "output"
        print(f"error: cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
