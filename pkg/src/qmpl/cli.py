"""Command line: ``qmpl {eval,zeta,table,verify,closure}``.

Exit status is 0 when everything passed, 1 when any report has a ``Fail``
verdict, and 2 for usage or domain errors (reported as JSON on stdout).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import QMPLError, UsageError
from .evaluation import Composition
from .harness.config import CONFIG_ENV, RunConfig
from .harness.output import REPORT_COLUMNS, to_csv, to_json, verify_payload
from .harness.suites import SUITES, run_suite
from .harness.tables import eval_command, table_command
from .noncomm import OrderedQMPL, ZetaWord, verify_ordered_closure, zeta_word_normal_form, zeta_word_product
from .report import Verdict

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("run configuration")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--mode", choices=["exact", "float"])
    g.add_argument("--precision", type=int, dest="precision_bits", metavar="BITS")
    g.add_argument("--trunc", type=int, dest="K", metavar="K")
    g.add_argument("--lattice-cap", type=int, dest="lattice_cap", metavar="N")
    g.add_argument("--degree-cap", type=int, dest="degree_cap", metavar="D")
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=["json", "csv"])
    g.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmpl", description="q-deformed multiple polylogarithm toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a truncated series")
    p.add_argument("--kind", choices=["qmpl", "classical", "qmzv"], default="qmpl")
    p.add_argument("--comp", required=True, help="composition, e.g. 1,2")
    p.add_argument("--z", action="append", default=[], help="argument (repeat per slot)")
    p.add_argument("--q")
    _common(p)

    p = sub.add_parser("zeta", help="evaluate zeta_q numerically or normalize a zeta word")
    p.add_argument("--comp", help="composition for a numeric zeta_q value")
    p.add_argument("--q")
    p.add_argument("--word", help="letters separated by '|', e.g. '3|2'")
    p.add_argument("--times", help="second word to multiply on the right")
    _common(p)

    p = sub.add_parser("table", help="tabulate a zeta_q grid or a classical-limit sweep")
    p.add_argument("--kind", choices=["qmzv_grid", "limit_sweep"], required=True)
    p.add_argument("--comp", required=True)
    p.add_argument("--q", action="append", default=[], help="grid point (qmzv_grid)")
    p.add_argument("--z", action="append", default=[], help="argument (limit_sweep)")
    p.add_argument("--j-min", type=int, default=4)
    p.add_argument("--j-max", type=int, default=12)
    _common(p)

    p = sub.add_parser("verify", help="run seeded verification suites")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or 'all'")
    p.add_argument("--count", type=int, help="cases per suite (default: per-suite)")
    _common(p)

    p = sub.add_parser("closure", help="ordered q-MPL closure of a product")
    p.add_argument("--a", required=True, help="'comp:slots', e.g. '1:1' or '1,1:1,2*3', or 'unit'")
    p.add_argument("--b", required=True)
    _common(p)
    return parser


def parse_ordered(text: str) -> OrderedQMPL:
    text = text.strip()
    if text == "unit":
        return OrderedQMPL(None)
    try:
        comp_s, slots_s = text.split(":")
        slots = [tuple(int(v) for v in s.split("*")) for s in slots_s.split(",")]
    except ValueError as exc:
        raise UsageError(f"malformed ordered q-MPL {text!r}; expected 'comp:slots'") from exc
    return OrderedQMPL(Composition.of(comp_s), tuple(slots))


def _config(args) -> RunConfig:
    base = RunConfig.load(args.config)
    keys = ("mode", "precision_bits", "K", "lattice_cap", "degree_cap", "seed", "format")
    return base.updated(**{k: getattr(args, k) for k in keys})


def _verify(args, config):
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for suite in suites:
        reports.extend(run_suite(suite, args.count, config))
    payload = verify_payload(reports, config, suites)
    failed = payload["summary"]["failed"]
    if config.format == "csv":
        text = to_csv([r.to_dict() for r in reports], REPORT_COLUMNS)
    else:
        text = to_json(payload)
    return text, EXIT_FAIL if failed else EXIT_OK


def _closure(args, config):
    report = verify_ordered_closure(parse_ordered(args.a), parse_ordered(args.b), config.degree_cap)
    status = EXIT_OK if report.passed else EXIT_FAIL
    if config.format == "csv":
        return to_csv([report.to_dict()], REPORT_COLUMNS), status
    return to_json(report.to_dict()), status


def _zeta(args, config):
    if args.word is not None:
        if args.comp is not None:
            raise UsageError("give either --word or --comp, not both")
        w = ZetaWord.parse(args.word)
        result = zeta_word_product(w, ZetaWord.parse(args.times)) if args.times else zeta_word_normal_form(w)
        row = {"input": args.word, "times": args.times, "normal_form": str(result), **result.to_dict()}
        columns = ["input", "times", "normal_form", "q_exponent", "letters"]
    elif args.comp is not None:
        row = eval_command("qmzv", args.comp, [], args.q, config)
        columns = list(row)
    else:
        raise UsageError("zeta needs --word or --comp")
    if config.format == "csv":
        return to_csv([row], columns), EXIT_OK
    return to_json(row), EXIT_OK


def _eval(args, config):
    row = eval_command(args.kind, args.comp, args.z, args.q, config)
    if config.format == "csv":
        return to_csv([row], list(row)), EXIT_OK
    return to_json(row), EXIT_OK


def _table(args, config):
    exponents = list(range(args.j_min, args.j_max + 1))
    table = table_command(args.kind, args.comp, config, q_values=args.q, z=args.z, exponents=exponents)
    if config.format == "csv":
        return to_csv(table["rows"], table["columns"]), EXIT_OK
    return to_json(table), EXIT_OK


_COMMANDS = {"eval": _eval, "zeta": _zeta, "table": _table, "verify": _verify, "closure": _closure}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        text, status = _COMMANDS[args.command](args, config)
    except QMPLError as exc:
        sys.stdout.write(to_json({"error": {"code": exc.code, "type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_ERROR
    if args.out:
        Path(args.out).write_text(text, newline="")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
