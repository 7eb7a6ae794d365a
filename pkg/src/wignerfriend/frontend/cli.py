"""Command-line entry point: ``wignerfriend <command> ...``.

Exit status is 0 on success, 1 when the input could not be used (plan
diagnostics, bad arguments, unreadable files) and 2 when an audit fails.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .. import collapse, pilotwave, quantum
from ..checkers import (
    fr_logic_contradiction,
    ghz_parity_satisfiable,
    joint_exists,
    certainty_premises,
    premises_from_table,
    time_order_audit,
)
from ..core import AuditReport, CorrelatorSet, Settings, chsh_value
from .plan import PlanError, load_plan, parse_angle
from .runner import correlators_to_csv, format_probability, json_ready, report_to_dict, run_plan, table_to_csv

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_AUDIT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for audit failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DIAGNOSTICS, f"{self.prog}: error: {message}\n")


def dump_json(obj) -> str:
    return json.dumps(json_ready(obj), indent=2) + "\n"


def _emit(text: str, out_dir: Path | None, filename: str):
    if out_dir is None:
        sys.stdout.write(text)
        return
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / filename).write_text(text, encoding="utf-8")


def _audits_csv(audits) -> str:
    lines = ["audit,verdict,passed"]
    lines += [f"{a.name},{a.verdict},{'true' if a.passed else 'false'}" for a in audits]
    return "\n".join(lines) + "\n"


def _emit_audits(args, name: str, audits: list[AuditReport]) -> int:
    if args.format == "csv":
        _emit(_audits_csv(audits), args.out, f"{name}.csv")
    else:
        _emit(dump_json({"audits": [a.to_dict() for a in audits]}), args.out, f"{name}.json")
    return EXIT_OK if all(a.passed for a in audits) else EXIT_AUDIT


def _run(args, simulate: bool) -> int:
    plan = load_plan(args.plan)
    if simulate:
        if args.trials is not None or args.seed is not None:
            plan = replace(
                plan,
                trials=args.trials if args.trials is not None else plan.trials,
                seed=args.seed if args.seed is not None else plan.seed,
            )
        if plan.trials is None:
            raise UsageError("simulate needs a trial count: add 'trials <n>' to the plan or pass --trials")
    else:
        plan = replace(plan, trials=None)
    report = run_plan(plan, simulate=simulate, workers=args.workers if simulate else 1)
    if args.format == "csv":
        if not report.tables:
            _emit(correlators_to_csv(report.correlators), args.out, f"{plan.name}-correlators.csv")
        elif args.out is None:
            # stdout holds one table; --out writes all of them
            _emit(table_to_csv(next(iter(report.tables.values()))), None, "")
        else:
            for name, table in report.tables.items():
                _emit(table_to_csv(table), args.out, f"{plan.name}-{name}.csv")
    else:
        _emit(dump_json(report_to_dict(report)), args.out, f"{plan.name}.json")
    for audit in report.audits:
        if not audit.passed:
            print(f"audit failed: {audit.name} ({audit.verdict})", file=sys.stderr)
    return report.exit_code


def _grid(steps: int):
    return [2 * math.pi * k / steps for k in range(steps)]


def cmd_chsh_scan(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    lines = ["a1,b1,a2,b2,S_quantum,S_pilotwave,S_collapse"]
    worst = {"pilotwave": 0.0, "collapse": 0.0}
    for angles in itertools.product(_grid(args.steps), repeat=4):
        s = Settings(*angles)
        sq = chsh_value(quantum.quantum_correlator_set(s))
        sp = chsh_value(pilotwave.pm_correlators(s).chain)
        sc = chsh_value(collapse.collapse_correlators(s))
        worst["pilotwave"] = max(worst["pilotwave"], sp)
        worst["collapse"] = max(worst["collapse"], sc)
        cells = [format_probability(x) for x in (*angles, sq, sp, sc)]
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out, "chsh-scan.csv")
    bad = {k: v for k, v in worst.items() if v > 2 + 1e-9}
    if bad:
        print(f"CHSH bound exceeded by definite-outcome models: {bad}", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


def _correlators_from_args(args) -> tuple[CorrelatorSet, str]:
    if args.correlators is not None:
        return CorrelatorSet(*args.correlators), "given"
    s = Settings(*(parse_angle(x) for x in args.settings))
    if args.model == "quantum":
        return quantum.quantum_correlator_set(s), "quantum"
    if args.model == "collapse":
        return collapse.collapse_correlators(s), "collapse"
    return pilotwave.pm_correlators(s).chain, "pilotwave"


def cmd_check_fine(args) -> int:
    try:
        c, source = _correlators_from_args(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = joint_exists(c, unbiased_marginals=not args.free_marginals)
    values = {
        "source": source,
        "correlators": c.as_dict(),
        "chsh": dict(res.chsh),
        "violated": res.violated,
        "witness": None,
    }
    if res.witness is not None:
        values["witness"] = {
            ",".join(res.witness.label(q, s) for q, s in zip(res.witness.parties, signs)): p
            for signs, p in res.witness.atoms(nonzero=True)
        }
    verdict = "FEASIBLE" if res.feasible else "INFEASIBLE"
    # a definite-outcome model must always admit a joint distribution
    passed = res.feasible or source in ("given", "quantum")
    return _emit_audits(args, "fine", [AuditReport("fine-joint-existence", verdict, passed, values)])


def cmd_check_ghz(args) -> int:
    x, y = 0.0, math.pi / 2
    contexts = {"xyy": (x, y, y), "yxy": (y, x, y), "yyx": (y, y, x), "xxx": (x, x, x)}
    expected = {"xyy": -1.0, "yxy": -1.0, "yyx": -1.0, "xxx": 1.0}
    values = {k: quantum.ghz_correlator(*v) for k, v in contexts.items()}
    match = all(abs(values[k] - expected[k]) <= 1e-12 for k in contexts)
    count = ghz_parity_satisfiable()
    audits = [
        AuditReport("ghz-correlators", "MATCH" if match else "MISMATCH", match, {"values": values, "expected": expected}),
        AuditReport("ghz-parity", "UNSATISFIABLE" if count == 0 else "SATISFIABLE", count == 0, {"satisfying_assignments": count, "of": 64}),
    ]
    return _emit_audits(args, "ghz", audits)


def cmd_check_fr(args) -> int:
    certain = fr_logic_contradiction(certainty_premises())
    pw = fr_logic_contradiction(premises_from_table(pilotwave.fr_pilotwave_table()))
    audits = [
        AuditReport("fr-logic-certainty-premises", certain.verdict, certain.verdict == "CONTRADICTION", certain.values),
        AuditReport("fr-logic-pilotwave", pw.verdict, pw.verdict == "CONSISTENT", pw.values),
    ]
    return _emit_audits(args, "fr", audits)


def cmd_check_timeorder(args) -> int:
    return _emit_audits(args, "timeorder", [time_order_audit()])


def cmd_audit_fr_mixed(args) -> int:
    return _emit_audits(args, "fr-mixed", [pilotwave.fr_mixed_claims_audit(pilotwave.fr_pilotwave_table())])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wignerfriend", description="Wigner's-friend experiments under quantum, pilot-wave and collapse models.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", type=Path, default=None, help="write files into this directory instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analytic", parents=[common], help="exact tables, correlators and audits for a plan")
    p.add_argument("plan", type=Path)
    p.set_defaults(func=lambda a: _run(a, simulate=False))

    p = sub.add_parser("simulate", parents=[common], help="analytic run plus seeded Monte Carlo comparison")
    p.add_argument("plan", type=Path)
    p.add_argument("--trials", type=int, default=None, help="overrides the plan's trials")
    p.add_argument("--seed", type=int, default=None, help="overrides the plan's seed")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=lambda a: _run(a, simulate=True))

    p = sub.add_parser("chsh-scan", parents=[common], help="CSV of S over a grid of the four settings")
    p.add_argument("--steps", type=int, default=8, help="grid points per angle over [0, 2pi)")
    p.set_defaults(func=cmd_chsh_scan)

    check = sub.add_parser("check", help="run one of the contradiction checkers")
    csub = check.add_subparsers(dest="checker", required=True, parser_class=_Parser)
    p = csub.add_parser("fine", parents=[common], help="joint-distribution existence for four cross correlators")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--correlators", nargs=4, type=float, metavar=("A1B1", "B1A2", "A2B2", "A1B2"))
    src.add_argument("--settings", nargs=4, metavar=("a1", "b1", "a2", "b2"))
    p.add_argument("--model", choices=("quantum", "pilotwave", "collapse"), default="quantum")
    p.add_argument("--free-marginals", action="store_true", help="do not require unbiased single-party marginals")
    p.set_defaults(func=cmd_check_fine)
    p = csub.add_parser("ghz", parents=[common], help="GHZ perfect correlations and parity count")
    p.set_defaults(func=cmd_check_ghz)
    p = csub.add_parser("fr", parents=[common], help="FR implication chain, certainty and pilot-wave premises")
    p.set_defaults(func=cmd_check_fr)
    p = csub.add_parser("timeorder", parents=[common], help="which mixed correlators any event order allows")
    p.set_defaults(func=cmd_check_timeorder)

    audit = sub.add_parser("audit", help="model audits")
    asub = audit.add_subparsers(dest="audit", required=True, parser_class=_Parser)
    p = asub.add_parser("fr-mixed", parents=[common], help="FR certainty claims against the pilot-wave table")
    p.set_defaults(func=cmd_audit_fr_mixed)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlanError as exc:
        source = str(getattr(args, "plan", "<plan>"))
        for d in exc.diagnostics:
            print(d.format(source), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    except (UsageError, OSError) as exc:
        print(f"wignerfriend: error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS


if __name__ == "__main__":
    sys.exit(main())
