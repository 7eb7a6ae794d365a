"""Turn a validated plan into tables, correlators and audits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .. import collapse, pilotwave, quantum
from ..checkers import (
    fr_logic_contradiction,
    ghz_parity_satisfiable,
    joint_exists,
    certainty_premises,
    premises_from_table,
    time_order_audit,
)
import numpy as np

from ..core import (
    PM_PARTIES,
    AuditReport,
    CorrelatorSet,
    JointTable,
    Settings,
    chsh_value,
    correlators_from_table,
)
from ..montecarlo import GENERATOR, TrialPlan, analytic_table, compare, sample
from .plan import Diagnostic, ExperimentPlan, Measure, PlanError, Undo, serialize_plan

CHSH_TOL = 1e-9


@dataclass
class Report:
    plan: ExperimentPlan
    tables: dict[str, JointTable] = field(default_factory=dict)
    correlators: dict[str, dict[str, float]] = field(default_factory=dict)
    audits: list[AuditReport] = field(default_factory=list)
    labels: dict[str, str] = field(default_factory=dict)
    seed: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.audits)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 2


def unsupported(plan: ExperimentPlan, message: str) -> PlanError:
    return PlanError([Diagnostic("UNSUPPORTED_MODEL", plan.engine_line or 1, 1, message)])


def _pm_roles(plan: ExperimentPlan):
    """Map a two-party, two-measurement-each plan onto A1, B1, A2, B2.

    The party measured first plays the a-particle.
    """
    for p in plan.parties:
        if len(plan.measurements(p)) != 2:
            return None
    first = next(e.party for e in plan.events if isinstance(e, Measure))
    other = next(p for p in plan.parties if p != first)
    (a1, a2), (b1, b2) = plan.measurements(first), plan.measurements(other)
    for m in (a1, a2, b1, b2):
        if m.setting.value is None:
            return None
    roles = {"A1": a1, "B1": b1, "A2": a2, "B2": b2}
    return first, other, roles


def _pm_order_matches(plan: ExperimentPlan, first: str, other: str) -> bool:
    pattern = [
        ("measure", first),
        ("measure", other),
        ("undo", other),
        ("undo", first),
        ("measure", other),
        ("measure", first),
    ]
    got = [("measure" if isinstance(e, Measure) else "undo", e.party) for e in plan.events]
    return got == pattern


def _relabel(table: JointTable, labels) -> JointTable:
    return JointTable(tuple(labels), table.probs, None)


def _chsh_audit(name: str, c: CorrelatorSet, forbidden: bool) -> AuditReport:
    s = chsh_value(c)
    violated = s > 2 + CHSH_TOL
    return AuditReport(
        name=name,
        verdict="VIOLATED" if violated else "SATISFIED",
        passed=not (violated and forbidden),
        values={"S": s, "bound": 2.0, "definite_outcomes": forbidden},
    )


def _fine_audit(c: CorrelatorSet, definite: bool) -> AuditReport:
    res = joint_exists(c)
    return AuditReport(
        name="fine-joint-existence",
        verdict="FEASIBLE" if res.feasible else "INFEASIBLE",
        passed=res.feasible or not definite,
        values={"violated": res.violated, "chsh": dict(res.chsh)},
    )


def _run_singlet(plan: ExperimentPlan, report: Report):
    roles = _pm_roles(plan)
    if roles is None:
        if plan.engine == "quantum" and all(len(plan.measurements(p)) == 1 for p in plan.parties):
            ma, mb = (plan.measurements(p)[0] for p in plan.parties)
            if not any(isinstance(e, Undo) for e in plan.events):
                report.tables["joint"] = quantum.singlet_table(ma.setting.value, mb.setting.value, (ma.tag, mb.tag))
                report.correlators["quantum"] = {
                    ma.tag + mb.tag: quantum.singlet_correlator(ma.setting.value, mb.setting.value)
                }
                if not plan.trials:
                    return None
                s = Settings(ma.setting.value, mb.setting.value, 0.0, 0.0)
                return TrialPlan("quantum-pair", plan.trials, plan.seed or 0, s)
        raise unsupported(
            plan,
            f"no {plan.engine} model for this singlet plan; expected two angle measurements per party"
            + (" or, for quantum, one each" if plan.engine == "quantum" else ""),
        )
    first, other, r = roles
    s = Settings(r["A1"].setting.value, r["B1"].setting.value, r["A2"].setting.value, r["B2"].setting.value)
    report.labels = {role: m.tag for role, m in r.items()}
    labels = [r[p].tag for p in PM_PARTIES]

    if plan.engine == "pilotwave":
        if not _pm_order_matches(plan, first, other):
            raise unsupported(
                plan,
                "pilot-wave PM model is defined only for the order: measure a, measure b, undo b, "
                "undo a, measure b, measure a",
            )
        table = pilotwave.pm_joint(s)
        pw = pilotwave.pm_correlators(s)
        report.tables["joint"] = _relabel(table, labels)
        report.correlators["chain"] = pw.chain.as_dict()
        report.correlators["closed_form"] = pw.closed_form.as_dict()
        deviation = max(abs(pw.chain.as_dict()[k] - v) for k, v in pw.closed_form.as_dict().items() if k not in ("A1A2", "B1B2"))
        report.audits.append(
            AuditReport(
                "closed-form-cross-correlators",
                "MATCH" if deviation <= 1e-9 else "MISMATCH",
                deviation <= 1e-9,
                {"max_deviation": deviation},
            )
        )
        report.audits.append(pilotwave.same_side_audit(s))
        report.audits.append(_chsh_audit("chsh", pw.chain, forbidden=True))
        report.audits.append(_fine_audit(pw.chain, definite=True))
        report.audits.append(time_order_audit())
        return TrialPlan("pilotwave-pm", plan.trials, plan.seed or 0, s) if plan.trials else None

    if plan.engine == "collapse":
        table = collapse.collapse_chain_joint(s)
        report.tables["joint"] = _relabel(table, labels)
        cf = collapse.collapse_correlators(s)
        report.correlators["chain"] = correlators_from_table(table).as_dict()
        report.correlators["closed_form"] = cf.as_dict()
        report.audits.append(_chsh_audit("chsh", cf, forbidden=True))
        report.audits.append(_fine_audit(cf, definite=True))
        if any(isinstance(e, Undo) for e in plan.events):
            report.notes.append("undo events have no effect under irreversible collapse")
        return TrialPlan("collapse-pm", plan.trials, plan.seed or 0, s) if plan.trials else None

    qc = quantum.quantum_correlator_set(s)
    report.correlators["quantum"] = qc.as_dict()
    report.audits.append(_chsh_audit("chsh", qc, forbidden=False))
    report.audits.append(_fine_audit(qc, definite=False))
    if plan.trials:
        raise unsupported(plan, "the quantum assignment for friend/Wigner pairs has no joint distribution to sample")
    return None


def _hardy_roles(plan: ExperimentPlan):
    coin, electron = plan.parties
    mc, me = plan.measurements(coin), plan.measurements(electron)
    ok = all(
        len(ms) == 2 and ms[0].setting.basis == "z-basis" and ms[1].setting.basis == "x-basis" for ms in (mc, me)
    )
    if not ok:
        return None
    return {"Fbar": mc[0].tag, "F": me[0].tag, "W": me[1].tag, "Wbar": mc[1].tag}


def _run_hardy(plan: ExperimentPlan, report: Report):
    roles = _hardy_roles(plan)
    if roles is None:
        raise unsupported(
            plan,
            "FR plans measure each party twice: z-basis (friend) then x-basis (Wigner); "
            "the first declared party is the coin",
        )
    report.labels = roles
    if plan.engine == "pilotwave":
        table = pilotwave.fr_pilotwave_table()
        report.tables["joint"] = table
        report.audits.append(pilotwave.fr_mixed_claims_audit(table))
        report.audits.append(_fr_logic_audit(premises_from_table(table), "CONSISTENT", "fr-logic-pilotwave"))
        report.audits.append(_fr_logic_audit(certainty_premises(), "CONTRADICTION", "fr-logic-certainty-premises"))
        return TrialPlan("fr-table", plan.trials, plan.seed or 0) if plan.trials else None
    if plan.engine == "quantum":
        friends, wigners = quantum.hardy_born_tables()
        report.tables["friends"] = friends
        report.tables["wigners"] = wigners
        report.audits.append(_fr_logic_audit(certainty_premises(), "CONTRADICTION", "fr-logic-certainty-premises"))
        if plan.trials:
            raise unsupported(plan, "no single joint over all four FR outcomes exists in the quantum engine")
        return None
    raise unsupported(plan, "no collapse model is defined for the FR arrangement")


def _fr_logic_audit(premises, expected: str, name: str) -> AuditReport:
    rep = fr_logic_contradiction(premises)
    return AuditReport(name, rep.verdict, rep.verdict == expected, rep.values)


def _run_ghz(plan: ExperimentPlan, report: Report):
    if plan.engine != "quantum":
        raise unsupported(plan, f"no {plan.engine} model is defined for the GHZ arrangement")
    per_party = [plan.measurements(p) for p in plan.parties]
    if any(m.setting.value is None for ms in per_party for m in ms):
        raise unsupported(plan, "GHZ measurements need x, y or an equatorial angle")
    counts = {len(ms) for ms in per_party}
    if plan.trials:
        raise unsupported(plan, "GHZ plans are analytic only")
    if counts == {1}:
        ms = [ms[0] for ms in per_party]
        angles = [m.setting.value for m in ms]
        report.tables["joint"] = quantum.ghz_table(*angles, parties=[m.tag for m in ms])
        report.correlators["quantum"] = {"".join(m.tag for m in ms): quantum.ghz_correlator(*angles)}
        return None
    if counts != {2}:
        raise unsupported(plan, "GHZ plans measure every party once, or twice (friend then Wigner)")

    # friend = first measurement of a party, Wigner = second
    values = {}
    constraints = []
    names = {0: "f", 1: "w"}
    for choice in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)):
        ms = [per_party[k][c] for k, c in enumerate(choice)]
        e = quantum.ghz_correlator(*(m.setting.value for m in ms))
        key = "".join(m.tag for m in ms)
        values[key] = e
        if abs(abs(e) - 1) <= 1e-12:
            vars_ = tuple(f"{names[c]}{k + 1}" for k, c in enumerate(choice))
            constraints.append((vars_, 1 if e > 0 else -1))
    report.correlators["quantum"] = values
    count = ghz_parity_satisfiable(tuple(constraints))
    report.audits.append(
        AuditReport(
            "ghz-parity",
            "UNSATISFIABLE" if count == 0 else "SATISFIABLE",
            True,
            {"constraints": [[list(v), p] for v, p in constraints], "satisfying_assignments": count, "of": 64},
        )
    )
    return None


def run_plan(plan: ExperimentPlan, simulate: bool = True, workers: int = 1) -> Report:
    report = Report(plan=plan, seed=plan.seed)
    dispatch = {"singlet": _run_singlet, "hardy": _run_hardy, "ghz": _run_ghz}
    trial_plan = dispatch[plan.state](plan, report)
    if trial_plan is not None and simulate:
        emp = sample(trial_plan, workers=workers)
        ref = report.tables["joint"]
        emp_table = JointTable(ref.parties, emp.table.probs, ref.symbols)
        report.tables["empirical"] = emp_table
        audit = compare(emp, analytic_table(trial_plan), sigmas=5.0)
        report.audits.append(audit)
        report.seed = trial_plan.seed
    return report


def _round(x: float) -> float:
    y = float(f"{x:.12g}")
    return 0.0 if y == 0 else y


def json_ready(obj: Any):
    """Round floats to 12 significant digits and make containers plain."""
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        return _round(obj)
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    return obj


def table_to_dict(table: JointTable) -> dict:
    rows = []
    for signs, p in table.atoms():
        rows.append({"outcome": [table.label(q, s) for q, s in zip(table.parties, signs)], "probability": p})
    return {"parties": list(table.parties), "rows": rows}


def plan_to_dict(plan: ExperimentPlan) -> dict:
    events = []
    for e in plan.events:
        if isinstance(e, Measure):
            events.append(
                {"op": "measure", "party": e.party, "setting": e.setting.text, "angle": e.setting.value, "tag": e.tag}
            )
        else:
            events.append({"op": "undo", "party": e.party, "tag": e.tag})
    return {
        "name": plan.name,
        "state": plan.state,
        "engine": plan.engine,
        "parties": list(plan.parties),
        "events": events,
        "trials": plan.trials,
        "seed": plan.seed,
        "text": serialize_plan(plan),
    }


def report_to_dict(report: Report) -> dict:
    out = {
        "plan": plan_to_dict(report.plan),
        "engine": report.plan.engine,
        "tables": {name: table_to_dict(t) for name, t in report.tables.items()},
        "correlators": report.correlators,
        "audits": [a.to_dict() for a in report.audits],
        "rng": {"generator": GENERATOR, "seed": report.seed},
    }
    if report.labels:
        out["labels"] = report.labels
    if report.notes:
        out["notes"] = report.notes
    return json_ready(out)


def format_probability(p: float) -> str:
    """Decimal with 12 significant digits, no exponent."""
    if abs(p) < 1e-15:
        return "0"
    return np.format_float_positional(p, precision=12, unique=False, fractional=False, trim="-")


def table_to_csv(table: JointTable, header: list[str] | None = None) -> str:
    lines = [",".join(header or table.parties) + ",probability"]
    for signs, p in table.atoms():
        cells = [table.label(q, s) for q, s in zip(table.parties, signs)]
        lines.append(",".join(cells) + "," + format_probability(p))
    return "\n".join(lines) + "\n"


def correlators_to_csv(correlators: dict[str, dict[str, float]]) -> str:
    lines = ["source,pair,value"]
    for source, values in correlators.items():
        lines += [f"{source},{pair},{format_probability(v)}" for pair, v in values.items()]
    return "\n".join(lines) + "\n"
