"""Line-oriented experiment descriptions.

    # comment
    name pusey-masanes
    state singlet            # singlet | ghz | hardy
    engine pilotwave         # pilotwave | collapse | quantum
    party a
    party b
    measure a 0 as A1        # angle in radians, pi literals allowed
    measure b pi/4 as B1
    undo b B1
    ...
    trials 1000000
    seed 7

Parsing either returns a validated :class:`ExperimentPlan` or raises
:class:`PlanError` carrying every :class:`Diagnostic` found.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

STATES = ("singlet", "ghz", "hardy")
ENGINES = ("pilotwave", "collapse", "quantum")
PARTY_COUNT = {"singlet": 2, "ghz": 3, "hardy": 2}
GHZ_BASES = {"x": 0.0, "y": math.pi / 2}
HARDY_BASES = ("z-basis", "x-basis")
BASIS_KEYWORDS = tuple(GHZ_BASES) + HARDY_BASES

_LABEL = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NAME = re.compile(r"^[A-Za-z0-9_.\-]+$")
_PI_ANGLE = re.compile(
    r"^(?P<sign>[+-])?(?P<coef>\d+(?:\.\d*)?|\.\d+)?(?P<star>\*)?pi(?:/(?P<den>\d+(?:\.\d*)?|\.\d+))?$"
)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    line: int
    column: int
    message: str
    severity: str = "error"

    def format(self, source: str = "<plan>") -> str:
        return f"{source}:{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"


class PlanError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.format() for d in self.diagnostics))


@dataclass(frozen=True)
class Setting:
    """A measurement setting as written (``text``) and its angle in radians.

    Basis keywords keep their keyword in ``basis``; ``z-basis``/``x-basis``
    carry no angle.
    """

    text: str
    value: float | None
    basis: str | None = None


@dataclass(frozen=True)
class Measure:
    party: str
    setting: Setting
    tag: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Undo:
    party: str
    tag: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExperimentPlan:
    name: str
    state: str
    engine: str
    parties: tuple[str, ...]
    events: tuple[Measure | Undo, ...]
    trials: int | None = None
    seed: int | None = None
    engine_line: int = field(default=0, compare=False)

    def measurements(self, party: str) -> list[Measure]:
        return [e for e in self.events if isinstance(e, Measure) and e.party == party]


def parse_angle(text: str) -> float:
    """Radians from ``0.5``, ``pi``, ``-pi/2``, ``3pi/4`` or ``3*pi/4``."""
    m = _PI_ANGLE.match(text)
    if m:
        if m["star"] and not m["coef"]:
            raise ValueError(f"bad angle {text!r}")
        coef = float(m["coef"]) if m["coef"] else 1.0
        den = float(m["den"]) if m["den"] else 1.0
        if den == 0:
            raise ValueError(f"zero denominator in angle {text!r}")
        value = coef * math.pi / den
        return -value if m["sign"] == "-" else value
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"bad angle {text!r}") from None
    if not math.isfinite(value) or text.lower().lstrip("+-") in ("inf", "infinity", "nan"):
        raise ValueError(f"angle must be finite, got {text!r}")
    return value


def parse_setting(text: str) -> Setting:
    if text in GHZ_BASES:
        return Setting(text, GHZ_BASES[text], text)
    if text in HARDY_BASES:
        return Setting(text, None, text)
    return Setting(text, parse_angle(text))


def _tokens(line: str):
    """(column, token) pairs, 1-based columns, comment stripped."""
    body = line.split("#", 1)[0]
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]


_ARITY = {"name": 1, "state": 1, "engine": 1, "party": 1, "measure": 4, "undo": 2, "trials": 1, "seed": 1}


def parse_plan(text: str) -> ExperimentPlan:
    diags: list[Diagnostic] = []

    def err(code, line, col, msg):
        diags.append(Diagnostic(code, line, col, msg))

    lines = [(n, _tokens(raw)) for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [(n, toks) for n, toks in lines if toks]
    if not lines:
        raise PlanError([Diagnostic("EMPTY_PLAN", 1, 1, "plan contains no directives")])

    single: dict[str, tuple[str, int, int]] = {}
    parties: list[str] = []
    party_lines: dict[str, int] = {}
    raw_events: list[tuple[int, list]] = []

    for n, toks in lines:
        col, kw = toks[0]
        args = toks[1:]
        if kw not in _ARITY:
            err("UNKNOWN_KEYWORD", n, col, f"unknown keyword {kw!r}")
            continue
        if len(args) != _ARITY[kw]:
            err("ARITY", n, col, f"{kw} takes {_ARITY[kw]} argument(s), got {len(args)}")
            continue
        if kw in ("name", "state", "engine", "trials", "seed"):
            if kw in single:
                err("DUPLICATE_DIRECTIVE", n, col, f"{kw} already given on line {single[kw][1]}")
                continue
            single[kw] = (args[0][1], n, args[0][0])
        elif kw == "party":
            c, label = args[0]
            if not _LABEL.match(label):
                err("BAD_LABEL", n, c, f"invalid party label {label!r}")
            elif label in party_lines:
                err("DUPLICATE_PARTY", n, c, f"party {label!r} already declared on line {party_lines[label]}")
            else:
                parties.append(label)
                party_lines[label] = n
        else:
            raw_events.append((n, toks))

    name = "plan"
    if "name" in single:
        value, n, c = single["name"]
        if _NAME.match(value):
            name = value
        else:
            err("BAD_NAME", n, c, f"invalid plan name {value!r}")

    state = engine = None
    engine_line = 0
    if "state" in single:
        value, n, c = single["state"]
        if value in STATES:
            state = value
        else:
            err("UNKNOWN_STATE", n, c, f"unknown state {value!r}; expected one of {', '.join(STATES)}")
    else:
        err("MISSING_STATE", 1, 1, "plan declares no state")
    if "engine" in single:
        value, n, c = single["engine"]
        engine_line = n
        if value in ENGINES:
            engine = value
        else:
            err("UNKNOWN_ENGINE", n, c, f"unknown engine {value!r}; expected one of {', '.join(ENGINES)}")
    else:
        err("MISSING_ENGINE", 1, 1, "plan declares no engine")

    ints = {}
    for kw, upper in (("trials", None), ("seed", 2**64)):
        if kw in single:
            value, n, c = single[kw]
            if not value.isdigit():
                err("BAD_INTEGER", n, c, f"{kw} must be a non-negative integer, got {value!r}")
            elif kw == "trials" and int(value) < 1:
                err("BAD_INTEGER", n, c, "trials must be at least 1")
            elif upper is not None and int(value) >= upper:
                err("BAD_INTEGER", n, c, f"{kw} must be below 2**64")
            else:
                ints[kw] = int(value)

    if state is not None and len(parties) != PARTY_COUNT[state]:
        n = party_lines[parties[-1]] if parties else single["state"][1]
        err("PARTY_COUNT", n, 1, f"{state} plans need {PARTY_COUNT[state]} parties, got {len(parties)}")

    # tags first, so an undo can tell a later measurement from a missing one
    measure_tags: dict[str, tuple[int, str]] = {}
    for n, toks in raw_events:
        if toks[0][1] == "measure":
            c, tag = toks[4]
            if tag not in measure_tags:
                measure_tags[tag] = (n, toks[1][1])

    events: list[Measure | Undo] = []
    seen_tags: dict[str, int] = {}
    open_measure: dict[str, list[str]] = {p: [] for p in parties}
    undone: set[str] = set()
    for n, toks in raw_events:
        (col, kw), *args = toks
        pc, party = args[0]
        known_party = party in party_lines
        if not known_party:
            err("UNKNOWN_PARTY", n, pc, f"party {party!r} is not declared")
        if kw == "measure":
            (sc, stext), (ac, as_kw), (tc, tag) = args[1:]
            if as_kw != "as":
                err("ARITY", n, ac, f"expected 'as' before the tag, got {as_kw!r}")
                continue
            if not _LABEL.match(tag):
                err("BAD_LABEL", n, tc, f"invalid tag {tag!r}")
                continue
            if tag in seen_tags:
                err("DUPLICATE_TAG", n, tc, f"tag {tag!r} already used on line {seen_tags[tag]}")
                continue
            seen_tags[tag] = n
            try:
                setting = parse_setting(stext)
            except ValueError as exc:
                err("BAD_SETTING", n, sc, str(exc))
                continue
            if state is not None and setting.basis is not None:
                allowed = GHZ_BASES if state == "ghz" else HARDY_BASES if state == "hardy" else ()
                if setting.basis not in allowed:
                    err("BASIS_MISMATCH", n, sc, f"basis keyword {stext!r} is not available for {state} plans")
                    continue
            if state == "hardy" and setting.basis is None:
                err("BASIS_MISMATCH", n, sc, "hardy plans measure in z-basis or x-basis")
                continue
            if known_party:
                open_measure[party].append(tag)
            events.append(Measure(party, setting, tag, n))
        else:
            tc, tag = args[1]
            if tag not in measure_tags:
                err("UNDO_UNKNOWN_TAG", n, tc, f"undo of tag {tag!r}, which is never measured")
                continue
            if tag not in seen_tags:
                err("UNDO_BEFORE_MEASURE", n, tc, f"undo of {tag!r} precedes its measurement on line {measure_tags[tag][0]}")
                continue
            if measure_tags[tag][1] != party:
                err("UNDO_WRONG_PARTY", n, tc, f"tag {tag!r} belongs to party {measure_tags[tag][1]!r}, not {party!r}")
                continue
            if tag in undone:
                err("UNDO_REPEATED", n, tc, f"tag {tag!r} is already undone")
                continue
            if known_party and (not open_measure[party] or open_measure[party][-1] != tag):
                err("UNDO_NOT_LATEST", n, tc, f"{tag!r} is not the latest measurement on party {party!r}")
                continue
            if known_party:
                open_measure[party].pop()
            undone.add(tag)
            events.append(Undo(party, tag, n))

    if diags:
        raise PlanError(sorted(diags, key=lambda d: (d.line, d.column)))
    return ExperimentPlan(
        name=name,
        state=state,
        engine=engine,
        parties=tuple(parties),
        events=tuple(events),
        trials=ints.get("trials"),
        seed=ints.get("seed"),
        engine_line=engine_line,
    )


def serialize_plan(plan: ExperimentPlan) -> str:
    out = [f"name {plan.name}", f"state {plan.state}", f"engine {plan.engine}"]
    out += [f"party {p}" for p in plan.parties]
    for e in plan.events:
        if isinstance(e, Measure):
            out.append(f"measure {e.party} {e.setting.text} as {e.tag}")
        else:
            out.append(f"undo {e.party} {e.tag}")
    if plan.trials is not None:
        out.append(f"trials {plan.trials}")
    if plan.seed is not None:
        out.append(f"seed {plan.seed}")
    return "\n".join(out) + "\n"


def load_plan(path) -> ExperimentPlan:
    with open(path, encoding="utf-8") as fh:
        return parse_plan(fh.read())
