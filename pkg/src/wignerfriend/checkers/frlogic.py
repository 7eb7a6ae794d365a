"""Propositional check of the FR chain of certainty claims.

Premises are conditional statements "if X = x then Y = y" carrying the
probability P(Y = y | X = x), and possibility statements asserting that a
conjunction of outcomes has positive probability. Only premises with
probability 1 act as implications. Outcomes are two-valued, so each
implication also licenses its contrapositive. The premise set is
contradictory when some possible conjunction forces a variable to take both
of its values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from ..core import AuditReport, JointTable
from ..pilotwave import conditional

OUTCOMES = {
    "Fbar": ("h", "t"),
    "F": ("up", "down"),
    "W": ("f", "o"),
    "Wbar": ("f", "o"),
}
CERTAIN_TOL = 1e-12


@dataclass(frozen=True)
class Literal:
    var: str
    value: str

    def __post_init__(self):
        if self.var not in OUTCOMES:
            raise ValueError(f"unknown outcome variable {self.var!r}")
        if self.value not in OUTCOMES[self.var]:
            raise ValueError(f"{self.var} has no outcome {self.value!r}")

    def negate(self) -> "Literal":
        a, b = OUTCOMES[self.var]
        return Literal(self.var, b if self.value == a else a)

    def __str__(self):
        return f"{self.var}={self.value}"


@dataclass(frozen=True)
class Conditional:
    """P(then | given) = probability."""

    label: str
    given: Literal
    then: Literal
    probability: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"premise {self.label}: probability {self.probability} outside [0, 1]")

    @property
    def certain(self) -> bool:
        return abs(self.probability - 1.0) <= CERTAIN_TOL


@dataclass(frozen=True)
class Possibility:
    """P(all literals jointly) = probability."""

    label: str
    literals: tuple[Literal, ...]
    probability: float

    def __post_init__(self):
        if not self.literals:
            raise ValueError(f"possibility {self.label} names no outcomes")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"possibility {self.label}: probability {self.probability} outside [0, 1]")


def lit(text: str) -> Literal:
    var, _, value = text.partition("=")
    return Literal(var.strip(), value.strip())


def certainty_premises() -> list:
    """The certainty claims of the FR argument with the Born o/o weight."""
    return [
        Conditional("hardy", lit("F=up"), lit("Fbar=t")),
        Conditional("I1", lit("Fbar=t"), lit("W=f")),
        Conditional("Ix", lit("Wbar=o"), lit("F=up")),
        Possibility("W-born", (lit("Wbar=o"), lit("W=o")), 1 / 12),
    ]


def premises_from_table(table: JointTable) -> list:
    """The same premise shapes, with probabilities read off a four-outcome table."""

    def cond(label, given, then):
        g, t = lit(given), lit(then)
        p = conditional(table, {t.var: t.value}, {g.var: g.value})
        if p is None:
            raise ValueError(f"premise {label}: conditioning event {g} has probability 0")
        return Conditional(label, g, t, p)

    return [
        cond("hardy", "F=up", "Fbar=t"),
        cond("I1", "Fbar=t", "W=f"),
        cond("Ix", "Wbar=o", "F=up"),
        Possibility("joint", (lit("Wbar=o"), lit("W=o")), table.prob({"Wbar": "o", "W": "o"})),
    ]


def _implication_graph(premises):
    edges: dict[Literal, list[tuple[Literal, str]]] = {}
    for p in premises:
        if isinstance(p, Conditional) and p.certain:
            edges.setdefault(p.given, []).append((p.then, p.label))
            edges.setdefault(p.then.negate(), []).append((p.given.negate(), p.label + "'"))
    return edges


def _reach(edges, start):
    """Breadth-first closure; returns {literal: (parent, premise label)}."""
    seen = {s: (None, None) for s in start}
    queue = deque(start)
    while queue:
        cur = queue.popleft()
        for nxt, label in edges.get(cur, ()):
            if nxt not in seen:
                seen[nxt] = (cur, label)
                queue.append(nxt)
    return seen


def _path(seen, target):
    out = []
    cur = target
    while cur is not None:
        parent, label = seen[cur]
        out.append(str(cur) if label is None else f"{label}: {cur}")
        cur = parent
    return list(reversed(out))


def fr_logic_contradiction(premises) -> AuditReport:
    for p in premises:
        if not isinstance(p, (Conditional, Possibility)):
            raise TypeError(f"malformed premise {p!r}")
    edges = _implication_graph(premises)
    certain = [p for p in premises if isinstance(p, Conditional) and p.certain]

    derived = []
    for src in sorted({p.given for p in certain}, key=str):
        for lit_, _ in _reach(edges, [src]).items():
            if lit_ != src and lit_.var != src.var:
                derived.append(f"{src} => {lit_}")

    clash = None
    for p in premises:
        if not isinstance(p, Possibility) or p.probability <= 0.0:
            continue
        seen = _reach(edges, list(p.literals))
        for lit_ in [*reversed(p.literals), *seen]:
            if lit_.negate() in seen:
                clash = {
                    "possibility": p.label,
                    "probability": p.probability,
                    "forced": [_path(seen, lit_), _path(seen, lit_.negate())],
                }
                break
        if clash:
            break

    values = {
        "certainties": [f"{p.label}: {p.given} => {p.then}" for p in certain],
        "dropped": [
            f"{p.label}: P({p.then}|{p.given}) = {Fraction(p.probability).limit_denominator(10_000)}"
            for p in premises
            if isinstance(p, Conditional) and not p.certain
        ],
        "closure": derived,
        "clash": clash,
    }
    verdict = "CONTRADICTION" if clash else "CONSISTENT"
    return AuditReport("fr-logic", verdict, True, values)
