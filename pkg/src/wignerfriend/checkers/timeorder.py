"""Which mixed correlators of the PM experiment can ever be measured?

Events: a1, a1^-1 (undo), a2 on one wing; b1, b1^-1, b2 on the other. Each
wing's events happen in that order. E_A1B2 is accessible only if b2 happens
before a1 is undone; E_B1A2 only if a2 happens before b1 is undone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

from ..core import AuditReport

A_CHAIN = ("a1", "a1^-1", "a2")
B_CHAIN = ("b1", "b1^-1", "b2")
EVENTS = A_CHAIN + B_CHAIN

NEEDS_A1B2 = ("b2", "a1^-1")
NEEDS_B1A2 = ("a2", "b1^-1")


@dataclass(frozen=True)
class PrecedenceGraph:
    events: tuple[str, ...] = EVENTS
    edges: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    @classmethod
    def for_pm(cls, *extra: tuple[str, str]) -> "PrecedenceGraph":
        base = set(zip(A_CHAIN, A_CHAIN[1:])) | set(zip(B_CHAIN, B_CHAIN[1:]))
        return cls(EVENTS, frozenset(base | set(extra)))

    def cycle(self) -> list[str] | None:
        """A precedence cycle if the constraints cannot all hold, else None."""
        ts = TopologicalSorter({e: set() for e in self.events})
        for before, after in self.edges:
            ts.add(after, before)
        try:
            ts.prepare()
        except CycleError as err:
            return list(err.args[1])
        return None


def admissible_orders():
    """All total orders interleaving the two wings' event chains."""
    for slots in itertools.combinations(range(6), 3):
        order = [None] * 6
        a_iter, b_iter = iter(A_CHAIN), iter(B_CHAIN)
        for k in range(6):
            order[k] = next(a_iter) if k in slots else next(b_iter)
        yield tuple(order)


def measurable(order) -> tuple[bool, bool]:
    pos = {e: k for k, e in enumerate(order)}
    a1b2 = pos[NEEDS_A1B2[0]] < pos[NEEDS_A1B2[1]]
    b1a2 = pos[NEEDS_B1A2[0]] < pos[NEEDS_B1A2[1]]
    return a1b2, b1a2


def time_order_audit() -> AuditReport:
    orders = list(admissible_orders())
    cells = {"neither": 0, "only_A1B2": 0, "only_B1A2": 0, "both": 0}
    for order in orders:
        a1b2, b1a2 = measurable(order)
        key = "both" if a1b2 and b1a2 else "only_A1B2" if a1b2 else "only_B1A2" if b1a2 else "neither"
        cells[key] += 1
    cycle = PrecedenceGraph.for_pm(NEEDS_A1B2, NEEDS_B1A2).cycle()
    passed = cells["both"] == 0 and cycle is not None
    return AuditReport(
        name="time-order",
        verdict="AT_MOST_ONE_MIXED" if passed else "BOTH_MIXED_ACCESSIBLE",
        passed=passed,
        values={"orders": len(orders), **cells, "cycle_if_both": cycle},
    )
