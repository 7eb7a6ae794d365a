"""Outcome algebra shared by every engine: joint tables, correlators, CHSH.

Outcomes are two-valued and stored as signs. A :class:`JointTable` keeps its
probabilities in a dense ``(2,) * n`` array where index 0 means ``+1`` and
index 1 means ``-1`` along each party axis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence

import numpy as np

PLUS, MINUS = 1, -1
SIGNS = (PLUS, MINUS)
NORM_TOL = 1e-12

# Party labels used by the built-in experiments.
PM_PARTIES = ("A1", "B1", "A2", "B2")
FR_PARTIES = ("Fbar", "F", "W", "Wbar")
GHZ_PARTIES = ("W1", "W2", "W3")

# Outcome symbols for the FR arrangement; the first symbol is the +1 outcome.
FR_SYMBOLS = {
    "Fbar": ("h", "t"),
    "F": ("up", "down"),
    "W": ("f", "o"),
    "Wbar": ("f", "o"),
}


def sign_index(s: int) -> int:
    if s == PLUS:
        return 0
    if s == MINUS:
        return 1
    raise ValueError(f"outcome must be +1 or -1, got {s!r}")


@dataclass(frozen=True)
class Settings:
    """Measurement angles (radians) of the four PM observers."""

    a1: float
    b1: float
    a2: float
    b2: float

    @property
    def alpha(self) -> float:
        """Angle between the two axes used on particle a, in [0, pi]."""
        return abs(wrap_angle(self.a1 - self.a2))

    @property
    def beta(self) -> float:
        return abs(wrap_angle(self.b1 - self.b2))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.b1, self.a2, self.b2)


def wrap_angle(x: float) -> float:
    """Map an angle difference into (-pi, pi]."""
    y = math.remainder(x, 2 * math.pi)
    if y == -math.pi:
        y = math.pi
    return y


class JointTable:
    """Probability distribution over sign tuples of a fixed party list.

    Immutable after construction. ``symbols`` optionally names the two
    outcomes of a party (first entry is the ``+1`` outcome) for display.
    """

    __slots__ = ("_parties", "_probs", "_symbols")

    def __init__(
        self,
        parties: Sequence[str],
        probs: Any,
        symbols: Mapping[str, tuple[str, str]] | None = None,
        check: bool = True,
    ):
        parties = tuple(parties)
        if len(set(parties)) != len(parties):
            raise ValueError(f"duplicate party labels in {parties}")
        arr = np.array(probs, dtype=float).reshape((2,) * len(parties))
        if check:
            if np.any(arr < -NORM_TOL):
                raise ValueError("negative probability in joint table")
            total = float(arr.sum())
            if abs(total - 1.0) > NORM_TOL:
                raise ValueError(f"joint table sums to {total!r}, not 1")
        arr = np.where(arr < 0, 0.0, arr)
        arr.flags.writeable = False
        self._parties = parties
        self._probs = arr
        self._symbols = {p: tuple(symbols[p]) for p in parties if symbols and p in symbols}

    @classmethod
    def from_atoms(
        cls,
        parties: Sequence[str],
        atoms: Mapping[tuple[int, ...], float],
        symbols: Mapping[str, tuple[str, str]] | None = None,
    ) -> "JointTable":
        arr = np.zeros((2,) * len(parties))
        for signs, p in atoms.items():
            if len(signs) != len(parties):
                raise ValueError(f"atom {signs} does not cover parties {tuple(parties)}")
            arr[tuple(sign_index(s) for s in signs)] += p
        return cls(parties, arr, symbols)

    @property
    def parties(self) -> tuple[str, ...]:
        return self._parties

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def symbols(self) -> dict[str, tuple[str, str]]:
        return dict(self._symbols)

    def index(self, party: str) -> int:
        try:
            return self._parties.index(party)
        except ValueError:
            raise KeyError(f"unknown party {party!r}; table has {self._parties}") from None

    def prob(self, outcome: Mapping[str, int | str]) -> float:
        """Probability of a (possibly partial) assignment of outcomes."""
        idx: list[Any] = [slice(None)] * len(self._parties)
        for party, value in outcome.items():
            idx[self.index(party)] = sign_index(self.to_sign(party, value))
        return float(self._probs[tuple(idx)].sum())

    def to_sign(self, party: str, value: int | str) -> int:
        if isinstance(value, str):
            syms = self._symbols.get(party)
            if syms is None or value not in syms:
                raise ValueError(f"unknown outcome {value!r} for party {party!r}")
            return PLUS if value == syms[0] else MINUS
        sign_index(value)
        return int(value)

    def label(self, party: str, sign: int) -> str:
        syms = self._symbols.get(party)
        if syms is None:
            return "+1" if sign == PLUS else "-1"
        return syms[sign_index(sign)]

    def atoms(self, nonzero: bool = False) -> Iterator[tuple[tuple[int, ...], float]]:
        """Yield ``(signs, probability)`` in lexicographic (+1 first) order."""
        for signs in itertools.product(SIGNS, repeat=len(self._parties)):
            p = float(self._probs[tuple(sign_index(s) for s in signs)])
            if nonzero and p <= 0.0:
                continue
            yield signs, p

    def support_size(self, tol: float = 0.0) -> int:
        return int(np.count_nonzero(self._probs > tol))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointTable):
            return NotImplemented
        return (
            self._parties == other._parties
            and self._symbols == other._symbols
            and np.array_equal(self._probs, other._probs)
        )

    def __hash__(self) -> int:
        return hash((self._parties, self._probs.tobytes()))

    def __repr__(self) -> str:
        return f"JointTable(parties={self._parties}, support={self.support_size()})"


@dataclass(frozen=True)
class CorrelatorSet:
    """The four cross correlators of a PM run, plus optional same-side ones."""

    A1B1: float
    B1A2: float
    A2B2: float
    A1B2: float
    A1A2: float | None = None
    B1B2: float | None = None

    def __post_init__(self):
        for name, v in self.as_dict().items():
            if not -1.0 - 1e-9 <= v <= 1.0 + 1e-9:
                raise ValueError(f"correlator {name}={v} outside [-1, 1]")

    @property
    def cross(self) -> tuple[float, float, float, float]:
        return (self.A1B1, self.B1A2, self.A2B2, self.A1B2)

    def as_dict(self) -> dict[str, float]:
        out = {"A1B1": self.A1B1, "B1A2": self.B1A2, "A2B2": self.A2B2, "A1B2": self.A1B2}
        if self.A1A2 is not None:
            out["A1A2"] = self.A1A2
        if self.B1B2 is not None:
            out["B1B2"] = self.B1B2
        return out


CROSS_PAIRS = (("A1", "B1"), ("B1", "A2"), ("A2", "B2"), ("A1", "B2"))
SAME_SIDE_PAIRS = (("A1", "A2"), ("B1", "B2"))


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a checker: a verdict, whether it passed, and the numbers behind it."""

    name: str
    verdict: str
    passed: bool
    values: Mapping[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "passed": self.passed,
            "values": dict(self.values),
            "notes": list(self.notes),
        }


def expectation(table: JointTable, parties: tuple[str, str]) -> float:
    """Mean of the product of two parties' signs."""
    p, q = parties
    i, j = table.index(p), table.index(q)
    if i == j:
        raise ValueError("expectation needs two distinct parties")
    probs = table.probs
    drop = tuple(k for k in range(probs.ndim) if k not in (i, j))
    pair = probs.sum(axis=drop) if drop else probs
    return float((pair[0, 0] - pair[0, 1] - pair[1, 0] + pair[1, 1]) / pair.sum())


def marginal(table: JointTable, keep: Sequence[str]) -> JointTable:
    keep = tuple(keep)
    if not keep:
        raise ValueError("marginal needs at least one party")
    axes = [table.index(p) for p in keep]
    if len(set(axes)) != len(axes):
        raise ValueError(f"repeated party in {keep}")
    drop = tuple(i for i in range(len(table.parties)) if i not in axes)
    arr = table.probs.sum(axis=drop) if drop else table.probs
    # summed array has kept axes in original order; permute to requested order
    order = sorted(axes)
    arr = np.transpose(arr, [order.index(a) for a in axes])
    arr = arr / arr.sum()
    return JointTable(keep, arr, table.symbols)


def mixture(t1: JointTable, t2: JointTable, weight: float) -> JointTable:
    """Convex combination ``weight * t1 + (1 - weight) * t2``."""
    if t1.parties != t2.parties:
        raise ValueError("mixture needs tables over the same parties")
    if not 0.0 <= weight <= 1.0:
        raise ValueError("mixture weight must lie in [0, 1]")
    return JointTable(t1.parties, weight * t1.probs + (1 - weight) * t2.probs, t1.symbols)


def correlators_from_table(table: JointTable, same_side: bool = True) -> CorrelatorSet:
    """Read the PM correlators off a table over A1, B1, A2, B2."""
    vals = {a + b: expectation(table, (a, b)) for a, b in CROSS_PAIRS}
    if same_side:
        vals.update({a + b: expectation(table, (a, b)) for a, b in SAME_SIDE_PAIRS})
    return CorrelatorSet(**vals)


def chsh_value(c: CorrelatorSet) -> float:
    return abs(c.A1B1 + c.B1A2 + c.A2B2 - c.A1B2)


def uniform_table(parties: Sequence[str]) -> JointTable:
    n = len(parties)
    return JointTable(parties, np.full((2,) * n, 0.5**n))
