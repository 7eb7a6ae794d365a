"""Pilot-wave predictions for the PM and FR arrangements.

The PM joint distribution follows the time order
a1, b1, undo b1, undo a1, b2, a2. Each particle's outcome is decided by its
(uniform) position in a unit-radius disk cross-section; the region areas
below give the conditional weights:

* A1 is fair.
* (B1, B2) given A1 come from the b-side area table with weight
  ``omega_b`` selected by A1.
* A2 given (A1, B2) comes from the A1 row of the a-side area table with
  weight ``omega_a`` selected by B2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    FR_PARTIES,
    FR_SYMBOLS,
    PM_PARTIES,
    AuditReport,
    CorrelatorSet,
    JointTable,
    Settings,
    correlators_from_table,
    marginal,
)

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class OmegaWeights:
    """Second-measurement up-weights; ``a_plus`` applies when B2 = +1, ``b_plus`` when A1 = +1."""

    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float

    def a(self, b2: int) -> float:
        return self.a_plus if b2 == 1 else self.a_minus

    def b(self, a1: int) -> float:
        return self.b_plus if a1 == 1 else self.b_minus


@dataclass(frozen=True)
class AreaTable:
    """Areas of the four outcome regions of a unit disk (total pi).

    ``pp`` is the region giving (+, +) for (first index, second index); for
    the a-side the indices are (A1, A2), for the b-side (B1, B2).
    """

    pp: float
    pm: float
    mp: float
    mm: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.pp, self.pm], [self.mp, self.mm]])

    @property
    def total(self) -> float:
        return self.pp + self.pm + self.mp + self.mm


def omega_weights(s: Settings) -> OmegaWeights:
    wa = math.sin((s.a2 - s.b2) / 2) ** 2
    wb = math.sin((s.a1 - s.b1) / 2) ** 2
    return OmegaWeights(
        a_plus=wa,
        a_minus=math.cos((s.a2 - s.b2) / 2) ** 2,
        b_plus=wb,
        b_minus=math.cos((s.a1 - s.b1) / 2) ** 2,
    )


def area_table(side: str, sector_angle: float, omega: float) -> AreaTable:
    """Region areas for one particle's pair of measurements.

    ``sector_angle`` is the angle between the particle's two measurement
    axes and ``omega`` the up-weight of its second measurement. The two
    sides differ only in which off-diagonal cell carries each step term.
    """
    if side not in ("a", "b"):
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    if not 0.0 <= sector_angle <= math.pi:
        raise ValueError(f"sector angle {sector_angle} outside [0, pi]")
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega {omega} outside [0, 1]")
    x = 2 * omega - 1
    up = max(0.0, x)  # theta(2w - 1) (2w - 1)
    down = max(0.0, -x)  # theta(1 - 2w) (1 - 2w)
    ang = sector_angle
    diag = (math.pi - ang) + ang * abs(x)
    off = ang - ang * abs(x)
    if side == "a":
        return AreaTable(
            pp=(diag - math.pi * down) / 2,
            pm=(off + math.pi * down) / 2,
            mp=(off + math.pi * up) / 2,
            mm=(diag - math.pi * up) / 2,
        )
    return AreaTable(
        pp=(diag - math.pi * down) / 2,
        pm=(off + math.pi * up) / 2,
        mp=(off + math.pi * down) / 2,
        mm=(diag - math.pi * up) / 2,
    )


def pm_conditionals(s: Settings) -> tuple[np.ndarray, np.ndarray]:
    """Conditional weights of the chain.

    Returns ``b_given_a1[i, j, k] = P(B1=j, B2=k | A1=i)`` and
    ``a2_given[i, k, l] = P(A2=l | A1=i, B2=k)``, index 0 meaning +1.
    """
    w = omega_weights(s)
    alpha, beta = s.alpha, s.beta
    b_given_a1 = np.stack([area_table("b", beta, w.b(a1)).matrix() / math.pi for a1 in (1, -1)])
    a_rows = np.stack([area_table("a", alpha, w.a(b2)).matrix() / HALF_PI for b2 in (1, -1)])
    # a_rows[k, i, l] -> reorder to [i, k, l]
    a2_given = np.transpose(a_rows, (1, 0, 2))
    return b_given_a1, a2_given


def pm_joint(s: Settings) -> JointTable:
    """Joint distribution over (A1, B1, A2, B2) from the conditional chain."""
    b_given_a1, a2_given = pm_conditionals(s)
    # probs[i, j, l, k] = 1/2 * P(j, k | i) * P(l | i, k)
    probs = 0.5 * np.einsum("ijk,ikl->ijlk", b_given_a1, a2_given)
    return JointTable(PM_PARTIES, probs)


def _step2(x: float, y: float) -> float:
    return 1.0 if (x > 0 and y > 0) else 0.0


def closed_form_b1a2(s: Settings) -> float:
    c1 = math.cos(s.a1 - s.b1)
    c2 = math.cos(s.a2 - s.b2)
    alpha, beta = s.alpha, s.beta
    return (
        -(1 - 2 * alpha / math.pi) * c1
        - (1 - 2 * beta / math.pi) * c2
        - (2 / math.pi) * (alpha * c1 * abs(c2) + beta * abs(c1) * c2)
        + 2 * c1 * c2 * _step2(c1, c2)
        - 2 * c1 * c2 * _step2(-c1, -c2)
    )


def printed_same_side(s: Settings) -> tuple[float, float]:
    """Same-side correlators (A1A2, B1B2) with the arguments as printed."""
    return (
        (1 - 2 * s.alpha / math.pi) * (1 - abs(math.cos(s.a1 - s.b1))),
        (1 - 2 * s.beta / math.pi) * (1 - abs(math.cos(s.a2 - s.b2))),
    )


def swapped_same_side(s: Settings) -> tuple[float, float]:
    """Same-side correlators with the cosine arguments exchanged between sides."""
    return (
        (1 - 2 * s.alpha / math.pi) * (1 - abs(math.cos(s.a2 - s.b2))),
        (1 - 2 * s.beta / math.pi) * (1 - abs(math.cos(s.a1 - s.b1))),
    )


def closed_form_correlators(s: Settings) -> CorrelatorSet:
    a1a2, b1b2 = printed_same_side(s)
    return CorrelatorSet(
        A1B1=-math.cos(s.a1 - s.b1),
        B1A2=closed_form_b1a2(s),
        A2B2=-math.cos(s.a2 - s.b2),
        A1B2=0.0,
        A1A2=a1a2,
        B1B2=b1b2,
    )


@dataclass(frozen=True)
class PilotWaveCorrelators:
    chain: CorrelatorSet
    closed_form: CorrelatorSet


def pm_correlators(s: Settings) -> PilotWaveCorrelators:
    """Correlators summed from :func:`pm_joint` alongside the closed forms."""
    return PilotWaveCorrelators(
        chain=correlators_from_table(pm_joint(s)),
        closed_form=closed_form_correlators(s),
    )


def same_side_audit(s: Settings, tol: float = 1e-9) -> AuditReport:
    """Compare chain same-side correlators with both argument conventions."""
    chain = correlators_from_table(pm_joint(s))
    printed = printed_same_side(s)
    swapped = swapped_same_side(s)
    got = (chain.A1A2, chain.B1B2)
    printed_ok = all(abs(g - p) <= tol for g, p in zip(got, printed))
    swapped_ok = all(abs(g - p) <= tol for g, p in zip(got, swapped))
    if printed_ok and swapped_ok:
        verdict = "BOTH_AGREE"
    elif swapped_ok:
        verdict = "SWAPPED_ARGUMENTS"
    elif printed_ok:
        verdict = "PRINTED_ARGUMENTS"
    else:
        verdict = "NEITHER"
    notes = []
    if verdict == "SWAPPED_ARGUMENTS":
        notes.append(
            "chain gives A1A2 modulated by |cos(a2-b2)| and B1B2 by |cos(a1-b1)|; "
            "the printed forms carry the other side's angles"
        )
    return AuditReport(
        name="same-side-correlators",
        verdict=verdict,
        passed=printed_ok or swapped_ok,
        values={
            "chain": {"A1A2": got[0], "B1B2": got[1]},
            "printed": {"A1A2": printed[0], "B1B2": printed[1]},
            "swapped": {"A1A2": swapped[0], "B1B2": swapped[1]},
            "printed_agrees": printed_ok,
            "swapped_agrees": swapped_ok,
        },
        notes=tuple(notes),
    )


# (Fbar, F, W, Wbar) atoms, each with probability 1/9.
FR_PILOTWAVE_ATOMS = (
    ("h", "down", "f", "o"),
    ("h", "down", "o", "f"),
    ("h", "down", "o", "o"),
    ("t", "up", "f", "o"),
    ("t", "up", "o", "f"),
    ("t", "up", "o", "o"),
    ("t", "down", "f", "o"),
    ("t", "down", "o", "f"),
    ("t", "down", "o", "o"),
)


def fr_pilotwave_table() -> JointTable:
    probs = np.zeros((2, 2, 2, 2))
    for atom in FR_PILOTWAVE_ATOMS:
        idx = tuple(FR_SYMBOLS[p].index(v) for p, v in zip(FR_PARTIES, atom))
        probs[idx] = 1 / 9
    return JointTable(FR_PARTIES, probs, FR_SYMBOLS)


def _rational(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10_000)


def conditional(table: JointTable, event: dict, given: dict) -> float | None:
    """P(event | given), or None if the conditioning event has probability 0."""
    pg = table.prob(given)
    if pg <= 0.0:
        return None
    return table.prob({**given, **event}) / pg


BORN_OO = Fraction(1, 12)


def fr_mixed_claims_audit(table: JointTable, tol: float = 1e-12) -> AuditReport:
    """Test the two certainty claims FR needs against a four-outcome table.

    The claims are P(W=f | Fbar=t) = 1 and P(F=up | Wbar=o) = 1. The audit
    passes when the table is internally consistent (normalized, with the
    Wigner pair's o/o probability reported next to the Born value); the
    claim flags record whether each certainty holds.
    """
    if set(table.parties) != set(FR_PARTIES):
        raise ValueError(f"FR audit needs parties {FR_PARTIES}, got {table.parties}")
    p_i1 = conditional(table, {"W": "f"}, {"Fbar": "t"})
    p_ix = conditional(table, {"F": "up"}, {"Wbar": "o"})
    p_oo = table.prob({"W": "o", "Wbar": "o"})

    def claim(p):
        if p is None:
            return "vacuous"
        return "holds" if abs(p - 1.0) <= tol else "violated"

    i1, ix = claim(p_i1), claim(p_ix)
    friends = marginal(table, ("Fbar", "F"))
    values = {
        "P(W=f|Fbar=t)": p_i1,
        "P(F=up|Wbar=o)": p_ix,
        "P(W=o,Wbar=o)": p_oo,
        "P(W=o,Wbar=o) born": float(BORN_OO),
        "rational": {
            "P(W=f|Fbar=t)": None if p_i1 is None else str(_rational(p_i1)),
            "P(F=up|Wbar=o)": None if p_ix is None else str(_rational(p_ix)),
            "P(W=o,Wbar=o)": str(_rational(p_oo)),
            "P(W=o,Wbar=o) born": str(BORN_OO),
        },
        "I1": i1,
        "Ix": ix,
        "P(Fbar=h,F=up)": friends.prob({"Fbar": "h", "F": "up"}),
    }
    verdict = "CLAIMS_HOLD" if i1 == ix == "holds" else "CLAIMS_VIOLATED"
    notes = []
    if abs(p_oo - float(BORN_OO)) > tol:
        notes.append("o/o probability on the joint differs from the Born value for the Wigners' pair")
    return AuditReport("fr-mixed-claims", verdict, True, values, tuple(notes))
