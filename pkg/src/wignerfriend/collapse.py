"""PM predictions when every measurement collapses the state irreversibly.

Undo steps do nothing here: once a particle has been measured it carries a
definite spin direction, and a later measurement at relative angle g keeps
the sign with probability cos^2(g / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PM_PARTIES, CorrelatorSet, JointTable, Settings


@dataclass(frozen=True)
class CollapseChainState:
    """Spin direction (angle, sign) per particle; ``None`` while still entangled."""

    a: tuple[float, int] | None = None
    b: tuple[float, int] | None = None


def persistence(gamma: float) -> float:
    """Probability that a collapsed spin keeps its sign along an axis rotated by gamma."""
    return math.cos(gamma / 2) ** 2


def collapse_correlators(s: Settings) -> CorrelatorSet:
    c = math.cos(s.a1 - s.b1)
    ca, cb = math.cos(s.alpha), math.cos(s.beta)
    return CorrelatorSet(
        A1B1=-c,
        B1A2=-ca * c,
        A2B2=-ca * cb * c,
        A1B2=-cb * c,
    )


def collapse_chain_joint(s: Settings) -> JointTable:
    """Sequential Born conditioning over (A1, B1, A2, B2)."""
    same_b = math.sin((s.a1 - s.b1) / 2) ** 2  # P(B1 = A1) on the singlet
    keep_a = persistence(s.a1 - s.a2)
    keep_b = persistence(s.b1 - s.b2)
    probs = np.zeros((2, 2, 2, 2))
    for i in range(2):
        for j in range(2):
            p_ab = 0.5 * (same_b if i == j else 1 - same_b)
            for l in range(2):
                p_a2 = keep_a if l == i else 1 - keep_a
                for k in range(2):
                    p_b2 = keep_b if k == j else 1 - keep_b
                    probs[i, j, l, k] = p_ab * p_a2 * p_b2
    return JointTable(PM_PARTIES, probs)
