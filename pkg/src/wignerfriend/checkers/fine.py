"""Does a joint distribution over (A1, B1, A2, B2) reproduce given correlators?

Two independent routes: an exact linear-feasibility solve over the 16 atom
weights, and the family of eight CHSH inequalities. By Fine's theorem they
must agree; :func:`joint_exists` checks that they do.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..core import CROSS_PAIRS, PM_PARTIES, CorrelatorSet, JointTable
from .simplex import find_feasible_point

TOL = 1e-9
_ATOMS = np.array(list(itertools.product((1, -1), repeat=4)), dtype=float)  # C order matches JointTable


class FineMismatch(AssertionError):
    """LP feasibility and the CHSH family disagreed."""


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: JointTable | None = None
    violated: str | None = None
    chsh: Mapping[str, float] | None = None


def chsh_variants(c: CorrelatorSet) -> dict[str, float]:
    """Left-hand sides of the eight CHSH inequalities, keyed by sign pattern.

    The pattern lists the signs applied to (A1B1, B1A2, A2B2, A1B2); every
    pattern has an odd number of minus signs and the bound is 2.
    """
    out = {}
    for signs in itertools.product((1, -1), repeat=4):
        if signs.count(-1) % 2 == 1:
            label = "".join("+" if s > 0 else "-" for s in signs)
            out[label] = sum(s * e for s, e in zip(signs, c.cross))
    return out


def chsh_verdict(c: CorrelatorSet, tol: float = TOL) -> tuple[bool, str | None]:
    variants = chsh_variants(c)
    label = max(variants, key=variants.get)
    if variants[label] > 2 + tol:
        return False, label
    return True, None


def _normalize_constraints(constraints) -> dict[tuple[str, str], float]:
    if isinstance(constraints, Mapping):
        items: Iterable = constraints.items()
    else:
        items = constraints
    out: dict[tuple[str, str], float] = {}
    for (p, q), value in items:
        if p == q:
            raise ValueError(f"pair ({p}, {q}) repeats a party")
        for r in (p, q):
            if r not in PM_PARTIES:
                raise ValueError(f"unknown party {r!r}")
        key = tuple(sorted((p, q), key=PM_PARTIES.index))
        if key in out and abs(out[key] - value) > TOL:
            raise ValueError(f"conflicting constraints for {key}: {out[key]} vs {value}")
        out[key] = float(value)
    return out


def feasible_joint(constraints, unbiased_marginals: bool = True, tol: float = TOL) -> JointTable | None:
    """Find a 16-atom table with the given pair expectations, if one exists.

    ``constraints`` maps party pairs to target expectations (or is an
    iterable of such pairs); a pair given twice with different values is an
    error.
    """
    targets = _normalize_constraints(constraints)
    rows = [np.ones(16)]
    rhs = [1.0]
    for (p, q), value in targets.items():
        rows.append(_ATOMS[:, PM_PARTIES.index(p)] * _ATOMS[:, PM_PARTIES.index(q)])
        rhs.append(value)
    if unbiased_marginals:
        for k in range(4):
            rows.append(_ATOMS[:, k])
            rhs.append(0.0)
    x = find_feasible_point(np.array(rows), np.array(rhs), tol=tol)
    if x is None:
        return None
    x = x / x.sum()
    return JointTable(PM_PARTIES, x.reshape(2, 2, 2, 2))


def joint_exists(c: CorrelatorSet, unbiased_marginals: bool = True) -> FeasibilityResult:
    targets = dict(zip(CROSS_PAIRS, c.cross))
    witness = feasible_joint(targets, unbiased_marginals)
    chsh_ok, violated = chsh_verdict(c)
    if (witness is not None) != chsh_ok:
        raise FineMismatch(f"LP says feasible={witness is not None}, CHSH says {chsh_ok} for {c}")
    if witness is not None:
        x = witness.probs.reshape(-1)
        for (p, q), value in targets.items():
            got = float(x @ (_ATOMS[:, PM_PARTIES.index(p)] * _ATOMS[:, PM_PARTIES.index(q)]))
            if abs(got - value) > TOL:
                raise FineMismatch(f"witness misses ({p}, {q}): {got} vs {value}")
    return FeasibilityResult(
        feasible=witness is not None,
        witness=witness,
        violated=violated,
        chsh=chsh_variants(c),
    )
