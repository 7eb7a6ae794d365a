"""Exhaustive sign-assignment check for the ZM (GHZ) parity constraints."""

from __future__ import annotations

import itertools
import math

VARIABLES = ("f1", "f2", "f3", "w1", "w2", "w3")

# (variables whose product is constrained, required product)
ZM_CONSTRAINTS = (
    (("w1", "f2", "f3"), -1),
    (("f1", "w2", "f3"), -1),
    (("f1", "f2", "w3"), -1),
    (("w1", "w2", "w3"), +1),
)


def satisfying_assignments(constraints=ZM_CONSTRAINTS):
    """Yield every +-1 assignment of the six outcomes meeting all constraints."""
    for values in itertools.product((1, -1), repeat=len(VARIABLES)):
        env = dict(zip(VARIABLES, values))
        if all(math.prod(env[v] for v in names) == want for names, want in constraints):
            yield env


def ghz_parity_satisfiable(constraints=ZM_CONSTRAINTS) -> int:
    """Number of the 64 assignments consistent with ``constraints``."""
    for names, want in constraints:
        if want not in (1, -1):
            raise ValueError(f"constraint product must be +1 or -1, got {want}")
        unknown = set(names) - set(VARIABLES)
        if unknown:
            raise ValueError(f"unknown outcome variables {sorted(unknown)}")
    return sum(1 for _ in satisfying_assignments(constraints))
