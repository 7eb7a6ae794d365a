"""Phase-1 simplex for small feasibility problems ``A x = b, x >= 0``.

Dense tableau, Bland's rule (so degenerate pivots cannot cycle). Intended
for the 16-variable joint-distribution problems in this package; no attempt
is made to scale to large instances.
"""

from __future__ import annotations

import numpy as np


PIVOT_TOL = 1e-13


class SimplexError(RuntimeError):
    pass


def find_feasible_point(A, b, tol: float = 1e-9, max_pivots: int = 10_000) -> np.ndarray | None:
    """Return some ``x >= 0`` with ``A @ x == b``, or ``None`` if there is none.

    ``tol`` decides feasibility (phase-1 optimum at most ``tol``); pivoting
    itself uses a much tighter threshold so that right-hand sides of order
    ``tol`` are not mistaken for degenerate zeros.
    """
    eps = PIVOT_TOL
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    # reduced costs for minimizing the sum of artificials
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    cost = T[m, :-1]
    rhs = T[:m, -1]
    for _ in range(max_pivots):
        neg = cost < -eps
        j = int(neg.argmax())
        if not neg[j]:
            break
        col = T[:m, j]
        ok = col > eps
        if not ok.any():
            raise SimplexError("phase-1 objective unbounded; cannot happen for a bounded problem")
        ratios = np.where(ok, rhs / np.where(ok, col, 1.0), np.inf)
        best = ratios.min()
        i = min((r for r in range(m) if ratios[r] <= best + eps), key=basis.__getitem__)
        T[i] /= T[i, j]
        factor = T[:, j].copy()
        factor[i] = 0.0
        T -= factor[:, None] * T[i]
        basis[i] = j
    else:
        raise SimplexError("pivot limit reached")

    if -T[m, -1] > tol:
        return None

    x = np.zeros(n)
    cols = [(r, c) for r, c in enumerate(basis) if c < n]
    for r, c in cols:
        x[c] = T[r, -1]
    # re-solve the basic system against the original data to shed pivot round-off
    if cols:
        idx = [c for _, c in cols]
        sol, *_ = np.linalg.lstsq(A[:, idx], b, rcond=None)
        if np.all(sol >= -tol):
            x = np.zeros(n)
            x[idx] = sol
    return np.clip(x, 0.0, None)
