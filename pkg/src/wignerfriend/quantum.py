"""Born-rule predictions for the singlet, GHZ and Hardy (coin/electron) states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FR_SYMBOLS, CorrelatorSet, JointTable, Settings

_STATE_TOL = 1e-12

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_I = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class TwoQubitState:
    """Amplitudes over (up/up, up/down, down/up, down/down)."""

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        _check_norm(self.amplitudes, 4)

    def tensor(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex).reshape(2, 2)


@dataclass(frozen=True)
class ThreeQubitState:
    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        _check_norm(self.amplitudes, 8)

    def tensor(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex).reshape(2, 2, 2)


def _check_norm(amps, n):
    if len(amps) != n:
        raise ValueError(f"expected {n} amplitudes, got {len(amps)}")
    norm = sum(abs(a) ** 2 for a in amps)
    if abs(norm - 1.0) > _STATE_TOL:
        raise ValueError(f"state norm {norm!r} differs from 1")


def singlet_correlator(a: float, b: float) -> float:
    return -math.cos(a - b)


def quantum_correlator_set(s: Settings) -> CorrelatorSet:
    """Born correlators for all four cross pairs, treating each as a fresh singlet.

    This is the assignment the PM argument relies on for the friend/Wigner
    pairs; it is kept as the comparison baseline.
    """
    return CorrelatorSet(
        A1B1=singlet_correlator(s.a1, s.b1),
        B1A2=singlet_correlator(s.b1, s.a2),
        A2B2=singlet_correlator(s.a2, s.b2),
        A1B2=singlet_correlator(s.a1, s.b2),
    )


def singlet_table(a: float, b: float, parties=("A1", "B1")) -> JointTable:
    """Joint outcome distribution of one spin measurement per singlet particle."""
    same = 0.5 * math.sin((a - b) / 2) ** 2
    diff = 0.5 * math.cos((a - b) / 2) ** 2
    return JointTable(parties, [[same, diff], [diff, same]])


def ghz_state() -> ThreeQubitState:
    amps = [0j] * 8
    amps[0] = amps[7] = 1 / math.sqrt(2)
    return ThreeQubitState(tuple(amps))


def equatorial_observable(phi: float) -> np.ndarray:
    """Spin observable along angle ``phi`` in the x-y plane (x at 0, y at pi/2)."""
    return math.cos(phi) * _X + math.sin(phi) * _Y


def equatorial_projector(phi: float, sign: int) -> np.ndarray:
    return (_I + sign * equatorial_observable(phi)) / 2


def ghz_correlator(t1: float, t2: float, t3: float, state: ThreeQubitState | None = None) -> float:
    """Expectation of the product of three equatorial spin outcomes.

    Computed by contracting the observables with the state tensor; on the GHZ
    state this equals ``cos(t1 + t2 + t3)``.
    """
    psi = (state or ghz_state()).tensor()
    o1, o2, o3 = (equatorial_observable(t) for t in (t1, t2, t3))
    val = np.einsum("abc,ai,bj,ck,ijk->", psi.conj(), o1, o2, o3, psi)
    return float(val.real)


def ghz_table(t1: float, t2: float, t3: float, parties=("W1", "W2", "W3")) -> JointTable:
    """Born distribution of the three outcomes on the GHZ state."""
    psi = ghz_state().tensor()
    probs = np.zeros((2, 2, 2))
    for i, si in enumerate((1, -1)):
        p1 = equatorial_projector(t1, si)
        for j, sj in enumerate((1, -1)):
            p2 = equatorial_projector(t2, sj)
            for k, sk in enumerate((1, -1)):
                p3 = equatorial_projector(t3, sk)
                phi = np.einsum("ai,bj,ck,ijk->abc", p1, p2, p3, psi)
                probs[i, j, k] = float(np.vdot(phi, phi).real)
    return JointTable(parties, probs)


# Coin: h -> index 0, t -> index 1.  Electron: up -> 0, down -> 1.
def hardy_state() -> TwoQubitState:
    """Coin/electron state (|h,down> + |t,up> + |t,down>) / sqrt(3)."""
    c = 1 / math.sqrt(3)
    return TwoQubitState((0j, c, c, c))


def _fr_wigner_bases():
    r = 1 / math.sqrt(2)
    # rows: f, o
    coin = np.array([[r, r], [r, -r]])  # f = (h + t), o = (h - t)
    electron = np.array([[r, r], [-r, r]])  # f = (down + up), o = (down - up)
    return coin, electron


def hardy_born_tables() -> tuple[JointTable, JointTable]:
    """Born tables for the friends' bases and for the Wigners' bases.

    Returns (table over Fbar, F in the h/t, up/down bases; table over W, Wbar
    in the f/o bases).
    """
    psi = hardy_state().tensor()
    friends = np.abs(psi) ** 2
    t1 = JointTable(("Fbar", "F"), friends, FR_SYMBOLS)

    coin, electron = _fr_wigner_bases()
    amps = coin.conj() @ psi @ electron.conj().T  # [Wbar, W]
    t2 = JointTable(("W", "Wbar"), (np.abs(amps) ** 2).T, FR_SYMBOLS)
    return t1, t2


def wigner_amplitudes() -> np.ndarray:
    """Hardy state expanded in the (Wbar, W) f/o bases; rows/cols ordered (f, o)."""
    psi = hardy_state().tensor()
    coin, electron = _fr_wigner_bases()
    return coin.conj() @ psi @ electron.conj().T
