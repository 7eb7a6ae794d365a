import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import angles, settings_strategy
from wignerfriend.core import FR_SYMBOLS, chsh_value, expectation
from wignerfriend.quantum import (
    ThreeQubitState,
    TwoQubitState,
    ghz_correlator,
    ghz_table,
    hardy_born_tables,
    hardy_state,
    quantum_correlator_set,
    singlet_correlator,
    singlet_table,
    wigner_amplitudes,
)

X = np.array([[0, 1], [1, 0]])
Z = np.array([[1, 0], [0, -1]])


def _xz_observable(theta):
    return math.cos(theta) * Z + math.sin(theta) * X


def _singlet_by_matrices(a, b):
    """Oracle: <psi| O(a) (x) O(b) |psi> on an explicit singlet vector."""
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    return float(psi @ np.kron(_xz_observable(a), _xz_observable(b)) @ psi)


@given(angles, angles)
def test_singlet_correlator_matches_matrix_oracle(a, b):
    assert math.isclose(singlet_correlator(a, b), _singlet_by_matrices(a, b), abs_tol=1e-12)


@given(angles, angles)
def test_singlet_table_reproduces_its_correlator(a, b):
    t = singlet_table(a, b)
    assert math.isclose(expectation(t, ("A1", "B1")), -math.cos(a - b), abs_tol=1e-12)
    # unbiased marginals
    assert math.isclose(t.prob({"A1": 1}), 0.5, abs_tol=1e-12)
    assert math.isclose(t.prob({"B1": -1}), 0.5, abs_tol=1e-12)


def test_quantum_chsh_reaches_tsirelson_bound(tsirelson):
    assert math.isclose(chsh_value(quantum_correlator_set(tsirelson)), 2 * math.sqrt(2), abs_tol=1e-12)


@settings(max_examples=300)
@given(settings_strategy())
def test_quantum_chsh_never_exceeds_tsirelson(s):
    assert chsh_value(quantum_correlator_set(s)) <= 2 * math.sqrt(2) + 1e-12


@pytest.mark.parametrize(
    "thetas, want",
    [
        ((0, math.pi / 2, math.pi / 2), -1.0),
        ((math.pi / 2, 0, math.pi / 2), -1.0),
        ((math.pi / 2, math.pi / 2, 0), -1.0),
        ((0, 0, 0), 1.0),
    ],
)
def test_ghz_perfect_correlations(thetas, want):
    assert abs(ghz_correlator(*thetas) - want) <= 1e-12


def test_ghz_thirty_degree_example():
    assert abs(ghz_correlator(math.pi / 6, math.pi / 6, math.pi / 6)) <= 1e-12


def test_ghz_correlator_matches_cosine_of_sum_on_many_triples():
    rng = np.random.default_rng(11)
    for t in rng.uniform(-math.pi, math.pi, size=(1000, 3)):
        assert abs(ghz_correlator(*t) - math.cos(t.sum())) <= 1e-12


@given(angles, angles, angles, angles)
def test_ghz_depends_only_on_the_angle_sum(t1, t2, t3, shift):
    # moving angle between parties leaves the correlation unchanged
    assert math.isclose(ghz_correlator(t1, t2, t3), ghz_correlator(t1 + shift, t2 - shift, t3), abs_tol=1e-12)


@given(angles, angles, angles)
def test_ghz_table_is_consistent_with_correlator(t1, t2, t3):
    t = ghz_table(t1, t2, t3)
    parity = sum(p * math.prod(signs) for signs, p in t.atoms())
    assert math.isclose(parity, ghz_correlator(t1, t2, t3), abs_tol=1e-12)
    assert math.isclose(t.prob({"W2": 1}), 0.5, abs_tol=1e-12)


def test_states_are_norm_checked():
    with pytest.raises(ValueError):
        TwoQubitState((1, 1, 0, 0))
    with pytest.raises(ValueError):
        ThreeQubitState((1, 0, 0))


def test_hardy_state_is_the_coin_then_electron_preparation():
    # coin sqrt(1/3) h + sqrt(2/3) t; h -> down, t -> (up + down)/sqrt(2)
    h, t = np.array([1, 0]), np.array([0, 1])
    up, down = np.array([1, 0]), np.array([0, 1])
    prepared = math.sqrt(1 / 3) * np.kron(h, down) + math.sqrt(2 / 3) * np.kron(t, (up + down) / math.sqrt(2))
    assert np.allclose(hardy_state().tensor().reshape(-1), prepared, atol=1e-15)


def test_wigner_basis_expansion_coefficients():
    # rows Wbar in (f, o), columns W in (f, o): 1/(2 sqrt 3) [oo - of + fo] + sqrt(3)/2 ff
    amps = wigner_amplitudes() * 2 * math.sqrt(3)
    assert np.allclose(amps, [[3, 1], [-1, 1]], atol=1e-12)


def test_hardy_born_tables():
    friends, wigners = hardy_born_tables()
    assert friends.prob({"Fbar": "h", "F": "up"}) == pytest.approx(0, abs=1e-15)
    for atom in [("h", "down"), ("t", "up"), ("t", "down")]:
        assert friends.prob(dict(zip(("Fbar", "F"), atom))) == pytest.approx(1 / 3, abs=1e-15)
    want = {("o", "o"): Fraction(1, 12), ("o", "f"): Fraction(1, 12), ("f", "o"): Fraction(1, 12), ("f", "f"): Fraction(3, 4)}
    for (w, wbar), p in want.items():
        got = wigners.prob({"W": w, "Wbar": wbar})
        assert Fraction(got).limit_denominator(1000) == p
    assert wigners.symbols["W"] == FR_SYMBOLS["W"]
