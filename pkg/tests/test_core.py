import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wignerfriend.core import (
    PM_PARTIES,
    CorrelatorSet,
    JointTable,
    Settings,
    chsh_value,
    correlators_from_table,
    expectation,
    marginal,
    mixture,
    uniform_table,
    wrap_angle,
)


@st.composite
def tables(draw, n=4):
    weights = draw(st.lists(st.floats(0, 1, allow_nan=False), min_size=2**n, max_size=2**n))
    w = np.array(weights) + 1e-3
    return JointTable(PM_PARTIES[:n] if n <= 4 else [f"p{i}" for i in range(n)], w / w.sum())


def test_table_rejects_bad_input():
    with pytest.raises(ValueError, match="sums to"):
        JointTable(("A", "B"), [0.5, 0.5, 0.5, 0.5])
    with pytest.raises(ValueError, match="negative"):
        JointTable(("A", "B"), [1.5, -0.5, 0, 0])
    with pytest.raises(ValueError, match="duplicate"):
        JointTable(("A", "A"), [0.25] * 4)


def test_table_is_read_only():
    t = uniform_table(("A", "B"))
    with pytest.raises(ValueError):
        t.probs[0, 0] = 1.0


def test_symbols_and_partial_prob():
    t = JointTable.from_atoms(("X", "Y"), {(1, -1): 0.25, (-1, -1): 0.75}, {"X": ("h", "t")})
    assert t.prob({"X": "t"}) == 0.75
    assert t.prob({"Y": -1}) == 1.0
    assert t.label("X", -1) == "t"
    assert t.label("Y", 1) == "+1"
    with pytest.raises(ValueError):
        t.prob({"X": "up"})
    with pytest.raises(KeyError):
        t.prob({"Z": 1})


def test_expectation_of_perfect_anticorrelation():
    t = JointTable.from_atoms(("A", "B"), {(1, -1): 0.5, (-1, 1): 0.5})
    assert expectation(t, ("A", "B")) == -1.0
    with pytest.raises(ValueError):
        expectation(t, ("A", "A"))


@given(tables())
def test_marginals_are_normalized_and_consistent(t):
    for keep in [("A1",), ("B2", "A1"), ("A2", "B1", "A1")]:
        m = marginal(t, keep)
        assert m.parties == keep
        assert math.isclose(m.probs.sum(), 1.0, abs_tol=1e-12)
    # a pair marginal gives the same expectation as the full table
    pair = marginal(t, ("B2", "A1"))
    direct = float(np.einsum("ijkl,i,l->", t.probs, [1, -1], [1, -1]))
    assert math.isclose(expectation(pair, ("B2", "A1")), direct, abs_tol=1e-12)
    assert math.isclose(expectation(t, ("A1", "B2")), direct, abs_tol=1e-12)


@given(tables(), tables(), st.floats(0, 1))
def test_expectation_is_affine_under_mixture(t1, t2, w):
    m = mixture(t1, t2, w)
    for pair in [("A1", "B1"), ("A2", "B2"), ("A1", "A2")]:
        want = w * expectation(t1, pair) + (1 - w) * expectation(t2, pair)
        assert math.isclose(expectation(m, pair), want, abs_tol=1e-12)


def test_mixture_checks_arguments():
    t = uniform_table(PM_PARTIES)
    with pytest.raises(ValueError):
        mixture(t, uniform_table(("A", "B")), 0.5)
    with pytest.raises(ValueError):
        mixture(t, t, 1.5)


@given(tables())
def test_correlators_lie_in_range_and_chsh_at_most_two(t):
    # any joint table is a local model, so CHSH cannot exceed 2
    c = correlators_from_table(t)
    assert chsh_value(c) <= 2 + 1e-12


def test_correlator_set_range_check():
    with pytest.raises(ValueError):
        CorrelatorSet(1.2, 0, 0, 0)
    c = CorrelatorSet(-1, -1, -1, 1)
    assert chsh_value(c) == 4
    assert set(c.as_dict()) == {"A1B1", "B1A2", "A2B2", "A1B2"}


@given(st.floats(-50, 50, allow_nan=False))
def test_wrap_angle_range(x):
    y = wrap_angle(x)
    assert -math.pi < y <= math.pi
    assert math.isclose(math.cos(y), math.cos(x), abs_tol=1e-9)


def test_settings_sector_angles():
    s = Settings(0.0, 0.1, 3 * math.pi / 2, 0.2)
    assert math.isclose(s.alpha, math.pi / 2)
    assert math.isclose(s.beta, 0.1)
    assert s.as_tuple() == (0.0, 0.1, 3 * math.pi / 2, 0.2)
