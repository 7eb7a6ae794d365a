import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2_contingency, chisquare

from wignerfriend.core import CorrelatorSet, Settings
from wignerfriend.montecarlo import (
    TrialPlan,
    analytic_table,
    compare,
    count_atoms,
    sample,
    sample_table,
    uniforms,
)
from wignerfriend.quantum import quantum_correlator_set

S = Settings(0.3, 1.1, 2.0, -0.7)


def _plan(engine, trials=100_000, seed=1):
    return TrialPlan(engine, trials, seed, None if engine == "fr-table" else S)


@given(st.integers(0, 2**64 - 1), st.integers(0, 1000), st.integers(1, 50))
def test_uniform_blocks_depend_only_on_trial_index(seed, start, count):
    whole = uniforms(seed, 0, start + count)
    assert np.array_equal(uniforms(seed, start, count), whole[start:])
    assert ((whole >= 0) & (whole < 1)).all()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["pilotwave-pm", "collapse-pm", "fr-table", "quantum-pair"]), st.integers(1, 5000), st.integers(1, 4), st.integers(1, 997))
def test_counts_do_not_depend_on_chunking_or_workers(engine, trials, workers, chunk):
    plan = _plan(engine, trials)
    a = sample(plan)
    b = sample(plan, workers=workers, chunk=chunk)
    assert np.array_equal(a.counts, b.counts)
    assert a.counts.sum() == trials


def test_seed_changes_the_draw():
    assert not np.array_equal(sample(_plan("pilotwave-pm", seed=1)).counts, sample(_plan("pilotwave-pm", seed=2)).counts)


@pytest.mark.parametrize("engine", ["pilotwave-pm", "collapse-pm", "fr-table", "quantum-pair"])
def test_goodness_of_fit_against_analytic_table(engine):
    plan = _plan(engine)
    rep = sample(plan)
    p = analytic_table(plan).probs.reshape(-1)
    counts = rep.counts.reshape(-1)
    # impossible atoms never occur
    assert counts[p == 0].sum() == 0
    keep = p > 0
    stat = chisquare(counts[keep], p[keep] / p[keep].sum() * plan.trials)
    assert stat.pvalue > 1e-4


@pytest.mark.parametrize("engine", ["pilotwave-pm", "collapse-pm"])
def test_chain_sampling_matches_direct_table_sampling(engine):
    # two-sample chi-square at 1% significance, fixed seeds
    plan = _plan(engine, seed=10)
    chain = sample(plan).counts.reshape(-1)
    direct = sample_table(analytic_table(plan), plan.trials, seed=99).reshape(-1)
    keep = (chain + direct) > 0
    _, pvalue, _, _ = chi2_contingency(np.vstack([chain[keep], direct[keep]]))
    assert pvalue > 0.01


def test_count_atoms_covers_every_trial():
    counts = count_atoms(lambda u: (u[:, 0] < 0.5).astype(np.int64), 2, seed=3, trials=1001, chunk=100)
    assert counts.sum() == 1001


def test_trial_plan_validation():
    with pytest.raises(ValueError, match="unknown engine"):
        TrialPlan("bohm", 10, 0, S)
    with pytest.raises(ValueError, match="at least 1"):
        TrialPlan("pilotwave-pm", 0, 0, S)
    with pytest.raises(ValueError, match="64-bit"):
        TrialPlan("pilotwave-pm", 10, -1, S)
    with pytest.raises(ValueError, match="needs settings"):
        TrialPlan("collapse-pm", 10, 0)
    with pytest.raises(ValueError, match="unsupported combination"):
        TrialPlan("fr-table", 10, 0, S)


def test_compare_agrees_with_own_model():
    rep = sample(_plan("collapse-pm"))
    audit = compare(rep, analytic_table(rep.plan))
    assert audit.verdict == "AGREE" and audit.passed
    assert set(audit.values["correlators"]) == {"A1B1", "B1A2", "A2B2", "A1B2", "A1A2", "B1B2"}


def test_compare_detects_wrong_model():
    # pilot-wave samples against the quantum cross correlators
    tsirelson = Settings(0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)
    rep = sample(TrialPlan("pilotwave-pm", 100_000, 0, tsirelson))
    audit = compare(rep, quantum_correlator_set(tsirelson))
    assert audit.verdict == "DISAGREE"
    assert "correlator B1A2" in audit.values["failures"]
    assert "correlator A1B2" in audit.values["failures"]
    assert "correlator A1B1" not in audit.values["failures"]


@pytest.mark.parametrize("seed", range(20))
def test_single_trial_is_not_flagged(seed):
    rep = sample(TrialPlan("pilotwave-pm", 1, seed, S))
    assert compare(rep, analytic_table(rep.plan)).passed


def test_compare_argument_errors():
    rep = sample(_plan("quantum-pair", trials=10))
    with pytest.raises(ValueError, match="party lists"):
        compare(rep, analytic_table(_plan("pilotwave-pm")))
    with pytest.raises(ValueError, match="no correlators in common"):
        compare(sample(_plan("fr-table", trials=10)), CorrelatorSet(0, 0, 0, 0))
    with pytest.raises(TypeError):
        compare(rep, {"A1B1": 0.0})


def test_report_carries_rng_description():
    rep = sample(_plan("fr-table", trials=100))
    assert rep.rng["seed"] == 1
    assert "Philox" in rep.rng["generator"]
    assert rep.table.symbols["F"] == ("up", "down")
