"""Seeded sampling of outcome tuples from each engine's conditional chain.

Randomness is counter-based: trial ``i`` of a run with seed ``s`` consumes
the single Philox-4x64-10 block with key ``s`` and counter ``i`` (four
64-bit words, so up to four uniforms per trial). Any split of the trials
into chunks or workers therefore produces the same per-trial draws, and
chunk results are merged by adding exact atom counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .collapse import collapse_chain_joint, persistence
from .core import (
    CROSS_PAIRS,
    FR_PARTIES,
    FR_SYMBOLS,
    PM_PARTIES,
    SAME_SIDE_PAIRS,
    AuditReport,
    CorrelatorSet,
    JointTable,
    Settings,
    expectation,
)
from .pilotwave import fr_pilotwave_table, pm_conditionals, pm_joint
from .quantum import singlet_table

GENERATOR = "numpy.random.Philox(4x64-10); key=seed, counter=trial index, one block per trial"
ENGINES = ("pilotwave-pm", "collapse-pm", "fr-table", "quantum-pair")
DEFAULT_CHUNK = 1 << 16
_TO_UNIT = 2.0**-53


@dataclass(frozen=True)
class TrialPlan:
    engine: str
    trials: int
    seed: int = 0
    settings: Settings | None = None

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {ENGINES}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        needs_settings = self.engine in ("pilotwave-pm", "collapse-pm", "quantum-pair")
        if needs_settings and self.settings is None:
            raise ValueError(f"engine {self.engine!r} needs settings")
        if not needs_settings and self.settings is not None:
            raise ValueError(f"unsupported combination: engine {self.engine!r} with settings")


@dataclass(frozen=True)
class EmpiricalReport:
    plan: TrialPlan
    counts: np.ndarray
    table: JointTable
    correlators: Mapping[tuple[str, str], tuple[float, float]]
    max_deviation: float
    rng: Mapping[str, object] = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.plan.trials


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials ``start .. start + count - 1``; shape (count, 4)."""
    bg = np.random.Philox(key=seed, counter=start)
    raw = bg.random_raw(4 * count).reshape(count, 4)
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def _bernoulli_index(u, p_plus):
    """0 (+1 outcome) with probability p_plus, else 1."""
    return (u >= p_plus).astype(np.int64)


def _categorical(u, cdf):
    """Index into rows of ``cdf`` (shape (n, k)) selected by ``u``."""
    idx = (u[:, None] >= cdf[:, :-1]).sum(axis=1)
    return idx


def _chunk_pilotwave(s: Settings, u: np.ndarray) -> np.ndarray:
    b_given_a1, a2_given = pm_conditionals(s)
    a1 = _bernoulli_index(u[:, 0], 0.5)
    cdf = np.cumsum(b_given_a1.reshape(2, 4), axis=1)[a1]
    jk = _categorical(u[:, 1], cdf)
    b1, b2 = jk // 2, jk % 2
    a2 = _bernoulli_index(u[:, 2], a2_given[a1, b2, 0])
    return ((a1 * 2 + b1) * 2 + a2) * 2 + b2


def _chunk_collapse(s: Settings, u: np.ndarray) -> np.ndarray:
    same_b = math.sin((s.a1 - s.b1) / 2) ** 2
    keep_a = persistence(s.a1 - s.a2)
    keep_b = persistence(s.b1 - s.b2)
    a1 = _bernoulli_index(u[:, 0], 0.5)
    b1 = np.where(u[:, 1] < same_b, a1, 1 - a1)
    a2 = np.where(u[:, 2] < keep_a, a1, 1 - a1)
    b2 = np.where(u[:, 3] < keep_b, b1, 1 - b1)
    return ((a1 * 2 + b1) * 2 + a2) * 2 + b2


def _chunk_table(table: JointTable, u: np.ndarray) -> np.ndarray:
    p = table.probs.reshape(-1)
    cdf = np.cumsum(p)
    idx = np.searchsorted(cdf, u[:, 0], side="right")
    # round-off can leave cdf[-1] just below 1; never land on an empty trailing atom
    return np.minimum(idx, np.flatnonzero(p > 0)[-1])


def _chunk_quantum_pair(s: Settings, u: np.ndarray) -> np.ndarray:
    same = math.sin((s.a1 - s.b1) / 2) ** 2
    a = _bernoulli_index(u[:, 0], 0.5)
    b = np.where(u[:, 1] < same, a, 1 - a)
    return a * 2 + b


def analytic_table(plan: TrialPlan) -> JointTable:
    if plan.engine == "pilotwave-pm":
        return pm_joint(plan.settings)
    if plan.engine == "collapse-pm":
        return collapse_chain_joint(plan.settings)
    if plan.engine == "fr-table":
        return fr_pilotwave_table()
    return singlet_table(plan.settings.a1, plan.settings.b1)


def _sampler(plan: TrialPlan, table: JointTable):
    if plan.engine == "pilotwave-pm":
        return lambda u: _chunk_pilotwave(plan.settings, u)
    if plan.engine == "collapse-pm":
        return lambda u: _chunk_collapse(plan.settings, u)
    if plan.engine == "quantum-pair":
        return lambda u: _chunk_quantum_pair(plan.settings, u)
    return lambda u: _chunk_table(table, u)


def count_atoms(sampler, n_atoms: int, seed: int, trials: int, workers: int = 1, chunk: int = DEFAULT_CHUNK):
    """Exact per-atom counts over all trials; independent of ``workers`` and ``chunk``."""
    spans = [(start, min(chunk, trials - start)) for start in range(0, trials, chunk)]

    def run(span):
        start, n = span
        return np.bincount(sampler(uniforms(seed, start, n)), minlength=n_atoms)

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, spans))
    else:
        parts = [run(sp) for sp in spans]
    return np.sum(parts, axis=0)


def _pairs_for(parties):
    if parties == PM_PARTIES:
        return CROSS_PAIRS + SAME_SIDE_PAIRS
    return tuple((parties[i], parties[j]) for i in range(len(parties)) for j in range(i + 1, len(parties)))


def _report(plan, counts, reference, symbols=None) -> EmpiricalReport:
    table = JointTable(reference.parties, counts / plan.trials, symbols)
    se = 1 / math.sqrt(plan.trials)
    correlators = {pair: (expectation(table, pair), se) for pair in _pairs_for(reference.parties)}
    max_dev = float(np.max(np.abs(table.probs - reference.probs)))
    return EmpiricalReport(
        plan=plan,
        counts=counts,
        table=table,
        correlators=correlators,
        max_deviation=max_dev,
        rng={"generator": GENERATOR, "seed": plan.seed},
    )


def sample(plan: TrialPlan, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> EmpiricalReport:
    """Draw ``plan.trials`` outcome tuples and summarize them."""
    reference = analytic_table(plan)
    n_atoms = reference.probs.size
    counts = count_atoms(_sampler(plan, reference), n_atoms, plan.seed, plan.trials, workers, chunk)
    symbols = FR_SYMBOLS if reference.parties == FR_PARTIES else None
    return _report(plan, counts.reshape(reference.probs.shape), reference, symbols)


def sample_table(table: JointTable, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Counts from direct categorical sampling of ``table`` (no chain)."""
    counts = count_atoms(lambda u: _chunk_table(table, u), table.probs.size, seed, trials, workers)
    return counts.reshape(table.probs.shape)


def compare(empirical: EmpiricalReport, reference, sigmas: float = 5.0) -> AuditReport:
    """Check an empirical run against an analytic table or correlator set.

    Atom deviations are measured in binomial standard errors
    ``sqrt(p (1 - p) / n)``, with the variance floored at ``1 / (4 n)`` so
    that a handful of trials gets a wide tolerance; correlator deviations in
    ``1 / sqrt(n)``. An atom with analytic probability 0 or 1 must be matched
    exactly.
    """
    n = empirical.trials
    failures = []
    atoms = {}
    if isinstance(reference, JointTable):
        if reference.parties != empirical.table.parties:
            raise ValueError(f"party lists differ: {empirical.table.parties} vs {reference.parties}")
        worst = 0.0
        for (signs, p), (_, q) in zip(reference.atoms(), empirical.table.atoms()):
            exact = p <= 0.0 or p >= 1.0
            se = 0.0 if exact else math.sqrt(max(p * (1 - p), 0.25 / n) / n)
            dev = abs(q - p)
            ok = dev <= 1e-12 if exact else dev <= sigmas * se
            label = ",".join(reference.label(party, s) for party, s in zip(reference.parties, signs))
            atoms[label] = {"expected": p, "observed": q, "sigmas": dev / se if se else (0.0 if ok else math.inf)}
            if not ok:
                failures.append(f"atom {label}")
            worst = max(worst, dev)
        ref_corr = {pair: expectation(reference, pair) for pair in empirical.correlators}
    elif isinstance(reference, CorrelatorSet):
        ref_corr = {}
        for key, value in reference.as_dict().items():
            pair = (key[:2], key[2:])
            if pair in empirical.correlators:
                ref_corr[pair] = value
        if not ref_corr:
            raise ValueError("no correlators in common with the empirical run")
    else:
        raise TypeError(f"cannot compare against {type(reference).__name__}")

    corr = {}
    for pair, expected in ref_corr.items():
        est, se = empirical.correlators[pair]
        dev = abs(est - expected)
        name = pair[0] + pair[1]
        corr[name] = {"expected": expected, "observed": est, "se": se, "sigmas": dev / se}
        if dev > sigmas * se:
            failures.append(f"correlator {name}")
    return AuditReport(
        name="monte-carlo-compare",
        verdict="AGREE" if not failures else "DISAGREE",
        passed=not failures,
        values={"trials": n, "sigmas": sigmas, "atoms": atoms, "correlators": corr, "failures": failures},
    )
