"""Seeded Monte Carlo experiments and theory-vs-empirics comparisons.

Every experiment follows the same discipline: trial t draws its entire
randomness from a stream seeded by ``derive_seed(master_seed, t)``, so runs
are reproducible bit-for-bit, independent of execution order, and safe to
parallelize externally by partitioning trial indices.  Aggregates are always
computed from the trial-indexed observation list, never from accumulation
order.

The comparison statistics quantify "the empirical p-rank law is within O(1)
of the truncated binomial": Wasserstein-1 distance (L1 distance between
CDFs), and the tail P(|X - Y| >= m) of the comonotone coupling, i.e. sorted
observations paired with theoretical quantiles.  The comonotone coupling
minimizes displacement among all couplings, so an exponential-looking tail
under it is a necessary condition for the predicted closeness -- if it fails
here, it fails under every coupling.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Sequence

import numpy as np

from .bigraph import GraphModelParams, floor_ratio, sample_bipartite
from .errors import (
    EmptyInputError,
    GuardExceededError,
    InvalidParamsError,
    NotPrimeError,
)
from .gfp import is_prime
from .groups import is_cyclic, p_rank
from .reduction import build_M, corank_pipeline
from .rng import derive_seed
from .theory import RankDistribution, rank_pmf_theoretical

EXPERIMENT_KINDS = ("prank", "cyclicity", "m-corank", "q-sweep", "balanced-scaling")

QSWEEP_QS = (0.2, 0.35, 0.5, 0.65, 0.8)
BALANCED_NS = (50, 100, 200)

# Exact integer Smith form on every trial gets slow past this many vertices;
# the cyclicity experiment refuses rather than silently crawl.
SNF_VERTEX_GUARD = 500

_QUANTILE_LEVELS = (1, 25, 50, 75, 99)
_COUPLING_TAIL_RANGE = range(1, 11)


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one seeded experiment."""

    kind: str
    n: int
    alpha: float
    q: float
    p: int
    trials: int
    master_seed: int
    output_path: str | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise InvalidParamsError(
                f"kind must be one of {EXPERIMENT_KINDS}, got {self.kind!r}"
            )
        if not isinstance(self.trials, int) or self.trials < 1:
            raise InvalidParamsError(f"trials must be >= 1, got {self.trials}")
        if not is_prime(self.p):
            raise NotPrimeError(f"p must be prime, got {self.p}")
        if self.kind == "balanced-scaling" and float(self.alpha) != 1.0:
            raise InvalidParamsError(
                f"balanced-scaling requires alpha = 1, got {self.alpha}"
            )
        # Delegate n/alpha/q range checks to the graph model itself.
        GraphModelParams(n=self.n, alpha=self.alpha, q=self.q, seed=0)
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise InvalidParamsError(
                f"master_seed must be an integer in [0, 2**64), got {self.master_seed}"
            )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "alpha": self.alpha,
            "q": self.q,
            "p": self.p,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "output_path": self.output_path,
        }


@dataclass(frozen=True)
class ComparisonStats:
    """How far an empirical integer-valued sample sits from a predicted law."""

    mean_gap: float
    wasserstein1: float
    quantile_coupling_tail: tuple[float, ...]
    fitted_decay_rate: float | None

    def to_json(self) -> dict:
        return {
            "mean_gap": self.mean_gap,
            "wasserstein1": self.wasserstein1,
            "quantile_coupling_tail": list(self.quantile_coupling_tail),
            "fitted_decay_rate": self.fitted_decay_rate,
        }


@dataclass(frozen=True)
class ExperimentResult:
    """Observations plus summary statistics for one experiment run."""

    config: ExperimentConfig
    per_trial: tuple[int, ...]
    mean: float
    variance: float
    quantiles: dict[int, float]
    wall_time_ms: float
    version: str
    comparison: ComparisonStats | None = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "config": self.config.to_json(),
            "per_trial": list(self.per_trial),
            "mean": self.mean,
            "variance": self.variance,
            "quantiles": {str(k): v for k, v in self.quantiles.items()},
            "comparison": None if self.comparison is None else self.comparison.to_json(),
            "wall_time_ms": self.wall_time_ms,
            "version": self.version,
            "extras": self.extras,
        }


def _summarize(values: Sequence[int]) -> tuple[float, float, dict[int, float]]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    variance = float(arr.var(ddof=1)) if arr.size > 1 else 0.0
    quantiles = {
        level: float(np.percentile(arr, level)) for level in _QUANTILE_LEVELS
    }
    return mean, variance, quantiles


def _package_version() -> str:
    from . import __version__

    return __version__


def _run_trials(
    cfg: ExperimentConfig, observe: Callable[[int, int], int]
) -> tuple[tuple[int, ...], float]:
    """Run ``observe(trial, trial_seed)`` for every trial; returns observations."""
    start = time.perf_counter()
    observations = tuple(
        int(observe(t, derive_seed(cfg.master_seed, t))) for t in range(cfg.trials)
    )
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return observations, elapsed_ms


def _result(
    cfg: ExperimentConfig,
    observations: tuple[int, ...],
    elapsed_ms: float,
    comparison: ComparisonStats | None = None,
    extras: dict | None = None,
) -> ExperimentResult:
    mean, variance, quantiles = _summarize(observations)
    return ExperimentResult(
        config=cfg,
        per_trial=observations,
        mean=mean,
        variance=variance,
        quantiles=quantiles,
        wall_time_ms=elapsed_ms,
        version=_package_version(),
        comparison=comparison,
        extras=extras or {},
    )


def run_prank_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Sample graphs and record the p-rank of each sandpile group.

    The comparison block is filled against the truncated-binomial law for the
    same (n, alpha, p).
    """
    if cfg.kind != "prank":
        raise InvalidParamsError(f"expected kind 'prank', got {cfg.kind!r}")

    def observe(_t: int, trial_seed: int) -> int:
        params = GraphModelParams(n=cfg.n, alpha=cfg.alpha, q=cfg.q, seed=trial_seed)
        return p_rank(sample_bipartite(params), cfg.p)

    observations, elapsed_ms = _run_trials(cfg, observe)
    dist = rank_pmf_theoretical(cfg.n, cfg.alpha, cfg.p)
    comparison = compare_to_theory(observations, dist)
    return _result(cfg, observations, elapsed_ms, comparison=comparison)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% (by default) Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise EmptyInputError("wilson interval needs at least one trial")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def run_cyclicity_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Record, per sampled graph, whether the sandpile group is cyclic.

    Uses the exact integer Smith form on every trial, so it refuses graphs
    with more than ``SNF_VERTEX_GUARD`` vertices (:class:`GuardExceededError`).
    The 95% Wilson interval for the cyclic fraction lands in
    ``extras["wilson95"]``.
    """
    if cfg.kind != "cyclicity":
        raise InvalidParamsError(f"expected kind 'cyclicity', got {cfg.kind!r}")
    total_vertices = cfg.n + floor_ratio(cfg.alpha, cfg.n)
    if total_vertices > SNF_VERTEX_GUARD:
        raise GuardExceededError(
            f"{total_vertices} vertices exceeds the exact-Smith-form guard "
            f"({SNF_VERTEX_GUARD}); use a smaller n"
        )

    def observe(_t: int, trial_seed: int) -> int:
        params = GraphModelParams(n=cfg.n, alpha=cfg.alpha, q=cfg.q, seed=trial_seed)
        return int(is_cyclic(sample_bipartite(params)))

    observations, elapsed_ms = _run_trials(cfg, observe)
    low, high = wilson_interval(sum(observations), cfg.trials)
    return _result(
        cfg, observations, elapsed_ms, extras={"wilson95": [low, high]}
    )


def run_mcorank_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Record coranks of the uniformized matrices, with pipeline cross-checks.

    Observations are the directly computed coranks; ``extras`` reports
    whether the Schur-complement corank agreed on every trial and how the
    zero-diagonal regimes split.  The comparison block is filled against the
    same truncated-binomial law as the p-rank experiment.
    """
    if cfg.kind != "m-corank":
        raise InvalidParamsError(f"expected kind 'm-corank', got {cfg.kind!r}")
    start = time.perf_counter()
    observations: list[int] = []
    mismatches = 0
    regime_counts: dict[str, int] = {}
    for t in range(cfg.trials):
        trial_seed = derive_seed(cfg.master_seed, t)
        report = corank_pipeline(build_M(cfg.n, cfg.alpha, cfg.q, cfg.p, trial_seed))
        observations.append(report.corank_direct)
        if report.corank_direct != report.corank_schur:
            mismatches += 1
        regime_counts[report.regime] = regime_counts.get(report.regime, 0) + 1
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    dist = rank_pmf_theoretical(cfg.n, cfg.alpha, cfg.p)
    comparison = compare_to_theory(observations, dist)
    return _result(
        cfg,
        tuple(observations),
        elapsed_ms,
        comparison=comparison,
        extras={
            "schur_all_equal": mismatches == 0,
            "schur_mismatches": mismatches,
            "regime_counts": regime_counts,
        },
    )


def compare_to_theory(
    observations: Sequence[int], dist: RankDistribution
) -> ComparisonStats:
    """Distance statistics between integer observations and a predicted law.

    Wasserstein-1 is computed as the L1 distance between the empirical and
    theoretical CDFs on the integer grid.  The coupling tail pairs sorted
    observations with theoretical quantiles at levels (t + 0.5) / trials and
    reports the fraction of pairs at distance >= m for m = 1..10; the fitted
    decay rate is the least-squares slope of log tail against m over the
    strictly positive tail entries (None when fewer than two are positive).
    """
    observations = list(observations)
    if not observations:
        raise EmptyInputError("no observations to compare")
    trials = len(observations)
    emp_mean = sum(observations) / trials
    mean_gap = abs(emp_mean - dist.mean())

    top = max(max(observations), max(dist.support()))
    wasserstein1 = 0.0
    emp_cdf = 0.0
    counts = np.bincount(np.asarray(observations, dtype=np.int64), minlength=top + 1)
    for k in range(top):
        emp_cdf += counts[k] / trials
        wasserstein1 += abs(emp_cdf - dist.cdf_at(k))

    sorted_obs = sorted(observations)
    gaps = [
        abs(x - dist.quantile((t + 0.5) / trials))
        for t, x in enumerate(sorted_obs)
    ]
    tail = tuple(
        sum(1 for g in gaps if g >= m) / trials for m in _COUPLING_TAIL_RANGE
    )
    positive = [(m, t) for m, t in zip(_COUPLING_TAIL_RANGE, tail) if t > 0]
    if len(positive) >= 2:
        ms = np.array([m for m, _ in positive], dtype=np.float64)
        logs = np.log(np.array([t for _, t in positive], dtype=np.float64))
        decay = float(np.polyfit(ms, logs, 1)[0])
    else:
        decay = None
    return ComparisonStats(
        mean_gap=mean_gap,
        wasserstein1=wasserstein1,
        quantile_coupling_tail=tail,
        fitted_decay_rate=decay,
    )


@dataclass(frozen=True)
class SweepResult:
    """A table experiment: one sub-experiment per swept parameter value."""

    kind: str
    rows: tuple[tuple[float, float], ...]
    results: tuple[ExperimentResult, ...]
    wall_time_ms: float

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind,
            "rows": [list(row) for row in self.rows],
            "results": [r.to_json() for r in self.results],
            "wall_time_ms": self.wall_time_ms,
        }


def run_qsweep(cfg: ExperimentConfig, qs: Sequence[float] = QSWEEP_QS) -> SweepResult:
    """Mean p-rank across edge probabilities, all else shared.

    The predicted law does not involve q at all; the sweep makes that
    empirical.  Rows are (q, mean p-rank).  Each q gets an independent
    sub-stream of the master seed.
    """
    if cfg.kind != "q-sweep":
        raise InvalidParamsError(f"expected kind 'q-sweep', got {cfg.kind!r}")
    if not qs:
        raise InvalidParamsError("need at least one q value")
    start = time.perf_counter()
    results = []
    for i, q in enumerate(qs):
        sub = ExperimentConfig(
            kind="prank",
            n=cfg.n,
            alpha=cfg.alpha,
            q=q,
            p=cfg.p,
            trials=cfg.trials,
            master_seed=derive_seed(cfg.master_seed, i),
        )
        results.append(run_prank_experiment(sub))
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    rows = tuple((float(q), r.mean) for q, r in zip(qs, results))
    return SweepResult(
        kind="q-sweep", rows=rows, results=tuple(results), wall_time_ms=elapsed_ms
    )


def run_balanced_scaling(
    cfg: ExperimentConfig, ns: Sequence[int] = BALANCED_NS
) -> SweepResult:
    """Mean p-rank divided by n, for equal part sizes (alpha = 1).

    The prediction for alpha = 1 is sublinear growth, so mean/n should fall
    as n grows.  Rows are (n, mean p-rank / n).
    """
    if cfg.kind != "balanced-scaling":
        raise InvalidParamsError(
            f"expected kind 'balanced-scaling', got {cfg.kind!r}"
        )
    if not ns:
        raise InvalidParamsError("need at least one n value")
    start = time.perf_counter()
    results = []
    for i, n in enumerate(ns):
        sub = ExperimentConfig(
            kind="prank",
            n=n,
            alpha=cfg.alpha,
            q=cfg.q,
            p=cfg.p,
            trials=cfg.trials,
            master_seed=derive_seed(cfg.master_seed, i),
        )
        results.append(run_prank_experiment(sub))
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    rows = tuple((float(n), r.mean / n) for n, r in zip(ns, results))
    return SweepResult(
        kind="balanced-scaling",
        rows=rows,
        results=tuple(results),
        wall_time_ms=elapsed_ms,
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult | SweepResult:
    """Dispatch on ``cfg.kind``."""
    runners = {
        "prank": run_prank_experiment,
        "cyclicity": run_cyclicity_experiment,
        "m-corank": run_mcorank_experiment,
        "q-sweep": run_qsweep,
        "balanced-scaling": run_balanced_scaling,
    }
    return runners[cfg.kind](cfg)


def write_result_json(result: ExperimentResult | SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.to_json(), fh, indent=2)
        fh.write("\n")


def write_trials_csv(result: ExperimentResult, path) -> None:
    """Per-trial CSV with fixed columns (trial, seed, observation)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "seed", "observation"])
        for t, obs in enumerate(result.per_trial):
            writer.writerow([t, derive_seed(result.config.master_seed, t), obs])
