"""Scenario loop, metrics, cross-run aggregation, parameter sweeps, CSV output.

Every run owns four independent random streams derived purely from
(master_seed, run_index, role), role in {pu, fading, policy, mac}. PU and
fading draws are consumed on a schedule that does not depend on the policy,
so runs of different policies with the same (master_seed, run_index) see
identical channel realizations (common random numbers).
"""

import csv
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .config import ConfigError, ScenarioConfig
from .fading import sample_rayleigh_block, sample_shadow_block
from .mac import Verdict, run_slot
from .markov import (
    _step_states,
    idle_transition_arrays,
    init_belief,
    sample_initial_states,
)
from .policies import capacity

STREAM_ROLES = {"pu": 0, "fading": 1, "policy": 2, "mac": 3}

ALL_POLICIES = ("random", "myopic", "csi-myopic")


def derive_rng(master_seed: int, run_index: int, role: str) -> np.random.Generator:
    """Stable per-run stream: PCG64 seeded by (master_seed, run_index, role code).

    Role codes: pu=0, fading=1, policy=2, mac=3. The triple feeds a numpy
    SeedSequence, so the stream is a pure function of its arguments.
    """
    seq = np.random.SeedSequence((master_seed, run_index, STREAM_ROLES[role]))
    return np.random.default_rng(seq)


@dataclass
class RunMetrics:
    """Per-slot records of one run plus its identity."""

    scenario_id: str
    policy: str
    run_index: int
    num_pairs: int
    network_reward: np.ndarray
    running_norm_throughput: np.ndarray
    n_transmitted: np.ndarray
    n_lost_contention: np.ndarray
    n_slept_busy: np.ndarray
    n_blocked: np.ndarray
    distinct_channels: np.ndarray
    per_pair_total_reward: np.ndarray | None = None
    pu_trace: np.ndarray | None = None
    snr_blocks: list | None = None

    @property
    def horizon(self) -> int:
        return self.network_reward.size

    @property
    def steady_state_throughput(self) -> float:
        """Mean per-slot network reward over the final half of the horizon, per pair."""
        start = self.horizon // 2
        return float(self.network_reward[start:].mean() / self.num_pairs)


def run_scenario(
    cfg: ScenarioConfig, run_index: int, record_debug: bool = False
) -> RunMetrics:
    """Simulate one seeded run of the configured scenario.

    PU states start from each channel's stationary distribution; fading is
    resampled every fading_block_slots slots; the result is bit-reproducible
    given (master_seed, run_index).
    """
    cfg.validate()
    if run_index < 0:
        raise ValueError("run_index must be nonnegative")
    M, N, T = cfg.num_pairs, cfg.num_channels, cfg.horizon_slots
    block_len = cfg.fading_block_slots
    matrices = cfg.matrices()
    p01v, p11v = idle_transition_arrays(matrices)
    bw = cfg.bandwidth_vector()
    graph = cfg.graph()
    policy = cfg.policy_kind()
    params = cfg.fading_params()

    rng_pu = derive_rng(cfg.master_seed, run_index, "pu")
    rng_fading = derive_rng(cfg.master_seed, run_index, "fading")
    rng_policy = derive_rng(cfg.master_seed, run_index, "policy")
    rng_mac = derive_rng(cfg.master_seed, run_index, "mac")

    pu = sample_initial_states(matrices, rng_pu)
    beliefs = np.tile(init_belief(matrices), (M, 1))

    if cfg.fading_model == "rayleigh":
        def sample_block(index):
            return sample_rayleigh_block(M, N, params, rng_fading, index, block_len)
    else:
        def sample_block(index):
            return sample_shadow_block(M, N, params, rng_fading, index, block_len)

    network_reward = np.zeros(T)
    running = np.zeros(T)
    counts = np.zeros((4, T), dtype=np.int32)
    distinct = np.zeros(T, dtype=np.int32)
    per_pair = np.zeros(M)
    pu_trace = np.zeros((T, N), dtype=np.int8) if record_debug else None
    snr_blocks = [] if record_debug else None

    snr = cap = None
    cum = 0.0
    for t in range(T):
        if t % block_len == 0:
            block = sample_block(t // block_len)
            snr = block.snr
            cap = capacity(snr, bw)
            if record_debug:
                snr_blocks.append(snr)
        if record_debug:
            pu_trace[t] = pu.states
        result, beliefs = run_slot(
            pu, beliefs, snr, policy, bw, graph, rng_policy, rng_mac,
            capacity_matrix=cap,
        )
        per_pair += result.reward
        net = float(result.reward.sum())
        cum += net
        network_reward[t] = net
        running[t] = cum / ((t + 1) * M)
        counts[:, t] = result.verdict_counts
        distinct[t] = result.num_distinct_channels
        pu.states = _step_states(pu.states, p01v, p11v, rng_pu)

    return RunMetrics(
        scenario_id=cfg.label(),
        policy=cfg.policy,
        run_index=run_index,
        num_pairs=M,
        network_reward=network_reward,
        running_norm_throughput=running,
        n_transmitted=counts[Verdict.TRANSMITTED],
        n_lost_contention=counts[Verdict.LOST_CONTENTION],
        n_slept_busy=counts[Verdict.SLEPT_BUSY],
        n_blocked=counts[Verdict.BLOCKED_BY_DATABASE],
        distinct_channels=distinct,
        per_pair_total_reward=per_pair,
        pu_trace=pu_trace,
        snr_blocks=snr_blocks,
    )


def run_many(
    cfg: ScenarioConfig, num_runs: int | None = None, workers: int | None = None
) -> list[RunMetrics]:
    """Run run_index = 0..num_runs-1 (default cfg.num_seeds).

    Runs are independent (each owns its state and streams), so workers > 1
    fans them out over processes; results come back ordered by run_index
    and are identical to a sequential execution.
    """
    n = cfg.num_seeds if num_runs is None else num_runs
    if workers is None or workers <= 1 or n <= 1:
        return [run_scenario(cfg, r) for r in range(n)]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_scenario, [cfg] * n, range(n)))


def _ci_half_width(values: np.ndarray) -> float:
    # Normal-approximation 95% interval; a single run has zero width.
    n = values.size
    if n < 2:
        return 0.0
    return float(1.96 * values.std(ddof=1) / np.sqrt(n))


@dataclass
class AggregateMetrics:
    """Cross-run mean and 95% confidence bands."""

    scenario_id: str
    policy: str
    num_runs: int
    mean_running: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    steady_per_run: np.ndarray
    steady_mean: float
    steady_ci_low: float
    steady_ci_high: float


def aggregate_runs(runs: Sequence[RunMetrics]) -> AggregateMetrics:
    """Pointwise mean and normal-approximation 95% CI across runs."""
    if not runs:
        raise ValueError("at least one run is required")
    horizons = {r.horizon for r in runs}
    if len(horizons) > 1:
        raise ValueError(f"runs have mismatched horizons: {sorted(horizons)}")
    series = np.stack([r.running_norm_throughput for r in runs])
    n = series.shape[0]
    mean = series.mean(axis=0)
    if n > 1:
        half = 1.96 * series.std(axis=0, ddof=1) / np.sqrt(n)
    else:
        half = np.zeros_like(mean)
    steady = np.array([r.steady_state_throughput for r in runs])
    s_half = _ci_half_width(steady)
    s_mean = float(steady.mean())
    return AggregateMetrics(
        scenario_id=runs[0].scenario_id,
        policy=runs[0].policy,
        num_runs=n,
        mean_running=mean,
        ci_low=mean - half,
        ci_high=mean + half,
        steady_per_run=steady,
        steady_mean=s_mean,
        steady_ci_low=s_mean - s_half,
        steady_ci_high=s_mean + s_half,
    )


@dataclass(frozen=True)
class SweepPoint:
    """Steady-state aggregate of one (parameter value, policy) cell."""

    scenario_id: str
    policy: str
    param_name: str
    param_value: float
    steady_state_throughput: float
    ci_low: float
    ci_high: float
    num_seeds: int


SWEEP_PARAMS = ("mean_snr_db", "rho")


def sweep(
    cfg: ScenarioConfig,
    param_name: str,
    values: Sequence[float],
    policies: Sequence[str] = ALL_POLICIES,
    workers: int | None = None,
) -> list[SweepPoint]:
    """Aggregate steady-state throughput over a parameter grid, per policy.

    All cells share per-run seeds (common random numbers): run r consumes
    identical PU and fading realizations in every cell.
    """
    if param_name not in SWEEP_PARAMS:
        raise ConfigError(f"param_name: expected one of {SWEEP_PARAMS}, got {param_name!r}")
    if param_name == "rho" and cfg.fading_model != "lognormal":
        raise ConfigError("parameter not applicable: rho requires the lognormal model")
    points = []
    for value in values:
        point_cfg = replace(cfg, **{param_name: float(value)})
        for policy in policies:
            runs = run_many(point_cfg.with_policy(policy), workers=workers)
            agg = aggregate_runs(runs)
            points.append(SweepPoint(
                scenario_id=point_cfg.label(),
                policy=policy,
                param_name=param_name,
                param_value=float(value),
                steady_state_throughput=agg.steady_mean,
                ci_low=agg.steady_ci_low,
                ci_high=agg.steady_ci_high,
                num_seeds=agg.num_runs,
            ))
    return points


TIMESERIES_COLUMNS = (
    "scenario_id", "policy", "seed", "slot", "network_reward",
    "running_norm_throughput", "n_transmitted", "n_lost_contention",
    "n_slept_busy", "n_blocked",
)

SWEEP_COLUMNS = (
    "scenario_id", "policy", "param_name", "param_value",
    "steady_state_throughput", "ci_low", "ci_high", "num_seeds",
)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def write_csv(data, path) -> None:
    """Write run time series (list of RunMetrics) or a sweep table to CSV.

    One header row, stable column order, UTF-8, LF line endings; float
    fields carry 9 significant digits. Slots are numbered from 1.
    """
    rows = list(data)
    if not rows:
        raise ValueError("nothing to write: empty data")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if isinstance(rows[0], RunMetrics):
            writer.writerow(TIMESERIES_COLUMNS)
            for run in rows:
                for t in range(run.horizon):
                    writer.writerow((
                        run.scenario_id, run.policy, run.run_index, t + 1,
                        _fmt(run.network_reward[t]),
                        _fmt(run.running_norm_throughput[t]),
                        run.n_transmitted[t], run.n_lost_contention[t],
                        run.n_slept_busy[t], run.n_blocked[t],
                    ))
        elif isinstance(rows[0], SweepPoint):
            writer.writerow(SWEEP_COLUMNS)
            for p in rows:
                writer.writerow((
                    p.scenario_id, p.policy, p.param_name, _fmt(p.param_value),
                    _fmt(p.steady_state_throughput), _fmt(p.ci_low),
                    _fmt(p.ci_high), p.num_seeds,
                ))
        else:
            raise TypeError(f"cannot serialize {type(rows[0]).__name__} rows")


def steady_points(runs_by_policy: dict[str, Sequence[RunMetrics]]) -> list[SweepPoint]:
    """Sweep-schema rows for plain (non-sweep) runs; param_name is 'none'."""
    points = []
    for policy, runs in runs_by_policy.items():
        agg = aggregate_runs(list(runs))
        points.append(SweepPoint(
            scenario_id=agg.scenario_id,
            policy=policy,
            param_name="none",
            param_value=0.0,
            steady_state_throughput=agg.steady_mean,
            ci_low=agg.steady_ci_low,
            ci_high=agg.steady_ci_high,
            num_seeds=agg.num_runs,
        ))
    return points
