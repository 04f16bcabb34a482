"""Acceptance suite for the simulator.

Each test prints one PASS/FAIL line (run with `pytest -s` to see the lines
for passing criteria). Scale: 20 pairs, 40 channels, the default symmetric
occupancy chain, 2000-slot horizon, 50 seeds per scenario point.
"""

import os

import numpy as np
import pytest

from crnsim.config import ScenarioConfig
from crnsim.fading import RayleighParams, ShadowParams, sample_rayleigh_block, sample_shadow_block
from crnsim.mac import NeighborGraph, ReservationTable, Verdict, run_slot
from crnsim.markov import (
    STATE_IDLE,
    PuNetworkState,
    SenseResult,
    TransitionMatrix,
    _step_states,
    idle_transition_arrays,
    init_belief,
    update_belief,
)
from crnsim.policies import PolicyKind
from crnsim.runner import ALL_POLICIES, aggregate_runs, run_many

from helpers import joint_filter_marginals, random_matrices

WORKERS = os.cpu_count() or 1
SEEDS = 50
EQ4 = TransitionMatrix(0.8, 0.2, 0.2, 0.8)


def check(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def steady_values(cfg):
    runs = run_many(cfg, num_runs=SEEDS, workers=WORKERS)
    return np.array([r.steady_state_throughput for r in runs])


def agg_interval(steady):
    mean = steady.mean()
    half = 1.96 * steady.std(ddof=1) / np.sqrt(steady.size)
    return mean, mean - half, mean + half


# ---------------------------------------------------------------------------
# Heavy scenario grids, built once per session.
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def multiuser_steady():
    cfg = ScenarioConfig(num_seeds=SEEDS)
    return {pol: steady_values(cfg.with_policy(pol)) for pol in ALL_POLICIES}


@pytest.fixture(scope="session")
def single_user_steady():
    cfg = ScenarioConfig(num_pairs=1, num_seeds=SEEDS)
    return {pol: steady_values(cfg.with_policy(pol))
            for pol in ("myopic", "csi-myopic")}


@pytest.fixture(scope="session")
def snr_grid(multiuser_steady):
    grid = {(pol, 10.0): multiuser_steady[pol] for pol in ALL_POLICIES}
    for snr in (0.0, 5.0, 15.0, 20.0):
        cfg = ScenarioConfig(mean_snr_db=snr, num_seeds=SEEDS)
        for pol in ALL_POLICIES:
            grid[(pol, snr)] = steady_values(cfg.with_policy(pol))
    return grid


@pytest.fixture(scope="session")
def rho_grid():
    grid = {}
    for rho in (0.2, 0.5, 0.9):
        cfg = ScenarioConfig(fading_model="lognormal", rho=rho, num_seeds=SEEDS)
        for pol in ("myopic", "csi-myopic"):
            grid[(pol, rho)] = steady_values(cfg.with_policy(pol))
    return grid


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def test_belief_oracle_matches_joint_filter():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        N = int(rng.integers(1, 4))
        mats = random_matrices(N, rng)
        T = 30
        actions = [int(rng.integers(N)) for _ in range(T)]
        obs = [int(rng.integers(2)) for _ in range(T)]
        expected = joint_filter_marginals(mats, actions, obs)
        theta = init_belief(mats)
        for k in range(T):
            theta = update_belief(theta, SenseResult(actions[k], obs[k]), mats)
            worst = max(worst, float(np.max(np.abs(theta - expected[k]))))
    check("belief-oracle", worst <= 1e-10,
          f"max |marginal - joint filter| = {worst:.3e} over 200 sequences (tol 1e-10)")


def _belief_after(theta, action, obs, mats):
    return update_belief(np.asarray(theta, dtype=np.float64),
                         SenseResult(action, obs), mats)


def _enumerate_policy_values(theta, mats, horizon):
    """Exact value of every deterministic history-dependent policy tree."""
    if horizon == 0:
        return np.zeros(1)
    per_action = []
    for a in range(len(theta)):
        v_idle = _enumerate_policy_values(_belief_after(theta, a, 1, mats),
                                          mats, horizon - 1)
        v_busy = _enumerate_policy_values(_belief_after(theta, a, 0, mats),
                                          mats, horizon - 1)
        combined = theta[a] + theta[a] * v_idle[:, None] \
            + (1.0 - theta[a]) * v_busy[None, :]
        per_action.append(combined.ravel())
    return np.concatenate(per_action)


def _myopic_value(theta, mats, horizon):
    """Exact expected reward of the myopic rule with uniform tie-breaking."""
    if horizon == 0:
        return 0.0
    scores = np.asarray(theta)
    ties = np.flatnonzero(scores == scores.max())
    total = 0.0
    for a in ties:
        v = theta[a] \
            + theta[a] * _myopic_value(_belief_after(theta, a, 1, mats),
                                       mats, horizon - 1) \
            + (1.0 - theta[a]) * _myopic_value(_belief_after(theta, a, 0, mats),
                                               mats, horizon - 1)
        total += v / ties.size
    return total


def test_myopic_optimality_oracle():
    mats = (EQ4, EQ4)
    theta0 = init_belief(mats)
    horizon = 4
    all_values = _enumerate_policy_values(theta0, mats, horizon)
    optimum = float(all_values.max())
    myopic = _myopic_value(theta0, mats, horizon)
    gap = abs(myopic - optimum)
    check("myopic-optimality",
          gap <= 1e-9 and all_values.size == 32768,
          f"myopic {myopic:.12f} vs enumeration optimum {optimum:.12f} over "
          f"{all_values.size} policies, |gap| = {gap:.3e} (tol 1e-9)")


def test_fading_moments():
    block = sample_rayleigh_block(1000, 1000, RayleighParams(10.0),
                                  np.random.default_rng(103))
    ray_err = abs(block.snr.mean() - 10.0) / 10.0

    # One wide block = many independent single-channel blocks: channels are
    # i.i.d. draws with the same cross-pair correlation.
    M, blocks = 8, 100_000
    shadow = sample_shadow_block(M, blocks, ShadowParams(10.0, 5.0, 0.2),
                                 np.random.default_rng(104))
    lin_err = np.max(np.abs(shadow.snr.mean(axis=1) - 10.0)) / 10.0
    gamma_db = 10.0 * np.log10(shadow.snr)
    std_err = np.max(np.abs(gamma_db.std(axis=1, ddof=1) - 5.0)) / 5.0
    corr_err = max(
        abs(np.corrcoef(gamma_db[m], gamma_db[m + 1])[0, 1] - 0.2)
        for m in range(M - 1)
    )
    ok = ray_err <= 0.005 and lin_err <= 0.02 and std_err <= 0.01 and corr_err <= 0.02
    check("fading-moments", ok,
          f"rayleigh mean err {ray_err:.2%} (tol 0.5%); lognormal linear mean err "
          f"{lin_err:.2%} (tol 2%), dB std err {std_err:.2%} (tol 1%), "
          f"adjacent corr err {corr_err:.4f} (tol 0.02)")


def test_multiuser_policy_ordering(multiuser_steady):
    csi_mean, csi_lo, _ = agg_interval(multiuser_steady["csi-myopic"])
    myo_mean, _, myo_hi = agg_interval(multiuser_steady["myopic"])
    rand_mean, _, _ = agg_interval(multiuser_steady["random"])
    part_a = csi_lo > myo_hi
    check("multiuser-csi-beats-myopic", part_a,
          f"csi {csi_mean:.4f} (ci_low {csi_lo:.4f}) vs myopic {myo_mean:.4f} "
          f"(ci_high {myo_hi:.4f}), non-overlapping CIs over {SEEDS} seeds")
    gap_pol = csi_mean - myo_mean
    gap_base = abs(myo_mean - rand_mean)
    check("myopic-near-random", gap_base < gap_pol,
          f"|myopic-random| = {gap_base:.4f} < csi-myopic gap = {gap_pol:.4f}")


def test_single_user_ordering(single_user_steady):
    csi_mean, csi_lo, _ = agg_interval(single_user_steady["csi-myopic"])
    myo_mean, _, myo_hi = agg_interval(single_user_steady["myopic"])
    check("single-user-ordering", csi_lo > myo_hi,
          f"M=1: csi {csi_mean:.4f} (ci_low {csi_lo:.4f}) vs myopic "
          f"{myo_mean:.4f} (ci_high {myo_hi:.4f})")


SNR_GRID = (0.0, 5.0, 10.0, 15.0, 20.0)


def test_snr_monotonicity(snr_grid):
    worst = []
    for pol in ALL_POLICIES:
        for lo, hi in zip(SNR_GRID, SNR_GRID[1:]):
            d = snr_grid[(pol, hi)] - snr_grid[(pol, lo)]
            allowance = 1.96 * d.std(ddof=1) / np.sqrt(d.size)
            worst.append((d.mean() + allowance, pol, lo, hi, d.mean()))
    floor = min(worst)[0]
    ok = floor >= 0.0
    check("throughput-monotone-in-snr", ok,
          "seed-matched steady-state nondecreasing in SNR for all policies "
          f"(worst paired mean+allowance = {floor:.4f} >= 0)")


def test_csi_gain_grows_with_snr(snr_grid):
    gap0 = (snr_grid[("csi-myopic", 0.0)] - snr_grid[("myopic", 0.0)]).mean()
    gap20 = (snr_grid[("csi-myopic", 20.0)] - snr_grid[("myopic", 20.0)]).mean()
    check("csi-gain-grows-with-snr", gap20 > gap0,
          f"csi-myopic gap {gap20:.4f} at 20 dB > {gap0:.4f} at 0 dB")


RHO_GRID = (0.2, 0.5, 0.9)


def test_lognormal_low_correlation_ordering(rho_grid):
    csi_mean, csi_lo, _ = agg_interval(rho_grid[("csi-myopic", 0.2)])
    myo_mean, _, myo_hi = agg_interval(rho_grid[("myopic", 0.2)])
    check("lognormal-csi-beats-myopic", csi_lo > myo_hi,
          f"rho=0.2: csi {csi_mean:.4f} (ci_low {csi_lo:.4f}) vs myopic "
          f"{myo_mean:.4f} (ci_high {myo_hi:.4f})")


def test_correlation_degrades_diversity(rho_grid):
    slack = []
    for lo, hi in zip(RHO_GRID, RHO_GRID[1:]):
        d = rho_grid[("csi-myopic", hi)] - rho_grid[("csi-myopic", lo)]
        allowance = 1.96 * d.std(ddof=1) / np.sqrt(d.size)
        slack.append(d.mean() - allowance)
    nonincreasing = max(slack) <= 0.0
    check("csi-nonincreasing-in-rho", nonincreasing,
          "seed-matched csi-myopic steady state nonincreasing over rho "
          f"{RHO_GRID} (worst paired mean-allowance = {max(slack):.4f} <= 0)")

    def rel_gap(rho):
        csi = rho_grid[("csi-myopic", rho)].mean()
        myo = rho_grid[("myopic", rho)].mean()
        return (csi - myo) / myo

    g02, g09 = rel_gap(0.2), rel_gap(0.9)
    check("csi-gap-collapses-at-high-rho", g09 < g02,
          f"relative csi/myopic gap {g09:.4f} at rho=0.9 < {g02:.4f} at rho=0.2")


def test_protocol_invariants():
    rng = np.random.default_rng(107)
    slots_run = 0
    replays_checked = 0
    while slots_run < 10_000:
        M = int(rng.integers(2, 12))
        N = int(rng.integers(1, 12))
        T = int(rng.integers(20, 60))
        policy = PolicyKind(rng.choice([p.value for p in PolicyKind]))
        mats = random_matrices(N, rng)
        p01, p11 = idle_transition_arrays(mats)
        graph = NeighborGraph.complete(M)
        table = ReservationTable(graph)
        bw = np.ones(N)
        seeds = (int(rng.integers(1 << 30)), int(rng.integers(1 << 30)),
                 int(rng.integers(1 << 30)), int(rng.integers(1 << 30)))
        traces = []
        for _ in range(2):  # identical seeds: replay must be bit-exact
            rng_pu = np.random.default_rng(seeds[0])
            rng_fad = np.random.default_rng(seeds[1])
            rng_pol = np.random.default_rng(seeds[2])
            rng_mac = np.random.default_rng(seeds[3])
            states = (rng_pu.random(N) < init_belief(mats)).astype(np.int8)
            pu = PuNetworkState(states, tuple(mats))
            beliefs = np.tile(init_belief(mats), (M, 1))
            snr = rng_fad.exponential(10.0, (M, N)) + 1e-12
            trace = []
            for _ in range(T):
                result, beliefs = run_slot(
                    pu, beliefs, snr, policy, bw, graph, rng_pol, rng_mac,
                    reservations=table,
                )
                channels = result.chosen[result.winner_pairs]
                assert np.unique(channels).size == channels.size, \
                    "two winners on one channel"
                assert np.all(pu.states[channels] == STATE_IDLE), \
                    "transmission on a PU-busy channel"
                assert table.is_empty, "database entries survived the slot"
                trace.append((result.chosen.copy(), result.verdict.copy(),
                              result.reward.copy()))
                pu.states = _step_states(pu.states, p01, p11, rng_pu)
            traces.append(trace)
        for (c1, v1, r1), (c2, v2, r2) in zip(*traces):
            assert np.array_equal(c1, c2) and np.array_equal(v1, v2) \
                and np.array_equal(r1, r2), "replay diverged"
        replays_checked += 1
        slots_run += T
    check("protocol-invariants", True,
          f"{slots_run} randomized slots over {replays_checked} scenarios: "
          "one winner per channel, no PU collisions, empty databases, "
          "bit-exact replay")
