"""Shared test oracles, kept independent of the code paths they check."""

import itertools

import numpy as np

from crnsim.markov import TransitionMatrix, stationary_belief


def joint_filter_marginals(matrices, actions, observations):
    """Exact Bayesian filtering on the joint 2^N occupancy chain.

    Conditions on the sensed channel's observed state, renormalizes,
    propagates through the full joint transition matrix, and returns the
    per-channel idle marginals after each step. Brute force by design:
    enumerates all 2^N joint states.
    """
    N = len(matrices)
    states = list(itertools.product((0, 1), repeat=N))
    pi = [stationary_belief(m) for m in matrices]

    joint = np.array([
        np.prod([pi[c] if s[c] == 1 else 1.0 - pi[c] for c in range(N)])
        for s in states
    ])

    trans = np.zeros((len(states), len(states)))
    for i, s in enumerate(states):
        for j, s2 in enumerate(states):
            p = 1.0
            for c in range(N):
                m = matrices[c]
                rows = ((m.p00, m.p01), (m.p10, m.p11))
                p *= rows[s[c]][s2[c]]
            trans[i, j] = p

    marginals = []
    for action, obs in zip(actions, observations):
        mask = np.array([1.0 if s[action] == obs else 0.0 for s in states])
        joint = joint * mask
        joint = joint / joint.sum()
        joint = trans.T @ joint
        marginals.append(np.array([
            joint[[i for i, s in enumerate(states) if s[c] == 1]].sum()
            for c in range(N)
        ]))
    return marginals


def random_matrices(N, rng, lo=0.05, hi=0.95):
    """N random well-conditioned two-state chains."""
    out = []
    for _ in range(N):
        p01 = float(rng.uniform(lo, hi))
        p11 = float(rng.uniform(lo, hi))
        out.append(TransitionMatrix.from_idle_dynamics(p01, p11))
    return out
