"""Channel-selection rules: random, myopic, and CSI-aided myopic.

The myopic rule senses the channel with the largest belief-weighted
bandwidth; the CSI-aided variant weights the belief by the achievable
capacity B*log2(1 + gamma/B) of the current fading block instead, which
decorrelates the selections of different pairs. Ties are always broken
uniformly at random among the maximizers.
"""

from enum import Enum

import numpy as np


class PolicyKind(Enum):
    RANDOM = "random"
    MYOPIC = "myopic"
    CSI_MYOPIC = "csi-myopic"

    @classmethod
    def from_name(cls, name: str) -> "PolicyKind":
        for kind in cls:
            if kind.value == name:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown policy {name!r} (expected one of: {valid})")


def capacity(gamma, bw):
    """Achievable rate B*log2(1 + gamma/B) in bandwidth-units x bits/s/Hz."""
    return bw * np.log2(1.0 + gamma / bw)


def expected_capacity(theta, gamma, bw):
    """Belief-weighted capacity theta * B * log2(1 + gamma/B).

    Nonnegative and nondecreasing in each argument for theta in [0,1],
    gamma > 0, bw > 0. Broadcasts over array arguments.
    """
    return theta * capacity(gamma, bw)


def argmax_uniform_ties(scores: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Row-wise argmax with exact-tie sets resolved uniformly at random.

    Each row's maximizers receive i.i.d. uniform keys and the largest key
    wins, which is uniform over the tie set. Scores must be nonnegative.
    """
    scores = np.atleast_2d(scores)
    best = scores.max(axis=1, keepdims=True)
    keys = rng.random(scores.shape)
    return np.where(scores == best, keys, -1.0).argmax(axis=1)


def select_random(N: int, rng: np.random.Generator) -> int:
    """Uniform channel choice; consumes exactly one uniform draw."""
    return int(random_channels(1, N, rng)[0])


def random_channels(M: int, N: int, rng: np.random.Generator) -> np.ndarray:
    # floor(u*N) keeps the one-draw-per-pair contract; Generator.integers
    # may consume a variable number of raw draws.
    u = rng.random(M)
    return np.minimum((u * N).astype(np.intp), N - 1)


def select_myopic(theta: np.ndarray, bw: np.ndarray, rng: np.random.Generator) -> int:
    """argmax of theta_n * B_n with uniform tie-breaking."""
    scores = np.asarray(theta, dtype=np.float64) * bw
    return int(argmax_uniform_ties(scores, rng)[0])


def select_csi_myopic(
    theta: np.ndarray, gamma_row: np.ndarray, bw: np.ndarray, rng: np.random.Generator
) -> int:
    """argmax of the expected capacity with uniform tie-breaking."""
    scores = expected_capacity(np.asarray(theta, dtype=np.float64), gamma_row, bw)
    return int(argmax_uniform_ties(scores, rng)[0])


def select_channels(
    kind: PolicyKind,
    beliefs: np.ndarray,
    capacity_matrix: np.ndarray,
    bw: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Per-pair channel selection for a whole slot (rows = pairs).

    capacity_matrix is B*log2(1 + gamma/B) for the current fading block;
    it is ignored by the random and myopic rules.
    """
    M, N = beliefs.shape
    if kind is PolicyKind.RANDOM:
        return random_channels(M, N, rng)
    if kind is PolicyKind.MYOPIC:
        return argmax_uniform_ties(beliefs * bw, rng)
    return argmax_uniform_ties(beliefs * capacity_matrix, rng)
