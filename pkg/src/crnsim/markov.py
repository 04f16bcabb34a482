"""Primary-user occupancy dynamics and secondary-user belief tracking.

Each licensed channel evolves as an independent two-state Markov chain
(0 = busy, 1 = idle). Secondary pairs never observe the full state; they
maintain a belief vector of per-channel idle probabilities, updated from
the single error-free sensing outcome collected each slot.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

STATE_BUSY = 0
STATE_IDLE = 1


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic 2x2 occupancy chain: row/column order (busy, idle)."""

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        for name in ("p00", "p01", "p10", "p11"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"transition probability {name} must be nonnegative")
        if abs(self.p00 + self.p01 - 1.0) > 1e-12:
            raise ValueError("busy row must sum to 1 (p00 + p01)")
        if abs(self.p10 + self.p11 - 1.0) > 1e-12:
            raise ValueError("idle row must sum to 1 (p10 + p11)")

    @classmethod
    def from_idle_dynamics(cls, p01: float, p11: float) -> "TransitionMatrix":
        """Build from the two idle-entry probabilities (busy->idle, idle->idle)."""
        return cls(1.0 - p01, p01, 1.0 - p11, p11)


def stationary_belief(matrix: TransitionMatrix) -> float:
    """Stationary idle probability p01 / (p01 + p10) of the occupancy chain."""
    denom = matrix.p01 + matrix.p10
    if denom <= 0.0:
        raise ValueError("no unique stationary distribution")
    return matrix.p01 / denom


def idle_transition_arrays(
    matrices: Sequence[TransitionMatrix],
) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel (p01, p11) vectors, the only entries belief tracking needs."""
    p01 = np.array([m.p01 for m in matrices], dtype=np.float64)
    p11 = np.array([m.p11 for m in matrices], dtype=np.float64)
    return p01, p11


@dataclass
class PuNetworkState:
    """Joint occupancy of all N channels plus their transition matrices."""

    states: np.ndarray
    matrices: tuple[TransitionMatrix, ...]

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.int8)
        self.matrices = tuple(self.matrices)
        if self.states.ndim != 1 or self.states.size < 1:
            raise ValueError("states must be a nonempty 1-D vector")
        if len(self.matrices) != self.states.size:
            raise ValueError("one transition matrix per channel required")
        if not np.all((self.states == STATE_BUSY) | (self.states == STATE_IDLE)):
            raise ValueError("channel states must be 0 (busy) or 1 (idle)")

    @property
    def num_channels(self) -> int:
        return self.states.size

    def idle_probs(self) -> tuple[np.ndarray, np.ndarray]:
        cached = getattr(self, "_idle_probs", None)
        if cached is None:
            cached = idle_transition_arrays(self.matrices)
            self._idle_probs = cached
        return cached


def _step_states(
    states: np.ndarray, p01: np.ndarray, p11: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    # One uniform per channel, consumed in channel order 0..N-1.
    u = rng.random(states.size)
    idle_prob = np.where(states == STATE_IDLE, p11, p01)
    return (u < idle_prob).astype(np.int8)


def step_pu_states(state: PuNetworkState, rng: np.random.Generator) -> PuNetworkState:
    """Advance every channel one slot; channels transition independently."""
    p01, p11 = state.idle_probs()
    nxt = PuNetworkState(_step_states(state.states, p01, p11, rng), state.matrices)
    nxt._idle_probs = (p01, p11)
    return nxt


def sample_initial_states(
    matrices: Sequence[TransitionMatrix], rng: np.random.Generator
) -> PuNetworkState:
    """Draw each channel's state from its stationary distribution."""
    theta = init_belief(matrices)
    u = rng.random(len(theta))
    return PuNetworkState((u < theta).astype(np.int8), tuple(matrices))


@dataclass(frozen=True)
class SenseResult:
    """Outcome of sensing one channel: observed is 0 (busy) or 1 (idle)."""

    channel: int
    observed: int

    def __post_init__(self):
        if self.observed not in (STATE_BUSY, STATE_IDLE):
            raise ValueError("observed must be 0 (busy) or 1 (idle)")


def predict_unsensed(theta, p01, p11):
    """One-step belief prediction theta*p11 + (1-theta)*p01, broadcastable."""
    return theta * p11 + (1.0 - theta) * p01


def update_belief(
    theta: np.ndarray, result: SenseResult, matrices: Sequence[TransitionMatrix]
) -> np.ndarray:
    """Post-sensing belief for the next slot.

    The sensed channel's belief becomes p11 (seen idle) or p01 (seen busy);
    every other channel is propagated through its own chain.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if not 0 <= result.channel < theta.size:
        raise ValueError("sensed channel index out of range")
    p01, p11 = idle_transition_arrays(matrices)
    new = predict_unsensed(theta, p01, p11)
    c = result.channel
    new[c] = p11[c] if result.observed == STATE_IDLE else p01[c]
    return new


def init_belief(matrices: Sequence[TransitionMatrix]) -> np.ndarray:
    """Initial belief vector: each channel's stationary idle probability."""
    return np.array([stationary_belief(m) for m in matrices], dtype=np.float64)
