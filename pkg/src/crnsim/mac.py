"""Slot engine: sensing, control-channel handshake, contention, data phase.

Each slot runs three ordered, duration-free phases:

A. every transmitter senses its selected channel simultaneously and
   error-free, and all belief vectors are updated from the outcome;
B. transmitters that sensed idle enter the control channel ordered by
   i.i.d. backoff draws; each in turn checks its database for active
   receivers near it (RTS precondition), the receiver checks for active
   transmitters near it (CTS precondition), and on success the CTS and a
   reservation broadcast populate the neighbors' databases instantly;
C. granted pairs accrue the capacity of their reserved channel.

Databases live for a single slot: every entry expires when the slot ends.
Control packets are assumed short enough never to collide, and a pair's
two ends always see the same spectrum opportunity.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .markov import STATE_IDLE, PuNetworkState, predict_unsensed
from .policies import PolicyKind, capacity, select_channels


class Verdict(IntEnum):
    TRANSMITTED = 0
    SLEPT_BUSY = 1
    BLOCKED_BY_DATABASE = 2
    LOST_CONTENTION = 3


class Role(Enum):
    TRANSMITTER = "transmitter"
    RECEIVER = "receiver"


class HandshakeOutcome(Enum):
    GRANTED = "granted"
    BLOCKED_AT_TX = "blocked_at_tx"
    BLOCKED_AT_RX = "blocked_at_rx"


def tx_node(pair: int) -> int:
    """Node id of pair m's transmitter (even ids)."""
    return 2 * pair


def rx_node(pair: int) -> int:
    """Node id of pair m's receiver (odd ids)."""
    return 2 * pair + 1


@dataclass
class NeighborGraph:
    """Symmetric adjacency over the 2M SU nodes (TX_m = 2m, RX_m = 2m+1)."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] % 2 != 0:
            raise ValueError("adjacency must be a square 2M x 2M matrix")
        if np.any(adj != adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("self-edges are not allowed")
        self.adjacency = adj
        self.is_complete = bool(np.all(adj | np.eye(adj.shape[0], dtype=bool)))

    @property
    def num_pairs(self) -> int:
        return self.adjacency.shape[0] // 2

    @classmethod
    def complete(cls, num_pairs: int) -> "NeighborGraph":
        """All 2M nodes mutually in range (the default scenario)."""
        n = 2 * num_pairs
        return cls(~np.eye(n, dtype=bool))

    @classmethod
    def from_edges(cls, num_pairs: int, edges) -> "NeighborGraph":
        """Build from undirected node-id pairs; node ids are 0..2M-1."""
        n = 2 * num_pairs
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                raise ValueError("self-edges are not allowed")
            adj[u, v] = adj[v, u] = True
        return cls(adj)


class ReservationTable:
    """Per-slot state of all neighbor databases, factored by channel.

    Because control packets propagate instantly and the graph is fixed
    within a slot, node u's database holds entry (w, role, ch) exactly when
    w is adjacent to u and w became an active receiver (CTS) or transmitter
    (RES) on ch earlier in the slot. Storing the active nodes per channel
    and testing adjacency on demand reproduces every per-node database
    without materializing 2M copies; entries_for() rebuilds a node's view.
    """

    def __init__(self, graph: NeighborGraph):
        self.graph = graph
        self._rx_by_channel: dict[int, list[int]] = {}
        self._tx_by_channel: dict[int, list[int]] = {}

    def has_active_rx_near(self, node: int, channel: int) -> bool:
        adj = self.graph.adjacency
        return any(adj[node, r] for r in self._rx_by_channel.get(channel, ()))

    def has_active_tx_near(self, node: int, channel: int) -> bool:
        adj = self.graph.adjacency
        return any(adj[node, t] for t in self._tx_by_channel.get(channel, ()))

    def record_grant(self, tx: int, rx: int, channel: int) -> None:
        """CTS marks rx as an active receiver, RES marks tx as an active transmitter."""
        self._rx_by_channel.setdefault(channel, []).append(rx)
        self._tx_by_channel.setdefault(channel, []).append(tx)

    def entries_for(self, node: int) -> set[tuple[int, Role, int]]:
        """The database of one node: entries overheard from its neighbors."""
        adj = self.graph.adjacency
        entries = set()
        for channel, nodes in self._rx_by_channel.items():
            entries.update((r, Role.RECEIVER, channel) for r in nodes if adj[node, r])
        for channel, nodes in self._tx_by_channel.items():
            entries.update((t, Role.TRANSMITTER, channel) for t in nodes if adj[node, t])
        return entries

    @property
    def is_empty(self) -> bool:
        return not self._rx_by_channel and not self._tx_by_channel

    def clear(self) -> None:
        self._rx_by_channel.clear()
        self._tx_by_channel.clear()


@dataclass
class ContentionOrder:
    """Contending pairs sorted by their backoff draws, earliest first."""

    order: np.ndarray
    backoffs: np.ndarray


def contention_order(contenders, rng: np.random.Generator) -> ContentionOrder:
    """Order contenders by i.i.d. uniform backoff; exact ties are re-drawn."""
    contenders = np.asarray(contenders, dtype=np.intp)
    if contenders.size == 0:
        raise ValueError("contenders must be nonempty")
    draws = rng.random(contenders.size)
    while len(set(draws.tolist())) < draws.size:
        draws = rng.random(contenders.size)
    perm = np.argsort(draws)
    return ContentionOrder(contenders[perm], draws[perm])


def handshake(
    tx: int, rx: int, channel: int, table: ReservationTable, graph: NeighborGraph
) -> HandshakeOutcome:
    """RTS/CTS/RES exchange for one pair on its sensed-idle channel.

    The transmitter aborts if its database lists an active receiver among
    its neighbors on this channel; the receiver withholds the CTS if its
    database lists an active transmitter among its neighbors on this
    channel. A granted pair's CTS and RES populate the neighbors' databases
    before the next contender's turn.
    """
    if table.has_active_rx_near(tx, channel):
        return HandshakeOutcome.BLOCKED_AT_TX
    if table.has_active_tx_near(rx, channel):
        return HandshakeOutcome.BLOCKED_AT_RX
    table.record_grant(tx, rx, channel)
    return HandshakeOutcome.GRANTED


@dataclass(frozen=True)
class SlotOutcome:
    """One pair's record for one slot."""

    chosen_channel: int
    sensed: int
    verdict: Verdict
    reward: float


@dataclass
class SlotResult:
    """Per-pair slot records, stored as arrays (rows = pairs).

    winner_pairs, num_distinct_channels and verdict_counts (indexed by
    Verdict value) are derivable from the arrays; they are carried so the
    horizon loop never rescans the slot.
    """

    chosen: np.ndarray
    sensed: np.ndarray
    verdict: np.ndarray
    reward: np.ndarray
    winner_pairs: np.ndarray
    num_distinct_channels: int
    verdict_counts: np.ndarray

    def outcome(self, pair: int) -> SlotOutcome:
        return SlotOutcome(
            int(self.chosen[pair]),
            int(self.sensed[pair]),
            Verdict(int(self.verdict[pair])),
            float(self.reward[pair]),
        )

    def count(self, verdict: Verdict) -> int:
        return int(self.verdict_counts[verdict])

    @property
    def transmitted_pairs(self) -> np.ndarray:
        return self.winner_pairs


def run_slot(
    pu: PuNetworkState,
    beliefs: np.ndarray,
    snr: np.ndarray,
    policy: PolicyKind,
    bandwidths: np.ndarray,
    graph: NeighborGraph,
    policy_rng: np.random.Generator,
    mac_rng: np.random.Generator,
    reservations: ReservationTable | None = None,
    capacity_matrix: np.ndarray | None = None,
) -> tuple[SlotResult, np.ndarray]:
    """Run one slot for all pairs; returns the outcomes and updated beliefs.

    beliefs and snr are M x N (rows = pairs). Policy draws and backoff
    draws come from separate streams so that runs of different policies
    can share identical channel realizations. Passing a ReservationTable
    forces the general database path (it is cleared before returning);
    otherwise complete graphs take an equivalent fast path.
    """
    M, N = beliefs.shape
    p01, p11 = pu.idle_probs()
    cap = capacity_matrix if capacity_matrix is not None else capacity(snr, bandwidths)

    # Phase A: simultaneous sensing; beliefs update whatever happens later.
    chosen = select_channels(policy, beliefs, cap, bandwidths, policy_rng)
    sensed = pu.states[chosen]
    new_beliefs = predict_unsensed(beliefs, p01, p11)
    new_beliefs[np.arange(M), chosen] = np.where(
        sensed == STATE_IDLE, p11[chosen], p01[chosen]
    )

    # Phase B: contention over the control channel.
    verdict = np.full(M, int(Verdict.SLEPT_BUSY), dtype=np.int8)
    reward = np.zeros(M, dtype=np.float64)
    contenders = np.flatnonzero(sensed == STATE_IDLE)
    winners: list[int] = []
    lost: list[int] = []
    blocked: list[int] = []
    used_channels = 0
    if contenders.size:
        order = contention_order(contenders, mac_rng).order.tolist()
        chosen_by_pair = chosen.tolist()
        if reservations is None and graph.is_complete:
            # First contender on a channel wins; everyone hears the CTS/RES.
            taken = set()
            for m in order:
                ch = chosen_by_pair[m]
                if ch in taken:
                    lost.append(m)
                else:
                    taken.add(ch)
                    winners.append(m)
            used_channels = len(taken)
        else:
            # A TX-side block means the pair saw the same-slot winner's
            # reservation and backed off: it lost the race for the channel.
            # An RX-side block is a CTS denied purely by the receiver's
            # database, reachable only on non-complete graphs.
            table = reservations if reservations is not None else ReservationTable(graph)
            granted_channels = set()
            for m in order:
                ch = chosen_by_pair[m]
                outcome = handshake(2 * m, 2 * m + 1, ch, table, graph)
                if outcome is HandshakeOutcome.GRANTED:
                    winners.append(m)
                    granted_channels.add(ch)
                elif outcome is HandshakeOutcome.BLOCKED_AT_TX:
                    lost.append(m)
                else:
                    blocked.append(m)
            table.clear()
            used_channels = len(granted_channels)

        # Phase C: data phase for the granted pairs.
        if winners:
            w = np.asarray(winners, dtype=np.intp)
            verdict[w] = Verdict.TRANSMITTED
            reward[w] = cap[w, chosen[w]]
        if lost:
            verdict[np.asarray(lost, dtype=np.intp)] = Verdict.LOST_CONTENTION
        if blocked:
            verdict[np.asarray(blocked, dtype=np.intp)] = Verdict.BLOCKED_BY_DATABASE

    counts = np.array(
        [len(winners), M - contenders.size, len(blocked), len(lost)], dtype=np.int32
    )
    result = SlotResult(
        chosen, sensed, verdict, reward,
        np.sort(np.asarray(winners, dtype=np.intp)), used_channels, counts,
    )
    return result, new_beliefs
