"""Slotted-time Monte Carlo simulator of a cognitive-radio ad-hoc network.

Secondary-user pairs track per-channel idle beliefs of a Markov primary
network, pick channels by a random / myopic / CSI-aided myopic rule, and
resolve secondary collisions with a multi-channel RTS/CTS/RES handshake
over a dedicated control channel.
"""

from .config import ConfigError, ScenarioConfig, load_config, parse_config_text
from .fading import (
    RayleighParams,
    ShadowParams,
    SnrBlock,
    correlation_matrix,
    sample_rayleigh_block,
    sample_shadow_block,
    shadow_mean_db,
)
from .mac import (
    ContentionOrder,
    HandshakeOutcome,
    NeighborGraph,
    ReservationTable,
    Role,
    SlotOutcome,
    SlotResult,
    Verdict,
    contention_order,
    handshake,
    run_slot,
    rx_node,
    tx_node,
)
from .markov import (
    STATE_BUSY,
    STATE_IDLE,
    PuNetworkState,
    SenseResult,
    TransitionMatrix,
    init_belief,
    predict_unsensed,
    sample_initial_states,
    stationary_belief,
    step_pu_states,
    update_belief,
)
from .policies import (
    PolicyKind,
    capacity,
    expected_capacity,
    select_channels,
    select_csi_myopic,
    select_myopic,
    select_random,
)
from .runner import (
    AggregateMetrics,
    RunMetrics,
    SweepPoint,
    aggregate_runs,
    derive_rng,
    run_many,
    run_scenario,
    sweep,
    write_csv,
)

__version__ = "0.1.0"
