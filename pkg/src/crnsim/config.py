"""Scenario configuration and the flat `key = value` config file format.

A config file is a plain text document, one `key = value` per line, with
`#` comments and blank lines ignored. Keys match the ScenarioConfig field
names; list-valued fields use commas. configs/rayleigh_multiuser.txt in the
repository is the normative example.
"""

from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from .fading import RayleighParams, ShadowParams
from .mac import NeighborGraph
from .markov import TransitionMatrix
from .policies import PolicyKind

FADING_MODELS = ("rayleigh", "lognormal")


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


@dataclass
class ScenarioConfig:
    """Full description of one experiment.

    p01/p11 and bandwidths accept a scalar (shared by all channels) or a
    per-channel list of length num_channels. neighbor_graph is "complete"
    or an edge list over node ids (TX_m = 2m, RX_m = 2m+1).
    """

    num_pairs: int = 20
    num_channels: int = 40
    horizon_slots: int = 2000
    fading_block_slots: int = 20
    p01: Union[float, Sequence[float]] = 0.2
    p11: Union[float, Sequence[float]] = 0.8
    fading_model: str = "rayleigh"
    mean_snr_db: float = 10.0
    sigma_db: float = 5.0
    rho: float = 0.2
    policy: str = "csi-myopic"
    bandwidths: Union[float, Sequence[float]] = 1.0
    neighbor_graph: Union[str, Sequence[tuple[int, int]]] = "complete"
    num_seeds: int = 50
    master_seed: int = 42
    scenario_id: str = ""

    def validate(self) -> None:
        for name in ("num_pairs", "num_channels", "horizon_slots",
                     "fading_block_slots", "num_seeds"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name}: must be an integer >= 1, got {value!r}")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError(f"master_seed: must be a nonnegative integer, got {self.master_seed!r}")
        for name in ("p01", "p11"):
            for v in self._per_channel(name):
                if not 0.0 <= v <= 1.0:
                    raise ConfigError(f"{name}: probabilities must lie in [0, 1], got {v!r}")
        if self.fading_model not in FADING_MODELS:
            raise ConfigError(f"fading_model: expected one of {FADING_MODELS}, got {self.fading_model!r}")
        if not np.isfinite(self.mean_snr_db):
            raise ConfigError(f"mean_snr_db: must be finite, got {self.mean_snr_db!r}")
        if self.fading_model == "lognormal":
            if self.sigma_db < 0:
                raise ConfigError(f"sigma_db: must be >= 0, got {self.sigma_db!r}")
            if not 0.0 <= self.rho < 1.0:
                raise ConfigError(f"rho: must lie in [0, 1), got {self.rho!r}")
        try:
            PolicyKind.from_name(self.policy)
        except ValueError as exc:
            raise ConfigError(f"policy: {exc}") from exc
        for v in self._per_channel("bandwidths"):
            if not v > 0:
                raise ConfigError(f"bandwidths: must be positive, got {v!r}")
        try:
            self.graph()
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"neighbor_graph: {exc}") from exc

    def _per_channel(self, name: str) -> list:
        value = getattr(self, name)
        if isinstance(value, (int, float)):
            return [float(value)] * self.num_channels
        values = [float(v) for v in value]
        if len(values) != self.num_channels:
            raise ConfigError(
                f"{name}: expected 1 or {self.num_channels} values, got {len(values)}"
            )
        return values

    def matrices(self) -> tuple[TransitionMatrix, ...]:
        p01s = self._per_channel("p01")
        p11s = self._per_channel("p11")
        try:
            return tuple(
                TransitionMatrix.from_idle_dynamics(a, b) for a, b in zip(p01s, p11s)
            )
        except ValueError as exc:
            raise ConfigError(f"p01/p11: {exc}") from exc

    def bandwidth_vector(self) -> np.ndarray:
        return np.array(self._per_channel("bandwidths"), dtype=np.float64)

    def graph(self) -> NeighborGraph:
        if isinstance(self.neighbor_graph, str):
            if self.neighbor_graph != "complete":
                raise ConfigError(
                    f"neighbor_graph: expected 'complete' or an edge list, got {self.neighbor_graph!r}"
                )
            return NeighborGraph.complete(self.num_pairs)
        return NeighborGraph.from_edges(self.num_pairs, self.neighbor_graph)

    def policy_kind(self) -> PolicyKind:
        return PolicyKind.from_name(self.policy)

    @property
    def mean_snr_linear(self) -> float:
        return 10.0 ** (self.mean_snr_db / 10.0)

    def fading_params(self):
        if self.fading_model == "rayleigh":
            return RayleighParams(self.mean_snr_linear)
        return ShadowParams(self.mean_snr_linear, self.sigma_db, self.rho)

    def label(self) -> str:
        """scenario_id, auto-derived from the headline parameters if unset."""
        if self.scenario_id:
            return self.scenario_id
        base = (f"{self.fading_model}-m{self.num_pairs}-n{self.num_channels}"
                f"-snr{self.mean_snr_db:g}db")
        if self.fading_model == "lognormal":
            base += f"-rho{self.rho:g}"
        return base

    def with_policy(self, policy: str) -> "ScenarioConfig":
        return replace(self, policy=policy)


def _parse_int(text: str) -> int:
    return int(text)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_float_or_list(text: str):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        return float(parts[0])
    return [float(p) for p in parts]


def _parse_str(text: str) -> str:
    return text


def _parse_graph(text: str):
    if text == "complete":
        return "complete"
    edges = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        u, sep, v = part.partition("-")
        if not sep:
            raise ValueError(f"expected 'u-v' edge, got {part!r}")
        edges.append((int(u), int(v)))
    return edges


_FIELD_PARSERS = {
    "num_pairs": _parse_int,
    "num_channels": _parse_int,
    "horizon_slots": _parse_int,
    "fading_block_slots": _parse_int,
    "p01": _parse_float_or_list,
    "p11": _parse_float_or_list,
    "fading_model": _parse_str,
    "mean_snr_db": _parse_float,
    "sigma_db": _parse_float,
    "rho": _parse_float,
    "policy": _parse_str,
    "bandwidths": _parse_float_or_list,
    "neighbor_graph": _parse_graph,
    "num_seeds": _parse_int,
    "master_seed": _parse_int,
    "scenario_id": _parse_str,
}


def parse_config_text(text: str) -> ScenarioConfig:
    """Parse the flat key = value format into a ScenarioConfig."""
    data = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = key.strip(), value.strip()
        if key not in _FIELD_PARSERS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in data:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        try:
            data[key] = _FIELD_PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {value!r} ({exc})") from exc
    return ScenarioConfig(**data)


def load_config(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())
