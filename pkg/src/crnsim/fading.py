"""Block-fading SNR generation for the secondary links.

Two models, sampled per fading block (default 20 slots) and independent
across blocks:

* i.i.d. Rayleigh: linear SNR gamma is exponential with mean mu_gamma,
  drawn independently per (pair, channel, block).
* correlated lognormal shadowing: gamma_dB is Gaussian with std sigma_dB
  and mean 10*log10(mu_gamma) - sigma_dB^2/(2*xi), xi = 10/ln 10, so the
  linear mean stays mu_gamma. Links m, m' are correlated with coefficient
  rho^|m-m'| on every channel; channels and blocks are independent.

The SNR is sampled directly; gain, transmit power and noise density are
never represented separately (only their ratio is ever used).
"""

from dataclasses import dataclass

import numpy as np

XI = 10.0 / np.log(10.0)


@dataclass(frozen=True)
class RayleighParams:
    """mean_snr is the linear average SNR mu_gamma (> 0)."""

    mean_snr: float

    def __post_init__(self):
        if not self.mean_snr > 0.0:
            raise ValueError("mean_snr must be positive")


@dataclass(frozen=True)
class ShadowParams:
    """Lognormal shadowing: linear mean, dB standard deviation, link correlation."""

    mean_snr: float
    sigma_db: float
    rho: float

    def __post_init__(self):
        if not self.mean_snr > 0.0:
            raise ValueError("mean_snr must be positive")
        if self.sigma_db < 0.0:
            raise ValueError("sigma_db must be nonnegative")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("degenerate correlation")


@dataclass
class SnrBlock:
    """M x N matrix of linear SNRs, held constant for block_len_slots slots."""

    snr: np.ndarray
    block_index: int
    block_len_slots: int

    def __post_init__(self):
        self.snr = np.asarray(self.snr, dtype=np.float64)
        if self.snr.ndim != 2:
            raise ValueError("snr must be an M x N matrix")
        if not np.all(np.isfinite(self.snr)) or not np.all(self.snr > 0.0):
            raise ValueError("snr entries must be positive and finite")


def sample_rayleigh_block(
    M: int, N: int, params: RayleighParams, rng: np.random.Generator,
    block_index: int = 0, block_len_slots: int = 20,
) -> SnrBlock:
    """Draw i.i.d. exponential SNRs with mean mu_gamma, row-major order."""
    snr = rng.exponential(scale=params.mean_snr, size=(M, N))
    # Exponential draws are strictly positive a.s.; guard the zero corner case.
    np.maximum(snr, np.finfo(np.float64).tiny, out=snr)
    return SnrBlock(snr, block_index, block_len_slots)


def shadow_mean_db(params: ShadowParams) -> float:
    """dB mean that keeps the linear mean at mu_gamma despite the dB variance."""
    return 10.0 * np.log10(params.mean_snr) - params.sigma_db**2 / (2.0 * XI)


def correlation_matrix(M: int, rho: float) -> np.ndarray:
    """First-order autoregressive link correlation: entry (m, m') = rho^|m-m'|."""
    if not 0.0 <= rho < 1.0:
        raise ValueError("degenerate correlation")
    idx = np.arange(M)
    return rho ** np.abs(idx[:, None] - idx[None, :]).astype(np.float64)


def sample_shadow_block(
    M: int, N: int, params: ShadowParams, rng: np.random.Generator,
    block_index: int = 0, block_len_slots: int = 20,
) -> SnrBlock:
    """Draw correlated lognormal SNRs.

    Per channel, the M links get jointly Gaussian dB values (mean
    shadow_mean_db, std sigma_db, correlation rho^|m-m'|) via the Cholesky
    factor applied to i.i.d. standard normals; channels are independent.
    """
    mu_db = shadow_mean_db(params)
    z = rng.standard_normal((M, N))
    if params.rho > 0.0 and M > 1:
        chol = np.linalg.cholesky(correlation_matrix(M, params.rho))
        z = chol @ z
    gamma_db = mu_db + params.sigma_db * z
    snr = 10.0 ** (gamma_db / 10.0)
    return SnrBlock(snr, block_index, block_len_slots)
