"""Probabilistically shaped QAM: distributions, rates, BER and required SNR.

The shaping family is Maxwell-Boltzmann on the square QAM grid, factorized
into two independent PAM dimensions (p(a) proportional to exp(-lambda*a^2)).
Bit error ratios are hard-decision values under AWGN with binary-reflected
Gray labeling per PAM dimension and nearest-neighbor decision regions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import erfc

from eonplan.exceptions import SolverError, UnreachableEntropyError

QAM_BASE_SIZES = (4, 16, 64)

_ENTROPY_TOL_DEFAULT = 1e-6
_BER_TOL = 1e-5
_SNR_BRACKET_DB = (-5.0, 40.0)


def _qfunc(x):
    """Tail probability of the standard normal distribution."""
    return 0.5 * erfc(x / math.sqrt(2.0))


def _gray_codes(n_bits: int) -> np.ndarray:
    """Binary-reflected Gray code of every index 0..2^n_bits-1."""
    idx = np.arange(1 << n_bits)
    return idx ^ (idx >> 1)


def _hamming_matrix(n_bits: int) -> np.ndarray:
    """Pairwise Hamming distances between Gray labels of PAM levels.

    Level k carries the Gray label of its rank, so confusing level k for
    level j produces D[k, j] bit errors.
    """
    codes = _gray_codes(n_bits)
    xor = codes[:, None] ^ codes[None, :]
    return np.array(
        [[bin(v).count("1") for v in row] for row in xor], dtype=float
    )


@dataclass(frozen=True)
class FecParameters:
    """Fixed FEC code parameters.

    ``coding_gap`` is carried for completeness only; decodability is decided
    solely by the pre-FEC BER threshold.
    """

    overhead: float = 0.27
    prefec_ber_threshold: float = 0.035
    coding_gap: float = 0.08

    def __post_init__(self):
        if self.overhead <= 0:
            raise ValueError(f"FEC overhead must be positive, got {self.overhead}")
        if not 0.0 < self.prefec_ber_threshold < 0.5:
            raise ValueError(
                f"pre-FEC BER threshold must be in (0, 0.5), got {self.prefec_ber_threshold}"
            )

    @property
    def rate_loss_factor(self) -> float:
        """Fraction of channel bits spent on parity: 1 - 1/(1+OH)."""
        return 1.0 - 1.0 / (1.0 + self.overhead)


@dataclass(frozen=True)
class PenaltyModel:
    """Implementation penalties added on top of the AWGN-theoretic SNR."""

    modulation_penalty_db: dict = field(
        default_factory=lambda: {4: 1.0, 16: 1.5, 64: 2.0}
    )
    symbolrate_slope_db_per_gbd: float = 0.5 / 35.0
    symbolrate_reference_gbd: float = 35.0

    def symbol_rate_penalty_db(self, symbol_rate_gbd: float) -> float:
        """Linear penalty, zero at the reference rate."""
        return self.symbolrate_slope_db_per_gbd * (
            symbol_rate_gbd - self.symbolrate_reference_gbd
        )

    def total_penalty_db(self, base_size: int, symbol_rate_gbd: float) -> float:
        return self.modulation_penalty_db[base_size] + self.symbol_rate_penalty_db(
            symbol_rate_gbd
        )


@dataclass(frozen=True)
class ShapedConstellation:
    """A Maxwell-Boltzmann shaped square QAM constellation.

    ``points`` are normalized to unit mean energy; ``probabilities`` follow
    p(x) proportional to exp(-lambda*|x|^2) on the integer QAM grid.
    """

    base_size: int
    lam: float
    probabilities: np.ndarray
    points: np.ndarray
    entropy_bits: float

    @property
    def pam_size(self) -> int:
        return int(round(math.sqrt(self.base_size)))

    @property
    def pam_levels(self) -> np.ndarray:
        """Normalized per-dimension amplitude levels, ascending."""
        n = self.pam_size
        return self.points.real.reshape(n, n)[:, 0]

    @property
    def pam_probabilities(self) -> np.ndarray:
        n = self.pam_size
        return self.probabilities.reshape(n, n).sum(axis=1)


def _pam_grid(base_size: int) -> np.ndarray:
    n = int(round(math.sqrt(base_size)))
    if n * n != base_size or base_size not in QAM_BASE_SIZES:
        raise ValueError(f"base size must be one of {QAM_BASE_SIZES}, got {base_size}")
    return np.arange(-(n - 1), n, 2, dtype=float)


def constellation_from_lambda(base_size: int, lam: float) -> ShapedConstellation:
    """Build the shaped constellation for a given rate parameter lambda."""
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    amps = _pam_grid(base_size)
    pam_p = np.exp(-lam * amps**2)
    pam_p /= pam_p.sum()

    grid_i, grid_q = np.meshgrid(amps, amps, indexing="ij")
    points = (grid_i + 1j * grid_q).ravel()
    probs = np.outer(pam_p, pam_p).ravel()

    energy = float(np.sum(probs * np.abs(points) ** 2))
    points = points / math.sqrt(energy)

    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(probs > 0, probs * np.log2(probs), 0.0)
    entropy = float(-terms.sum())
    return ShapedConstellation(
        base_size=base_size,
        lam=lam,
        probabilities=probs,
        points=points,
        entropy_bits=entropy,
    )


def _entropy_of_lambda(base_size: int, lam: float) -> float:
    amps = _pam_grid(base_size)
    p = np.exp(-lam * amps**2)
    p /= p.sum()
    terms = np.where(p > 0, p * np.log2(p), 0.0)
    return float(-2.0 * terms.sum())


def solve_lambda_for_entropy(
    base_size: int,
    target_entropy: float,
    tol: float = _ENTROPY_TOL_DEFAULT,
) -> ShapedConstellation:
    """Find lambda such that the shaped constellation hits the target entropy.

    Bisection on lambda; entropy is strictly decreasing in lambda from
    log2(M) at lambda=0 down to 2 bits (the four inner points survive).
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if target_entropy <= 0:
        raise ValueError(f"target entropy must be positive, got {target_entropy}")
    max_entropy = math.log2(base_size)
    if target_entropy > max_entropy + 1e-12:
        raise UnreachableEntropyError(
            f"entropy {target_entropy} exceeds log2({base_size}) = {max_entropy}"
        )
    if target_entropy < 2.0 - 1e-12:
        raise UnreachableEntropyError(
            f"entropy {target_entropy} below the 2 bit/symbol floor of shaped square QAM"
        )
    if abs(target_entropy - max_entropy) <= tol:
        return constellation_from_lambda(base_size, 0.0)

    lo, hi = 0.0, 1.0
    while _entropy_of_lambda(base_size, hi) > target_entropy and hi < 1e3:
        hi *= 2.0
    if _entropy_of_lambda(base_size, hi) > target_entropy + tol:
        raise UnreachableEntropyError(
            f"entropy {target_entropy} not reachable on {base_size}-QAM"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        h = _entropy_of_lambda(base_size, mid)
        if abs(h - target_entropy) <= tol:
            return constellation_from_lambda(base_size, mid)
        if h > target_entropy:
            lo = mid
        else:
            hi = mid
    raise SolverError(
        f"entropy bisection did not converge for M={base_size}, H={target_entropy}"
    )


def net_data_rate(
    symbol_rate_gbd: float,
    entropy_bits: float,
    base_size: int,
    fec: FecParameters,
) -> float:
    """Net data rate in Gbit/s of a dual-polarization shaped signal.

    2 * Rsym * [H - log2(M) * (1 - 1/(1+OH))]; may be negative for low
    entropy on a large base constellation, callers filter.
    """
    return 2.0 * symbol_rate_gbd * (
        entropy_bits - math.log2(base_size) * fec.rate_loss_factor
    )


def effective_data_rate(net_rate_gbps: float, granularity_gbps: float = 50.0) -> float:
    """Net rate rounded down to the next granularity step (0 if below one)."""
    if granularity_gbps <= 0:
        raise ValueError(f"granularity must be positive, got {granularity_gbps}")
    if net_rate_gbps < granularity_gbps:
        return 0.0
    return math.floor(net_rate_gbps / granularity_gbps) * granularity_gbps


def prefec_ber(constellation: ShapedConstellation, snr: float) -> float:
    """Hard-decision pre-FEC BER of the shaped constellation under AWGN.

    Exact pairwise computation per PAM dimension: transition probabilities
    between nearest-neighbor decision intervals weighted by the Gray-label
    Hamming distances and the Maxwell-Boltzmann level priors.

    ``snr`` is linear Es/N0 over the 2-D symbol (unit signal energy).
    """
    if snr <= 0:
        raise ValueError(f"SNR must be positive, got {snr}")
    levels = constellation.pam_levels
    priors = constellation.pam_probabilities
    n_levels = levels.size
    n_bits = int(round(math.log2(n_levels)))

    sigma = math.sqrt(0.5 / snr)
    # Upper decision edges for levels 0..L-2; +/- inf close the outer regions.
    edges = 0.5 * (levels[:-1] + levels[1:])
    exceed = _qfunc((edges[None, :] - levels[:, None]) / sigma)
    upper = np.concatenate([exceed, np.zeros((n_levels, 1))], axis=1)
    lower = np.concatenate([np.ones((n_levels, 1)), exceed], axis=1)
    trans = lower - upper  # trans[k, j] = P(decide level j | sent level k)

    hamming = _hamming_for(n_levels, n_bits)
    bit_errors = float(np.sum(priors[:, None] * trans * hamming))
    return bit_errors / n_bits


@lru_cache(maxsize=None)
def _hamming_for(n_levels: int, n_bits: int) -> np.ndarray:
    del n_levels
    return _hamming_matrix(n_bits)


def awgn_snr_for_ber(
    constellation: ShapedConstellation,
    target_ber: float,
    ber_tol: float = _BER_TOL,
) -> float:
    """SNR in dB at which the constellation reaches the target pre-FEC BER.

    Bisection on the dB scale over a fixed bracket; BER is strictly
    decreasing in SNR so the bracket check detects malformed inputs.
    """
    lo_db, hi_db = _SNR_BRACKET_DB
    ber_lo = prefec_ber(constellation, 10 ** (lo_db / 10.0))
    ber_hi = prefec_ber(constellation, 10 ** (hi_db / 10.0))
    if ber_lo < target_ber or ber_hi > target_ber:
        raise SolverError(
            f"BER threshold {target_ber} not bracketed in [{lo_db}, {hi_db}] dB "
            f"(BER range [{ber_hi:.3e}, {ber_lo:.3e}])"
        )
    for _ in range(200):
        mid_db = 0.5 * (lo_db + hi_db)
        ber = prefec_ber(constellation, 10 ** (mid_db / 10.0))
        if abs(ber - target_ber) <= ber_tol:
            return mid_db
        if ber > target_ber:
            lo_db = mid_db
        else:
            hi_db = mid_db
    raise SolverError(f"SNR bisection did not converge for target BER {target_ber}")


def required_snr(
    base_size: int,
    entropy_bits: float,
    symbol_rate_gbd: float,
    fec: FecParameters,
    penalties: PenaltyModel,
) -> float:
    """Required SNR in dB including modulation and symbol-rate penalties."""
    constellation = solve_lambda_for_entropy(base_size, entropy_bits)
    awgn_db = awgn_snr_for_ber(constellation, fec.prefec_ber_threshold)
    return awgn_db + penalties.total_penalty_db(base_size, symbol_rate_gbd)
