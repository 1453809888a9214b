"""Physical-layer SNR estimation.

Per-span ASE noise from perfectly compensating EDFAs, nonlinear interference
from the incoherent closed-form GN model, and a transceiver back-to-back SNR
combine reciprocally into the channel SNR. End-of-life SNR assumes a fully
packed spectrum of fixed-width interferers.

Unit conventions at the interfaces: lengths in km, attenuation in dB/km,
dispersion magnitude in ps^2/km, gamma in 1/(W km), frequencies/bandwidths
in GHz, PSD in W/GHz. Internally everything is converted to SI (m, Hz,
W/Hz); the GN bracket is then in W^3/Hz^3 and multiplying by the coefficient
(1/W^2 Hz^2) and the channel bandwidth (Hz) yields W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.constants

from eonplan import kernels
from eonplan.exceptions import SpectrumError

PLANCK = scipy.constants.h
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class SpanParameters:
    """One amplified fiber span; the EDFA gain exactly compensates the loss."""

    length_km: float
    attenuation_db_per_km: float = 0.2
    dispersion_ps2_per_km: float = 21.3
    gamma_per_w_km: float = 1.3
    noise_figure_db: float = 5.0
    center_frequency_thz: float = 193.4

    def __post_init__(self):
        if self.length_km <= 0:
            raise ValueError(f"span length must be positive, got {self.length_km}")
        if self.attenuation_db_per_km < 0:
            raise ValueError("attenuation must be nonnegative")
        if self.gamma_per_w_km < 0:
            raise ValueError("gamma must be nonnegative")


@dataclass(frozen=True)
class SpectralChannel:
    """A rectangular-PSD channel at an offset from the band start."""

    center_offset_ghz: float
    bandwidth_ghz: float
    psd_w_per_ghz: float

    def __post_init__(self):
        if self.bandwidth_ghz <= 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_ghz}")
        if self.psd_w_per_ghz < 0:
            raise ValueError("PSD must be nonnegative")

    @property
    def power_w(self) -> float:
        return self.psd_w_per_ghz * self.bandwidth_ghz


@dataclass(frozen=True)
class SnrBudget:
    """SNR contributions in dB; the total combines them reciprocally."""

    snr_tx_db: float
    snr_ase_db: float
    snr_nli_db: float
    snr_total_db: float

    @staticmethod
    def combine(snr_tx_db: float, snr_ase_db: float, snr_nli_db: float) -> "SnrBudget":
        inv = 0.0
        for value_db in (snr_tx_db, snr_ase_db, snr_nli_db):
            if not math.isinf(value_db):
                inv += 10.0 ** (-value_db / 10.0)
        total = math.inf if inv == 0.0 else -10.0 * math.log10(inv)
        return SnrBudget(snr_tx_db, snr_ase_db, snr_nli_db, total)


@dataclass(frozen=True)
class Band:
    """Descriptor of the usable optical band for worst-case loading."""

    width_ghz: float = 5000.0
    psd_w_per_ghz: float = 2e-5
    interferer_bandwidth_ghz: float = 36.75


def effective_length(attenuation_db_per_km: float, length_km: float) -> tuple[float, float]:
    """Effective and asymptotic effective length of a lossy span, in km.

    Returns (L_eff, L_eff_asymptotic); the lossless limit returns
    (length, inf).
    """
    if length_km <= 0:
        raise ValueError(f"length must be positive, got {length_km}")
    alpha = attenuation_db_per_km * _LN10 / 10.0
    if alpha == 0.0:
        return length_km, math.inf
    return (1.0 - math.exp(-alpha * length_km)) / alpha, 1.0 / alpha


def ase_power(span: SpanParameters, bandwidth_ghz: float) -> float:
    """ASE noise power in W added by the span's EDFA over the bandwidth."""
    if bandwidth_ghz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_ghz}")
    gain_db = span.attenuation_db_per_km * span.length_km
    gain = 10.0 ** (gain_db / 10.0)
    nf_lin = 10.0 ** (span.noise_figure_db / 10.0)
    nu_hz = span.center_frequency_thz * 1e12
    return nf_lin * PLANCK * nu_hz * (gain - 1.0) * bandwidth_ghz * 1e9


def _check_disjoint(channels: Sequence[SpectralChannel]) -> None:
    ordered = sorted(channels, key=lambda c: c.center_offset_ghz)
    for left, right in zip(ordered, ordered[1:]):
        gap = (right.center_offset_ghz - left.center_offset_ghz) - 0.5 * (
            left.bandwidth_ghz + right.bandwidth_ghz
        )
        if gap < -1e-9:
            raise SpectrumError(
                f"channels at {left.center_offset_ghz} and "
                f"{right.center_offset_ghz} GHz overlap by {-gap:.6g} GHz"
            )


def _span_nli_coefficient(span: SpanParameters) -> tuple[float, float]:
    """Per-span GN prefactor in Hz^2/W^2 and |beta2|*L_eff,a in s^2."""
    l_eff_km, l_effa_km = effective_length(span.attenuation_db_per_km, span.length_km)
    l_eff = l_eff_km * 1e3
    l_effa = l_effa_km * 1e3
    beta2 = span.dispersion_ps2_per_km * 1e-27  # ps^2/km -> s^2/m
    gamma = span.gamma_per_w_km * 1e-3
    coeff = (16.0 / 27.0) * gamma**2 * l_eff**2 / (math.pi * beta2 * l_effa)
    return coeff, beta2 * l_effa


def _interferer_arrays(
    interferers: Sequence[SpectralChannel],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    f = np.array([c.center_offset_ghz * 1e9 for c in interferers], dtype=float)
    b = np.array([c.bandwidth_ghz * 1e9 for c in interferers], dtype=float)
    g = np.array([c.psd_w_per_ghz / 1e9 for c in interferers], dtype=float)
    return f, b, g


def nli_power(
    channel_under_test: SpectralChannel,
    interferers: Sequence[SpectralChannel],
    span: SpanParameters,
    n_spans: int = 1,
) -> float:
    """Nonlinear interference power in W falling into the channel under test.

    Incoherent accumulation: the per-span contribution is multiplied by the
    span count. The per-span closed form is

        P = B_i * (16/27) * gamma^2 * L_eff^2 / (pi * |beta2| * L_eff,a)
            * [ G_i^3 asinh(pi^2/2 |beta2| L_eff,a B_i^2)
                + sum_j G_i G_j^2 ln((|df_ij| + B_j/2) / (|df_ij| - B_j/2)) ]
    """
    _check_disjoint([channel_under_test, *interferers])
    coeff, beta2_leffa = _span_nli_coefficient(span)
    f_int, b_int, g_int = _interferer_arrays(interferers)
    bracket = kernels.nli_bracket(
        channel_under_test.center_offset_ghz * 1e9,
        channel_under_test.bandwidth_ghz * 1e9,
        channel_under_test.psd_w_per_ghz / 1e9,
        f_int,
        b_int,
        g_int,
        beta2_leffa,
    )
    return channel_under_test.bandwidth_ghz * 1e9 * n_spans * coeff * bracket


def channel_snr(
    channel: SpectralChannel,
    interferers: Sequence[SpectralChannel],
    path_spans: Sequence[SpanParameters],
    snr_tx_db: float,
) -> SnrBudget:
    """SNR budget of a channel over a path of amplified spans."""
    if not path_spans:
        raise ValueError("path must contain at least one span")
    p_sig = channel.power_w
    if p_sig <= 0:
        raise ValueError("degenerate signal: channel carries no power")
    p_ase = sum(ase_power(span, channel.bandwidth_ghz) for span in path_spans)
    p_nli = sum(nli_power(channel, interferers, span, 1) for span in path_spans)
    snr_ase_db = 10.0 * math.log10(p_sig / p_ase) if p_ase > 0 else math.inf
    snr_nli_db = 10.0 * math.log10(p_sig / p_nli) if p_nli > 0 else math.inf
    return SnrBudget.combine(snr_tx_db, snr_ase_db, snr_nli_db)


def worst_case_interferers(
    band: Band, channel_center_ghz: float, channel_bandwidth_ghz: float
) -> list[SpectralChannel]:
    """Fully loaded spectrum around the channel under test.

    Fixed-width interferers at the band PSD are packed from both band edges
    toward the test channel; a residual gap narrower than one interferer is
    left empty next to the channel.
    """
    width = band.interferer_bandwidth_ghz
    lo_edge = channel_center_ghz - 0.5 * channel_bandwidth_ghz
    hi_edge = channel_center_ghz + 0.5 * channel_bandwidth_ghz
    if lo_edge < -1e-9 or hi_edge > band.width_ghz + 1e-9:
        raise SpectrumError(
            f"channel [{lo_edge:.3f}, {hi_edge:.3f}] GHz does not fit in the "
            f"{band.width_ghz} GHz band"
        )
    channels = []
    n_left = int(math.floor(lo_edge / width + 1e-9))
    for k in range(n_left):
        channels.append(
            SpectralChannel((k + 0.5) * width, width, band.psd_w_per_ghz)
        )
    n_right = int(math.floor((band.width_ghz - hi_edge) / width + 1e-9))
    for k in range(n_right):
        channels.append(
            SpectralChannel(band.width_ghz - (k + 0.5) * width, width, band.psd_w_per_ghz)
        )
    return channels


def eol_snr(
    path_spans: Sequence[SpanParameters],
    config_bandwidth_ghz: float,
    config_center_ghz: float,
    band: Band,
    snr_tx_db: float,
) -> float:
    """End-of-life SNR in dB: the channel under full worst-case band loading."""
    if not path_spans:
        raise ValueError("path must contain at least one span")
    channel = SpectralChannel(config_center_ghz, config_bandwidth_ghz, band.psd_w_per_ghz)
    interferers = worst_case_interferers(band, config_center_ghz, config_bandwidth_ghz)
    return channel_snr(channel, interferers, path_spans, snr_tx_db).snr_total_db


@dataclass(frozen=True)
class PhysicalParameters:
    """Planner-facing bundle of physical constants, all overridable."""

    span_length_km: float = 80.0
    attenuation_db_per_km: float = 0.2
    dispersion_ps2_per_km: float = 21.3
    gamma_per_w_km: float = 1.3
    noise_figure_db: float = 5.0
    center_frequency_thz: float = 193.4
    psd_w_per_ghz: float = 2e-5
    snr_tx_db: float = 26.0
    band_ghz: float = 5000.0
    interferer_bandwidth_ghz: float = 36.75

    def span(self, length_km: float) -> SpanParameters:
        return SpanParameters(
            length_km=length_km,
            attenuation_db_per_km=self.attenuation_db_per_km,
            dispersion_ps2_per_km=self.dispersion_ps2_per_km,
            gamma_per_w_km=self.gamma_per_w_km,
            noise_figure_db=self.noise_figure_db,
            center_frequency_thz=self.center_frequency_thz,
        )

    def spans_for_length(self, length_km: float) -> tuple[SpanParameters, ...]:
        """Split a link into ceil(L/span) spans, the last one residual."""
        if length_km <= 0:
            raise ValueError(f"link length must be positive, got {length_km}")
        n_full, residual = divmod(length_km, self.span_length_km)
        n_full = int(n_full)
        spans = [self.span(self.span_length_km)] * n_full
        if residual > 1e-9:
            spans.append(self.span(residual))
        elif n_full == 0:
            spans.append(self.span(length_km))
        return tuple(spans)

    def band(self) -> Band:
        return Band(
            width_ghz=self.band_ghz,
            psd_w_per_ghz=self.psd_w_per_ghz,
            interferer_bandwidth_ghz=self.interferer_bandwidth_ghz,
        )


class PathNoiseModel:
    """Precomputed noise coefficients of a span sequence.

    Valid when all spans share their per-km fiber parameters (only lengths
    differ); then the GN bracket is span-independent and the path collapses
    to two scalars, which makes repeated per-channel evaluations cheap. The
    general per-span route lives in :func:`channel_snr`.
    """

    __slots__ = ("ase_coeff_w_per_hz", "nli_coeff", "beta2_leffa", "key")

    def __init__(self, path_spans: Sequence[SpanParameters]):
        if not path_spans:
            raise ValueError("path must contain at least one span")
        first = path_spans[0]
        shared = (
            first.attenuation_db_per_km,
            first.dispersion_ps2_per_km,
            first.gamma_per_w_km,
            first.noise_figure_db,
            first.center_frequency_thz,
        )
        for span in path_spans[1:]:
            other = (
                span.attenuation_db_per_km,
                span.dispersion_ps2_per_km,
                span.gamma_per_w_km,
                span.noise_figure_db,
                span.center_frequency_thz,
            )
            if other != shared:
                raise ValueError(
                    "PathNoiseModel requires homogeneous per-km span parameters"
                )
        nf_lin = 10.0 ** (first.noise_figure_db / 10.0)
        nu_hz = first.center_frequency_thz * 1e12
        ase = 0.0
        nli = 0.0
        beta2_leffa = 0.0
        for span in path_spans:
            gain = 10.0 ** (span.attenuation_db_per_km * span.length_km / 10.0)
            ase += nf_lin * PLANCK * nu_hz * (gain - 1.0)
            coeff, beta2_leffa = _span_nli_coefficient(span)
            nli += coeff
        self.ase_coeff_w_per_hz = ase
        self.nli_coeff = nli
        self.beta2_leffa = beta2_leffa
        self.key = (round(ase, 25), round(nli, 12), round(beta2_leffa, 30))

    def snr_db(
        self,
        center_ghz: float,
        bandwidth_ghz: float,
        psd_w_per_ghz: float,
        f_int_hz: np.ndarray,
        b_int_hz: np.ndarray,
        g_int_w_per_hz: np.ndarray,
        snr_tx_db: float,
    ) -> float:
        """Total SNR in dB for a channel against precomputed interferer arrays."""
        b_hz = bandwidth_ghz * 1e9
        g = psd_w_per_ghz / 1e9
        p_sig = g * b_hz
        p_ase = self.ase_coeff_w_per_hz * b_hz
        bracket = kernels.nli_bracket(
            center_ghz * 1e9, b_hz, g, f_int_hz, b_int_hz, g_int_w_per_hz,
            self.beta2_leffa,
        )
        p_nli = b_hz * self.nli_coeff * bracket
        inv = 10.0 ** (-snr_tx_db / 10.0) if not math.isinf(snr_tx_db) else 0.0
        inv += p_ase / p_sig + p_nli / p_sig
        return -10.0 * math.log10(inv)
