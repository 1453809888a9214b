"""Transceiver configuration catalogs: enumeration, pre-selection, export.

Candidates are the Cartesian product of the scenario's symbol-rate and
entropy grids, each entropy expanded over every base constellation that can
carry it. Pre-selection keeps, per (effective rate, bandwidth) pair, the
candidate with the lowest required SNR, then discards pairs that are
dominated within their bandwidth (a higher rate available at the same or
lower SNR), so required SNR is strictly increasing in rate at any fixed
bandwidth.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from eonplan.exceptions import OversizeChannelError
from eonplan.psqam import (
    QAM_BASE_SIZES,
    FecParameters,
    PenaltyModel,
    awgn_snr_for_ber,
    effective_data_rate,
    net_data_rate,
    solve_lambda_for_entropy,
)

CSV_COLUMNS = (
    "symbol_rate",
    "entropy",
    "base_M",
    "net_rate",
    "effective_rate",
    "bandwidth",
    "required_snr",
)


@dataclass(frozen=True)
class TransceiverConfiguration:
    """One operating point: rate, spectrum and SNR requirement."""

    symbol_rate_gbd: float
    base_size: int
    entropy_bits: float
    net_rate_gbps: float
    effective_rate_gbps: float
    bandwidth_ghz: float
    required_snr_db: float


@dataclass(frozen=True)
class ScenarioSpec:
    """A rate-adaptivity scenario: grids and spectral granularities."""

    name: str
    bandwidth_resolution_ghz: float
    slot_width_ghz: float
    symbol_rate_grid: tuple[float, ...]
    entropy_grid: tuple[float, ...]
    rate_granularity_gbps: float = 50.0
    uniform_only: bool = False
    rolloff: float = 0.05
    min_bandwidth_ghz: float = 37.5
    max_bandwidth_ghz: float = 150.0

    def __post_init__(self):
        if not self.symbol_rate_grid or not self.entropy_grid:
            raise ValueError("symbol rate and entropy grids must be nonempty")
        if list(self.symbol_rate_grid) != sorted(self.symbol_rate_grid):
            raise ValueError("symbol rate grid must be sorted")
        if list(self.entropy_grid) != sorted(self.entropy_grid):
            raise ValueError("entropy grid must be sorted")
        ratio = self.bandwidth_resolution_ghz / self.slot_width_ghz
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(
                f"slot width {self.slot_width_ghz} GHz must divide the bandwidth "
                f"resolution {self.bandwidth_resolution_ghz} GHz"
            )

    @property
    def n_slots(self) -> int:
        return int(round(5000.0 / self.slot_width_ghz))


_PS_SYMBOL_RATES = tuple(float(s) for s in range(35, 140, 2)) + (140.0,)
_PS_ENTROPIES = tuple(round(2.0 + 0.1 * k, 1) for k in range(41))


def scenario(name: str) -> ScenarioSpec:
    """The four standard scenarios: baseline and three adaptivity levels."""
    if name == "baseline":
        return ScenarioSpec(
            name="baseline",
            bandwidth_resolution_ghz=12.5,
            slot_width_ghz=12.5,
            symbol_rate_grid=(35.0, 70.0, 105.0, 140.0),
            entropy_grid=(2.0, 4.0, 6.0),
            uniform_only=True,
        )
    if name == "s1":
        return ScenarioSpec(
            name="s1",
            bandwidth_resolution_ghz=37.5,
            slot_width_ghz=12.5,
            symbol_rate_grid=_PS_SYMBOL_RATES,
            entropy_grid=_PS_ENTROPIES,
        )
    if name == "s2":
        return ScenarioSpec(
            name="s2",
            bandwidth_resolution_ghz=12.5,
            slot_width_ghz=12.5,
            symbol_rate_grid=_PS_SYMBOL_RATES,
            entropy_grid=_PS_ENTROPIES,
        )
    if name == "s3":
        return ScenarioSpec(
            name="s3",
            bandwidth_resolution_ghz=3.125,
            slot_width_ghz=3.125,
            symbol_rate_grid=_PS_SYMBOL_RATES,
            entropy_grid=_PS_ENTROPIES,
        )
    raise ValueError(f"unknown scenario {name!r}; expected baseline, s1, s2 or s3")

SCENARIO_NAMES = ("baseline", "s1", "s2", "s3")


def bandwidth_of(
    symbol_rate_gbd: float,
    rolloff: float = 0.05,
    resolution_ghz: float = 12.5,
    min_bandwidth_ghz: float = 37.5,
    max_bandwidth_ghz: float = 150.0,
) -> float:
    """Grid-aligned channel bandwidth for a symbol rate with pulse roll-off."""
    if symbol_rate_gbd <= 0:
        raise ValueError(f"symbol rate must be positive, got {symbol_rate_gbd}")
    occupied = symbol_rate_gbd * (1.0 + rolloff)
    steps = math.ceil(occupied / resolution_ghz - 1e-9)
    bandwidth = max(min_bandwidth_ghz, steps * resolution_ghz)
    if bandwidth > max_bandwidth_ghz + 1e-9:
        raise OversizeChannelError(
            f"{symbol_rate_gbd} GBd needs {bandwidth} GHz, above the "
            f"{max_bandwidth_ghz} GHz maximum"
        )
    return bandwidth


def _admissible_bases(entropy: float, uniform_only: bool) -> tuple[int, ...]:
    if uniform_only:
        size = 2 ** int(round(entropy))
        if abs(entropy - round(entropy)) > 1e-9 or size not in QAM_BASE_SIZES:
            return ()
        return (size,)
    return tuple(m for m in QAM_BASE_SIZES if math.log2(m) >= entropy - 1e-9)


def enumerate_candidates(
    spec: ScenarioSpec,
    fec: FecParameters,
    penalties: PenaltyModel,
) -> list[TransceiverConfiguration]:
    """All candidate configurations of a scenario with derived fields filled.

    Drops zero-rate and oversize-bandwidth candidates. The AWGN part of the
    required SNR depends only on (M, H) and is solved once per pair.
    """
    awgn_cache: dict[tuple[int, float], float] = {}
    out: list[TransceiverConfiguration] = []
    for symbol_rate in spec.symbol_rate_grid:
        try:
            bandwidth = bandwidth_of(
                symbol_rate,
                spec.rolloff,
                spec.bandwidth_resolution_ghz,
                spec.min_bandwidth_ghz,
                spec.max_bandwidth_ghz,
            )
        except OversizeChannelError:
            continue
        for entropy in spec.entropy_grid:
            for base in _admissible_bases(entropy, spec.uniform_only):
                net = net_data_rate(symbol_rate, entropy, base, fec)
                effective = effective_data_rate(net, spec.rate_granularity_gbps)
                if effective <= 0:
                    continue
                key = (base, entropy)
                if key not in awgn_cache:
                    constellation = solve_lambda_for_entropy(base, entropy)
                    awgn_cache[key] = awgn_snr_for_ber(
                        constellation, fec.prefec_ber_threshold
                    )
                snr = awgn_cache[key] + penalties.total_penalty_db(base, symbol_rate)
                out.append(
                    TransceiverConfiguration(
                        symbol_rate_gbd=symbol_rate,
                        base_size=base,
                        entropy_bits=entropy,
                        net_rate_gbps=net,
                        effective_rate_gbps=effective,
                        bandwidth_ghz=bandwidth,
                        required_snr_db=snr,
                    )
                )
    return out


def _selection_rank(config: TransceiverConfiguration):
    return (
        config.required_snr_db,
        config.symbol_rate_gbd,
        config.base_size,
        config.entropy_bits,
    )


def preselect(
    candidates: Iterable[TransceiverConfiguration],
    spec: ScenarioSpec,
) -> list[TransceiverConfiguration]:
    """Most efficient configuration per (effective rate, bandwidth) pair.

    Within each pair the lowest required SNR wins (ties: lower symbol rate,
    smaller base, lower entropy). Pairs whose winner is dominated inside its
    bandwidth -- some higher rate needs no more SNR -- are dropped, leaving a
    strictly increasing SNR-vs-rate staircase per bandwidth.
    """
    del spec
    best: dict[tuple[float, float], TransceiverConfiguration] = {}
    for config in candidates:
        key = (config.effective_rate_gbps, config.bandwidth_ghz)
        incumbent = best.get(key)
        if incumbent is None or _selection_rank(config) < _selection_rank(incumbent):
            best[key] = config

    by_bandwidth: dict[float, list[TransceiverConfiguration]] = {}
    for config in best.values():
        by_bandwidth.setdefault(config.bandwidth_ghz, []).append(config)

    kept: list[TransceiverConfiguration] = []
    for bandwidth in sorted(by_bandwidth):
        group = sorted(
            by_bandwidth[bandwidth],
            key=lambda c: c.effective_rate_gbps,
            reverse=True,
        )
        min_snr = math.inf
        for config in group:
            if config.required_snr_db < min_snr:
                kept.append(config)
                min_snr = config.required_snr_db
    kept.sort(key=lambda c: (c.effective_rate_gbps, c.bandwidth_ghz))
    return kept


def bandwidth_options(catalog: Sequence[TransceiverConfiguration]) -> list[float]:
    return sorted({c.bandwidth_ghz for c in catalog})


def export_catalog(
    catalog: Sequence[TransceiverConfiguration], path: str | Path
) -> None:
    """Write the catalog as CSV, sorted by (effective rate, bandwidth)."""
    path = Path(path)
    rows = sorted(catalog, key=lambda c: (c.effective_rate_gbps, c.bandwidth_ghz))
    try:
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_COLUMNS)
            for c in rows:
                writer.writerow(
                    [
                        repr(c.symbol_rate_gbd),
                        repr(c.entropy_bits),
                        c.base_size,
                        repr(c.net_rate_gbps),
                        repr(c.effective_rate_gbps),
                        repr(c.bandwidth_ghz),
                        repr(c.required_snr_db),
                    ]
                )
    except OSError as exc:
        raise OSError(f"cannot write catalog to {path}: {exc}") from exc


def load_catalog(path: str | Path) -> list[TransceiverConfiguration]:
    """Read a catalog CSV written by :func:`export_catalog`."""
    path = Path(path)
    out = []
    try:
        with path.open(newline="") as handle:
            reader = csv.DictReader(handle)
            for row in reader:
                out.append(
                    TransceiverConfiguration(
                        symbol_rate_gbd=float(row["symbol_rate"]),
                        base_size=int(row["base_M"]),
                        entropy_bits=float(row["entropy"]),
                        net_rate_gbps=float(row["net_rate"]),
                        effective_rate_gbps=float(row["effective_rate"]),
                        bandwidth_ghz=float(row["bandwidth"]),
                        required_snr_db=float(row["required_snr"]),
                    )
                )
    except OSError as exc:
        raise OSError(f"cannot read catalog from {path}: {exc}") from exc
    return out


def build_catalog(
    spec: ScenarioSpec,
    fec: FecParameters | None = None,
    penalties: PenaltyModel | None = None,
) -> list[TransceiverConfiguration]:
    """Enumerate and pre-select in one step with default FEC and penalties."""
    fec = fec if fec is not None else FecParameters()
    penalties = penalties if penalties is not None else PenaltyModel()
    return preselect(enumerate_candidates(spec, fec, penalties), spec)
