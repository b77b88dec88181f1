"""
Temperature-dependent spectra: pick a rate model, broaden and renormalise
the dressed-state lineshape, sweep temperature and measure the peaks.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bath import BathParams, CorrelationTable, REFERENCE_BATH, build_correlation_table, displacement_B
from .dressed import DriveConfig, REFERENCE_DRIVE, Spectrum, spectrum_Ld
from .errors import PeakCountMismatch
from .quadrature import QuadSettings
from .rates import RateModel, RateSet, rate_full_polaron, rate_weak_coupling, rate_set

__all__ = [
    "DriveMode",
    "GridSpec",
    "ScenarioConfig",
    "Peak",
    "PeakReport",
    "RATE_COLUMNS",
    "thermal_spectrum",
    "temperature_sweep",
    "rate_table",
    "peak_analysis",
]

TableSource = Callable[[BathParams], CorrelationTable]


class DriveMode(enum.Enum):
    SINGLE = "single"
    DOUBLE = "double"


@dataclass(frozen=True)
class GridSpec:
    min_detuning: float
    max_detuning: float
    points: int = 4001

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("grid needs at least 3 points")
        if not self.min_detuning < self.max_detuning:
            raise ValueError("grid needs min_detuning < max_detuning")

    @classmethod
    def around(cls, drive: DriveConfig, points: int = 4001) -> "GridSpec":
        """Symmetric grid covering 2.2 times the strong-field splitting."""
        half = 2.2 * 2 * drive.omega_rabi_half
        return cls(-half, half, points)

    def array(self) -> np.ndarray:
        return np.linspace(self.min_detuning, self.max_detuning, self.points)

    @property
    def step(self) -> float:
        return (self.max_detuning - self.min_detuning) / (self.points - 1)


@dataclass(frozen=True)
class ScenarioConfig:
    drive: DriveConfig = REFERENCE_DRIVE
    bath: BathParams = REFERENCE_BATH
    model: RateModel = RateModel.WEAK
    drive_mode: DriveMode = DriveMode.DOUBLE
    temperatures: tuple = (0.0,)
    grid: GridSpec | None = None
    normalize: bool = True
    quad: QuadSettings | None = None

    def __post_init__(self):
        temps = tuple(float(t) for t in self.temperatures)
        if not temps:
            raise ValueError("at least one temperature is required")
        if any(not 0 <= t <= 300 for t in temps):
            raise ValueError("temperatures must lie in [0, 300] K")
        object.__setattr__(self, "temperatures", temps)
        if self.grid is None:
            object.__setattr__(self, "grid", GridSpec.around(self.drive))


def _table_for(bath, tables, quad):
    return tables(bath) if tables is not None else build_correlation_table(bath, quad)


def _rates(cfg: ScenarioConfig, temperature: float, tables: TableSource | None) -> RateSet:
    bath = cfg.bath.at(temperature)
    table = None
    if cfg.model is RateModel.FULL_POLARON:
        table = _table_for(bath, tables, cfg.quad)
    return rate_set(cfg.model, bath, cfg.drive, table, cfg.quad)


def _raw_spectrum(cfg: ScenarioConfig, temperature: float, tables: TableSource | None) -> Spectrum:
    rates = _rates(cfg, temperature, tables)
    gamma_total = cfg.drive.gamma_rad + rates.gamma_phonon
    g_eff = rates.g_r if cfg.drive_mode is DriveMode.DOUBLE else 0.0
    spec = spectrum_Ld(cfg.drive, gamma_total, rates.omega_r, g_eff, cfg.grid.array())
    meta = {
        **spec.metadata,
        "model": cfg.model.value,
        "mode": cfg.drive_mode.value,
        "temperature": float(temperature),
        "gamma_phonon": float(rates.gamma_phonon),
        "b_factor": float(rates.b_factor),
        "normalization": "none",
        "scale": 1.0,
    }
    return Spectrum(spec.detunings, spec.values, meta)


def thermal_spectrum(
    cfg: ScenarioConfig,
    temperature: float,
    tables: TableSource | None = None,
) -> Spectrum:
    """Spectrum at one temperature; total width Gamma + Gamma_phonon.

    Weak coupling keeps the bare (Omega, G); both polaron models use
    (Omega B, G B).  Single-drive mode drops the weak field entirely.
    With ``cfg.normalize`` the maximum is scaled to one.
    """
    if not 0 <= temperature <= 300:
        raise ValueError("temperature must lie in [0, 300] K")
    spec = _raw_spectrum(cfg, temperature, tables)
    if cfg.normalize:
        spec = spec.normalize()
        spec.metadata["normalization"] = "peak"
    return spec


def _sweep_task(args):
    cfg, temperature, tables = args
    try:
        return _raw_spectrum(cfg, temperature, tables)
    except Exception as exc:
        raise type(exc)(f"T={temperature} K: {exc}") from exc


def temperature_sweep(
    cfg: ScenarioConfig,
    tables: TableSource | None = None,
    workers: int = 1,
) -> list[Spectrum]:
    """One spectrum per ``cfg.temperatures`` entry, in that order.

    With ``cfg.normalize`` the whole series is divided by its common maximum,
    so relative heights across temperature survive normalisation.  A
    failure at any temperature aborts the sweep and names that temperature.
    """
    jobs = [(cfg, t, tables) for t in cfg.temperatures]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_sweep_task, jobs))
    else:
        raw = [_sweep_task(j) for j in jobs]
    if not cfg.normalize:
        return raw
    peak = max(float(np.max(s.values)) for s in raw)
    out = []
    for s in raw:
        scaled = Spectrum(s.detunings, s.values / peak, {**s.metadata, "scale": 1.0 / peak, "normalization": "sweep"})
        scaled.metadata["normalized"] = bool(np.max(scaled.values) == 1.0)
        out.append(scaled)
    return out


RATE_COLUMNS = (
    "temperature_k",
    "gamma_w",
    "gamma_1ph",
    "gamma_p",
    "gamma_y",
    "gamma_z",
    "b_factor",
    "omega_r",
    "g_r",
)


def rate_table(cfg: ScenarioConfig, tables: TableSource | None = None) -> list[dict]:
    """All three rates, the polaron sub-rates and B per temperature."""
    rows = []
    omega = cfg.drive.omega_rabi_half
    for t in cfg.temperatures:
        bath = cfg.bath.at(t)
        b = displacement_B(bath, cfg.quad)
        table = _table_for(bath, tables, cfg.quad)
        full = rate_full_polaron(bath, table, omega, cfg.quad, g_half=cfg.drive.g_half)
        rows.append({
            "temperature_k": float(t),
            "gamma_w": rate_weak_coupling(bath, omega),
            "gamma_1ph": rate_weak_coupling(bath, omega * b),
            "gamma_p": full.gamma_phonon,
            "gamma_y": full.gamma_y,
            "gamma_z": full.gamma_z,
            "b_factor": b,
            "omega_r": omega * b,
            "g_r": cfg.drive.g_half * b,
        })
    return rows


@dataclass(frozen=True)
class Peak:
    center: float
    height: float
    hwhm: float
    area: float
    maximum_at: float


@dataclass(frozen=True)
class PeakReport:
    peaks: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.peaks)

    def __getitem__(self, i) -> Peak:
        return self.peaks[i]


def _crossing(x, y, start, stop, level):
    """First linear-interpolated crossing of ``level`` walking start -> stop."""
    step = 1 if stop > start else -1
    for i in range(start, stop, step):
        j = i + step
        if y[j] < level <= y[i]:
            return x[i] + (level - y[i]) * (x[j] - x[i]) / (y[j] - y[i])
    return x[stop]


def _vertex(x, y, i):
    """Abscissa of the parabola through points i-1, i, i+1."""
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return float(x[i])
    return float(x[i] + 0.5 * (y0 - y2) / denom * (x[i + 1] - x[i]))


def peak_analysis(
    spectrum: Spectrum,
    expected: int | None = 3,
    merge_width: float | None = None,
    dip_ratio: float = 0.5,
    anchors: Sequence[float] | str | None = "auto",
) -> PeakReport:
    """Cluster local maxima into lines and measure each cluster.

    Maxima below 1e-3 of the global maximum are ignored.  When line
    positions are known (``anchors``; by default -2 Omega_eff, 0 and
    +2 Omega_eff from the spectrum metadata) every maximum joins the
    cluster of its nearest anchor: a doubly dressed sideband peaks near
    both edges of its fan, and at high temperature the dip separating it
    from the central line can be shallower than its own.  Without anchors,
    neighbouring maxima merge when closer than ``merge_width`` (default
    Gamma_T / 4) or when the dip between them stays above ``dip_ratio`` of
    the lower one.

    ``center`` is the parabolic vertex of a single-maximum cluster and the
    midpoint of the outer half-height crossings for a multi-maximum one (a
    doubly dressed fan has no vertex; a crossing midpoint of a lone line
    is dragged by the tail of its neighbour).  ``hwhm`` is half the
    distance between the outer half-height crossings, ``area`` a trapezoid between the minima separating
    neighbouring clusters.  A crossing hidden by an overlapping neighbour
    is clipped to the cluster boundary.
    """
    x = np.asarray(spectrum.detunings, dtype=float)
    y = np.asarray(spectrum.values, dtype=float)
    if merge_width is None:
        merge_width = spectrum.metadata.get("gamma_total", 0.0) / 4
    if isinstance(anchors, str):
        w = spectrum.metadata.get("omega_eff")
        anchors = None if w is None else (-2 * w, 0.0, 2 * w)
    floor = 1e-3 * y.max()
    inner = np.arange(1, len(y) - 1)
    is_max = (y[inner] > y[inner - 1]) & (y[inner] >= y[inner + 1]) & (y[inner] > floor)
    maxima = [int(i) for i in inner[is_max]]
    if not maxima:
        maxima = [int(np.argmax(y))]

    clusters = [[maxima[0]]]
    if anchors is not None:
        anchor = np.asarray(anchors, dtype=float)
        label = [int(np.argmin(np.abs(anchor - x[m]))) for m in maxima]
        for m, prev_label, this_label in zip(maxima[1:], label, label[1:]):
            if this_label == prev_label:
                clusters[-1].append(m)
            else:
                clusters.append([m])
    else:
        for m in maxima[1:]:
            prev = clusters[-1][-1]
            dip = y[prev:m + 1].min()
            close = x[m] - x[prev] < merge_width
            shallow = dip >= dip_ratio * min(y[prev], y[m])
            if close or shallow:
                clusters[-1].append(m)
            else:
                clusters.append([m])

    if expected is not None and len(clusters) != expected:
        raise PeakCountMismatch(f"found {len(clusters)} peak clusters, expected {expected}")

    bounds = [0]
    for left, right in zip(clusters, clusters[1:]):
        a, b = left[-1], right[0]
        bounds.append(a + int(np.argmin(y[a:b + 1])))
    bounds.append(len(y) - 1)

    peaks = []
    for k, members in enumerate(clusters):
        lo, hi = bounds[k], bounds[k + 1]
        top = members[int(np.argmax(y[members]))]
        half = 0.5 * y[top]
        left = _crossing(x, y, members[0], lo, half)
        right = _crossing(x, y, members[-1], hi, half)
        area = float(np.trapezoid(y[lo:hi + 1], x[lo:hi + 1]))
        if len(members) == 1 and 0 < top < len(y) - 1:
            center = _vertex(x, y, top)
        else:
            center = 0.5 * (left + right)
        peaks.append(Peak(
            center=center,
            height=float(y[top]),
            hwhm=0.5 * (right - left),
            area=area,
            maximum_at=float(x[top]),
        ))
    return PeakReport(tuple(peaks))
