"""
Doubly dressed two-level emitter: oscillator eigenfunctions, weak-field
coupling, transition selection rules and the resonance-fluorescence
lineshape.

All spectra are functions of the detuning ``omega - omega_L`` in rad/ns.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quadrature import QuadSettings, integrate_finite

__all__ = [
    "DriveConfig",
    "REFERENCE_DRIVE",
    "Spectrum",
    "TransitionKind",
    "Transition",
    "oscillator_phi",
    "weight_density",
    "coupling_g_n",
    "coupling_matrix_element",
    "coupling_matrix",
    "selection_rule",
    "spectrum_components",
    "spectrum_Ld",
]

LAMBDA_QUAD = QuadSettings(rel_tol=1e-6, abs_tol=1e-14, max_subdivisions=20_000)


@dataclass(frozen=True)
class DriveConfig:
    """Strong + weak resonant drive.

    ``omega_rabi_half`` is Omega and ``g_half`` is G (half Rabi splittings,
    rad/ns).  ``g_half = 0`` is the single-drive (Mollow) case.
    """

    omega_rabi_half: float
    g_half: float = 0.0
    M: int = 40
    theta: float = math.pi / 4
    gamma_rad: float = 2.35
    omega_L: float = 0.0

    def __post_init__(self):
        if not self.omega_rabi_half > 0:
            raise ValueError("omega_rabi_half must be > 0")
        if not self.g_half >= 0:
            raise ValueError("g_half must be >= 0")
        if not self.gamma_rad > 0:
            raise ValueError("gamma_rad must be > 0")
        if self.g_half > 0 and self.M < 1:
            raise ValueError("a weak field (G > 0) needs photon number M >= 1")
        if self.M < 0:
            raise ValueError("M must be >= 0")
        if self.g_half > 0 and not (
            2 * self.omega_rabi_half > 2 * self.g_half > self.gamma_rad
        ):
            warnings.warn(
                "doubly dressed model outside its validity range 2Omega > 2G > Gamma",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def double(self) -> bool:
        return self.g_half > 0

    def single(self) -> "DriveConfig":
        return DriveConfig(self.omega_rabi_half, 0.0, self.M, self.theta, self.gamma_rad, self.omega_L)


REFERENCE_DRIVE = DriveConfig(omega_rabi_half=5 * math.pi, g_half=2 * math.pi, M=40, gamma_rad=2.35)


@dataclass(frozen=True, eq=False)
class Spectrum:
    detunings: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def normalized(self) -> bool:
        return bool(self.metadata.get("normalized", False))

    def scaled(self, factor: float, **meta) -> "Spectrum":
        return Spectrum(self.detunings, self.values * factor, {**self.metadata, **meta})

    def normalize(self) -> "Spectrum":
        """Copy scaled so that the maximum is exactly 1."""
        peak = float(np.max(self.values))
        # divide rather than multiply by 1/peak: x / x is exactly 1
        meta = {**self.metadata, "normalized": True, "scale": 1.0 / peak}
        return Spectrum(self.detunings, self.values / peak, meta)


def oscillator_phi(n: int, x):
    """Oscillator eigenfunction (sqrt(2 pi) 2^n n!)^(-1/2) H_n(x) exp(-x^2/2).

    Evaluated with the normalised three-term recurrence, rescaling the
    running pair whenever it grows large so that neither H_n, n! nor the
    Gaussian is ever formed on its own.  Note the sqrt(2 pi) normalisation:
    the integral of phi_n^2 over x is 1/sqrt(2).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    log_scale = np.zeros_like(x)
    for k in range(1, n + 1):
        prev, cur = cur, math.sqrt(2.0 / k) * x * cur - math.sqrt((k - 1) / k) * prev
        big = np.abs(cur) > 1e150
        if np.any(big):
            cur = np.where(big, cur * 1e-150, cur)
            prev = np.where(big, prev * 1e-150, prev)
            log_scale = np.where(big, log_scale + 150 * math.log(10.0), log_scale)
    with np.errstate(divide="ignore"):
        log_mag = np.log(np.abs(cur)) + log_scale - 0.5 * x * x - 0.25 * math.log(2 * math.pi)
    out = np.sign(cur) * np.exp(log_mag)
    return out if out.ndim else float(out)


def weight_density(M: int, lam):
    """|phi_M(lambda / sqrt 2)|^2; integrates to one over lambda."""
    return oscillator_phi(M, np.asarray(lam, dtype=float) / math.sqrt(2.0)) ** 2


def _g_n(theta, g_half, M):
    if g_half == 0:
        return 0.0
    if M < 1:
        raise ValueError("M must be >= 1 for a weak field")
    return math.sin(theta) * math.cos(theta) * g_half / math.sqrt(M)


def coupling_g_n(drive: DriveConfig) -> float:
    """sin(theta) cos(theta) G / sqrt(M)."""
    return _g_n(drive.theta, drive.g_half, drive.M)


def coupling_matrix_element(i: int, n: int, m: int, g_n: float) -> float:
    """<i, N-n; n| V |i, N-m; m> in units of hbar."""
    if i not in (1, 2):
        raise ValueError("dressed-state index i must be 1 or 2")
    if n < 0 or m < 0:
        raise ValueError("photon numbers must be >= 0")
    if m == n + 1:
        amp = math.sqrt(n + 1)
    elif m == n - 1:
        amp = math.sqrt(n)
    else:
        return 0.0
    return -((-1) ** i) * g_n * amp


def coupling_matrix(i: int, size: int, g_n: float = 1.0) -> np.ndarray:
    """Dense ``size x size`` truncation of the weak-field coupling."""
    out = np.zeros((size, size))
    for n in range(size - 1):
        out[n, n + 1] = coupling_matrix_element(i, n, n + 1, g_n)
        out[n + 1, n] = coupling_matrix_element(i, n + 1, n, g_n)
    return out


class TransitionKind(enum.Enum):
    FORBIDDEN = "forbidden"
    SIDEBAND = "sideband"
    CENTRAL = "central"


@dataclass(frozen=True)
class Transition:
    kind: TransitionKind
    sign: int = 0

    @property
    def amplitude(self) -> float:
        return 0.5 * self.sign


def selection_rule(i: int, lam: float, i_prime: int, lam_prime: float, tol: float = 1e-12) -> Transition:
    """Matrix element of S+ between |N i lam> and |N-1 i' lam'>.

    Across dressed manifolds (i != i') only lam = -lam' couples and feeds a
    sideband; within one manifold only lam = lam' couples and feeds the
    central line.
    """
    if i not in (1, 2) or i_prime not in (1, 2):
        raise ValueError("dressed-state indices must be 1 or 2")
    if i != i_prime:
        if abs(lam + lam_prime) <= tol:
            return Transition(TransitionKind.SIDEBAND, 1 if i == 1 else -1)
    elif abs(lam - lam_prime) <= tol:
        return Transition(TransitionKind.CENTRAL, -((-1) ** i))
    return Transition(TransitionKind.FORBIDDEN, 0)


def _lorentz(x, hwhm):
    return hwhm / (x * x + hwhm * hwhm)


def spectrum_components(
    drive: DriveConfig,
    gamma_total: float,
    omega_eff: float,
    g_eff: float,
    grid,
) -> tuple[np.ndarray, np.ndarray]:
    """Central and (summed) sideband terms, without the overall prefactor.

    The sideband term is averaged over lambda with ``weight_density``; for
    ``g_eff = 0`` that average is done exactly.
    """
    if not gamma_total > 0:
        raise ValueError("gamma_total must be > 0")
    d = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ValueError("detuning grid must be finite")
    central = _lorentz(d, gamma_total / 2)
    side_w = 3 * gamma_total / 4
    g_n = _g_n(drive.theta, g_eff, drive.M)
    if g_n == 0:
        side = _lorentz(d - 2 * omega_eff, side_w) + _lorentz(d + 2 * omega_eff, side_w)
        return central, 0.25 * side

    root = math.sqrt(2 * drive.M + 1)
    edge = math.sqrt(2.0) * root + 6.0

    def f(lam):
        # two Lorentzians at d -/+ 2 omega_eff - 2 lam g_n, built in place
        x = d[None, :] - 2.0 * lam[:, None] * g_n
        red = x - 2 * omega_eff
        blue = np.add(x, 2 * omega_eff, out=x)
        for arr in (red, blue):
            np.square(arr, out=arr)
            arr += side_w * side_w
            np.divide(side_w, arr, out=arr)
        red += blue
        red *= weight_density(drive.M, lam)[:, None]
        return red

    # |phi_M|^2 has period ~ pi sqrt(2) / root in lambda: ~1.4 periods per panel
    res = integrate_finite(f, -edge, edge, LAMBDA_QUAD, max_panel=2 * math.pi / root)
    return central, 0.25 * np.asarray(res.value)


def spectrum_Ld(
    drive: DriveConfig,
    gamma_total: float,
    omega_eff: float,
    g_eff: float,
    grid,
    *,
    prefactor_rate: float | None = None,
) -> Spectrum:
    """Incoherent resonance-fluorescence spectrum versus detuning.

    Every Lorentzian carries ``gamma_total``; the overall ``rate / 4 pi``
    prefactor uses ``prefactor_rate`` (default: the radiative rate
    ``drive.gamma_rad``) so that phonon broadening lowers the peaks.
    """
    rate = drive.gamma_rad if prefactor_rate is None else prefactor_rate
    central, side = spectrum_components(drive, gamma_total, omega_eff, g_eff, grid)
    values = rate / (4 * math.pi) * (central + side)
    meta = {
        "gamma_total": float(gamma_total),
        "omega_eff": float(omega_eff),
        "g_eff": float(g_eff),
        "prefactor_rate": float(rate),
        "omega_L": float(drive.omega_L),
        "normalized": False,
    }
    return Spectrum(np.asarray(grid, dtype=float), values, meta)
