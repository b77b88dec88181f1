"""
LA-phonon bath: super-ohmic spectral density, thermal factors, the phonon
correlation function and the polaron kernels built from it.

Frequencies are angular, in rad/ns; times are in ns; temperatures in K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants
from scipy.interpolate import CubicSpline

from .errors import NonConvergence, TableRange, naming
from .quadrature import DEFAULT_SETTINGS, QuadSettings, integrate_semi_infinite

__all__ = [
    "HBAR_OVER_KB",
    "BathParams",
    "CorrelationTable",
    "REFERENCE_BATH",
    "spectral_density",
    "thermal_factor",
    "correlation_phi",
    "displacement_B",
    "polaron_shift",
    "kernel_lambda_x",
    "kernel_lambda_y",
    "build_correlation_table",
]

#: hbar / k_B in K ns
HBAR_OVER_KB = constants.hbar / constants.k * 1e9

#: relative level below which the correlation function counts as decayed
TABLE_DECAY = 1e-8
#: hard cap on the correlation-table extent, ns
TABLE_TAU_LIMIT = 200.0


@dataclass(frozen=True)
class BathParams:
    """Exciton-phonon bath.

    Attributes
    ----------
    alpha : float
        Coupling strength, ns^2 (so that ``alpha * omega**3`` is a rate).
    omega_c : float
        Gaussian cutoff frequency, rad/ns.
    temperature : float
        Kelvin; zero selects the vacuum limit coth -> 1.
    phi_power : int
        Power of omega dividing J in the correlation function (2 makes
        ``B = exp(-phi(0)/2)``; 1 reproduces the alternative printed form).
    """

    alpha: float
    omega_c: float
    temperature: float = 0.0
    phi_power: int = 2

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")
        if not self.temperature >= 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.phi_power not in (1, 2):
            raise ValueError(f"phi_power must be 1 or 2, got {self.phi_power}")

    def at(self, temperature: float) -> "BathParams":
        return BathParams(self.alpha, self.omega_c, temperature, self.phi_power)


REFERENCE_BATH = BathParams(alpha=2.535e-7, omega_c=493.33)


def spectral_density(bath: BathParams, omega):
    """J(omega) = alpha omega^3 exp(-(omega/omega_c)^2)."""
    omega = np.asarray(omega, dtype=float)
    out = bath.alpha * omega**3 * np.exp(-((omega / bath.omega_c) ** 2))
    return out if out.ndim else float(out)


def thermal_factor(bath: BathParams, omega):
    """coth(hbar omega / 2 k_B T), exactly 1 at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if bath.temperature == 0:
        out = np.ones_like(omega)
    else:
        out = 1.0 / np.tanh(HBAR_OVER_KB * omega / (2.0 * bath.temperature))
    return out if out.ndim else float(out)


def _phi_integrand(bath, tau):
    p = bath.phi_power

    def f(w):
        weight = bath.alpha * w ** (3 - p) * np.exp(-((w / bath.omega_c) ** 2))
        return weight * (np.cos(w * tau) * thermal_factor(bath, w) - 1j * np.sin(w * tau))

    return f


def correlation_phi(bath: BathParams, tau: float, settings: QuadSettings | None = None) -> complex:
    """Phonon correlation function phi(tau) for tau >= 0 (dimensionless)."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    s = settings or DEFAULT_SETTINGS
    # half a period per panel; GK15 is exact to ~1e-18 on that span
    max_panel = math.pi / tau if tau > 0 else None
    with naming(f"phi(tau={tau:.6g} ns) at T={bath.temperature:g} K"):
        res = integrate_semi_infinite(_phi_integrand(bath, tau), bath.omega_c, s, max_panel=max_panel)
    return complex(res.value)


def displacement_B(bath: BathParams, settings: QuadSettings | None = None) -> float:
    """Thermally averaged displacement exp[-1/2 int J/w^2 coth dw], in (0, 1]."""
    if bath.alpha == 0:
        return 1.0

    def f(w):
        return bath.alpha * w * np.exp(-((w / bath.omega_c) ** 2)) * thermal_factor(bath, w)

    with naming(f"displacement B at T={bath.temperature:g} K"):
        res = integrate_semi_infinite(f, bath.omega_c, settings)
    return math.exp(-0.5 * res.value)


def polaron_shift(bath: BathParams, settings: QuadSettings | None = None) -> float:
    """Delta_p = int_0^inf J(w)/w dw.  Diagnostic only; no spectrum uses it."""

    def f(w):
        return bath.alpha * w**2 * np.exp(-((w / bath.omega_c) ** 2))

    with naming("polaron shift"):
        return float(integrate_semi_infinite(f, bath.omega_c, settings).value)


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """Sampled phi(tau) with a cubic-spline interpolant.

    ``decay_scale`` is ``tau_max / tail_cutoff_factor`` of the settings the
    table was built with, so a semi-infinite transform of a kernel built on
    the table truncates exactly at the last sample.
    """

    tau_grid: np.ndarray
    phi_values: np.ndarray
    decay_scale: float
    built_for: BathParams
    b_factor: float
    _spline: CubicSpline | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        tau = np.asarray(self.tau_grid, dtype=float)
        phi = np.asarray(self.phi_values, dtype=complex)
        if tau.ndim != 1 or tau.shape != phi.shape or len(tau) < 4:
            raise ValueError("tau_grid and phi_values must be 1-d of equal length >= 4")
        if np.any(np.diff(tau) <= 0):
            raise ValueError("tau_grid must be strictly increasing")
        tau.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "tau_grid", tau)
        object.__setattr__(self, "phi_values", phi)
        object.__setattr__(self, "_spline", CubicSpline(tau, phi))

    @property
    def tau_max(self) -> float:
        return float(self.tau_grid[-1])

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        slack = 1e-12 * self.tau_max
        if np.any(tau < -slack) or np.any(tau > self.tau_max + slack):
            raise TableRange(
                f"tau outside correlation table range [0, {self.tau_max:.6g}] ns"
            )
        out = self._spline(np.clip(tau, 0.0, self.tau_max))
        return out if out.ndim else complex(out)


def _check_table(bath, table):
    if table.built_for != bath:
        raise ValueError("correlation table was built for a different bath")


def kernel_lambda_x(bath: BathParams, table: CorrelationTable, tau):
    """(B^2/2)(e^phi + e^-phi - 2), evaluated as 2 B^2 sinh^2(phi/2)."""
    _check_table(bath, table)
    phi = table(tau)
    return 2.0 * table.b_factor**2 * np.sinh(0.5 * phi) ** 2


def kernel_lambda_y(bath: BathParams, table: CorrelationTable, tau):
    """(B^2/2)(e^phi - e^-phi) = B^2 sinh(phi)."""
    _check_table(bath, table)
    return table.b_factor**2 * np.sinh(table(tau))


def table_grid_step(tau: float, omega_c: float, max_step: float | None = None) -> float:
    """Uniform 0.02/omega_c near the origin, 2 % geometric growth beyond 10/omega_c."""
    step = max(0.02 / omega_c, 0.02 * tau) if tau > 10.0 / omega_c else 0.02 / omega_c
    return step if max_step is None else min(step, max_step)


def build_correlation_table(
    bath: BathParams,
    settings: QuadSettings | None = None,
    *,
    max_step: float | None = None,
) -> CorrelationTable:
    """Sample phi(tau) until |phi| < 1e-8 |phi(0)| at three consecutive nodes.

    Raises
    ------
    NonConvergence
        If phi has not decayed by ``TABLE_TAU_LIMIT`` ns, or a quadrature
        fails.
    """
    s = settings or DEFAULT_SETTINGS
    b_factor = displacement_B(bath, s)
    taus = [0.0]
    phis = [correlation_phi(bath, 0.0, s)]
    threshold = TABLE_DECAY * abs(phis[0])
    settle = 10.0 / bath.omega_c
    quiet = 0
    while True:
        tau = taus[-1] + table_grid_step(taus[-1], bath.omega_c, max_step)
        if tau > TABLE_TAU_LIMIT:
            raise NonConvergence(
                f"phi(tau) has not decayed to {TABLE_DECAY:g} of phi(0) by "
                f"{TABLE_TAU_LIMIT} ns (T={bath.temperature} K)"
            )
        phi = correlation_phi(bath, tau, s) if threshold > 0 else 0j
        taus.append(tau)
        phis.append(phi)
        quiet = quiet + 1 if abs(phi) < threshold or threshold == 0 else 0
        if tau >= settle and quiet >= 3:
            break
    tau_grid = np.array(taus)
    return CorrelationTable(
        tau_grid=tau_grid,
        phi_values=np.array(phis),
        decay_scale=tau_grid[-1] / s.tail_cutoff_factor,
        built_for=bath,
        b_factor=b_factor,
    )
