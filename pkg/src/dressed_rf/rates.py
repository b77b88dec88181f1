"""
Phonon damping rates of the driven dot: weak-coupling, single-phonon
polaron and full polaron, plus the renormalised Rabi frequencies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bath import (
    BathParams,
    CorrelationTable,
    build_correlation_table,
    displacement_B,
    kernel_lambda_x,
    kernel_lambda_y,
    spectral_density,
    thermal_factor,
)
from .dressed import DriveConfig
from .errors import naming
from .quadrature import DEFAULT_SETTINGS, QuadSettings, fourier_half_transform

__all__ = [
    "RateModel",
    "RateSet",
    "rate_weak_coupling",
    "renormalized_rabi",
    "rate_one_phonon",
    "response_K",
    "rate_gamma_y",
    "rate_gamma_z",
    "rate_full_polaron",
    "full_polaron_explicit",
    "rate_set",
]


class RateModel(enum.Enum):
    WEAK = "weak"
    ONE_PHONON = "onephonon"
    FULL_POLARON = "polaron"

    @classmethod
    def parse(cls, text: str) -> "RateModel":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown rate model {text!r}; expected one of {names}") from None


@dataclass(frozen=True)
class RateSet:
    """Damping rate of one model at one temperature (angular units).

    ``gamma_y`` / ``gamma_z`` are only set for the full polaron model.
    ``shifts`` holds the imaginary parts of the response functions, which
    would shift the lines but are not applied to any spectrum.
    """

    model: RateModel
    temperature: float
    gamma_phonon: float
    omega_r: float
    g_r: float
    b_factor: float
    gamma_y: float | None = None
    gamma_z: float | None = None
    shifts: dict = field(default_factory=dict)


def rate_weak_coupling(bath: BathParams, omega_rabi: float) -> float:
    """(pi/2) J(Omega) coth(hbar Omega / 2 k_B T) at the bare Rabi frequency."""
    if not omega_rabi > 0:
        raise ValueError("omega_rabi must be > 0")
    return 0.5 * math.pi * spectral_density(bath, omega_rabi) * thermal_factor(bath, omega_rabi)


def renormalized_rabi(bath: BathParams, omega: float, settings: QuadSettings | None = None) -> float:
    if omega < 0:
        raise ValueError("omega must be >= 0")
    return omega * displacement_B(bath, settings)


def rate_one_phonon(bath: BathParams, omega_rabi: float, settings: QuadSettings | None = None) -> float:
    """The weak-coupling closed form evaluated at Omega_r = Omega B."""
    return rate_weak_coupling(bath, renormalized_rabi(bath, omega_rabi, settings))


_KERNELS = {"x": kernel_lambda_x, "y": kernel_lambda_y}


def response_K(
    table: CorrelationTable,
    kernel: str,
    omega: float,
    settings: QuadSettings | None = None,
) -> complex:
    """K_l(omega) = int_0^inf exp(i omega tau) Lambda_l(tau) dtau, l in {x, y}.

    The integral stops at the end of the table; the kernel magnitude there
    is taken as the absolute tolerance floor, since the table itself was cut
    at that level.
    """
    try:
        lam = _KERNELS[kernel]
    except KeyError:
        raise ValueError(f"kernel must be 'x' or 'y', got {kernel!r}") from None
    bath = table.built_for
    s = settings or DEFAULT_SETTINGS

    def f(tau):
        return lam(bath, table, tau)

    floor = abs(complex(f(table.tau_max))) * (1 + 1e-9)
    s = replace(s, abs_tol=max(s.abs_tol, floor))
    with naming(f"K_{kernel}(omega={omega:.6g}) at T={bath.temperature:g} K"):
        res = fourier_half_transform(f, omega, table.tau_max / s.tail_cutoff_factor, s)
    return complex(res.value)


def _gammas(table, omega_rabi, settings):
    """gamma_x(0), gamma_y(+Omega_r), gamma_y(-Omega_r) and the raw K values."""
    omega_r = omega_rabi * table.b_factor
    kx0 = response_K(table, "x", 0.0, settings)
    kyp = response_K(table, "y", omega_r, settings)
    kym = response_K(table, "y", -omega_r, settings)
    return 2 * kx0.real, 2 * kyp.real, 2 * kym.real, (kx0, kyp, kym)


def rate_gamma_y(bath: BathParams, table: CorrelationTable, omega_rabi: float,
                 settings: QuadSettings | None = None) -> float:
    """(Omega^2 / 2) gamma_x(0); bare Omega because Lambda_x carries B^2."""
    if table.built_for != bath:
        raise ValueError("correlation table was built for a different bath")
    gx0 = 2 * response_K(table, "x", 0.0, settings).real
    return 0.5 * omega_rabi**2 * gx0


def rate_gamma_z(bath: BathParams, table: CorrelationTable, omega_rabi: float,
                 settings: QuadSettings | None = None) -> float:
    """(Omega^2 / 4)(gamma_y(Omega_r) + gamma_y(-Omega_r) + 2 gamma_x(0))."""
    if table.built_for != bath:
        raise ValueError("correlation table was built for a different bath")
    gx0, gyp, gym, _ = _gammas(table, omega_rabi, settings)
    return 0.25 * omega_rabi**2 * (gyp + gym + 2 * gx0)


def rate_full_polaron(
    bath: BathParams,
    table: CorrelationTable,
    omega_rabi: float,
    settings: QuadSettings | None = None,
    *,
    g_half: float = 0.0,
) -> RateSet:
    """Full polaron rate Gamma_y + Gamma_z, sharing one set of response functions."""
    if table.built_for != bath:
        raise ValueError("correlation table was built for a different bath")
    gx0, gyp, gym, (kx0, kyp, kym) = _gammas(table, omega_rabi, settings)
    gamma_y = 0.5 * omega_rabi**2 * gx0
    gamma_z = 0.25 * omega_rabi**2 * (gyp + gym + 2 * gx0)
    b = table.b_factor
    return RateSet(
        model=RateModel.FULL_POLARON,
        temperature=bath.temperature,
        gamma_phonon=gamma_y + gamma_z,
        omega_r=omega_rabi * b,
        g_r=g_half * b,
        b_factor=b,
        gamma_y=gamma_y,
        gamma_z=gamma_z,
        shifts={"Kx(0)": kx0.imag, "Ky(+Omega_r)": kyp.imag, "Ky(-Omega_r)": kym.imag},
    )


def full_polaron_explicit(bath: BathParams, table: CorrelationTable, omega_rabi: float,
                          settings: QuadSettings | None = None) -> float:
    """Gamma_p from exponentials of phi directly, with the Omega_r^2 prefactor.

    Independent of the Lambda kernels; used to cross-check
    :func:`rate_full_polaron`.
    """
    if table.built_for != bath:
        raise ValueError("correlation table was built for a different bath")
    s = settings or DEFAULT_SETTINGS
    omega_r = omega_rabi * table.b_factor
    decay = table.tau_max / s.tail_cutoff_factor

    def odd(tau):
        p = table(tau)
        return np.exp(p) - np.exp(-p)

    def even(tau):
        p = table(tau)
        return np.exp(p) + np.exp(-p) - 2.0

    def floored(f):
        return replace(s, abs_tol=max(s.abs_tol, abs(complex(f(table.tau_max))) * (1 + 1e-9)))

    plus = fourier_half_transform(odd, omega_r, decay, floored(odd)).value
    minus = fourier_half_transform(odd, -omega_r, decay, floored(odd)).value
    zero = fourier_half_transform(even, 0.0, decay, floored(even)).value
    return 0.25 * omega_r**2 * (np.real(plus) + np.real(minus) + 4 * np.real(zero))


def rate_set(
    model: RateModel,
    bath: BathParams,
    drive: DriveConfig,
    table: CorrelationTable | None = None,
    settings: QuadSettings | None = None,
) -> RateSet:
    """Rates for one model at ``bath.temperature``.

    The weak field G never enters a damping rate; it is only renormalised
    (polaron models) or passed through (weak coupling).
    """
    omega = drive.omega_rabi_half
    if model is RateModel.WEAK:
        return RateSet(model, bath.temperature, rate_weak_coupling(bath, omega),
                       omega_r=omega, g_r=drive.g_half, b_factor=1.0)
    if model is RateModel.ONE_PHONON:
        b = displacement_B(bath, settings)
        return RateSet(model, bath.temperature, rate_weak_coupling(bath, omega * b),
                       omega_r=omega * b, g_r=drive.g_half * b, b_factor=b)
    if model is RateModel.FULL_POLARON:
        if table is None:
            table = build_correlation_table(bath, settings)
        return rate_full_polaron(bath, table, omega, settings, g_half=drive.g_half)
    raise ValueError(f"unknown model {model!r}")
