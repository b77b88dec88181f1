import math
import warnings
from dataclasses import replace

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dressed_rf.dressed import (
    REFERENCE_DRIVE,
    DriveConfig,
    Spectrum,
    TransitionKind,
    coupling_g_n,
    coupling_matrix,
    coupling_matrix_element,
    oscillator_phi,
    selection_rule,
    spectrum_components,
    spectrum_Ld,
    weight_density,
)
from dressed_rf.engine import GridSpec, peak_analysis
from dressed_rf.quadrature import QuadSettings, integrate_finite

OMEGA, G, GAMMA = REFERENCE_DRIVE.omega_rabi_half, REFERENCE_DRIVE.g_half, REFERENCE_DRIVE.gamma_rad


def _mp_phi(n, x):
    mp.mp.dps = 60
    x = mp.mpf(x)
    norm = mp.sqrt(mp.sqrt(2 * mp.pi) * mp.mpf(2) ** n * mp.factorial(n))
    return mp.hermite(n, x) * mp.exp(-x * x / 2) / norm


# -- oscillator functions -----------------------------------------------------

def test_oscillator_phi_simple_values():
    assert oscillator_phi(0, 0.0) == pytest.approx((2 * math.pi) ** -0.25, rel=1e-15)
    assert oscillator_phi(0, 0.0) == pytest.approx(0.63161878, rel=1e-8)
    assert oscillator_phi(1, 0.0) == 0.0
    with pytest.raises(ValueError):
        oscillator_phi(-1, 0.0)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 40, 101, 1000])
def test_oscillator_phi_against_arbitrary_precision(n):
    xs = [0.0, 0.37, -1.9, 4.4, 0.5 * math.sqrt(2 * n + 1), math.sqrt(2 * n + 1) + 1.0]
    for x in xs:
        ref = float(_mp_phi(n, x))
        got = oscillator_phi(n, x)
        assert got == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_oscillator_phi_40_at_origin():
    # H_40(0) = 40!/20!, even n
    mp.mp.dps = 60
    ref = mp.factorial(40) / mp.factorial(20) / mp.sqrt(mp.sqrt(2 * mp.pi) * mp.mpf(2) ** 40 * mp.factorial(40))
    assert oscillator_phi(40, 0.0) == pytest.approx(float(ref), rel=1e-10)


def test_oscillator_phi_high_order_is_finite():
    x = np.array([0.0, 1.0, 50.0, 141.0, 200.0])
    v = oscillator_phi(10_000, x)
    assert np.all(np.isfinite(v))
    assert abs(v[-1]) < 1e-100  # far beyond the turning point sqrt(20001)
    assert float(_mp_phi(10_000, 1.0)) == pytest.approx(v[1], rel=1e-8)


def test_oscillator_orthogonality():
    x = np.linspace(-16, 16, 32_001)
    ns = [0, 1, 2, 3, 4, 5, 40]
    phis = {n: oscillator_phi(n, x) for n in ns}
    for m in ns:
        for n in ns:
            overlap = np.trapezoid(phis[m] * phis[n], x)
            # the sqrt(2 pi) normalisation gives delta_mn / sqrt 2
            assert overlap == pytest.approx((m == n) / math.sqrt(2), abs=1e-8)


@pytest.mark.parametrize("M", [0, 1, 5, 40])
def test_weight_density_normalised(M):
    # +/- 4 sqrt(2M+1) would drop a 6e-5 Gaussian tail at M = 0
    edge = math.sqrt(2) * math.sqrt(2 * M + 1) + 8.0
    res = integrate_finite(lambda lam: weight_density(M, lam), -edge, edge,
                           QuadSettings(rel_tol=1e-12, abs_tol=1e-15), max_panel=math.pi / math.sqrt(2 * M + 1))
    assert res.value == pytest.approx(1.0, abs=1e-8)


def test_weight_density_ground_state_and_support():
    assert weight_density(0, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-14)
    assert weight_density(0, 0.0) == pytest.approx(0.39894, abs=1e-5)
    lam = np.linspace(15.0, 40.0, 200)
    assert np.all(weight_density(40, lam) < 1e-6)
    assert np.all(weight_density(40, np.linspace(-20, 20, 101)) >= 0)


# -- weak-field coupling ------------------------------------------------------

def test_coupling_strength():
    assert coupling_g_n(REFERENCE_DRIVE) == pytest.approx(2 * math.pi / (2 * math.sqrt(40)), rel=1e-14)
    assert coupling_g_n(REFERENCE_DRIVE) == pytest.approx(0.4967, abs=1e-4)
    assert abs(coupling_g_n(replace(REFERENCE_DRIVE, theta=0.0))) == 0.0
    assert coupling_g_n(replace(REFERENCE_DRIVE, M=10**8)) < 1e-3


def test_coupling_matrix_elements():
    g = 0.7
    assert coupling_matrix_element(2, 0, 1, g) == -g
    assert coupling_matrix_element(1, 0, 1, g) == g
    assert coupling_matrix_element(1, 4, 3, g) == pytest.approx(2 * g)
    assert coupling_matrix_element(1, 4, 5, g) == pytest.approx(math.sqrt(5) * g)
    for m in (0, 2, 4, 7):
        assert coupling_matrix_element(1, 4, m, g) == 0.0
    with pytest.raises(ValueError):
        coupling_matrix_element(3, 0, 1, g)
    with pytest.raises(ValueError):
        coupling_matrix_element(1, -1, 0, g)


@pytest.mark.parametrize("i", [1, 2])
def test_truncated_coupling_eigenvectors(i):
    """Eigenvectors of the K x K truncation sample phi_n at the eigenvalue."""
    K = 200
    mat = coupling_matrix(i, K)
    assert np.array_equal(mat, mat.T)
    assert np.count_nonzero(np.triu(mat, 2)) == 0
    vals, vecs = np.linalg.eigh(mat)
    interior = np.abs(vals) < 0.7 * np.max(np.abs(vals))
    assert interior.sum() > 100
    sign = -((-1) ** i)
    n = np.arange(K)
    x = sign * vals[interior] / math.sqrt(2)
    ref = np.array([oscillator_phi(int(m), x) for m in n])
    ref /= np.linalg.norm(ref, axis=0)
    v = vecs[:, interior]
    v = v * np.sign(np.sum(v * ref, axis=0))
    assert np.max(np.abs(v - ref)) < 1e-3


# -- selection rules ----------------------------------------------------------

def test_selection_rule_examples():
    side = selection_rule(1, 0.3, 2, -0.3)
    assert side.kind is TransitionKind.SIDEBAND and side.sign == 1 and side.amplitude == 0.5
    centre = selection_rule(1, 0.3, 1, 0.3)
    assert centre.kind is TransitionKind.CENTRAL and centre.sign == 1
    assert selection_rule(1, 0.3, 2, 0.3).kind is TransitionKind.FORBIDDEN
    assert selection_rule(2, 0.3, 2, 0.3).sign == -1
    assert selection_rule(2, 0.3, 1, -0.3).sign == -1
    assert selection_rule(2, 0.3, 2, 0.4).amplitude == 0.0
    with pytest.raises(ValueError):
        selection_rule(0, 0.0, 1, 0.0)


@settings(max_examples=50, deadline=None)
@given(i=st.sampled_from([1, 2]), j=st.sampled_from([1, 2]),
       lam=st.floats(-20, 20), lam2=st.floats(-20, 20))
def test_selection_rule_properties(i, j, lam, lam2):
    t = selection_rule(i, lam, j, lam2)
    if t.kind is TransitionKind.FORBIDDEN:
        assert t.amplitude == 0
    else:
        assert abs(t.amplitude) == 0.5
    if i != j:
        assert t.kind is not TransitionKind.CENTRAL
    else:
        assert t.kind is not TransitionKind.SIDEBAND


# -- drive configuration ------------------------------------------------------

def test_drive_validation():
    with pytest.raises(ValueError):
        DriveConfig(0.0)
    with pytest.raises(ValueError):
        DriveConfig(1.0, g_half=-1.0)
    with pytest.raises(ValueError):
        DriveConfig(1.0, gamma_rad=0.0)
    with pytest.raises(ValueError):
        DriveConfig(10.0, g_half=3.0, M=0)
    with pytest.warns(RuntimeWarning, match="validity"):
        DriveConfig(5.0, g_half=6.0, gamma_rad=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        DriveConfig(5 * math.pi, 2 * math.pi)
    assert not REFERENCE_DRIVE.single().double and REFERENCE_DRIVE.double


# -- spectrum -----------------------------------------------------------------

def _mollow(gamma=GAMMA, points=4001):
    drive = REFERENCE_DRIVE.single()
    return spectrum_Ld(drive, gamma, OMEGA, 0.0, GridSpec.around(drive, points).array())


def test_mollow_limit_peaks():
    spec = _mollow()
    step = spec.detunings[1] - spec.detunings[0]
    report = peak_analysis(spec)
    left, centre, right = report.peaks
    for peak, pos in zip(report.peaks, (-2 * OMEGA, 0.0, 2 * OMEGA)):
        assert abs(peak.maximum_at - pos) <= step
    assert centre.hwhm == pytest.approx(GAMMA / 2, rel=0.02)
    assert left.hwhm == pytest.approx(3 * GAMMA / 4, rel=0.02)
    assert right.hwhm == pytest.approx(3 * GAMMA / 4, rel=0.02)
    assert centre.height / right.height == pytest.approx(6.0, rel=1e-2)


def test_mollow_heights_analytic():
    spec = spectrum_Ld(REFERENCE_DRIVE.single(), GAMMA, OMEGA, 0.0, np.array([0.0, 2 * OMEGA]))
    pre = GAMMA / (4 * math.pi)
    # central 2/Gamma, sideband 1/(3 Gamma), each up to the other lines' tails
    assert spec.values[0] == pytest.approx(pre * 2 / GAMMA, rel=1e-2)
    assert spec.values[1] == pytest.approx(pre / (3 * GAMMA), rel=2e-2)


def test_area_ratio_of_components():
    """Central : both sidebands = pi : pi/2, independent of widths and splitting."""
    for gamma, w, g in ((GAMMA, OMEGA, G), (0.7, 2.0, 1.3), (5.0, OMEGA, 0.0)):
        drive = replace(REFERENCE_DRIVE, g_half=g) if g else REFERENCE_DRIVE.single()

        def f(u):
            d = np.tan(u)
            c, s = spectrum_components(drive, gamma, w, g, d)
            jac = 1 / np.cos(u) ** 2
            return np.stack([c * jac, s * jac], axis=1)

        res = integrate_finite(f, -math.pi / 2 + 1e-12, math.pi / 2 - 1e-12,
                               QuadSettings(rel_tol=1e-9), max_panel=0.01)
        central, sides = res.value
        assert central == pytest.approx(math.pi, rel=1e-6)
        assert sides == pytest.approx(math.pi / 2, rel=1e-6)


def test_double_drive_keeps_central_peak():
    grid = GridSpec.around(REFERENCE_DRIVE).array()
    single = spectrum_components(REFERENCE_DRIVE, GAMMA, OMEGA, 0.0, grid)[0]
    for g, M in ((G, 40), (G / 2, 10), (G, 200)):
        central, _ = spectrum_components(replace(REFERENCE_DRIVE, M=M), GAMMA, OMEGA, g, grid)
        assert np.array_equal(central, single)


def test_spectrum_symmetry_and_positivity():
    grid = GridSpec.around(REFERENCE_DRIVE).array()
    spec = spectrum_Ld(REFERENCE_DRIVE, 2.9, OMEGA * 0.9, G * 0.9, grid)
    np.testing.assert_allclose(spec.values, spec.values[::-1], rtol=1e-10)
    assert np.all(spec.values > 0)


@pytest.mark.parametrize("gamma", [0.5, 1.0, GAMMA])
def test_sideband_envelope_support(gamma):
    """Past 2 Omega +/- (2 G + 5 Gamma) the sideband is below 5 % of its maximum.

    Holds for Gamma >~ G / 12; for narrower lines the fan edge (2.0125 G at
    M = 40) and the tail of |phi_M|^2 beyond its turning point dominate.
    """
    drive = replace(REFERENCE_DRIVE, gamma_rad=gamma)
    _, full = spectrum_components(drive, gamma, OMEGA, G, np.linspace(2 * OMEGA - 3 * G, 2 * OMEGA + 3 * G, 3001))
    probe = np.array([2 * OMEGA - (2 * G + 5 * gamma), 2 * OMEGA + (2 * G + 5 * gamma)])
    _, edge = spectrum_components(drive, gamma, OMEGA, G, probe)
    assert np.all(edge < 0.05 * full.max())


def test_single_drive_is_small_g_limit():
    drive = replace(REFERENCE_DRIVE, g_half=GAMMA / 1000)
    grid = GridSpec.around(drive).array()
    double = spectrum_Ld(drive, GAMMA, OMEGA, drive.g_half, grid)
    single = spectrum_Ld(drive.single(), GAMMA, OMEGA, 0.0, grid)
    np.testing.assert_allclose(double.values, single.values, rtol=1e-2)


def test_spectrum_metadata_and_prefactor():
    grid = np.linspace(-5, 5, 11)
    a = spectrum_Ld(REFERENCE_DRIVE, 3.0, OMEGA, G, grid)
    b = spectrum_Ld(REFERENCE_DRIVE, 3.0, OMEGA, G, grid, prefactor_rate=3.0)
    assert a.metadata["prefactor_rate"] == GAMMA and b.metadata["prefactor_rate"] == 3.0
    np.testing.assert_allclose(b.values, a.values * 3.0 / GAMMA, rtol=1e-14)
    assert a.metadata["gamma_total"] == 3.0 and not a.normalized
    n = a.normalize()
    assert n.normalized and np.max(n.values) == 1.0


def test_spectrum_input_validation():
    with pytest.raises(ValueError):
        spectrum_Ld(REFERENCE_DRIVE, 0.0, OMEGA, G, np.zeros(3))
    with pytest.raises(ValueError):
        spectrum_Ld(REFERENCE_DRIVE, 1.0, OMEGA, G, np.array([0.0, np.inf]))


def test_spectrum_is_a_plain_container():
    s = Spectrum(np.arange(3.0), np.ones(3), {"normalized": True})
    assert s.normalized
    assert s.scaled(2.0, scale=2.0).metadata["scale"] == 2.0
