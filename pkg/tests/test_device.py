import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrgate.device import (
    MATERIALS,
    GratingSpec,
    KerrMedium,
    NodeCoupling,
    kerr_erased,
    kerr_index_shift,
    quarter_wave_center_reflectivity,
    reflectivity_spectrum,
    stack_matrix,
    stopband_width,
    vacuum_rabi_frequency,
    wavelength_grid,
)
from kerrgate.errors import DomainError, NoStopBandError, UndersamplingError

LAM = 1.24e-6


def base_coupling(**kw):
    args = dict(d=1e-28, V=(LAM / 2.2) ** 3, lambda1=LAM)
    args.update(kw)
    return NodeCoupling(**args)


def test_rabi_scaling_laws():
    w = vacuum_rabi_frequency(base_coupling())
    assert vacuum_rabi_frequency(base_coupling(d=2e-28)) == pytest.approx(2 * w, rel=1e-14)
    assert vacuum_rabi_frequency(base_coupling(V=4 * (LAM / 2.2) ** 3)) == pytest.approx(w / 2, rel=1e-14)
    assert vacuum_rabi_frequency(base_coupling(lambda1=4 * LAM)) == pytest.approx(w / 2, rel=1e-14)
    assert vacuum_rabi_frequency(base_coupling(), "si") == w


def test_rabi_independent_si_evaluation():
    # same expression rewritten in SI: d sqrt(8 pi^2 c / (hbar V lambda)) / sqrt(4 pi eps0)
    from scipy.constants import c, epsilon_0, hbar

    cp = base_coupling()
    si = cp.d / math.sqrt(4 * math.pi * epsilon_0) * math.sqrt(8 * math.pi**2 * c / (hbar * cp.V * cp.lambda1))
    assert vacuum_rabi_frequency(cp) == pytest.approx(si, rel=1e-6)


def test_rabi_validation():
    with pytest.raises(DomainError):
        NodeCoupling(d=0.0, V=1.0, lambda1=1.0)
    with pytest.raises(ValueError):
        vacuum_rabi_frequency(base_coupling(), "atomic")


def test_kerr_shift_examples():
    ln = MATERIALS["linbo3"]
    assert kerr_index_shift(ln, 1e11) == pytest.approx(8.33e-4, rel=1e-12)
    assert kerr_index_shift(ln, 1e10) == pytest.approx(8.33e-5, rel=1e-12)
    assert kerr_index_shift(ln, 0.0) == 0.0
    assert ln.n2 == pytest.approx(83.3e-20)
    with pytest.raises(DomainError):
        kerr_index_shift(ln, -1.0)
    with pytest.raises(DomainError):
        KerrMedium(n2=-1.0, n0=2.0)


def test_grating_validation():
    with pytest.raises(DomainError):
        GratingSpec(2.0, 2.2, 1e-7, 10)
    with pytest.raises(DomainError):
        GratingSpec(2.2, 2.0, -1e-7, 10)
    with pytest.raises(DomainError):
        GratingSpec(2.2, 2.0, 1e-7, 10, duty=1.5)
    g = GratingSpec.around(2.2, 0.04, LAM, 5)
    assert g.dn == pytest.approx(0.04)
    d_h, d_l = g.thicknesses
    assert d_h * g.n_high == pytest.approx(LAM / 4) and d_l * g.n_low == pytest.approx(LAM / 4)


def test_empty_stack():
    g = GratingSpec(2.2, 2.0, 1e-7, 0)
    lam = np.linspace(1e-6, 2e-6, 11)
    assert np.allclose(reflectivity_spectrum(g, lam).R, 0.0)
    sp = reflectivity_spectrum(g, lam, n_ambient=1.0, n_substrate=2.2)
    np.testing.assert_allclose(sp.R, ((1 - 2.2) / (1 + 2.2)) ** 2, rtol=1e-14)


def test_single_layer_against_airy_formula():
    # one slab between identical media: R = F sin^2(delta) / (1 + F sin^2(delta))
    n1, n0, d = 2.2, 1.5, 0.7e-6
    g = GratingSpec(n1, n1, d, 1, duty=1.0)
    lam = np.linspace(1.0e-6, 1.6e-6, 101)
    delta = 2 * math.pi * n1 * d / lam
    rho = (n1 - n0) / (n1 + n0)
    F = 4 * rho**2 / (1 - rho**2) ** 2
    airy = F * np.sin(delta) ** 2 / (1 + F * np.sin(delta) ** 2)
    np.testing.assert_allclose(reflectivity_spectrum(g, lam, n_ambient=n0).R, airy, atol=1e-13)


@pytest.mark.parametrize("N", [1, 10, 100])
def test_band_center_closed_form(N):
    g = GratingSpec.around(2.2, 0.04, LAM, N)
    R = reflectivity_spectrum(g, [LAM]).R[0]
    assert R == pytest.approx(quarter_wave_center_reflectivity(g.n_high, g.n_low, N, g.n_low), abs=1e-9)


def test_band_center_closed_form_mismatched_media():
    g = GratingSpec.around(2.2, 0.3, LAM, 7)
    R = reflectivity_spectrum(g, [LAM], n_ambient=1.0, n_substrate=1.45).R[0]
    assert R == pytest.approx(quarter_wave_center_reflectivity(g.n_high, g.n_low, 7, 1.0, 1.45), abs=1e-12)


def test_unimodular_stack_outside_band():
    # pass-band wavelengths keep elements O(1), where det is numerically meaningful
    m = stack_matrix(GratingSpec.around(2.2, 0.04, LAM, 3000), np.array([1.15e-6, 1.2e-6, 1.3e-6, 1.35e-6]))
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    np.testing.assert_allclose(det, 1.0, atol=1e-9)


def test_deep_stop_band_no_overflow():
    # elements ~ (n_h/n_l)^N ~ 1e200 without rescaling
    sp = reflectivity_spectrum(GratingSpec.around(2.2, 0.5, LAM, 2000), [LAM, 1.01 * LAM])
    assert np.all(np.isfinite(sp.R)) and np.all(np.isfinite(sp.T))
    assert sp.R[0] == 1.0 and 0.0 <= sp.T[0] < 1e-300


def test_stopband_high_contrast():
    g = GratingSpec.around(2.2, 0.04, LAM, 200)
    sp = reflectivity_spectrum(g, np.linspace(LAM - 20e-9, LAM + 20e-9, 4001))
    width = stopband_width(sp)
    assert 5e-9 <= width <= 20e-9


def test_stopband_low_contrast_long_grating():
    g = GratingSpec.around(2.2, 1e-3, LAM, 3000)
    sp = reflectivity_spectrum(g, np.linspace(LAM - 1.5e-9, LAM + 1.5e-9, 3001))
    with pytest.raises(NoStopBandError):
        stopband_width(sp)  # peak R is ~0.77, never reaches 0.99
    width = stopband_width(sp, threshold=sp.R.max() / 2)
    assert 0.5e-9 / 3 <= width <= 3 * 0.5e-9


def test_stopband_errors():
    flat = reflectivity_spectrum(GratingSpec(2.2, 2.2, 5e-7, 100), np.linspace(1e-6, 1.5e-6, 101))
    with pytest.raises(NoStopBandError):
        stopband_width(flat)
    coarse = reflectivity_spectrum(GratingSpec.around(2.2, 0.04, LAM, 200), np.linspace(LAM - 20e-9, LAM + 20e-9, 9))
    with pytest.raises(UndersamplingError):
        stopband_width(coarse)


def test_low_contrast_T_monotone_and_extrapolates():
    T = [reflectivity_spectrum(GratingSpec.around(2.2, 1e-3, LAM, N), [LAM]).T[0] for N in (1000, 3000, 6000, 12000, 20000)]
    assert all(b < a for a, b in zip(T, T[1:]))
    assert T[-1] < 1e-6


def test_kerr_erasure_collapses_band():
    dn = kerr_index_shift(MATERIALS["linbo3"], 1e11)
    g = GratingSpec.around(2.2, dn, LAM, 3000)
    erased = kerr_erased(g, dn)
    assert erased.n_high == pytest.approx(erased.n_low, abs=1e-15)
    assert reflectivity_spectrum(g, [LAM]).R[0] > 0.5
    assert reflectivity_spectrum(erased, [LAM]).R[0] < 1e-3


def test_wavelength_grid_inclusive():
    grid = wavelength_grid(1.0e-6, 1.1e-6, 1e-8)
    assert len(grid) == 11 and grid[-1] == pytest.approx(1.1e-6)


@settings(max_examples=40, deadline=None)
@given(dn=st.floats(0.0, 0.5), N=st.integers(0, 400), lam=st.floats(0.8e-6, 2.0e-6), amb=st.floats(1.0, 3.0))
def test_lossless_property(dn, N, lam, amb):
    sp = reflectivity_spectrum(GratingSpec.around(2.2, dn, LAM, N), [lam, 1.01 * lam], n_ambient=amb)
    assert np.all(np.abs(sp.R + sp.T - 1) <= 1e-12)
    assert np.all((sp.R >= 0) & (sp.R <= 1 + 1e-12))
