import math

import mpmath as mp

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from kerrgate.errors import DomainError, TruncationError
from kerrgate.modes import (
    CavityGeometry,
    eigenmode,
    overlap,
    overlaps,
    population_spectrum,
    relative_fwhm,
    spectrum_for_plot,
)


def quad_overlap(ratio, s0, s):
    # definition of the projection, integrated on u = z/l0
    val, _ = quad(lambda u: 2 / math.sqrt(ratio) * math.sin(math.pi * s * u / ratio) * math.sin(math.pi * s0 * u),
                  0, 1, epsabs=1e-13, epsrel=1e-10, limit=400)
    return val


def test_eigenmode_examples():
    assert eigenmode(1, 2.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert eigenmode(3, 1.0, 0.0) == 0.0
    assert eigenmode(2, 1.0, 0.25) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert eigenmode(4, 3.0, 3.0) == 0.0


@pytest.mark.parametrize("args", [(1, 1.0, -0.1), (1, 1.0, 1.5), (1, 0.0, 0.0), (0, 1.0, 0.5), (1.5, 1.0, 0.5)])
def test_eigenmode_domain_errors(args):
    with pytest.raises(DomainError):
        eigenmode(*args)


@pytest.mark.parametrize("L", [1e-6, 1.0, 37.5])
def test_eigenmode_orthonormal(L):
    z = np.linspace(0, L, 20001)
    h = L / 20000
    w = np.ones_like(z)
    w[1:-1:2], w[2:-1:2] = 4, 2
    w *= h / 3
    modes = np.array([eigenmode(s, L, z) for s in range(1, 51)])
    gram = (modes * w) @ modes.T
    assert np.max(np.abs(gram - np.eye(50))) < 1e-9


def test_geometry_validation():
    with pytest.raises(DomainError):
        CavityGeometry(l0=1.0, l=0.5, n=2.2, s0=1)
    with pytest.raises(DomainError):
        CavityGeometry(l0=1.0, l=2.0, n=0.5, s0=1)
    with pytest.raises(DomainError):
        CavityGeometry(l0=1.0, l=2.0, n=2.2, s0=0)
    g = CavityGeometry.from_wavelength(10)
    assert g.l0 == pytest.approx(10 * 1.24e-6 / 4.4)
    assert g.s_r == pytest.approx(2000)


def test_overlap_identity_geometry():
    g = CavityGeometry(1.0, 1.0, 2.2, 3)
    assert overlap(g, 3) == 1.0
    assert all(overlap(g, s) == 0.0 for s in (1, 2, 4, 5, 17))


def test_overlap_resonant_and_quadrature_values():
    g = CavityGeometry(1.0, 200.0, 2.2, 1)
    assert abs(overlap(g, 200)) == pytest.approx(math.sqrt(1 / 200), abs=1e-12)
    # mpmath quadrature, 30 digits
    assert overlap(g, 57) == pytest.approx(0.0382375570380035779832426337828, abs=1e-14)


@pytest.mark.parametrize("ratio", [2.0, 7.5, 200.0])
@pytest.mark.parametrize("s0", [1, 2, 5, 10])
def test_overlap_matches_quadrature_sampled(ratio, s0):
    g = CavityGeometry(1.0, ratio, 2.2, s0)
    s_top = int(4 * g.s_r)
    rng = np.random.default_rng(s0 * 1000 + int(ratio * 2))
    picks = sorted(set(rng.integers(1, s_top + 1, size=60).tolist()) | {1, s_top})
    closed = overlaps(g, s_top)
    for s in picks:
        assert closed[s - 1] == pytest.approx(quad_overlap(ratio, s0, s), abs=1e-9)


def test_overlap_continuous_through_resonance():
    g = CavityGeometry(1.0, 200.0, 2.2, 1)
    limit = math.sqrt(1 / 200)
    # closed form evaluated off-integer on either side brackets the limit
    from kerrgate.modes import _overlap_array

    lo, hi = _overlap_array(g, np.array([200 * (1 - 1e-6), 200 * (1 + 1e-6)]))
    assert min(lo, hi) < limit < max(lo, hi)
    assert abs(lo - limit) < 1e-7 and abs(hi - limit) < 1e-7


def test_population_identity():
    sp = population_spectrum(CavityGeometry(1.0, 1.0, 2.2, 3), 10)
    assert sp.populations[2] == 1.0
    assert np.count_nonzero(sp.populations) == 1


@pytest.mark.parametrize("s0", [1, 10])
def test_population_auto_parseval(s0):
    sp = population_spectrum(CavityGeometry.from_wavelength(s0))
    assert 1 - 1e-8 <= sp.total <= 1.0
    assert np.all(sp.populations >= 0)
    assert sp.s_max >= 4 * sp.geometry.s_r


def test_population_truncation_error():
    with pytest.raises(TruncationError):
        population_spectrum(CavityGeometry.from_wavelength(10), cap=20000)


def test_population_bad_smax():
    with pytest.raises(DomainError):
        population_spectrum(CavityGeometry.from_wavelength(1), 0)


def test_fwhm_narrows_with_s0():
    widths = [relative_fwhm(population_spectrum(CavityGeometry.from_wavelength(s0))) for s0 in range(1, 11)]
    assert all(b < a for a, b in zip(widths, widths[1:]))


def eq5_population(ratio, s0, s):
    # the printed population formula, evaluated literally at 30 digits with l0 = 1
    mp.mp.dps = 30
    l0, l = mp.mpf(1), mp.mpf(ratio)
    if s == s0 * ratio:
        return l0 / l  # 0/0 in the printed form; its limit
    num = 2 * (-1) ** s0 * s0 * mp.sin(mp.pi * l0 * s / l)
    den = (1 / l) ** mp.mpf(1.5) * mp.sqrt(1 / l0) * (mp.pi * l**2 * s0**2 - mp.pi * l0**2 * s**2)
    return (num / den) ** 2


def test_populations_match_printed_formula():
    sp = population_spectrum(CavityGeometry(1.0, 200.0, 2.2, 1), 800)
    for s in (1, 57, 150, 167, 199, 201, 333, 799):
        assert sp.populations[s - 1] == pytest.approx(float(eq5_population(200, 1, s)), rel=1e-12)


def test_spectrum_for_plot():
    sp = population_spectrum(CavityGeometry(1.0, 1.0, 2.2, 3), 10)
    s, v = spectrum_for_plot(sp, "max1")
    assert list(s[v != 0]) == [3] and v[2] == 1.0
    sp = population_spectrum(CavityGeometry.from_wavelength(1))
    s, v = spectrum_for_plot(sp, "max1")
    # argmax of the printed formula: the 2 s0/(x + s0) envelope pulls the peak below s_r = 200
    brute = max(range(100, 301), key=lambda k: eq5_population(200, 1, k))
    assert brute == 167
    assert v.max() == 1.0 and s[np.argmax(v)] == brute
    s, v = spectrum_for_plot(sp, "raw")
    assert np.array_equal(v, sp.populations)
    with pytest.raises(ValueError):
        spectrum_for_plot(sp, "area")


@settings(max_examples=40, deadline=None)
@given(ratio=st.floats(1.0, 50.0), s0=st.integers(1, 6))
def test_parseval_bounds_property(ratio, s0):
    sp = population_spectrum(CavityGeometry(1.0, ratio, 1.5, s0))
    assert 1 - 1e-8 <= sp.total <= 1.0 + 1e-15


@settings(max_examples=60, deadline=None)
@given(ratio=st.floats(1.0, 300.0), s0=st.integers(1, 10), frac=st.floats(0.0, 1.0))
def test_overlap_vs_quadrature_property(ratio, s0, frac):
    g = CavityGeometry(1.0, ratio, 1.5, s0)
    s = 1 + int(frac * 4 * g.s_r)
    assert overlap(g, s) == pytest.approx(quad_overlap(ratio, s0, s), abs=1e-9)
