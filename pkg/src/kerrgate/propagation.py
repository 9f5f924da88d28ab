"""Dispersive evolution of the released wavepacket and round-trip transfer fidelity.

The field in the common cavity is the mode sum

    E(z, t) = sum_s C_s F_s(z, l) exp(-i w_s t)

with the quadratic-dispersion frequencies of :func:`dispersive_frequency`.
D is taken in ps/(nm km) at every public entry point and converted once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft
from scipy.constants import c as C_LIGHT

from . import kernels
from .errors import DomainError, UndersamplingError
from .modes import (
    DEFAULT_LAMBDA1,
    DEFAULT_N,
    DEFAULT_RATIO,
    CavityGeometry,
    ModeSpectrum,
    eigenmode,
    population_spectrum,
)
from .units import PS_PER_NM_KM


@dataclass(frozen=True)
class DispersionParams:
    geometry: CavityGeometry
    D: float = 0.0  # ps/(nm km)

    @property
    def D_si(self) -> float:
        """D in s/m^2."""
        return self.D * PS_PER_NM_KM


@dataclass(frozen=True, eq=False)
class FieldState:
    z: np.ndarray
    values: np.ndarray
    t: float

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def roundtrip_time(geometry: CavityGeometry) -> float:
    return 2.0 * geometry.l * geometry.n / C_LIGHT


def dispersive_frequency(params: DispersionParams, s):
    """w_s = (pi c/n) (s/l + (c D/n^2) (1 - s/s_r)^2) in rad/s; accepts scalar or array s."""
    g = params.geometry
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 1):
        raise DomainError("mode index must be >= 1")
    detune = 1.0 - s_arr / g.s_r
    w = (math.pi * C_LIGHT / g.n) * (s_arr / g.l + (C_LIGHT * params.D_si / g.n**2) * detune * detune)
    return float(w) if w.ndim == 0 else w


def _roundtrip_excess_phase(params: DispersionParams, s):
    # w_s * t_rt - 2 pi s, kept separate so the exact 2 pi s never enters floating point
    g = params.geometry
    detune = 1.0 - np.asarray(s, dtype=float) / g.s_r
    return 2.0 * math.pi * g.l * (C_LIGHT * params.D_si / g.n**2) * detune * detune


def _check_pair(params: DispersionParams, spectrum: ModeSpectrum):
    if spectrum.geometry != params.geometry:
        raise DomainError("spectrum was computed for a different geometry")


def _mode_coefficients(params, spectrum, t):
    w = dispersive_frequency(params, spectrum.modes)
    return spectrum.amplitudes * np.exp(-1j * (w * t))


def field_snapshot(params: DispersionParams, spectrum: ModeSpectrum, t: float, n_z: int) -> FieldState:
    """Field on ``n_z`` uniformly spaced points of [0, l] at time ``t``.

    Uniform sampling makes the mode sum a type-I discrete sine transform.
    """
    _check_pair(params, spectrum)
    n_z = int(n_z)
    if n_z < 2 * spectrum.s_max + 1:
        raise UndersamplingError(f"n_z={n_z} < 2*s_max+1={2 * spectrum.s_max + 1}")
    g = params.geometry
    z = np.linspace(0.0, g.l, n_z)
    a = np.zeros(n_z - 2, dtype=complex)
    a[: spectrum.s_max] = _mode_coefficients(params, spectrum, t)
    # dst type 1: y[k] = 2 sum_n x[n] sin(pi (k+1)(n+1) / (N+1)) with N+1 = n_z-1
    scale = 0.5 * math.sqrt(2.0 / g.l)
    values = np.zeros(n_z, dtype=complex)
    values[1:-1] = scale * (scipy.fft.dst(a.real, type=1) + 1j * scipy.fft.dst(a.imag, type=1))
    return FieldState(z, values, float(t))


def field_at(params: DispersionParams, spectrum: ModeSpectrum, z, t: float) -> np.ndarray:
    """Field at arbitrary positions by direct summation over the retained modes."""
    _check_pair(params, spectrum)
    g = params.geometry
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0) or np.any(z > g.l):
        raise DomainError("positions must lie in [0, l]")
    a = _mode_coefficients(params, spectrum, t)
    theta = math.pi * z / g.l
    scale = math.sqrt(2.0 / g.l)
    re = kernels.harmonic_sine_sum(np.ascontiguousarray(a.real), theta)
    im = kernels.harmonic_sine_sum(np.ascontiguousarray(a.imag), theta)
    return scale * (re + 1j * im)


def simpson_weights(n_intervals: int, h: float) -> np.ndarray:
    if n_intervals < 2 or n_intervals % 2:
        raise ValueError("composite Simpson needs an even number of intervals >= 2")
    w = np.ones(n_intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def grid_intervals(geometry: CavityGeometry, s_max: int) -> int:
    """Simpson intervals on [0, l0] at the density of a 4*s_max grid over [0, l]."""
    m = max(2, math.ceil(4 * s_max / geometry.ratio))
    return m + (m % 2)


@lru_cache(maxsize=16)
def _grid_projections(geometry: CavityGeometry, s_max: int, n_intervals: int) -> np.ndarray:
    # Q_s = Simpson integral over [0, l0] of F_s(z, l) E(z, 0); E(z, 0) = F_s0(z, l0)
    z = np.linspace(0.0, geometry.l0, n_intervals + 1)
    weights = simpson_weights(n_intervals, geometry.l0 / n_intervals)
    weights = weights * eigenmode(geometry.s0, geometry.l0, z) * math.sqrt(2.0 / geometry.l)
    q = kernels.harmonic_sine_project(weights, math.pi * z / geometry.l, s_max)
    q.setflags(write=False)
    return q


def roundtrip_fidelity(params: DispersionParams, spectrum: ModeSpectrum, method="spectral") -> float:
    """F = Re integral_0^l0 E(z, t_rt)^* E(z, 0) dz with t_rt = 2 l n / c.

    ``spectral`` evaluates Re sum_s C_s^2 exp(-i w_s t_rt) exactly for the retained
    modes; ``grid`` does composite-Simpson quadrature of the integral itself.
    """
    _check_pair(params, spectrum)
    phase = _roundtrip_excess_phase(params, spectrum.modes)
    if method == "spectral":
        return float(np.dot(spectrum.populations, np.cos(phase)))
    if method == "grid":
        q = _grid_projections(params.geometry, spectrum.s_max, grid_intervals(params.geometry, spectrum.s_max))
        # Re(E(t)^* E(0)) = sum_s C_s cos(phase_s) F_s E(0)
        return float(np.dot(spectrum.amplitudes * np.cos(phase), q))
    raise ValueError(f"unknown fidelity method {method!r}")


def fidelity_sweep(s0_values, D_values, ratio=DEFAULT_RATIO, lambda1=DEFAULT_LAMBDA1, n=DEFAULT_N,
                   method="spectral", s_max="auto"):
    """Rows (s0, D, F) ordered by s0 then D as given."""
    rows = []
    for s0 in s0_values:
        geometry = CavityGeometry.from_wavelength(s0, ratio=ratio, lambda1=lambda1, n=n)
        spectrum = population_spectrum(geometry, s_max)
        for D in D_values:
            F = roundtrip_fidelity(DispersionParams(geometry, D), spectrum, method)
            rows.append((s0, D, F))
    return rows


def max_tolerated_dispersion(rows, s0, threshold=0.99):
    """Largest swept D with F >= threshold for the given s0 (None if none qualifies)."""
    ok = [D for r_s0, D, F in rows if r_s0 == s0 and F >= threshold]
    return max(ok) if ok else None
