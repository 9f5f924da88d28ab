"""Device feasibility: vacuum Rabi frequency, Kerr index shift, Bragg stack reflectivity."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.constants import hbar as HBAR

from .errors import DomainError, NoStopBandError, UndersamplingError
from .units import C_M_TO_STATC_CM, CM2


@dataclass(frozen=True)
class NodeCoupling:
    d: float  # transition dipole, C m
    V: float  # mode volume, m^3
    lambda1: float  # transition wavelength, m

    def __post_init__(self):
        for name in ("d", "V", "lambda1"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")


def vacuum_rabi_frequency(coupling: NodeCoupling, units="cgs") -> float:
    """Omega_0 = d sqrt(8 pi^2 c / (hbar V lambda1)), evaluated in Gaussian units.

    The ``si`` variant returns the same number: an angular frequency is the same
    in either unit system, only the inputs need converting.
    """
    if units not in ("cgs", "si"):
        raise ValueError(f"units must be 'cgs' or 'si', got {units!r}")
    d = coupling.d * C_M_TO_STATC_CM  # statC cm
    V = coupling.V * 1e6  # cm^3
    lam = coupling.lambda1 * 1e2  # cm
    c = C_LIGHT * 1e2  # cm/s
    hbar = HBAR * 1e7  # erg s
    return d * math.sqrt(8.0 * math.pi**2 * c / (hbar * V * lam))


@dataclass(frozen=True)
class KerrMedium:
    n2: float  # m^2/W
    n0: float

    def __post_init__(self):
        if self.n2 < 0:
            raise DomainError("n2 must be non-negative")

    @classmethod
    def from_cm2_per_w(cls, n2, n0):
        return cls(n2=n2 * CM2, n0=n0)


MATERIALS = {
    "linbo3": KerrMedium.from_cm2_per_w(83.3e-16, 2.2),
}
MATERIALS["lithium_niobate"] = MATERIALS["linbo3"]


def kerr_index_shift(medium: KerrMedium, intensity: float) -> float:
    """Delta n = n2 I, with I in W/cm^2."""
    if intensity < 0:
        raise DomainError("intensity must be non-negative")
    return medium.n2 * (intensity / CM2)


@dataclass(frozen=True)
class GratingSpec:
    """N_periods repetitions of (high, low) layers; duty is the high-index fraction of a period."""

    n_high: float
    n_low: float
    period: float
    N_periods: int
    duty: float = 0.5

    def __post_init__(self):
        if not (self.n_high >= self.n_low >= 1):
            raise DomainError(f"need n_high >= n_low >= 1, got {self.n_high}, {self.n_low}")
        if not self.period > 0:
            raise DomainError("period must be positive")
        if int(self.N_periods) != self.N_periods or self.N_periods < 0:
            raise DomainError("N_periods must be a non-negative integer")
        if not 0 <= self.duty <= 1:
            raise DomainError("duty must lie in [0, 1]")

    @property
    def dn(self) -> float:
        return self.n_high - self.n_low

    @property
    def thicknesses(self):
        return self.duty * self.period, (1.0 - self.duty) * self.period

    @classmethod
    def quarter_wave(cls, n_high, n_low, design_wavelength, N_periods):
        d_h = design_wavelength / (4.0 * n_high)
        d_l = design_wavelength / (4.0 * n_low)
        return cls(n_high, n_low, d_h + d_l, N_periods, d_h / (d_h + d_l))

    @classmethod
    def around(cls, n_mean, dn, design_wavelength, N_periods):
        """Quarter-wave stack with indices n_mean +/- dn/2."""
        return cls.quarter_wave(n_mean + dn / 2.0, n_mean - dn / 2.0, design_wavelength, N_periods)


@dataclass(frozen=True, eq=False)
class ReflectivitySpectrum:
    wavelengths: np.ndarray
    R: np.ndarray
    T: np.ndarray


def kerr_erased(grating: GratingSpec, delta_n: float) -> GratingSpec:
    """Same layer geometry with the high-index layers lowered by ``delta_n``."""
    return replace(grating, n_high=max(grating.n_low, grating.n_high - delta_n))


DET_RESOLVABLE = 1e-6


def _layer_matrix(n, d, k0):
    delta = n * d * k0
    cs, sn = np.cos(delta), np.sin(delta)
    m = np.empty(k0.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = cs
    m[..., 0, 1] = 1j * sn / n
    m[..., 1, 0] = 1j * n * sn
    m[..., 1, 1] = cs
    return m


def _rescale(m, log_scale):
    # keep elements O(1); the stripped factor is carried in log form so deep
    # stop bands (elements ~ e^(kappa N)) neither overflow nor lose r
    s = np.max(np.abs(m), axis=(-2, -1))
    m, log_scale = m / s[..., None, None], log_scale + np.log(s)
    # the true stack is unimodular; pull the determinant back to 1 wherever the
    # scaled determinant is resolvable (pass band), otherwise rounding noise dominates
    det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    ok = np.abs(det) > DET_RESOLVABLE
    root = np.where(ok, np.sqrt(np.where(ok, det, 1.0)), 1.0)
    # a unimodular matrix needs no scale; zeroing it drops accumulated log rounding
    return m / root[..., None, None], np.where(ok, 0.0, log_scale)


def _matrix_power(m, n):
    out = np.broadcast_to(np.eye(2, dtype=complex), m.shape).copy()
    out_log = np.zeros(m.shape[:-2])
    base, base_log = m, np.zeros(m.shape[:-2])
    while n:
        if n & 1:
            out, out_log = _rescale(out @ base, out_log + base_log)
        n >>= 1
        if n:
            base, base_log = _rescale(base @ base, 2.0 * base_log)
    return out, out_log


def stack_matrix(grating: GratingSpec, wavelengths, with_scale=False):
    """Characteristic matrix of the whole stack; ``with_scale`` returns (matrix/e^L, L)."""
    k0 = 2.0 * math.pi / np.asarray(wavelengths, dtype=float)
    d_h, d_l = grating.thicknesses
    period = _layer_matrix(grating.n_high, d_h, k0) @ _layer_matrix(grating.n_low, d_l, k0)
    m, log_scale = _matrix_power(period, int(grating.N_periods))
    return (m, log_scale) if with_scale else m * np.exp(log_scale)[..., None, None]


def reflectivity_spectrum(grating: GratingSpec, wavelengths, n_ambient=None, n_substrate=None) -> ReflectivitySpectrum:
    """Normal-incidence transfer-matrix R and T of the stack.

    Ambient and exit media default to ``n_low``, i.e. a grating written into an
    otherwise uniform waveguide.
    """
    wavelengths = np.atleast_1d(np.asarray(wavelengths, dtype=float))
    if np.any(wavelengths <= 0):
        raise DomainError("wavelengths must be positive")
    n0 = grating.n_low if n_ambient is None else n_ambient
    ns = n0 if n_substrate is None else n_substrate
    m, log_scale = stack_matrix(grating, wavelengths, with_scale=True)
    b = n0 * m[..., 0, 0] + n0 * ns * m[..., 0, 1]
    cc = m[..., 1, 0] + ns * m[..., 1, 1]
    r = (b - cc) / (b + cc)
    # |t|^2 = |2 n0 / ((b + cc) e^L)|^2, underflows cleanly to 0
    T = (ns / n0) * np.exp(2.0 * (np.log(2.0 * n0) - np.log(np.abs(b + cc)) - log_scale))
    return ReflectivitySpectrum(wavelengths, np.abs(r) ** 2, T)


def wavelength_grid(start, stop, step):
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


def quarter_wave_center_reflectivity(n_high, n_low, N, n_ambient, n_substrate=None):
    """Closed-form band-centre R of a (HL)^N quarter-wave stack."""
    ns = n_ambient if n_substrate is None else n_substrate
    rho = (n_low / n_high) ** (2 * N)
    return ((n_ambient * rho - ns) / (n_ambient * rho + ns)) ** 2


def stopband_width(spectrum: ReflectivitySpectrum, threshold=0.99, center=None) -> float:
    """Width (m) of the contiguous band around ``center`` (default: the R maximum) with R >= threshold."""
    R, lam = spectrum.R, spectrum.wavelengths
    i = int(np.argmax(R)) if center is None else int(np.argmin(np.abs(lam - center)))
    if R[i] < threshold:
        raise NoStopBandError(f"max reflectivity {R[i]:.6g} below threshold {threshold}")
    lo = i
    while lo > 0 and R[lo - 1] >= threshold:
        lo -= 1
    hi = i
    while hi < R.size - 1 and R[hi + 1] >= threshold:
        hi += 1
    if hi - lo + 1 < 10:
        raise UndersamplingError(f"only {hi - lo + 1} samples inside the band; refine the wavelength grid")
    if lo == 0 or hi == R.size - 1:
        raise UndersamplingError("stop band not bracketed by the wavelength range")

    def cross(a, b):
        return lam[a] + (lam[b] - lam[a]) * (threshold - R[a]) / (R[b] - R[a])

    return cross(hi + 1, hi) - cross(lo - 1, lo)
