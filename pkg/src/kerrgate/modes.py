"""Isolated/common cavity eigenmodes and the mode-population spectrum of a released photon.

The isolated cavity occupies ``[0, l0]`` at the left end of the common cavity
``[0, l]``.  All lengths are in metres.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, TruncationError

DEFAULT_LAMBDA1 = 1.24e-6
DEFAULT_N = 2.2
DEFAULT_RATIO = 200.0
EPS_TRUNC = 1e-8
S_MAX_CAP = 1_000_000
# |1 - s/s_r| below this switches to the analytic resonant value
RESONANCE_RTOL = 1e-9


@dataclass(frozen=True)
class CavityGeometry:
    l0: float
    l: float
    n: float
    s0: int

    def __post_init__(self):
        if not self.l0 > 0:
            raise DomainError(f"l0 must be positive, got {self.l0}")
        if not self.l >= self.l0:
            raise DomainError(f"common cavity length l={self.l} shorter than l0={self.l0}")
        if not self.n >= 1:
            raise DomainError(f"refractive index must be >= 1, got {self.n}")
        if int(self.s0) != self.s0 or self.s0 < 1:
            raise DomainError(f"s0 must be a positive integer, got {self.s0}")
        object.__setattr__(self, "s0", int(self.s0))

    @property
    def ratio(self) -> float:
        return self.l / self.l0

    @property
    def s_r(self) -> float:
        """Common-cavity mode index resonant with the isolated mode (may be non-integer)."""
        return self.s0 * self.l / self.l0

    @classmethod
    def from_wavelength(cls, s0, ratio=DEFAULT_RATIO, lambda1=DEFAULT_LAMBDA1, n=DEFAULT_N):
        """Isolated cavity sized so mode ``s0`` is resonant at ``lambda1``: l0 = s0*lambda1/(2n)."""
        l0 = s0 * lambda1 / (2.0 * n)
        return cls(l0=l0, l=ratio * l0, n=n, s0=s0)


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    geometry: CavityGeometry
    s_max: int
    amplitudes: np.ndarray = field(repr=False)
    populations: np.ndarray = field(repr=False)

    @property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.s_max + 1)

    @property
    def total(self) -> float:
        return math.fsum(self.populations)


def eigenmode(s, L, z):
    """Normalised standing wave sqrt(2/L) sin(pi s z / L) on [0, L]."""
    if not L > 0:
        raise DomainError(f"cavity length must be positive, got {L}")
    if s < 1 or int(s) != s:
        raise DomainError(f"mode index must be a positive integer, got {s}")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0) or np.any(z_arr > L):
        raise DomainError(f"position outside [0, {L}]")
    # sin(pi*s) is ~1e-16, not 0; pin the walls exactly
    out = np.where((z_arr == 0) | (z_arr == L), 0.0, math.sqrt(2.0 / L) * np.sin(math.pi * s * z_arr / L))
    return float(out) if out.ndim == 0 else out


def _overlap_array(geometry: CavityGeometry, s: np.ndarray) -> np.ndarray:
    s0 = geometry.s0
    x = s / geometry.ratio
    delta = x - s0
    # (-1)^s0 sin(pi x) = sin(pi (x - s0)), which turns the closed form into a
    # sinc with no 0/0 at resonance and no cancellation near it
    c = 2.0 * s0 * math.sqrt(geometry.l0 / geometry.l) * np.sinc(delta) / (x + s0)
    k = np.rint(delta)
    c = np.where((k != 0) & (np.abs(delta - k) <= 1e-12 * np.maximum(1.0, np.abs(delta))), 0.0, c)
    resonant = np.abs(1.0 - x / s0) < RESONANCE_RTOL
    return np.where(resonant, math.sqrt(geometry.l0 / geometry.l), c)


def overlap(geometry: CavityGeometry, s: int) -> float:
    """Projection C_s = <F_s(., l) | F_s0(., l0)> of the isolated mode on common mode s.

    Closed form::

        C_s = 2 (-1)^s0 s0 sin(pi s l0 / l) l^(3/2) l0^(1/2) / (pi (l0^2 s^2 - l^2 s0^2))

    with the analytic value sqrt(l0/l) at s = s_r.
    """
    if s < 1 or int(s) != s:
        raise DomainError(f"mode index must be a positive integer, got {s}")
    return float(_overlap_array(geometry, np.array([float(s)]))[0])


def overlaps(geometry: CavityGeometry, s_max: int) -> np.ndarray:
    """C_s for s = 1..s_max."""
    return _overlap_array(geometry, np.arange(1, int(s_max) + 1, dtype=float))


def population_spectrum(geometry, s_max="auto", eps_trunc=EPS_TRUNC, cap=S_MAX_CAP) -> ModeSpectrum:
    """Mode populations W_s = C_s^2, s = 1..s_max.

    With ``s_max="auto"`` the truncation starts at ceil(4 s_r) and doubles until
    sum(W_s) >= 1 - eps_trunc; :class:`TruncationError` past ``cap``.
    """
    if s_max == "auto":
        n_modes = max(1, math.ceil(4 * geometry.s_r))
        while True:
            c = overlaps(geometry, n_modes)
            w = c * c
            if math.fsum(w) >= 1.0 - eps_trunc:
                break
            if n_modes >= cap:
                raise TruncationError(
                    f"sum W_s = {math.fsum(w):.12f} < 1 - {eps_trunc:g} at s_max cap {cap}"
                )
            n_modes = min(2 * n_modes, cap)
        return ModeSpectrum(geometry, n_modes, c, w)
    if int(s_max) != s_max or s_max < 1:
        raise DomainError(f"s_max must be a positive integer or 'auto', got {s_max!r}")
    c = overlaps(geometry, int(s_max))
    return ModeSpectrum(geometry, int(s_max), c, c * c)


def spectrum_for_plot(spectrum: ModeSpectrum, normalization="raw"):
    """(s, value) columns; ``max1`` rescales so the peak population is 1."""
    values = spectrum.populations
    if normalization == "max1":
        values = values / values.max()
    elif normalization != "raw":
        raise ValueError(f"unknown normalization {normalization!r}")
    return spectrum.modes, values


def relative_fwhm(spectrum: ModeSpectrum) -> float:
    """Full width at half maximum of W_s around its peak, in units of s/s_r."""
    w = spectrum.populations
    i = int(np.argmax(w))
    half = 0.5 * w[i]
    s = spectrum.modes.astype(float)

    def edge(step):
        j = i
        while 0 <= j + step < w.size and w[j + step] >= half:
            j += step
        k = j + step
        if not 0 <= k < w.size:
            return s[j]
        # linear interpolation between the last point above and first below
        return s[j] + (s[k] - s[j]) * (w[j] - half) / (w[j] - w[k])

    return (edge(1) - edge(-1)) / spectrum.geometry.s_r
