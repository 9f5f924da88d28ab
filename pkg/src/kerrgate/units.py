"""Unit-suffixed quantity parsing and the handful of conversions used across modules.

Quantities are written as ``<number><suffix>``, e.g. ``1.24um``, ``10ps_nm_km``,
``1e11W_cm2``.  Everything is converted to SI on the way in.
"""
import re

from .errors import UnitError

# 1 ps/(nm km) = 1e-12 s / (1e-9 m * 1e3 m)
PS_PER_NM_KM = 1e-6
# 1 C*m in statC*cm
C_M_TO_STATC_CM = 2.99792458e11
CM2 = 1e-4

_UNITS = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "μm": 1e-6, "nm": 1e-9},
    "dispersion": {"ps_nm_km": PS_PER_NM_KM, "s_m2": 1.0},
    "intensity": {"W_cm2": 1.0 / CM2, "W_m2": 1.0},
    "kerr": {"cm2_W": CM2, "m2_W": 1.0},
    "dipole": {"C_m": 1.0, "Cm": 1.0, "ea0": 1.602176634e-19 * 5.29177210903e-11},
    "volume": {"m3": 1.0, "cm3": 1e-6, "um3": 1e-18, "µm3": 1e-18, "μm3": 1e-18},
    "time": {"s": 1.0, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15},
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([^\s\d].*?)?\s*$")


def parse_quantity(text, kind, default_unit=None):
    """Parse ``text`` as a quantity of ``kind`` and return its SI value.

    A bare number is accepted only when ``default_unit`` is given.
    """
    if kind not in _UNITS:
        raise UnitError(f"unknown quantity kind {kind!r}")
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        if default_unit is None:
            raise UnitError(f"unitless {kind} value {text!r}; add a unit suffix")
        return float(text) * _UNITS[kind][default_unit]
    m = _NUMBER.match(str(text))
    if m is None:
        raise UnitError(f"cannot parse {kind} value {text!r}")
    value, suffix = float(m.group(1)), m.group(2)
    if suffix is None:
        if default_unit is None:
            raise UnitError(f"unitless {kind} value {text!r}; add a unit suffix")
        suffix = default_unit
    scale = _UNITS[kind].get(suffix)
    if scale is None:
        known = ", ".join(_UNITS[kind])
        raise UnitError(f"unknown {kind} unit {suffix!r} in {text!r} (expected one of: {known})")
    return value * scale
