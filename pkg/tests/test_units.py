import pytest

from kerrgate.errors import UnitError
from kerrgate.units import parse_quantity


@pytest.mark.parametrize("text,kind,expected", [
    ("1.24um", "length", 1.24e-6),
    ("1.24µm", "length", 1.24e-6),
    ("500 nm", "length", 5e-7),
    ("10ps_nm_km", "dispersion", 1e-5),
    ("1e11W_cm2", "intensity", 1e15),
    ("83.3e-16cm2_W", "kerr", 83.3e-20),
    ("1e-28C_m", "dipole", 1e-28),
    ("2ps", "time", 2e-12),
])
def test_parse(text, kind, expected):
    assert parse_quantity(text, kind) == pytest.approx(expected, rel=1e-14)


def test_unitless_rejected_without_default():
    with pytest.raises(UnitError):
        parse_quantity("1.24", "length")
    with pytest.raises(UnitError):
        parse_quantity(3.0, "dispersion")
    assert parse_quantity("3", "dispersion", default_unit="ps_nm_km") == pytest.approx(3e-6)


@pytest.mark.parametrize("text", ["1.24furlong", "abc", "um"])
def test_bad_units(text):
    with pytest.raises(UnitError):
        parse_quantity(text, "length")
