"""Simulation of Kerr-switched Bragg channels between cavity-coupled quantum nodes."""
from .kernels import BACKEND
from .modes import CavityGeometry, ModeSpectrum, eigenmode, overlap, population_spectrum, spectrum_for_plot
from .propagation import DispersionParams, FieldState, dispersive_frequency, field_snapshot, roundtrip_fidelity
from .device import GratingSpec, KerrMedium, NodeCoupling, kerr_index_shift, reflectivity_spectrum, vacuum_rabi_frequency
from .gates import RegisterState, builtin_protocols, computational_encode, computational_decode, exchange, pi_op, run_protocol

__version__ = "0.1.0"
