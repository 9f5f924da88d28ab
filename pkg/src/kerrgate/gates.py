"""Two-node "atom + cavity photon" register with exchange and inversion operators.

Basis configurations are tuples ``(atom1, n1, atom2, n2)`` with atoms ``"g"``/``"e"``.
Both operators permute basis configurations, so states stay normalised and
phases are never touched.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from types import MappingProxyType

from .errors import DomainError, PhotonCapError

N_MAX = 3
NORM_TOL = 1e-12
SUBSPACE_TOL = 1e-10

EXCHANGE, PI, PI1, PI2 = "exchange", "pi", "pi1", "pi2"
STEPS = (EXCHANGE, PI, PI1, PI2)
_STEP_ALIASES = {"exchange": EXCHANGE, "x": EXCHANGE, "<->": EXCHANGE, "↔": EXCHANGE,
                 "pi": PI, "π": PI, "pi1": PI1, "π1": PI1, "pi2": PI2, "π2": PI2}


def _check_config(cfg, n_max):
    a1, n1, a2, n2 = cfg
    if a1 not in "ge" or a2 not in "ge" or len(a1) != 1 or len(a2) != 1:
        raise DomainError(f"atom state must be 'g' or 'e': {cfg}")
    if min(n1, n2) < 0 or max(n1, n2) > n_max:
        raise PhotonCapError(f"photon number outside [0, {n_max}] in {label(cfg)}")
    return (a1, int(n1), a2, int(n2))


def label(cfg) -> str:
    """``("g", 1, "e", 0)`` -> ``"g1.e0"``."""
    a1, n1, a2, n2 = cfg
    return f"{a1}{n1}.{a2}{n2}"


def parse_label(text):
    try:
        left, right = text.split(".")
        return _check_config((left[0], int(left[1:]), right[0], int(right[1:])), N_MAX)
    except (ValueError, IndexError):
        raise DomainError(f"bad basis label {text!r}; expected e.g. 'g1.e0'") from None


@dataclass(frozen=True, eq=False)
class RegisterState:
    amplitudes: MappingProxyType
    n_max: int = N_MAX

    def __init__(self, amplitudes, n_max=N_MAX, normalize_check=True):
        clean = {}
        for cfg, amp in amplitudes.items():
            cfg = _check_config(tuple(cfg), n_max)
            amp = complex(amp)
            if amp != 0:
                clean[cfg] = clean.get(cfg, 0) + amp
        clean = {k: clean[k] for k in sorted(clean) if clean[k] != 0}
        if normalize_check:
            norm = math.fsum(abs(a) ** 2 for a in clean.values())
            if abs(norm - 1.0) > NORM_TOL:
                raise DomainError(f"state norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", MappingProxyType(clean))
        object.__setattr__(self, "n_max", n_max)

    @classmethod
    def basis(cls, a1, n1, a2, n2, n_max=N_MAX):
        return cls({(a1, n1, a2, n2): 1.0}, n_max)

    def norm(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amplitudes.values())

    def is_close(self, other, tol=1e-12) -> bool:
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self.amplitudes.get(k, 0) - other.amplitudes.get(k, 0)) <= tol for k in keys)

    def __eq__(self, other):
        return isinstance(other, RegisterState) and dict(self.amplitudes) == dict(other.amplitudes)

    def __repr__(self):
        terms = " + ".join(f"({a:.6g})|{label(k)}>" for k, a in self.amplitudes.items())
        return f"RegisterState({terms})"

    def to_json_obj(self):
        return {label(k): [a.real, a.imag] for k, a in self.amplitudes.items()}

    @classmethod
    def from_json_obj(cls, obj, n_max=N_MAX):
        return cls({parse_label(k): complex(v[0], v[1]) for k, v in obj.items()}, n_max)


def _permute(state, fn, step=None):
    out = {}
    for cfg, amp in state.amplitudes.items():
        new = fn(cfg)
        if max(new[1], new[3]) > state.n_max:
            raise PhotonCapError(f"{label(cfg)} -> {label(new)} exceeds N_max={state.n_max}", step)
        out[new] = out.get(new, 0) + amp
    return RegisterState(out, state.n_max, normalize_check=False)


def _exchange_cfg(cfg):
    a1, n1, a2, n2 = cfg
    return (a1, n2, a2, n1)


def _invert_node(atom, n):
    if atom == "e":
        return "g", n + 1
    if n == 0:
        return "g", 0  # |g>|0> has nothing to absorb: stationary
    return "e", n - 1


def exchange(state: RegisterState) -> RegisterState:
    """Swap the photon numbers of the two cavities in every configuration."""
    return _permute(state, _exchange_cfg)


def pi_op(state: RegisterState, which="both", step=None) -> RegisterState:
    """Half-Rabi-period inversion (g,n)->(e,n-1), (e,n)->(g,n+1) on the selected node(s)."""
    if which not in ("both", "node1", "node2"):
        raise ValueError(f"which must be 'both', 'node1' or 'node2', got {which!r}")
    on1 = which in ("both", "node1")
    on2 = which in ("both", "node2")

    def fn(cfg):
        a1, n1, a2, n2 = cfg
        if on1:
            a1, n1 = _invert_node(a1, n1)
        if on2:
            a2, n2 = _invert_node(a2, n2)
        return (a1, n1, a2, n2)

    return _permute(state, fn, step)


def apply_step(step_name, state, index=None):
    if step_name == EXCHANGE:
        return exchange(state)
    which = {PI: "both", PI1: "node1", PI2: "node2"}.get(step_name)
    if which is None:
        raise ValueError(f"unknown protocol step {step_name!r}")
    return pi_op(state, which, step=index)


@dataclass(frozen=True)
class ProtocolScript:
    steps: tuple

    def __post_init__(self):
        steps = tuple(_STEP_ALIASES.get(str(s).lower(), s) for s in self.steps)
        if not steps:
            raise ValueError("protocol script must be non-empty")
        bad = [s for s in steps if s not in STEPS]
        if bad:
            raise ValueError(f"unknown protocol steps {bad}")
        object.__setattr__(self, "steps", steps)

    def __len__(self):
        return len(self.steps)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data["steps"]
        return cls(tuple(data))


def run_protocol(script: ProtocolScript, state: RegisterState, trace=False):
    """Apply ``script`` left to right. With ``trace`` also return the state after every step."""
    states = []
    for i, step in enumerate(script.steps):
        state = apply_step(step, state, index=i)
        states.append(state)
    return (state, states) if trace else state


_X = EXCHANGE


def builtin_protocols():
    return {
        "SWAP": ProtocolScript((_X, PI, _X, PI, _X)),
        "CNOT": ProtocolScript(
            (_X, PI, _X, PI1, _X, PI2, _X, PI1, _X, PI2, _X, PI1, _X, PI2, PI, _X)
        ),
    }


_ENCODING = {0: ("e", 0), 1: ("g", 1)}
_DECODING = {v: k for k, v in _ENCODING.items()}


def computational_encode(q1, q2, n_max=N_MAX) -> RegisterState:
    """Logical |q1 q2> with |0> = |e>|0>, |1> = |g>|1> on each node."""
    a1, n1 = _ENCODING[int(q1)]
    a2, n2 = _ENCODING[int(q2)]
    return RegisterState.basis(a1, n1, a2, n2, n_max)


def computational_decode(state: RegisterState):
    """(q1, q2) for a computational basis state; ``"non-computational"`` for anything else.

    Superpositions inside the computational subspace return a dict of logical
    amplitudes.
    """
    logical = {}
    for (a1, n1, a2, n2), amp in state.amplitudes.items():
        bits = (_DECODING.get((a1, n1)), _DECODING.get((a2, n2)))
        if None in bits:
            if abs(amp) > SUBSPACE_TOL:
                return "non-computational"
            continue
        logical[bits] = amp
    big = {k: v for k, v in logical.items() if abs(v) > SUBSPACE_TOL}
    if len(big) == 1:
        (bits, amp), = big.items()
        if abs(abs(amp) - 1.0) <= SUBSPACE_TOL:
            return bits
    return big
