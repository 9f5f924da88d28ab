"""Command-line front end.

Subcommands emit CSV (spectrum, fidelity, propagate, reflectivity), one-line
reports (rabi, kerr), JSON (gate) or a pass/fail summary (verify).

Exit codes: 0 success, 1 usage error, 2 physics-domain error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

from . import acceptance, device, gates, modes, propagation
from .csvio import fmt, write_csv
from .errors import PhysicsDomainError, UnitError
from .units import parse_quantity

EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 1, 2, 3

# config-file keys that are physical quantities and therefore need unit suffixes
_PHYSICAL_KEYS = {
    "lambda1": "length", "design_wavelength": "length", "D": "dispersion",
    "intensity": "intensity", "n2": "kerr", "d": "dipole", "V": "volume",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _length(text):
    return parse_quantity(text, "length", default_unit="um")


def _int_list(text):
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _D_values(text):
    """Comma list or inclusive ``start:stop:step`` range, in ps/(nm km) unless suffixed."""
    def one(tok):
        return parse_quantity(tok.strip(), "dispersion", default_unit="ps_nm_km") / 1e-6

    text = str(text)
    if ":" in text:
        start, stop, step = (one(t) for t in text.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        count = int(round((stop - start) / step))
        return [start + step * i for i in range(count + 1)]
    return [one(t) for t in text.split(",") if t.strip()]


def _common(p):
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout (default)")
    p.add_argument("--config", help="flat JSON file of flag values; flags override it")


def _geometry_flags(p, s0_default):
    p.add_argument("--s0", type=_int_list, default=s0_default, help="isolated-cavity mode(s): '3', '1,10' or '1..10'")
    p.add_argument("--ratio", type=float, default=modes.DEFAULT_RATIO, help="l/l0 (default 200)")
    p.add_argument("--lambda1", type=_length, default=modes.DEFAULT_LAMBDA1, help="transition wavelength (default 1.24um)")
    p.add_argument("--n", type=float, default=modes.DEFAULT_N, help="effective index (default 2.2)")


def build_parser():
    parser = _Parser(prog="kerrgate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="mode populations W_s")
    _common(p)
    _geometry_flags(p, [1])
    p.add_argument("--norm", choices=("raw", "max1"), default="raw")
    p.add_argument("--s-max", default="auto", help="truncation index or 'auto'")

    p = sub.add_parser("fidelity", help="round-trip fidelity vs D")
    _common(p)
    _geometry_flags(p, [1, 10])
    p.add_argument("--D", type=_D_values, default=_D_values("0:30:0.5"),
                   help="ps/(nm km): list '0,2,20' or range '0:30:0.5' (default)")
    p.add_argument("--method", choices=("spectral", "grid"), default="spectral")

    p = sub.add_parser("propagate", help="field snapshots")
    _common(p)
    _geometry_flags(p, [10])
    p.add_argument("--D", type=_D_values, default=[10.0], help="ps/(nm km), single value")
    p.add_argument("--t", default="0,1,2",
                   help="times; bare numbers are multiples of the one-way transit l n/c, or use s/ps/fs suffixes")
    p.add_argument("--nz", type=int, help="grid points (default 2*s_max+1)")
    p.add_argument("--stride", type=int, default=1, help="emit every k-th grid point")

    p = sub.add_parser("reflectivity", help="Bragg stack R, T vs wavelength")
    _common(p)
    p.add_argument("--material", choices=sorted(device.MATERIALS), default="linbo3")
    p.add_argument("--n-mean", type=float, help="mean index (default: material n0)")
    p.add_argument("--dn", type=float, default=0.04, help="index contrast n_high - n_low")
    p.add_argument("--periods", type=int, default=200)
    p.add_argument("--design-wavelength", type=_length, default=modes.DEFAULT_LAMBDA1)
    p.add_argument("--range", dest="wl_range", default="1.22um:1.26um:0.01nm", help="start:stop:step")
    p.add_argument("--n-ambient", type=float, help="ambient/exit index (default n_low)")
    p.add_argument("--kerr-intensity", help="erase with the Kerr shift at this intensity (W_cm2)")

    p = sub.add_parser("rabi", help="vacuum Rabi frequency")
    _common(p)
    p.add_argument("--d", default="1e-28C_m", help="transition dipole (default 1e-28C_m)")
    p.add_argument("--V", help="mode volume (default (lambda1/n)^3)")
    p.add_argument("--lambda1", type=_length, default=modes.DEFAULT_LAMBDA1)
    p.add_argument("--n", type=float, default=modes.DEFAULT_N)
    p.add_argument("--units", choices=("cgs", "si"), default="cgs")

    p = sub.add_parser("kerr", help="Kerr index shift")
    _common(p)
    p.add_argument("--material", choices=sorted(device.MATERIALS), default="linbo3")
    p.add_argument("--n2", help="override Kerr coefficient, e.g. 83.3e-16cm2_W")
    p.add_argument("--intensity", default="1e11W_cm2", help="control intensity (bare numbers in W/cm^2)")

    p = sub.add_parser("gate", help="run a SWAP/CNOT protocol")
    _common(p)
    p.add_argument("--protocol", default="swap", help="swap | cnot | file:<path>")
    p.add_argument("--input", default="00", help="two logical bits like '10', or a JSON state file")
    p.add_argument("--trace", action="store_true", help="emit the state after every step")

    p = sub.add_parser("verify", help="run the acceptance suite")
    _common(p)
    return parser


def _load_config(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    with open(known.config) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a flat JSON object")
    out = {}
    for key, value in cfg.items():
        kind = _PHYSICAL_KEYS.get(key)
        values = value if isinstance(value, list) else [value]
        if kind is not None:
            for v in values:
                parse_quantity(v, kind)  # raises UnitError on bare numbers
        out[key.replace("-", "_")] = ",".join(str(v) for v in values) if isinstance(value, list) else value
    return out


def _apply_config(parser, argv, cfg):
    if not cfg:
        return parser.parse_args(argv)
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    # string defaults go through each action's type converter on re-parse
    sub.set_defaults(**{k: (v if isinstance(v, (str, bool)) else str(v)) for k, v in cfg.items()})
    return parser.parse_args(argv)


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_spectrum(args, out):
    s_max = args.s_max if args.s_max == "auto" else int(args.s_max)
    for i, s0 in enumerate(args.s0):
        g = modes.CavityGeometry.from_wavelength(s0, ratio=args.ratio, lambda1=args.lambda1, n=args.n)
        s, values = modes.spectrum_for_plot(modes.population_spectrum(g, s_max), args.norm)
        if len(args.s0) > 1:
            out.write(("\n" if i else "") + f"# s0={s0}\n")
        write_csv(out, ("s", "value"), zip(s.tolist(), values.tolist()))


def cmd_fidelity(args, out):
    rows = propagation.fidelity_sweep(args.s0, args.D, ratio=args.ratio, lambda1=args.lambda1,
                                      n=args.n, method=args.method)
    write_csv(out, ("s0", "D_ps_per_nm_km", "F"), rows)


def cmd_propagate(args, out):
    if len(args.D) != 1:
        raise UsageError("--D: propagate takes a single dispersion value")
    for i, s0 in enumerate(args.s0):
        g = modes.CavityGeometry.from_wavelength(s0, ratio=args.ratio, lambda1=args.lambda1, n=args.n)
        spectrum = modes.population_spectrum(g)
        params = propagation.DispersionParams(g, args.D[0])
        transit = g.l * g.n / propagation.C_LIGHT
        nz = args.nz or 2 * spectrum.s_max + 1
        for j, tok in enumerate(str(args.t).split(",")):
            tok = tok.strip()
            try:
                t = float(tok) * transit
            except ValueError:
                t = parse_quantity(tok, "time")
            state = propagation.field_snapshot(params, spectrum, t, nz)
            out.write(("\n" if i or j else "") + f"# s0={s0} t_s={fmt(t)}\n")
            sl = slice(None, None, max(1, args.stride))
            v = state.values[sl]
            write_csv(out, ("z_m", "re", "im", "abs2"),
                      zip(state.z[sl].tolist(), v.real.tolist(), v.imag.tolist(), (abs(v) ** 2).tolist()))


def cmd_reflectivity(args, out):
    medium = device.MATERIALS[args.material]
    n_mean = args.n_mean if args.n_mean is not None else medium.n0
    grating = device.GratingSpec.around(n_mean, args.dn, args.design_wavelength, args.periods)
    if args.kerr_intensity:
        intensity = parse_quantity(args.kerr_intensity, "intensity", default_unit="W_cm2") * 1e-4
        grating = device.kerr_erased(grating, device.kerr_index_shift(medium, intensity))
    try:
        start, stop, step = (_length(t) for t in args.wl_range.split(":"))
    except ValueError:
        raise UsageError(f"--range: expected start:stop:step, got {args.wl_range!r}") from None
    n_amb = args.n_ambient if args.n_ambient is not None else n_mean - args.dn / 2.0
    sp = device.reflectivity_spectrum(grating, device.wavelength_grid(start, stop, step), n_amb)
    write_csv(out, ("lambda_m", "R", "T"), zip(sp.wavelengths.tolist(), sp.R.tolist(), sp.T.tolist()))


def cmd_rabi(args, out):
    d = parse_quantity(args.d, "dipole", default_unit="C_m")
    V = parse_quantity(args.V, "volume", default_unit="m3") if args.V else (args.lambda1 / args.n) ** 3
    omega = device.vacuum_rabi_frequency(device.NodeCoupling(d, V, args.lambda1), args.units)
    out.write(f"Omega0_rad_per_s={omega:.6e}\n")


def cmd_kerr(args, out):
    medium = device.MATERIALS[args.material]
    if args.n2:
        medium = device.KerrMedium(parse_quantity(args.n2, "kerr", default_unit="cm2_W"), medium.n0)
    intensity = parse_quantity(args.intensity, "intensity", default_unit="W_cm2") * 1e-4
    out.write(f"delta_n={fmt(device.kerr_index_shift(medium, intensity))}\n")


def _protocol(spec):
    if spec.startswith("file:"):
        return gates.ProtocolScript.from_file(spec[5:])
    table = gates.builtin_protocols()
    if spec.upper() not in table:
        raise UsageError(f"--protocol: unknown protocol {spec!r}")
    return table[spec.upper()]


def _input_state(spec):
    if len(spec) == 2 and set(spec) <= {"0", "1"}:
        return gates.computational_encode(int(spec[0]), int(spec[1]))
    try:
        with open(spec) as fh:
            return gates.RegisterState.from_json_obj(json.load(fh))
    except FileNotFoundError:
        raise UsageError(f"--input: expected two bits or a state file, got {spec!r}") from None


def cmd_gate(args, out):
    script = _protocol(args.protocol)
    state = _input_state(args.input)
    final, trace = gates.run_protocol(script, state, trace=True)
    if args.trace:
        rows = [json.dumps(s.to_json_obj(), sort_keys=True) for s in [state, *trace]]
        out.write("[\n " + ",\n ".join(rows) + "\n]\n")
    else:
        out.write(json.dumps(final.to_json_obj(), sort_keys=True) + "\n")


def cmd_verify(args, out):
    results = acceptance.run_all(out)
    failed = [c.key for c, ok, _ in results if not ok]
    out.write(f"{len(results) - len(failed)}/{len(results)} criteria passed"
              + (f"; failed: {', '.join(failed)}\n" if failed else "\n"))
    return EXIT_VERIFY if failed else 0


COMMANDS = {
    "spectrum": cmd_spectrum, "fidelity": cmd_fidelity, "propagate": cmd_propagate,
    "reflectivity": cmd_reflectivity, "rabi": cmd_rabi, "kerr": cmd_kerr,
    "gate": cmd_gate, "verify": cmd_verify,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        try:
            args = _apply_config(parser, argv, _load_config(argv))
        except SystemExit as exc:  # argparse usage errors and --help
            return exc.code
        with _open_out(args.output) as out:
            return COMMANDS[args.command](args, out) or 0
    except (UsageError, UnitError, argparse.ArgumentTypeError, OSError, json.JSONDecodeError) as exc:
        print(f"kerrgate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhysicsDomainError as exc:
        print(f"kerrgate: physics error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
