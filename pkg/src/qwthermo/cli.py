"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
Settings resolve as command-line flag, then ``--config`` file
(``key = value`` lines), then built-in default.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys

from . import sweep
from .asymptotics import AnalyticFormUnavailable
from .verify import format_json, format_text, run_verify
from .walker import BlochAngles, Coin, evolve, init_localized

DEFAULTS = {
    "theta": math.pi / 4,
    "horizon": 2000,
    "tail_fraction": 0.5,
    "t1": 400,
    "epsilon": 1.0,
    "oracle": False,
    "out": "-",
    "format": "csv",
    "threads": 1,
}

_TYPES = {"theta": float, "horizon": int, "tail_fraction": float, "t1": int, "epsilon": float, "threads": int}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run settings")
    g.add_argument("--theta", type=float, help="coin angle in radians (default pi/4, Hadamard)")
    g.add_argument("--horizon", type=int, help="steps per asymptotic run (default 2000)")
    g.add_argument("--tail-fraction", dest="tail_fraction", type=float,
                   help="fraction of the run averaged for limits (default 0.5)")
    g.add_argument("--t1", type=int, help="measurement time (default 400)")
    g.add_argument("--epsilon", type=float, help="entanglement energy unit (default 1)")
    g.add_argument("--oracle", action="store_const", const=True,
                   help="also compute the second state by brute force")
    g.add_argument("--out", help="output path, '-' for stdout (default)")
    g.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    g.add_argument("--threads", type=int, help="sweep workers, 0 = one per CPU (default 1)")
    g.add_argument("--config", help="key=value file supplying defaults for the flags above")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="qwthermo",
        description="Quantum walk measurement protocol and entanglement thermodynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def bloch_args(p):
        p.add_argument("--gamma", type=float, default=0.0, help="Bloch polar angle in [0, pi]")
        p.add_argument("--phi", type=float, default=0.0, help="Bloch azimuth in [0, 2pi]")

    p = sub.add_parser("evolve", parents=[common], help="evolve a localized walker, emit amplitudes")
    bloch_args(p)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--site", type=int, default=0)

    p = sub.add_parser("asymptotics", parents=[common], help="long-time limits, simulated and closed form")
    bloch_args(p)

    p = sub.add_parser("protocol", parents=[common], help="evolve, measure, re-evolve; full ledger")
    bloch_args(p)

    p = sub.add_parser("figure1", parents=[common], help="entropy change vs mu^2 at phi=0")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--mu2-max", dest="mu2_max", type=float, default=0.04)

    p = sub.add_parser("figure2", parents=[common], help="entropy change and bounds over the Q0 disk")
    p.add_argument("--points", type=int, default=100, help="points per axis")

    p = sub.add_parser("sweep", parents=[common], help="grid sweep over Bloch angles or the Q0 plane")
    p.add_argument("--mode", choices=("bloch", "q0"), default="bloch")
    p.add_argument("--axis1", required=True, help="name:lo:hi:n (gamma or mu)")
    p.add_argument("--axis2", required=True, help="name:lo:hi:n (phi or nu)")
    p.add_argument("--simulate", action="store_true", help="run the simulated protocol per point")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="smaller grids for the slow checks")
    p.add_argument("--json", dest="json_out", help="write the machine-readable summary here")
    return parser


def read_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    with open(path) as fh:
        cp.read_string("[qwthermo]\n" + fh.read())
    out = {}
    for key, raw in cp["qwthermo"].items():
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ValueError(f"unknown config key {key!r} in {path}")
        if key == "oracle":
            out[key] = cp["qwthermo"].getboolean(key)
        else:
            out[key] = _TYPES.get(key, str)(raw)
    return out


def resolve(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _params(s: dict) -> sweep.ProtocolParams:
    return sweep.ProtocolParams(
        theta=s["theta"], t1=s["t1"], horizon=s["horizon"],
        tail_fraction=s["tail_fraction"], epsilon=s["epsilon"], oracle=s["oracle"],
    )


def _emit(records, s, kind):
    text = sweep.write_records(records, s["out"], s["format"], kind)
    if s["out"] in (None, "-"):
        sys.stdout.write(text)


def _run(args, s) -> int:
    cmd = args.command
    if cmd == "verify":
        checks, ok = run_verify(quick=args.quick)
        print(format_text(checks))
        print("verify:", "OK" if ok else "FAILED")
        if args.json_out:
            with open(args.json_out, "w") as fh:
                fh.write(format_json(checks, ok) + "\n")
        return 0 if ok else 1

    params = _params(s)
    if cmd == "evolve":
        if args.steps < 0:
            raise ValueError("--steps must be >= 0")
        state = evolve(init_localized(BlochAngles(args.gamma, args.phi), args.site), Coin(params.theta), args.steps)
        _emit(sweep.evolve_records(state), s, "evolve")
    elif cmd == "asymptotics":
        _emit([sweep.asymptotics_record(BlochAngles(args.gamma, args.phi), params)], s, "asymptotics")
    elif cmd == "protocol":
        _emit([sweep.run_protocol(BlochAngles(args.gamma, args.phi), params)], s, "protocol")
    elif cmd == "figure1":
        _emit(sweep.figure1(args.points, args.mu2_max, params), s, "figure1")
    elif cmd == "figure2":
        _emit(sweep.figure2(args.points, params, workers=s["threads"]), s, "figure2")
    elif cmd == "sweep":
        grid = sweep.SweepGrid(sweep.Axis.parse(args.axis1), sweep.Axis.parse(args.axis2), args.mode)
        _emit(sweep.run_sweep(grid, params, simulate=args.simulate, workers=s["threads"]), s, "protocol")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        s = resolve(args)
        return _run(args, s)
    except (ValueError, AnalyticFormUnavailable, OSError) as exc:
        print(f"qwthermo {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
