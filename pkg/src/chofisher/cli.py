"""Command-line front end: ``chofisher {energy,fisher,sweep,reproduce}``.

Exit codes: 0 ok, 2 usage or parse error, 3 solver failure, 4 invariant or
bound violation, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .eigensolve import solve_energy
from .errors import (
    ChoFisherError,
    DomainError,
    InvariantViolation,
    LabelParseError,
    SolverError,
)
from .momentum import TransformSettings
from .reproduce import TARGETS, Options, reproduce
from .sweep import (
    DEFAULT_OUTPUTS,
    SweepRequest,
    format_value,
    log_range,
    make_spec,
    parse_float_list,
    parse_state_list,
    run_sweep,
    state_row,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_INVARIANT = 4
EXIT_IO = 5

CONFIG_ENV = "CHOFISHER_CONFIG"
FISHER_COLUMNS = (
    "system", "label", "n_r", "l", "m", "omega", "rc",
    "energy", "I_r", "I_p", "I_t", "bound_low", "bound_high", "route_residual",
)
ENERGY_COLUMNS = ("system", "label", "n_r", "l", "omega", "rc", "energy")


class UsageError(ChoFisherError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by all commands after flags, config file and defaults merge."""

    quad_order: int = 128
    p_order: int = 128
    pmax: float | None = None
    tail_tolerance: float = 1e-10
    format: str = "csv"
    workers: int = 1

    def transform_settings(self) -> TransformSettings:
        return TransformSettings(p_max=self.pmax, p_order=self.p_order, tail_tolerance=self.tail_tolerance)


_CONFIG_TYPES = {
    "quad_order": int,
    "p_order": int,
    "pmax": float,
    "tail_tolerance": float,
    "format": str,
    "workers": int,
}


def load_config_file(path: str | os.PathLike) -> dict:
    """Read ``key = value`` lines (``#`` comments allowed) into typed settings."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    try:
        parser.read_string("[chofisher]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"malformed config file {path}: {exc}") from exc
    out = {}
    for key, raw in parser["chofisher"].items():
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise UsageError(f"unknown config key {key!r} in {path}")
        try:
            out[key] = _CONFIG_TYPES[key](raw)
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r} in {path}: {raw!r}") from exc
    return out


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Flags beat the ``CHOFISHER_CONFIG`` file, which beats built-in defaults."""
    environ = os.environ if environ is None else environ
    merged = {}
    path = environ.get(CONFIG_ENV)
    if path:
        merged.update(load_config_file(path))
    flag_map = {
        "quad_order": getattr(args, "quad_order", None),
        "pmax": getattr(args, "pmax", None),
        "format": getattr(args, "format", None),
        "workers": getattr(args, "workers", None),
    }
    merged.update({k: v for k, v in flag_map.items() if v is not None})
    cfg = RunConfig(**merged)
    if cfg.format not in ("csv", "tsv"):
        raise UsageError(f"format must be csv or tsv, got {cfg.format!r}")
    if cfg.quad_order < 64:
        raise UsageError("quadrature order must be at least 64")
    if cfg.workers < 1:
        raise UsageError("workers must be >= 1")
    return cfg


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or math.isnan(value):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _radius(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return _positive_float(text)


def _common(parser: argparse.ArgumentParser, *, state: bool = True) -> None:
    parser.add_argument("--system", choices=("cho", "pisb", "fho"), default="cho")
    if state:
        parser.add_argument("--state", required=True, help="spectroscopic label, e.g. 1s, 2p")
        parser.add_argument("--m", type=int, default=0, help="magnetic quantum number")
        strength = parser.add_mutually_exclusive_group()
        strength.add_argument("--omega", type=_positive_float)
        strength.add_argument("--omega2", type=_positive_float, help="omega squared")
        parser.add_argument("--rc", type=_radius, default=None, help="confinement radius or 'inf'")
    parser.add_argument("--out", default=None, help="output file (energy/fisher/sweep) or directory (reproduce)")
    parser.add_argument("--format", choices=("csv", "tsv"), default=None)
    parser.add_argument("--quad-order", dest="quad_order", type=int, default=None)
    parser.add_argument("--pmax", type=_positive_float, default=None)
    parser.add_argument("--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chofisher",
        description="Energies and Fisher information of confined and free 3D oscillators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="energy of one state")
    _common(p)

    p = sub.add_parser("fisher", help="Fisher information of one state")
    _common(p)

    p = sub.add_parser("sweep", help="CSV over states x omega^2 x r_c")
    _common(p, state=False)
    p.add_argument("--states", required=True, help="comma list of label[:m], e.g. '1s,1p:1'")
    radii = p.add_mutually_exclusive_group(required=True)
    radii.add_argument("--rc", help="comma list of radii (may include inf)")
    radii.add_argument("--rc-range", dest="rc_range", help="log range lo:hi:count")
    strength = p.add_mutually_exclusive_group()
    strength.add_argument("--omega2", help="comma list of omega^2 values")
    strength.add_argument("--omega", help="comma list of omega values")
    p.add_argument(
        "--outputs",
        default=",".join(DEFAULT_OUTPUTS),
        help="comma subset of energy,I_r,I_p,I_t,bounds,moments",
    )

    p = sub.add_parser("reproduce", help="regenerate the reference tables and figure data")
    _common(p, state=False)
    p.add_argument("--target", required=True, choices=(*TARGETS, "all"))
    return parser


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _omega(args) -> float:
    if getattr(args, "omega2", None) is not None:
        return math.sqrt(args.omega2)
    if getattr(args, "omega", None) is not None:
        return args.omega
    return 1.0


def _spec_from_args(args):
    rc = args.rc
    if args.system in ("cho", "pisb") and rc is None:
        raise UsageError(f"--rc is required for --system {args.system}")
    if args.system == "fho":
        if rc is not None and not math.isinf(rc):
            raise UsageError("the free oscillator takes no finite --rc")
        rc = math.inf
    return make_spec(args.system, args.state, args.m, _omega(args), rc)


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        yield fh


def _writer(fh, fmt: str):
    return csv.writer(fh, delimiter="," if fmt == "csv" else "\t", lineterminator="\n")


def cmd_energy(args, cfg: RunConfig) -> int:
    spec = _spec_from_args(args)
    level = solve_energy(spec)
    lo, hi = level.bracket
    print(
        f"E({spec.label}) = {level.energy:.12g} hartree  [{level.method}, "
        f"{level.iterations} evaluations, bracket {lo:.15g}..{hi:.15g}, residual {level.residual:.3g}]",
        file=sys.stderr,
    )
    with _output(args.out) as fh:
        w = _writer(fh, cfg.format)
        w.writerow(ENERGY_COLUMNS)
        w.writerow([format_value(v) for v in (
            spec.system.value, spec.label, spec.n_r, spec.l, spec.omega, float(spec.r_c), level.energy
        )])
    return EXIT_OK


def cmd_fisher(args, cfg: RunConfig) -> int:
    spec = _spec_from_args(args)
    row = state_row(spec, order=cfg.quad_order, settings=cfg.transform_settings())
    print(
        f"{spec.label} m={spec.m}: I_r={row['I_r']:.12g} I_p={row['I_p']:.12g} I_t={row['I_t']:.12g} "
        f"bounds [{row['bound_low']:.6g}, {row['bound_high']:.6g}] route residual {row['route_residual']:.2e}",
        file=sys.stderr,
    )
    with _output(args.out) as fh:
        w = _writer(fh, cfg.format)
        w.writerow(FISHER_COLUMNS)
        w.writerow([format_value(row[c]) for c in FISHER_COLUMNS])
    return EXIT_OK


def _sweep_request(args) -> SweepRequest:
    states = parse_state_list(args.states)
    if args.rc_range:
        try:
            lo, hi, count = args.rc_range.split(":")
            radii = log_range(float(lo), float(hi), int(count))
        except ValueError as exc:
            raise UsageError(f"--rc-range expects lo:hi:count, got {args.rc_range!r}") from exc
    else:
        radii = _radius_list(args.rc)
    if args.omega is not None:
        omega2 = [w * w for w in parse_float_list(args.omega)]
    elif args.omega2 is not None:
        omega2 = parse_float_list(args.omega2)
    else:
        omega2 = [1.0]
    outputs = tuple(o.strip() for o in args.outputs.split(",") if o.strip())
    return SweepRequest(args.system, tuple(states), tuple(radii), tuple(omega2), outputs)


def _radius_list(text: str) -> list:
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        try:
            out.append(_radius(item))
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from exc
    return out


def cmd_sweep(args, cfg: RunConfig) -> int:
    request = _sweep_request(args)
    rows = run_sweep(request, workers=cfg.workers, order=cfg.quad_order, settings=cfg.transform_settings())
    with _output(args.out) as fh:
        w = _writer(fh, cfg.format)
        w.writerow(request.columns)
        for row in rows:
            w.writerow([format_value(row[c]) for c in request.columns])
    return EXIT_OK


def cmd_reproduce(args, cfg: RunConfig) -> int:
    targets = TARGETS if args.target == "all" else (args.target,)
    out_dir = Path(args.out or ".")
    opts = Options(order=cfg.quad_order, settings=cfg.transform_settings(), workers=cfg.workers, fmt=cfg.format)
    for path in reproduce(targets, out_dir, opts):
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"energy": cmd_energy, "fisher": cmd_fisher, "sweep": cmd_sweep, "reproduce": cmd_reproduce}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, LabelParseError, DomainError) as exc:
        print(f"chofisher: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"chofisher: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InvariantViolation as exc:
        print(f"chofisher: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"chofisher: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
