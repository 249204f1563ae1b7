"""
Command-line front end.

Every invocation writes one CSV (stdout or ``--output``) with a header row
and a trailing ``# provenance:`` line.  Angles are in degrees at this
boundary.  Exit codes: 0 ok, 2 bad arguments, 3 domain error, 4 unwritable
output.
"""
from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, _settings
from .envelope import Termination
from .errors import ShockfrontError
from .gas import GasModel
from .polar import polar_curve
from .reflection import (
    Status, build_local_rr, check_envelope_condition, feasibility_scan, sonic_angle,
    transition_angles,
)
from .shock import incident_shock

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def fmt_angle(x) -> str:
    return "" if x is None else f"{x:.6f}"


def fmt_num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def _fmt_cell(col: str, value) -> str:
    if col.endswith("_deg") and not isinstance(value, str):
        return fmt_angle(value)
    return fmt_num(value)


def render_csv(table: Table, provenance: str) -> str:
    buf = io.StringIO()
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt_cell(c, v) for c, v in zip(table.columns, row)) + "\n")
    for note in table.notes:
        buf.write(f"# {note}\n")
    buf.write(f"# provenance: {provenance}\n")
    return buf.getvalue()


# column sets for gnuplot-style data files
PLOT_KINDS = {
    "transition": ("mi", "theta_d_deg", "theta_s_deg", "theta_N_deg"),
    "good": ("mi", "gamma_minus_1", "status"),
    "polar": ("beta_rad", "turning_deg", "Ld"),
}


def emit_plotdata(records, kind: str, path) -> None:
    """Write tab-separated plot columns with a ``#`` header.

    ``records`` are mappings keyed by the column names of ``kind``; missing
    or ``None`` values become empty fields.

    Raises
    ------
    ValueError
        On an empty record list or an unknown kind (no file is written).
    OSError
        If ``path`` cannot be written.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}")
    cols = PLOT_KINDS[kind]
    lines = ["# " + "\t".join(cols)]
    for rec in records:
        lines.append("\t".join(_fmt_cell(c, rec.get(c)) for c in cols))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _grid(lo: float, hi: float, steps: int, log: bool) -> list[float]:
    if steps < 1:
        raise UsageError("grid step counts must be at least 1")
    if steps == 1:
        if lo != hi:
            raise UsageError("a single-step grid needs min == max")
        return [lo]
    if log:
        if not (lo > 0.0 and hi > 0.0):
            raise UsageError("log grids need positive bounds")
        return np.geomspace(lo, hi, steps).tolist()
    return np.linspace(lo, hi, steps).tolist()


def _positive(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not (value > 0.0 and math.isfinite(value)):
            raise argparse.ArgumentTypeError(f"{name} must be positive and finite")
        return value
    return conv


def _finite(text):
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("value must be finite")
    return value


def _gamma(text):
    value = _finite(text)
    if value < 1.0:
        raise argparse.ArgumentTypeError("gamma must be >= 1")
    return value


def _tol(text):
    try:
        return _settings.check_tol(float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shockfront", description="Regular shock reflection in self-similar potential flow.")
    parser.add_argument("--version", action="version", version=f"shockfront {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
        p.add_argument("--config", help="key=value file with defaults for these options")
        p.add_argument("--tol", type=_tol, help="root-finding tolerance in [1e-14, 1e-4]")
        return p

    def gas_mi(p, grid=False):
        p.add_argument("--gamma", type=_gamma, required=True, help="adiabatic exponent")
        if grid:
            p.add_argument("--mi", type=_positive("mi"), help="I-region Mach number")
            p.add_argument("--mi-min", type=_positive("mi-min"))
            p.add_argument("--mi-max", type=_positive("mi-max"))
            p.add_argument("--mi-steps", type=int)
            p.add_argument("--log", action="store_true", help="geometric M_I spacing")
        else:
            p.add_argument("--mi", type=_positive("mi"), required=True, help="I-region Mach number")

    p = common(sub.add_parser("polar", help="sample a shock polar"))
    gas_mi(p)
    p.add_argument("--samples", type=int, default=257)
    p.add_argument("--plotdata", help="also write plot data to this path")

    p = common(sub.add_parser("incident", help="incident shock state"))
    gas_mi(p)
    p.add_argument("--beta-q-deg", type=_finite, default=0.0)
    p.add_argument("--theta-deg", type=_finite)

    p = common(sub.add_parser("reflect", help="local regular reflection at one wedge angle"))
    gas_mi(p)
    p.add_argument("--theta-deg", type=_finite, required=True)
    p.add_argument("--beta-q-deg", type=_finite, default=0.0)

    p = common(sub.add_parser("transition", help="detachment, sonic and von Neumann angles"))
    gas_mi(p, grid=True)
    p.add_argument("--beta-q-deg", type=_finite, default=0.0)
    p.add_argument("--no-von-neumann", action="store_true", help="skip the von Neumann angle")
    p.add_argument("--plotdata", help="also write plot data to this path")

    p = common(sub.add_parser("envelope", help="envelope from the sonic point"))
    gas_mi(p)
    p.add_argument("--theta-deg", type=_finite, help="wedge angle (default: sonic angle)")

    p = common(sub.add_parser("scan", help="feasibility classification over (gamma, M_I)"))
    p.add_argument("--gamma-min", type=_gamma, required=True)
    p.add_argument("--gamma-max", type=_gamma, required=True)
    p.add_argument("--gamma-steps", type=int, required=True)
    p.add_argument("--mi-min", type=_positive("mi-min"), required=True)
    p.add_argument("--mi-max", type=_positive("mi-max"), required=True)
    p.add_argument("--mi-steps", type=int, required=True)
    p.add_argument("--log", action="store_true", help="geometric spacing for both axes")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plotdata", help="also write plot data to this path")
    return parser


def read_config(path: str) -> list[tuple[str, str]]:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            pairs.append((key.replace("_", "-"), value))
    return pairs


def _config_tokens(pairs, parser, command) -> list[str]:
    sub = parser._subparsers._group_actions[0].choices[command]
    flags = {opt: a for a in sub._actions for opt in a.option_strings}
    tokens = []
    for key, value in pairs:
        opt = "--" + key
        if opt not in flags or key in ("config", "output"):
            raise UsageError(f"unknown config key {key!r}")
        action = flags[opt]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(opt)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects a boolean")
        else:
            tokens += [opt, value]
    return tokens


def _config_path(argv) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def parse_args(argv, environ=None):
    parser = build_parser()
    argv = list(argv)
    cfg = _config_path(argv)
    command = next((t for t in argv if t in COMMANDS), None)
    if cfg and command:
        try:
            pairs = read_config(cfg)
        except OSError as exc:
            raise UsageError(f"cannot read config {cfg!r}: {exc}")
        # config values go first so that explicit flags win
        i = argv.index(command)
        argv = argv[:i + 1] + _config_tokens(pairs, parser, command) + argv[i + 1:]
    args = parser.parse_args(argv)
    if args.tol is None:
        try:
            args.tol = _settings.root_tol_from_env(environ)
        except ValueError as exc:
            raise UsageError(f"{_settings.ENV_VAR}: {exc}")
    return args


def _echo(args) -> str:
    skip = {"command", "output", "config"}
    items = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        value = getattr(args, key)
        if key == "tol" and value is None:
            value = _settings.root_tol()
        items.append(f"{key}={value}")
    return " ".join(items)


def cmd_polar(args, gas):
    curve = polar_curve(gas, gas.rho_ref, (args.mi * gas.c_ref, 0.0), n_samples=args.samples)
    table = Table(["beta_rad", "rho_d", "Ld", "turning_rad"])
    for pt in curve.samples:
        table.rows.append([pt.beta, pt.downstream.rho, pt.L_d, pt.turning])
    table.notes.append(f"tau_star_deg={fmt_angle(math.degrees(curve.tau_star))} "
                       f"beta_star_rad={fmt_num(curve.beta_star)}")
    if args.plotdata:
        emit_plotdata([{"beta_rad": p.beta, "turning_deg": math.degrees(p.turning), "Ld": p.L_d}
                       for p in curve.samples], "polar", args.plotdata)
    return table, EXIT_OK


def cmd_incident(args, gas):
    theta = None if args.theta_deg is None else math.radians(args.theta_deg)
    inc = incident_shock(gas, args.mi, math.radians(args.beta_q_deg), theta)
    table = Table(["gamma", "mi", "beta_q_deg", "xi_s", "rho_q", "c_q", "vq_x", "vq_y"])
    table.rows.append([gas.gamma, args.mi, args.beta_q_deg, inc.xi_s, inc.rho_Q, inc.c_Q,
                       inc.v_Q[0], inc.v_Q[1]])
    return table, EXIT_OK


def cmd_reflect(args, gas):
    cfg = build_local_rr(gas, args.mi, math.radians(args.beta_q_deg), math.radians(args.theta_deg))
    env = cfg.envelope
    table = Table(["theta_deg", "xi_r_x", "xi_r_y", "tau_deg", "L_R", "rho_R", "vr_x", "vr_y",
                   "xi_c0_x", "xi_c0_y", "sonic_ok", "vinb_ok", "envelope_ok", "termination",
                   "end_x", "end_y"])
    c0 = (None, None) if cfg.xi_C0 is None else tuple(cfg.xi_C0)
    end = (None, None) if env is None else tuple(env.end_point)
    table.rows.append([
        args.theta_deg, cfg.xi_R[0], cfg.xi_R[1], math.degrees(cfg.tau), cfg.L_R,
        cfg.reflected.downstream.rho, cfg.reflected.downstream.v[0], cfg.reflected.downstream.v[1],
        c0[0], c0[1], bool(cfg.verdicts["sonic_ok"]), bool(cfg.verdicts["vInB_ok"]),
        bool(cfg.verdicts["envelope_ok"]),
        str(env.termination) if env is not None else str(Termination.AT_CIRCLE), end[0], end[1],
    ])
    return table, EXIT_OK


def _mi_values(args) -> list[float]:
    if args.mi is not None:
        if any(v is not None for v in (args.mi_min, args.mi_max, args.mi_steps)):
            raise UsageError("give either --mi or the --mi-min/--mi-max/--mi-steps grid")
        return [args.mi]
    if None in (args.mi_min, args.mi_max, args.mi_steps):
        raise UsageError("need --mi or all of --mi-min, --mi-max, --mi-steps")
    return _grid(args.mi_min, args.mi_max, args.mi_steps, args.log)


def cmd_transition(args, gas):
    table = Table(["gamma", "mi", "status", "theta_d_deg", "theta_s_deg", "theta_N_deg"])
    code = EXIT_OK
    plot = []
    for mi in _mi_values(args):
        try:
            ta = transition_angles(gas, mi, math.radians(args.beta_q_deg),
                                   von_neumann=not args.no_von_neumann)
        except ShockfrontError as exc:
            _warn(f"mi={mi}: {type(exc).__name__}: {exc}")
            table.rows.append([gas.gamma, mi, type(exc).__name__, None, None, None])
            code = EXIT_DOMAIN
            continue
        degs = [None if a is None else math.degrees(a) for a in (ta.theta_d, ta.theta_s, ta.theta_N)]
        table.rows.append([gas.gamma, mi, "ok", *degs])
        plot.append(dict(zip(PLOT_KINDS["transition"], [mi, *degs])))
    if not args.no_von_neumann:
        table.notes.append("theta_N: pseudo-normal stem through xi_R perpendicular to wall B, Q upstream")
    if args.plotdata:
        emit_plotdata(plot, "transition", args.plotdata)
    return table, code


def cmd_envelope(args, gas):
    theta = sonic_angle(gas, args.mi) if args.theta_deg is None else math.radians(args.theta_deg)
    cfg = build_local_rr(gas, args.mi, 0.0, theta, envelope=False)
    check = check_envelope_condition(cfg)
    table = Table(["phi_deg", "r", "x", "y"])
    if check.curve is not None:
        xy = check.curve.cartesian()
        for phi, r, (x, y) in zip(check.curve.phi, check.curve.r, xy):
            table.rows.append([math.degrees(phi), r, x, y])
    table.notes.append(f"theta_deg={fmt_angle(math.degrees(theta))} termination={check.termination} "
                       f"end_x={fmt_num(check.end_point[0])} end_y={fmt_num(check.end_point[1])} "
                       f"ok={fmt_num(check.ok)}")
    return table, EXIT_OK


def cmd_scan(args, gas=None):
    gammas = _grid(args.gamma_min, args.gamma_max, args.gamma_steps, args.log)
    mis = _grid(args.mi_min, args.mi_max, args.mi_steps, args.log)
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    records = feasibility_scan(gammas, mis, workers=args.workers)
    table = Table(["gamma", "mi", "status", "theta_s_deg"])
    code = EXIT_OK
    for rec in records:
        ts = None if rec.theta_s is None else math.degrees(rec.theta_s)
        table.rows.append([rec.gamma, rec.M_I, str(rec.status), ts])
        if rec.status == Status.NO_INCIDENT_SHOCK:
            code = EXIT_DOMAIN
    if code == EXIT_DOMAIN:
        _warn("some cells have no incident shock")
    if args.plotdata:
        emit_plotdata([{"mi": r.M_I, "gamma_minus_1": r.gamma - 1.0, "status": str(r.status)}
                       for r in records], "good", args.plotdata)
    return table, code


COMMANDS = {
    "polar": cmd_polar, "incident": cmd_incident, "reflect": cmd_reflect,
    "transition": cmd_transition, "envelope": cmd_envelope, "scan": cmd_scan,
}


def _warn(msg: str) -> None:
    print(f"shockfront: {msg}", file=sys.stderr)


def run(argv=None, environ=None, stdout=None) -> int:
    """Run one command; returns the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = parse_args(argv, environ)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except UsageError as exc:
        _warn(str(exc))
        return EXIT_USAGE

    previous = _settings.root_tol()
    _settings.set_root_tol(args.tol)
    try:
        gas = GasModel(args.gamma) if hasattr(args, "gamma") else None
        if args.command == "polar" and args.samples < 64:
            raise UsageError("--samples must be at least 64")
        table, code = COMMANDS[args.command](args, gas)
        text = render_csv(table, f"{args.command} {_echo(args)} shockfront-{__version__}")
    except UsageError as exc:
        _warn(str(exc))
        return EXIT_USAGE
    except (ShockfrontError, ValueError) as exc:
        _warn(f"{type(exc).__name__}: {exc}")
        return EXIT_DOMAIN
    except OSError as exc:
        _warn(f"cannot write plot data: {exc}")
        return EXIT_IO
    finally:
        _settings.set_root_tol(None if previous == _settings.DEFAULT_ROOT_TOL else previous)

    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            _warn(f"cannot write {args.output!r}: {exc}")
            return EXIT_IO
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
