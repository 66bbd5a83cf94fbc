"""Command-line front end.

Every subcommand evaluates one quantity on a grid and writes a table as CSV
or JSON. Rates are divided by ``kappa`` before evaluation unless
``--absolute`` is given; grid flags are read in the same units as the
evaluated parameters.

A ``--config`` file (JSON, or flat ``key = value`` lines) supplies defaults
that command-line flags override. JSON output embeds the resolved
configuration, so feeding an output file back through ``--config``
reproduces the run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import SystemParams, poles, validate
from .correlations import g2_tau_curve, g2_zero_spectrum
from .errors import JCWaveguideError
from .oracle.eigen import effective_eigenvalues
from .single_photon import amplitudes, check_grid, default_grid
from .two_photon import _OUT_ENERGY_SIGNS, normalize_channel, output_wavefunction, smatrix_two_mode
from .verify import run_checks

OUTPUT_DIR_ENV = "JCWAVEGUIDE_OUTPUT_DIR"
COMMANDS = ("spectrum", "excitations", "poles", "smatrix", "wavefunction", "g2", "g2spec", "verify")
# resolved-config keys that describe where output goes rather than what is computed
_NOT_ECHOED = {"config", "output"}


class Table:
    """Column names plus rows of plain Python values."""

    def __init__(self, columns: list[str], rows: list[list]):
        self.columns = columns
        self.rows = rows


def _split(name: str, values) -> dict[str, np.ndarray]:
    values = np.asarray(values, dtype=complex)
    return {f"{name}_re": values.real, f"{name}_im": values.imag}


def _table(columns: dict[str, np.ndarray], source: str = "analytic") -> Table:
    names = list(columns)
    n = len(next(iter(columns.values())))
    rows = [[_plain(columns[c][i]) for c in names] + [source] for i in range(n)]
    return Table(names + ["source"], rows)


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


# --- commands ---------------------------------------------------------------


def _k_grid(args, params: SystemParams) -> np.ndarray:
    if args.kmin is None and args.kmax is None:
        return default_grid(params, args.n)
    base = default_grid(params, 2)
    lo = base[0] if args.kmin is None else args.kmin
    hi = base[-1] if args.kmax is None else args.kmax
    return check_grid(np.linspace(lo, hi, args.n))


def cmd_spectrum(args, params):
    k = _k_grid(args, params)
    a = amplitudes(params, k)
    cols = {"k": k, **_split("t_bar", a.t_bar), **_split("r_bar", a.r_bar),
            "T": np.abs(a.t_bar) ** 2, "R": np.abs(a.r_bar) ** 2}
    return _table(cols)


def cmd_excitations(args, params):
    k = _k_grid(args, params)
    a = amplitudes(params, k)
    cols = {"k": k, **_split("s_c", a.s_c), **_split("s_a", a.s_a),
            "cavity": np.abs(a.s_c) ** 2, "atom": np.abs(a.s_a) ** 2}
    return _table(cols)


def cmd_poles(args, params):
    ps = poles(params)
    ev1, ev2 = effective_eigenvalues(params, 1), effective_eigenvalues(params, 2)
    rows = [[name, float(z.real), float(z.imag), "analytic"] for name, z in ps._asdict().items()]
    for n, ev in ((1, ev1), (2, ev2)):
        rows += [[f"eigenvalue{n}_{i}", float(z.real), float(z.imag), "oracle"] for i, z in enumerate(ev)]
    return Table(["pole", "re", "im", "source"], rows)


def cmd_smatrix(args, params):
    p2 = args.p2
    if p2 is None:
        # on shell: signed outgoing momenta add up to the input energy
        s1, s2 = _OUT_ENERGY_SIGNS[normalize_channel(args.channel)]
        p2 = (args.k1 + args.k2 - s1 * args.p1) / s2
    S = smatrix_two_mode(params, args.channel, args.p1, p2, args.k1, args.k2)
    cols = {"k1": [S.k1], "k2": [S.k2], "p1": [S.p1], "p2": [S.p2],
            **_split("direct", [S.direct[0]]), **_split("correlated", [S.correlated]),
            "on_shell": [S.on_shell()]}
    t = _table(cols)
    t.columns.insert(0, "channel")
    t.rows[0].insert(0, S.channel)
    return t


def cmd_wavefunction(args, params):
    wf = output_wavefunction(params, args.channel, args.k1, args.k2)
    x = np.linspace(args.xmin, args.xmax, args.n)
    x1, x2 = (v.ravel() for v in np.meshgrid(x, x, indexing="ij"))
    direct, corr = wf.direct(x1, x2), wf.correlated(x1, x2)
    cols = {"x1": x1, "x2": x2, **_split("psi", direct + corr), **_split("direct", direct),
            **_split("correlated", corr)}
    return _table(cols)


def cmd_g2(args, params):
    energy = 2 * args.half_energy
    tau = np.linspace(0.0, args.tau_max, args.n)
    curve = g2_tau_curve(params, args.channel, energy, tau)
    return _table({"tau": curve.tau, "g2": curve.values, "divergent": np.isinf(curve.values)})


def cmd_g2spec(args, params):
    half = _k_grid(args, params)
    spec = g2_zero_spectrum(params, args.channel, half)
    return _table({"half_energy": spec.half_energy, "g2_zero": spec.values, "divergent": spec.divergent})


def cmd_verify(args, params):
    results = run_checks(args.level, args.seed)
    rows = [[r.name, r.value, r.tolerance, r.passed, "oracle"] for r in results]
    return Table(["check", "value", "tolerance", "passed", "source"], rows)


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# --- argument handling --------------------------------------------------------


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("system parameters")
    g.add_argument("--omega", type=float, default=0.0, help="cavity frequency")
    g.add_argument("--Omega", dest="Omega", type=float, default=0.0, help="atomic transition frequency")
    g.add_argument("--g", type=float, default=math.sqrt(5.0), help="atom-cavity coupling")
    g.add_argument("--kappa", type=float, default=1.0, help="cavity decay rate into the waveguide")
    g.add_argument("--gamma", type=float, default=0.0, help="atomic loss rate out of the waveguide")
    g.add_argument("--absolute", action="store_true", help="use rates as given instead of in units of kappa")
    o = p.add_argument_group("output")
    o.add_argument("--config", help="JSON or key=value file with default option values")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--output", help=f"output file (relative paths resolve under ${OUTPUT_DIR_ENV} if set)")


def _add_grid(p, n=2001):
    p.add_argument("--kmin", type=float, default=None)
    p.add_argument("--kmax", type=float, default=None)
    p.add_argument("--n", type=int, default=n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jcwaveguide", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    subs = {}
    helps = {
        "spectrum": "two-directional transmission and reflection against k",
        "excitations": "cavity and atom excitation amplitudes against k",
        "poles": "one- and two-excitation poles, with effective-Hamiltonian eigenvalues",
        "smatrix": "one structured two-photon S-matrix element",
        "wavefunction": "outgoing two-photon amplitude on an (x1, x2) grid",
        "g2": "g2(tau) at fixed pair energy",
        "g2spec": "g2(0) against the per-photon energy",
        "verify": "run invariant and oracle checks; nonzero exit on failure",
    }
    for name in COMMANDS:
        subs[name] = sub.add_parser(name, help=helps[name])
        _add_params(subs[name])
    _add_grid(subs["spectrum"])
    _add_grid(subs["excitations"])
    _add_grid(subs["g2spec"], n=401)
    for name in ("smatrix", "wavefunction", "g2", "g2spec"):
        subs[name].add_argument("--channel", default="RR", help="RR/transmitted, LL/reflected or RL")
    for name in ("smatrix", "wavefunction"):
        subs[name].add_argument("--k1", type=float, default=0.0)
        subs[name].add_argument("--k2", type=float, default=0.0)
    subs["smatrix"].add_argument("--p1", type=float, default=0.0)
    subs["smatrix"].add_argument("--p2", type=float, default=None, help="defaults to the on-shell value")
    subs["wavefunction"].add_argument("--xmin", type=float, default=-5.0)
    subs["wavefunction"].add_argument("--xmax", type=float, default=5.0)
    subs["wavefunction"].add_argument("--n", type=int, default=51)
    subs["g2"].add_argument("--half-energy", type=float, default=0.0, help="energy of each photon, E/2")
    subs["g2"].add_argument("--tau-max", type=float, default=10.0)
    subs["g2"].add_argument("--n", type=int, default=201)
    subs["verify"].add_argument("--level", choices=("quick", "full"), default="quick")
    subs["verify"].add_argument("--seed", type=int, default=0)
    parser._subparser_map = subs  # used to apply config-file defaults
    return parser


def load_config(path: str) -> dict:
    """Read a JSON object (or the ``config`` block of a JSON output) or ``key = value`` lines."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict):
        return dict(data.get("config", data))
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(parser: argparse.ArgumentParser, cfg: dict) -> dict:
    """Convert config values with the types of the matching options."""
    actions = {a.dest: a for a in parser._actions}
    out = {}
    for key, value in cfg.items():
        if key == "command":
            continue
        action = actions.get(key)
        if action is None:
            raise ValueError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            value = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
        elif value is not None and action.type is not None:
            value = action.type(value)
        out[key] = value
    return out


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    cfg = load_config(known.config) if known.config else {}
    if cfg.get("command") and not any(a in COMMANDS for a in argv):
        argv = [cfg["command"], *argv]
    first = parser.parse_args(argv)
    if first.command is None:
        parser.error("a command is required")
    if cfg:
        sub = parser._subparser_map[first.command]
        sub.set_defaults(**_coerce(sub, cfg))
        first = parser.parse_args(argv)
    return first


def resolve_params(args) -> SystemParams:
    params = validate(SystemParams(args.omega, args.Omega, args.g, args.kappa, args.gamma))
    return params if args.absolute else params.scaled(params.kappa)


# --- output -----------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        # divergent values are left as gaps; the divergent column says why
        return "%.17g" % v if math.isfinite(v) else ""
    return str(v)


def render(table: Table, fmt: str, config: dict) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    rows = [[None if isinstance(v, float) and not math.isfinite(v) else v for v in row] for row in table.rows]
    doc = {"config": config, "columns": table.columns, "rows": rows}
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def _output_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _error_record(exc: Exception, command: str | None) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc), "command": command})


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parse_args(argv)
    try:
        params = resolve_params(args)
        if getattr(args, "channel", None) is not None:
            args.channel = normalize_channel(args.channel)
        table = HANDLERS[args.command](args, params)
        config = {"command": args.command,
                  **{k: v for k, v in vars(args).items() if k not in _NOT_ECHOED and k != "command"}}
        text = render(table, args.format, config)
        if args.output:
            path = _output_path(args.output)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except BrokenPipeError:
        # downstream reader closed early (e.g. ``| head``); silence the final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (JCWaveguideError, ValueError, OSError) as exc:
        print(_error_record(exc, args.command), file=sys.stderr)
        return 2
    if args.command == "verify" and not all(row[3] for row in table.rows):
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
