'''pyinteract command line.

Sub-commands::

    pyinteract summary --alpha A [--regime R]
    pyinteract verify (--identity ID | --el | --probe) --alpha A [--regime R]
    pyinteract solve --method particles|grid --alpha A [--regime R] ...
    pyinteract sweep --alpha-min A --alpha-max B --steps N [--regime R]

Exit codes: 0 success, 1 failed verification or unconverged solve,
2 usage or domain error.

Options of a sub-command can also be given in a ``key=value`` file
selected with ``--config``; flags on the command line take precedence.
'''
import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy

from pyinteract.closedform import build_solution
from pyinteract.kernel import Kernel, Regime
from pyinteract.measure import dump_measure
from pyinteract.solver import (
    RECENTER_MODES,
    FwOpts,
    ParticleOpts,
    solve_grid_fw,
    solve_particles,
)
from pyinteract.utils import (
    AccuracyError,
    DomainError,
    InteractError,
    UsageError,
    log,
    parse_grid,
)
from pyinteract.verify import (
    EXTERIOR_POINTS,
    IDENTITIES,
    INTERIOR_POINTS,
    convexity_probe,
    verify_euler_lagrange,
    verify_identity,
)
from pyinteract.version import __version__

SWEEP_HEADER = ("alpha", "R", "E", "second_moment", "el_residual")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


def fmt(value) -> str:
    '''17 significant digits, locale independent.'''
    return "{:.17g}".format(float(value))


def _jsonable(d):
    out = {}
    for key, value in d.items():
        if isinstance(value, float) and not math.isfinite(value):
            value = str(value)
        out[key] = value
    return out


@dataclass
class RunConfig:
    '''options read from a flat ``key=value`` file.

    Blank lines and lines starting with ``#`` are ignored. Keys are
    long option names, with ``-`` or ``_``.
    '''
    values: Dict[str, str] = field(default_factory=dict)
    path: Optional[str] = None

    @classmethod
    def parse(cls, text: str, path: Optional[str] = None) -> "RunConfig":
        values = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError("%s:%i: expected key=value, got %r" % (path or "<config>", lineno, line))
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
        return cls(values, path)

    @classmethod
    def read(cls, path: str) -> "RunConfig":
        try:
            with open(path) as inf:
                return cls.parse(inf.read(), path)
        except OSError as e:
            raise UsageError("cannot read config file %s: %s" % (path, e))

    def apply(self, parser: argparse.ArgumentParser):
        '''install the values as defaults of *parser*, so that flags
        given on the command line still win.'''
        actions = {a.dest: a for a in parser._actions if a.dest != "help"}
        defaults = {}
        for key, value in self.values.items():
            if key not in actions or key == "config":
                raise UsageError("unknown configuration key %r" % key)
            action = actions[key]
            if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
                if value.lower() in _TRUE:
                    value = True
                elif value.lower() in _FALSE:
                    value = False
                else:
                    raise UsageError("configuration key %r expects a boolean, got %r" % (key, value))
                if isinstance(action, argparse._StoreFalseAction):
                    value = not value
            elif action.nargs in ("*", "+"):
                value = [action.type(v) if action.type else v for v in value.split()]
            action.required = False
            defaults[key] = value
        parser.set_defaults(**defaults)


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _add_kernel_options(p):
    p.add_argument("--alpha", type=float, required=True, help="kernel exponent")
    p.add_argument("--regime", choices=("A", "B"), type=str.upper,
                   help="kernel family, inferred from alpha if omitted")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file with default options")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging, repeat for debug output")

    parser = _Parser(prog="pyinteract", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("summary", parents=[common], help="constants of the closed form")
    _add_kernel_options(p)
    p.add_argument("--center", type=float, default=0.0)

    p = sub.add_parser("verify", parents=[common], help="identity, Euler-Lagrange or convexity check")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--identity", choices=IDENTITIES, type=str.upper)
    mode.add_argument("--el", action="store_true", help="Euler-Lagrange conditions")
    mode.add_argument("--probe", action="store_true", help="convexity probe")
    _add_kernel_options(p)
    p.add_argument("--x", type=float, nargs="+", help="identity sample points")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--interior-points", type=int, default=50)
    p.add_argument("--exterior-points", type=int, default=1000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--grid", help="probe grid lo:hi:m")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", parents=[common], help="numerical minimization")
    p.add_argument("--method", choices=("particles", "grid"), default="particles")
    _add_kernel_options(p)
    p.add_argument("-n", "--n", type=int, default=200, help="number of particles")
    p.add_argument("--grid", help="grid lo:hi:m, default -2R:2R:801")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.add_argument("--gap-tol", type=float, default=1e-8)
    p.add_argument("--no-recenter", action="store_true")
    p.add_argument("--recenter", choices=RECENTER_MODES, default="shift",
                   help="whole grid steps or translation interpolation")
    p.add_argument("--out", help="write the measure as JSON")
    p.add_argument("--report", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("sweep", parents=[common], help="closed form over a range of alpha")
    p.add_argument("--alpha-min", type=float, required=True)
    p.add_argument("--alpha-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--regime", choices=("A", "B"), type=str.upper)
    p.add_argument("--interior-points", type=int, default=20)
    p.add_argument("--exterior-points", type=int, default=200)
    p.add_argument("--out", help="write the CSV here instead of stdout")

    return parser, sub.choices


def parse_args(argv: List[str]):
    parser, commands = build_parser()
    # the config file must be read before required options are checked
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config and argv and argv[0] in commands:
        RunConfig.read(known.config).apply(commands[argv[0]])
    return parser.parse_args(argv)


def _kernel(args) -> Kernel:
    return Kernel.create(args.alpha, args.regime)


def cmd_summary(args, out) -> int:
    s = build_solution(_kernel(args), args.center)
    out.write(json.dumps(_jsonable(s.summary()), indent=1) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.identity:
        xs = args.x if args.x else INTERIOR_POINTS + EXTERIOR_POINTS
        report = verify_identity(args.identity, args.alpha, xs, args.tol)
        passed = report.passed
    elif args.el:
        report = verify_euler_lagrange(_kernel(args), args.interior_points,
                                       tol=args.tol, n_exterior=args.exterior_points)
        passed = report.passed
    elif args.probe:
        grid = parse_grid(args.grid) if args.grid else None
        report = convexity_probe(_kernel(args), args.trials, grid, args.seed)
        passed = report.positive
    else:
        raise UsageError("verify needs one of --identity, --el or --probe")
    out.write(json.dumps(_jsonable(report.to_dict())) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def _write_report(args, report, out):
    d = _jsonable(report.to_dict())
    if args.format == "csv":
        text = ",".join(d) + "\n" + ",".join(
            fmt(v) if isinstance(v, float) else str(v) for v in d.values()) + "\n"
    else:
        text = json.dumps(d, sort_keys=True) + "\n"
    if args.report:
        with open(args.report, "w") as outf:
            outf.write(text)
    else:
        out.write(text)


def cmd_solve(args, out) -> int:
    k = _kernel(args)
    status = EXIT_OK
    if args.method == "particles":
        opts = ParticleOpts(n=args.n, grad_tol=args.grad_tol, seed=args.seed,
                            **({} if args.max_iters is None else {"max_iters": args.max_iters}))
        mu, report = solve_particles(k, opts)
    else:
        kw = {"gap_tol": args.gap_tol, "recenter_each_iter": not args.no_recenter,
              "recenter_mode": args.recenter}
        if args.grid:
            kw["lo"], kw["hi"], kw["m"] = parse_grid(args.grid)
        if args.max_iters is not None:
            kw["max_iters"] = args.max_iters
        try:
            mu, report = solve_grid_fw(k, FwOpts(**kw))
        except AccuracyError as e:
            log.warning("%s", e.value)
            mu, report = e.result
            status = EXIT_FAIL
    if args.out:
        dump_measure(mu, args.out, alpha=k.alpha)
    _write_report(args, report, out)
    return status


def cmd_sweep(args, out) -> int:
    if args.steps < 1:
        raise UsageError("steps must be >= 1, got %r" % args.steps)
    alphas = numpy.linspace(args.alpha_min, args.alpha_max, args.steps) \
        if args.steps > 1 else numpy.array([args.alpha_min])
    handle = open(args.out, "w", newline="") if args.out else out
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for alpha in alphas:
            k = Kernel.create(float(alpha), args.regime)
            s = build_solution(k)
            el = verify_euler_lagrange(k, args.interior_points, n_exterior=args.exterior_points)
            residual = max(el.max_interior_dev, -el.min_exterior_slack, 0.0)
            if s.energy is None:
                log.info("alpha=%g: eta from quadrature %.17g", alpha, el.eta_ref)
                energy = math.nan
            else:
                energy = s.energy
            writer.writerow([fmt(alpha), fmt(s.R), fmt(energy), fmt(s.second_moment()), fmt(residual)])
    finally:
        if args.out:
            handle.close()
    return EXIT_OK


COMMANDS = {
    "summary": cmd_summary,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parse_args(list(argv))
    except UsageError as e:
        sys.stderr.write("error: %s\n" % e.value)
        return EXIT_USAGE
    levels = [logging.WARNING, logging.INFO, logging.DEBUG]
    logging.basicConfig(level=levels[min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, sys.stdout)
    except (UsageError, DomainError) as e:
        sys.stderr.write("error: %s\n" % e.value)
        return EXIT_USAGE
    except InteractError as e:
        sys.stderr.write("error: %s\n" % e.value)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
