"""``spinxfer`` command line entry point.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import SpinxferError
from .sweeps import SweepConfig, run_sweep
from .transfer import INITIAL_FAMILIES
from .verify import run_verify

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_chain(p, omega_range=False):
    p.add_argument("--n", type=int, default=None, help="number of sites")
    p.add_argument("--j", type=float, default=None, help="nearest-neighbour coupling J")
    p.add_argument("--delta", type=float, default=None, help="anisotropy")
    if omega_range:
        p.add_argument("--omega-min", type=float, default=None)
        p.add_argument("--omega-max", type=float, default=None)
        p.add_argument("--points", type=int, default=None)
    else:
        p.add_argument("--omega", type=float, default=None, help="three-spin strength")
        p.add_argument("--t-max", type=float, default=None)
        p.add_argument("--steps", type=int, default=None, help="number of time points")
        p.add_argument("--initial", choices=INITIAL_FAMILIES, default=None)
        p.add_argument("--theta", type=float, default=None, help="Bloch polar angle of one input state")
        p.add_argument("--phi", type=float, default=None, help="Bloch azimuth of one input state")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinxfer", description="State-transfer sweeps for the chiral XXZ chain.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_chain(sub.add_parser("fidelity", help="amplitude and average fidelity versus time"))
    _add_chain(sub.add_parser("n6-fidelity", help="excitation transfer probability, default N=6"))
    _add_chain(sub.add_parser("tc", help="characteristic time t_c(n=0) versus omega"), omega_range=True)
    _add_chain(sub.add_parser("concurrence", help="A-B concurrence at t_c versus omega"), omega_range=True)
    v = sub.add_parser("verify", help="run all oracle cross-checks")
    v.add_argument("--seed", type=int, default=42)
    return parser


def _write(text: str, path: str | None) -> int:
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"spinxfer: cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.command == "verify":
        report, code = run_verify(args.seed)
        sys.stdout.write(report)
        return code
    options = {k: v for k, v in vars(args).items() if k != "command"}
    try:
        cfg = SweepConfig.for_kind(args.command, **options)
    except SpinxferError as exc:
        parser.print_usage(sys.stderr)
        print(f"spinxfer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _write(run_sweep(cfg), cfg.out)


if __name__ == "__main__":
    sys.exit(main())
