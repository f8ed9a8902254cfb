"""Command-line entry point: ``orbikit <subcommand> [flags]``.

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 bad parameters,
4 size cap exceeded, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import KINDS, PACKING, InvalidInput, OrbiMatrix, Params, ParamsError, SizeCapExceeded
from .formulations import compact_objective, compact_system, extended_system, x_objective
from .lifting import lift
from .linsys import stats
from .lpfiles import emit
from .optimizer import optimize
from .sci import sci_system, separate
from .verify import SUITES, verify

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PARAMS, EXIT_CAP, EXIT_IO = range(6)
SYSTEMS = ("extended", "compact", "sci")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--kind", choices=KINDS, default=PACKING)
    common.add_argument("--format", choices=("lp", "mps", "json"))
    common.add_argument("--in", dest="infile", metavar="FILE")
    common.add_argument("--out", dest="outfile", metavar="FILE")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int)

    parser = argparse.ArgumentParser(prog="orbikit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("optimize", parents=[common], help="exact linear optimization over the orbitope")
    e = sub.add_parser("emit", parents=[common], help="write a constraint system as an LP or MPS file")
    e.add_argument("--system", choices=SYSTEMS, default="extended")
    sub.add_parser("lift", parents=[common], help="lift a point x to a unit flow y")
    sub.add_parser("separate", parents=[common], help="find a violated shifted-column inequality")
    v = sub.add_parser("verify", parents=[common], help="run exact verification suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--trials", type=int, default=25)
    s = sub.add_parser("stats", parents=[common], help="size of a constraint system")
    s.add_argument("--system", choices=SYSTEMS, default="extended")
    return parser


def _params(args, required: bool = True) -> Params | None:
    if args.p is None and args.q is None and not required:
        return None
    if args.p is None or args.q is None:
        raise ParamsError("--p and --q are required")
    return Params(args.p, args.q)


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_json(path: str | None):
    text = _read_text(path)
    if not text.strip():
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from None


def _read_matrix(args, params: Params | None, empty_ok: bool = False) -> OrbiMatrix:
    data = _read_json(args.infile) if (args.infile or not empty_ok) else None
    if data is None:
        if params is None or not empty_ok:
            raise InvalidInput("no input matrix given")
        return OrbiMatrix.zeros(params)
    return OrbiMatrix.from_json(data, params)


def _write(args, text: str) -> None:
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _system(args, params: Params):
    if args.system == "extended":
        return extended_system(params, args.kind)
    if args.system == "compact":
        return compact_system(params, args.kind)
    return sci_system(params, args.kind, cap=args.cap)


def cmd_optimize(args) -> int:
    params = _params(args)
    if args.format not in (None, "json"):
        raise InvalidInput("optimize writes JSON only")
    d = _read_matrix(args, params, empty_ok=True)
    res = optimize(params, d, args.kind)
    _write(args, _dump(res.to_json()))
    return EXIT_OK


def cmd_emit(args) -> int:
    params = _params(args)
    fmt = args.format or "lp"
    if fmt == "json":
        raise InvalidInput("emit writes lp or mps")
    system = _system(args, params)
    if args.infile:
        d = _read_matrix(args, params, empty_ok=True)
        obj = compact_objective(params, d.entries) if args.system == "compact" else x_objective(d.entries)
        system.set_objective(obj)
    if args.outfile:
        with open(args.outfile, "wb") as fh:
            emit(system, fmt, fh)
    else:
        emit(system, fmt, sys.stdout)
    print(stats(system).line(), file=sys.stderr)
    return EXIT_OK


def cmd_lift(args) -> int:
    x = _read_matrix(args, _params(args, required=False))
    _write(args, _dump(lift(x).to_json()))
    return EXIT_OK


def cmd_separate(args) -> int:
    x = _read_matrix(args, _params(args, required=False))
    cut = separate(x)
    _write(args, _dump(None if cut is None else cut.to_json(x)))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify(_params(args), args.suite, args.seed, args.trials)
    _write(args, report.dumps())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_stats(args) -> int:
    st = stats(_system(args, _params(args)))
    _write(args, _dump(st.to_json()))
    return EXIT_OK


COMMANDS = {
    "optimize": cmd_optimize,
    "emit": cmd_emit,
    "lift": cmd_lift,
    "separate": cmd_separate,
    "verify": cmd_verify,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParamsError as exc:
        code, msg = EXIT_PARAMS, exc
    except SizeCapExceeded as exc:
        code, msg = EXIT_CAP, exc
    except (InvalidInput, ValueError) as exc:
        code, msg = EXIT_INPUT, exc
    except OSError as exc:
        code, msg = EXIT_IO, exc
    print(f"orbikit: {msg}", file=sys.stderr)
    return code
