"""Command-line front end.

Subcommands::

    roots       exact t-digit expansions of all roots
    digits      binary digits of a real root
    factor      square-free decomposition
    bounds      Cauchy bounds and the self-separation bound
    candidates  certified root approximations (optionally with a grid trace)

Data goes to stdout.  Errors go to stderr as JSON, with exit code 2 for
unparsable input, 3 for precondition violations and 4 for internal failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import InvariantError, LagrootError, OracleError, ParseError, PreconditionError
from .exact import Dyadic, format_dyadic, format_gaussian, format_rational
from .locator import filtered_candidates
from .poly import (
    Poly,
    cauchy_bounds,
    format_coeffs_json,
    format_poly,
    parse_coeffs_json,
    parse_poly,
    separation_exponent,
    square_free_decompose,
)
from .rootfinder import SCHEMA, algebraic_bit, find_roots

MAX_PRECISION = 1 << 20
EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INVARIANT = 0, 2, 3, 4


@dataclass(frozen=True)
class CliRequest:
    command: str
    polynomial: str
    t: int | None = None
    k: int | None = None
    k_range: tuple[int, int] | None = None
    root: int = 0
    format: str = "json"
    debug_web: bool = False
    coeffs: bool = False


@dataclass(frozen=True)
class CliResult:
    status: int
    stdout: str
    stderr: str = ""


def _error(status: int, kind: str, message: str) -> CliResult:
    payload = {"schema": SCHEMA, "error": {"kind": kind, "message": message}}
    return CliResult(status, "", json.dumps(payload))


def _parse_input(req: CliRequest) -> Poly:
    if req.coeffs:
        return parse_coeffs_json(req.polynomial)
    return parse_poly(req.polynomial)


def _check_position(name: str, value: int | None) -> int:
    if value is None:
        raise PreconditionError(f"--{name} is required")
    if value < 1:
        raise PreconditionError(f"--{name} must be at least 1")
    if value > MAX_PRECISION:
        raise PreconditionError(f"--{name} must be at most {MAX_PRECISION}")
    return value


def _nonconstant(f: Poly) -> Poly:
    if f.degree < 1:
        raise PreconditionError("the polynomial must be nonconstant")
    return f


def _emit(req: CliRequest, payload: dict, text: str) -> str:
    if req.format == "json":
        return json.dumps({"schema": SCHEMA, **payload}, indent=2)
    return text


def _cmd_roots(req: CliRequest, f: Poly) -> str:
    t = _check_position("t", req.t)
    report = find_roots(_nonconstant(f), t)
    return report.to_json() if req.format == "json" else report.to_text()


def _cmd_digits(req: CliRequest, f: Poly) -> str:
    _nonconstant(f)
    if req.k_range is not None:
        lo, hi = req.k_range
        _check_position("range start", lo)
        _check_position("range end", hi)
        if hi < lo:
            raise PreconditionError("empty digit range")
        bits = [algebraic_bit(f, req.root, k) for k in range(lo, hi + 1)]
        payload = {"root": req.root, "from": lo, "to": hi, "bits": "".join(map(str, bits))}
        return _emit(req, payload, "".join(map(str, bits)))
    k = _check_position("k", req.k)
    bit = algebraic_bit(f, req.root, k)
    return _emit(req, {"root": req.root, "k": k, "bit": bit}, str(bit))


def _cmd_factor(req: CliRequest, f: Poly) -> str:
    dec = square_free_decompose(_nonconstant(f))
    factors = [
        {"poly": format_poly(g), "coeffs": json.loads(format_coeffs_json(g)), "multiplicity": e}
        for g, e in dec.factors
    ]
    lines = [f"unit: {format_gaussian(dec.unit)}"]
    lines += [f"({format_poly(g)})^{e}" for g, e in dec.factors]
    return _emit(req, {"unit": format_gaussian(dec.unit), "factors": factors}, "\n".join(lines))


def _cmd_bounds(req: CliRequest, f: Poly) -> str:
    if f.degree < 1:
        payload = {"cauchy_lo": None, "cauchy_hi": None, "separation": None}
        return _emit(req, payload, "cauchy_lo: null\ncauchy_hi: null\nseparation: null")
    lo, hi = cauchy_bounds(f)
    sep = format_dyadic(Dyadic(1, -separation_exponent(f, f)))
    payload = {"cauchy_lo": format_rational(lo), "cauchy_hi": format_rational(hi), "separation": sep}
    text = "\n".join(f"{key}: {value}" for key, value in payload.items())
    return _emit(req, payload, text)


def _cmd_candidates(req: CliRequest, f: Poly) -> str:
    t = _check_position("t", req.t)
    trace: list[str] | None = [] if req.debug_web else None
    result = filtered_candidates(_nonconstant(f), t, trace=trace.append if trace is not None else None)
    items = [format_gaussian(z) for z in result.items]
    payload = {"t": t, "epsilon": format_rational(result.epsilon), "items": items}
    if trace is not None:
        payload["trace"] = trace
    text = "\n".join(items + (trace or []))
    return _emit(req, payload, text)


COMMANDS = {
    "roots": _cmd_roots,
    "digits": _cmd_digits,
    "factor": _cmd_factor,
    "bounds": _cmd_bounds,
    "candidates": _cmd_candidates,
}


def run(req: CliRequest) -> CliResult:
    """Execute one request; never raises for library errors."""
    if req.command not in COMMANDS:
        return _error(EXIT_PARSE, "parse", f"unknown command {req.command!r}")
    try:
        f = _parse_input(req)
        return CliResult(EXIT_OK, COMMANDS[req.command](req, f))
    except ParseError as exc:
        return _error(EXIT_PARSE, "parse", str(exc))
    except PreconditionError as exc:
        return _error(EXIT_PRECONDITION, "precondition", str(exc))
    except (InvariantError, OracleError) as exc:
        return _error(EXIT_INVARIANT, "invariant", str(exc))
    except LagrootError as exc:
        return _error(EXIT_INVARIANT, "internal", str(exc))
    except (ArithmeticError, RecursionError) as exc:
        return _error(EXIT_INVARIANT, "internal", f"{type(exc).__name__}: {exc}")


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("range must look like START:END") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lagroot", description="Certified roots of polynomials over Q(i).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("polynomial", help='polynomial such as "x^2 - 2" (or a JSON coefficient list with --coeffs)')
    common.add_argument("--coeffs", action="store_true", help="read the polynomial as a JSON array of coefficients, constant term first")
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", parents=[common], help="t-digit expansions of all roots")
    p.add_argument("--t", type=int, required=True, help="number of fractional binary digits")

    p = sub.add_parser("digits", parents=[common], help="binary digits of a real root")
    p.add_argument("--root", type=int, default=0, help="root id (roots are sorted by real, then imaginary part)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="position of the fractional digit")
    group.add_argument("--range", type=_range, dest="k_range", metavar="START:END", help="inclusive range of positions")

    sub.add_parser("factor", parents=[common], help="square-free decomposition")
    sub.add_parser("bounds", parents=[common], help="root modulus and separation bounds")

    p = sub.add_parser("candidates", parents=[common], help="certified root approximations")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--debug-web", action="store_true", help="include one trace line per examined grid point")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    req = CliRequest(
        command=args.command,
        polynomial=args.polynomial,
        t=getattr(args, "t", None),
        k=getattr(args, "k", None),
        k_range=getattr(args, "k_range", None),
        root=getattr(args, "root", 0),
        format=args.format,
        debug_web=getattr(args, "debug_web", False),
        coeffs=args.coeffs,
    )
    result = run(req)
    if result.stdout:
        print(result.stdout)
    if result.stderr:
        print(result.stderr, file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
