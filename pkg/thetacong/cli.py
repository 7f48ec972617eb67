"""thetacong CLI: decide, classify, construct, compose, obstruct, torsion, verify subcommands."""

import argparse
import json
import sys

import yaml
from loguru import logger

from .arith import QQ, QuadField
from .config import BUNDLED_FIXTURES, DEFAULT_N_JOBS, LOG_LEVEL, load_budget
from .construct import compose, search_type
from .correspondence import TriangleType, classify, to_conic_point, validate
from .curves import Angle, torsion_k, torsion_q
from .decide import decide
from .exceptions import (
    DegenerateSumError,
    FixtureError,
    InvalidTriangleError,
    OutsideClassificationError,
    ThetaCongDomainError,
    ThetaCongError,
)
from .fixtures import run_fixtures
from .obstruct import obstruction_report
from .surd import format_sides, parse_sides

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID_INPUT = 2
EXIT_INVALID_TRIANGLE = 3
EXIT_FIXTURE_FAILURE = 4

SURD_GRAMMAR = """\
numbers:
  Sides and coordinates are exact surd expressions built from integers,
  "p/q", sqrt(...), + - * /, unary minus and parentheses, e.g.
      "41/3 - 11*sqrt(13)/3"   "(-131 + 61*sqrt(13))/51"   "2*sqrt(3)"
  A sqrt argument must reduce to k^2 or k^2*m for the field Q(sqrt(m)).
  Triangles are given as "U, V, W".
  cos(theta) is "s/r"; negative values are fine (--cos -1/2 is 2pi/3).

exit codes:
  0 success, 2 invalid input, 3 invalid triangle, 4 fixture failure
"""

# Flags whose values may legitimately start with "-"
_SIGNED_VALUE_FLAGS = ("--cos", "--triangle", "--first", "--second")


def _join_signed_values(argv):
    """Rewrites "--cos -1/2" as "--cos=-1/2" so argparse does not read -1/2 as a flag."""
    joined = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            joined.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def configure_logging(verbosity: int):
    """Installs a stderr sink and enables the package logger when -v is given."""
    if not verbosity:
        return
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbosity > 1 else LOG_LEVEL)
    logger.enable("thetacong")


def budget_from_args(args):
    overrides = list(args.override or [])
    for key in ("max_numerator", "max_denominator", "max_param"):
        value = getattr(args, key, None)
        if value is not None:
            overrides.append(f"{key}={value}")
    return load_budget(args.config, overrides)


def _angle(args) -> Angle:
    return Angle.from_cos(args.cos)


def emit(args, headline: str, payload: dict):
    """Prints the payload as JSON, or as a headline followed by YAML."""
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(headline)
        print(yaml.safe_dump(payload, sort_keys=False), end="")


# ── decide subcommand ──────────────────────────────────────────


def cmd_decide(args):
    angle = _angle(args)
    decision = decide(args.n, args.m, angle, budget_from_args(args), args.n_jobs)
    headline = f"n = {args.n} over Q(sqrt({args.m})) at theta = {angle}: {decision.verdict.value}"
    if decision.triangle is not None:
        headline += f" via ({format_sides(decision.triangle.sides)})"
    emit(args, headline, decision.to_json())
    return EXIT_OK


# ── classify subcommand ────────────────────────────────────────


def cmd_classify(args):
    angle = _angle(args)
    K = QuadField(args.m)
    T = validate(*parse_sides(args.triangle, K), args.n, angle, K)
    tag = classify(T)
    payload = {"type": tag.value, "sides": format_sides(T.sides), "triangle": T.to_json()}
    if tag in (TriangleType.TYPE2, TriangleType.TYPE3, TriangleType.TYPE4):
        payload["conicPoint"] = to_conic_point(T).to_json()
    emit(args, f"({format_sides(T.sides)}) is type {tag.value}", payload)
    return EXIT_OK


# ── construct subcommand ───────────────────────────────────────


def cmd_construct(args):
    angle = _angle(args)
    found = search_type(args.type, args.n, angle, args.m, budget_from_args(args), args.n_jobs)
    if found.found:
        headline = f"Type {args.type} triangle: ({format_sides(found.triangle.sides)})"
    else:
        headline = f"No type {args.type} triangle within budget"
    emit(args, headline, found.to_json())
    return EXIT_OK


# ── compose subcommand ─────────────────────────────────────────


def cmd_compose(args):
    angle = _angle(args)
    T1 = validate(*parse_sides(args.first, QQ), args.n, angle)
    T2 = validate(*parse_sides(args.second, QQ), args.m * args.n, angle)
    T = compose(T1, T2, args.m)
    payload = {
        "first": T1.to_json(),
        "second": T2.to_json(),
        "sides": format_sides(T.sides),
        "triangle": T.to_json(),
    }
    emit(args, f"Composed triangle: ({format_sides(T.sides)})", payload)
    return EXIT_OK


# ── obstruct subcommand ────────────────────────────────────────


def cmd_obstruct(args):
    report = obstruction_report(args.m, _angle(args))
    summary = ", ".join(
        f"type {tag}: {'solvable' if report.verdict(tag).solvable else 'obstructed'}"
        for tag in ("2", "3", "4")
    )
    emit(args, f"m = {args.m}, theta = {report.angle}: {summary}", report.to_json())
    return EXIT_OK


# ── torsion subcommand ─────────────────────────────────────────


def cmd_torsion(args):
    angle = _angle(args)
    if args.m is None:
        torsion, where = torsion_q(args.n, angle), "Q"
    else:
        torsion, where = torsion_k(args.n, angle, args.m), f"Q(sqrt({args.m}))"
    payload = {"n": args.n, "m": args.m, "r": angle.r, "s": angle.s, **torsion.to_json()}
    emit(args, f"E_{{{args.n},{angle}}}({where})_tors = {torsion.shape.value}", payload)
    return EXIT_OK


# ── verify subcommand ──────────────────────────────────────────


def cmd_verify(args):
    summary = run_fixtures(args.fixtures)
    headline = f"{summary.passed}/{summary.total} fixtures passed"
    emit(args, headline, summary.to_json())
    return EXIT_OK if summary.ok else EXIT_FIXTURE_FAILURE


# ── Main entry point ───────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Log to stderr (-vv for debug)")

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--n", type=int, required=True, help="Squarefree positive integer n")
    problem.add_argument("--cos", required=True, help='cos(theta) as "s/r"')

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--m", type=int, required=True, help="Squarefree m > 1, K = Q(sqrt(m))")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--max-numerator", type=int, help="Largest |p| for x = p/e^2")
    budget.add_argument("--max-denominator", type=int, help="Largest e for x = p/e^2")
    budget.add_argument("--max-param", type=int, help="Largest height of swept parameters")
    budget.add_argument("--n-jobs", type=int, default=DEFAULT_N_JOBS, help="joblib workers")
    budget.add_argument("--config", help="YAML file with budget keys")
    budget.add_argument(
        "-o", "--override", action="append", metavar="KEY=VALUE", help="Budget override, repeatable"
    )

    parser = argparse.ArgumentParser(
        prog="thetacong",
        description="(K, theta)-congruent numbers over real quadratic fields",
        epilog=SURD_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command")

    def add(name, help, parents):
        return subparsers.add_parser(
            name,
            help=help,
            parents=[common, *parents],
            epilog=SURD_GRAMMAR,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )

    # decide
    decide_parser = add("decide", "Decide whether n is (K, theta)-congruent", [problem, field, budget])
    decide_parser.set_defaults(func=cmd_decide)

    # classify
    classify_parser = add("classify", "Validate and classify a triangle over K", [problem, field])
    classify_parser.add_argument("--triangle", required=True, help='Sides as "U, V, W"')
    classify_parser.set_defaults(func=cmd_classify)

    # construct
    construct_parser = add("construct", "Search for a triangle of a given type", [problem, field, budget])
    construct_parser.add_argument("--type", choices=["1", "2", "3", "4"], required=True)
    construct_parser.set_defaults(func=cmd_construct)

    # compose
    compose_parser = add("compose", "Combine rational triangles of areas n and mn", [problem, field])
    compose_parser.add_argument("--first", required=True, help="Rational triangle of area n*alpha")
    compose_parser.add_argument("--second", required=True, help="Rational triangle of area mn*alpha")
    compose_parser.set_defaults(func=cmd_compose)

    # obstruct
    obstruct_parser = add("obstruct", "Local solvability of the type conics", [field])
    obstruct_parser.add_argument("--cos", required=True, help='cos(theta) as "s/r"')
    obstruct_parser.set_defaults(func=cmd_obstruct)

    # torsion
    torsion_parser = add("torsion", "Torsion shape over Q, or over K with --m", [problem])
    torsion_parser.add_argument("--m", type=int, help="Squarefree m > 1; omit for torsion over Q")
    torsion_parser.set_defaults(func=cmd_torsion)

    # verify
    verify_parser = add("verify", "Check the worked-example fixtures", [])
    verify_parser.add_argument("--fixtures", default=str(BUNDLED_FIXTURES), help="Fixture JSON file")
    verify_parser.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_signed_values(argv))

    if not args.command:
        parser.print_help()
        return EXIT_INVALID_INPUT

    configure_logging(args.verbose)
    try:
        return args.func(args)
    except InvalidTriangleError as e:
        logger.error(f"Invalid triangle: {e}")
        print(f"Error: invalid triangle: {e}", file=sys.stderr)
        return EXIT_INVALID_TRIANGLE
    except FixtureError as e:
        logger.error(f"Fixture failure: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FIXTURE_FAILURE
    except (ThetaCongDomainError, OutsideClassificationError, DegenerateSumError) as e:
        logger.error(f"Invalid input: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except ThetaCongError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
