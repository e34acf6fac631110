# app/cli.py — command-line entry point: density, constants, perfectness, example1, verify
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import pathlib
import sys
from typing import Any, Dict, List, NoReturn, Optional, Sequence

from app.services.constants import KINDS, SearchBudget, budget_trend, domain_constants
from app.services.example1 import example1_table
from app.services.metrics import DENSITY_COLUMNS, density_row, density_sample, density_scan
from app.services.perfectness import boundary_compact_set, up_constant_estimate
from app.services.suite_matrix import suite_names
from app.services.verify import default_corpus, run_suites
from app.utils.errors import ParseError, ToolkitError
from app.utils.parsing import DOMAIN_GRAMMAR, parse_corpus, parse_domain, parse_generator, parse_points_csv
from app.utils.sphere import parse_point

logger = logging.getLogger("spherical-density")

EXIT_OK = 0
EXIT_FAULT = 1
EXIT_USAGE = 2

TREND_STEPS = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as an exception instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise _UsageError(f"{self.prog}: {message}")


# -----------------------------------------------------------------------------
# output helpers
# -----------------------------------------------------------------------------

def _fmt(value: Optional[float]) -> str:
    return "" if value is None else "%.17g" % value


def _density_csv(rows: List[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DENSITY_COLUMNS)
    for row in rows:
        cells = [_fmt(row[c]) for c in DENSITY_COLUMNS]
        if row["re"] is None:
            cells[0] = "inf"
        writer.writerow(cells)
    return buf.getvalue()


def _budget(args: argparse.Namespace) -> SearchBudget:
    defaults = SearchBudget()
    return SearchBudget(
        grid=args.grid or defaults.grid,
        refine_iters=args.refine or defaults.refine_iters,
        target_tol=args.tol or defaults.target_tol,
    )


# -----------------------------------------------------------------------------
# subcommands
# -----------------------------------------------------------------------------

def _cmd_density(args: argparse.Namespace) -> int:
    domain = parse_domain(args.domain)
    if args.at is not None:
        rows = [density_row(density_sample(domain, parse_point(args.at)))]
    else:
        rows = [density_row(s) for s in density_scan(domain, args.grid or 1024)]
    if args.format == "csv":
        sys.stdout.write(_density_csv(rows))
    else:
        sys.stdout.write(json.dumps({"domain": domain.spec(), "rows": rows}, indent=2) + "\n")
    return EXIT_OK


def _cmd_constants(args: argparse.Namespace) -> int:
    domain = parse_domain(args.domain)
    budget = _budget(args)
    report = domain_constants(domain, budget, closed_form=not args.no_closed_form)
    out: Dict[str, Any] = json.loads(report.model_dump_json())
    if domain.has_isolated_boundary_point:
        # the infimum is approached only in the limit; show how it moves with the budget
        out["trend"] = {
            kind: [json.loads(r.model_dump_json()) for r in budget_trend(kind, domain, TREND_STEPS)]
            for kind in KINDS
        }
        print(
            f"note: {domain.spec()} has an isolated boundary point; constants are budget-dependent upper bounds",
            file=sys.stderr,
        )
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def _cmd_perfectness(args: argparse.Namespace) -> int:
    sources = [x for x in (args.points, args.generate, args.domain) if x is not None]
    if len(sources) != 1:
        raise _UsageError("perfectness: give exactly one of --points, --generate or --domain")
    if args.points is not None:
        path = pathlib.Path(args.points)
        E = parse_points_csv(path.read_text(encoding="utf-8"), label=path.name)
    elif args.generate is not None:
        E = parse_generator(args.generate)
    else:
        E = boundary_compact_set(parse_domain(args.domain), args.n)
    report = up_constant_estimate(E)
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def _cmd_example1(args: argparse.Namespace) -> int:
    report = example1_table(args.R, _budget(args))
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_FAULT


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.corpus == "default":
        corpus = default_corpus(args.seed)
    else:
        corpus = parse_corpus(pathlib.Path(args.corpus).read_text(encoding="utf-8"))
    if args.suite == "all":
        names = suite_names()
    elif args.suite in suite_names():
        names = [args.suite]
    else:
        raise _UsageError(f"verify: unknown suite {args.suite!r}; known: all, {', '.join(suite_names())}")
    report = run_suites(names, corpus, seed=args.seed, points=args.points)
    body = report.model_dump_json(indent=2) + "\n"
    if args.json:
        pathlib.Path(args.json).write_text(body, encoding="utf-8")
    sys.stdout.write(body)
    for s in report.suites:
        if not s.passed:
            print(f"suite {s.suite}: {len(s.failures)} failure(s), worst margin {s.worst_margin:.3e}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAULT


# -----------------------------------------------------------------------------
# parser
# -----------------------------------------------------------------------------

def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=None, help="lattice size (points on the sphere)")
    p.add_argument("--refine", type=int, default=None, help="refinement iterations per line search")
    p.add_argument("--tol", type=float, default=None, help="target tolerance of the refinement")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spherical-density",
        description="Hyperbolic and spherical densities, domain constants and uniform perfectness.",
        epilog=DOMAIN_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--log-level", default=os.getenv("SPHDENS_LOG_LEVEL", "WARNING"), help="logging level for stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("density", help="λ, μ and boundary distances at a point or over a lattice")
    p.add_argument("--domain", required=True)
    p.add_argument("--at", default=None, help="single point; omit for a lattice scan")
    p.add_argument("--grid", type=int, default=None, help="lattice size for scans (default 1024)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=_cmd_density)

    p = sub.add_parser("constants", help="C, C̃, Ĉ and the normalized constants of a domain")
    p.add_argument("--domain", required=True)
    _add_budget_flags(p)
    p.add_argument("--no-closed-form", action="store_true", help="always run the numeric search")
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("perfectness", help="uniform-perfectness estimate of a compact-set sample")
    p.add_argument("--points", default=None, help="CSV file of re,im rows (one optional inf row)")
    p.add_argument("--generate", default=None, help="cantor:<level> or geom:<base>,<rule>,<n>")
    p.add_argument("--domain", default=None, help="use a boundary sample of this domain")
    p.add_argument("--n", type=int, default=256, help="boundary sample size for --domain")
    p.set_defaults(handler=_cmd_perfectness)

    p = sub.add_parser("example1", help="closed forms vs numeric search on the disk |z| < R")
    p.add_argument("--R", type=float, required=True)
    _add_budget_flags(p)
    p.set_defaults(handler=_cmd_example1)

    p = sub.add_parser("verify", help="run inequality suites over a corpus of domains")
    p.add_argument("--suite", default="all", help="suite name or 'all'")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--corpus", default="default", help="corpus file (one domain per line) or 'default'")
    p.add_argument("--points", type=int, default=None, help="sample points per domain")
    p.add_argument("--json", default=None, help="also write the report to this path")
    p.set_defaults(handler=_cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(e, file=sys.stderr)
        print(DOMAIN_GRAMMAR, file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=str(args.log_level).upper(), stream=sys.stderr)
    logger.info("command %s", args.command)
    try:
        return args.handler(args)
    except _UsageError as e:
        print(e, file=sys.stderr)
        print(DOMAIN_GRAMMAR, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        print(DOMAIN_GRAMMAR, file=sys.stderr)
        return EXIT_USAGE
    except (ToolkitError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
