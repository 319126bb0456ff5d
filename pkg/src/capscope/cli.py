"""Command line front-end: validate, frontier, diff, compare, serve.

Exit codes: 0 on success, 2 for input and validation problems, 3 when a
solver limit stops the computation. All output is deterministic byte for
byte given the same document and arguments.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Sequence, TextIO

from .compare import classify
from .documents import (
    ModelDocument,
    ModelSyntaxError,
    SchemaError,
    ValidationError,
    canonical_json,
    load_model,
)
from .ilp import UnboundedVariableError
from .rationals import format_rational
from .reports import deprivation_to_tree, outcome_to_tree
from .scenarios import (
    DimensionMismatch,
    InvariantViolated,
    ScenarioEvaluator,
    UnknownCitizen,
    UnresolvableScenario,
    deprivation,
)
from .solver import FrontierOptions, NodeLimitExceeded, SearchSpaceTooLarge, SolverError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER_LIMIT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capscope", description="Capability-set modeling for city commons."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a model document")
    p_validate.add_argument("file")
    p_validate.set_defaults(func=cmd_validate)

    p_frontier = sub.add_parser("frontier", help="solve one citizen's frontier")
    p_frontier.add_argument("file")
    p_frontier.add_argument("--citizen", required=True)
    p_frontier.add_argument("--scenario", default=None)
    p_frontier.add_argument("--method", choices=("eps", "exhaustive"), default="eps")
    p_frontier.add_argument("--node-limit", type=int, default=None)
    p_frontier.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_frontier.set_defaults(func=cmd_frontier)

    p_diff = sub.add_parser("diff", help="deprivation between two scenarios")
    p_diff.add_argument("file")
    p_diff.add_argument("--citizen", required=True)
    p_diff.add_argument("--before", default="base")
    p_diff.add_argument("--after", required=True)
    p_diff.add_argument("--method", choices=("eps", "exhaustive"), default="eps")
    p_diff.add_argument("--node-limit", type=int, default=None)
    p_diff.set_defaults(func=cmd_diff)

    p_compare = sub.add_parser("compare", help="compare two citizens' capability sets")
    p_compare.add_argument("file")
    p_compare.add_argument("--left", required=True)
    p_compare.add_argument("--right", required=True)
    p_compare.add_argument("--scenario", default=None)
    p_compare.add_argument("--method", choices=("eps", "exhaustive"), default="eps")
    p_compare.add_argument("--node-limit", type=int, default=None)
    p_compare.set_defaults(func=cmd_compare)

    p_serve = sub.add_parser("serve", help="run the what-if HTTP service")
    p_serve.add_argument("file")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=7343)
    p_serve.add_argument("--node-limit", type=int, default=None)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        for diag in exc.diagnostics:
            print(str(diag), file=sys.stderr)
        return EXIT_INVALID
    except UnknownCitizen as exc:
        print(f"unknown citizen: {exc.args[0]}", file=sys.stderr)
        return EXIT_INVALID
    except (
        UnresolvableScenario,
        InvariantViolated,
        DimensionMismatch,
        UnboundedVariableError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NodeLimitExceeded, SearchSpaceTooLarge) as exc:
        print(f"solver limit: {exc}", file=sys.stderr)
        return EXIT_SOLVER_LIMIT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER_LIMIT


def _evaluator(document: ModelDocument, args) -> ScenarioEvaluator:
    options = FrontierOptions(
        method=getattr(args, "method", "eps"),
        node_limit=getattr(args, "node_limit", None),
    )
    return ScenarioEvaluator(
        document.city,
        document.commons,
        document.citizens,
        document.dimensions,
        document.scenario_registry(),
        options,
    )


def cmd_validate(args) -> int:
    try:
        document = load_model(args.file)
    except ValidationError as exc:
        for diag in exc.diagnostics:
            print(str(diag))
        return EXIT_INVALID
    for diag in document.warnings:
        print(str(diag))
    print(
        f"ok: {len(document.citizens)} citizen(s), "
        f"{len(document.commons.commons)} common(s), "
        f"{len(document.scenarios)} scenario(s)"
    )
    return EXIT_OK


def write_frontier_csv(
    stream: TextIO, document: ModelDocument, rep, citizen_id: str
) -> None:
    del citizen_id  # column set is the same for every citizen
    action_ids = list(document.city.action_ids())
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(rep.dimensions) + action_ids)
    for point in rep.points:
        row = [format_rational(v) for v in point.beings.values]
        row += [str(point.witness.counts.get(a, 0)) for a in action_ids]
        writer.writerow(row)


def cmd_frontier(args) -> int:
    document = load_model(args.file)
    rep = _evaluator(document, args).evaluate(args.citizen, args.scenario)
    if args.out is None:
        write_frontier_csv(sys.stdout, document, rep, args.citizen)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            write_frontier_csv(handle, document, rep, args.citizen)
    return EXIT_OK


def cmd_diff(args) -> int:
    document = load_model(args.file)
    evaluator = _evaluator(document, args)
    before = evaluator.evaluate(args.citizen, args.before)
    after = evaluator.evaluate(args.citizen, args.after)
    report = deprivation(before, after)
    sys.stdout.write(canonical_json(deprivation_to_tree(report)))
    return EXIT_OK


def cmd_compare(args) -> int:
    document = load_model(args.file)
    evaluator = _evaluator(document, args)
    left = evaluator.evaluate(args.left, args.scenario)
    right = evaluator.evaluate(args.right, args.scenario)
    outcome = classify(left, right)
    tree = {"left": args.left, "right": args.right, **outcome_to_tree(outcome)}
    sys.stdout.write(canonical_json(tree))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    document = load_model(args.file)
    app = create_app(document, default_node_limit=args.node_limit)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
