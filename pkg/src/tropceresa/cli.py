"""Batch command line front-end.

Exit codes: 0 success, 2 schema/parse errors, 3 mathematical precondition
failures.  All diagnostics go to stderr; reports go to stdout as JSON
(default) or text.  Graphs and tables are file paths or builtin:NAME.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import catalog, graph_core, intlinalg, johnson
from .ceresa import analyze, build_context, v_class, zharkov_test
from .errors import PreconditionError, SchemaError
from .exterior import A_group, Abar_group, B_group, Bbar_group
from .graph_core import genus, graph_genus, stabilize, symanzik
from .symplectic import basis_report, homology_basis

WORKERS_ENV = "TROPCERESA_WORKERS"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropceresa",
        description="exact tropical Ceresa classes of vertex-weighted metric graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, table=False):
        p.add_argument("--graph", required=True, help="path or builtin:NAME")
        p.add_argument(
            "--lengths",
            help="comma-separated rational lengths, edges in id-sorted order",
        )
        p.add_argument("--format", choices=("json", "text"), default="json")
        if table:
            p.add_argument("--table", required=True, help="path or builtin:NAME")

    p = sub.add_parser("genus", help="genus and cycle rank")
    common(p)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("stabilize", help="contract to the stable model")
    common(p)
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("symanzik", help="spanning-tree polynomial of the lengths")
    common(p)
    p.set_defaults(func=cmd_symanzik)

    p = sub.add_parser("hyperelliptic", help="test for a tree quotient involution")
    common(p)
    p.set_defaults(func=cmd_hyperelliptic)

    p = sub.add_parser("basis", help="symplectic basis report")
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("groups", help="finite obstruction groups")
    common(p)
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("ceresa", help="full class pipeline and verdict")
    common(p, table=True)
    p.set_defaults(func=cmd_ceresa)

    p = sub.add_parser("order", help="order of the class in the graded quotient")
    common(p, table=True)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("zharkov", help="degree-3 minor obstruction test")
    common(p, table=True)
    p.set_defaults(func=cmd_zharkov)

    p = sub.add_parser("sample", help="verdicts over random integer lengths")
    common(p, table=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--length-min", type=int, default=1)
    p.add_argument("--length-max", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--workers",
        type=int,
        default=int(os.environ.get(WORKERS_ENV, "1")),
        help=f"process count (default ${WORKERS_ENV} or 1)",
    )
    p.set_defaults(func=cmd_sample)

    return parser


# ---------------------------------------------------------------------------
# argument loading


def load_graph(args) -> graph_core.TropicalCurve:
    source = args.graph
    if source.startswith("builtin:"):
        curve = catalog.builtin_curve(source.removeprefix("builtin:"))
    else:
        curve = graph_core.load_curve(source)
    if getattr(args, "lengths", None):
        values = [Fraction(x) for x in args.lengths.split(",")]
        ids = [e.id for e in curve.sorted_edges()]
        if len(values) != len(ids):
            raise SchemaError(
                f"graph has {len(ids)} edges, got {len(values)} lengths"
            )
        curve = curve.with_lengths(dict(zip(ids, values)))
    return curve


def load_table(args, curve) -> johnson.JohnsonTable:
    source = args.table
    if source.startswith("builtin:"):
        return catalog.builtin_table(source.removeprefix("builtin:"), curve)
    basis = homology_basis(graph_core.scaled_to_integer(curve)[0])
    return johnson.load_table(source, basis)


def emit(args, payload: dict, text: str) -> int:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# subcommands


def cmd_genus(args) -> int:
    curve = load_graph(args)
    g, h = genus(curve), graph_genus(curve)
    return emit(
        args,
        {"genus": g, "graph_genus": h, "total_weight": g - h},
        f"genus {g} (cycle rank {h}, total weight {g - h})",
    )


def cmd_stabilize(args) -> int:
    curve = load_graph(args)
    stable = stabilize(curve)
    return emit(
        args,
        graph_core.curve_to_json(stable),
        json.dumps(graph_core.curve_to_json(stable), indent=2, sort_keys=True),
    )


def cmd_symanzik(args) -> int:
    curve = load_graph(args)
    value = symanzik(curve)
    return emit(args, {"symanzik": str(value)}, f"symanzik = {value}")


def cmd_hyperelliptic(args) -> int:
    curve = load_graph(args)
    stable = stabilize(curve)
    result = graph_core.is_hyperelliptic(stable)
    count = len(graph_core.hyperelliptic_involutions(stable))
    return emit(
        args,
        {"hyperelliptic": result, "involutions": count},
        f"hyperelliptic: {result} ({count} tree-quotient involutions)",
    )


def cmd_basis(args) -> int:
    curve = load_graph(args)
    scaled, scale = graph_core.scaled_to_integer(curve)
    rep = basis_report(scaled, homology_basis(scaled))
    rep["length_scale"] = scale
    return emit(args, rep, json.dumps(rep, indent=2, sort_keys=True))


def cmd_groups(args) -> int:
    curve = load_graph(args)
    ctx = build_context(curve)
    g, h = ctx.basis.g, ctx.basis.h
    y_units = [[int(t == g + i) for t in range(2 * g)] for i in range(h)]
    groups = {
        "A": A_group(ctx.delta, y_units, 2),
        "B": B_group(ctx.delta, y_units, 2),
        "Abar": Abar_group(ctx.delta, y_units),
        "Bbar": Bbar_group(ctx.delta, y_units),
    }
    payload = {
        "invariant_factors": list(
            intlinalg.invariant_factor_diagonal(
                [row[:h] for row in ctx.q_matrix[:h]]
            )
        ),
        "rank_status": "maximal" if ctx.maximal_rank else "deficient",
        "groups": {
            k: v.to_json() | {"order": "infinite" if v.order == float("inf") else int(v.order)}
            for k, v in groups.items()
        },
    }
    text = "\n".join(
        [f"rank: {payload['rank_status']}"]
        + [f"{k}: {v} (order {v.order})" for k, v in groups.items()]
    )
    return emit(args, payload, text)


def cmd_ceresa(args) -> int:
    curve = load_graph(args)
    table = load_table(args, curve)
    report = analyze(curve, table)
    return emit(args, report.to_json(), report.to_text())


def cmd_order(args) -> int:
    curve = load_graph(args)
    table = load_table(args, curve)
    report = analyze(curve, table, with_groups=False, with_zharkov=False)
    if report.order_bbar is not None:
        payload = {"order_in_Bbar": report.order_bbar, "verdict": report.verdict}
        text = f"order in Bbar: {report.order_bbar} ({report.verdict})"
    else:
        payload = {
            "in_Abar": report.in_abar,
            "least_multiple_in_Abar": report.least_multiple,
            "verdict": report.verdict,
        }
        text = (
            f"not in Abar; least multiple {report.least_multiple} "
            f"({report.verdict})"
            if not report.in_abar
            else f"in Abar; ambient order {report.order_ambient} ({report.verdict})"
        )
    return emit(args, payload, text)


def cmd_zharkov(args) -> int:
    curve = load_graph(args)
    table = load_table(args, curve)
    ctx = build_context(curve)
    v = v_class(ctx, table)
    result = zharkov_test(ctx, v)
    payload = {
        "obstructed": result["obstructed"],
        "w": result["w"].to_json(),
        "relation_generators": [x.to_json() for x in result["relation_generators"]],
    }
    text = f"obstructed: {result['obstructed']}"
    return emit(args, payload, text)


def _sample_one(job):
    graph_source, table_source, lengths = job
    args = argparse.Namespace(graph=graph_source, lengths=None)
    curve = load_graph(args)
    curve = curve.with_lengths(
        dict(zip([e.id for e in curve.sorted_edges()], map(Fraction, lengths)))
    )
    targs = argparse.Namespace(table=table_source)
    table = load_table(targs, curve)
    rep = analyze(curve, table, with_groups=False, with_zharkov=False)
    order = rep.order_bbar if rep.order_bbar is not None else rep.least_multiple
    return {
        "lengths": list(lengths),
        "verdict": rep.verdict,
        "order": "infinite" if order == float("inf") else int(order),
    }


def cmd_sample(args) -> int:
    curve = load_graph(args)
    n_edges = len(curve.edges)
    rng = random.Random(args.seed)
    jobs = [
        (
            args.graph,
            args.table,
            tuple(
                rng.randint(args.length_min, args.length_max)
                for _ in range(n_edges)
            ),
        )
        for _ in range(args.count)
    ]
    if args.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sample_one, jobs))
    else:
        results = [_sample_one(job) for job in jobs]
    counts: dict = {}
    for r in results:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    payload = {
        "seed": args.seed,
        "count": args.count,
        "verdict_counts": dict(sorted(counts.items())),
        "samples": results,
    }
    text = "\n".join(
        [f"{k}: {v}" for k, v in sorted(counts.items())]
        + [f"(seed {args.seed}, {args.count} samples)"]
    )
    return emit(args, payload, text)


if __name__ == "__main__":
    sys.exit(main())
