"""Command-line entry point: ``sualayout {layout,render,metrics,derive}``."""
from __future__ import annotations

import argparse
import json
import sys

from .exceptions import SUAError, ValidationError
from .ingest import derive_groups, parse_instance, parse_publications, serialize_instance
from .pipeline import LayoutParams, run_stages
from .render import RenderOptions, render_svg

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def layout_document(layout, metrics):
    """Layout-output JSON: x positions, nodes in column order, edges by index."""
    nodes = [v for col in layout.schedule.columns for v in col]
    index = {v: i for i, v in enumerate(nodes)}
    return {
        "x": list(layout.x),
        "nodes": [{"actor": v.actor, "time": v.time, "group": v.group, "y": layout.y[v]} for v in nodes],
        "edges": sorted([index[p], index[c]] for p, c in layout.edges),
        "metrics": metrics.to_dict(),
    }


def dump_json(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _budget(text):
    try:
        lines, cols = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected L,C, e.g. 8,12") from None
    if lines < 0 or cols < 0:
        raise argparse.ArgumentTypeError("budget must be non-negative")
    return lines, cols


def build_parser():
    parser = argparse.ArgumentParser(prog="sualayout", description=__doc__)
    parser.add_argument("--exact-budget", type=_budget, metavar="L,C",
                        help="exact crossing minimization up to L live lines and C instants")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="run the pipeline, write layout and metrics JSON")
    p.add_argument("instance")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("render", help="run the pipeline and write SVG")
    p.add_argument("instance")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--column-width", type=float, default=RenderOptions.column_width)
    p.add_argument("--row-unit", type=float, default=RenderOptions.row_unit)
    p.add_argument("--smooth", action="store_true")
    p.add_argument("--hulls", action="store_true")
    p.add_argument("--no-labels", action="store_true")

    p = sub.add_parser("metrics", help="print the metrics report as JSON")
    p.add_argument("instance")

    p = sub.add_parser("derive", help="derive an instance from publication records")
    p.add_argument("publications")
    p.add_argument("-o", "--output", required=True)
    return parser


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _params(args):
    if args.exact_budget is None:
        return LayoutParams()
    lines, cols = args.exact_budget
    return LayoutParams(exact_lines=lines, exact_columns=cols)


def run(args):
    if args.command == "derive":
        instance = derive_groups(parse_publications(_read(args.publications)))
        _write(args.output, serialize_instance(instance))
        return EXIT_OK

    instance = parse_instance(_read(args.instance))
    res = run_stages(instance, _params(args))
    if args.command == "layout":
        _write(args.output, dump_json(layout_document(res.layout, res.metrics)))
    elif args.command == "metrics":
        sys.stdout.write(dump_json(res.metrics.to_dict()))
    elif args.command == "render":
        options = RenderOptions(
            column_width=args.column_width,
            row_unit=args.row_unit,
            curve="smooth" if args.smooth else "straight",
            show_group_hulls=args.hulls,
            label_actors=not args.no_labels,
        )
        _write(args.output, render_svg(res.layout, instance, options))
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ValidationError as exc:
        for issue in exc.issues:
            print(f"error: {issue}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SUAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
