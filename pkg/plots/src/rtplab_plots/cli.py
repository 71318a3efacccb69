"""Command-line interface.

    rtplab-plots render --spec FILE [--out DIR]
    rtplab-plots render --scenario-dir DIR [--out DIR]

A spec file is JSON: either one figure object or a list of them, each with
``kind`` (learning | reuse | accumulation | portrait), ``inputs`` (CSV
paths), optional ``labels``, and ``output`` (PNG path). Exit code 0 when
every figure rendered; nonzero with per-file, per-column messages when an
input does not match the published schema.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from rtplab_plots.render import FigureSpec, SchemaError, discover_specs, render


def _specs_from_json(path) -> list[FigureSpec]:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, dict):
        doc = [doc]
    specs = []
    for i, entry in enumerate(doc):
        try:
            inputs = tuple(entry["inputs"])
            labels = tuple(entry.get("labels", [Path(p).stem for p in inputs]))
            specs.append(
                FigureSpec(
                    kind=entry["kind"],
                    inputs=inputs,
                    labels=labels,
                    output=entry["output"],
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError([f"{path}[{i}]: bad figure spec: {exc}"])
    return specs


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="rtplab-plots")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render figures from experiment CSVs")
    group = p_render.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="JSON figure spec file")
    group.add_argument("--scenario-dir", help="scenario output directory")
    p_render.add_argument("--out", default=None, help="figure output directory")

    args = parser.parse_args(argv)
    try:
        if args.spec:
            specs = _specs_from_json(args.spec)
            if args.out:
                specs = [
                    FigureSpec(
                        kind=s.kind, inputs=s.inputs, labels=s.labels,
                        output=str(Path(args.out) / Path(s.output).name),
                    )
                    for s in specs
                ]
        else:
            specs = discover_specs(args.scenario_dir, args.out)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        _print_errors(exc)
        return 2

    failures = 0
    for spec in specs:
        try:
            result = render(spec)
        except SchemaError as exc:
            _print_errors(exc)
            failures += 1
            continue
        print(
            f"{result['output']}: {result['series']} series, "
            f"{result['points']} plotted points"
        )
    return 1 if failures else 0


def _print_errors(exc) -> None:
    errors = getattr(exc, "errors", None) or [str(exc)]
    for err in errors:
        print(f"error: {err}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
