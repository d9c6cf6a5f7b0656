"""Batch command line: convert, project, stats, extract, serve.

Each command loads a .data/.names pair, runs one pipeline stage and writes
plain files, so runs can be scripted and diffed. Rejected input lines are
reported on stderr with their line numbers but do not abort the load.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .cluster_stats import attribute_summary, before_after_report
from .dataset import (
    MISSING,
    Dataset,
    format_number,
    parse_data,
    parse_names,
    serialize_names,
    write_data,
)
from .extract import (
    ConditionSchema,
    ExtractError,
    NUMERIC,
    Query,
    emit_sql,
    evaluate,
    export,
    make_condition,
    smart_link,
)
from .fastmap import Projection, ProjectionOptions
from .preprocess import index_dataset
from .session import ProjectRequest, Session


def _load(data_path: str, names_path: str) -> Dataset:
    meta = parse_names(Path(names_path).read_text())
    dataset, errors = parse_data(Path(data_path).read_text(), meta)
    for err in errors:
        print(f"warning: {data_path}:{err.line}: {err.message}", file=sys.stderr)
    return dataset


def _add_io_args(parser):
    parser.add_argument("--data", required=True, help=".data file")
    parser.add_argument("--names", required=True, help=".names file")


def cmd_convert(args) -> int:
    dataset = _load(args.data, args.names)
    fmt = {"data_names": "data_names", "text": "plain_text", "html": "html", "delimited": "delimited"}[
        args.out_format
    ]
    files = export(dataset, fmt)
    out = Path(args.out)
    if fmt == "data_names":
        base = out.with_suffix("") if out.suffix in (".data", ".names") else out
        base.with_suffix(".names").write_text(files[".names"])
        base.with_suffix(".data").write_text(files[".data"])
        print(f"wrote {base.with_suffix('.names')} and {base.with_suffix('.data')}")
    else:
        content = next(iter(files.values()))
        out.write_text(content)
        print(f"wrote {out}")
    return 0


def _parse_impute(text):
    if text in (None, "none"):
        return None, None
    if text.startswith("const:"):
        return "const", text.split(":", 1)[1]
    if text in ("drop", "mean", "class-mean"):
        return text, None
    raise SystemExit(f"error: unknown --impute value {text!r}")


def _run_projection(dataset, args):
    strategy, constant = _parse_impute(args.impute)
    session = Session(dataset)
    request = ProjectRequest(
        options=ProjectionOptions(k=args.k, pivot_iterations=args.pivot_iters, seed=args.seed),
        znorm=args.znorm,
        impute=strategy,
        impute_constant=constant,
    )
    return session.project(request)


def _class_tokens(dataset, row_ids):
    meta = dataset.metadata
    if meta.class_attribute is None:
        return {rid: "" for rid in row_ids}
    col = meta.attr_index(meta.class_attribute)
    missing_token = meta.attribute(meta.class_attribute).missing_token(meta)
    by_id = dict(zip(dataset.row_ids, dataset.rows))
    return {
        rid: missing_token if by_id[rid][col] is MISSING else by_id[rid][col]
        for rid in row_ids
    }


def cmd_project(args) -> int:
    dataset = _load(args.data, args.names)
    projection = _run_projection(dataset, args)
    classes = _class_tokens(dataset, projection.row_ids)
    header = ["row_id"] + [f"x{i + 1}" for i in range(projection.k)] + ["class"]
    lines = ["\t".join(header)]
    for rid, point in zip(projection.row_ids, projection.X):
        cells = [str(rid)] + [format_number(float(v)) for v in point] + [str(classes[rid])]
        lines.append("\t".join(cells))
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({projection.n} rows, {projection.converged_axes} axes)")
    return 0


def _load_coords(path, dataset):
    lines = Path(path).read_text().strip().split("\n")
    header = lines[0].split("\t")
    k = len(header) - 2
    row_ids, coords = [], []
    for line in lines[1:]:
        cells = line.split("\t")
        row_ids.append(int(cells[0]))
        coords.append([float(c) for c in cells[1 : 1 + k]])
    return Projection(
        X=np.asarray(coords),
        pivot_ids=np.zeros((2, k), dtype=int),
        options=ProjectionOptions(k=k),
        converged_axes=k,
        row_ids=row_ids,
    )


def cmd_stats(args) -> int:
    dataset = _load(args.data, args.names)
    indexed = index_dataset(dataset)
    projection = _load_coords(args.coords, dataset) if args.coords else None
    report = {
        "attributes": [
            attribute_summary(dataset, a.name).to_dict()
            for a in dataset.metadata.attributes
            if not a.skip
        ],
        "clusters": None,
        "note": None,
    }
    if dataset.metadata.class_attribute is None:
        report["note"] = "no class attribute; cluster diameters unavailable"
    else:
        try:
            report["clusters"] = before_after_report(indexed, projection).to_dict()
        except Exception as exc:  # surfaced in the report, not as a crash
            report["note"] = str(exc)
    Path(args.out).write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    print(f"wrote {args.out}")
    return 0


def _parse_where(specs, schema: ConditionSchema):
    conditions = []
    for spec in specs or []:
        parts = spec.split(":", 2)
        if len(parts) < 2:
            raise SystemExit(f"error: --where needs attr:op[:operand], got {spec!r}")
        attr, op = parts[0], parts[1]
        operand = parts[2] if len(parts) == 3 else None
        if operand is not None and schema.kind_of(attr) == NUMERIC:
            try:
                operand = float(operand)
            except ValueError:
                raise SystemExit(f"error: numeric operand expected in {spec!r}")
        try:
            conditions.append(make_condition(schema, attr, op, operand))
        except ExtractError as exc:
            raise SystemExit(f"error: {exc}")
    return conditions


def cmd_extract(args) -> int:
    dataset = _load(args.data, args.names)
    schema = ConditionSchema.from_metadata(dataset.metadata)
    conditions = _parse_where(args.where, schema)
    query = Query(
        source=Path(args.data).stem,
        expr=smart_link(conditions),
        columns=[c for c in (args.columns or "").split(",") if c],
        sort=[_parse_sort_key(k) for k in (args.sort or "").split(",") if k],
        distinct=args.distinct,
    )
    if args.emit_sql:
        print(emit_sql(query))
    result = evaluate(query, dataset)
    if args.out:
        out = Path(args.out)
        if out.suffix == ".data":
            out.write_text(write_data(result))
            out.with_suffix(".names").write_text(serialize_names(result.metadata))
            print(f"wrote {out} and {out.with_suffix('.names')} ({result.n_rows} rows)")
        else:
            files = export(result, "delimited")
            out.write_text(files[".txt"])
            print(f"wrote {out} ({result.n_rows} rows)")
    return 0


def _parse_sort_key(text):
    if ":" in text:
        attr, direction = text.rsplit(":", 1)
    else:
        attr, direction = text, "asc"
    return attr, direction


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir, max_objects=args.max_objects)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="explorer",
        description="FastMap-based explorer for class-labeled tabular data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="re-emit a dataset in another format")
    _add_io_args(p)
    p.add_argument("--out-format", required=True, choices=["data_names", "text", "html", "delimited"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("project", help="project objects to k dimensions")
    _add_io_args(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--pivot-iters", type=int, default=5)
    p.add_argument("--znorm", choices=["none", "sigma", "mad"], default="none")
    p.add_argument("--impute", default="none", help="drop | mean | class-mean | const:V | none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="TSV: row_id, x1..xk, class")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("stats", help="attribute summaries and cluster diameters")
    _add_io_args(p)
    p.add_argument("--coords", help="coords TSV from 'explorer project'")
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("extract", help="filter/sort/project columns, emit SQL")
    _add_io_args(p)
    p.add_argument("--where", action="append", metavar="ATTR:OP:OPERAND",
                   help="repeatable condition triple; conditions are smart-linked")
    p.add_argument("--columns", help="comma-separated column subset")
    p.add_argument("--sort", help="comma-separated attr:asc|desc keys")
    p.add_argument("--distinct", action="store_true")
    p.add_argument("--emit-sql", action="store_true", help="print the query as SQL")
    p.add_argument("--out", help=".data path (writes the .names sibling) or delimited text")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", help="directory with .data/.names files openable by path")
    p.add_argument("--max-objects", type=int, default=50_000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
