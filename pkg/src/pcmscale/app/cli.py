"""Command-line interface.

Subcommands: catalog, simulate-ri, clean, analyze, calibrate, serve, export.
Machine-readable output goes to stdout, diagnostics to stderr; exit status is
0 on success, 1 on runtime failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .. import calibration, dataset, ri, scales
from .sessions import export_bundle
from .store import RecordLog

__all__ = ["main", "build_parser"]


def _detect_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "jsonl" if path.endswith((".jsonl", ".ndjson")) else "csv"


def _load_records(path: str, fmt: str | None) -> list[dataset.RespondentRecord]:
    fmt = _detect_format(path, fmt)
    with open(path, encoding="utf-8", newline="") as fh:
        return dataset.ingest(fh, format=fmt)


def _parse_scale_params(raw: str) -> scales.ScaleParams:
    parts = [float(p) for p in raw.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--scale needs s,m,l — got {raw!r}")
    return scales.ScaleParams(*parts)


def _parse_grid(raw: str) -> list[scales.ScaleParams]:
    if raw == "default":
        return scales.enumerate_grid()
    parts = [float(p) for p in raw.split(",")]
    if len(parts) != 4:
        raise ValueError(
            f"--grid must be 'default' or s_max,m_max,l_max,step — got {raw!r}"
        )
    s_max, m_max, l_max, step = parts
    return scales.enumerate_grid(step=step, s_max=s_max, m_max=m_max, l_max=l_max)


# -- subcommand handlers ------------------------------------------------------


def _cmd_catalog(args) -> int:
    if args.csv:
        sys.stdout.write(scales.catalog_csv())
        return 0
    if args.name is None:
        for name in scales.catalog_names():
            print(name)
        return 0
    params = {}
    for raw in args.param or []:
        key, _, val = raw.partition("=")
        if not _:
            raise ValueError(f"--param expects key=value, got {raw!r}")
        params[key] = float(val)
    values = scales.catalog_values(args.name, **params)
    print(",".join(f"{v:.10g}" for v in values))
    return 0


def _cmd_simulate_ri(args) -> int:
    values = [float(v) for v in args.scale.split(",")]
    est = ri.simulate_ri(
        n=args.n,
        scale_values=values,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    json.dump(est.as_dict(), sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_clean(args) -> int:
    records = _load_records(args.input, args.format)
    outcome = dataset.clean(records)
    if args.output:
        fmt = _detect_format(args.output, args.format)
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            dataset.export_records(outcome.kept, fh, format=fmt)
    if args.removed:
        with open(args.removed, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "reason"])
            for rid, reason in outcome.removed:
                writer.writerow([rid, reason.value])
    summary = {
        "input": len(records),
        "kept": len(outcome.kept),
        "removed": {
            reason.value: len(outcome.removed_ids(reason))
            for reason in dataset.RemovalReason
        },
        "metadata": outcome.metadata,
    }
    json.dump(summary, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_analyze(args) -> int:
    records = _load_records(args.input, args.format)
    kept = dataset.clean(records).kept
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if args.what == "ratios":
        category = scales.VerbalCategory(args.category)
        hist = dataset.ratio_histogram(
            kept, category, bin_width=args.bin_width, cap=args.cap
        )
        writer.writerow(["bin_center", "count"])
        for center, count in hist:
            writer.writerow([f"{center:.10g}", count])
    elif args.what == "cr":
        params = _parse_scale_params(args.scale)
        hist = dataset.cr_histogram(kept, params, args.ri, bin_width=args.bin_width)
        writer.writerow(["bin_left", "count"])
        for left, count in hist:
            writer.writerow([f"{left:.10g}", count])
    else:  # repeat
        params = _parse_scale_params(args.scale)
        stats = dataset.distance_category_stats(kept, params, args.ri)
        writer.writerow(["distance", "count", "min", "q1", "median", "q3", "max"])
        for d, st in stats.items():
            writer.writerow(
                [d, st.count] + [f"{v:.10g}" for v in (st.min, st.q1, st.median, st.q3, st.max)]
            )
    return 0


def _cmd_calibrate(args) -> int:
    records = _load_records(args.input, args.format)
    kept = dataset.clean(records).kept
    if not kept:
        raise ValueError("no records left after cleaning")
    grid = _parse_grid(args.grid)
    method = calibration.WeightMethod(args.method)
    result = calibration.calibrate_average(
        kept, grid, method,
        per_respondent=bool(args.per_respondent),
        workers=args.workers,
    )
    summary = {
        "method": result.method.value,
        "best": {"s": result.best.s, "m": result.best.m, "l": result.best.l},
        "mean_distance": result.best_distance,
        "evaluated_count": result.evaluated_count,
        **result.metadata,
    }
    if args.per_respondent:
        with open(args.per_respondent, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "s", "m", "l", "distance"])
            for rid, params, distance in result.per_respondent:
                writer.writerow(
                    [rid, params.s, params.m, params.l, f"{distance:.17g}"]
                )
    if args.summary:
        Path(args.summary).write_text(
            json.dumps(summary, indent=2) + "\n", encoding="utf-8"
        )
    json.dump(summary, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_serve(args) -> int:
    from .service import SurveyHttpServer  # local import: pulls in http.server

    server = SurveyHttpServer(
        RecordLog(args.store_path), host=args.host, port=args.port,
        session_seed=args.seed,
    )
    print(f"serving on {server.url} (store: {args.store_path})", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        print("shutting down", file=sys.stderr)
    return 0


def _cmd_export(args) -> int:
    bundle = export_bundle(RecordLog(args.store_path))
    dataset.export_records(bundle.records, sys.stdout, format=args.export_format)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmscale",
        description="Verbal comparison-scale calibration toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="published numeric scales")
    p.add_argument("--name", help="scale name (omit to list names)")
    p.add_argument("--param", action="append", help="override, e.g. alpha=2")
    p.add_argument("--csv", action="store_true", help="dump the catalog as CSV")
    p.set_defaults(fn=_cmd_catalog)

    p = sub.add_parser("simulate-ri", help="Monte-Carlo random index")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scale", required=True, help="comma-joined values >= 1")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=_cmd_simulate_ri)

    p = sub.add_parser("clean", help="apply the cleaning rules")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--output", help="file for the kept records")
    p.add_argument("--removed", help="CSV file for the removal report")
    p.set_defaults(fn=_cmd_clean)

    p = sub.add_parser("analyze", help="descriptive analyses on cleaned data")
    p.add_argument("what", choices=["ratios", "cr", "repeat"])
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--category", choices=[c.value for c in scales.VerbalCategory],
                   default="equal")
    p.add_argument("--bin-width", type=float, default=None)
    p.add_argument("--cap", type=float, default=10.0)
    p.add_argument("--scale", default="1.5,1.7,2.0", help="s,m,l for CR analyses")
    p.add_argument("--ri", type=float, default=0.09224)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("calibrate", help="grid-search the optimal scale")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--method", choices=["em", "llsm"], required=True)
    p.add_argument("--grid", default="default",
                   help="'default' or s_max,m_max,l_max,step")
    p.add_argument("--per-respondent", help="CSV output of individual optima")
    p.add_argument("--summary", help="JSON output file")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=_cmd_calibrate)

    p = sub.add_parser("serve", help="run the survey HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store-path", required=True)
    p.add_argument("--seed", type=int,
                   help="reproducible session seeds for the whole experiment")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("export", help="dump completed sessions from a store")
    p.add_argument("--store-path", required=True)
    p.add_argument("--format", dest="export_format", choices=["csv", "jsonl"],
                   default="csv")
    p.set_defaults(fn=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "what", None) in ("ratios",) and args.bin_width is None:
        args.bin_width = 0.25
    elif getattr(args, "what", None) == "cr" and args.bin_width is None:
        args.bin_width = 0.005
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
