"""Command line front end.

Subcommands: gen, render, estimate, plot-threshold, calibrate,
stability, serve. Exit codes: 0 success, 1 usage error, 2 data or
domain error. All JSON output goes through the canonical encoder, so a
CLI response file is byte-identical to the service's response for the
same payload.

calibrate regenerates each response record's stimulus from its factor
columns. The response CSV may carry an optional extra `seed` column;
without one, the row index is the generation seed. Geometry not present
in the CSV (width, height, snr) comes from flags with the standard
stimulus defaults.
"""

import argparse
import csv
import sys

from .calibration import (
    PREDICTORS,
    extract_thresholds,
    fit_threshold_model,
    model_differential,
    read_response_csv,
    summarize_differentials,
)
from .charts import write_step_chart
from .density import MODES, build_density_tree, compute_histogram, resolution_scan
from .distance import build_distance_tree
from .errors import PerceptaError
from .images import read_image, write_image
from .jsonutil import SCHEMA_VERSION, canonical_json, decode_real, encode_real, load_json_file
from .pipeline import (
    DEFAULT_OPACITY,
    DEFAULT_POINT_AREA,
    MODELS,
    image_from_dict,
    image_to_dict,
    run_estimate,
    run_generate,
    run_render,
)
from .synth import GenParams, RenderParams, generate_dataset, rasterize
from .topology import MergeTree, ThresholdPlot, TreeComponent, threshold_for_count

DEFAULT_BIND = "127.0.0.1:8765"


class _Parser(argparse.ArgumentParser):
    """argparse defaults usage failures to exit 2; this CLI reserves 2
    for data errors, so remap usage failures to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write_text(path, text):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_source_flags(p):
    p.add_argument("--dataset", metavar="PATH", help="dataset JSON source")
    p.add_argument("--image", metavar="PATH", help="PGM/PNG image source")
    p.add_argument("--params", metavar="PATH",
                   help="generation params JSON source (with --seed)")
    p.add_argument("--seed", type=int, help="generation seed for --params")
    p.add_argument("--min-sep", type=float, default=0.0,
                   help="minimum center separation for --params")


def _build_source(args, parser):
    chosen = [name for name in ("dataset", "image", "params") if getattr(args, name)]
    if len(chosen) != 1:
        parser.error("exactly one of --dataset, --image, --params is required")
    if args.dataset:
        return {"dataset": load_json_file(args.dataset, "dataset")}
    if args.image:
        return {"image": image_to_dict(read_image(args.image))}
    if args.seed is None:
        parser.error("--params requires --seed")
    return {"generate": {
        "params": load_json_file(args.params, "params"),
        "seed": args.seed,
        "min_center_separation": args.min_sep,
    }}


def _add_model_flags(p):
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("-B", "--bin-size", type=int, help="histogram bin size (density)")
    p.add_argument("--mode", choices=MODES, default="coverage")
    p.add_argument("--subsample", type=int, help="subsample the points before rendering")
    p.add_argument("--subsample-seed", type=int)
    p.add_argument("-P", "--point-area", type=float, help="rendered point area override")
    p.add_argument("-O", "--opacity", type=float, help="rendered opacity override")


def _build_estimate_payload(args, parser):
    payload = {"schema": SCHEMA_VERSION,
               "model": args.model,
               "source": _build_source(args, parser)}
    if args.model == "density":
        if args.bin_size is None:
            parser.error("--model density requires --bin-size")
        payload["density"] = {"bin_size": args.bin_size, "mode": args.mode}
    overrides = {}
    for key, value in (("subsample", args.subsample),
                       ("subsample_seed", args.subsample_seed),
                       ("point_area", args.point_area),
                       ("opacity", args.opacity)):
        if value is not None:
            overrides[key] = value
    if overrides:
        payload["overrides"] = overrides
    return payload


def _cmd_gen(args, parser):
    params = {
        "width": args.width,
        "height": args.height,
        "cluster_count": args.clusters,
        "distribution_size": args.spread,
        "point_count": args.points,
        "snr": args.snr,
    }
    doc = run_generate({"schema": SCHEMA_VERSION, "params": params, "seed": args.seed,
                        "min_center_separation": args.min_sep})
    _write_text(args.output, canonical_json(doc))
    return 0


def _cmd_render(args, parser):
    payload = {
        "schema": SCHEMA_VERSION,
        "dataset": load_json_file(args.dataset, "dataset"),
        "render": {"point_area": args.point_area, "opacity": args.opacity},
    }
    write_image(run_render(payload), args.output)
    return 0


def _cmd_estimate(args, parser):
    payload = _build_estimate_payload(args, parser)
    if args.threshold is not None:
        payload["threshold"] = args.threshold
    response = run_estimate(payload)
    if args.output:
        _write_text(args.output, canonical_json(response))
    elif args.threshold is not None:
        print(response["count_at"]["count"])
    else:
        _write_text(None, canonical_json(response))
    return 0


def _tree_from_pairs(unit, pair_dicts):
    components = [
        TreeComponent(id=p["id"], birth=float(p["birth"]),
                      death=decode_real(p["death"], "death"))
        for p in pair_dicts
    ]
    return MergeTree(unit=unit, components=components)


def _plot_csv(plot):
    lines = ["threshold,count"]
    lines.append(f"0.0,{plot.evaluate(0.0)}")
    for b in sorted(set(b for b in plot.breakpoints if b > 0)):
        lines.append(f"{b!r},{plot.evaluate(b)}")
    return "\n".join(lines) + "\n"


def _cmd_plot_threshold(args, parser):
    response = run_estimate(_build_estimate_payload(args, parser))
    plot = ThresholdPlot.from_dict(response["threshold_plot"])
    doc = {"schema": SCHEMA_VERSION,
           "threshold_plot": response["threshold_plot"],
           "persistence_pairs": response["persistence_pairs"]}
    marker = None
    if args.count is not None:
        tree = _tree_from_pairs(plot.unit, response["persistence_pairs"])
        pick = threshold_for_count(tree, args.count)
        marker = pick.threshold
        doc["pick"] = {
            "target": args.count,
            "threshold": pick.threshold,
            "achieved_count": pick.achieved_count,
            "exact": pick.exact,
            "interval": [encode_real(pick.interval[0]), encode_real(pick.interval[1])],
        }
    if args.svg:
        write_step_chart(args.svg, [plot], title=f"{args.model} model", marker=marker)
    if args.csv:
        _write_text(args.csv, _plot_csv(plot))
    if args.json or not (args.svg or args.csv):
        _write_text(args.json, canonical_json(doc))
    return 0


def _response_seeds(path, count):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if "seed" in [f.strip() for f in reader.fieldnames or []]:
            return [int(row["seed"]) for row in reader]
    return list(range(count))


def _record_tree(record, seed, args):
    params = GenParams(width=args.width, height=args.height,
                       cluster_count=record.C, distribution_size=record.S,
                       point_count=record.N, snr=args.snr)
    dataset = generate_dataset(params, seed)
    if args.model == "distance":
        return build_distance_tree(dataset.centers)
    image = rasterize(dataset, RenderParams(point_area=record.P, opacity=record.O))
    return build_density_tree(compute_histogram(image, args.bin_size, args.mode))


def _cmd_calibrate(args, parser):
    records = read_response_csv(args.responses)
    seeds = _response_seeds(args.responses, len(records))
    trees = [_record_tree(r, s, args) for r, s in zip(records, seeds)]
    filled = extract_thresholds(records, trees)
    model = fit_threshold_model(filled, args.predictor)
    diffs = [model_differential(r, model, t) for r, t in zip(filled, trees)]
    summary = summarize_differentials(diffs)
    if args.model_out:
        _write_text(args.model_out, canonical_json(model.to_dict()))
    if args.summary_out:
        _write_text(args.summary_out, canonical_json(summary.to_dict()))
    inexact = sum(1 for r in filled if not r.extraction_exact)
    coeffs = ", ".join(f"{c:.6g}" for c in model.coefficients)
    print(f"fit {model.predictor}: coefficients [{coeffs}], "
          f"rms residual {model.residual_rms:.6g}, "
          f"differential mean {summary.mean:.4f} std {summary.std:.4f}, "
          f"{inexact}/{len(filled)} inexact extractions")
    return 0


def _materialize_image(args, parser):
    source = _build_source(args, parser)
    if "image" in source:
        return image_from_dict(source["image"])
    if "dataset" in source:
        from .synth import Dataset
        dataset = Dataset.from_dict(source["dataset"], "dataset")
    else:
        gen = source["generate"]
        dataset = generate_dataset(GenParams.from_dict(gen["params"], "params"),
                                   gen["seed"],
                                   min_center_separation=gen["min_center_separation"])
    render = RenderParams(
        point_area=args.point_area if args.point_area is not None else DEFAULT_POINT_AREA,
        opacity=args.opacity if args.opacity is not None else DEFAULT_OPACITY,
    )
    return rasterize(dataset, render)


def _cmd_stability(args, parser):
    try:
        bins = [int(b) for b in args.bins.split(",") if b.strip()]
    except ValueError:
        parser.error(f"--bins expects comma-separated integers, got {args.bins!r}")
    if not bins:
        parser.error("--bins expects at least one bin size")
    image = _materialize_image(args, parser)
    points = resolution_scan(image, bins, args.count, args.mode)
    doc = {"schema": SCHEMA_VERSION, "mode": args.mode, "target_count": args.count,
           "points": [p.to_dict() for p in points]}
    if args.output:
        _write_text(args.output, canonical_json(doc))
    else:
        for p in points:
            print(f"B={p.bin_size} threshold={p.threshold!r} "
                  f"count={p.achieved_count} exact={p.exact}")
    return 0


def _cmd_serve(args, parser):
    from .service import serve_api
    serve_api(args.bind)
    return 0


def build_parser():
    parser = _Parser(prog="percepta",
                     description="Topological cluster-count estimation for scatterplots.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("gen", help="generate a clustered dataset")
    p.add_argument("--width", type=int, default=550)
    p.add_argument("--height", type=int, default=550)
    p.add_argument("-C", "--clusters", type=int, required=True)
    p.add_argument("-S", "--spread", type=float, required=True)
    p.add_argument("-N", "--points", type=int, required=True)
    p.add_argument("--snr", type=float, default=10.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-sep", type=float, default=0.0)
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("render", help="rasterize a dataset to PGM or PNG")
    p.add_argument("--dataset", required=True, metavar="PATH")
    p.add_argument("-P", "--point-area", type=float, default=DEFAULT_POINT_AREA)
    p.add_argument("-O", "--opacity", type=float, default=DEFAULT_OPACITY)
    p.add_argument("-o", "--output", required=True, metavar="PATH",
                   help="output image; extension picks the format")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("estimate", help="estimate cluster count via a merge tree")
    _add_source_flags(p)
    _add_model_flags(p)
    p.add_argument("-T", "--threshold", type=float,
                   help="persistence threshold; prints the count when no -o is given")
    p.add_argument("-o", "--output", metavar="PATH", help="write the full response JSON")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("plot-threshold", help="emit the threshold plot as JSON/CSV/SVG")
    _add_source_flags(p)
    _add_model_flags(p)
    p.add_argument("-k", "--count", type=int, help="back-solve a threshold for this count")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--svg", metavar="PATH")
    p.set_defaults(func=_cmd_plot_threshold)

    p = sub.add_parser("calibrate", help="fit a linear threshold model to responses")
    p.add_argument("--responses", required=True, metavar="PATH")
    p.add_argument("--predictor", required=True, choices=PREDICTORS)
    p.add_argument("--model", choices=MODELS, default="density")
    p.add_argument("-B", "--bin-size", type=int, default=20)
    p.add_argument("--mode", choices=MODES, default="coverage")
    p.add_argument("--width", type=int, default=550)
    p.add_argument("--height", type=int, default=550)
    p.add_argument("--snr", type=float, default=10.0)
    p.add_argument("--model-out", metavar="PATH")
    p.add_argument("--summary-out", metavar="PATH")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("stability", help="scan a target count across histogram resolutions")
    _add_source_flags(p)
    p.add_argument("--bins", default="5,10,20,40",
                   help="comma-separated histogram bin sizes")
    p.add_argument("-k", "--count", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default="coverage")
    p.add_argument("-P", "--point-area", type=float)
    p.add_argument("-O", "--opacity", type=float)
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bind", default=DEFAULT_BIND, metavar="HOST:PORT",
                   help="overridden by PERCEPTA_BIND when set")
    p.set_defaults(func=_cmd_serve)

    parser.set_defaults(func=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is None:
            parser.error("a subcommand is required")
        return args.func(args, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except PerceptaError as exc:
        print(f"percepta: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
