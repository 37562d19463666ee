"""Shared request handling behind the CLI and the HTTP service.

Every externally visible computation funnels through run_generate,
run_render, run_estimate, and run_compare, which take plain dicts (the
wire payloads) and return plain dicts or images. The CLI and the service
serialize the returned dicts with the same canonical encoder, so the two
surfaces emit byte-identical documents for identical payloads.

Estimate request layout::

    {
      "schema": 1,
      "model": "distance" | "density",
      "source": {exactly one of "dataset" | "image" | "generate"},
      "density": {"bin_size": B, "mode": ...},   required iff model=density
      "overrides": {"subsample", "subsample_seed", "point_area", "opacity"},
      "threshold": T                              optional
    }

Sources: "dataset" is an inline dataset document; "image" is an inline
intensity grid {"width", "height", "intensity": [[...]]}; "generate" is
{"params", "seed", optional "min_center_separation"} evaluated on the
fly. Overrides apply before rasterization, so they are only accepted for
point sources under the density model; subsampling draws without
replacement from numpy's default generator seeded with subsample_seed
(default 0) and keeps the original point order. When the density model
rasterizes a point source without overrides it uses point_area 3.0 and
opacity 1.0.

Responses echo provenance (the generation inputs verbatim, or dimensions
plus a content digest for materialized inputs) and the resolved analysis
settings, so any response can be reproduced from its own text.
"""

import hashlib

import numpy as np

from .density import MODES, build_density_tree, compute_histogram
from .distance import build_distance_tree
from .errors import DataError, ParameterError
from .jsonutil import (SCHEMA_VERSION, as_int, as_real, canonical_json,
                       check_schema, require)
from .synth import Dataset, GenParams, RenderParams, StimulusImage, generate_dataset, rasterize
from .topology import cluster_count_at, persistence_pairs, threshold_plot

MODELS = ("distance", "density")

DEFAULT_POINT_AREA = 3.0
DEFAULT_OPACITY = 1.0

_SOURCE_KINDS = ("dataset", "image", "generate")
_TOP_KEYS = {"schema", "model", "source", "density", "overrides", "threshold"}
_OVERRIDE_KEYS = {"subsample", "subsample_seed", "point_area", "opacity"}


def image_from_dict(data, context="image"):
    try:
        intensity = np.asarray(require(data, "intensity", context), dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DataError(f"{context}.intensity: not a rectangular number grid: {exc}") from exc
    return StimulusImage(
        width=as_int(require(data, "width", context), context + ".width"),
        height=as_int(require(data, "height", context), context + ".height"),
        intensity=intensity,
    )


def image_to_dict(image):
    return {
        "width": image.width,
        "height": image.height,
        "intensity": [[float(v) for v in row] for row in image.intensity],
    }


def _digest(data):
    return hashlib.sha256(data).hexdigest()[:16]


def _reject_unknown(mapping, allowed, context):
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise DataError(f"{context}: unknown fields {unknown}")


def _subsample(dataset, count, seed):
    total = len(dataset.points)
    if not 1 <= count <= total:
        raise ParameterError(
            f"subsample must be between 1 and the point total {total}, got {count}")
    keep = np.sort(np.random.default_rng(seed).choice(total, size=count, replace=False))
    return Dataset(
        params=dataset.params,
        centers=dataset.centers,
        points=dataset.points[keep],
        origins=dataset.origins[keep],
    )


def run_generate(payload):
    """Generation payload {"params", "seed", "min_center_separation"?} -> dataset dict."""
    if not isinstance(payload, dict):
        raise DataError("generate request: expected a JSON object")
    check_schema(payload, "generate request")
    _reject_unknown(payload, {"schema", "params", "seed", "min_center_separation"},
                    "generate request")
    params = GenParams.from_dict(require(payload, "params", "generate request"),
                                 "generate request.params")
    seed = as_int(require(payload, "seed", "generate request"), "generate request.seed")
    min_sep = as_real(payload.get("min_center_separation", 0.0),
                      "generate request.min_center_separation")
    return generate_dataset(params, seed, min_center_separation=min_sep).to_dict()


def run_render(payload):
    """Render payload {"dataset", "render"?} -> StimulusImage."""
    if not isinstance(payload, dict):
        raise DataError("render request: expected a JSON object")
    check_schema(payload, "render request")
    _reject_unknown(payload, {"schema", "dataset", "render"}, "render request")
    dataset = Dataset.from_dict(require(payload, "dataset", "render request"),
                                "render request.dataset")
    if "render" in payload:
        render = RenderParams.from_dict(payload["render"], "render request.render")
    else:
        render = RenderParams(point_area=DEFAULT_POINT_AREA, opacity=DEFAULT_OPACITY)
    return rasterize(dataset, render)


def _resolve_source(source):
    if not isinstance(source, dict):
        raise DataError("estimate request.source: expected a JSON object")
    kinds = [k for k in _SOURCE_KINDS if k in source]
    _reject_unknown(source, _SOURCE_KINDS, "estimate request.source")
    if len(kinds) != 1:
        raise DataError(
            "estimate request.source: exactly one of "
            f"{list(_SOURCE_KINDS)} required, got {kinds or 'none'}")
    kind = kinds[0]
    if kind == "dataset":
        dataset = Dataset.from_dict(source["dataset"], "estimate request.source.dataset")
        digest = _digest(canonical_json(dataset.to_dict()).encode())
        prov = {
            "kind": "dataset",
            "params": dataset.params.to_dict(),
            "point_total": len(dataset.points),
            "digest": digest,
        }
        return kind, dataset, None, prov
    if kind == "generate":
        gen = source["generate"]
        if not isinstance(gen, dict):
            raise DataError("estimate request.source.generate: expected a JSON object")
        _reject_unknown(gen, {"params", "seed", "min_center_separation"},
                        "estimate request.source.generate")
        params = GenParams.from_dict(require(gen, "params", "estimate request.source.generate"),
                                     "estimate request.source.generate.params")
        seed = as_int(require(gen, "seed", "estimate request.source.generate"),
                      "estimate request.source.generate.seed")
        min_sep = as_real(gen.get("min_center_separation", 0.0),
                          "estimate request.source.generate.min_center_separation")
        dataset = generate_dataset(params, seed, min_center_separation=min_sep)
        prov = {
            "kind": "generate",
            "params": params.to_dict(),
            "seed": seed,
            "min_center_separation": min_sep,
            "point_total": len(dataset.points),
        }
        return kind, dataset, None, prov
    image = image_from_dict(source["image"], "estimate request.source.image")
    prov = {
        "kind": "image",
        "width": image.width,
        "height": image.height,
        "digest": _digest(image.intensity.tobytes()),
    }
    return kind, None, image, prov


def run_estimate(payload):
    """Estimate payload -> response dict (threshold plot + pairs + provenance)."""
    if not isinstance(payload, dict):
        raise DataError("estimate request: expected a JSON object")
    check_schema(payload, "estimate request")
    _reject_unknown(payload, _TOP_KEYS, "estimate request")
    model = require(payload, "model", "estimate request")
    if model not in MODELS:
        raise ParameterError(f"unknown model {model!r}; expected one of {list(MODELS)}")

    kind, dataset, image, source_prov = _resolve_source(
        require(payload, "source", "estimate request"))

    overrides = payload.get("overrides", {})
    if not isinstance(overrides, dict):
        raise DataError("estimate request.overrides: expected a JSON object")
    _reject_unknown(overrides, _OVERRIDE_KEYS, "estimate request.overrides")
    if overrides and model == "distance":
        raise ParameterError(
            "overrides adjust rasterization; the distance model consumes centers directly")
    if overrides and kind == "image":
        raise ParameterError("overrides require a point source, not a materialized image")
    if "subsample_seed" in overrides and "subsample" not in overrides:
        raise ParameterError("subsample_seed is meaningless without subsample")

    analysis = {"model": model}

    if model == "density":
        options = require(payload, "density", "estimate request")
        if not isinstance(options, dict):
            raise DataError("estimate request.density: expected a JSON object")
        _reject_unknown(options, {"bin_size", "mode"}, "estimate request.density")
        bin_size = as_int(require(options, "bin_size", "estimate request.density"),
                          "estimate request.density.bin_size")
        mode = options.get("mode", "coverage")
        if mode not in MODES:
            raise ParameterError(f"unknown histogram mode {mode!r}")
        if image is None:
            if "subsample" in overrides:
                count = as_int(overrides["subsample"], "estimate request.overrides.subsample")
                sub_seed = as_int(overrides.get("subsample_seed", 0),
                                  "estimate request.overrides.subsample_seed")
                dataset = _subsample(dataset, count, sub_seed)
                analysis["subsample"] = {"count": count, "seed": sub_seed}
            render = RenderParams(
                point_area=as_real(overrides.get("point_area", DEFAULT_POINT_AREA),
                                   "estimate request.overrides.point_area"),
                opacity=as_real(overrides.get("opacity", DEFAULT_OPACITY),
                                "estimate request.overrides.opacity"),
            )
            image = rasterize(dataset, render)
            analysis["render"] = render.to_dict()
        analysis["bin_size"] = bin_size
        analysis["mode"] = mode
        tree = build_density_tree(compute_histogram(image, bin_size, mode))
    else:
        if "density" in payload:
            raise ParameterError("density options are only valid for the density model")
        if dataset is None:
            raise ParameterError(
                "the distance model needs cluster centers; supply a dataset or "
                "generation source, not an image")
        tree = build_distance_tree(dataset.centers)

    plot = threshold_plot(tree)
    pairs = persistence_pairs(tree)
    response = {
        "schema": SCHEMA_VERSION,
        "model": model,
        "threshold_plot": plot.to_dict(),
        "persistence_pairs": [p.to_dict() for p in pairs],
    }
    if "threshold" in payload:
        threshold = as_real(payload["threshold"], "estimate request.threshold")
        response["count_at"] = {
            "threshold": threshold,
            "count": cluster_count_at(tree, threshold),
        }
    response["provenance"] = {"source": source_prov, "analysis": analysis}
    return response


def run_compare(payload):
    """Compare payload {"requests": [...]} -> {"responses": [...]}.

    Accepts either the wrapped form or a bare JSON list of requests.
    """
    if isinstance(payload, dict):
        check_schema(payload, "compare request")
        _reject_unknown(payload, {"schema", "requests"}, "compare request")
        requests = require(payload, "requests", "compare request")
    else:
        requests = payload
    if not isinstance(requests, list):
        raise DataError("compare request: expected a list of estimate requests")
    if not requests:
        raise ParameterError("compare request needs at least one estimate request")
    return {
        "schema": SCHEMA_VERSION,
        "responses": [run_estimate(req) for req in requests],
    }
