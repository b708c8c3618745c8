"""Thermal-camera touch, hover and trace detection."""

import json

from ._core import (
    DegenerateFrame,
    DetectConfig,
    DetectionResult,
    DetectorConfig,
    FingertipConfig,
    FormatError,
    InteractionEvent,
    IoError,
    MissingBaseline,
    PreprocessConfig,
    ReferenceLost,
    Roi,
    SimilarityTransform,
    StabilizedFrame,
    TracePolyline,
    convex_hull,
    detect,
    gaussian_blur,
    normalize,
    read_sequence,
    run_cli,
    select_rois,
    stabilize,
    trace,
    write_sequence,
)
from . import _core

__all__ = [
    "DegenerateFrame",
    "DetectConfig",
    "DetectionResult",
    "DetectorConfig",
    "FingertipConfig",
    "FormatError",
    "InteractionEvent",
    "IoError",
    "MissingBaseline",
    "PreprocessConfig",
    "ReferenceLost",
    "Roi",
    "SimilarityTransform",
    "StabilizedFrame",
    "TracePolyline",
    "convex_hull",
    "detect",
    "evaluate",
    "gaussian_blur",
    "generate",
    "make_corpus",
    "normalize",
    "read_sequence",
    "run_cli",
    "select_rois",
    "stabilize",
    "trace",
    "write_sequence",
]


def _with_truth(clip):
    clip["truth"] = json.loads(clip.pop("truth_json"))
    return clip


def generate(kind, seed=0, fingers=1, wide=False, config=None):
    """Render a synthetic clip.

    ``kind`` is one of touch, hover, negative, stroke or jitter. Passing a
    scene ``config`` dict instead renders that scene. Returns a dict with
    ``fps``, ``frames`` (uint16 arrays), ``rgb`` (uint8 arrays or None) and
    ``truth``.
    """
    if config is not None:
        return _with_truth(_core.generate_from_config(json.dumps(config)))
    return _with_truth(_core.generate(kind, seed, fingers, wide))


def make_corpus(out_dir, touch=15, hover=5, negative=5, seed=1, multi_finger=-1, threads=1):
    """Write a labelled corpus to ``out_dir`` and return its manifest."""
    recipe = {"touch": touch, "hover": hover, "negative": negative, "seed": seed, "multi_finger": multi_finger}
    return json.loads(_core.make_corpus(json.dumps(recipe), str(out_dir), threads))


def evaluate(corpus, results, threads=1):
    """Score ``detect`` output in ``results`` against ``corpus`` ground truth."""
    return json.loads(_core.evaluate(str(corpus), str(results), threads))
