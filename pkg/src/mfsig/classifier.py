"""Minimum-distance terrain classifier over class-averaged signatures.

Training averages the fractal-area curves of every tile in a class (in the
linear area domain) and derives one signature from the average. A tile is
assigned to the class whose signature is nearest under ``fd_distance``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .blanket import DEFAULT_DELTA_MAX, DEFAULT_VARIANT, AreaCurve, AreaVariant, area_curve
from .errors import (
    DuplicateLabel,
    EmptyClass,
    MFSError,
    ModelFormatError,
    TileSizeMismatch,
    UnknownTestLabel,
)
from .gray_image import GrayImage, gray_stats, mean_stats
from .signature import LOG_BASE, FDCurve, fd_curve, fd_distance

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    delta_max: int = DEFAULT_DELTA_MAX
    variant: AreaVariant = DEFAULT_VARIANT
    tile_size: int = 128

    def __post_init__(self):
        object.__setattr__(self, "variant", AreaVariant.parse(self.variant))
        if self.delta_max < 2:
            raise MFSError(f"delta_max must be >= 2 for classification, got {self.delta_max}")
        if self.tile_size < 1:
            raise MFSError(f"tile_size must be >= 1, got {self.tile_size}")


@dataclass(frozen=True)
class ClassModel:
    label: str
    avg_area: AreaCurve
    fd: FDCurve
    mean_of_means: float
    mean_of_stds: float
    n_tiles: int


@dataclass(frozen=True)
class ClassifierModel:
    classes: tuple[ClassModel, ...]
    config: ModelConfig

    def __post_init__(self):
        if not self.classes:
            raise MFSError("a model needs at least one class")
        labels = [c.label for c in self.classes]
        if len(set(labels)) != len(labels):
            raise DuplicateLabel(f"duplicate class labels in {labels}")
        for c in self.classes:
            if c.avg_area.delta_max != self.config.delta_max or c.avg_area.variant is not self.config.variant:
                raise ModelFormatError(f"class {c.label!r} curve does not match model config")

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.classes]

    def __getitem__(self, label: str) -> ClassModel:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)


@dataclass(frozen=True)
class ClassificationResult:
    predicted: str
    distances: dict[str, float]
    tie: bool

    def ranked(self) -> list[tuple[str, float]]:
        """Distances sorted ascending; equal distances keep model order."""
        return sorted(self.distances.items(), key=lambda kv: kv[1])


@dataclass
class ConfusionMatrix:
    """Mean signature distance for every (training class, test class) pair."""

    rows: list[str]
    cols: list[str]
    cells: list[list[float]]
    assignments: dict[str, str]
    counts: dict[str, dict[str, int]] = field(default_factory=dict)

    def cell(self, train_label: str, test_label: str) -> float:
        return self.cells[self.rows.index(train_label)][self.cols.index(test_label)]

    def column(self, test_label: str) -> list[float]:
        j = self.cols.index(test_label)
        return [row[j] for row in self.cells]


def _check_tile(tile: GrayImage, tile_size: int) -> None:
    if tile.width != tile_size or tile.height != tile_size:
        raise TileSizeMismatch(
            f"tile is {tile.width}x{tile.height}, model expects {tile_size}x{tile_size}"
        )


def tile_signature(tile: GrayImage, config: ModelConfig) -> FDCurve:
    return fd_curve(area_curve(tile, config.delta_max, config.variant))


def average_area_curves(curves: Sequence[AreaCurve]) -> AreaCurve:
    """Per-delta arithmetic mean of area curves in the linear area domain."""
    if len({(c.delta_max, c.variant) for c in curves}) != 1:
        raise MFSError("area curves to average must share delta_max and variant")
    # fsum over a fixed tile order keeps the mean independent of scheduling
    avg = tuple(math.fsum(col) / len(curves) for col in zip(*(c.values for c in curves)))
    return AreaCurve(avg, curves[0].variant)


def train_class(label: str, tiles: Sequence[GrayImage], config: ModelConfig) -> ClassModel:
    if not tiles:
        raise EmptyClass(f"class {label!r} has no tiles")
    for t in tiles:
        _check_tile(t, config.tile_size)
    avg_area = average_area_curves([area_curve(t, config.delta_max, config.variant) for t in tiles])
    stats = mean_stats(gray_stats(t) for t in tiles)
    return ClassModel(
        label=label,
        avg_area=avg_area,
        fd=fd_curve(avg_area),
        mean_of_means=stats.mean,
        mean_of_stds=stats.std,
        n_tiles=len(tiles),
    )


def train_model(labeled_tiles, config: ModelConfig | None = None) -> ClassifierModel:
    """Build one class model per label.

    ``labeled_tiles`` is a mapping label -> tiles, or a sequence of
    (label, tiles) pairs; the latter is the way to detect duplicate labels.
    Class order follows input order.
    """
    config = config or ModelConfig()
    items = list(labeled_tiles.items()) if isinstance(labeled_tiles, Mapping) else list(labeled_tiles)
    if not items:
        raise MFSError("no classes to train on")
    seen = set()
    for label, _ in items:
        if label in seen:
            raise DuplicateLabel(f"duplicate class label {label!r}")
        seen.add(label)
    return ClassifierModel(tuple(train_class(lbl, list(ts), config) for lbl, ts in items), config)


def classify_signature(fd: FDCurve, model: ClassifierModel) -> ClassificationResult:
    distances = {c.label: fd_distance(fd, c.fd) for c in model.classes}
    best = min(distances.values())
    winners = [lbl for lbl, d in distances.items() if d == best]
    return ClassificationResult(predicted=winners[0], distances=distances, tie=len(winners) > 1)


def classify_tile(tile: GrayImage, model: ClassifierModel) -> ClassificationResult:
    _check_tile(tile, model.config.tile_size)
    return classify_signature(tile_signature(tile, model.config), model)


def evaluate(model: ClassifierModel, labeled_test_tiles) -> tuple[ConfusionMatrix, float]:
    """Classify every test tile and tabulate mean distances.

    Cell (r, c) is the mean, over the test tiles labelled c, of the distance
    from each tile's signature to class r. ``assignments[c]`` is the
    training class with the smallest cell in column c. Accuracy counts
    individual tiles whose predicted label equals their true label.
    """
    items = list(labeled_test_tiles.items()) if isinstance(labeled_test_tiles, Mapping) else list(labeled_test_tiles)
    if not items:
        raise MFSError("no test classes given")
    known = set(model.labels)
    for label, tiles in items:
        if label not in known:
            raise UnknownTestLabel(f"test label {label!r} is not a model class")
        if not tiles:
            raise EmptyClass(f"test class {label!r} has no tiles")
        for t in tiles:
            _check_tile(t, model.config.tile_size)

    rows = model.labels
    cols = [label for label, _ in items]
    cells = [[0.0] * len(cols) for _ in rows]
    counts: dict[str, dict[str, int]] = {}
    correct = total = 0
    for j, (label, tiles) in enumerate(items):
        per_class = {r: [] for r in rows}
        counts[label] = {r: 0 for r in rows}
        for t in tiles:
            res = classify_tile(t, model)
            for r in rows:
                per_class[r].append(res.distances[r])
            counts[label][res.predicted] += 1
            correct += res.predicted == label
            total += 1
        for i, r in enumerate(rows):
            cells[i][j] = math.fsum(per_class[r]) / len(tiles)

    assignments = {}
    for j, label in enumerate(cols):
        col = [cells[i][j] for i in range(len(rows))]
        assignments[label] = rows[col.index(min(col))]
    return ConfusionMatrix(rows, cols, cells, assignments, counts), correct / total


def class_stats_table(model: ClassifierModel) -> list[tuple[str, float, float]]:
    return [(c.label, c.mean_of_means, c.mean_of_stds) for c in model.classes]


# --- persistence -----------------------------------------------------------

_TOP_KEYS = {"format_version", "delta_max", "area_variant", "tile_size", "log_base", "classes"}
_CLASS_KEYS = {"label", "n_tiles", "avg_area", "fd", "mean_of_means", "mean_of_stds"}


def model_to_dict(model: ClassifierModel) -> dict:
    cfg = model.config
    return {
        "format_version": FORMAT_VERSION,
        "delta_max": cfg.delta_max,
        "area_variant": cfg.variant.value,
        "tile_size": cfg.tile_size,
        "log_base": LOG_BASE,
        "classes": [
            {
                "label": c.label,
                "n_tiles": c.n_tiles,
                "avg_area": list(c.avg_area.values),
                "fd": list(c.fd.values),
                "mean_of_means": c.mean_of_means,
                "mean_of_stds": c.mean_of_stds,
            }
            for c in model.classes
        ],
    }


def _require_keys(obj, expected: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{where} must be a JSON object")
    unknown = set(obj) - expected
    missing = expected - set(obj)
    if unknown:
        raise ModelFormatError(f"unknown field(s) in {where}: {sorted(unknown)}")
    if missing:
        raise ModelFormatError(f"missing field(s) in {where}: {sorted(missing)}")


def model_from_dict(doc: dict) -> ClassifierModel:
    _require_keys(doc, _TOP_KEYS, "model")
    if doc["format_version"] != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {doc['format_version']!r}")
    if doc["log_base"] != LOG_BASE:
        raise ModelFormatError(f"unsupported log_base {doc['log_base']!r}")
    try:
        config = ModelConfig(int(doc["delta_max"]), AreaVariant.parse(doc["area_variant"]), int(doc["tile_size"]))
    except MFSError as exc:
        raise ModelFormatError(str(exc)) from None
    classes = []
    for i, c in enumerate(doc["classes"]):
        _require_keys(c, _CLASS_KEYS, f"classes[{i}]")
        avg_area = AreaCurve(tuple(float(v) for v in c["avg_area"]), config.variant)
        fd = FDCurve(tuple(float(v) for v in c["fd"]), config.variant)
        if avg_area.delta_max != config.delta_max or any(not a > 0 for a in avg_area.values):
            raise ModelFormatError(f"class {c['label']!r}: bad avg_area")
        if fd != fd_curve(avg_area):
            raise ModelFormatError(f"class {c['label']!r}: fd does not match avg_area")
        if int(c["n_tiles"]) < 1:
            raise ModelFormatError(f"class {c['label']!r}: n_tiles must be >= 1")
        classes.append(
            ClassModel(
                label=str(c["label"]),
                avg_area=avg_area,
                fd=fd,
                mean_of_means=float(c["mean_of_means"]),
                mean_of_stds=float(c["mean_of_stds"]),
                n_tiles=int(c["n_tiles"]),
            )
        )
    return ClassifierModel(tuple(classes), config)


def dumps_model(model: ClassifierModel) -> str:
    # json writes floats with repr(), the shortest string that round-trips
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def loads_model(text: str) -> ClassifierModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model is not valid JSON: {exc}") from None
    return model_from_dict(doc)


def save_model(model: ClassifierModel, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | os.PathLike) -> ClassifierModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MFSError(f"no such model file: {path}") from None
    return loads_model(text)
