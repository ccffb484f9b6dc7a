"""Blanket-method fractal signatures for gray-level texture classification."""

from .blanket import (
    AreaCurve,
    AreaVariant,
    BlanketState,
    area_curve,
    blanket_volume,
    dilate_step,
    init_blanket,
    oracle_surfaces,
)
from .classifier import (
    ClassificationResult,
    ClassifierModel,
    ClassModel,
    ConfusionMatrix,
    ModelConfig,
    class_stats_table,
    classify_tile,
    evaluate,
    load_model,
    save_model,
    train_model,
)
from .gray_image import GrayImage, GrayStats, TileSpec, extract_tiles, gray_stats, load_image, save_image
from .signature import FDCurve, fd_curve, fd_distance
from .synth import FbmSpec, checkerboard, constant_image, fbm_surface, noisy_constant

__version__ = "0.1.0"
