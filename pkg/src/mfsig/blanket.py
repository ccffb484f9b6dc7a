"""Blanket surfaces, blanket volumes and fractal-area curves.

The gray-level surface g is covered by a blanket bounded above by ``upper``
and below by ``lower``. Each dilation step raises the upper surface by one
gray level or to the highest 4-neighbor, whichever is larger, and lowers
the lower surface symmetrically. Neighbors outside the image are ignored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDeltaMax, MFSError
from .gray_image import GrayImage

DEFAULT_DELTA_MAX = 10


class AreaVariant(enum.Enum):
    """How a fractal area is derived from blanket volumes.

    QUOTIENT: ``A = Vol(d) / (2 d)``.
    DIFFERENCE: ``A = (Vol(d) - Vol(d - 1)) / 2``.
    """

    QUOTIENT = "quotient"
    DIFFERENCE = "difference"

    @classmethod
    def parse(cls, value: "str | AreaVariant") -> "AreaVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise MFSError(f"unknown area variant {value!r}; use 'quotient' or 'difference'") from None


DEFAULT_VARIANT = AreaVariant.DIFFERENCE


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BlanketState:
    delta: int
    upper: np.ndarray
    lower: np.ndarray

    @property
    def width(self) -> int:
        return self.upper.shape[1]

    @property
    def height(self) -> int:
        return self.upper.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BlanketState):
            return NotImplemented
        return (
            self.delta == other.delta
            and np.array_equal(self.upper, other.upper)
            and np.array_equal(self.lower, other.lower)
        )


@dataclass(frozen=True)
class AreaCurve:
    values: tuple[float, ...]
    variant: AreaVariant

    @property
    def delta_max(self) -> int:
        return len(self.values)


def init_blanket(img: GrayImage) -> BlanketState:
    g = img.pixels.astype(np.int64)
    return BlanketState(0, _frozen(g.copy()), _frozen(g.copy()))


def _neighbor_extreme(a: np.ndarray, op, fill) -> np.ndarray:
    # in-image 4-neighbours only; the centre pixel is handled by the +/-1 term
    out = np.full_like(a, fill)
    op(out[1:, :], a[:-1, :], out=out[1:, :])
    op(out[:-1, :], a[1:, :], out=out[:-1, :])
    op(out[:, 1:], a[:, :-1], out=out[:, 1:])
    op(out[:, :-1], a[:, 1:], out=out[:, :-1])
    return out


def _neighbor_max(a: np.ndarray) -> np.ndarray:
    return _neighbor_extreme(a, np.maximum, np.iinfo(a.dtype).min)


def _neighbor_min(a: np.ndarray) -> np.ndarray:
    return _neighbor_extreme(a, np.minimum, np.iinfo(a.dtype).max)


def dilate_step(state: BlanketState) -> BlanketState:
    upper = np.maximum(state.upper + 1, _neighbor_max(state.upper))
    lower = np.minimum(state.lower - 1, _neighbor_min(state.lower))
    return BlanketState(state.delta + 1, _frozen(upper), _frozen(lower))


def blanket_volume(state: BlanketState) -> int:
    return int(np.sum(state.upper - state.lower, dtype=np.int64))


def volumes(img: GrayImage, delta_max: int) -> list[int]:
    """Blanket volumes for delta = 0..delta_max (first entry is always 0)."""
    state = init_blanket(img)
    vols = [blanket_volume(state)]
    for _ in range(delta_max):
        state = dilate_step(state)
        vols.append(blanket_volume(state))
    return vols


def areas_from_volumes(vols, variant: AreaVariant) -> tuple[float, ...]:
    variant = AreaVariant.parse(variant)
    if variant is AreaVariant.QUOTIENT:
        return tuple(vols[d] / (2 * d) for d in range(1, len(vols)))
    return tuple((vols[d] - vols[d - 1]) / 2 for d in range(1, len(vols)))


def area_curve(
    img: GrayImage,
    delta_max: int = DEFAULT_DELTA_MAX,
    variant: AreaVariant = DEFAULT_VARIANT,
) -> AreaCurve:
    """Fractal area for delta = 1..delta_max.

    Volumes are exact integers; the division by 2 or 2*delta is the only
    floating-point operation.
    """
    if int(delta_max) != delta_max or delta_max < 1:
        raise InvalidDeltaMax(f"delta_max must be an integer >= 1, got {delta_max!r}")
    variant = AreaVariant.parse(variant)
    return AreaCurve(areas_from_volumes(volumes(img, int(delta_max)), variant), variant)


def oracle_surfaces(img: GrayImage, delta: int) -> tuple[np.ndarray, np.ndarray]:
    """Blanket surfaces after ``delta`` steps, by direct cone enumeration.

    upper(p) = max over q with city-block |p - q| <= delta of g(q) + delta - |p - q|,
    lower(p) = min over the same q of g(q) - delta + |p - q|.

    Every offset inside the diamond is visited explicitly; nothing is iterated,
    so this is independent of :func:`dilate_step`.
    """
    if delta < 0:
        raise MFSError(f"delta must be >= 0, got {delta}")
    g = img.pixels.astype(np.int64)
    h, w = g.shape
    upper = np.full((h, w), np.iinfo(np.int64).min, dtype=np.int64)
    lower = np.full((h, w), np.iinfo(np.int64).max, dtype=np.int64)
    for dy in range(-delta, delta + 1):
        rest = delta - abs(dy)
        for dx in range(-rest, rest + 1):
            d = abs(dx) + abs(dy)
            # target rows/cols p whose source q = p + (dy, dx) is in the image
            ty = slice(max(0, -dy), min(h, h - dy))
            tx = slice(max(0, -dx), min(w, w - dx))
            sy = slice(max(0, dy), min(h, h + dy))
            sx = slice(max(0, dx), min(w, w + dx))
            if ty.start >= ty.stop or tx.start >= tx.stop:
                continue
            src = g[sy, sx]
            np.maximum(upper[ty, tx], src + (delta - d), out=upper[ty, tx])
            np.minimum(lower[ty, tx], src - (delta - d), out=lower[ty, tx])
    return upper, lower
