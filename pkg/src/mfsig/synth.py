"""Deterministic synthetic textures used as ground truth.

Random numbers come from SplitMix64 (Steele, Lea & Flood 2014) implemented
here in counter form: the i-th output (i = 0, 1, ...) of a stream seeded
with ``s`` is ``mix(s + (i + 1) * 0x9E3779B97F4A7C15)`` modulo 2**64, so any
language can reproduce the same images bit for bit. Uniform doubles in
[0, 1) take the top 53 bits of each output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadHurst, BadLevels, BadPeriod, BadSize, LevelOutOfRange, MFSError
from .gray_image import GrayImage

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based SplitMix64 stream."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_u64(self, n: int) -> np.ndarray:
        with np.errstate(over="ignore"):
            steps = np.arange(1, n + 1, dtype=np.uint64)
            z = np.uint64(self.state) + steps * _GOLDEN
            out = _mix(z)
        self.state = (self.state + n * int(_GOLDEN)) & _MASK64
        return out

    def uniform(self, n: int) -> np.ndarray:
        """n doubles in [0, 1)."""
        return (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))

    def symmetric(self, n: int) -> np.ndarray:
        """n doubles in [-1, 1)."""
        return 2.0 * self.uniform(n) - 1.0


@dataclass(frozen=True)
class FbmSpec:
    size: int
    hurst: float
    seed: int = 0
    out_range: tuple[int, int] = (0, 255)

    def __post_init__(self):
        k = (self.size - 1).bit_length() - 1
        if self.size < 9 or (self.size - 1) != (1 << k):
            raise BadSize(f"size must be 2**k + 1 with k >= 3, got {self.size}")
        if not 0.0 < self.hurst < 1.0:
            raise BadHurst(f"hurst must lie strictly between 0 and 1, got {self.hurst}")
        lo, hi = self.out_range
        if not 0 <= lo < hi <= 255:
            raise BadLevels(f"bad output range {self.out_range}")


def constant_image(width: int, height: int, level: int) -> GrayImage:
    if not 0 <= level <= 255:
        raise LevelOutOfRange(f"level {level} outside [0, 255]")
    return GrayImage(np.full((height, width), level, dtype=np.uint8))


def checkerboard(width: int, height: int, period: int, lo: int, hi: int) -> GrayImage:
    """Squares of side ``period``; the square containing (0, 0) is ``hi``."""
    if period < 1:
        raise BadPeriod(f"period must be >= 1, got {period}")
    if not 0 <= lo < hi <= 255:
        raise BadLevels(f"need 0 <= lo < hi <= 255, got lo={lo} hi={hi}")
    y, x = np.mgrid[0:height, 0:width]
    even = ((x // period) + (y // period)) % 2 == 0
    return GrayImage(np.where(even, hi, lo).astype(np.uint8))


def noisy_constant(width: int, height: int, level: int, amplitude: int, seed: int) -> GrayImage:
    """Constant level plus integer noise drawn uniformly from [-amplitude, amplitude].

    Samples are drawn in row-major order and clipped to [0, 255].
    """
    if not 0 <= level <= 255:
        raise LevelOutOfRange(f"level {level} outside [0, 255]")
    if amplitude < 0:
        raise MFSError(f"amplitude must be >= 0, got {amplitude}")
    u = SplitMix64(seed).uniform(width * height)
    noise = np.floor(u * (2 * amplitude + 1)).astype(np.int64) - amplitude
    return GrayImage(np.clip(level + noise, 0, 255).reshape(height, width))


def _square_step(f: np.ndarray, half: int, scale: float, rng: SplitMix64) -> None:
    n = f.shape[0]
    ys, xs = np.mgrid[0:n:half, 0:n:half]
    ys, xs = ys.ravel(), xs.ravel()
    pick = ((ys // half) + (xs // half)) % 2 == 1
    ys, xs = ys[pick], xs[pick]  # row-major order
    total = np.zeros(ys.size)
    count = np.zeros(ys.size)
    for dy, dx in ((-half, 0), (half, 0), (0, -half), (0, half)):
        yy, xx = ys + dy, xs + dx
        ok = (yy >= 0) & (yy < n) & (xx >= 0) & (xx < n)
        total[ok] += f[yy[ok], xx[ok]]
        count[ok] += 1
    f[ys, xs] = total / count + scale * rng.symmetric(ys.size)


def fbm_field(spec: FbmSpec) -> np.ndarray:
    """Unquantized diamond-square field.

    Draw order: the four corners (top-left, top-right, bottom-left,
    bottom-right) with scale 1; then per level, the diamond centres in
    row-major order followed by the edge midpoints in row-major order, both
    with the level's scale. The scale is multiplied by 2**-H after each level.
    """
    n = spec.size
    rng = SplitMix64(spec.seed)
    f = np.zeros((n, n))
    c = rng.symmetric(4)
    f[0, 0], f[0, n - 1], f[n - 1, 0], f[n - 1, n - 1] = c
    factor = 2.0 ** (-spec.hurst)
    scale = factor
    step = n - 1
    while step > 1:
        half = step // 2
        avg = (
            f[0:n - 1:step, 0:n - 1:step]
            + f[0:n - 1:step, step::step]
            + f[step::step, 0:n - 1:step]
            + f[step::step, step::step]
        ) / 4.0
        f[half::step, half::step] = avg + scale * rng.symmetric(avg.size).reshape(avg.shape)
        _square_step(f, half, scale, rng)
        scale *= factor
        step = half
    return f


def fbm_surface(spec: FbmSpec) -> GrayImage:
    """Fractional Brownian surface, affinely rescaled to ``out_range`` and rounded."""
    f = fbm_field(spec)
    lo, hi = spec.out_range
    span = f.max() - f.min()
    if span == 0:
        return constant_image(spec.size, spec.size, lo)
    g = lo + (f - f.min()) * ((hi - lo) / span)
    return GrayImage(np.clip(np.rint(g), lo, hi))
