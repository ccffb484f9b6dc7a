"""Gray-level images: PGM input/output, tiling and gray-level statistics."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadMagic,
    ImageTooSmall,
    MalformedHeader,
    MaxvalUnsupported,
    MFSError,
    MissingFile,
    TruncatedData,
)

_WHITESPACE = b" \t\r\n\v\f"


class GrayImage:
    """Immutable 8-bit gray-level image.

    ``pixels`` is indexed ``[y, x]`` (rows first), so the row-major
    ``levels`` sequence is ``pixels.ravel()``.
    """

    __slots__ = ("_pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise MFSError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise MFSError("gray levels must lie in [0, 255]")
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise MFSError("gray levels must be integers")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        self._pixels = arr

    @classmethod
    def from_levels(cls, width: int, height: int, levels: Sequence[int]) -> "GrayImage":
        if len(levels) != width * height:
            raise MFSError(f"expected {width * height} levels, got {len(levels)}")
        return cls(np.asarray(levels, dtype=np.int64).reshape(height, width))

    @property
    def pixels(self) -> np.ndarray:
        return self._pixels

    @property
    def width(self) -> int:
        return self._pixels.shape[1]

    @property
    def height(self) -> int:
        return self._pixels.shape[0]

    @property
    def levels(self) -> list[int]:
        return self._pixels.ravel().tolist()

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self._pixels, other._pixels)

    def __hash__(self):
        return hash((self._pixels.shape, self._pixels.tobytes()))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True)
class TileSpec:
    tile_size: int = 128
    stride: int | None = None

    def __post_init__(self):
        if self.tile_size < 8:
            raise MFSError(f"tile_size must be >= 8, got {self.tile_size}")
        if self.stride is None:
            object.__setattr__(self, "stride", self.tile_size)
        if self.stride < 1:
            raise MFSError(f"stride must be >= 1, got {self.stride}")


@dataclass(frozen=True)
class GrayStats:
    mean: float
    std: float


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the last token.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos >= n:
            raise MalformedHeader("unexpected end of file in PGM header")
        if data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> GrayImage:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise BadMagic(f"unsupported magic number {magic!r}; expected P2 or P5")
    if len(data) > 2 and data[2] not in _WHITESPACE and data[2] != ord("#"):
        raise BadMagic(f"unsupported magic number {data[:3]!r}")
    tokens, pos = _header_tokens(data[2:], 3)
    pos += 2
    try:
        width, height, maxval = (int(t.decode("ascii")) for t in tokens)
    except (UnicodeDecodeError, ValueError):
        raise MalformedHeader(f"non-integer PGM header fields {tokens!r}") from None
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad PGM dimensions {width}x{height}")
    if maxval < 1 or maxval > 65535:
        raise MalformedHeader(f"bad PGM maxval {maxval}")
    if maxval > 255:
        raise MaxvalUnsupported(f"maxval {maxval} > 255 is not supported")
    npix = width * height

    if magic == b"P5":
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise MalformedHeader("missing whitespace after maxval")
        raster = data[pos + 1 : pos + 1 + npix]
        if len(raster) < npix:
            raise TruncatedData(f"expected {npix} bytes of raster data, got {len(raster)}")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        words = data[pos:].split()
        if len(words) < npix:
            raise TruncatedData(f"expected {npix} samples, got {len(words)}")
        try:
            values = np.array([int(w) for w in words[:npix]], dtype=np.int64)
        except ValueError:
            raise MalformedHeader("non-integer sample in P2 raster") from None
    if values.max(initial=0) > maxval or values.min(initial=0) < 0:
        raise MalformedHeader(f"sample exceeds maxval {maxval}")
    return GrayImage(values.reshape(height, width))


def load_image(path: str | os.PathLike) -> GrayImage:
    """Load a P2 (ASCII) or P5 (binary) PGM file with maxval <= 255.

    Samples are taken verbatim; no rescaling to maxval is applied.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise MissingFile(f"no such file: {path}") from None
    except IsADirectoryError:
        raise MissingFile(f"not a file: {path}") from None
    return parse_pgm(data)


def encode_pgm(img: GrayImage, binary: bool = True) -> bytes:
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n255\n".encode("ascii")
    if binary:
        return header + img.pixels.tobytes()
    rows = (" ".join(str(v) for v in row) for row in img.pixels.tolist())
    return header + ("\n".join(rows) + "\n").encode("ascii")


def save_image(img: GrayImage, path: str | os.PathLike, binary: bool = True) -> None:
    Path(path).write_bytes(encode_pgm(img, binary=binary))


def tile_offsets(width: int, height: int, spec: TileSpec) -> list[tuple[int, int]]:
    t, s = spec.tile_size, spec.stride
    if width < t or height < t:
        raise ImageTooSmall(f"image {width}x{height} is smaller than tile size {t}")
    return [(x, y) for y in range(0, height - t + 1, s) for x in range(0, width - t + 1, s)]


def extract_tiles(img: GrayImage, spec: TileSpec) -> list[GrayImage]:
    """Cut every full square tile at multiples of the stride.

    Tiles come out in row-major order of their top-left offsets; partial
    tiles at the right and bottom edges are dropped.
    """
    t = spec.tile_size
    return [
        GrayImage(img.pixels[y : y + t, x : x + t])
        for x, y in tile_offsets(img.width, img.height, spec)
    ]


def gray_stats(img: GrayImage) -> GrayStats:
    """Mean and population standard deviation (divides by N) of the levels."""
    vals = img.pixels.astype(np.float64)
    mean = float(vals.mean())
    std = float(np.sqrt(np.mean((vals - mean) ** 2)))
    return GrayStats(mean=mean, std=std)


def mean_stats(stats: Iterable[GrayStats]) -> GrayStats:
    stats = list(stats)
    return GrayStats(
        mean=math.fsum(s.mean for s in stats) / len(stats),
        std=math.fsum(s.std for s in stats) / len(stats),
    )
