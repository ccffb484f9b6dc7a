import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mfsig.errors import BadMagic, ImageTooSmall, MalformedHeader, MaxvalUnsupported, MissingFile, TruncatedData
from mfsig.gray_image import (
    GrayImage,
    TileSpec,
    encode_pgm,
    extract_tiles,
    gray_stats,
    load_image,
    parse_pgm,
    save_image,
)

images = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)))


def test_load_p2(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P2\n3 1\n255\n0 128 255\n")
    img = load_image(p)
    assert (img.width, img.height) == (3, 1)
    assert img.levels == [0, 128, 255]


def test_load_p5_matches_p2(tmp_path):
    (tmp_path / "a.pgm").write_bytes(b"P2\n3 1\n255\n0 128 255\n")
    (tmp_path / "b.pgm").write_bytes(b"P5\n3 1\n255\n\x00\x80\xff")
    assert load_image(tmp_path / "a.pgm") == load_image(tmp_path / "b.pgm")


def test_p5_raster_may_start_with_whitespace_byte():
    # the single separator byte is consumed, the next 0x0a is a pixel
    img = parse_pgm(b"P5 2 1 255\n\n\x0a")
    assert img.levels == [10, 10]


def test_header_comments():
    img = parse_pgm(b"P2\n# made by hand\n2 # width\n2\n# max\n255\n1 2\n3 4\n")
    assert img.pixels.tolist() == [[1, 2], [3, 4]]


@pytest.mark.parametrize(
    "data, exc",
    [
        (b"P6\n1 1\n255\n\x00\x00\x00", BadMagic),
        (b"P55\n1 1\n255\n\x00", BadMagic),
        (b"", BadMagic),
        (b"P2\n2 2\n65535\n1 2 3 4\n", MaxvalUnsupported),
        (b"P2\n2 2\n255\n1 2 3\n", TruncatedData),
        (b"P5\n2 2\n255\n\x00\x01\x02", TruncatedData),
        (b"P2\n2 x\n255\n1 2 3 4\n", MalformedHeader),
        (b"P2\n2 2\n", MalformedHeader),
        (b"P2\n0 2\n255\n", MalformedHeader),
        (b"P2\n1 1\n100\n200\n", MalformedHeader),
    ],
)
def test_bad_files(data, exc):
    with pytest.raises(exc):
        parse_pgm(data)


def test_missing_file(tmp_path):
    with pytest.raises(MissingFile, match="nope.pgm"):
        load_image(tmp_path / "nope.pgm")


@given(images, st.booleans())
def test_pgm_round_trip(pixels, binary):
    img = GrayImage(pixels)
    assert parse_pgm(encode_pgm(img, binary=binary)) == img


def test_save_load(tmp_path):
    img = GrayImage(np.arange(30).reshape(5, 6) * 8)
    save_image(img, tmp_path / "x.pgm")
    assert load_image(tmp_path / "x.pgm") == img


def test_gray_image_validation():
    with pytest.raises(ValueError):
        GrayImage([[0, 256]])
    with pytest.raises(ValueError):
        GrayImage([[-1]])
    with pytest.raises(ValueError):
        GrayImage.from_levels(2, 2, [1, 2, 3])
    img = GrayImage([[1, 2]])
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 5


# --- tiles ----------------------------------------------------------------

def _blank(w, h):
    return GrayImage(np.zeros((h, w), dtype=np.uint8))


def test_tiles_exact():
    assert len(extract_tiles(_blank(256, 256), TileSpec(128, 128))) == 4


def test_tiles_partial_dropped():
    img = GrayImage(np.tile(np.arange(300) % 256, (128, 1)))
    tiles = extract_tiles(img, TileSpec(128, 128))
    assert len(tiles) == 2
    assert tiles[1].pixels[0, 0] == 128


def test_tile_identity():
    img = GrayImage(np.arange(128 * 128).reshape(128, 128) % 251)
    assert extract_tiles(img, TileSpec(128, 1)) == [img]


def test_tile_order_row_major():
    img = GrayImage(np.arange(16 * 16).reshape(16, 16) % 256)
    tiles = extract_tiles(img, TileSpec(8, 8))
    assert [t.pixels[0, 0] for t in tiles] == [0, 8, 128, 136]


def test_tiles_too_small():
    with pytest.raises(ImageTooSmall):
        extract_tiles(_blank(100, 200), TileSpec(128))


def test_tile_spec_defaults_and_validation():
    assert TileSpec().stride == 128
    assert TileSpec(16).stride == 16
    with pytest.raises(ValueError):
        TileSpec(7)
    with pytest.raises(ValueError):
        TileSpec(8, 0)


@settings(max_examples=60)
@given(st.integers(8, 40), st.integers(8, 40), st.integers(8, 12), st.integers(1, 9))
def test_tile_count_formula(w, h, t, s):
    if w < t or h < t:
        return
    n = len(extract_tiles(_blank(w, h), TileSpec(t, s)))
    assert n == ((w - t) // s + 1) * ((h - t) // s + 1)


# --- stats ----------------------------------------------------------------

@pytest.mark.parametrize(
    "levels, shape, expected",
    [([42] * 9, (3, 3), (42.0, 0.0)), ([0, 10], (1, 2), (5.0, 5.0)), ([200], (1, 1), (200.0, 0.0))],
)
def test_gray_stats(levels, shape, expected):
    s = gray_stats(GrayImage(np.array(levels).reshape(shape)))
    assert (s.mean, s.std) == expected


@given(images, st.integers(-255, 255), st.randoms(use_true_random=False))
def test_gray_stats_permutation_and_shift(pixels, c, rnd):
    img = GrayImage(pixels)
    base = gray_stats(img)
    flat = pixels.ravel().tolist()
    rnd.shuffle(flat)
    perm = gray_stats(GrayImage(np.array(flat).reshape(pixels.shape)))
    assert perm.mean == pytest.approx(base.mean, abs=1e-9)
    assert perm.std == pytest.approx(base.std, abs=1e-9)
    shifted = pixels.astype(int) + c
    if shifted.min() >= 0 and shifted.max() <= 255:
        s = gray_stats(GrayImage(shifted))
        assert s.mean == pytest.approx(base.mean + c, abs=1e-9)
        assert s.std == pytest.approx(base.std, abs=1e-9)
    assert base.std >= 0 and 0 <= base.mean <= 255
