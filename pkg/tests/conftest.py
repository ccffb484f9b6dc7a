import numpy as np
import pytest

from mfsig.gray_image import GrayImage


@pytest.fixture
def impulse():
    g = np.zeros((3, 3), dtype=np.uint8)
    g[1, 1] = 10
    return GrayImage(g)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_image(rng, h=16, w=16):
    return GrayImage(rng.integers(0, 256, size=(h, w)))


def synthetic_corpus(n_train=4, n_test=4, size=128):
    """Three well-separated texture classes, (train, holdout) as label -> tiles."""
    from mfsig.gray_image import TileSpec, extract_tiles
    from mfsig.synth import FbmSpec, checkerboard, fbm_surface, noisy_constant

    def fbm_tiles(first_seed, n):
        tiles = []
        seed = first_seed
        while len(tiles) < n:
            tiles += extract_tiles(fbm_surface(FbmSpec(2 * size + 1, 0.3, seed)), TileSpec(size))
            seed += 1
        return tiles[:n]

    board = checkerboard(size, size, 4, 0, 255)
    train = {
        "flat": [noisy_constant(size, size, 100, 2, seed) for seed in range(n_train)],
        "board": [board] * n_train,
        "fbm": fbm_tiles(1, n_train),
    }
    test = {
        "flat": [noisy_constant(size, size, 100, 2, 1000 + seed) for seed in range(n_test)],
        "board": [board] * n_test,
        "fbm": fbm_tiles(1000, n_test),
    }
    return train, test


# --- acceptance reporting ----------------------------------------------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria.append((marker.args[0], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
