import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


def textured_image(shape, seed=0, base=128.0, amplitude=60.0):
    """Smooth-plus-texture test image with plenty of local variance, in [0, 255]."""
    rng = np.random.default_rng(seed)
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    img = np.full(shape, base)
    for _ in range(6):
        fx, fy = rng.uniform(0.02, 0.35, size=2)
        phase = rng.uniform(0, 2 * np.pi)
        img += amplitude / 3 * np.sin(fx * xx + fy * yy + phase)
    img += rng.normal(0, 6.0, size=shape)
    return np.clip(img, 0.0, 255.0)


def distorted(img, sigma, seed=1):
    rng = np.random.default_rng(seed)
    return np.clip(img + rng.normal(0, sigma, size=img.shape), 0.0, 255.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def tid2013_root():
    """Path to a TID2013 copy, from $LFIQA_TID2013; tests skip without it."""
    root = os.environ.get("LFIQA_TID2013")
    if not root or not Path(root).is_dir():
        pytest.skip("TID2013 not available (set LFIQA_TID2013)")
    return Path(root)


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


_RANK = {"FAIL": 2, "PASS": 1, "SKIP": 0}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        entry = _ACCEPTANCE.setdefault(number, {"title": title, "parts": []})
        entry["parts"].append((status, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[number]
        statuses = [s for s, _ in entry["parts"]]
        # a criterion split over several tests fails if any part fails
        status = max(statuses, key=_RANK.__getitem__)
        duration = sum(d for _, d in entry["parts"])
        note = ""
        if status != "SKIP" and "SKIP" in statuses:
            note = f", {statuses.count('SKIP')} data-dependent part(s) skipped"
        terminalreporter.write_line(f"[{status}] {number}. {entry['title']} ({duration:.2f}s{note})")
