import numpy as np
import pytest

from blockage_kit.traceproc import PAPER_DISTANCES_M, PAPER_FREQS_GHZ


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def paper_grid():
    return [(f, d) for f in PAPER_FREQS_GHZ for d in PAPER_DISTANCES_M]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
