import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockage_kit.bgmodels import PAPER_CI, CiParams, eval_ci
from blockage_kit.core import C0
from blockage_kit.geom3gpp import (
    EDGES,
    BlockerTouchesAntenna,
    BodyDims,
    FullBlockSingular,
    GppExtrapolationWarning,
    LinkLayout,
    NegativeExcessWhileShadowed,
    angular_region,
    blocks_los,
    build_screens,
    edge_paths,
    gpp_a_gain,
    gpp_b_gain,
    gpp_discrepancy,
    ked_f,
    screen_loss_db,
)
from blockage_kit.traceproc import PAPER_FREQS_GHZ

DEFAULT = BodyDims()


def oracle_excess(link, screen, edge):
    """Excess path via 3-D points: the diffraction point sits in the LoS plane of that edge."""
    tx, rx = np.array(link.tx), np.array(link.rx)
    if edge in ("top", "bottom"):
        p = np.array([screen.x, 0.0, screen.height if edge == "top" else 0.0])
    else:
        p = np.array([screen.x, (-1 if edge == "left" else 1) * screen.width / 2, link.hc])
    return np.linalg.norm(p - tx) + np.linalg.norm(rx - p) - np.linalg.norm(rx - tx)


def test_screens_default_d1():
    s1, s2 = build_screens(DEFAULT, LinkLayout(1.0))
    assert (s1.x, s2.x) == pytest.approx((-0.2, 0.2))
    for s in (s1, s2):
        assert s.y_range == pytest.approx((-0.15, 0.15))
        assert s.z_range == (0.0, 1.7)


def test_screens_independent_of_distance():
    link = LinkLayout(2.5)
    assert build_screens(DEFAULT, link) == build_screens(DEFAULT, LinkLayout(1.0))
    assert link.tx[0] == -1.25 and link.rx[0] == 1.25


def test_blocker_touching_antenna():
    with pytest.raises(BlockerTouchesAntenna):
        build_screens(DEFAULT, LinkLayout(0.4))
    with pytest.raises(BlockerTouchesAntenna):
        build_screens(DEFAULT, LinkLayout(2.0, offset=0.8))


def test_top_edge_excess_example():
    link = LinkLayout(1.0)
    paths = edge_paths(build_screens(DEFAULT, link), link)
    top = paths[0]["top"]
    assert top.D1 == pytest.approx(math.sqrt(0.3**2 + 0.7**2))
    assert top.D2 == pytest.approx(math.sqrt(0.7**2 + 0.7**2))
    assert top.excess == pytest.approx(0.751526804247557, abs=1e-12)


@pytest.mark.parametrize("d, offset", [(1.0, 0.0), (2.5, 0.0), (2.5, 0.6), (1.75, -0.3)])
def test_edge_paths_match_3d_oracle(d, offset):
    link = LinkLayout(d, offset=offset)
    screens = build_screens(DEFAULT, link)
    for s, per in zip(screens, edge_paths(screens, link)):
        for edge, p in per.items():
            assert p.excess == pytest.approx(oracle_excess(link, s, edge), abs=1e-12)
            assert p.D1 + p.D2 >= p.r_proj


def test_default_geometry_fully_shadowed():
    link = LinkLayout(1.0)
    for s in build_screens(DEFAULT, link):
        assert blocks_los(s, link)
    for per in edge_paths(build_screens(DEFAULT, link), link):
        assert all(p.shadowed for p in per.values())


def test_antennas_above_body_not_blocked():
    link = LinkLayout(2.0, hc=2.0)
    for s, per in zip(build_screens(DEFAULT, link), edge_paths(build_screens(DEFAULT, link), link)):
        assert not blocks_los(s, link)
        assert not per["top"].shadowed


def test_mirror_symmetry_of_path_sums():
    link = LinkLayout(1.75)
    a = edge_paths(build_screens(DEFAULT, link), link)
    sw = link.swapped()
    b = edge_paths(build_screens(DEFAULT, sw), sw)
    # swapping Tx and Rx mirrors the pair: screen 0 <-> screen 1
    for e in EDGES:
        assert a[0][e].D1 + a[0][e].D2 == pytest.approx(b[1][e].D1 + b[1][e].D2, abs=1e-15)


def test_ked_examples():
    lam = C0 / 75e9
    assert ked_f(0.0, lam, True) == 0.0
    # mpmath: atan((pi/2) sqrt(pi * 0.751526804... / lambda)) / pi
    assert ked_f(0.751526804247557, lam, True) == pytest.approx(0.491663888902637, abs=1e-12)
    assert ked_f(0.7515, 0.003997, True) == pytest.approx(0.49166, abs=5e-6)
    assert 0.5 - ked_f(1e12, lam, True) < 1e-6
    assert ked_f(1e12, lam, True) < 0.5


def test_ked_negative_excess():
    with pytest.raises(NegativeExcessWhileShadowed):
        ked_f(-0.1, 0.004, True)


@given(st.floats(0, 100), st.floats(1e-4, 1e-1))
def test_ked_bounds(excess, lam):
    fs = ked_f(excess, lam, True)
    fu = ked_f(excess, lam, False)
    assert 0.0 <= fs < 0.5
    assert -0.5 < fu <= 0.0
    assert fu == -fs


def test_full_block_clamped():
    with pytest.warns(FullBlockSingular):
        assert screen_loss_db(0.5, 0.5, 0.5, 0.5) == 240.0


def test_screen_loss_non_negative_when_shadowed():
    for per in edge_paths(build_screens(DEFAULT, LinkLayout(1.0)), LinkLayout(1.0)):
        F = {e: ked_f(p.excess, C0 / 145e9, p.shadowed) for e, p in per.items()}
        assert screen_loss_db(F["top"], F["bottom"], F["left"], F["right"]) >= 0


def test_validity_warning_above_100ghz():
    with pytest.warns(GppExtrapolationWarning):
        gpp_b_gain(DEFAULT, LinkLayout(1.0), 145.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gpp_b_gain(DEFAULT, LinkLayout(1.0), 92.5)


@pytest.mark.parametrize("gain", [gpp_a_gain, gpp_b_gain])
def test_vanishing_screens_give_no_loss(gain):
    tiny = BodyDims(h=1e-12, r=0.4, w=1e-12)
    assert abs(gain(tiny, LinkLayout(1.0), 75.0)) < 1e-3


@pytest.mark.parametrize("gain", [gpp_a_gain, gpp_b_gain])
@pytest.mark.parametrize("offset", [0.0, 0.3, -0.45])
def test_swap_symmetry(gain, offset):
    link = LinkLayout(2.5, offset=offset)
    if gain is gpp_b_gain:
        assert gain(DEFAULT, link, 145.0) == pytest.approx(gain(DEFAULT, link.swapped(), 145.0), abs=1e-12)
    elif offset == 0.0:
        assert gain(DEFAULT, link, 145.0) == gain(DEFAULT, link.swapped(), 145.0)


def test_b_average_close_to_ci_at_2p5m():
    b = np.mean([gpp_b_gain(DEFAULT, LinkLayout(2.5), f) for f in PAPER_FREQS_GHZ])
    ci = np.mean([eval_ci(PAPER_CI, 2.5, f) for f in PAPER_FREQS_GHZ])
    assert abs(b - ci) <= 3.0


def test_angular_region_default():
    link = LinkLayout(1.0)
    far, near = (angular_region(s, link) for s in build_screens(DEFAULT, link))
    assert far.range_m == pytest.approx(0.7) and near.range_m == pytest.approx(0.3)
    assert far.az_center == pytest.approx(0.0)
    assert far.az_span == pytest.approx(2 * math.atan(0.15 / 0.7))
    assert near.el_span == pytest.approx(math.atan(0.7 / 0.3) + math.atan(1.0 / 0.3))


@pytest.mark.parametrize("d", [1.0, 1.75, 2.5])
@pytest.mark.parametrize("f", PAPER_FREQS_GHZ)
def test_a_never_exceeds_b_attenuation(d, f):
    # the Rx-only excess r(1/cos - 1) never exceeds the two-sided excess
    a = gpp_a_gain(DEFAULT, LinkLayout(d), f)
    b = gpp_b_gain(DEFAULT, LinkLayout(d), f)
    assert b <= a <= 0.0


def test_discrepancy_examples():
    d1 = np.mean([gpp_discrepancy(DEFAULT, LinkLayout(1.0), f, PAPER_CI) for f in PAPER_FREQS_GHZ])
    d25 = np.mean([gpp_discrepancy(DEFAULT, LinkLayout(2.5), f, PAPER_CI) for f in PAPER_FREQS_GHZ])
    assert 7.0 <= d1 <= 13.0
    assert d25 < d1
    zero = CiParams(0.0, 0.0)
    assert gpp_discrepancy(DEFAULT, LinkLayout(1.0), 75.0, zero) == gpp_b_gain(DEFAULT, LinkLayout(1.0), 75.0)
    assert gpp_discrepancy(DEFAULT, LinkLayout(1.0), 75.0, zero, model="a") == gpp_a_gain(DEFAULT, LinkLayout(1.0), 75.0)


@pytest.mark.parametrize("gain", [gpp_a_gain, gpp_b_gain])
def test_monotone_in_width_and_height(gain):
    for d in (1.0, 2.5):
        link = LinkLayout(d)
        for f in (75.0, 145.0, 215.0):
            by_w = [-gain(BodyDims(w=w), link, f) for w in np.linspace(0.05, 1.0, 12)]
            by_h = [-gain(BodyDims(h=h), link, f) for h in np.linspace(1.05, 3.0, 12)]
            assert all(np.diff(by_w) >= 0)
            assert all(np.diff(by_h) >= 0)


@pytest.mark.parametrize("gain", [gpp_a_gain, gpp_b_gain])
@pytest.mark.parametrize("d", [1.0, 1.75, 2.5])
def test_attenuation_non_decreasing_in_frequency(gain, d):
    att = [-gain(DEFAULT, LinkLayout(d), f) for f in np.linspace(75, 215, 29)]
    assert all(np.diff(att) >= 0)


@pytest.mark.parametrize("gain", [gpp_a_gain, gpp_b_gain])
def test_shorter_links_attenuate_more(gain):
    for f in PAPER_FREQS_GHZ:
        assert -gain(DEFAULT, LinkLayout(1.0), f) >= -gain(DEFAULT, LinkLayout(2.5), f)


def test_screen_below_los_gives_little_loss():
    # top edge 10 cm under the LoS: a partially clear Fresnel zone, a few dB at most
    low = BodyDims(h=0.9)
    assert -8.0 < gpp_b_gain(low, LinkLayout(2.0), 75.0) < 0.0
