import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockage_kit.bgmodels import (
    PAPER_ABG,
    PAPER_CI,
    PAPER_CIF,
    PAPER_FI,
    AbgParams,
    BandExtrapolationWarning,
    BgModel,
    BlockerBeyondMidpoint,
    CiParams,
    CifParams,
    FiParams,
    NegativeSigma,
    ZeroDistance,
    eval_abg,
    eval_ci,
    eval_cif,
    eval_fi,
    evaluate,
    equivalent_distance,
    fspl,
    link_budget,
    paper_model,
    sample_chi,
)

# expected values below were evaluated independently at 30 digits with mpmath

freqs = st.floats(min_value=1.0, max_value=1000.0)
band = st.floats(min_value=75.0, max_value=215.0)
dists = st.floats(min_value=0.0, max_value=10.0)
coef = st.floats(min_value=-50, max_value=50)


def test_table1_constants():
    assert (PAPER_FI.A, PAPER_FI.n) == (16.0, -3.09)
    assert (PAPER_CI.phi, PAPER_CI.m) == (12.0, -3.32)
    assert (PAPER_ABG.alpha, PAPER_ABG.beta, PAPER_ABG.gamma) == (12.1, -5.2, -3.09)
    assert (PAPER_CIF.a, PAPER_CIF.b, PAPER_CIF.c, PAPER_CIF.f0_ghz) == (12.1, 0.0196, -3.32, 145.0)
    assert [paper_model(t).sigma_db for t in ("fi", "ci", "abg", "cif")] == [9.65, 6.18, 6.17, 6.17]


@pytest.mark.parametrize(
    "value, expected",
    [
        (lambda: eval_fi(PAPER_FI, 75), -41.9393930388035),
        (lambda: eval_fi(PAPER_FI, 215), -56.0723484113922),
        (lambda: eval_fi(PAPER_FI, 1), 16.0),
        (lambda: eval_ci(PAPER_CI, 1, 75), -50.2520339446044),
        (lambda: eval_ci(PAPER_CI, 0, 1), 0.0),
        (lambda: eval_abg(PAPER_ABG, 1, 75), -51.0393930388035),
        (lambda: eval_abg(PAPER_ABG, 0, 1), -5.2),
        (lambda: eval_cif(PAPER_CIF, 1, 145), -59.6574176742012),
        (lambda: eval_cif(PAPER_CIF, 2, 75), -38.2810160135700),
    ],
)
def test_forward_values(value, expected):
    assert value() == pytest.approx(expected, abs=1e-9)


@given(band)
def test_ci_distance_delta_is_18db(f):
    assert eval_ci(PAPER_CI, 2.5, f) - eval_ci(PAPER_CI, 1, f) == pytest.approx(18.0, abs=1e-12)


@given(coef, coef, freqs, dists)
def test_abg_reduces_to_fi(beta, gamma, f, d):
    assert eval_abg(AbgParams(0.0, beta, gamma), d, f) == eval_fi(FiParams(beta, gamma), f)


@given(coef, coef, freqs, dists)
def test_cif_reduces_to_ci(a, c, f, d):
    assert eval_cif(CifParams(a, 0.0, c), d, f) == eval_ci(CiParams(a, c), d, f)


@pytest.mark.parametrize("p", [PAPER_FI, PAPER_CI, PAPER_ABG, PAPER_CIF])
def test_frequency_term_vanishes_at_1ghz(p):
    # at f = 1 GHz only the distance/intercept terms survive
    zero_d = {"fi": PAPER_FI.A, "ci": 0.0, "abg": PAPER_ABG.beta, "cif": 0.0}[p.tag]
    assert evaluate(p, 0.0, 1.0) == zero_d


@given(st.floats(min_value=75, max_value=214), st.floats(min_value=1e-3, max_value=1))
def test_fi_strictly_decreasing_in_frequency(f, df):
    assert eval_fi(PAPER_FI, f + df) < eval_fi(PAPER_FI, f)


@given(band, st.floats(min_value=0, max_value=5), st.floats(min_value=1e-3, max_value=1))
def test_distance_models_increasing_in_distance(f, d, dd):
    for p in (PAPER_CI, PAPER_ABG, PAPER_CIF):
        assert evaluate(p, d + dd, f) > evaluate(p, d, f)


@given(coef, coef, coef, coef, freqs, dists)
def test_ci_linear_in_parameters(p1, m1, p2, m2, f, d):
    lhs = eval_ci(CiParams(p1 + p2, m1 + m2), d, f)
    rhs = eval_ci(CiParams(p1, m1), d, f) + eval_ci(CiParams(p2, m2), d, f)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_cif_not_clamped_for_extreme_cross_factor():
    p = CifParams(a=10.0, b=-5.0, c=0.0)
    # 1 + b (215-145)/145 < 0, so the distance slope flips sign
    assert eval_cif(p, 1.0, 215.0) < 0.0


def test_sample_chi_degenerate_and_errors(rng):
    assert sample_chi(0.0, rng) == 0.0
    with pytest.raises(NegativeSigma):
        sample_chi(-1.0, rng)


def test_sample_chi_reproducible():
    a = sample_chi(6.17, np.random.default_rng(5), 100)
    b = sample_chi(6.17, np.random.default_rng(5), 100)
    np.testing.assert_array_equal(a, b)


def test_sample_chi_moments():
    x = sample_chi(6.17, np.random.default_rng(11), 1_000_000)
    # running-mean oracle: independent accumulation in chunks
    chunks = x.reshape(100, -1)
    mean = sum(c.sum() for c in chunks) / x.size
    var = sum(((c - mean) ** 2).sum() for c in chunks) / x.size
    assert abs(mean) < 0.02
    assert abs(math.sqrt(var) - 6.17) < 0.02


@pytest.mark.parametrize("d_link, d_near, expected", [(2, 1, 2), (3, 0.5, 1), (2.5, 0, 0)])
def test_equivalent_distance(d_link, d_near, expected):
    assert equivalent_distance(d_link, d_near) == expected


def test_equivalent_distance_beyond_midpoint():
    with pytest.raises(BlockerBeyondMidpoint):
        equivalent_distance(2, 1.2)


def test_equivalent_distance_gives_lower_bound():
    # a blocker 0.5 m from the Tx on a 2.5 m link is evaluated at 1 m: more attenuation
    d_eq = equivalent_distance(2.5, 0.5)
    assert eval_ci(PAPER_CI, d_eq, 145) < eval_ci(PAPER_CI, 2.5, 145)


def test_fspl_values():
    assert fspl(1, 75) == pytest.approx(69.9490084897174, abs=1e-9)
    assert fspl(2.5, 75) == pytest.approx(77.9078086631581, abs=1e-9)
    with pytest.raises(ZeroDistance):
        fspl(0, 75)


@given(st.floats(min_value=0.01, max_value=1000))
def test_fspl_band_delta(d):
    assert fspl(d, 215) - fspl(d, 75) == pytest.approx(9.14754393047811, abs=1e-9)


@given(st.floats(min_value=0.01, max_value=1000), freqs)
def test_fspl_distance_doubling(d, f):
    assert fspl(2 * d, f) - fspl(d, f) == pytest.approx(20 * math.log10(2), abs=1e-9)


def test_link_budget_examples():
    ci = paper_model("ci")
    assert link_budget(0, 20, 20, 1, 75, ci) == pytest.approx(-80.2010424343218, abs=1e-9)
    assert link_budget(0, 20, 20, 2.5, 75, ci) == pytest.approx(-70.1598426077626, abs=1e-9)


@given(st.floats(-30, 30), st.floats(0, 30), st.floats(0, 30), st.floats(0.1, 10), band)
def test_link_budget_zero_blockage_is_friis(pt, gt, gr, d, f):
    lb = link_budget(pt, gt, gr, d, f, FiParams(0.0, 0.0))
    assert lb == pytest.approx(pt + gt + gr - fspl(d, f), abs=1e-9)


def test_model_json_round_trip():
    for tag in ("fi", "ci", "abg", "cif"):
        m = paper_model(tag)
        back = BgModel.from_json(m.to_json())
        assert back == m
    obj = paper_model("cif").to_dict()
    assert set(obj["params"]) == {"a", "b", "c", "f0_ghz"}
    assert obj["model"] == "cif" and obj["sigma_db"] == 6.17


def test_model_json_rejects_unknown_fields():
    from blockage_kit.core import ValidationError

    with pytest.raises(ValidationError):
        BgModel.from_dict({"model": "ci", "params": {"phi": 1, "m": 2, "zz": 3}})
    with pytest.raises(ValidationError):
        BgModel.from_dict({"model": "xyz", "params": {}})
    with pytest.raises(NegativeSigma):
        BgModel(PAPER_CI, -1.0)


def test_band_warning_is_opt_in():
    with pytest.warns(BandExtrapolationWarning):
        evaluate(PAPER_CI, 1.0, 300.0, warn_band=True)
