from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ajchain.chain import (
    ChainParams,
    Region,
    admissible_t_intervals,
    classify_region,
    coeff_ab,
    coeff_pqr,
    distance_to_endpoint,
    falsification_sweep,
    is_admissible,
    potential,
    potential_product,
    pqr_sequence,
    window,
)
from ajchain.errors import ParameterError

from conftest import ALL_SETS, BASELINE, REGION_SETS


def exact_pqr(n, a, b, t):
    """Rational-arithmetic reference for the chain coefficients."""
    m = n + t
    d = 2 * m + a + b
    p = (m + b + 1) * (m + a + b + 1) / ((d + 1) * (d + 2))
    r = (m + b + 1) * (m + 1) / ((d + 1) * (d + 2)) + (m + a) * (m + a + b) / (d * (d + 1))
    q = m * (m + a) / (d * (d + 1))
    return p, r, q


BASE_FR = (Fr(1, 2), Fr(-1, 3), Fr(1, 4))


def exact_potential(n, a, b, t):
    out = Fr(1)
    if n >= 0:
        for k in range(n):
            out *= exact_pqr(k, a, b, t)[0] / exact_pqr(k + 1, a, b, t)[2]
    else:
        for k in range(n + 1, 1):
            out *= exact_pqr(k, a, b, t)[2] / exact_pqr(k - 1, a, b, t)[0]
    return out


def test_baseline_coefficients_frozen(baseline):
    p, r, q = coeff_pqr(0, baseline)
    assert p == pytest.approx(0.2921875, abs=1e-15)
    assert r == pytest.approx(0.5390625, abs=1e-15)
    assert q == pytest.approx(0.16875, abs=1e-15)
    assert exact_pqr(0, *BASE_FR) == (Fr(187, 640), Fr(69, 128), Fr(27, 160))


@pytest.mark.parametrize("n", range(-12, 13))
def test_coefficients_match_rational_oracle(baseline, n):
    ref = exact_pqr(n, *BASE_FR)
    got = coeff_pqr(n, baseline)
    for g, e in zip(got, ref):
        assert g == pytest.approx(float(e), rel=1e-14)


def test_baseline_potential_frozen(baseline):
    assert potential(-1, baseline) == pytest.approx(1.08, rel=1e-14)
    assert exact_potential(-1, *BASE_FR) == Fr(27, 25)
    assert float(exact_potential(1, *BASE_FR)) == pytest.approx(1.3060317460317460, rel=1e-15)
    assert potential(1, baseline) == pytest.approx(1.306031746031746, rel=1e-14)
    assert potential(0, baseline) == 1.0


@pytest.mark.parametrize("n", [-40, -31, -7, 3, 31, 45])
def test_potential_closed_form_matches_product(baseline, n):
    assert potential(n, baseline) == pytest.approx(potential_product(n, baseline), rel=1e-11)


@pytest.mark.parametrize("abt", ALL_SETS)
def test_similarity_identities(abt):
    params = ChainParams.admissible(*abt)
    for n in range(-30, 31):
        a, _ = coeff_ab(n, params)
        _, b1 = coeff_ab(n + 1, params)
        p, r, q = coeff_pqr(n, params)
        assert a == pytest.approx(coeff_pqr(n - 1, params)[0] * q, rel=1e-12)
        assert b1 == pytest.approx(r, rel=1e-12)
        ratio = potential(n + 1, params) / potential(n, params)
        assert ratio == pytest.approx(p / coeff_pqr(n + 1, params)[2], rel=1e-12)


@pytest.mark.parametrize("region,sets", REGION_SETS.items())
def test_classification_of_sample_sets(region, sets):
    for a, b, t in sets:
        assert classify_region(a, b) is Region(region)
        assert is_admissible(a, b, t)


def test_grid_positivity_every_region():
    seen = set()
    grid = -1.0 + (np.arange(24) + 0.5) / 12.0
    for a in grid:
        for b in grid:
            region = classify_region(a, b)
            if region is Region.NONE:
                continue
            seen.add(region)
            for lo, hi in admissible_t_intervals(region, a, b, -2, 2):
                params = ChainParams(a, b, 0.5 * (lo + hi))
                for n in range(-50, 51):
                    p, r, q = coeff_pqr(n, params)
                    assert min(p, r, q) > 0.0
                    assert abs(p + r + q - 1.0) < 1e-14
    assert seen == set(Region) - {Region.NONE}


@pytest.mark.parametrize("ab", [(0.5, 0.25), (0.0, 0.0), (-0.5, 0.5), (0.9, 0.9), (-0.9, 0.01)])
def test_falsification_sweep_nonnegative_beta(ab):
    assert classify_region(*ab) is Region.NONE
    hits = falsification_sweep(*ab)
    assert len(hits) == 1000
    assert all(v is not None for v in hits.values())


def test_boundaries_and_square():
    assert classify_region(0.5, -0.5) is Region.NONE  # alpha = -beta
    assert classify_region(0.4, -0.6) is Region.NONE  # beta - alpha + 1 = 0
    with pytest.raises(ParameterError):
        classify_region(1.0, -0.5)
    with pytest.raises(ParameterError, match="no admissible t"):
        ChainParams.admissible(0.5, 0.25, 0.1)
    with pytest.raises(ParameterError, match="A1"):
        ChainParams.admissible(0.5, -1.0 / 3.0, 0.4)


def test_interval_formulas_baseline():
    iv = admissible_t_intervals(Region.A1, 0.5, -1.0 / 3.0, 0, 0)
    assert iv[0] == pytest.approx((-0.5, -1.0 / 6.0))
    assert iv[1] == pytest.approx((0.0, 1.0 / 3.0))
    assert distance_to_endpoint(0.5, -1.0 / 3.0, 0.25) == pytest.approx(1.0 / 12.0)


@settings(max_examples=80, deadline=None)
@given(st.floats(-0.99, 0.99), st.floats(-0.99, -0.01), st.integers(-3, 3), st.floats(0.05, 0.95))
def test_admissible_interval_points_are_stochastic(a, b, n, frac):
    region = classify_region(a, b)
    if region is Region.NONE:
        return
    lo, hi = admissible_t_intervals(region, a, b, n, n)[0]
    if hi - lo < 1e-6:
        return  # degenerate widths underflow in floating point
    t = lo + frac * (hi - lo)
    params = ChainParams(a, b, t)
    for k in range(-20, 21):
        p, r, q = coeff_pqr(k, params)
        assert p > 0 and r > 0 and q > 0


def test_window_rows(baseline):
    P = window(baseline, 1)
    assert P[1].tolist() == pytest.approx([0.16875, 0.5390625, 0.2921875], abs=1e-15)
    assert P[0, 2] == 0.0
    W = window(baseline, 10)
    assert np.allclose(W[1:-1].sum(axis=1), 1.0, atol=1e-14)
    assert W[0].sum() == pytest.approx(1.0 - coeff_pqr(-10, baseline)[2], abs=1e-15)


def test_sequence_cache(baseline):
    seq = pqr_sequence(baseline, window=5)
    assert seq[3] == coeff_pqr(3, baseline)
    assert seq[40] == coeff_pqr(40, baseline)
