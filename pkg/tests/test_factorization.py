from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ajchain.chain import ChainParams, coeff_pqr, window
from ajchain.errors import ConvergenceError, ParameterError
from ajchain.factorization import (
    H_from_sum,
    Hprime_from_sum,
    cf_H,
    cf_Hprime,
    cf_approximant,
    chain_sequence_sums,
    closed_form_H,
    darboux_lu,
    darboux_ul,
    lu_entries,
    lu_factorize,
    ul_entries,
    ul_factorize,
)

from conftest import ALL_SETS, BASELINE, POSITIVE_ALPHA_SETS
from test_chain import BASE_FR, exact_pqr

CF_SETS = [BASELINE, (0.25, -0.5, 0.375), (0.8, -0.5, 0.1), (0.6, -0.8, 0.3), (0.05, -0.9, 0.875)]


def exact_ul(n, a, b, t):
    d = 2 * (n + t) + a + b
    return (n + t + b + 1) / (d + 1), (n + t + a) / (d + 1), (n + t + a + b) / d, (n + t) / d


def test_baseline_H_frozen(baseline):
    assert closed_form_H(baseline) == pytest.approx(0.45, abs=1e-15)
    res = cf_H(baseline)
    assert res.converged
    assert abs(res.value - 0.45) < 1e-10


@pytest.mark.parametrize("abt", CF_SETS)
def test_continued_fractions_match_closed_form(abt):
    params = ChainParams.admissible(*abt)
    H, Hp = cf_H(params), cf_Hprime(params)
    assert H.converged and Hp.converged
    assert abs(H.value - H.closed_form) < 1e-10
    assert abs(H.value - Hp.value) < 1e-10


def test_plain_approximants_approach_closed_form(baseline):
    # the plain truncations converge only algebraically; errors must shrink monotonically
    errs = [abs(cf_approximant(baseline, d) - 0.45) for d in (64, 256, 1024, 4096)]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 1e-2


def test_approximant_depth_zero(baseline):
    p0, r0, q0 = coeff_pqr(0, baseline)
    assert cf_approximant(baseline, 0, "H") == pytest.approx(1.0 - p0)
    assert cf_approximant(baseline, 0, "H'") == pytest.approx(q0)


@pytest.mark.parametrize("abt", [(-0.25, -0.5, 0.125), (-0.5, -1.0 / 3.0, 0.6)])
def test_nonpositive_alpha_reports_divergence(abt):
    params = ChainParams.admissible(*abt)
    res = cf_H(params, max_depth=4096)
    assert not res.converged
    with pytest.raises(ParameterError):
        ul_factorize(params)
    with pytest.raises(ParameterError):
        lu_factorize(params)


@pytest.mark.parametrize("abt", CF_SETS)
def test_chain_sequence_sums(abt):
    params = ChainParams.admissible(*abt)
    a, b, t = abt
    S = chain_sequence_sums(params)
    assert S.converged
    assert abs(S.L - (b + t + 1) / a) < 1e-8
    assert abs(S.L_prime + (a + t) / a) < 1e-8
    assert H_from_sum(params, S.L) == pytest.approx(closed_form_H(params), abs=1e-12)
    assert Hprime_from_sum(params, S.L_prime) == pytest.approx(closed_form_H(params), abs=1e-12)


def test_baseline_sums_frozen(baseline):
    S = chain_sequence_sums(baseline)
    assert S.L == pytest.approx(11.0 / 6.0, abs=1e-12)
    assert S.L_prime == pytest.approx(-1.5, abs=1e-12)


@pytest.mark.parametrize("n", range(-6, 7))
def test_ul_entries_rational_oracle(baseline, n):
    ref = exact_ul(n, *BASE_FR)
    assert ul_entries(n, baseline) == pytest.approx([float(v) for v in ref], rel=1e-14)
    x, y, s, t = ref
    assert x + y == 1 and s + t == 1
    s1, t1 = exact_ul(n + 1, *BASE_FR)[2:]
    xm, ym = exact_ul(n - 1, *BASE_FR)[:2]
    p, r, q = exact_pqr(n, *BASE_FR)
    # UL product reproduces the chain exactly
    assert x * s1 == p and x * t1 + y * s == r and y * t == q
    _ = xm, ym


@pytest.mark.parametrize("abt", POSITIVE_ALPHA_SETS)
def test_factorizations_reconstruct_window(abt):
    params = ChainParams.admissible(*abt)
    P = window(params, 25)
    for fp in (ul_factorize(params), lu_factorize(params)):
        diff = fp.product(25) - P
        assert np.abs(diff[1:-1]).max() < 1e-13
        U, L = fp.dense_upper(25), fp.dense_lower(25)
        assert np.all(U >= 0) and np.all(L >= 0)
        assert np.allclose(U[:-1].sum(axis=1), 1.0, atol=1e-15)
        assert np.allclose(L[1:].sum(axis=1), 1.0, atol=1e-15)
        for n in range(-10, 11):
            assert fp.reconstruct(n) == pytest.approx(coeff_pqr(n, params), rel=1e-13)


def test_factor_anchor(baseline):
    fp = ul_factorize(baseline)
    assert fp.entries(0)[1] == pytest.approx(fp.H, abs=1e-10)
    assert lu_entries(0, baseline)[:2] == pytest.approx(ul_entries(1, baseline)[2:])


@pytest.mark.parametrize("abt", POSITIVE_ALPHA_SETS)
def test_darboux_shifts_alpha(abt):
    params = ChainParams.admissible(*abt)
    shifted = params.replace(alpha=params.alpha - 1.0)
    til, hat = darboux_ul(params), darboux_lu(params)
    for n in range(-20, 21):
        ref0 = coeff_pqr(n, shifted)
        ref1 = coeff_pqr(n + 1, shifted)
        assert til[n] == pytest.approx(ref0, rel=1e-12)
        assert hat[n] == pytest.approx(ref1, rel=1e-12)


def test_darboux_rational_identity():
    a, b, t = BASE_FR
    for n in range(-5, 6):
        x, y, s, tt = exact_ul(n, a, b, t)
        xm, ym = exact_ul(n - 1, a, b, t)[:2]
        assert (s * x, tt * xm + s * y, tt * ym) == exact_pqr(n, a - 1, b, t)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_closed_form_matches_cf_in_region_A1(alpha, frac):
    beta = -alpha * 0.6
    t = frac * (-beta)
    try:
        params = ChainParams.admissible(alpha, beta, t)
    except ParameterError:
        return
    res = cf_H(params)
    assert res.converged
    assert abs(res.value - res.closed_form) < 1e-10
