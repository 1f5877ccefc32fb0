"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line that is printed in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from ajchain.chain import (
    ChainParams,
    Region,
    admissible_t_intervals,
    classify_region,
    coeff_pqr,
    falsification_sweep,
    potential,
    window,
)
from ajchain.factorization import (
    cf_H,
    cf_Hprime,
    chain_sequence_sums,
    darboux_lu,
    darboux_ul,
    lu_factorize,
    ul_factorize,
)
from ajchain.polynomials import diffop_residual
from ajchain.quadrature import (
    block_moment_matrix,
    integrate_matrix_density,
    km_transition,
    matrix_rule,
    recurrence_diagnostic,
)
from ajchain.simulate import UrnModel, empirical_transition, total_variation, transition_row, truncated_power, urn_counts
from ajchain.spectral import delta_mass_gap, spectral_geronimus, spectral_psi

from conftest import BASELINE

RESULTS = {}

REGION_SAMPLES = {
    "A1": [(0.5, -1.0 / 3.0), (0.02, -0.01), (0.3, -0.2)],
    "A2": [(0.25, -0.5), (0.05, -0.9), (0.1, -0.3)],
    "B1": [(0.8, -0.5), (0.9, -0.2), (0.95, -0.5)],
    "B2": [(0.6, -0.8), (0.3, -0.9), (0.8, -0.95)],
    "C1": [(-0.25, -0.5), (-0.1, -0.2), (-0.3, -0.6)],
    "C2": [(-0.5, -1.0 / 3.0), (-0.2, -0.1), (-0.6, -0.3)],
    "D1": [(-0.3, -0.9), (-0.1, -0.95), (-0.4, -0.7)],
    "D2": [(-0.9, -0.3), (-0.95, -0.1), (-0.7, -0.4)],
}
NONNEGATIVE_BETA = [(0.5, 0.25), (0.0, 0.0), (-0.5, 0.5), (0.9, 0.9), (-0.9, 0.01)]
CF_SETS = [BASELINE, (0.25, -0.5, 0.375), (0.8, -0.5, 0.1), (0.6, -0.8, 0.3), (0.05, -0.9, 0.875)]


def record(num, title, ok, detail, elapsed, budget):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    RESULTS[num] = f"criterion {num:2d} {status}  {title}: {detail}; {elapsed:.2f}s (budget {budget:g}s)"
    assert ok, RESULTS[num]
    assert within, RESULTS[num]


def test_criterion_01_regions_and_stochasticity():
    start = time.perf_counter()
    worst_sum, min_coeff, n_params = 0.0, math.inf, 0
    for region, samples in REGION_SAMPLES.items():
        for a, b in samples:
            assert classify_region(a, b) is Region(region)
            for lo, hi in admissible_t_intervals(Region(region), a, b, -2, 2):
                params = ChainParams(a, b, 0.5 * (lo + hi))
                n_params += 1
                for n in range(-50, 51):
                    p, r, q = coeff_pqr(n, params)
                    worst_sum = max(worst_sum, abs(p + r + q - 1.0))
                    min_coeff = min(min_coeff, p, r, q)
    falsified = sum(all(v is not None for v in falsification_sweep(a, b).values()) for a, b in NONNEGATIVE_BETA)
    elapsed = time.perf_counter() - start
    ok = worst_sum < 1e-14 and min_coeff > 0 and falsified == len(NONNEGATIVE_BETA)
    detail = f"{n_params} chains, max|p+r+q-1|={worst_sum:.1e}, min coeff={min_coeff:.2e}, beta>=0 falsified {falsified}/5"
    record(1, "regions/stochasticity", ok, detail, elapsed, 5.0)


def test_criterion_02_continued_fractions():
    start = time.perf_counter()
    err_closed = err_pair = err_sums = 0.0
    base_value = None
    for abt in CF_SETS:
        params = ChainParams.admissible(*abt)
        H, Hp = cf_H(params), cf_Hprime(params)
        if abt == BASELINE:
            base_value = H.value
        a, b, t = abt
        err_closed = max(err_closed, abs(H.value - (a + t) / (a + b + 2 * t + 1)))
        err_pair = max(err_pair, abs(H.value - Hp.value))
        S = chain_sequence_sums(params)
        err_sums = max(err_sums, abs(S.L - (b + t + 1) / a), abs(S.L_prime + (a + t) / a))
    elapsed = time.perf_counter() - start
    ok = err_closed < 1e-10 and err_pair < 1e-10 and err_sums < 1e-8 and abs(base_value - 0.45) < 1e-10
    detail = f"H(baseline)={base_value:.15f}, |H-closed|={err_closed:.1e}, |H-H'|={err_pair:.1e}, sums {err_sums:.1e}"
    record(2, "continued fractions", ok, detail, elapsed, 1.0)


def test_criterion_03_factorization():
    start = time.perf_counter()
    worst = 0.0
    for abt in CF_SETS:
        params = ChainParams.admissible(*abt)
        P = window(params, 25)
        for fp in (ul_factorize(params), lu_factorize(params)):
            worst = max(worst, np.abs((fp.product(25) - P)[1:-1]).max())
    elapsed = time.perf_counter() - start
    record(3, "UL/LU reconstruction", worst < 1e-13, f"max interior error {worst:.1e} on 51 states", elapsed, 1.0)


def test_criterion_04_darboux():
    start = time.perf_counter()
    worst = 0.0
    for abt in CF_SETS:
        params = ChainParams.admissible(*abt)
        shifted = params.replace(alpha=params.alpha - 1.0)
        til, hat = darboux_ul(params), darboux_lu(params)
        for n in range(-20, 21):
            for got, ref in ((til[n], coeff_pqr(n, shifted)), (hat[n], coeff_pqr(n + 1, shifted))):
                worst = max(worst, max(abs(g - r) / abs(r) for g, r in zip(got, ref)))
    elapsed = time.perf_counter() - start
    record(4, "Darboux identities", worst < 1e-12, f"max relative error {worst:.1e}", elapsed, 1.0)


def test_criterion_05_karlin_mcgregor():
    start = time.perf_counter()
    worst = 0.0
    for abt in (BASELINE, (-0.25, -0.5, 0.125)):
        params = ChainParams.admissible(*abt)
        for i in range(-3, 4):
            for j in range(-3, 4):
                for n in range(7):
                    value = km_transition(i, j, n, params, 200)
                    worst = max(worst, abs(value - truncated_power(i, j, n, params)))
    elapsed = time.perf_counter() - start
    record(5, "Karlin-McGregor vs exact", worst < 1e-6, f"max |KM - P^n| = {worst:.1e}", elapsed, 30.0)


def test_criterion_06_orthogonality():
    start = time.perf_counter()
    params = ChainParams.admissible(*BASELINE)
    G = block_moment_matrix(matrix_rule(spectral_psi(params), 200), params, 5)
    worst = 0.0
    for n in range(6):
        for m in range(6):
            ref = np.diag([1 / potential(n, params), 1 / potential(-n - 1, params)]) if n == m else np.zeros((2, 2))
            worst = max(worst, np.abs(G[n, m] - ref).max())
    mass = G[0, 0]
    mass_err = np.abs(mass - np.diag([1.0, 0.9259259])).max()
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and mass_err < 1e-6
    detail = f"max error {worst:.1e}, int Psi = diag({mass[0, 0]:.7f}, {mass[1, 1]:.7f})"
    record(6, "orthogonality", ok, detail, elapsed, 20.0)


def test_criterion_07_geronimus():
    start = time.perf_counter()
    params = ChainParams.admissible(*BASELINE)
    xs = 0.5 - 0.49 * np.cos(np.pi * (np.arange(50) + 0.5) / 50)
    got = spectral_geronimus(params, "UL")(xs)
    ref = spectral_psi(params.replace(alpha=params.alpha - 1.0))(xs)
    rel = float((np.linalg.norm(got - ref, axis=(1, 2)) / np.linalg.norm(ref, axis=(1, 2))).max())
    gaps = max(float(np.abs(delta_mass_gap(params, w)).max()) for w in ("UL", "LU"))
    elapsed = time.perf_counter() - start
    ok = rel < 1e-8 and gaps < 1e-8
    record(7, "Geronimus identity", ok, f"max relative deviation {rel:.1e}, delta gaps {gaps:.1e}", elapsed, 10.0)


def test_criterion_08_eigencheck():
    start = time.perf_counter()
    x = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    worst = 0.0
    for abt in (BASELINE, (-0.25, -0.5, 0.125), (0.6, -0.8, 0.3)):
        params = ChainParams.admissible(*abt)
        for n in range(9):
            worst = max(worst, float(np.abs(diffop_residual(n, x, params)).max()))
    elapsed = time.perf_counter() - start
    record(8, "bispectral eigencheck", worst < 1e-8, f"max residual {worst:.1e}", elapsed, 2.0)


def test_criterion_09_urn():
    start = time.perf_counter()
    urn = UrnModel(2, 3, 4, 0)
    counts_ok = urn_counts(0, urn) == (22, 18, 10, 6) and urn_counts(-1, urn) == (-2, -6, -14, -18)
    sign_ok = True
    for K in (0, 1, 2, 5):
        u = UrnModel(2, 3, 4, K)
        for n in range(-K - 5, -K + 5):
            pos = all(c > 0 for c in urn_counts(n, u))
            neg = all(c < 0 for c in urn_counts(n, u))
            sign_ok &= pos if n >= -K else neg
    R = 1_000_000
    emp = empirical_transition(0, 1, R, urn, seed=20240101)
    zscores = []
    for j, prob in zip((1, 0, -1), (0.29218750, 0.5390625, 0.16875)):
        zscores.append(abs(emp.get(j, 0.0) - prob) / math.sqrt(prob * (1 - prob) / R))
    tv = total_variation(empirical_transition(0, 3, R, urn, seed=20240102), transition_row(0, 3, urn.params))
    elapsed = time.perf_counter() - start
    ok = counts_ok and sign_ok and max(zscores) < 3.0 and tv < 0.005
    detail = f"counts {counts_ok}, sign change {sign_ok}, max z={max(zscores):.2f}, 3-step TV={tv:.4f}"
    record(9, "urn model", ok, detail, elapsed, 60.0)


def test_criterion_10_null_recurrence():
    start = time.perf_counter()
    params = ChainParams.admissible(*BASELINE)
    eps = [10.0 ** -k for k in range(1, 7)]
    inc = np.diff(recurrence_diagnostic(params, eps))
    slope = float(np.polyfit(np.log(eps[1:]), np.log(inc), 1)[0])
    psi = spectral_psi(params)
    bracket = np.array([np.abs(psi.bracket(1.0 - 10.0 ** -k)).max() for k in range(2, 13)])
    bounded = bool(np.all(np.isfinite(bracket)) and bracket.max() < 10 * bracket[0])
    # an atom at 1 would show up as missing absolutely continuous mass
    mass_gap = float(np.abs(integrate_matrix_density(psi, 200) - np.diag([1.0, 1.0 / potential(-1, params)])).max())
    elapsed = time.perf_counter() - start
    ok = bool(np.all(inc > 0)) and abs(slope - params.beta) < 0.1 and bounded and mass_gap < 1e-6
    detail = f"increasing {bool(np.all(inc > 0))}, slope={slope:.4f} (beta={params.beta:.4f}), bounded {bounded}, mass gap {mass_gap:.1e}"
    record(10, "null recurrence", ok, detail, elapsed, 10.0)
