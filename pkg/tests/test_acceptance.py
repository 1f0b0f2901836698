"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with its worst measured
discrepancy before asserting, so ``pytest -v`` shows the whole table.
"""

import itertools
import math
import time

import numpy as np
import pytest

import frozen
from catnet.analytics import (
    asymmetric_pair_success_hyperbolic,
    concurrence_analytic,
    concurrence_from_decomposition,
    ghz_fidelity,
    mean_photon_per_mode,
    w_fidelity,
)
from catnet.cat_algebra import channel_state, fidelity
from catnet.generation import (
    generation_probability_analytic,
    ladder_generate,
    reduce_by_parity,
    tree_generate_pow2,
)
from catnet.measurement import trial_rng
from catnet.teleportation import NetworkConfig, monte_carlo_success, single_mode_success, success_probability_analytic
from catnet.validation import identity_checks, oracle_checks

SIGMA = 4.0
TRIALS = 100_000


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return emit


def test_c1_two_party_universality(report):
    t0 = time.perf_counter()
    worst = 0.0
    for L, alpha2 in itertools.product((1, 2, 3), (0.5, 1.0, 3.0)):
        cfg = NetworkConfig(2, L, alpha=math.sqrt(alpha2))
        est, se = monte_carlo_success(cfg, 1.0, 1.0, TRIALS, seed=1000 * L + int(10 * alpha2))
        worst = max(worst, abs(est - 0.5) / se)
    elapsed = time.perf_counter() - t0
    ok = worst <= SIGMA and elapsed < 60.0
    assert report(1, ok, f"max |z| = {worst:.2f} (limit {SIGMA}), {elapsed:.1f} s (limit 60 s)")


def test_c2_closed_form_agreement(report):
    assert single_mode_success(3, 1.0) == pytest.approx(frozen.PI3_MINUS_X1, abs=1e-15)
    expected = {(3, 1): frozen.PI3_MINUS_X1, (4, 1): frozen.PI4_MINUS_X1, (3, 2): frozen.PI3_L2_MINUS_X1}
    worst, worst_closed = 0.0, 0.0
    for (N, L), value in expected.items():
        cfg = NetworkConfig(N, L, alpha=1.0)
        analytic = success_probability_analytic(cfg)
        worst_closed = max(worst_closed, abs(analytic - value))
        est, se = monte_carlo_success(cfg, 1.0, 1.0, TRIALS, seed=77 + 10 * N + L)
        worst = max(worst, abs(est - analytic) / se)
    ok = worst <= SIGMA and worst_closed < 1e-14
    assert report(2, ok, f"max |z| = {worst:.2f} (limit {SIGMA}), closed form vs oracle {worst_closed:.1e}")


def test_c3_asymmetric_identities(report):
    worst_p12 = worst_pln = 0.0
    for N in range(2, 7):
        for x in np.linspace(0.1, 5.0, 50):
            worst_p12 = max(worst_p12, abs(asymmetric_pair_success_hyperbolic(N, x) - single_mode_success(2 * N - 1, x)))
            for L in (1, 2, 3, 4):
                cfg = NetworkConfig(N, L, symmetric=False, alpha=math.sqrt(x))
                worst_pln = max(worst_pln, abs(success_probability_analytic(cfg) - single_mode_success((N - 1) * L + 1, x)))
    ok = max(worst_p12, worst_pln) <= 1e-14
    assert report(3, ok, f"P12 residual {worst_p12:.1e}, PLN residual {worst_pln:.1e} (limit 1e-14)")


def test_c4_generation_exactness(report):
    worst = 0.0
    for alpha2 in (0.25, 1.0, 4.0):
        a = math.sqrt(alpha2)
        for sign in ("minus", "plus"):
            for M in range(2, 9):
                ref = channel_state(M, sign, a)
                ladder = ladder_generate(M, a, sign)
                worst = max(worst, 1 - fidelity(ladder, ref))
                if M in (2, 4, 8):
                    tree = tree_generate_pow2(M.bit_length() - 1, a, sign)
                    worst = max(worst, 1 - fidelity(tree, ref), 1 - fidelity(tree, ladder))
    ok = worst <= 1e-10
    assert report(4, ok, f"max infidelity {worst:.1e} (limit 1e-10)")


def _branch_frequency(M, source, alpha, trials):
    hits = 0
    for i in range(trials):
        hits += reduce_by_parity(M, source, alpha, trial_rng(5150 + M, i)).target_hit
    return hits / trials


def test_c5_generation_probabilities(report):
    worst_z = 0.0
    for M, alpha2, source in itertools.product((5, 6, 7), (0.25, 1.0), ("minus", "plus")):
        a = math.sqrt(alpha2)
        # the sign kept by the even branch is the source sign, so the hit rate is P(source -> source)
        p = generation_probability_analytic(3, M, source, source, a)
        freq = _branch_frequency(M, source, a, TRIALS)
        se = math.sqrt(p * (1 - p) / TRIALS)
        worst_z = max(worst_z, abs(freq - p) / se)
        other = "plus" if source == "minus" else "minus"
        assert p + generation_probability_analytic(3, M, source, other, a) == pytest.approx(1.0, abs=1e-14)

    ident = {c.name: c.discrepancy for c in identity_checks(1e-12)}
    worst_ident = max(ident["identity.Pcc_ratio"], ident["identity.Ptc_ratio"])

    small = math.sqrt(1e-6)
    worst_limit = 0.0
    for M in (5, 6, 7):
        limits = {("plus", "minus"): 0.0, ("minus", "minus"): M / 8, ("plus", "plus"): 1.0, ("minus", "plus"): 1 - M / 8}
        for (src, tgt), value in limits.items():
            worst_limit = max(worst_limit, abs(generation_probability_analytic(3, M, src, tgt, small) - value))

    closed = abs(generation_probability_analytic(3, 6, "minus", "minus", 1.0) - frozen.PMM_Q3_M6_X1)
    ok = worst_z <= SIGMA and worst_ident <= 1e-12 and worst_limit <= 1e-3 and closed < 1e-14
    assert report(
        5,
        ok,
        f"max |z| = {worst_z:.2f} (limit {SIGMA}), identities {worst_ident:.1e} (limit 1e-12), "
        f"small-alpha limits {worst_limit:.1e} (limit 1e-3)",
    )


def test_c6_concurrence(report):
    worst_dual = 0.0
    for M in range(2, 11):
        for K in range(1, M):
            for x in np.linspace(0.01, 10.0, 60):
                for sign in ("minus", "plus"):
                    a = math.sqrt(x)
                    worst_dual = max(worst_dual, abs(concurrence_analytic(M, K, sign, a) - concurrence_from_decomposition(M, K, sign, a)))
    worst_half = max(
        abs(concurrence_analytic(2 * K, K, "minus", math.sqrt(x)) - 1.0)
        for K in range(1, 6)
        for x in np.linspace(0.01, 10.0, 60)
    )
    tiny = math.sqrt(1e-8)
    worst_limit = max(
        abs(concurrence_analytic(M, K, "minus", tiny) - 2 * math.sqrt(K * (M - K)) / M) for M in range(2, 11) for K in range(1, M)
    )
    ok = worst_dual <= 1e-12 and worst_half <= 1e-14 and worst_limit <= 1e-6
    assert report(
        6,
        ok,
        f"dual path {worst_dual:.1e} (limit 1e-12), balanced split {worst_half:.1e} (limit 1e-14), "
        f"small-alpha limit {worst_limit:.1e} (limit 1e-6)",
    )


def test_c7_photon_statistics(report):
    bracket = True
    for M in range(2, 9):
        for a in np.sqrt(np.linspace(0.01, 6.0, 120)):
            x = abs(a) ** 2
            lo, hi = mean_photon_per_mode(M, "plus", a), mean_photon_per_mode(M, "minus", a)
            bracket &= lo <= x <= hi
    a2 = math.sqrt(2.0)
    rel = max(abs(mean_photon_per_mode(M, s, a2) / 2.0 - 1) for M in range(2, 9) for s in ("plus", "minus"))
    ok = bracket and rel < 0.01
    assert report(7, ok, f"bracketing holds: {bracket}, max relative gap at alpha2=2: {rel:.1e} (limit 1e-2)")


def test_c8_oracle_equivalence(report):
    t0 = time.perf_counter()
    checks = oracle_checks(1e-8)
    elapsed = time.perf_counter() - t0
    failed = [c.name for c in checks if not c.passed]
    worst = max(c.discrepancy for c in checks)
    ok = not failed and elapsed < 120.0
    assert report(8, ok, f"{len(checks)} pipelines, max discrepancy {worst:.1e}, {elapsed:.1f} s (limit 120 s) {failed or ''}")


def test_c9_reference_limits(report):
    fw = w_fidelity(3, math.sqrt(1e-3))
    fg = ghz_fidelity(3, "minus", 3.0)
    ok = fw >= 0.999 and fg >= 0.999
    assert report(9, ok, f"W fidelity {fw:.6f}, GHZ fidelity {fg:.12f} (limit 0.999)")
