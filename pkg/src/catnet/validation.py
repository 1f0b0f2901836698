"""Named check suites: dense-oracle runs, probability identities and limits.

Each check returns a :class:`Check` with the measured discrepancy, so the same
suites back the ``validate`` command and the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .analytics import (
    asymmetric_pair_success_hyperbolic,
    concurrence_analytic,
    concurrence_from_decomposition,
    mean_photon_per_mode,
    w_fidelity,
    ghz_fidelity,
)
from .cat_algebra import CatState, channel_state, make_input_cat, normalize, sign_value
from .fock_oracle import (
    CrosscheckReport,
    crosscheck_pipeline,
    fock_parity_project,
    to_fock,
)
from .generation import LadderPlan, generation_probability_analytic, seed_cat
from .linear_optics import LabelUnitary
from .measurement import project_total_parity
from .teleportation import NetworkConfig, single_mode_success, success_probability_analytic

SUITES = ("oracle", "identities", "limits")


@dataclass(frozen=True)
class Check:
    name: str
    discrepancy: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.discrepancy <= self.tolerance)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _from_report(name: str, report: CrosscheckReport) -> Check:
    return Check(name, report.max_discrepancy, report.tolerance)


# --- dual-representation scripts ---------------------------------------------


def ladder_script(M: int) -> list[tuple]:
    plan = LadderPlan.build(M)
    return [("modified_bs", q, q + 1, th) for q, th in enumerate(plan.angles)]


def teleport_script(outcomes: tuple[int, int]) -> list[tuple]:
    """Two-party, one-mode teleportation with the two counts fixed.

    Layout: input mode 0, sender channel mode 1, receiver channel mode 2. The
    receiver's phase flip is included when the input-side count is zero.
    """
    n_in, n_ch = outcomes
    steps: list[tuple] = [
        ("balanced_bs", 0, 1),
        ("distribution", 0),
        ("number", 0, n_in),
        ("distribution", 0),
        ("number", 0, n_ch),
    ]
    if n_in == 0:
        steps.append(("phase_shift", 0, math.pi))
    return steps


def random_label_unitary(rng: np.random.Generator) -> LabelUnitary:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return LabelUnitary.from_matrix(q)


def four_mode_script(rng: np.random.Generator) -> list[tuple]:
    """Exercises every dual-implemented operation on four modes."""
    return [
        ("balanced_bs", 0, 1),
        ("modified_bs", 1, 2, 0.7),
        ("pair_unitary", 2, 3, random_label_unitary(rng)),
        ("phase_shift", 3, 0.4),
        ("distribution", 0),
        ("distribution", 3),
        ("parity", (1, 2), "odd"),
        ("parity", (0,), "even"),
        ("pair_unitary", 3, 0, random_label_unitary(rng)),
        ("number", 1, 1),
        ("distribution", 2),
        ("parity", (0, 1, 2), "even"),
    ]


def four_mode_initial(alpha2: float, rng: np.random.Generator) -> CatState:
    alpha = math.sqrt(alpha2) * np.exp(1j * rng.uniform(0, 2 * math.pi))
    x, y = rng.normal(size=2) + 1j * rng.normal(size=2)
    return make_input_cat(x, y, alpha, 1).tensor(channel_state(3, "minus", alpha))


def oracle_checks(tolerance: float = 1e-8, seed: int = 2024) -> list[Check]:
    checks = []
    a = math.sqrt(0.5)
    rep = crosscheck_pipeline(seed_cat(3, a, "minus"), ladder_script(3), tolerance)
    checks.append(_from_report("oracle.ladder_M3", rep))

    initial = make_input_cat(1.0, 0.6j, 1.0, 1).tensor(channel_state(2, "minus", 1.0))
    for outcomes in ((0, 1), (0, 2), (1, 0), (2, 0)):
        rep = crosscheck_pipeline(initial, teleport_script(outcomes), max(tolerance, 1e-7))
        checks.append(_from_report(f"oracle.teleport_N2_L1_{outcomes[0]}{outcomes[1]}", rep))

    # total parity of two modes of the eight-mode channel state; the six
    # untouched modes are represented by one mode carrying their combined amplitude
    for parity in ("even", "odd"):
        _, p_sparse = project_total_parity(channel_state(8, "minus", a), (0, 1), parity)
        merged = channel_like([a, a, a * math.sqrt(6)], "minus")
        _, p_dense = fock_parity_project(to_fock(merged), (0, 1), parity)
        checks.append(Check(f"oracle.psi8_parity_{parity}", abs(p_sparse - p_dense), tolerance))

    rng = np.random.default_rng(seed)
    for alpha2 in (0.5, 2.0):
        rep = crosscheck_pipeline(four_mode_initial(alpha2, rng), four_mode_script(rng), tolerance)
        checks.append(_from_report(f"oracle.four_mode_a2={alpha2:g}", rep))
    return checks


def channel_like(labels, sign) -> CatState:
    """Normalized ``|l_1..l_M> +/- |-l_1..-l_M>`` for arbitrary labels."""
    lab = np.array([labels, [-b for b in labels]], dtype=complex)
    return normalize(CatState([1.0, sign_value(sign)], lab, len(labels)))[0]


# --- closed-form identities --------------------------------------------------


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def identity_checks(tolerance: float = 1e-12) -> list[Check]:
    checks = []
    worst_cc = worst_tc = 0.0
    for M in (5, 6, 7):
        for x in _grid(0.05, 5.0, 40):
            a = math.sqrt(x)
            pmm = generation_probability_analytic(3, M, "minus", "minus", a)
            ppp = generation_probability_analytic(3, M, "plus", "plus", a)
            ppm = generation_probability_analytic(3, M, "plus", "minus", a)
            pmp = generation_probability_analytic(3, M, "minus", "plus", a)
            coth_m, coth_k = 1 / math.tanh(M * x), 1 / math.tanh(8 * x)
            worst_cc = max(worst_cc, abs(ppp / (coth_m / coth_k * pmm) - 1))
            worst_tc = max(worst_tc, abs(pmp / (coth_m * coth_k * ppm) - 1))
    checks.append(Check("identity.Pcc_ratio", worst_cc, tolerance))
    checks.append(Check("identity.Ptc_ratio", worst_tc, tolerance))

    worst_p12 = worst_pln = 0.0
    for N in range(2, 7):
        for x in _grid(0.1, 5.0, 50):
            worst_p12 = max(worst_p12, abs(asymmetric_pair_success_hyperbolic(N, x) - single_mode_success(2 * N - 1, x)))
            for L in (1, 2, 3):
                cfg = NetworkConfig(N, L, symmetric=False, alpha=math.sqrt(x))
                worst_pln = max(worst_pln, abs(success_probability_analytic(cfg) - single_mode_success((N - 1) * L + 1, x)))
    checks.append(Check("identity.P12", worst_p12, max(tolerance, 1e-14)))
    checks.append(Check("identity.PLN", worst_pln, max(tolerance, 1e-14)))

    worst_dual = 0.0
    for M in range(2, 9):
        for K in range(1, M):
            for x in _grid(0.01, 10.0, 30):
                for sign in ("plus", "minus"):
                    a = math.sqrt(x)
                    worst_dual = max(worst_dual, abs(concurrence_analytic(M, K, sign, a) - concurrence_from_decomposition(M, K, sign, a)))
    checks.append(Check("identity.concurrence_dual_path", worst_dual, tolerance))
    return checks


# --- limits ------------------------------------------------------------------


def limit_checks(tolerance: float | None = None) -> list[Check]:
    def tol(default):
        return default if tolerance is None else tolerance

    checks = []
    small = math.sqrt(1e-6)
    worst = max(abs(single_mode_success(N, 1e-6) - 1.0 / N) for N in range(2, 8))
    checks.append(Check("limit.Pi_N_small_alpha", worst, tol(1e-3)))
    worst = max(abs(single_mode_success(N, 30.0) - 0.5) for N in range(2, 8))
    checks.append(Check("limit.Pi_N_large_alpha", worst, tol(1e-6)))
    worst = max(success_probability_analytic(NetworkConfig(N, L, channel_sign="plus", alpha=small)) for N in (2, 3, 4) for L in (1, 2))
    checks.append(Check("limit.Pi_plus_small_alpha", worst, tol(1e-3)))

    K = 8
    worst = 0.0
    for M in (5, 6, 7):
        expect = {("plus", "minus"): 0.0, ("minus", "minus"): M / K, ("plus", "plus"): 1.0, ("minus", "plus"): 1 - M / K}
        for (src, tgt), val in expect.items():
            worst = max(worst, abs(generation_probability_analytic(3, M, src, tgt, small) - val))
    checks.append(Check("limit.generation_small_alpha", worst, tol(1e-3)))
    worst = max(
        abs(generation_probability_analytic(3, M, s, t, math.sqrt(20.0)) - 0.5)
        for M in (5, 6, 7)
        for s in ("plus", "minus")
        for t in ("plus", "minus")
    )
    checks.append(Check("limit.generation_large_alpha", worst, tol(1e-6)))

    tiny = math.sqrt(1e-8)
    worst = max(
        abs(concurrence_analytic(M, k, "minus", tiny) - 2 * math.sqrt(k * (M - k)) / M)
        for M in range(2, 9)
        for k in range(1, M)
    )
    checks.append(Check("limit.concurrence_minus_small_alpha", worst, tol(1e-6)))
    worst = max(concurrence_analytic(M, k, "plus", tiny) for M in range(2, 9) for k in range(1, M))
    checks.append(Check("limit.concurrence_plus_small_alpha", worst, tol(1e-6)))

    worst = max(abs(mean_photon_per_mode(3, s, math.sqrt(2.0)) / 2.0 - 1) for s in ("plus", "minus"))
    checks.append(Check("limit.mean_photon_alpha2_2", worst, tol(1e-2)))
    checks.append(Check("limit.ghz_M3_alpha2_9", 1 - ghz_fidelity(3, "minus", 3.0), tol(1e-3)))
    checks.append(Check("limit.w_M3_alpha2_1e-3", 1 - w_fidelity(3, math.sqrt(1e-3)), tol(1e-3)))
    return checks


SUITE_RUNNERS: dict[str, Callable[..., list[Check]]] = {
    "oracle": oracle_checks,
    "identities": identity_checks,
    "limits": limit_checks,
}


def run_suite(name: str, tolerance: float | None = None) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    out: list[Check] = []
    for n in names:
        runner = SUITE_RUNNERS[n]
        out += runner() if tolerance is None else runner(tolerance)
    return out
