"""Regenerates the frozen reference values in ``tests/frozen.py``.

Everything is evaluated with mpmath at 40 digits directly from the defining
sums and closed forms, without importing catnet.
Run: ``python3 tests/oracles/derive_values.py``.
"""

from mpmath import mp, mpf, exp, sqrt, acos, sinh, cosh, coth, tanh, nsum, inf, factorial

mp.dps = 40


def poisson_even(mean):
    # sum of Poisson weights over even counts, by direct summation
    return nsum(lambda k: exp(-mean) * mean ** (2 * k) / factorial(2 * k), [0, inf])


def gen_prob(Q, M, src, tgt, x):
    """(A_K^src / A_M^tgt)^2 times the parity weight of the J measured modes."""
    K, J = 2**Q, 2**Q - M
    s_src = 1 if src == "plus" else -1
    s_tgt = 1 if tgt == "plus" else -1
    A2 = lambda s, n: 1 / (2 * (1 + s * exp(-2 * n * x)))
    even = poisson_even(J * x)
    weight = even if s_src * s_tgt > 0 else 1 - even
    # the unnormalized K-mode state restricted to a parity branch has squared
    # norm 2 * (1 + s_tgt Z^M) * weight; divide by the K-mode normalization
    return A2(s_src, K) / A2(s_tgt, M) * weight


VALUES = {
    "overlap_alpha_minus_alpha_x1": exp(-2),
    "overlap_sq_x1": exp(-4),
    "A_input_x1": (2 + 2 * exp(-2)) ** mpf(-0.5),
    "A_ab_x1_L2": (2 + 2 * exp(-4)) ** mpf(-0.5),
    "A2_minus_x1": (2 - 2 * exp(-4)) ** mpf(-0.5),
    "fock_amp_1_beta1": exp(mpf(-0.5)),
    "poisson_p0_x1": exp(-1),
    "theta_3": acos(1 / sqrt(3)),
    "Pi3_minus_x1": (1 - sinh(1) / sinh(3)) / 2,
    "Pi2_plus_x1": (1 - 1 / cosh(2)) / 2,
    "Pi3_L2_minus_x1": (1 - sinh(2) / sinh(6)) / 2,
    "Pi4_minus_x1": (1 - sinh(2) / sinh(4)) / 2,
    "nbar_minus_M3_x1": coth(3),
    "nbar_plus_M3_x1": tanh(3),
    "conc_limit_M6_K1": 2 * sqrt(5) / 6,
    "Pmm_Q3_M6_x1": gen_prob(3, 6, "minus", "minus", mpf(1)),
    "Ppm_Q3_M6_x1": gen_prob(3, 6, "plus", "minus", mpf(1)),
    "Ppp_Q3_M6_x1": gen_prob(3, 6, "plus", "plus", mpf(1)),
    "Pmp_Q3_M6_x1": gen_prob(3, 6, "minus", "plus", mpf(1)),
    "Pmm_Q3_M5_x025": gen_prob(3, 5, "minus", "minus", mpf("0.25")),
    "printed_Ptt_Q3_M6_x1": (1 - exp(-12)) / (2 * (1 - exp(-16)) * (1 + exp(-4))),
}

if __name__ == "__main__":
    for k, v in VALUES.items():
        print(f"{k} = {mp.nstr(v, 17)}")
