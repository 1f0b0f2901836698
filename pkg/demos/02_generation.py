"""Preparing channel states with beam-splitter ladders, trees and parity reduction.

Run: python3 demos/02_generation.py
"""
import math

import numpy as np

from catnet.cat_algebra import channel_state, fidelity
from catnet.generation import (
    LadderPlan,
    generation_probability_analytic,
    ladder_generate,
    reduce_by_parity,
    tree_generate_pow2,
)

alpha = 1.0

# ladder: one splitter per extra mode
plan = LadderPlan.build(5)
print("ladder angles for M=5:", np.round(plan.angles, 6))
print("ladder fidelity:", fidelity(ladder_generate(5, alpha, "minus"), channel_state(5, "minus", alpha)))

# tree: log-depth, only powers of two
print("tree fidelity M=8:", fidelity(tree_generate_pow2(3, alpha, "minus"), channel_state(8, "minus", alpha)))

# M=6 from the eight-mode tree state, keeping the sign fixed by a parity check
rng = np.random.default_rng(11)
trials = 20000
hits = sum(reduce_by_parity(6, "minus", alpha, rng).target_hit for _ in range(trials))
print(f"M=6 minus->minus: frequency {hits / trials:.4f}, "
      f"closed form {generation_probability_analytic(3, 6, 'minus', 'minus', alpha):.6f}")

# the four source/target combinations as alpha shrinks
for a2 in (1e-6, 0.1, 1.0):
    a = math.sqrt(a2)
    row = {f"{s[0]}{t[0]}": generation_probability_analytic(3, 6, s, t, a) for s in ("minus", "plus") for t in ("minus", "plus")}
    print(f"|alpha|^2={a2:g}:", {k: round(v, 6) for k, v in row.items()})
