"""Building multimode cat states and checking their overlaps.

Run: python3 demos/01_cat_states.py
"""
import math

from catnet.cat_algebra import channel_state, inner_product, make_input_cat, norm_sq

alpha = 1.0

# channel states for a few sizes; both signs are unit vectors
for M in (2, 3, 5):
    minus, plus = channel_state(M, "minus", alpha), channel_state(M, "plus", alpha)
    print(f"M={M}: <-|-> = {norm_sq(minus):.12f}, <+|+> = {norm_sq(plus):.12f}, "
          f"<+|-> = {abs(inner_product(plus, minus)):.2e}")

# the normalization of an input cat x|a>^L + y|-a>^L depends on the overlap <a|-a>^L
for a2 in (0.1, 1.0, 4.0):
    cat = make_input_cat(1.0, 1.0, math.sqrt(a2), 2)
    c = abs(cat.coeffs[0])
    print(f"|alpha|^2={a2}: even two-mode input cat, weight per term {c:.6f}, norm^2 {norm_sq(cat):.12f}")
