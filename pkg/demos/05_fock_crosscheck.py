"""Replaying a protocol in a truncated Fock basis and comparing with the exact algebra.

Run: python3 demos/05_fock_crosscheck.py
"""
import numpy as np

from catnet.cat_algebra import channel_state, make_input_cat
from catnet.fock_oracle import crosscheck_pipeline, to_fock
from catnet.validation import four_mode_initial, four_mode_script, teleport_script

state = channel_state(2, "minus", 1.0)
v = to_fock(state)
print("Fock cutoffs:", v.cutoff, "truncation loss:", f"{v.truncation_loss:.2e}")

initial = make_input_cat(1.0, 0.6j, 1.0, 1).tensor(state)
rep = crosscheck_pipeline(initial, teleport_script((1, 0)), tolerance=1e-7)
for step in rep.steps:
    print(f"  {step.op:<13} amp {step.amplitude_error:.1e}  prob {step.probability_error:.1e}")
print("teleport replay passed:", rep.passed)

rng = np.random.default_rng(3)
rep = crosscheck_pipeline(four_mode_initial(1.0, rng), four_mode_script(rng))
print(f"four-mode battery: max discrepancy {rep.max_discrepancy:.1e}, passed {rep.passed}")
