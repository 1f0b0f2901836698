"""Entanglement and photon statistics of the channel states.

Run: python3 demos/04_entanglement.py
"""
import math

from catnet.analytics import concurrence_analytic, ghz_fidelity, mean_photon_per_mode, w_fidelity

# concurrence between one mode and the rest, and between two halves
for a2 in (1e-4, 0.1, 0.5, 2.0):
    a = math.sqrt(a2)
    print(f"|alpha|^2={a2:g}: C-(6|1) {concurrence_analytic(6, 1, 'minus', a):.6f}, "
          f"C+(6|1) {concurrence_analytic(6, 1, 'plus', a):.6f}, C-(6|3) {concurrence_analytic(6, 3, 'minus', a):.6f}")

# mean photon number per mode sits above (minus) or below (plus) |alpha|^2
for a2 in (0.05, 0.5, 2.0):
    a = math.sqrt(a2)
    print(f"|alpha|^2={a2:g}: nbar- {mean_photon_per_mode(3, 'minus', a):.6f}, nbar+ {mean_photon_per_mode(3, 'plus', a):.6f}")

# small amplitude looks like W, large amplitude like GHZ
print("W fidelity at |alpha|^2=1e-3:", round(w_fidelity(3, math.sqrt(1e-3)), 8))
print("GHZ fidelity at |alpha|^2=9:", ghz_fidelity(3, "minus", 3.0))
