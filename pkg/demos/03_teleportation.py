"""Teleporting a cat qubit across symmetric and asymmetric networks.

Run: python3 demos/03_teleportation.py
"""
import numpy as np

from catnet.teleportation import NetworkConfig, monte_carlo_success, success_probability_analytic, teleport_once

# one run, inspected step by step
cfg = NetworkConfig(N=3, L=1, alpha=1.0)
res = teleport_once(cfg, 1.0, 0.6j, np.random.default_rng(4))
print("single run:", res.case_tag, "success" if res.success else "failure", f"fidelity {res.output_fidelity:.12f}")
for rec in res.records:
    print("   ", rec)

# two parties always give one half, whatever L and alpha
for L in (1, 2, 3):
    est, se = monte_carlo_success(NetworkConfig(2, L, alpha=0.7), 1.0, 1.0, 20000, seed=L)
    print(f"N=2 L={L}: {est:.4f} +/- {se:.4f}")

# more parties cost success probability; the asymmetric layout behaves like (N-1)L+1 modes
for N in (3, 4, 5):
    sym = success_probability_analytic(NetworkConfig(N, 1, alpha=1.0))
    asym = success_probability_analytic(NetworkConfig(N, 2, symmetric=False, alpha=1.0))
    mc = monte_carlo_success(NetworkConfig(N, 1, alpha=1.0), 1.0, 1.0, 20000, seed=N)
    print(f"N={N}: symmetric {sym:.6f} (sampled {mc.estimate:.4f}), asymmetric L=2 {asym:.6f}")
