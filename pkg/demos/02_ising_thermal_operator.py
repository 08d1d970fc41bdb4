"""Block-encode exp(-beta (H + 1)) for a normalized transverse-field Ising chain.

Run with ``python demos/02_ising_thermal_operator.py``.
"""

import numpy as np

from fqsp import TargetFunction, run_pipeline
from fqsp.qsim import eigendecompose, success_probability, tfim_hamiltonian

beta, eps = 2.0, 1e-3
H = tfim_hamiltonian(4)
f = TargetFunction.exponential(beta)

res = run_pipeline(H, f, eps, "analytic_extension")
print(f"oracle calls q = {res.q}, sub-normalization alpha = {res.alpha:.4f}")
print(f"circuit vs series:      {res.err_vs_series:.2e}")
print(f"circuit vs alpha f(H):  {res.err_vs_target:.2e}  (target {eps:g})")

# Post-selecting the ancilla on |0> applies the block to the system state.
dec = eigendecompose(H)
for i in (0, len(dec.lambdas) // 2, len(dec.lambdas) - 1):
    lam, psi = dec.lambdas[i], dec.vectors[:, i]
    p = success_probability(res.block, psi)
    print(f"lambda = {lam:+.4f}: p = {p:.6f}, ideal alpha^2 f^2 = {res.alpha ** 2 * f(lam) ** 2:.6f}")

# Maximally mixed input: average success probability over the spectrum.
print(f"mean success probability: {np.mean(np.abs(np.diag(res.block.conj().T @ res.block))):.4f}")
