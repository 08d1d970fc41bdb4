"""Single-qubit synthesis: from a Fourier series to a pulse sequence and back.

Run with ``python demos/01_single_qubit_synthesis.py``.
"""

import numpy as np

from fqsp import FourierSeries, complementary_series, synthesize_pulses, verify_pulses
from fqsp.complement import unitarity_report
from fqsp.fourier import sup_norm

rng = np.random.default_rng(0)

# A random series with 2h+1 = 9 harmonics, scaled so its peak modulus is 0.9.
half_order = 4
coeffs = rng.normal(size=2 * half_order + 1) + 1j * rng.normal(size=2 * half_order + 1)
g = FourierSeries(half_order, coeffs)
g = g.scaled(0.9 / sup_norm(g))
print(f"g: half order {g.half_order}, q = {g.q}, max |g| = {sup_norm(g):.6f}")

# Complete g to an SU(2)-valued function: |g|^2 + |h|^2 = 1 on the whole circle.
h = complementary_series(g)
print(f"unitarity deviation: {unitarity_report(g, h).max_abs_error:.2e}")

# Peel off one basic gate per harmonic band.
seq = synthesize_pulses(g, h)
print(f"{seq.q} pulses; signal frequencies {list(seq.omegas)}")
for k, xi in enumerate(seq.xis[:3]):
    print(f"  xi_{k} = ({xi.zeta:+.4f}, {xi.eta:+.4f}, {xi.phi:+.4f}, {xi.kappa:+.4f})")

# Multiply the gates back together and compare with g on 1001 points.
report = verify_pulses(seq, g)
print(f"reconstruction error: {report.max_abs_error:.2e}")
