"""Certify privacy of qubit channels and find their tight budgets.

Run: python3 demos/demo_certification.py
"""

import numpy as np

from qldp import channels, ldp

# The depolarizing channel calibrated for eps = 1 certifies exactly at
# eps = 1 (margin ~ 0) and fails at any smaller budget.
ch = channels.depolarizing(2, 1.0)
for eps in (0.5, 1.0, 2.0):
    cert = ldp.certify(ch, eps)
    print(f"eps={eps:4.1f}  verdict={str(cert.verdict):5s}  "
          f"margin={cert.margin:+.3e}")

print(f"tight eps = {ldp.tight_epsilon(ch):.12f}  (expected 1.0)")

# A random contraction with a shift: the certifier returns a witness
# state pair; the sampling audit driven toward that pair refutes the
# channel at too-small budgets.
rng = np.random.default_rng(0)
A = 0.25 * rng.standard_normal((3, 3))
c = np.array([0.05, 0.0, -0.1])
ch2 = channels.AffineChannel(2, A, c)
print(f"\nrandom channel tight eps = {ldp.tight_epsilon(ch2):.6f}")
cert = ldp.certify(ch2, 0.05)
print(f"at eps=0.05: verdict={cert.verdict}, margin={cert.margin:+.3e}")
audit = ldp.audit_by_sampling(ch2, 0.05, 1000, seed=1,
                              extra_pairs=[cert.witness_pair])
print(f"targeted audit consistent? {audit.consistent} "
      f"(max divergence {audit.max_divergence:.3e})")
