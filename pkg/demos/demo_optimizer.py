"""Search for the most informative eps-LDP channel and compare against
the proof-level Fisher cap.

Run: python3 demos/demo_optimizer.py
"""

from qldp import optimizer
from qldp.qfi import radial_family

fam = radial_family()
for eps in (0.1, 0.5, 1.0):
    res = optimizer.maximize_qfi(fam, 0.6, eps, starts=8, seed=0)
    print(f"eps={eps:4.1f}  best QFI={res.best_qfi:10.6f}  "
          f"cap={res.fisher_cap:10.6f}  ratio={res.cap_ratio:.3f}  "
          f"margin={res.feasibility_margin:+.1e}")
