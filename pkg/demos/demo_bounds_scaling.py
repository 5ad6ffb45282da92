"""Sample-complexity bounds and their 1/eps^2 scaling.

Run: python3 demos/demo_bounds_scaling.py
"""

import numpy as np

from qldp.bounds import bounds_thm1
from qldp.qfi import radial_family

fam = radial_family()
lam, alpha = 0.6, 0.01

print(f"family={fam.label}  lambda={lam}  alpha={alpha}\n")
print(f"{'eps':>6} {'N_lower':>12} {'N_upper':>12}")
grid = np.geomspace(0.01, 0.5, 10)
lowers, uppers = [], []
for eps in grid:
    rep = bounds_thm1(fam, lam, alpha, float(eps))
    lowers.append(rep.N_lower_real)
    uppers.append(rep.N_upper_real)
    print(f"{eps:6.3f} {rep.N_lower_real:12.1f} {rep.N_upper_real:12.1f}")

s_lo = np.polyfit(np.log(grid), np.log(lowers), 1)[0]
s_hi = np.polyfit(np.log(grid), np.log(uppers), 1)[0]
print(f"\nlog-log slopes: lower {s_lo:.3f}, upper {s_hi:.3f} "
      "(1/eps^2 scaling ~ -2)")
