"""Monte Carlo check that N_upper copies suffice for target MSE alpha.

Run: python3 demos/demo_simulation.py
"""

from qldp import estimation
from qldp.qfi import radial_family

out = estimation.validate_upper_bound(radial_family(), 0.6, alpha=0.01,
                                      eps=1.0, trials=20000, seed=11)
print(f"copies per trial N = {out['n_copies']}")
print(f"empirical MSE      = {out['empirical_mse']:.6f}")
print(f"CRB 1/(N F)        = {out['crb_value']:.6f}")
print(f"target alpha       = {out['alpha']}")
print(f"passed             = {out['passed']}")
