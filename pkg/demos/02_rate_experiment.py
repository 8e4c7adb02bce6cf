"""Sup distance to the normal limit shrinks like phi_n^(-1/2) for binomial sums."""
import numpy as np

from quasipower.models import binomial_model, correlated_model
from quasipower.quasi_power import rate_experiment

ns = [2**k for k in range(4, 11)]
for label, model in [("binomial m=1", binomial_model(1)),
                     ("binomial m=2", binomial_model(2)),
                     ("correlated m=2", correlated_model())]:
    exp = rate_experiment(model, ns)
    print(label)
    for (n, phi, dist), ratio in zip(exp.rows, [np.nan, *exp.doubling_ratios()]):
        print(f"  n = {n:5d}  distance = {dist:.6f}  sqrt(n) * distance = {dist * np.sqrt(phi):.4f}"
              f"  ratio = {ratio:.4f}")
    print(f"  fitted log-log slope: {exp.slope:.4f}  (1/sqrt(2) = {2 ** -0.5:.4f} per doubling)\n")
