"""Walk through every term of the Berry-Esseen bound for a correlated 2-d lattice law.

The pair is (S, S + S') where S and S' are independent Binomial(n, 1/2).
"""
import math

import numpy as np

from quasipower.berry_esseen import QuadConfig, verify_bound
from quasipower.models import correlated_model

model = correlated_model()
print("limit covariance H_u(0):")
print(model.limit_covariance)

n = 64
x, y = model.standardized(n)  # exact lattice law and its normal limit
T = math.sqrt(model.phi(n))
rep = verify_bound(x, y, T)

print(f"\nn = {n}, T = {T}")
print(f"  integral term        {rep.integral_term:.6f}")
for J, v in rep.marginal_terms.items():
    print(f"  marginal {J}         sup = {v:.6f}  weight B = {rep.fubini_weights[J]}")
print(f"  marginal total       {rep.marginal_term_total:.6f}")
print(f"  kernel term          {rep.kernel_term:.6f}")
print(f"  right side           {rep.rhs_total:.6f}")
print(f"  exact sup distance   {rep.lhs_sup_distance:.6f}")
print(f"  holds: {rep.holds}")

# the same bound with a finer rule on [-T, T]^2; the integral term should barely move
fine = verify_bound(x, y, T, QuadConfig(nodes=128, panels=4))
print(f"\nintegral term with 128 nodes/axis: {fine.integral_term:.6f}")

# larger T shrinks the kernel term but grows the integral term
for t in (2.0, 4.0, 8.0, 16.0):
    r = verify_bound(x, y, t)
    print(f"T = {t:5.1f}: integral {r.integral_term:.4f}  kernel {r.kernel_term:.4f}  rhs {r.rhs_total:.4f}")
