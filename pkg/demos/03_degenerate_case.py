"""When H_u(0) is singular no uniform rate exists.

Here Omega_n is a single Rademacher sign scaled by 1/sqrt(n).  It converges
in law to a point mass at 0, but the CDF jumps from 1/2 to 1 at 0 only in the
limit, so the sup distance stays exactly 1/2 for every n.
"""
from fractions import Fraction

from quasipower.errors import DegenerateCovarianceError
from quasipower.models import rademacher_demo, rademacher_model, step_cdf_distance

for n in (1, 100, 10**6):
    law, dist = rademacher_demo(n)
    print(f"n = {n:8d}: atoms at +-{law.coords(0)[-1]:.6f}, sup distance to point mass = {dist}")

# the distance is computed exactly on step functions
print(step_cdf_distance({-0.001: Fraction(1, 2), 0.001: Fraction(1, 2)}, {0.0: Fraction(1)}))

model = rademacher_model()
print("u =", model.u, "\nv =", model.v)
try:
    model.standardized(10)
except DegenerateCovarianceError as exc:
    print("standardization refused:", exc)
