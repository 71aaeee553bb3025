"""The fractional integration-by-parts identity with boundary terms.

Moving a left-sided derivative of order alpha onto the other factor turns it
into a right-sided one and releases two boundary terms:

    int D^a_left q1 . q2 = int q1 . D^a_right q2
                           + q1(b) (I^(1-a)_right q2)(b)
                           - (I^(1-a)_left q1)(a) q2(a).

Both sides are computed independently through Beta-function closed forms, so
the reported defect measures the identity itself, not shared rounding.
"""

import numpy as np

from fraclab import (
    FracParams,
    PowerTerm,
    RightSplitFunction,
    SplitFunction,
    gamma,
    ibp_report,
    poly_to_left_terms,
    poly_to_right_terms,
)

# The cleanest nontrivial case: q1 regular, q2 purely singular at b.
p = FracParams(alpha=0.6, p=4.0, a=0.0, b=1.0)
q1 = SplitFunction(p, [0.0], [PowerTerm(1.0, 0.0)])      # q1 = I^0.6 1
q2 = RightSplitFunction(p, [1.0], [])                     # q2 = kernel at b
rep = ibp_report(q1, q2)
print("worked example, alpha = 0.6, q1 = I^a 1, q2 = right kernel:")
print(f"  lhs            = {rep.lhs:.12f}")
print(f"  rhs integral   = {rep.rhs_integral:.12f}")
print(f"  boundary at b  = {rep.boundary_b:.12f}")
print(f"  boundary at a  = {rep.boundary_a:.12f}")
print(f"  defect         = {rep.defect:.3e}")
print(f"  both sides collapse to (b-a)^a/Gamma(a+1) = {1.0 / gamma(1.6):.12f}")

# Randomized instances: the defect stays at rounding level.
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(500):
    alpha = rng.uniform(0.3, 0.95)
    pp = FracParams(alpha, 4.0, 0.0, 1.0)
    qq1 = SplitFunction(pp, [rng.uniform(-1, 1)],
                        poly_to_left_terms(rng.uniform(-1, 1, size=4), 0.0))
    qq2 = RightSplitFunction(pp, [rng.uniform(-1, 1)],
                             poly_to_right_terms(rng.uniform(-1, 1, size=4), 1.0))
    r = ibp_report(qq1, qq2)
    scale = max(abs(r.lhs), abs(r.rhs_integral), abs(r.boundary_b), abs(r.boundary_a), 1.0)
    worst = max(worst, abs(r.defect) / scale)
print(f"\n500 random cubic pairs: worst relative defect = {worst:.2e}")

# As alpha -> 1 with no singular parts, the classical formula emerges.
p1 = FracParams(0.999, 4.0, 0.0, 1.0)
q1 = SplitFunction(p1, [0.0], poly_to_left_terms([1.0, 1.0], 0.0))
q2 = RightSplitFunction(p1, [0.0], poly_to_right_terms([2.0, -1.0], 1.0))
r = ibp_report(q1, q2)
print(f"\nalpha = 0.999 (classical limit): lhs = {r.lhs:.6f}, "
      f"rhs = {r.rhs_integral:.6f}, boundaries ~ {r.boundary_b:.1e}/{r.boundary_a:.1e}")
print("with vanishing boundary coefficients the two integrals agree, as in the"
      "\nclassical rule for functions vanishing at the endpoints")
