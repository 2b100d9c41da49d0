"""Trace the invariant separatrix of a competitive map with a line of equilibria.

The map T(x, y) = (x/(a+y), y/(1+x)) with a > 1 sends every orbit to some
equilibrium (0, ybar) on the vertical axis. Each equilibrium with ybar > 0
owns an increasing invariant curve, its stable set. We trace the curve
through (0, 1) as the decision boundary between orbits whose limit lands
above ybar = 1 and those landing below.
"""

import os

from compmap import (Point2, Rect, check_invariant_curve_hypotheses,
                     check_boundary_endpoint_conditions, find_fixed_point,
                     limit_equilibrium, make_example, trace_stable_curve)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

sys_ = make_example("ex1", {"a": 2.0})
m = sys_.map

fp = find_fixed_point(m, Point2(1e-9, 1.0))
print(f"equilibrium: ({fp.location.x:.3g}, {fp.location.y:.6g})")
print(f"eigenvalues: {fp.eigen.lam:.6g}, {fp.eigen.mu:.6g}"
      f"  -> {fp.classification}")

window = Rect(0.0, 5.0, 0.0, 6.0)
hyp = check_invariant_curve_hypotheses(m, fp, window)
print(f"invariant-curve hypotheses: {hyp}")
thm2 = check_boundary_endpoint_conditions(m, fp, window)
print(f"boundary-endpoint conditions: i={thm2.condition_i} "
      f"ii={thm2.condition_ii} iii={thm2.condition_iii}")

curve = trace_stable_curve(m, fp, window)
print(f"\ntraced {len(curve.vertices)} vertices, {curve.monotonicity}")
print(f"left endpoint:  {curve.endpoint_left}")
print(f"right endpoint: {curve.endpoint_right}")

# spot-check: a start just above the curve limits above ybar=1, just below
# limits below
x_probe = 1.0
y_curve = curve.y_at(x_probe)
for dy in (+0.01, -0.01):
    rec = limit_equilibrium(m, Point2(x_probe, y_curve + dy))
    print(f"start ({x_probe}, {y_curve + dy:.6f}) ->"
          f" limit ybar = {rec.limit.y:.6f}")

path = os.path.join(OUT, "ex1_separatrix.csv")
with open(path, "w") as fh:
    fh.write("x,y\n")
    for v in curve.vertices:
        fh.write(f"{v.x:.17g},{v.y:.17g}\n")
print(f"\nwrote {path}")
