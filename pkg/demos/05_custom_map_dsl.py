"""Define a map from expression strings and analyze it like a built-in.

Components are written in a small arithmetic language (variables x, y; any
other identifier is a named parameter; ^ takes literal exponents). Parsing
yields exact Jacobians by symbolic differentiation, so Newton, eigen
classification, and competitiveness checks all run on closed-form partials.
"""

from compmap import (Point2, Rect, check_competitive, check_O_condition,
                     expr_map, fd_jacobian, find_fixed_point, jacobian, orbit)
from compmap.expr import differentiate, parse, to_text

f_text = "x/(a + y)"
g_text = "y/(1 + x)"
m = expr_map(f_text, g_text, {"a": 2.0}, domain=Rect(0, float("inf"), 0, float("inf")))

print(f"map: x' = {f_text},  y' = {g_text},  a = 2")
print(f"df/dy = {to_text(differentiate(parse(f_text), 'y'))}")

p = Point2(1.2, 0.7)
print(f"\nexact Jacobian at {tuple(p)}: {jacobian(m, p)}")
print(f"finite differences:        {fd_jacobian(m, p)}")

rep = check_competitive(m, Rect(0, 5, 0, 5))
print(f"\ncompetitivity: {rep}")
print(f"orientation: {check_O_condition(m, Rect(0, 5, 0, 5)).verdict}")

rec = find_fixed_point(m, Point2(0.1, 1.3))
print(f"\nNewton from (0.1, 1.3): equilibrium ({rec.location.x:.3g}, "
      f"{rec.location.y:.6f}), {rec.classification}")
print(f"eigenvalues {rec.eigen.lam:.6f}, {rec.eigen.mu:.6f}")

orb = orbit(m, Point2(1.0, 1.0), max_iter=200)
print(f"\norbit from (1, 1): {len(orb.points) - 1} steps,"
      f" stopped by {orb.terminated_by},"
      f" final ({orb.points[-1].x:.2e}, {orb.points[-1].y:.6f})")
