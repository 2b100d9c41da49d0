"""Classify a nonhyperbolic equilibrium from Taylor data along its center ray.

At an eigenvalue exactly 1, linearization says nothing; the local dynamics
along the center eigenvector are decided by the first nonzero coefficient
pair (c_l, d_l) of T(E + t v) beyond the linear term: parity of l and the
southeast-sign of the pair select one of four behaviors. For the ex4 system
the verdict is the semi-stable one: attraction on the Q4 side, escape from
int Q2.
"""

import math

from compmap import (Point2, classify_nonhyperbolic, find_order_interval,
                     first_nonzero_index, make_example,
                     taylor_along_eigenvector)

sys_ = make_example("ex4")
E = Point2(2.0, 1.0)
v = sys_.center_eigenvector  # (-1, 1): the eigenvalue-1 direction

ray = taylor_along_eigenvector(sys_.map, E, v, degree=4)
print("Taylor coefficients of T(E + t v) - E - t v (unit v):")
for j, (c, d) in zip(range(2, ray.degree + 1), ray.coeffs):
    print(f"  j={j}:  c_j = {c:+.3e},  d_j = {d:+.9f}")
print(f"measured eigenvalue along the ray: {ray.mu_estimate:.12f}")

ell = first_nonzero_index(ray)
verdict = classify_nonhyperbolic(ray)
print(f"\nfirst nonzero index l = {ell}")
print(f"verdict: {verdict.case_id} (condition {verdict.detail})")
print(f"meaning: {verdict.conclusion}")

iv = find_order_interval(sys_.map, E, v, verdict.case_id)
print(f"\norder interval corners: {tuple(iv.q2_corner)} .. {tuple(iv.q4_corner)}")

# watch both conclusions happen
x, y = E.x + 0.02, E.y - 0.02  # Q4 side: converges
for n in (10, 100, 1000, 10000):
    for _ in range(n - (0 if n == 10 else n // 10)):
        x, y = sys_.map.step(x, y)
    print(f"Q4 start after ~{n:6d} steps: dist to E = "
          f"{math.hypot(x - E.x, y - E.y):.2e}")

x, y = E.x - 0.02, E.y + 0.02  # int Q2 side: leaves the interval
n = 0
while iv.as_rect().contains(Point2(x, y)):
    x, y = sys_.map.step(x, y)
    n += 1
print(f"Q2 start leaves the order interval after {n} steps")
