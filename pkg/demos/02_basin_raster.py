"""Rasterize the basin decomposition around a semi-stable equilibrium.

The map T(x, y) = (b1 x/(B1 x + y), (a2 + g2 y)/x) at the critical parameter
relation has a single interior equilibrium E = (2, 1) with eigenvalues
-1/6 and 1. Orbits northwest of the invariant curve through E blow up
(y -> infinity); the curve and everything southeast of it converge to E.
The raster labels each cell by which side of the curve it is on.
"""

import os

from compmap import Point2, Rect, make_example, raster, save_raster

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

sys_ = make_example("ex4")  # B1 = gamma2 = alpha2 = 1, beta1 = 3
E = Point2(2.0, 1.0)
window = Rect(0.0, 6.0, 0.0, 4.0)

r = raster(sys_.map, E, window, 96, 96)
census = r.census()
total = sum(census.values())
print(f"raster {r.nx}x{r.ny} over [{window.x_lo},{window.x_hi}]"
      f"x[{window.y_lo},{window.y_hi}]")
for name, count in census.items():
    print(f"  {name:9s} {count:6d}  ({100.0 * count / total:5.1f}%)")

pgm = os.path.join(OUT, "ex4_basins.pgm")
csv = os.path.join(OUT, "ex4_basins.csv")
save_raster(r, pgm, fmt="pgm")
save_raster(r, csv, fmt="csv")
print(f"wrote {pgm} (white = converges to E, black = escapes to (0, inf))")
print(f"wrote {csv}")
