"""
Symmetric diagonal parts, hulls and Cartesian bases
===================================================

Start from a few pair sets, strip them down to their symmetric diagonal part,
and look at what the separately convex hull does with the result.
"""

import numpy as np

from nlsup import (
    FinitePairSet,
    Geometry,
    LatticeGrid,
    hat,
    maximal_cartesian,
    rasterize,
    sc_hull_boxes,
    sc_hull_grid,
)

# four corner wells and four axis points
wells = FinitePairSet.from_pairs([(-1, -1), (-1, 1), (1, -1), (1, 1)])
axis = FinitePairSet.from_pairs([(1, 0), (0, 1), (-1, 0), (0, -1)])

print("hat(wells) keeps", len(hat(wells)), "points")
print("hat(axis) keeps", len(hat(axis)), "points")

# the rectangle [-2, 2] x [-1, 1] loses everything outside [-1, 1]^2
g = Geometry.square(1, -3.0, 3.0, 201)
rect = LatticeGrid.from_predicate(
    g, lambda x, z: (np.abs(x[..., 0]) <= 2) & (np.abs(z[..., 0]) <= 1))
print("rectangle cells:", rect.count, "-> after hat:", hat(rect).count)

# exact hull of the wells: the union of the squares their pairs span
boxes = sc_hull_boxes(wells)
print("box generators:", boxes.generators[:, :, 0].tolist())

# the same hull on a lattice, filled slice by slice
grid = Geometry.square(1, -2.05, 2.05, 41)
res = sc_hull_grid(rasterize(wells, grid))
print(res.report())

# the order matters for the axis points: hull first, then hat, leaves the origin
res = sc_hull_grid(rasterize(axis, grid))
print("hull of axis points:", res.hull.count, "cells; hat of it:", hat(res.hull).count, "cell")

# maximal Cartesian subsets A x A
for base in maximal_cartesian(wells).bases:
    print("base:", base[:, 0].tolist())
