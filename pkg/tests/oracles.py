"""Brute-force reference implementations used to cross-check the library."""

from itertools import combinations

import numpy as np

from nlsup.setcore import FinitePairSet, Geometry, LatticeGrid


def box_grid(geom: Geometry, xr, zr) -> LatticeGrid:
    """Grid of the rectangle ``xr x zr`` (m = 1)."""
    def pred(x, z):
        return ((x[..., 0] >= xr[0]) & (x[..., 0] <= xr[1])
                & (z[..., 0] >= zr[0]) & (z[..., 0] <= zr[1]))
    return LatticeGrid.from_predicate(geom, pred)


def random_hat_set(rng: np.random.Generator, max_values: int = 6, grid=None) -> FinitePairSet:
    """Random symmetric diagonal finite set (m = 1)."""
    k = int(rng.integers(1, max_values + 1))
    if grid is None:
        vals = np.unique(np.round(rng.uniform(-1, 1, k), 2))
    else:
        vals = np.unique(rng.choice(grid, k))
    pairs = [(v, v) for v in vals]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if rng.random() < 0.5:
                pairs += [(vals[i], vals[j]), (vals[j], vals[i])]
    return FinitePairSet.from_pairs(pairs)


def naive_hat(pairs, tol=1e-9):
    """Loop-based symmetric diagonal part of a list of scalar pairs."""
    def has(p):
        return any(abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol for q in pairs)
    return [p for p in pairs if has((p[1], p[0])) and has((p[0], p[0])) and has((p[1], p[1]))]


def naive_grid_hull_m1(occ):
    """Fill every lattice cell between two occupied cells of a row or column, until stable."""
    occ = occ.copy()
    while True:
        before = occ.copy()
        for axis in (0, 1):
            view = occ if axis == 0 else occ.T
            for line in view:
                idx = np.flatnonzero(line)
                for a, b in combinations(idx, 2):
                    line[a:b + 1] = True
        if np.array_equal(before, occ):
            return occ


def naive_squares_member(gens, x, z, tol=1e-9):
    """Whether (x, z) lies in a union of squares [a, b]^2 (m = 1)."""
    for a, b in gens:
        lo, hi = min(a, b), max(a, b)
        if lo - tol <= x <= hi + tol and lo - tol <= z <= hi + tol:
            return True
    return False


def exhaustive_cliques(values, member):
    """Maximal subsets A of ``values`` with A x A inside the set described by ``member``."""
    vals = [v for v in values if member(v, v)]
    good = []
    for r in range(1, len(vals) + 1):
        for sub in combinations(range(len(vals)), r):
            if all(member(vals[a], vals[b]) for a in sub for b in sub):
                good.append(frozenset(sub))
    maximal = [g for g in good if not any(g < h for h in good)]
    return sorted(tuple(sorted(vals[i] for i in g)) for g in maximal)
