"""Separately convex hulls.

Three routes are provided:

* :func:`sc_hull_grid` iterates slice-wise convexification on a lattice grid
  until a fixed point (m = 1 or 2);
* :func:`sc_hull_boxes` gives the exact hull of a finite symmetric diagonal set
  for m = 1 as the union of the squares spanned by its points;
* :func:`two_cartesian_hull` is the closed form for the union of two
  overlapping Cartesian products of convex sets.

:func:`structure_check` tests whether the hatted hull of a set is the
union of the cubes spanned by its hatted points (the structural hypothesis
needed for the closure characterisation when m > 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionError, HullNotConverged, PreconditionError
from .setcore import (
    BoxUnion,
    FinitePairSet,
    Geometry,
    LatticeGrid,
    hat,
    is_empty,
    on_segment,
    rasterize,
    same_set,
    unique_points,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HullResult:
    hull: LatticeGrid
    iterations: int
    converged: bool
    cells_added: int = 0

    def report(self) -> dict:
        return {"iterations": self.iterations, "converged": self.converged,
                "cells_added": self.cells_added}


# --------------------------------------------------------------------------- 2-D lattice convex fill


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def monotone_chain(points) -> list:
    """Convex hull vertices (counter-clockwise, collinear points dropped)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def lattice_convex_fill(mask: np.ndarray) -> np.ndarray:
    """Add every lattice point lying in the convex hull of the occupied points of a 2-D mask.

    Works in integer index coordinates, so boundary points are decided exactly.
    """
    pts = np.argwhere(mask)
    if len(pts) <= 1:
        return mask
    (i0, j0), (i1, j1) = pts.min(axis=0), pts.max(axis=0)
    if i0 == i1 or j0 == j1:
        out = mask.copy()
        out[i0:i1 + 1, j0:j1 + 1] = True
        return out
    hull = monotone_chain(pts.tolist())
    ii, jj = np.mgrid[i0:i1 + 1, j0:j1 + 1]
    if len(hull) == 2:
        (ai, aj), (bi, bj) = hull
        di, dj = bi - ai, bj - aj
        cr = di * (jj - aj) - dj * (ii - ai)
        dot = di * (ii - ai) + dj * (jj - aj)
        inside = (cr == 0) & (dot >= 0) & (dot <= di * di + dj * dj)
    else:
        inside = np.ones(ii.shape, dtype=bool)
        for (vi, vj), (wi, wj) in zip(hull, hull[1:] + hull[:1]):
            inside &= (wi - vi) * (jj - vj) - (wj - vj) * (ii - vi) >= 0
    out = mask.copy()
    out[i0:i1 + 1, j0:j1 + 1] |= inside
    return out


# --------------------------------------------------------------------------- grid hull


def _interval_fill(occ: np.ndarray, axis: int) -> np.ndarray:
    fwd = np.logical_or.accumulate(occ, axis=axis)
    bwd = np.flip(np.logical_or.accumulate(np.flip(occ, axis=axis), axis=axis), axis=axis)
    return fwd & bwd


def _sweep_m2(occ: np.ndarray, block: int, dirty: np.ndarray | None) -> np.ndarray:
    """Convexify every 2-D slice of one block; ``dirty`` limits which slices are revisited."""
    out = occ.copy()
    n = occ.shape
    if block == 0:
        for k in range(n[2]):
            for l in range(n[3]):
                if dirty is not None and not dirty[k, l]:
                    continue
                sl = occ[:, :, k, l]
                if sl.sum() > 1:
                    out[:, :, k, l] = lattice_convex_fill(sl)
    else:
        for i in range(n[0]):
            for j in range(n[1]):
                if dirty is not None and not dirty[i, j]:
                    continue
                sl = occ[i, j]
                if sl.sum() > 1:
                    out[i, j] = lattice_convex_fill(sl)
    return out


def sc_hull_grid(E: LatticeGrid, max_iter: int | None = None) -> HullResult:
    """Discrete separately convex hull by alternating slice sweeps.

    One iteration convexifies every xi-slice (fixed zeta cell), then every
    zeta-slice (fixed xi cell).  For m = 1 a slice is filled to the interval
    between its extreme cells; for m = 2 it receives every lattice point of the
    convex hull of its occupied cells.  Stops when a full iteration adds no cell.
    """
    m = E.m
    occ = E.occupancy.copy()
    cap = E.geometry.size if max_iter is None else max_iter
    start = int(occ.sum())
    dirty0 = dirty1 = None
    it = 0
    converged = False
    while it < cap:
        it += 1
        if m == 1:
            new = _interval_fill(occ, axis=0)
            new = _interval_fill(new, axis=1)
        else:
            mid = _sweep_m2(occ, 0, dirty0)
            added = mid & ~occ
            dirty1 = added.reshape(added.shape[:2] + (-1,)).any(axis=-1)
            if dirty0 is None:
                dirty1 = None
            new = _sweep_m2(mid, 1, dirty1)
            added2 = new & ~mid
            dirty0 = added2.reshape((-1,) + added2.shape[2:]).any(axis=0)
        if np.array_equal(new, occ):
            converged = True
            break
        occ = new
    if not converged:
        logger.warning("sc_hull_grid stopped at the iteration cap (%d)", cap)
    hull = E.with_occupancy(occ)
    return HullResult(hull, it, converged, int(occ.sum()) - start)


# --------------------------------------------------------------------------- exact m = 1 hulls


def _require_hat_m1(E: FinitePairSet):
    if E.m != 1:
        raise PreconditionError("exact square hulls are only available for m = 1")
    if not same_set(hat(E), E):
        raise PreconditionError("input must be symmetric and diagonal; apply hat() first")


def sc_hull_boxes(E: FinitePairSet) -> BoxUnion:
    """Exact hull of a symmetric diagonal finite set (m = 1): the union of ``Q(a, b)``."""
    _require_hat_m1(E)
    return BoxUnion(E.points, m=1, tol=E.tol)


@dataclass(frozen=True)
class DexSet:
    points: FinitePairSet

    def to_boxes(self) -> BoxUnion:
        return BoxUnion(self.points.points, m=self.points.m, tol=self.points.tol)


def dex_prune(E: FinitePairSet) -> DexSet:
    """Drop every generator whose square lies inside a strictly larger generator square.

    The union of squares is unchanged.  Both orientations ``(a, b)`` and
    ``(b, a)`` of a surviving square are kept.
    """
    _require_hat_m1(E)
    if len(E) == 0:
        return DexSet(E)
    lo = np.minimum(E.points[:, 0, 0], E.points[:, 1, 0])
    hi = np.maximum(E.points[:, 0, 0], E.points[:, 1, 0])
    tol = E.tol
    inside = (lo[None, :] <= lo[:, None] + tol) & (hi[:, None] <= hi[None, :] + tol)
    same = (np.abs(lo[:, None] - lo[None, :]) <= tol) & (np.abs(hi[:, None] - hi[None, :]) <= tol)
    dominated = np.any(inside & ~same, axis=1)
    return DexSet(E.subset(~dominated))


# --------------------------------------------------------------------------- convex sets and the two-product formula


class ConvexSet:
    """Convex hull of finitely many vertices in R^m, m in {1, 2}."""

    def __init__(self, vertices, tol: float = 1e-9):
        v = np.asarray(vertices, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or len(v) == 0:
            raise ValueError("need a non-empty (k, m) vertex array")
        self.m = v.shape[1]
        if self.m not in (1, 2):
            raise DimensionError("convex sets are supported for m in {1, 2}")
        self.tol = tol
        if self.m == 1:
            self.vertices = np.array([[v.min()], [v.max()]])
        else:
            self.vertices = np.array(monotone_chain(v.tolist()), dtype=float)

    @classmethod
    def box(cls, lo, hi, tol: float = 1e-9) -> "ConvexSet":
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        corners = np.stack(np.meshgrid(*[[a, b] for a, b in zip(lo, hi)], indexing="ij"), -1)
        return cls(corners.reshape(-1, len(lo)), tol=tol)

    @classmethod
    def hull_of(cls, *sets: "ConvexSet") -> "ConvexSet":
        return cls(np.concatenate([s.vertices for s in sets]), tol=sets[0].tol)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.m:
            raise DimensionError(f"points must have trailing dimension {self.m}")
        v, tol = self.vertices, self.tol
        if self.m == 1:
            return (x[..., 0] >= v[0, 0] - tol) & (x[..., 0] <= v[1, 0] + tol)
        if len(v) == 1:
            return np.linalg.norm(x - v[0], axis=-1) <= tol
        if len(v) == 2:
            return on_segment(x, v[0], v[1], tol)
        inside = np.ones(x.shape[:-1], dtype=bool)
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            e = b - a
            cr = e[0] * (x[..., 1] - a[1]) - e[1] * (x[..., 0] - a[0])
            inside &= cr >= -tol * np.linalg.norm(e)
        return inside

    def intersects(self, other: "ConvexSet") -> bool:
        """Feasibility of ``sum_i s_i v_i = sum_j t_j w_j`` over two simplices."""
        V, W = self.vertices, other.vertices
        k1, k2 = len(V), len(W)
        A_eq = np.zeros((self.m + 2, k1 + k2))
        A_eq[:self.m, :k1] = V.T
        A_eq[:self.m, k1:] = -W.T
        A_eq[self.m, :k1] = 1
        A_eq[self.m + 1, k1:] = 1
        b_eq = np.r_[np.zeros(self.m), 1, 1]
        res = linprog(np.zeros(k1 + k2), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        return res.status == 0


@dataclass(frozen=True, eq=False)
class TwoCartesianHull:
    """Separately convex hull of ``(A1 x A1) u (A2 x A2)`` for convex, overlapping ``A1, A2``."""

    A1: ConvexSet
    A2: ConvexSet
    co: ConvexSet = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "co", ConvexSet.hull_of(self.A1, self.A2))

    @property
    def m(self) -> int:
        return self.A1.m

    def contains(self, xi, zeta) -> np.ndarray:
        a1x, a1z = self.A1.contains(xi), self.A1.contains(zeta)
        a2x, a2z = self.A2.contains(xi), self.A2.contains(zeta)
        cox, coz = self.co.contains(xi), self.co.contains(zeta)
        both_x = a1x & a2x
        both_z = a1z & a2z
        return (a1x & a1z) | (a2x & a2z) | (both_x & coz) | (cox & both_z)

    def to_grid(self, geometry: Geometry) -> LatticeGrid:
        return LatticeGrid.from_predicate(geometry, self.contains)


def two_cartesian_hull(A1: ConvexSet, A2: ConvexSet) -> TwoCartesianHull:
    """Closed-form hull ``E u [(A1 n A2) x co(A1 u A2)] u [co(A1 u A2) x (A1 n A2)]``."""
    if A1.m != A2.m:
        raise DimensionError("A1 and A2 must live in the same space")
    if not A1.intersects(A2):
        raise PreconditionError("the two-product formula needs A1 and A2 to intersect")
    return TwoCartesianHull(A1, A2)


def cartesian_union_grid(geometry: Geometry, *sets: ConvexSet) -> LatticeGrid:
    """Grid of ``U_k (A_k x A_k)``."""
    def pred(xi, zeta):
        out = np.zeros(xi.shape[:-1], dtype=bool)
        for A in sets:
            out |= A.contains(xi) & A.contains(zeta)
        return out
    return LatticeGrid.from_predicate(geometry, pred)


def sc_hull(E):
    """Dispatching hull: grid route for grids, exact squares for symmetric diagonal finite sets."""
    if isinstance(E, LatticeGrid):
        return sc_hull_grid(E).hull
    if isinstance(E, FinitePairSet):
        return sc_hull_boxes(E)
    if isinstance(E, BoxUnion):
        return E
    raise TypeError(f"no hull route for {type(E).__name__}; rasterize first")


# --------------------------------------------------------------------------- structure condition


SAMPLES_PER_SEGMENT = 17


@dataclass
class StructureReport:
    holds: bool
    union_holds: bool
    sampled_ok: bool
    cubes_hold: bool | None
    uncovered: list = field(default_factory=list)
    sampled_outside: list = field(default_factory=list)
    bad_bases: list = field(default_factory=list)
    hull_iterations: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "holds": self.holds, "union_holds": self.union_holds,
            "sampled_ok": self.sampled_ok, "cubes_hold": self.cubes_hold,
            "uncovered": self.uncovered, "sampled_outside": self.sampled_outside,
            "bad_bases": self.bad_bases, "hull_iterations": self.hull_iterations,
            "note": self.note,
        }


def _dilate(occ: np.ndarray) -> np.ndarray:
    out = occ.copy()
    for ax in range(occ.ndim):
        shifted = np.zeros_like(out)
        src = [slice(None)] * occ.ndim
        dst = [slice(None)] * occ.ndim
        src[ax], dst[ax] = slice(1, None), slice(None, -1)
        shifted[tuple(dst)] |= out[tuple(src)]
        src[ax], dst[ax] = slice(None, -1), slice(1, None)
        shifted[tuple(dst)] |= out[tuple(src)]
        out = out | shifted
    return out


def _auto_geometry(K: FinitePairSet) -> Geometry:
    pts = K.points.reshape(len(K.points), -1)
    lo, hi = float(pts.min()), float(pts.max())
    span = max(hi - lo, 1.0)
    n = 101 if K.m == 1 else 17
    return Geometry.square(K.m, lo - 0.1 * span, hi + 0.1 * span, n)


def structure_check(K, geometry: Geometry | None = None,
                          clique_cap: int = 4096) -> StructureReport:
    """Check that ``hat(hat(K)^sc)`` is the union of the cubes ``Q(a, b)``, ``(a, b)`` in ``hat(K)``.

    Finite inputs are rasterized first.  Two directions are tested on the grid:
    every hull cell outside ``hat(K)`` must lie (within half a block cell
    diagonal) in some cube, and 17 x 17 samples of every cube must fall in the
    hatted hull up to one cell.  When the clique search is affordable, the
    maximal Cartesian subsets of the hatted hull are also compared with single
    cubes; that outcome is reported as ``cubes_hold`` and does not enter
    ``holds``.
    """
    from .cartesian import maximal_cartesian

    if isinstance(K, FinitePairSet):
        if is_empty(hat(K)):
            return StructureReport(True, True, True, True, note="hat(K) is empty")
        K = rasterize(K, geometry or _auto_geometry(K))
    if not isinstance(K, LatticeGrid):
        raise TypeError("structure check needs a finite or grid set")
    G = hat(K)
    if is_empty(G):
        return StructureReport(True, True, True, True, note="hat(K) is empty")
    geom, m = G.geometry, G.m
    res = sc_hull_grid(G)
    if not res.converged:
        raise HullNotConverged("hull of hat(K) did not converge")
    Hh = hat(res.hull).occupancy
    gen_idx = np.argwhere(G.occupancy)
    centers = geom.all_centers()

    # hull cells not already generators must be covered by some cube
    missing = np.argwhere(Hh & ~G.occupancy)
    uncovered = []
    if len(missing):
        if m == 1:
            cover = np.zeros_like(Hh)
            lo = np.minimum(gen_idx[:, 0], gen_idx[:, 1])
            hi = np.maximum(gen_idx[:, 0], gen_idx[:, 1])
            best = {}
            for a, b in zip(lo, hi):
                best[a] = max(best.get(a, a), b)
            for a, b in best.items():
                cover[a:b + 1, a:b + 1] = True
            uncovered = [centers[tuple(p)].tolist() for p in missing if not cover[tuple(p)]]
        else:
            band = geom.half_diagonal / np.sqrt(2.0)
            g = centers[tuple(gen_idx.T)].reshape(-1, 2, m)
            seg = np.any(np.abs(g[:, 0] - g[:, 1]) > 0, axis=1)
            A, B = g[seg, 0], g[seg, 1]
            D = A - B
            DD = np.maximum(np.sum(D * D, axis=1), 1e-300)

            def near(x):
                t = np.clip(np.sum((x - B) * D, axis=1) / DD, 0, 1)
                return np.linalg.norm(x - (B + t[:, None] * D), axis=1) <= band * (1 + 1e-9)

            for p in missing:
                c = centers[tuple(p)]
                if not np.any(near(c[:m]) & near(c[m:])):
                    uncovered.append(c.tolist())

    # sampled cubes must stay inside the hatted hull (one-cell slack)
    s = np.linspace(0.0, 1.0, SAMPLES_PER_SEGMENT)
    S, T = np.meshgrid(s, s, indexing="ij")
    S, T = S.ravel()[:, None], T.ravel()[:, None]
    slack = _dilate(Hh)
    sampled_outside = []
    g_all = centers[tuple(gen_idx.T)].reshape(-1, 2, m)
    for chunk in np.array_split(g_all, max(1, len(g_all) // 2000)):
        for a, b in chunk:
            if np.array_equal(a, b):
                continue
            xi = S * a + (1 - S) * b
            zeta = T * a + (1 - T) * b
            idx, inside = geom.index_of(np.concatenate([xi, zeta], axis=1))
            ok = inside & slack[tuple(idx.T)]
            if not ok.all():
                sampled_outside += np.concatenate([xi, zeta], axis=1)[~ok][:5].tolist()
        if len(sampled_outside) > 100:
            break

    # maximal Cartesian subsets of the hatted hull versus single cubes
    cubes_hold = None
    bad_bases = []
    diag_count = int(np.diagonal(Hh.reshape(int(np.prod(geom.n[:m])), -1)).sum())
    if diag_count <= clique_cap:
        fam = maximal_cartesian(G.with_occupancy(Hh))
        cubes_hold = True
        band = geom.half_diagonal / np.sqrt(2.0)
        for base in fam.bases:
            diff = base[:, None, :] - base[None, :, :]
            dist = np.linalg.norm(diff, axis=-1)
            i, j = np.unravel_index(np.argmax(dist), dist.shape)
            a, b = base[i], base[j]
            is_gen = bool(G.contains(a, b))
            straight = bool(np.all(on_segment(base, a, b, band * (1 + 1e-9))))
            if not (is_gen and straight):
                cubes_hold = False
                bad_bases.append({"size": len(base), "ends": [a.tolist(), b.tolist()]})
    union_holds = not uncovered
    sampled_ok = not sampled_outside
    return StructureReport(union_holds and sampled_ok, union_holds, sampled_ok, cubes_hold,
                           uncovered[:100], sampled_outside[:100], bad_bases[:20],
                           res.iterations)


# --------------------------------------------------------------------------- nested intersections


def intersect_finite(Ks) -> FinitePairSet:
    base = Ks[0]
    keep = np.ones(len(base), dtype=bool)
    for K in Ks[1:]:
        if len(base):
            keep &= K.contains(base.points[:, 0], base.points[:, 1])
    return base.subset(keep)


def nested_intersection_check(Ks, probes: int = 101) -> bool:
    """Compare ``n_j K_j^sc`` with ``(n_j K_j)^sc`` on a probe grid (m = 1, nested hat-sets)."""
    Ks = list(Ks)
    if not Ks:
        raise ValueError("need at least one set")
    for K in Ks:
        _require_hat_m1(K)
    for K, L in zip(Ks, Ks[1:]):
        if not L.issubset(K):
            raise PreconditionError("sets must be nested: K_{j+1} subset of K_j")
    inter = intersect_finite(Ks)
    vals = np.concatenate([K.points.ravel() for K in Ks if len(K)] or [np.zeros(1)])
    lo, hi = float(vals.min()), float(vals.max())
    pad = 0.1 * max(hi - lo, 1.0)
    axis = np.union1d(np.linspace(lo - pad, hi + pad, probes), unique_points(vals[:, None], 0)[:, 0])
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    xi, zeta = X[..., None], Y[..., None]
    lhs = np.ones(X.shape, dtype=bool)
    for K in Ks:
        lhs &= sc_hull_boxes(K).contains(xi, zeta)
    rhs = sc_hull_boxes(inter).contains(xi, zeta)
    return bool(np.array_equal(lhs, rhs))
