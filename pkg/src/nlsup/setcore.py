"""Subsets of R^m x R^m in three representations, and the elementary set operators.

A pair set is handled in one of three concrete forms:

* :class:`FinitePairSet` -- finitely many points ``(xi, zeta)``, compared up to ``tol``;
* :class:`LatticeGrid` -- a boolean occupancy over the cell centres of a regular grid
  spanning all ``2m`` axes (``m`` in {1, 2});
* :class:`BoxUnion` -- a finite union of generalised squares
  ``Q(a, b) = [a, b] x [a, b]`` where ``[a, b]`` is the segment between ``a`` and ``b``.

All values are immutable; every operator returns a new object of the same kind.
Grid equalities are occupancy-array equalities.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import DimensionError, EmptySetError, PreconditionError

DEFAULT_TOL = 1e-9


# --------------------------------------------------------------------------- geometry


@dataclass(frozen=True)
class Geometry:
    """Regular cell-centred grid over the ``2m`` axes of R^m x R^m.

    Axes ``0..m-1`` carry the first component ``xi``, axes ``m..2m-1`` the
    second component ``zeta``.  Cell ``k`` on axis ``a`` has centre
    ``lo[a] + (k + 1/2) * h[a]`` with ``h[a] = (hi[a] - lo[a]) / n[a]``.
    """

    m: int
    lo: tuple
    hi: tuple
    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if self.m not in (1, 2):
            raise DimensionError(f"grids support m in {{1, 2}}, got m={self.m}")
        if not (len(self.lo) == len(self.hi) == len(self.n) == 2 * self.m):
            raise DimensionError("need lo, hi, n for each of the 2m axes")
        for a, b, k in zip(self.lo, self.hi, self.n):
            if not a < b:
                raise ValueError(f"axis range must satisfy lo < hi, got [{a}, {b}]")
            if k < 2:
                raise ValueError(f"resolution must be >= 2 per axis, got {k}")

    @classmethod
    def square(cls, m: int, lo: float, hi: float, n: int) -> "Geometry":
        """Same range and resolution on every axis."""
        return cls(m, (lo,) * (2 * m), (hi,) * (2 * m), (n,) * (2 * m))

    @property
    def shape(self) -> tuple:
        return self.n

    @property
    def h(self) -> np.ndarray:
        return (np.array(self.hi) - np.array(self.lo)) / np.array(self.n)

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    @property
    def is_square(self) -> bool:
        m = self.m
        return (self.lo[:m] == self.lo[m:] and self.hi[:m] == self.hi[m:]
                and self.n[:m] == self.n[m:])

    @property
    def half_diagonal(self) -> float:
        return 0.5 * float(np.sqrt(np.sum(self.h ** 2)))

    def centers(self, axis: int) -> np.ndarray:
        return self.lo[axis] + (np.arange(self.n[axis]) + 0.5) * self.h[axis]

    def block_centers(self, block: int) -> np.ndarray:
        """Cell centres of one block (0 = xi, 1 = zeta), shape ``n_block + (m,)``."""
        axes = range(block * self.m, (block + 1) * self.m)
        grids = np.meshgrid(*[self.centers(a) for a in axes], indexing="ij")
        return np.stack(grids, axis=-1)

    def all_centers(self) -> np.ndarray:
        """Centres of every cell, shape ``shape + (2m,)``."""
        grids = np.meshgrid(*[self.centers(a) for a in range(2 * self.m)], indexing="ij")
        return np.stack(grids, axis=-1)

    def index_of(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Cell index of each point (last axis of length 2m) and an inside-range mask."""
        p = np.asarray(points, dtype=float)
        lo, hi = np.array(self.lo), np.array(self.hi)
        inside = np.all((p >= lo) & (p <= hi), axis=-1)
        idx = np.floor((p - lo) / self.h).astype(np.int64)
        idx = np.clip(idx, 0, np.array(self.n) - 1)
        return idx, inside

    def contains_box(self, points: np.ndarray) -> bool:
        p = np.asarray(points, dtype=float).reshape(-1, 2 * self.m)
        if len(p) == 0:
            return True
        return bool(np.all(p >= np.array(self.lo)) and np.all(p <= np.array(self.hi)))

    def to_header(self) -> list:
        out = [self.m]
        for a, b in zip(self.lo, self.hi):
            out += [a, b]
        return out + list(self.n)


def _require_square(geom: Geometry):
    if not geom.is_square:
        raise PreconditionError("operation needs identical xi and zeta axes (square geometry)")


# --------------------------------------------------------------------------- finite sets


def _as_pair_array(points, m=None) -> np.ndarray:
    """Coerce pairs into an array of shape (N, 2, m); scalar pairs mean m = 1."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 2, m or 1))
    if arr.ndim == 2 and arr.shape[1] == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[1] != 2:
        raise DimensionError(f"pair points must have shape (N, 2, m), got {arr.shape}")
    if m is not None and arr.shape[2] != m:
        raise DimensionError(f"expected m={m}, got points with m={arr.shape[2]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("pair points must be finite")
    return arr


def unique_points(pts: np.ndarray, tol: float) -> np.ndarray:
    """Remove duplicates (coordinatewise within ``tol``) from rows of ``pts``, keeping order."""
    pts = np.asarray(pts, dtype=float)
    if len(pts) == 0:
        return pts
    flat = pts.reshape(len(pts), -1)
    keep = []
    for i in range(len(flat)):
        if not keep or not np.any(np.all(np.abs(flat[keep] - flat[i]) <= tol, axis=1)):
            keep.append(i)
    return pts[keep]


def lexsort_rows(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return np.zeros(0, dtype=int)
    flat = np.asarray(pts).reshape(len(pts), -1)
    return np.lexsort(flat.T[::-1])


@dataclass(frozen=True, eq=False)
class FinitePairSet:
    """Finite subset of R^m x R^m; ``points`` has shape (N, 2, m)."""

    points: np.ndarray
    m: int = 1
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.tol < 0:
            raise ValueError("tol must be non-negative")
        arr = _as_pair_array(self.points, None)
        if arr.shape[0] == 0:
            arr = np.zeros((0, 2, self.m))
        elif arr.shape[2] != self.m:
            raise DimensionError(f"declared m={self.m} but points have m={arr.shape[2]}")
        arr = unique_points(arr, self.tol)
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @classmethod
    def from_pairs(cls, pairs, m: int | None = None, tol: float = DEFAULT_TOL) -> "FinitePairSet":
        arr = _as_pair_array(pairs, m)
        return cls(arr, m=arr.shape[2], tol=tol)

    def __len__(self):
        return len(self.points)

    def contains(self, xi, zeta) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        zeta = np.asarray(zeta, dtype=float)
        if xi.shape[-1:] != (self.m,) or zeta.shape[-1:] != (self.m,):
            raise DimensionError(f"query points must have trailing dimension m={self.m}")
        xi, zeta = np.broadcast_arrays(xi, zeta)
        if len(self.points) == 0:
            return np.zeros(xi.shape[:-1], dtype=bool)
        d1 = np.abs(xi[..., None, :] - self.points[:, 0, :])
        d2 = np.abs(zeta[..., None, :] - self.points[:, 1, :])
        hit = np.all(d1 <= self.tol, axis=-1) & np.all(d2 <= self.tol, axis=-1)
        return np.any(hit, axis=-1)

    def subset(self, mask) -> "FinitePairSet":
        return FinitePairSet(self.points[np.asarray(mask, dtype=bool)], m=self.m, tol=self.tol)

    def issubset(self, other: "FinitePairSet") -> bool:
        if len(self) == 0:
            return True
        return bool(np.all(other.contains(self.points[:, 0], self.points[:, 1])))

    def equals(self, other: "FinitePairSet") -> bool:
        return self.m == other.m and self.issubset(other) and other.issubset(self)

    def sorted_points(self) -> np.ndarray:
        return self.points[lexsort_rows(self.points)]


# --------------------------------------------------------------------------- box unions


def on_segment(x: np.ndarray, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Whether points ``x`` (..., m) lie on the segment ``[a, b]`` within distance ``tol``."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a - b
    dd = float(d @ d)
    if dd == 0.0:
        return np.linalg.norm(x - a, axis=-1) <= tol
    t = np.clip(((x - b) @ d) / dd, 0.0, 1.0)
    foot = b + t[..., None] * d
    return np.linalg.norm(x - foot, axis=-1) <= tol


def segment_parameter(x, a, b, tol: float = DEFAULT_TOL):
    """Solve ``x = t a + (1 - t) b`` for ``t``; None if ``x`` is not on the segment."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a - b
    dd = float(d @ d)
    if dd == 0.0:
        return 1.0 if np.linalg.norm(x - a) <= tol else None
    t = float((x - b) @ d / dd)
    if t < -tol or t > 1 + tol or np.linalg.norm(x - (b + t * d)) > tol:
        return None
    return min(max(t, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class BoxUnion:
    """Union of generalised squares ``Q(a, b)`` over ``generators`` of shape (G, 2, m)."""

    generators: np.ndarray
    m: int = 1
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        arr = _as_pair_array(self.generators, None)
        if arr.shape[0] == 0:
            arr = np.zeros((0, 2, self.m))
        elif arr.shape[2] != self.m:
            raise DimensionError(f"declared m={self.m} but generators have m={arr.shape[2]}")
        arr = unique_points(arr, self.tol)
        arr.setflags(write=False)
        object.__setattr__(self, "generators", arr)

    @classmethod
    def from_pairs(cls, pairs, m: int | None = None, tol: float = DEFAULT_TOL) -> "BoxUnion":
        arr = _as_pair_array(pairs, m)
        return cls(arr, m=arr.shape[2], tol=tol)

    def __len__(self):
        return len(self.generators)

    def contains(self, xi, zeta) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        zeta = np.asarray(zeta, dtype=float)
        if xi.shape[-1:] != (self.m,) or zeta.shape[-1:] != (self.m,):
            raise DimensionError(f"query points must have trailing dimension m={self.m}")
        xi, zeta = np.broadcast_arrays(xi, zeta)
        out = np.zeros(xi.shape[:-1], dtype=bool)
        for a, b in self.generators:
            out |= on_segment(xi, a, b, self.tol) & on_segment(zeta, a, b, self.tol)
        return out


# --------------------------------------------------------------------------- lattice grids


@dataclass(frozen=True, eq=False)
class LatticeGrid:
    """Cell-centred boolean occupancy over a :class:`Geometry`."""

    geometry: Geometry
    occupancy: np.ndarray

    def __post_init__(self):
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.size != self.geometry.size:
            raise DimensionError(
                f"occupancy has {occ.size} cells, geometry needs {self.geometry.size}")
        occ = occ.reshape(self.geometry.shape).copy()
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    @property
    def m(self) -> int:
        return self.geometry.m

    @classmethod
    def empty(cls, geometry: Geometry) -> "LatticeGrid":
        return cls(geometry, np.zeros(geometry.shape, dtype=bool))

    @classmethod
    def from_predicate(cls, geometry: Geometry, pred: Callable) -> "LatticeGrid":
        """Occupy the cells whose centre satisfies ``pred(xi, zeta)`` (vectorised)."""
        c = geometry.all_centers()
        m = geometry.m
        return cls(geometry, np.asarray(pred(c[..., :m], c[..., m:]), dtype=bool))

    def with_occupancy(self, occ) -> "LatticeGrid":
        return LatticeGrid(self.geometry, occ)

    @property
    def count(self) -> int:
        return int(self.occupancy.sum())

    def contains(self, xi, zeta) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        zeta = np.asarray(zeta, dtype=float)
        m = self.m
        if xi.shape[-1:] != (m,) or zeta.shape[-1:] != (m,):
            raise DimensionError(f"query points must have trailing dimension m={m}")
        xi, zeta = np.broadcast_arrays(xi, zeta)
        idx, inside = self.geometry.index_of(np.concatenate([xi, zeta], axis=-1))
        hit = self.occupancy[tuple(np.moveaxis(idx, -1, 0))]
        return hit & inside

    def occupied_centers(self) -> np.ndarray:
        """Centres of occupied cells as pair points, shape (N, 2, m)."""
        c = self.geometry.all_centers()[self.occupancy]
        return c.reshape(-1, 2, self.m)

    def equals(self, other: "LatticeGrid") -> bool:
        return self.geometry == other.geometry and np.array_equal(self.occupancy, other.occupancy)

    def flat_matrix(self) -> np.ndarray:
        """Occupancy as an (N1, N2) matrix indexed by flattened xi- and zeta-cells."""
        n = self.geometry.n
        m = self.m
        return self.occupancy.reshape(int(np.prod(n[:m])), int(np.prod(n[m:])))


SetHandle = Union[FinitePairSet, LatticeGrid, BoxUnion]


# --------------------------------------------------------------------------- grid helpers


def _grid_transpose(occ: np.ndarray, m: int) -> np.ndarray:
    axes = tuple(range(m, 2 * m)) + tuple(range(m))
    return occ.transpose(axes)


def grid_diagonal(occ: np.ndarray, m: int) -> np.ndarray:
    """Mask over block cells ``v`` with ``(v, v)`` occupied."""
    n = occ.shape[:m]
    mat = occ.reshape(int(np.prod(n)), -1)
    return np.diagonal(mat).reshape(n)


def _outer_and(d1: np.ndarray, d2: np.ndarray, m: int) -> np.ndarray:
    return d1.reshape(d1.shape + (1,) * m) & d2.reshape((1,) * m + d2.shape)


# --------------------------------------------------------------------------- operators


@functools.singledispatch
def transpose(E):
    """Swap the two components: ``{(b, a) : (a, b) in E}``."""
    raise TypeError(f"unsupported set representation {type(E).__name__}")


@transpose.register(FinitePairSet)
def _(E: FinitePairSet):
    return FinitePairSet(E.points[:, ::-1, :], m=E.m, tol=E.tol)


@transpose.register(BoxUnion)
def _(E: BoxUnion):
    # every square Q(a, b) is symmetric
    return E


@transpose.register(LatticeGrid)
def _(E: LatticeGrid):
    _require_square(E.geometry)
    return E.with_occupancy(_grid_transpose(E.occupancy, E.m))


@functools.singledispatch
def symmetrize(E):
    """``E`` intersected with its transpose."""
    raise TypeError(f"unsupported set representation {type(E).__name__}")


@symmetrize.register(FinitePairSet)
def _(E: FinitePairSet):
    if len(E) == 0:
        return E
    return E.subset(E.contains(E.points[:, 1], E.points[:, 0]))


@symmetrize.register(BoxUnion)
def _(E: BoxUnion):
    return E


@symmetrize.register(LatticeGrid)
def _(E: LatticeGrid):
    _require_square(E.geometry)
    return E.with_occupancy(E.occupancy & _grid_transpose(E.occupancy, E.m))


@functools.singledispatch
def diagonalize(E):
    """Keep ``(a, b)`` only if ``(a, a)`` and ``(b, b)`` belong to ``E`` as well."""
    raise TypeError(f"unsupported set representation {type(E).__name__}")


@diagonalize.register(FinitePairSet)
def _(E: FinitePairSet):
    if len(E) == 0:
        return E
    a, b = E.points[:, 0], E.points[:, 1]
    return E.subset(E.contains(a, a) & E.contains(b, b))


@diagonalize.register(BoxUnion)
def _(E: BoxUnion):
    return E


@diagonalize.register(LatticeGrid)
def _(E: LatticeGrid):
    _require_square(E.geometry)
    d = grid_diagonal(E.occupancy, E.m)
    return E.with_occupancy(E.occupancy & _outer_and(d, d, E.m))


@functools.singledispatch
def hat(E):
    """Symmetric and diagonal part: ``(a, b)`` with ``(a, a), (b, a), (b, b)`` also in ``E``."""
    raise TypeError(f"unsupported set representation {type(E).__name__}")


@hat.register(FinitePairSet)
def _(E: FinitePairSet):
    return diagonalize(symmetrize(E))


@hat.register(BoxUnion)
def _(E: BoxUnion):
    return E


@hat.register(LatticeGrid)
def _(E: LatticeGrid):
    return diagonalize(symmetrize(E))


def hat_via_bset(E: FinitePairSet | LatticeGrid):
    """Alternative construction: ``E^sym`` minus every line through a non-diagonal value.

    A value ``v`` whose diagonal point ``(v, v)`` is missing removes the whole
    lines ``R^m x {v}`` and ``{v} x R^m``.
    """
    S = symmetrize(E)
    if isinstance(E, LatticeGrid):
        d = grid_diagonal(E.occupancy, E.m)
        # the lines through non-diagonal values, as a cell mask
        lines = _outer_and(~d, np.ones_like(d), E.m) | _outer_and(np.ones_like(d), ~d, E.m)
        return S.with_occupancy(S.occupancy & ~lines)
    if isinstance(E, FinitePairSet):
        if len(S) == 0:
            return S
        values = unique_points(np.concatenate([E.points[:, 0], E.points[:, 1]]), E.tol)
        bad = values[~E.contains(values, values)]
        if len(bad) == 0:
            return S

        def hits(x):
            return np.any(np.all(np.abs(x[:, None, :] - bad[None]) <= E.tol, axis=-1), axis=1)

        keep = ~(hits(S.points[:, 0]) | hits(S.points[:, 1]))
        return S.subset(keep)
    raise TypeError(f"unsupported set representation {type(E).__name__}")


def membership(E: SetHandle, p) -> bool:
    """Whether the pair point ``p = (xi, zeta)`` lies in ``E``."""
    p = np.asarray(p, dtype=float)
    if p.ndim == 1 and E.m == 1 and p.shape == (2,):
        p = p.reshape(2, 1)
    if p.shape != (2, E.m):
        raise DimensionError(f"pair point must have shape (2, {E.m}), got {p.shape}")
    return bool(E.contains(p[0], p[1]))


def is_empty(E: SetHandle) -> bool:
    if isinstance(E, LatticeGrid):
        return not E.occupancy.any()
    if isinstance(E, FinitePairSet):
        return len(E.points) == 0
    return len(E.generators) == 0


def same_set(A: SetHandle, B: SetHandle) -> bool:
    """Set equality: cellwise for grids, under ``tol`` for finite sets, by generators for boxes."""
    if isinstance(A, LatticeGrid) and isinstance(B, LatticeGrid):
        return A.equals(B)
    if isinstance(A, FinitePairSet) and isinstance(B, FinitePairSet):
        return A.equals(B)
    if isinstance(A, BoxUnion) and isinstance(B, BoxUnion):
        fa = FinitePairSet(A.generators, m=A.m, tol=A.tol)
        fb = FinitePairSet(B.generators, m=B.m, tol=B.tol)
        return fa.equals(fb)
    raise TypeError("same_set compares two sets of the same representation")


# --------------------------------------------------------------------------- projections / sections


@dataclass(frozen=True)
class Projections:
    first: np.ndarray
    second: np.ndarray


def projections(E: FinitePairSet | LatticeGrid) -> Projections:
    """Projections onto the first and second component, as arrays of shape (k, m)."""
    if isinstance(E, FinitePairSet):
        p1 = unique_points(E.points[:, 0], E.tol)
        p2 = unique_points(E.points[:, 1], E.tol)
        return Projections(p1[lexsort_rows(p1)], p2[lexsort_rows(p2)])
    if isinstance(E, LatticeGrid):
        m = E.m
        occ = E.occupancy
        any1 = occ.reshape(occ.shape[:m] + (-1,)).any(axis=-1)
        any2 = occ.reshape((-1,) + occ.shape[m:]).any(axis=0)
        g = E.geometry
        return Projections(g.block_centers(0)[any1], g.block_centers(1)[any2])
    raise TypeError(f"projections need a finite or grid set, got {type(E).__name__}")


def section(E: FinitePairSet | LatticeGrid, beta, which: int = 1) -> np.ndarray:
    """Section at ``beta``: ``{a : (a, beta) in E}`` (which=1) or ``{a : (beta, a) in E}`` (which=2)."""
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if beta.shape != (E.m,):
        raise DimensionError(f"section point must have m={E.m} entries")
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if isinstance(E, FinitePairSet):
        fixed, free = (1, 0) if which == 1 else (0, 1)
        hit = np.all(np.abs(E.points[:, fixed] - beta) <= E.tol, axis=1)
        out = unique_points(E.points[hit, free], E.tol)
        return out[lexsort_rows(out)]
    if isinstance(E, LatticeGrid):
        g, m = E.geometry, E.m
        if which == 1:
            idx, inside = g.index_of(np.concatenate([g.lo[:m], beta]))
            if not inside:
                return np.zeros((0, m))
            sl = E.occupancy[(Ellipsis,) + tuple(idx[m:])]
            return g.block_centers(0)[sl]
        idx, inside = g.index_of(np.concatenate([beta, g.lo[m:]]))
        if not inside:
            return np.zeros((0, m))
        sl = E.occupancy[tuple(idx[:m])]
        return g.block_centers(1)[sl]
    raise TypeError(f"sections need a finite or grid set, got {type(E).__name__}")


# --------------------------------------------------------------------------- hausdorff


def _as_cloud(A) -> np.ndarray:
    if isinstance(A, FinitePairSet):
        return A.points.reshape(len(A.points), -1)
    if isinstance(A, LatticeGrid):
        c = A.occupied_centers()
        return c.reshape(len(c), -1)
    arr = np.asarray(A, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr[:, None]
    if len(arr) == 0:
        return np.zeros((0, max(1, int(np.prod(arr.shape[1:])))))
    return arr.reshape(len(arr), -1)


def hausdorff(A, B) -> float:
    """Sum of the two one-sided deviations ``sup_a dist(a, B) + sup_b dist(b, A)``.

    Note this is the additive form, so ``hausdorff({0}, {1}) == 2``; the usual
    max form is half of it or less.  Accepts point clouds (arrays of shape
    (N, d) or 1-D arrays of scalars), finite pair sets, and grids.
    """
    a, b = _as_cloud(A), _as_cloud(B)
    if len(a) == 0 or len(b) == 0:
        raise EmptySetError("Hausdorff distance needs two non-empty sets")
    if a.shape[1] != b.shape[1]:
        raise DimensionError("Hausdorff distance needs sets in the same space")
    d_ab, _ = cKDTree(b).query(a)
    d_ba, _ = cKDTree(a).query(b)
    return float(d_ab.max() + d_ba.max())


# --------------------------------------------------------------------------- rasterization


def rasterize(E: FinitePairSet | BoxUnion, geometry: Geometry) -> LatticeGrid:
    """Lattice image of a finite set or a box union.

    Finite sets occupy every cell whose centre is within half a cell diagonal
    of some point.  Box unions occupy the cells whose centre lies in some
    ``Q(a, b)``: exactly (up to ``tol``) for m = 1, and within half a block
    cell diagonal of each segment for m = 2, where exact hits are measure-zero.
    """
    if E.m != geometry.m:
        raise DimensionError(f"set has m={E.m}, geometry has m={geometry.m}")
    m = geometry.m
    occ = np.zeros(geometry.shape, dtype=bool)
    if isinstance(E, FinitePairSet):
        pts = E.points.reshape(len(E.points), 2 * m)
        if not geometry.contains_box(pts):
            raise ValueError("finite set extends beyond the grid ranges")
        lo, h, n = np.array(geometry.lo), geometry.h, np.array(geometry.n)
        r = geometry.half_diagonal
        for p in pts:
            first = np.clip(np.ceil((p - r - lo) / h - 0.5 - 1e-12).astype(int), 0, n - 1)
            last = np.clip(np.floor((p + r - lo) / h - 0.5 + 1e-12).astype(int), 0, n - 1)
            ranges = [np.arange(f, l + 1) for f, l in zip(first, last)]
            cand = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, 2 * m)
            centers = lo + (cand + 0.5) * h
            ok = np.linalg.norm(centers - p, axis=1) <= r * (1 + 1e-12)
            occ[tuple(cand[ok].T)] = True
        return LatticeGrid(geometry, occ)
    if isinstance(E, BoxUnion):
        gens = E.generators
        if len(gens) and not geometry.contains_box(
                np.concatenate([gens[:, 0], gens[:, 1]], axis=1)):
            raise ValueError("box union extends beyond the grid ranges")
        c1, c2 = geometry.block_centers(0), geometry.block_centers(1)
        if m == 1:
            band1 = band2 = E.tol
        else:
            band1 = 0.5 * float(np.linalg.norm(geometry.h[:m]))
            band2 = 0.5 * float(np.linalg.norm(geometry.h[m:]))
        for a, b in gens:
            s1 = on_segment(c1, a, b, band1)
            s2 = on_segment(c2, a, b, band2)
            occ |= _outer_and(s1, s2, m)
        return LatticeGrid(geometry, occ)
    raise TypeError(f"cannot rasterize {type(E).__name__}")


def finite_from_grid(E: LatticeGrid, tol: float = DEFAULT_TOL) -> FinitePairSet:
    """Occupied cell centres as a finite pair set."""
    return FinitePairSet(E.occupied_centers(), m=E.m, tol=tol)


__all__ = [
    "DEFAULT_TOL", "Geometry", "FinitePairSet", "BoxUnion", "LatticeGrid", "SetHandle",
    "transpose", "symmetrize", "diagonalize", "hat", "hat_via_bset", "membership",
    "is_empty", "same_set", "Projections", "projections", "section", "hausdorff",
    "rasterize", "finite_from_grid", "on_segment", "segment_parameter", "unique_points",
    "grid_diagonal", "lexsort_rows",
]
