"""Maximal Cartesian subsets ``A x A`` of a pair set, found as maximal cliques."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .setcore import (
    BoxUnion,
    FinitePairSet,
    LatticeGrid,
    _require_square,
    grid_diagonal,
    hat,
    is_empty,
    lexsort_rows,
    unique_points,
)

CLIQUE_CAP = 4096


@dataclass(frozen=True)
class CartesianFamily:
    """Bases ``A`` (arrays of shape (k, m)) of the maximal Cartesian subsets."""

    bases: tuple
    m: int = 1

    def __len__(self):
        return len(self.bases)

    def to_dict(self) -> dict:
        return {"bases": [b.tolist() for b in self.bases]}

    @classmethod
    def from_dict(cls, d: dict) -> "CartesianFamily":
        bases = tuple(np.asarray(b, dtype=float).reshape(len(b), -1) for b in d["bases"])
        m = bases[0].shape[1] if bases else int(d.get("m", 1))
        return cls(bases, m)

    def base_containing(self, values, tol: float = 1e-9):
        """Index of a base holding every row of ``values``, or None."""
        v = np.asarray(values, dtype=float).reshape(-1, self.m)
        for k, b in enumerate(self.bases):
            hit = np.all(np.abs(v[:, None, :] - b[None]) <= tol, axis=-1).any(axis=1)
            if hit.all():
                return k
        return None


# --------------------------------------------------------------------------- clique search


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def maximal_cliques(adj: np.ndarray) -> list:
    """All maximal cliques of an undirected graph (Bron-Kerbosch with pivoting).

    ``adj`` is a symmetric boolean matrix; loops are ignored.  Uses an explicit
    stack and integer bitsets, and returns cliques as sorted index tuples in
    lexicographic order.
    """
    n = len(adj)
    if n == 0:
        return []
    nbr = []
    for i in range(n):
        row = np.flatnonzero(adj[i])
        mask = 0
        for k in row:
            if k != i:
                mask |= 1 << int(k)
        nbr.append(mask)
    out = []
    stack = [(0, (1 << n) - 1, 0)]
    while stack:
        R, P, X = stack.pop()
        if not P:
            if not X:
                out.append(tuple(_bits(R)))
            continue
        pivot = max(_bits(P | X), key=lambda u: (P & nbr[u]).bit_count())
        for v in _bits(P & ~nbr[pivot]):
            bit = 1 << v
            stack.append((R | bit, P & nbr[v], X & nbr[v]))
            P &= ~bit
            X |= bit
    return sorted(out)


def _compatibility(E):
    """Vertices (diagonal values, lexicographically sorted) and the compatibility matrix."""
    if isinstance(E, FinitePairSet):
        if len(E) == 0:
            return np.zeros((0, E.m)), np.zeros((0, 0), dtype=bool), None
        vals = unique_points(np.concatenate([E.points[:, 0], E.points[:, 1]]), E.tol)
        vals = vals[E.contains(vals, vals)]
        vals = vals[lexsort_rows(vals)]
        M = E.contains(vals[:, None, :], vals[None, :, :])
        return vals, M & M.T, None
    if isinstance(E, LatticeGrid):
        _require_square(E.geometry)
        m = E.m
        d = grid_diagonal(E.occupancy, m).ravel()
        idx = np.flatnonzero(d)
        if len(idx) > CLIQUE_CAP:
            raise CapacityError(
                f"{len(idx)} diagonal candidates exceed the clique cap of {CLIQUE_CAP}")
        M = E.flat_matrix()[np.ix_(idx, idx)]
        centers = E.geometry.block_centers(0).reshape(-1, m)[idx]
        return centers, M & M.T, idx
    raise TypeError(f"maximal_cartesian needs a finite or grid set, got {type(E).__name__}")


def maximal_cartesian(E: FinitePairSet | LatticeGrid) -> CartesianFamily:
    """The family of maximal ``A x A`` contained in ``E``."""
    vals, adj, _ = _compatibility(E)
    cliques = maximal_cliques(adj) if len(vals) else []
    return CartesianFamily(tuple(vals[list(c)] for c in cliques), E.m)


def hat_via_cliques(E: FinitePairSet | LatticeGrid):
    """Union of ``A x A`` over the maximal Cartesian subsets; coincides with ``hat(E)``."""
    vals, adj, idx = _compatibility(E)
    cliques = maximal_cliques(adj) if len(vals) else []
    if isinstance(E, LatticeGrid):
        N = E.flat_matrix().shape[0]
        occ = np.zeros((N, N), dtype=bool)
        for c in cliques:
            cells = idx[list(c)]
            occ[np.ix_(cells, cells)] = True
        return E.with_occupancy(occ)
    pairs = set()
    for c in cliques:
        for a in c:
            for b in c:
                pairs.add((a, b))
    if not pairs:
        return FinitePairSet(np.zeros((0, 2, E.m)), m=E.m, tol=E.tol)
    ab = np.array(sorted(pairs))
    pts = np.stack([vals[ab[:, 0]], vals[ab[:, 1]]], axis=1)
    return FinitePairSet(pts, m=E.m, tol=E.tol)


def brute_force_cartesian(E: FinitePairSet) -> list:
    """Maximal cliques by exhaustive subset search (reference for small inputs)."""
    vals, adj, _ = _compatibility(E)
    n = len(vals)
    if n > 16:
        raise CapacityError("exhaustive search is limited to 16 candidates")
    good = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if all(adj[a, b] for a in members for b in members if a < b):
            good.append(mask)
    maximal = [g for g in good if not any(h != g and h & g == g for h in good)]
    return sorted(tuple(i for i in range(n) if g >> i & 1) for g in maximal)


def inclusion_feasible(K) -> bool:
    """Whether some function satisfies the pair constraint, i.e. ``hat(K)`` is non-empty."""
    if isinstance(K, BoxUnion):
        return len(K) > 0
    if isinstance(K, (FinitePairSet, LatticeGrid)):
        return not is_empty(hat(K))
    # closed-form sets built from non-empty convex pieces
    return True
