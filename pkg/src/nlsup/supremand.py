"""Sampled supremands and the envelope pipeline ``W -> W_hat -> W_hat^slc``."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, HullNotConverged, UntrustedScheduleError
from .hulls import sc_hull_grid
from .setcore import Geometry, LatticeGrid, _require_square

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 64
# sublevel comparisons absorb rounding between values that agree analytically
LEVEL_RTOL = 1e-12


def level_mask(values: np.ndarray, c: float) -> np.ndarray:
    return values <= c + LEVEL_RTOL * max(1.0, abs(c))


@dataclass(frozen=True, eq=False)
class SampledSupremand:
    """Values of ``W(xi, zeta)`` at the cell centres of a grid.

    ``+inf`` is allowed only in envelope outputs, where it marks cells above
    the trusted level range.
    """

    geometry: Geometry
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size != self.geometry.size:
            raise ValueError(f"need {self.geometry.size} values, got {v.size}")
        v = v.reshape(self.geometry.shape).copy()
        if np.isnan(v).any() or np.isneginf(v).any():
            raise ValueError("supremand values must be finite or +inf")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, geometry: Geometry, f: Callable) -> "SampledSupremand":
        c = geometry.all_centers()
        m = geometry.m
        return cls(geometry, f(c[..., :m], c[..., m:]))

    @property
    def m(self) -> int:
        return self.geometry.m

    @property
    def boundary_min(self) -> float:
        v = self.values
        ring = np.zeros(v.shape, dtype=bool)
        for ax in range(v.ndim):
            sl = [slice(None)] * v.ndim
            sl[ax] = 0
            ring[tuple(sl)] = True
            sl[ax] = -1
            ring[tuple(sl)] = True
        return float(v[ring].min())

    def value_at(self, xi, zeta) -> np.ndarray:
        """Value of the cell containing each query pair; raises outside the grid."""
        p = np.concatenate(np.broadcast_arrays(np.asarray(xi, float), np.asarray(zeta, float)),
                           axis=-1)
        if p.shape[-1] != 2 * self.m:
            raise DimensionError(f"query pairs must have m={self.m}")
        idx, inside = self.geometry.index_of(p)
        if not np.all(inside):
            raise ValueError("query point outside the supremand grid")
        return self.values[tuple(np.moveaxis(idx, -1, 0))]

    def __call__(self, xi, zeta):
        return self.value_at(xi, zeta)


@dataclass(frozen=True)
class LevelSchedule:
    levels: tuple

    def __post_init__(self):
        lv = tuple(float(c) for c in self.levels)
        if not lv:
            raise ValueError("a level schedule needs at least one level")
        if not all(np.isfinite(lv)):
            raise ValueError("levels must be finite")
        if any(b <= a for a, b in zip(lv, lv[1:])):
            raise ValueError("levels must be strictly increasing")
        object.__setattr__(self, "levels", lv)

    @classmethod
    def uniform(cls, lo: float, hi: float, count: int = DEFAULT_LEVELS) -> "LevelSchedule":
        if count == 1 or hi == lo:
            return cls((hi,))
        return cls(tuple(np.linspace(lo, hi, count)))

    @property
    def gap(self) -> float:
        if len(self.levels) == 1:
            return 0.0
        return float(np.max(np.diff(self.levels)))

    def refined(self) -> "LevelSchedule":
        """Insert the midpoint of every consecutive pair."""
        lv = np.array(self.levels)
        mids = 0.5 * (lv[1:] + lv[:-1])
        return LevelSchedule(tuple(np.sort(np.concatenate([lv, mids]))))


# --------------------------------------------------------------------------- coercivity


@dataclass(frozen=True)
class CoercivityReport:
    boundary_min: float
    trusted_max: float
    min_value: float

    @property
    def coercive(self) -> bool:
        return np.isfinite(self.trusted_max)

    def to_dict(self) -> dict:
        return {"boundary_min": self.boundary_min, "trusted_max": self.trusted_max,
                "min_value": self.min_value, "coercive": bool(self.coercive)}


def coercivity_report(W: SampledSupremand) -> CoercivityReport:
    """Largest attained level whose sublevel set stays off the outer cell ring.

    ``trusted_max`` is ``-inf`` when no attained value lies strictly below the
    boundary minimum (for instance a constant supremand).
    """
    bmin = W.boundary_min
    v = W.values[np.isfinite(W.values)]
    below = v[v < bmin]
    trusted = float(below.max()) if below.size else -np.inf
    return CoercivityReport(bmin, trusted, float(v.min()))


def is_trusted_level(W: SampledSupremand, c: float) -> bool:
    return c < W.boundary_min


def default_schedule(W: SampledSupremand, count: int = DEFAULT_LEVELS) -> LevelSchedule:
    rep = coercivity_report(W)
    if not rep.coercive:
        raise UntrustedScheduleError("no sublevel set avoids the grid boundary")
    return LevelSchedule.uniform(rep.min_value, rep.trusted_max, count)


def _check_schedule(W: SampledSupremand, sched: LevelSchedule):
    if not is_trusted_level(W, sched.levels[-1]):
        raise UntrustedScheduleError(
            f"level {sched.levels[-1]:.6g} reaches the grid boundary "
            f"(boundary minimum {W.boundary_min:.6g})")


# --------------------------------------------------------------------------- level sets and envelopes


def sublevel(W: SampledSupremand, c: float) -> LatticeGrid:
    """Cells with ``W <= c``; a level at or above the boundary minimum is logged as clipped."""
    if not is_trusted_level(W, c):
        logger.warning("sublevel at c=%g touches the grid boundary", c)
    return LatticeGrid(W.geometry, level_mask(W.values, c))


def hat_supremand(W: SampledSupremand) -> SampledSupremand:
    """``max{W(xi, zeta), W(zeta, xi), W(xi, xi), W(zeta, zeta)}`` cellwise."""
    _require_square(W.geometry)
    n = W.geometry.n
    m = W.m
    N = int(np.prod(n[:m]))
    V = W.values.reshape(N, N)
    d = np.diagonal(V)
    out = np.maximum(np.maximum(V, V.T), np.maximum(d[:, None], d[None, :]))
    return SampledSupremand(W.geometry, out.reshape(W.geometry.shape), dict(W.meta))


def slc_envelope(W: SampledSupremand, sched: LevelSchedule | None = None,
                 apply_hat: bool = True) -> SampledSupremand:
    """Separately level convex envelope of ``W_hat`` on a level schedule.

    Each cell receives the smallest scheduled level whose sublevel hull
    contains it, and ``+inf`` if none does.  Hulls are built incrementally:
    ``H_k = hull(L_k u H_{k-1})``, which equals ``hull(L_k)`` since sublevel
    sets are nested.  For m = 2 the result is a candidate envelope.
    """
    Wh = hat_supremand(W) if apply_hat else W
    rep = coercivity_report(Wh)
    if sched is None:
        sched = default_schedule(Wh)
    _check_schedule(Wh, sched)
    out = np.full(Wh.geometry.shape, np.inf)
    H = np.zeros(Wh.geometry.shape, dtype=bool)
    iterations = []
    for c in sched.levels:
        res = sc_hull_grid(LatticeGrid(Wh.geometry, level_mask(Wh.values, c) | H))
        if not res.converged:
            raise HullNotConverged(f"hull at level {c:.6g} hit the iteration cap")
        H = res.hull.occupancy
        out[H & np.isinf(out)] = c
        iterations.append(res.iterations)
    meta = {
        "level_gap": sched.gap,
        "trusted_max": rep.trusted_max,
        "levels": list(sched.levels),
        "iterations": iterations,
        "exact": Wh.m == 1,
    }
    if Wh.m != 1:
        meta["note"] = "candidate envelope"
    return SampledSupremand(Wh.geometry, out, meta)


# --------------------------------------------------------------------------- closed forms

K6 = np.array([[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]])
K5 = np.array([[0.0, 1.0], [1.0, 0.0], [0.0, -1.0], [-1.0, 0.0]])
DEFAULT_ALPHA = np.array([0.5, 0.0])


def _scalar_pair(xi, zeta):
    x = np.asarray(xi, dtype=float)
    z = np.asarray(zeta, dtype=float)
    if x.shape[-1:] == (1,):
        x = x[..., 0]
    if z.shape[-1:] == (1,):
        z = z[..., 0]
    return np.broadcast_arrays(x, z)


def _dist_to(points):
    def f(xi, zeta):
        x, z = _scalar_pair(xi, zeta)
        d = np.stack([np.hypot(x - a, z - b) for a, b in points])
        return d.min(axis=0)
    return f


def _maxnorm(x, z):
    return np.maximum(np.abs(x), np.abs(z))


def ex_a_W(xi, zeta):
    return _dist_to(K6)(xi, zeta)


def ex_a_hat(xi, zeta):
    x, z = _scalar_pair(xi, zeta)
    d = np.stack([_maxnorm(x - a, z - b) for a, b in K6]).min(axis=0)
    return np.sqrt(2.0) * d


def ex_a_slc(xi, zeta):
    x, z = _scalar_pair(xi, zeta)
    return np.sqrt(2.0) * np.maximum(_maxnorm(x, z) - 1.0, 0.0)


def ex_b_W(xi, zeta):
    return _dist_to(K5)(xi, zeta)


def ex_b_hat(xi, zeta):
    x, z = _scalar_pair(xi, zeta)
    return np.maximum(np.maximum(ex_b_W(x, z), ex_b_W(z, x)),
                      np.maximum(ex_b_W(x, x), ex_b_W(z, z)))


def ex_b_slc(xi, zeta):
    x, z = _scalar_pair(xi, zeta)
    r = _maxnorm(x, z)
    outer = np.sqrt(0.5 * (2 * r - 1) ** 2 + 0.5)
    return np.where(r >= 0.5, outer, 1 / np.sqrt(2.0))


def _vec_pair(xi, zeta, alpha):
    x = np.asarray(xi, dtype=float)
    z = np.asarray(zeta, dtype=float)
    a = np.asarray(alpha, dtype=float)
    if x.shape[-1:] != a.shape or z.shape[-1:] != a.shape:
        raise ValueError(f"points must have trailing dimension {a.shape[0]}")
    return x, z, a


def ex_c_W(xi, zeta, alpha=DEFAULT_ALPHA):
    x, z, a = _vec_pair(xi, zeta, alpha)
    n = np.linalg.norm
    return np.minimum(np.maximum(n(x - a, axis=-1), n(z - a, axis=-1)),
                      np.maximum(n(x + a, axis=-1), n(z + a, axis=-1)))


def ex_d_W(xi, zeta, alpha=DEFAULT_ALPHA):
    x, z, a = _vec_pair(xi, zeta, alpha)
    n = np.linalg.norm
    return np.minimum(np.maximum(n(x - a, axis=-1), n(z + a, axis=-1)),
                      np.maximum(n(x + a, axis=-1), n(z - a, axis=-1)))


CLOSED_FORMS = {
    "ex_a_W": ex_a_W,
    "ex_a_hat": ex_a_hat,
    "ex_a_slc": ex_a_slc,
    "ex_b_W": ex_b_W,
    "ex_b_hat": ex_b_hat,
    "ex_b_slc": ex_b_slc,
    "ex_c_W": ex_c_W,
    "ex_d_W": ex_d_W,
}
# forms on pairs of vectors in R^m; the rest act on scalar pairs
VECTOR_FORMS = frozenset({"ex_c_W", "ex_d_W"})


def closed_form(name: str) -> Callable:
    try:
        return CLOSED_FORMS[name]
    except KeyError:
        raise ValueError(f"unknown closed form {name!r}; choose from {sorted(CLOSED_FORMS)}") \
            from None


def closed_form_library(name: str, p) -> float:
    """Evaluate a named closed form at the pair point ``p = (xi, zeta)``."""
    f = closed_form(name)
    p = np.asarray(p, dtype=float)
    if name not in VECTOR_FORMS:
        p = p.reshape(2, -1)
    return float(f(p[0], p[1]))


def sample_closed_form(name: str, geometry: Geometry) -> SampledSupremand:
    return SampledSupremand.from_function(geometry, closed_form(name))
