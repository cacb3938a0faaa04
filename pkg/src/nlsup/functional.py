"""Supremal functionals and pair constraints evaluated on simple functions.

For a piecewise-constant ``u`` the essential supremum over ``Omega x Omega``
is a finite maximum over ordered pairs of cell values, so every evaluation
here is exact up to the supremand's own sampling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, HullNotConverged, UntrustedScheduleError
from .hulls import sc_hull_grid
from .setcore import LatticeGrid, hat
from .supremand import (
    VECTOR_FORMS,
    LevelSchedule,
    SampledSupremand,
    _check_schedule,
    closed_form,
    coercivity_report,
    sublevel,
)

LSC_DEFAULT_LEVELS = 32


@dataclass(frozen=True, eq=False)
class SimpleFunction:
    """Piecewise-constant ``u`` on (0, 1): value ``values[i]`` on ``(breaks[i], breaks[i+1])``."""

    breaks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breaks, dtype=float).ravel()
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if len(b) != len(v) + 1 or len(v) == 0:
            raise ValueError("need one more break than cell values")
        if b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("cells must cover (0, 1)")
        if np.any(np.diff(b) <= 0):
            raise ValueError("every cell must have positive length")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        b.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_cells(cls, cells) -> "SimpleFunction":
        """From ``[(a, b, value), ...]`` listed left to right with matching endpoints."""
        cells = list(cells)
        if not cells:
            raise ValueError("a simple function needs at least one cell")
        for (a0, b0, _), (a1, _, _) in zip(cells, cells[1:]):
            if b0 != a1:
                raise ValueError(f"cells must be contiguous, found gap or overlap at {b0} / {a1}")
        breaks = [cells[0][0]] + [c[1] for c in cells]
        return cls(np.array(breaks), np.array([np.atleast_1d(c[2]) for c in cells], dtype=float))

    @classmethod
    def constant(cls, value) -> "SimpleFunction":
        return cls(np.array([0.0, 1.0]), np.atleast_2d(np.asarray(value, dtype=float)))

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def n(self) -> int:
        return 1

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breaks)

    def __len__(self):
        return len(self.values)

    def value_set(self) -> np.ndarray:
        return np.unique(self.values, axis=0)

    def __call__(self, x) -> np.ndarray:
        k = np.searchsorted(self.breaks, np.asarray(x, dtype=float), side="right") - 1
        return self.values[np.clip(k, 0, len(self.values) - 1)]

    def merged(self) -> "SimpleFunction":
        """Join neighbouring cells that carry the same value."""
        keep = [0]
        for i in range(1, len(self.values)):
            if not np.array_equal(self.values[i], self.values[keep[-1]]):
                keep.append(i)
        breaks = np.r_[self.breaks[keep], 1.0]
        return SimpleFunction(breaks, self.values[keep])

    def to_dict(self) -> dict:
        return {"n": 1, "cells": [
            {"a": float(a), "b": float(b), "value": v.tolist()}
            for a, b, v in zip(self.breaks[:-1], self.breaks[1:], self.values)]}

    @classmethod
    def from_dict(cls, d: dict) -> "SimpleFunction":
        if int(d.get("n", 1)) != 1:
            raise ValueError("only n = 1 simple functions are supported")
        return cls.from_cells([(c["a"], c["b"], c["value"]) for c in d["cells"]])


def _as_callable(W):
    if isinstance(W, str):
        return closed_form(W)
    return W


def _pair_grid(u: SimpleFunction):
    v = u.value_set()
    return v[:, None, :], v[None, :, :]


def _pair_values(W, u: SimpleFunction) -> np.ndarray:
    xi, zeta = _pair_grid(u)
    xi, zeta = np.broadcast_arrays(xi, zeta)
    f = _as_callable(W)
    if isinstance(W, str) and W not in VECTOR_FORMS and u.m != 1:
        raise DimensionError("scalar closed forms need m = 1 values")
    return np.asarray(f(xi, zeta), dtype=float)


def eval_J(W, u: SimpleFunction) -> float:
    """``max W(u_i, u_k)`` over all ordered pairs of cell values.

    ``W`` may be a :class:`SampledSupremand` (cell lookup), a vectorised
    callable, or the name of a closed form.
    """
    return float(_pair_values(W, u).max())


def eval_Jrlx(Wslc, u: SimpleFunction) -> float:
    """Relaxed functional: the same pair maximum, against an envelope."""
    vals = _pair_values(Wslc, u)
    if np.isinf(vals).any():
        raise UntrustedScheduleError("u takes values above the trusted envelope range")
    return float(vals.max())


def in_A_E(E, u: SimpleFunction) -> bool:
    """Whether every ordered pair of cell values lies in ``E``."""
    if E.m != u.m:
        raise DimensionError(f"set has m={E.m}, function values have m={u.m}")
    xi, zeta = _pair_grid(u)
    xi, zeta = np.broadcast_arrays(xi, zeta)
    return bool(np.all(E.contains(xi, zeta)))


def indicator_I(K, u: SimpleFunction) -> float:
    return 0.0 if in_A_E(K, u) else float("inf")


# --------------------------------------------------------------------------- lower semicontinuity


@dataclass(frozen=True)
class LevelResult:
    level: float
    holds: bool
    witness: list | None
    iterations: int

    def to_dict(self) -> dict:
        return {"level": self.level, "holds": self.holds, "witness": self.witness,
                "iterations": self.iterations}


@dataclass(frozen=True)
class LscVerdict:
    levels: list = field(default_factory=list)
    exact: bool = True

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.levels)

    @property
    def failing_levels(self) -> list:
        return [r.level for r in self.levels if not r.holds]

    def to_dict(self) -> dict:
        kind = "criterion" if self.exact else "sufficient condition"
        return {"holds": self.holds, "kind": kind,
                "levels": [r.to_dict() for r in self.levels]}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("NLSUP_THREADS", "1")))
    except ValueError:
        return 1


def level_fixed_point(L: LatticeGrid) -> tuple:
    """Compare ``hat(hat(L)^sc)`` with ``hat(L)``; returns (holds, witness, iterations)."""
    hL = hat(L)
    res = sc_hull_grid(hL)
    if not res.converged:
        raise HullNotConverged("sublevel hull hit the iteration cap")
    hh = hat(res.hull)
    extra = hh.occupancy & ~hL.occupancy
    if not extra.any():
        return True, None, res.iterations
    cell = np.argwhere(extra)[0]
    witness = L.geometry.all_centers()[tuple(cell)].tolist()
    return False, witness, res.iterations


def lsc_check(W: SampledSupremand, sched: LevelSchedule | None = None) -> LscVerdict:
    """Per-level fixed-point test ``hat(hat(L_c)^sc) == hat(L_c)``.

    For m = 1 this decides weak* lower semicontinuity; for m = 2 a pass is a
    sufficient condition only.  Levels run on up to ``NLSUP_THREADS`` threads.
    """
    if sched is None:
        rep = coercivity_report(W)
        if not rep.coercive:
            raise UntrustedScheduleError("no sublevel set avoids the grid boundary")
        sched = LevelSchedule.uniform(rep.min_value, rep.trusted_max, LSC_DEFAULT_LEVELS)
    _check_schedule(W, sched)

    def run(c):
        holds, witness, its = level_fixed_point(sublevel(W, c))
        return LevelResult(float(c), holds, witness, its)

    workers = _threads()
    if workers == 1:
        results = [run(c) for c in sched.levels]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, sched.levels))
    return LscVerdict(results, exact=W.m == 1)
