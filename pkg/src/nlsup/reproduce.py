"""End-to-end pipelines for the four worked supremand examples.

Each runner samples the supremand, builds the envelope or the level-set
verdicts, compares against the closed forms, and returns an
:class:`ExampleResult` whose ``rows`` form the comparison table.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functional import lsc_check
from .setcore import Geometry
from .supremand import (
    DEFAULT_ALPHA,
    LevelSchedule,
    SampledSupremand,
    coercivity_report,
    ex_c_W,
    ex_d_W,
    ex_a_slc,
    ex_a_W,
    ex_b_slc,
    ex_b_W,
    hat_supremand,
    slc_envelope,
)

# wells: distance to the four corner wells; cross: distance to the four axis
# points; paired / swapped: the two m = 2 supremands built from wells at +-alpha
EXAMPLES = ("wells", "cross", "paired", "swapped")


@dataclass
class ExampleResult:
    name: str
    rows: list = field(default_factory=list)
    fields: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["ok"] for r in self.rows)

    def add(self, quantity: str, computed: float, expected, tolerance, ok: bool) -> None:
        self.rows.append({"quantity": quantity, "computed": computed, "expected": expected,
                          "tolerance": tolerance, "ok": bool(ok)})

    def table(self) -> str:
        lines = [f"# example {self.name}", "quantity computed expected tolerance ok"]
        for r in self.rows:
            lines.append(f"{r['quantity']} {r['computed']:.10g} {r['expected']} "
                         f"{r['tolerance']} {'yes' if r['ok'] else 'no'}")
        return "\n".join(lines) + "\n"


def envelope_error(Wslc: SampledSupremand, exact) -> tuple:
    """Max abs error against a closed form on the trusted region, and that region's mask.

    The region holds every cell with a finite computed value and every cell
    whose exact value is at least one level gap below the top scheduled level.
    """
    g = Wslc.geometry
    c = g.all_centers()
    truth = exact(c[..., :g.m], c[..., g.m:])
    top = Wslc.meta["levels"][-1]
    gap = Wslc.meta["level_gap"]
    region = np.isfinite(Wslc.values) | (truth <= top - gap)
    err = np.abs(Wslc.values - truth)[region]
    return (float(err.max()) if err.size else 0.0), region


def run_wells(res: int = 301, levels: int = 64, lo: float = -3.0, hi: float = 3.0) -> ExampleResult:
    geom = Geometry.square(1, lo, hi, res)
    W = SampledSupremand.from_function(geom, ex_a_W)
    Wh = hat_supremand(W)
    rep = coercivity_report(Wh)
    sched = LevelSchedule.uniform(rep.min_value, rep.trusted_max, levels)
    Wslc = slc_envelope(Wh, sched, apply_hat=False)
    gap = sched.gap
    tol = gap + 2 * float(geom.h[0]) * np.sqrt(2)
    err, _ = envelope_error(Wslc, ex_a_slc)
    out = ExampleResult("wells", fields={"W": W, "W_hat": Wh, "W_slc": Wslc})
    out.add("max_abs_error", err, 0.0, tol, err <= tol)
    v0 = float(Wslc.value_at([0.0], [0.0]))
    out.add("value_at_origin", v0, 0.0, tol, abs(v0) <= tol)
    v20 = float(Wslc.value_at([2.0], [0.0]))
    out.add("value_at_(2,0)", v20, float(np.sqrt(2)), tol, abs(v20 - np.sqrt(2)) <= tol)
    verdict = lsc_check(Wslc, LevelSchedule(tuple(sched.levels[:-1])))
    out.add("envelope_levels_fixed", float(verdict.holds), 1.0, 0, verdict.holds)
    return out


def run_cross(res: int = 301, levels: int = 64, lo: float = -3.0, hi: float = 3.0) -> ExampleResult:
    geom = Geometry.square(1, lo, hi, res)
    W = SampledSupremand.from_function(geom, ex_b_W)
    Wh = hat_supremand(W)
    rep = coercivity_report(Wh)
    sched = LevelSchedule.uniform(rep.min_value, rep.trusted_max, levels)
    Wslc = slc_envelope(Wh, sched, apply_hat=False)
    gap = sched.gap
    target = 1 / np.sqrt(2)
    out = ExampleResult("cross", fields={"W": W, "W_hat": Wh, "W_slc": Wslc})
    vmin = float(Wslc.values.min())
    out.add("min_W_slc", vmin, target, gap, abs(vmin - target) <= gap)
    v0 = float(Wslc.value_at([0.0], [0.0]))
    out.add("value_at_origin", v0, target, gap, abs(v0 - target) <= gap)
    tol = gap + 2 * float(geom.h[0]) * np.sqrt(2)
    err, _ = envelope_error(Wslc, ex_b_slc)
    out.add("max_abs_error", err, 0.0, tol, err <= tol)
    return out


def _run_m2(name: str, f, res: int, levels: int, lo: float, hi: float, alpha) -> ExampleResult:
    geom = Geometry.square(2, lo, hi, res)
    W = SampledSupremand.from_function(geom, lambda x, z: f(x, z, alpha))
    rep = coercivity_report(W)
    sched = LevelSchedule.uniform(rep.min_value, rep.trusted_max, levels)
    verdict = lsc_check(W, sched)
    out = ExampleResult(name, fields={"W": W, "verdict": verdict})
    out.add("levels_passing", float(sum(r.holds for r in verdict.levels)),
            len(verdict.levels), 0, verdict.holds)
    return out


def run_paired(res: int = 17, levels: int = 12, lo: float = -1.5, hi: float = 1.5,
            alpha=DEFAULT_ALPHA) -> ExampleResult:
    return _run_m2("paired", ex_c_W, res, levels, lo, hi, alpha)


def run_swapped(res: int = 17, levels: int = 12, lo: float = -1.5, hi: float = 1.5,
            alpha=DEFAULT_ALPHA) -> ExampleResult:
    return _run_m2("swapped", ex_d_W, res, levels, lo, hi, alpha)


RUNNERS = {"wells": run_wells, "cross": run_cross, "paired": run_paired, "swapped": run_swapped}


def run_example(which: str, **kwargs) -> ExampleResult:
    try:
        runner = RUNNERS[which]
    except KeyError:
        raise ValueError(f"unknown example {which!r}; choose from {EXAMPLES}") from None
    return runner(**kwargs)
