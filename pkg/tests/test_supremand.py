import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nlsup.errors import UntrustedScheduleError
from nlsup.hulls import sc_hull_grid
from nlsup.reproduce import run_example
from nlsup.setcore import Geometry, LatticeGrid, hat
from nlsup.supremand import (
    LevelSchedule,
    SampledSupremand,
    closed_form,
    closed_form_library,
    coercivity_report,
    default_schedule,
    hat_supremand,
    sample_closed_form,
    slc_envelope,
    sublevel,
)

G41 = Geometry.square(1, -2.05, 2.05, 41)
G301 = Geometry.square(1, -3, 3, 301)
SQRT2 = np.sqrt(2.0)


@pytest.fixture(scope="module")
def ex_a():
    return run_example("wells")


@pytest.fixture(scope="module")
def ex_b():
    return run_example("cross")


# --------------------------------------------------------------------------- containers


def test_supremand_validation():
    with pytest.raises(ValueError):
        SampledSupremand(G41, np.zeros(10))
    with pytest.raises(ValueError):
        SampledSupremand(G41, np.full(G41.shape, np.nan))
    with pytest.raises(ValueError):
        LevelSchedule(())
    with pytest.raises(ValueError):
        LevelSchedule((0.0, 0.0))


def test_value_lookup_outside_grid():
    W = sample_closed_form("ex_a_W", G41)
    with pytest.raises(ValueError):
        W.value_at([5.0], [0.0])


def test_refined_schedule():
    s = LevelSchedule((0.0, 1.0, 2.0))
    assert s.refined().levels == (0.0, 0.5, 1.0, 1.5, 2.0)
    assert s.gap == 1.0


# --------------------------------------------------------------------------- sublevel sets


def test_sublevel_examples():
    W = sample_closed_form("ex_a_W", G41)
    L0 = sublevel(W, 0.0)
    assert L0.count == 4
    assert all(L0.contains(np.array([a]), np.array([b])) for a in (-1, 1) for b in (-1, 1))
    assert sublevel(W, -1.0).count == 0
    # independent count of centres within 0.5 of a well
    c = G41.centers(0)
    ref = sum(1 for x in c for z in c
              if min(np.hypot(x - a, z - b) for a in (-1, 1) for b in (-1, 1)) <= 0.5 + 1e-9)
    assert sublevel(W, 0.5).count == ref


def test_hat_supremand_examples():
    Wh = hat_supremand(sample_closed_form("ex_a_W", G41))
    assert np.isclose(Wh.value_at([1.0], [0.0]), SQRT2)
    assert Wh.value_at([1.0], [1.0]) == 0.0


@pytest.mark.parametrize("c", [0.25, 0.5, 1.0])
def test_level_sets_of_hat_are_hatted_level_sets(c):
    W = sample_closed_form("ex_a_W", G41)
    assert sublevel(hat_supremand(W), c).equals(hat(sublevel(W, c)))


def test_hat_supremand_matches_closed_form():
    Wh = hat_supremand(sample_closed_form("ex_a_W", G41))
    ref = sample_closed_form("ex_a_hat", G41)
    assert np.allclose(Wh.values, ref.values)


def test_hat_needs_square_geometry():
    g = Geometry(1, (0, 0), (1, 2), (4, 4))
    from nlsup.errors import PreconditionError
    with pytest.raises(PreconditionError):
        hat_supremand(SampledSupremand(g, np.zeros((4, 4))))


# --------------------------------------------------------------------------- envelopes


def test_envelope_example_a(ex_a):
    S = ex_a.fields["W_slc"]
    tol = S.meta["level_gap"] + 2 * float(G301.h[0]) * SQRT2
    assert abs(S.value_at([2.0], [0.0]) - SQRT2) <= tol
    assert abs(S.value_at([0.0], [0.0])) <= tol
    assert S.meta["exact"]


def test_envelope_example_b(ex_b):
    S = ex_b.fields["W_slc"]
    assert abs(S.values.min() - 1 / SQRT2) <= S.meta["level_gap"]


def test_envelope_marks_cells_above_schedule():
    W = sample_closed_form("ex_a_W", G41)
    S = slc_envelope(W, LevelSchedule((0.0, 0.5)))
    assert np.isinf(S.values).any()
    assert set(np.unique(S.values[np.isfinite(S.values)])) <= {0.0, 0.5}


def test_untrusted_schedule_rejected():
    W = sample_closed_form("ex_a_W", G41)
    with pytest.raises(UntrustedScheduleError):
        slc_envelope(W, LevelSchedule((0.0, 10.0)))
    with pytest.raises(UntrustedScheduleError):
        slc_envelope(SampledSupremand(G41, np.zeros(G41.shape)))


def test_m2_envelope_is_a_candidate():
    g = Geometry.square(2, -1.5, 1.5, 7)
    W = SampledSupremand.from_function(g, closed_form("ex_c_W"))
    S = slc_envelope(W, default_schedule(hat_supremand(W), 4))
    assert not S.meta["exact"] and S.meta["note"] == "candidate envelope"


# --------------------------------------------------------------------------- closed forms


def test_closed_form_examples():
    assert np.isclose(closed_form_library("ex_a_slc", (1, 1.5)), SQRT2 * 0.5)
    assert closed_form_library("ex_a_W", (1, 1.5)) == 0.5
    assert np.isclose(closed_form_library("ex_b_slc", (0, 0)), 1 / SQRT2)
    assert closed_form_library("ex_a_slc", (0.5, -0.5)) == 0.0
    assert np.isclose(closed_form_library("ex_a_hat", (1, 0)), SQRT2)
    a = [0.5, 0.0]
    assert closed_form_library("ex_c_W", ([0.5, 0.0], a)) == 0.0
    assert closed_form_library("ex_d_W", ([0.5, 0.0], [-0.5, 0.0])) == 0.0
    with pytest.raises(ValueError):
        closed_form_library("nope", (0, 0))


def test_closed_form_b_continuity_at_half():
    # both branches give 1/sqrt(2) on the square of radius 1/2
    assert np.isclose(closed_form_library("ex_b_slc", (0.5, 0.2)), 1 / SQRT2)
    assert np.isclose(closed_form_library("ex_b_slc", (1.0, 0.0)), 1.0)


# --------------------------------------------------------------------------- coercivity


def test_coercivity_of_distance_to_K6():
    W = sample_closed_form("ex_a_W", G301)
    h = float(G301.h[0])
    rep = coercivity_report(W)
    # nearest boundary cell to a well sits 2 - h/2 away
    assert abs(rep.boundary_min - (2 - h / 2)) < h
    rep_hat = coercivity_report(hat_supremand(W))
    assert 2 * SQRT2 - 3 * h < rep_hat.trusted_max < 2 * SQRT2


def test_coercivity_constant_and_K5():
    assert coercivity_report(SampledSupremand(G41, np.zeros(G41.shape))).trusted_max == -np.inf
    rep = coercivity_report(sample_closed_form("ex_b_W", G301))
    assert rep.coercive and rep.trusted_max > 0


# --------------------------------------------------------------------------- properties


@st.composite
def coercive_supremands(draw):
    n = draw(st.integers(5, 10))
    inner = draw(arrays(np.float64, (n, n), elements=st.integers(0, 8).map(float)))
    v = np.full((n, n), 10.0)
    v[1:-1, 1:-1] = inner[1:-1, 1:-1]
    return SampledSupremand(Geometry.square(1, -1, 1, n), v)


@given(coercive_supremands())
def test_hat_dominates_and_is_symmetric(W):
    Wh = hat_supremand(W)
    assert (Wh.values >= W.values).all()
    assert np.array_equal(Wh.values, Wh.values.T)


def _schedule(Wh):
    return default_schedule(Wh, 8)


@settings(deadline=None)
@given(coercive_supremands())
def test_envelope_below_hat_and_hat_invariant(W):
    Wh = hat_supremand(W)
    sched = _schedule(Wh)
    S = slc_envelope(Wh, sched, apply_hat=False)
    fin = Wh.values <= sched.levels[-1]
    assert (S.values[fin] <= Wh.values[fin] + sched.gap).all()
    assert np.array_equal(hat_supremand(S).values, S.values)


@settings(deadline=None)
@given(coercive_supremands(), st.data())
def test_envelope_is_separately_level_convex(W, data):
    S = slc_envelope(W, _schedule(hat_supremand(W)))
    v = S.values
    n = v.shape[0]
    idx = st.integers(0, n - 1)
    i1, i2, j1, j2 = (data.draw(idx) for _ in range(4))
    k = data.draw(st.integers(min(i1, i2), max(i1, i2)))
    l = data.draw(st.integers(min(j1, j2), max(j1, j2)))
    corners = max(v[i1, j1], v[i1, j2], v[i2, j1], v[i2, j2])
    assert v[k, l] <= corners + S.meta["level_gap"]


@settings(deadline=None)
@given(coercive_supremands())
def test_level_consistency(W):
    Wh = hat_supremand(W)
    sched = _schedule(Wh)
    S = slc_envelope(Wh, sched, apply_hat=False)
    for c in sched.levels:
        hull = sc_hull_grid(sublevel(Wh, c)).hull
        assert sublevel(S, c).equals(hull)
    # between scheduled levels the sublevel set is sandwiched by the neighbouring hulls
    for lo, hi in zip(sched.levels, sched.levels[1:]):
        mid = 0.5 * (lo + hi)
        inner = sc_hull_grid(sublevel(Wh, lo)).hull.occupancy
        outer = sc_hull_grid(sublevel(Wh, hi)).hull.occupancy
        got = sublevel(S, mid).occupancy
        assert not (inner & ~got).any() and not (got & ~outer).any()


@settings(deadline=None)
@given(coercive_supremands())
def test_refining_the_schedule(W):
    Wh = hat_supremand(W)
    sched = _schedule(Wh)
    coarse = slc_envelope(Wh, sched, apply_hat=False).values
    fine = slc_envelope(Wh, sched.refined(), apply_hat=False).values
    fin = np.isfinite(coarse)
    assert np.isfinite(fine[fin]).all()
    assert (fine[fin] <= coarse[fin]).all()
    assert (coarse[fin] - fine[fin] <= sched.gap + 1e-12).all()


def test_sublevel_grid_type():
    W = sample_closed_form("ex_a_W", G41)
    assert isinstance(sublevel(W, 0.3), LatticeGrid)
