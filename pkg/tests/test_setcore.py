import numpy as np
import pytest
from hypothesis import given, settings

from nlsup.errors import DimensionError, EmptySetError, PreconditionError
from nlsup.setcore import (
    BoxUnion,
    FinitePairSet,
    Geometry,
    LatticeGrid,
    diagonalize,
    finite_from_grid,
    hat,
    hat_via_bset,
    hausdorff,
    membership,
    projections,
    rasterize,
    same_set,
    section,
    symmetrize,
    transpose,
)
from oracles import box_grid, naive_hat
from strategies import finite_sets, grids_m1, grids_m2

EMPTY = FinitePairSet(np.zeros((0, 2, 1)))


def fs(*pairs):
    return FinitePairSet.from_pairs(list(pairs))


# --------------------------------------------------------------------------- geometry and containers


def test_geometry_cell_centres():
    g = Geometry.square(1, -2.05, 2.05, 41)
    assert np.allclose(g.centers(0)[[0, 20, 40]], [-2.0, 0.0, 2.0])
    assert g.shape == (41, 41)
    assert g.is_square


def test_geometry_validation():
    with pytest.raises(DimensionError):
        Geometry.square(3, 0, 1, 4)
    with pytest.raises(ValueError):
        Geometry.square(1, 1, 0, 4)
    with pytest.raises(ValueError):
        Geometry.square(1, 0, 1, 1)


def test_finite_set_deduplicates_under_tol():
    E = FinitePairSet.from_pairs([(0, 1), (1e-12, 1), (1, 0)])
    assert len(E) == 2
    with pytest.raises(ValueError):
        FinitePairSet.from_pairs([(0, 1)], tol=-1)


def test_finite_set_mixed_dimension_rejected():
    with pytest.raises(DimensionError):
        FinitePairSet(np.zeros((2, 2, 2)), m=1)


def test_lattice_occupancy_size_checked():
    with pytest.raises(DimensionError):
        LatticeGrid(Geometry.square(1, 0, 1, 4), np.zeros(15, dtype=bool))


# --------------------------------------------------------------------------- operators


def test_transpose_examples(K6):
    assert transpose(fs((0, 1))).equals(fs((1, 0)))
    assert transpose(K6).equals(K6)
    B = BoxUnion.from_pairs([(0, 1)])
    assert same_set(transpose(B), B)


def test_symmetrize_examples(grid41):
    assert len(symmetrize(fs((0, 1)))) == 0
    E = fs((0, 1), (1, 0))
    assert symmetrize(E).equals(E)
    K1 = box_grid(grid41, (-2, 2), (-1, 1))
    assert symmetrize(K1).equals(box_grid(grid41, (-1, 1), (-1, 1)))


def test_diagonalize_examples(K5, K6):
    assert len(diagonalize(K5)) == 0
    assert diagonalize(K6).equals(K6)
    assert len(diagonalize(EMPTY)) == 0


def test_hat_examples(K5, K6, grid41):
    K1 = box_grid(grid41, (-2, 2), (-1, 1))
    assert hat(K1).equals(box_grid(grid41, (-1, 1), (-1, 1)))
    assert len(hat(K5)) == 0
    assert hat(K6).equals(K6)


def test_hat_of_partial_diagonal():
    # (0, 1) survives only together with (1, 0), (0, 0) and (1, 1)
    E = fs((0, 1), (1, 0), (0, 0), (2, 2), (0, 2))
    assert hat(E).equals(fs((0, 0), (2, 2)))


def test_grid_operators_need_square_geometry():
    g = Geometry(1, (0, 0), (1, 2), (4, 4))
    with pytest.raises(PreconditionError):
        hat(LatticeGrid.empty(g))


def test_membership_examples(K6):
    assert membership(BoxUnion.from_pairs([(-1, 1)]), (0.5, -0.3))
    assert not membership(K6, (0, 0))
    g = Geometry.square(1, -1, 1, 21)
    full = LatticeGrid(g, np.ones(g.shape, dtype=bool))
    assert not membership(full, (2, 0))
    assert membership(full, (0.3, -0.9))
    with pytest.raises(DimensionError):
        membership(K6, np.zeros((2, 2)))


def test_box_union_segment_membership_m2():
    B = BoxUnion.from_pairs(np.array([[[0, 0], [1, 1]]]), m=2)
    assert membership(B, [[0.25, 0.25], [0.75, 0.75]])
    assert not membership(B, [[0.25, 0.3], [0.75, 0.75]])


def test_hausdorff_examples():
    assert hausdorff(np.array([0.0]), np.array([1.0])) == 2.0
    A = np.array([0.0, 0.5, 2.0])
    assert hausdorff(A, A) == 0.0
    # sup_{a in {0,1}} dist(a, {0}) = 1, and the other direction is 0
    assert hausdorff(np.array([0.0, 1.0]), np.array([0.0])) == 1.0
    with pytest.raises(EmptySetError):
        hausdorff(np.zeros(0), np.array([1.0]))


def test_rasterize_examples(K6):
    g = Geometry.square(1, -2, 2, 41)
    assert rasterize(K6, g).count == 4
    # centres -1.9524 + 0.09756 k lying in [-1, 1]: k = 10..30
    assert rasterize(BoxUnion.from_pairs([(-1, 1)]), g).count == 21 * 21
    assert rasterize(EMPTY, g).count == 0
    with pytest.raises(ValueError):
        rasterize(fs((3, 0)), g)


def test_projections_and_sections(K5, K6, grid41):
    p = projections(K5)
    assert np.allclose(p.first[:, 0], [-1, 0, 1])
    assert np.allclose(section(K6, 1)[:, 0], [-1, 1])
    sq = box_grid(grid41, (-1, 1), (-1, 1))
    row = section(sq, 0.0)
    assert len(row) == 21 and np.isclose(row.min(), -1) and np.isclose(row.max(), 1)
    assert len(section(sq, 1.5)) == 0


def test_finite_from_grid_roundtrip(K6, grid41):
    back = finite_from_grid(rasterize(K6, grid41))
    assert back.equals(K6) or hausdorff(back, K6) < 1e-9


# --------------------------------------------------------------------------- properties


@given(finite_sets())
def test_hat_idempotent_finite(E):
    assert hat(hat(E)).equals(hat(E))


@given(grids_m1())
def test_hat_idempotent_grid(E):
    assert hat(hat(E)).equals(hat(E))


@given(finite_sets())
def test_hat_inclusions(E):
    H, S, D = hat(E), symmetrize(E), diagonalize(E)
    assert H.issubset(S) and S.issubset(E) and H.issubset(D)


@given(finite_sets())
def test_hat_commutes_with_transpose(E):
    assert hat(transpose(E)).equals(hat(E))


@given(finite_sets())
def test_hat_matches_loop_oracle(E):
    ref = naive_hat([tuple(p[:, 0]) for p in E.points])
    assert hat(E).equals(FinitePairSet.from_pairs(ref) if ref else EMPTY)


@given(finite_sets())
def test_bset_form_finite(E):
    assert hat_via_bset(E).equals(hat(E))


@given(grids_m1())
def test_bset_form_grid_m1(E):
    assert hat_via_bset(E).equals(hat(E))


@settings(max_examples=30)
@given(grids_m2())
def test_bset_form_grid_m2(E):
    assert hat_via_bset(E).equals(hat(E))
    assert hat(hat(E)).equals(hat(E))


@given(finite_sets(), finite_sets())
def test_hausdorff_zero_iff_equal(A, B):
    if len(A) == 0 or len(B) == 0:
        return
    d = hausdorff(A, B)
    assert (d == 0) == A.equals(B)
    assert d == hausdorff(B, A)
