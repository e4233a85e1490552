#!/usr/bin/env python3
"""
Tests for geometry.py
Simplex sections, polytopes, vertex enumeration and the strict LP
"""

import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

try:
    # Try relative import first (when used as package module)
    from .config import Tolerances
    from .errors import DimensionOverflow, InvalidDistribution, InvalidInput
    from .geometry import (
        Distribution,
        Infeasible,
        LinearMapOnSimplex,
        SimplexPolytope,
        enumerate_vertices,
        hull_distance,
        kernel_basis,
        lp_feasible_strict,
        numerical_rank,
        parse_number,
        polytope,
        simplex_grid,
        simplex_section,
    )
except ImportError:
    # Fall back to absolute import (when run standalone)
    from config import Tolerances
    from errors import DimensionOverflow, InvalidDistribution, InvalidInput
    from geometry import (
        Distribution,
        Infeasible,
        LinearMapOnSimplex,
        SimplexPolytope,
        enumerate_vertices,
        hull_distance,
        kernel_basis,
        lp_feasible_strict,
        numerical_rank,
        parse_number,
        polytope,
        simplex_grid,
        simplex_section,
    )


def _sorted_vertices(poly: SimplexPolytope) -> np.ndarray:
    V = poly.vertex_array()
    return V[np.lexsort(V.T[::-1])]


def test_parse_number_accepts_rationals():
    assert parse_number("1/4") == 0.25
    assert parse_number(" 5/6 ") == pytest.approx(5 / 6)
    assert parse_number(2) == 2.0
    with pytest.raises(InvalidInput):
        parse_number("one")
    with pytest.raises(InvalidInput):
        parse_number(True)


def test_distribution_validation():
    with pytest.raises(InvalidDistribution):
        Distribution([0.5, 0.6])
    with pytest.raises(InvalidDistribution):
        Distribution([1.5, -0.5])
    p = Distribution.of(["1/3", "1/3", "1/3"])
    assert p.n == 3
    assert_allclose(p.probs.sum(), 1.0)
    assert p.close_to([1 / 3, 1 / 3, 1 / 3])


@given(st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=2, max_size=6))
def test_distribution_normalized_input_sums_to_one(weights):
    w = np.asarray(weights)
    if w.sum() <= 1e-6:
        return
    p = Distribution(w / w.sum())
    assert abs(p.probs.sum() - 1.0) <= 1e-12
    assert np.all(p.probs >= 0)


def test_numerical_rank_is_relative():
    assert numerical_rank(np.diag([1.0, 1e-12])) == 1
    assert numerical_rank(np.diag([1.0, 1e-3])) == 2
    assert numerical_rank(np.zeros((3, 2))) == 0


def test_kernel_basis_of_single_column():
    m = LinearMapOnSimplex(np.array([1.0, -1.0]))
    K = kernel_basis(m)
    assert K.shape == (2, 1)
    assert_allclose(np.abs(K[:, 0]), [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-12)


def test_kernel_basis_of_zero_map_is_everything():
    m = LinearMapOnSimplex(np.zeros((3, 2)))
    assert_allclose(kernel_basis(m), np.eye(3))


def test_simplex_section_segment():
    # <p, (1, 0, -1)> = 0 on the simplex: the segment from e2 to (1/2, 0, 1/2)
    section = simplex_section(LinearMapOnSimplex(np.array([[1.0], [0.0], [-1.0]])))
    assert section.affine_dimension() == 1
    assert_allclose(_sorted_vertices(section), [[0.0, 1.0, 0.0], [0.5, 0.0, 0.5]], atol=1e-9)
    assert section.contains([0.25, 0.5, 0.25])
    assert not section.contains([0.5, 0.5, 0.0])


def test_simplex_section_of_zero_map_is_simplex():
    section = simplex_section(LinearMapOnSimplex(np.zeros((3, 1))))
    assert len(section.vertices) == 3
    assert section.affine_dimension() == 2


def test_empty_section():
    # all-positive column never vanishes on the simplex
    section = simplex_section(LinearMapOnSimplex(np.array([[1.0], [2.0]])))
    assert section.is_empty
    assert section.affine_dimension() == -1
    with pytest.raises(InvalidInput):
        section.barycenter()


def test_polytope_from_inequalities():
    # p1 <= 1/2 on the 2-simplex
    poly = polytope(2, inequalities=[(np.array([1.0, 0.0]), 0.5)])
    assert_allclose(_sorted_vertices(poly), [[0.0, 1.0], [0.5, 0.5]], atol=1e-9)
    assert_allclose(poly.barycenter().probs, [0.25, 0.75])


def test_hausdorff_and_distance():
    a = polytope(3, equalities=[(np.array([1.0, 0.0, -1.0]), 0.0)])
    b = simplex_section(LinearMapOnSimplex(np.array([[2.0], [0.0], [-2.0]])))
    assert a.hausdorff(b) <= 1e-9
    assert a.distance([0.5, 0.0, 0.5]) <= 1e-9
    assert a.distance([1.0, 0.0, 0.0]) == pytest.approx(np.sqrt(0.5), abs=1e-6)


def test_hull_distance_inside_is_zero():
    V = np.eye(3)
    assert hull_distance(np.array([0.2, 0.3, 0.5]), V) <= 1e-6
    assert hull_distance(np.array([0.0, 0.0]), np.zeros((0, 2))) == float("inf")


def test_hull_distance_is_exact_outside():
    T = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    # nearest point on the hypotenuse
    assert hull_distance(np.array([1.0, 1.0]), T) == pytest.approx(np.sqrt(0.5), abs=1e-12)
    # nearest point is a vertex
    assert hull_distance(np.array([2.0, -1.0]), T) == pytest.approx(np.sqrt(2.0), abs=1e-12)
    for v in T:
        assert hull_distance(v, T) <= 1e-12
    assert hull_distance(np.array([0.25, 0.25]), T) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=2, max_size=2))
def test_hull_distance_matches_segment_projection(xy):
    a, b = np.array([0.0, 0.0]), np.array([1.0, 2.0])
    x = np.asarray(xy)
    s = np.clip(np.dot(x - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
    expected = np.linalg.norm(x - (a + s * (b - a)))
    assert hull_distance(x, np.vstack([a, b])) == pytest.approx(expected, abs=1e-9)


def test_enumeration_refuses_large_n():
    with pytest.raises(DimensionOverflow):
        enumerate_vertices(13)


def test_polytope_dict_round_trip():
    poly = polytope(3, inequalities=[(np.array([1.0, -1.0, 0.0]), 0.0)])
    again = SimplexPolytope.from_dict(poly.to_dict())
    assert again.hausdorff(poly) <= Tolerances().hausdorff_tol
    assert poly.hausdorff(poly) <= 1e-12
    assert len(again.inequalities) == 1


def test_strict_lp_feasible_and_infeasible():
    p = lp_feasible_strict([], [(np.array([1.0, 0.0]), 0.5)])
    assert p
    assert p.probs[0] < 0.5

    none = lp_feasible_strict([], [(np.array([1.0, 0.0]), 0.0)])
    assert isinstance(none, Infeasible)
    assert not none
    assert none.best_slack == pytest.approx(0.0, abs=1e-9)


def test_strict_lp_needs_dimension():
    with pytest.raises(InvalidInput):
        lp_feasible_strict([], [])
    assert lp_feasible_strict([], [], n=3)


def test_simplex_grid_counts():
    grid = simplex_grid(3, 0.5)
    assert grid.shape == (6, 3)
    assert_allclose(grid.sum(axis=1), 1.0)
    with pytest.raises(InvalidInput):
        simplex_grid(3, 3.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=6))
def test_simplex_grid_is_a_lattice(n, steps):
    grid = simplex_grid(n, 1.0 / steps)
    assert_allclose(grid.sum(axis=1), 1.0)
    assert np.all(grid >= 0)
    assert_allclose(grid * steps, np.round(grid * steps), atol=1e-9)
    assert len({tuple(row) for row in np.round(grid * steps).astype(int)}) == len(grid)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
