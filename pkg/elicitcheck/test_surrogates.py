#!/usr/bin/env python3
"""
Tests for surrogates.py
Built-in oracles, the minimizer and the compact-argmin evidence check
"""

import sys
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

try:
    # Try relative import first (when used as package module)
    from .config import OptimizerConfig
    from .errors import InvalidInput, NonDifferentiable
    from .geometry import simplex_grid
    from .surrogates import (
        CallableSurrogate,
        CESurrogate,
        CuspSurrogate,
        OrdinalHuberSurrogate,
        SmoothCuspSurrogate,
        TwoHuberSurrogate,
        UniversalSurrogate,
        expected_hessian,
        expected_loss,
        finite_difference_jacobian,
        jacobian_rank,
        level_set,
        load_surrogate,
        minimize,
        strong_convexity_violation,
        validate_assumption1,
        validate_compact_argmins,
    )
except ImportError:
    # Fall back to absolute import (when run standalone)
    from config import OptimizerConfig
    from errors import InvalidInput, NonDifferentiable
    from geometry import simplex_grid
    from surrogates import (
        CallableSurrogate,
        CESurrogate,
        CuspSurrogate,
        OrdinalHuberSurrogate,
        SmoothCuspSurrogate,
        TwoHuberSurrogate,
        UniversalSurrogate,
        expected_hessian,
        expected_loss,
        finite_difference_jacobian,
        jacobian_rank,
        level_set,
        load_surrogate,
        minimize,
        strong_convexity_violation,
        validate_assumption1,
        validate_compact_argmins,
    )


def _rows(poly) -> np.ndarray:
    V = poly.vertex_array()
    return V[np.lexsort(V.T[::-1])]


def test_smooth_cusp_minimizer():
    best = minimize(SmoothCuspSurrogate(), [0.7, 0.3])
    assert best.is_unique
    assert best.representative[0] == pytest.approx(0.4, abs=1e-8)
    assert not best.analytic


def test_cusp_is_solved_in_closed_form():
    s = CuspSurrogate()
    assert minimize(s, [0.9, 0.1]).representative[0] == pytest.approx(0.3)
    assert minimize(s, [0.1, 0.9]).representative[0] == pytest.approx(-0.3)
    best = minimize(s, [0.5, 0.5])
    assert best.analytic
    assert best.representative[0] == 0.0

    with pytest.raises(NonDifferentiable):
        s.jacobian([0.0])
    section = level_set(s, [0.0])
    assert_allclose(_rows(section), [[0.25, 0.75], [0.75, 0.25]], atol=1e-9)
    with pytest.raises(NonDifferentiable):
        level_set(s, [0.0], analytic=False)


def test_ordinal_huber_flat_argmin():
    best = minimize(OrdinalHuberSurrogate(), [0.5, 0.0, 0.5])
    assert not best.is_unique
    a, b = best.interval
    assert a == pytest.approx(-1.0, abs=1e-6)
    assert b == pytest.approx(1.0, abs=1e-6)
    assert best.opt_value == pytest.approx(1.5, abs=1e-9)


def test_ordinal_huber_unique_argmin():
    best = minimize(OrdinalHuberSurrogate(), [0.2, 0.6, 0.2])
    assert best.is_unique
    assert best.representative[0] == pytest.approx(0.0, abs=1e-8)


def test_two_huber_minimizer():
    best = minimize(TwoHuberSurrogate(1), [0.25, 0.75])
    assert best.representative[0] == pytest.approx(-5.0 / 3.0, abs=1e-6)

    best = minimize(TwoHuberSurrogate(2), [0.25, 0.75])
    assert_allclose(best.representative, [-5.0 / 3.0, 0.0], atol=1e-6)


@pytest.mark.parametrize("s", [OrdinalHuberSurrogate(), TwoHuberSurrogate(1)], ids=lambda s: s.name)
@pytest.mark.parametrize("delta", [1e-3, 1e-5, 1e-7])
def test_huber_minimizer_crosses_linear_pieces_quickly(s, delta):
    # between the Huber knots the expected gradient is only -2 delta
    p = [0.5 + delta, 0.0, 0.5 - delta] if s.n == 3 else [0.5 + delta, 0.5 - delta]
    start = time.perf_counter()
    best = minimize(s, p)
    elapsed = time.perf_counter() - start
    assert best.representative[0] == pytest.approx(2.0 - (0.5 - delta) / (0.5 + delta), abs=1e-6)
    assert elapsed < 1.0


def test_warm_start_and_interval_switch():
    s = OrdinalHuberSurrogate()
    p = [0.3, 0.3, 0.4]
    cold = minimize(s, p)
    warm = minimize(s, p, start=cold.representative + 0.5)
    assert warm.representative[0] == pytest.approx(cold.representative[0], abs=1e-8)

    flat = minimize(s, [0.5, 0.0, 0.5], OptimizerConfig(recover_interval=False))
    assert flat.interval is None
    assert -1.0 <= flat.representative[0] <= 1.0


def test_ce_perturbed_minimizers():
    s = CESurrogate()
    start = time.perf_counter()
    for eps in (0.5, 0.1, 0.01):
        p = [0.5 + eps / 2, 0.0, 0.5 - eps / 2]
        expected = [-eps / (4 - 2 * eps), -eps]
        assert_allclose(minimize(s, p).representative, expected, atol=1e-6)
        assert_allclose(s.analytic_minimizer(np.asarray(p))[0], expected, atol=1e-12)
    assert time.perf_counter() - start < 1.0
    # the perturbed optima approach the origin
    assert np.linalg.norm(minimize(s, [0.5 + 1e-6, 0.0, 0.5 - 1e-6]).representative) < 1e-5


def test_ce_numeric_matches_closed_form():
    s = CESurrogate()
    p = np.array([0.2, 0.3, 0.5])
    numeric = minimize(s, p).representative
    closed, _ = s.analytic_minimizer(p)
    assert_allclose(numeric, closed, atol=1e-8)
    # at the segment p3 = 1/2 the optimum is the origin
    assert_allclose(minimize(s, [0.25, 0.25, 0.5]).representative, [0.0, 0.0], atol=1e-8)


def test_ce_level_set_at_origin_is_a_segment():
    s = CESurrogate()
    section = level_set(s, [0.0, 0.0])
    assert section.affine_dimension() == 1
    assert_allclose(_rows(section), [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5]], atol=1e-9)
    assert jacobian_rank(s, [0.0, 0.0]) == 1
    assert jacobian_rank(s, [0.3, -0.2]) == 2


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=4, max_size=4))
def test_universal_minimizer_is_the_distribution(weights):
    p = np.asarray(weights) / np.sum(weights)
    best = minimize(UniversalSurrogate(4), p)
    assert_allclose(best.representative, p[:3], atol=1e-7)
    section = level_set(UniversalSurrogate(4), best.representative)
    assert section.affine_dimension() == 0
    assert_allclose(section.vertices[0].probs, p, atol=1e-6)


def test_analytic_and_numeric_agree_for_universal():
    s = UniversalSurrogate(3)
    p = [0.1, 0.6, 0.3]
    a = minimize(s, p, OptimizerConfig(use_analytic=True))
    b = minimize(s, p)
    assert a.analytic and not b.analytic
    assert a.opt_value == pytest.approx(b.opt_value, abs=1e-12)


def test_finite_difference_jacobian_agrees():
    s = CESurrogate()
    for u in ([0.0, 0.0], [0.4, -1.2], [-2.0, 3.0]):
        assert_allclose(finite_difference_jacobian(s, u), s.jacobian(np.array(u)), atol=1e-5)

JACOBIAN_CASES = [
    CuspSurrogate,
    SmoothCuspSurrogate,
    CESurrogate,
    OrdinalHuberSurrogate,
    lambda: TwoHuberSurrogate(1),
    lambda: TwoHuberSurrogate(2),
    lambda: UniversalSurrogate(3),
    lambda: UniversalSurrogate(4),
]


@pytest.mark.parametrize("make", JACOBIAN_CASES)
def test_jacobians_match_finite_differences(make):
    s = make()
    rng = np.random.default_rng(7)
    for _ in range(100):
        u = rng.uniform(-3.0, 3.0, size=s.d)
        if s.name == "cusp" and abs(u[0]) < 1e-3:
            continue
        assert_allclose(finite_difference_jacobian(s, u), s.jacobian(u), rtol=1e-5, atol=1e-5)


@pytest.mark.parametrize(
    "s, cfg",
    [
        (OrdinalHuberSurrogate(), OptimizerConfig()),
        (CESurrogate(), OptimizerConfig(use_analytic=True)),
        (UniversalSurrogate(3), OptimizerConfig(use_analytic=True)),
    ],
)
def test_level_sets_match_the_jacobian_equations(s, cfg):
    grid = simplex_grid(3, 1 / 40)
    interior = grid[np.all(grid >= 1 / 40, axis=1)]
    rng = np.random.default_rng(11)
    for p0 in interior[rng.choice(len(interior), size=20, replace=False)]:
        u = minimize(s, p0, cfg).representative
        J = s.jacobian(u)
        section = level_set(s, u)
        assert section.distance(p0) <= 1e-6
        for v in section.vertex_array():
            assert np.all(v >= -1e-9) and abs(v.sum() - 1.0) <= 1e-9
            assert np.linalg.norm(J.T @ v) <= 1e-9 * max(1.0, np.linalg.norm(J))
        for q in grid:
            if np.linalg.norm(J.T @ q) <= 1e-9:
                assert section.distance(q) <= 1e-6


def test_expected_hessian_without_oracle():
    s = CallableSurrogate(
        lambda u: [u[0] ** 2, (u[0] - 1) ** 2],
        lambda u: [[2 * u[0]], [2 * (u[0] - 1)]],
        d=1,
        n=2,
    )
    assert s.hessians(np.array([0.0])) is None
    assert expected_hessian(s, [0.5, 0.5], [0.3])[0, 0] == pytest.approx(2.0, abs=1e-5)
    assert minimize(s, [0.5, 0.5]).representative[0] == pytest.approx(0.5, abs=1e-8)
    with pytest.raises(InvalidInput):
        s.to_dict()


def test_strong_convexity_modulus():
    s = SmoothCuspSurrogate()
    assert strong_convexity_violation(s, [1.0], [-1.0]) <= 1e-12
    assert strong_convexity_violation(CESurrogate(), [0.5, 0.5], [-1.0, 2.0]) <= 1e-12
    with pytest.raises(InvalidInput):
        strong_convexity_violation(OrdinalHuberSurrogate(), [0.0], [1.0])


def test_compact_argmin_evidence():
    for s in (SmoothCuspSurrogate(), OrdinalHuberSurrogate(), TwoHuberSurrogate(1), CESurrogate()):
        assert validate_compact_argmins(s).passed, s.name

    flat = CallableSurrogate(
        lambda u: [u[0] ** 2, 0.0],
        lambda u: [[2 * u[0]], [0.0]],
        d=1,
        n=2,
    )
    report = validate_compact_argmins(flat)
    assert not report.passed
    assert report.components[0].passed
    assert not report.components[1].passed
    assert validate_assumption1 is validate_compact_argmins
    assert not validate_assumption1(flat, probe_radius=2.0).passed


def test_expected_loss_checks_dimensions():
    s = SmoothCuspSurrogate()
    assert expected_loss(s, [0.5, 0.5], [0.0]) == pytest.approx(1.0)
    with pytest.raises(InvalidInput):
        expected_loss(s, [0.2, 0.3, 0.5], [0.0])
    with pytest.raises(InvalidInput):
        expected_loss(s, [0.5, 0.5], [0.0, 1.0])


def test_load_surrogate_specs(tmp_path):
    assert load_surrogate("builtin:universal:4").d == 3
    assert load_surrogate("builtin:huber2:2").d == 2
    assert load_surrogate("builtin:ce").n == 3
    again = load_surrogate(TwoHuberSurrogate(3).to_dict())
    assert isinstance(again, TwoHuberSurrogate) and again.d == 3

    path = tmp_path / "s.json"
    path.write_text('{"builtin": "ordinal_huber"}')
    assert isinstance(load_surrogate(str(path)), OrdinalHuberSurrogate)
    with pytest.raises(InvalidInput):
        load_surrogate("builtin:nope")
    with pytest.raises(InvalidInput):
        load_surrogate(str(tmp_path / "missing.json"))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
