#!/usr/bin/env python3
"""
Tests for links.py
Interval links for orderable targets and projection links from the atlas
"""

import json
import sys

import numpy as np
import pytest

try:
    # Try relative import first (when used as package module)
    from .config import OptimizerConfig
    from .elicitation import build_atlas, check_link_ie
    from .errors import IERequired, InvalidInput, NotOrderable, StrongIERequired, exit_code_for
    from .links import (
        ASCENDING,
        DESCENDING,
        IntervalLink,
        ProjectionLink,
        build_interval_link,
        build_projection_link,
        load_link,
        sign_link,
    )
    from .surrogates import CESurrogate, OrdinalHuberSurrogate, SmoothCuspSurrogate, minimize
    from .targets import abstain, ce_target, gamma, ordinal, zero_one
except ImportError:
    # Fall back to absolute import (when run standalone)
    from config import OptimizerConfig
    from elicitation import build_atlas, check_link_ie
    from errors import IERequired, InvalidInput, NotOrderable, StrongIERequired, exit_code_for
    from links import (
        ASCENDING,
        DESCENDING,
        IntervalLink,
        ProjectionLink,
        build_interval_link,
        build_projection_link,
        load_link,
        sign_link,
    )
    from surrogates import CESurrogate, OrdinalHuberSurrogate, SmoothCuspSurrogate, minimize
    from targets import abstain, ce_target, gamma, ordinal, zero_one


def test_interval_link_lookup():
    link = IntervalLink([(-1.0, -0.5), (2.0, 2.0)], [0, 1, 2], [0, 1])
    assert link.apply(-3.0) == 0
    assert link.apply(-0.75) == 0
    assert link.apply(-0.5) == 0
    assert link.apply(0.0) == 1
    assert link.apply(2.0) == 1
    assert link.apply(2.5) == 2
    assert link.report_sequence() == [0, 1, 2]


def test_interval_link_validation():
    with pytest.raises(InvalidInput):
        IntervalLink([(1.0, 0.0)], [0, 1], [0])
    with pytest.raises(InvalidInput):
        IntervalLink([(0.0, 1.0), (0.5, 2.0)], [0, 1, 2], [0, 1])
    with pytest.raises(InvalidInput):
        IntervalLink([(0.0, 0.0)], [0], [0])


def test_ordinal_huber_interval_link():
    t = ordinal(3)
    link = build_interval_link(OrdinalHuberSurrogate(), t)
    assert link.orientation == DESCENDING
    np.testing.assert_allclose(link.boundaries, [(-1.0, -1.0), (1.0, 1.0)], atol=1e-6)
    assert link.region_reports == [2, 1, 0]
    assert link.apply(-2.0) == 2
    assert link.apply(0.0) == 1
    assert link.apply(1.5) == 0
    assert not check_link_ie(build_atlas(OrdinalHuberSurrogate(), t, 0.1), t, link).violated


def test_smooth_cusp_interval_link():
    t = abstain()
    link = build_interval_link(SmoothCuspSurrogate(), t)
    assert link.orientation == ASCENDING
    np.testing.assert_allclose(link.boundaries, [(-0.5, -0.5), (0.5, 0.5)], atol=1e-6)
    assert [t.label(r) for r in link.region_reports] == ["-1", "⊥", "+1"]


def test_interval_link_preconditions():
    with pytest.raises(NotOrderable) as info:
        build_interval_link(OrdinalHuberSurrogate(), zero_one(3))
    assert exit_code_for(info.value) == 4
    with pytest.raises(InvalidInput):
        build_interval_link(CESurrogate(), ce_target(3))


def test_sign_link():
    t = abstain()
    link = sign_link(t)
    assert t.label(link.apply(-0.1)) == "-1"
    assert t.label(link.apply(0.0)) == "⊥"
    assert t.label(link.apply(0.1)) == "+1"
    with pytest.raises(InvalidInput):
        sign_link(ordinal(3))


def test_projection_link_modes():
    s = CESurrogate()
    strong_target = ce_target(3)
    atlas = build_atlas(s, strong_target, 0.1)
    link = build_projection_link(s, strong_target, atlas, "strong")
    assert link.apply([0.0, 0.0]) == 1
    assert link.apply([-0.5, -1.0]) == 0
    with pytest.raises(InvalidInput):
        build_projection_link(s, strong_target, atlas, "loose")

    ie_target = ce_target(2)
    atlas = build_atlas(s, ie_target, 0.1)
    with pytest.raises(StrongIERequired):
        build_projection_link(s, ie_target, atlas, "strong")
    forced = build_projection_link(s, ie_target, atlas, "ie")
    # the only report optimal on the whole segment
    assert forced.apply([0.0, 0.0]) == 1

    bad_target = ce_target(1)
    with pytest.raises(IERequired):
        build_projection_link(s, bad_target, build_atlas(s, bad_target, 0.1), "ie")

def test_strong_projection_link_recovers_an_optimal_report():
    s, t = CESurrogate(), ce_target(3)
    link = build_projection_link(s, t, build_atlas(s, t, 0.1), "strong")
    cfg = OptimizerConfig(use_analytic=True)
    rng = np.random.default_rng(5)
    for p in rng.dirichlet(np.ones(3), size=25):
        u = minimize(s, p, cfg).representative
        assert link.apply(u) in gamma(t, p, 1e-6)


def test_projection_link_nearest_report():
    link = ProjectionLink(np.array([[0.0], [1.0]]), [0, 1])
    assert not link.exact_on_image
    assert link.apply([0.2]) == 0
    assert link.apply([0.8]) == 1
    with pytest.raises(InvalidInput):
        ProjectionLink(np.array([[0.0], [1.0]]), [0])


def test_load_link():
    interval = IntervalLink([(0.0, 0.0)], [0, 2], [1])
    again = load_link(interval.to_dict())
    assert again.boundaries == interval.boundaries
    nested = load_link({"link": interval.to_dict(), "enumeration": [0, 1, 2]})
    assert nested.boundary_reports == [1]

    proj = load_link(ProjectionLink(np.array([[0.0, 1.0]]), [1]).to_dict())
    assert proj.apply([3.0, 3.0]) == 1
    with pytest.raises(InvalidInput):
        load_link({"type": "table"})


def test_load_link_from_files(tmp_path):
    interval = IntervalLink([(0.0, 0.0)], [0, 2], [1])
    path = tmp_path / "link.json"
    path.write_text(json.dumps(interval.to_dict()))
    assert load_link(str(path)).region_reports == [0, 2]

    with pytest.raises(InvalidInput):
        load_link(str(tmp_path / "missing.json"))
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    with pytest.raises(InvalidInput):
        load_link(str(garbled))
    with pytest.raises(InvalidInput):
        load_link({"type": "interval", "boundaries": [[0.0, 0.0]]})


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
