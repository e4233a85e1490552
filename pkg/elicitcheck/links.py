"""
Link functions from surrogate predictions to target reports

IntervalLink is the step link of a 1-d surrogate for an orderable target.
ProjectionLink labels each prediction from the corners of its level set and
falls back to the nearest sampled optimal report off the optimal-report image.
"""

import bisect
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from .config import OptimizerConfig, Tolerances
from .elicitation import ReportAtlas, check_ie, check_strong_ie
from .errors import (
    BoundaryLevelSetMismatch,
    IERequired,
    InvalidInput,
    NonDifferentiable,
    NotOrderable,
    StrongIERequired,
)
from .logger import get_logger
from .surrogates import SurrogateLoss, level_set, minimize
from .targets import TargetLoss, boundary, gamma, orderability, validate_nonredundant

ASCENDING = "ascending"
DESCENDING = "descending"


@dataclass
class IntervalLink:
    """Step link on R: regions between boundary intervals map to consecutive reports

    boundaries are sorted and disjoint; region i lies left of boundary i.
    """

    boundaries: List[Tuple[float, float]]
    region_reports: List[int]
    boundary_reports: List[int]
    orientation: str = ASCENDING

    def __post_init__(self):
        self.boundaries = [(float(a), float(b)) for a, b in self.boundaries]
        if len(self.region_reports) != len(self.boundaries) + 1:
            raise InvalidInput("interval link needs one more region than boundaries")
        if len(self.boundary_reports) != len(self.boundaries):
            raise InvalidInput("interval link needs one report per boundary")
        for a, b in self.boundaries:
            if a > b:
                raise InvalidInput(f"boundary interval [{a}, {b}] is reversed")
        for (_, b), (a, _) in zip(self.boundaries, self.boundaries[1:]):
            if not b < a:
                raise InvalidInput("boundary intervals must be sorted and disjoint")
        self._lefts = [a for a, _ in self.boundaries]

    def apply(self, u) -> int:
        x = float(np.atleast_1d(np.asarray(u, dtype=float))[0])
        idx = bisect.bisect_right(self._lefts, x) - 1
        if idx >= 0 and x <= self.boundaries[idx][1]:
            return self.boundary_reports[idx]
        return self.region_reports[idx + 1]

    def report_sequence(self) -> List[int]:
        return list(self.region_reports)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "interval",
            "boundaries": [list(b) for b in self.boundaries],
            "region_reports": list(self.region_reports),
            "boundary_reports": list(self.boundary_reports),
            "orientation": self.orientation,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IntervalLink":
        return cls(
            boundaries=[tuple(b) for b in data["boundaries"]],
            region_reports=[int(r) for r in data["region_reports"]],
            boundary_reports=[int(r) for r in data["boundary_reports"]],
            orientation=data.get("orientation", ASCENDING),
        )


def build_interval_link(
    s: SurrogateLoss,
    t: TargetLoss,
    tol: Optional[Tolerances] = None,
    cfg: Optional[OptimizerConfig] = None,
) -> IntervalLink:
    """Boundary intervals from optimal reports at relint points of consecutive cell boundaries"""
    tol = tol or Tolerances()
    if s.d != 1:
        raise InvalidInput(f"interval links need a 1-d surrogate, {s.name} has d = {s.d}")
    cert = orderability(t, tol.lp_margin)
    if not cert.ordered:
        raise NotOrderable(cert.intersection_edges)
    enum = list(cert.enumeration)
    witnesses = validate_nonredundant(t, tol.lp_margin)

    u_first = float(minimize(s, witnesses[enum[0]], cfg).representative[0])
    u_last = float(minimize(s, witnesses[enum[-1]], cfg).representative[0])
    orientation = ASCENDING if u_first < u_last else DESCENDING

    intervals: List[Tuple[float, float]] = []
    for j in range(len(enum) - 1):
        r, q = enum[j], enum[j + 1]
        p = cert.edge_witnesses[(min(r, q), max(r, q))]
        best = minimize(s, p, cfg)
        rep = best.representative
        interval = best.interval or (float(rep[0]), float(rep[0]))
        section = level_set(s, rep, tol.rank_tol)
        distance = section.hausdorff(boundary(t, r, q))
        if distance > tol.hausdorff_tol:
            raise BoundaryLevelSetMismatch(j, distance, f"reports {t.label(r)} / {t.label(q)}")
        intervals.append(interval)

    reports = enum
    bounds = [min(enum[j], enum[j + 1]) for j in range(len(enum) - 1)]
    if orientation == DESCENDING:
        intervals, reports, bounds = intervals[::-1], reports[::-1], bounds[::-1]
    for j, ((_, b), (a, _)) in enumerate(zip(intervals, intervals[1:])):
        if not b < a:
            raise BoundaryLevelSetMismatch(j, 0.0, "boundary intervals overlap or are out of order")

    link = IntervalLink(intervals, reports, bounds, orientation)
    get_logger().log_info(
        f"interval link {s.name} -> {t.name}: {orientation}, boundaries {link.boundaries}"
    )
    return link


def sign_link(t: TargetLoss) -> IntervalLink:
    """u < 0 -> "-1", u = 0 -> abstain, u > 0 -> "+1" for the abstain target"""
    return IntervalLink(
        [(0.0, 0.0)],
        [t.index_of("-1"), t.index_of("+1")],
        [t.index_of("⊥")],
        ASCENDING,
    )


class ProjectionLink:
    """Link from level-set corners on the optimal-report image, nearest sampled report off it"""

    def __init__(
        self,
        reports: np.ndarray,
        labels: Sequence[int],
        surrogate: Optional[SurrogateLoss] = None,
        target: Optional[TargetLoss] = None,
        exact_on_image: bool = True,
        tol: Optional[Tolerances] = None,
    ):
        self.reports = np.atleast_2d(np.asarray(reports, dtype=float))
        self.labels = [int(r) for r in labels]
        if len(self.reports) != len(self.labels) or not self.labels:
            raise InvalidInput("projection link needs one label per sampled report")
        self.surrogate = surrogate
        self.target = target
        self.exact_on_image = exact_on_image and surrogate is not None and target is not None
        self.tol = tol or Tolerances()
        self._tree = cKDTree(self.reports)

    def _from_level_set(self, x: np.ndarray) -> Optional[int]:
        try:
            section = level_set(self.surrogate, x, self.tol.rank_tol)
        except NonDifferentiable:
            return None
        if section.is_empty:
            return None
        common = None
        for c in section.vertices:
            g = gamma(self.target, c, self.tol.corner_tie_tol)
            common = g if common is None else common & g
        return min(common) if common else None

    def apply(self, u) -> int:
        x = np.atleast_1d(np.asarray(u, dtype=float)).reshape(-1)
        if self.exact_on_image:
            r = self._from_level_set(x)
            if r is not None:
                return r
        _, idx = self._tree.query(x)
        return self.labels[int(idx)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "projection",
            "reports": self.reports.tolist(),
            "labels": self.labels,
            "exact_on_image": self.exact_on_image,
        }

    @classmethod
    def from_dict(
        cls,
        data: Dict[str, Any],
        surrogate: Optional[SurrogateLoss] = None,
        target: Optional[TargetLoss] = None,
    ) -> "ProjectionLink":
        return cls(
            np.asarray(data["reports"], dtype=float),
            data["labels"],
            surrogate,
            target,
            exact_on_image=bool(data.get("exact_on_image", True)),
        )


def build_projection_link(
    s: SurrogateLoss,
    t: TargetLoss,
    atlas: ReportAtlas,
    mode: str = "strong",
    tol: Optional[Tolerances] = None,
) -> ProjectionLink:
    """Label every atlas report with the smallest report common to its corners

    mode "strong" requires a strong IE verdict without violations; mode "ie"
    only requires IE and yields the forced link of an IE-but-not-strong pair.
    """
    if mode == "strong":
        if check_strong_ie(atlas, t).violated:
            raise StrongIERequired(f"{s.name} violates strong IE for {t.name}")
    elif mode == "ie":
        if check_ie(atlas, t).violated:
            raise IERequired(f"{s.name} violates IE for {t.name}")
    else:
        raise InvalidInput(f"unknown projection link mode {mode!r}")
    labels = [min(entry.common_reports()) for entry in atlas.entries]
    return ProjectionLink(atlas.report_array(), labels, s, t, tol=tol)


def load_link(
    data: Union[str, Dict[str, Any]],
    surrogate: Optional[SurrogateLoss] = None,
    target: Optional[TargetLoss] = None,
):
    """Link from a JSON document or a file path, unwrapping a construct-1d document"""
    if isinstance(data, str):
        try:
            with open(data, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInput(f"cannot read link {data}: {e}") from e
    if not isinstance(data, dict):
        raise InvalidInput("link document must be a JSON object")
    if isinstance(data.get("link"), dict):
        return load_link(data["link"], surrogate, target)
    kind = data.get("type")
    try:
        if kind == "interval":
            return IntervalLink.from_dict(data)
        if kind == "projection":
            return ProjectionLink.from_dict(data, surrogate, target)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"malformed {kind} link: {e}") from e
    raise InvalidInput(f"unknown link type {kind!r}")
