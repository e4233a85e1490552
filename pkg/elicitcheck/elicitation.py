"""
Indirect elicitation (IE) and strong IE checks

The check at a report u looks only at the corners of its level set:
IE holds iff the target optimal sets of the corners share a report, and
strong IE holds iff they are all equal. Reports u are sampled as optimal
reports of a simplex lattice plus the target's cell vertices and boundary
barycenters, so verdicts are qualified by the sampling resolution.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Set, Tuple

import numpy as np

from .config import OptimizerConfig, Tolerances
from .errors import InvalidInput, NoConvergence
from .geometry import Distribution, SimplexPolytope, numerical_rank, simplex_grid
from .logger import get_logger
from .surrogates import SurrogateLoss, level_set, minimize
from .targets import TargetLoss, gamma, special_points

IE = "ie"
STRONG_IE = "sie"


@dataclass
class AtlasEntry:
    p: Distribution
    u: np.ndarray
    gamma_set: Set[int]
    corners: List[Distribution]
    corner_gammas: List[Set[int]]
    rank: Optional[int] = None  # Jacobian rank at u, None at kinks
    affdim: int = 0  # affine dimension of the level set
    degenerate: bool = False  # empty computed level set, corners fall back to p

    def common_reports(self) -> Set[int]:
        out = set(self.corner_gammas[0])
        for g in self.corner_gammas[1:]:
            out &= g
        return out


@dataclass
class ReportAtlas:
    """Sampled optimal reports with their level-set corners"""

    entries: List[AtlasEntry]
    resolution: float
    surrogate_name: str = ""
    target_name: str = ""

    def report_array(self) -> np.ndarray:
        if not self.entries:
            return np.zeros((0, 0))
        return np.vstack([e.u for e in self.entries])

    def max_affdim(self) -> int:
        return max((e.affdim for e in self.entries), default=-1)

    def degenerate_entries(self) -> List[AtlasEntry]:
        return [e for e in self.entries if e.degenerate]


@dataclass
class ViolationCertificate:
    """Report u and two level-set corners whose target optimal sets conflict"""

    u: np.ndarray
    corners: List[Distribution]
    corner_gammas: List[Set[int]]
    pair: Tuple[int, int] = (0, 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "u": [float(x) for x in self.u],
            "corners": [c.to_list() for c in self.corners],
            "corner_gammas": [sorted(g) for g in self.corner_gammas],
            "pair": list(self.pair),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ViolationCertificate":
        return cls(
            u=np.asarray(data["u"], dtype=float),
            corners=[Distribution(c) for c in data["corners"]],
            corner_gammas=[set(g) for g in data["corner_gammas"]],
            pair=tuple(data.get("pair", (0, 1))),
        )


@dataclass
class ElicitationVerdict:
    claim: str
    violated: bool
    resolution: float
    entries_checked: int
    certificate: Optional[ViolationCertificate] = None
    degenerate_entries: int = 0

    @property
    def status(self) -> str:
        if self.violated:
            return "violated"
        return f"no_violation_found({self.resolution:g})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "claim": self.claim,
            "status": self.status,
            "violated": self.violated,
            "resolution": self.resolution,
            "entries_checked": self.entries_checked,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "degenerate_entries": self.degenerate_entries,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ElicitationVerdict":
        cert = data.get("certificate")
        return cls(
            claim=data["claim"],
            violated=bool(data["violated"]),
            resolution=float(data["resolution"]),
            entries_checked=int(data["entries_checked"]),
            certificate=ViolationCertificate.from_dict(cert) if cert else None,
            degenerate_entries=int(data.get("degenerate_entries", 0)),
        )


def _entry(
    s: SurrogateLoss,
    t: TargetLoss,
    p: Distribution,
    u: np.ndarray,
    tol: Tolerances,
) -> AtlasEntry:
    section = level_set(s, u, tol.rank_tol)
    corners = list(section.vertices)
    degenerate = not corners
    if degenerate:
        # p is optimal at u, so the exact level set is nonempty
        get_logger().log_warning(
            f"{s.name}: empty level set at u = {[float(x) for x in np.atleast_1d(u)]} "
            f"(optimal at p = {p.to_list()}), entry marked degenerate"
        )
        corners = [p]
        affdim = 0
    else:
        affdim = section.affine_dimension()
    rank = None if s.is_kink(u) else numerical_rank(s.jacobian(u), tol.rank_tol)
    return AtlasEntry(
        p=p,
        u=np.asarray(u, dtype=float),
        gamma_set=gamma(t, p, tol.tie_tol),
        corners=corners,
        corner_gammas=[gamma(t, c, tol.corner_tie_tol) for c in corners],
        rank=rank,
        affdim=affdim,
        degenerate=degenerate,
    )


def atlas_points(t: TargetLoss, resolution: float) -> List[Distribution]:
    points = [Distribution(x) for x in simplex_grid(t.n, resolution)]
    for q in special_points(t):
        if not any(q.close_to(x, 1e-12) for x in points):
            points.append(q)
    return points


def build_atlas(
    s: SurrogateLoss,
    t: TargetLoss,
    resolution: float = 0.05,
    tol: Optional[Tolerances] = None,
    cfg: Optional[OptimizerConfig] = None,
) -> ReportAtlas:
    """Optimal reports, level-set corners and corner target sets over sampled distributions"""
    tol = tol or Tolerances()
    cfg = cfg or OptimizerConfig()
    if s.n != t.n:
        raise InvalidInput(f"surrogate has {s.n} outcomes, target has {t.n}")
    logger = get_logger()
    entries: List[AtlasEntry] = []
    for p in atlas_points(t, resolution):
        try:
            best = minimize(s, p, cfg)
        except NoConvergence as e:
            raise NoConvergence(e.max_iters, p.to_list(), str(e)) from e
        reports = [best.representative]
        if best.interval is not None:
            a, b = best.interval
            reports += [np.array([a]), np.array([0.5 * (a + b)]), np.array([b])]
        for u in reports:
            entries.append(_entry(s, t, p, u, tol))
    atlas = ReportAtlas(entries, resolution, s.name, t.name)
    degenerate = len(atlas.degenerate_entries())
    if degenerate:
        logger.log_warning(f"atlas {s.name} x {t.name}: {degenerate} of {len(entries)} entries are degenerate")
    logger.log_debug(f"atlas {s.name} x {t.name}: {len(entries)} entries at resolution {resolution:g}")
    return atlas


def _ie_conflict(entry: AtlasEntry) -> Optional[Tuple[int, int]]:
    if entry.common_reports():
        return None
    # name a disjoint pair when there is one
    gs = entry.corner_gammas
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if not gs[i] & gs[j]:
                return (i, j)
    return (0, len(gs) - 1)


def _sie_conflict(entry: AtlasEntry) -> Optional[Tuple[int, int]]:
    gs = entry.corner_gammas
    for j in range(1, len(gs)):
        if gs[j] != gs[0]:
            return (0, j)
    return None


def _check(atlas: ReportAtlas, claim: str, conflict) -> ElicitationVerdict:
    degenerate = len(atlas.degenerate_entries())
    for entry in atlas.entries:
        pair = conflict(entry)
        if pair is not None:
            verdict = ElicitationVerdict(
                claim,
                True,
                atlas.resolution,
                len(atlas.entries),
                ViolationCertificate(entry.u, entry.corners, entry.corner_gammas, pair),
                degenerate,
            )
            get_logger().log_verdict(verdict)
            return verdict
    verdict = ElicitationVerdict(claim, False, atlas.resolution, len(atlas.entries), None, degenerate)
    get_logger().log_verdict(verdict)
    return verdict


def check_ie(atlas: ReportAtlas, t: TargetLoss) -> ElicitationVerdict:
    """IE holds at u iff the corner target sets of its level set intersect"""
    return _check(atlas, IE, _ie_conflict)


def check_strong_ie(atlas: ReportAtlas, t: TargetLoss) -> ElicitationVerdict:
    """Strong IE holds at u iff all corners of its level set share one target set"""
    return _check(atlas, STRONG_IE, _sie_conflict)


def entry_satisfies(entry: AtlasEntry, claim: str) -> bool:
    conflict = _ie_conflict if claim == IE else _sie_conflict
    return conflict(entry) is None


def replay_certificate(
    s: SurrogateLoss,
    t: TargetLoss,
    verdict: ElicitationVerdict,
    tol: Optional[Tolerances] = None,
    membership_tol: float = 1e-8,
) -> bool:
    """Recompute the level set and corner target sets and confirm the conflict"""
    tol = tol or Tolerances()
    cert = verdict.certificate
    if cert is None:
        return False
    section = level_set(s, cert.u, tol.rank_tol)
    for c in cert.corners:
        if section.is_empty or section.distance(c) > membership_tol:
            return False
    gammas = [gamma(t, c, tol.corner_tie_tol) for c in cert.corners]
    i, j = cert.pair
    if verdict.claim == IE:
        common = set(gammas[0])
        for g in gammas[1:]:
            common &= g
        return not common
    return gammas[i] != gammas[j]


def level_set_bundle(
    s: SurrogateLoss,
    p,
    cfg: Optional[OptimizerConfig] = None,
    samples: int = 32,
    rank_tol: float = 1e-9,
) -> List[SimplexPolytope]:
    """Level sets over the optimal report set at p (sampled when it is an interval)"""
    best = minimize(s, p, cfg)
    if best.interval is None:
        return [level_set(s, best.representative, rank_tol)]
    a, b = best.interval
    return [level_set(s, np.array([u]), rank_tol) for u in np.linspace(a, b, samples)]


def check_link_ie(atlas: ReportAtlas, t: TargetLoss, link) -> ElicitationVerdict:
    """A given link satisfies IE iff link(u) is optimal at every corner of every sampled level set"""
    for entry in atlas.entries:
        r = link.apply(entry.u)
        for idx, g in enumerate(entry.corner_gammas):
            if r not in g:
                verdict = ElicitationVerdict(
                    "link_ie",
                    True,
                    atlas.resolution,
                    len(atlas.entries),
                    ViolationCertificate(entry.u, entry.corners, entry.corner_gammas, (idx, idx)),
                )
                get_logger().log_verdict(verdict)
                return verdict
    return ElicitationVerdict("link_ie", False, atlas.resolution, len(atlas.entries))


def rank_diagnostic(atlas: ReportAtlas, t: TargetLoss) -> List[Dict[str, Any]]:
    """Atlas reports whose Jacobian has rank 0 while the level set meets the simplex interior"""
    flagged = []
    for entry in atlas.entries:
        centre = np.mean([c.probs for c in entry.corners], axis=0)
        if entry.rank == 0 and np.all(centre > 0) and t.k > 1:
            flagged.append({"u": entry.u.tolist(), "p": entry.p.to_list()})
    return flagged
