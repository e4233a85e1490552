"""
Calibration gaps and the calibration falsifier

The gap at p is the infimum of <p, L(u)> over predictions linked outside the
target optimal set, minus the unrestricted optimum. A gap at or below
gap_tol is reported as a violation together with a witness sequence.
The infimum is searched on a box ||u||_inf <= radius: a dense grid, local
refinement around the best grid point, and optimal reports of distributions
approaching the level set of the optimum from every outcome vertex.
"""

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Set, TextIO, Tuple

import numpy as np

from .config import CalibrationConfig, OptimizerConfig, Tolerances
from .elicitation import atlas_points
from .errors import ElicitError, InvalidInput, NoConvergence, NonDifferentiable, SearchBudgetExceeded
from .geometry import Distribution, as_probs
from .logger import get_logger
from .surrogates import SurrogateLoss, expected_loss, level_set, minimize
from .targets import TargetLoss, gamma

_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass
class WitnessPoint:
    u: List[float]
    report: int
    loss: float


@dataclass
class CalibrationProbe:
    p: Distribution
    gamma: Set[int]
    opt_value: float
    restricted_value: float
    gap: float
    violated: bool
    argmin: List[float] = field(default_factory=list)
    witness_sequence: List[WitnessPoint] = field(default_factory=list)
    evals: int = 0
    witness_failures: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p.to_list(),
            "gamma": sorted(self.gamma),
            "opt_value": self.opt_value,
            "restricted_value": _json_float(self.restricted_value),
            "gap": _json_float(self.gap),
            "violated": self.violated,
            "argmin": self.argmin,
            "witness_sequence": [
                {"u": w.u, "report": w.report, "loss": w.loss} for w in self.witness_sequence
            ],
            "evals": self.evals,
            "witness_failures": self.witness_failures,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CalibrationProbe":
        return cls(
            p=Distribution(data["p"]),
            gamma=set(data["gamma"]),
            opt_value=float(data["opt_value"]),
            restricted_value=float(data["restricted_value"]),
            gap=float(data["gap"]),
            violated=bool(data["violated"]),
            argmin=list(data.get("argmin", [])),
            witness_sequence=[
                WitnessPoint(list(w["u"]), int(w["report"]), float(w["loss"]))
                for w in data.get("witness_sequence", [])
            ],
            evals=int(data.get("evals", 0)),
            witness_failures=int(data.get("witness_failures", 0)),
        )


def _json_float(x: float) -> Any:
    return "inf" if math.isinf(x) else x


class RestrictedSearch:
    """Grid of predictions with cached loss vectors and link labels

    Labels do not depend on p, so one search object serves a whole sweep.
    """

    def __init__(self, s: SurrogateLoss, link, cfg: Optional[CalibrationConfig] = None):
        self.s = s
        self.link = link
        self.cfg = cfg or CalibrationConfig()
        self.evals = 0
        self._grid: Optional[np.ndarray] = None
        self._values: Optional[np.ndarray] = None
        self._labels: Optional[np.ndarray] = None
        self.spacing = 0.0

    def _charge(self, count: int):
        self.evals += count
        if self.evals > self.cfg.max_evals:
            raise SearchBudgetExceeded(self.evals)

    def grid(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self._grid is None:
            d = self.s.d
            per_axis = {1: self.cfg.grid, 2: self.cfg.grid_2d}.get(d, self.cfg.grid_nd)
            axis = np.linspace(-self.cfg.radius, self.cfg.radius, per_axis)
            self.spacing = float(axis[1] - axis[0])
            mesh = np.meshgrid(*([axis] * d), indexing="ij")
            U = np.column_stack([m.reshape(-1) for m in mesh])
            self._charge(len(U))
            self._grid = U
            self._values = self.s.values(U)
            self._labels = np.asarray([self.link.apply(u) for u in U])
            get_logger().log_debug(f"restricted search grid: {len(U)} points, spacing {self.spacing:g}")
        return self._grid, self._values, self._labels

    def loss(self, w: np.ndarray, u: np.ndarray) -> float:
        self._charge(1)
        return float(np.dot(w, self.s.value(u)))

    def feasible(self, u: np.ndarray, excluded: Set[int]) -> bool:
        return self.link.apply(u) not in excluded


def _bisect_edge(search: RestrictedSearch, inside: np.ndarray, outside: np.ndarray, excluded: Set[int], tol: float) -> np.ndarray:
    """Feasible point within tol of the label boundary between inside and outside"""
    for _ in range(200):
        if np.max(np.abs(inside - outside)) <= tol:
            break
        mid = 0.5 * (inside + outside)
        if search.feasible(mid, excluded):
            inside = mid
        else:
            outside = mid
    return inside


def _golden(search: RestrictedSearch, w: np.ndarray, a: float, b: float, excluded: Set[int], tol: float, trail: List[WitnessPoint]) -> Tuple[float, float]:
    def f(x: float) -> float:
        u = np.array([x])
        if not search.feasible(u, excluded):
            return math.inf
        value = search.loss(w, u)
        trail.append(WitnessPoint([x], search.link.apply(u), value))
        return value

    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _refine_1d(search: RestrictedSearch, w: np.ndarray, i: int, mask: np.ndarray, excluded: Set[int], trail: List[WitnessPoint]) -> Tuple[np.ndarray, float]:
    U, _, _ = search.grid()
    tol = search.cfg.refine_tol
    best_u = U[i].copy()
    best = search.loss(w, best_u)
    trail.append(WitnessPoint(best_u.tolist(), search.link.apply(best_u), best))
    lo = U[i - 1] if i > 0 else None
    hi = U[i + 1] if i + 1 < len(U) else None
    for nb, nb_ok in ((lo, i > 0 and mask[i - 1]), (hi, i + 1 < len(U) and mask[i + 1])):
        if nb is None:
            continue
        if nb_ok:
            continue
        edge = _bisect_edge(search, U[i].copy(), nb.copy(), excluded, tol)
        value = search.loss(w, edge)
        trail.append(WitnessPoint(edge.tolist(), search.link.apply(edge), value))
        if value < best:
            best_u, best = edge, value
    a = float(lo[0]) if lo is not None and mask[i - 1] else float(U[i][0])
    b = float(hi[0]) if hi is not None and mask[i + 1] else float(U[i][0])
    if b > a:
        x, value = _golden(search, w, a, b, excluded, tol, trail)
        if value < best:
            best_u, best = np.array([x]), value
    return best_u, best


def _refine_nd(search: RestrictedSearch, w: np.ndarray, u: np.ndarray, excluded: Set[int], trail: List[WitnessPoint]) -> Tuple[np.ndarray, float]:
    """Coordinate pattern search inside the feasible region, step halving down to refine_tol"""
    best = search.loss(w, u)
    h = search.spacing
    while h > search.cfg.refine_tol:
        improved = False
        for axis in range(search.s.d):
            for sign in (1.0, -1.0):
                cand = u.copy()
                cand[axis] += sign * h
                if not search.feasible(cand, excluded):
                    continue
                value = search.loss(w, cand)
                if value < best:
                    u, best, improved = cand, value, True
                    trail.append(WitnessPoint(u.tolist(), search.link.apply(u), value))
        if not improved:
            h /= 2
    return u, best


def _witness_sequences(
    s: SurrogateLoss,
    link,
    w: np.ndarray,
    argmin: np.ndarray,
    excluded: Set[int],
    cfg: CalibrationConfig,
    opt_cfg: OptimizerConfig,
    search: RestrictedSearch,
) -> Tuple[List[List[WitnessPoint]], int]:
    """Optimal reports of q_t = (1 - 2^-t) c + 2^-t e_y for corners c of the optimum's level set

    Each minimization is warm-started from the previous report and capped at
    cfg.witness_max_iters; a sequence whose minimizer fails is cut short and
    counted.
    """
    try:
        corners = [c.probs for c in level_set(s, argmin).vertices] or [w]
    except NonDifferentiable:
        corners = [w]
    witness_cfg = replace(opt_cfg, max_iters=cfg.witness_max_iters, restarts=1, recover_interval=False)
    sequences, failures = [], 0
    for c in corners:
        for y in range(s.n):
            vertex = np.eye(s.n)[y]
            seq: List[WitnessPoint] = []
            u = argmin
            for step in range(1, cfg.witness_steps + 1):
                eps = 2.0**-step
                q = (1 - eps) * c + eps * vertex
                try:
                    u = minimize(s, q, witness_cfg, start=u).representative
                except NoConvergence as e:
                    failures += 1
                    get_logger().log_warning(f"witness sequence toward e_{y} stopped at step {step}: {e}")
                    break
                report = link.apply(u)
                if report in excluded:
                    continue
                seq.append(WitnessPoint(u.tolist(), int(report), search.loss(w, u)))
            if seq:
                sequences.append(seq)
    return sequences, failures


def gap(
    s: SurrogateLoss,
    t: TargetLoss,
    link,
    p,
    cfg: Optional[CalibrationConfig] = None,
    tol: Optional[Tolerances] = None,
    search: Optional[RestrictedSearch] = None,
) -> CalibrationProbe:
    """Restricted infimum minus optimum of <p, L(u)> at one distribution"""
    cfg = cfg or CalibrationConfig()
    tol = tol or Tolerances()
    search = search or RestrictedSearch(s, link, cfg)
    start_evals = search.evals
    w = as_probs(p)
    dist = p if isinstance(p, Distribution) else Distribution(w)
    excluded = gamma(t, w, tol.tie_tol)
    opt_cfg = OptimizerConfig(use_analytic=cfg.use_analytic)

    best = minimize(s, w, opt_cfg)
    opt = best.opt_value

    U, V, labels = search.grid()
    mask = ~np.isin(labels, list(excluded))
    restricted = math.inf
    trail: List[WitnessPoint] = []
    if mask.any():
        totals = np.where(mask, V @ w, math.inf)
        i = int(np.argmin(totals))
        if s.d == 1:
            _, restricted = _refine_1d(search, w, i, mask, excluded, trail)
        else:
            _, restricted = _refine_nd(search, w, U[i].copy(), excluded, trail)
    # keep the approach to the best value, in order
    sequence = _monotone_tail(trail)

    sequences, failures = _witness_sequences(s, link, w, best.representative, excluded, cfg, opt_cfg, search)
    for seq in sequences:
        if seq[-1].loss < restricted:
            restricted = seq[-1].loss
            sequence = seq

    value_gap = restricted - opt
    probe = CalibrationProbe(
        p=dist,
        gamma=excluded,
        opt_value=opt,
        restricted_value=restricted,
        gap=value_gap,
        violated=bool(value_gap <= cfg.gap_tol),
        argmin=[float(x) for x in best.representative],
        witness_sequence=sequence,
        evals=search.evals - start_evals,
        witness_failures=failures,
    )
    get_logger().log_probe(probe)
    return probe


def _monotone_tail(trail: List[WitnessPoint]) -> List[WitnessPoint]:
    out: List[WitnessPoint] = []
    for point in trail:
        if not out or point.loss < out[-1].loss:
            out.append(point)
    return out


def replay_witness(
    s: SurrogateLoss,
    t: TargetLoss,
    link,
    probe: CalibrationProbe,
    loss_tol: float = 1e-10,
    tie_tol: float = 1e-9,
) -> bool:
    """Every witness loss recomputes and every witness links outside gamma(p)"""
    excluded = gamma(t, probe.p, tie_tol)
    for point in probe.witness_sequence:
        u = np.asarray(point.u, dtype=float)
        if link.apply(u) in excluded:
            return False
        if abs(expected_loss(s, probe.p, u) - point.loss) > loss_tol:
            return False
    return True


@dataclass
class SweepSummary:
    probes: int
    min_interior_gap: float
    violations: List[List[float]] = field(default_factory=list)
    errors: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "probes": self.probes,
            "min_interior_gap": _json_float(self.min_interior_gap),
            "violations": self.violations,
            "errors": self.errors,
        }


def sweep(
    s: SurrogateLoss,
    t: TargetLoss,
    link,
    resolution: float = 0.05,
    cfg: Optional[CalibrationConfig] = None,
    tol: Optional[Tolerances] = None,
    points: Optional[Sequence[Distribution]] = None,
) -> Tuple[List[CalibrationProbe], SweepSummary]:
    """Probes over a simplex lattice plus cell vertices and boundary barycenters"""
    cfg = cfg or CalibrationConfig()
    search = RestrictedSearch(s, link, cfg)
    probes: List[CalibrationProbe] = []
    errors: List[Dict[str, Any]] = []
    for p in points if points is not None else atlas_points(t, resolution):
        try:
            probes.append(gap(s, t, link, p, cfg, tol, search))
        except ElicitError as e:
            errors.append({"p": p.to_list(), "error": type(e).__name__, "detail": str(e)})
            get_logger().log_warning(f"probe at {p.to_list()} failed: {e}")
    interior = [x.gap for x in probes if len(x.gamma) == 1]
    summary = SweepSummary(
        probes=len(probes),
        min_interior_gap=min(interior) if interior else math.inf,
        violations=[x.p.to_list() for x in probes if x.violated],
        errors=errors,
    )
    get_logger().log_info(
        f"sweep {s.name} x {t.name}: {summary.probes} probes, "
        f"{len(summary.violations)} violations, min interior gap {summary.min_interior_gap:.6g}"
    )
    return probes, summary


CSV_FIELDS = ["gamma_set", "opt_value", "restricted_value", "gap", "violated"]


def write_csv(probes: Sequence[CalibrationProbe], path: str):
    with open(path, "w", newline="", encoding="utf-8") as f:
        write_rows(probes, f)


def write_rows(probes: Sequence[CalibrationProbe], stream: TextIO):
    """One row per probe: p1..pn then CSV_FIELDS"""
    if not probes:
        raise InvalidInput("no probes to write")
    n = probes[0].p.n
    writer = csv.writer(stream)
    writer.writerow([f"p{i + 1}" for i in range(n)] + CSV_FIELDS)
    for x in probes:
        writer.writerow(
            [repr(v) for v in x.p.to_list()]
            + [
                ";".join(str(r) for r in sorted(x.gamma)),
                repr(x.opt_value),
                repr(x.restricted_value),
                repr(x.gap),
                str(x.violated).lower(),
            ]
        )


def read_csv(path: str) -> List[CalibrationProbe]:
    probes = []
    with open(path, "r", newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            coords = [float(row[k]) for k in row if k.startswith("p") and k[1:].isdigit()]
            probes.append(
                CalibrationProbe(
                    p=Distribution(coords),
                    gamma={int(r) for r in row["gamma_set"].split(";") if r},
                    opt_value=float(row["opt_value"]),
                    restricted_value=float(row["restricted_value"]),
                    gap=float(row["gap"]),
                    violated=row["violated"] == "true",
                )
            )
    return probes


def minimizing_sequence_check(
    s: SurrogateLoss,
    p,
    sequence: Sequence[Sequence[float]],
    cfg: Optional[OptimizerConfig] = None,
    loss_tol: float = 1e-8,
    dist_tol: float = 1e-4,
) -> bool:
    """True iff the sequence's losses reach the optimum and its points reach the argmin

    A sequence where only one of the two converges contradicts compactness of
    the component argmins and is logged.
    """
    if not sequence:
        raise InvalidInput("empty sequence")
    best = minimize(s, p, cfg)
    last = np.asarray(sequence[-1], dtype=float).reshape(-1)
    loss_ok = abs(expected_loss(s, p, last) - best.opt_value) <= loss_tol
    if best.interval is not None:
        a, b = best.interval
        distance = max(a - last[0], 0.0, last[0] - b)
    else:
        distance = float(np.linalg.norm(last - best.representative))
    dist_ok = distance <= dist_tol
    if loss_ok != dist_ok:
        get_logger().log_warning(
            f"{s.name}: loss convergence {loss_ok} but argmin distance {distance:.3g}"
        )
    return loss_ok and dist_ok
