"""
Convex differentiable 1-d surrogates for orderable targets

The gradient v(x) of the constructed loss is piecewise linear with knots at
x = 1..k+1. Interior knots are positive multiples of the boundary normals
l(r_j) - l(r_{j-1}), scaled so that v is coordinatewise nondecreasing; the
loss is the integral of v. Report r_j occupies [j, j+1).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .config import OptimizerConfig, Tolerances
from .elicitation import ElicitationVerdict, build_atlas, check_ie
from .errors import CertificateFailure, InvalidInput, NotOrderable, ScalingInfeasible
from .geometry import as_probs
from .links import ASCENDING, DESCENDING, IntervalLink
from .logger import get_logger
from .surrogates import DIFFERENTIABLE, SurrogateLoss
from .targets import TargetLoss, boundary, cell, orderability, validate_nonredundant

PADDING_MARGIN = 1.0
ZERO_TOL = 1e-12


class PiecewiseQuadSurrogate(SurrogateLoss):
    """Loss whose gradient interpolates gradient_values linearly between knots

    Beyond the end knots every gradient component grows with slope
    tail_slope. The value is the integral of the gradient from knots[0].
    """

    name = "piecewise_quadratic_1d"
    smoothness = DIFFERENTIABLE

    def __init__(
        self,
        knots: Sequence[float],
        gradient_values: Sequence[Sequence[float]],
        tail_slope: float = 1.0,
        enumeration: Optional[Sequence[int]] = None,
    ):
        x = np.asarray(knots, dtype=float).reshape(-1)
        V = np.atleast_2d(np.asarray(gradient_values, dtype=float))
        if x.size < 2 or V.shape[0] != x.size:
            raise InvalidInput("need at least two knots and one gradient vector per knot")
        if np.any(np.diff(x) <= 0):
            raise InvalidInput("knots must be strictly increasing")
        if not tail_slope > 0:
            raise InvalidInput(f"tail slope must be positive, got {tail_slope}")
        super().__init__(d=1, n=V.shape[1])
        self.knots = x
        self.gradient_values = V
        self.tail_slope = float(tail_slope)
        self.enumeration = None if enumeration is None else [int(r) for r in enumeration]
        self._slopes = np.diff(V, axis=0) / np.diff(x)[:, None]
        widths = np.diff(x)[:, None]
        pieces = widths * V[:-1] + 0.5 * widths**2 * self._slopes
        self._integrals = np.vstack([np.zeros(self.n), np.cumsum(pieces, axis=0)])

    def _locate(self, x: float) -> int:
        return int(np.clip(np.searchsorted(self.knots, x, side="right") - 1, 0, len(self.knots) - 2))

    def gradient(self, x: float) -> np.ndarray:
        if x < self.knots[0]:
            return self.gradient_values[0] + self.tail_slope * (x - self.knots[0])
        if x > self.knots[-1]:
            return self.gradient_values[-1] + self.tail_slope * (x - self.knots[-1])
        i = self._locate(x)
        return self.gradient_values[i] + self._slopes[i] * (x - self.knots[i])

    def value(self, u):
        x = float(np.atleast_1d(u)[0])
        if x < self.knots[0]:
            h = x - self.knots[0]
            return h * self.gradient_values[0] + 0.5 * self.tail_slope * h * h
        if x > self.knots[-1]:
            h = x - self.knots[-1]
            return self._integrals[-1] + h * self.gradient_values[-1] + 0.5 * self.tail_slope * h * h
        i = self._locate(x)
        h = x - self.knots[i]
        return self._integrals[i] + h * self.gradient_values[i] + 0.5 * h * h * self._slopes[i]

    def jacobian(self, u):
        return self.gradient(float(np.atleast_1d(u)[0])).reshape(self.n, 1)

    def hessians(self, u):
        x = float(np.atleast_1d(u)[0])
        if x < self.knots[0] or x > self.knots[-1]:
            slope = np.full(self.n, self.tail_slope)
        else:
            slope = self._slopes[self._locate(x)]
        return slope.reshape(self.n, 1, 1)

    def analytic_minimizer(self, p):
        """Zero set of the monotone piecewise-linear <p, v(x)>"""
        w = as_probs(p)
        G = self.gradient_values @ w
        x = self.knots
        if G[0] > ZERO_TOL:
            u = x[0] - G[0] / self.tail_slope
            return np.array([u]), None
        if G[-1] < -ZERO_TOL:
            u = x[-1] - G[-1] / self.tail_slope
            return np.array([u]), None

        i = int(np.argmax(G >= -ZERO_TOL))
        if i == 0 or G[i] <= ZERO_TOL:
            a = x[i]
        else:
            a = x[i - 1] + (-G[i - 1]) / (G[i] - G[i - 1]) * (x[i] - x[i - 1])
        j = int(len(G) - 1 - np.argmax(G[::-1] <= ZERO_TOL))
        if j == len(G) - 1 or G[j] >= -ZERO_TOL:
            b = x[j]
        else:
            b = x[j] + (-G[j]) / (G[j + 1] - G[j]) * (x[j + 1] - x[j])
        a, b = min(a, b), max(a, b)
        if b - a <= 1e-12:
            return np.array([0.5 * (a + b)]), None
        return np.array([0.5 * (a + b)]), (float(a), float(b))

    def to_dict(self) -> Dict[str, Any]:
        body = {
            "knots": self.knots.tolist(),
            "slopes": self.gradient_values.tolist(),
            "tail_slope": self.tail_slope,
        }
        if self.enumeration is not None:
            body["enumeration"] = list(self.enumeration)
        return {"piecewise_quadratic_1d": body}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PiecewiseQuadSurrogate":
        body = data["piecewise_quadratic_1d"]
        try:
            return cls(
                body["knots"],
                body["slopes"],
                body.get("tail_slope", 1.0),
                body.get("enumeration"),
            )
        except KeyError as e:
            raise InvalidInput(f"piecewise quadratic surrogate needs {e}") from e


def is_monotone(s: PiecewiseQuadSurrogate, tol: float = 0.0) -> bool:
    """Gradient values nondecreasing across knots in every coordinate"""
    return bool(np.all(np.diff(s.gradient_values, axis=0) >= -tol))


def knot_gradient_errors(s: PiecewiseQuadSurrogate, step: float = 1e-7) -> np.ndarray:
    """Max abs difference between central differences of the value and v at each knot"""
    errors = []
    for x, v in zip(s.knots, s.gradient_values):
        fd = (s.value([x + step]) - s.value([x - step])) / (2 * step)
        errors.append(float(np.max(np.abs(fd - v))))
    return np.asarray(errors)


def sign_scan(s: PiecewiseQuadSurrogate) -> List[bool]:
    """Per component: the gradient goes from negative to positive exactly once"""
    results = []
    for y in range(s.n):
        signs = [-1] + [int(np.sign(g)) if abs(g) > ZERO_TOL else 0 for g in s.gradient_values[:, y]] + [1]
        nonzero = [x for x in signs if x != 0]
        changes = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
        results.append(changes == 1 and all(a <= b for a, b in zip(signs, signs[1:])))
    return results


def _solve_scaling(normals: np.ndarray) -> Optional[np.ndarray]:
    """Smallest-sum beta >= 1 with beta_j d_j <= beta_{j+1} d_{j+1} coordinatewise"""
    m, n = normals.shape
    if m == 1:
        return np.ones(1)
    A_ub, b_ub = [], []
    for j in range(m - 1):
        for y in range(n):
            row = np.zeros(m)
            row[j] = normals[j, y]
            row[j + 1] = -normals[j + 1, y]
            A_ub.append(row)
            b_ub.append(0.0)
    res = linprog(
        np.ones(m),
        A_ub=np.vstack(A_ub),
        b_ub=np.asarray(b_ub),
        bounds=[(1.0, None)] * m,
        method="highs",
    )
    if res.status != 0:
        return None
    return np.asarray(res.x)


@dataclass
class BoundaryCheck:
    boundary: int
    reports: Tuple[int, int]
    max_residual: float
    left_value: float  # <witness of left report, v(boundary)>, must be > 0
    right_value: float  # must be < 0
    passed: bool


@dataclass
class ConstructionResult:
    surrogate: PiecewiseQuadSurrogate
    link: IntervalLink
    enumeration: List[int]
    betas: List[float]
    certificates: List[BoundaryCheck] = field(default_factory=list)
    verdict: Optional[ElicitationVerdict] = None

    def to_dict(self, target: Optional[TargetLoss] = None) -> Dict[str, Any]:
        out = {
            "surrogate": self.surrogate.to_dict(),
            "link": self.link.to_dict(),
            "enumeration": self.enumeration,
            "betas": self.betas,
            "certificates": [
                {
                    "boundary": c.boundary,
                    "reports": list(c.reports),
                    "max_residual": c.max_residual,
                    "left_value": c.left_value,
                    "right_value": c.right_value,
                    "passed": c.passed,
                }
                for c in self.certificates
            ],
            "ie_verdict": self.verdict.to_dict() if self.verdict else None,
        }
        if target is not None:
            out["enumeration_labels"] = [target.label(r) for r in self.enumeration]
        return out


def boundary_certificate(
    s: PiecewiseQuadSurrogate,
    t: TargetLoss,
    zero_tol: float = 1e-9,
    raise_on_failure: bool = True,
) -> List[BoundaryCheck]:
    """At each interior knot: v vanishes on the boundary vertices and splits the adjacent witnesses"""
    if s.enumeration is None or len(s.enumeration) != len(s.knots) - 1:
        raise InvalidInput("surrogate carries no enumeration matching its knots")
    witnesses = validate_nonredundant(t)
    enum = s.enumeration
    checks = []
    for b in range(len(enum) - 1):
        left, right = enum[b], enum[b + 1]
        v = s.gradient_values[b + 1]
        section = boundary(t, left, right)
        residual = max((abs(float(np.dot(p.probs, v))) for p in section.vertices), default=float("inf"))
        lv = float(np.dot(witnesses[left].probs, v))
        rv = float(np.dot(witnesses[right].probs, v))
        passed = residual <= zero_tol and lv > 0 and rv < 0
        check = BoundaryCheck(b, (left, right), residual, lv, rv, passed)
        checks.append(check)
        if not passed and raise_on_failure:
            raise CertificateFailure(
                b, f"residual {residual:.3g}, witness signs {lv:.3g} / {rv:.3g}"
            )
    return checks


def construct(
    t: TargetLoss,
    tol: Optional[Tolerances] = None,
    ie_resolution: float = 0.1,
    tail_slope: float = 1.0,
) -> ConstructionResult:
    """Build a calibrated convex differentiable 1-d surrogate and its step link"""
    tol = tol or Tolerances()
    logger = get_logger()
    validate_nonredundant(t, tol.lp_margin)
    cert = orderability(t, tol.lp_margin)
    if not cert.ordered:
        raise NotOrderable(cert.intersection_edges)

    L = t.loss_matrix
    enum, betas = None, None
    for candidate in (list(cert.enumeration), list(cert.enumeration)[::-1]):
        normals = np.vstack([L[candidate[j]] - L[candidate[j - 1]] for j in range(1, len(candidate))])
        betas = _solve_scaling(normals)
        if betas is not None:
            enum = candidate
            break
    if enum is None:
        raise ScalingInfeasible(f"no monotone scaling of the boundary normals of {t.name}")

    k = len(enum)
    interior = betas[:, None] * normals
    first = cell(t, enum[0]).polytope
    last = cell(t, enum[-1]).polytope
    c1 = max(float(np.dot(p.probs, interior[0])) for p in first.vertices) + PADDING_MARGIN
    c2 = -min(float(np.dot(p.probs, interior[-1])) for p in last.vertices) + PADDING_MARGIN
    values = np.vstack([interior[0] - c1, interior, interior[-1] + c2])
    knots = np.arange(1, k + 2, dtype=float)
    surrogate = PiecewiseQuadSurrogate(knots, values, tail_slope, enumeration=enum)

    # x in [j, j+1) -> r_j, clamped to r_1 / r_k
    link = IntervalLink(
        boundaries=[(float(j), float(j)) for j in range(2, k + 1)],
        region_reports=list(enum),
        boundary_reports=list(enum[1:]),
        orientation=ASCENDING if enum == list(cert.enumeration) else DESCENDING,
    )
    logger.log_construction([t.label(r) for r in enum], betas.tolist(), knots.tolist())

    certificates = boundary_certificate(surrogate, t)
    atlas = build_atlas(surrogate, t, ie_resolution, tol, OptimizerConfig(use_analytic=True))
    verdict = check_ie(atlas, t)
    if verdict.violated:
        raise CertificateFailure(None, f"constructed surrogate violates IE at u = {verdict.certificate.u}")
    return ConstructionResult(surrogate, link, enum, betas.tolist(), certificates, verdict)
