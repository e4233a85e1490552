"""
Surrogate loss oracles and expected-loss minimization

A surrogate maps a prediction u in R^d to a loss vector in R^n (one
component per outcome). The optimal report set at p is the argmin of
<p, L(u)>; its level set at u is {p : jacobian(u).T @ p = 0} on the simplex.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .config import OptimizerConfig
from .errors import InvalidInput, NoConvergence, NonDifferentiable
from .geometry import (
    LinearMapOnSimplex,
    SimplexPolytope,
    as_probs,
    numerical_rank,
    polytope,
    simplex_section,
)
from .logger import log_debug, log_warning

DIFFERENTIABLE = "differentiable"
STRONGLY_CONVEX = "strongly_convex"
NONSMOOTH_DEMO = "nonsmooth_demo"

MAX_DOUBLINGS = 60

Interval = Tuple[float, float]
AnalyticArgmin = Tuple[np.ndarray, Optional[Interval]]


class SurrogateLoss:
    """Base class for loss oracles L: R^d -> R^n

    Subclasses provide value and jacobian; hessians (n x d x d) is optional.
    Oracles are pure: no state changes between calls.
    """

    name = "surrogate"
    smoothness = DIFFERENTIABLE
    mu: Optional[float] = None

    def __init__(self, d: int, n: int):
        if d < 1 or n < 2:
            raise InvalidInput(f"surrogate needs d >= 1 and n >= 2, got d = {d}, n = {n}")
        self.d = d
        self.n = n

    def value(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def hessians(self, u: np.ndarray) -> Optional[np.ndarray]:
        return None

    def is_kink(self, u: np.ndarray) -> bool:
        return False

    def analytic_minimizer(self, p: np.ndarray) -> Optional[AnalyticArgmin]:
        return None

    def analytic_level_set(self, u: np.ndarray) -> Optional[SimplexPolytope]:
        return None

    def values(self, U: np.ndarray) -> np.ndarray:
        """Loss vectors for a batch of predictions, shape (m, d) -> (m, n)"""
        U = np.asarray(U, dtype=float).reshape(-1, self.d)
        return np.vstack([self.value(u) for u in U]) if len(U) else np.zeros((0, self.n))

    def params(self) -> Dict[str, Any]:
        return {}

    def to_dict(self) -> Dict[str, Any]:
        return {"builtin": self.name, "params": self.params()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(d={self.d}, n={self.n})"


def _point(s: SurrogateLoss, u) -> np.ndarray:
    x = np.atleast_1d(np.asarray(u, dtype=float)).reshape(-1)
    if x.size != s.d:
        raise InvalidInput(f"prediction has dimension {x.size}, surrogate expects {s.d}")
    return x


def _probs(s: SurrogateLoss, p) -> np.ndarray:
    x = as_probs(p)
    if x.size != s.n:
        raise InvalidInput(f"distribution has {x.size} outcomes, surrogate has {s.n}")
    return x


def expected_loss(s: SurrogateLoss, p, u) -> float:
    """<p, L(u)>"""
    return float(np.dot(_probs(s, p), s.value(_point(s, u))))


def expected_gradient(s: SurrogateLoss, p, u) -> np.ndarray:
    return s.jacobian(_point(s, u)).T @ _probs(s, p)


def expected_hessian(s: SurrogateLoss, p, u, step: float = 1e-6) -> np.ndarray:
    """Hessian of <p, L(u)>; central differences of the gradient when no oracle exists"""
    x = _point(s, u)
    w = _probs(s, p)
    H = s.hessians(x)
    if H is not None:
        return np.tensordot(w, H, axes=1)
    out = np.zeros((s.d, s.d))
    for i in range(s.d):
        e = np.zeros(s.d)
        e[i] = step
        out[:, i] = (expected_gradient(s, w, x + e) - expected_gradient(s, w, x - e)) / (2 * step)
    return 0.5 * (out + out.T)


# Huber helpers: f(z) = |z|^2 / 2 inside the unit ball, |z| - 1/2 outside


def huber(z: np.ndarray) -> float:
    r = float(np.linalg.norm(z))
    return 0.5 * r * r if r <= 1.0 else r - 0.5


def huber_grad(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    r = float(np.linalg.norm(z))
    return z.copy() if r <= 1.0 else z / r


def huber_hess(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    r = float(np.linalg.norm(z))
    if r <= 1.0:
        return np.eye(z.size)
    return (np.eye(z.size) - np.outer(z, z) / (r * r)) / r


class CuspSurrogate(SurrogateLoss):
    """L(u)_y = (1 - uy)^2 + |u| on outcomes (+1, -1); not differentiable at 0"""

    name = "cusp"
    smoothness = NONSMOOTH_DEMO
    mu = 2.0
    KINK_TOL = 1e-12

    def __init__(self):
        super().__init__(d=1, n=2)

    def value(self, u):
        x = float(_point(self, u)[0])
        return np.array([(1 - x) ** 2 + abs(x), (1 + x) ** 2 + abs(x)])

    def values(self, U):
        x = np.asarray(U, dtype=float).reshape(-1)
        return np.column_stack([(1 - x) ** 2 + np.abs(x), (1 + x) ** 2 + np.abs(x)])

    def is_kink(self, u):
        return abs(float(_point(self, u)[0])) <= self.KINK_TOL

    def jacobian(self, u):
        x = float(_point(self, u)[0])
        if abs(x) <= self.KINK_TOL:
            raise NonDifferentiable([x])
        sign = 1.0 if x > 0 else -1.0
        return np.array([[-2 * (1 - x) + sign], [2 * (1 + x) + sign]])

    def hessians(self, u):
        return np.full((2, 1, 1), 2.0)

    def analytic_minimizer(self, p):
        # <p, L(u)> = 1 + u^2 - 2u(2 p1 - 1) + |u|
        p1 = float(as_probs(p)[0])
        if p1 > 0.75:
            u = 2 * p1 - 1.5
        elif p1 < 0.25:
            u = 2 * p1 - 0.5
        else:
            u = 0.0
        return np.array([u]), None

    def analytic_level_set(self, u):
        x = float(_point(self, u)[0])
        if abs(x) <= self.KINK_TOL:
            return polytope(2, inequalities=[(np.array([-1.0, 0.0]), -0.25), (np.array([1.0, 0.0]), 0.75)])
        return None


class SmoothCuspSurrogate(SurrogateLoss):
    """L(u)_y = (1 - uy)^2 on outcomes (+1, -1); Gamma(p) = 2 p1 - 1"""

    name = "smooth_cusp"
    smoothness = STRONGLY_CONVEX
    mu = 2.0

    def __init__(self):
        super().__init__(d=1, n=2)

    def value(self, u):
        x = float(_point(self, u)[0])
        return np.array([(1 - x) ** 2, (1 + x) ** 2])

    def values(self, U):
        x = np.asarray(U, dtype=float).reshape(-1)
        return np.column_stack([(1 - x) ** 2, (1 + x) ** 2])

    def jacobian(self, u):
        x = float(_point(self, u)[0])
        return np.array([[-2 * (1 - x)], [2 * (1 + x)]])

    def hessians(self, u):
        return np.full((2, 1, 1), 2.0)

    def analytic_minimizer(self, p):
        return np.array([2 * float(as_probs(p)[0]) - 1]), None


class CESurrogate(SurrogateLoss):
    """Strongly convex quadratic triple on R^2 whose level set at the origin is a segment"""

    name = "ce"
    smoothness = STRONGLY_CONVEX
    mu = 2.0

    def __init__(self):
        super().__init__(d=2, n=3)

    def value(self, u):
        a, b = _point(self, u)
        return np.array(
            [
                a * a + a + b * b + 2 * b,
                2 * a * a + a + 2 * b * b + 2 * b,
                3 * a * a - a + b * b - 2 * b,
            ]
        )

    def values(self, U):
        U = np.asarray(U, dtype=float).reshape(-1, 2)
        a, b = U[:, 0], U[:, 1]
        return np.column_stack(
            [
                a * a + a + b * b + 2 * b,
                2 * a * a + a + 2 * b * b + 2 * b,
                3 * a * a - a + b * b - 2 * b,
            ]
        )

    def jacobian(self, u):
        a, b = _point(self, u)
        return np.array(
            [
                [2 * a + 1, 2 * b + 2],
                [4 * a + 1, 4 * b + 2],
                [6 * a - 1, 2 * b - 2],
            ]
        )

    def hessians(self, u):
        return np.array([np.diag([2.0, 2.0]), np.diag([4.0, 4.0]), np.diag([6.0, 2.0])])

    def analytic_minimizer(self, p):
        p1, p2, p3 = as_probs(p)
        u1 = (p3 - p1 - p2) / (2 * p1 + 4 * p2 + 6 * p3)
        u2 = -(p1 + p2 - p3) / (p1 + 2 * p2 + p3)
        return np.array([u1, u2]), None


class OrdinalHuberSurrogate(SurrogateLoss):
    """L(x) = [f(x - 2), x^2 / 2, f(x + 2)] with f the Huber loss"""

    name = "ordinal_huber"
    smoothness = DIFFERENTIABLE

    def __init__(self):
        super().__init__(d=1, n=3)

    def value(self, u):
        x = float(_point(self, u)[0])
        return np.array([huber(np.array([x - 2])), 0.5 * x * x, huber(np.array([x + 2]))])

    def jacobian(self, u):
        x = float(_point(self, u)[0])
        return np.array([huber_grad(np.array([x - 2])), [x], huber_grad(np.array([x + 2]))])

    def hessians(self, u):
        x = float(_point(self, u)[0])
        return np.array([huber_hess(np.array([x - 2])), [[1.0]], huber_hess(np.array([x + 2]))])


class TwoHuberSurrogate(SurrogateLoss):
    """Two Huber components centred at +2 e_1 and -2 e_1 in R^d

    Component order is (f(u - 2 e_1), f(u + 2 e_1)), so p = (1/4, 3/4)
    is minimized at u_1 = -5/3.
    """

    name = "huber2"
    smoothness = DIFFERENTIABLE

    def __init__(self, d: int = 1):
        super().__init__(d=d, n=2)
        self._shift = np.zeros(d)
        self._shift[0] = 2.0

    def value(self, u):
        x = _point(self, u)
        return np.array([huber(x - self._shift), huber(x + self._shift)])

    def jacobian(self, u):
        x = _point(self, u)
        return np.vstack([huber_grad(x - self._shift), huber_grad(x + self._shift)])

    def hessians(self, u):
        x = _point(self, u)
        return np.array([huber_hess(x - self._shift), huber_hess(x + self._shift)])

    def params(self):
        return {"d": self.d}


class UniversalSurrogate(SurrogateLoss):
    """L(u)_y = ||u - e_y||^2 on R^(n-1), with e_n = 0; Gamma(p) = p[:n-1]"""

    name = "universal"
    smoothness = STRONGLY_CONVEX
    mu = 2.0

    def __init__(self, n: int = 3):
        super().__init__(d=n - 1, n=n)
        self._centres = np.vstack([np.eye(n - 1), np.zeros(n - 1)])

    def value(self, u):
        x = _point(self, u)
        return np.sum((x - self._centres) ** 2, axis=1)

    def values(self, U):
        U = np.asarray(U, dtype=float).reshape(-1, self.d)
        return np.sum((U[:, None, :] - self._centres[None, :, :]) ** 2, axis=2)

    def jacobian(self, u):
        return 2 * (_point(self, u) - self._centres)

    def hessians(self, u):
        return np.repeat(2 * np.eye(self.d)[None, :, :], self.n, axis=0)

    def analytic_minimizer(self, p):
        return np.array(as_probs(p)[: self.n - 1], dtype=float), None

    def params(self):
        return {"n": self.n}


class CallableSurrogate(SurrogateLoss):
    """Wraps user-supplied value / jacobian callables"""

    name = "callable"

    def __init__(
        self,
        value_fn: Callable[[np.ndarray], Any],
        jacobian_fn: Callable[[np.ndarray], Any],
        d: int,
        n: int,
        hessian_fn: Optional[Callable[[np.ndarray], Any]] = None,
        smoothness: str = DIFFERENTIABLE,
        mu: Optional[float] = None,
        label: str = "callable",
    ):
        super().__init__(d=d, n=n)
        if smoothness not in (DIFFERENTIABLE, STRONGLY_CONVEX, NONSMOOTH_DEMO):
            raise InvalidInput(f"unknown smoothness {smoothness!r}")
        self._value_fn = value_fn
        self._jacobian_fn = jacobian_fn
        self._hessian_fn = hessian_fn
        self.smoothness = smoothness
        self.mu = mu
        self.label = label

    def value(self, u):
        return np.asarray(self._value_fn(_point(self, u)), dtype=float).reshape(self.n)

    def jacobian(self, u):
        return np.asarray(self._jacobian_fn(_point(self, u)), dtype=float).reshape(self.n, self.d)

    def hessians(self, u):
        if self._hessian_fn is None:
            return None
        return np.asarray(self._hessian_fn(_point(self, u)), dtype=float).reshape(
            self.n, self.d, self.d
        )

    def to_dict(self):
        raise InvalidInput(f"callable surrogate {self.label!r} cannot be serialized")


@dataclass
class OptimalReportSet:
    """Representative minimizer of <p, L(u)> plus the argmin interval when d = 1"""

    representative: np.ndarray
    is_unique: bool
    opt_value: float
    interval: Optional[Interval] = None
    iterations: int = 0
    analytic: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "representative": [float(x) for x in self.representative],
            "is_unique": self.is_unique,
            "interval": list(self.interval) if self.interval else None,
            "opt_value": self.opt_value,
        }


def _backtrack(
    s: SurrogateLoss, p: np.ndarray, u: np.ndarray, f: float, gn: float, direction: np.ndarray, slope: float, cfg: OptimizerConfig
) -> Optional[Tuple[np.ndarray, float]]:
    """Armijo backtracking from a unit step"""
    t = 1.0
    while t >= 1e-16:
        cand = u + t * direction
        fc = expected_loss(s, p, cand)
        if fc <= f + cfg.armijo * t * slope:
            return cand, fc
        # rounding floor near the optimum: accept if the gradient still shrinks
        if abs(fc - f) <= 1e-14 * (1.0 + abs(f)) and np.linalg.norm(expected_gradient(s, p, cand)) < gn:
            return cand, fc
        t *= cfg.backtrack
    return None


def _expand(
    s: SurrogateLoss, p: np.ndarray, u: np.ndarray, f: float, direction: np.ndarray, slope: float, cfg: OptimizerConfig
) -> Optional[Tuple[np.ndarray, float]]:
    """Double a unit step while Armijo holds and the loss keeps falling

    Linear pieces carry a tiny gradient; doubling crosses them in O(log) steps.
    """
    best: Optional[Tuple[np.ndarray, float]] = None
    t = 1.0
    for _ in range(MAX_DOUBLINGS):
        cand = u + t * direction
        fc = expected_loss(s, p, cand)
        if fc > f + cfg.armijo * t * slope or (best is not None and fc >= best[1]):
            break
        best = (cand, fc)
        t *= 2.0
    return best


def _descend(s: SurrogateLoss, p: np.ndarray, u0: np.ndarray, cfg: OptimizerConfig) -> Tuple[np.ndarray, int, bool]:
    """Damped Newton when the expected Hessian is positive definite, else gradient steps with an expanding line search"""
    u = u0.copy()
    f = expected_loss(s, p, u)
    for it in range(cfg.max_iters):
        g = expected_gradient(s, p, u)
        gn = float(np.linalg.norm(g))
        if gn <= cfg.grad_tol:
            return u, it, True
        newton = False
        direction = -g
        H = expected_hessian(s, p, u)
        if np.all(np.isfinite(H)) and np.min(np.linalg.eigvalsh(H)) > cfg.curvature_tol:
            direction = -np.linalg.solve(H, g)
            newton = True
        slope = float(g @ direction)
        if slope >= 0:
            direction, slope, newton = -g, -gn * gn, False

        step = None if newton else _expand(s, p, u, f, direction, slope, cfg)
        if step is None:
            step = _backtrack(s, p, u, f, gn, direction, slope, cfg)
        if step is None:
            return u, it, False
        u, f = step
    return u, cfg.max_iters, False


def _flat_interval(s: SurrogateLoss, p: np.ndarray, u_star: float, opt: float, cfg: OptimizerConfig) -> Interval:
    """Outward doubling then bisection for the loss-flat region around u_star"""

    def flat(x: float) -> bool:
        return (
            expected_loss(s, p, [x]) - opt <= cfg.flat_tol
            and abs(float(expected_gradient(s, p, [x])[0])) <= cfg.flat_grad_tol
        )

    ends = []
    for sign in (-1.0, 1.0):
        step = cfg.unique_width
        inner, outer = u_star, u_star + sign * step
        while flat(outer):
            inner = outer
            step *= 2
            outer = u_star + sign * step
            if step > 1e8:
                raise NoConvergence(cfg.max_iters, p, "argmin is unbounded")
        for _ in range(200):
            if abs(outer - inner) <= 1e-13:
                break
            mid = 0.5 * (inner + outer)
            if flat(mid):
                inner = mid
            else:
                outer = mid
        ends.append(inner)
    return (min(ends), max(ends))


def _finish(s: SurrogateLoss, p: np.ndarray, u: np.ndarray, iterations: int, cfg: OptimizerConfig) -> OptimalReportSet:
    opt = expected_loss(s, p, u)
    if s.d == 1 and cfg.recover_interval:
        a, b = _flat_interval(s, p, float(u[0]), opt, cfg)
        if b - a > cfg.unique_width:
            return OptimalReportSet(u, False, opt, (a, b), iterations)
        return OptimalReportSet(u, True, opt, None, iterations)
    curvature = float(np.min(np.linalg.eigvalsh(expected_hessian(s, p, u))))
    return OptimalReportSet(u, curvature > cfg.curvature_tol, opt, None, iterations)


def minimize(s: SurrogateLoss, p, cfg: Optional[OptimizerConfig] = None, start=None) -> OptimalReportSet:
    """Minimize <p, L(u)> over R^d, from the origin or a warm start"""
    cfg = cfg or OptimizerConfig()
    w = _probs(s, p)

    if s.smoothness == NONSMOOTH_DEMO or cfg.use_analytic:
        closed = s.analytic_minimizer(w)
        if closed is not None:
            rep, interval = closed
            return OptimalReportSet(
                representative=np.asarray(rep, dtype=float),
                is_unique=interval is None or interval[1] - interval[0] <= cfg.unique_width,
                opt_value=expected_loss(s, w, rep),
                interval=interval,
                analytic=True,
            )
        if s.smoothness == NONSMOOTH_DEMO:
            raise InvalidInput(f"nonsmooth surrogate {s.name} has no analytic minimizer")

    u, iterations, converged = _descend(s, w, np.zeros(s.d) if start is None else _point(s, start), cfg)
    if converged:
        return _finish(s, w, u, iterations, cfg)

    log_debug(f"{s.name}: line search stalled at p = {list(w)}, multi-start")
    rng = np.random.default_rng(cfg.seed)
    best: Optional[Tuple[float, np.ndarray, int]] = None
    for _ in range(cfg.restarts):
        direction = rng.normal(size=s.d)
        u0 = direction / np.linalg.norm(direction) * cfg.restart_radius * rng.uniform() ** (1 / s.d)
        cand, its, ok = _descend(s, w, u0, cfg)
        iterations += its
        if ok:
            value = expected_loss(s, w, cand)
            if best is None or value < best[0]:
                best = (value, cand, iterations)
    if best is None:
        raise NoConvergence(cfg.max_iters, w, f"{s.name}: gradient above {cfg.grad_tol}")
    return _finish(s, w, best[1], best[2], cfg)


def level_set(s: SurrogateLoss, u, rank_tol: float = 1e-9, analytic: bool = True) -> SimplexPolytope:
    """{p in simplex : jacobian(u).T @ p = 0}; analytic description at kinks"""
    x = _point(s, u)
    if s.is_kink(x):
        described = s.analytic_level_set(x) if analytic else None
        if described is None:
            raise NonDifferentiable(list(x))
        return described
    return simplex_section(LinearMapOnSimplex(s.jacobian(x)), rank_tol)


def jacobian_rank(s: SurrogateLoss, u, rank_tol: float = 1e-9) -> int:
    return numerical_rank(s.jacobian(_point(s, u)), rank_tol)


@dataclass
class ComponentCheck:
    outcome: int
    passed: bool
    argmin: Optional[List[float]] = None
    interval: Optional[Interval] = None
    detail: str = ""


@dataclass
class CompactArgminReport:
    """Per-component evidence that each loss component has a nonempty compact argmin

    A pass is necessary-style evidence from axis probes, not a proof.
    """

    probe_radius: float
    components: List[ComponentCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.components)


def validate_compact_argmins(
    s: SurrogateLoss, probe_radius: float = 10.0, cfg: Optional[OptimizerConfig] = None
) -> CompactArgminReport:
    """Each component L_y is minimized at e_y and must grow along every axis away from that argmin"""
    cfg = cfg or OptimizerConfig()
    report = CompactArgminReport(probe_radius=probe_radius)
    for y in range(s.n):
        vertex = np.eye(s.n)[y]
        try:
            best = minimize(s, vertex, cfg)
        except NoConvergence as e:
            report.components.append(ComponentCheck(y, False, detail=str(e)))
            continue

        lo = best.representative.copy()
        hi = best.representative.copy()
        if best.interval is not None:
            lo[0], hi[0] = best.interval
        base = float(s.value(best.representative)[y])
        passed, detail = True, ""
        for i in range(s.d):
            for sign, edge in ((-1.0, lo), (1.0, hi)):
                previous = base
                for r in (probe_radius / 4, probe_radius / 2, probe_radius):
                    probe = edge.copy()
                    probe[i] += sign * r
                    current = float(s.value(probe)[y])
                    if not current > previous:
                        passed = False
                        detail = f"component {y} not increasing along axis {i} ({'+' if sign > 0 else '-'}) at distance {r:g}"
                        break
                    previous = current
                if not passed:
                    break
            if not passed:
                break
        report.components.append(
            ComponentCheck(y, passed, [float(x) for x in best.representative], best.interval, detail)
        )
    if not report.passed:
        log_warning(f"{s.name}: compact-argmin evidence failed")
    return report


validate_assumption1 = validate_compact_argmins


def finite_difference_jacobian(s: SurrogateLoss, u, step: float = 1e-6) -> np.ndarray:
    x = _point(s, u)
    out = np.zeros((s.n, s.d))
    for i in range(s.d):
        e = np.zeros(s.d)
        e[i] = step
        out[:, i] = (s.value(x + e) - s.value(x - e)) / (2 * step)
    return out


def strong_convexity_violation(s: SurrogateLoss, u, v) -> float:
    """Largest shortfall of <grad_y(u) - grad_y(v), u - v> below mu ||u - v||^2"""
    if s.mu is None:
        raise InvalidInput(f"{s.name} has no strong convexity modulus")
    x, z = _point(s, u), _point(s, v)
    lhs = (s.jacobian(x) - s.jacobian(z)) @ (x - z)
    return float(np.max(s.mu * np.dot(x - z, x - z) - lhs))


BUILTIN_SURROGATES: Dict[str, Callable[..., SurrogateLoss]] = {
    "cusp": lambda **kw: CuspSurrogate(),
    "smooth_cusp": lambda **kw: SmoothCuspSurrogate(),
    "ce": lambda **kw: CESurrogate(),
    "ordinal_huber": lambda **kw: OrdinalHuberSurrogate(),
    "huber2": lambda d=1, **kw: TwoHuberSurrogate(int(d)),
    "universal": lambda n=3, **kw: UniversalSurrogate(int(n)),
}


def surrogate_from_dict(data: Dict[str, Any]) -> SurrogateLoss:
    if isinstance(data.get("surrogate"), dict):
        # construct-1d output document
        return surrogate_from_dict(data["surrogate"])
    if "piecewise_quadratic_1d" in data:
        from .construct1d import PiecewiseQuadSurrogate

        return PiecewiseQuadSurrogate.from_dict(data)
    name = data.get("builtin")
    if name not in BUILTIN_SURROGATES:
        raise InvalidInput(
            f"unknown builtin surrogate {name!r}; known: {', '.join(sorted(BUILTIN_SURROGATES))}"
        )
    return BUILTIN_SURROGATES[name](**data.get("params", {}))


def load_surrogate(spec: Union[str, Dict[str, Any]]) -> SurrogateLoss:
    """Load a surrogate from a dict, a JSON file, or "builtin:name[:arg]"

    The optional arg is the dimension parameter (n for universal, d for huber2).
    """
    if isinstance(spec, dict):
        return surrogate_from_dict(spec)
    if spec.startswith("builtin:"):
        parts = spec.split(":")
        params: Dict[str, Any] = {}
        if len(parts) > 2:
            key = "n" if parts[1] == "universal" else "d"
            params[key] = int(parts[2])
        return surrogate_from_dict({"builtin": parts[1], "params": params})
    try:
        with open(spec, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInput(f"cannot read surrogate {spec}: {e}") from e
    return surrogate_from_dict(data)
