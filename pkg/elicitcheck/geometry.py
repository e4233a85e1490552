"""
Linear algebra and polytope primitives over the probability simplex

Polytopes are kept in both representations: vertices (V-form) and the
defining equalities / inequalities (H-form), always intersected with the
simplex. Vertex enumeration intersects subsets of facet constraints with the
equality system, which is adequate for the desk-scale sizes used here
(n <= 12).
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import null_space, orth
from scipy.optimize import linprog, nnls

from .errors import DimensionOverflow, InvalidDistribution, InvalidInput

MAX_ENUMERATION_N = 12
SUM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9
VERTEX_TOL = 1e-9

Constraint = Tuple[np.ndarray, float]


def parse_number(value: Any) -> float:
    """Parse a real given as number, decimal string or rational string ("1/4")"""
    if isinstance(value, bool):
        raise InvalidInput(f"not a number: {value!r}")
    if isinstance(value, (int, float, Fraction, np.floating, np.integer)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInput(f"not a number: {value!r}") from e
    raise InvalidInput(f"not a number: {value!r}")


@dataclass(frozen=True, eq=False)
class Distribution:
    """A point of the probability simplex"""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float).reshape(-1)
        if arr.size < 1 or not np.all(np.isfinite(arr)):
            raise InvalidDistribution(f"not a finite probability vector: {arr}")
        if np.any(arr < -SUM_TOL):
            raise InvalidDistribution(f"negative probability in {arr}")
        arr = np.clip(arr, 0.0, None)
        total = arr.sum()
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise InvalidDistribution(f"probabilities sum to {total}, not 1")
        if abs(total - 1.0) > 0.0:
            arr = arr / total
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @classmethod
    def of(cls, values: Iterable[Any]) -> "Distribution":
        return cls(np.array([parse_number(v) for v in values], dtype=float))

    @property
    def n(self) -> int:
        return int(self.probs.size)

    def to_list(self) -> List[float]:
        return [float(x) for x in self.probs]

    def close_to(self, other: "Distribution", tol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.probs - as_probs(other))) <= tol)

    def __repr__(self) -> str:
        return "Distribution(" + ", ".join(f"{x:.6g}" for x in self.probs) + ")"


def as_probs(p: Union[Distribution, Sequence[float], np.ndarray]) -> np.ndarray:
    """Return the probability vector behind p as a float array"""
    if isinstance(p, Distribution):
        return p.probs
    return np.asarray(p, dtype=float).reshape(-1)


@dataclass(frozen=True, eq=False)
class LinearMapOnSimplex:
    """Linear map p -> matrix.T @ p, with matrix the n x d Jacobian of a surrogate"""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or not np.all(np.isfinite(arr)):
            raise InvalidInput("linear map must be a finite 2-d matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def d(self) -> int:
        return int(self.matrix.shape[1])

    def apply(self, p) -> np.ndarray:
        return self.matrix.T @ as_probs(p)


def numerical_rank(matrix: np.ndarray, rank_tol: float = 1e-9) -> int:
    """Rank counting singular values above rank_tol times the largest one"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def kernel_basis(m: LinearMapOnSimplex, rank_tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (as columns) of {v in R^n : m.matrix.T @ v = 0}"""
    if not 0 < rank_tol < 1:
        raise InvalidInput(f"rank_tol must lie in (0, 1), got {rank_tol}")
    if not np.any(m.matrix):
        return np.eye(m.n)
    return null_space(m.matrix.T, rcond=rank_tol)


@dataclass(frozen=True, eq=False)
class SimplexPolytope:
    """Polytope inside the simplex, in vertex and constraint form

    equalities mean <p, w> = offset, inequalities mean <p, w> <= offset;
    membership in the simplex itself is implicit.
    """

    dim_ambient: int
    vertices: Tuple[Distribution, ...]
    equalities: Tuple[Constraint, ...] = ()
    inequalities: Tuple[Constraint, ...] = ()

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def vertex_array(self) -> np.ndarray:
        if self.is_empty:
            return np.zeros((0, self.dim_ambient))
        return np.vstack([v.probs for v in self.vertices])

    def affine_dimension(self, tol: float = 1e-9) -> int:
        if self.is_empty:
            return -1
        V = self.vertex_array()
        if len(V) == 1:
            return 0
        return numerical_rank(V[1:] - V[0], tol)

    def barycenter(self) -> Distribution:
        if self.is_empty:
            raise InvalidInput("empty polytope has no barycenter")
        return Distribution(self.vertex_array().mean(axis=0))

    def contains(self, p, tol: float = 1e-9) -> bool:
        x = as_probs(p)
        if x.size != self.dim_ambient or self.is_empty:
            return False
        if np.any(x < -tol) or abs(x.sum() - 1.0) > tol:
            return False
        for w, b in self.equalities:
            if abs(float(np.dot(w, x)) - b) > tol * max(1.0, float(np.linalg.norm(w))):
                return False
        for w, b in self.inequalities:
            if float(np.dot(w, x)) - b > tol * max(1.0, float(np.linalg.norm(w))):
                return False
        return True

    def distance(self, p) -> float:
        """Euclidean distance from p to the vertex hull"""
        return hull_distance(as_probs(p), self.vertex_array())

    def hausdorff(self, other: "SimplexPolytope") -> float:
        if self.is_empty and other.is_empty:
            return 0.0
        if self.is_empty or other.is_empty:
            return float("inf")
        a = max(other.distance(v) for v in self.vertices)
        b = max(self.distance(v) for v in other.vertices)
        return max(a, b)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.dim_ambient,
            "vertices": [v.to_list() for v in self.vertices],
            "equalities": [[list(map(float, w)), float(b)] for w, b in self.equalities],
            "inequalities": [[list(map(float, w)), float(b)] for w, b in self.inequalities],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimplexPolytope":
        return cls(
            dim_ambient=int(data["n"]),
            vertices=tuple(Distribution(v) for v in data["vertices"]),
            equalities=tuple((np.asarray(w, dtype=float), float(b)) for w, b in data["equalities"]),
            inequalities=tuple(
                (np.asarray(w, dtype=float), float(b)) for w, b in data["inequalities"]
            ),
        )


def hull_distance(point: np.ndarray, vertices: np.ndarray) -> float:
    """Distance from point to conv(vertices), exact up to the NNLS active set

    With B the vertices shifted by -point, the NNLS solution mu of
    [B; 1] mu ~ [0; 1] gives the hull point nearest to the origin as
    B mu / sum(mu); its KKT conditions are those of the projection.
    """
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    if V.shape[0] == 0:
        return float("inf")
    x = np.asarray(point, dtype=float)
    B = V.T - x[:, None]
    if V.shape[0] == 1:
        return float(np.linalg.norm(B[:, 0]))
    E = np.vstack([B, np.ones(V.shape[0])])
    f = np.zeros(E.shape[0])
    f[-1] = 1.0
    mu, _ = nnls(E, f)
    # sum(mu) > 0: every column of E ends in 1
    return float(np.linalg.norm(B @ (mu / mu.sum())))


def _dedup(points: List[np.ndarray], tol: float) -> List[np.ndarray]:
    unique: List[np.ndarray] = []
    for x in points:
        if all(np.max(np.abs(x - y)) > tol for y in unique):
            unique.append(x)
    return unique


def enumerate_vertices(
    n: int,
    equalities: Sequence[Constraint] = (),
    inequalities: Sequence[Constraint] = (),
    eq_rows: np.ndarray = None,
    tol: float = VERTEX_TOL,
) -> List[Distribution]:
    """Vertices of {p in simplex : equalities, inequalities}

    eq_rows, when given, replaces the equality normals for the solve (an
    orthonormal row basis is better conditioned than raw Jacobian columns).
    """
    if n > MAX_ENUMERATION_N:
        raise DimensionOverflow(n, MAX_ENUMERATION_N)

    if eq_rows is not None:
        rows = [np.ones(n)] + [np.asarray(r, dtype=float) for r in np.atleast_2d(eq_rows) if r.size]
        rhs = [1.0] + [0.0] * (len(rows) - 1)
    else:
        rows = [np.ones(n)] + [np.asarray(w, dtype=float) for w, _ in equalities]
        rhs = [1.0] + [float(b) for _, b in equalities]
    A_eq = np.vstack(rows)
    b_eq = np.asarray(rhs)

    facets = [-np.eye(n)]
    facet_rhs = [np.zeros(n)]
    if inequalities:
        facets.append(np.vstack([np.asarray(w, dtype=float) for w, _ in inequalities]))
        facet_rhs.append(np.asarray([float(b) for _, b in inequalities]))
    F = np.vstack(facets)
    h = np.concatenate(facet_rhs)

    rank_eq = numerical_rank(A_eq)
    need = n - rank_eq
    found: List[np.ndarray] = []
    for combo in itertools.combinations(range(F.shape[0]), need):
        M = np.vstack([A_eq, F[list(combo)]]) if combo else A_eq
        if numerical_rank(M) < n:
            continue
        rhs_m = np.concatenate([b_eq, h[list(combo)]]) if combo else b_eq
        x, *_ = np.linalg.lstsq(M, rhs_m, rcond=None)
        if np.max(np.abs(A_eq @ x - b_eq)) > tol * (1.0 + np.max(np.abs(b_eq))):
            continue
        if np.any(F @ x - h > tol * (1.0 + np.abs(h))):
            continue
        found.append(x)

    points = _dedup(found, tol)
    # drop points inside the hull of the remaining ones (degenerate bases)
    kept = list(points)
    i = 0
    while len(kept) > 2 and i < len(kept):
        others = np.vstack(kept[:i] + kept[i + 1 :])
        if hull_distance(kept[i], others) <= tol:
            kept.pop(i)
        else:
            i += 1
    return [Distribution(np.clip(x, 0.0, None) / np.clip(x, 0.0, None).sum()) for x in kept]


def polytope(
    n: int, equalities: Sequence[Constraint] = (), inequalities: Sequence[Constraint] = ()
) -> SimplexPolytope:
    """Build a SimplexPolytope from H-form constraints"""
    eqs = tuple((np.asarray(w, dtype=float), float(b)) for w, b in equalities)
    ineqs = tuple((np.asarray(w, dtype=float), float(b)) for w, b in inequalities)
    return SimplexPolytope(
        dim_ambient=n,
        vertices=tuple(enumerate_vertices(n, eqs, ineqs)),
        equalities=eqs,
        inequalities=ineqs,
    )


def simplex_section(m: LinearMapOnSimplex, rank_tol: float = 1e-9) -> SimplexPolytope:
    """The polytope {p in simplex : m.matrix.T @ p = 0}"""
    n = m.n
    if n > MAX_ENUMERATION_N:
        raise DimensionOverflow(n, MAX_ENUMERATION_N)
    equalities = tuple((m.matrix[:, j].copy(), 0.0) for j in range(m.d))
    if np.any(m.matrix):
        row_basis = orth(m.matrix, rcond=rank_tol).T
    else:
        row_basis = np.zeros((0, n))
    vertices = enumerate_vertices(n, eq_rows=row_basis)
    return SimplexPolytope(dim_ambient=n, vertices=tuple(vertices), equalities=equalities)


@dataclass(frozen=True)
class Infeasible:
    """Result of a strict LP feasibility test that found no witness"""

    best_slack: float
    reason: str = ""

    def __bool__(self) -> bool:
        return False


def lp_feasible_strict(
    equalities: Sequence[Constraint],
    inequalities: Sequence[Constraint],
    strictness_margin: float = 1e-6,
    n: int = None,
) -> Union[Distribution, Infeasible]:
    """Find p in the simplex with equalities and strict inequalities <p, w> < offset

    Maximizes the minimum slack t of the strict constraints; the problem is
    infeasible when the optimal slack is below strictness_margin.
    """
    rows = [np.asarray(w, dtype=float) for w, _ in list(equalities) + list(inequalities)]
    if n is None:
        if not rows:
            raise InvalidInput("dimension unknown: pass n or at least one constraint")
        n = rows[0].size
    if any(r.size != n for r in rows):
        raise InvalidInput("constraint normals have inconsistent dimensions")

    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_eq = [np.concatenate([np.ones(n), [0.0]])]
    b_eq = [1.0]
    for w, b in equalities:
        A_eq.append(np.concatenate([np.asarray(w, dtype=float), [0.0]]))
        b_eq.append(float(b))
    A_ub, b_ub = [], []
    for w, b in inequalities:
        A_ub.append(np.concatenate([np.asarray(w, dtype=float), [1.0]]))
        b_ub.append(float(b))

    res = linprog(
        c,
        A_ub=np.vstack(A_ub) if A_ub else None,
        b_ub=np.asarray(b_ub) if b_ub else None,
        A_eq=np.vstack(A_eq),
        b_eq=np.asarray(b_eq),
        bounds=[(0, None)] * n + [(None, 1.0)],
        method="highs",
    )
    if res.status != 0:
        return Infeasible(best_slack=float("-inf"), reason=res.message)
    slack = float(res.x[-1])
    if slack < strictness_margin:
        return Infeasible(best_slack=slack, reason="optimal slack below margin")
    x = np.clip(res.x[:n], 0.0, None)
    return Distribution(x / x.sum())


def simplex_grid(n: int, resolution: float) -> np.ndarray:
    """All lattice distributions with coordinates in multiples of resolution"""
    steps = int(round(1.0 / resolution))
    if steps < 1:
        raise InvalidInput(f"resolution {resolution} is coarser than the simplex")
    points = []
    # stars and bars over n - 1 separators
    for bars in itertools.combinations(range(steps + n - 1), n - 1):
        prev = -1
        counts = []
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(steps + n - 1 - prev - 1)
        points.append(counts)
    return np.asarray(points, dtype=float) / steps


def vertex_distributions(n: int) -> List[Distribution]:
    return [Distribution(np.eye(n)[y]) for y in range(n)]
