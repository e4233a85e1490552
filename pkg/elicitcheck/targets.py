"""
Discrete target losses and the finite properties they elicit

A target is a k x n loss matrix; row r is the loss vector of report r over
the n outcomes. Cells are the polytopes of distributions for which a report
is optimal. Built-in targets live at the bottom of the module.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .errors import InvalidInput, RedundantReport
from .geometry import (
    Distribution,
    Infeasible,
    SimplexPolytope,
    as_probs,
    lp_feasible_strict,
    parse_number,
    polytope,
)
from .logger import get_logger


@dataclass(frozen=True, eq=False)
class TargetLoss:
    """k x n discrete loss, entry (r, y) is the loss of report r at outcome y"""

    loss_matrix: np.ndarray
    report_labels: Tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        arr = np.array(self.loss_matrix, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
            raise InvalidInput(f"target loss must be k x n with k, n >= 2, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("target loss has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "loss_matrix", arr)
        labels = tuple(str(x) for x in self.report_labels) or tuple(
            str(r + 1) for r in range(arr.shape[0])
        )
        if len(labels) != arr.shape[0]:
            raise InvalidInput(f"{len(labels)} labels for {arr.shape[0]} reports")
        object.__setattr__(self, "report_labels", labels)

    @property
    def k(self) -> int:
        return int(self.loss_matrix.shape[0])

    @property
    def n(self) -> int:
        return int(self.loss_matrix.shape[1])

    def expected(self, p) -> np.ndarray:
        """Expected loss of every report under p"""
        x = as_probs(p)
        if x.size != self.n:
            raise InvalidInput(f"distribution has {x.size} outcomes, target has {self.n}")
        return self.loss_matrix @ x

    def label(self, r: int) -> str:
        return self.report_labels[r]

    def index_of(self, label: str) -> int:
        try:
            return self.report_labels.index(str(label))
        except ValueError as e:
            raise InvalidInput(f"unknown report label {label!r}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "loss": self.loss_matrix.tolist(),
            "labels": list(self.report_labels),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TargetLoss":
        try:
            rows = [[parse_number(x) for x in row] for row in data["loss"]]
        except (KeyError, TypeError) as e:
            raise InvalidInput(f"target JSON needs a 'loss' matrix: {e}") from e
        target = cls(np.asarray(rows, dtype=float), tuple(data.get("labels", ())), data.get("name", ""))
        if "n" in data and int(data["n"]) != target.n:
            raise InvalidInput(f"declared n = {data['n']} but loss has {target.n} columns")
        if "k" in data and int(data["k"]) != target.k:
            raise InvalidInput(f"declared k = {data['k']} but loss has {target.k} rows")
        return target


@dataclass(frozen=True)
class TargetCell:
    report: int
    polytope: SimplexPolytope


@dataclass
class OrderabilityCertificate:
    """Intersection graph of the cells and, when it is a path, its order"""

    ordered: bool
    enumeration: Optional[Tuple[int, ...]] = None
    intersection_edges: List[Tuple[int, int]] = field(default_factory=list)
    edge_witnesses: Dict[Tuple[int, int], Distribution] = field(default_factory=dict)

    def to_dict(self, target: Optional[TargetLoss] = None) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "ordered": self.ordered,
            "enumeration": list(self.enumeration) if self.enumeration else None,
            "intersection_edges": [list(e) for e in self.intersection_edges],
        }
        if target is not None and self.enumeration:
            out["enumeration_labels"] = [target.label(r) for r in self.enumeration]
        return out


def gamma(t: TargetLoss, p, tie_tol: float = 1e-9) -> Set[int]:
    """All reports whose expected loss is within tie_tol of the minimum"""
    values = t.expected(p)
    best = values.min()
    return {int(r) for r in np.flatnonzero(values <= best + tie_tol)}


def _cell_inequalities(t: TargetLoss, r: int) -> List[Tuple[np.ndarray, float]]:
    return [(t.loss_matrix[r] - t.loss_matrix[s], 0.0) for s in range(t.k) if s != r]


def cell(t: TargetLoss, r: int) -> TargetCell:
    """gamma_r = {p : <p, l(r) - l(s)> <= 0 for all s}"""
    if not 0 <= r < t.k:
        raise InvalidInput(f"report index {r} out of range for k = {t.k}")
    return TargetCell(report=r, polytope=polytope(t.n, inequalities=_cell_inequalities(t, r)))


def cells(t: TargetLoss) -> List[TargetCell]:
    return [cell(t, r) for r in range(t.k)]


def boundary(t: TargetLoss, r: int, s: int) -> SimplexPolytope:
    """gamma_r intersected with gamma_s, as a hyperplane section with cell constraints"""
    ineqs = _cell_inequalities(t, r) + _cell_inequalities(t, s)
    return polytope(t.n, equalities=[(t.loss_matrix[s] - t.loss_matrix[r], 0.0)], inequalities=ineqs)


def validate_nonredundant(t: TargetLoss, margin: float = 1e-6) -> Dict[int, Distribution]:
    """LP witness per report where it beats every other report by at least margin"""
    witnesses: Dict[int, Distribution] = {}
    for r in range(t.k):
        result = lp_feasible_strict([], _cell_inequalities(t, r), margin, n=t.n)
        if isinstance(result, Infeasible):
            raise RedundantReport(r, t.label(r))
        witnesses[r] = result
    return witnesses


def _edge_witness(t: TargetLoss, r: int, s: int, margin: float) -> Union[Distribution, Infeasible]:
    strict = [(-np.eye(t.n)[i], 0.0) for i in range(t.n)]
    strict += [
        (t.loss_matrix[r] - t.loss_matrix[o], 0.0) for o in range(t.k) if o not in (r, s)
    ]
    tie = [(t.loss_matrix[r] - t.loss_matrix[s], 0.0)]
    return lp_feasible_strict(tie, strict, margin, n=t.n)


def _path_order(k: int, edges: List[Tuple[int, int]]) -> Optional[Tuple[int, ...]]:
    if len(edges) != k - 1:
        return None
    adjacency: Dict[int, List[int]] = {r: [] for r in range(k)}
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    degrees = sorted(len(v) for v in adjacency.values())
    if degrees != [1, 1] + [2] * (k - 2):
        return None
    start = min(r for r, v in adjacency.items() if len(v) == 1)
    order = [start]
    prev = -1
    while len(order) < k:
        nxt = [x for x in adjacency[order[-1]] if x != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return tuple(order) if len(set(order)) == k else None


def orderability(t: TargetLoss, margin: float = 1e-6) -> OrderabilityCertificate:
    """Build the intersection graph of the cells and test whether it is a path"""
    logger = get_logger()
    edges: List[Tuple[int, int]] = []
    witnesses: Dict[Tuple[int, int], Distribution] = {}
    for r in range(t.k):
        for s in range(r + 1, t.k):
            result = _edge_witness(t, r, s, margin)
            if not isinstance(result, Infeasible):
                edges.append((r, s))
                witnesses[(r, s)] = result
    order = _path_order(t.k, edges)
    logger.log_debug(f"intersection edges {edges}, path order {order}")
    return OrderabilityCertificate(
        ordered=order is not None,
        enumeration=order,
        intersection_edges=edges,
        edge_witnesses=witnesses,
    )


def special_points(t: TargetLoss) -> List[Distribution]:
    """Cell vertices plus barycenters of every nonempty pairwise boundary"""
    points: List[Distribution] = []
    for c in cells(t):
        points.extend(c.polytope.vertices)
    for r in range(t.k):
        for s in range(r + 1, t.k):
            b = boundary(t, r, s)
            if not b.is_empty:
                points.append(b.barycenter())
    unique: List[Distribution] = []
    for p in points:
        if not any(p.close_to(q, 1e-9) for q in unique):
            unique.append(p)
    return unique


# Built-in targets


def abstain(alpha: float = 0.25) -> TargetLoss:
    """Binary classification with abstention at cost alpha; outcomes ordered (+1, -1)"""
    if not 0 < alpha < 0.5:
        raise InvalidInput(f"abstain level must lie in (0, 1/2), got {alpha}")
    return TargetLoss(
        np.array([[1.0, 0.0], [alpha, alpha], [0.0, 1.0]]),
        ("-1", "⊥", "+1"),
        name=f"abstain({alpha:g})",
    )


def ordinal(
    n: int = 3,
    g: Union[None, Sequence[float], Callable[[int], float]] = None,
    k: Optional[int] = None,
) -> TargetLoss:
    """Ordinal loss l(r)_y = g(|y - r|) with reports at positions 1..k"""
    k = n if k is None else k
    if n < 2 or not 2 <= k <= n:
        raise InvalidInput(f"ordinal target needs 2 <= k <= n, got k = {k}, n = {n}")
    if g is None:
        values = [float(m) for m in range(n)]
    elif callable(g):
        values = [float(g(m)) for m in range(n)]
    else:
        values = [parse_number(x) for x in g]
    if len(values) < n:
        raise InvalidInput(f"g needs {n} values, got {len(values)}")
    if values[0] != 0 or any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidInput("g must start at 0 and be strictly increasing")
    loss = np.array([[values[abs(y - r)] for y in range(n)] for r in range(k)])
    return TargetLoss(loss, tuple(str(r + 1) for r in range(k)), name=f"ordinal({n})")


def zero_one(n: int = 3) -> TargetLoss:
    if n < 2:
        raise InvalidInput(f"0-1 loss needs n >= 2, got {n}")
    return TargetLoss(1.0 - np.eye(n), name=f"zero_one({n})")


def _two_report(second: Sequence[float], name: str) -> TargetLoss:
    return TargetLoss(np.array([[1.0, 1.0, 1.0], list(second)]), ("1", "2"), name=name)


def ce_target(which: int) -> TargetLoss:
    """The two-report targets separating IE, strong IE and neither for the 2-d quadratic surrogate"""
    rows = {
        1: (2.5, 1.25, 0.0),
        2: (2.0, 1.0, 0.0),
        3: (5.0 / 3.0, 5.0 / 6.0, 0.0),
    }
    if which not in rows:
        raise InvalidInput(f"unknown two-report target {which}, expected 1, 2 or 3")
    return _two_report(rows[which], f"ce_l{which}")


def random_ordinal_target(rng: np.random.Generator, k: int, n: int) -> TargetLoss:
    """Ordinal target with a random strictly increasing convex g"""
    increments = np.sort(rng.uniform(0.2, 2.0, size=n - 1))
    g = np.concatenate([[0.0], np.cumsum(increments)])
    target = ordinal(n, list(g), k=k)
    return TargetLoss(target.loss_matrix, target.report_labels, name=f"random_ordinal({k},{n})")


BUILTIN_TARGETS: Dict[str, Callable[..., TargetLoss]] = {
    "abstain": lambda arg=None: abstain(0.25 if arg is None else parse_number(arg)),
    "ordinal": lambda arg=None: ordinal(3 if arg is None else int(arg)),
    "zero_one": lambda arg=None: zero_one(3 if arg is None else int(arg)),
    "ce_l1": lambda arg=None: ce_target(1),
    "ce_l2": lambda arg=None: ce_target(2),
    "ce_l3": lambda arg=None: ce_target(3),
}


def load_target(spec: str) -> TargetLoss:
    """Load a target from a JSON file or a "builtin:name[:arg]" string"""
    if spec.startswith("builtin:"):
        parts = spec.split(":")
        name = parts[1]
        arg = parts[2] if len(parts) > 2 else None
        if name not in BUILTIN_TARGETS:
            raise InvalidInput(
                f"unknown builtin target {name!r}; known: {', '.join(sorted(BUILTIN_TARGETS))}"
            )
        return BUILTIN_TARGETS[name](arg)
    try:
        with open(spec, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInput(f"cannot read target {spec}: {e}") from e
    return TargetLoss.from_dict(data)
