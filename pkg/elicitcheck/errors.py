"""Exception hierarchy for ELICITCHECK

Every error carries the process exit code the CLI maps it to.
Exit code 1 is reserved for "violation found".
"""

from typing import List, Optional, Sequence, Tuple


class ElicitError(Exception):
    """Base class for all library errors"""

    exit_code = 7


class InvalidInput(ElicitError):
    """Malformed target / surrogate / config input"""

    exit_code = 2


class InvalidDistribution(InvalidInput):
    """Vector is not a point of the probability simplex"""


class DimensionOverflow(InvalidInput):
    """Vertex enumeration requested beyond the supported simplex size"""

    def __init__(self, n: int, limit: int):
        super().__init__(f"n = {n} exceeds the vertex enumeration limit {limit}")
        self.n = n
        self.limit = limit


class RedundantReport(ElicitError):
    """A report is never the unique minimizer of the expected target loss"""

    exit_code = 3

    def __init__(self, report: int, label: str = ""):
        name = f"{report} ({label})" if label else str(report)
        super().__init__(f"report {name} is redundant")
        self.report = report


class NotOrderable(ElicitError):
    """Intersection graph of the target cells is not a path"""

    exit_code = 4

    def __init__(self, edges: Sequence[Tuple[int, int]]):
        super().__init__(f"target is not orderable, intersection edges {list(edges)}")
        self.edges = list(edges)


class NoConvergence(ElicitError):
    """Minimizer did not reach the gradient tolerance"""

    exit_code = 5

    def __init__(self, max_iters: int, p: Optional[Sequence[float]] = None, detail: str = ""):
        where = f" at p = {list(p)}" if p is not None else ""
        msg = f"no convergence after {max_iters} iterations{where}"
        super().__init__(f"{msg}: {detail}" if detail else msg)
        self.max_iters = max_iters
        self.p = None if p is None else list(p)


class SearchBudgetExceeded(ElicitError):
    """Calibration search used more loss evaluations than allowed"""

    exit_code = 5

    def __init__(self, evals: int):
        super().__init__(f"search budget exceeded after {evals} loss evaluations")
        self.evals = evals


class NonDifferentiable(ElicitError):
    """Jacobian requested at a kink of a nonsmooth surrogate"""

    exit_code = 6

    def __init__(self, u: Sequence[float]):
        super().__init__(f"surrogate is not differentiable at u = {list(u)}")
        self.u = list(u)


class BoundaryLevelSetMismatch(ElicitError):
    """Level set at a boundary report differs from the target boundary"""

    exit_code = 6

    def __init__(self, boundary: int, distance: float, detail: str = ""):
        msg = f"boundary {boundary}: level set differs from target boundary (distance {distance:.3g})"
        super().__init__(f"{msg}; {detail}" if detail else msg)
        self.boundary = boundary
        self.distance = distance


class ScalingInfeasible(ElicitError):
    """No positive scaling of boundary normals is coordinatewise monotone"""

    exit_code = 6


class CertificateFailure(ElicitError):
    """A construction certificate did not replay"""

    exit_code = 6

    def __init__(self, boundary: Optional[int], detail: str = ""):
        where = f" at boundary {boundary}" if boundary is not None else ""
        super().__init__(f"certificate failed{where}: {detail}")
        self.boundary = boundary


class IERequired(ElicitError):
    """Operation needs an IE verdict without violations"""

    exit_code = 6


class StrongIERequired(ElicitError):
    """Operation needs a strong IE verdict without violations"""

    exit_code = 6


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, ElicitError):
        return error.exit_code
    return 7


__all__: List[str] = [
    "ElicitError",
    "InvalidInput",
    "InvalidDistribution",
    "DimensionOverflow",
    "RedundantReport",
    "NotOrderable",
    "NoConvergence",
    "SearchBudgetExceeded",
    "NonDifferentiable",
    "BoundaryLevelSetMismatch",
    "ScalingInfeasible",
    "CertificateFailure",
    "IERequired",
    "StrongIERequired",
    "exit_code_for",
]
