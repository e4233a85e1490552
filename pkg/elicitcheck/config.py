#!/usr/bin/env python3
"""Configuration management for ELICITCHECK"""

from dataclasses import dataclass, field
from typing import Dict, Optional

from .errors import InvalidInput


@dataclass
class Tolerances:
    """Numerical tolerances shared by the geometry and elicitation layers"""

    rank_tol: float = 1e-9  # relative to the largest singular value
    tie_tol: float = 1e-9  # gamma(p) ties
    corner_tie_tol: float = 1e-7  # gamma at level-set corners
    membership_tol: float = 1e-9
    lp_margin: float = 1e-6
    hausdorff_tol: float = 1e-6

    def validate(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise InvalidInput(f"tolerance {name} must be positive, got {value}")


@dataclass
class OptimizerConfig:
    """Damped Newton / gradient descent settings for surrogate minimization"""

    grad_tol: float = 1e-9
    max_iters: int = 100_000
    flat_tol: float = 1e-10  # loss-flat region for 1-d interval recovery
    flat_grad_tol: float = 1e-8
    unique_width: float = 1e-6
    curvature_tol: float = 1e-10
    restarts: int = 8
    restart_radius: float = 10.0
    armijo: float = 1e-4
    backtrack: float = 0.5
    seed: int = 0
    use_analytic: bool = False
    recover_interval: bool = True  # d = 1 flat-region search after convergence


@dataclass
class CalibrationConfig:
    """Search settings for the calibration falsifier"""

    radius: float = 10.0  # box ||u||_inf <= radius
    grid: int = 4001  # points per axis, d = 1
    grid_2d: int = 201  # points per axis, d = 2
    grid_nd: int = 21  # points per axis, d >= 3
    gap_tol: float = 1e-6
    witness_steps: int = 30
    witness_max_iters: int = 2000  # per minimization along a witness sequence
    refine_tol: float = 1e-10
    max_evals: int = 5_000_000
    use_analytic: bool = True


@dataclass
class RenderTheme:
    """Colour theme for SVG diagrams"""

    name: str
    boundary: str
    level_set: str
    cells: tuple


@dataclass
class RunConfig:
    """Command-line run configuration"""

    command: str = ""
    target_path: Optional[str] = None
    surrogate_spec: Optional[str] = None
    resolution: float = 0.05
    claim: str = "ie"
    point: Optional[str] = None
    radius: float = 10.0
    out: Optional[str] = None
    svg: Optional[str] = None
    seed: int = 0
    theme: str = "light"
    log_level: str = "INFO"
    log_dir: str = "/tmp/elicitcheck_logs"
    tolerances: Tolerances = field(default_factory=Tolerances)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    calibration: CalibrationConfig = field(default_factory=CalibrationConfig)

    def validate(self):
        self.tolerances.validate()
        if not 0 < self.resolution <= 1:
            raise InvalidInput(f"resolution must lie in (0, 1], got {self.resolution}")
        if not self.radius > 0:
            raise InvalidInput(f"radius must be positive, got {self.radius}")
        if not self.calibration.gap_tol > 0 or not self.optimizer.grad_tol > 0:
            raise InvalidInput("gap_tol and grad_tol must be positive")
        if self.theme not in RENDER_THEMES:
            raise InvalidInput(f"unknown theme {self.theme!r}")


RENDER_THEMES: Dict[str, RenderTheme] = {
    "light": RenderTheme(
        "light",
        boundary="#e8a87c",
        level_set="#1f4e9c",
        cells=("#fdf1e6", "#eef4fb", "#f3f8ee", "#fbeef3", "#f5f5f5"),
    ),
    "contrast": RenderTheme(
        "contrast",
        boundary="#c0392b",
        level_set="#2471a3",
        cells=("#fadbd8", "#d6eaf8", "#d5f5e3", "#fcf3cf", "#e8daef"),
    ),
}
