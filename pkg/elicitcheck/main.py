#!/usr/bin/env python3
"""Command-line front end for ELICITCHECK

Exit codes: 0 no violation found, 1 violation found, 2 invalid input,
3 redundant report, 4 not orderable, 5 no convergence / search budget,
6 certificate or link construction failure, 7 other errors.
"""

import argparse
import json
import sys
from typing import Any, Dict, Optional

from rich.console import Console

from .calibration import gap, sweep as run_sweep, write_csv, write_rows
from .config import RENDER_THEMES, RunConfig
from .construct1d import construct
from .elicitation import build_atlas, check_ie, check_strong_ie, replay_certificate
from .errors import ElicitError, InvalidInput, exit_code_for
from .geometry import Distribution, parse_number
from .links import build_interval_link, build_projection_link, load_link, sign_link
from .logger import configure_logger, log_error, log_run_info
from .rich_ui import RichUI
from .surrogates import NONSMOOTH_DEMO, SurrogateLoss, load_surrogate, validate_assumption1
from .targets import TargetLoss, cells, load_target, orderability, validate_nonredundant

COMMANDS = ("analyze-target", "check", "construct-1d", "falsify", "sweep", "render")


class ElicitCheck:
    """Runs one command against a RunConfig"""

    def __init__(self, config: RunConfig, link_spec: Optional[str] = None, quiet: bool = False):
        self.logger = configure_logger(config.log_dir, config.log_level)
        config.validate()
        self.config = config
        self.link_spec = link_spec
        self.ui = RichUI(config.theme, quiet=quiet)
        self.config.optimizer.seed = config.seed
        self.config.calibration.radius = config.radius
        self.logger.cleanup_old_logs()
        log_run_info()

    # inputs

    def target(self) -> TargetLoss:
        if not self.config.target_path:
            raise InvalidInput("--target is required")
        return load_target(self.config.target_path)

    def surrogate(self) -> SurrogateLoss:
        if not self.config.surrogate_spec:
            raise InvalidInput("--surrogate is required")
        return load_surrogate(self.config.surrogate_spec)

    def point(self, n: int) -> Distribution:
        if not self.config.point:
            raise InvalidInput("--point is required, e.g. --point 0.5,0.5 or --point 1/4,3/4")
        p = Distribution([parse_number(x) for x in self.config.point.split(",")])
        if p.n != n:
            raise InvalidInput(f"--point has {p.n} coordinates, target has {n} outcomes")
        return p

    def link(self, s: SurrogateLoss, t: TargetLoss):
        """Link from --link, else the natural link for the pair"""
        spec = self.link_spec or "auto"
        if spec == "sign":
            return sign_link(t)
        if spec == "interval":
            return build_interval_link(s, t, self.config.tolerances, self.config.optimizer)
        if spec in ("projection", "projection-ie"):
            atlas = self._atlas(s, t)
            mode = "ie" if spec == "projection-ie" else "strong"
            return build_projection_link(s, t, atlas, mode, self.config.tolerances)
        if spec != "auto":
            return load_link(spec, s, t)

        if s.smoothness == NONSMOOTH_DEMO and "⊥" in t.report_labels:
            return sign_link(t)
        if s.d == 1 and orderability(t, self.config.tolerances.lp_margin).ordered:
            return build_interval_link(s, t, self.config.tolerances, self.config.optimizer)
        atlas = self._atlas(s, t)
        if check_strong_ie(atlas, t).violated:
            self.logger.log_warning("strong IE violated, using the forced IE projection link")
            return build_projection_link(s, t, atlas, "ie", self.config.tolerances)
        return build_projection_link(s, t, atlas, "strong", self.config.tolerances)

    def _atlas(self, s: SurrogateLoss, t: TargetLoss):
        return build_atlas(s, t, self.config.resolution, self.config.tolerances, self.config.optimizer)

    def _check_search_box(self, s: SurrogateLoss):
        """Coercivity evidence that the restricted search box holds the infimum"""
        report = validate_assumption1(s, self.config.radius, self.config.optimizer)
        if report.passed:
            self.logger.log_info(f"{s.name}: compact-argmin evidence holds within radius {self.config.radius:g}")
            return
        for c in report.components:
            if not c.passed:
                self.logger.log_warning(f"search box radius {self.config.radius:g} may miss the infimum: {c.detail}")

    def emit(self, document: Dict[str, Any]):
        document.setdefault("seed", self.config.seed)
        text = json.dumps(document, indent=2, ensure_ascii=False)
        if self.config.out:
            with open(self.config.out, "w", encoding="utf-8") as f:
                f.write(text + "\n")
            self.logger.log_info(f"wrote {self.config.out}")
        else:
            sys.stdout.write(text + "\n")

    # commands

    def analyze_target(self) -> int:
        t = self.target()
        witnesses = validate_nonredundant(t, self.config.tolerances.lp_margin)
        cell_list = cells(t)
        cert = orderability(t, self.config.tolerances.lp_margin)
        self.ui.show(self.ui.target_panel(t, cell_list, witnesses, cert))
        if self.config.svg:
            from .render import render_target

            render_target(t, self.config.svg, RENDER_THEMES[self.config.theme])
        self.emit(
            {
                "target": t.to_dict(),
                "cells": [
                    {"report": c.report, "label": t.label(c.report), "polytope": c.polytope.to_dict()}
                    for c in cell_list
                ],
                "witnesses": {t.label(r): p.to_list() for r, p in witnesses.items()},
                "orderability": cert.to_dict(t),
            }
        )
        return 0

    def check(self) -> int:
        t, s = self.target(), self.surrogate()
        if self.config.claim not in ("ie", "sie"):
            raise InvalidInput(f"--claim must be ie or sie, got {self.config.claim!r}")
        validate_nonredundant(t, self.config.tolerances.lp_margin)
        atlas = self._atlas(s, t)
        verdict = check_ie(atlas, t) if self.config.claim == "ie" else check_strong_ie(atlas, t)
        self.ui.show(self.ui.verdict_panel(verdict, t))
        if verdict.violated and not replay_certificate(s, t, verdict, self.config.tolerances):
            self.logger.log_warning("violation certificate did not replay standalone")
        if self.config.svg:
            from .render import render_target

            render_target(t, self.config.svg, RENDER_THEMES[self.config.theme], atlas)
        document = verdict.to_dict()
        document.update({"surrogate": s.name, "target": t.name})
        self.emit(document)
        return 1 if verdict.violated else 0

    def construct_1d(self) -> int:
        t = self.target()
        result = construct(t, self.config.tolerances)
        self.ui.show(self.ui.construction_panel(result, t))
        self.emit(result.to_dict(t))
        return 0

    def falsify(self) -> int:
        t, s = self.target(), self.surrogate()
        link = self.link(s, t)
        self._check_search_box(s)
        probe = gap(s, t, link, self.point(t.n), self.config.calibration, self.config.tolerances)
        self.ui.show(self.ui.probe_panel(probe, t))
        document = probe.to_dict()
        document["link"] = link.to_dict()
        self.emit(document)
        return 1 if probe.violated else 0

    def sweep(self) -> int:
        t, s = self.target(), self.surrogate()
        link = self.link(s, t)
        self._check_search_box(s)
        probes, summary = run_sweep(
            s, t, link, self.config.resolution, self.config.calibration, self.config.tolerances
        )
        self.ui.show(self.ui.sweep_panel(summary))
        if self.config.out:
            write_csv(probes, self.config.out)
            self.logger.log_info(f"wrote {self.config.out}")
        elif probes:
            write_rows(probes, sys.stdout)
        return 1 if summary.violations else 0

    def render(self) -> int:
        from .render import render_loss_curves, render_target

        path = self.config.svg or self.config.out
        if not path:
            raise InvalidInput("render needs --svg or --out")
        t = self.target()
        if self.config.surrogate_spec:
            s = self.surrogate()
            if t.n == 2 and s.d == 1:
                render_loss_curves(s, [(q, 1 - q) for q in (0.1, 0.25, 0.5, 0.75, 0.9)], path)
                return 0
            render_target(t, path, RENDER_THEMES[self.config.theme], self._atlas(s, t))
        else:
            render_target(t, path, RENDER_THEMES[self.config.theme])
        return 0

    def run(self) -> int:
        handlers = {
            "analyze-target": self.analyze_target,
            "check": self.check,
            "construct-1d": self.construct_1d,
            "falsify": self.falsify,
            "sweep": self.sweep,
            "render": self.render,
        }
        return handlers[self.config.command]()


def build_parser() -> argparse.ArgumentParser:
    from . import __version__

    parser = argparse.ArgumentParser(
        prog="elicitcheck",
        description="Indirect elicitation, strong IE and calibration checks for surrogate losses",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--target", metavar="PATH", help="target JSON file or builtin:NAME[:ARG]")
    parser.add_argument("--surrogate", metavar="SPEC", help="surrogate JSON file or builtin:NAME[:ARG]")
    parser.add_argument("--link", metavar="SPEC", help="auto, sign, interval, projection, projection-ie or a link JSON file")
    parser.add_argument("--claim", default="ie", choices=("ie", "sie"))
    parser.add_argument("--point", metavar="P", help="distribution for falsify, comma separated")
    parser.add_argument("--resolution", type=float, default=0.05, help="simplex lattice spacing (default: 0.05)")
    parser.add_argument("--radius", type=float, default=10.0, help="search box radius (default: 10)")
    parser.add_argument("--tie-tol", type=float, default=1e-9)
    parser.add_argument("--gap-tol", type=float, default=1e-6)
    parser.add_argument("--grad-tol", type=float, default=1e-9)
    parser.add_argument("--rank-tol", type=float, default=1e-9)
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    parser.add_argument("--svg", metavar="PATH", help="write an SVG diagram")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--theme", default="light", choices=sorted(RENDER_THEMES))
    parser.add_argument("--log-level", default="INFO")
    parser.add_argument("--log-dir", default="/tmp/elicitcheck_logs")
    parser.add_argument("-q", "--quiet", action="store_true", help="no terminal panels")
    parser.add_argument("-v", "--version", action="version", version=f"elicitcheck {__version__}")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(
        command=args.command,
        target_path=args.target,
        surrogate_spec=args.surrogate,
        resolution=args.resolution,
        claim=args.claim,
        point=args.point,
        radius=args.radius,
        out=args.out,
        svg=args.svg,
        seed=args.seed,
        theme=args.theme,
        log_level=args.log_level,
        log_dir=args.log_dir,
    )
    config.tolerances.tie_tol = args.tie_tol
    config.tolerances.rank_tol = args.rank_tol
    config.calibration.gap_tol = args.gap_tol
    config.optimizer.grad_tol = args.grad_tol
    return config


def main(argv=None) -> int:
    """Entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    console = Console(stderr=True)

    try:
        app = ElicitCheck(config_from_args(args), args.link, quiet=args.quiet)
        code = app.run()
    except ElicitError as e:
        console.print(f"[red]Error: {e}[/red]")
        log_error(e, args.command)
        code = exit_code_for(e)
    except Exception as e:
        console.print(f"[red]Error: {e}[/red]")
        console.print_exception()
        log_error(e, args.command)
        code = 7
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
