#!/usr/bin/env python3
"""Rich-based terminal summaries for ELICITCHECK

Everything goes to stderr; stdout is reserved for JSON and CSV output.
"""

import math
from typing import Any, Dict, List, Sequence

from rich.console import Console, Group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from .calibration import CalibrationProbe, SweepSummary
from .elicitation import ElicitationVerdict
from .targets import OrderabilityCertificate, TargetCell, TargetLoss


def _fmt(x: float, digits: int = 6) -> str:
    if math.isinf(x):
        return "inf"
    return f"{x:.{digits}g}"


def _probs(values: Sequence[float]) -> str:
    return "(" + ", ".join(f"{v:.4g}" for v in values) + ")"


class RichUI:
    """Builds rich panels for targets, verdicts, probes and constructions"""

    THEMES = {
        "light": {"primary": "cyan", "ok": "green", "bad": "red", "muted": "bright_black"},
        "contrast": {"primary": "yellow", "ok": "bright_green", "bad": "bright_red", "muted": "white"},
    }

    def __init__(self, theme: str = "light", quiet: bool = False):
        self.console = Console(stderr=True, quiet=quiet)
        self.theme = self.THEMES.get(theme, self.THEMES["light"])

    def _labels(self, t: TargetLoss, reports) -> str:
        return "{" + ", ".join(t.label(r) for r in sorted(reports)) + "}"

    def target_panel(
        self,
        t: TargetLoss,
        cells: List[TargetCell],
        witnesses: Dict[int, Any],
        cert: OrderabilityCertificate,
    ) -> Panel:
        """Cells with vertices and witnesses, plus the orderability verdict"""
        table = Table(show_header=True, header_style=self.theme["primary"], expand=True)
        table.add_column("Report")
        table.add_column("Loss vector")
        table.add_column("Cell vertices")
        table.add_column("Witness")
        for c in cells:
            table.add_row(
                t.label(c.report),
                _probs(t.loss_matrix[c.report]),
                "\n".join(_probs(v.to_list()) for v in c.polytope.vertices),
                _probs(witnesses[c.report].to_list()) if c.report in witnesses else "-",
            )

        status = Text()
        if cert.ordered:
            status.append("orderable: ", style=self.theme["ok"])
            status.append(" -> ".join(t.label(r) for r in cert.enumeration))
        else:
            status.append("not orderable", style=self.theme["bad"])
            status.append(
                "  edges: " + ", ".join(f"{t.label(a)}-{t.label(b)}" for a, b in cert.intersection_edges)
            )
        return Panel(
            Group(table, status),
            title=f"Target {t.name or ''} (k={t.k}, n={t.n})",
            border_style=self.theme["primary"],
        )

    def verdict_panel(self, verdict: ElicitationVerdict, t: TargetLoss) -> Panel:
        style = self.theme["bad"] if verdict.violated else self.theme["ok"]
        lines = [
            Text(f"{verdict.claim.upper()}: {verdict.status}", style=style),
            Text(f"reports checked: {verdict.entries_checked}", style=self.theme["muted"]),
        ]
        if verdict.degenerate_entries:
            lines.append(Text(f"degenerate level sets: {verdict.degenerate_entries}", style=self.theme["bad"]))
        cert = verdict.certificate
        if cert is not None:
            lines.append(Text(f"u = {_probs(cert.u)}"))
            for corner, g in zip(cert.corners, cert.corner_gammas):
                lines.append(Text(f"  corner {_probs(corner.to_list())} -> gamma {self._labels(t, g)}"))
        return Panel(Group(*lines), title="Verdict", border_style=style)

    def probe_panel(self, probe: CalibrationProbe, t: TargetLoss) -> Panel:
        style = self.theme["bad"] if probe.violated else self.theme["ok"]
        table = Table(show_header=False, box=None)
        table.add_column("Field", style=self.theme["primary"])
        table.add_column("Value")
        table.add_row("p", _probs(probe.p.to_list()))
        table.add_row("gamma(p)", self._labels(t, probe.gamma))
        table.add_row("optimum", f"{_fmt(probe.opt_value, 10)} at {_probs(probe.argmin)}")
        table.add_row("restricted", _fmt(probe.restricted_value, 10))
        table.add_row("gap", _fmt(probe.gap))
        table.add_row("witnesses", str(len(probe.witness_sequence)))
        title = "Calibration violated" if probe.violated else "Positive gap"
        return Panel(table, title=title, border_style=style)

    def sweep_panel(self, summary: SweepSummary) -> Panel:
        style = self.theme["bad"] if summary.violations else self.theme["ok"]
        lines = [
            Text(f"probes: {summary.probes}"),
            Text(f"min interior gap: {_fmt(summary.min_interior_gap)}"),
            Text(f"violations: {len(summary.violations)}", style=style),
        ]
        for p in summary.violations[:10]:
            lines.append(Text(f"  {_probs(p)}", style=self.theme["muted"]))
        if summary.errors:
            lines.append(Text(f"errors: {len(summary.errors)}", style=self.theme["bad"]))
        return Panel(Group(*lines), title="Sweep", border_style=style)

    def construction_panel(self, result: Any, t: TargetLoss) -> Panel:
        table = Table(show_header=True, header_style=self.theme["primary"])
        table.add_column("x")
        table.add_column("v(x)")
        table.add_column("Region report")
        s = result.surrogate
        for i, (x, v) in enumerate(zip(s.knots, s.gradient_values)):
            region = t.label(result.enumeration[min(i, len(result.enumeration) - 1)])
            table.add_row(f"{x:g}", _probs(v), region)
        certs = Text()
        for c in result.certificates:
            mark = "ok" if c.passed else "FAIL"
            certs.append(
                f"boundary {t.label(c.reports[0])}|{t.label(c.reports[1])}: residual "
                f"{c.max_residual:.2e} {mark}\n",
                style=self.theme["ok"] if c.passed else self.theme["bad"],
            )
        return Panel(Group(table, certs), title="Constructed surrogate", border_style=self.theme["primary"])

    def show(self, renderable):
        self.console.print(renderable)

    def error(self, message: str):
        self.console.print(f"[red]Error: {message}[/red]")
