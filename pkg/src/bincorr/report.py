"""
Run reports: everything known about one state, as a record and as text.

The JSON form of a RunReport is a valid state file (kind, label and
amplitudes or matrix at the top level) with the analysis fields added, so
an emitted report can be fed back to `analyze`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from bincorr.correlation import CorrMatrix, correlation_matrix
from bincorr.detect import (
    ProtocolTrace,
    Verdict,
    WernerReport,
    classify_pure_by_rank,
    ppt_verdict,
    schmidt_verdict,
)
from bincorr.linalg import det3
from bincorr.qstate import BlochForm, PureState, bloch_decompose, purity, to_density
from bincorr.states import State, spec_from_state


@dataclass(frozen=True, eq=False)
class RunReport:
    label: str
    state: State
    bloch: BlochForm
    corr: CorrMatrix
    det_c: float
    purity: float
    verdicts: list[Verdict] = field(default_factory=list)
    protocol: Optional[Verdict] = None
    trace: Optional[ProtocolTrace] = None

    def to_dict(self) -> dict:
        out = spec_from_state(self.state, self.label).model_dump(exclude_none=True)
        out.update(
            {
                "bloch": self.bloch.to_dict(),
                "correlation": self.corr.to_dict(),
                "det_C": self.det_c,
                "purity": self.purity,
                "verdicts": [v.to_dict() for v in self.verdicts],
            }
        )
        if self.protocol is not None:
            out["protocol"] = {
                "verdict": self.protocol.to_dict(),
                "trace": self.trace.to_dict() if self.trace is not None else None,
            }
        return out


def build_report(
    label: str,
    state: State,
    protocol: tuple[Verdict, ProtocolTrace] | None = None,
) -> RunReport:
    """Bloch form, C, det(C), purity and oracle verdicts for one state.

    The rank classifier and Schmidt oracle only apply to PureState input;
    the PPT oracle always runs.
    """
    rho = to_density(state)
    verdicts: list[Verdict] = []
    if isinstance(state, PureState):
        verdicts.append(classify_pure_by_rank(state))
        verdicts.append(schmidt_verdict(state))
    verdicts.append(ppt_verdict(rho))

    cm = correlation_matrix(rho)
    verdict, trace = protocol if protocol is not None else (None, None)
    return RunReport(
        label=label,
        state=state,
        bloch=bloch_decompose(rho),
        corr=cm,
        det_c=det3(cm.c),
        purity=purity(rho),
        verdicts=verdicts,
        protocol=verdict,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# Text output
# ---------------------------------------------------------------------------


def _vec(v: np.ndarray) -> str:
    return "(" + ", ".join(f"{x: .6f}" for x in v) + ")"


def _mat(m: np.ndarray, indent: str = "    ") -> list[str]:
    return [indent + "[" + ", ".join(f"{x: .6f}" for x in row) + "]" for row in m]


def format_report(report: RunReport) -> str:
    lines = [
        f"state: {report.label}  ({'pure' if isinstance(report.state, PureState) else 'mixed'}, "
        f"purity={report.purity:.6f})",
        "",
        "bloch form:",
        f"  a = {_vec(report.bloch.a)}",
        f"  b = {_vec(report.bloch.b)}",
        "  F =",
        *_mat(report.bloch.f),
        "",
        "correlation matrix C = F - a b^T:",
        *_mat(report.corr.c),
        f"  singular values = {_vec(report.corr.singular_values)}",
        f"  rank = {report.corr.rank}",
        f"  det(C) = {report.det_c: .9f}",
        "",
        "verdicts:",
    ]
    for v in report.verdicts:
        lines.append(f"  - {v.basis.value:<14} {v.label.value:<13} {v.detail}")

    if report.protocol is not None:
        lines += ["", "protocol:"]
        lines.append(f"  verdict: {report.protocol.label.value}")
        lines.append(f"  detail:  {report.protocol.detail}")
        if report.trace is not None:
            lines.append(f"  y = {_vec(report.trace.y)}")
            for i, p in enumerate(report.trace.probes, start=1):
                lines.append(
                    f"  - probe {i}  x = {_vec(p.x)}  c = {p.covariance: .6e}  "
                    f"{'zero' if p.is_zero else 'NON-ZERO'}"
                )
            lines.append(f"  measurements_used: {report.trace.measurements_used}")
    return "\n".join(lines)


def format_werner_table(rows: list[WernerReport]) -> str:
    """One row per xi: covariance, -xi/4 x.y reference and PPT verdict."""
    header = f"{'xi':>8}  {'covariance':>14}  {'-xi/4 x.y':>14}  {'PPT':<10}"
    lines = [header, "-" * len(header)]
    for r in rows:
        ppt = "separable" if r.ppt_separable else "entangled"
        lines.append(f"{r.xi:>8.4f}  {r.covariance:>14.9f}  {r.reference:>14.9f}  {ppt:<10}")
    return "\n".join(lines)
