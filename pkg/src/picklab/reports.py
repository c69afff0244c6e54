"""Feasibility report structures shared by the Pick-matrix builders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .matcore import PsdVerdict


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Outcome of one Pick-matrix criterion.

    pick        hermitized Pick matrix
    verdict     PSD verdict at the tolerance used
    method      "closed_form" | "stein_solve" | "truncated_series"
    tail_bound  certified bound on the dropped series tail (0 for exact methods)
    """

    pick: np.ndarray
    verdict: PsdVerdict
    method: str
    tail_bound: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.verdict.is_psd

    @property
    def min_eigenvalue(self) -> float:
        return self.verdict.min_eigenvalue


def make_report(pick, method: str, tail_bound: float = 0.0, tol="auto") -> FeasibilityReport:
    H = matcore.hermitize(pick)
    return FeasibilityReport(
        pick=H,
        verdict=matcore.is_psd(H, tol),
        method=method,
        tail_bound=float(tail_bound),
    )
