"""Analytic SER curves on an SNR grid."""

from __future__ import annotations

from dataclasses import dataclass

from ..analytic import DEFAULT_QUAD, ObjectiveMode, QuadratureSpec, dominant_objective, union_bound
from ..channel import ChannelParams, snr_db_to_power
from .config import ExperimentConfig


@dataclass(frozen=True)
class AnalyticPoint:
    snr_db: float
    p_subset_dom: float
    p_pam_dom: float
    p_total: float
    # the union sum reached 1 for at least one point: the bound says nothing here
    clamped: bool = False


def analytic_point(c, params: ChannelParams, snr_db: float, quad: QuadratureSpec = DEFAULT_QUAD,
                   mode: str = "union", objective: ObjectiveMode = ObjectiveMode.DEFAULT) -> AnalyticPoint:
    objective = ObjectiveMode(objective)
    terms = dominant_objective(c, params, quad, objective)
    if mode == "union":
        total = union_bound(c, params, quad, objective.subset_form)
    elif mode == "dominant":
        total = terms.objective
    else:
        raise ValueError(f"unknown analytic mode {mode!r}")
    return AnalyticPoint(float(snr_db), terms.p_subset_dominant, terms.p_pam_dominant, total,
                         clamped=total >= 1.0)


def run_analytic_curve(config: ExperimentConfig, quad: QuadratureSpec = DEFAULT_QUAD,
                       mode: str = "union",
                       objective: ObjectiveMode = ObjectiveMode.DEFAULT) -> list[AnalyticPoint]:
    c = config.constellation.build()
    return [
        analytic_point(c, ChannelParams(snr_db_to_power(s), config.phase_bound), s, quad, mode, objective)
        for s in config.snr_db
    ]
