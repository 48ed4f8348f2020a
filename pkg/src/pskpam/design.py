"""Brute-force min-max search over the (K, N) factorizations of M."""

from __future__ import annotations

from dataclasses import dataclass, field

from .analytic import (DEFAULT_QUAD, ObjectiveMode, QuadratureSpec, dominant_objective,
                       union_bound)
from .channel import ChannelParams
from .constellation import NormMode, build_psk_pam
from .decoder import phase_condition_holds
from .errors import PskPamError, QuadratureError

# objectives closer than this are treated as tied
TIE_TOL = 1e-12


def enumerate_factorizations(m: int) -> list[tuple[int, int]]:
    if m < 1:
        raise PskPamError(f"m must be >= 1, got {m}", code="ZERO")
    return [(k, m // k) for k in range(1, m + 1) if m % k == 0]


@dataclass
class DesignCandidate:
    k: int
    n: int
    p_subset_dominant: float = float("nan")
    p_pam_dominant: float = float("nan")
    objective: float = float("nan")
    # False when cos(a) < (2N-1)/(2N): the PAM term then no longer describes step 2
    phase_condition: bool = True
    failed: bool = False
    note: str = ""

    @property
    def eligible(self) -> bool:
        return not self.failed and self.phase_condition


@dataclass
class DesignReport:
    m: int
    phase_bound_a: float
    power_p: float
    norm_mode: NormMode
    objective_mode: ObjectiveMode
    use_union: bool
    candidates: list[DesignCandidate] = field(default_factory=list)
    best: tuple[int, int] | None = None


def _rank_key(c: DesignCandidate):
    return (not c.eligible, c.objective, -c.k)


def select_best(candidates: list[DesignCandidate]) -> DesignCandidate:
    """Lowest objective among eligible candidates; near-ties go to the larger K."""
    pool = [c for c in candidates if c.eligible] or [c for c in candidates if not c.failed]
    if not pool:
        raise PskPamError("no candidate could be evaluated", code="NO_CANDIDATE")
    lowest = min(c.objective for c in pool)
    tied = [c for c in pool if c.objective <= lowest + TIE_TOL]
    return max(tied, key=lambda c: c.k)


def optimize_kn(m: int, params: ChannelParams, quad: QuadratureSpec = DEFAULT_QUAD,
                norm_mode: NormMode = NormMode.MEAN_POWER,
                objective_mode: ObjectiveMode = ObjectiveMode.DEFAULT,
                use_union: bool = False) -> DesignReport:
    """Evaluate every (K, N) with K N = m and pick the min-max optimum.

    The default objective is ``max(P_subset(k -> k+1), P_pam(i -> i+1))``;
    ``use_union`` swaps in the SER union bound. Candidates whose ring count
    violates the phase condition are reported but only chosen if nothing else is left.
    """
    if m < 2:
        raise PskPamError(f"design needs m >= 2, got {m}", code="ZERO")
    norm_mode = NormMode(norm_mode)
    objective_mode = ObjectiveMode(objective_mode)
    report = DesignReport(m, params.phase_bound_a, params.power_p, norm_mode, objective_mode, use_union)
    for k, n in enumerate_factorizations(m):
        cand = DesignCandidate(k, n)
        cand.phase_condition = n == 1 or phase_condition_holds(params.phase_bound_a, n)
        c = build_psk_pam(m, k, norm_mode)
        try:
            terms = dominant_objective(c, params, quad, objective_mode)
            cand.p_subset_dominant = terms.p_subset_dominant
            cand.p_pam_dominant = terms.p_pam_dominant
            cand.objective = (union_bound(c, params, quad, objective_mode.subset_form)
                              if use_union else terms.objective)
        except QuadratureError as exc:
            cand.failed = True
            cand.note = str(exc)
        report.candidates.append(cand)
    best = select_best(report.candidates)
    report.best = (best.k, best.n)
    return report
