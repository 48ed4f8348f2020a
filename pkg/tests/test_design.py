import math

import numpy as np
import pytest

from pskpam.analytic import QuadratureSpec
from pskpam.channel import ChannelParams
from pskpam.design import DesignCandidate, enumerate_factorizations, optimize_kn, select_best
from pskpam.errors import PskPamError
from pskpam.harness.config import ConstellationSpec, ExperimentConfig
from pskpam.harness.simulate import run_ser_point


def test_factorizations():
    assert enumerate_factorizations(8) == [(1, 8), (2, 4), (4, 2), (8, 1)]
    assert enumerate_factorizations(7) == [(1, 7), (7, 1)]
    assert len(enumerate_factorizations(64)) == 7


def test_m8_at_pi_over_8():
    report = optimize_kn(8, ChannelParams(100, 0.3927))
    assert report.best == (4, 2)
    assert [(c.k, c.n) for c in report.candidates] == enumerate_factorizations(8)


def test_fine_phase_error_prefers_more_rays():
    assert optimize_kn(16, ChannelParams(100, math.pi / 180)).best == (8, 2)


def test_deterministic():
    a = optimize_kn(16, ChannelParams(100, math.pi / 8))
    b = optimize_kn(16, ChannelParams(100, math.pi / 8))
    assert a == b


@pytest.mark.parametrize("m", [4, 8, 16])
def test_full_phase_uncertainty_never_picks_one_ray(m):
    assert optimize_kn(m, ChannelParams(100, math.pi)).best[0] != 1


@pytest.mark.parametrize("m", [8, 16])
def test_ray_count_non_increasing_in_phase_bound(m):
    ks = [optimize_kn(m, ChannelParams(100, a)).best[0] for a in np.linspace(0, math.pi / 8, 9)]
    assert all(b <= a for a, b in zip(ks, ks[1:])), ks


def test_phase_condition_marks_candidates():
    report = optimize_kn(16, ChannelParams(100, math.pi / 8))
    flagged = {(c.k, c.n) for c in report.candidates if not c.eligible}
    assert flagged == {(1, 16), (2, 8)}


def test_tie_goes_to_more_rays():
    cands = [DesignCandidate(2, 4, objective=0.1), DesignCandidate(4, 2, objective=0.1 + 1e-13),
             DesignCandidate(8, 1, objective=0.2)]
    assert (select_best(cands).k, select_best(cands).n) == (4, 2)


def test_ineligible_used_only_as_last_resort():
    cands = [DesignCandidate(1, 8, objective=0.01, phase_condition=False),
             DesignCandidate(8, 1, objective=0.3)]
    assert select_best(cands).k == 8
    assert select_best(cands[:1]).k == 1


def test_quadrature_failures_are_reported():
    report = optimize_kn(8, ChannelParams(100, 0.3), quad=QuadratureSpec(max_doublings=0))
    failed = [(c.k, c.n) for c in report.candidates if c.failed]
    assert failed == [(2, 4), (4, 2), (8, 1)]
    assert all("rel_tol" in c.note for c in report.candidates if c.failed)
    # the single ray needs no quadrature, so it is the only one left
    assert report.best == (1, 8)


def test_nothing_evaluable_raises():
    with pytest.raises(PskPamError) as info:
        select_best([DesignCandidate(2, 4, failed=True)])
    assert info.value.code == "NO_CANDIDATE"


def test_union_objective_runs():
    report = optimize_kn(8, ChannelParams(100, 0.3927), use_union=True)
    assert report.use_union and report.best == (4, 2)


def test_paper_objectives_differ_at_16():
    p = ChannelParams(100, math.pi / 8)
    assert optimize_kn(16, p, objective_mode="paper-printed-r2").best == (8, 2)
    assert optimize_kn(16, p, objective_mode="paper-exact-eq25").best == (8, 2)
    assert optimize_kn(16, p, norm_mode="paper-sum").best == (8, 2)


@pytest.mark.parametrize("m, a", [(8, math.pi / 8), (16, math.pi / 8), (16, math.pi / 180)])
def test_choice_agrees_with_simulation(m, a):
    """The chosen shape is not beaten by any eligible shape outside Monte Carlo noise."""
    report = optimize_kn(m, ChannelParams(100, a))
    sers = {}
    for cand in report.candidates:
        if not cand.eligible:
            continue
        cfg = ExperimentConfig(constellation=ConstellationSpec(m=m, k=cand.k), phase_bound=a,
                               trials_per_point=100_000, seed=31)
        sers[(cand.k, cand.n)] = run_ser_point(cfg, 20.0)
    best = sers[report.best]
    assert all(best.ci95_low <= other.ci95_high for other in sers.values())
