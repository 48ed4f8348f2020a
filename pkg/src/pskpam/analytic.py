"""Fading-averaged pairwise error probabilities and the union bound.

Both pairwise terms are expectations of a Gaussian tail ``Q(kappa |h|)`` over
Rayleigh ``|h|`` (density ``2 r exp(-r^2)``):

* PAM step, points i and j on one ray:
  ``E_h Q(sqrt(P) |i - j| R |h| / sqrt(2))``, which has a closed form.
* Subset step, transmitted point ``x_ik`` against ray u at angular offset Delta:
  ``E_{|h|, phi} Q(sqrt(2) |h| i R sqrt(P) sin(phi + Delta/2))`` with ``phi``
  uniform on ``[-a, a]``, evaluated by nested Gauss-Legendre quadrature.

The subset argument is linear in R. Re-deriving the pairwise event
``<y, h_hat x_1u> >= <y, h_hat x_1k>`` puts ``|h| R |e^{j beta} - e^{j alpha}|``
into the noise standard deviation, which cancels one R from the signal term.
``SubsetForm.PRINTED`` keeps the squared R of the printed closed form and
``SubsetForm.EQ25`` drops the amplitude factor entirely, for comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .channel import ChannelParams
from .constellation import Constellation, Family
from .errors import AnalyticError, QuadratureError

_SQRT2 = math.sqrt(2.0)


class SubsetForm(str, enum.Enum):
    DERIVED = "derived"
    PRINTED = "printed-r2"
    EQ25 = "eq25"


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts are per panel for ``|h|`` and over ``[-a, a]`` for ``phi``.

    The ``|h|`` range ``[0, h_truncation]`` is split into geometrically shrinking
    panels toward zero so that steep integrands (large SNR) stay resolved.
    """

    h_truncation: float = math.sqrt(-math.log(1e-14))
    h_nodes: int = 16
    phi_nodes: int = 32
    rel_tol: float = 1e-9
    max_doublings: int = 6
    n_panels: int = 32

    def __post_init__(self):
        if self.h_truncation < 5:
            raise AnalyticError("h_truncation must be >= 5")
        if self.h_nodes < 16 or self.phi_nodes < 16:
            raise AnalyticError("node counts must be >= 16")
        if not 0 < self.rel_tol <= 1e-6:
            raise AnalyticError("rel_tol must lie in (0, 1e-6]")


DEFAULT_QUAD = QuadratureSpec()


def q_function(x):
    """Standard Gaussian tail P(Z > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


def rayleigh_avg_q(kappa):
    """Closed form of ``E[Q(kappa |h|)]`` for ``|h|^2 ~ Exp(1)``: ``(1 - kappa/sqrt(kappa^2 + 2)) / 2``.

    Evaluated as ``1 / (kappa^2 + 2 + kappa s)`` with ``s = sqrt(kappa^2 + 2)`` for
    kappa >= 0 to avoid cancellation. Negative kappa is accepted (the same
    expression holds by ``Q(-x) = 1 - Q(x)``).
    """
    k = np.asarray(kappa, dtype=float)
    s2 = k * k + 2.0
    pos = 1.0 / (s2 + np.abs(k) * np.sqrt(s2))
    out = np.where(k >= 0, pos, 1.0 - pos)
    return out if out.ndim else float(out)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _r_rule(quad: QuadratureSpec, n: int):
    edges = quad.h_truncation * np.concatenate(([0.0], 2.0 ** -np.arange(quad.n_panels - 1, -1, -1)))
    t, w = _gauss_legendre(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * t[None, :] + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w[None, :]
    nodes, weights = nodes.ravel(), weights.ravel()
    return nodes, weights * 2.0 * nodes * np.exp(-nodes * nodes)


def _rayleigh_q_rule(kappas, quad, n):
    r, wr = _r_rule(quad, n)
    return q_function(np.asarray(kappas)[..., None] * r) @ wr


def _refine(evaluate, quad: QuadratureSpec, what: str):
    """Double node counts until two successive estimates agree to rel_tol."""
    scale = 1
    prev = evaluate(scale)
    for _ in range(quad.max_doublings):
        scale *= 2
        cur = evaluate(scale)
        # absolute floor: probabilities below 1e-16 carry no information for SER
        if np.all(np.abs(cur - prev) <= quad.rel_tol * np.abs(cur) + 1e-16):
            return cur
        prev = cur
    raise QuadratureError(f"{what}: no agreement within rel_tol={quad.rel_tol} "
                          f"after {quad.max_doublings} doublings")


def rayleigh_avg_q_quad(kappa, quad: QuadratureSpec = DEFAULT_QUAD):
    """``E[Q(kappa |h|)]`` by quadrature over ``|h|``; the numerical twin of rayleigh_avg_q."""
    k = np.asarray(kappa, dtype=float)
    out = _refine(lambda s: _rayleigh_q_rule(k, quad, quad.h_nodes * s), quad, "rayleigh_avg_q_quad")
    return out if out.ndim else float(out)


def _check_ray_family(c: Constellation) -> None:
    if c.family not in (Family.PSK_PAM, Family.PSK):
        raise AnalyticError(f"analysis needs a PSK-PAM or PSK constellation, got {c.family.value}",
                            code="UNSUPPORTED_FAMILY")


def p_pam_pair(i: int, j: int, c: Constellation, params: ChannelParams) -> float:
    """Probability that point i on a ray is mistaken for point j in the PAM step."""
    _check_ray_family(c)
    if i == j:
        raise AnalyticError("PAM pair needs i != j", code="SAME_INDEX")
    for idx in (i, j):
        if not 1 <= idx <= c.n_per_subset:
            raise AnalyticError(f"amplitude index {idx} outside 1..{c.n_per_subset}", code="BAD_INDEX")
    kappa = math.sqrt(params.power_p) * abs(i - j) * c.radius_r / _SQRT2
    return rayleigh_avg_q(kappa)


def _subset_scale(i: int, c: Constellation, form: SubsetForm) -> float:
    form = SubsetForm(form)
    if form is SubsetForm.DERIVED:
        return i * c.radius_r
    if form is SubsetForm.PRINTED:
        return i * c.radius_r ** 2
    return 1.0


def _graded_edges(lo, hi, levels, toward_lo, toward_hi):
    frac = 2.0 ** -np.arange(levels - 1, 0, -1)
    parts = [np.array([0.0])]
    if toward_lo:
        parts.append(0.5 * frac)
    parts.append(np.array([0.5]))
    if toward_hi:
        parts.append(1.0 - 0.5 * frac[::-1])
    parts.append(np.array([1.0]))
    return lo + (hi - lo) * np.concatenate(parts)


def _phi_rule(a, half, quad, n):
    """Gauss-Legendre nodes and averaging weights over ``[-a, a]``.

    The integrand switches from ~0 to ~1 where ``sin(phi + half)`` changes sign,
    over a width ~1/sqrt(P); panels are graded geometrically toward such points.
    """
    crossings = [c for c in (-half, math.pi - half) if -a < c < a]
    breaks = [-a] + crossings + [a]
    t, w = _gauss_legendre(n)
    nodes, weights = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if lo in crossings or hi in crossings:
            edges = _graded_edges(lo, hi, quad.n_panels // 2, lo in crossings, hi in crossings)
        else:
            edges = np.array([lo, hi])
        e0, e1 = edges[:-1, None], edges[1:, None]
        nodes.append((0.5 * (e1 - e0) * t + 0.5 * (e1 + e0)).ravel())
        weights.append((0.5 * (e1 - e0) * w).ravel())
    return np.concatenate(nodes), np.concatenate(weights) / (2.0 * a)


def p_subset_pair(i: int, delta_angle: float, c: Constellation, params: ChannelParams,
                  quad: QuadratureSpec = DEFAULT_QUAD, form: SubsetForm = SubsetForm.DERIVED) -> float:
    """Probability that step 1 prefers a ray at angular offset ``delta_angle``.

    ``i`` is the amplitude index of the transmitted point. The phase error is
    averaged uniformly over ``[-a, a]``; with ``a = 0`` it is fixed at zero.
    """
    _check_ray_family(c)
    if not 0 < delta_angle < 2 * math.pi:
        raise AnalyticError(f"delta_angle must lie in (0, 2pi), got {delta_angle}", code="BAD_ANGLE")
    if not 1 <= i <= c.n_per_subset:
        raise AnalyticError(f"amplitude index {i} outside 1..{c.n_per_subset}", code="BAD_INDEX")
    gain = _SQRT2 * _subset_scale(i, c, form) * math.sqrt(params.power_p)
    a = params.phase_bound_a
    half = 0.5 * delta_angle

    def evaluate(s):
        if a == 0:
            phis, wphi = np.zeros(1), np.ones(1)
        else:
            phis, wphi = _phi_rule(a, half, quad, quad.phi_nodes * s)
        kappas = gain * np.sin(phis + half)
        return np.asarray(_rayleigh_q_rule(kappas, quad, quad.h_nodes * s) @ wphi)

    return float(np.clip(_refine(evaluate, quad, "p_subset_pair"), 0.0, 1.0))


@dataclass
class ErrorBreakdown:
    """Pairwise terms for one transmitted point ``x_ik``.

    ``p_subset_pairs[u-1]`` is the subset term toward ray u and
    ``p_pam_pairs[j-1]`` the PAM term toward amplitude j; the own entry is 0.
    """

    p_subset_pairs: np.ndarray
    p_pam_pairs: np.ndarray
    p_total: float
    raw_total: float
    p_subset_dominant: float
    p_pam_dominant: float
    clamped: bool = field(default=False)


def p_total_union(i: int, k: int, c: Constellation, params: ChannelParams,
                  quad: QuadratureSpec = DEFAULT_QUAD,
                  form: SubsetForm = SubsetForm.DERIVED) -> ErrorBreakdown:
    _check_ray_family(c)
    K, N = c.k_subsets, c.n_per_subset
    if not (1 <= i <= N and 1 <= k <= K):
        raise AnalyticError(f"point ({i}, {k}) outside the {K}x{N} grid", code="BAD_INDEX")
    subset = np.zeros(K)
    for u in range(1, K + 1):
        if u != k:
            offset = ((u - k) % K) * c.delta
            subset[u - 1] = p_subset_pair(i, offset, c, params, quad, form)
    pam = np.zeros(N)
    for j in range(1, N + 1):
        if j != i:
            pam[j - 1] = p_pam_pair(i, j, c, params)
    raw = float(subset.sum() + pam.sum())
    sub_dom = float(subset[k % K]) if K > 1 else 0.0
    pam_dom = float(pam[i] if i < N else pam[i - 2]) if N > 1 else 0.0
    return ErrorBreakdown(subset, pam, min(raw, 1.0), raw, sub_dom, pam_dom, clamped=raw > 1.0)


def union_bound(c: Constellation, params: ChannelParams, quad: QuadratureSpec = DEFAULT_QUAD,
                form: SubsetForm = SubsetForm.DERIVED) -> float:
    """Union bound on the SER averaged over equiprobable points.

    Every ray is a rotation of the first, so only ``k = 1`` is evaluated; each
    per-point bound is clamped to 1 before averaging.
    """
    totals = [p_total_union(i, 1, c, params, quad, form).p_total for i in range(1, c.n_per_subset + 1)]
    return float(np.mean(totals))


class ObjectiveMode(str, enum.Enum):
    DEFAULT = "default"
    PAPER_EXACT_EQ25 = "paper-exact-eq25"
    PAPER_PRINTED_R2 = "paper-printed-r2"

    @property
    def subset_form(self) -> SubsetForm:
        return {
            ObjectiveMode.DEFAULT: SubsetForm.DERIVED,
            ObjectiveMode.PAPER_EXACT_EQ25: SubsetForm.EQ25,
            ObjectiveMode.PAPER_PRINTED_R2: SubsetForm.PRINTED,
        }[self]


@dataclass(frozen=True)
class DominantTerms:
    p_subset_dominant: float
    p_pam_dominant: float
    no_subset_neighbor: bool = False
    no_pam_neighbor: bool = False

    @property
    def objective(self) -> float:
        return max(self.p_subset_dominant, self.p_pam_dominant)


def dominant_objective(c: Constellation, params: ChannelParams, quad: QuadratureSpec = DEFAULT_QUAD,
                       mode: ObjectiveMode = ObjectiveMode.DEFAULT) -> DominantTerms:
    """Nearest-neighbour subset and PAM terms.

    The subset term is taken for the innermost ring (``i = 1``), the worst case
    since the Q argument grows with i. A single ray has no subset neighbour and
    a single ring no PAM neighbour; the missing term is reported as 0 and flagged.
    """
    _check_ray_family(c)
    mode = ObjectiveMode(mode)
    no_subset = c.k_subsets == 1
    no_pam = c.n_per_subset == 1
    p_sub = 0.0 if no_subset else p_subset_pair(1, c.delta, c, params, quad, mode.subset_form)
    p_pam = 0.0 if no_pam else p_pam_pair(1, 2, c, params)
    return DominantTerms(p_sub, p_pam, no_subset, no_pam)
