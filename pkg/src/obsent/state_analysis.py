"""Post-measurement and coarse-grained states.

Conditional states use the Luders update sqrt(Pi) rho sqrt(Pi) / p, which
reduces to Pi rho Pi / p for projective effects. The decomposition
identities relating alpha-OE to the Renyi entropy of the post-measurement
state are exact for rank-1 projective coarse-grainings; for higher-rank
effects they generally do not close (see the documented counterexample in
the tests), so consumers should treat the reported terms as diagnostics
unless every effect is rank 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .coarse_graining import CoarseGraining, alpha_oe, outcomes
from .divergences import petz_renyi, renyi_entropy, von_neumann
from .errors import InvalidAlpha, NonProjectiveCoarseGraining
from .operators import as_matrix, op_power


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Per-outcome triples (p_i, rho_i, omega_i).

    rho_i is the normalized Luders post-state of outcome i and omega_i the
    flat state Pi_i / V_i on its effect. Outcomes with negligible
    probability are omitted.
    """

    labels: tuple
    probabilities: tuple
    states: tuple
    flat_states: tuple


@dataclass(frozen=True)
class CoarseGrainedReport:
    """Result of the two equality tests of is_coarse_grained."""

    matrix_close: bool
    entropy_close: bool
    matrix_residual: float
    entropy_residual: float

    @property
    def consistent(self) -> bool:
        return self.matrix_close == self.entropy_close


def post_measurement_state(cg: CoarseGraining, rho) -> np.ndarray:
    """Unselective post-measurement state sum_i sqrt(Pi_i) rho sqrt(Pi_i)."""
    m = as_matrix(rho)
    out = np.zeros_like(m)
    for e in cg.effects:
        root = op_power(e, 0.5)
        out = out + root @ m @ root
    return out


def conditional_ensemble(cg: CoarseGraining, rho) -> ConditionalEnsemble:
    """Conditional states and flat references per outcome."""
    m = as_matrix(rho)
    dist = outcomes(cg, m)
    labels, probs, states, flats = [], [], [], []
    for lab, p, e, v in zip(
        cg.labels, dist.probabilities, cg.effects, dist.volumes
    ):
        if p <= tol.PROB_FLOOR:
            continue
        root = op_power(e, 0.5)
        labels.append(lab)
        probs.append(float(p))
        states.append(root @ m @ root / p)
        flats.append(e / v)
    return ConditionalEnsemble(
        tuple(labels), tuple(probs), tuple(states), tuple(flats)
    )


def _check_alpha(alpha: float) -> None:
    if not np.isfinite(alpha) or alpha <= 0:
        raise InvalidAlpha(f"alpha must be a positive real, got {alpha}")


def renyi_post_measurement(cg: CoarseGraining, rho, alpha: float) -> float:
    """Renyi entropy of the post-measurement state via the outcome mixture.

    Returns -(1/(alpha-1)) log sum_i p_i^alpha + sum_i p_i S_alpha(rho_i).
    Coincides with renyi_entropy(post_measurement_state(...)) when the
    coarse-graining is rank-1 projective.
    """
    _check_alpha(alpha)
    ens = conditional_ensemble(cg, rho)
    p = np.array(ens.probabilities)
    if abs(alpha - 1.0) < tol.ALPHA_NEAR_ONE:
        mixing = float(-np.sum(p * np.log(p)))
        return mixing + float(
            np.sum(p * np.array([von_neumann(s) for s in ens.states]))
        )
    mixing = -math.log(float(np.sum(p**alpha))) / (alpha - 1.0)
    avg = float(
        np.sum(p * np.array([renyi_entropy(s, alpha) for s in ens.states]))
    )
    return mixing + avg


def decompose_alpha_oe(cg: CoarseGraining, rho, alpha: float) -> tuple:
    """Split alpha-OE into a post-measurement term and a divergence term.

    Returns (S_alpha(rho'), sum_i p_i D_alpha(rho_i || omega_i)) for a
    projective coarse-graining. The two terms sum to alpha_oe exactly when
    every effect is rank 1 (and in special cases such as the trivial
    coarse-graining); for general ranks the sum deviates by a finite
    amount.
    """
    _check_alpha(alpha)
    if not cg.is_projective():
        raise NonProjectiveCoarseGraining(
            "decomposition requires a projective coarse-graining"
        )
    m = as_matrix(rho)
    post_term = renyi_entropy(post_measurement_state(cg, m), alpha)
    ens = conditional_ensemble(cg, m)
    div_term = float(
        sum(
            p * petz_renyi(s, w, alpha)
            for p, s, w in zip(ens.probabilities, ens.states, ens.flat_states)
        )
    )
    return post_term, div_term


def coarse_grained_state(cg: CoarseGraining, rho) -> np.ndarray:
    """The coarse-grained state sum_i (p_i / V_i) Pi_i."""
    m = as_matrix(rho)
    dist = outcomes(cg, m)
    out = np.zeros_like(m)
    for p, v, e in zip(dist.probabilities, dist.volumes, cg.effects):
        out = out + (p / v) * e
    return out


def is_coarse_grained(
    cg: CoarseGraining, rho, alpha: float, atol: float = tol.CG_STATE_ATOL
) -> CoarseGrainedReport:
    """Report whether rho equals its coarse-grained state.

    Runs both equality tests: max-abs matrix distance to the coarse-grained
    state, and the entropy gap |alpha_oe - renyi_entropy|. The report flags
    disagreement between the two.
    """
    _check_alpha(alpha)
    m = as_matrix(rho)
    matrix_residual = float(np.max(np.abs(m - coarse_grained_state(cg, m))))
    entropy_residual = abs(alpha_oe(cg, m, alpha) - renyi_entropy(m, alpha))
    return CoarseGrainedReport(
        matrix_close=matrix_residual <= atol,
        entropy_close=entropy_residual <= atol,
        matrix_residual=matrix_residual,
        entropy_residual=entropy_residual,
    )
