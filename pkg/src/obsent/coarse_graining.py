"""POVM coarse-grainings and alpha-observational entropy.

A coarse-graining is an ordered list of labeled PSD effects summing to the
identity. Observational entropy weights each outcome probability against
the volume (trace) of its effect; the alpha variant replaces the log-mean
with a power mean. Sequential composition uses the Luders update, so the
composed effects of a parent outcome always sum back to the parent effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .divergences import classical_petz_renyi, kl_divergence
from .errors import (
    DimensionMismatch,
    InvalidAlpha,
    InvalidPartition,
    NotARefinement,
    NotPSD,
    ShapeMismatch,
    ValidationError,
)
from .operators import as_matrix, op_power


@dataclass(frozen=True)
class CoarseGraining:
    """Ordered labeled effects Pi_i >= 0 with sum_i Pi_i = I.

    Effects with trace below the zero-effect threshold are dropped at
    construction, so every retained volume is strictly positive.
    """

    labels: tuple
    effects: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.effects):
            raise ShapeMismatch(
                f"{len(self.labels)} labels for {len(self.effects)} effects"
            )
        effs = [as_matrix(e) for e in self.effects]
        if not effs:
            raise ValidationError("a coarse-graining needs at least one effect")
        dim = effs[0].shape[0]
        kept_labels, kept_effects = [], []
        for lab, e in zip(self.labels, effs):
            if e.shape != (dim, dim):
                raise DimensionMismatch(
                    f"effect {lab!r} has shape {e.shape}, expected {(dim, dim)}"
                )
            lam_min = float(np.linalg.eigvalsh(e)[0])
            if lam_min < -tol.PSD_EIGENVALUE_FLOOR:
                raise NotPSD(f"effect {lab!r} is not PSD", magnitude=-lam_min)
            if float(np.trace(e).real) < tol.ZERO_EFFECT_TRACE:
                continue
            e = 0.5 * (e + e.conj().T)
            e.flags.writeable = False
            kept_labels.append(lab)
            kept_effects.append(e)
        if not kept_effects:
            raise ValidationError("all effects have zero trace")
        total = sum(kept_effects)
        defect = float(np.max(np.abs(total - np.eye(dim))))
        if defect > tol.POVM_SUM_ATOL:
            raise ValidationError(
                "effects do not sum to the identity", magnitude=defect
            )
        object.__setattr__(self, "labels", tuple(kept_labels))
        object.__setattr__(self, "effects", tuple(kept_effects))

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)

    def volumes(self) -> np.ndarray:
        return np.array([float(np.trace(e).real) for e in self.effects])

    def is_projective(self, atol: float = 1e-9) -> bool:
        return all(
            float(np.max(np.abs(e @ e - e))) <= atol for e in self.effects
        )


def identity_cg(dim: int) -> CoarseGraining:
    """The trivial single-outcome coarse-graining {I}."""
    return CoarseGraining(("I",), (np.eye(dim, dtype=complex),))


def projective_cg(vectors_or_projectors, labels=None) -> CoarseGraining:
    """Build a projective coarse-graining.

    Accepts a unitary-like matrix (columns are basis vectors; one rank-1
    effect per column) or an explicit list of projector matrices.
    """
    if isinstance(vectors_or_projectors, np.ndarray) and vectors_or_projectors.ndim == 2:
        u = np.asarray(vectors_or_projectors, dtype=complex)
        effs = [np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1])]
    else:
        effs = [as_matrix(p) for p in vectors_or_projectors]
    if labels is None:
        labels = tuple(str(k) for k in range(len(effs)))
    return CoarseGraining(tuple(labels), tuple(effs))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Per-outcome probabilities p_i = Tr(Pi_i rho) and volumes V_i = Tr(Pi_i)."""

    labels: tuple
    probabilities: np.ndarray
    volumes: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.size and float(p.min()) < -1e-12:
            raise ValidationError(
                "negative outcome probability", magnitude=-float(p.min())
            )
        p = np.clip(p, 0.0, None)
        p.flags.writeable = False
        v = np.asarray(self.volumes, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "volumes", v)


@dataclass(frozen=True)
class ClassicalState:
    """Image of an operator under the measurement channel: labeled weights."""

    labels: tuple
    weights: np.ndarray


@dataclass(frozen=True)
class RefinementMap:
    """Row-stochastic matrix m[i, j] sending finer outcome i to coarser j."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ShapeMismatch(f"refinement map must be 2-d, got {m.shape}")
        if m.size and float(m.min()) < 0:
            raise NotARefinement(
                "refinement map has a negative entry", magnitude=-float(m.min())
            )
        rows = m.sum(axis=1)
        worst = float(np.max(np.abs(rows - 1.0))) if m.size else 0.0
        if worst > tol.STOCHASTIC_ATOL:
            raise NotARefinement("refinement map rows must sum to 1", magnitude=worst)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def _match_dims(cg: CoarseGraining, rho) -> np.ndarray:
    m = as_matrix(rho)
    if m.shape[0] != cg.dim:
        raise DimensionMismatch(
            f"state dim {m.shape[0]} != coarse-graining dim {cg.dim}"
        )
    return m


def outcomes(cg: CoarseGraining, rho) -> OutcomeDistribution:
    """Outcome probabilities and volumes of a state under a coarse-graining."""
    m = _match_dims(cg, rho)
    p = np.array([float(np.trace(e @ m).real) for e in cg.effects])
    return OutcomeDistribution(cg.labels, p, cg.volumes())


def measurement_channel(cg: CoarseGraining, x) -> ClassicalState:
    """Apply the quantum-to-classical channel: X -> (Tr(Pi_i X))_i."""
    m = _match_dims(cg, x)
    w = np.array([float(np.trace(e @ m).real) for e in cg.effects])
    return ClassicalState(cg.labels, w)


def _check_alpha(alpha: float) -> None:
    if not np.isfinite(alpha) or alpha <= 0:
        raise InvalidAlpha(f"alpha must be a positive real, got {alpha}")


def observational_entropy(cg: CoarseGraining, rho) -> float:
    """Observational entropy -sum_i p_i log(p_i / V_i) in nats."""
    dist = outcomes(cg, rho)
    p, v = dist.probabilities, dist.volumes
    mask = p > 0
    return float(-np.sum(p[mask] * np.log(p[mask] / v[mask])))


def _alpha_oe_from_pv(p: np.ndarray, v: np.ndarray, alpha: float) -> float:
    mask = p > 0
    total = float(np.sum(p[mask] ** alpha * v[mask] ** (1.0 - alpha)))
    return -math.log(total) / (alpha - 1.0)


def alpha_oe(cg: CoarseGraining, rho, alpha: float) -> float:
    """Order-alpha observational entropy.

    -(1/(alpha-1)) log sum_i p_i^alpha V_i^(1-alpha); zero-probability
    outcomes contribute 0. |alpha - 1| < 1e-6 delegates to the plain
    observational entropy (the alpha -> 1 limit).
    """
    _check_alpha(alpha)
    if abs(alpha - 1.0) < tol.ALPHA_NEAR_ONE:
        return observational_entropy(cg, rho)
    dist = outcomes(cg, rho)
    return _alpha_oe_from_pv(dist.probabilities, dist.volumes, alpha)


def alpha_oe_divergence_form(cg: CoarseGraining, rho, alpha: float) -> float:
    """Alpha-OE computed as log d minus the outcome-distribution divergence.

    log d - D_alpha(channel(rho) || channel(I/d)); agrees with alpha_oe to
    floating-point error.
    """
    _check_alpha(alpha)
    m = _match_dims(cg, rho)
    d = cg.dim
    p = measurement_channel(cg, m).weights
    q = cg.volumes() / d
    return math.log(d) - classical_petz_renyi(p, q, alpha)


def alpha_oe_gap(cg: CoarseGraining, rho, alpha: float) -> float:
    """Gap between alpha-OE and the state's Renyi entropy.

    D_alpha(rho || I/d) - D_alpha(channel(rho) || channel(I/d)), which
    telescopes to alpha_oe - renyi_entropy. Non-negative by the
    data-processing inequality for measurement channels.
    """
    from .divergences import petz_renyi

    _check_alpha(alpha)
    m = _match_dims(cg, rho)
    d = cg.dim
    quantum = petz_renyi(m, np.eye(d) / d, alpha)
    p = measurement_channel(cg, m).weights
    classical = classical_petz_renyi(p, cg.volumes() / d, alpha)
    return quantum - classical


def alpha_derivative(cg: CoarseGraining, rho, alpha: float) -> float:
    """Closed-form derivative of alpha_oe with respect to alpha.

    -D(x || p) / (alpha - 1)^2 with x_i proportional to t_i^alpha V_i,
    t_i = p_i / V_i. Always <= 0, which makes alpha_oe non-increasing
    in alpha.
    """
    _check_alpha(alpha)
    if abs(alpha - 1.0) <= tol.ALPHA_NEAR_ONE:
        raise InvalidAlpha("derivative formula needs |alpha - 1| > 1e-6")
    dist = outcomes(cg, rho)
    p, v = dist.probabilities, dist.volumes
    mask = p > 0
    p, v = p[mask], v[mask]
    t = p / v
    w = t**alpha * v
    x = w / w.sum()
    return -kl_divergence(x, p) / (alpha - 1.0) ** 2


def tensor_cg(parts) -> CoarseGraining:
    """Product coarse-graining of two or more parts.

    Effects are Kronecker products; labels are tuples of the part labels.
    """
    parts = list(parts)
    if len(parts) < 2:
        raise ValidationError("tensor_cg needs at least two parts")
    labels = [(lab,) for lab in parts[0].labels]
    effects = list(parts[0].effects)
    for part in parts[1:]:
        labels = [l1 + (l2,) for l1 in labels for l2 in part.labels]
        effects = [np.kron(e1, e2) for e1 in effects for e2 in part.effects]
    return CoarseGraining(tuple(labels), tuple(effects))


def sequential(cg1: CoarseGraining, cg2: CoarseGraining) -> CoarseGraining:
    """Compose two coarse-grainings with the Luders update.

    Effects Pi_ij = sqrt(Pi_i) Pi_j sqrt(Pi_i), labels (i, j). The second
    index sums back to the first coarse-graining: sum_j Pi_ij = Pi_i.
    """
    if cg1.dim != cg2.dim:
        raise DimensionMismatch(f"dims {cg1.dim} vs {cg2.dim}")
    labels, effects = [], []
    for lab1, e1 in zip(cg1.labels, cg1.effects):
        root = op_power(e1, 0.5)
        for lab2, e2 in zip(cg2.labels, cg2.effects):
            labels.append((lab1, lab2))
            effects.append(root @ e2 @ root)
    return CoarseGraining(tuple(labels), tuple(effects))


def check_refinement(
    finer: CoarseGraining, coarser: CoarseGraining, m: RefinementMap
) -> tuple:
    """Check Pi'_j = sum_i m[i, j] Pi_i for all j.

    Returns (holds, max_residual) with the max-abs residual over coarser
    effects.
    """
    if finer.dim != coarser.dim:
        raise DimensionMismatch(f"dims {finer.dim} vs {coarser.dim}")
    mm = m.matrix
    if mm.shape != (len(finer), len(coarser)):
        raise ShapeMismatch(
            f"map shape {mm.shape} != ({len(finer)}, {len(coarser)})"
        )
    worst = 0.0
    for j, target in enumerate(coarser.effects):
        built = sum(mm[i, j] * finer.effects[i] for i in range(len(finer)))
        worst = max(worst, float(np.max(np.abs(built - target))))
    return worst <= tol.REFINEMENT_ATOL, worst


def merge_outcomes(cg: CoarseGraining, partition) -> tuple:
    """Merge outcome bins of a coarse-graining.

    partition is a list of label groups covering all labels disjointly.
    Returns (coarser_cg, refinement_map); the induced map is 0/1 and
    check_refinement passes by construction.
    """
    index = {lab: i for i, lab in enumerate(cg.labels)}
    seen = set()
    for group in partition:
        for lab in group:
            if lab not in index:
                raise InvalidPartition(f"unknown label {lab!r}")
            if lab in seen:
                raise InvalidPartition(f"label {lab!r} appears twice")
            seen.add(lab)
    if len(seen) != len(cg):
        raise InvalidPartition("partition does not cover all labels")
    m = np.zeros((len(cg), len(partition)))
    labels, effects = [], []
    for j, group in enumerate(partition):
        acc = np.zeros((cg.dim, cg.dim), dtype=complex)
        for lab in group:
            i = index[lab]
            m[i, j] = 1.0
            acc = acc + cg.effects[i]
        labels.append(tuple(group) if len(group) > 1 else group[0])
        effects.append(acc)
    coarser = CoarseGraining(tuple(labels), tuple(effects))
    return coarser, RefinementMap(m)


def refinement_divergence_bound(
    finer: CoarseGraining,
    coarser: CoarseGraining,
    m: RefinementMap,
    rho,
    alpha: float,
) -> float:
    """Candidate divergence bound D_alpha(P || Q) for a refinement pair.

    P_i = p_i and Q_i = (sum_j m[i, j] (V_i p'_j / V'_j)^alpha)^(1/alpha).
    For the trivial coarser {I} this equals the realized entropy gap
    exactly; in general it is reported for comparison against the gap and
    can exceed it (the bound does not hold for arbitrary refinements).
    Requires alpha > 1.
    """
    _check_alpha(alpha)
    if alpha <= 1.0 + tol.ALPHA_NEAR_ONE:
        raise InvalidAlpha("refinement bound is defined for alpha > 1")
    holds, residual = check_refinement(finer, coarser, m)
    if not holds:
        raise NotARefinement(
            "map does not reproduce the coarser effects", magnitude=residual
        )
    p = outcomes(finer, rho).probabilities
    v = finer.volumes()
    pc = outcomes(coarser, rho).probabilities
    vc = coarser.volumes()
    ratios = np.zeros(len(finer))
    for i in range(len(finer)):
        ratios[i] = float(np.sum(m.matrix[i] * (v[i] * pc / vc) ** alpha))
    q = ratios ** (1.0 / alpha)
    return classical_petz_renyi(p, q, alpha)
