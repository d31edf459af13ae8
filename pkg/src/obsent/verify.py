"""Randomized verification suites behind the `verify` CLI command.

Each suite evaluates a set of named properties over seeded random
instances. A property is either hard (a violation fails the run, exit
code 2) or survey (violations are recorded as observations and never fail
the run). The hard/survey split encodes which relations are actually
theorems: in particular the refinement divergence bound and the
general-rank decomposition identities admit finite counterexamples, so
they run as surveys that collect the measured margins, while the trivial
coarse-graining equality case of the bound, and the rank-1 decomposition
identities, are hard.

Margins are signed slack: a property instance passes iff margin >= -tol.
Reports are deterministic functions of (suite, seed, n, dim bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coarse_graining import (
    RefinementMap,
    alpha_derivative,
    alpha_oe,
    alpha_oe_divergence_form,
    alpha_oe_gap,
    check_refinement,
    identity_cg,
    merge_outcomes,
    observational_entropy,
    outcomes,
    projective_cg,
    refinement_divergence_bound,
    sequential,
    tensor_cg,
)
from .divergences import (
    classical_petz_renyi,
    petz_renyi,
    renyi_entropy,
    renyi_mutual_info,
)
from .errors import NotARefinement
from .generators import (
    random_coarse_grained_state,
    random_coarse_graining,
    random_density,
    random_merge,
    random_projective_cg,
    random_rank1_projective_cg,
)
from .operators import tensor
from .serialize import operator_to_json
from .state_analysis import (
    coarse_grained_state,
    decompose_alpha_oe,
    is_coarse_grained,
    post_measurement_state,
    renyi_post_measurement,
)
from .thermo import (
    DrivingProtocol,
    EnergyWindowing,
    LevelSystem,
    closed_run,
    effective_beta,
    gibbs_state,
    jackson_check,
    open_run,
)

ALPHA_GRID = (0.3, 0.7, 1.5, 2.0, 3.0)
ALPHA_GT1 = (1.5, 2.0, 3.0)
ALPHA_LT1 = (0.3, 0.7)

_MAX_RECORDED_VIOLATIONS = 3


@dataclass
class PropertyResult:
    """Aggregated outcome of one property over a sweep."""

    name: str
    mode: str  # "hard" | "survey"
    tolerance: float
    instances: int = 0
    passes: int = 0
    fails: int = 0
    worst_margin: float = math.inf
    violations: list = field(default_factory=list)

    def record(self, margin: float, instance=None):
        self.instances += 1
        self.worst_margin = min(self.worst_margin, margin)
        if margin >= -self.tolerance:
            self.passes += 1
        else:
            self.fails += 1
            if instance is not None and len(self.violations) < _MAX_RECORDED_VIOLATIONS:
                self.violations.append(dict(instance, margin=margin))

    def to_json(self) -> dict:
        worst = self.worst_margin
        return {
            "name": self.name,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "instances": self.instances,
            "passes": self.passes,
            "fails": self.fails,
            "worst_margin": "INFINITE" if math.isinf(worst) else worst,
            "violations": self.violations,
        }


@dataclass
class VerificationReport:
    suite: str
    seed: int
    n: int
    dim_max: int
    properties: list

    @property
    def hard_failures(self) -> int:
        return sum(p.fails for p in self.properties if p.mode == "hard")

    @property
    def exit_code(self) -> int:
        return 2 if self.hard_failures else 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "n": self.n,
            "dim_max": self.dim_max,
            "hard_failures": self.hard_failures,
            "exit_code": self.exit_code,
            "properties": [p.to_json() for p in self.properties],
        }


def _state_instance(rho, alpha=None, **extra) -> dict:
    inst = {"state": operator_to_json(rho)}
    if alpha is not None:
        inst["alpha"] = alpha
    inst.update(extra)
    return inst


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, stream)))


def _finite_diff(cg, rho, alpha, h=1e-5) -> float:
    return (alpha_oe(cg, rho, alpha + h) - alpha_oe(cg, rho, alpha - h)) / (2 * h)


# ----------------------------------------------------------------- suites


def suite_divergences(seed: int, n: int, dim_max: int) -> list:
    ordering = PropertyResult("petz_alpha_ordering", "hard", 1e-10)
    dpi = PropertyResult("measurement_channel_dpi", "hard", 1e-10)
    nonneg = PropertyResult("nonnegativity", "hard", 1e-10)
    limit = PropertyResult("renyi_alpha_one_delegation", "hard", 1e-5)
    mi_sign = PropertyResult("renyi_mutual_info_sign", "survey", 1e-9)

    rng = _rng(seed, 1)
    for _ in range(n):
        d = int(rng.integers(2, dim_max + 1))
        rho = random_density(rng, d)
        sigma = random_density(rng, d)  # full rank
        vals = [petz_renyi(rho, sigma, a) for a in ALPHA_GRID]
        margin = min(b - a for a, b in zip(vals, vals[1:]))
        ordering.record(margin, _state_instance(rho, sigma=operator_to_json(sigma)))
        for a, v in zip(ALPHA_GRID, vals):
            nonneg.record(v, _state_instance(rho, a))
        cg = random_coarse_graining(rng, d)
        p = outcomes(cg, rho).probabilities
        q = outcomes(cg, sigma).probabilities
        for a in ALPHA_GRID:
            quantum = petz_renyi(rho, sigma, a)
            classical = classical_petz_renyi(p, q, a)
            if math.isinf(quantum):
                continue
            dpi.record(quantum - classical, _state_instance(rho, a))
        near = max(
            abs(petz_renyi(rho, sigma, 1 + 1e-7) - petz_renyi(rho, sigma, 1.0)),
            abs(petz_renyi(rho, sigma, 1 - 1e-7) - petz_renyi(rho, sigma, 1.0)),
        )
        limit.record(-near, _state_instance(rho))
        d_a = int(rng.integers(2, 4))
        d_b = int(rng.integers(2, 4))
        rho_ab = random_density(rng, d_a * d_b)
        for a in ALPHA_GRID:
            mi_sign.record(
                renyi_mutual_info(rho_ab, (d_a, d_b), a),
                _state_instance(rho_ab, a, dims=[d_a, d_b]),
            )
    return [ordering, dpi, nonneg, limit, mi_sign]


def suite_oe_core(seed: int, n: int, dim_max: int) -> list:
    limit = PropertyResult("alpha_one_limit", "hard", 1e-5)
    forms = PropertyResult("divergence_form_equivalence", "hard", 1e-10)
    gap_id = PropertyResult("gap_identity", "hard", 1e-9)
    gap_pos = PropertyResult("gap_nonnegative", "hard", 1e-10)
    bounds = PropertyResult("renyi_and_logd_bounds", "hard", 1e-10)
    ordering = PropertyResult("alpha_ordering", "hard", 1e-10)
    deriv_sign = PropertyResult("alpha_derivative_sign", "hard", 1e-12)
    deriv_fd = PropertyResult("alpha_derivative_matches_fd", "hard", 1e-5)
    additivity = PropertyResult("product_additivity", "hard", 1e-9)
    concave = PropertyResult("concavity_alpha_lt1", "hard", 1e-10)
    quasi = PropertyResult("quasi_concavity_alpha_gt1", "hard", 1e-10)

    rng = _rng(seed, 2)
    for _ in range(n):
        d = int(rng.integers(2, dim_max + 1))
        cg = random_coarse_graining(rng, d)
        rho = random_density(rng, d)
        s1 = observational_entropy(cg, rho)
        near = max(
            abs(alpha_oe(cg, rho, 1 + 1e-7) - s1),
            abs(alpha_oe(cg, rho, 1 - 1e-7) - s1),
        )
        limit.record(-near, _state_instance(rho))
        svals = []
        for a in ALPHA_GRID:
            s = alpha_oe(cg, rho, a)
            svals.append(s)
            forms.record(
                -abs(s - alpha_oe_divergence_form(cg, rho, a)),
                _state_instance(rho, a),
            )
            gap = alpha_oe_gap(cg, rho, a)
            gap_id.record(
                -abs(gap - (s - renyi_entropy(rho, a))), _state_instance(rho, a)
            )
            gap_pos.record(gap, _state_instance(rho, a))
            bounds.record(
                min(s - renyi_entropy(rho, a), math.log(d) - s),
                _state_instance(rho, a),
            )
            deriv = alpha_derivative(cg, rho, a)
            deriv_sign.record(-deriv, _state_instance(rho, a))
            fd = _finite_diff(cg, rho, a)
            # floor keeps the relative test meaningful near zero derivatives
            rel = abs(deriv - fd) / max(abs(deriv), abs(fd), 1e-3)
            deriv_fd.record(-rel, _state_instance(rho, a))
        ordering.record(
            min(b - a for a, b in zip(svals[1:], svals[:-1])),
            _state_instance(rho),
        )
        # additivity on a 2 x 3 product
        cg_a = random_coarse_graining(rng, 2)
        cg_b = random_coarse_graining(rng, 3)
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 3)
        prod_cg = tensor_cg([cg_a, cg_b])
        prod_rho = tensor(rho_a, rho_b)
        for a in ALPHA_GRID:
            total = alpha_oe(prod_cg, prod_rho, a)
            parts = alpha_oe(cg_a, rho_a, a) + alpha_oe(cg_b, rho_b, a)
            additivity.record(-abs(total - parts), _state_instance(prod_rho, a))
        # concavity
        rho2 = random_density(rng, d)
        lam = float(rng.uniform(0.05, 0.95))
        mix = lam * rho + (1 - lam) * rho2
        for a in ALPHA_LT1:
            margin = alpha_oe(cg, mix, a) - (
                lam * alpha_oe(cg, rho, a) + (1 - lam) * alpha_oe(cg, rho2, a)
            )
            concave.record(margin, _state_instance(mix, a))
        for a in (2.0, 3.0):
            margin = alpha_oe(cg, mix, a) - min(
                alpha_oe(cg, rho, a), alpha_oe(cg, rho2, a)
            )
            quasi.record(margin, _state_instance(mix, a))
    return [
        limit,
        forms,
        gap_id,
        gap_pos,
        bounds,
        ordering,
        deriv_sign,
        deriv_fd,
        additivity,
        concave,
        quasi,
    ]


def _mub_qubit_case():
    z = projective_cg(np.eye(2, dtype=complex), labels=("z0", "z1"))
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    x = projective_cg(h, labels=("x0", "x1"))
    return z, x


def suite_sequential(seed: int, n: int, dim_max: int) -> list:
    chain = PropertyResult("chain_monotone", "hard", 1e-10)
    above = PropertyResult("chain_above_renyi", "hard", 1e-10)
    mub = PropertyResult("mub_equality", "hard", 1e-9)
    equality = PropertyResult("equality_condition_sufficient", "hard", 1e-9)
    converse = PropertyResult("equality_condition_converse", "survey", 1e-10)

    rng = _rng(seed, 3)
    z, x = _mub_qubit_case()
    for _ in range(n):
        d = int(rng.integers(2, dim_max + 1))
        rho = random_density(rng, d)
        cgs = [random_coarse_graining(rng, d) for _ in range(4)]
        for a in ALPHA_GRID:
            current = cgs[0]
            values = [alpha_oe(current, rho, a)]
            for nxt in cgs[1:]:
                current = sequential(current, nxt)
                values.append(alpha_oe(current, rho, a))
            chain.record(
                min(u - v for u, v in zip(values, values[1:])),
                _state_instance(rho, a),
            )
            above.record(values[-1] - renyi_entropy(rho, a), _state_instance(rho, a))
        # mutually-unbiased qubit case: exact equality
        rho_q = random_density(rng, 2)
        seq = sequential(z, x)
        for a in ALPHA_GRID:
            mub.record(
                -abs(alpha_oe(seq, rho_q, a) - alpha_oe(z, rho_q, a)),
                _state_instance(rho_q, a),
            )
        # composing with the trivial second stage keeps t-ratios, so equality
        cg1 = random_coarse_graining(rng, d)
        seq_triv = sequential(cg1, identity_cg(d))
        for a in ALPHA_GRID:
            equality.record(
                -abs(alpha_oe(seq_triv, rho, a) - alpha_oe(cg1, rho, a)),
                _state_instance(rho, a),
            )
        # converse of the equality condition, observed only
        cg2 = random_coarse_graining(rng, d)
        seq2 = sequential(cg1, cg2)
        for a in (2.0,):
            if abs(alpha_oe(seq2, rho, a) - alpha_oe(cg1, rho, a)) <= 1e-9:
                p1 = outcomes(cg1, rho).probabilities
                v1 = cg1.volumes()
                p12 = outcomes(seq2, rho).probabilities
                v12 = seq2.volumes()
                worst = 0.0
                for idx, (lab1, _) in enumerate(seq2.labels):
                    i = cg1.labels.index(lab1)
                    if p12[idx] > 1e-12 and p1[i] > 1e-12:
                        worst = max(
                            worst, abs(p12[idx] / v12[idx] - p1[i] / v1[i])
                        )
                converse.record(-worst, _state_instance(rho, a))
    return [chain, above, mub, equality, converse]


def suite_refinement(seed: int, n: int, dim_max: int, inject_invalid=False) -> list:
    relation = PropertyResult("merge_reproduces_coarser", "hard", 1e-8)
    mono_hi = PropertyResult("monotone_alpha_gt1", "hard", 1e-10)
    mono_lo = PropertyResult("monotone_alpha_lt1", "survey", 1e-10)
    bound = PropertyResult("divergence_bound_leq_gap", "survey", 1e-10)
    trivial = PropertyResult("trivial_coarser_bound_equality", "hard", 1e-9)
    control = PropertyResult("invalid_map_rejected", "hard", 0.0)

    rng = _rng(seed, 4)
    for _ in range(n):
        d = int(rng.integers(2, dim_max + 1))
        rho = random_density(rng, d)
        cg = random_projective_cg(rng, d)
        coarser, rmap = random_merge(rng, cg)
        _, residual = check_refinement(cg, coarser, rmap)
        relation.record(-residual, _state_instance(rho))
        for a in ALPHA_GT1:
            gap = alpha_oe(coarser, rho, a) - alpha_oe(cg, rho, a)
            mono_hi.record(gap, _state_instance(rho, a))
            d_bound = refinement_divergence_bound(cg, coarser, rmap, rho, a)
            if not math.isinf(d_bound):
                bound.record(gap - d_bound, _state_instance(rho, a))
        for a in ALPHA_LT1:
            gap = alpha_oe(coarser, rho, a) - alpha_oe(cg, rho, a)
            mono_lo.record(gap, _state_instance(rho, a))
        # trivial coarser {I}: the bound equals the gap exactly
        triv_cg, triv_map = random_merge_to_identity(cg)
        for a in ALPHA_GT1:
            gap = alpha_oe(triv_cg, rho, a) - alpha_oe(cg, rho, a)
            d_bound = refinement_divergence_bound(cg, triv_cg, triv_map, rho, a)
            trivial.record(-abs(gap - d_bound), _state_instance(rho, a))
        # a non-stochastic map must be rejected
        bad = np.full((len(cg), len(coarser)), 0.37)
        try:
            RefinementMap(bad)
            control.record(-1.0, {"note": "non-stochastic map accepted"})
        except NotARefinement:
            control.record(0.0)
    results = [relation, mono_hi, mono_lo, bound, trivial, control]
    if inject_invalid:
        injected = PropertyResult("injected_invalid_map", "hard", 0.0)
        d = 3
        cg = random_projective_cg(_rng(seed, 5), d, ranks=[1, 1, 1])
        bad = np.array([[0.5, 0.2], [1.0, 0.0], [0.0, 1.0]])
        try:
            rmap = RefinementMap(bad)
            refinement_divergence_bound(
                cg, identity_cg(d), rmap, random_density(_rng(seed, 6), d), 2.0
            )
            injected.record(-1.0, {"note": "invalid map not surfaced"})
        except NotARefinement as exc:
            injected.record(-1.0, {"error": f"NotARefinement: {exc}"})
        results.append(injected)
    return results


def random_merge_to_identity(cg):
    """Merge every outcome into one group, yielding the trivial {I}."""
    return merge_outcomes(cg, [list(cg.labels)])


def suite_decomposition(seed: int, n: int, dim_max: int) -> list:
    post_r1 = PropertyResult("post_measurement_renyi_rank1", "hard", 1e-9)
    split_r1 = PropertyResult("alpha_oe_split_rank1", "hard", 1e-9)
    post_gen = PropertyResult("post_measurement_renyi_general_rank", "survey", 1e-9)
    split_gen = PropertyResult("alpha_oe_split_general_rank", "survey", 1e-9)
    assembly = PropertyResult("gap_assembly_general_rank", "survey", 1e-9)
    trace_one = PropertyResult("post_measurement_trace", "hard", 1e-9)
    eq_cases = PropertyResult("cg_state_equality_cases", "hard", 1e-8)
    pert_cases = PropertyResult("cg_state_perturbed_cases", "hard", 0.0)
    agreement = PropertyResult("cg_state_tests_agree", "hard", 0.0)

    rng = _rng(seed, 7)
    alphas = (0.5, 2.0, 3.0)
    for _ in range(n):
        d = int(rng.integers(2, dim_max + 1))
        rho = random_density(rng, d)
        cg_r1 = random_rank1_projective_cg(rng, d)
        cg_gen = random_projective_cg(rng, d)
        rho_post = post_measurement_state(cg_gen, rho)
        trace_one.record(
            -abs(float(np.trace(rho_post).real) - 1.0), _state_instance(rho)
        )
        for a in alphas:
            direct = renyi_entropy(post_measurement_state(cg_r1, rho), a)
            post_r1.record(
                -abs(renyi_post_measurement(cg_r1, rho, a) - direct),
                _state_instance(rho, a),
            )
            p_term, d_term = decompose_alpha_oe(cg_r1, rho, a)
            split_r1.record(
                -abs(p_term + d_term - alpha_oe(cg_r1, rho, a)),
                _state_instance(rho, a),
            )
            direct_g = renyi_entropy(rho_post, a)
            post_gen.record(
                -abs(renyi_post_measurement(cg_gen, rho, a) - direct_g),
                _state_instance(rho, a),
            )
            pg, dg = decompose_alpha_oe(cg_gen, rho, a)
            split_gen.record(
                -abs(pg + dg - alpha_oe(cg_gen, rho, a)), _state_instance(rho, a)
            )
            assembled = (direct_g - renyi_entropy(rho, a)) + dg
            assembly.record(
                -abs(alpha_oe(cg_gen, rho, a) - renyi_entropy(rho, a) - assembled),
                _state_instance(rho, a),
            )
        # coarse-grained-state biconditional
        rho_eq = random_coarse_grained_state(rng, cg_gen)
        for a in alphas:
            report = is_coarse_grained(cg_gen, rho_eq, a)
            eq_cases.record(
                -max(report.matrix_residual, report.entropy_residual),
                _state_instance(rho_eq, a),
            )
            agreement.record(0.0 if report.consistent else -1.0)
        herm = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        herm = herm + herm.conj().T
        herm = herm - np.trace(herm) / d * np.eye(d)
        pert = rho_eq + 0.02 * herm / max(1.0, float(np.max(np.abs(herm))))
        lam_min = float(np.linalg.eigvalsh(pert)[0])
        if lam_min < 1e-6:
            pert = (pert + abs(lam_min) * 1.5 * np.eye(d)) / (
                1 + 1.5 * abs(lam_min) * d
            )
        dist = float(np.max(np.abs(pert - coarse_grained_state(cg_gen, pert))))
        if dist >= 1e-3:
            for a in alphas:
                report = is_coarse_grained(cg_gen, pert, a)
                pert_cases.record(
                    min(report.matrix_residual, report.entropy_residual) - 1e-8,
                    _state_instance(pert, a),
                )
                agreement.record(0.0 if report.consistent else -1.0)
    return [
        post_r1,
        split_r1,
        post_gen,
        split_gen,
        assembly,
        trace_one,
        eq_cases,
        pert_cases,
        agreement,
    ]


def _canonical_closed_runs(alphas, n_samples=50):
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    qubit = DrivingProtocol(
        ((np.diag([0.0, 1.0]).astype(complex), 1.2), (sx, 1.3))
    )
    rho_q = gibbs_state(qubit.segments[0][0], 1.0)
    qutrit_h1 = np.diag([0.0, 0.7, 1.9]).astype(complex)
    qutrit_h2 = np.array(
        [[0.3, 0.4, 0.0], [0.4, 1.1, 0.5], [0.0, 0.5, 1.6]], dtype=complex
    )
    qutrit = DrivingProtocol(((qutrit_h1, 0.9), (qutrit_h2, 1.1)))
    rho_t = gibbs_state(qutrit_h1, 0.8)
    runs = []
    for protocol, rho0, delta in (
        (qubit, rho_q, 0.4),
        (qutrit, rho_t, 0.3),
    ):
        times = np.linspace(0.0, protocol.total_duration, n_samples + 1)[1:]
        runs.append(
            closed_run(protocol, rho0, EnergyWindowing(delta), alphas, times)
        )
    return runs


def _canonical_open_runs(alphas, n_samples=50):
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    h_s = np.diag([0.0, 1.0]).astype(complex)
    runs = []
    # nondegenerate bath, one level per window (volumes all 1)
    h_b1 = np.diag([0.0, 0.35, 0.8, 1.3, 1.95, 2.6]).astype(complex)
    x_b = np.zeros((6, 6), dtype=complex)
    for k in range(5):
        x_b[k, k + 1] = x_b[k + 1, k] = 1.0
    v1 = 0.15 * np.kron(sx, x_b)
    runs.append(
        open_run(
            h_s,
            h_b1,
            v1,
            np.diag([0.7, 0.3]).astype(complex),
            1.0,
            EnergyWindowing(0.3),
            alphas,
            np.linspace(0.1, 6.0, n_samples),
        )
    )
    # doubly degenerate bath levels, constant window volume 2
    h_b2 = np.diag([0.0, 0.0, 1.0, 1.0, 2.0, 2.0]).astype(complex)
    runs.append(
        open_run(
            h_s,
            h_b2,
            v1,
            np.diag([0.6, 0.4]).astype(complex),
            0.7,
            EnergyWindowing(0.5),
            alphas,
            np.linspace(0.1, 6.0, n_samples),
        )
    )
    return runs


def suite_thermo(seed: int, n: int, dim_max: int) -> list:
    second_law = PropertyResult("closed_second_law", "hard", 1e-9)
    monitor = PropertyResult("gibbs_max_monitor", "survey", 1e-9)
    clausius = PropertyResult("clausius_xi3_where_monitor_holds", "hard", 1e-9)
    xi1 = PropertyResult("open_xi1_nonnegative", "hard", 1e-9)
    facto = PropertyResult("open_factorization_constant_volumes", "hard", 1e-9)
    xi2 = PropertyResult("open_xi2_sign", "survey", 1e-9)
    mi = PropertyResult("open_mutual_info_sign", "survey", 1e-9)
    jackson = PropertyResult("jackson_identity", "hard", 1e-9)
    beta_fix = PropertyResult("effective_beta_fixed_point", "hard", 1e-8)

    alphas = (1.0 + 1e-7, 0.5, 2.0, 3.0)
    for record in _canonical_closed_runs(alphas):
        for s in record.samples:
            second_law.record(s.delta_entropy, {"t": s.t, "alpha": s.alpha})
            if s.gibbs_monitor_ok:
                clausius.record(s.xi3, {"t": s.t, "alpha": s.alpha})
        for f in record.findings:
            monitor.record(-abs(f["margin"]), dict(f))
        if not record.findings:
            monitor.record(0.0)
    for record in _canonical_open_runs(alphas):
        for s in record.samples:
            xi1.record(s.xi1, {"t": s.t, "alpha": s.alpha})
            facto.record(
                -abs(s.factorization_residual), {"t": s.t, "alpha": s.alpha}
            )
            xi2.record(s.xi2, {"t": s.t, "alpha": s.alpha})
            mi.record(s.mutual_info, {"t": s.t, "alpha": s.alpha})

    rng = _rng(seed, 8)
    for _ in range(50):
        n_levels = int(rng.integers(1, 7))
        levels = LevelSystem(
            np.sort(rng.uniform(-1.0, 2.0, size=n_levels)),
            float(rng.uniform(0.5, 4.0)),
        )
        t0 = float(rng.uniform(0.2, 3.0))
        for a in (0.5, 2.0, 3.0, 5.0):
            lhs, rhs, gap = jackson_check(levels, t0, a)
            jackson.record(-abs(gap), {"t0": t0, "alpha": a, "lhs": lhs, "rhs": rhs})
    for _ in range(min(n, 50)):
        d = int(rng.integers(2, dim_max + 1))
        h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = h + h.conj().T
        beta = float(rng.uniform(-2.0, 2.0))
        recovered = effective_beta(h, gibbs_state(h, beta))
        beta_fix.record(-abs(recovered - beta), {"beta": beta})
    return [second_law, monitor, clausius, xi1, facto, xi2, mi, jackson, beta_fix]


_SUITES = {
    "divergences": suite_divergences,
    "oe-core": suite_oe_core,
    "sequential": suite_sequential,
    "refinement": suite_refinement,
    "decomposition": suite_decomposition,
    "thermo": suite_thermo,
}


def run_suite(
    suite: str,
    seed: int = 0,
    n: int = 200,
    dim_max: int = 6,
    inject_invalid: bool = False,
) -> VerificationReport:
    """Run one named suite (or 'all') and return its report."""
    if suite == "all":
        props = []
        for name in ("divergences", "oe-core", "sequential", "refinement",
                     "decomposition", "thermo"):
            props.extend(_run_one(name, seed, n, dim_max, inject_invalid))
        return VerificationReport("all", seed, n, dim_max, props)
    if suite not in _SUITES:
        raise ValueError(
            f"unknown suite {suite!r}; choose from "
            f"{sorted(_SUITES) + ['all']}"
        )
    return VerificationReport(
        suite, seed, n, dim_max, _run_one(suite, seed, n, dim_max, inject_invalid)
    )


def _run_one(name, seed, n, dim_max, inject_invalid):
    if name == "refinement":
        return suite_refinement(seed, n, dim_max, inject_invalid=inject_invalid)
    return _SUITES[name](seed, n, dim_max)
