"""Energy-window coarse-grainings, Gibbs states, and entropy-production runs.

Closed runs drive a state through piecewise-constant Hamiltonian segments
with exact spectral propagators, rebuilding the energy coarse-graining from
the instantaneous Hamiltonian at every sample. Open runs evolve a
system-bath product state under a static joint Hamiltonian and track the
joint, marginal, and mutual-information terms of the outcome statistics.

Heat over temperature is accumulated through the defining relation
T dS = dQ for the fictitious Gibbs state matched to the instantaneous mean
energy, i.e. as a Renyi-entropy difference of those Gibbs states; no
quadrature is involved. Units: hbar = 1, Boltzmann constant = 1, nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .coarse_graining import (
    CoarseGraining,
    alpha_oe,
    outcomes,
    projective_cg,
    tensor_cg,
)
from .divergences import renyi_entropy
from .errors import (
    DimensionMismatch,
    EnergyOutOfRange,
    InvalidAlpha,
    InvalidTemperature,
    NoConvergence,
    ValidationError,
)
from .operators import as_matrix, partial_trace, spectral, tensor
from .state_analysis import is_coarse_grained


@dataclass(frozen=True)
class EnergyWindowing:
    """Half-open energy bins [origin + k*delta, origin + (k+1)*delta).

    origin defaults to the lowest eigenvalue of the Hamiltonian being
    windowed, so bin contents are reproducible across runs.
    """

    delta: float
    origin: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.delta) or self.delta <= 0:
            raise ValidationError(f"window width must be > 0, got {self.delta}")


@dataclass(frozen=True)
class DrivingProtocol:
    """Ordered piecewise-constant segments (Hamiltonian, duration)."""

    segments: tuple

    def __post_init__(self):
        segs = []
        dim = None
        for h, duration in self.segments:
            m = as_matrix(h)
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise DimensionMismatch(
                    f"segment dim {m.shape[0]} != {dim}"
                )
            if duration < 0:
                raise ValidationError(f"negative segment duration {duration}")
            segs.append((m, float(duration)))
        if not segs:
            raise ValidationError("protocol needs at least one segment")
        object.__setattr__(self, "segments", tuple(segs))

    @property
    def dim(self) -> int:
        return self.segments[0][0].shape[0]

    @property
    def total_duration(self) -> float:
        return sum(d for _, d in self.segments)

    def hamiltonian_at(self, t: float) -> np.ndarray:
        """Hamiltonian active at time t (last segment at the final instant)."""
        acc = 0.0
        for h, duration in self.segments:
            if t < acc + duration:
                return h
            acc += duration
        return self.segments[-1][0]


@dataclass(frozen=True)
class LevelSystem:
    """Energy levels sharing one outcome volume V."""

    energies: np.ndarray
    volume: float = 1.0

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size == 0:
            raise ValidationError("energies must be a non-empty 1-d array")
        if not np.all(np.isfinite(e)):
            raise ValidationError("energies must be finite")
        if not np.isfinite(self.volume) or self.volume <= 0:
            raise ValidationError(f"volume must be > 0, got {self.volume}")
        e.flags.writeable = False
        object.__setattr__(self, "energies", e)


def energy_cg(H, windowing: EnergyWindowing) -> CoarseGraining:
    """Coarse-graining by energy windows of the given Hamiltonian.

    One effect per non-empty bin, each the sum of eigenprojectors whose
    (degeneracy-merged) eigenvalue lies in the bin.
    """
    eig = spectral(H)
    origin = windowing.origin
    if origin is None:
        origin = float(eig.eigenvalues[0])
    delta = windowing.delta
    bins: dict = {}
    for lam, proj in zip(eig.eigenvalues, eig.projectors):
        k = math.floor((lam - origin) / delta + 1e-12)
        if k < 0 and (lam - origin) / delta > -1e-9:
            k = 0
        bins.setdefault(k, []).append(proj)
    labels, effects = [], []
    for k in sorted(bins):
        lo, hi = origin + k * delta, origin + (k + 1) * delta
        labels.append(f"[{lo:.9g},{hi:.9g})")
        effects.append(sum(bins[k]))
    return CoarseGraining(tuple(labels), tuple(effects))


def gibbs_state(H, beta: float) -> np.ndarray:
    """Thermal state exp(-beta H) / Z, computed spectrally."""
    if not np.isfinite(beta):
        raise ValidationError(f"beta must be finite, got {beta}")
    m = as_matrix(H)
    lam, vec = np.linalg.eigh(m)
    ref = lam[0] if beta >= 0 else lam[-1]
    w = np.exp(-beta * (lam - ref))
    w /= w.sum()
    return (vec * w) @ vec.conj().T


def _mean_energy(H, rho) -> float:
    return float(np.trace(as_matrix(H) @ as_matrix(rho)).real)


def _gibbs_energy(lam: np.ndarray, beta: float) -> float:
    ref = lam[0] if beta >= 0 else lam[-1]
    w = np.exp(-beta * (lam - ref))
    return float(np.sum(lam * w) / np.sum(w))


def effective_beta(H, rho) -> float:
    """Inverse temperature of the Gibbs state matching Tr(H rho).

    Solved by bisection on [-BETA_RANGE, BETA_RANGE]; the Gibbs mean energy
    is strictly decreasing in beta. Negative results (population inversion)
    are returned, not rejected.
    """
    hm = as_matrix(H)
    lam = np.linalg.eigvalsh(hm)
    target = _mean_energy(hm, rho)
    span = max(float(lam[-1] - lam[0]), 1.0)
    if target <= lam[0] + 1e-12 * span or target >= lam[-1] - 1e-12 * span:
        raise EnergyOutOfRange(
            f"mean energy {target} is at or beyond the spectral endpoints "
            f"[{lam[0]}, {lam[-1]}]"
        )
    lo, hi = -tol.BETA_RANGE, tol.BETA_RANGE
    if _gibbs_energy(lam, lo) < target or _gibbs_energy(lam, hi) > target:
        raise NoConvergence(
            f"target energy {target} not bracketed by beta in [{lo}, {hi}]"
        )
    # bisect to interval exhaustion, then check the energy tolerance; this
    # pins beta itself, not just the energy mismatch
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _gibbs_energy(lam, mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    mid = 0.5 * (lo + hi)
    if abs(_gibbs_energy(lam, mid) - target) > tol.BETA_ENERGY_ATOL:
        raise NoConvergence("bisection did not reach the energy tolerance")
    return mid


@dataclass(frozen=True)
class FreeEnergyValues:
    partition: float
    partition_scaled: float
    helmholtz: float
    helmholtz_scaled: float


def free_energy(levels: LevelSystem, temperature: float) -> FreeEnergyValues:
    """Partition functions and Helmholtz free energies at a temperature.

    Z = sum_i exp(-E_i / T); the scaled variants multiply Z by the common
    outcome volume V: Z~ = V Z, A = -T log Z, A~ = -T log Z~.
    """
    if not np.isfinite(temperature) or temperature <= 0:
        raise InvalidTemperature(f"temperature must be > 0, got {temperature}")
    e = levels.energies
    ref = float(e.min())
    z = float(np.sum(np.exp(-(e - ref) / temperature)))
    log_z = math.log(z) - ref / temperature
    log_z_scaled = log_z + math.log(levels.volume)
    return FreeEnergyValues(
        partition=math.exp(log_z),
        partition_scaled=math.exp(log_z_scaled),
        helmholtz=-temperature * log_z,
        helmholtz_scaled=-temperature * log_z_scaled,
    )


def gibbs_distribution(levels: LevelSystem, temperature: float) -> np.ndarray:
    """Boltzmann weights exp(-E_i / T) / Z for a level system."""
    if not np.isfinite(temperature) or temperature <= 0:
        raise InvalidTemperature(f"temperature must be > 0, got {temperature}")
    e = levels.energies
    w = np.exp(-(e - e.min()) / temperature)
    return w / w.sum()


def jackson_check(levels: LevelSystem, t0: float, alpha: float) -> tuple:
    """Compare alpha-OE of a thermal level population with the Jackson
    difference quotient of the rescaled Helmholtz free energy.

    lhs is the alpha-OE of the constant-volume coarse-graining with
    p_i = exp(-E_i / T0) / Z(T0) and V_i = V; rhs is
    -(A~(T) - A~(T0)) / (T - T0) with T = T0 / alpha. Returns
    (lhs, rhs, lhs - rhs); the identity is exact in exact arithmetic.
    """
    if not np.isfinite(alpha) or alpha <= 0:
        raise InvalidAlpha(f"alpha must be a positive real, got {alpha}")
    if abs(alpha - 1.0) < 1e-15:
        raise InvalidAlpha("the difference quotient needs alpha != 1")
    if not np.isfinite(t0) or t0 <= 0:
        raise InvalidTemperature(f"temperature must be > 0, got {t0}")
    p = gibbs_distribution(levels, t0)
    v = np.full(p.shape, levels.volume)
    if abs(alpha - 1.0) < tol.ALPHA_NEAR_ONE:
        lhs = float(-np.sum(p * np.log(p / v)))
    else:
        lhs = -math.log(float(np.sum(p**alpha * v ** (1.0 - alpha)))) / (
            alpha - 1.0
        )
    t_new = t0 / alpha
    a_new = free_energy(levels, t_new).helmholtz_scaled
    a_old = free_energy(levels, t0).helmholtz_scaled
    rhs = -(a_new - a_old) / (t_new - t0)
    return lhs, rhs, lhs - rhs


@dataclass(frozen=True)
class ClosedSample:
    """One (time, alpha) row of a closed-system run."""

    t: float
    alpha: float
    energy: float
    beta_eff: float
    entropy: float
    delta_entropy: float
    heat_over_t: float
    xi3: float
    gibbs_monitor_ok: bool


@dataclass(frozen=True)
class ClosedRunRecord:
    samples: tuple
    guarantee_void: bool
    findings: tuple = ()

    def min_delta_entropy(self) -> float:
        return min(s.delta_entropy for s in self.samples)


def _propagator(hamiltonian: np.ndarray):
    lam, vec = np.linalg.eigh(hamiltonian)

    def u(t: float) -> np.ndarray:
        return (vec * np.exp(-1j * lam * t)) @ vec.conj().T

    return u


def _check_sample_times(sample_times, horizon: float | None) -> list:
    ts = [float(t) for t in sample_times]
    if not ts:
        raise ValidationError("at least one sample time is required")
    if any(b - a <= 0 for a, b in zip(ts, ts[1:])):
        raise ValidationError("sample times must be strictly increasing")
    if ts[0] < 0:
        raise ValidationError("sample times must be non-negative")
    if horizon is not None and ts[-1] > horizon + 1e-12:
        raise ValidationError(
            f"sample time {ts[-1]} exceeds protocol duration {horizon}"
        )
    return ts


def closed_run(
    protocol: DrivingProtocol,
    rho0,
    windowing: EnergyWindowing,
    alphas,
    sample_times,
) -> ClosedRunRecord:
    """Drive a closed system and track alpha-OE entropy production.

    The energy coarse-graining is rebuilt from the instantaneous
    Hamiltonian at every sample. When the initial state is not
    coarse-grained with respect to the initial energy windows, the run
    proceeds but carries guarantee_void=True and the entropy-production
    sign is no longer guaranteed.
    """
    rho = as_matrix(rho0)
    if rho.shape[0] != protocol.dim:
        raise DimensionMismatch(
            f"state dim {rho.shape[0]} != protocol dim {protocol.dim}"
        )
    alphas = [float(a) for a in alphas]
    ts = _check_sample_times(sample_times, protocol.total_duration)

    h0 = protocol.hamiltonian_at(0.0)
    cg0 = energy_cg(h0, windowing)
    premise = is_coarse_grained(cg0, rho, alphas[0])
    guarantee_void = not premise.matrix_close

    beta0 = effective_beta(h0, rho)
    gamma0 = gibbs_state(h0, beta0)
    base_oe = {a: alpha_oe(cg0, rho, a) for a in alphas}
    base_renyi = {a: renyi_entropy(gamma0, a) for a in alphas}

    # segment-start states, computed once with exact propagators
    seg_starts = [0.0]
    seg_states = [rho]
    seg_props = []
    for h, duration in protocol.segments:
        u = _propagator(h)
        seg_props.append(u)
        um = u(duration)
        seg_states.append(um @ seg_states[-1] @ um.conj().T)
        seg_starts.append(seg_starts[-1] + duration)

    def state_at(t: float) -> np.ndarray:
        k = 0
        while k + 1 < len(seg_starts) - 1 and t >= seg_starts[k + 1]:
            k += 1
        um = seg_props[k](t - seg_starts[k])
        return um @ seg_states[k] @ um.conj().T

    samples, findings = [], []
    for t in ts:
        rho_t = state_at(t)
        h_t = protocol.hamiltonian_at(t)
        cg_t = energy_cg(h_t, windowing)
        energy = _mean_energy(h_t, rho_t)
        beta_t = effective_beta(h_t, rho_t)
        gamma_t = gibbs_state(h_t, beta_t)
        for a in alphas:
            s_oe = alpha_oe(cg_t, rho_t, a)
            s_gibbs = renyi_entropy(gamma_t, a)
            heat = s_gibbs - base_renyi[a]
            xi3 = s_oe - s_gibbs + heat
            monitor_ok = s_oe <= s_gibbs + 1e-9
            if not monitor_ok:
                findings.append(
                    {
                        "type": "gibbs_max_violation",
                        "t": t,
                        "alpha": a,
                        "margin": s_oe - s_gibbs,
                    }
                )
            samples.append(
                ClosedSample(
                    t=t,
                    alpha=a,
                    energy=energy,
                    beta_eff=beta_t,
                    entropy=s_oe,
                    delta_entropy=s_oe - base_oe[a],
                    heat_over_t=heat,
                    xi3=xi3,
                    gibbs_monitor_ok=monitor_ok,
                )
            )
    return ClosedRunRecord(tuple(samples), guarantee_void, tuple(findings))


@dataclass(frozen=True)
class OpenSample:
    """One (time, alpha) row of an open-system run."""

    t: float
    alpha: float
    joint_entropy: float
    system_entropy: float
    bath_entropy: float
    mutual_info: float
    xi1: float
    xi2: float
    factorization_residual: float


@dataclass(frozen=True)
class OpenRunRecord:
    samples: tuple
    guarantee_void: bool
    findings: tuple = ()
    bath_volumes: tuple = ()

    def min_xi1(self) -> float:
        return min(s.xi1 for s in self.samples)


def _classical_mutual_info(p_joint: np.ndarray, alpha: float) -> float:
    """Renyi mutual information of a joint outcome table."""
    p = np.clip(p_joint, 0.0, None)
    ps, pb = p.sum(axis=1), p.sum(axis=0)
    if abs(alpha - 1.0) < tol.ALPHA_NEAR_ONE:
        mask = p > 0
        ref = np.outer(ps, pb)
        return float(np.sum(p[mask] * np.log(p[mask] / ref[mask])))
    num = float(np.sum(p[p > 0] ** alpha))
    den = float(np.sum(ps[ps > 0] ** alpha)) * float(np.sum(pb[pb > 0] ** alpha))
    return math.log(num / den) / (alpha - 1.0)


def open_run(
    h_s,
    h_b,
    v_sb,
    rho_s0,
    bath_beta: float,
    w_b: EnergyWindowing,
    alphas,
    sample_times,
    system_basis=None,
) -> OpenRunRecord:
    """Evolve system + bath jointly and track entropy-production terms.

    The joint state starts as rho_s0 tensor gibbs(h_b, bath_beta) and
    evolves under h_s x I + I x h_b + v_sb. The system is measured in
    system_basis (columns; default computational) with rank-1 projectors,
    the bath in energy windows of h_b. Per sample the record carries the
    joint alpha-OE, both marginal alpha-OEs, the outcome mutual
    information, xi1 (joint production), and xi2 (sum of marginal
    productions). The factorization joint = sys + bath - MI is exact when
    all bath windows share one volume; its residual is recorded.
    """
    hs, hb = as_matrix(h_s), as_matrix(h_b)
    ds, db = hs.shape[0], hb.shape[0]
    v = as_matrix(v_sb)
    if v.shape[0] != ds * db:
        raise DimensionMismatch(
            f"coupling dim {v.shape[0]} != {ds} * {db}"
        )
    rho_s = as_matrix(rho_s0)
    if rho_s.shape[0] != ds:
        raise DimensionMismatch(f"system state dim {rho_s.shape[0]} != {ds}")
    alphas = [float(a) for a in alphas]
    ts = _check_sample_times(sample_times, None)

    basis = np.eye(ds, dtype=complex) if system_basis is None else as_matrix(system_basis)
    cg_s = projective_cg(basis, labels=tuple(f"s{k}" for k in range(ds)))
    cg_b = energy_cg(hb, w_b)
    cg_joint = tensor_cg([cg_s, cg_b])

    h_joint = tensor(hs, np.eye(db)) + tensor(np.eye(ds), hb) + v
    rho_b = gibbs_state(hb, bath_beta)
    rho0 = tensor(rho_s, rho_b)

    premise = is_coarse_grained(cg_joint, rho0, alphas[0])
    guarantee_void = not premise.matrix_close

    n_s, n_b = len(cg_s), len(cg_b)

    def per_alpha_terms(rho_sb):
        rs = partial_trace(rho_sb, (ds, db), "A")
        rb = partial_trace(rho_sb, (ds, db), "B")
        p_joint = outcomes(cg_joint, rho_sb).probabilities.reshape(n_s, n_b)
        out = {}
        for a in alphas:
            s_joint = alpha_oe(cg_joint, rho_sb, a)
            s_sys = alpha_oe(cg_s, rs, a)
            s_bath = alpha_oe(cg_b, rb, a)
            mi = _classical_mutual_info(p_joint, a)
            out[a] = (s_joint, s_sys, s_bath, mi)
        return out

    base = per_alpha_terms(rho0)
    u = _propagator(h_joint)

    samples, findings = [], []
    for t in ts:
        um = u(t)
        rho_t = um @ rho0 @ um.conj().T
        terms = per_alpha_terms(rho_t)
        for a in alphas:
            s_joint, s_sys, s_bath, mi = terms[a]
            b_joint, b_sys, b_bath, _ = base[a]
            xi1 = s_joint - b_joint
            xi2 = (s_sys - b_sys) + (s_bath - b_bath)
            residual = s_joint - (s_sys + s_bath - mi)
            if mi < -1e-9:
                findings.append(
                    {"type": "negative_mutual_info", "t": t, "alpha": a, "value": mi}
                )
            if xi2 < -1e-9:
                findings.append(
                    {"type": "negative_xi2", "t": t, "alpha": a, "value": xi2}
                )
            samples.append(
                OpenSample(
                    t=t,
                    alpha=a,
                    joint_entropy=s_joint,
                    system_entropy=s_sys,
                    bath_entropy=s_bath,
                    mutual_info=mi,
                    xi1=xi1,
                    xi2=xi2,
                    factorization_residual=residual,
                )
            )
    return OpenRunRecord(
        tuple(samples),
        guarantee_void,
        tuple(findings),
        tuple(float(v) for v in cg_b.volumes()),
    )
