"""Nahm flow in su(k): the bracket right-hand side, pole-model initial data,
an embedded Dormand-Prince 5(4) integrator with per-step re-anti-Hermitisation
and invariant monitors (anti-Hermiticity drift, spectrum of T2 + i T3,
sigma-residual history), the time-reflection extension through a Lie-algebra
involution, and the symmetric-pair bookkeeping table.

Convention: dT_i/dt = [T_j, T_k] + [T_i, T0] cyclically in (1,2,3), T0
constant (the gauge component); T_i(t) = -A_i/t is then an exact solution
when [A_1, A_2] = A_3 cyclically, which the normalised principal residue
triple satisfies.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .liealg import principal_residues, sigma

__all__ = [
    "CONVENTION",
    "NahmState",
    "FlowControls",
    "FlowReport",
    "StepUnderflowError",
    "ContinuityError",
    "nahm_rhs",
    "pole_model_state",
    "integrate",
    "beta_spectrum_drift",
    "sigma_residual",
    "extend_by_involution",
    "trajectory_defect",
    "SymmetricPairSpec",
    "symmetric_pair_table",
]

CONVENTION = (
    "dT_i/dt = [T_j,T_k] + [T_i,T0] cyclic in (1,2,3); "
    "pole model T_i(t) = -A_i/t with (A_1,A_2,A_3) = (R_1/2, R_2, R_3)"
)


class StepUnderflowError(RuntimeError):
    """Adaptive step size collapsed, typically near a pole of the flow."""


class ContinuityError(ValueError):
    """Involution extension is discontinuous at the reflection point t=1."""


def _maxabs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclasses.dataclass(frozen=True)
class NahmState:
    """Time t in (0, 2) and the quadruple (T0, T1, T2, T3) as a (4, k, k)
    complex array; T0 is the gauge component."""

    t: float
    T: np.ndarray

    @classmethod
    def from_matrices(cls, t, T0, T1, T2, T3) -> "NahmState":
        return cls(t=float(t), T=np.stack([T0, T1, T2, T3]).astype(np.complex128))

    @property
    def k(self) -> int:
        return self.T.shape[-1]

    @property
    def T0(self) -> np.ndarray:
        return self.T[0]

    @property
    def T1(self) -> np.ndarray:
        return self.T[1]

    @property
    def T2(self) -> np.ndarray:
        return self.T[2]

    @property
    def T3(self) -> np.ndarray:
        return self.T[3]

    def beta(self) -> np.ndarray:
        return self.T[2] + 1j * self.T[3]

    def anti_hermiticity_deviation(self) -> float:
        return max(_maxabs(m + m.conj().T) / 2.0 for m in self.T)

    def validate(self, tol: float = 1e-10) -> None:
        if not (0.0 < self.t < 2.0):
            raise ValueError(f"t = {self.t} outside the open interval (0, 2)")
        if self.T.shape != (4, self.k, self.k):
            raise ValueError("state must hold four square matrices")
        if self.anti_hermiticity_deviation() > tol:
            raise ValueError("state matrices are not anti-Hermitian")


def nahm_rhs(state: NahmState) -> np.ndarray:
    """Bracket right-hand side of the four-matrix system (dT0 = 0)."""
    return _rhs(state.T)


def _rhs(T: np.ndarray) -> np.ndarray:
    T0, T1, T2, T3 = T
    out = np.zeros_like(T)
    out[1] = T2 @ T3 - T3 @ T2 + T1 @ T0 - T0 @ T1
    out[2] = T3 @ T1 - T1 @ T3 + T2 @ T0 - T0 @ T2
    out[3] = T1 @ T2 - T2 @ T1 + T3 @ T0 - T0 @ T3
    return out


def pole_model_state(k: int, t: float) -> NahmState:
    """Exact pole solution T_i = -A_i/t built from the normalised principal
    residue triple, with zero gauge component."""
    a1, a2, a3 = principal_residues(k).commutator_normalized()
    return NahmState.from_matrices(t, np.zeros((k, k)), -a1 / t, -a2 / t, -a3 / t)


def sigma_residual(state: NahmState) -> float:
    """Max distance of the four matrices from their sigma images."""
    return max(_maxabs(m - sigma(m)) for m in state.T)


@dataclasses.dataclass(frozen=True)
class FlowControls:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 200_000
    min_step: float = 1e-13
    initial_step: float | None = None
    beta_scale_exponent: float = 0.0

    def __post_init__(self) -> None:
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


@dataclasses.dataclass(frozen=True)
class FlowReport:
    final: NahmState
    checkpoints: tuple[NahmState, ...]
    max_antihermiticity_drift: float
    max_drift_rate: float
    beta_spectrum_drift: float
    sigma_residual_history: tuple[tuple[float, float], ...]
    steps_accepted: int
    steps_rejected: int
    min_step_taken: float
    max_step_taken: float
    convention: str = CONVENTION


# Dormand-Prince 5(4) tableau.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def _dp_step(T: np.ndarray, h: float) -> tuple[np.ndarray, float]:
    """One embedded step: returns the 5th-order update and the error norm
    scaled so values <= 1 are acceptable."""
    stages = [_rhs(T)]
    for i in range(1, 7):
        acc = np.zeros_like(T)
        for a, s in zip(_DP_A[i], stages):
            acc += a * s
        stages.append(_rhs(T + h * acc))
    new = T + h * sum(b * s for b, s in zip(_DP_B5, stages))
    low = T + h * sum(b * s for b, s in zip(_DP_B4, stages))
    return new, _maxabs(new - low)


def integrate(
    initial: NahmState, t_end: float, controls: FlowControls = FlowControls()
) -> FlowReport:
    """Adaptive flow from the initial state to t_end (either direction),
    re-anti-Hermitising after every accepted step.

    Raises :class:`StepUnderflowError` when the step collapses below
    ``controls.min_step`` (with the location in the message).
    """
    initial.validate()
    if not (0.0 < t_end < 2.0):
        raise ValueError("t_end must lie in the open interval (0, 2)")
    t, T = initial.t, initial.T.copy()
    span = t_end - t
    checkpoints = [NahmState(t=t, T=T.copy())]
    sigma_history = [(t, sigma_residual(checkpoints[0]))]
    max_drift = 0.0
    max_rate = 0.0
    accepted = rejected = 0
    min_h = np.inf
    max_h = 0.0

    if span == 0.0:
        return _build_report(
            checkpoints, max_drift, max_rate, sigma_history, accepted, rejected,
            0.0, 0.0, controls,
        )

    direction = 1.0 if span > 0 else -1.0
    f0 = _maxabs(_rhs(T))
    h = controls.initial_step or min(0.05 * abs(span), 0.01 / (1.0 + f0))
    h = direction * min(h, abs(span))

    while (t_end - t) * direction > 1e-15:
        if abs(h) < controls.min_step:
            raise StepUnderflowError(f"step underflow at t = {t:.6g}")
        if (t + h - t_end) * direction > 0:
            h = t_end - t
        if accepted + rejected >= controls.max_steps:
            raise StepUnderflowError(f"step budget exhausted at t = {t:.6g}")
        new, err = _dp_step(T, h)
        scale = controls.atol + controls.rtol * max(_maxabs(T), _maxabs(new))
        ratio = err / scale
        if ratio <= 1.0:
            t = t + h
            drift = max(_maxabs(m + m.conj().T) / 2.0 for m in new)
            max_drift = max(max_drift, drift)
            max_rate = max(max_rate, drift / abs(h))
            T = np.stack([0.5 * (m - m.conj().T) for m in new])
            state = NahmState(t=t, T=T.copy())
            checkpoints.append(state)
            sigma_history.append((t, sigma_residual(state)))
            accepted += 1
            min_h = min(min_h, abs(h))
            max_h = max(max_h, abs(h))
        else:
            rejected += 1
        factor = 0.9 * ratio ** (-0.2) if ratio > 0 else 5.0
        h = h * min(5.0, max(0.2, factor))

    return _build_report(
        checkpoints, max_drift, max_rate, sigma_history, accepted, rejected,
        0.0 if np.isinf(min_h) else min_h, max_h, controls,
    )


def _build_report(
    checkpoints, max_drift, max_rate, sigma_history, accepted, rejected,
    min_h, max_h, controls,
) -> FlowReport:
    return FlowReport(
        final=checkpoints[-1],
        checkpoints=tuple(checkpoints),
        max_antihermiticity_drift=max_drift,
        max_drift_rate=max_rate,
        beta_spectrum_drift=beta_spectrum_drift(
            checkpoints, controls.beta_scale_exponent
        ),
        sigma_residual_history=tuple(sigma_history),
        steps_accepted=accepted,
        steps_rejected=rejected,
        min_step_taken=float(min_h),
        max_step_taken=float(max_h),
    )


def beta_spectrum_drift(
    checkpoints: "list[NahmState] | tuple[NahmState, ...]",
    scale_exponent: float = 0.0,
) -> float:
    """Max matched-eigenvalue displacement of t^s * (T2 + i T3) relative to
    the first checkpoint; s = 0 monitors the plain isospectral flow, s = 1
    suits the 1/t pole model.

    Eigenvalues are matched greedily by nearest neighbour, adequate for the
    well-separated spectra this monitors.
    """
    if len(checkpoints) < 2:
        return 0.0
    ref = np.linalg.eigvals(
        checkpoints[0].beta() * checkpoints[0].t ** scale_exponent
    )
    worst = 0.0
    for state in checkpoints[1:]:
        eig = np.linalg.eigvals(state.beta() * state.t ** scale_exponent)
        remaining = list(ref)
        for value in eig:
            gaps = [abs(value - r) for r in remaining]
            j = int(np.argmin(gaps))
            worst = max(worst, gaps[j])
            remaining.pop(j)
    return worst


def extend_by_involution(
    trajectory: "list[NahmState] | tuple[NahmState, ...]",
    tau,
    tol: float = 1e-8,
) -> list[NahmState]:
    """Extend a trajectory ending at t = 1 to (0, 2) by the time reflection
    T_i(2 - t) = -tau(T_i(t)).

    ``tau`` must be an involutive Lie-algebra automorphism (a callable on
    matrices); the extension is continuous at t = 1 iff T0(1) = 0 and
    T_i(1) = -tau(T_i(1)), which is checked within ``tol`` and raises
    :class:`ContinuityError` otherwise.  tau of a solution composed with the
    time flip is again a solution, so the mirrored half inherits the forward
    residual bound.
    """
    if not trajectory:
        raise ValueError("empty trajectory")
    states = sorted(trajectory, key=lambda s: s.t)
    last = states[-1]
    if abs(last.t - 1.0) > 1e-9:
        raise ContinuityError(f"trajectory must end at t = 1, got {last.t}")
    if _maxabs(last.T0) > tol:
        raise ContinuityError(
            f"gauge component at t = 1 must vanish (|T0| = {_maxabs(last.T0):.3e})"
        )
    for i in (1, 2, 3):
        mismatch = _maxabs(last.T[i] + tau(last.T[i]))
        if mismatch > tol:
            raise ContinuityError(
                f"T{i}(1) is not tau-anti-fixed (mismatch {mismatch:.3e})"
            )
    extended = list(states)
    for state in reversed(states[:-1]):
        mirrored = np.stack([-tau(m) for m in state.T])
        extended.append(NahmState(t=2.0 - state.t, T=mirrored))
    return extended


def trajectory_defect(
    trajectory: "list[NahmState] | tuple[NahmState, ...]",
) -> np.ndarray:
    """Per-interval defect: both endpoint states are advanced to the interval
    midpoint with one classical RK4 step and compared.  The symmetric form
    makes the defect invariant under the involution extension."""

    def rk4(T, h):
        k1 = _rhs(T)
        k2 = _rhs(T + 0.5 * h * k1)
        k3 = _rhs(T + 0.5 * h * k2)
        k4 = _rhs(T + h * k3)
        return T + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    states = list(trajectory)
    out = np.zeros(max(len(states) - 1, 0))
    for i in range(len(states) - 1):
        a, b = states[i], states[i + 1]
        h = b.t - a.t
        out[i] = _maxabs(rk4(a.T, 0.5 * h) - rk4(b.T, -0.5 * h))
    return out


@dataclasses.dataclass(frozen=True)
class SymmetricPairSpec:
    """Bookkeeping for the symmetric pair (G, K) attached to charge k, with
    the dimension count behind the moduli-space dimension 4*floor(k/2)."""

    k: int
    case: str  # "i", "ii" or "iii"
    group: str
    subgroup: str
    dim_group: int
    dim_subgroup: int
    rank: int

    def __post_init__(self) -> None:
        n = self.k // 2
        if self.dim_group != n * (2 * n + 1):
            raise ValueError("group dimension does not match the named group")
        if self.dim_subgroup != n * n:
            raise ValueError("subgroup dimension does not match the named subgroup")
        if self.rank != n:
            raise ValueError("rank must equal floor(k/2)")

    @property
    def moduli_dimension(self) -> int:
        """2 dim G + 2 rank - 4 dim K, the hyperkahler-quotient count; equals
        4 * floor(k/2) in every case."""
        return 2 * self.dim_group + 2 * self.rank - 4 * self.dim_subgroup


def symmetric_pair_table(k: int) -> list[SymmetricPairSpec]:
    """The symmetric pairs available at charge k: (Sp(n), U(n)) for k = 2n;
    for k = 2n+1 both the special-orthogonal pair and its spin cover, which
    share all Lie-algebra data."""
    if k < 2:
        raise ValueError("charge k must be >= 2")
    n = k // 2
    dim_g = n * (2 * n + 1)
    dim_k = n * n
    if k % 2 == 0:
        return [
            SymmetricPairSpec(
                k=k, case="i", group=f"Sp({n})", subgroup=f"U({n})",
                dim_group=dim_g, dim_subgroup=dim_k, rank=n,
            )
        ]
    return [
        SymmetricPairSpec(
            k=k, case="ii", group=f"SO({2 * n + 1})",
            subgroup=f"S(O({n})xO({n + 1}))",
            dim_group=dim_g, dim_subgroup=dim_k, rank=n,
        ),
        SymmetricPairSpec(
            k=k, case="iii", group=f"Spin({2 * n + 1})",
            subgroup=f"(Spin({n})xSpin({n + 1}))/diag",
            dim_group=dim_g, dim_subgroup=dim_k, rank=n,
        ),
    ]
