"""Rational-map models of monopole moduli: structural validation of based
maps, the strongly-centred and reflection-symmetric membership tests, a
deterministic sampler for the symmetric stratum, and the passage from
commuting pairs (S, u) to rational maps.

A based rational map of charge k is p(z)/q(z) with q monic of degree k,
deg p <= k-1 and p, q coprime.  "Strongly centred" means the poles sum to
zero and the product of p over the poles (the total phase) is 1; the
reflection-symmetric locus N_k additionally has q even (or z times even) and
p(z) p(-z) = 1 mod q(z), with p(0) = 1 for odd k.
"""
from __future__ import annotations

import dataclasses
from typing import Iterable

import numpy as np

from .polyalg import (
    DEFAULT_TOL,
    Poly,
    ToleranceContext,
    poly_interpolate,
    poly_mod,
    poly_resultant,
)

__all__ = [
    "BasedRationalMap",
    "CompanionData",
    "CheckResult",
    "MembershipReport",
    "is_strongly_centred",
    "is_nk_member",
    "strongly_centred_report",
    "nk_membership_report",
    "nk_parameter_count",
    "member_from_parameters",
    "sample_nk",
    "companion_matrix",
    "rational_map_from_su",
]


@dataclasses.dataclass(frozen=True)
class BasedRationalMap:
    """Numerator, monic denominator and charge of a based rational map."""

    p: Poly
    q: Poly
    k: int

    def validate(self, tol: ToleranceContext = DEFAULT_TOL) -> None:
        if self.k < 1:
            raise ValueError("charge must be >= 1")
        if self.q.degree != self.k:
            raise ValueError(f"q must have degree {self.k}, got {self.q.degree}")
        if not self.q.is_monic(tol.eq_tol):
            raise ValueError("q must be monic")
        if self.p.degree > self.k - 1:
            raise ValueError("deg p must be <= k-1 (based map)")
        if abs(poly_resultant(self.q, self.p, tol)) <= tol.eq_tol:
            raise ValueError("p and q must be coprime (resultant ~ 0)")

    def is_valid(self, tol: ToleranceContext = DEFAULT_TOL) -> bool:
        try:
            self.validate(tol)
        except ValueError:
            return False
        return True


@dataclasses.dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    passed: bool


@dataclasses.dataclass(frozen=True)
class MembershipReport:
    kind: str
    checks: tuple[CheckResult, ...]

    @property
    def member(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(name: str, residual: float, tol: float) -> CheckResult:
    return CheckResult(name=name, residual=float(residual), passed=residual < tol)


def strongly_centred_report(
    m: BasedRationalMap, tol: float = DEFAULT_TOL.eq_tol
) -> MembershipReport:
    """Pole-sum and total-phase checks; the phase is a resultant so repeated
    poles contribute with multiplicity."""
    pole_sum = abs(m.q.coeff(m.k - 1))  # monic q: z^(k-1) coefficient = -sum
    phase = poly_resultant(m.q, m.p)
    checks = (
        _check("pole_sum_zero", pole_sum, tol),
        _check("total_phase_one", abs(phase - 1.0), tol),
    )
    return MembershipReport(kind="mk0", checks=checks)


def is_strongly_centred(m: BasedRationalMap, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    return strongly_centred_report(m, tol).member


def nk_membership_report(
    m: BasedRationalMap, tol: float = DEFAULT_TOL.eq_tol
) -> MembershipReport:
    """Reflection-symmetry checks on a based map.

    Even k: q even and p(z) p(-z) = 1 mod q.  Odd k: q/z even, p(0) = 1 and
    the same congruence.  The congruence (not a per-root test) keeps closure
    points with repeated poles inside the locus.
    """
    checks = []
    q_scale = 1.0 + m.q.norm()
    odd_part = np.abs(m.q.coeffs[1::2]) if not m.q.is_zero else np.zeros(0)
    if m.k % 2 == 0:
        residual = float(np.max(odd_part)) if odd_part.size else 0.0
        checks.append(_check("q_even", residual / q_scale, tol))
    else:
        checks.append(_check("q_zero_at_origin", abs(m.q.coeff(0)) / q_scale, tol))
        even_part = np.abs(m.q.coeffs[0::2]) if not m.q.is_zero else np.zeros(0)
        residual = float(np.max(even_part)) if even_part.size else 0.0
        checks.append(_check("q_over_z_even", residual / q_scale, tol))
        checks.append(_check("p_at_origin_one", abs(m.p.coeff(0) - 1.0), tol))
    product = m.p * m.p.reflected()
    congruence = poly_mod(product, m.q) - Poly.one()
    scale = 1.0 + product.norm()
    checks.append(_check("product_congruence", congruence.norm() / scale, tol))
    return MembershipReport(kind="nk", checks=tuple(checks))


def is_nk_member(m: BasedRationalMap, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    return nk_membership_report(m, tol).member


# -- sampling ---------------------------------------------------------------


def nk_parameter_count(k: int) -> int:
    """Real parameters consumed per sample: 4 * floor(k/2)."""
    return 4 * (k // 2)


def member_from_parameters(k: int, theta: Iterable[float]) -> BasedRationalMap:
    """Deterministic map from 4*floor(k/2) reals in [0, 1) to a
    reflection-symmetric member.

    Parameters fix n = floor(k/2) squared pole positions w_j^2 (radius and
    angle) and n nonzero values c_j (log-modulus and argument); the numerator
    interpolates p(w_j) = c_j, p(-w_j) = 1/c_j (and p(0) = 1 for odd k), the
    denominator is the product of (z^2 - w_j^2) (times z for odd k).

    Raises ValueError when the drawn pole positions are too close together.
    """
    n = k // 2
    theta = np.asarray(list(theta), dtype=float)
    if theta.shape != (4 * n,):
        raise ValueError(f"expected {4 * n} parameters, got {theta.shape}")
    radius, angle, logmod, argument = (
        theta[:n],
        theta[n : 2 * n],
        theta[2 * n : 3 * n],
        theta[3 * n :],
    )
    w_squared = (0.6 + 0.9 * radius) * np.exp(2j * np.pi * angle)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(w_squared[i] - w_squared[j]) < 5e-2:
                raise ValueError("pole positions insufficiently separated")
    values = np.exp(0.8 * (2.0 * logmod - 1.0) + 2j * np.pi * argument)

    w = np.sqrt(w_squared)
    q = Poly.one()
    for ws in w_squared:
        q = q * Poly([-ws, 0.0, 1.0])
    points = []
    if k % 2 == 1:
        q = q * Poly.x()
        points.append((0.0, 1.0))
    for wj, cj in zip(w, values):
        points.append((wj, cj))
        points.append((-wj, 1.0 / cj))
    p = poly_interpolate(points)
    return BasedRationalMap(p=p, q=q, k=k)


def sample_nk(k: int, seed: int, max_retries: int = 64) -> BasedRationalMap:
    """Seeded draw from the reflection-symmetric stratum with distinct poles.

    Each attempt consumes exactly 4 * floor(k/2) real degrees of freedom;
    draws failing the pole-separation requirement are redrawn, up to
    ``max_retries``.
    """
    if k < 2:
        raise ValueError("charge k must be >= 2")
    rng = np.random.default_rng(seed)
    last_error: Exception | None = None
    for _ in range(max_retries):
        theta = rng.random(nk_parameter_count(k))
        try:
            return member_from_parameters(k, theta)
        except ValueError as exc:
            last_error = exc
    raise ValueError(f"pole separation failed after {max_retries} retries") from last_error


# -- companion form and (S, u) calculus -------------------------------------


@dataclasses.dataclass(frozen=True)
class CompanionData:
    """Companion-form matrix S (subdiagonal ones, free last column) together
    with an element u of its centraliser."""

    S: np.ndarray
    u: np.ndarray

    def validate(self, tol: ToleranceContext = DEFAULT_TOL) -> None:
        k = self.S.shape[0]
        if self.S.shape != (k, k) or self.u.shape != (k, k):
            raise ValueError("S and u must be square of equal size")
        pattern = np.zeros((k, k), dtype=bool)
        pattern[:, k - 1] = True
        expected_sub = np.zeros((k, k), dtype=np.complex128)
        for i in range(1, k):
            pattern[i, i - 1] = True
            expected_sub[i, i - 1] = 1.0
        off = np.where(pattern, 0.0, self.S)
        if float(np.max(np.abs(off))) > tol.eq_tol:
            raise ValueError("S has entries outside the companion pattern")
        sub_err = np.abs(np.diagonal(self.S, offset=-1) - 1.0)
        if k > 1 and float(np.max(sub_err)) > tol.eq_tol:
            raise ValueError("S subdiagonal must be identically 1")
        comm = self.S @ self.u - self.u @ self.S
        scale = max(1.0, float(np.max(np.abs(self.u))))
        if float(np.max(np.abs(comm))) > tol.eq_tol * scale:
            raise ValueError("u does not commute with S within tolerance")


def companion_matrix(q: Poly, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Companion-form matrix with characteristic polynomial q (monic)."""
    if not q.is_monic(tol.eq_tol):
        raise ValueError("q must be monic")
    k = q.degree
    if k < 1:
        raise ValueError("q must have degree >= 1")
    s = np.zeros((k, k), dtype=np.complex128)
    for i in range(1, k):
        s[i, i - 1] = 1.0
    s[:, k - 1] = -q.coeffs[:k]
    return s


def _faddeev_leverrier(s: np.ndarray) -> tuple[Poly, list[np.ndarray]]:
    """Characteristic polynomial of s and the adjugate expansion matrices
    M_1..M_k with adj(zI - s) = sum_j z^(k-j) M_j."""
    k = s.shape[0]
    char = np.zeros(k + 1, dtype=np.complex128)
    char[k] = 1.0
    mats = []
    m = np.eye(k, dtype=np.complex128)
    for j in range(1, k + 1):
        mats.append(m)
        c = -np.trace(s @ m) / j
        char[k - j] = c
        m = s @ m + c * np.eye(k)
    return Poly(char), mats


def rational_map_from_su(
    c: CompanionData, tol: ToleranceContext = DEFAULT_TOL
) -> BasedRationalMap:
    """Rational map tr(u (zI - S)^{-1}) = p(z)/q(z) of a commuting pair.

    q is the characteristic polynomial of S and p collects the traces of u
    against the adjugate expansion, both from the Faddeev-LeVerrier
    recurrence; no inversion at symbolic z is performed.
    """
    c.validate(tol)
    k = c.S.shape[0]
    q, mats = _faddeev_leverrier(c.S)
    p_coeffs = np.zeros(k, dtype=np.complex128)
    for j, m in enumerate(mats, start=1):
        p_coeffs[k - j] = np.trace(c.u @ m)
    return BasedRationalMap(p=Poly(p_coeffs), q=q, k=k)
