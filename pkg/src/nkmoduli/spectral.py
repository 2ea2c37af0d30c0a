"""Spectral-curve polynomial calculus: curves P(zeta, eta) = eta^(2n) +
sum_i a_i(zeta) eta^(2n-2i), sections represented mod P, the norm-one product
congruence s(zeta, eta) s(zeta, -eta) = 1 mod P, evaluation on the zero
section, the two-modulus reconstruction of sbar on the reducible curve
eta P = 0, and curve rescaling.

Polynomials in eta carry :class:`~nkmoduli.polyalg.Poly` coefficients in
zeta; eta-division works in that ring because every curve is monic in eta.
"""
from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

from .polyalg import DEFAULT_TOL, Poly, ToleranceContext, poly_divmod

__all__ = [
    "CurvePoly",
    "SpectralSection",
    "ZeroSectionReport",
    "eta_mul",
    "eta_reflect",
    "eta_reduce",
    "section_product_residual",
    "section_product_check",
    "eval_on_zero_section",
    "build_sbar",
    "rescale_curve",
    "sample_norm_one_section",
]

EtaPoly = tuple[Poly, ...]


def _eta_trim(coeffs: Sequence[Poly]) -> EtaPoly:
    out = list(coeffs)
    while out and out[-1].is_zero:
        out.pop()
    return tuple(out)


def eta_mul(a: Sequence[Poly], b: Sequence[Poly]) -> EtaPoly:
    """Product of eta-polynomials with Poly coefficients (convolution)."""
    if not a or not b:
        return ()
    out = [Poly.zero() for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return _eta_trim(out)


def eta_reflect(a: Sequence[Poly]) -> EtaPoly:
    """eta -> -eta; exact sign flips on odd coefficients."""
    return _eta_trim([c if i % 2 == 0 else -c for i, c in enumerate(a)])


def _eta_norm(a: Sequence[Poly]) -> float:
    return max((c.norm() for c in a), default=0.0)


@dataclasses.dataclass(frozen=True)
class CurvePoly:
    """Even curve eta^(2n) + sum_{i=1..n} a_i(zeta) eta^(2n-2i); the stored
    tuple is (a_1, ..., a_n) with deg a_i <= 4i."""

    n: int
    a: EtaPoly

    def validate(self) -> None:
        if self.n < 1 or len(self.a) != self.n:
            raise ValueError(f"need exactly n = {self.n} coefficient polynomials")
        for i, ai in enumerate(self.a, start=1):
            if ai.degree > 4 * i:
                raise ValueError(f"deg a_{i} = {ai.degree} exceeds the bound {4 * i}")

    def eta_coeffs(self) -> EtaPoly:
        """Dense eta-ascending coefficients, length 2n + 1 and monic."""
        out = [Poly.zero()] * (2 * self.n + 1)
        out[2 * self.n] = Poly.one()
        for i, ai in enumerate(self.a, start=1):
            out[2 * self.n - 2 * i] = ai
        return tuple(out)

    def constant_coefficient(self) -> Poly:
        """P(zeta, 0) = a_n."""
        return self.a[-1]


def eta_reduce(coeffs: Sequence[Poly], curve: CurvePoly) -> EtaPoly:
    """Remainder of an eta-polynomial modulo the curve (monic in eta)."""
    p = curve.eta_coeffs()
    deg_p = 2 * curve.n
    rem = list(coeffs)
    while len(rem) - 1 >= deg_p:
        top = rem[-1]
        shift = len(rem) - 1 - deg_p
        if not top.is_zero:
            for j in range(deg_p + 1):
                rem[shift + j] = rem[shift + j] - top * p[j]
        rem.pop()
    # re-trim each coefficient to drop cancellation noise
    cleaned = [Poly(c.coeffs) if c.norm() > 0 else c for c in rem]
    return _eta_trim(cleaned)


@dataclasses.dataclass(frozen=True)
class SpectralSection:
    """Section data: eta-ascending Poly coefficients, reduced mod the curve
    so the eta-degree stays below 2n."""

    coeffs: EtaPoly

    @classmethod
    def reduced(cls, coeffs: Sequence[Poly], curve: CurvePoly) -> "SpectralSection":
        return cls(coeffs=eta_reduce(coeffs, curve))

    def degree_bound_ok(self, curve: CurvePoly) -> bool:
        return len(self.coeffs) <= 2 * curve.n

    def at_zero_eta(self) -> Poly:
        return self.coeffs[0] if self.coeffs else Poly.zero()


def section_product_residual(s: SpectralSection, curve: CurvePoly) -> float:
    """Scaled coefficient norm of s(eta) s(-eta) - 1 reduced mod the curve."""
    product = eta_mul(s.coeffs, eta_reflect(s.coeffs))
    if product:
        product = (product[0] - Poly.one(),) + product[1:]
    else:
        product = (Poly([-1.0]),)
    rem = eta_reduce(product, curve)
    scale = 1.0 + _eta_norm(eta_mul(s.coeffs, eta_reflect(s.coeffs)))
    return _eta_norm(rem) / scale


def section_product_check(
    s: SpectralSection, curve: CurvePoly, tol: float = DEFAULT_TOL.eq_tol
) -> bool:
    """True iff s(zeta, eta) s(zeta, -eta) = 1 mod P(zeta, eta) within tol."""
    curve.validate()
    return section_product_residual(s, curve) < tol


def _default_zeta_grid() -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(13) / 13.0
    return 1.37 * np.exp(1j * angles) + 0.11


@dataclasses.dataclass(frozen=True)
class ZeroSectionReport:
    """Values of s(zeta, 0) on a zeta grid with per-point +-1 flags; points
    where P(zeta, 0) vanishes are skipped and listed."""

    zeta_points: tuple[complex, ...]
    values: tuple[complex, ...]
    is_pm_one: tuple[bool, ...]
    skipped: tuple[int, ...]

    @property
    def all_pm_one(self) -> bool:
        return all(
            flag for i, flag in enumerate(self.is_pm_one) if i not in self.skipped
        )


def eval_on_zero_section(
    s: SpectralSection,
    curve: CurvePoly,
    zeta_points: Sequence[complex] | None = None,
    tol: float = DEFAULT_TOL.eq_tol,
) -> ZeroSectionReport:
    """Evaluate s(zeta, 0) on a grid and report closeness to +-1.

    The product congruence forces s(zeta, 0)^2 = 1 only against P(zeta, 0),
    so non-unit values are possible for sections that merely satisfy the
    coefficient identity; they are reported, never silently asserted.
    """
    if not section_product_check(s, curve, tol=max(tol, DEFAULT_TOL.eq_tol)):
        raise ValueError("section fails the product congruence")
    pts = (
        np.asarray(zeta_points, dtype=complex)
        if zeta_points is not None
        else _default_zeta_grid()
    )
    origin = s.at_zero_eta()
    gate = curve.constant_coefficient()
    gate_scale = 1.0 + gate.norm()
    values, flags, skipped = [], [], []
    for i, z in enumerate(pts):
        v = origin(z)
        values.append(complex(v))
        if abs(gate(z)) <= tol * gate_scale:
            skipped.append(i)
            flags.append(False)
            continue
        flags.append(min(abs(v - 1.0), abs(v + 1.0)) <= max(tol, 1e-8))
    return ZeroSectionReport(
        zeta_points=tuple(complex(z) for z in pts),
        values=tuple(values),
        is_pm_one=tuple(flags),
        skipped=tuple(skipped),
    )


def build_sbar(
    s: SpectralSection, curve: CurvePoly, tol: ToleranceContext = DEFAULT_TOL
) -> EtaPoly:
    """Unique eta-polynomial of degree <= 2n with sbar = s^2 mod P and
    sbar = 1 mod eta: the nonvanishing section datum on the reducible curve
    eta P = 0.

    Reconstruction: with A = s^2 mod P, sbar = A + c(zeta) P where
    c = (1 - A(zeta, 0)) / P(zeta, 0); the product congruence makes that
    division exact.  Raises when gcd(eta, P) is non-constant (P(zeta, 0)
    identically zero) or the congruences cannot be met.
    """
    curve.validate()
    a_n = curve.constant_coefficient()
    if a_n.is_zero:
        raise ValueError("eta and P share a factor: P(zeta, 0) is identically zero")
    if section_product_residual(s, curve) >= tol.eq_tol:
        raise ValueError("section fails the product congruence")
    squared = eta_reduce(eta_mul(s.coeffs, s.coeffs), curve)
    a0 = squared[0] if squared else Poly.zero()
    c, rem = poly_divmod(Poly.one() - a0, a_n)
    if rem.norm() > tol.eq_tol * (1.0 + a0.norm()):
        raise ValueError(
            f"origin correction is not polynomial (residual {rem.norm():.3e})"
        )
    p_coeffs = curve.eta_coeffs()
    out = [Poly.zero()] * (2 * curve.n + 1)
    for i, coeff in enumerate(squared):
        out[i] = coeff
    for j, pj in enumerate(p_coeffs):
        out[j] = out[j] + c * pj
    sbar = _eta_trim(out)

    # verify both congruences before handing the result back
    diff = list(sbar)
    for i, coeff in enumerate(eta_reduce(eta_mul(s.coeffs, s.coeffs), curve)):
        diff[i] = diff[i] - coeff
    residual_p = _eta_norm(eta_reduce(diff, curve))
    origin = sbar[0] if sbar else Poly.zero()
    residual_origin = (origin - Poly.one()).norm()
    scale = 1.0 + _eta_norm(sbar)
    if residual_p > tol.eq_tol * scale or residual_origin > tol.eq_tol * scale:
        raise ValueError(
            "sbar reconstruction failed "
            f"(mod-P residual {residual_p:.3e}, origin residual {residual_origin:.3e})"
        )
    return sbar


def rescale_curve(curve: CurvePoly, lam: complex) -> CurvePoly:
    """eta -> eta/lam followed by renormalising the top term to 1, i.e.
    a_i -> lam^(2i) a_i; rescalings compose multiplicatively."""
    if lam == 0:
        raise ValueError("rescaling factor must be nonzero")
    lam = complex(lam)
    scaled = tuple(
        ai * (lam ** (2 * i)) for i, ai in enumerate(curve.a, start=1)
    )
    return CurvePoly(n=curve.n, a=scaled)


# -- sampler ------------------------------------------------------------------


def sample_norm_one_section(
    n: int, seed: int, max_retries: int = 64
) -> tuple[CurvePoly, SpectralSection]:
    """Seeded curve-and-section pair satisfying the product congruence.

    Branch curves w_j(zeta) = (zeta - m)^2 - n_j^2 share their non-constant
    part, so interpolation across branches stays polynomial; on each branch
    the unit ((zeta - m)/n_j, 1/n_j) of the Pell equation
    x^2 - w_j y^2 = 1 is raised to a random power in {0, 1, 2} and given a
    random sign.  The section x(zeta, w) + eta y(zeta, w) at w = eta^2 then
    satisfies s(eta) s(-eta) = 1 mod P exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        m = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        radii = rng.uniform(0.8, 1.5, size=n)
        angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
        n_j = radii * np.exp(1j * angles)
        squares = n_j**2
        if any(
            abs(squares[i] - squares[j]) < 0.1
            for i in range(n)
            for j in range(i + 1, n)
        ):
            continue
        powers = rng.integers(0, 3, size=n)
        signs = rng.choice([1.0, -1.0], size=n)
        return _assemble_pell_section(m, n_j, powers, signs)
    raise ValueError(f"branch separation failed after {max_retries} retries")


def _assemble_pell_section(m, n_j, powers, signs) -> tuple[CurvePoly, SpectralSection]:
    n = len(n_j)
    zeta_minus_m = Poly([-m, 1.0])
    branches = [zeta_minus_m * zeta_minus_m - Poly([nj**2]) for nj in n_j]

    # curve: product of (w - w_j) expanded in w
    curve_w: EtaPoly = (Poly.one(),)
    for wj in branches:
        curve_w = eta_mul(curve_w, (-wj, Poly.one()))
    a = tuple(curve_w[n - i] for i in range(1, n + 1))
    curve = CurvePoly(n=n, a=a)

    # branch values of the Pell unit (x + sqrt(w) y)^e, e in {0, 1, 2}
    xs, ys = [], []
    for nj, e, sgn in zip(n_j, powers, signs):
        if e == 0:
            x, y = Poly.one(), Poly.zero()
        elif e == 1:
            x, y = zeta_minus_m / nj, Poly([1.0 / nj])
        else:
            x = (2.0 * zeta_minus_m * zeta_minus_m - Poly([nj**2])) / nj**2
            y = 2.0 * zeta_minus_m / nj**2
        xs.append(sgn * x)
        ys.append(sgn * y)

    # Lagrange interpolation in w; node differences are constants, so the
    # result stays polynomial in zeta
    c_w = [Poly.zero()] * n
    d_w = [Poly.zero()] * n
    squares = [nj**2 for nj in n_j]
    for j in range(n):
        numerator: EtaPoly = (Poly.one(),)
        denom = 1.0 + 0.0j
        for i in range(n):
            if i == j:
                continue
            numerator = eta_mul(numerator, (-branches[i], Poly.one()))
            denom *= squares[i] - squares[j]  # w_j - w_i = n_i^2 - n_j^2 flipped
        for t, coeff in enumerate(numerator):
            c_w[t] = c_w[t] + coeff * xs[j] / denom
            d_w[t] = d_w[t] + coeff * ys[j] / denom

    coeffs = [Poly.zero()] * (2 * n)
    for t in range(n):
        coeffs[2 * t] = c_w[t]
        if 2 * t + 1 < 2 * n:
            coeffs[2 * t + 1] = d_w[t]
    return curve, SpectralSection(coeffs=_eta_trim(coeffs))
