"""Transverse Hilbert scheme points on the D1 surface x^2 - z y^2 = 1 and the
D0 surface x^2 - z y^2 - y = 0, their exact coordinate bijections with
reflection-symmetric rational maps, the sign involution, the quotient map
D1 -> D0 and its fiber enumeration, and the induced covering on maps.

A point of the length-n transverse Hilbert scheme is a triple (x, y, r) of
polynomials with r monic of degree n, deg x, deg y <= n-1, and the surface
equation holding mod r.
"""
from __future__ import annotations

import dataclasses
import itertools

import numpy as np

from .moduli import BasedRationalMap, is_nk_member, sample_nk
from .polyalg import (
    DEFAULT_TOL,
    Poly,
    ToleranceContext,
    compose_square,
    even_odd_assemble,
    even_odd_split,
    poly_interpolate,
    poly_mod,
    poly_roots,
)

__all__ = [
    "D1Point",
    "D0Point",
    "DegenerateFiberError",
    "d1_to_map",
    "map_to_d1",
    "d0_to_map",
    "map_to_d0",
    "z2_act",
    "quotient_map",
    "fiber",
    "cover_map_on_maps",
    "CoverRecipeReport",
    "covering_recipe_report",
    "sample_d1_point",
    "sample_d0_point",
]


class DegenerateFiberError(ValueError):
    """Fiber enumeration requested over a degenerate base point (repeated or
    zero roots of r), where the covering count does not apply."""


def _congruence_residual(x: Poly, y: Poly, r: Poly, constant: Poly) -> float:
    """Scaled residual of x^2 - z y^2 - constant-term mod r."""
    expr = x * x - Poly.x() * y * y - constant
    rem = poly_mod(expr, r)
    scale = 1.0 + expr.norm()
    return rem.norm() / scale


@dataclasses.dataclass(frozen=True)
class D1Point:
    """Point of the transverse Hilbert scheme on x^2 - z y^2 = 1."""

    x: Poly
    y: Poly
    r: Poly
    n: int

    def congruence_residual(self) -> float:
        return _congruence_residual(self.x, self.y, self.r, Poly.one())

    def validate(self, tol: ToleranceContext = DEFAULT_TOL) -> None:
        _validate_triple(self, tol)
        if self.congruence_residual() > tol.eq_tol:
            raise ValueError("D1 surface congruence fails mod r")


@dataclasses.dataclass(frozen=True)
class D0Point:
    """Point of the transverse Hilbert scheme on x^2 - z y^2 - y = 0."""

    x: Poly
    y: Poly
    r: Poly
    n: int

    def congruence_residual(self) -> float:
        return _congruence_residual(self.x, self.y, self.r, self.y)

    def validate(self, tol: ToleranceContext = DEFAULT_TOL) -> None:
        _validate_triple(self, tol)
        if self.congruence_residual() > tol.eq_tol:
            raise ValueError("D0 surface congruence fails mod r")


def _validate_triple(d, tol: ToleranceContext) -> None:
    if d.n < 1:
        raise ValueError("length n must be >= 1")
    if d.r.degree != d.n or not d.r.is_monic(tol.eq_tol):
        raise ValueError(f"r must be monic of degree {d.n}")
    if d.x.degree > d.n - 1 or d.y.degree > d.n - 1:
        raise ValueError("deg x and deg y must be <= n-1")


# -- D1 <-> even maps --------------------------------------------------------


def d1_to_map(d: D1Point, tol: ToleranceContext = DEFAULT_TOL) -> BasedRationalMap:
    """p(u) = x(u^2) + u y(u^2), q(u) = r(u^2); charge 2n.

    The surface congruence transports to p(u) p(-u) = 1 mod q because
    p(u) p(-u) = x(z)^2 - z y(z)^2 at z = u^2.
    """
    d.validate(tol)
    p = even_odd_assemble(d.x, d.y)
    q = compose_square(d.r)
    return BasedRationalMap(p=p, q=q, k=2 * d.n)


def map_to_d1(m: BasedRationalMap, tol: ToleranceContext = DEFAULT_TOL) -> D1Point:
    """Inverse of :func:`d1_to_map`: even/odd parts of p and the even core of
    q.  Requires an even-charge member with even q."""
    if m.k % 2 != 0:
        raise ValueError("charge must be even for a D1 point")
    if not is_nk_member(m, tol.eq_tol):
        raise ValueError("map is not a reflection-symmetric member")
    r, q_odd = even_odd_split(m.q)
    if not q_odd.is_zero and q_odd.norm() > tol.eq_tol * (1.0 + m.q.norm()):
        raise ValueError("q is not even")
    x, y = even_odd_split(m.p)
    return D1Point(x=x, y=y, r=r, n=m.k // 2)


# -- D0 <-> odd maps ---------------------------------------------------------


def d0_to_map(d: D0Point, tol: ToleranceContext = DEFAULT_TOL) -> BasedRationalMap:
    """p(u) = 1 + 2u x(u^2) + 2u^2 y(u^2), q(u) = u r(u^2); charge 2n+1.

    Substituting p = 1 + u f(u) into the product condition forces the
    relation x^2 - z y^2 - 2y = 0 on the even/odd parts of f; the factor 2
    transports the stored surface x^2 - z y^2 - y = 0 onto that relation.
    """
    d.validate(tol)
    f = even_odd_assemble(2.0 * d.x, 2.0 * d.y)
    shifted = np.concatenate([[0.0], f.coeffs]) if not f.is_zero else [0.0]
    p = Poly.one() + Poly._raw(shifted)
    q = Poly.x() * compose_square(d.r)
    return BasedRationalMap(p=p, q=q, k=2 * d.n + 1)


def map_to_d0(m: BasedRationalMap, tol: ToleranceContext = DEFAULT_TOL) -> D0Point:
    """Inverse of :func:`d0_to_map` for odd-charge members: normalise p(0) to
    exactly 1, strip the constant, halve the even/odd parts."""
    if m.k % 2 != 1:
        raise ValueError("charge must be odd for a D0 point")
    if not is_nk_member(m, tol.eq_tol):
        raise ValueError("map is not a reflection-symmetric member")
    p0 = m.p.coeff(0)
    if abs(p0 - 1.0) > tol.eq_tol:
        raise ValueError(f"p(0) = {p0} is not 1 within tolerance")
    p = m.p / p0
    f = Poly._raw(p.coeffs[1:])  # (p - 1)/u, exact shift
    a, b = even_odd_split(f)
    r_shift = Poly._raw(m.q.coeffs[1:])  # q/u
    r, r_odd = even_odd_split(r_shift)
    if not r_odd.is_zero and r_odd.norm() > tol.eq_tol * (1.0 + m.q.norm()):
        raise ValueError("q/z is not even")
    return D0Point(x=0.5 * a, y=0.5 * b, r=r, n=m.k // 2)


# -- sign action, quotient, fiber -------------------------------------------


def z2_act(m: BasedRationalMap) -> BasedRationalMap:
    """The free sign involution (x, y) -> (-x, -y) on D1 coordinates, i.e.
    p -> -p on even-charge maps; an exact involution preserving membership."""
    if m.k % 2 != 0:
        raise ValueError("the sign action lives on even-charge maps")
    return BasedRationalMap(p=-m.p, q=m.q, k=m.k)


def quotient_map(d: D1Point, tol: ToleranceContext = DEFAULT_TOL) -> D0Point:
    """Sign-invariant coordinates (X, Y) = (x y mod r, y^2 mod r) landing on
    the D0 surface: X^2 - z Y^2 - Y = y^2 (x^2 - z y^2 - 1) = 0 mod r."""
    d.validate(tol)
    big_x = poly_mod(d.x * d.y, d.r)
    big_y = poly_mod(d.y * d.y, d.r)
    return D0Point(x=big_x, y=big_y, r=d.r, n=d.n)


def fiber(
    target: D0Point,
    tol: ToleranceContext = DEFAULT_TOL,
    root_seed: int = 0,
) -> list[D1Point]:
    """All preimages of a D0 point under :func:`quotient_map`.

    At each root c of r, a preimage satisfies y(c) = +-sqrt(Y(c)) with
    x(c) = X(c)/y(c), or x(c) = +-1, y(c) = 0 on the Y(c) = 0 branch; there
    are exactly 2^m preimages for m distinct roots.  Sign choices are
    enumerated lexicographically (+ before -) over roots sorted by real then
    imaginary part.  Repeated or zero roots are degenerate and rejected.
    """
    target.validate(tol)
    roots = sorted(
        poly_roots(target.r, seed=root_seed), key=lambda z: (z.real, z.imag)
    )
    m = len(roots)
    # repeated roots are only located to ~sqrt(machine eps), so the
    # degeneracy test needs a floor above that noise level
    sep_floor = max(tol.eq_tol, 1e-7)
    for i in range(m):
        if abs(roots[i]) <= sep_floor:
            raise DegenerateFiberError("r has a root at the origin")
        for j in range(i + 1, m):
            if abs(roots[i] - roots[j]) <= sep_floor:
                raise DegenerateFiberError("r has repeated roots")
    x_vals = np.array([target.x(c) for c in roots])
    y_vals = np.array([target.y(c) for c in roots])

    out: list[D1Point] = []
    for sign_choice in itertools.product((1.0, -1.0), repeat=m):
        xs, ys = [], []
        for s, c, xv, yv in zip(sign_choice, roots, x_vals, y_vals):
            if abs(yv) <= tol.eq_tol:
                xs.append(s)
                ys.append(0.0)
            else:
                y_c = s * np.sqrt(yv)
                xs.append(xv / y_c)
                ys.append(y_c)
        x = poly_interpolate(list(zip(roots, xs)), tol)
        y = poly_interpolate(list(zip(roots, ys)), tol)
        out.append(D1Point(x=x, y=y, r=target.r, n=target.n))
    return out


def cover_map_on_maps(
    m: BasedRationalMap, tol: ToleranceContext = DEFAULT_TOL
) -> BasedRationalMap:
    """Covering of moduli induced by the quotient: an even-charge member
    p/q goes to the odd-charge member with denominator z q(z), via
    D1 coordinates, the quotient and the D0 chart."""
    if m.k % 2 != 0 or m.k < 2:
        raise ValueError("covering starts from an even-charge member")
    return d0_to_map(quotient_map(map_to_d1(m, tol), tol), tol)


@dataclasses.dataclass(frozen=True)
class CoverRecipeReport:
    """Comparison of the surface-coordinate covering with the literal
    residue recipe pbar = p^2 mod z q."""

    surface: BasedRationalMap
    literal_p: Poly
    literal_q: Poly
    coefficient_gap: float
    literal_origin_value: complex
    literal_is_member: bool


def covering_recipe_report(
    m: BasedRationalMap, tol: ToleranceContext = DEFAULT_TOL
) -> CoverRecipeReport:
    """Run both covering recipes and report their discrepancy.

    The literal recipe squares the numerator mod z q(z); it reproduces the
    product condition at nonzero poles but evaluates to p(0)^2 at the origin,
    which generically breaks the unit-origin normalisation the surface route
    maintains.  Reported, not reconciled.
    """
    surface = cover_map_on_maps(m, tol)
    literal_q = Poly.x() * m.q
    literal_p = poly_mod(m.p * m.p, literal_q)
    literal = BasedRationalMap(p=literal_p, q=literal_q, k=m.k + 1)
    return CoverRecipeReport(
        surface=surface,
        literal_p=literal_p,
        literal_q=literal_q,
        coefficient_gap=surface.p.distance(literal_p),
        literal_origin_value=literal_p.coeff(0),
        literal_is_member=is_nk_member(literal, tol.eq_tol),
    )


# -- samplers ----------------------------------------------------------------


def sample_d1_point(n: int, seed: int) -> D1Point:
    """Seeded D1 point: the chart image of a sampled even-charge member."""
    return map_to_d1(sample_nk(2 * n, seed))


def sample_d0_point(n: int, seed: int) -> D0Point:
    """Seeded D0 point with distinct nonzero roots of r (a quotient image,
    so its fiber is guaranteed nonempty)."""
    return quotient_map(sample_d1_point(n, seed))
