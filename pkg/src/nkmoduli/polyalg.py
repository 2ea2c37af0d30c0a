"""Dense complex polynomial arithmetic: division, modular inverses, resultants,
simultaneous root finding, even/odd splitting and interpolation.

Coefficients are stored ascending by degree in a complex128 array.  Every
identity of the form "expression = 0" is decided numerically against a scaled
tolerance; see :class:`ToleranceContext`.
"""
from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ToleranceContext",
    "DEFAULT_TOL",
    "Poly",
    "NonCoprimeError",
    "RootConvergenceError",
    "poly_divmod",
    "poly_mod",
    "poly_modinv",
    "poly_resultant",
    "poly_roots",
    "poly_from_roots",
    "even_odd_split",
    "even_odd_assemble",
    "compose_square",
    "poly_interpolate",
]


class NonCoprimeError(ValueError):
    """Modular inverse requested for inputs sharing a common factor."""


class RootConvergenceError(RuntimeError):
    """Simultaneous root iteration failed to reach the requested accuracy."""


@dataclasses.dataclass(frozen=True)
class ToleranceContext:
    """Numerical thresholds for equality and degree-trimming decisions.

    ``eq_tol`` decides identities ("residual < eq_tol * (1 + scale)"),
    ``trim_tol`` decides which trailing coefficients are noise.
    """

    eq_tol: float = 1e-9
    trim_tol: float = 1e-12

    def __post_init__(self) -> None:
        if not (self.eq_tol > 0 and self.trim_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.eq_tol < self.trim_tol:
            raise ValueError("eq_tol must be >= trim_tol")


DEFAULT_TOL = ToleranceContext()


def _as_coeff_array(coeffs) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).ravel()
    if arr.size and not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("polynomial coefficients must be finite")
    return arr


class Poly:
    """Complex polynomial with dense ascending coefficients.

    Construction trims trailing coefficients of magnitude below
    ``trim_tol * max(1, |coeffs|_inf)``; the zero polynomial has an empty
    coefficient array and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(), trim_tol: float = DEFAULT_TOL.trim_tol):
        arr = _as_coeff_array(coeffs)
        if arr.size:
            threshold = trim_tol * max(1.0, float(np.max(np.abs(arr))))
            keep = arr.size
            while keep > 0 and abs(arr[keep - 1]) <= threshold:
                keep -= 1
            arr = arr[:keep]
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def _raw(cls, coeffs) -> "Poly":
        """Construct dropping only exactly-zero trailing coefficients."""
        arr = _as_coeff_array(coeffs)
        keep = arr.size
        while keep > 0 and arr[keep - 1] == 0:
            keep -= 1
        p = object.__new__(cls)
        arr = arr[:keep].copy()
        arr.setflags(write=False)
        object.__setattr__(p, "coeffs", arr)
        return p

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw(np.zeros(0))

    @classmethod
    def one(cls) -> "Poly":
        return cls._raw([1.0])

    @classmethod
    def x(cls) -> "Poly":
        return cls._raw([0.0, 1.0])

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def coeff(self, i: int) -> complex:
        """Coefficient of z**i (0 beyond the stored degree)."""
        if 0 <= i < self.coeffs.size:
            return complex(self.coeffs[i])
        return 0.0 + 0.0j

    def norm(self) -> float:
        """Max coefficient magnitude (0 for the zero polynomial)."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def is_monic(self, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        return (not self.is_zero) and abs(self.coeffs[-1] - 1.0) <= tol

    def distance(self, other: "Poly") -> float:
        """Max magnitude of the coefficient-wise difference."""
        n = max(self.coeffs.size, other.coeffs.size)
        if n == 0:
            return 0.0
        a = np.zeros(n, dtype=np.complex128)
        b = np.zeros(n, dtype=np.complex128)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return float(np.max(np.abs(a - b)))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other) -> "Poly":
        # Sums, differences and products preserve values exactly; tolerance
        # trimming happens only where cancellation noise is created
        # (construction, division, interpolation).
        other = _coerce(other)
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) + (-self)

    def __neg__(self) -> "Poly":
        return Poly._raw(-self.coeffs)

    def __mul__(self, other) -> "Poly":
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return Poly.zero()
        return Poly._raw(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Poly":
        return Poly._raw(self.coeffs / complex(scalar))

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        return poly_divmod(self, _coerce(other))

    def __mod__(self, other) -> "Poly":
        return poly_divmod(self, _coerce(other))[1]

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial powers are not defined")
        out, base = Poly.one(), self
        while n:
            if n & 1:
                out = out * base
            base, n = base * base, n >> 1
        return out

    def __call__(self, z):
        """Evaluate by Horner's rule; accepts scalars or ndarrays."""
        if np.isscalar(z) or isinstance(z, complex):
            acc = 0.0 + 0.0j
            for c in self.coeffs[::-1]:
                acc = acc * z + c
            return acc
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def derivative(self) -> "Poly":
        if self.coeffs.size <= 1:
            return Poly.zero()
        k = np.arange(1, self.coeffs.size)
        return Poly._raw(self.coeffs[1:] * k)

    def reflected(self) -> "Poly":
        """p(z) -> p(-z); an exact sign shuffle."""
        signs = np.where(np.arange(self.coeffs.size) % 2 == 0, 1.0, -1.0)
        return Poly._raw(self.coeffs * signs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        return f"Poly({[complex(c) for c in self.coeffs]!r})"


def _coerce(value) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly._raw([complex(value)])


# -- division and modular arithmetic --------------------------------------


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder with deg(remainder) < deg(b).

    Raises ZeroDivisionError for a zero divisor.
    """
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero or a.degree < b.degree:
        return Poly.zero(), a
    rem = np.array(a.coeffs, dtype=np.complex128)
    lead = b.coeffs[-1]
    db = b.degree
    quot = np.zeros(a.degree - db + 1, dtype=np.complex128)
    for i in range(a.degree - db, -1, -1):
        c = rem[i + db] / lead
        quot[i] = c
        if c != 0:
            rem[i : i + db] -= c * b.coeffs[:-1]
        rem[i + db] = 0.0
    return Poly(quot), Poly(rem[:db])


def poly_mod(a: Poly, b: Poly) -> Poly:
    return poly_divmod(a, b)[1]


def _inverse_residual(p: Poly, q: Poly, h: Poly) -> float:
    check = poly_mod(p * h, q) - Poly.one()
    return check.norm() / (1.0 + p.norm() * h.norm())


def _modinv_euclid(p: Poly, q: Poly) -> "Poly | None":
    # Remainders are rescaled to monic each step to keep the Bezout
    # coefficients well conditioned; the invariant p*s = r (mod q) survives
    # simultaneous scaling of r and s.
    old_r, r = p, q
    old_s, s = Poly.one(), Poly.zero()
    while not r.is_zero:
        quo, rem = poly_divmod(old_r, r)
        new_s = old_s - quo * s
        if not rem.is_zero:
            scale = rem.coeffs[-1]
            rem = rem / scale
            new_s = new_s / scale
        old_r, r = r, rem
        old_s, s = s, new_s
    if old_r.degree >= 1:
        return None
    return poly_mod(old_s / old_r.coeffs[0], q)


def _modinv_linear(p: Poly, q: Poly) -> Poly:
    # Solve M h = e_0 where the columns of M are p * z^j mod q; stable even
    # when a tiny leading coefficient of p derails the Euclidean chain.
    k = q.degree
    monic = q.coeffs / q.coeffs[-1]
    cols = np.zeros((k, k), dtype=np.complex128)
    col = poly_mod(p, Poly._raw(monic))
    buf = np.zeros(k, dtype=np.complex128)
    buf[: col.coeffs.size] = col.coeffs
    for j in range(k):
        cols[:, j] = buf
        top = buf[k - 1]
        buf = np.concatenate([[0.0], buf[: k - 1]])
        if top != 0:
            buf -= top * monic[:k]
    rhs = np.zeros(k, dtype=np.complex128)
    rhs[0] = 1.0
    try:
        h = np.linalg.solve(cols, rhs)
    except np.linalg.LinAlgError as exc:
        raise NonCoprimeError("inputs are numerically non-coprime") from exc
    return Poly(h)


def _newton_polish(p: Poly, q: Poly, h: Poly, target: float, iters: int = 3) -> Poly:
    # h <- h (2 - p h) mod q squares the relative inversion error per pass
    best, best_res = h, _inverse_residual(p, q, h)
    for _ in range(iters):
        if best_res <= target:
            break
        h = poly_mod(h * (Poly([2.0]) - poly_mod(p * h, q)), q)
        res = _inverse_residual(p, q, h)
        if res < best_res:
            best, best_res = h, res
    return best


def poly_modinv(p: Poly, q: Poly, tol: ToleranceContext = DEFAULT_TOL) -> Poly:
    """Inverse of p modulo q: extended Euclidean algorithm with Newton
    polishing, falling back to a multiplication-matrix solve when float
    cancellation derails the remainder chain on coprime inputs.

    Returns h with deg h < deg q and p*h = 1 mod q.  Raises
    :class:`NonCoprimeError` when the inputs share a factor (gcd of degree
    >= 1 within tolerance) or the congruence cannot be met numerically.
    """
    if q.is_zero or q.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    if p.is_zero:
        raise NonCoprimeError("zero has no inverse modulo q")
    h = _modinv_euclid(p, q)
    if h is not None:
        h = _newton_polish(p, q, h, tol.eq_tol)
        if _inverse_residual(p, q, h) <= tol.eq_tol:
            return h
    # the determinantal coprimality test is well conditioned where Euclid
    # is not; consult it before declaring a common factor
    monic = Poly._raw(q.coeffs / q.coeffs[-1])
    if abs(poly_resultant(monic, p, tol)) <= tol.eq_tol:
        raise NonCoprimeError("inputs share a common factor within tolerance")
    h = _newton_polish(p, q, _modinv_linear(p, q), tol.eq_tol)
    residual = _inverse_residual(p, q, h)
    if residual > tol.eq_tol:
        raise NonCoprimeError(
            f"inputs are numerically non-coprime (inverse residual {residual:.3e})"
        )
    return h


def poly_resultant(q: Poly, p: Poly, tol: ToleranceContext = DEFAULT_TOL) -> complex:
    """Resultant of monic q against p: the product of p over the roots of q
    counted with multiplicity, computed as a Sylvester determinant.
    """
    if q.is_zero:
        raise ValueError("q must be nonzero")
    if not q.is_monic(tol.eq_tol):
        raise ValueError("q must be monic")
    m = q.degree
    if m == 0:
        return 1.0 + 0.0j
    if p.is_zero:
        return 0.0 + 0.0j
    n = p.degree
    if n == 0:
        return complex(p.coeffs[0]) ** m
    size = m + n
    syl = np.zeros((size, size), dtype=np.complex128)
    q_desc = q.coeffs[::-1]
    p_desc = p.coeffs[::-1]
    for i in range(n):
        syl[i, i : i + m + 1] = q_desc
    for i in range(m):
        syl[n + i, i : i + n + 1] = p_desc
    return complex(np.linalg.det(syl))


# -- roots -----------------------------------------------------------------


def poly_from_roots(roots: Iterable[complex], lead: complex = 1.0) -> Poly:
    """Monic-times-`lead` polynomial with the given roots."""
    coeffs = np.array([complex(lead)], dtype=np.complex128)
    for r in roots:
        coeffs = np.convolve(coeffs, np.array([-complex(r), 1.0]))
    return Poly._raw(coeffs)


def poly_roots(
    q: Poly,
    seed: int = 0,
    step_tol: float = 1e-12,
    max_iter: int = 500,
) -> np.ndarray:
    """All complex roots of q by simultaneous Aberth-Ehrlich iteration.

    Starting points sit on a circle inside the Cauchy root bound with
    pseudo-random phases drawn from ``seed``, so the result is deterministic
    for a fixed seed.  Raises :class:`RootConvergenceError` when the final
    iterate fails to reconstruct q to ``1e-8 * |q|``.
    """
    if q.degree < 1:
        raise ValueError("need degree >= 1 to extract roots")
    monic = q.coeffs / q.coeffs[-1]
    k = monic.size - 1
    if k == 1:
        return np.array([-monic[0]])

    rng = np.random.default_rng(seed)
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    phases = 2.0 * np.pi * (np.arange(k) + rng.uniform(0.05, 0.95, size=k)) / k
    z = 0.7 * radius * np.exp(1j * phases) - monic[-2] / k

    deriv = monic[1:] * np.arange(1, k + 1)

    def horner(coeffs, pts):
        acc = np.zeros_like(pts)
        for c in coeffs[::-1]:
            acc = acc * pts + c
        return acc

    converged = False
    for _ in range(max_iter):
        vals = horner(monic, z)
        dvals = horner(deriv, z)
        # Newton ratio, guarded against vanishing derivative between roots.
        tiny = dvals == 0
        if np.any(tiny):
            dvals = np.where(tiny, 1e-300, dvals)
        w = vals / dvals
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulsion = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * repulsion
        denom = np.where(denom == 0, 1.0, denom)
        delta = w / denom
        z = z - delta
        if np.max(np.abs(delta)) <= step_tol * (1.0 + np.max(np.abs(z))):
            converged = True
            break

    recon = poly_from_roots(z)
    err = recon.distance(Poly._raw(monic))
    if err > 1e-8 * max(1.0, float(np.max(np.abs(monic)))):
        raise RootConvergenceError(
            f"root iteration stalled (converged={converged}, "
            f"reconstruction residual {err:.3e})"
        )
    return z


# -- structure maps --------------------------------------------------------


def even_odd_split(p: Poly) -> tuple[Poly, Poly]:
    """Exact split p(u) = x(u**2) + u * y(u**2); returns (x, y)."""
    return Poly._raw(p.coeffs[0::2]), Poly._raw(p.coeffs[1::2])


def even_odd_assemble(x: Poly, y: Poly) -> Poly:
    """Exact inverse of :func:`even_odd_split`."""
    n = max(2 * x.coeffs.size - 1, 2 * y.coeffs.size, 0)
    out = np.zeros(n, dtype=np.complex128)
    out[0 : 2 * x.coeffs.size : 2] = x.coeffs
    out[1 : 2 * y.coeffs.size : 2] = y.coeffs
    return Poly._raw(out)


def compose_square(p: Poly) -> Poly:
    """p(z) -> p(z**2); an exact zero-interleave."""
    return even_odd_assemble(p, Poly.zero())


def poly_interpolate(
    points: Sequence[tuple[complex, complex]],
    tol: ToleranceContext = DEFAULT_TOL,
) -> Poly:
    """Unique polynomial of degree < len(points) through the given
    (node, value) pairs, by Newton divided differences.

    Raises ValueError when two nodes coincide within ``eq_tol``.
    """
    if not points:
        raise ValueError("need at least one interpolation point")
    nodes = np.array([complex(n) for n, _ in points])
    values = np.array([complex(v) for _, v in points])
    m = nodes.size
    for i in range(m):
        for j in range(i + 1, m):
            if abs(nodes[i] - nodes[j]) <= tol.eq_tol:
                raise ValueError(f"coincident interpolation nodes at index {i},{j}")
    # Divided-difference table, then expansion of the Newton form.
    dd = values.copy()
    for level in range(1, m):
        dd[level:] = (dd[level:] - dd[level - 1 : -1]) / (
            nodes[level:] - nodes[: m - level]
        )
    result = Poly.zero()
    basis = Poly.one()
    for i in range(m):
        result = result + basis * complex(dd[i])
        basis = basis * Poly._raw([-nodes[i], 1.0])
    return Poly(result.coeffs)
