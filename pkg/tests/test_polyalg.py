import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nkmoduli.polyalg import (
    NonCoprimeError,
    Poly,
    RootConvergenceError,
    ToleranceContext,
    compose_square,
    even_odd_assemble,
    even_odd_split,
    poly_divmod,
    poly_from_roots,
    poly_interpolate,
    poly_mod,
    poly_modinv,
    poly_resultant,
    poly_roots,
)

Z = Poly.x()

finite_complex = st.complex_numbers(
    max_magnitude=4.0, allow_nan=False, allow_infinity=False
)


def coeff_lists(max_len):
    return st.lists(finite_complex, min_size=0, max_size=max_len)


class TestPolyBasics:
    def test_trailing_trim(self):
        p = Poly([1.0, 2.0, 1e-15])
        assert p.degree == 1

    def test_zero_poly(self):
        assert Poly([0.0, 0.0]).is_zero
        assert Poly.zero().degree == -1

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Poly([1.0, float("nan")])

    def test_eval_horner(self):
        p = 1 + 2 * Z + 3 * Z**2
        assert p(2.0) == pytest.approx(17.0)
        np.testing.assert_allclose(p(np.array([0.0, 1.0])), [1.0, 6.0])

    def test_reflected(self):
        p = 1 + Z + Z**2 + Z**3
        assert p.reflected().distance(1 - Z + Z**2 - Z**3) == 0.0

    def test_tolerance_context_validation(self):
        with pytest.raises(ValueError):
            ToleranceContext(eq_tol=-1.0)
        with pytest.raises(ValueError):
            ToleranceContext(eq_tol=1e-13, trim_tol=1e-12)


class TestDivmod:
    def test_difference_of_squares(self):
        quot, rem = poly_divmod(Z**2 - 1, Z - 1)
        assert quot.distance(Z + 1) < 1e-14
        assert rem.is_zero

    def test_identity_case(self):
        quot, rem = poly_divmod(Z**3, Z**3)
        assert quot.distance(Poly.one()) < 1e-14
        assert rem.is_zero

    def test_generic_case_remultiplies(self):
        a = Z**3 + 2 * Z + 1
        b = Z**2 + 1
        quot, rem = poly_divmod(a, b)
        assert quot.distance(Z) < 1e-14
        assert rem.distance(Z + 1) < 1e-14
        assert (b * quot + rem).distance(a) < 1e-13

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            poly_divmod(Z, Poly.zero())

    @settings(max_examples=150, deadline=None)
    @given(coeff_lists(13), st.lists(finite_complex, min_size=0, max_size=8))
    def test_roundtrip_property(self, ac, bc):
        # monic divisors keep the quotient growth bounded, which is what the
        # stated residual bound assumes
        a, b = Poly(ac), Poly(list(bc) + [1.0])
        quot, rem = poly_divmod(a, b)
        assert rem.degree < b.degree or rem.is_zero
        assert (b * quot + rem).distance(a) < 1e-9 * (1.0 + a.norm())


class TestModinv:
    def test_inverse_of_one(self):
        h = poly_modinv(Poly.one(), Z**2 - 1)
        assert h.distance(Poly.one()) < 1e-12

    def test_inverse_of_z_mod_z2_minus_2(self):
        h = poly_modinv(Z, Z**2 - 2)
        assert h.distance(0.5 * Z) < 1e-12
        assert poly_mod(Z * h, Z**2 - 2).distance(Poly.one()) < 1e-12

    def test_non_coprime_rejected(self):
        with pytest.raises(NonCoprimeError):
            poly_modinv(Z, Z**2)

    @settings(max_examples=100, deadline=None)
    @given(coeff_lists(6), st.lists(finite_complex, min_size=1, max_size=6))
    def test_congruence_property(self, pc, qc):
        # monic moduli with bounded coefficients: the regime every caller
        # works in; scale-free moduli can make the bound unreachable in
        # double precision regardless of algorithm
        p, q = Poly(pc), Poly(list(qc) + [1.0])
        if p.is_zero:
            return
        if abs(poly_resultant(q, p)) <= 1e-6:
            return
        h = poly_modinv(p, q)
        res = poly_mod(p * h, q) - Poly.one()
        assert res.norm() < 1e-9 * (1.0 + p.norm() * h.norm())


class TestResultant:
    def test_constant_p(self):
        assert poly_resultant(Z**2 - 1, Poly.one()) == pytest.approx(1.0)

    def test_product_over_roots(self):
        assert poly_resultant(Z**2 - 1, Z) == pytest.approx(-1.0)

    def test_repeated_roots(self):
        assert poly_resultant(Z**2, Z + 1) == pytest.approx(1.0)

    def test_requires_monic(self):
        with pytest.raises(ValueError):
            poly_resultant(2 * Z, Z)

    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(finite_complex, min_size=1, max_size=6),
        coeff_lists(5),
    )
    def test_matches_root_product(self, roots, pc):
        # keep roots pairwise separated so the comparison is well conditioned
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if abs(roots[i] - roots[j]) < 0.3:
                    return
        p = Poly(pc)
        if p.is_zero:
            return
        q = poly_from_roots(roots)
        expected = np.prod([p(r) for r in roots])
        got = poly_resultant(q, p)
        scale = max(1.0, abs(expected))
        assert abs(got - expected) < 1e-7 * scale


class TestRoots:
    def test_unit_roots(self):
        roots = sorted(poly_roots(Z**2 - 1), key=lambda z: z.real)
        np.testing.assert_allclose(roots, [-1.0, 1.0], atol=1e-10)

    def test_imaginary_pair(self):
        roots = sorted(poly_roots(Z**2 + 1), key=lambda z: z.imag)
        np.testing.assert_allclose(roots, [-1j, 1j], atol=1e-10)

    def test_cubic(self):
        roots = sorted(poly_roots(Z**3 - Z), key=lambda z: z.real)
        np.testing.assert_allclose(roots, [-1.0, 0.0, 1.0], atol=1e-10)

    def test_deterministic_for_seed(self):
        q = Z**5 + 2 * Z**2 - 1j * Z + 3
        r1 = poly_roots(q, seed=7)
        r2 = poly_roots(q, seed=7)
        np.testing.assert_array_equal(r1, r2)

    def test_reconstruction_bound_degree_20(self):
        rng = np.random.default_rng(11)
        roots = rng.normal(size=20) + 1j * rng.normal(size=20)
        q = poly_from_roots(roots)
        got = poly_roots(q, seed=3)
        assert poly_from_roots(got).distance(q) < 1e-8 * q.norm()

    def test_nonconvergence_reports_residual(self):
        with pytest.raises(RootConvergenceError, match="residual"):
            poly_roots(Z**5 + 2 * Z - 7, max_iter=0)


class TestEvenOdd:
    def test_basic_shuffle(self):
        x, y = even_odd_split(1 + Z + Z**2)
        assert x.distance(1 + Z) == 0.0
        assert y.distance(Poly.one()) == 0.0

    def test_pure_cube(self):
        x, y = even_odd_split(Z**3)
        assert x.is_zero
        assert y.distance(Z) == 0.0

    def test_constant(self):
        x, y = even_odd_split(Poly([3.0]))
        assert x.distance(Poly([3.0])) == 0.0
        assert y.is_zero

    def test_compose_square(self):
        assert compose_square(1 + Z).distance(1 + Z**2) == 0.0

    @settings(max_examples=200, deadline=None)
    @given(coeff_lists(12))
    def test_split_assemble_identity(self, coeffs):
        p = Poly(coeffs)
        x, y = even_odd_split(p)
        assert even_odd_assemble(x, y).distance(p) == 0.0


class TestInterpolate:
    def test_constant(self):
        p = poly_interpolate([(1.0, 1.0), (-1.0, 1.0)])
        assert p.distance(Poly.one()) < 1e-12

    def test_line(self):
        p = poly_interpolate([(0.0, 1.0), (1.0, 2.0)])
        assert p.distance(1 + Z) < 1e-12

    def test_reciprocal_pair(self):
        c = 2.0
        p = poly_interpolate([(1.0, c), (-1.0, 1.0 / c)])
        assert p.distance(Poly([1.25, 0.75])) < 1e-12
        assert abs(p(1.0) - 2.0) < 1e-12
        assert abs(p(-1.0) - 0.5) < 1e-12

    def test_coincident_nodes_rejected(self):
        with pytest.raises(ValueError):
            poly_interpolate([(1.0, 1.0), (1.0 + 1e-12, 2.0)])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=8), st.randoms(use_true_random=False))
    def test_reevaluation_property(self, m, rand):
        rng = np.random.default_rng(rand.randint(0, 2**32 - 1))
        nodes = rng.normal(size=m) + 1j * rng.normal(size=m)
        ok = all(
            abs(nodes[i] - nodes[j]) > 1e-2
            for i in range(m)
            for j in range(i + 1, m)
        )
        if not ok:
            return
        values = rng.normal(size=m) + 1j * rng.normal(size=m)
        p = poly_interpolate(list(zip(nodes, values)))
        assert p.degree < m
        for node, value in zip(nodes, values):
            assert abs(p(node) - value) < 1e-9 * (1.0 + abs(value))
