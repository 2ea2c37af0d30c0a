"""Acceptance suite: one test per release criterion, each printing a
[acceptance] PASS/FAIL line with its measured numbers.  Run with `pytest -s
tests/test_acceptance.py` to see the lines."""
import itertools
import time

import numpy as np

from nkmoduli.hilb import (
    cover_map_on_maps,
    d0_to_map,
    d1_to_map,
    fiber,
    map_to_d0,
    map_to_d1,
    quotient_map,
    sample_d0_point,
    z2_act,
)
from nkmoduli.liealg import (
    commutator,
    principal_residues,
    random_sigma_fixed,
    random_su,
    sigma,
    transvectant,
)
from nkmoduli.moduli import (
    member_from_parameters,
    nk_membership_report,
    nk_parameter_count,
    sample_nk,
    strongly_centred_report,
)
from nkmoduli.nahm import (
    NahmState,
    extend_by_involution,
    integrate,
    pole_model_state,
    trajectory_defect,
)
from nkmoduli.polyalg import Poly
from nkmoduli.spectral import (
    build_sbar,
    eta_mul,
    eta_reduce,
    rescale_curve,
    sample_norm_one_section,
)


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def maxabs(a) -> float:
    return float(np.max(np.abs(a)))


def test_fiber_count_reproduction():
    """50 random D0 targets, n in 1..4: fiber size 2^n exactly, preimages map
    back within 1e-8, in under 10 s."""
    start = time.perf_counter()
    worst = 0.0
    count_ok = True
    sizes = itertools.cycle((1, 2, 3, 4))
    for seed in range(50):
        n = next(sizes)
        target = sample_d0_point(n, seed=seed)
        preimages = fiber(target)
        count_ok = count_ok and len(preimages) == 2**n
        for pre in preimages:
            image = quotient_map(pre)
            gap = max(
                image.x.distance(target.x),
                image.y.distance(target.y),
                image.r.distance(target.r),
            )
            worst = max(worst, gap)
    elapsed = time.perf_counter() - start
    report(
        "fiber-count",
        count_ok and worst < 1e-8 and elapsed < 10.0,
        f"max roundtrip gap {worst:.2e}, {elapsed:.1f}s",
    )


def test_dimension_accounting():
    """Sampling consumes exactly 4*floor(k/2) reals and 200 samples across
    k = 2..9 pass membership, in under 10 s."""
    start = time.perf_counter()
    params_ok = all(nk_parameter_count(k) == 4 * (k // 2) for k in range(2, 10))
    # the parameter map accepts exactly that many reals and no other count
    for k in (2, 5, 8):
        theta = np.linspace(0.1, 0.9, nk_parameter_count(k))
        member_from_parameters(k, theta)
        try:
            member_from_parameters(k, theta[:-1])
            params_ok = False
        except ValueError:
            pass
    member_ok = True
    for i in range(200):
        k = 2 + i % 8
        m = sample_nk(k, seed=i)
        member_ok = member_ok and nk_membership_report(m, 1e-8).member
    elapsed = time.perf_counter() - start
    report(
        "dimension-accounting",
        params_ok and member_ok and elapsed < 10.0,
        f"params 4*floor(k/2), 200 members, {elapsed:.1f}s",
    )


def test_containment_in_strongly_centred():
    """All 200 samples: pole sum below 1e-9 and total phase within 1e-8."""
    worst_sum = worst_phase = 0.0
    for i in range(200):
        k = 2 + i % 8
        m = sample_nk(k, seed=1000 + i)
        checks = {c.name: c.residual for c in strongly_centred_report(m).checks}
        worst_sum = max(worst_sum, checks["pole_sum_zero"])
        worst_phase = max(worst_phase, checks["total_phase_one"])
    report(
        "containment-mk0",
        worst_sum < 1e-9 and worst_phase < 1e-8,
        f"max pole sum {worst_sum:.2e}, max phase gap {worst_phase:.2e}",
    )


def test_hilbert_scheme_bijection_roundtrips():
    """Chart roundtrips on both surfaces: identity to 1e-10, 200 samples
    each, n <= 5."""
    worst_d1 = worst_d0 = 0.0
    for i in range(200):
        n = 1 + i % 5
        m_even = sample_nk(2 * n, seed=2000 + i)
        d = map_to_d1(m_even)
        back = d1_to_map(d)
        worst_d1 = max(worst_d1, back.p.distance(m_even.p), back.q.distance(m_even.q))
        d2 = map_to_d1(back)
        worst_d1 = max(
            worst_d1, d2.x.distance(d.x), d2.y.distance(d.y), d2.r.distance(d.r)
        )

        m_odd = sample_nk(2 * n + 1, seed=3000 + i)
        d0 = map_to_d0(m_odd)
        back0 = d0_to_map(d0)
        worst_d0 = max(worst_d0, back0.p.distance(m_odd.p), back0.q.distance(m_odd.q))
        d0b = map_to_d0(back0)
        worst_d0 = max(
            worst_d0,
            d0b.x.distance(d0.x),
            d0b.y.distance(d0.y),
            d0b.r.distance(d0.r),
        )
    report(
        "hilbert-bijections",
        worst_d1 < 1e-10 and worst_d0 < 1e-10,
        f"max D1 gap {worst_d1:.2e}, max D0 gap {worst_d0:.2e}",
    )


def test_transvectant_and_sigma():
    """Transvectant parity exact (100 pairs per k <= 10); sigma is an exact
    involution and a bracket automorphism to 1e-10; principal residues are
    sigma-fixed to 1e-12 for k <= 8."""
    parity_ok = True
    rng = np.random.default_rng(0)
    for k in range(2, 11):
        for _ in range(100):
            f = rng.normal(size=k) + 1j * rng.normal(size=k)
            g = rng.normal(size=k) + 1j * rng.normal(size=k)
            parity_ok = parity_ok and transvectant(f, g) == (-1) ** (
                k - 1
            ) * transvectant(g, f)
    invol = bracket = fixed = 0.0
    for k in range(2, 9):
        for _ in range(10):
            a, b = random_su(k, rng), random_su(k, rng)
            invol = max(invol, maxabs(sigma(sigma(a)) - a))
            bracket = max(
                bracket, maxabs(sigma(commutator(a, b)) - commutator(sigma(a), sigma(b)))
            )
        triple = principal_residues(k)
        for r in (triple.r1, triple.r2, triple.r3):
            fixed = max(fixed, maxabs(r - sigma(r)))
    report(
        "transvectant-sigma",
        parity_ok and invol < 1e-12 and bracket < 1e-10 and fixed < 1e-12,
        f"parity exact, sigma^2 {invol:.2e}, bracket {bracket:.2e}, residues {fixed:.2e}",
    )


def test_residue_normalization():
    """(R1/2, R2, R3) satisfies the cyclic commutator relations to 1e-12 for
    k <= 8."""
    worst = 0.0
    for k in range(2, 9):
        a1, a2, a3 = principal_residues(k).commutator_normalized()
        worst = max(
            worst,
            maxabs(commutator(a1, a2) - a3),
            maxabs(commutator(a2, a3) - a1),
            maxabs(commutator(a3, a1) - a2),
        )
    report("residue-normalization", worst < 1e-12, f"max relation gap {worst:.2e}")


def test_nahm_flow_suite():
    """Pole solution to 1e-6 over [0.1, 1.0]; isospectral drift < 1e-7;
    sigma residual growth < 1e-8 for sigma-fixed starts; mirrored residual
    bound for involution extensions; all under 60 s for k <= 5."""
    start = time.perf_counter()
    pole_gap = 0.0
    for k in range(2, 6):
        run = integrate(pole_model_state(k, 0.1), 1.0)
        pole_gap = max(pole_gap, maxabs(run.final.T - pole_model_state(k, 1.0).T))

    rng = np.random.default_rng(1)
    beta_drift = 0.0
    for k in range(2, 6):
        T = np.stack(
            [np.zeros((k, k), dtype=complex)]
            + [random_su(k, rng, 0.1) for _ in range(3)]
        )
        run = integrate(NahmState(t=0.2, T=T), 1.8)
        beta_drift = max(beta_drift, run.beta_spectrum_drift)

    sigma_growth = 0.0
    for k in (2, 3, 4):
        base = pole_model_state(k, 0.1)
        bump = np.stack(
            [np.zeros((k, k), dtype=complex)]
            + [random_sigma_fixed(k, rng, 1e-5) for _ in range(3)]
        )
        run = integrate(NahmState(t=0.1, T=base.T + bump), 1.9)
        residuals = [r for _, r in run.sigma_residual_history]
        sigma_growth = max(sigma_growth, max(residuals) - residuals[0])

    mirror_ok = True
    mirror_gap = 0.0
    for k in (3, 5):
        raw = [random_su(k, rng, 0.3) for _ in range(3)]
        anti = [0.5 * (m - sigma(m)) for m in raw]
        terminal = NahmState.from_matrices(1.0, np.zeros((k, k)), *anti)
        back = integrate(terminal, 0.4)
        forward = sorted(back.checkpoints, key=lambda s: s.t)
        extended = extend_by_involution(forward, sigma, tol=1e-6)
        fwd = trajectory_defect(forward)
        mir = trajectory_defect(extended[len(forward) - 1 :])
        bound = max(float(np.max(fwd)), 1e-12)
        gap = float(np.max(mir))
        mirror_gap = max(mirror_gap, gap / bound)
        mirror_ok = mirror_ok and gap <= bound * (1.0 + 1e-6) + 1e-12

    elapsed = time.perf_counter() - start
    report(
        "nahm-flow",
        pole_gap < 1e-6
        and beta_drift < 1e-7
        and sigma_growth < 1e-8
        and mirror_ok
        and elapsed < 60.0,
        f"pole {pole_gap:.2e}, beta {beta_drift:.2e}, sigma growth "
        f"{sigma_growth:.2e}, mirror ratio {mirror_gap:.3f}, {elapsed:.1f}s",
    )


def test_spectral_sbar_and_rescale():
    """sbar double congruence below 1e-9 on 50 random passing sections with
    n <= 3; rescaling composes exactly for dyadic factors and to 1e-12
    otherwise."""
    worst = 0.0
    sizes = itertools.cycle((1, 2, 3))
    for seed in range(50):
        n = next(sizes)
        curve, section = sample_norm_one_section(n, seed=seed)
        sbar = build_sbar(section, curve)
        # independent residual recomputation
        squared = eta_mul(section.coeffs, section.coeffs)
        diff = list(sbar) + [Poly.zero()] * max(0, len(squared) - len(sbar))
        for i, c in enumerate(squared):
            diff[i] = diff[i] - c
        mod_p = eta_reduce(diff, curve)
        res_p = max((c.norm() for c in mod_p), default=0.0)
        res_origin = (sbar[0] - Poly.one()).norm() if sbar else 1.0
        worst = max(worst, res_p, res_origin)

    curve, _ = sample_norm_one_section(3, seed=99)
    dyadic = rescale_curve(rescale_curve(curve, 2.0), 0.5)
    exact_ok = all(a.distance(b) == 0.0 for a, b in zip(dyadic.a, curve.a))
    lam, mu = 1.3 - 0.7j, 0.4 + 0.9j
    generic_gap = max(
        a.distance(b)
        for a, b in zip(
            rescale_curve(rescale_curve(curve, lam), mu).a,
            rescale_curve(curve, lam * mu).a,
        )
    )
    report(
        "spectral-sbar-rescale",
        worst < 1e-9 and exact_ok and generic_gap < 1e-12,
        f"max sbar residual {worst:.2e}, dyadic exact, generic gap {generic_gap:.2e}",
    )


def test_z2_quotient_coherence():
    """quotient o z2 = quotient exactly; the covering map is constant on
    sign orbits; covered maps pass odd-charge membership."""
    quotient_exact = True
    orbit_exact = True
    member_ok = True
    for seed in range(20):
        n = 1 + seed % 4
        m = sample_nk(2 * n, seed=4000 + seed)
        d = map_to_d1(m)
        d_flip = map_to_d1(z2_act(m))
        qa, qb = quotient_map(d), quotient_map(d_flip)
        quotient_exact = (
            quotient_exact
            and qa.x.distance(qb.x) == 0.0
            and qa.y.distance(qb.y) == 0.0
        )
        ca = cover_map_on_maps(m)
        cb = cover_map_on_maps(z2_act(m))
        orbit_exact = (
            orbit_exact and ca.p.distance(cb.p) == 0.0 and ca.q.distance(cb.q) == 0.0
        )
        member_ok = member_ok and nk_membership_report(ca, 1e-8).member
    report(
        "z2-quotient-coherence",
        quotient_exact and orbit_exact and member_ok,
        "quotient and covering exact on orbits, covers are odd members",
    )
