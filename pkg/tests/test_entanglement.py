import numpy as np
import pytest

from oamstore.entanglement import (CANONICAL_ALPHAS, CANONICAL_BETAS,
                                   GAMMA_STAR, S_GLOBAL_MAX, S_MES,
                                   bell_from_counts, canonical_settings,
                                   cglmp_value, fidelity_to_mes, fourier_basis,
                                   joint_probabilities, negativity,
                                   optimize_cglmp, settings_from_phases,
                                   simulate_bell_counts, uhlmann_fidelity)
from oamstore.linalg import kron, partial_transpose
from oamstore.source import SpdcSpec, mes, pair_ket, spdc_state

RHO_MES = np.outer(np.asarray(mes()), np.asarray(mes()))


def random_state(gen, n):
    A = gen.normal(size=(n, n)) + 1j * gen.normal(size=(n, n))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


def negativity_oracle(rho):
    # independent eigenvalue route
    ev = np.linalg.eigvalsh(partial_transpose(rho))
    return float(-ev[ev < 0].sum())


def test_negativity_frozen_points():
    assert negativity(RHO_MES) == pytest.approx(1.0, abs=1e-9)
    gen = np.random.default_rng(3)
    for _ in range(10):
        a = gen.normal(size=3) + 1j * gen.normal(size=3)
        b = gen.normal(size=3) + 1j * gen.normal(size=3)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        rho = kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
        assert negativity(rho) == pytest.approx(0.0, abs=1e-9)
    # isotropic mixture: closed form (4 w - 1)/3 for MES weight w
    w = 0.69625
    rho = w * RHO_MES + (1 - w) * np.eye(9) / 9
    assert negativity(rho) == pytest.approx((4 * w - 1) / 3, abs=1e-12)
    assert negativity(rho) == pytest.approx(0.595, abs=1e-12)


def test_negativity_matches_eigen_oracle():
    gen = np.random.default_rng(4)
    for _ in range(15):
        rho = random_state(gen, 9)
        assert negativity(rho) == pytest.approx(negativity_oracle(rho), abs=1e-10)


def test_negativity_convex_and_unitary_invariant():
    gen = np.random.default_rng(5)
    for _ in range(5):
        r1, r2 = random_state(gen, 9), random_state(gen, 9)
        lam = gen.uniform()
        assert (negativity(lam * r1 + (1 - lam) * r2)
                <= lam * negativity(r1) + (1 - lam) * negativity(r2) + 1e-10)
        U, _ = np.linalg.qr(gen.normal(size=(3, 3)) + 1j * gen.normal(size=(3, 3)))
        V, _ = np.linalg.qr(gen.normal(size=(3, 3)) + 1j * gen.normal(size=(3, 3)))
        W = kron(U, V)
        assert negativity(W @ r1 @ W.conj().T) == pytest.approx(
            negativity(r1), abs=1e-10)


def test_uhlmann_fidelity_properties():
    gen = np.random.default_rng(6)
    r1, r2 = random_state(gen, 9), random_state(gen, 9)
    assert uhlmann_fidelity(r1, r1) == pytest.approx(1.0, abs=1e-10)
    assert uhlmann_fidelity(r1, r2) == pytest.approx(
        uhlmann_fidelity(r2, r1), abs=1e-10)
    a = gen.normal(size=9) + 1j * gen.normal(size=9)
    b = gen.normal(size=9) + 1j * gen.normal(size=9)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    pa, pb = np.outer(a, a.conj()), np.outer(b, b.conj())
    # eigh noise on a rank-1 input enters through the sqrt at ~1e-8
    assert uhlmann_fidelity(pa, pb) == pytest.approx(abs(np.vdot(a, b)) ** 2,
                                                     abs=1e-8)
    assert 0.0 <= uhlmann_fidelity(r1, r2) <= 1.0


def test_fidelity_to_mes_calibration():
    # mixing weight that lands the pair-state fidelity at 0.730
    v = 0.30375
    rho = spdc_state(SpdcSpec((1.0, -1.0, 1.0), v))
    assert fidelity_to_mes(rho) == pytest.approx((1 - v) + v / 9, abs=1e-12)
    assert fidelity_to_mes(rho) == pytest.approx(0.730, abs=1e-12)
    assert fidelity_to_mes(RHO_MES) == pytest.approx(1.0, abs=1e-12)


def test_fourier_basis_unitary():
    for offset in (0.0, 0.5, 0.25, -0.25):
        for conj in (False, True):
            U = fourier_basis(offset, conjugate=conj)
            np.testing.assert_allclose(U.conj().T @ U, np.eye(3), atol=1e-12)


def q_closed(k, a, b):
    # per-term closed form for the canonical family on the MES; the full
    # same/shifted-outcome probability P(A = B + k) is d times this
    d = 3
    arg = np.pi * (k + CANONICAL_ALPHAS[a] + CANONICAL_BETAS[b]) / d
    return 1.0 / (2 * d**3 * np.sin(arg) ** 2)


def test_canonical_probabilities_match_closed_form():
    st = canonical_settings()
    A = {0: st.A1, 1: st.A2}
    B = {0: st.B1, 1: st.B2}
    for a in (0, 1):
        for b in (0, 1):
            P = joint_probabilities(RHO_MES, A[a], B[b])
            assert P.shape == (3, 3)
            assert abs(P.sum() - 1.0) < 1e-12
            for k in (-1, 0, 1):
                got = sum(P[j, (j - k) % 3] for j in range(3))
                assert got == pytest.approx(3 * q_closed(k, a, b), abs=1e-12)


def test_cglmp_canonical_frozen_value():
    pos = q_closed(0, 0, 0) + q_closed(-1, 1, 0) + q_closed(0, 1, 1) + q_closed(0, 0, 1)
    neg = q_closed(-1, 0, 0) + q_closed(0, 1, 0) + q_closed(-1, 1, 1) + q_closed(1, 0, 1)
    s_from_oracle = 3 * (pos - neg)
    assert S_MES == pytest.approx(s_from_oracle, abs=1e-12)
    assert S_MES == pytest.approx(2.8729340511723347, abs=1e-12)
    r = cglmp_value(RHO_MES, canonical_settings())
    assert r.S == pytest.approx(S_MES, abs=1e-12)


def test_cglmp_affine_in_the_state():
    st = canonical_settings()
    gen = np.random.default_rng(8)
    r1, r2 = random_state(gen, 9), random_state(gen, 9)
    lam = 0.37
    s_mix = cglmp_value(lam * r1 + (1 - lam) * r2, st).S
    assert s_mix == pytest.approx(
        lam * cglmp_value(r1, st).S + (1 - lam) * cglmp_value(r2, st).S,
        abs=1e-12)


def test_cglmp_isotropic_scaling():
    st = canonical_settings()
    w = 0.69625
    rho = w * RHO_MES + (1 - w) * np.eye(9) / 9
    assert cglmp_value(rho, st).S == pytest.approx(w * S_MES, abs=1e-12)
    assert cglmp_value(np.eye(9) / 9, st).S == pytest.approx(0.0, abs=1e-12)


def test_optimizer_reaches_mes_value():
    r = optimize_cglmp(RHO_MES, restarts=4, seed=0)
    assert r.S == pytest.approx(S_MES, abs=1e-6)
    assert r.S <= S_GLOBAL_MAX + 1e-9
    assert r.restarts == 4


def test_optimizer_reaches_global_max_on_gamma_state():
    psi = np.asarray(pair_ket((1.0, -GAMMA_STAR, 1.0)))
    rho = np.outer(psi, psi.conj())
    r = optimize_cglmp(rho, restarts=6, seed=1)
    assert r.S == pytest.approx(S_GLOBAL_MAX, abs=1e-6)
    assert S_GLOBAL_MAX == pytest.approx(1 + np.sqrt(11 / 3), abs=1e-12)
    assert GAMMA_STAR == pytest.approx((np.sqrt(11) - np.sqrt(3)) / 2, abs=1e-12)


def test_settings_from_phases_zero_is_canonical():
    st = settings_from_phases(np.zeros(12))
    can = canonical_settings()
    for U, V in zip(st.bases(), can.bases()):
        np.testing.assert_allclose(U, V, atol=1e-12)


def test_bell_from_counts_consistency():
    st = canonical_settings()
    rho = spdc_state(SpdcSpec((1.0, -1.0, 1.0), 0.30375))
    # huge synthetic statistics: estimate must sit on the exact value
    counts = np.empty((4, 3, 3))
    A = {0: st.A1, 1: st.A2}
    B = {0: st.B1, 1: st.B2}
    for idx, (a, b) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        counts[idx] = joint_probabilities(rho, A[a], B[b]) * 1e12
    counts = np.round(counts)
    est = bell_from_counts(counts, st)
    assert est.S == pytest.approx(cglmp_value(rho, st).S, abs=1e-5)
    assert est.stderr < 1e-5


def test_bell_stderr_tracks_monte_carlo_spread():
    st = canonical_settings()
    rho = spdc_state(SpdcSpec((1.0, -1.0, 1.0), 0.30375))
    T = 2e4
    vals, errs = [], []
    for s in range(40):
        counts = simulate_bell_counts(rho, st, T, 900 + s)
        est = bell_from_counts(counts, st)
        vals.append(est.S)
        errs.append(est.stderr)
    spread = np.std(vals)
    mean_err = np.mean(errs)
    assert 0.5 * spread < mean_err < 2.0 * spread
    assert np.mean(vals) == pytest.approx(cglmp_value(rho, st).S,
                                          abs=5 * spread / np.sqrt(40))


def test_simulated_bell_counts_deterministic_per_seed():
    st = canonical_settings()
    c1 = simulate_bell_counts(RHO_MES, st, 1e4, 5)
    c2 = simulate_bell_counts(RHO_MES, st, 1e4, 5)
    assert np.array_equal(c1, c2)
    c3 = simulate_bell_counts(RHO_MES, st, 1e4, 6)
    assert not np.array_equal(c1, c3)
