import numpy as np
import pytest
from scipy.integrate import quad

from oamstore.linalg import kron
from oamstore.source import (BASIS_LS, LgProfile, OamKet, SpdcSpec, basis_ket,
                             lg_intensity, mes, pair_ket, qutrit_ket,
                             spdc_state, superposition_state, tomography_kets)
from oamstore.validation import ContractError


def test_basis_order():
    assert BASIS_LS == (-1, 0, 1)
    np.testing.assert_allclose(np.asarray(basis_ket(-1)), [1, 0, 0])
    np.testing.assert_allclose(np.asarray(basis_ket(0)), [0, 1, 0])
    np.testing.assert_allclose(np.asarray(basis_ket(1)), [0, 0, 1])


def test_mes_amplitudes():
    psi = np.asarray(mes())
    want = np.zeros(9)
    want[[2, 4, 6]] = np.array([1.0, -1.0, 1.0]) / np.sqrt(3)
    np.testing.assert_allclose(psi, want, atol=1e-15)


def test_pair_ket_anticorrelated_slots():
    # photon pair carries opposite OAM: amplitude c_l sits at |l, -l>
    psi = np.asarray(pair_ket((2.0, 3.0, 6.0)))
    mags = np.abs(psi)
    assert np.count_nonzero(mags) == 3
    np.testing.assert_allclose(mags[[2, 4, 6]], np.array([2, 3, 6]) / 7.0)


def test_ket_normalization_enforced():
    with pytest.raises(ContractError):
        OamKet(np.array([1.0, 1.0, 0.0]), (-1, 0, 1))
    k = qutrit_ket([1.0, 1.0, 0.0])  # normalizes for you
    assert abs(np.linalg.norm(np.asarray(k)) - 1.0) < 1e-12


def test_tomography_kets_shape_and_norms():
    kets = tomography_kets()
    assert len(kets) == 9
    for k in kets:
        v = np.asarray(k)
        assert v.shape == (3,)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
    # first three are the OAM basis itself
    for i in range(3):
        np.testing.assert_allclose(np.abs(np.asarray(kets[i])), np.eye(3)[i])


def test_tomography_set_informationally_complete():
    kets = tomography_kets()
    # single-photon set spans all 3x3 Hermitian matrices
    P = np.stack([k.projector().ravel() for k in kets])
    assert np.linalg.matrix_rank(P) == 9
    # pair set spans all 9x9 Hermitian matrices
    PP = np.stack([kron(ki.projector(), kj.projector()).ravel()
                   for ki in kets for kj in kets])
    assert np.linalg.matrix_rank(PP) == 81


def test_spdc_state_limits():
    spec = SpdcSpec((1.0, -1.0, 1.0), 0.0)
    rho = spdc_state(spec)
    psi = np.asarray(mes())
    np.testing.assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-14)
    rho_mix = spdc_state(SpdcSpec((1.0, -1.0, 1.0), 1.0))
    np.testing.assert_allclose(rho_mix, np.eye(9) / 9, atol=1e-14)


def test_spdc_state_always_physical():
    gen = np.random.default_rng(21)
    for _ in range(25):
        c = gen.normal(size=3) + 1j * gen.normal(size=3)
        spec = SpdcSpec(tuple(c), float(gen.uniform(0, 1)),
                        float(gen.uniform(0, 2)))
        rho = spdc_state(spec)
        assert abs(np.trace(rho).real - 1.0) < 1e-10
        assert np.linalg.eigvalsh(rho).min() >= -1e-10
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)


def test_spdc_dephasing_damps_pair_coherence():
    base = spdc_state(SpdcSpec((1.0, -1.0, 1.0), 0.0))
    rho = spdc_state(SpdcSpec((1.0, -1.0, 1.0), 0.0, dephasing=0.1))
    # |−1,1><1,−1| coherence connects l = −1 and l = +1: distance 2
    assert abs(rho[2, 6]) == pytest.approx(abs(base[2, 6]) * np.exp(-0.1 * 4),
                                           rel=1e-12)
    # populations untouched
    np.testing.assert_allclose(np.diag(rho), np.diag(base), atol=1e-14)


def test_superposition_state():
    plus = superposition_state(3, +1)
    minus = superposition_state(3, -1)
    assert plus.labels == (3, -3)
    assert abs(np.vdot(np.asarray(plus), np.asarray(minus))) < 1e-12
    np.testing.assert_allclose(np.asarray(plus),
                               np.array([1.0, 1.0]) / np.sqrt(2))


def test_lg_intensity_normalized_and_peak():
    for l, w in ((0, 1.0), (1, 1.0), (5, 2.0), (25, 1.0)):
        prof = LgProfile(l, w)
        total, err = quad(lambda r: lg_intensity(prof, r) * 2 * np.pi * r,
                          0, 30 * w, limit=300)
        assert abs(total - 1.0) < 1e-7
        if l > 0:
            r_pk = prof.peak_radius
            assert abs(r_pk - w * np.sqrt(l / 2)) < 1e-12
            eps = 1e-6
            assert lg_intensity(prof, r_pk) >= lg_intensity(prof, r_pk + eps)
            assert lg_intensity(prof, r_pk) >= lg_intensity(prof, r_pk - eps)
