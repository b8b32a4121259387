"""Photon-counting simulation and state/process reconstruction.

State tomography uses the nine analysis kets (81 joint settings for a
photon pair, 9 for a single photon). Counts are Poisson draws per setting.
Reconstruction offers linear inversion (fast, possibly non-PSD) and a
maximum-likelihood estimate that is PSD and unit-trace by construction,
with a monotone log-likelihood.

Process matrices chi live over the operator basis documented in
oamstore.gellmann; E(rho) = sum_mn chi_mn lam_m rho lam_n†.
"""
from dataclasses import dataclass, field

import numpy as np

from . import rng as rng_mod
from .gellmann import BASIS_NOTE, gellmann_basis
from .linalg import kron, project_psd, vec
from .source import tomography_kets
from .validation import ContractError, check_density_matrix

MAX_MLE_ITER = 100_000
LOGLIK_GAIN_TOL = 1e-10
TP_RESIDUAL_TOL = 1e-6
MAX_ALTERNATIONS = 500


@dataclass(frozen=True)
class CountTable:
    """Counts per measurement setting.

    settings index into tomography_kets(): (i, j) pairs for joint
    measurements on a photon pair, bare ints for a single photon.
    """
    settings: tuple
    counts: np.ndarray
    exposure: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        t = np.asarray(self.exposure, dtype=float)
        if t.ndim == 0:
            t = np.full(c.size, float(t))
        if c.size != len(self.settings) or t.size != c.size:
            raise ContractError("settings, counts, exposure lengths differ")
        if np.any(c < 0):
            raise ContractError("counts must be >= 0")
        if np.any(t <= 0):
            raise ContractError("exposure must be > 0")
        pair = isinstance(self.settings[0], tuple)
        if pair and len(self.settings) != 81:
            raise ContractError("pair tables need all 81 settings")
        if not pair and len(self.settings) != 9:
            raise ContractError("single-photon tables need all 9 settings")
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "exposure", t)

    @property
    def pair_mode(self):
        return isinstance(self.settings[0], tuple)


@dataclass(frozen=True)
class TomoEstimate:
    rho: np.ndarray
    loglik: float
    iterations: int
    converged: bool
    loglik_history: np.ndarray = field(repr=False, default=None)


def _single_projectors():
    kets = tomography_kets()
    return np.stack([k.projector() for k in kets])


def _pair_projectors():
    kets = tomography_kets()
    P = np.empty((81, 9, 9), dtype=complex)
    for i in range(9):
        for j in range(9):
            P[i * 9 + j] = kron(kets[i].projector(), kets[j].projector())
    return P


def _projectors_for(table):
    return _pair_projectors() if table.pair_mode else _single_projectors()


def default_settings(pair=True):
    if pair:
        return tuple((i, j) for i in range(9) for j in range(9))
    return tuple(range(9))


def born_probabilities(rho, pair=None):
    """Born-rule probability per setting, in the fixed setting order."""
    rho = np.asarray(rho, dtype=complex)
    if pair is None:
        pair = rho.shape[0] == 9
    P = _pair_projectors() if pair else _single_projectors()
    return np.einsum("sij,ji->s", P, rho).real


def simulate_counts(rho, exposure, seed, background=0.0):
    """Poisson photon-counting record for every setting.

    Parameters
    ----------
    rho : array_like
        3x3 (single photon, 9 settings) or 9x9 (pair, 81 settings).
    exposure : float
        Expected trials per setting.
    seed : int or numpy Generator
        Count stream; an int seeds the dedicated "counts" stream.
    background : float
        Optional accidental rate added to every setting probability.
    """
    rho = np.asarray(rho, dtype=complex)
    pair = rho.shape[0] == 9
    check_density_matrix(rho, 9 if pair else 3)
    if exposure <= 0:
        raise ContractError("exposure must be > 0")
    if background < 0:
        raise ContractError("background rate must be >= 0")
    gen = seed if isinstance(seed, np.random.Generator) else rng_mod.stream(seed, "counts")
    p = born_probabilities(rho, pair) + background
    counts = gen.poisson(exposure * np.clip(p, 0.0, None))
    return CountTable(default_settings(pair), counts, float(exposure))


def _design_matrix(pair):
    lams = gellmann_basis()
    if pair:
        ops = np.stack([kron(lams[m], lams[n]) for m in range(9) for n in range(9)])
        P = _pair_projectors()
    else:
        ops = lams
        P = _single_projectors()
    return np.einsum("sij,kji->sk", P, ops).real, ops


def linear_inversion(table):
    """Least-squares Hermitian estimate with trace fixed to 1.

    The identity coefficient is pinned by the trace constraint; the rest is
    an unconstrained least-squares fit to the observed frequencies, so the
    result can have negative eigenvalues under statistical noise.
    """
    f = table.counts / table.exposure
    A, ops = _design_matrix(table.pair_mode)
    # coefficient of the identity basis element fixed by Tr(rho) = 1
    x0 = 1.0 / 3.0 if table.pair_mode else 1.0 / np.sqrt(3.0)
    resid = f - A[:, 0] * x0
    x_rest, *_ = np.linalg.lstsq(A[:, 1:], resid, rcond=None)
    x = np.concatenate(([x0], x_rest))
    rho = np.einsum("k,kij->ij", x, ops)
    return 0.5 * (rho + rho.conj().T)


def _poisson_loglik(n, t, p):
    p = np.clip(p, 1e-15, None)
    return float(np.sum(n * np.log(t * p) - t * p))


def mle_reconstruct(table, init=None):
    """Maximum-likelihood density matrix from a count table.

    Multiplicative updates rho -> (I + t G)rho(I + t G) along the projected
    likelihood gradient, with the step halved until the log-likelihood
    improves; every accepted iteration increases it. Stops at gain below
    1e-10 or at the iteration cap (converged flag False in that case).
    """
    Pi = _projectors_for(table)
    dim = Pi.shape[1]
    P_mat = Pi.reshape(Pi.shape[0], -1).conj()  # row s dotted with vec gives Tr(Pi_s rho)
    n = table.counts.astype(float)
    t = table.exposure
    M_op = np.einsum("s,sij->ij", t, Pi)
    total = float(n.sum())
    if total == 0:
        raise ContractError("count table is entirely empty")

    if init is None:
        init = project_psd(linear_inversion(table), unit_trace=True)
    rho = (1 - 1e-6) * np.asarray(init, dtype=complex) + 1e-6 * np.eye(dim) / dim

    def probs(r):
        return (P_mat @ r.ravel()).real

    p = probs(rho)
    ll = _poisson_loglik(n, t, p)
    history = [ll]
    converged = False
    it = 0
    for it in range(1, MAX_MLE_ITER + 1):
        G = np.einsum("s,sij->ij", n / np.clip(p, 1e-15, None), Pi) - M_op
        G = 0.5 * (G + G.conj().T) / total
        G -= np.trace(G @ rho).real * np.eye(dim)  # trace-preserving to first order
        step = 0.5
        improved = False
        while step > 1e-12:
            A = np.eye(dim) + step * G
            cand = A @ rho @ A.conj().T
            cand /= np.trace(cand).real
            p_c = probs(cand)
            ll_c = _poisson_loglik(n, t, p_c)
            if ll_c > ll:
                rho, p, gain, ll = cand, p_c, ll_c - ll, ll_c
                improved = True
                break
            step *= 0.5
        if not improved:
            converged = True  # stationary point: no ascent direction left
            break
        history.append(ll)
        if gain < LOGLIK_GAIN_TOL:
            converged = True
            break
    rho = 0.5 * (rho + rho.conj().T)
    return TomoEstimate(rho, ll, it, converged, np.asarray(history))


def depolarize(rho, p):
    """Analyzer imperfection model: (1-p) rho + p I/3."""
    rho = np.asarray(rho, dtype=complex)
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"depolarizing weight {p} outside [0, 1]")
    return (1.0 - p) * rho + p * np.eye(rho.shape[0]) / rho.shape[0]


def apply_process(chi, rho):
    """E(rho) = sum_mn chi_mn lam_m rho lam_n†."""
    lams = gellmann_basis()
    return np.einsum("mn,mij,jk,nlk->il", chi, lams, np.asarray(rho, complex),
                     lams.conj())


def _tp_constraint_matrix():
    lams = gellmann_basis()
    B = np.empty((9, 81), dtype=complex)
    for m in range(9):
        for nn in range(9):
            # chi vec is column-major: entry (m, nn) sits at nn*9 + m
            B[:, nn * 9 + m] = vec(lams[nn].conj().T @ lams[m])
    return B, vec(np.eye(3))


def tp_residual(chi):
    """Max deviation of sum_mn chi_mn lam_n† lam_m from the identity."""
    lams = gellmann_basis()
    S = np.einsum("mn,njk,mjl->kl", chi, lams.conj(), lams)
    return float(np.abs(S - np.eye(3)).max())


def process_tomography(input_kets, output_states):
    """Fit chi from nine input states and their measured outputs.

    Linear least squares for chi, then alternating projections onto the PSD
    cone and the trace-preservation affine set until both residuals clear
    1e-6 (at most 500 alternations).
    """
    if len(input_kets) != 9 or len(output_states) != 9:
        raise ContractError("process tomography needs 9 inputs and 9 outputs")
    lams = gellmann_basis()
    rows = []
    rhs = []
    for k, out in zip(input_kets, output_states):
        k = np.asarray(k, dtype=complex).ravel()
        rho_in = np.outer(k, k.conj())
        # vec(lam_m rho lam_n†) = (conj(lam_n) kron lam_m) vec(rho)
        cols = np.empty((9, 81), dtype=complex)
        for m in range(9):
            for nn in range(9):
                cols[:, nn * 9 + m] = vec(lams[m] @ rho_in @ lams[nn].conj().T)
        rows.append(cols)
        rhs.append(vec(np.asarray(out, dtype=complex)))
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    chi = x.reshape(9, 9).T  # undo column-major vec
    chi = 0.5 * (chi + chi.conj().T)

    B, b_tp = _tp_constraint_matrix()
    proj = B.conj().T @ np.linalg.inv(B @ B.conj().T)
    for _ in range(MAX_ALTERNATIONS):
        w, V = np.linalg.eigh(chi)
        if w.min() >= -1e-8 and tp_residual(chi) <= TP_RESIDUAL_TOL:
            break
        chi = (V * np.clip(w, 0.0, None)) @ V.conj().T
        cv = vec(chi)
        cv = cv - proj @ (B @ cv - b_tp)
        chi = cv.reshape(9, 9).T
        chi = 0.5 * (chi + chi.conj().T)
    return chi


def check_process_matrix(chi, name="chi"):
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (9, 9):
        raise ContractError(f"{name} must be 9x9")
    if np.abs(chi - chi.conj().T).max() > 1e-8:
        raise ContractError(f"{name} is not Hermitian")
    if np.linalg.eigvalsh(chi).min() < -1e-6:
        raise ContractError(f"{name} is not PSD within tolerance")
    return chi


def identity_chi():
    chi = np.zeros((9, 9), dtype=complex)
    chi[0, 0] = 3.0
    return chi


def depolarizing_chi(p=1.0):
    """chi of E(rho) = (1-p) rho + p I/3."""
    return (1.0 - p) * identity_chi() + p * np.eye(9, dtype=complex) / 3.0


def choi_from_chi(chi):
    """Normalized Choi state (output factor slow, input factor fast)."""
    lams = gellmann_basis()
    V = np.stack([lam.ravel() for lam in lams], axis=1)
    J = V @ np.asarray(chi, dtype=complex) @ V.conj().T
    tr = np.trace(J).real
    if tr <= 0:
        raise ContractError("chi has non-positive trace")
    return J / tr


def process_fidelity(chi_a, chi_b):
    """Uhlmann fidelity between the normalized Choi states of two processes."""
    from .entanglement import uhlmann_fidelity

    return uhlmann_fidelity(choi_from_chi(chi_a), choi_from_chi(chi_b))


def chi_metadata(seed=None, iterations=None):
    meta = {"operator_basis": BASIS_NOTE}
    if seed is not None:
        meta["seed"] = int(seed)
    if iterations is not None:
        meta["iterations"] = int(iterations)
    return meta
