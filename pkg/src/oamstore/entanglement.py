"""Entanglement certification: negativity, Uhlmann fidelity, and the
two-qutrit Bell functional with measurement-setting optimization.

Bell conventions, frozen here and in the artifact files:

  S = [P(A1=B1) + P(B1=A2+1) + P(A2=B2) + P(B2=A1)]
    - [P(A1=B1-1) + P(B1=A2) + P(A2=B2-1) + P(B2=A1-1)]

with all outcome equalities mod 3 and
P(A_a = B_b + k) = sum_j p(A_a = j, B_b = (j-k) mod 3).

Measurement bases are Fourier-type: column k of an A basis is
(1/sqrt3) sum_j e^{i phi_j} w^{j(k+alpha)} |j>, B bases use w^{j(-k+beta)};
canonical phases are alpha = (0, 1/2), beta = (1/4, -1/4) in units of
2*pi/3. Those settings are optimal for the all-plus maximally entangled
state; the target state here pairs |l> with |-l> and carries a minus sign
on |0>|0>, so B-side bases are composed with the fixed local map
(index reversal times diag(1,-1,1)) that relates the two. The local bound
is 2; the maximally entangled state gives 2.8729; the global quantum
maximum 2.9149 occurs at pair amplitude gamma = (sqrt(11)-sqrt(3))/2.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from . import rng as rng_mod
from .gellmann import gellmann_basis
from .linalg import kron, matrix_sqrt_psd, partial_transpose, trace_norm
from .source import mes
from .validation import ContractError, check_density_matrix, check_unitary

OMEGA = np.exp(2j * np.pi / 3)

CANONICAL_ALPHAS = (0.0, 0.5)
CANONICAL_BETAS = (0.25, -0.25)

# |psi0> = (I kron M)|Phi+>: index reversal times diag(1,-1,1)
MES_FIXUP = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=complex)

S_MES = 4.0 / (6.0 * math.sqrt(3.0) - 9.0)          # 2.87293...
S_GLOBAL_MAX = 1.0 + math.sqrt(11.0 / 3.0)          # 2.91485...
GAMMA_STAR = (math.sqrt(11.0) - math.sqrt(3.0)) / 2.0

SETTING_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def negativity(rho):
    """(||rho^T_B||_1 - 1)/2 for a two-qutrit state."""
    rho = check_density_matrix(rho, 9)
    n = 0.5 * (trace_norm(partial_transpose(rho)) - 1.0)
    return max(n, 0.0)


def uhlmann_fidelity(rho, sigma):
    """[Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ContractError("states must have equal dimensions")
    s = matrix_sqrt_psd(rho)
    M = s @ sigma @ s
    w = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    f = float(np.sqrt(np.clip(w, 0.0, None)).sum() ** 2)
    return min(f, 1.0)


def fidelity_to_mes(rho):
    """Overlap <psi0|rho|psi0> with the maximally entangled target."""
    rho = check_density_matrix(rho, 9)
    psi = mes().amps
    return float(np.real(psi.conj() @ rho @ psi))


def fourier_basis(offset, phases=None, conjugate=False):
    """3x3 unitary whose column k is the Fourier outcome ket.

    offset is alpha (A side) or beta (B side, with conjugate=True) in units
    of 2*pi/3; phases adds e^{i phi_j} per input index j.
    """
    j = np.arange(3)
    ph = np.ones(3) if phases is None else np.exp(1j * np.asarray(phases, float))
    sign = -1 if conjugate else 1
    cols = [ph * OMEGA ** (j * sign * (k + sign * offset)) / np.sqrt(3)
            for k in range(3)]
    return np.column_stack(cols)


@dataclass(frozen=True)
class BellSettings:
    """Four measurement bases; columns are outcome kets."""
    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    family: str = "fourier"

    def __post_init__(self):
        for name in ("A1", "A2", "B1", "B2"):
            check_unitary(getattr(self, name), name)

    def bases(self):
        return (self.A1, self.A2, self.B1, self.B2)


@dataclass(frozen=True)
class BellResult:
    S: float
    settings: BellSettings
    stderr: float = None
    restarts: int = None
    improved: bool = field(default=True, compare=False)


def settings_from_phases(x, mes_fixup=True):
    """Fourier-family settings from 12 per-input-index phases.

    x[0:3], x[3:6] phase the two A bases; x[6:9], x[9:12] the two B bases.
    x = 0 gives the canonical settings. With mes_fixup the B bases are
    composed with the fixed local map relating the target state to the
    all-plus maximally entangled state.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (12,):
        raise ContractError("phase vector must have 12 entries")
    A1 = fourier_basis(CANONICAL_ALPHAS[0], x[0:3])
    A2 = fourier_basis(CANONICAL_ALPHAS[1], x[3:6])
    B1 = fourier_basis(CANONICAL_BETAS[0], x[6:9], conjugate=True)
    B2 = fourier_basis(CANONICAL_BETAS[1], x[9:12], conjugate=True)
    if mes_fixup:
        B1 = MES_FIXUP @ B1
        B2 = MES_FIXUP @ B2
    return BellSettings(A1, A2, B1, B2, family="fourier")


def canonical_settings(mes_fixup=True):
    return settings_from_phases(np.zeros(12), mes_fixup=mes_fixup)


def joint_probabilities(rho, basis_a, basis_b):
    """p[k, l] = <a_k b_l| rho |a_k b_l> for one setting pair."""
    J = kron(basis_a, basis_b)
    p = np.einsum("is,ij,js->s", J.conj(), np.asarray(rho, complex), J).real
    return p.reshape(3, 3)


def _weight_tensor():
    # per-pair coefficients of P(A_a = B_b + k), k in {-1, 0, +1}
    coeff = {
        (0, 0): {0: +1.0, -1: -1.0},
        (1, 0): {-1: +1.0, 0: -1.0},
        (1, 1): {0: +1.0, -1: -1.0},
        (0, 1): {0: +1.0, +1: -1.0},
    }
    W = np.zeros((4, 3, 3))
    for idx, ab in enumerate(SETTING_PAIRS):
        for j in range(3):
            for l in range(3):
                k = (j - l) % 3
                k = k - 3 if k == 2 else k
                W[idx, j, l] = coeff[ab].get(k, 0.0)
    return W

WEIGHTS = _weight_tensor()


def cglmp_value(rho, settings):
    """Bell functional S for a state at fixed settings; affine in rho."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (9, 9):
        raise ContractError("cglmp_value expects a 9x9 state")
    A = (settings.A1, settings.A2)
    B = (settings.B1, settings.B2)
    S = 0.0
    for idx, (a, b) in enumerate(SETTING_PAIRS):
        p = joint_probabilities(rho, A[a], B[b])
        S += float(np.sum(WEIGHTS[idx] * p))
    return BellResult(S, settings)


def _refined_settings(base, y):
    """Left-multiply each basis by exp(i sum_k c_k G_k), 8 coefficients each."""
    gens = gellmann_basis()[1:]  # traceless generators
    y = np.asarray(y, dtype=float).reshape(4, 8)
    new = []
    for U, c in zip(base.bases(), y):
        H = np.einsum("k,kij->ij", c, gens)
        new.append(expm(1j * H) @ U)
    return BellSettings(*new, family="general")


def optimize_cglmp(rho, restarts=20, seed=0, refine=False, threads=1):
    """Maximize S over measurement settings.

    Multi-start Nelder-Mead over the 12-phase Fourier family, warm-started
    at the canonical settings plus seeded random restarts. With refine,
    a second Nelder-Mead pass perturbs the best bases by general unitaries
    (32 parameters). Returns the best result found; improved is False when
    no restart beat the warm start.
    """
    rho = check_density_matrix(rho, 9)
    if restarts < 1:
        raise ContractError("restarts must be >= 1")
    gen = rng_mod.stream(seed, "bell-restarts")
    starts = [np.zeros(12)]
    starts += [gen.uniform(-np.pi, np.pi, 12) for _ in range(restarts - 1)]

    def neg_s_phases(x):
        return -cglmp_value(rho, settings_from_phases(x)).S

    def solve(x0):
        r = minimize(neg_s_phases, x0, method="Nelder-Mead",
                     options={"maxiter": 4000, "xatol": 1e-9, "fatol": 1e-12})
        return -r.fun, r.x

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(solve, starts))
    else:
        results = [solve(x0) for x0 in starts]

    warm_s = -neg_s_phases(starts[0])
    best_s, best_x = max(results, key=lambda r: r[0])
    best = settings_from_phases(best_x)

    if refine:
        def neg_s_general(y):
            return -cglmp_value(rho, _refined_settings(best, y)).S

        r = minimize(neg_s_general, np.zeros(32), method="Nelder-Mead",
                     options={"maxiter": 20000, "xatol": 1e-9, "fatol": 1e-12})
        if -r.fun > best_s:
            best_s = -r.fun
            best = _refined_settings(best, r.x)

    return BellResult(best_s, best, restarts=restarts,
                      improved=bool(best_s > warm_s + 1e-12))


def simulate_bell_counts(rho, settings, exposure, seed):
    """Poisson counts for the four setting pairs, shape (4, 3, 3)."""
    rho = check_density_matrix(rho, 9)
    if exposure <= 0:
        raise ContractError("exposure must be > 0")
    gen = seed if isinstance(seed, np.random.Generator) else rng_mod.stream(seed, "bell-counts")
    A = (settings.A1, settings.A2)
    B = (settings.B1, settings.B2)
    counts = np.empty((4, 3, 3), dtype=np.int64)
    for idx, (a, b) in enumerate(SETTING_PAIRS):
        p = np.clip(joint_probabilities(rho, A[a], B[b]), 0.0, None)
        counts[idx] = gen.poisson(exposure * p)
    return counts


def bell_from_counts(counts, settings):
    """S estimate and Poisson standard error from per-outcome counts.

    counts has shape (4, 3, 3), setting pairs ordered (A1,B1), (A1,B2),
    (A2,B1), (A2,B2); each pair is normalized by its own total.
    """
    N = np.asarray(counts, dtype=float)
    if N.shape != (4, 3, 3):
        raise ContractError("counts must have shape (4, 3, 3)")
    if np.any(N < 0):
        raise ContractError("counts must be >= 0")
    S = 0.0
    var = 0.0
    for idx in range(4):
        T = N[idx].sum()
        if T == 0:
            raise ContractError(f"setting pair {SETTING_PAIRS[idx]} has no counts")
        p_hat = N[idx] / T
        s_ab = float(np.sum(WEIGHTS[idx] * p_hat))
        S += s_ab
        # d s_ab / d n_jl = (w_jl - s_ab)/T; Poisson variance n_jl
        var += float(np.sum(N[idx] * ((WEIGHTS[idx] - s_ab) / T) ** 2))
    return BellResult(S, settings, stderr=math.sqrt(var))
