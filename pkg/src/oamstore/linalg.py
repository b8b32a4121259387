"""Dense Hermitian matrix kernel: eigendecomposition, matrix functions,
tensor-product bookkeeping.

Bipartite index convention, fixed globally: a state |a>|b> on dA (x) dB
lives at flat index a*dB + b (subsystem A is the slow index).
"""
import numpy as np

from .validation import ContractError, as_square, check_hermitian

PSD_EIG_TOL = 1e-8


def hermitian_eig(H):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    H : array_like
        Square Hermitian matrix.

    Returns
    -------
    w : ndarray
        Real eigenvalues, ascending.
    V : ndarray
        Orthonormal eigenvectors as columns, H = V diag(w) V†.
    """
    A = check_hermitian(H, "H")
    w, V = np.linalg.eigh(A)
    return w, V


def matrix_sqrt_psd(M):
    """Hermitian square root of a PSD matrix.

    Eigenvalues in [-1e-8, 0) are clamped to zero; anything below
    raises, since that is no longer tomography round-off.
    """
    A = check_hermitian(M, "M")
    w, V = np.linalg.eigh(A)
    scale = max(abs(w[-1]), 1.0)
    if w[0] < -PSD_EIG_TOL * scale:
        raise ContractError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.conj().T


def kron(A, B):
    """Tensor product with the global a*dB + b index convention."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def partial_transpose(rho, dims=(3, 3), subsystem="B"):
    """Transpose one factor of a bipartite operator.

    Parameters
    ----------
    rho : array_like
        Operator on dA*dB dimensions, flat index a*dB + b.
    dims : (int, int)
        (dA, dB).
    subsystem : {"A", "B"}
        Which factor to transpose.
    """
    dA, dB = dims
    A = as_square(rho, "rho")
    if A.shape[0] != dA * dB:
        raise ContractError(f"dimension {A.shape[0]} does not factor as {dA}x{dB}")
    T = A.reshape(dA, dB, dA, dB)
    if subsystem == "B":
        T = T.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        T = T.transpose(2, 1, 0, 3)
    else:
        raise ContractError("subsystem must be 'A' or 'B'")
    return T.reshape(dA * dB, dA * dB)


def partial_trace(rho, dims=(3, 3), keep="A"):
    """Trace out one factor of a bipartite operator."""
    dA, dB = dims
    A = as_square(rho, "rho")
    if A.shape[0] != dA * dB:
        raise ContractError(f"dimension {A.shape[0]} does not factor as {dA}x{dB}")
    T = A.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("abcb->ac", T)
    if keep == "B":
        return np.einsum("abad->bd", T)
    raise ContractError("keep must be 'A' or 'B'")


def trace_norm(M):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = hermitian_eig(M)
    return float(np.abs(w).sum())


def vec(M):
    """Column-major vectorization; vec(AXB) = (B^T kron A) vec(X)."""
    return np.asarray(M, dtype=complex).T.ravel()


def unvec(v, shape=None):
    v = np.asarray(v, dtype=complex).ravel()
    if shape is None:
        n = int(round(np.sqrt(v.size)))
        shape = (n, n)
    return v.reshape(shape[1], shape[0]).T


def project_psd(M, unit_trace=False):
    """Nearest PSD matrix in Frobenius norm (eigenvalue clamp).

    With unit_trace the result is also rescaled to trace 1; used to turn a
    linear-inversion estimate into a valid starting density matrix.
    """
    A = 0.5 * (np.asarray(M, dtype=complex) + np.asarray(M, dtype=complex).conj().T)
    w, V = np.linalg.eigh(A)
    w = np.clip(w, 0.0, None)
    P = (V * w) @ V.conj().T
    if unit_trace:
        t = np.trace(P).real
        if t <= 0:
            # fully clipped estimate carries no information, fall back to I/n
            return np.eye(A.shape[0], dtype=complex) / A.shape[0]
        P = P / t
    return P
