"""Input checks shared by all modules.

Every public operation validates its inputs through these helpers so that
contract violations fail early with a uniform error type instead of
propagating NaNs or silently wrong shapes.
"""
import numbers

import numpy as np

HERM_TOL = 1e-9
PSD_TOL = 1e-8


class ContractError(ValueError):
    """An input violates an operation's stated precondition."""


def as_complex_matrix(M, name="matrix"):
    """Coerce to a finite 2-D complex ndarray."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ContractError(f"{name} must be 2-D, got ndim={A.ndim}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise ContractError(f"{name} contains non-finite entries")
    return A


def as_square(M, name="matrix"):
    A = as_complex_matrix(M, name)
    if A.shape[0] != A.shape[1]:
        raise ContractError(f"{name} must be square, got shape {A.shape}")
    return A


def check_hermitian(M, name="matrix", tol=HERM_TOL):
    """Return M as ndarray after verifying M = M† within tol (relative)."""
    A = as_square(M, name)
    scale = max(np.abs(A).max(), 1.0)
    if np.abs(A - A.conj().T).max() > tol * scale:
        raise ContractError(f"{name} is not Hermitian within {tol:g} (relative)")
    return A


def check_density_matrix(rho, dim=None, name="rho", tol=PSD_TOL):
    """Verify Hermitian, unit trace, PSD within tol; return as ndarray."""
    A = check_hermitian(rho, name)
    if dim is not None and A.shape[0] != dim:
        raise ContractError(f"{name} must be {dim}x{dim}, got {A.shape}")
    if abs(np.trace(A).real - 1.0) > 1e-6:
        raise ContractError(f"{name} trace is {np.trace(A).real:.8f}, expected 1")
    w = np.linalg.eigvalsh(A)
    if w.min() < -tol:
        raise ContractError(f"{name} has eigenvalue {w.min():.3e} < -{tol:g}")
    return A


def check_ket(psi, dim=None, name="ket"):
    """Verify a normalized state vector; return as 1-D complex ndarray."""
    v = np.asarray(psi, dtype=complex).ravel()
    if dim is not None and v.size != dim:
        raise ContractError(f"{name} must have dimension {dim}, got {v.size}")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-9:
        raise ContractError(f"{name} norm is {n:.12f}, expected 1")
    return v


def check_unitary(U, name="basis", tol=1e-10):
    A = as_square(U, name)
    if np.abs(A.conj().T @ A - np.eye(A.shape[0])).max() > tol:
        raise ContractError(f"{name} is not unitary within {tol:g}")
    return A


def check_positive(x, name, strict=True):
    if not isinstance(x, numbers.Real) or not np.isfinite(x):
        raise ContractError(f"{name} must be a finite real number")
    if strict and x <= 0:
        raise ContractError(f"{name} must be > 0, got {x}")
    if not strict and x < 0:
        raise ContractError(f"{name} must be >= 0, got {x}")
    return float(x)


def check_in_range(x, lo, hi, name):
    if not isinstance(x, numbers.Real) or not (lo <= x <= hi):
        raise ContractError(f"{name} must lie in [{lo}, {hi}], got {x}")
    return float(x)
