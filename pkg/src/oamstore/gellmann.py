"""Hermitian operator basis for qutrit process representation.

Basis convention, fixed and written into every chi-matrix artifact:
  lam_1          = I/sqrt(3)
  lam_2..lam_4   = (E_jk + E_kj)/sqrt(2)   for (j,k) in (0,1),(0,2),(1,2)
  lam_5..lam_7   = (-i E_jk + i E_kj)/sqrt(2), same pair order
  lam_8          = diag(1,-1,0)/sqrt(2)
  lam_9          = diag(1,1,-2)/sqrt(6)
All nine are Hermitian and orthonormal under Tr(A† B); lam_2..lam_9 are
traceless.
"""
import numpy as np

PAIRS = ((0, 1), (0, 2), (1, 2))

BASIS_NOTE = ("lam1=I/sqrt3; lam2-4 symmetric (01),(02),(12); "
              "lam5-7 antisymmetric; lam8=diag(1,-1,0)/sqrt2; "
              "lam9=diag(1,1,-2)/sqrt6")


def gellmann_basis():
    """The nine basis operators as a (9, 3, 3) array."""
    lams = np.zeros((9, 3, 3), dtype=complex)
    lams[0] = np.eye(3) / np.sqrt(3)
    for i, (j, k) in enumerate(PAIRS):
        lams[1 + i][j, k] = lams[1 + i][k, j] = 1 / np.sqrt(2)
        lams[4 + i][j, k] = -1j / np.sqrt(2)
        lams[4 + i][k, j] = 1j / np.sqrt(2)
    lams[7] = np.diag([1, -1, 0]) / np.sqrt(2)
    lams[8] = np.diag([1, 1, -2]) / np.sqrt(6)
    return lams


def expand(M, lams=None):
    """Coefficients x_m = Tr(lam_m† M); M = sum_m x_m lam_m."""
    if lams is None:
        lams = gellmann_basis()
    M = np.asarray(M, dtype=complex)
    return np.einsum("mji,ij->m", lams.conj(), M)
