"""OAM qutrit states and spatial mode profiles.

Basis order is (|-1>, |0>, |+1>) everywhere; a qutrit index i maps to OAM
number l = i - 1. Bipartite states use the global flat index a*3 + b.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .validation import ContractError, check_positive

BASIS_LS = (-1, 0, 1)


def _l_index(l):
    if l not in BASIS_LS:
        raise ContractError(f"OAM index {l} outside qutrit basis {BASIS_LS}")
    return l + 1


@dataclass(frozen=True)
class OamKet:
    """State vector with OAM basis labels.

    labels holds one integer l per basis state for a single photon, or one
    (lA, lB) pair per basis state for a photon pair.
    """
    amps: np.ndarray
    labels: tuple

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).ravel()
        n = np.linalg.norm(a)
        if abs(n - 1.0) > 1e-12:
            raise ContractError(f"ket norm {n:.15f} differs from 1")
        if len(self.labels) != a.size:
            raise ContractError("label count does not match amplitude count")
        object.__setattr__(self, "amps", a)

    def __array__(self, dtype=None):
        return np.asarray(self.amps, dtype=dtype)

    @property
    def dim(self):
        return self.amps.size

    def projector(self):
        return np.outer(self.amps, self.amps.conj())


def qutrit_ket(amplitudes):
    a = np.asarray(amplitudes, dtype=complex).ravel()
    if a.size != 3:
        raise ContractError("qutrit ket needs 3 amplitudes")
    n = np.linalg.norm(a)
    if n == 0:
        raise ContractError("zero vector")
    return OamKet(a / n, BASIS_LS)


def basis_ket(l):
    """Single-photon basis state |l> for l in {-1, 0, 1}."""
    a = np.zeros(3)
    a[_l_index(l)] = 1.0
    return qutrit_ket(a)


_PAIR_LABELS = tuple((la, lb) for la in BASIS_LS for lb in BASIS_LS)


@dataclass(frozen=True)
class SpdcSpec:
    """Down-conversion pair state ingredients.

    c holds the amplitudes (c_-1, c_0, c_1) of sum_i c_i |i>|-i>,
    normalized on construction. Noise is an isotropic admixture of weight
    v by default; dephasing > 0 instead (or additionally) damps the pair
    coherences by exp(-dephasing*(li-lj)^2).
    """
    c: tuple = (1.0, -1.0, 1.0)
    v: float = 0.0
    dephasing: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.c, dtype=complex).ravel()
        if a.size != 3:
            raise ContractError("SpdcSpec.c needs 3 amplitudes")
        n = np.linalg.norm(a)
        if n == 0:
            raise ContractError("all pair amplitudes are zero")
        object.__setattr__(self, "c", tuple(a / n))
        if not 0.0 <= self.v <= 1.0:
            raise ContractError(f"mixing weight v={self.v} outside [0, 1]")
        if self.dephasing < 0:
            raise ContractError("dephasing rate must be >= 0")


def pair_ket(c):
    """|Psi> = sum_i c_i |i>|-i> as a 9-dim OamKet."""
    a = np.zeros(9, dtype=complex)
    for ci, l in zip(c, BASIS_LS):
        a[_l_index(l) * 3 + _l_index(-l)] = ci
    return OamKet(a / np.linalg.norm(a), _PAIR_LABELS)


def spdc_state(spec):
    """Density matrix of the noisy down-conversion pair state.

    rho = (1 - v)|Psi><Psi| + v*I/9 with optional extra coherence decay
    between pair components; always unit trace and PSD.
    """
    psi = pair_ket(spec.c)
    P = psi.projector()
    if spec.dephasing > 0:
        idx = [_l_index(l) * 3 + _l_index(-l) for l in BASIS_LS]
        for a, la in zip(idx, BASIS_LS):
            for b, lb in zip(idx, BASIS_LS):
                if la != lb:
                    P[a, b] *= math.exp(-spec.dephasing * (la - lb) ** 2)
    return (1.0 - spec.v) * P + spec.v * np.eye(9) / 9.0


def mes():
    """The maximally entangled target state (|-1,1> - |0,0> + |1,-1>)/sqrt(3)."""
    return pair_ket((1.0, -1.0, 1.0))


def tomography_kets():
    """The nine single-photon analysis kets, in fixed order.

    Indices 0..8: |-1>, |0>, |1>, (|0>+|-1>)/sqrt2, (|0>+|1>)/sqrt2,
    (|0>+i|-1>)/sqrt2, (|0>-i|1>)/sqrt2, (|-1>+|1>)/sqrt2,
    (|-1>+i|1>)/sqrt2.
    """
    s = 1 / np.sqrt(2)
    rows = [
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (s, s, 0),
        (0, s, s),
        (1j * s, s, 0),
        (0, s, -1j * s),
        (s, 0, s),
        (s, 0, 1j * s),
    ]
    return [qutrit_ket(r) for r in rows]


def superposition_state(l, sign):
    """(|l> + sign|-l>)/sqrt(2) on the two-mode subspace with labels (l, -l)."""
    if not isinstance(l, (int, np.integer)) or l < 1:
        raise ContractError(f"superposition index l must be an integer >= 1, got {l}")
    if sign not in (+1, -1):
        raise ContractError("sign must be +1 or -1")
    return OamKet(np.array([1.0, float(sign)]) / np.sqrt(2), (int(l), -int(l)))


@dataclass(frozen=True)
class LgProfile:
    """Laguerre-Gauss ring mode, radial index p = 0 only."""
    l: int
    w0: float
    p: int = field(default=0)

    def __post_init__(self):
        if self.p != 0:
            raise ContractError("only p = 0 radial profiles are supported")
        check_positive(self.w0, "w0")

    @property
    def peak_radius(self):
        """Radius of maximum intensity, w0*sqrt(|l|/2)."""
        return self.w0 * math.sqrt(abs(self.l) / 2.0)


def lg_intensity(profile, r):
    """Normalized ring intensity I(r); integrates to 1 over 2*pi*r dr.

    I(r) = 2/(pi w0^2 L!) * (2r^2/w0^2)^L * exp(-2r^2/w0^2), L = |l|.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ContractError("radius must be >= 0")
    L = abs(profile.l)
    u = 2.0 * r**2 / profile.w0**2
    return (2.0 / (np.pi * profile.w0**2 * math.factorial(L))) * u**L * np.exp(-u)
