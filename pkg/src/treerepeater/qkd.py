"""Six-state QKD key fraction under a lumped depolarizing photon error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, InfeasibleConfigError

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MAX_QBER = 2.0 / 3.0
_PSD_TOL = 1e-12


@dataclass(frozen=True)
class ErrorParams:
    eps_r: float = 1e-5  # photon error probability per repeater station
    n_node: int = 0

    def __post_init__(self):
        if not 0.0 <= self.eps_r <= 1.0:
            raise DomainError(f"eps_r must lie in [0, 1], got {self.eps_r!r}")
        if self.n_node < 0:
            raise DomainError(f"n_node must be >= 0, got {self.n_node!r}")
        if self.eps_p > 1.0:
            raise InfeasibleConfigError(
                f"accumulated photon error (n_node + 1) * eps_r = {self.eps_p!r} exceeds 1")

    @property
    def eps_p(self) -> float:
        return (self.n_node + 1) * self.eps_r


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def qber_from_error(eps_p: float) -> float:
    if not 0.0 <= eps_p <= 1.0:
        raise DomainError(f"eps_p must lie in [0, 1], got {eps_p!r}")
    return 2.0 * eps_p / 3.0


def key_fraction_unclamped(q: float) -> float:
    """Six-state asymptotic key fraction before clipping at zero; may be negative."""
    if not 0.0 <= q <= MAX_QBER:
        raise DomainError(f"QBER must lie in [0, 2/3], got {q!r}")
    inner = (1.0 - 1.5 * q) / (1.0 - q)
    inner = min(max(inner, 0.0), 1.0)  # rounding at q = 2/3 can step just below 0
    return (1.0 - q) * (1.0 - binary_entropy(inner)) - binary_entropy(q)


def key_fraction(q: float) -> float:
    return max(key_fraction_unclamped(q), 0.0)


def zero_rate_threshold(xtol: float = 1e-12) -> float:
    """QBER at which the six-state key fraction first reaches zero."""
    return bisect(key_fraction_unclamped, 0.05, 0.2, xtol=xtol)


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12, rtol=0):
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-12:
        raise DomainError(f"density matrix trace is {np.trace(rho)!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -_PSD_TOL:
        raise DomainError("density matrix is not positive semidefinite")
    return rho


def depolarize(rho: np.ndarray, eps_p: float) -> np.ndarray:
    """Apply ``(1 - eps) rho + eps/3 (X rho X + Y rho Y + Z rho Z)``."""
    rho = check_density_matrix(rho)
    if not 0.0 <= eps_p <= 1.0:
        raise DomainError(f"eps_p must lie in [0, 1], got {eps_p!r}")
    paulis = PAULI_X @ rho @ PAULI_X + PAULI_Y @ rho @ PAULI_Y + PAULI_Z @ rho @ PAULI_Z
    return (1.0 - eps_p) * rho + (eps_p / 3.0) * paulis


def pure_state(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    return np.outer(ket, ket.conj())


def flip_probability(rho_out: np.ndarray, orthogonal_ket) -> float:
    """Probability of finding ``rho_out`` in the given (orthogonal) basis state."""
    ket = np.asarray(orthogonal_ket, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    return float(np.real(ket.conj() @ rho_out @ ket))
