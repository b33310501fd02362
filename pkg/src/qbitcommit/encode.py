"""Polarization encoding of bits into qubits, basis measurement, channel noise.

Rectilinear polarizations 0 and 90 degrees are |0> and |1>; diagonal
polarizations 45 and 135 degrees are |+> and |->.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .qmath import DensityMatrix, StateVector

_S = 1 / np.sqrt(2)
HADAMARD = np.array([[_S, _S], [_S, -_S]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Basis(enum.IntEnum):
    RECTILINEAR = 0   # 0 / 90 degrees
    DIAGONAL = 1      # 45 / 135 degrees

    def vectors(self) -> np.ndarray:
        """Columns are the basis states for outcomes 0 and 1."""
        return np.eye(2, dtype=complex) if self is Basis.RECTILINEAR else HADAMARD


@dataclass(frozen=True)
class NoiseModel:
    """Channel noise level ``epsilon``: the flip probability seen by a
    measurement in the same basis the qubit was prepared in."""

    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in [0, 0.5), got {self.epsilon}")

    @property
    def depolarizing_strength(self) -> float:
        # rho -> (1-p) rho + p I/2 flips a matched measurement with prob p/2
        return 2.0 * self.epsilon


def encode_bit(c: int, b: int) -> StateVector:
    """Qubit carrying bit ``c`` in basis ``b`` (0 rectilinear, 1 diagonal)."""
    if c not in (0, 1) or b not in (0, 1):
        raise ValueError(f"c and b must be bits, got c={c!r}, b={b!r}")
    return StateVector(Basis(b).vectors()[:, c], (2,))


def _single_qubit_matrix(qubit) -> np.ndarray:
    if isinstance(qubit, StateVector):
        if qubit.dim != 2:
            raise ValueError(f"expected a single qubit, got dims {qubit.dims}")
        return np.outer(qubit.amplitudes, qubit.amplitudes.conj())
    if isinstance(qubit, DensityMatrix):
        if qubit.dim != 2:
            raise ValueError(f"expected a single qubit, got dim {qubit.dim}")
        return qubit.entries
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(qubit).__name__}")


def outcome_probabilities(qubit, basis: Basis) -> np.ndarray:
    rho = _single_qubit_matrix(qubit)
    vecs = Basis(basis).vectors()
    probs = np.real(np.einsum("ik,ij,jk->k", vecs.conj(), rho, vecs))
    probs = np.clip(probs, 0.0, 1.0)
    return probs / probs.sum()


def measure(qubit, basis: Basis, rng: np.random.Generator) -> tuple[int, StateVector]:
    """Projective measurement; returns the outcome and the collapsed state."""
    basis = Basis(basis)
    probs = outcome_probabilities(qubit, basis)
    outcome = int(rng.random() >= probs[0])
    return outcome, StateVector(basis.vectors()[:, outcome], (2,))


def apply_noise(qubit: DensityMatrix, model: NoiseModel,
                rng: np.random.Generator | None = None) -> DensityMatrix:
    """Depolarizing channel calibrated so matched-basis readout errs with prob epsilon.

    Without ``rng`` the averaged channel output is returned. With ``rng`` one
    Pauli branch of the channel is sampled (identity, or X/Y/Z each with
    probability 3p/4 split evenly), which reproduces the same statistics
    trial by trial.
    """
    rho = _single_qubit_matrix(qubit)
    p = model.depolarizing_strength
    if p == 0.0:
        return qubit if isinstance(qubit, DensityMatrix) else DensityMatrix(rho)
    if rng is None:
        return DensityMatrix((1 - p) * rho + p * np.eye(2) / 2)
    u = rng.random()
    if u >= 0.75 * p:
        return DensityMatrix(rho)
    pauli = (PAULI_X, PAULI_Y, PAULI_Z)[min(int(u / (0.25 * p)), 2)]
    return DensityMatrix(pauli @ rho @ pauli.conj().T)
