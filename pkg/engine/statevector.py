"""
State Engine - pure statevector and density-matrix simulation.

Noiseless runs evolve a statevector; noisy runs evolve a density matrix
and pass gates through Kraus channels or precomputed superoperators.
Basis index i has qubit k's value at bit k (qubit 0 is the LSB).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from core.config import get_settings
from core.errors import ChannelError, DimensionMismatchError, InvalidArgumentError, ResourceLimitError
from core.validator import ResultValidator

PROBABILITY_DRIFT = 1e-12


class StateMode(str, Enum):
    PURE = "pure"
    MIXED = "mixed"


class GateKind(str, Enum):
    RY = "ry"
    RZ = "rz"
    X = "x"
    CNOT = "cx"


# ============================================================================
# Gates
# ============================================================================

_X = np.array([[0, 1], [1, 0]], dtype=complex)
# local index = control + 2 * target
_CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0],
     [0, 1, 0, 0]],
    dtype=complex,
)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """
    One circuit gate. ``qubits`` is ``(target,)`` for single-qubit gates
    and ``(control, target)`` for CNOT.
    """
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if self.kind == GateKind.CNOT else 1
        if len(self.qubits) != arity:
            raise InvalidArgumentError(
                f"{self.kind.value} acts on {arity} qubit(s), got {self.qubits}", "qubits"
            )
        if any(q < 0 for q in self.qubits):
            raise InvalidArgumentError(f"Negative qubit index in {self.qubits}", "qubits")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise InvalidArgumentError("CNOT control and target must differ", "qubits")

    @classmethod
    def ry(cls, qubit: int, theta: float) -> "Gate":
        return cls(GateKind.RY, (qubit,), float(theta))

    @classmethod
    def rz(cls, qubit: int, theta: float) -> "Gate":
        return cls(GateKind.RZ, (qubit,), float(theta))

    @classmethod
    def x(cls, qubit: int) -> "Gate":
        return cls(GateKind.X, (qubit,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    def matrix(self) -> np.ndarray:
        if self.kind == GateKind.RY:
            return ry_matrix(self.angle)
        if self.kind == GateKind.RZ:
            return rz_matrix(self.angle)
        if self.kind == GateKind.X:
            return _X
        return _CNOT


# ============================================================================
# Quantum state
# ============================================================================

@dataclass(frozen=True, eq=False)
class QuantumState:
    """Statevector (PURE, shape (2^q,)) or density matrix (MIXED, shape (2^q, 2^q))."""
    mode: StateMode
    data: np.ndarray
    num_qubits: int

    @classmethod
    def pure(cls, amplitudes: Sequence[complex]) -> "QuantumState":
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(StateMode.PURE, vec, _qubits_for_dim(vec.shape[0]))

    @classmethod
    def mixed(cls, rho: np.ndarray) -> "QuantumState":
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidArgumentError(f"Density matrix must be square, got {rho.shape}", "rho")
        return cls(StateMode.MIXED, rho, _qubits_for_dim(rho.shape[0]))

    @property
    def dim(self) -> int:
        return 2 ** self.num_qubits

    def to_mixed(self) -> "QuantumState":
        if self.mode == StateMode.MIXED:
            return self
        return QuantumState(StateMode.MIXED, np.outer(self.data, self.data.conj()), self.num_qubits)

    def validation_errors(self, atol: float = 1e-10) -> list[str]:
        """Norm / trace / Hermiticity / positivity checks."""
        errors = []
        if self.mode == StateMode.PURE:
            norm = float(np.vdot(self.data, self.data).real)
            if abs(norm - 1) > atol:
                errors.append(f"Statevector norm {norm:.12f} != 1")
            return errors
        rho = self.data
        if np.max(np.abs(rho - rho.conj().T)) > atol:
            errors.append("Density matrix is not Hermitian")
        trace = float(np.trace(rho).real)
        if abs(trace - 1) > atol:
            errors.append(f"Density matrix trace {trace:.12f} != 1")
        smallest = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
        if smallest < -1e-9:
            errors.append(f"Density matrix has negative eigenvalue {smallest:.3e}")
        return errors


def _qubits_for_dim(dim: int) -> int:
    q = int(dim).bit_length() - 1
    if q < 1 or 2 ** q != dim:
        raise InvalidArgumentError(f"Dimension {dim} is not a power of two >= 2", "dim")
    return q


def init_zero(num_qubits: int, mode: StateMode = StateMode.PURE) -> QuantumState:
    """|0...0> as a statevector or density matrix."""
    limit = get_settings().max_qubits
    if num_qubits < 1:
        raise InvalidArgumentError(f"Need at least one qubit, got {num_qubits}", "num_qubits")
    if num_qubits > limit:
        raise ResourceLimitError(
            f"{num_qubits} qubits exceeds the simulation limit of {limit}", num_qubits, limit
        )
    dim = 2 ** num_qubits
    if mode == StateMode.PURE:
        data = np.zeros(dim, dtype=complex)
        data[0] = 1
    else:
        data = np.zeros((dim, dim), dtype=complex)
        data[0, 0] = 1
    return QuantumState(StateMode(mode), data, num_qubits)


# ============================================================================
# Local operator application
# ============================================================================

def _apply_local(data: np.ndarray, op: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """
    Left-multiply the columns of ``data`` (shape (2^n, m)) by ``op`` acting
    on ``qubits``. The op's local index is sum(bit(qubits[j]) << j).
    """
    k = len(qubits)
    m = data.shape[1]
    tensor = data.reshape((2,) * num_qubits + (m,))
    op_tensor = op.reshape((2,) * (2 * k))
    axes = [num_qubits - 1 - q for q in reversed(qubits)]
    out = np.tensordot(op_tensor, tensor, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(2 ** num_qubits, m)


def _check_qubits(state: QuantumState, qubits: Sequence[int]) -> None:
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise InvalidArgumentError(
                f"Qubit {q} out of range for a {state.num_qubits}-qubit state", "qubits"
            )


def embed_operator(op: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """Full-register matrix of a local operator."""
    return _apply_local(np.eye(2 ** num_qubits, dtype=complex), op, qubits, num_qubits)


def apply_unitary(state: QuantumState, op: np.ndarray, qubits: Sequence[int]) -> QuantumState:
    _check_qubits(state, qubits)
    n = state.num_qubits
    if state.mode == StateMode.PURE:
        data = _apply_local(state.data[:, None], op, qubits, n)[:, 0]
    else:
        half = _apply_local(state.data, op, qubits, n)
        data = _apply_local(half.conj().T, op, qubits, n).conj().T
    return QuantumState(state.mode, data, n)


def apply_gate(state: QuantumState, gate: Gate) -> QuantumState:
    """Unitary action of one gate."""
    return apply_unitary(state, gate.matrix(), gate.qubits)


def apply_circuit(state: QuantumState, gates: Sequence[Gate]) -> QuantumState:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def apply_channel(
    state: QuantumState,
    kraus: Sequence[np.ndarray],
    qubits: Sequence[int],
    validate: bool = True,
) -> QuantumState:
    """rho -> sum_i K_i rho K_i^dagger on the given qubits."""
    if state.mode != StateMode.MIXED:
        raise InvalidArgumentError("Channels act on density matrices only", "mode")
    _check_qubits(state, qubits)
    dim = 2 ** len(qubits)
    for k in kraus:
        if k.shape != (dim, dim):
            raise DimensionMismatchError(dim, k.shape[0], "Kraus operator dimension")
    if validate:
        errors = ResultValidator.validate_kraus(kraus)
        if errors:
            raise ChannelError("; ".join(errors))

    n = state.num_qubits
    total = np.zeros_like(state.data)
    for k in kraus:
        half = _apply_local(state.data, k, qubits, n)
        total += _apply_local(half.conj().T, k, qubits, n).conj().T
    return QuantumState(StateMode.MIXED, total, n)


def superoperator(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Row-major vectorized form: vec(K rho K^dagger) = (K kron conj(K)) vec(rho)."""
    return sum(np.kron(k, k.conj()) for k in kraus)


def apply_superoperator(state: QuantumState, superop: np.ndarray) -> QuantumState:
    if state.mode != StateMode.MIXED:
        raise InvalidArgumentError("Superoperators act on density matrices only", "mode")
    dim = state.dim
    if superop.shape != (dim * dim, dim * dim):
        raise DimensionMismatchError(dim * dim, superop.shape[0], "superoperator dimension")
    data = (superop @ state.data.reshape(-1)).reshape(dim, dim)
    return QuantumState(StateMode.MIXED, data, state.num_qubits)


# ============================================================================
# Readout
# ============================================================================

def probabilities(state: QuantumState) -> np.ndarray:
    """Computational-basis outcome distribution, clamped to [0, 1]."""
    if state.mode == StateMode.PURE:
        p = np.abs(state.data) ** 2
    else:
        p = np.real(np.diag(state.data)).copy()
    p = np.clip(p, 0.0, 1.0)
    total = p.sum()
    if abs(total - 1.0) > PROBABILITY_DRIFT:
        p = p / total
    return p


def format_ket(index: int, num_qubits: int) -> str:
    """Basis-state label with qubit q-1 leftmost, e.g. 7 on 4 qubits -> '|0111>'."""
    return f"|{index:0{num_qubits}b}>"
