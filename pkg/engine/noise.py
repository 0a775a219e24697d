"""
Noise Model - device calibration loading, gate channels and readout
confusion.

A noisy gate is the ideal unitary followed by depolarizing noise on the
gate's qubits and then thermal relaxation (amplitude damping, then phase
damping) on each of them for the gate duration. Readout error is a
column-stochastic confusion matrix acting on exact outcome probabilities.
"""

import itertools
import json
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from core.errors import CalibrationError, CalibrationSchemaError, ChannelError, DataLoadError, DimensionMismatchError
from core.logging import get_engine_logger
from core.models import DeviceCalibration, NoiseConfig
from core.validator import ResultValidator
from engine.statevector import (
    Gate,
    GateKind,
    QuantumState,
    apply_channel,
    apply_gate,
    apply_superoperator,
    embed_operator,
    superoperator,
)

logger = get_engine_logger("noise")

REQUIRED_GATE_KINDS = tuple(k.value for k in GateKind)

_PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


# ============================================================================
# Kraus sets
# ============================================================================

def depolarizing_kraus(p: float, num_qubits: int = 1) -> list[np.ndarray]:
    """
    n-qubit depolarizing channel: with probability p the state is replaced
    by the maximally mixed state.
    """
    if not 0 <= p <= 1:
        raise ChannelError(f"Depolarizing probability {p} outside [0, 1]")
    n_paulis = 4 ** num_qubits
    identity_weight = np.sqrt(max(0.0, 1.0 - p * (n_paulis - 1) / n_paulis))
    other_weight = np.sqrt(max(0.0, p / n_paulis))

    kraus = []
    for combo in itertools.product(range(4), repeat=num_qubits):
        op = reduce(np.kron, (_PAULIS[i] for i in combo))
        weight = identity_weight if not any(combo) else other_weight
        if weight > 0:
            kraus.append(weight * op)
    return kraus


def amplitude_damping_kraus(gamma: float) -> list[np.ndarray]:
    if not 0 <= gamma <= 1:
        raise ChannelError(f"Damping parameter {gamma} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def phase_damping_kraus(lam: float) -> list[np.ndarray]:
    """Coherences shrink by sqrt(1 - lam); populations untouched."""
    if not 0 <= lam <= 1:
        raise ChannelError(f"Dephasing parameter {lam} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - lam)]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [0.0, np.sqrt(lam)]], dtype=complex)
    return [k0, k1]


def thermal_relaxation_parameters(t1_us: float, t2_us: float, duration_ns: float) -> tuple[float, float]:
    """
    (gamma, lam) for a gate of the given duration.

    gamma = 1 - exp(-t/T1); pure dephasing 1/Tphi = 1/T2 - 1/(2 T1)
    gives lam = 1 - exp(-2t/Tphi), so the total coherence decay is exp(-t/T2).
    """
    if t2_us > 2 * t1_us:
        raise CalibrationError(f"t2_us={t2_us} exceeds 2*t1_us={2 * t1_us}", "t2_us")
    t_us = duration_ns / 1000.0
    gamma = 1.0 - np.exp(-t_us / t1_us)
    dephasing_rate = max(0.0, 1.0 / t2_us - 1.0 / (2.0 * t1_us))
    lam = 1.0 - np.exp(-2.0 * t_us * dephasing_rate)
    return float(gamma), float(lam)


# ============================================================================
# Channels
# ============================================================================

@dataclass(frozen=True, eq=False)
class KrausStep:
    """One Kraus set acting on absolute register qubits."""
    name: str
    kraus: tuple[np.ndarray, ...]
    qubits: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class GateChannel:
    """Noise that follows one gate, as an ordered list of Kraus steps."""
    gate: Gate
    steps: tuple[KrausStep, ...]

    @property
    def is_identity(self) -> bool:
        return not self.steps

    def apply(self, state: QuantumState) -> QuantumState:
        for step in self.steps:
            state = apply_channel(state, step.kraus, step.qubits, validate=False)
        return state

    def kraus(self) -> list[np.ndarray]:
        """
        Flattened Kraus list of the whole composition, on the gate's qubits
        (local index sum(bit(gate.qubits[j]) << j)).
        """
        local = {q: j for j, q in enumerate(self.gate.qubits)}
        n = len(self.gate.qubits)
        ops = [np.eye(2 ** n, dtype=complex)]
        for step in self.steps:
            lifted = [embed_operator(k, [local[q] for q in step.qubits], n) for k in step.kraus]
            ops = [k @ prev for k in lifted for prev in ops]
        return ops

    def superoperator(self, num_qubits: int) -> np.ndarray:
        """Full-register superoperator of the composed steps."""
        dim = 2 ** num_qubits
        total = np.eye(dim * dim, dtype=complex)
        for step in self.steps:
            full = [embed_operator(k, step.qubits, num_qubits) for k in step.kraus]
            total = superoperator(full) @ total
        return total


def gate_channel(cal: DeviceCalibration, gate: Gate) -> GateChannel:
    """Depolarizing noise on the gate's qubits, then per-qubit thermal relaxation."""
    entry = cal.gate(gate.kind.value)
    if entry is None:
        raise ChannelError(f"Calibration '{cal.backend}' has no entry for gate kind '{gate.kind.value}'",
                           gate=gate.kind.value)
    for q in gate.qubits:
        if q >= cal.num_qubits:
            raise ChannelError(
                f"Gate on qubit {q} but calibration covers {cal.num_qubits} qubits", gate=gate.kind.value
            )

    steps = []
    if entry.p_dep > 0:
        steps.append(KrausStep("depolarizing", tuple(depolarizing_kraus(entry.p_dep, len(gate.qubits))),
                               gate.qubits))
    if entry.duration_ns > 0:
        for q in gate.qubits:
            qc = cal.qubits[q]
            gamma, lam = thermal_relaxation_parameters(qc.t1_us, qc.t2_us, entry.duration_ns)
            if gamma > 0:
                steps.append(KrausStep("amplitude_damping", tuple(amplitude_damping_kraus(gamma)), (q,)))
            if lam > 0:
                steps.append(KrausStep("phase_damping", tuple(phase_damping_kraus(lam)), (q,)))
    return GateChannel(gate=gate, steps=tuple(steps))


# ============================================================================
# Readout
# ============================================================================

@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Entry [i, j] = P(read i | true j)."""
    matrix: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    def apply(self, probs: np.ndarray) -> np.ndarray:
        probs = np.asarray(probs, dtype=float)
        if probs.shape[0] != self.matrix.shape[1]:
            raise DimensionMismatchError(self.matrix.shape[1], probs.shape[0], "probability vector length")
        out = np.clip(self.matrix @ probs, 0.0, 1.0)
        return out / out.sum()

    def validation_errors(self, atol: float = 1e-10) -> list[str]:
        return ResultValidator.validate_column_stochastic(self.matrix, atol)


def qubit_confusion(p01: float, p10: float) -> np.ndarray:
    return np.array([[1.0 - p01, p10], [p01, 1.0 - p10]])


def readout_confusion(cal: DeviceCalibration, num_qubits: int) -> ConfusionMatrix:
    """Tensor product of the per-qubit 2x2 confusion matrices of qubits 0..q-1."""
    if num_qubits > cal.num_qubits:
        raise CalibrationError(
            f"Calibration covers {cal.num_qubits} qubits, {num_qubits} requested", "qubits"
        )
    per_qubit = [qubit_confusion(cal.qubits[q].p01, cal.qubits[q].p10) for q in range(num_qubits)]
    return ConfusionMatrix(reduce(np.kron, reversed(per_qubit)))


def identity_confusion(num_qubits: int) -> ConfusionMatrix:
    return ConfusionMatrix(np.eye(2 ** num_qubits))


# ============================================================================
# Calibration files
# ============================================================================

def _describe_location(raw: dict, loc: tuple) -> str:
    parts = []
    for i, item in enumerate(loc):
        if isinstance(item, int):
            parts[-1] = f"{parts[-1]}[{item}]"
            if loc[:i] == ("gates",):
                kind = None
                gates = raw.get("gates")
                if isinstance(gates, list) and item < len(gates) and isinstance(gates[item], dict):
                    kind = gates[item].get("kind")
                if kind:
                    parts[-1] += f"(kind={kind})"
        else:
            parts.append(str(item))
    return ".".join(parts) or "<root>"


def parse_calibration(raw: dict, source: str = "<memory>") -> DeviceCalibration:
    """Validate a calibration mapping, naming the offending gate or field on failure."""
    try:
        return DeviceCalibration.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = _describe_location(raw, tuple(first["loc"]))
        message = f"{source}: {where}: {first['msg']}"
        if first["type"] == "missing":
            raise CalibrationSchemaError(message, field=where)
        raise CalibrationError(message, field=where)


def load_calibration(path: Union[str, Path]) -> DeviceCalibration:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataLoadError(str(path), str(e))
    except json.JSONDecodeError as e:
        raise DataLoadError(str(path), f"invalid JSON: {e}")
    if not isinstance(raw, dict):
        raise CalibrationSchemaError(f"{path}: top level must be an object", field="<root>")

    cal = parse_calibration(raw, str(path))
    logger.info(
        f"Loaded calibration '{cal.backend}' ({cal.date}) with {cal.num_qubits} qubits"
        + (" [synthetic]" if cal.synthetic else "")
    )
    return cal


# ============================================================================
# Noise model
# ============================================================================

class NoiseModel:
    """
    Error-class-aware view of a calibration for a fixed register size.

    Gate noise superoperators are built once per (gate kind, qubits) and
    reused; gate angles never enter the noise. Registers wider than
    ``SUPEROPERATOR_MAX_QUBITS`` apply the Kraus steps one by one instead.
    """

    SUPEROPERATOR_MAX_QUBITS = 5

    def __init__(self, config: NoiseConfig, num_qubits: int):
        self.config = config
        self.num_qubits = num_qubits
        self.gates_enabled = config.gates_enabled
        self.readout_enabled = config.readout_enabled
        self._channels: dict[tuple[str, tuple[int, ...]], GateChannel] = {}
        self._superops: dict[tuple[str, tuple[int, ...]], Optional[np.ndarray]] = {}
        self._confusion: Optional[ConfusionMatrix] = None

        cal = config.calibration
        if (self.gates_enabled or self.readout_enabled) and cal is not None:
            if cal.num_qubits < num_qubits:
                raise CalibrationError(
                    f"Calibration covers {cal.num_qubits} qubits, circuit needs {num_qubits}", "qubits"
                )
        if self.gates_enabled and cal is not None:
            missing = [k for k in REQUIRED_GATE_KINDS if cal.gate(k) is None]
            if missing:
                raise CalibrationSchemaError(
                    f"Calibration '{cal.backend}' lacks gate entries {missing}", field=f"gates({missing[0]})"
                )

    @property
    def is_noiseless(self) -> bool:
        return not (self.gates_enabled or self.readout_enabled)

    @property
    def uses_superoperators(self) -> bool:
        return self.num_qubits <= self.SUPEROPERATOR_MAX_QUBITS

    def channel(self, gate: Gate) -> GateChannel:
        """Checked, cached noise channel of ``gate``."""
        key = (gate.kind.value, gate.qubits)
        if key not in self._channels:
            channel = gate_channel(self.config.calibration, gate)
            errors = ResultValidator.validate_kraus(channel.kraus())
            if errors:
                raise ChannelError(f"Noise after {gate.kind.value} on {list(gate.qubits)}: {'; '.join(errors)}",
                                   gate=gate.kind.value)
            self._channels[key] = channel
        return self._channels[key]

    def noise_superoperator(self, gate: Gate) -> Optional[np.ndarray]:
        """
        Cached full-register superoperator of the gate's noise; None when
        noiseless or when the register is too wide for one.
        """
        if not self.gates_enabled or not self.uses_superoperators:
            return None
        key = (gate.kind.value, gate.qubits)
        if key not in self._superops:
            channel = self.channel(gate)
            self._superops[key] = None if channel.is_identity else channel.superoperator(self.num_qubits)
        return self._superops[key]

    def apply_gate(self, state: QuantumState, gate: Gate) -> QuantumState:
        """Ideal gate, then its noise when gate errors are enabled."""
        state = apply_gate(state, gate)
        if not self.gates_enabled:
            return state
        if not self.uses_superoperators:
            return self.channel(gate).apply(state)
        superop = self.noise_superoperator(gate)
        if superop is not None:
            state = apply_superoperator(state, superop)
        return state

    @property
    def confusion(self) -> ConfusionMatrix:
        if self._confusion is None:
            if self.readout_enabled:
                self._confusion = readout_confusion(self.config.calibration, self.num_qubits)
            else:
                self._confusion = identity_confusion(self.num_qubits)
        return self._confusion

    def apply_readout(self, probs: np.ndarray) -> np.ndarray:
        if not self.readout_enabled:
            return probs
        return self.confusion.apply(probs)
