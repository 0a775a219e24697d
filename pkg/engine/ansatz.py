"""
Ansatz - hardware-inspired Ry / RyRz circuits with linear entanglement.

A depth-d circuit is d+1 rotation layers with a CNOT chain
(0->1, 1->2, ..., q-2->q-1) between consecutive layers. Parameters are
consumed layer-major, qubit-minor, Ry before Rz on each qubit.
"""

from typing import Sequence

import numpy as np

from core.errors import InvalidArgumentError
from core.models import AnsatzForm, AnsatzSpec
from engine.statevector import Gate


def entangling_layer(num_qubits: int) -> list[Gate]:
    return [Gate.cnot(q, q + 1) for q in range(num_qubits - 1)]


def build_circuit(spec: AnsatzSpec, theta: Sequence[float]) -> list[Gate]:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != spec.parameter_count:
        raise InvalidArgumentError(
            f"{spec.form.value} ansatz on {spec.num_qubits} qubits at depth {spec.depth} takes "
            f"{spec.parameter_count} parameters, got {theta.shape[0]}",
            "theta",
        )

    gates: list[Gate] = []
    it = iter(theta)
    for layer in range(spec.depth + 1):
        if layer > 0:
            gates.extend(entangling_layer(spec.num_qubits))
        for q in range(spec.num_qubits):
            gates.append(Gate.ry(q, next(it)))
            if spec.form == AnsatzForm.RYRZ:
                gates.append(Gate.rz(q, next(it)))
    return gates


def random_parameters(spec: AnsatzSpec, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. uniform angles on [-pi, pi]."""
    return rng.uniform(-np.pi, np.pi, size=spec.parameter_count)
