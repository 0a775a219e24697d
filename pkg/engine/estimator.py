"""
Energy Estimator - the VQE objective.

For each measurement group the ansatz state is post-rotated into the
group's basis, its outcome probabilities pass through readout confusion,
then are either used exactly or sampled with a multinomial draw, and the
parity of each member term is averaged into the energy.

X-basis qubits are rotated with Ry(-pi/2): under the Ry matrix used here
Ry(-pi/2)|+> = |0>, so <X> equals the Z-parity of the rotated state.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from core.errors import InvalidArgumentError
from core.logging import get_engine_logger
from core.models import AnsatzSpec, NoiseConfig, ShotMode, ShotPolicy
from core.validator import ResultValidator
from engine.ansatz import build_circuit
from engine.noise import NoiseModel
from engine.pauli import MeasurementGroup, PauliString, PauliSum, group_by_basis
from engine.statevector import (
    Gate,
    QuantumState,
    StateMode,
    apply_circuit,
    apply_gate,
    init_zero,
    probabilities,
)

if TYPE_CHECKING:
    from engine.mitigation import MitigationModel

logger = get_engine_logger("estimator")

POST_ROTATION_ANGLE = -np.pi / 2


@dataclass(frozen=True, eq=False)
class EstimationResult:
    energy: float
    per_group_probabilities: tuple[tuple[MeasurementGroup, np.ndarray], ...]
    shots_used: int
    warnings: tuple[str, ...] = ()


# ============================================================================
# Building blocks
# ============================================================================

def post_rotation_gates(group: MeasurementGroup) -> list[Gate]:
    return [Gate.ry(q, POST_ROTATION_ANGLE) for q in group.x_qubits]


def post_rotate(state: QuantumState, group: MeasurementGroup, noise: Optional[NoiseModel] = None) -> QuantumState:
    """Rotate X-basis qubits into the Z basis; Z-basis qubits are untouched."""
    if len(group.basis) != state.num_qubits:
        raise InvalidArgumentError(
            f"Group basis covers {len(group.basis)} qubits, state has {state.num_qubits}", "group"
        )
    for gate in post_rotation_gates(group):
        state = noise.apply_gate(state, gate) if noise is not None else apply_gate(state, gate)
    return state


def sample_counts(probs: Sequence[float], shots: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial shot counts summing to ``shots``."""
    if shots < 1:
        raise InvalidArgumentError(f"shots must be >= 1, got {shots}", "shots")
    p = np.asarray(probs, dtype=float)
    errors = ResultValidator.validate_probabilities(p)
    if errors:
        raise InvalidArgumentError("Invalid probability vector: " + "; ".join(errors), "probs")
    p = np.clip(p, 0.0, None)
    return rng.multinomial(shots, p / p.sum())


@lru_cache(maxsize=256)
def _parity_signs(mask: int, dim: int) -> np.ndarray:
    signs = np.array([1 - 2 * (bin(i & mask).count("1") & 1) for i in range(dim)], dtype=float)
    signs.setflags(write=False)
    return signs


def _check_membership(term: PauliString, group: MeasurementGroup) -> None:
    if term.num_qubits != len(group.basis):
        raise InvalidArgumentError(
            f"Term '{term.label}' and group '{group.basis_label}' differ in size", "term"
        )
    for op, basis in zip(term.ops, group.basis):
        if op == "Y" or (op == "X" and basis != "X") or (op == "Z" and basis != "Z"):
            raise InvalidArgumentError(
                f"Term '{term.label}' is not measurable in basis '{group.basis_label}'", "term"
            )


def term_expectation(freqs: Sequence[float], term: PauliString, group: MeasurementGroup) -> float:
    """Parity estimator over counts or probabilities of the group's circuit."""
    _check_membership(term, group)
    f = np.asarray(freqs, dtype=float)
    total = f.sum()
    if total <= 0:
        raise InvalidArgumentError("Counts are empty", "freqs")
    mask = sum(1 << k for k in term.support)
    return float(_parity_signs(mask, f.shape[0]) @ (f / total))


# ============================================================================
# Estimator
# ============================================================================

class EnergyEstimator:
    """
    Reusable objective for one (Hamiltonian, ansatz, noise, shot policy).

    Grouping, parity tables and noise superoperators are computed once;
    each call only rebuilds the parametrized state.
    """

    def __init__(self, h: PauliSum, spec: AnsatzSpec, noise: NoiseConfig, policy: ShotPolicy):
        if spec.num_qubits != h.num_qubits:
            raise InvalidArgumentError(
                f"Ansatz has {spec.num_qubits} qubits, Hamiltonian has {h.num_qubits}", "ansatz"
            )
        self.h = h
        self.spec = spec
        self.policy = policy
        self.noise = NoiseModel(noise, h.num_qubits)
        self.groups = group_by_basis(h)
        self.identity_coefficient = h.identity_coefficient

        dim = 2 ** h.num_qubits
        self._tables = []
        for group in self.groups:
            coeffs = np.array([h.terms[i][0] for i in group.member_terms])
            signs = np.stack([
                _parity_signs(sum(1 << k for k in h.terms[i][1].support), dim)
                for i in group.member_terms
            ])
            self._tables.append((coeffs, signs))

    @property
    def shots_per_evaluation(self) -> int:
        if self.policy.mode == ShotMode.EXACT:
            return 0
        return len(self.groups) * self.policy.shots

    def prepare(self, theta: Sequence[float]) -> QuantumState:
        """Ansatz state; a density matrix only when gate noise is on."""
        gates = build_circuit(self.spec, theta)
        if not self.noise.gates_enabled:
            return apply_circuit(init_zero(self.spec.num_qubits, StateMode.PURE), gates)
        state = init_zero(self.spec.num_qubits, StateMode.MIXED)
        for gate in gates:
            state = self.noise.apply_gate(state, gate)
        return state

    def readout_probabilities(self, state: QuantumState) -> list[np.ndarray]:
        """Exact per-group outcome distributions after readout confusion."""
        noise = self.noise if self.noise.gates_enabled else None
        return [
            self.noise.apply_readout(probabilities(post_rotate(state, group, noise)))
            for group in self.groups
        ]

    def energy_from_probabilities(self, group_probs: Sequence[np.ndarray]) -> float:
        energy = self.identity_coefficient
        for (coeffs, signs), p in zip(self._tables, group_probs):
            energy += float(coeffs @ (signs @ p))
        return energy

    def __call__(
        self,
        theta: Sequence[float],
        rng: Optional[np.random.Generator] = None,
        mitigation: Optional["MitigationModel"] = None,
    ) -> EstimationResult:
        state = self.prepare(theta)
        exact = self.readout_probabilities(state)

        observed = []
        if self.policy.mode == ShotMode.SAMPLED:
            if rng is None:
                raise InvalidArgumentError("Sampled policy needs a random generator", "rng")
            for p in exact:
                counts = sample_counts(p, self.policy.shots, rng)
                observed.append(counts / self.policy.shots)
        else:
            observed = exact

        warnings = []
        if mitigation is not None:
            corrected = []
            for p in observed:
                result = mitigation.correct(p)
                corrected.append(result.probabilities)
                if result.warning:
                    warnings.append(result.warning)
            observed = corrected

        return EstimationResult(
            energy=self.energy_from_probabilities(observed),
            per_group_probabilities=tuple(zip(self.groups, observed)),
            shots_used=self.shots_per_evaluation,
            warnings=tuple(dict.fromkeys(warnings)),
        )


def estimate_energy(
    h: PauliSum,
    spec: AnsatzSpec,
    theta: Sequence[float],
    noise: NoiseConfig,
    policy: ShotPolicy,
    rng: Optional[np.random.Generator] = None,
    mitigation: Optional["MitigationModel"] = None,
) -> EstimationResult:
    """One-off energy estimate; build an EnergyEstimator to evaluate repeatedly."""
    return EnergyEstimator(h, spec, noise, policy)(theta, rng, mitigation)
