"""
Engine Package

Numerical core of the VQE lab:
- pauli.py / hamiltonians.py: Pauli sums, builtin H2 Hamiltonians, tapering, grouping
- statevector.py: statevector and density-matrix simulation
- noise.py: calibrations, gate channels, readout confusion
- ansatz.py: Ry / RyRz circuits
- estimator.py: the energy objective
- spsa.py: the optimizer
- mitigation.py: readout error mitigation
"""

from engine.statevector import (
    Gate,
    GateKind,
    QuantumState,
    StateMode,
    apply_channel,
    apply_gate,
    init_zero,
    probabilities,
)

from engine.pauli import (
    MeasurementGroup,
    PauliString,
    PauliSum,
    Spectrum,
    diagonalize,
    exact_energy,
    group_by_basis,
    load_hamiltonian,
    parse_hamiltonian,
    format_hamiltonian,
    taper,
    taper_sectors,
)

from engine.hamiltonians import builtin_hamiltonian

from engine.noise import (
    ConfusionMatrix,
    GateChannel,
    NoiseModel,
    gate_channel,
    load_calibration,
    readout_confusion,
)

from engine.ansatz import build_circuit, random_parameters

from engine.estimator import (
    EnergyEstimator,
    EstimationResult,
    estimate_energy,
    post_rotate,
    sample_counts,
    term_expectation,
)

from engine.spsa import (
    OptimizationTrace,
    SpsaOptimizer,
    gradient_estimate,
    minimize,
    perturbation,
)

from engine.mitigation import (
    MitigationModel,
    MitigationResult,
    build_mitigation,
    mitigate,
)

__all__ = [
    # State engine
    "Gate",
    "GateKind",
    "QuantumState",
    "StateMode",
    "apply_channel",
    "apply_gate",
    "init_zero",
    "probabilities",

    # Pauli algebra
    "MeasurementGroup",
    "PauliString",
    "PauliSum",
    "Spectrum",
    "builtin_hamiltonian",
    "diagonalize",
    "exact_energy",
    "group_by_basis",
    "load_hamiltonian",
    "parse_hamiltonian",
    "format_hamiltonian",
    "taper",
    "taper_sectors",

    # Noise
    "ConfusionMatrix",
    "GateChannel",
    "NoiseModel",
    "gate_channel",
    "load_calibration",
    "readout_confusion",

    # Ansatz / estimator / optimizer
    "build_circuit",
    "random_parameters",
    "EnergyEstimator",
    "EstimationResult",
    "estimate_energy",
    "post_rotate",
    "sample_counts",
    "term_expectation",
    "OptimizationTrace",
    "SpsaOptimizer",
    "gradient_estimate",
    "minimize",
    "perturbation",

    # Mitigation
    "MitigationModel",
    "MitigationResult",
    "build_mitigation",
    "mitigate",
]
