"""
Trial Graph Nodes

Each node reads the TrialState, does one stage of a VQE trial and returns
a partial update. Failures never propagate: GracefulDegradation turns an
exception into an ``error`` entry and the graph routes straight to
finalize, which emits a failed TrialRecord.
"""

from typing import Any, Dict

import numpy as np

from core.errors import GracefulDegradation, OptimizationAborted
from core.graph_state import TrialState
from core.models import GroupProbabilities, RecalcMode, TrialRecord, TrialStatus
from core.validator import ResultValidator
from engine.ansatz import build_circuit, random_parameters
from engine.mitigation import build_mitigation
from engine.pauli import exact_energy
from engine.spsa import SpsaOptimizer
from engine.statevector import StateMode, apply_circuit, init_zero


def _node_failure(name: str):
    """Fallback builder: record the error and stop the trial."""
    def fallback(error: Exception, state: TrialState) -> Dict[str, Any]:
        update: Dict[str, Any] = {
            "error": f"{name}: {error}",
            "execution_log": [f"[{name.upper()}] failed: {error}"],
        }
        if isinstance(error, OptimizationAborted) and error.partial_trace is not None:
            trace = error.partial_trace
            update["energy_trace"] = trace.energy_trace
            update["objective_evaluations"] = trace.evaluations
            update["calibration_steps"] = trace.calibration_steps
        return update
    return fallback


# ==================== INIT PARAMETERS NODE ====================

@GracefulDegradation(fallback_func=_node_failure("init_parameters"))
def init_parameters_node(state: TrialState) -> Dict[str, Any]:
    """Draw theta_0 and, when enabled, measure the readout calibration matrix."""
    ctx = state["context"]
    config = ctx.config
    theta0 = random_parameters(config.ansatz, state["streams"]["init"])
    log = [f"[INIT_PARAMETERS] trial {state['trial_index']}: {theta0.shape[0]} parameters"]

    mitigation = None
    executions = state.get("circuit_executions", 0)
    if config.mitigation.enabled:
        shots = ctx.mitigation_shots
        mitigation = build_mitigation(config.noise, config.ansatz.num_qubits, shots,
                                      state["streams"]["mitigation"])
        executions += (2 ** config.ansatz.num_qubits) * shots
        log.append(f"  calibration matrix from {shots} shots/column, "
                   f"condition number {mitigation.condition_number:.3f}")

    return {
        "initial_parameters": theta0.tolist(),
        "mitigation": mitigation,
        "circuit_executions": executions,
        "execution_log": log,
    }


# ==================== OPTIMIZE NODE ====================

@GracefulDegradation(fallback_func=_node_failure("optimize"))
def optimize_node(state: TrialState) -> Dict[str, Any]:
    """SPSA over the estimator, with mitigation unless it is final-only."""
    ctx = state["context"]
    config = ctx.config
    estimator = ctx.estimator
    shots_rng = state["streams"]["shots"]
    mitigation = state.get("mitigation")
    if config.mitigation.final_only:
        mitigation = None

    def objective(theta: np.ndarray) -> float:
        return estimator(theta, shots_rng, mitigation).energy

    trace = SpsaOptimizer(config.spsa).minimize(
        objective, state["initial_parameters"], state["streams"]["spsa"]
    )
    executions = state.get("circuit_executions", 0) + trace.evaluations * estimator.shots_per_evaluation

    return {
        "final_parameters": trace.final_theta.tolist(),
        "energy_trace": trace.energy_trace,
        "calibration_steps": trace.calibration_steps,
        "objective_evaluations": trace.evaluations,
        "circuit_executions": executions,
        "execution_log": [
            f"[OPTIMIZE] {trace.evaluations} objective evaluations "
            f"({trace.calibration_steps} calibration steps, a={trace.a:.4f})"
        ],
    }


# ==================== FINAL READOUT NODE ====================

@GracefulDegradation(fallback_func=_node_failure("final_readout"))
def final_readout_node(state: TrialState) -> Dict[str, Any]:
    """Measure the optimized parameters once more with the trial's shot policy."""
    ctx = state["context"]
    estimator = ctx.estimator
    result = estimator(state["final_parameters"], state["streams"]["shots"], state.get("mitigation"))

    probabilities = [
        GroupProbabilities(circuit=i, basis=group.basis_label, probabilities=p.tolist()).model_dump()
        for i, (group, p) in enumerate(result.per_group_probabilities)
    ]
    return {
        "final_energy": result.energy,
        "probabilities": probabilities,
        "objective_evaluations": state.get("objective_evaluations", 0) + 1,
        "circuit_executions": state.get("circuit_executions", 0) + result.shots_used,
        "warnings": list(result.warnings),
        "execution_log": [f"[FINAL_READOUT] energy {result.energy:.6f}"],
    }


# ==================== RECALCULATE NODE ====================

@GracefulDegradation(fallback_func=_node_failure("recalculate"))
def recalculate_node(state: TrialState) -> Dict[str, Any]:
    """Exact statevector energy, or a precise many-shot readout under the configured noise."""
    ctx = state["context"]
    recalc = ctx.config.recalc
    theta = state["final_parameters"]

    if recalc.mode == RecalcMode.NONE:
        return {"execution_log": ["[RECALCULATE] skipped"]}

    if recalc.mode == RecalcMode.EXACT:
        psi = apply_circuit(init_zero(ctx.config.ansatz.num_qubits, StateMode.PURE),
                            build_circuit(ctx.config.ansatz, theta))
        energy = exact_energy(ctx.hamiltonian, psi)
        return {
            "recalculated_energy": energy,
            "execution_log": [f"[RECALCULATE] exact energy {energy:.6f}"],
        }

    result = ctx.recalc_estimator(theta, state["streams"]["shots"], state.get("mitigation"))
    return {
        "recalculated_energy": result.energy,
        "circuit_executions": state.get("circuit_executions", 0) + result.shots_used,
        "warnings": list(result.warnings),
        "execution_log": [f"[RECALCULATE] {recalc.shots}-shot energy {result.energy:.6f}"],
    }


# ==================== FINALIZE NODE ====================

def finalize_node(state: TrialState) -> Dict[str, Any]:
    """Assemble the TrialRecord; failed trials keep whatever partial data exists."""
    ctx = state["context"]
    error = state.get("error")

    record = TrialRecord(
        trial_index=state["trial_index"],
        seed=state["derived_seed"],
        status=TrialStatus.FAILED if error else TrialStatus.COMPLETED,
        initial_parameters=state.get("initial_parameters") or [],
        final_parameters=state.get("final_parameters") or [],
        final_energy=None if error else state.get("final_energy"),
        energy_trace=state.get("energy_trace") or [],
        probabilities=state.get("probabilities") or [],
        recalculated_energy=None if error else state.get("recalculated_energy"),
        calibration_steps=state.get("calibration_steps", 0),
        objective_evaluations=state.get("objective_evaluations", 0),
        circuit_executions=state.get("circuit_executions", 0),
        error=error,
        warnings=list(state.get("warnings") or []),
    )

    problems = ResultValidator.validate_trial(
        record,
        ground_energy=ctx.ground_energy,
        recalc_mode=ctx.config.recalc.mode,
        expected_evaluations=ctx.expected_evaluations,
    )
    if problems:
        record = record.model_copy(update={"warnings": record.warnings + problems})

    status = "FAILED" if error else "COMPLETED"
    return {
        "record": record.model_dump(mode="json"),
        "execution_log": [f"[FINALIZE] trial {state['trial_index']} {status}"],
    }
