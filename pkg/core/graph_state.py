"""
LangGraph State Definition

Defines the TypedDict state that flows through the trial graph.
Every node reads from it and returns a partial update.
"""

import operator
from typing import Any, Dict, List, Optional, TypedDict

from typing_extensions import Annotated


class TrialState(TypedDict):
    """
    State object that flows through one VQE trial.

    Numerical objects (Hamiltonian, rng streams) are passed by reference;
    the graph never serializes them.
    """

    # ==================== INPUTS ====================
    trial_index: int
    derived_seed: int
    context: Any                    # harness.sweep.ExperimentContext
    streams: Dict[str, Any]         # named numpy Generators for this trial

    # ==================== OPTIMIZATION ====================
    mitigation: Any                 # engine.mitigation.MitigationModel or None
    initial_parameters: Optional[List[float]]
    final_parameters: Optional[List[float]]
    energy_trace: Optional[List[float]]
    calibration_steps: int
    objective_evaluations: int
    circuit_executions: int

    # ==================== READOUT ====================
    final_energy: Optional[float]
    probabilities: Optional[List[Dict[str, Any]]]
    recalculated_energy: Optional[float]

    # ==================== STATUS ====================
    record: Optional[Dict[str, Any]]
    warnings: Annotated[List[str], operator.add]
    error: Optional[str]
    execution_log: Annotated[List[str], operator.add]
