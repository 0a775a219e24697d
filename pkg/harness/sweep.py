"""
Sweep Runner

Seeds, per-experiment context and the trial/sweep entry points.

Trial seeds come from numpy's SeedSequence keyed by (master seed, trial
index), so a trial's randomness does not depend on which worker runs it
or in what order. Each trial splits its sequence into four independent
streams: parameter init, SPSA perturbations, shot sampling and the
mitigation calibration.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from core.config import Settings, configure, get_settings
from core.errors import InvalidArgumentError, ResourceLimitError
from core.graph_state import TrialState
from core.logging import LabLogger, StepTracker, get_harness_logger, log_step
from core.models import ExperimentConfig, HamiltonianSource, RecalcMode, ShotPolicy, TrialRecord
from engine.estimator import EnergyEstimator
from engine.hamiltonians import builtin_hamiltonian
from engine.pauli import PauliSum, diagonalize, load_hamiltonian
from harness.graph import get_trial_graph

logger = get_harness_logger("sweep")

STREAM_NAMES = ("init", "spsa", "shots", "mitigation")


# ============================================================================
# Seeds
# ============================================================================

def derive_seed(master_seed: int, trial_index: int) -> tuple[int, np.random.SeedSequence]:
    """64-bit trial seed plus the SeedSequence it was generated from."""
    if master_seed < 0 or trial_index < 0:
        raise InvalidArgumentError("Seeds and trial indices must be non-negative", "seed")
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0]), ss


def trial_streams(ss: np.random.SeedSequence) -> dict[str, np.random.Generator]:
    children = ss.spawn(len(STREAM_NAMES))
    return {name: np.random.default_rng(child) for name, child in zip(STREAM_NAMES, children)}


# ============================================================================
# Experiment context
# ============================================================================

def resolve_hamiltonian(source: HamiltonianSource) -> PauliSum:
    if source.file is not None:
        return load_hamiltonian(source.file)
    return builtin_hamiltonian(source.qubits)


class ExperimentContext:
    """
    Everything shared by the trials of one experiment: the Hamiltonian,
    its ground energy and the prebuilt estimators.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.hamiltonian = resolve_hamiltonian(config.hamiltonian)

        try:
            self.ground_energy: Optional[float] = diagonalize(self.hamiltonian).ground_energy
        except ResourceLimitError:
            self.ground_energy = None

        self.estimator = EnergyEstimator(self.hamiltonian, config.ansatz, config.noise, config.shots)
        self.recalc_estimator: Optional[EnergyEstimator] = None
        if config.recalc.mode == RecalcMode.SHOTS:
            self.recalc_estimator = EnergyEstimator(
                self.hamiltonian, config.ansatz, config.noise, ShotPolicy.sampled(config.recalc.shots)
            )

        self.mitigation_shots = config.mitigation.shots or config.shots.shots
        # calibration pairs, maxiter pairs, one final readout
        self.expected_evaluations = 2 * config.spsa.effective_calibration_steps + 2 * config.spsa.maxiter + 1


@lru_cache(maxsize=4)
def _cached_context(config_json: str) -> ExperimentContext:
    return ExperimentContext(ExperimentConfig.model_validate_json(config_json))


def experiment_context(config: ExperimentConfig) -> ExperimentContext:
    """Context for ``config``, built once per process."""
    return _cached_context(config.model_dump_json())


# ============================================================================
# Trials
# ============================================================================

def _initial_state(context: ExperimentContext, trial_index: int) -> TrialState:
    seed, ss = derive_seed(context.config.seed, trial_index)
    return {
        "trial_index": trial_index,
        "derived_seed": seed,
        "context": context,
        "streams": trial_streams(ss),
        "mitigation": None,
        "initial_parameters": None,
        "final_parameters": None,
        "energy_trace": None,
        "calibration_steps": 0,
        "objective_evaluations": 0,
        "circuit_executions": 0,
        "final_energy": None,
        "probabilities": None,
        "recalculated_energy": None,
        "record": None,
        "warnings": [],
        "error": None,
        "execution_log": [],
    }


def run_trial(config: ExperimentConfig, trial_index: int,
              context: Optional[ExperimentContext] = None) -> TrialRecord:
    """
    Run one seeded VQE trial through the trial graph.

    Component failures do not raise: they come back as a record with
    status ``failed`` and the error message.
    """
    context = context or experiment_context(config)
    final = get_trial_graph().invoke(_initial_state(context, trial_index))

    for line in final.get("execution_log", []):
        logger.debug(line)
    record = TrialRecord.model_validate(final["record"])
    for warning in record.warnings:
        logger.warning(f"trial {trial_index}: {warning}")
    return record


def _init_worker(settings_json: str) -> None:
    configure(Settings.model_validate(json.loads(settings_json)))


def _trial_worker(task: tuple[str, int]) -> dict:
    config_json, trial_index = task
    config = ExperimentConfig.model_validate_json(config_json)
    return run_trial(config, trial_index).model_dump(mode="json")


@log_step("sweep")
def run_sweep(config: ExperimentConfig, threads: Optional[int] = None,
              indices: Optional[Sequence[int]] = None) -> list[TrialRecord]:
    """
    Run ``config.trials`` independent trials, ordered by trial index.

    ``threads`` > 1 uses a process pool; the records are identical to a
    sequential run because every trial draws only from its own streams.
    """
    threads = threads or get_settings().threads
    if threads < 1:
        raise InvalidArgumentError(f"threads must be >= 1, got {threads}", "threads")
    indices = list(range(config.trials)) if indices is None else list(indices)

    tracker = StepTracker()
    tracker.start_step("context")
    context = experiment_context(config)
    tracker.complete_step()

    tracker.start_step("trials")
    if threads == 1 or len(indices) <= 1:
        records = [run_trial(config, i, context) for i in indices]
    else:
        config_json = config.model_dump_json()
        tasks = [(config_json, i) for i in indices]
        with ProcessPoolExecutor(
            max_workers=min(threads, len(indices)),
            initializer=_init_worker,
            initargs=(get_settings().model_dump_json(),),
        ) as executor:
            records = [TrialRecord.model_validate(r) for r in executor.map(_trial_worker, tasks)]
    records.sort(key=lambda r: r.trial_index)

    failed = sum(1 for r in records if not r.succeeded)
    if failed:
        tracker.fail_step(f"{failed} of {len(records)} trials failed")
    else:
        tracker.complete_step()

    summary = tracker.get_summary()
    LabLogger.log_with_context(
        logger, logging.INFO,
        f"Sweep finished: {len(records) - failed} completed, {failed} failed",
        {"threads": threads, "seconds": summary["seconds"],
         "steps": {s["name"]: s["status"] for s in summary["steps"]}},
    )
    return records
