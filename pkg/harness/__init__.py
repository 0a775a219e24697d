"""
Harness Package

Experiment orchestration:
- graph.py / nodes.py: the LangGraph pipeline that runs one trial
- sweep.py: seeds, experiment context, run_trial and run_sweep
- io.py: JSON-lines records, summaries and config sidecars
- cli.py: the vqe-lab command line
"""

from harness.sweep import (
    ExperimentContext,
    derive_seed,
    experiment_context,
    resolve_hamiltonian,
    run_sweep,
    run_trial,
    trial_streams,
)
from harness.io import read_records, write_records

__all__ = [
    "ExperimentContext",
    "derive_seed",
    "experiment_context",
    "resolve_hamiltonian",
    "run_sweep",
    "run_trial",
    "trial_streams",
    "read_records",
    "write_records",
]
