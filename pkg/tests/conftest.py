"""Shared fixtures for the VQE lab test suite."""

from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
CALIBRATION_FILE = DATA_DIR / "calibration_synthetic_2020-12-14.json"


@pytest.fixture(autouse=True)
def reset_settings():
    """Every test starts from default settings and a cold context cache."""
    from core.config import configure
    from harness.sweep import _cached_context

    configure(None)
    _cached_context.cache_clear()
    yield
    configure(None)
    _cached_context.cache_clear()


@pytest.fixture
def calibration():
    from engine.noise import load_calibration
    return load_calibration(CALIBRATION_FILE)


@pytest.fixture
def h2():
    from engine.hamiltonians import builtin_hamiltonian
    return builtin_hamiltonian(2)


@pytest.fixture
def h4():
    from engine.hamiltonians import builtin_hamiltonian
    return builtin_hamiltonian(4)


@pytest.fixture
def optimal_theta(h2):
    """Ry depth-1 parameters that prepare the exact 2-qubit ground state."""
    from engine.pauli import diagonalize

    v = diagonalize(h2).ground_state
    pivot = v[np.argmax(np.abs(v))]
    v = (v * np.conj(pivot) / abs(pivot)).real
    return np.array([2 * np.arctan2(v[3], v[0]), 0.0, 0.0, 0.0])
