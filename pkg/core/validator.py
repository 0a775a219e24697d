from typing import List, Optional, Sequence

import numpy as np

from core.models import RecalcMode, TrialRecord


class ResultValidator:
    """
    Validates numerical objects and trial records.

    Every check returns a list of error strings; an empty list means valid.
    Engine code turns a non-empty list into the matching LabError.
    """

    @staticmethod
    def validate_probabilities(probs: Sequence[float], atol: float = 1e-9) -> List[str]:
        """Non-negative entries summing to one."""
        errors = []
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            return ["Probability vector must be a non-empty 1-D array"]
        if not np.all(np.isfinite(p)):
            errors.append("Probability vector has non-finite entries")
            return errors
        if p.min() < -atol:
            errors.append(f"Negative probability {p.min():.3e}")
        if p.max() > 1 + atol:
            errors.append(f"Probability above one: {p.max():.6f}")
        if abs(p.sum() - 1.0) > atol:
            errors.append(f"Probabilities sum to {p.sum():.12f}, expected 1")
        return errors

    @staticmethod
    def validate_kraus(kraus: Sequence[np.ndarray], atol: float = 1e-10) -> List[str]:
        """Completeness: sum of K^dagger K is the identity."""
        if len(kraus) == 0:
            return ["Empty Kraus set"]
        dim = kraus[0].shape[0]
        errors = []
        for i, k in enumerate(kraus):
            if k.shape != (dim, dim):
                errors.append(f"Kraus operator {i} has shape {k.shape}, expected {(dim, dim)}")
        if errors:
            return errors
        total = sum(k.conj().T @ k for k in kraus)
        deviation = float(np.max(np.abs(total - np.eye(dim))))
        if deviation > atol:
            errors.append(f"Kraus set is not trace preserving (deviation {deviation:.3e})")
        return errors

    @staticmethod
    def validate_column_stochastic(matrix: np.ndarray, atol: float = 1e-10) -> List[str]:
        errors = []
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            return [f"Expected a square matrix, got shape {m.shape}"]
        if m.min() < -atol:
            errors.append(f"Negative entry {m.min():.3e}")
        worst = float(np.max(np.abs(m.sum(axis=0) - 1.0)))
        if worst > atol:
            errors.append(f"Column sums deviate from 1 by {worst:.3e}")
        return errors

    @staticmethod
    def validate_trial(
        record: TrialRecord,
        ground_energy: Optional[float] = None,
        recalc_mode: RecalcMode = RecalcMode.NONE,
        expected_evaluations: Optional[int] = None,
    ) -> List[str]:
        """Record-level checks run by the harness before a record is emitted."""
        errors = []
        if not record.succeeded:
            return errors

        if expected_evaluations is not None and record.objective_evaluations != expected_evaluations:
            errors.append(
                f"Objective evaluations {record.objective_evaluations} != expected "
                f"{expected_evaluations}"
            )

        if (
            recalc_mode == RecalcMode.EXACT
            and ground_energy is not None
            and record.recalculated_energy is not None
            and record.recalculated_energy < ground_energy - 1e-9
        ):
            errors.append(
                f"Exact recalculated energy {record.recalculated_energy:.9f} is below "
                f"the ground energy {ground_energy:.9f}"
            )

        for group in record.probabilities:
            for msg in ResultValidator.validate_probabilities(group.probabilities):
                errors.append(f"Circuit {group.circuit}: {msg}")

        return errors
