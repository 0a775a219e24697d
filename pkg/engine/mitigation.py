"""
Readout Error Mitigation - measured calibration matrix plus constrained
least squares.

Column j of the calibration matrix is the empirical outcome distribution
of basis state j, prepared with X gates and measured through the same
noise pipeline as the experiment. Mitigated probabilities minimize
||A x - p||_2 over the probability simplex.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from core.config import get_settings
from core.errors import DimensionMismatchError, InvalidArgumentError
from core.logging import get_engine_logger
from core.models import NoiseConfig
from engine.estimator import sample_counts
from engine.noise import ConfusionMatrix, NoiseModel
from engine.statevector import Gate, StateMode, apply_circuit, init_zero, probabilities

logger = get_engine_logger("mitigation")


@dataclass(frozen=True, eq=False)
class MitigationResult:
    probabilities: np.ndarray
    condition_number: float
    residual: float
    warning: Optional[str] = None


@dataclass(frozen=True, eq=False)
class MitigationModel:
    calibration_matrix: ConfusionMatrix
    shots_per_column: int

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.calibration_matrix.matrix))

    def correct(self, noisy_probs: Sequence[float]) -> MitigationResult:
        return mitigate(self, noisy_probs)


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1} (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ranks = np.arange(1, v.shape[0] + 1)
    rho = np.nonzero(u * ranks > css - 1)[0][-1]
    tau = (css[rho] - 1) / (rho + 1)
    return np.maximum(v - tau, 0.0)


def build_mitigation(noise: NoiseConfig, num_qubits: int, shots: int,
                     rng: np.random.Generator) -> MitigationModel:
    """Measure every basis-state preparation with ``shots`` samples."""
    if shots < 1:
        raise InvalidArgumentError(f"Calibration shots must be >= 1, got {shots}", "shots")
    model = NoiseModel(noise, num_qubits)
    dim = 2 ** num_qubits

    columns = []
    for j in range(dim):
        gates = [Gate.x(k) for k in range(num_qubits) if (j >> k) & 1]
        if model.gates_enabled:
            state = init_zero(num_qubits, StateMode.MIXED)
            for gate in gates:
                state = model.apply_gate(state, gate)
        else:
            state = apply_circuit(init_zero(num_qubits, StateMode.PURE), gates)
        p = model.apply_readout(probabilities(state))
        columns.append(sample_counts(p, shots, rng) / shots)

    matrix = ConfusionMatrix(np.column_stack(columns))
    logger.debug(f"Built {dim}x{dim} calibration matrix from {shots} shots per column")
    return MitigationModel(calibration_matrix=matrix, shots_per_column=shots)


def mitigate(model: MitigationModel, noisy_probs: Sequence[float]) -> MitigationResult:
    """Constrained least squares: argmin ||A x - p|| with x on the probability simplex."""
    settings = get_settings().mitigation
    A = model.calibration_matrix.matrix
    p = np.clip(np.asarray(noisy_probs, dtype=float), 0.0, None)
    if p.shape[0] != A.shape[1]:
        raise DimensionMismatchError(A.shape[1], p.shape[0], "probability vector length")

    cond = float(np.linalg.cond(A))
    warning = None
    if not np.isfinite(cond) or cond > settings.condition_warning:
        warning = f"Calibration matrix is ill-conditioned (condition number {cond:.3e})"
        logger.warning(warning)

    def residual(x):
        r = A @ x - p
        return float(r @ r)

    def gradient(x):
        return 2.0 * A.T @ (A @ x - p)

    x0 = project_to_simplex(np.linalg.lstsq(A, p, rcond=None)[0])
    if residual(x0) <= settings.tolerance ** 2:
        x = x0
    else:
        res = minimize(
            residual,
            x0,
            jac=gradient,
            method="SLSQP",
            bounds=[(0.0, 1.0)] * p.shape[0],
            constraints={"type": "eq", "fun": lambda x: np.sum(x) - 1.0, "jac": lambda x: np.ones_like(x)},
            tol=settings.tolerance,
            options={"maxiter": settings.max_iterations},
        )
        x = res.x if residual(res.x) <= residual(x0) else x0
        if not res.success:
            msg = f"Least-squares solver did not converge: {res.message}"
            logger.warning(msg)
            warning = f"{warning}; {msg}" if warning else msg

    x = project_to_simplex(x)
    return MitigationResult(probabilities=x, condition_number=cond, residual=residual(x), warning=warning)
