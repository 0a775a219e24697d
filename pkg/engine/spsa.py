"""
SPSA - simultaneous perturbation stochastic approximation.

Each iteration shifts all parameters at once along a random +/-1 vector,
evaluates the objective on both sides and steps against the two-point
gradient estimate:

    g_k = [f(theta + c_k D) - f(theta - c_k D)] / (2 c_k) * D
    theta_{k+1} = theta_k - a_k g_k
    a_k = a / (k + 1 + A)^alpha,   c_k = c / (k + 1)^gamma

Unless ``a`` is given, a calibration phase of min(maxiter // 5, 25)
perturbation pairs at theta_0 sets ``a`` so that the first update moves
each parameter by about ``target_step``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from core.errors import OptimizationAborted
from core.logging import get_engine_logger
from core.models import SpsaConfig

logger = get_engine_logger("spsa")

Objective = Callable[[np.ndarray], float]

MIN_CALIBRATION_DIFFERENCE = 1e-10


@dataclass(frozen=True)
class IterationRecord:
    k: int
    theta: tuple[float, ...]
    f_plus: float
    f_minus: float


@dataclass(eq=False)
class OptimizationTrace:
    """Per-iteration records, the final iterate and the objective-call count."""
    iterations: list[IterationRecord] = field(default_factory=list)
    calibration_steps: int = 0
    a: Optional[float] = None
    final_theta: Optional[np.ndarray] = None
    evaluations: int = 0

    @property
    def energy_trace(self) -> list[float]:
        """Mean of the two perturbed evaluations of every iteration."""
        return [(r.f_plus + r.f_minus) / 2 for r in self.iterations]


def perturbation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Entries i.i.d. uniform on {-1, +1}."""
    return rng.choice(np.array([-1.0, 1.0]), size=dim)


def gradient_estimate(f: Objective, theta: np.ndarray, ck: float, delta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    f_plus = f(theta + ck * delta)
    f_minus = f(theta - ck * delta)
    return (f_plus - f_minus) / (2 * ck) * delta


class SpsaOptimizer:
    """Runs calibration and the SPSA iterations for one trial."""

    def __init__(self, config: SpsaConfig):
        self.config = config

    def _evaluate(self, f: Objective, theta: np.ndarray, trace: OptimizationTrace) -> float:
        try:
            value = float(f(theta))
        except Exception as e:
            raise OptimizationAborted(
                f"Objective failed after {trace.evaluations} evaluations: {e}", trace
            ) from e
        trace.evaluations += 1
        return value

    def calibrate(self, f: Objective, theta0: np.ndarray, rng: np.random.Generator,
                  trace: OptimizationTrace) -> float:
        """Gain ``a`` from the mean objective difference around theta_0."""
        cfg = self.config
        steps = cfg.calibration_steps
        differences = []
        for _ in range(steps):
            delta = perturbation(theta0.shape[0], rng)
            f_plus = self._evaluate(f, theta0 + cfg.c * delta, trace)
            f_minus = self._evaluate(f, theta0 - cfg.c * delta, trace)
            differences.append(abs(f_plus - f_minus))
        trace.calibration_steps = steps

        magnitude = float(np.mean(differences)) / (2 * cfg.c) if differences else 0.0
        if magnitude < MIN_CALIBRATION_DIFFERENCE:
            logger.warning(
                f"Calibration saw no objective variation over {steps} steps; using a={cfg.target_step:.4f}"
            )
            return cfg.target_step
        return cfg.target_step * (1 + cfg.stability) ** cfg.alpha / magnitude

    def minimize(self, f: Objective, theta0: Sequence[float],
                 rng: Optional[np.random.Generator] = None) -> OptimizationTrace:
        cfg = self.config
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        theta = np.array(theta0, dtype=float).reshape(-1)
        trace = OptimizationTrace()

        a = cfg.a if cfg.a is not None else self.calibrate(f, theta, rng, trace)
        trace.a = a

        for k in range(cfg.maxiter):
            ak = a / (k + 1 + cfg.stability) ** cfg.alpha
            ck = cfg.c / (k + 1) ** cfg.gamma
            delta = perturbation(theta.shape[0], rng)
            f_plus = self._evaluate(f, theta + ck * delta, trace)
            f_minus = self._evaluate(f, theta - ck * delta, trace)
            trace.iterations.append(IterationRecord(k, tuple(theta.tolist()), f_plus, f_minus))
            theta = theta - ak * ((f_plus - f_minus) / (2 * ck)) * delta
            # final_theta tracks the latest iterate so an abort still reports it
            trace.final_theta = theta

        trace.final_theta = theta
        logger.debug(f"SPSA finished: {trace.evaluations} evaluations, a={a:.4f}")
        return trace


def minimize(f: Objective, theta0: Sequence[float], config: SpsaConfig,
             rng: Optional[np.random.Generator] = None) -> OptimizationTrace:
    return SpsaOptimizer(config).minimize(f, theta0, rng)
