"""
Tests for the SPSA optimizer and its gain calibration.
"""

import numpy as np
import pytest


def _quadratic(theta):
    return float(np.dot(theta, theta))


class TestConvergence:
    """SPSA on a convex bowl."""

    def test_quadratic_converges_for_most_seeds(self):
        """Almost every seed ends near the origin after 100 iterations."""
        from core.models import SpsaConfig
        from engine.spsa import minimize

        config = SpsaConfig(maxiter=100)
        converged = 0
        for seed in range(100):
            trace = minimize(_quadratic, [1.0, -0.8], config, np.random.default_rng(seed))
            if np.linalg.norm(trace.final_theta) < 0.1:
                converged += 1
        assert converged >= 90

    def test_energy_trace_decreases_overall(self):
        """Late iterations sit far below the starting value."""
        from core.models import SpsaConfig
        from engine.spsa import minimize

        trace = minimize(_quadratic, [1.0, -0.8, 0.5], SpsaConfig(maxiter=200), np.random.default_rng(7))
        assert np.mean(trace.energy_trace[-20:]) < 0.1 * _quadratic(np.array([1.0, -0.8, 0.5]))


class TestBudget:
    """Objective-call accounting."""

    def test_calibrated_run_evaluations(self):
        """Calibration pairs plus two calls per iteration."""
        from core.models import SpsaConfig
        from engine.spsa import minimize

        trace = minimize(_quadratic, [1.0, 1.0], SpsaConfig(maxiter=100), np.random.default_rng(0))
        assert trace.calibration_steps == 20
        assert trace.evaluations == 2 * 20 + 2 * 100
        assert len(trace.iterations) == 100
        assert len(trace.energy_trace) == 100

    def test_calibration_capped(self):
        """At most 25 calibration steps."""
        from core.models import SpsaConfig

        assert SpsaConfig(maxiter=1000).calibration_steps == 25
        assert SpsaConfig(maxiter=7).calibration_steps == 1

    def test_explicit_gain_skips_calibration(self):
        """A given ``a`` is used as is."""
        from core.models import SpsaConfig
        from engine.spsa import minimize

        trace = minimize(_quadratic, [1.0, 1.0], SpsaConfig(maxiter=30, a=0.2), np.random.default_rng(0))
        assert trace.calibration_steps == 0
        assert trace.a == 0.2
        assert trace.evaluations == 60

    def test_flat_objective_falls_back_to_target_step(self):
        """No objective variation leaves ``a`` at the target step."""
        from core.models import SpsaConfig
        from engine.spsa import minimize

        config = SpsaConfig(maxiter=10)
        trace = minimize(lambda theta: 1.0, [0.0, 0.0], config, np.random.default_rng(0))
        assert trace.a == config.target_step
        assert np.allclose(trace.final_theta, 0.0)


class TestDeterminism:
    """Same generator, same path."""

    def test_same_seed_same_result(self):
        """Two runs from equal generators agree exactly."""
        from core.models import SpsaConfig
        from engine.spsa import minimize

        config = SpsaConfig(maxiter=40)
        a = minimize(_quadratic, [0.5, -0.5], config, np.random.default_rng(3))
        b = minimize(_quadratic, [0.5, -0.5], config, np.random.default_rng(3))
        assert np.array_equal(a.final_theta, b.final_theta)
        assert a.energy_trace == b.energy_trace

    def test_config_seed_used_without_generator(self):
        """SpsaConfig.seed seeds the perturbations when no generator is passed."""
        from core.models import SpsaConfig
        from engine.spsa import SpsaOptimizer

        optimizer = SpsaOptimizer(SpsaConfig(maxiter=20, seed=8))
        assert np.array_equal(optimizer.minimize(_quadratic, [1.0, 0.3]).final_theta,
                              optimizer.minimize(_quadratic, [1.0, 0.3]).final_theta)

    def test_perturbation_entries(self):
        """Perturbations are +/-1 vectors."""
        from engine.spsa import perturbation

        delta = perturbation(50, np.random.default_rng(1))
        assert set(np.unique(delta)) <= {-1.0, 1.0}


def _h2_energy():
    from core.models import AnsatzSpec, NoiseConfig, ShotPolicy
    from engine.estimator import EnergyEstimator
    from engine.hamiltonians import builtin_hamiltonian

    estimator = EnergyEstimator(builtin_hamiltonian(2), AnsatzSpec(num_qubits=2), NoiseConfig(),
                                ShotPolicy.exact())
    return lambda theta: estimator(theta).energy


def _pattern_search(f, theta, step=np.pi / 8, tol=1e-7):
    """Coordinate pattern search: take improving +/-step moves, halve the step otherwise."""
    theta = np.array(theta, dtype=float)
    best = f(theta)
    while step > tol:
        improved = False
        for i in range(theta.shape[0]):
            for sign in (1.0, -1.0):
                trial = theta.copy()
                trial[i] += sign * step
                energy = f(trial)
                if energy < best:
                    theta, best, improved = trial, energy, True
                    break
        if not improved:
            step /= 2
    return theta, best


@pytest.fixture(scope="module")
def grid_oracle():
    """Lowest 2-qubit Ry energy from an 8-point-per-angle grid, polished by pattern search."""
    import itertools

    f = _h2_energy()
    axis = np.linspace(-np.pi, np.pi, 8, endpoint=False)
    grid = sorted((f(np.array(p)), p) for p in itertools.product(axis, repeat=4))
    polished = [_pattern_search(f, p) for _, p in grid[:5]]
    return min(polished, key=lambda item: item[1])


class TestH2Landscape:
    """SPSA on the exact 2-qubit H2 energy against a grid-search optimum."""

    def test_grid_oracle_matches_diagonalization(self, h2, grid_oracle):
        """Grid search alone finds the ground energy; the ansatz can reach it."""
        from engine.pauli import diagonalize

        theta, energy = grid_oracle
        assert energy == pytest.approx(diagonalize(h2).ground_energy, abs=1e-5)
        assert _h2_energy()(theta) == energy

    def test_median_improves_with_iterations(self, grid_oracle):
        """Median final energy never rises from 50 to 100 to 200 iterations."""
        from core.models import AnsatzSpec, SpsaConfig
        from engine.ansatz import random_parameters
        from engine.spsa import minimize

        f = _h2_energy()
        spec = AnsatzSpec(num_qubits=2)
        starts = [random_parameters(spec, np.random.default_rng(seed)) for seed in range(21)]

        medians = []
        for maxiter in (50, 100, 200):
            finals = [
                f(minimize(f, theta0, SpsaConfig(maxiter=maxiter), np.random.default_rng(1000 + i)).final_theta)
                for i, theta0 in enumerate(starts)
            ]
            medians.append(float(np.median(finals)))

        assert medians[1] <= medians[0] + 5e-4
        assert medians[2] <= medians[1] + 5e-4
        assert medians[2] - grid_oracle[1] < 0.0015


class TestAbort:
    """Objective failures carry the partial trace."""

    def test_failure_reports_evaluations(self):
        """The trace counts the calls that succeeded."""
        from core.errors import OptimizationAborted
        from core.models import SpsaConfig
        from engine.spsa import minimize

        calls = {"n": 0}

        def flaky(theta):
            calls["n"] += 1
            if calls["n"] > 13:
                raise RuntimeError("backend lost")
            return _quadratic(theta)

        with pytest.raises(OptimizationAborted) as exc:
            minimize(flaky, [1.0, 1.0], SpsaConfig(maxiter=50), np.random.default_rng(0))
        assert exc.value.partial_trace.evaluations == 13
        assert exc.value.recoverable


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
