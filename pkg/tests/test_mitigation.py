"""
Tests for readout mitigation: calibration matrices and constrained inversion.
"""

import numpy as np
import pytest


def _model(matrix, shots=1):
    from engine.mitigation import MitigationModel
    from engine.noise import ConfusionMatrix

    return MitigationModel(calibration_matrix=ConfusionMatrix(np.asarray(matrix, dtype=float)),
                           shots_per_column=shots)


class TestSimplexProjection:
    """Euclidean projection onto the probability simplex."""

    def test_simplex_point_is_fixed(self):
        """Valid distributions are unchanged."""
        from engine.mitigation import project_to_simplex

        p = np.array([0.1, 0.6, 0.3])
        assert np.allclose(project_to_simplex(p), p)

    def test_negative_entries_clipped(self):
        """Out-of-simplex vectors land on a valid distribution."""
        from engine.mitigation import project_to_simplex

        x = project_to_simplex(np.array([0.5, 0.7, -0.2]))
        assert x.sum() == pytest.approx(1.0)
        assert np.all(x >= 0)
        assert np.allclose(x, [0.4, 0.6, 0.0])


class TestMitigate:
    """Constrained least squares against known matrices."""

    def test_exact_inverse_recovered(self, calibration):
        """p = A p_true returns p_true."""
        from engine.noise import readout_confusion

        A = readout_confusion(calibration, 2).matrix
        p_true = np.array([0.1, 0.2, 0.3, 0.4])
        result = _model(A).correct(A @ p_true)
        assert np.allclose(result.probabilities, p_true, atol=1e-8)
        assert result.residual < 1e-12
        assert result.warning is None

    def test_unconstrained_solution_outside_simplex(self):
        """A clean |0> read through confusion stays |0> after mitigation."""
        result = _model([[0.9, 0.2], [0.1, 0.8]]).correct([1.0, 0.0])
        assert np.allclose(result.probabilities, [1.0, 0.0], atol=1e-6)

    def test_singular_matrix_warns(self):
        """Ill-conditioned matrices still produce a distribution, plus a warning."""
        result = _model([[0.5, 0.5], [0.5, 0.5]]).correct([0.7, 0.3])
        assert result.warning is not None
        assert "ill-conditioned" in result.warning
        assert result.probabilities.sum() == pytest.approx(1.0)
        assert np.all(result.probabilities >= 0)

    def test_condition_warning_threshold_from_settings(self):
        """The warning threshold is configurable."""
        from core.config import MitigationConfig, Settings, configure

        configure(Settings(mitigation=MitigationConfig(condition_warning=1.2)))
        result = _model([[0.9, 0.2], [0.1, 0.8]]).correct([0.5, 0.5])
        assert "ill-conditioned" in result.warning

    def test_length_mismatch(self):
        """The probability vector must match the matrix."""
        from core.errors import DimensionMismatchError

        with pytest.raises(DimensionMismatchError):
            _model(np.eye(4)).correct([0.5, 0.5])


class TestBuildMitigation:
    """Measured calibration matrices."""

    def test_noiseless_matrix_is_identity(self):
        """Without noise every preparation reads back perfectly."""
        from core.models import NoiseConfig
        from engine.mitigation import build_mitigation

        model = build_mitigation(NoiseConfig(), 2, 50, np.random.default_rng(0))
        assert np.array_equal(model.calibration_matrix.matrix, np.eye(4))
        assert model.condition_number == pytest.approx(1.0)

    def test_readout_matrix_approaches_confusion(self, calibration):
        """With many shots the measured matrix matches the model's confusion."""
        from core.models import ErrorClass, NoiseConfig
        from engine.mitigation import build_mitigation
        from engine.noise import readout_confusion

        noise = NoiseConfig(error_class=ErrorClass.READOUT, calibration=calibration)
        model = build_mitigation(noise, 2, 20_000, np.random.default_rng(4))
        assert model.calibration_matrix.validation_errors() == []
        assert np.allclose(model.calibration_matrix.matrix, readout_confusion(calibration, 2).matrix, atol=0.01)

    def test_gate_noise_enters_preparations(self, calibration):
        """X gates under gate noise leak population off the prepared state."""
        from core.models import ErrorClass, NoiseConfig
        from engine.mitigation import build_mitigation

        noise = NoiseConfig(error_class=ErrorClass.GATES, calibration=calibration)
        model = build_mitigation(noise, 2, 100_000, np.random.default_rng(4))
        assert model.calibration_matrix.matrix[0, 0] == 1.0
        assert model.calibration_matrix.matrix[3, 3] < 1.0

    def test_zero_shots(self):
        """Calibration needs at least one shot per column."""
        from core.errors import InvalidArgumentError
        from core.models import NoiseConfig
        from engine.mitigation import build_mitigation

        with pytest.raises(InvalidArgumentError):
            build_mitigation(NoiseConfig(), 1, 0, np.random.default_rng(0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
