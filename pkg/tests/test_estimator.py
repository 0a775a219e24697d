"""
Tests for the energy estimator: post-rotation, parity, sampling and noise.
"""

import numpy as np
import pytest


def _estimator(h, noise=None, policy=None, calibration=None):
    from core.models import AnsatzSpec, ErrorClass, NoiseConfig, ShotPolicy
    from engine.estimator import EnergyEstimator

    noise_config = NoiseConfig() if noise is None else NoiseConfig(
        error_class=ErrorClass(noise), calibration=calibration
    )
    return EnergyEstimator(h, AnsatzSpec(num_qubits=h.num_qubits), noise_config,
                           policy or ShotPolicy.exact())


class TestParity:
    """Term expectations from outcome frequencies."""

    def test_parity_signs(self, h2):
        """Index 1 sets qubit 0: IZ reads -1, ZI reads +1, ZZ reads -1."""
        from engine.estimator import term_expectation
        from engine.pauli import PauliString, group_by_basis

        z_group = group_by_basis(h2)[0]
        freqs = [0, 1, 0, 0]
        assert term_expectation(freqs, PauliString.from_label("IZ"), z_group) == -1.0
        assert term_expectation(freqs, PauliString.from_label("ZI"), z_group) == 1.0
        assert term_expectation(freqs, PauliString.from_label("ZZ"), z_group) == -1.0

    def test_counts_are_normalized(self, h2):
        """Raw counts and frequencies give the same expectation."""
        from engine.estimator import term_expectation
        from engine.pauli import PauliString, group_by_basis

        z_group = group_by_basis(h2)[0]
        term = PauliString.from_label("ZZ")
        assert term_expectation([30, 10, 0, 60], term, z_group) == pytest.approx(0.8)

    def test_term_outside_group(self, h2):
        """XX cannot be read from the Z-basis circuit."""
        from core.errors import InvalidArgumentError
        from engine.estimator import term_expectation
        from engine.pauli import PauliString, group_by_basis

        with pytest.raises(InvalidArgumentError):
            term_expectation([1, 0, 0, 0], PauliString.from_label("XX"), group_by_basis(h2)[0])

    def test_post_rotation_reads_plus_as_zero(self):
        """|++> rotated for an XX readout lands on |00>."""
        from engine.estimator import post_rotate
        from engine.pauli import PauliSum, group_by_basis
        from engine.statevector import Gate, apply_circuit, init_zero, probabilities

        group = group_by_basis(PauliSum.from_terms([(1.0, "XX")]))[0]
        plus = apply_circuit(init_zero(2), [Gate.ry(0, np.pi / 2), Gate.ry(1, np.pi / 2)])
        assert probabilities(post_rotate(plus, group))[0] == pytest.approx(1.0)


class TestSampling:
    """Multinomial shot draws."""

    def test_counts_sum_to_shots(self):
        """Every shot lands somewhere."""
        from engine.estimator import sample_counts

        counts = sample_counts([0.1, 0.2, 0.3, 0.4], 1000, np.random.default_rng(3))
        assert counts.sum() == 1000

    def test_invalid_distribution(self):
        """Negative mass is refused."""
        from core.errors import InvalidArgumentError
        from engine.estimator import sample_counts

        with pytest.raises(InvalidArgumentError):
            sample_counts([0.5, -0.5, 1.0], 10, np.random.default_rng(0))

    def test_zero_shots(self):
        """At least one shot per circuit."""
        from core.errors import InvalidArgumentError
        from engine.estimator import sample_counts

        with pytest.raises(InvalidArgumentError):
            sample_counts([1.0, 0.0], 0, np.random.default_rng(0))


class TestExactPolicy:
    """Noiseless exact estimates agree with the dense expectation."""

    def test_matches_dense_energy(self, h4):
        """Grouped parity energy equals <psi|H|psi> for random parameters."""
        from engine.ansatz import build_circuit
        from engine.pauli import exact_energy
        from engine.statevector import apply_circuit, init_zero

        estimator = _estimator(h4)
        rng = np.random.default_rng(11)
        for _ in range(5):
            theta = rng.uniform(-np.pi, np.pi, size=8)
            psi = apply_circuit(init_zero(4), build_circuit(estimator.spec, theta))
            assert estimator(theta).energy == pytest.approx(exact_energy(h4, psi), abs=1e-10)

    def test_optimal_parameters_reach_ground(self, h2, optimal_theta):
        """The ansatz can prepare the exact ground state."""
        from engine.pauli import diagonalize

        result = _estimator(h2)(optimal_theta)
        assert result.energy == pytest.approx(diagonalize(h2).ground_energy, abs=1e-9)
        assert result.shots_used == 0

    def test_group_probabilities_reported(self, h2, optimal_theta):
        """One normalized distribution per measurement circuit."""
        result = _estimator(h2)(optimal_theta)
        assert [g.basis_label for g, _ in result.per_group_probabilities] == ["ZZ", "XX"]
        for _, p in result.per_group_probabilities:
            assert p.sum() == pytest.approx(1.0)

    def test_size_mismatch(self, h2):
        """Ansatz and Hamiltonian must agree on the qubit count."""
        from core.errors import InvalidArgumentError
        from core.models import AnsatzSpec, NoiseConfig, ShotPolicy
        from engine.estimator import EnergyEstimator

        with pytest.raises(InvalidArgumentError):
            EnergyEstimator(h2, AnsatzSpec(num_qubits=4), NoiseConfig(), ShotPolicy.exact())


class TestSampledPolicy:
    """Shot noise behaves like a 1/sqrt(shots) error."""

    def test_shots_per_evaluation(self, h2, h4):
        """Each group is run with the full shot count."""
        from core.models import ShotPolicy

        assert _estimator(h2, policy=ShotPolicy.sampled(1024)).shots_per_evaluation == 2048
        assert _estimator(h4, policy=ShotPolicy.sampled(100)).shots_per_evaluation == 200

    def test_needs_generator(self, h2):
        """Sampling without a generator is an error."""
        from core.errors import InvalidArgumentError
        from core.models import ShotPolicy

        with pytest.raises(InvalidArgumentError):
            _estimator(h2, policy=ShotPolicy.sampled(10))(np.zeros(4))

    def test_seeded_draws_repeat(self, h2):
        """Equal generator states give equal estimates."""
        from core.models import ShotPolicy

        estimator = _estimator(h2, policy=ShotPolicy.sampled(256))
        theta = np.array([0.3, -1.2, 0.8, 2.0])
        first = estimator(theta, np.random.default_rng(5)).energy
        second = estimator(theta, np.random.default_rng(5)).energy
        assert first == second

    def test_unbiased_with_shrinking_spread(self, h2):
        """The mean matches the exact energy; 4x the shots halves the spread."""
        from core.models import ShotPolicy

        theta = np.array([0.9, -0.4, 1.3, 0.2])
        exact = _estimator(h2)(theta).energy
        rng = np.random.default_rng(2024)
        n = 400

        low = np.array([_estimator(h2, policy=ShotPolicy.sampled(1024))(theta, rng).energy for _ in range(n)])
        high = np.array([_estimator(h2, policy=ShotPolicy.sampled(4096))(theta, rng).energy for _ in range(n)])

        assert abs(low.mean() - exact) < 5 * low.std() / np.sqrt(n)
        assert 1.6 < low.std() / high.std() < 2.4


class TestNoisyEstimates:
    """Hardware error classes raise the energy at the optimum."""

    def test_error_classes_order(self, h2, optimal_theta, calibration):
        """Gate errors cost less than readout errors, and both together cost most."""
        ground = _estimator(h2)(optimal_theta).energy
        shift = {
            cls: _estimator(h2, noise=cls, calibration=calibration)(optimal_theta).energy - ground
            for cls in ("gates", "readout", "all")
        }
        assert 0 < shift["gates"] < shift["readout"] < shift["all"]

    def test_gate_noise_uses_density_matrix(self, h2, calibration):
        """Gate errors switch the register to a density matrix."""
        from engine.statevector import StateMode

        assert _estimator(h2, noise="gates", calibration=calibration).prepare(np.zeros(4)).mode == StateMode.MIXED
        assert _estimator(h2, noise="readout", calibration=calibration).prepare(np.zeros(4)).mode == StateMode.PURE

    def test_mitigation_recovers_readout_shift(self, h2, optimal_theta, calibration):
        """A well-sampled calibration matrix removes most of the readout bias."""
        from core.models import ErrorClass, NoiseConfig
        from engine.mitigation import build_mitigation

        ground = _estimator(h2)(optimal_theta).energy
        noisy = _estimator(h2, noise="readout", calibration=calibration)
        model = build_mitigation(NoiseConfig(error_class=ErrorClass.READOUT, calibration=calibration),
                                 2, 200_000, np.random.default_rng(9))

        raw = noisy(optimal_theta).energy
        mitigated = noisy(optimal_theta, mitigation=model).energy
        assert abs(mitigated - ground) < abs(raw - ground) / 3


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
