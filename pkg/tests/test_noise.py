"""
Tests for noise channels, calibration loading and readout confusion.
"""

import json

import numpy as np
import pytest


def _raw_calibration():
    from tests.conftest import CALIBRATION_FILE
    return json.loads(CALIBRATION_FILE.read_text(encoding="utf-8"))


class TestKrausSets:
    """Completeness and limiting cases of the basic channels."""

    @pytest.mark.parametrize("p", [0.0, 0.01, 0.5, 1.0])
    def test_depolarizing_complete(self, p):
        """One- and two-qubit depolarizing sets are trace preserving."""
        from core.validator import ResultValidator
        from engine.noise import depolarizing_kraus

        assert ResultValidator.validate_kraus(depolarizing_kraus(p, 1)) == []
        assert ResultValidator.validate_kraus(depolarizing_kraus(p, 2)) == []

    def test_full_depolarizing_gives_maximally_mixed(self):
        """p = 1 replaces any state by I/2."""
        from engine.noise import depolarizing_kraus
        from engine.statevector import StateMode, apply_channel, init_zero

        rho = apply_channel(init_zero(1, StateMode.MIXED), depolarizing_kraus(1.0), [0])
        assert np.allclose(rho.data, np.eye(2) / 2)

    @pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
    def test_maximally_mixed_is_fixed_point(self, p):
        """Depolarizing leaves I/4 alone, and I/4 reads uniformly."""
        from engine.noise import depolarizing_kraus
        from engine.statevector import QuantumState, apply_channel, probabilities

        rho = QuantumState.mixed(np.eye(4, dtype=complex) / 4)
        out = apply_channel(rho, depolarizing_kraus(p, 2), [0, 1])
        assert np.allclose(out.data, rho.data)
        assert np.allclose(probabilities(out), [0.25, 0.25, 0.25, 0.25])

    def test_full_amplitude_damping_resets(self):
        """gamma = 1 sends |1> to |0>."""
        from engine.noise import amplitude_damping_kraus
        from engine.statevector import Gate, StateMode, apply_channel, apply_gate, init_zero, probabilities

        one = apply_gate(init_zero(1, StateMode.MIXED), Gate.x(0))
        out = apply_channel(one, amplitude_damping_kraus(1.0), [0])
        assert np.allclose(probabilities(out), [1, 0])

    def test_phase_damping_keeps_populations(self):
        """Dephasing shrinks coherences only."""
        from engine.noise import phase_damping_kraus
        from engine.statevector import Gate, StateMode, apply_channel, apply_gate, init_zero

        plus = apply_gate(init_zero(1, StateMode.MIXED), Gate.ry(0, np.pi / 2))
        out = apply_channel(plus, phase_damping_kraus(0.36), [0])
        assert np.allclose(np.diag(out.data).real, [0.5, 0.5])
        assert abs(out.data[0, 1]) == pytest.approx(0.5 * np.sqrt(0.64))

    def test_parameter_out_of_range(self):
        """Probabilities outside [0, 1] are channel errors."""
        from core.errors import ChannelError
        from engine.noise import amplitude_damping_kraus, depolarizing_kraus

        with pytest.raises(ChannelError):
            depolarizing_kraus(1.5)
        with pytest.raises(ChannelError):
            amplitude_damping_kraus(-0.1)


class TestThermalRelaxation:
    """T1/T2 to damping parameters."""

    def test_t2_at_limit_has_no_pure_dephasing(self):
        """T2 = 2 T1 means relaxation-limited coherence."""
        from engine.noise import thermal_relaxation_parameters

        gamma, lam = thermal_relaxation_parameters(50.0, 100.0, 300.0)
        assert gamma == pytest.approx(1 - np.exp(-0.3 / 50.0))
        assert lam == pytest.approx(0.0, abs=1e-15)

    def test_zero_duration_is_noiseless(self):
        """Virtual gates take no time."""
        from engine.noise import thermal_relaxation_parameters

        assert thermal_relaxation_parameters(80.0, 60.0, 0.0) == (0.0, 0.0)

    def test_t2_above_bound(self):
        """T2 > 2 T1 is unphysical."""
        from core.errors import CalibrationError
        from engine.noise import thermal_relaxation_parameters

        with pytest.raises(CalibrationError):
            thermal_relaxation_parameters(10.0, 30.0, 100.0)


class TestGateChannels:
    """Per-gate noise assembled from a calibration."""

    def test_cx_channel_is_complete(self, calibration):
        """Composite two-qubit noise is trace preserving."""
        from core.validator import ResultValidator
        from engine.noise import gate_channel
        from engine.statevector import Gate

        channel = gate_channel(calibration, Gate.cnot(0, 1))
        assert not channel.is_identity
        assert ResultValidator.validate_kraus(channel.kraus()) == []

    def test_rz_is_noiseless(self, calibration):
        """The bundled calibration treats Rz as a virtual gate."""
        from engine.noise import gate_channel
        from engine.statevector import Gate

        assert gate_channel(calibration, Gate.rz(0, 0.3)).is_identity

    def test_missing_gate_kind(self, calibration):
        """A gate kind absent from the calibration is a channel error."""
        from core.errors import ChannelError
        from core.models import DeviceCalibration
        from engine.noise import gate_channel
        from engine.statevector import Gate

        reduced = DeviceCalibration(
            backend=calibration.backend,
            date=calibration.date,
            qubits=calibration.qubits,
            gates=[g for g in calibration.gates if g.kind != "x"],
        )
        with pytest.raises(ChannelError):
            gate_channel(reduced, Gate.x(0))

    def test_noisy_circuit_stays_physical(self, calibration):
        """Trace, Hermiticity and positivity survive a noisy circuit."""
        from core.models import ErrorClass, NoiseConfig
        from engine.noise import NoiseModel
        from engine.statevector import Gate, StateMode, init_zero

        model = NoiseModel(NoiseConfig(error_class=ErrorClass.GATES, calibration=calibration), 3)
        state = init_zero(3, StateMode.MIXED)
        for gate in [Gate.ry(0, 1.0), Gate.ry(1, -0.4), Gate.cnot(0, 1), Gate.cnot(1, 2), Gate.rz(2, 0.8)]:
            state = model.apply_gate(state, gate)
        assert state.validation_errors() == []

    def test_superoperator_matches_sequential_kraus(self, calibration):
        """The cached superoperator equals applying the steps one by one."""
        from engine.noise import gate_channel
        from engine.statevector import Gate, StateMode, apply_channel, apply_gate, apply_superoperator, init_zero

        gate = Gate.cnot(0, 1)
        channel = gate_channel(calibration, gate)
        state = apply_gate(init_zero(2, StateMode.MIXED), Gate.ry(0, 1.2))
        state = apply_gate(state, gate)
        sequential = state
        for step in channel.steps:
            sequential = apply_channel(sequential, step.kraus, step.qubits)
        assert np.allclose(channel.apply(state).data, sequential.data)
        assert np.allclose(sequential.data, apply_superoperator(state, channel.superoperator(2)).data)

    def test_wide_register_applies_kraus_steps(self, calibration):
        """Above the superoperator width the model gives the same state without building one."""
        from core.models import ErrorClass, NoiseConfig
        from engine.noise import NoiseModel
        from engine.statevector import Gate, StateMode, init_zero

        gates = [Gate.ry(0, 0.7), Gate.x(1), Gate.cnot(0, 1), Gate.cnot(1, 2), Gate.ry(2, -1.1)]
        config = NoiseConfig(error_class=ErrorClass.GATES, calibration=calibration)

        dense = NoiseModel(config, 3)
        stepwise = NoiseModel(config, 3)
        stepwise.SUPEROPERATOR_MAX_QUBITS = 2
        assert dense.uses_superoperators and not stepwise.uses_superoperators

        a = b = init_zero(3, StateMode.MIXED)
        for gate in gates:
            a = dense.apply_gate(a, gate)
            b = stepwise.apply_gate(b, gate)
        assert stepwise.noise_superoperator(Gate.cnot(0, 1)) is None
        assert np.allclose(a.data, b.data)
        assert b.validation_errors() == []

    def test_incomplete_channel_rejected(self, calibration, monkeypatch):
        """A composite channel that loses trace is refused before use."""
        import engine.noise as noise
        from core.errors import ChannelError
        from core.models import ErrorClass, NoiseConfig
        from engine.statevector import Gate

        def leaky(cal, gate):
            step = noise.KrausStep("leak", (0.5 * np.eye(2, dtype=complex),), gate.qubits[:1])
            return noise.GateChannel(gate=gate, steps=(step,))

        monkeypatch.setattr(noise, "gate_channel", leaky)
        model = noise.NoiseModel(NoiseConfig(error_class=ErrorClass.GATES, calibration=calibration), 2)
        with pytest.raises(ChannelError):
            model.noise_superoperator(Gate.x(0))


class TestReadoutConfusion:
    """Per-qubit confusion matrices and their tensor product."""

    def test_single_qubit_matrix(self):
        """Entry [i, j] is P(read i | true j)."""
        from engine.noise import qubit_confusion

        assert np.allclose(qubit_confusion(0.1, 0.2), [[0.9, 0.2], [0.1, 0.8]])

    def test_tensor_order(self, calibration):
        """P(read |01> | true |00>) is qubit 0's p01 times qubit 1's 1 - p01."""
        from engine.noise import readout_confusion

        m = readout_confusion(calibration, 2)
        q0, q1 = calibration.qubits[0], calibration.qubits[1]
        assert m.matrix[1, 0] == pytest.approx(q0.p01 * (1 - q1.p01))
        assert m.validation_errors() == []

    def test_apply_keeps_distribution(self, calibration):
        """Confusion maps distributions to distributions."""
        from engine.noise import readout_confusion

        out = readout_confusion(calibration, 2).apply(np.array([0.1, 0.2, 0.3, 0.4]))
        assert out.sum() == pytest.approx(1.0)
        assert np.all(out >= 0)

    def test_disabled_readout_is_identity(self, calibration):
        """Gate-only noise leaves readout probabilities untouched."""
        from core.models import ErrorClass, NoiseConfig
        from engine.noise import NoiseModel

        model = NoiseModel(NoiseConfig(error_class=ErrorClass.GATES, calibration=calibration), 2)
        p = np.array([0.25, 0.25, 0.5, 0.0])
        assert np.array_equal(model.apply_readout(p), p)


class TestCalibrationFiles:
    """Loading and validating calibration JSON."""

    def test_bundled_snapshots_load(self):
        """Both synthetic snapshots are valid four-qubit calibrations."""
        from engine.noise import load_calibration
        from tests.conftest import DATA_DIR

        for name in ("calibration_synthetic_2020-12-14.json", "calibration_synthetic_2021-05-14.json"):
            cal = load_calibration(DATA_DIR / name)
            assert cal.synthetic
            assert cal.num_qubits == 4
            assert {g.kind for g in cal.gates} == {"ry", "rz", "x", "cx"}

    def test_missing_field_names_gate(self):
        """Schema errors say which gate entry lacks which field."""
        from core.errors import CalibrationSchemaError
        from engine.noise import parse_calibration

        raw = _raw_calibration()
        cx = next(i for i, g in enumerate(raw["gates"]) if g["kind"] == "cx")
        del raw["gates"][cx]["duration_ns"]
        with pytest.raises(CalibrationSchemaError) as exc:
            parse_calibration(raw)
        assert f"gates[{cx}](kind=cx).duration_ns" in str(exc.value)

    def test_unphysical_t2_is_validation_error(self):
        """T2 > 2 T1 is a calibration error, not a schema error."""
        from core.errors import CalibrationError, CalibrationSchemaError
        from engine.noise import parse_calibration

        raw = _raw_calibration()
        raw["qubits"][0]["t2_us"] = 3 * raw["qubits"][0]["t1_us"]
        with pytest.raises(CalibrationError) as exc:
            parse_calibration(raw)
        assert not isinstance(exc.value, CalibrationSchemaError)
        assert "qubits[0]" in str(exc.value)

    def test_gate_noise_requires_every_kind(self, calibration):
        """Enabling gate errors needs entries for ry, rz, x and cx."""
        from core.errors import CalibrationSchemaError
        from core.models import DeviceCalibration, ErrorClass, NoiseConfig
        from engine.noise import NoiseModel

        reduced = DeviceCalibration(
            backend=calibration.backend,
            date=calibration.date,
            qubits=calibration.qubits,
            gates=[g for g in calibration.gates if g.kind != "cx"],
        )
        with pytest.raises(CalibrationSchemaError):
            NoiseModel(NoiseConfig(error_class=ErrorClass.GATES, calibration=reduced), 2)

    def test_unreadable_files(self, tmp_path):
        """Missing files and broken JSON are load errors."""
        from core.errors import DataLoadError
        from engine.noise import load_calibration

        with pytest.raises(DataLoadError):
            load_calibration(tmp_path / "absent.json")
        broken = tmp_path / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        with pytest.raises(DataLoadError):
            load_calibration(broken)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
