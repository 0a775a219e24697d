"""
Data Models - Pydantic models for type safety and validation.

These models are the contracts between the CLI, the API, the trial graph
and the result files. Dense numerical values (Pauli sums, quantum states,
Kraus sets) are frozen dataclasses in their engine modules; everything
that crosses a file or process boundary lives here.
"""

from enum import Enum
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from core.config import get_settings
from core.errors import TrialError


# ============================================================================
# Enums
# ============================================================================

class AnsatzForm(str, Enum):
    """Rotation layer form of the hardware-inspired ansatz."""
    RY = "ry"
    RYRZ = "ryrz"


class ErrorClass(str, Enum):
    """Which hardware error sources the noise model enables."""
    NONE = "none"
    GATES = "gates"
    READOUT = "readout"
    ALL = "all"


class ShotMode(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class RecalcMode(str, Enum):
    NONE = "none"
    EXACT = "exact"
    SHOTS = "shots"


class TrialClass(str, Enum):
    """Outcome class of a trial in the similarity analysis."""
    GROUND_LIKE = "ground_like"
    EXCITED = "excited"
    ERRONEOUS = "erroneous"


class TrialStatus(str, Enum):
    COMPLETED = "completed"
    FAILED = "failed"


# ============================================================================
# Device Calibration
# ============================================================================

class QubitCalibration(BaseModel):
    """Per-qubit coherence times and readout error rates."""
    t1_us: float = Field(..., gt=0, description="Energy relaxation time (microseconds)")
    t2_us: float = Field(..., gt=0, description="Dephasing time (microseconds)")
    p01: float = Field(..., ge=0, le=1, description="P(read 1 | prepared 0)")
    p10: float = Field(..., ge=0, le=1, description="P(read 0 | prepared 1)")

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def check_t2_bound(self):
        """Thermal relaxation is only completely positive for T2 <= 2*T1."""
        if self.t2_us > 2 * self.t1_us:
            raise ValueError(
                f"t2_us={self.t2_us} exceeds 2*t1_us={2 * self.t1_us}"
            )
        return self


class GateCalibration(BaseModel):
    """Error rate and duration of one native gate kind."""
    kind: Literal["ry", "rz", "x", "cx"]
    qubits: int = Field(..., ge=1, le=2, description="Gate arity")
    p_dep: float = Field(..., ge=0, le=1)
    duration_ns: float = Field(..., ge=0)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def check_arity(self):
        expected = 2 if self.kind == "cx" else 1
        if self.qubits != expected:
            raise ValueError(f"gate '{self.kind}' acts on {expected} qubit(s), got {self.qubits}")
        return self


class DeviceCalibration(BaseModel):
    """
    Snapshot of a device's noise parameters.

    Bundled files are synthetic and flagged as such; they carry realistic
    magnitudes, not any vendor's published values.
    """
    backend: str = Field(..., min_length=1)
    date: str = Field(..., min_length=1)
    synthetic: bool = Field(default=False)
    qubits: list[QubitCalibration] = Field(..., min_length=1)
    gates: list[GateCalibration] = Field(..., min_length=1)

    model_config = {"extra": "forbid"}

    @field_validator("gates")
    @classmethod
    def unique_gate_kinds(cls, v):
        kinds = [g.kind for g in v]
        duplicates = {k for k in kinds if kinds.count(k) > 1}
        if duplicates:
            raise ValueError(f"duplicate gate kinds: {sorted(duplicates)}")
        return v

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def gate(self, kind: str) -> Optional[GateCalibration]:
        """Calibration entry for a gate kind, or None if absent."""
        for entry in self.gates:
            if entry.kind == kind:
                return entry
        return None


class NoiseConfig(BaseModel):
    """Error-class selection plus the calibration it draws from."""
    error_class: ErrorClass = Field(default=ErrorClass.NONE)
    calibration: Optional[DeviceCalibration] = None

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def require_calibration(self):
        if self.error_class != ErrorClass.NONE and self.calibration is None:
            raise ValueError(f"error class '{self.error_class.value}' requires a calibration")
        return self

    @property
    def gates_enabled(self) -> bool:
        return self.error_class in (ErrorClass.GATES, ErrorClass.ALL)

    @property
    def readout_enabled(self) -> bool:
        return self.error_class in (ErrorClass.READOUT, ErrorClass.ALL)


# ============================================================================
# Experiment Configuration
# ============================================================================

class AnsatzSpec(BaseModel):
    """Ry or RyRz circuit with linear entanglement."""
    form: AnsatzForm = Field(default=AnsatzForm.RY)
    num_qubits: int = Field(..., ge=1, le=10)
    depth: int = Field(default=1, ge=1)

    model_config = {"extra": "forbid", "frozen": True}

    @property
    def parameter_count(self) -> int:
        per_qubit = 2 if self.form == AnsatzForm.RYRZ else 1
        return per_qubit * self.num_qubits * (self.depth + 1)


class ShotPolicy(BaseModel):
    """Exact probabilities or a fixed number of samples per circuit."""
    mode: ShotMode = Field(default=ShotMode.SAMPLED)
    shots: Optional[int] = Field(default=None, ge=1)

    model_config = {"extra": "forbid", "frozen": True}

    @model_validator(mode="after")
    def require_shots(self):
        if self.mode == ShotMode.SAMPLED and self.shots is None:
            raise ValueError("sampled policy requires shots >= 1")
        if self.mode == ShotMode.EXACT and self.shots is not None:
            raise ValueError("exact policy takes no shot count")
        return self

    @classmethod
    def exact(cls) -> "ShotPolicy":
        return cls(mode=ShotMode.EXACT)

    @classmethod
    def sampled(cls, shots: int) -> "ShotPolicy":
        return cls(mode=ShotMode.SAMPLED, shots=shots)

    @classmethod
    def parse(cls, text: str) -> "ShotPolicy":
        """Parse the CLI form: ``exact`` or a positive integer."""
        text = text.strip().lower()
        if text == "exact":
            return cls.exact()
        return cls.sampled(int(text))

    def label(self) -> str:
        return "exact" if self.mode == ShotMode.EXACT else str(self.shots)


class RecalcPolicy(BaseModel):
    """Optional re-evaluation of the optimized state."""
    mode: RecalcMode = Field(default=RecalcMode.NONE)
    shots: Optional[int] = Field(default=None, ge=1)

    model_config = {"extra": "forbid", "frozen": True}

    @model_validator(mode="after")
    def require_shots(self):
        if (self.mode == RecalcMode.SHOTS) != (self.shots is not None):
            raise ValueError("shots is required for, and only for, shots recalculation")
        return self

    @classmethod
    def parse(cls, text: str) -> "RecalcPolicy":
        """Parse ``none``, ``exact`` or ``shots:<n>``."""
        text = text.strip().lower()
        if text.startswith("shots:"):
            return cls(mode=RecalcMode.SHOTS, shots=int(text.split(":", 1)[1]))
        return cls(mode=RecalcMode(text))

    def label(self) -> str:
        return f"shots:{self.shots}" if self.mode == RecalcMode.SHOTS else self.mode.value


def _spsa_default(name: str):
    return lambda: getattr(get_settings().spsa, name)


class SpsaConfig(BaseModel):
    """
    SPSA gains. ``a`` is None when the calibration phase should set it;
    an explicit ``a`` skips calibration. Unset gains come from
    ``Settings.spsa``.
    """
    maxiter: int = Field(default=1000, ge=1)
    a: Optional[float] = Field(default=None, gt=0)
    c: float = Field(default_factory=_spsa_default("c"), gt=0)
    alpha: float = Field(default_factory=_spsa_default("alpha"), gt=0, le=1)
    gamma: float = Field(default_factory=_spsa_default("gamma"), gt=0, le=1)
    stability: float = Field(default_factory=_spsa_default("stability"), ge=0)
    target_step: float = Field(default_factory=_spsa_default("target_step"), gt=0)
    seed: Optional[int] = Field(default=None, ge=0)

    model_config = {"extra": "forbid", "frozen": True}

    @property
    def calibration_steps(self) -> int:
        return min(self.maxiter // 5, 25)

    @property
    def effective_calibration_steps(self) -> int:
        return 0 if self.a is not None else self.calibration_steps


class MitigationSettings(BaseModel):
    """Readout mitigation switches."""
    enabled: bool = Field(default=False)
    shots: Optional[int] = Field(default=None, ge=1, description="Defaults to the experiment shots")
    final_only: bool = Field(default=False)

    model_config = {"extra": "forbid", "frozen": True}


class HamiltonianSource(BaseModel):
    """A builtin H2 Hamiltonian or a text file in the term-per-line format."""
    qubits: Optional[Literal[2, 4]] = None
    file: Optional[Path] = None

    model_config = {"extra": "forbid", "frozen": True}

    @model_validator(mode="after")
    def exactly_one(self):
        if (self.qubits is None) == (self.file is None):
            raise ValueError("give exactly one of 'qubits' or 'file'")
        return self

    def label(self) -> str:
        return f"builtin:{self.qubits}" if self.qubits is not None else str(self.file)


class ExperimentConfig(BaseModel):
    """Everything that determines a sweep, together with the master seed."""
    hamiltonian: HamiltonianSource
    ansatz: AnsatzSpec
    shots: ShotPolicy = Field(default_factory=lambda: ShotPolicy.sampled(1024))
    spsa: SpsaConfig = Field(default_factory=SpsaConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    mitigation: MitigationSettings = Field(default_factory=MitigationSettings)
    recalc: RecalcPolicy = Field(default_factory=RecalcPolicy)
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def check_consistency(self):
        h = self.hamiltonian
        if h.qubits is not None and h.qubits != self.ansatz.num_qubits:
            raise ValueError(
                f"ansatz has {self.ansatz.num_qubits} qubits, Hamiltonian has {h.qubits}"
            )
        cal = self.noise.calibration
        if cal is not None and self.noise.error_class != ErrorClass.NONE:
            if cal.num_qubits < self.ansatz.num_qubits:
                raise ValueError(
                    f"calibration covers {cal.num_qubits} qubits, "
                    f"circuit needs {self.ansatz.num_qubits}"
                )
        if self.mitigation.enabled and self.shots.mode == ShotMode.EXACT \
                and self.mitigation.shots is None:
            raise ValueError("mitigation with exact shots needs an explicit mitigation shot count")
        return self

    def axes(self) -> dict[str, str]:
        """Sweep-axis labels used as summary CSV columns."""
        return {
            "hamiltonian": self.hamiltonian.label(),
            "ansatz": self.ansatz.form.value,
            "depth": str(self.ansatz.depth),
            "shots": self.shots.label(),
            "maxiter": str(self.spsa.maxiter),
            "noise": self.noise.error_class.value,
            "mitigate": "final" if self.mitigation.enabled and self.mitigation.final_only
                        else str(self.mitigation.enabled).lower(),
            "recalc": self.recalc.label(),
            "trials": str(self.trials),
            "seed": str(self.seed),
        }


# ============================================================================
# Results
# ============================================================================

class GroupProbabilities(BaseModel):
    """Outcome distribution of one measurement circuit."""
    circuit: int = Field(..., ge=0)
    basis: str = Field(..., description="Per-qubit readout basis, qubit q-1 leftmost")
    probabilities: list[float]

    model_config = {"extra": "forbid"}


class TrialRecord(BaseModel):
    """
    One VQE run. Contains no timestamps: the same config and master seed
    serialize to the same bytes.
    """
    trial_index: int = Field(..., ge=0)
    seed: int = Field(..., ge=0, description="Derived from (master seed, trial index)")
    status: TrialStatus = Field(default=TrialStatus.COMPLETED)
    initial_parameters: list[float] = Field(default_factory=list)
    final_parameters: list[float] = Field(default_factory=list)
    final_energy: Optional[float] = None
    energy_trace: list[float] = Field(default_factory=list)
    probabilities: list[GroupProbabilities] = Field(default_factory=list)
    recalculated_energy: Optional[float] = None
    calibration_steps: int = Field(default=0, ge=0)
    objective_evaluations: int = Field(default=0, ge=0)
    circuit_executions: int = Field(default=0, ge=0)
    error: Optional[str] = None
    warnings: list[str] = Field(default_factory=list)

    model_config = {"extra": "forbid"}

    @property
    def succeeded(self) -> bool:
        return self.status == TrialStatus.COMPLETED and self.final_energy is not None

    def raise_for_status(self) -> "TrialRecord":
        """Raise TrialError for a failed trial; return the record otherwise."""
        if not self.succeeded:
            raise TrialError(self.trial_index, self.error or "no final energy")
        return self


class SummaryStats(BaseModel):
    """Boxplot statistics of one energy column of a sweep."""
    quantity: Literal["final", "recalculated"] = "final"
    count: int = Field(..., ge=1)
    failed: int = Field(default=0, ge=0)
    median: float
    q1: float
    q3: float
    iqr: float = Field(..., ge=0)
    lower_fence: float
    upper_fence: float
    n_outliers: int = Field(..., ge=0)
    minimum: float
    maximum: float
    reference_energy: float
    band: float = Field(..., gt=0)
    pct_in_accuracy: float = Field(..., ge=0, le=100)
    pct_stderr: float = Field(..., ge=0)
    n_below_reference: int = Field(default=0, ge=0)
    mean_circuit_executions: Optional[float] = None

    model_config = {"extra": "forbid"}


class SimilarityReport(BaseModel):
    """Averaged similarity of one trial's probability vector to the whole set."""
    trial_index: int
    energy: float
    avg_jt: float = Field(..., ge=0, le=1)
    avg_scalar: float = Field(..., ge=0, le=1)
    reference_jt: Optional[float] = Field(default=None, ge=0, le=1)
    reference_scalar: Optional[float] = Field(default=None, ge=0, le=1)
    label: TrialClass

    model_config = {"extra": "forbid"}


class SimilarityAnalysis(BaseModel):
    """Similarity reports of a trial set plus class counts."""
    circuit: int
    measure: Literal["jt", "scalar"]
    ground_energy: float
    reference_trial: Optional[int] = None
    class_counts: dict[str, int]
    reports: list[SimilarityReport]

    model_config = {"extra": "forbid"}
