"""
Pauli Algebra - Pauli strings, weighted Pauli sums and the operations the
VQE engine needs on them: dense matrices, exact diagonalization, Z-symmetry
tapering, measurement-basis grouping and a term-per-line text format.

Qubit 0 is the least significant bit of basis-state indices. Labels and
printed kets list qubit q-1 leftmost, so ``"XZ"`` means X on qubit 1 and
Z on qubit 0.
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from core.config import get_settings
from core.errors import (
    DataLoadError,
    DimensionMismatchError,
    InvalidArgumentError,
    ResourceLimitError,
    SymmetryViolationError,
    UnsupportedLabelError,
)
from core.logging import get_engine_logger
from engine.statevector import QuantumState, StateMode

logger = get_engine_logger("pauli")

PAULI_LABELS = "IZXY"
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
ZERO_COEFFICIENT = 1e-12


# ============================================================================
# Pauli strings and sums
# ============================================================================

@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis; ``ops[k]`` acts on qubit k."""
    ops: tuple[str, ...]

    def __post_init__(self):
        ops = tuple(str(o).upper() for o in self.ops)
        bad = [o for o in ops if o not in PAULI_MATRICES]
        if bad:
            raise InvalidArgumentError(f"Invalid Pauli labels {bad}; only I, X, Y, Z allowed", "ops")
        if not ops:
            raise InvalidArgumentError("Pauli string needs at least one qubit", "ops")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a printed label (qubit q-1 leftmost)."""
        return cls(tuple(reversed(label.strip().upper())))

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliString":
        return cls(("I",) * num_qubits)

    @property
    def num_qubits(self) -> int:
        return len(self.ops)

    @property
    def label(self) -> str:
        return "".join(reversed(self.ops))

    @property
    def is_identity(self) -> bool:
        return all(o == "I" for o in self.ops)

    @property
    def support(self) -> tuple[int, ...]:
        """Qubits carrying a non-identity label."""
        return tuple(k for k, o in enumerate(self.ops) if o != "I")

    @property
    def sort_key(self) -> tuple[int, ...]:
        return tuple(PAULI_LABELS.index(o) for o in reversed(self.ops))

    def matrix(self) -> np.ndarray:
        """Dense 2^q x 2^q matrix, qubit q-1 as the leftmost Kronecker factor."""
        return reduce(np.kron, (PAULI_MATRICES[o] for o in reversed(self.ops)))

    def __str__(self) -> str:
        return self.label


PauliLike = Union[PauliString, str]


def _as_pauli(p: PauliLike) -> PauliString:
    return p if isinstance(p, PauliString) else PauliString.from_label(p)


@dataclass(frozen=True)
class PauliSum:
    """
    Real-weighted sum of Pauli strings over a fixed register.

    Terms are merged (equal strings summed exactly with ``math.fsum``),
    zero coefficients dropped and the result sorted canonically, so any
    permutation of the same term list builds an equal PauliSum.
    """
    num_qubits: int
    terms: tuple[tuple[float, PauliString], ...] = field(default=())

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[tuple[float, PauliLike]],
        num_qubits: Optional[int] = None,
    ) -> "PauliSum":
        merged: dict[PauliString, list[float]] = {}
        for coeff, p in terms:
            p = _as_pauli(p)
            if num_qubits is None:
                num_qubits = p.num_qubits
            if p.num_qubits != num_qubits:
                raise DimensionMismatchError(num_qubits, p.num_qubits, "Pauli string length")
            c = complex(coeff)
            if abs(c.imag) > ZERO_COEFFICIENT:
                raise InvalidArgumentError(f"Coefficient of '{p.label}' is not real: {coeff}", "coefficient")
            merged.setdefault(p, []).append(c.real)

        if num_qubits is None:
            raise InvalidArgumentError("Empty term list needs an explicit num_qubits", "num_qubits")

        collected = []
        for p, coeffs in merged.items():
            total = math.fsum(coeffs)
            if abs(total) > ZERO_COEFFICIENT:
                collected.append((total, p))
        collected.sort(key=lambda t: t[1].sort_key)
        return cls(num_qubits=num_qubits, terms=tuple(collected))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def coefficient(self, label: PauliLike) -> float:
        """Coefficient of a string, 0.0 when absent."""
        target = _as_pauli(label)
        for c, p in self.terms:
            if p == target:
                return c
        return 0.0

    @property
    def identity_coefficient(self) -> float:
        return self.coefficient(PauliString.identity(self.num_qubits))

    @cached_property
    def matrix(self) -> np.ndarray:
        dim = 2 ** self.num_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for c, p in self.terms:
            out += c * p.matrix()
        return out

    def __str__(self) -> str:
        return format_hamiltonian(self)


@dataclass(frozen=True)
class MeasurementGroup:
    """Terms measurable from a single circuit; ``basis[k]`` is qubit k's readout basis."""
    basis: tuple[str, ...]
    member_terms: tuple[int, ...]

    @property
    def basis_label(self) -> str:
        return "".join(reversed(self.basis))

    @property
    def x_qubits(self) -> tuple[int, ...]:
        return tuple(k for k, b in enumerate(self.basis) if b == "X")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenvalues (with multiplicity) and matching eigenvector columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    def as_dict(self, decimals: Optional[int] = None) -> dict:
        values = self.eigenvalues if decimals is None else np.round(self.eigenvalues, decimals)
        return {
            "num_qubits": int(round(math.log2(len(self.eigenvalues)))),
            "ground_energy": self.ground_energy,
            "eigenvalues": [float(v) for v in values],
        }


# ============================================================================
# Operations
# ============================================================================

def diagonalize(h: PauliSum, max_qubits: Optional[int] = None) -> Spectrum:
    """Dense Hermitian eigensolve of the sum's matrix."""
    limit = max_qubits if max_qubits is not None else get_settings().max_qubits
    if h.num_qubits > limit:
        raise ResourceLimitError(
            f"Dense diagonalization of {h.num_qubits} qubits exceeds the limit of {limit}",
            num_qubits=h.num_qubits,
            limit=limit,
        )
    eigenvalues, eigenvectors = np.linalg.eigh(h.matrix)
    logger.debug(f"Diagonalized {h.num_qubits}-qubit sum, ground {eigenvalues[0]:.8f}")
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def taper(h: PauliSum, symmetries: Sequence[int], sector: Sequence[int]) -> PauliSum:
    """
    Remove Z-symmetry qubits by substituting their eigenvalue.

    Each listed qubit must carry only I or Z in every term. Its Z becomes
    the sector value (+1 or -1), the qubit is dropped and the remaining
    qubits are relabeled contiguously in their original order.
    """
    positions = list(symmetries)
    signs = list(sector)
    if len(positions) != len(signs):
        raise InvalidArgumentError(
            f"{len(positions)} symmetries but {len(signs)} sector values", "sector"
        )
    if not positions:
        return h
    if len(set(positions)) != len(positions):
        raise InvalidArgumentError(f"Repeated symmetry positions {positions}", "symmetries")
    for pos in positions:
        if not 0 <= pos < h.num_qubits:
            raise InvalidArgumentError(f"Symmetry qubit {pos} outside 0..{h.num_qubits - 1}", "symmetries")
    if len(positions) >= h.num_qubits:
        raise InvalidArgumentError("Tapering would remove every qubit", "symmetries")
    for s in signs:
        if s not in (1, -1):
            raise InvalidArgumentError(f"Sector values must be +1 or -1, got {s}", "sector")

    kept = [k for k in range(h.num_qubits) if k not in positions]
    reduced = []
    for c, p in h.terms:
        factor = 1
        for pos, s in zip(positions, signs):
            op = p.ops[pos]
            if op in ("X", "Y"):
                raise SymmetryViolationError(p.label, pos)
            if op == "Z":
                factor *= s
        reduced.append((factor * c, PauliString(tuple(p.ops[k] for k in kept))))

    return PauliSum.from_terms(reduced, num_qubits=len(kept))


def taper_sectors(h: PauliSum, symmetries: Sequence[int]) -> list[tuple[tuple[int, ...], PauliSum]]:
    """Tapered sums for every sector choice, sectors ordered +1 before -1."""
    return [
        (sector, taper(h, symmetries, sector))
        for sector in itertools.product((1, -1), repeat=len(symmetries))
    ]


def group_by_basis(h: PauliSum) -> list[MeasurementGroup]:
    """
    First-fit partition of the non-identity terms into qubit-wise
    compatible groups. A qubit's basis is X if any member has X there,
    otherwise Z.
    """
    bases: list[list[Optional[str]]] = []
    members: list[list[int]] = []

    for idx, (_, p) in enumerate(h.terms):
        if p.is_identity:
            continue
        if "Y" in p.ops:
            raise UnsupportedLabelError(p.label, "Y-basis measurement is not supported")

        need = [None if o == "I" else o for o in p.ops]
        for basis, group in zip(bases, members):
            if all(n is None or b is None or n == b for n, b in zip(need, basis)):
                for k, n in enumerate(need):
                    if n is not None:
                        basis[k] = n
                group.append(idx)
                break
        else:
            bases.append(list(need))
            members.append([idx])

    return [
        MeasurementGroup(
            basis=tuple(b if b is not None else "Z" for b in basis),
            member_terms=tuple(group),
        )
        for basis, group in zip(bases, members)
    ]


def exact_energy(h: PauliSum, state: QuantumState) -> float:
    """<psi|H|psi> for pure states, Tr(rho H) for density matrices."""
    if state.num_qubits != h.num_qubits:
        raise DimensionMismatchError(h.num_qubits, state.num_qubits, "qubit count")
    if state.mode == StateMode.PURE:
        psi = state.data
        return float(np.real(np.vdot(psi, h.matrix @ psi)))
    return float(np.real(np.trace(state.data @ h.matrix)))


# ============================================================================
# Text format
# ============================================================================

def parse_hamiltonian(text: str) -> PauliSum:
    """
    Parse one ``<coefficient> <label>`` term per line. Blank lines and
    lines starting with ``#`` are ignored.
    """
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidArgumentError(
                f"Line {lineno}: expected '<coefficient> <label>', got '{raw.strip()}'", "hamiltonian"
            )
        try:
            coeff = float(parts[0])
        except ValueError:
            raise InvalidArgumentError(f"Line {lineno}: bad coefficient '{parts[0]}'", "hamiltonian")
        terms.append((coeff, parts[1]))

    if not terms:
        raise InvalidArgumentError("Hamiltonian text contains no terms", "hamiltonian")
    return PauliSum.from_terms(terms)


def format_hamiltonian(h: PauliSum) -> str:
    return "\n".join(f"{c:.12g} {p.label}" for c, p in h.terms) + "\n"


def load_hamiltonian(path: Union[str, Path]) -> PauliSum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DataLoadError(str(path), str(e))
    try:
        h = parse_hamiltonian(text)
    except InvalidArgumentError as e:
        raise DataLoadError(str(path), str(e))
    logger.info(f"Loaded {len(h)}-term Hamiltonian on {h.num_qubits} qubits from {path}")
    return h
