"""
Builtin H2 Hamiltonians at 0.725 Angstrom.

Coefficients are kept exactly as printed (five decimals, Hartree). The
2-qubit sum is the (Z1 -> -1, Z3 -> +1) tapering of the 4-qubit one up to
that rounding.
"""

from core.errors import InvalidArgumentError
from engine.pauli import PauliSum

H2_4Q_COEFFICIENTS = {
    "c0": -0.80718,
    "c1": 0.17374,
    "c2": -0.23047,
    "c3": 0.12149,
    "c4": 0.16940,
    "c5": -0.04509,
    "c6": 0.04509,
    "c7": 0.16658,
    "c8": 0.17511,
}

# (coefficient name, label with qubit 3 leftmost)
H2_4Q_TERMS = (
    ("c0", "IIII"),
    ("c1", "IIIZ"),
    ("c2", "IIZZ"),
    ("c1", "IZII"),
    ("c2", "ZZZI"),
    ("c3", "IIZI"),
    ("c4", "IZIZ"),
    ("c5", "IXZX"),
    ("c6", "ZXIX"),
    ("c6", "IXIX"),
    ("c5", "ZXZX"),
    ("c7", "ZZZZ"),
    ("c7", "IZZZ"),
    ("c8", "ZZIZ"),
    ("c3", "ZIZI"),
)

H2_2Q_COEFFICIENTS = {
    "c0": -1.05016,
    "c1": 0.40421,
    "c2": 0.01135,
    "c3": 0.18038,
}

H2_2Q_TERMS = (
    ("c0", "II"),
    ("c1", "IZ"),
    ("c1", "ZI"),
    ("c2", "ZZ"),
    ("c3", "XX"),
)

# Z-symmetry qubits and sector that map the 4-qubit sum onto the 2-qubit one
H2_TAPER_SYMMETRIES = (1, 3)
H2_TAPER_SECTOR = (-1, 1)


def builtin_hamiltonian(qubits: int) -> PauliSum:
    """The 2- or 4-qubit H2 Hamiltonian."""
    if qubits == 4:
        coefficients, terms = H2_4Q_COEFFICIENTS, H2_4Q_TERMS
    elif qubits == 2:
        coefficients, terms = H2_2Q_COEFFICIENTS, H2_2Q_TERMS
    else:
        raise InvalidArgumentError(f"No builtin Hamiltonian for {qubits} qubits (use 2 or 4)", "qubits")
    return PauliSum.from_terms(((coefficients[name], label) for name, label in terms), num_qubits=qubits)
