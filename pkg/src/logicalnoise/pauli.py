"""n-qubit Pauli operators in the symplectic (x, z, phase) representation.

A ``PauliOperator`` stores two integer bitmasks, ``x`` and ``z`` (bit ``j`` is
qubit ``j``), and a phase exponent so that the operator equals

    i**phase * sigma(x_0, z_0) (x) ... (x) sigma(x_{n-1}, z_{n-1})

with sigma(0,0) = I, sigma(1,0) = X, sigma(1,1) = Y (the Hermitian Y) and
sigma(0,1) = Z. With this convention every Hermitian Pauli product is exactly
``+rep`` or ``-rep``.

Qubit 0 is the leftmost character of a Pauli string and the most significant
tensor factor of ``dense_matrix``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 64
MAX_DENSE_QUBITS = int(os.environ.get("LOGICALNOISE_MAX_N", "8"))

LETTERS = "IXYZ"
# (x, z) bits -> index into (I, X, Y, Z)
_LETTER_INDEX = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}

PAULI_MATRICES = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class NonHermitianError(ValueError):
    """A sign was requested for a Pauli with phase +-i."""


class ResourceError(RuntimeError):
    """A dense or enumerative computation exceeds its configured cap."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOperator:
    """Immutable n-qubit Pauli operator ``i**phase * rep``."""

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask or self.x < 0 or self.z < 0:
            raise ValueError("bitmask has bits outside the qubit range")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -----------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_string(cls, label: str) -> "PauliOperator":
        """Parse ``"XIZ"``, ``"+XIZ"``, ``"-XIZ"`` (also ``"+i"``/``"-i"`` prefixes)."""
        s = label.strip().replace("−", "-")
        phase = 0
        for prefix, ph in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if s.startswith(prefix):
                phase = ph
                s = s[len(prefix):]
                break
        if not s:
            raise ValueError(f"empty Pauli string {label!r}")
        x = z = 0
        for j, ch in enumerate(s.upper()):
            if ch not in _LETTER_BITS:
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}")
            xb, zb = _LETTER_BITS[ch]
            x |= xb << j
            z |= zb << j
        return cls(len(s), x, z, phase)

    @classmethod
    def from_bits(cls, x_bits: Sequence[int], z_bits: Sequence[int], phase: int = 0) -> "PauliOperator":
        if len(x_bits) != len(z_bits):
            raise DimensionError("x and z bit vectors differ in length")
        x = sum(int(b) << j for j, b in enumerate(x_bits))
        z = sum(int(b) << j for j, b in enumerate(z_bits))
        return cls(len(x_bits), x, z, phase)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        xb, zb = _LETTER_BITS[letter]
        return cls(n, xb << qubit, zb << qubit)

    # views ------------------------------------------------------------------

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> j) & 1 for j in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> j) & 1 for j in range(self.n))

    def letters(self) -> str:
        """Canonical representative as a string of I/X/Y/Z, phase dropped."""
        return "".join(
            LETTERS[_LETTER_INDEX[(self.x >> j) & 1, (self.z >> j) & 1]] for j in range(self.n)
        )

    def letter_indices(self) -> tuple[int, ...]:
        """Per-qubit index into (I, X, Y, Z)."""
        return tuple(_LETTER_INDEX[(self.x >> j) & 1, (self.z >> j) & 1] for j in range(self.n))

    @property
    def representative(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, 0)

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)


def _check_same_size(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise DimensionError(f"Pauli operators act on {p.n} and {q.n} qubits")


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p * q`` including the accumulated power of i."""
    _check_same_size(p, q)
    # per qubit: sigma(x,z) = i^{xz} X^x Z^z, and Z^z1 X^x2 = (-1)^{z1 x2} X^x2 Z^z1
    x = p.x ^ q.x
    z = p.z ^ q.z
    phase = (
        p.phase
        + q.phase
        + _popcount(p.x & p.z)
        + _popcount(q.x & q.z)
        + 2 * _popcount(p.z & q.x)
        - _popcount(x & z)
    )
    return PauliOperator(p.n, x, z, phase)


def product(paulis: Iterable[PauliOperator]) -> PauliOperator:
    return reduce(multiply, paulis)


def weight(p: PauliOperator) -> int:
    """Number of qubits on which ``p`` acts nontrivially."""
    return _popcount(p.x | p.z)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_same_size(p, q)
    return (_popcount(p.x & q.z) + _popcount(p.z & q.x)) % 2 == 0


def chi_sign(p: PauliOperator) -> int:
    """Sign of a Hermitian Pauli relative to its canonical representative."""
    if p.phase == 0:
        return 1
    if p.phase == 2:
        return -1
    raise NonHermitianError(f"{p} has phase +-i; it is not +-1 times a Hermitian representative")


def dense_matrix(p: PauliOperator, max_qubits: int | None = None) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``p`` including its phase."""
    cap = MAX_DENSE_QUBITS if max_qubits is None else max_qubits
    if p.n > cap:
        raise ResourceError(f"dense matrix for {p.n} qubits exceeds the cap of {cap}")
    m = reduce(np.kron, (PAULI_MATRICES[i] for i in p.letter_indices()))
    return (1j ** p.phase) * m


def random_pauli(n: int, rng: np.random.Generator, phase: bool = True) -> PauliOperator:
    x = int(rng.integers(0, 1 << n))
    z = int(rng.integers(0, 1 << n))
    ph = int(rng.integers(0, 4)) if phase else 0
    return PauliOperator(n, x, z, ph)


# -- batched helpers over bit arrays (rows are operators, columns are qubits) --


def letter_index_array(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Map bit arrays to (I, X, Y, Z) indices elementwise."""
    x = np.asarray(x, dtype=np.int8)
    z = np.asarray(z, dtype=np.int8)
    # I=0, X=1, Y=2, Z=3
    return (x + 3 * z - 2 * (x & z)).astype(np.int8)


def multiply_arrays(x1, z1, ph1, x2, z2, ph2):
    """Row-wise products of Paulis stored as uint8 bit arrays of shape (m, n)."""
    x = x1 ^ x2
    z = z1 ^ z2
    phase = (
        ph1.astype(np.int64)
        + ph2
        + (x1 & z1).sum(axis=-1)
        + (x2 & z2).sum(axis=-1)
        + 2 * (z1 & x2).sum(axis=-1)
        - (x & z).sum(axis=-1)
    ) % 4
    return x, z, phase


def to_bit_arrays(p: PauliOperator) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.array(p.x_bits, dtype=np.uint8),
        np.array(p.z_bits, dtype=np.uint8),
    )
