"""Stabilizer codes: definitions, group enumeration, syndromes, distance, recovery.

Syndromes are tuples of 0/1 with one entry per generator. Where an integer
index is needed, syndrome ``s`` maps to ``sum(s[j] << j)``, the same bit
convention used for the generator exponents ``a`` of stabilizer elements.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .pauli import (
    PauliOperator,
    ResourceError,
    commutes,
    multiply,
    multiply_arrays,
    to_bit_arrays,
    weight,
)

MAX_ENUMERATED_GENERATORS = 24
MAX_LOGICAL_QUBITS = 4
MAX_DISTANCE_WORK = 10**8

Syndrome = tuple[int, ...]


class CodeError(ValueError):
    """Code data violates a stabilizer-code invariant."""


def _symplectic_rank(paulis: Sequence[PauliOperator]) -> int:
    if not paulis:
        return 0
    rows = np.array([p.x_bits + p.z_bits for p in paulis], dtype=np.uint8)
    rank = 0
    for col in range(rows.shape[1]):
        pivot = next((r for r in range(rank, len(rows)) if rows[r, col]), None)
        if pivot is None:
            continue
        rows[[rank, pivot]] = rows[[pivot, rank]]
        for r in range(len(rows)):
            if r != rank and rows[r, col]:
                rows[r] ^= rows[rank]
        rank += 1
    return rank


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """An [[n, k, d]] stabilizer code with explicit logical operators.

    All invariants (commuting, independent, unsigned generators; logical
    operators commuting with the stabilizer and forming k canonical pairs) are
    checked on construction.
    """

    n: int
    k: int
    d: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]
    name: str = "custom"
    recovery_table: Mapping[Syndrome, PauliOperator] | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "logical_x", tuple(self.logical_x))
        object.__setattr__(self, "logical_z", tuple(self.logical_z))
        self._validate()

    def _validate(self) -> None:
        n, k = self.n, self.k
        ops = self.generators + self.logical_x + self.logical_z
        if any(p.n != n for p in ops):
            raise CodeError("all operators must act on n qubits")
        if not 0 <= k <= n:
            raise CodeError(f"k={k} outside [0, n]")
        if k > MAX_LOGICAL_QUBITS:
            raise CodeError(f"k={k} exceeds the supported maximum of {MAX_LOGICAL_QUBITS}")
        if len(self.generators) != n - k:
            raise CodeError(f"expected {n - k} generators, got {len(self.generators)}")
        if len(self.logical_x) != k or len(self.logical_z) != k:
            raise CodeError(f"expected {k} logical X and Z operators")
        if any(g.phase != 0 for g in self.generators):
            raise CodeError("generators must be unsigned (the group may not contain -I)")
        if any(not p.is_hermitian() for p in ops):
            raise CodeError("logical operators must be Hermitian")
        for g, h in itertools.combinations(self.generators, 2):
            if not commutes(g, h):
                raise CodeError(f"generators {g} and {h} do not commute")
        if _symplectic_rank(self.generators) != n - k:
            raise CodeError("generators are not independent")
        for lop in self.logical_x + self.logical_z:
            for g in self.generators:
                if not commutes(lop, g):
                    raise CodeError(f"logical operator {lop} does not commute with {g}")
        for j in range(k):
            for l in range(k):
                xz = commutes(self.logical_x[j], self.logical_z[l])
                if xz != (j != l):
                    raise CodeError(f"logical pair ({j}, {l}) has the wrong commutation")
                if not commutes(self.logical_x[j], self.logical_x[l]):
                    raise CodeError("logical X operators must commute")
                if not commutes(self.logical_z[j], self.logical_z[l]):
                    raise CodeError("logical Z operators must commute")
        if self.recovery_table is not None:
            for s, r in self.recovery_table.items():
                if syndrome_of(self, r) != tuple(s):
                    raise CodeError(f"recovery {r} does not have syndrome {s}")

    @property
    def num_generators(self) -> int:
        return self.n - self.k

    @property
    def num_syndromes(self) -> int:
        return 1 << (self.n - self.k)

    def syndromes(self) -> list[Syndrome]:
        """All syndromes ordered by integer index."""
        r = self.num_generators
        return [tuple((i >> j) & 1 for j in range(r)) for i in range(1 << r)]

    @cached_property
    def stabilizer_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bit arrays ``(x, z, phase)`` of every stabilizer element, row ``a``
        being ``prod_j g_j ** a_j`` with ``a = sum(a_j << j)``."""
        r = self.num_generators
        if r > MAX_ENUMERATED_GENERATORS:
            raise ResourceError(f"{r} generators exceed the enumeration cap")
        x = np.zeros((1, self.n), dtype=np.uint8)
        z = np.zeros((1, self.n), dtype=np.uint8)
        ph = np.zeros(1, dtype=np.int64)
        for g in self.generators:
            gx, gz = to_bit_arrays(g)
            nx, nz, nph = multiply_arrays(
                x, z, ph, np.broadcast_to(gx, x.shape), np.broadcast_to(gz, z.shape), np.zeros_like(ph)
            )
            x = np.concatenate([x, nx])
            z = np.concatenate([z, nz])
            ph = np.concatenate([ph, nph])
        return x, z, ph

    @cached_property
    def logical_operators(self) -> tuple[PauliOperator, ...]:
        """Hermitian logical basis ordered as (I, X, Y, Z) per logical qubit,
        logical qubit 0 most significant. ``Y_j = i X_j Z_j``."""
        ident = PauliOperator.identity(self.n)
        per_qubit = []
        for lx, lz in zip(self.logical_x, self.logical_z):
            ly = multiply(lx, lz)
            ly = PauliOperator(ly.n, ly.x, ly.z, ly.phase + 1)
            per_qubit.append((ident, lx, ly, lz))
        ops = []
        for combo in itertools.product(*per_qubit) if per_qubit else [()]:
            op = ident
            for c in combo:
                op = multiply(op, c)
            ops.append(op)
        return tuple(ops)

    @cached_property
    def minimum_weight_recoveries(self) -> dict[Syndrome, PauliOperator]:
        return _minimum_weight_table(self)

    def __str__(self) -> str:
        return f"{self.name} [[{self.n},{self.k},{self.d}]]"


# -- group and syndrome functions -------------------------------------------------


def stabilizer_elements(code: StabilizerCode) -> Iterator[tuple[tuple[int, ...], PauliOperator]]:
    """Yield ``(a, S)`` for all ``2**(n-k)`` elements ``S = prod g_j**a_j``."""
    r = code.num_generators
    if r > MAX_ENUMERATED_GENERATORS:
        raise ResourceError(f"{r} generators exceed the enumeration cap")
    for idx in range(1 << r):
        a = tuple((idx >> j) & 1 for j in range(r))
        op = PauliOperator.identity(code.n)
        for aj, g in zip(a, code.generators):
            if aj:
                op = multiply(op, g)
        yield a, op


def phi_sign(code: StabilizerCode, a: Sequence[int], s: Sequence[int]) -> int:
    """Sign of ``S = prod g_j**a_j`` in the expansion of the syndrome-``s`` projector."""
    if len(a) != code.num_generators or len(s) != code.num_generators:
        raise CodeError("exponent and syndrome lengths must equal the generator count")
    return -1 if sum(int(x) * int(y) for x, y in zip(a, s)) % 2 else 1


def syndrome_of(code: StabilizerCode, e: PauliOperator) -> Syndrome:
    if e.n != code.n:
        raise CodeError(f"error acts on {e.n} qubits, code has {code.n}")
    return tuple(0 if commutes(e, g) else 1 for g in code.generators)


def syndrome_index(s: Sequence[int]) -> int:
    return sum(int(b) << j for j, b in enumerate(s))


def _paulis_of_weight(n: int, w: int, letters: str = "XYZ") -> Iterator[PauliOperator]:
    for support in itertools.combinations(range(n), w):
        for assignment in itertools.product(letters, repeat=w):
            chars = ["I"] * n
            for q, c in zip(support, assignment):
                chars[q] = c
            yield PauliOperator.from_string("".join(chars))


def _is_logical_identity(code: StabilizerCode, e: PauliOperator) -> bool:
    # a zero-syndrome Pauli lies in the stabilizer group iff it commutes with all logicals
    return all(commutes(e, lop) for lop in code.logical_x + code.logical_z)


def verify_distance(code: StabilizerCode, letters: str = "XYZ", max_weight: int | None = None) -> int:
    """Brute-force minimum weight of an undetectable, logically nontrivial Pauli.

    ``letters`` restricts the search to Paulis built from those single-qubit
    letters; ``letters="X"`` gives the bit-flip distance of a repetition code.
    """
    top = code.n if max_weight is None else max_weight
    work = 0
    for w in range(1, top + 1):
        work += comb(code.n, w) * len(letters) ** w
        if work > MAX_DISTANCE_WORK:
            raise ResourceError("distance search exceeds the brute-force cap")
        for e in _paulis_of_weight(code.n, w, letters):
            if not any(syndrome_of(code, e)) and not _is_logical_identity(code, e):
                return w
    if code.k == 0:
        return code.n
    raise CodeError(f"no logical operator found up to weight {top}")


def _minimum_weight_table(code: StabilizerCode) -> dict[Syndrome, PauliOperator]:
    table: dict[Syndrome, PauliOperator] = {(0,) * code.num_generators: PauliOperator.identity(code.n)}
    total = code.num_syndromes
    w = 0
    while len(table) < total:
        w += 1
        if w > code.n:
            raise CodeError("some syndromes are unreachable")
        candidates = sorted(_paulis_of_weight(code.n, w), key=lambda p: p.letters())
        for e in candidates:
            s = syndrome_of(code, e)
            if s not in table:
                table[s] = e
    return table


def recovery_for_syndrome(code: StabilizerCode, s: Sequence[int]) -> PauliOperator:
    """Recovery Pauli for syndrome ``s``.

    Uses the code's custom ``recovery_table`` when present, otherwise the
    minimum-weight Pauli with that syndrome, ties broken by string order.
    """
    s = tuple(int(b) for b in s)
    if code.recovery_table is not None and s in code.recovery_table:
        return code.recovery_table[s]
    return code.minimum_weight_recoveries[s]


def minimum_weight_table(code: StabilizerCode) -> dict[Syndrome, PauliOperator]:
    return {s: recovery_for_syndrome(code, s) for s in code.syndromes()}


# -- builtin codes ----------------------------------------------------------------


def _P(label: str) -> PauliOperator:
    return PauliOperator.from_string(label)


def repetition(n: int) -> StabilizerCode:
    """Bit-flip repetition code; as a quantum code its distance is 1."""
    if n < 1 or n % 2 == 0:
        raise CodeError(f"repetition code needs odd n >= 1, got {n}")
    gens = []
    for i in range(n - 1):
        chars = ["I"] * n
        chars[i] = chars[i + 1] = "Z"
        gens.append(_P("".join(chars)))
    return StabilizerCode(
        n=n,
        k=1,
        d=1,
        generators=gens,
        logical_x=[_P("X" * n)],
        logical_z=[_P("Z" + "I" * (n - 1))],
        name=f"repetition({n})",
    )


def five_qubit() -> StabilizerCode:
    base = "XZZXI"
    gens = [_P(base[-i:] + base[:-i] if i else base) for i in range(4)]
    return StabilizerCode(
        n=5, k=1, d=3, generators=gens, logical_x=[_P("XXXXX")], logical_z=[_P("ZZZZZ")], name="five_qubit"
    )


def steane() -> StabilizerCode:
    rows = ["IIIXXXX", "IXXIIXX", "XIXIXIX"]
    gens = [_P(r) for r in rows] + [_P(r.replace("X", "Z")) for r in rows]
    return StabilizerCode(
        n=7, k=1, d=3, generators=gens, logical_x=[_P("X" * 7)], logical_z=[_P("Z" * 7)], name="steane"
    )


def trivial(n: int = 1) -> StabilizerCode:
    """Unencoded qubits: no generators, logical operators are the physical ones."""
    xs = [PauliOperator.single(n, j, "X") for j in range(n)]
    zs = [PauliOperator.single(n, j, "Z") for j in range(n)]
    return StabilizerCode(n=n, k=n, d=1, generators=[], logical_x=xs, logical_z=zs, name=f"trivial({n})")


def builtin(name: str) -> StabilizerCode:
    """Look up ``"repetition:N"`` (or ``"repetition(N)"``), ``"five_qubit"``,
    ``"steane"`` or ``"trivial[:N]"``."""
    key = name.strip().lower().replace("(", ":").rstrip(")")
    base, _, arg = key.partition(":")
    if base == "repetition":
        if not arg:
            raise CodeError("repetition code needs a size, e.g. repetition:3")
        return repetition(int(arg))
    if base in ("five_qubit", "five-qubit", "5qubit"):
        return five_qubit()
    if base == "steane":
        return steane()
    if base == "trivial":
        return trivial(int(arg) if arg else 1)
    raise CodeError(f"unknown builtin code {name!r}")


# -- JSON -------------------------------------------------------------------------


def code_from_dict(data: Mapping) -> StabilizerCode:
    gens = [_P(g) for g in data["generators"]]
    lx = [_P(g) for g in data["logical_x"]]
    lz = [_P(g) for g in data["logical_z"]]
    n = int(data.get("n", gens[0].n if gens else lx[0].n))
    k = int(data.get("k", len(lx)))
    table = None
    if "recovery" in data:
        table = {tuple(int(c) for c in s): _P(p) for s, p in data["recovery"].items()}
    return StabilizerCode(
        n=n,
        k=k,
        d=int(data["d"]),
        generators=gens,
        logical_x=lx,
        logical_z=lz,
        name=data.get("name", "custom"),
        recovery_table=table,
    )


def code_to_dict(code: StabilizerCode) -> dict:
    return {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "d": code.d,
        "generators": [str(g).lstrip("+") for g in code.generators],
        "logical_x": [str(p).lstrip("+") for p in code.logical_x],
        "logical_z": [str(p).lstrip("+") for p in code.logical_z],
    }


def load_code(path: str | Path) -> StabilizerCode:
    with open(path) as fh:
        return code_from_dict(json.load(fh))


def load_recovery_table(code: StabilizerCode, path: str | Path) -> StabilizerCode:
    """Return a copy of ``code`` using the syndrome -> Pauli table stored in ``path``.

    The file maps syndrome bit strings (generator 0 first) to Pauli strings;
    syndromes missing from the table fall back to minimum weight.
    """
    with open(path) as fh:
        raw = json.load(fh)
    table = {tuple(int(c) for c in s): _P(p) for s, p in raw.items()}
    return StabilizerCode(
        n=code.n,
        k=code.k,
        d=code.d,
        generators=code.generators,
        logical_x=code.logical_x,
        logical_z=code.logical_z,
        name=code.name,
        recovery_table=table,
    )


def syndrome_label(s: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in s)


__all__ = [
    "CodeError",
    "StabilizerCode",
    "Syndrome",
    "builtin",
    "code_from_dict",
    "code_to_dict",
    "five_qubit",
    "load_code",
    "load_recovery_table",
    "minimum_weight_table",
    "phi_sign",
    "recovery_for_syndrome",
    "repetition",
    "stabilizer_elements",
    "steane",
    "syndrome_index",
    "syndrome_label",
    "syndrome_of",
    "trivial",
    "verify_distance",
    "weight",
]
