"""Brute-force dense simulation of syndrome-conditioned logical channels.

Everything here works on explicit ``2**n x 2**n`` matrices: projectors are
built as products of ``(I +- g)/2``, noise is applied qubit by qubit through
Kraus operators, and matrix elements are trace inner products. None of it
goes through the stabilizer-pair factorization in ``logical``.
"""
from __future__ import annotations

from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from . import channels
from .codes import StabilizerCode
from .logical import NoiseModel
from .pauli import MAX_DENSE_QUBITS, ResourceError, dense_matrix

KrausLocal = Sequence[Sequence[np.ndarray]]  # one Kraus set per qubit


def _check_cap(n: int) -> None:
    if n > MAX_DENSE_QUBITS:
        raise ResourceError(f"dense oracle limited to {MAX_DENSE_QUBITS} qubits, got {n}")


def projector(code: StabilizerCode, s: Sequence[int]) -> np.ndarray:
    """``prod_j (I + (-1)**s_j g_j) / 2`` as a dense matrix."""
    _check_cap(code.n)
    dim = 1 << code.n
    ident = np.eye(dim, dtype=complex)
    factors = [(ident + (-1) ** int(sj) * dense_matrix(g)) / 2 for sj, g in zip(s, code.generators)]
    return reduce(np.matmul, factors, ident)


@lru_cache(maxsize=8)
def _syndrome_bras(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """Code-space projector and ``L P_s`` for every syndrome and logical (cached)."""
    lops = [dense_matrix(lop) for lop in code.logical_operators]
    p0 = projector(code, (0,) * code.num_generators)
    bras = np.array([[lop @ projector(code, s) for lop in lops] for s in code.syndromes()])
    return p0, bras


def apply_local_kraus(kraus_sets: KrausLocal, op: np.ndarray) -> np.ndarray:
    """Apply ``(x)_j N_j`` to a dense operator one qubit at a time."""
    n = len(kraus_sets)
    t = op.reshape((2,) * (2 * n))
    for j, ks in enumerate(kraus_sets):
        out = np.zeros_like(t)
        for k in ks:
            # row index j and column index n+j of the tensor
            u = np.moveaxis(np.tensordot(k, t, axes=([1], [j])), 0, j)
            out += np.moveaxis(np.tensordot(u, k.conj(), axes=([n + j], [1])), -1, n + j)
        t = out
    return t.reshape(op.shape)


def kraus_terms(noise: NoiseModel) -> list[tuple[float, list[list[np.ndarray]]]]:
    """Per-term, per-qubit Kraus sets for a noise model given as PTMs."""
    return [(w, [channels.kraus_from_ptm(f) for f in fs]) for w, fs in noise.terms]


def _as_terms(noise) -> list[tuple[float, list[list[np.ndarray]]]]:
    if isinstance(noise, NoiseModel):
        return kraus_terms(noise)
    if noise and isinstance(noise[0], tuple):
        return list(noise)  # already (weight, kraus sets) terms
    return [(1.0, [list(ks) for ks in noise])]


def _apply_noise(terms, op: np.ndarray) -> np.ndarray:
    # term by term, then weighted sum
    return sum(w * apply_local_kraus(ks, op) for w, ks in terms)


def oracle_syndrome_probability(code: StabilizerCode, noise, s: Sequence[int]) -> float:
    """``2**-k Tr(P_s N(P_0))``."""
    terms = _as_terms(noise)
    _check_cap(code.n)
    p0 = projector(code, (0,) * code.num_generators)
    ps = projector(code, s)
    return float(np.trace(ps @ _apply_noise(terms, p0)).real / (1 << code.k))


def oracle_unnormalized_element(code: StabilizerCode, terms, s, l: int, lp: int) -> float:
    lops = code.logical_operators
    p0 = projector(code, (0,) * code.num_generators)
    ps = projector(code, s)
    out = _apply_noise(terms, dense_matrix(lops[lp]) @ p0)
    value = np.trace((dense_matrix(lops[l]) @ ps).conj().T @ out)
    return float(value.real / (1 << code.k))


def oracle_logical_element(code: StabilizerCode, noise, s: Sequence[int], l: int, lp: int) -> float:
    """``<<L P_s| N |L' P_0>> / (p(s) 2**k)`` for logical basis indices ``l``, ``lp``."""
    terms = _as_terms(noise)
    p = oracle_syndrome_probability(code, terms, s)
    return oracle_unnormalized_element(code, terms, s, l, lp) / p


def oracle_unnormalized_maps(code: StabilizerCode, noise) -> np.ndarray:
    """All ``p(s) N(s)`` at once, shape ``(2**(n-k), 4**k, 4**k)``.

    The noise is applied once per input basis operator ``L' P_0``.
    """
    terms = _as_terms(noise)
    _check_cap(code.n)
    p0, bras = _syndrome_bras(code)
    lops = [dense_matrix(lop) for lop in code.logical_operators]
    images = np.array([_apply_noise(terms, lop @ p0) for lop in lops])
    # Tr((L P_s)^dagger N(L' P_0)) for all s, L, L'
    out = np.einsum("slij,mij->slm", bras.conj(), images).real
    return out / (1 << code.k)


def oracle_distribution(code: StabilizerCode, noise) -> tuple[np.ndarray, np.ndarray]:
    """``(p, ptms)`` for every syndrome; ``ptms[i]`` is NaN where ``p`` < 1e-14."""
    maps = oracle_unnormalized_maps(code, noise)
    p = maps[:, 0, 0].copy()
    with np.errstate(invalid="ignore", divide="ignore"):
        ptms = np.where(p[:, None, None] >= 1e-14, maps / p[:, None, None], np.nan)
    return p, ptms
