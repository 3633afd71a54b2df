"""Pauli transfer matrices, Kraus and Choi forms, and channel diagnostics.

A process matrix (PTM) here is a real ``4**m x 4**m`` numpy array in the
normalized Pauli basis ordered (I, X, Y, Z) per qubit, with entries

    R[a, b] = Tr(P_a N(P_b)) / 2**m.

Composition of channels is matrix multiplication of their PTMs. Channels are
plain arrays; the functions below never mutate their inputs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .pauli import PAULI_MATRICES

CHOI_TOL = 1e-10
KRAUS_TOL = 1e-10
NOT_CPTP_TOL = 1e-8

_AXES = {"X": (1.0, 0.0, 0.0), "Y": (0.0, 1.0, 0.0), "Z": (0.0, 0.0, 1.0)}


class ChannelError(ValueError):
    """Invalid channel data: not trace preserving, not CP, or bad parameters."""


def pauli_basis(m: int) -> np.ndarray:
    """Unnormalized m-qubit Pauli matrices, shape ``(4**m, 2**m, 2**m)``."""
    mats = [reduce(np.kron, combo) for combo in itertools.product(PAULI_MATRICES, repeat=m)]
    return np.array(mats)


def _num_qubits(dim: int) -> int:
    m = int(round(np.log2(dim)))
    if 2**m != dim:
        raise ChannelError(f"dimension {dim} is not a power of two")
    return m


def _ptm_qubits(ptm: np.ndarray) -> int:
    ptm = np.asarray(ptm)
    if ptm.ndim != 2 or ptm.shape[0] != ptm.shape[1]:
        raise ChannelError(f"PTM must be square, got shape {ptm.shape}")
    m = int(round(np.log(ptm.shape[0]) / np.log(4)))
    if 4**m != ptm.shape[0]:
        raise ChannelError(f"PTM dimension {ptm.shape[0]} is not a power of four")
    return m


# -- representations ----------------------------------------------------------


def validate_kraus(kraus: Sequence[np.ndarray], tol: float = KRAUS_TOL) -> list[np.ndarray]:
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise ChannelError("empty Kraus set")
    dim = ops[0].shape[0]
    if any(k.shape != (dim, dim) for k in ops):
        raise ChannelError("Kraus operators must be square and of equal size")
    _num_qubits(dim)
    total = sum(k.conj().T @ k for k in ops)
    if not np.allclose(total, np.eye(dim), atol=tol, rtol=0):
        raise ChannelError("Kraus set is not trace preserving")
    return ops


def apply_kraus(kraus: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def ptm_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """PTM of the channel ``rho -> sum_i K_i rho K_i^dagger``."""
    ops = validate_kraus(kraus)
    dim = ops[0].shape[0]
    basis = pauli_basis(_num_qubits(dim))
    # images[b] = N(P_b)
    images = np.einsum("kij,bjl,kml->bim", np.array(ops), basis, np.conj(np.array(ops)))
    ptm = np.einsum("aji,bij->ab", basis, images) / dim
    return ptm.real.copy()


def choi_of(ptm: np.ndarray) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) N(|i><j|)`` (trace ``2**m``).

    Input index comes first in the tensor ordering.
    """
    m = _ptm_qubits(ptm)
    dim = 2**m
    basis = pauli_basis(m)
    # |i><j| = 2^-m sum_b <j|P_b|i> P_b  =>  J = 2^-m sum_ab R_ab P_b^T (x) P_a
    choi = np.zeros((dim * dim, dim * dim), dtype=complex)
    ptm = np.asarray(ptm, dtype=float)
    for b in range(4**m):
        image = np.tensordot(ptm[:, b], basis, axes=1)
        choi += np.kron(basis[b].T, image)
    return choi / dim


def is_cptp(ptm: np.ndarray, tol: float = CHOI_TOL) -> bool:
    ptm = np.asarray(ptm, dtype=float)
    e0 = np.zeros(ptm.shape[0])
    e0[0] = 1.0
    if not np.allclose(ptm[0], e0, atol=tol, rtol=0):
        return False
    return bool(np.linalg.eigvalsh(choi_of(ptm)).min() >= -tol)


def kraus_from_ptm(ptm: np.ndarray, tol: float = NOT_CPTP_TOL) -> list[np.ndarray]:
    """Canonical Kraus operators from the eigendecomposition of the Choi matrix."""
    m = _ptm_qubits(ptm)
    dim = 2**m
    choi = choi_of(ptm)
    choi = (choi + choi.conj().T) / 2
    vals, vecs = np.linalg.eigh(choi)
    if vals.min() < -tol:
        raise ChannelError(f"Choi matrix has eigenvalue {vals.min():.3e}; channel is not CP")
    kraus = []
    for lam, v in zip(vals[::-1], vecs.T[::-1]):
        if lam <= 1e-14:
            continue
        # v is indexed (input i, output o); K[o, i] = sqrt(lam) v[i, o]
        kraus.append(np.sqrt(lam) * v.reshape(dim, dim).T)
    return kraus


def ptm_from_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=KRAUS_TOL):
        raise ChannelError("matrix is not unitary")
    return ptm_from_kraus([u])


# -- standard channels ----------------------------------------------------------


def identity(m: int = 1) -> np.ndarray:
    return np.eye(4**m)


def depolarizing(p: float) -> np.ndarray:
    """Depolarizing channel ``diag(1, 1-p, 1-p, 1-p)``; ``p`` may reach 4/3."""
    if not 0 <= p <= 4 / 3:
        raise ChannelError(f"depolarizing parameter {p} outside [0, 4/3]")
    return np.diag([1.0, 1 - p, 1 - p, 1 - p])


def dephasing(p: float) -> np.ndarray:
    """Phase flip with probability ``p``."""
    if not 0 <= p <= 1:
        raise ChannelError(f"dephasing probability {p} outside [0, 1]")
    return np.diag([1.0, 1 - 2 * p, 1 - 2 * p, 1.0])


def bit_flip(p: float) -> np.ndarray:
    """X flip with probability ``p``."""
    if not 0 <= p <= 1:
        raise ChannelError(f"bit-flip probability {p} outside [0, 1]")
    return np.diag([1.0, 1.0, 1 - 2 * p, 1 - 2 * p])


def pauli_channel(px: float, py: float, pz: float) -> np.ndarray:
    probs = np.array([1 - px - py - pz, px, py, pz])
    if np.any(probs < -1e-15):
        raise ChannelError(f"invalid Pauli probabilities {probs}")
    # R_aa = sum_b p_b (+1 if P_a, P_b commute else -1)
    signs = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
    return np.diag(signs @ probs)


def amplitude_damping(gamma: float) -> np.ndarray:
    if not 0 <= gamma <= 1:
        raise ChannelError(f"damping parameter {gamma} outside [0, 1]")
    s = np.sqrt(1 - gamma)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, s, 0.0, 0.0],
            [0.0, 0.0, s, 0.0],
            [gamma, 0.0, 0.0, 1 - gamma],
        ]
    )


def rotation_unitary(axis, theta: float) -> np.ndarray:
    if isinstance(axis, str):
        if axis.upper() not in _AXES:
            raise ChannelError(f"unknown rotation axis {axis!r}")
        axis = _AXES[axis.upper()]
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or not np.isclose(np.linalg.norm(n), 1.0, atol=1e-9):
        raise ChannelError("rotation axis must be a unit 3-vector")
    gen = sum(c * P for c, P in zip(n, PAULI_MATRICES[1:]))
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * gen


def rotation(axis, theta: float) -> np.ndarray:
    """PTM of ``exp(-i theta n.sigma / 2)``."""
    return ptm_from_unitary(rotation_unitary(axis, theta))


def unitary(u: np.ndarray) -> np.ndarray:
    return ptm_from_unitary(u)


def kraus(ops: Sequence[np.ndarray]) -> np.ndarray:
    return ptm_from_kraus(ops)


def compose(channels: Sequence[np.ndarray]) -> np.ndarray:
    """Channel applying ``channels[0]`` first, then ``channels[1]``, and so on."""
    if not channels:
        raise ChannelError("compose needs at least one channel")
    out = np.asarray(channels[0], dtype=float)
    for ch in channels[1:]:
        out = np.asarray(ch, dtype=float) @ out
    return out


def mixture(weights: Sequence[float], channels: Sequence[np.ndarray]) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if len(w) != len(channels) or len(w) == 0:
        raise ChannelError("weights and channels must be non-empty and of equal length")
    if np.any(w < 0) or not np.isclose(w.sum(), 1.0, atol=1e-12):
        raise ChannelError("mixture weights must be non-negative and sum to 1")
    return sum(wi * np.asarray(ch, dtype=float) for wi, ch in zip(w, channels))


# -- random channels ------------------------------------------------------------


def random_kraus(rng: np.random.Generator, m: int = 1, rank: int | None = None) -> list[np.ndarray]:
    """Haphazard CPTP map: a Gaussian ``(rank*d) x d`` matrix orthonormalized by QR."""
    dim = 2**m
    rank = dim * dim if rank is None else rank
    g = rng.standard_normal((rank * dim, dim)) + 1j * rng.standard_normal((rank * dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))  # fix the column phases
    return [q[i * dim:(i + 1) * dim] for i in range(rank)]


def random_ptm(rng: np.random.Generator, m: int = 1, rank: int | None = None) -> np.ndarray:
    return ptm_from_kraus(random_kraus(rng, m, rank))


def random_ptms_batch(rng: np.random.Generator, count: int, rank: int = 4) -> np.ndarray:
    """``count`` random single-qubit PTMs, shape ``(count, 4, 4)``."""
    g = rng.standard_normal((count, 2 * rank, 2)) + 1j * rng.standard_normal((count, 2 * rank, 2))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    ops = q.reshape(count, rank, 2, 2)
    basis = pauli_basis(1)
    images = np.einsum("ckij,bjl,ckml->cbim", ops, basis, ops.conj())
    return np.einsum("aji,cbij->cab", basis, images).real / 2


def random_pauli_ptm(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    probs = rng.dirichlet(np.ones(4))
    probs[1:] *= scale
    probs[0] = 1 - probs[1:].sum()
    return pauli_channel(*probs[1:])


# -- diagnostics ----------------------------------------------------------------


def infidelity(ptm: np.ndarray) -> float:
    """Average gate infidelity to the identity of a single-qubit PTM."""
    ptm = np.asarray(ptm, dtype=float)
    if ptm.shape != (4, 4):
        raise ChannelError("infidelity() takes a single-qubit PTM; see coherence_metrics")
    return float((4 - np.trace(ptm)) / 6)


def error_matrix(ptm: np.ndarray) -> np.ndarray:
    ptm = np.asarray(ptm, dtype=float)
    return np.abs(np.eye(ptm.shape[0]) - ptm)


def pauli_twirl(ptm: np.ndarray) -> np.ndarray:
    return np.diag(np.diag(np.asarray(ptm, dtype=float)))


def diamond_bounds(r: float, m: int = 2) -> tuple[float, float]:
    """Lower and upper bounds on the diamond distance from the infidelity ``r``
    of an ``m``-level channel."""
    if r < 0:
        raise ValueError("infidelity must be non-negative")
    if m < 2:
        raise ValueError("dimension must be at least 2")
    return r * (1 + 1 / m), float(np.sqrt(m * (m + 1) * r))


@dataclass(frozen=True)
class Lemma1Report:
    """Slack (bound minus value) for each entry-bound family of the error matrix.

    ``trace_preserving`` holds ``-E[0, b]`` for all ``b``; ``non_unital`` is
    ``3r - E[s, 0]``; ``diagonal`` is ``3r - E[s, s]``; ``off_diagonal`` is
    ``sqrt(6r) - E[s, t]`` for non-identity ``s != t``.
    """

    infidelity: float
    trace_preserving: np.ndarray
    non_unital: np.ndarray
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    tol: float

    def min_slacks(self) -> dict[str, float]:
        return {
            "trace_preserving": float(self.trace_preserving.min()),
            "non_unital": float(self.non_unital.min()),
            "diagonal": float(self.diagonal.min()),
            "off_diagonal": float(self.off_diagonal.min()),
        }

    @property
    def passed(self) -> bool:
        return all(v >= -self.tol for v in self.min_slacks().values())


_OFF = [(s, t) for s in range(1, 4) for t in range(1, 4) if s != t]


def lemma1_slacks(ptms: np.ndarray) -> dict[str, np.ndarray]:
    """Batched slacks for PTMs of shape ``(..., 4, 4)``; each value has shape ``(...,)``."""
    ptms = np.asarray(ptms, dtype=float)
    err = np.abs(np.eye(4) - ptms)
    r = (4 - np.trace(ptms, axis1=-2, axis2=-1)) / 6
    r = np.maximum(r, 0.0)[..., None]
    return {
        "trace_preserving": (-err[..., 0, :]).min(axis=-1),
        "non_unital": (3 * r - err[..., 1:, 0]).min(axis=-1),
        "diagonal": (3 * r - np.diagonal(err, axis1=-2, axis2=-1)[..., 1:]).min(axis=-1),
        "off_diagonal": (
            np.sqrt(6 * r) - np.stack([err[..., s, t] for s, t in _OFF], axis=-1)
        ).min(axis=-1),
    }


def check_lemma1(ptm: np.ndarray, tol: float = 1e-9) -> Lemma1Report:
    """Check the infidelity bounds on every entry of the single-qubit error matrix."""
    ptm = np.asarray(ptm, dtype=float)
    err = error_matrix(ptm)
    r = infidelity(ptm)
    rr = max(r, 0.0)
    return Lemma1Report(
        infidelity=r,
        trace_preserving=-err[0, :],
        non_unital=3 * rr - err[1:, 0],
        diagonal=3 * rr - np.diag(err)[1:],
        off_diagonal=np.array([np.sqrt(6 * rr) - err[s, t] for s, t in _OFF]),
        tol=tol,
    )


def haar_average_infidelity(
    kraus_ops: Sequence[np.ndarray], samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte-Carlo estimate of ``1 - E_psi <psi|N(psi)|psi>`` and its standard error.

    Pure states are drawn from the Haar measure as normalized complex Gaussian
    vectors; the channel is applied through its Kraus operators.
    """
    ops = np.array(validate_kraus(kraus_ops))
    dim = ops.shape[-1]
    psi = rng.standard_normal((samples, dim)) + 1j * rng.standard_normal((samples, dim))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    # <psi|K|psi> for every Kraus operator and sample
    amps = np.einsum("si,kij,sj->sk", psi.conj(), ops, psi)
    loss = 1 - (np.abs(amps) ** 2).sum(axis=1)
    return float(loss.mean()), float(loss.std(ddof=1) / np.sqrt(samples))
