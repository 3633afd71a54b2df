"""Effective logical channels of stabilizer codes under local noise.

For a code with stabilizer group S (elements indexed by generator exponents
``a``) and Hermitian logical basis L, the unnormalized syndrome-``s`` map is

    M_s[L, L'] = 2**-(n-k) * sum_{S, S'} (-1)**(a.s) chi(LS) chi(L'S')
                 * prod_j R_j[(LS)_j, (L'S')_j]

where ``R_j`` is the single-qubit PTM on qubit ``j`` and ``chi`` is the sign
of a Hermitian Pauli relative to its I/X/Y/Z representative. The syndrome
probability under a maximally mixed code-space input is ``p(s) = M_s[I, I]``
and the conditional logical PTM is ``M_s / p(s)``.

The inner sum over ``S'`` does not depend on ``s``; the outer signed sum over
``S`` is a Walsh-Hadamard transform, so all syndromes come out of one pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import channels
from .codes import (
    CodeError,
    StabilizerCode,
    Syndrome,
    recovery_for_syndrome,
    syndrome_index,
    syndrome_label,
    syndrome_of,
)
from .pauli import NonHermitianError, PauliOperator, commutes, letter_index_array, multiply_arrays, to_bit_arrays

DEGENERATE_PROBABILITY = 1e-14
ROUNDOFF_FLOOR = 1e-14  # error-matrix diagonals at or below this are treated as zero
_MAX_BLOCK = 1 << 22  # entries of one stabilizer-pair product block


class NoiseModelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Probabilistic mixture of product channels, ``sum_a w_a (x)_j N^(a, j)``.

    ``terms`` holds ``(weight, factors)`` pairs with one 4x4 PTM per qubit.
    """

    terms: tuple[tuple[float, tuple[np.ndarray, ...]], ...]

    def __post_init__(self):
        terms = tuple((float(w), tuple(np.asarray(f, dtype=float) for f in fs)) for w, fs in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise NoiseModelError("noise model needs at least one term")
        n = len(terms[0][1])
        if n == 0 or any(len(fs) != n for _, fs in terms):
            raise NoiseModelError("every term needs one channel per qubit")
        weights = np.array([w for w, _ in terms])
        if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
            raise NoiseModelError("term weights must be non-negative and sum to 1")
        for _, fs in terms:
            for f in fs:
                if f.shape != (4, 4) or not channels.is_cptp(f, tol=1e-9):
                    raise NoiseModelError("every factor must be a single-qubit CPTP PTM")

    @classmethod
    def local(cls, ptms: Sequence[np.ndarray]) -> "NoiseModel":
        return cls(((1.0, tuple(ptms)),))

    @classmethod
    def iid(cls, ptm: np.ndarray, n: int) -> "NoiseModel":
        return cls.local([ptm] * n)

    @classmethod
    def correlated(cls, weights: Sequence[float], factor_lists: Sequence[Sequence[np.ndarray]]) -> "NoiseModel":
        return cls(tuple(zip(weights, (tuple(f) for f in factor_lists))))

    @property
    def n(self) -> int:
        return len(self.terms[0][1])

    def twirled(self) -> "NoiseModel":
        """Pauli twirl of every factor."""
        return NoiseModel(tuple((w, tuple(channels.pauli_twirl(f) for f in fs)) for w, fs in self.terms))

    def infidelity(self) -> float:
        """Largest single-qubit infidelity over all factors."""
        return max(channels.infidelity(f) for _, fs in self.terms for f in fs)

    def r_prime(self) -> float:
        """Smallest non-identity diagonal entry of the single-qubit error matrices."""
        return min(
            float(np.diag(channels.error_matrix(f))[1:].min()) for _, fs in self.terms for f in fs
        )

    def is_pauli(self, tol: float = 0.0) -> bool:
        return all(np.all(np.abs(f - np.diag(np.diag(f))) <= tol) for _, fs in self.terms for f in fs)


@dataclass
class SyndromeChannel:
    """Logical channel conditioned on one syndrome.

    ``ptm`` is normalized so that ``ptm[0, 0] == 1``; ``unnormalized`` equals
    ``probability * ptm``. Syndromes with probability below 1e-14 are flagged
    ``degenerate``: their probability is reported as 0 and ``ptm`` holds the
    unnormalized map.
    """

    syndrome: Syndrome
    probability: float
    ptm: np.ndarray
    unnormalized: np.ndarray
    degenerate: bool = False
    recovery: PauliOperator | None = field(default=None)

    def metrics(self) -> "CoherenceMetrics":
        return coherence_metrics(self.ptm)

    def to_dict(self) -> dict:
        out = {
            "syndrome": syndrome_label(self.syndrome),
            "probability": self.probability,
            "degenerate": self.degenerate,
            "ptm": self.ptm.tolist(),
            "metrics": self.metrics().to_dict(),
        }
        if self.recovery is not None:
            out["recovery"] = str(self.recovery).lstrip("+")
        return out


# -- the factorized stabilizer-pair sum ---------------------------------------------


def _coset_letters(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """Letter indices ``[l, a, j]`` and signs ``[l, a]`` of every product ``L_l S_a``."""
    sx, sz, sph = code.stabilizer_arrays
    letters, signs = [], []
    for lop in code.logical_operators:
        lx, lz = to_bit_arrays(lop)
        x, z, ph = multiply_arrays(
            np.broadcast_to(lx, sx.shape), np.broadcast_to(lz, sz.shape), np.full(len(sph), lop.phase), sx, sz, sph
        )
        if np.any(ph % 2):
            raise NonHermitianError("a logical-stabilizer product is not Hermitian")
        letters.append(letter_index_array(x, z))
        signs.append(1 - ph)  # phase 0 -> +1, phase 2 -> -1
    return np.array(letters), np.array(signs, dtype=float)


def _pair_sums(code: StabilizerCode, factors: Sequence[np.ndarray], letters: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """``T[l, l', a] = chi(L S_a) sum_{a'} chi(L' S_a') prod_j R_j[(LS_a)_j, (L'S_a')_j]``."""
    nl, ns, n = letters.shape
    out = np.empty((nl, nl, ns))
    rows_per_block = max(1, _MAX_BLOCK // ns)
    for l in range(nl):
        for lp in range(nl):
            acc = np.empty(ns)
            for start in range(0, ns, rows_per_block):
                stop = min(ns, start + rows_per_block)
                block = np.ones((stop - start, ns))
                for j in range(n):
                    block *= factors[j][np.ix_(letters[l, start:stop, j], letters[lp, :, j])]
                acc[start:stop] = block @ signs[lp]
            out[l, lp] = signs[l] * acc
    return out


def _walsh_hadamard(values: np.ndarray, r: int) -> np.ndarray:
    """``out[..., s] = sum_a (-1)**popcount(a & s) * values[..., a]``."""
    lead = values.shape[:-1]
    v = values.reshape(lead + (2,) * r)
    for axis in range(len(lead), len(lead) + r):
        a = np.take(v, 0, axis=axis)
        b = np.take(v, 1, axis=axis)
        v = np.stack([a + b, a - b], axis=axis)
    return v.reshape(values.shape)


def _check_sizes(code: StabilizerCode, noise: NoiseModel) -> None:
    if noise.n != code.n:
        raise NoiseModelError(f"noise acts on {noise.n} qubits, code has {code.n}")


def stabilizer_pair_sums(code: StabilizerCode, noise: NoiseModel) -> np.ndarray:
    """Weighted ``T[l, l', a]`` summed over the noise terms."""
    _check_sizes(code, noise)
    letters, signs = _coset_letters(code)
    total = None
    for w, factors in noise.terms:
        t = w * _pair_sums(code, factors, letters, signs)
        total = t if total is None else total + t
    return total


def unnormalized_maps(code: StabilizerCode, noise: NoiseModel) -> np.ndarray:
    """``p(s) * N(s)`` for every syndrome, shape ``(2**(n-k), 4**k, 4**k)``."""
    t = stabilizer_pair_sums(code, noise)
    r = code.num_generators
    m = _walsh_hadamard(t, r) / (1 << r)
    return np.moveaxis(m, -1, 0)


def _make_channel(s: Syndrome, m: np.ndarray) -> SyndromeChannel:
    p = float(m[0, 0])
    if p < DEGENERATE_PROBABILITY:
        return SyndromeChannel(tuple(s), 0.0, m.copy(), m, degenerate=True)
    return SyndromeChannel(tuple(s), p, m / p, m)


def logical_channel_factorized(code: StabilizerCode, noise: NoiseModel, s: Sequence[int]) -> SyndromeChannel:
    """Logical channel and probability of a single syndrome ``s``."""
    s = tuple(int(b) for b in s)
    if len(s) != code.num_generators:
        raise CodeError(f"syndrome has {len(s)} bits, code has {code.num_generators} generators")
    t = stabilizer_pair_sums(code, noise)
    r = code.num_generators
    idx = np.arange(1 << r)
    phi = np.where(np.array([bin(a & syndrome_index(s)).count("1") % 2 for a in idx]), -1.0, 1.0)
    return _make_channel(s, (t @ phi) / (1 << r))


def syndrome_distribution(code: StabilizerCode, noise: NoiseModel) -> list[SyndromeChannel]:
    """Conditional logical channels for every syndrome, ordered by syndrome index."""
    maps = unnormalized_maps(code, noise)
    return [_make_channel(s, m) for s, m in zip(code.syndromes(), maps)]


# -- recovery, averaging, metrics -----------------------------------------------------


def recovery_signs(code: StabilizerCode, recovery: PauliOperator) -> np.ndarray:
    """+1 where the recovery commutes with the logical basis element, else -1."""
    return np.array([1.0 if commutes(recovery, lop) else -1.0 for lop in code.logical_operators])


def apply_recovery(sc: SyndromeChannel, code: StabilizerCode, recovery: PauliOperator) -> SyndromeChannel:
    """Compose the syndrome channel with conjugation by the recovery Pauli."""
    if syndrome_of(code, recovery) != tuple(sc.syndrome):
        raise CodeError(f"recovery {recovery} does not have syndrome {syndrome_label(sc.syndrome)}")
    c = recovery_signs(code, recovery)[:, None]
    return SyndromeChannel(sc.syndrome, sc.probability, c * sc.ptm, c * sc.unnormalized, sc.degenerate, recovery)


def recover_all(code: StabilizerCode, chans: Sequence[SyndromeChannel]) -> list[SyndromeChannel]:
    """Apply the code's recovery map (custom table or minimum weight) to each channel."""
    return [apply_recovery(sc, code, recovery_for_syndrome(code, sc.syndrome)) for sc in chans]


def average_logical_channel(chans: Sequence[SyndromeChannel]) -> np.ndarray:
    """``sum_s p(s) N(s)`` over a complete set of syndromes."""
    if not chans:
        raise CodeError("no syndrome channels to average")
    r = len(chans[0].syndrome)
    seen = {tuple(sc.syndrome) for sc in chans}
    if len(seen) != len(chans) or len(seen) != 1 << r:
        raise CodeError(f"incomplete syndrome set: {len(seen)} of {1 << r} syndromes")
    return sum(sc.unnormalized for sc in chans)


@dataclass(frozen=True)
class CoherenceMetrics:
    logical_infidelity: float
    max_offdiag: float
    offdiag_frobenius: float
    diag_ratio: float

    def to_dict(self) -> dict:
        return {
            "logical_infidelity": self.logical_infidelity,
            "max_offdiag": self.max_offdiag,
            "offdiag_frobenius": self.offdiag_frobenius,
            "diag_ratio": self.diag_ratio,
        }


def logical_infidelity(ptm: np.ndarray) -> float:
    """``(d**2 - Tr R) / (d**2 + d)`` for a PTM on a ``d``-dimensional space."""
    dim2 = ptm.shape[0]
    dim = int(round(np.sqrt(dim2)))
    return float((dim2 - np.trace(ptm)) / (dim2 + dim))


def coherence_metrics(ptm: np.ndarray) -> CoherenceMetrics:
    ptm = np.asarray(ptm, dtype=float)
    off = ptm - np.diag(np.diag(ptm))
    r = logical_infidelity(ptm)
    max_off = float(np.abs(off).max()) if off.size else 0.0
    ratio = max_off / r if r > 0 else 0.0
    return CoherenceMetrics(r, max_off, float(np.linalg.norm(off)), ratio)


def logical_error_matrix(ptm: np.ndarray) -> np.ndarray:
    """Entrywise ``|I - R|``."""
    ptm = np.asarray(ptm, dtype=float)
    return np.abs(np.eye(ptm.shape[0]) - ptm)


# -- repeated rounds -------------------------------------------------------------------


@dataclass
class RoundsReport:
    """Exact and truncated-binomial expansions of ``(I - E)**h``.

    ``pauli_pauli`` and ``coherent_coherent`` split the diagonal of the
    second-order term ``C(h, 2) E**2`` into ``E[s,s]**2`` and
    ``sum_{t != s} E[s,t] E[t,s]``. Crossover estimates are minima over the
    non-identity logical Paulis with ``E[s,s]`` above round-off and are ``inf`` when a
    crossing never happens.
    """

    h: int
    exact: np.ndarray
    first_order: np.ndarray
    second_order: np.ndarray
    pauli_pauli: np.ndarray
    coherent_coherent: np.ndarray
    h_pauli: float
    h_coherent: float
    h_crit: float


def _crossovers(err: np.ndarray) -> tuple[float, float]:
    diag = np.diag(err)
    coh = np.einsum("st,ts->s", err, err) - diag**2
    h_p = h_c = np.inf
    for sigma in range(1, err.shape[0]):
        if diag[sigma] <= ROUNDOFF_FLOOR:
            continue
        # C(h,2) x = h y  <=>  h = 1 + 2 y / x
        h_p = min(h_p, 1 + 2 / diag[sigma])
        if coh[sigma] > 0:
            h_c = min(h_c, 1 + 2 * diag[sigma] / coh[sigma])
    return float(h_p), float(h_c)


def coherent_crossover_scan(err: np.ndarray, h_max: int = 10**7) -> float:
    """Smallest ``h`` where the coherent part of the exact ``(I - E)**h``
    diagonal exceeds the first-order term ``h E[s,s]``.

    The coherent part is ``(I - E)**h - (I - diag E)**h`` on the diagonal,
    obtained from exact matrix powers. Uses doubling then bisection, so it
    assumes the crossing is monotone in ``h``.
    """
    err = np.asarray(err, dtype=float)
    dim = err.shape[0]
    diag = np.diag(err)
    live = [s for s in range(1, dim) if diag[s] > ROUNDOFF_FLOOR]
    if not live:
        return float("inf")
    full = np.eye(dim) - err
    pauli = np.eye(dim) - np.diag(diag)

    def crossed(h: int) -> bool:
        a = np.linalg.matrix_power(full, h)
        b = np.linalg.matrix_power(pauli, h)
        coh = np.abs(np.diag(a - b))
        return any(coh[s] > h * diag[s] for s in live)

    hi = 1
    while not crossed(hi):
        hi *= 2
        if hi > h_max:
            return float("inf")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if crossed(mid):
            hi = mid
        else:
            lo = mid
    return float(hi)


def rounds_accumulation(err: np.ndarray, h: int) -> RoundsReport:
    if h < 1:
        raise ValueError("h must be at least 1")
    err = np.asarray(err, dtype=float)
    dim = err.shape[0]
    ident = np.eye(dim)
    sq = err @ err
    diag = np.diag(err)
    h_p, h_c = _crossovers(err)
    return RoundsReport(
        h=h,
        exact=np.linalg.matrix_power(ident - err, h),
        first_order=h * err,
        second_order=comb(h, 2) * sq,
        pauli_pauli=comb(h, 2) * diag**2,
        coherent_coherent=comb(h, 2) * (np.diag(sq) - diag**2),
        h_pauli=h_p,
        h_coherent=h_c,
        h_crit=coherent_crossover_scan(err),
    )
