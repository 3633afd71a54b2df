"""Parameter sweeps, rounds analysis, oracle verification and fuzzing of the error-matrix bounds.

These are the routines behind the command-line tools; they return plain
records so that scripts and tests can use them without going through files.
"""
from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import channels, oracle
from .codes import StabilizerCode, verify_distance
from .logical import (
    NoiseModel,
    SyndromeChannel,
    average_logical_channel,
    coherence_metrics,
    logical_error_matrix,
    recover_all,
    rounds_accumulation,
    syndrome_distribution,
)
from .pauli import MAX_DENSE_QUBITS, PAULI_MATRICES
from .specs import channel_from_spec, code_from_spec

SWEEP_COLUMNS = (
    "kind",
    "code",
    "n",
    "distance",
    "effective_distance",
    "param",
    "r_phys",
    "max_offdiag",
    "offdiag_frobenius",
    "logical_infidelity",
    "diag_ratio",
    "phys_diag_ratio",
    "avg_abs_offdiag",
    "oracle_dev",
)

ROUNDS_COLUMNS = (
    "h",
    "logical",
    "exact_diag",
    "first_order",
    "pauli_pauli",
    "coherent_coherent",
    "exact_coherent",
)


class ConfigError(ValueError):
    pass


# -- helpers ----------------------------------------------------------------------


def noise_letters(ptm: np.ndarray, tol: float = 1e-12) -> str:
    """Pauli letters appearing in the Kraus operators of a single-qubit channel."""
    used = set()
    for k in channels.kraus_from_ptm(ptm):
        for letter, p in zip("IXYZ", PAULI_MATRICES):
            if abs(np.trace(p @ k)) > tol:
                used.add(letter)
    return "".join(c for c in "XYZ" if c in used)


def effective_distance(code: StabilizerCode, noise: NoiseModel) -> int:
    """Distance against Paulis built only from letters the noise can produce."""
    letters = set()
    for _, fs in noise.terms:
        for f in fs:
            letters |= set(noise_letters(f))
    letters_str = "".join(c for c in "XYZ" if c in letters)
    if not letters_str:
        return code.n
    try:
        return verify_distance(code, letters_str)
    except ValueError:
        return code.n  # no logical operator reachable with these letters


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x`` over positive pairs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = (x > 0) & (y > 0)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


def verify_against_oracle(code: StabilizerCode, noise: NoiseModel, chans: Sequence[SyndromeChannel] | None = None) -> dict[str, float]:
    """Largest deviations of ``p(s)`` and of the normalized per-syndrome PTMs
    between the factorized path and the dense oracle."""
    if code.n > MAX_DENSE_QUBITS:
        raise ValueError(f"oracle verification needs n <= {MAX_DENSE_QUBITS}")
    chans = syndrome_distribution(code, noise) if chans is None else chans
    maps = oracle.oracle_unnormalized_maps(code, noise)
    p_dev = ptm_dev = 0.0
    for sc, m in zip(chans, maps):
        p = m[0, 0]
        p_dev = max(p_dev, abs(sc.unnormalized[0, 0] - p))
        if sc.degenerate or p < 1e-14:
            ptm_dev = max(ptm_dev, float(np.abs(sc.unnormalized - m).max()))
        else:
            ptm_dev = max(ptm_dev, float(np.abs(sc.ptm - m / p).max()))
    return {"probability": float(p_dev), "ptm": ptm_dev, "max": max(float(p_dev), ptm_dev)}


# -- single-point analysis -------------------------------------------------------------


@dataclass
class LogicalReport:
    code: StabilizerCode
    noise: NoiseModel
    channels: list[SyndromeChannel]
    average: np.ndarray
    recovery: str
    verification: dict[str, float] | None = None

    def to_dict(self) -> dict[str, Any]:
        out = {
            "code": {"name": self.code.name, "n": self.code.n, "k": self.code.k, "d": self.code.d},
            "recovery": self.recovery,
            "physical_infidelity": self.noise.infidelity(),
            "r_prime": self.noise.r_prime(),
            "probability_sum": float(sum(sc.probability for sc in self.channels)),
            "syndromes": [sc.to_dict() for sc in self.channels],
            "average": {
                "ptm": self.average.tolist(),
                "metrics": coherence_metrics(self.average).to_dict(),
            },
        }
        if self.verification is not None:
            out["verification"] = self.verification
        return out


def analyze(code: StabilizerCode, noise: NoiseModel, recovery: str = "none", verify: bool = False) -> LogicalReport:
    """Per-syndrome and syndrome-averaged logical channels.

    ``recovery`` is ``"none"`` or ``"minweight"``; a code carrying a custom
    recovery table uses it for ``"minweight"`` too (reported as ``"table"``).
    """
    raw = syndrome_distribution(code, noise)
    verification = verify_against_oracle(code, noise, raw) if verify else None
    if recovery == "none":
        chans = raw
    elif recovery in ("minweight", "table"):
        chans = recover_all(code, raw)
        recovery = "table" if code.recovery_table is not None else "minweight"
    else:
        raise ConfigError(f"unknown recovery mode {recovery!r}")
    return LogicalReport(code, noise, chans, average_logical_channel(chans), recovery, verification)


# -- sweeps ----------------------------------------------------------------------------


@dataclass
class SweepConfig:
    """A grid of (code, noise parameter) points.

    ``noise`` is a channel spec template whose ``param_key`` entry is replaced
    by each grid value, e.g. ``{"type": "rotation", "axis": "X"}`` with
    ``param_key="angle"``.
    """

    codes: list[str]
    noise: dict
    param_key: str
    grid: list[float]
    recovery: bool = True
    verify: bool = False
    jobs: int = 1
    metrics: list[str] = field(default_factory=lambda: ["max_offdiag", "logical_infidelity"])

    def __post_init__(self):
        if not self.codes:
            raise ConfigError("sweep needs at least one code")
        if len(self.grid) == 0:
            raise ConfigError("sweep grid is empty")
        for v in self.grid:
            spec = dict(self.noise, **{self.param_key: v})
            channel_from_spec(spec)  # range check


def _sweep_point(args) -> dict[str, Any]:
    code_name, noise_spec, value, recovery, verify = args
    code = code_from_spec(code_name)
    phys = channel_from_spec(noise_spec)
    noise = NoiseModel.iid(phys, code.n)
    report = analyze(code, noise, "minweight" if recovery else "none", verify=verify and code.n <= MAX_DENSE_QUBITS)
    m = coherence_metrics(report.average)
    pm = coherence_metrics(phys)
    return {
        "kind": "point",
        "code": code.name,
        "n": code.n,
        "distance": code.d,
        "effective_distance": effective_distance(code, noise),
        "param": float(value),
        "r_phys": channels.infidelity(phys),
        "max_offdiag": m.max_offdiag,
        "offdiag_frobenius": m.offdiag_frobenius,
        "logical_infidelity": m.logical_infidelity,
        "diag_ratio": m.diag_ratio,
        "phys_diag_ratio": pm.diag_ratio,
        "avg_abs_offdiag": float(sum(sc.probability * coherence_metrics(sc.ptm).max_offdiag for sc in report.channels)),
        "oracle_dev": report.verification["max"] if report.verification else "",
    }


def run_sweep(config: SweepConfig) -> list[dict[str, Any]]:
    """Point rows in grid order followed by one fit row per code.

    Fit rows carry the log-log slopes against ``r_phys`` in the metric columns.
    """
    tasks = [
        (c, dict(config.noise, **{config.param_key: v}), v, config.recovery, config.verify)
        for c in config.codes
        for v in config.grid
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    fits = []
    for c in config.codes:
        pts = [r for r in rows if r["code"] == code_from_spec(c).name]
        fit = {k: "" for k in SWEEP_COLUMNS}
        fit.update(kind="fit", code=pts[0]["code"], n=pts[0]["n"], distance=pts[0]["distance"],
                   effective_distance=pts[0]["effective_distance"])
        rs = [p["r_phys"] for p in pts]
        for col in ("max_offdiag", "offdiag_frobenius", "logical_infidelity", "avg_abs_offdiag"):
            fit[col] = fit_loglog_slope(rs, [p[col] for p in pts])
        fits.append(fit)
    return rows + fits


def rows_to_csv(rows: Sequence[dict[str, Any]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def rotation_sweep(sizes: Sequence[int], thetas: Sequence[float], axis: str = "X", recovery: bool = True,
                   jobs: int = 1) -> list[dict[str, Any]]:
    """Repetition-code sweep under i.i.d. rotations; the standard scaling run."""
    cfg = SweepConfig(
        codes=[f"repetition:{n}" for n in sizes],
        noise={"type": "rotation", "axis": axis},
        param_key="angle",
        grid=list(thetas),
        recovery=recovery,
        jobs=jobs,
    )
    return run_sweep(cfg)


# -- rounds ----------------------------------------------------------------------------


def rounds_table(code: StabilizerCode, noise: NoiseModel, hs: Sequence[int], recovery: bool = True) -> tuple[list[dict], dict]:
    """Per-``h`` diagonal terms of ``(I - E)**h`` for the averaged logical error
    matrix ``E``, plus crossover estimates."""
    report = analyze(code, noise, "minweight" if recovery else "none")
    err = logical_error_matrix(report.average)
    labels = _logical_labels(code.k)
    pauli_only = np.diag(np.diag(err))
    rows = []
    rep = None
    for h in hs:
        rep = rounds_accumulation(err, int(h))
        exact_pauli = np.linalg.matrix_power(np.eye(len(err)) - pauli_only, int(h))
        for s in range(1, len(err)):
            rows.append({
                "h": int(h),
                "logical": labels[s],
                "exact_diag": float(rep.exact[s, s]),
                "first_order": float(rep.first_order[s, s]),
                "pauli_pauli": float(rep.pauli_pauli[s]),
                "coherent_coherent": float(rep.coherent_coherent[s]),
                "exact_coherent": float(rep.exact[s, s] - exact_pauli[s, s]),
            })
    if rep is None:
        raise ConfigError("h grid is empty")
    def finite(v: float) -> float | None:
        return None if np.isinf(v) else float(v)  # JSON has no infinity; null means "never crosses"

    summary = {
        "code": code.name,
        "physical_infidelity": noise.infidelity(),
        "h_pauli": finite(rep.h_pauli),
        "h_coherent": finite(rep.h_coherent),
        "h_crit": finite(rep.h_crit),
        "h_crit_times_r": finite(rep.h_crit * noise.infidelity()),
    }
    return rows, summary


def _logical_labels(k: int) -> list[str]:
    return ["".join(p) for p in itertools.product("IXYZ", repeat=k)]


# -- error-matrix bound fuzzing ------------------------------------------------------


def random_cptp_batch(rng: np.random.Generator, count: int) -> np.ndarray:
    """Random single-qubit channels covering Kraus ranks 1-4 and the near-identity regime.

    Each channel has a random Kraus rank; half of them are then mixed with the
    identity with weight ``u**4`` (``u`` uniform) so that small infidelities are
    well represented.
    """
    out = np.empty((count, 4, 4))
    ranks = rng.integers(1, 5, size=count)
    for rank in range(1, 5):
        idx = np.flatnonzero(ranks == rank)
        if len(idx):
            out[idx] = channels.random_ptms_batch(rng, len(idx), rank=rank)
    mix = rng.random(count) < 0.5
    lam = rng.random(count) ** 4
    lam = np.where(mix, lam, 1.0)[:, None, None]
    return lam * out + (1 - lam) * np.eye(4)


@dataclass
class FuzzReport:
    count: int
    seed: int
    min_slack: dict[str, float]
    violations: dict[str, int]
    tol: float

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": self.count,
            "seed": self.seed,
            "tolerance": self.tol,
            "min_slack": self.min_slack,
            "violations": self.violations,
            "passed": self.passed,
        }


def fuzz_lemma1(count: int, seed: int = 0, tol: float = 1e-9, ptms: np.ndarray | None = None,
                batch: int = 50_000) -> FuzzReport:
    """Check the four error-matrix bounds on ``count`` random channels.

    Passing ``ptms`` checks that explicit list instead of random channels.
    """
    if ptms is None and count < 1:
        raise ConfigError("count must be at least 1")
    rng = np.random.default_rng(seed)
    mins: dict[str, float] = {}
    viol: dict[str, int] = {}

    def absorb(batch_ptms):
        for key, vals in channels.lemma1_slacks(batch_ptms).items():
            mins[key] = min(mins.get(key, np.inf), float(vals.min()))
            viol[key] = viol.get(key, 0) + int((vals < -tol).sum())

    if ptms is not None:
        ptms = np.asarray(ptms, dtype=float).reshape(-1, 4, 4)
        absorb(ptms)
        count = len(ptms)
    else:
        done = 0
        while done < count:
            m = min(batch, count - done)
            absorb(random_cptp_batch(rng, m))
            done += m
    return FuzzReport(count, seed, mins, viol, tol)


__all__ = [
    "ConfigError",
    "FuzzReport",
    "LogicalReport",
    "ROUNDS_COLUMNS",
    "SWEEP_COLUMNS",
    "SweepConfig",
    "analyze",
    "effective_distance",
    "fit_loglog_slope",
    "fuzz_lemma1",
    "noise_letters",
    "random_cptp_batch",
    "rotation_sweep",
    "rounds_table",
    "rows_to_csv",
    "run_sweep",
    "verify_against_oracle",
]
