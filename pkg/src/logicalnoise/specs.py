"""JSON noise and code specifications.

Single-qubit channel specs are objects with a ``"type"`` key:

    {"type": "identity"}
    {"type": "depolarizing", "p": 0.01}
    {"type": "dephasing", "p": 0.01}
    {"type": "bit_flip", "p": 0.01}
    {"type": "pauli", "px": 0.01, "py": 0.0, "pz": 0.02}
    {"type": "amplitude_damping", "gamma": 0.05}
    {"type": "rotation", "axis": "X" | [nx, ny, nz], "angle": 0.1}
    {"type": "unitary", "matrix": [[a, b], [c, d]]}
    {"type": "kraus", "operators": [matrix, ...]}
    {"type": "compose", "channels": [spec, ...]}       # first spec applied first
    {"type": "mixture", "weights": [...], "channels": [spec, ...]}
    {"type": "ptm", "matrix": 4x4 real matrix}

Complex matrix entries are numbers or ``[re, im]`` pairs. A noise model is a
channel spec (applied to every qubit), a list of per-qubit channel specs, or
``{"type": "correlated", "terms": [{"weight": w, "channels": spec-or-list}]}``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import channels
from .channels import ChannelError
from .codes import StabilizerCode, builtin, code_from_dict
from .logical import NoiseModel


class SpecError(ValueError):
    pass


def _read_arg(text: str) -> Any:
    """Inline JSON, ``@path`` to a JSON file, or a bare word."""
    text = text.strip()
    if text.startswith("@"):
        with open(Path(text[1:])) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _complex_matrix(raw) -> np.ndarray:
    def entry(v):
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise SpecError(f"complex entry must be [re, im], got {v}")
            return complex(v[0], v[1])
        if isinstance(v, str):
            return complex(v.replace("i", "j"))
        return complex(v)

    return np.array([[entry(v) for v in row] for row in raw], dtype=complex)


def channel_from_spec(spec) -> np.ndarray:
    """Single-qubit PTM for a channel spec."""
    if isinstance(spec, str):
        spec = {"type": spec}
    if not isinstance(spec, dict) or "type" not in spec:
        raise SpecError(f"channel spec needs a 'type': {spec!r}")
    kind = spec["type"].lower()
    try:
        if kind == "identity":
            return channels.identity()
        if kind == "depolarizing":
            return channels.depolarizing(float(spec["p"]))
        if kind == "dephasing":
            return channels.dephasing(float(spec["p"]))
        if kind in ("bit_flip", "bitflip"):
            return channels.bit_flip(float(spec["p"]))
        if kind == "pauli":
            return channels.pauli_channel(float(spec.get("px", 0)), float(spec.get("py", 0)), float(spec.get("pz", 0)))
        if kind == "amplitude_damping":
            return channels.amplitude_damping(float(spec["gamma"]))
        if kind == "rotation":
            axis = spec.get("axis", "Z")
            return channels.rotation(axis, float(spec["angle"]))
        if kind == "unitary":
            return channels.unitary(_complex_matrix(spec["matrix"]))
        if kind == "kraus":
            return channels.ptm_from_kraus([_complex_matrix(k) for k in spec["operators"]])
        if kind == "compose":
            return channels.compose([channel_from_spec(c) for c in spec["channels"]])
        if kind == "mixture":
            return channels.mixture(spec["weights"], [channel_from_spec(c) for c in spec["channels"]])
        if kind == "ptm":
            ptm = np.array(spec["matrix"], dtype=float)
            if ptm.shape != (4, 4) or not channels.is_cptp(ptm, tol=1e-9):
                raise SpecError("ptm spec must be a 4x4 CPTP process matrix")
            return ptm
    except KeyError as exc:
        raise SpecError(f"channel spec {spec!r} is missing {exc}") from None
    except ChannelError as exc:
        raise SpecError(str(exc)) from None
    raise SpecError(f"unknown channel type {spec['type']!r}")


def _factors(spec, n: int) -> list[np.ndarray]:
    if isinstance(spec, list):
        if len(spec) != n:
            raise SpecError(f"per-qubit noise list has {len(spec)} entries, code has {n} qubits")
        return [channel_from_spec(s) for s in spec]
    return [channel_from_spec(spec)] * n


def noise_from_spec(spec, n: int) -> NoiseModel:
    if isinstance(spec, str):
        spec = _read_arg(spec)
    if isinstance(spec, dict) and spec.get("type", "").lower() == "correlated":
        terms = spec.get("terms")
        if not terms:
            raise SpecError("correlated noise needs a non-empty 'terms' list")
        weights = [float(t["weight"]) for t in terms]
        return NoiseModel.correlated(weights, [_factors(t["channels"], n) for t in terms])
    if isinstance(spec, dict) and spec.get("type", "").lower() == "local":
        return NoiseModel.local(_factors(spec["channels"], n))
    return NoiseModel.local(_factors(spec, n))


def code_from_spec(text: str) -> StabilizerCode:
    """``repetition:5``, ``five_qubit``, ``steane``, or ``@code.json``."""
    text = text.strip()
    if text.startswith("@"):
        return code_from_dict(_read_arg(text))
    if text.startswith("{"):
        return code_from_dict(json.loads(text))
    return builtin(text)


def parse_noise_arg(text: str):
    """Parse a CLI ``--noise`` value into a JSON-like spec."""
    return _read_arg(text)
