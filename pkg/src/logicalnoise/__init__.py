"""Exact effective logical channels of stabilizer codes under local noise."""
from . import channels, codes, experiments, logical, oracle, pauli, specs
from .codes import StabilizerCode, builtin, five_qubit, repetition, steane
from .logical import (
    NoiseModel,
    SyndromeChannel,
    apply_recovery,
    average_logical_channel,
    coherence_metrics,
    logical_channel_factorized,
    rounds_accumulation,
    syndrome_distribution,
)
from .pauli import PauliOperator

__version__ = "0.1.0"
