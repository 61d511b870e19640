"""Spiking-network engine: LIF dynamics, STDP, lateral inhibition, encoding, readout."""
from .decoding import N_CLASSES, decode_all_activity, decode_proportion
from .encoding import INPUT_SIZE, SpikeTrain, poisson_encode
from .lif import NeuronState, lif_step
from .network import (
    UNASSIGNED,
    InferenceRecord,
    NetworkModel,
    init_model,
    normalize_input_weights,
    run_network,
    update_inhibition,
)
from .params import ContractError, InhibitionSchedule, LifParams, excitatory_params, inhibitory_params
from .plasticity import SynapseMatrix, stdp_update

__all__ = [
    "N_CLASSES",
    "INPUT_SIZE",
    "UNASSIGNED",
    "ContractError",
    "InferenceRecord",
    "InhibitionSchedule",
    "LifParams",
    "NetworkModel",
    "NeuronState",
    "SpikeTrain",
    "SynapseMatrix",
    "decode_all_activity",
    "decode_proportion",
    "excitatory_params",
    "inhibitory_params",
    "init_model",
    "lif_step",
    "normalize_input_weights",
    "poisson_encode",
    "run_network",
    "stdp_update",
    "update_inhibition",
]
