"""Three-layer spiking network: Poisson input, excitatory and inhibitory LIF.

Synaptic weights are expressed as the instantaneous post-synaptic voltage
jump (mV) one presynaptic spike causes. ``run_network`` converts the summed
jumps of a step into the equivalent constant current for ``lif_step``.
Recurrent pathways (excitatory to inhibitory and back) carry the spikes of
the previous step.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .decoding import decode_all_activity, decode_proportion
from .encoding import INPUT_SIZE, SpikeTrain
from .lif import NeuronState, lif_step
from .params import ContractError, InhibitionSchedule, LifParams, excitatory_params, inhibitory_params
from .plasticity import SynapseMatrix, stdp_update

UNASSIGNED = -1


@dataclass
class InferenceRecord:
    exc_spike_counts: np.ndarray
    total_output_spikes: int
    pred_all_activity: int
    pred_proportion: int
    sim_wall_ms: float

    @property
    def no_activity(self) -> bool:
        return self.total_output_spikes == 0


@dataclass
class NetworkModel:
    syn_input_exc: SynapseMatrix
    syn_exc_inh: SynapseMatrix
    syn_inh_exc: SynapseMatrix
    exc_params: LifParams
    inh_params: LifParams
    exc_state: NeuronState
    inh_state: NeuronState
    inhibition_schedule: InhibitionSchedule = field(default_factory=InhibitionSchedule)
    neuron_labels: Optional[np.ndarray] = None
    label_assigned: Optional[np.ndarray] = None
    eta_pre: float = 1e-4
    eta_post: float = 1e-2

    def __post_init__(self):
        n = self.n_exc
        if self.syn_input_exc.shape != (self.input_size, n):
            raise ContractError("syn_input_exc must be input_size x n_exc")
        if self.syn_exc_inh.shape != (n, n) or self.syn_inh_exc.shape != (n, n):
            raise ContractError("recurrent matrices must be n_exc x n_exc")
        w = self.syn_inh_exc.weights
        if np.any(np.diag(w) != 0) or np.any(w > 0):
            raise ContractError("inhibitory weights must be <= 0 with a zero diagonal")
        if len(self.exc_state) != n or len(self.inh_state) != n:
            raise ContractError("neuron state sizes must equal n_exc")

    @property
    def input_size(self) -> int:
        return self.syn_input_exc.weights.shape[0]

    @property
    def n_exc(self) -> int:
        return self.syn_input_exc.weights.shape[1]

    @property
    def labels_ready(self) -> bool:
        return self.neuron_labels is not None

    @property
    def inhibition_magnitude(self) -> float:
        w = self.syn_inh_exc.weights
        if w.shape[0] < 2:
            return 0.0
        return float(-w[0, 1])

    def reset_state(self) -> None:
        self.exc_state.reset(self.exc_params)
        self.inh_state.reset(self.inh_params)

    def copy(self) -> "NetworkModel":
        return NetworkModel(
            syn_input_exc=self.syn_input_exc.copy(),
            syn_exc_inh=self.syn_exc_inh.copy(),
            syn_inh_exc=self.syn_inh_exc.copy(),
            exc_params=self.exc_params,
            inh_params=self.inh_params,
            exc_state=self.exc_state.copy(),
            inh_state=self.inh_state.copy(),
            inhibition_schedule=self.inhibition_schedule,
            neuron_labels=None if self.neuron_labels is None else self.neuron_labels.copy(),
            label_assigned=None if self.label_assigned is None else self.label_assigned.copy(),
            eta_pre=self.eta_pre,
            eta_post=self.eta_post,
        )


def init_model(
    n_exc: int = 400,
    seed=0,
    input_size: int = INPUT_SIZE,
    dt: float = 1.0,
    w_init_max: float = 0.3,
    exc_inh_weight: float = 22.5,
    schedule: Optional[InhibitionSchedule] = None,
    eta_pre: float = 1e-4,
    eta_post: float = 1e-2,
) -> NetworkModel:
    """Build an untrained network with uniform random input weights."""
    if n_exc < 1:
        raise ContractError("n_exc must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    schedule = schedule or InhibitionSchedule()
    exc_params = excitatory_params(dt)
    inh_params = inhibitory_params(dt)
    w_in = rng.uniform(0.0, w_init_max, size=(input_size, n_exc))
    eye = np.eye(n_exc)
    model = NetworkModel(
        syn_input_exc=SynapseMatrix(w_in, 0.0, 1.0, plastic=True),
        syn_exc_inh=SynapseMatrix(eye * exc_inh_weight, 0.0, exc_inh_weight, plastic=False),
        syn_inh_exc=SynapseMatrix(
            np.zeros((n_exc, n_exc)), -schedule.max_magnitude, 0.0, plastic=False
        ),
        exc_params=exc_params,
        inh_params=inh_params,
        exc_state=NeuronState.at_rest(n_exc, exc_params),
        inh_state=NeuronState.at_rest(n_exc, inh_params),
        inhibition_schedule=schedule,
        eta_pre=eta_pre,
        eta_post=eta_post,
    )
    return update_inhibition(model, 0)


def normalize_input_weights(model: NetworkModel, target_sum: float = 78.4) -> NetworkModel:
    """Scale every non-zero column of the input weights to sum to ``target_sum``."""
    if not target_sum > 0:
        raise ContractError("target_sum must be positive")
    syn = model.syn_input_exc
    w = syn.weights
    sums = w.sum(axis=0)
    nonzero = sums > 0
    w[:, nonzero] *= target_sum / sums[nonzero]
    if w.max(initial=syn.w_min) > syn.w_max:
        for j in np.flatnonzero((w > syn.w_max).any(axis=0)):
            w[:, j] = _fill_column(w[:, j], target_sum, syn.w_max)
    return model


def _fill_column(col: np.ndarray, target: float, cap: float) -> np.ndarray:
    # Pin entries at the cap and rescale the rest until the sum is met.
    col = col.copy()
    for _ in range(col.size):
        over = col >= cap
        col[over] = cap
        free = ~over
        remaining = target - cap * over.sum()
        free_sum = col[free].sum()
        if remaining <= 0 or free_sum <= 0:
            break
        col[free] *= remaining / free_sum
        if col.max() <= cap:
            break
    return col


def update_inhibition(model: NetworkModel, samples_processed: int) -> NetworkModel:
    """Set every off-diagonal inhibitory weight to the scheduled magnitude."""
    m = model.inhibition_schedule.magnitude(samples_processed)
    w = model.syn_inh_exc.weights
    w.fill(-m)
    np.fill_diagonal(w, 0.0)
    return model


def _jump_to_current(params: LifParams) -> float:
    """Current that, held for one step, raises v by exactly 1 mV above decay."""
    return 1.0 / (params.resistance * (1.0 - params.decay))


def run_network(
    model: NetworkModel,
    train: SpikeTrain,
    learning: bool = False,
    record_steps: bool = False,
):
    """Simulate ``train`` through ``model`` from a freshly reset state.

    With ``learning`` the input weights are updated by STDP every step and
    excitatory thresholds adapt. When ``record_steps`` is true the boolean
    per-step excitatory spike raster is returned alongside the record.
    """
    if train.data.ndim != 2 or train.data.shape[1] != model.input_size:
        raise ContractError(
            f"spike train has shape {train.data.shape}, expected (steps, {model.input_size})"
        )
    t0 = time.perf_counter()
    model.reset_state()
    exc, inh = model.exc_state, model.inh_state
    ep, ip = model.exc_params, model.inh_params
    n = model.n_exc
    exc_gain = _jump_to_current(ep)
    inh_gain = _jump_to_current(ip)
    w_in = model.syn_input_exc.weights
    w_ei = model.syn_exc_inh.weights
    w_ie = model.syn_inh_exc.weights

    steps = train.steps
    spikes_in = train.data
    counts = np.zeros(n, dtype=np.int64)
    raster = np.zeros((steps, n), dtype=bool) if record_steps else None

    if not learning:
        # Input weights are fixed, so the feed-forward drive is one matmul.
        ff_drive = spikes_in.astype(np.float64) @ w_in
    else:
        pre_trace = np.zeros(model.input_size)
        pre_decay = ep.trace_decay

    exc_prev = np.zeros(n, dtype=bool)
    inh_prev = np.zeros(n, dtype=bool)
    zeros = np.zeros(n)
    for t in range(steps):
        if learning:
            pre_idx = np.flatnonzero(spikes_in[t])
            drive = w_in[pre_idx].sum(axis=0) if pre_idx.size else zeros.copy()
        else:
            drive = ff_drive[t].copy()
        if inh_prev.any():
            drive += w_ie[inh_prev].sum(axis=0)
        exc, exc_spiked = lif_step(exc, drive * exc_gain, ep, adaptive=learning)

        if exc_prev.any():
            inh_drive = w_ei[exc_prev].sum(axis=0) * inh_gain
        else:
            inh_drive = zeros
        inh, inh_spiked = lif_step(inh, inh_drive, ip)

        if learning:
            pre_trace *= pre_decay
            pre_trace[pre_idx] = 1.0
            if pre_idx.size or exc_spiked.any():
                stdp_update(
                    model.syn_input_exc,
                    spikes_in[t],
                    exc_spiked,
                    pre_trace,
                    exc.trace,
                    model.eta_pre,
                    model.eta_post,
                )
        counts += exc_spiked
        if raster is not None:
            raster[t] = exc_spiked
        exc_prev, inh_prev = exc_spiked, inh_spiked

    model.exc_state, model.inh_state = exc, inh
    if model.neuron_labels is not None:
        pred_all = decode_all_activity(counts, model.neuron_labels)
        pred_prop = decode_proportion(counts, model.neuron_labels)
    else:
        pred_all = pred_prop = UNASSIGNED
    record = InferenceRecord(
        exc_spike_counts=counts,
        total_output_spikes=int(counts.sum()),
        pred_all_activity=pred_all,
        pred_proportion=pred_prop,
        sim_wall_ms=(time.perf_counter() - t0) * 1000.0,
    )
    if record_steps:
        return record, raster
    return record
