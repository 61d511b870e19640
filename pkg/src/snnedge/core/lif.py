"""Leaky integrate-and-fire state and its one-step update."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ContractError, LifParams


@dataclass
class NeuronState:
    """Per-neuron state. The membrane potential is held as ``u = v - v_rest``.

    Storing the offset keeps full float64 precision for potentials near rest;
    absolute potentials around -65 mV would carry ~1e-14 mV rounding per step.
    """

    u: np.ndarray
    theta: np.ndarray
    refrac_remaining: np.ndarray
    trace: np.ndarray
    v_rest: float = 0.0

    @classmethod
    def at_rest(cls, n: int, params: LifParams) -> "NeuronState":
        return cls(
            u=np.zeros(n, dtype=np.float64),
            theta=np.zeros(n, dtype=np.float64),
            refrac_remaining=np.zeros(n, dtype=np.float64),
            trace=np.zeros(n, dtype=np.float64),
            v_rest=params.v_rest,
        )

    @property
    def v(self) -> np.ndarray:
        """Absolute membrane potential (a fresh array)."""
        return self.v_rest + self.u

    def set_potential(self, v) -> None:
        self.u[:] = np.asarray(v, dtype=np.float64) - self.v_rest

    def __len__(self) -> int:
        return self.u.shape[0]

    def reset(self, params: LifParams) -> None:
        """Return to rest; the adaptive threshold is learned and kept."""
        self.v_rest = params.v_rest
        self.u.fill(0.0)
        self.refrac_remaining.fill(0.0)
        self.trace.fill(0.0)

    def copy(self) -> "NeuronState":
        return NeuronState(
            self.u.copy(),
            self.theta.copy(),
            self.refrac_remaining.copy(),
            self.trace.copy(),
            self.v_rest,
        )


def lif_step(
    state: NeuronState,
    input_current: np.ndarray,
    params: LifParams,
    adaptive: bool = False,
) -> tuple[NeuronState, np.ndarray]:
    """Advance ``state`` by one timestep ``params.dt``, in place.

    Non-refractory neurons integrate with the exact exponential solution for a
    current held constant over the step. Refractory neurons are clamped to
    ``v_reset`` and count down. Returns the (same) state and a boolean spike
    vector.
    """
    current = np.asarray(input_current, dtype=np.float64)
    if current.shape != state.u.shape:
        raise ContractError(
            f"input_current has shape {current.shape}, expected {state.u.shape}"
        )
    if state.v_rest != params.v_rest:
        raise ContractError("state was built for a different v_rest")

    decay = params.decay
    if adaptive:
        state.theta *= params.theta_decay

    refractory = state.refrac_remaining > 0
    drive = params.resistance * current * (1.0 - decay)
    u_reset = params.v_reset - params.v_rest
    state.u = np.where(refractory, u_reset, state.u * decay + drive)
    state.refrac_remaining = np.where(
        refractory, np.maximum(state.refrac_remaining - params.dt, 0.0), 0.0
    )

    spiked = ~refractory & (state.u >= (params.v_thresh_base - params.v_rest) + state.theta)
    if spiked.any():
        state.u[spiked] = u_reset
        state.refrac_remaining[spiked] = params.tau_refrac
        if adaptive:
            state.theta[spiked] += params.theta_plus

    state.trace *= params.trace_decay
    state.trace[spiked] = 1.0
    return state, spiked
