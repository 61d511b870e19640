"""Neuron parameter sets and the lateral-inhibition schedule."""
from __future__ import annotations

import math
from dataclasses import dataclass


class ContractError(ValueError):
    """Raised when an operation is called with arguments violating its contract."""


@dataclass(frozen=True)
class LifParams:
    """Constants of a leaky integrate-and-fire population.

    Potentials are in mV, times in ms. ``resistance`` is dimensionless because
    input currents are pre-scaled to mV. ``theta_plus``/``tau_theta`` only
    matter for adaptive populations; ``tau_trace`` sets the STDP trace decay.
    """

    tau_rc: float = 100.0
    resistance: float = 1.0
    v_rest: float = -65.0
    v_reset: float = -60.0
    v_thresh_base: float = -52.0
    tau_refrac: float = 5.0
    dt: float = 1.0
    theta_plus: float = 0.05
    tau_theta: float = 1e7
    tau_trace: float = 20.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ContractError(f"dt must be positive, got {self.dt}")
        if not self.tau_rc > 0:
            raise ContractError(f"tau_rc must be positive, got {self.tau_rc}")
        if self.tau_refrac < 0:
            raise ContractError(f"tau_refrac must be >= 0, got {self.tau_refrac}")
        if not self.tau_trace > 0 or not self.tau_theta > 0:
            raise ContractError("trace and theta time constants must be positive")
        if self.theta_plus < 0:
            raise ContractError("theta_plus must be >= 0")
        # Reset may sit above rest (both default populations do).
        if not (self.v_rest < self.v_thresh_base and self.v_reset < self.v_thresh_base):
            raise ContractError(
                "expected v_rest and v_reset below v_thresh_base, got "
                f"{self.v_reset}, {self.v_rest}, {self.v_thresh_base}"
            )

    @property
    def decay(self) -> float:
        """Per-step membrane decay factor exp(-dt/tau_rc)."""
        return math.exp(-self.dt / self.tau_rc)

    @property
    def trace_decay(self) -> float:
        return math.exp(-self.dt / self.tau_trace)

    @property
    def theta_decay(self) -> float:
        return math.exp(-self.dt / self.tau_theta)


def excitatory_params(dt: float = 1.0) -> LifParams:
    return LifParams(dt=dt)


def inhibitory_params(dt: float = 1.0) -> LifParams:
    return LifParams(
        tau_rc=10.0,
        v_rest=-60.0,
        v_reset=-45.0,
        v_thresh_base=-40.0,
        tau_refrac=2.0,
        dt=dt,
    )


@dataclass(frozen=True)
class InhibitionSchedule:
    """Stepwise ramp of the inhibitory weight magnitude during training.

    Magnitudes are positive; the stored inhibitory weights are their negation.
    The default increment reaches ``max_magnitude`` after exactly one pass
    over 60,000 samples.
    """

    initial_magnitude: float = 10.0
    max_magnitude: float = 40.0
    update_interval: int = 500
    increment_per_update: float = 0.25

    def __post_init__(self):
        if self.update_interval < 1:
            raise ContractError("update_interval must be >= 1")
        if self.increment_per_update < 0:
            raise ContractError("increment_per_update must be >= 0")
        if not 0 <= self.initial_magnitude <= self.max_magnitude:
            raise ContractError("need 0 <= initial_magnitude <= max_magnitude")

    def magnitude(self, samples_processed: int) -> float:
        if samples_processed < 0:
            raise ContractError("samples_processed must be >= 0")
        steps = samples_processed // self.update_interval
        return min(self.max_magnitude, self.initial_magnitude + self.increment_per_update * steps)
