"""Synapse matrices and trace-based pair STDP."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ContractError


@dataclass
class SynapseMatrix:
    """Dense weights, rows presynaptic and columns postsynaptic."""

    weights: np.ndarray
    w_min: float = 0.0
    w_max: float = 1.0
    plastic: bool = False

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ContractError("weights must be a 2-D matrix")
        if self.w_min > self.w_max:
            raise ContractError("w_min must not exceed w_max")
        if self.weights.size and (
            self.weights.min() < self.w_min or self.weights.max() > self.w_max
        ):
            raise ContractError("weights outside [w_min, w_max]")

    @property
    def shape(self) -> tuple[int, int]:
        return self.weights.shape

    def copy(self) -> "SynapseMatrix":
        return SynapseMatrix(self.weights.copy(), self.w_min, self.w_max, self.plastic)


def stdp_update(
    syn: SynapseMatrix,
    pre_spiked: np.ndarray,
    post_spiked: np.ndarray,
    pre_trace: np.ndarray,
    post_trace: np.ndarray,
    eta_pre: float = 1e-4,
    eta_post: float = 1e-2,
) -> SynapseMatrix:
    """Apply one step of the pair rule to ``syn`` in place and return it.

    A presynaptic spike on row i depresses that row by ``eta_pre * post_trace``;
    a postsynaptic spike on column j potentiates that column by
    ``eta_post * pre_trace``. Only touched rows/columns are clamped.
    """
    if not syn.plastic:
        raise ContractError("stdp_update called on a non-plastic synapse matrix")
    n_pre, n_post = syn.weights.shape
    pre_idx = np.flatnonzero(pre_spiked)
    post_idx = np.flatnonzero(post_spiked)
    if len(pre_spiked) != n_pre or len(pre_trace) != n_pre:
        raise ContractError("presynaptic vectors do not match weight rows")
    if len(post_spiked) != n_post or len(post_trace) != n_post:
        raise ContractError("postsynaptic vectors do not match weight columns")

    w = syn.weights
    if pre_idx.size:
        rows = w[pre_idx] - eta_pre * np.asarray(post_trace)[None, :]
        w[pre_idx] = np.clip(rows, syn.w_min, syn.w_max)
    if post_idx.size:
        cols = w[:, post_idx] + eta_post * np.asarray(pre_trace)[:, None]
        w[:, post_idx] = np.clip(cols, syn.w_min, syn.w_max)
    return syn
