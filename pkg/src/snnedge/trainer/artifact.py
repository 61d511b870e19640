"""Binary model file: header, JSON metadata, f64 matrices, labels, checksum.

Layout (little-endian)::

    8s   magic  b"SNNEDGE\\0"
    u16  format version
    u16  reserved (0)
    u32  input size
    u32  excitatory size
    u32  metadata length, then UTF-8 JSON (sorted keys)
    f64  input->exc weights, row-major (input x exc)
    f64  exc->inh weights (exc x exc)
    f64  inh->exc weights (exc x exc)
    f64  adaptive thresholds (exc)
    u8   has-labels flag, then i8 labels (exc) and u8 assigned mask (exc)
    u64  checksum: 8-byte BLAKE2b of every preceding byte
"""
from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..core import InhibitionSchedule, LifParams, NetworkModel, NeuronState, SynapseMatrix
from .training import TrainConfig

MAGIC = b"SNNEDGE\0"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sHHIII")


class ArtifactError(ValueError):
    pass


class CorruptArtifactError(ArtifactError):
    pass


class ArtifactVersionError(ArtifactError):
    pass


@dataclass
class ModelArtifact:
    model: NetworkModel
    config: Optional[TrainConfig]
    version: int
    checksum: str

    @property
    def neuron_labels(self):
        return self.model.neuron_labels


def _checksum(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=8).digest()


def _metadata(model: NetworkModel, config: Optional[TrainConfig]) -> bytes:
    meta = {
        "config": None if config is None else config.to_dict(),
        "exc_params": asdict(model.exc_params),
        "inh_params": asdict(model.inh_params),
        "schedule": asdict(model.inhibition_schedule),
        "eta_pre": model.eta_pre,
        "eta_post": model.eta_post,
        "bounds": {
            "input_exc": [model.syn_input_exc.w_min, model.syn_input_exc.w_max],
            "exc_inh": [model.syn_exc_inh.w_min, model.syn_exc_inh.w_max],
            "inh_exc": [model.syn_inh_exc.w_min, model.syn_inh_exc.w_max],
        },
    }
    return json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")


def model_to_bytes(
    model: NetworkModel, config: Optional[TrainConfig] = None, version: int = FORMAT_VERSION
) -> bytes:
    meta = _metadata(model, config)
    parts = [
        _HEADER.pack(MAGIC, version, 0, model.input_size, model.n_exc, len(meta)),
        meta,
    ]
    for arr in (
        model.syn_input_exc.weights,
        model.syn_exc_inh.weights,
        model.syn_inh_exc.weights,
        model.exc_state.theta,
    ):
        parts.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    if model.neuron_labels is None:
        parts.append(b"\x00")
    else:
        assigned = (
            np.ones(model.n_exc, bool) if model.label_assigned is None else model.label_assigned
        )
        parts.append(b"\x01")
        parts.append(np.asarray(model.neuron_labels, dtype="<i1").tobytes())
        parts.append(np.asarray(assigned, dtype=np.uint8).tobytes())
    payload = b"".join(parts)
    return payload + _checksum(payload)


def model_from_bytes(raw: bytes) -> ModelArtifact:
    if len(raw) < _HEADER.size + 8:
        raise CorruptArtifactError("file too short to be a model artifact")
    magic, version, _, n_in, n_exc, meta_len = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise ArtifactError("not a model artifact (bad magic)")
    if version != FORMAT_VERSION:
        raise ArtifactVersionError(f"unsupported artifact version {version}")
    payload, stored = raw[:-8], raw[-8:]
    if _checksum(payload) != stored:
        raise CorruptArtifactError("checksum mismatch; file is corrupt")

    off = _HEADER.size
    meta = json.loads(payload[off : off + meta_len].decode("utf-8"))
    off += meta_len

    def take(shape) -> np.ndarray:
        nonlocal off
        count = int(np.prod(shape))
        arr = np.frombuffer(payload, dtype="<f8", count=count, offset=off)
        off += 8 * count
        return arr.astype(np.float64).reshape(shape)

    try:
        w_in = take((n_in, n_exc))
        w_ei = take((n_exc, n_exc))
        w_ie = take((n_exc, n_exc))
        theta = take((n_exc,))
        has_labels = payload[off]
        off += 1
        labels = assigned = None
        if has_labels:
            labels = np.frombuffer(payload, dtype="<i1", count=n_exc, offset=off).astype(np.int64)
            off += n_exc
            assigned = np.frombuffer(payload, dtype=np.uint8, count=n_exc, offset=off).astype(bool)
            off += n_exc
    except (ValueError, IndexError) as exc:
        raise CorruptArtifactError(f"truncated artifact body: {exc}") from None
    if off != len(payload):
        raise CorruptArtifactError("trailing bytes after artifact body")

    exc_params = LifParams(**meta["exc_params"])
    inh_params = LifParams(**meta["inh_params"])
    bounds = meta["bounds"]
    exc_state = NeuronState.at_rest(n_exc, exc_params)
    exc_state.theta = theta
    model = NetworkModel(
        syn_input_exc=SynapseMatrix(w_in, *bounds["input_exc"], plastic=True),
        syn_exc_inh=SynapseMatrix(w_ei, *bounds["exc_inh"], plastic=False),
        syn_inh_exc=SynapseMatrix(w_ie, *bounds["inh_exc"], plastic=False),
        exc_params=exc_params,
        inh_params=inh_params,
        exc_state=exc_state,
        inh_state=NeuronState.at_rest(n_exc, inh_params),
        inhibition_schedule=InhibitionSchedule(**meta["schedule"]),
        neuron_labels=labels,
        label_assigned=assigned,
        eta_pre=meta["eta_pre"],
        eta_post=meta["eta_post"],
    )
    config = None if meta["config"] is None else TrainConfig.from_dict(meta["config"])
    return ModelArtifact(model=model, config=config, version=version, checksum=stored.hex())


def save_model(model: NetworkModel, path, config: Optional[TrainConfig] = None) -> str:
    """Write ``model`` to ``path``; returns the hex checksum."""
    raw = model_to_bytes(model, config)
    Path(path).write_bytes(raw)
    return raw[-8:].hex()


def load_model(path) -> ModelArtifact:
    return model_from_bytes(Path(path).read_bytes())


def model_checksum(model: NetworkModel, config: Optional[TrainConfig] = None) -> str:
    return model_to_bytes(model, config)[-8:].hex()
