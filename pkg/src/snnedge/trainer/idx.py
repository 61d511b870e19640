"""Readers for the IDX files MNIST ships in (optionally gzip-compressed)."""
from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801

TRAIN_IMAGES = "train-images-idx3-ubyte"
TRAIN_LABELS = "train-labels-idx1-ubyte"
TEST_IMAGES = "t10k-images-idx3-ubyte"
TEST_LABELS = "t10k-labels-idx1-ubyte"


class IdxFormatError(ValueError):
    pass


class IdxLengthError(ValueError):
    pass


class IdxDataError(ValueError):
    pass


@dataclass
class Dataset:
    images: np.ndarray  # (N, 784) uint8
    labels: np.ndarray  # (N,) uint8

    def __post_init__(self):
        if self.images.shape[0] != self.labels.shape[0]:
            raise IdxDataError(
                f"{self.images.shape[0]} images but {self.labels.shape[0]} labels"
            )
        if self.labels.size and self.labels.max() > 9:
            raise IdxDataError("labels must lie in [0, 9]")

    def __len__(self) -> int:
        return self.labels.shape[0]

    def head(self, n: int) -> "Dataset":
        return Dataset(self.images[:n], self.labels[:n])

    def take(self, idx) -> "Dataset":
        return Dataset(self.images[idx], self.labels[idx])


def _read_bytes(path) -> bytes:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return raw


def _parse_header(raw: bytes, expected_magic: int, ndims: int, path) -> tuple[int, ...]:
    if len(raw) < 4:
        raise IdxLengthError(f"{path}: file too short for an IDX header")
    (magic,) = struct.unpack(">I", raw[:4])
    if magic != expected_magic:
        raise IdxFormatError(f"{path}: magic 0x{magic:08x}, expected 0x{expected_magic:08x}")
    header_len = 4 + 4 * ndims
    if len(raw) < header_len:
        raise IdxLengthError(f"{path}: truncated IDX header")
    return struct.unpack(f">{ndims}I", raw[4:header_len])


def load_idx_images(path) -> np.ndarray:
    """Parse an image IDX file into an ``(N, rows*cols)`` uint8 array."""
    raw = _read_bytes(path)
    n, rows, cols = _parse_header(raw, IMAGE_MAGIC, 3, path)
    size = rows * cols
    need = 16 + n * size
    if len(raw) < need:
        raise IdxLengthError(f"{path}: expected {need} bytes, found {len(raw)}")
    return np.frombuffer(raw, dtype=np.uint8, count=n * size, offset=16).reshape(n, size).copy()


def load_idx_labels(path) -> np.ndarray:
    raw = _read_bytes(path)
    (n,) = _parse_header(raw, LABEL_MAGIC, 1, path)
    need = 8 + n
    if len(raw) < need:
        raise IdxLengthError(f"{path}: expected {need} bytes, found {len(raw)}")
    labels = np.frombuffer(raw, dtype=np.uint8, count=n, offset=8).copy()
    if n and labels.max() > 9:
        bad = int(np.flatnonzero(labels > 9)[0])
        raise IdxDataError(f"{path}: label {labels[bad]} at index {bad} outside [0, 9]")
    return labels


def _find(data_dir: Path, stem: str) -> Path:
    for name in (stem, stem + ".gz", stem.replace("-idx", ".idx")):
        p = data_dir / name
        if p.exists():
            return p
    raise FileNotFoundError(f"no {stem}[.gz] under {data_dir}")


def load_mnist(data_dir, split: str = "train") -> Dataset:
    data_dir = Path(data_dir)
    if split == "train":
        img, lbl = TRAIN_IMAGES, TRAIN_LABELS
    elif split == "test":
        img, lbl = TEST_IMAGES, TEST_LABELS
    else:
        raise ValueError(f"unknown split {split!r}")
    return Dataset(load_idx_images(_find(data_dir, img)), load_idx_labels(_find(data_dir, lbl)))


def stratified_indices(labels: np.ndarray, n: int, seed=0) -> np.ndarray:
    """Pick ``n`` indices with (as near as possible) equal counts per class.

    Classes are visited round-robin; within a class, indices are a seeded
    permutation. The result is interleaved 0, 1, ..., 9, 0, 1, ...
    """
    rng = np.random.default_rng(seed)
    classes = np.unique(labels)
    pools = {int(c): list(rng.permutation(np.flatnonzero(labels == c))) for c in classes}
    out = []
    while len(out) < n and any(pools.values()):
        for c in classes:
            pool = pools[int(c)]
            if pool and len(out) < n:
                out.append(pool.pop(0))
    return np.asarray(out, dtype=np.int64)
