import os
import socket
import struct
import subprocess
import sys
import time
from pathlib import Path

import httpx
import numpy as np
import pytest

from snnedge.core import init_model, normalize_input_weights

MNIST_DIR = Path(os.environ.get("SNNEDGE_MNIST_DIR", "/root/data/mnist"))


def have_mnist() -> bool:
    return (MNIST_DIR / "train-images-idx3-ubyte").exists() or (
        MNIST_DIR / "train-images-idx3-ubyte.gz"
    ).exists()


@pytest.fixture(scope="session")
def mnist_dir():
    if not have_mnist():
        pytest.skip(f"MNIST IDX files not found under {MNIST_DIR} (set SNNEDGE_MNIST_DIR)")
    return MNIST_DIR


def labelled_model(n_exc=20, seed=0):
    model = init_model(n_exc=n_exc, seed=seed)
    normalize_input_weights(model, 78.4)
    model.neuron_labels = np.arange(n_exc) % 10
    model.label_assigned = np.ones(n_exc, dtype=bool)
    return model


@pytest.fixture
def tiny_model():
    return labelled_model()


def write_idx_images(path, images: np.ndarray, magic=0x00000803, truncate=0):
    n = images.shape[0]
    raw = struct.pack(">IIII", magic, n, 28, 28) + images.astype(np.uint8).tobytes()
    if truncate:
        raw = raw[:-truncate]
    Path(path).write_bytes(raw)


def write_idx_labels(path, labels, magic=0x00000801):
    labels = np.asarray(labels, dtype=np.uint8)
    Path(path).write_bytes(struct.pack(">II", magic, len(labels)) + labels.tobytes())


def synthetic_digits(n_per_class=3, seed=0):
    """Blocky fake digits: class c lights a distinct 7x7 patch."""
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for c in range(10):
        for _ in range(n_per_class):
            img = np.zeros((28, 28), dtype=np.uint8)
            r, col = divmod(c, 4)
            img[r * 7 : r * 7 + 7, col * 7 : col * 7 + 7] = rng.integers(150, 256, (7, 7))
            images.append(img.reshape(-1))
            labels.append(c)
    return np.array(images, dtype=np.uint8), np.array(labels, dtype=np.uint8)


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class LiveService:
    def __init__(self, model_path, env=None, port=None):
        self.port = port or free_port()
        self.url = f"http://127.0.0.1:{self.port}"
        full_env = dict(os.environ)
        full_env.update({"MODEL_PATH": str(model_path), "PORT": str(self.port)})
        full_env.update(env or {})
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "snnedge", "serve", "--host", "127.0.0.1", "--log-level", "warning"],
            env=full_env,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
        )

    def wait_ready(self, timeout=30.0):
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if self.proc.poll() is not None:
                out = self.proc.stdout.read().decode(errors="replace")
                raise RuntimeError(f"service exited with {self.proc.returncode}: {out}")
            try:
                r = httpx.get(f"{self.url}/healthz", timeout=1.0)
                if r.status_code == 200:
                    return r.json()
            except httpx.HTTPError:
                pass
            time.sleep(0.1)
        raise TimeoutError("service did not come up")

    def stop(self):
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=20)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()


# Acceptance reporting: one PASS/FAIL line per criterion in the terminal summary.
_acceptance: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = marker.args
    if call.excinfo is not None:
        _acceptance[key] = "FAIL"
    elif call.when == "call":
        _acceptance.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_acceptance.items()):
        terminalreporter.write_line(f"criterion {number} [{status}] {title}")
