"""JSON and CSV serialization shared by the command-line tools.

Vectors and matrices use ``{"dim": d, "entries": [[re, im], ...]}`` with
matrix entries flattened row-major.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def array_to_json(arr: np.ndarray) -> dict:
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim not in (1, 2) or (arr.ndim == 2 and arr.shape[0] != arr.shape[1]):
        raise ValueError(f"expected a vector or square matrix, got shape {arr.shape}")
    flat = arr.ravel()
    return {
        "dim": int(arr.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def array_from_json(obj: dict) -> np.ndarray:
    """Inverse of :func:`array_to_json`; the shape is inferred from the entry count."""
    try:
        dim = int(obj["dim"])
        pairs = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    if dim < 1 or pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("entries must be a list of [re, im] pairs")
    z = pairs[:, 0] + 1j * pairs[:, 1]
    if z.size == dim:
        return z
    if z.size == dim * dim:
        return z.reshape(dim, dim)
    raise ValueError(f"{z.size} entries do not fit dim={dim}")


def complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())
