"""Wigner functions of single-mode density matrices and their negativity.

W is normalized so that its integral over dx dp is 1; the vacuum is
exp(-x^2 - p^2)/pi.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np
from scipy.special import eval_genlaguerre

DEFAULT_BOUNDS = (-5.0, 5.0, -5.0, 5.0)
DEFAULT_RESOLUTION = (201, 201)
DEFAULT_THRESHOLD = 1e-4


def wigner(rho: np.ndarray, x, p) -> np.ndarray:
    """W(x, p) evaluated elementwise on broadcast arrays ``x`` and ``p``.

    Uses the closed form for |m><n| in terms of associated Laguerre
    polynomials, summed over the upper triangle of the Hermitian ``rho``.
    """
    rho = np.asarray(rho)
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    alpha = (x + 1j * p) / sqrt(2)
    B = 4 * np.abs(alpha) ** 2
    two_alpha = 2 * alpha
    d = rho.shape[0]
    W = np.zeros(x.shape)
    for m in range(d):
        if rho[m, m] != 0:
            W += np.real(rho[m, m]) * (-1) ** m * eval_genlaguerre(m, 0, B)
        for n in range(m + 1, d):
            if rho[m, n] == 0:
                continue
            k = n - m
            W += 2 * np.real(
                rho[m, n] * (-1) ** m * two_alpha**k * sqrt(factorial(m) / factorial(n))
                * eval_genlaguerre(m, k, B)
            )
    return W * np.exp(-B / 2) / np.pi


def wigner_point(rho: np.ndarray, x: float, p: float) -> float:
    return float(wigner(rho, x, p))


@dataclass(frozen=True)
class WignerGrid:
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray  # shape (len(x), len(p)), values[i, j] = W(x[i], p[j])

    @property
    def bounds(self):
        return (float(self.x[0]), float(self.x[-1]), float(self.p[0]), float(self.p[-1]))

    @property
    def cell_area(self) -> float:
        return float((self.x[1] - self.x[0]) * (self.p[1] - self.p[0]))

    def integral(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def negative_volume(self) -> float:
        return float(np.clip(-self.values, 0, None).sum() * self.cell_area)

    def to_json(self) -> dict:
        xmin, xmax, pmin, pmax = self.bounds
        return {
            "x_min": xmin, "x_max": xmax, "p_min": pmin, "p_max": pmax,
            "nx": len(self.x), "np": len(self.p),
            "values": [float(v) for v in self.values.ravel()],
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "p", "w"])
            for i, xv in enumerate(self.x):
                for j, pv in enumerate(self.p):
                    w.writerow([repr(float(xv)), repr(float(pv)), repr(float(self.values[i, j]))])

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)


def wigner_grid(rho, bounds=DEFAULT_BOUNDS, resolution=DEFAULT_RESOLUTION) -> WignerGrid:
    xmin, xmax, pmin, pmax = bounds
    nx, npts = resolution
    if xmin >= xmax or pmin >= pmax:
        raise ValueError(f"inverted or empty bounds {bounds}")
    if nx < 2 or npts < 2:
        raise ValueError("grid needs at least 2 points per axis")
    x = np.linspace(xmin, xmax, nx)
    p = np.linspace(pmin, pmax, npts)
    X, P = np.meshgrid(x, p, indexing="ij")
    return WignerGrid(x=x, p=p, values=wigner(rho, X, P))


def wigner_cut(rho, cut_angle: float, cut_range: float = 4.0, samples: int = 2001):
    """W along the line through the origin at ``cut_angle``; returns (t, W)."""
    t = np.linspace(-cut_range, cut_range, samples)
    return t, wigner(rho, t * np.cos(cut_angle), t * np.sin(cut_angle))


def count_runs(mask: np.ndarray) -> int:
    """Number of maximal runs of True in a 1-d boolean array."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size == 0:
        return 0
    return int(mask[0]) + int(np.count_nonzero(mask[1:] & ~mask[:-1]))


def count_negative_intervals(
    rho, cut_angle: float = 0.0, cut_range: float = 4.0, samples: int = 2001,
    threshold: float = DEFAULT_THRESHOLD,
) -> int:
    if samples < 100:
        raise ValueError("need at least 100 samples along the cut")
    _, W = wigner_cut(rho, cut_angle, cut_range, samples)
    return count_runs(W < -threshold)


def negativity_volume(rho, bounds=DEFAULT_BOUNDS, resolution=DEFAULT_RESOLUTION) -> float:
    """Riemann sum of max(0, -W) over the grid."""
    return wigner_grid(rho, bounds, resolution).negative_volume()


def parse_grid(text: str):
    """Parse ``"xmin,xmax,pmin,pmax,nx,np"`` into (bounds, resolution)."""
    parts = text.split(",")
    if len(parts) != 6:
        raise ValueError(f"grid needs 6 comma-separated fields, got {text!r}")
    xmin, xmax, pmin, pmax = (float(v) for v in parts[:4])
    return (xmin, xmax, pmin, pmax), (int(parts[4]), int(parts[5]))
