"""Homodyne statistics, quadrature sampling and RrhoR maximum-likelihood tomography."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from math import sqrt
from typing import Iterable, NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import fock

UNIFORM_SCAN = "uniform-scan"


class EmptyRecords(ValueError):
    pass


class NonConvergence(RuntimeWarning):
    pass


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Oscillator eigenfunctions psi_0..psi_{n_max-1} at ``x``, shape (n_max, len(x)).

    Uses the stable three-term recurrence, so large |x| and n do not
    overflow the way explicit Hermite polynomials do.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n_max, x.size))
    out[0] = np.pi**-0.25 * np.exp(-(x**2) / 2)
    if n_max > 1:
        out[1] = sqrt(2) * x * out[0]
    for n in range(1, n_max - 1):
        out[n + 1] = sqrt(2 / (n + 1)) * x * out[n] - sqrt(n / (n + 1)) * out[n - 1]
    return out


class QuadratureRecord(NamedTuple):
    theta: float
    x: float


def canonical_phase(theta, x):
    """Map (theta, x) to the equivalent record with theta in [0, pi).

    x_{theta + pi} = -x_theta, so crossing a half turn flips the sign of x.
    """
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    turns = np.floor(theta / np.pi)
    theta_c = theta - turns * np.pi
    # guard against theta_c == pi from rounding
    wrap = theta_c >= np.pi
    theta_c = np.where(wrap, theta_c - np.pi, theta_c)
    turns = turns + wrap
    sign = np.where(turns % 2 == 0, 1.0, -1.0)
    return theta_c, sign * x


@dataclass
class QuadratureData:
    """Column store of homodyne records; iterating yields :class:`QuadratureRecord`."""

    theta: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        if theta.shape != x.shape or theta.ndim != 1:
            raise ValueError("theta and x must be 1-d arrays of equal length")
        self.theta, self.x = canonical_phase(theta, x)

    @classmethod
    def from_records(cls, records: Iterable) -> "QuadratureData":
        rows = [tuple(r) for r in records]
        if not rows:
            return cls(np.empty(0), np.empty(0))
        arr = np.asarray(rows, dtype=float)
        return cls(arr[:, 0], arr[:, 1])

    def __len__(self):
        return len(self.x)

    def __iter__(self):
        for t, xv in zip(self.theta, self.x):
            yield QuadratureRecord(float(t), float(xv))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "x"])
            for t, xv in zip(self.theta, self.x):
                w.writerow([repr(float(t)), repr(float(xv))])

    @classmethod
    def read_csv(cls, path) -> "QuadratureData":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["theta", "x"]:
                raise ValueError(f"{path}: expected header 'theta,x', got {header}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from exc
        return cls.from_records(rows)

    def to_json(self) -> dict:
        return {"theta": self.theta.tolist(), "x": self.x.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadratureData":
        return cls(obj["theta"], obj["x"])


def quadrature_pdf(rho: np.ndarray, theta, x) -> np.ndarray:
    """Homodyne density p(x | theta) = <x| R(theta)^dag rho R(theta) |x>.

    ``theta`` and ``x`` broadcast against each other.
    """
    rho = np.asarray(rho)
    theta, x = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(x, dtype=float))
    d = rho.shape[0]
    psi = hermite_functions(d, x.ravel())
    v = psi * np.exp(1j * np.outer(np.arange(d), theta.ravel()))
    p = np.real(np.einsum("mj,mn,nj->j", v.conj(), rho, v))
    return p.reshape(x.shape)


def _sampling_grid(dim: int, spacing: float = 0.004) -> np.ndarray:
    # classical turning point of |dim-1> plus a margin where psi_n < 1e-12
    edge = sqrt(2 * dim + 1) + 7.0
    n = int(np.ceil(2 * edge / spacing)) + 1
    return np.linspace(-edge, edge, n)


def _phase_schedule(schedule, n_samples: int) -> np.ndarray:
    if isinstance(schedule, str):
        if schedule != UNIFORM_SCAN:
            raise ValueError(f"unknown phase schedule {schedule!r}")
        return np.pi * np.arange(n_samples) / n_samples
    phases = np.asarray(schedule, dtype=float)
    if phases.size == 0:
        raise ValueError("phase schedule is empty")
    return phases[np.arange(n_samples) % phases.size]


def sample_quadratures(
    rho: np.ndarray, n_samples: int, phase_schedule=UNIFORM_SCAN, seed: int = 0,
    chunk: int = 4096,
) -> QuadratureData:
    """Draw homodyne outcomes by inverse-CDF sampling.

    ``phase_schedule`` is either a list of phases, cycled through in order,
    or ``"uniform-scan"``, which gives sample j the phase pi j / n_samples.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    rng = np.random.default_rng(seed)
    thetas = _phase_schedule(phase_schedule, n_samples)
    u = rng.random(n_samples)

    grid = _sampling_grid(d)
    psi = hermite_functions(d, grid)
    # CDF(x|theta) = Re sum_mn rho_mn e^{i(n-m)theta} int_{-inf}^x psi_m psi_n
    prod = np.einsum("mg,ng->mng", psi, psi).reshape(d * d, -1)
    cum = cumulative_trapezoid(prod, grid, axis=1, initial=0).T.copy()  # (G, d*d)
    dn = (np.arange(d)[None, :] - np.arange(d)[:, None]).ravel()
    rho_flat = rho.ravel()

    x_out = np.empty(n_samples)
    for start in range(0, n_samples, chunk):
        sl = slice(start, start + chunk)
        coef = rho_flat[None, :] * np.exp(1j * np.outer(thetas[sl], dn))
        total = np.real(np.sum(coef * cum[-1], axis=1))
        target = u[sl] * total
        lo = np.zeros(len(target), dtype=int)
        hi = np.full(len(target), len(grid) - 1)
        # bisection on grid indices, then linear interpolation inside the cell
        while np.any(hi - lo > 1):
            mid = (lo + hi) // 2
            below = np.real(np.sum(coef * cum[mid], axis=1)) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        c_lo = np.real(np.sum(coef * cum[lo], axis=1))
        c_hi = np.real(np.sum(coef * cum[hi], axis=1))
        frac = np.clip((target - c_lo) / np.where(c_hi > c_lo, c_hi - c_lo, 1.0), 0, 1)
        x_out[sl] = grid[lo] + frac * (grid[hi] - grid[lo])
    return QuadratureData(thetas, x_out)


@dataclass(frozen=True)
class TomoSettings:
    dim: int = 6
    max_iters: int = 2000
    convergence_tol: float = 1e-10
    phase_bins: int | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")
        if self.phase_bins is not None and self.phase_bins < 1:
            raise ValueError("phase_bins must be positive or None")


@dataclass
class Reconstruction:
    rho: np.ndarray
    iterations: int
    converged: bool
    loglik_history: list[float] = field(default_factory=list)

    @property
    def loglik(self) -> float:
        return self.loglik_history[-1]

    def diagnostics(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_loglik": self.loglik,
            "converged": self.converged,
        }


def _projector_vectors(data: QuadratureData, dim: int, phase_bins) -> np.ndarray:
    theta = data.theta
    if phase_bins:
        width = np.pi / phase_bins
        theta = (np.floor(theta / width) + 0.5) * width
    psi = hermite_functions(dim, data.x)
    return (psi * np.exp(1j * np.outer(np.arange(dim), theta))).T


def mle_reconstruct(records, settings: TomoSettings = TomoSettings()) -> Reconstruction:
    """Iterate rho <- N[R rho R] with R = mean_j Pi_j / p_j(rho).

    Pi_j is the rank-one projector onto the truncated quadrature eigenstate
    of record j. Stops when the mean log-likelihood gains less than
    ``convergence_tol`` in one iteration, or after ``max_iters``.
    """
    data = records if isinstance(records, QuadratureData) else QuadratureData.from_records(records)
    if len(data) == 0:
        raise EmptyRecords("no quadrature records to reconstruct from")
    d = settings.dim
    V = _projector_vectors(data, d, settings.phase_bins)  # (N, d)
    Vc = V.conj()
    n_rec = len(data)

    def probs(rho):
        return np.maximum(np.real(np.einsum("jm,mn,jn->j", Vc, rho, V)), 1e-300)

    rho = np.eye(d, dtype=complex) / d
    p = probs(rho)
    history = [float(np.mean(np.log(p)))]
    converged = False
    it = 0
    for it in range(1, settings.max_iters + 1):
        R = (V.T * (1 / p)) @ Vc / n_rec
        rho = R @ rho @ R
        rho = fock.hermitize(rho / np.trace(rho).real)
        p = probs(rho)
        history.append(float(np.mean(np.log(p))))
        if history[-1] - history[-2] < settings.convergence_tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"RrhoR did not converge in {settings.max_iters} iterations", NonConvergence, stacklevel=2
        )
    return Reconstruction(rho=rho, iterations=it, converged=converged, loglik_history=history)


def metrics(rho: np.ndarray) -> dict:
    """Photon-number summary of a density matrix."""
    pops = np.clip(np.real(np.diag(rho)), 0, None)
    n = np.arange(len(pops))
    return {
        "populations": pops.tolist(),
        "purity": float(np.real(np.trace(rho @ rho))),
        "mean_photon_number": float(np.dot(n, pops)),
        "population_above_3": float(pops[4:].sum()),
    }
