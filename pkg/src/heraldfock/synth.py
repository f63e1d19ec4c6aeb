"""Inverse design: target superposition of |0>..|3> -> three displacements.

The heralded amplitudes are, up to normalization,

    c0 : c1 : c2 : c3 = e3 : (q/sqrt 3) e2 : (sqrt 2/3) q^2 e1 : (sqrt 2/3) q^3

with e1, e2, e3 the elementary symmetric polynomials of the displacements.
Solving for the e_k and taking the roots of x^3 - e1 x^2 + e2 x - e3 gives
the displacement triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.optimize import minimize_scalar

from . import fock
from .herald import perturbative_output

C3_FLOOR = 1e-9


class DegenerateTarget(ValueError):
    """The target has no three-photon component, so no displacement triple reaches it."""


class ZeroState(ValueError):
    pass


@dataclass(frozen=True)
class DisplacementRecipe:
    betas: tuple[complex, complex, complex]
    q: float

    def to_json(self) -> dict:
        return {"q": self.q, "betas": [[b.real, b.imag] for b in self.betas]}


def canonicalize(coeffs) -> np.ndarray:
    """Normalize and fix the global phase so that c3 is real and non-negative."""
    c = np.asarray(coeffs, dtype=complex)
    norm = np.linalg.norm(c)
    if norm == 0:
        raise ZeroState("all coefficients vanish")
    c = c / norm
    if abs(c[3]) > 0:
        c = c * np.exp(-1j * np.angle(c[3]))
        c[3] = abs(c[3])
    return c


def _sort_roots(roots, rel_tol: float = 1e-9) -> tuple[complex, ...]:
    """Descending real part, then descending imaginary part.

    Real parts closer than ``rel_tol`` times the largest root magnitude count
    as tied, so rounding noise cannot reorder e.g. 0 and 0.5j.
    """
    roots = [complex(r) for r in roots]
    scale = max(max(abs(r) for r in roots), 1e-300)
    ordered = sorted(roots, key=lambda z: -z.real)
    groups: list[list[complex]] = []
    for z in ordered:
        if groups and abs(groups[-1][0].real - z.real) <= rel_tol * scale:
            groups[-1].append(z)
        else:
            groups.append([z])
    return tuple(z for g in groups for z in sorted(g, key=lambda z: -z.imag))


def cubic_roots(e1: complex, e2: complex, e3: complex) -> np.ndarray:
    """Roots of x^3 - e1 x^2 + e2 x - e3 from the companion-matrix eigenvalues.

    No Newton polishing: near a repeated root it moves the clustered roots
    independently and spoils the symmetric functions the forward map uses.
    """
    companion = np.array(
        [[e1, -e2, e3], [1, 0, 0], [0, 1, 0]],
        dtype=complex,
    )
    return np.linalg.eigvals(companion)


def solve_displacements(target, q: float) -> DisplacementRecipe:
    c = canonicalize(target)
    if c.shape != (4,):
        raise ValueError(f"target must hold four amplitudes, got {c.shape}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if abs(c[3]) < C3_FLOOR:
        raise DegenerateTarget(
            "target has no |3> component; a three-fold herald always carries one"
        )
    e1 = q * c[2] / c[3]
    e2 = sqrt(2 / 3) * q**2 * c[1] / c[3]
    e3 = sqrt(2) / 3 * q**3 * c[0] / c[3]
    return DisplacementRecipe(betas=_sort_roots(cubic_roots(e1, e2, e3)), q=q)


def forward_map(betas, q: float) -> np.ndarray:
    """Normalized, phase-canonical target reached by ``betas`` at pump ``q``."""
    return canonicalize(perturbative_output(q, betas))


# -- ideal reference states ---------------------------------------------------


def target_cat(alpha: complex, parity: str = "odd", dim: int = 20) -> np.ndarray:
    """Normalized truncated cat |alpha> - |-alpha> (odd) or |alpha> + |-alpha> (even)."""
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    sign = -1 if parity == "odd" else 1
    vec = fock.coherent_state(alpha, dim) + sign * fock.coherent_state(-alpha, dim)
    if np.linalg.norm(vec) < 1e-300:
        raise ZeroState("odd cat with alpha = 0 has zero norm")
    return fock.normalize(vec)


def target_qutrit_basis(alpha: complex, index: int, dim: int = 20) -> np.ndarray:
    """Coherent state |alpha> projected onto the Fock ladder n = index (mod 3).

    Equivalent to (1/3) sum_k w^(-index k) |alpha w^k> with w = exp(2 pi i / 3).
    """
    if index not in (0, 1, 2):
        raise ValueError(f"index must be 0, 1 or 2, got {index}")
    if dim < 6:
        raise ValueError("dim must be at least 6")
    vec = fock.coherent_state(alpha, dim)
    vec[np.arange(dim) % 3 != index] = 0
    if np.linalg.norm(vec) == 0:
        raise ZeroState(f"qutrit basis state {index} vanishes at alpha = 0")
    return fock.normalize(vec)


# -- preset recipes -----------------------------------------------------------

ZERO_THREE_S_OVER_Q = 0.86
PRESETS = ("fock3", "cat-odd", "zero-three")


def preset_betas(name: str, q: float) -> tuple[complex, complex, complex]:
    if name == "fock3":
        return (0j, 0j, 0j)
    if name == "cat-odd":
        return (sqrt(2) * q + 0j, -sqrt(2) * q + 0j, 0j)
    if name == "zero-three":
        s = ZERO_THREE_S_OVER_Q * q
        return tuple(complex(s * np.exp(1j * phi)) for phi in (np.pi / 6, 5 * np.pi / 6, 3 * np.pi / 2))
    raise KeyError(f"unknown preset {name!r}; choose from {PRESETS}")


def preset_target(name: str) -> np.ndarray:
    """Ideal q-independent four-amplitude target for a preset."""
    if name == "fock3":
        return np.array([0, 0, 0, 1], dtype=complex)
    if name == "cat-odd":
        return canonicalize([0, -2 / sqrt(3), 0, sqrt(2) / 3])
    if name == "zero-three":
        return canonicalize([1j * ZERO_THREE_S_OVER_Q**3, 0, 0, sqrt(2) / 3])
    raise KeyError(f"unknown preset {name!r}; choose from {PRESETS}")


def best_rotation_fidelity(psi: np.ndarray, target: np.ndarray, samples: int = 721) -> tuple[float, float]:
    """Max over phase rotations R(theta) of |<target|R(theta)|psi>|^2.

    Returns ``(fidelity, theta)``. A coarse grid search is refined with a
    bounded scalar minimization around the best grid point.
    """
    dim = max(len(psi), len(target))
    a = np.zeros(dim, dtype=complex)
    b = np.zeros(dim, dtype=complex)
    a[: len(psi)] = psi
    b[: len(target)] = target
    n = np.arange(dim)
    weights = b.conj() * a

    def overlap(theta):
        return abs(np.sum(weights * np.exp(1j * n * theta))) ** 2

    grid = np.linspace(0, 2 * np.pi, samples)
    vals = np.array([overlap(t) for t in grid])
    i = int(np.argmax(vals))
    step = grid[1] - grid[0]
    res = minimize_scalar(
        lambda t: -overlap(t), bounds=(grid[i] - step, grid[i] + step), method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun >= vals[i]:
        return float(-res.fun), float(res.x % (2 * np.pi))
    return float(vals[i]), float(grid[i])
