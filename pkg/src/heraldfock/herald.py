"""Heralded state generation from a two-mode squeezed vacuum.

The idler is split three ways, each arm is displaced and then watched by an
on/off detector. A three-fold click leaves the signal in a superposition of
zero to three photons whose coefficients are set by the displacements.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from math import sqrt

import numpy as np

from . import fock
from .io import array_to_json, complex_pair

# idler mode index, then the three detector arms
SIGNAL, IDLER = 0, 1
ARMS = (1, 2, 3)
TOP_LEVEL_LIMIT = 1e-4


class TruncationWarning(UserWarning):
    """Population near a mode cutoff is large enough to distort results."""


@dataclass(frozen=True)
class HeraldConfig:
    q: float
    betas: tuple[complex, complex, complex] = (0j, 0j, 0j)
    signal_dim: int = 6
    idler_dim: int = 6
    eta_signal: float = 1.0
    eta_detector: float = 1.0
    dark_prob: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(complex(b) for b in self.betas))
        if len(self.betas) != 3:
            raise ValueError(f"need three displacement amplitudes, got {len(self.betas)}")
        if not 0.0 <= self.q < 1.0:
            raise ValueError(f"q must lie in [0, 1), got {self.q}")
        for name in ("eta_signal", "eta_detector"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not 0.0 <= self.dark_prob < 1.0:
            raise ValueError(f"dark_prob must lie in [0, 1), got {self.dark_prob}")
        if self.signal_dim < 4 or self.idler_dim < 4:
            raise ValueError("signal_dim and idler_dim must be at least 4")

    def to_json(self) -> dict:
        d = asdict(self)
        d["betas"] = [complex_pair(b) for b in self.betas]
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "HeraldConfig":
        obj = dict(obj)
        try:
            obj["betas"] = tuple(complex(re, im) for re, im in obj.get("betas", [[0, 0]] * 3))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"betas must be three [re, im] pairs: {exc}") from exc
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)


@dataclass(frozen=True)
class DetectorPOVM:
    pi_click: np.ndarray
    pi_noclick: np.ndarray


@dataclass(frozen=True)
class HeraldOutcome:
    rho: np.ndarray
    probability: float
    warnings: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        out = array_to_json(self.rho)
        out["probability"] = float(self.probability)
        return out


def two_mode_squeezed(q: float, dim: int) -> np.ndarray:
    """sqrt(1 - q^2) sum_n q^n |n>_s |n>_i truncated at n < dim."""
    if not 0.0 <= q < 1.0:
        raise ValueError(f"q must lie in [0, 1), got {q}")
    psi = np.zeros((dim, dim), dtype=complex)
    n = np.arange(dim)
    psi[n, n] = sqrt(1 - q**2) * q**n
    return psi


def build_idler_network(state: np.ndarray, betas) -> np.ndarray:
    """Split the idler of a (signal, idler) state three ways and displace each arm.

    Returns a four-mode tensor ordered (signal, arm 1, arm 2, arm 3). The
    split is a T=1/3 beamsplitter followed by T=1/2 on the reflected port,
    so each arm receives the idler field with amplitude 1/sqrt(3).
    """
    if state.ndim != 2:
        raise ValueError(f"expected a (signal, idler) tensor, got {state.ndim} modes")
    betas = tuple(betas)
    if len(betas) != 3:
        raise ValueError("need three displacement amplitudes")
    di = state.shape[IDLER]
    vac = fock.fock_state(0, di)
    psi = fock.tensor(state, vac, vac)
    psi = fock.beamsplitter_apply(psi, 1, 2, 1 / 3)
    psi = fock.beamsplitter_apply(psi, 2, 3, 1 / 2)
    for mode, beta in zip(ARMS, betas):
        if beta != 0:
            psi = fock.apply_single_mode(fock.displacement_operator(beta, di), psi, mode)
    return psi


def detector_povm(eta_detector: float, dark_prob: float, dim: int) -> DetectorPOVM:
    """On/off detector with efficiency and a phase-insensitive dark-click probability."""
    if not 0.0 <= eta_detector <= 1.0:
        raise ValueError(f"eta_detector must lie in [0, 1], got {eta_detector}")
    if not 0.0 <= dark_prob < 1.0:
        raise ValueError(f"dark_prob must lie in [0, 1), got {dark_prob}")
    n = np.arange(dim)
    noclick = np.diag((1 - dark_prob) * (1 - eta_detector) ** n).astype(complex)
    return DetectorPOVM(pi_click=np.eye(dim) - noclick, pi_noclick=noclick)


def _top_level_populations(psi: np.ndarray) -> list[float]:
    probs = np.abs(psi) ** 2
    out = []
    for mode in range(psi.ndim):
        marginal = probs.sum(axis=tuple(m for m in range(psi.ndim) if m != mode))
        out.append(float(marginal[-2:].sum()))
    return out


def herald(config: HeraldConfig) -> HeraldOutcome:
    """Exact conditional signal state on a three-fold click.

    Emits a :class:`TruncationWarning` if any mode of the pre-detection state
    holds more than 1e-4 population in its two highest Fock levels.
    """
    ds, di = config.signal_dim, config.idler_dim
    n = min(ds, di)
    tms = np.zeros((ds, di), dtype=complex)
    tms[:n, :n] = two_mode_squeezed(config.q, n)
    psi = build_idler_network(tms, config.betas)

    notes = []
    for mode, pop in enumerate(_top_level_populations(psi)):
        if pop > TOP_LEVEL_LIMIT:
            msg = f"mode {mode} holds {pop:.3g} population in its top two Fock levels"
            notes.append(msg)
            warnings.warn(msg, TruncationWarning, stacklevel=2)

    povm = detector_povm(config.eta_detector, config.dark_prob, di)
    projected = psi
    for mode in ARMS:
        projected = fock.apply_single_mode(povm.pi_click, projected, mode)
    rho = np.tensordot(projected, psi.conj(), axes=([1, 2, 3], [1, 2, 3]))
    prob = float(np.trace(rho).real)
    if prob <= 0:
        raise ValueError("herald probability vanished; check q and the truncation")
    rho = fock.hermitize(rho / prob)
    if config.eta_signal < 1:
        rho = fock.loss_channel(rho, config.eta_signal)
    return HeraldOutcome(rho=rho, probability=prob, warnings=tuple(notes))


def perturbative_output(q: float, betas) -> np.ndarray:
    """Lowest-order heralded amplitudes on |0>..|3>, unnormalized.

    (b1 b2 b3, q/sqrt(3) e2, sqrt(2)/3 q^2 e1, sqrt(2)/3 q^3) with e1, e2 the
    elementary symmetric polynomials of the displacements.
    """
    b1, b2, b3 = (complex(b) for b in betas)
    e1 = b1 + b2 + b3
    e2 = b1 * b2 + b2 * b3 + b3 * b1
    e3 = b1 * b2 * b3
    return np.array(
        [e3, q / sqrt(3) * e2, sqrt(2) / 3 * q**2 * e1, sqrt(2) / 3 * q**3],
        dtype=complex,
    )


def lowest_order_probability(q: float) -> float:
    """Three-fold click probability for zero displacement as q -> 0."""
    return 2 / 9 * q**6 * (1 - q**2)
