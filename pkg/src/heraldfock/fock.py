"""Truncated Fock-space linear algebra for one or a few bosonic modes.

Conventions used throughout the package: hbar = 1, x = (a + a^dag)/sqrt(2),
p = (a - a^dag)/(i sqrt(2)), so the vacuum has quadrature variance 1/2.

States are plain numpy arrays:

* a single-mode state vector is a complex array of shape ``(d,)``;
* an operator or density matrix is a complex array of shape ``(d, d)``;
* a multimode pure state is a complex tensor whose shape lists the per-mode
  truncations, e.g. ``(d_s, d_i, d_i, d_i)``.
"""

from __future__ import annotations

from math import comb, factorial, sqrt

import numpy as np
from scipy.linalg import expm

DEFAULT_PAD = 10


def annihilation(dim: int) -> np.ndarray:
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def fock_state(n: int, dim: int) -> np.ndarray:
    if not 0 <= n < dim:
        raise ValueError(f"|{n}> is not representable at dim={dim}")
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1.0
    return vec


def normalize(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return np.asarray(vec, dtype=complex) / norm


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Truncated coherent state amplitudes exp(-|a|^2/2) a^n / sqrt(n!).

    The vector is deliberately not renormalized; ``1 - norm**2`` is the
    population lost above the cutoff.
    """
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")
    amps = np.empty(dim, dtype=complex)
    amps[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / sqrt(n)
    return amps


def _padded_expm(generator, dim: int, pad: int) -> np.ndarray:
    big = dim + pad
    return expm(generator(big))[:dim, :dim]


def displacement_operator(beta: complex, dim: int, pad: int = DEFAULT_PAD) -> np.ndarray:
    """D(beta) = exp(beta a^dag - beta* a), built at dim + pad and cropped."""
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")

    def gen(n):
        a = annihilation(n)
        return beta * a.conj().T - np.conj(beta) * a

    return _padded_expm(gen, dim, pad)


def squeeze_operator(r: float, phi: float, dim: int, pad: int = DEFAULT_PAD) -> np.ndarray:
    """S(r, phi) = exp((r/2)(e^{-2i phi} a^2 - e^{2i phi} a^dag^2)).

    phi = 0 squeezes the x quadrature: Var(x) = exp(-2r)/2 for the vacuum.
    """
    if r < 0:
        raise ValueError(f"squeezing r must be non-negative, got {r}")

    def gen(n):
        a = annihilation(n)
        ad = a.conj().T
        return 0.5 * r * (np.exp(-2j * phi) * a @ a - np.exp(2j * phi) * ad @ ad)

    return _padded_expm(gen, dim, pad)


def phase_rotation(theta: float, dim: int) -> np.ndarray:
    """R(theta) = exp(i theta n), diagonal in the number basis."""
    return np.diag(np.exp(1j * theta * np.arange(dim)))


def quadrature_operators(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = annihilation(dim)
    ad = a.conj().T
    return (a + ad) / np.sqrt(2), (a - ad) / (1j * np.sqrt(2))


# -- multimode tensors --------------------------------------------------------


def tensor(*states: np.ndarray) -> np.ndarray:
    """Outer product of single- or multimode pure states."""
    out = np.asarray(states[0], dtype=complex)
    for s in states[1:]:
        out = np.multiply.outer(out, np.asarray(s, dtype=complex))
    return out


def apply_single_mode(op: np.ndarray, state: np.ndarray, mode: int) -> np.ndarray:
    """Apply a single-mode operator to one axis of a multimode tensor."""
    _check_mode(state, mode)
    if op.shape != (state.shape[mode],) * 2:
        raise ValueError(
            f"operator of shape {op.shape} does not act on mode {mode} of dim {state.shape[mode]}"
        )
    out = np.tensordot(op, state, axes=([1], [mode]))
    return np.moveaxis(out, 0, mode)


def _check_mode(state: np.ndarray, mode: int) -> None:
    if not 0 <= mode < state.ndim:
        raise IndexError(f"mode {mode} out of range for a {state.ndim}-mode state")


def beamsplitter_matrix(transmittance: float, dim: int) -> np.ndarray:
    """Two-mode beamsplitter as a (dim, dim, dim, dim) tensor U[k, l, i, j].

    Heisenberg convention: a^dag -> t a^dag + r b^dag, b^dag -> -r a^dag + t b^dag
    with t = sqrt(T), r = sqrt(1 - T). Elements are exact: each
    total-photon-number block N is filled from the binomial expansion, and
    blocks with N >= dim are cropped.
    """
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
    t = sqrt(transmittance)
    r = sqrt(1.0 - transmittance)
    U = np.zeros((dim,) * 4)
    for total in range(2 * dim - 1):
        for j in range(max(0, total - dim + 1), min(total, dim - 1) + 1):
            # input |j, total - j>
            jb = total - j
            norm_in = sqrt(factorial(j) * factorial(jb))
            for k in range(max(0, total - dim + 1), min(total, dim - 1) + 1):
                amp = 0.0
                for la in range(max(0, k - jb), min(j, k) + 1):
                    lb = k - la
                    amp += (
                        comb(j, la) * t**la * r ** (j - la)
                        * comb(jb, lb) * (-r) ** lb * t ** (jb - lb)
                    )
                U[k, total - k, j, jb] = amp * sqrt(factorial(k) * factorial(total - k)) / norm_in
    return U


def beamsplitter_apply(
    state: np.ndarray, mode_a: int, mode_b: int, transmittance: float
) -> np.ndarray:
    """Mix two modes of a multimode pure state on a beamsplitter.

    Photon number is conserved across the pair; the norm is preserved
    whenever the populated total photon number of the pair stays below the
    mode truncation.
    """
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ValueError("beamsplitter needs two distinct modes")
    dim = state.shape[mode_a]
    if state.shape[mode_b] != dim:
        raise ValueError(
            f"coupled modes must share a truncation, got {dim} and {state.shape[mode_b]}"
        )
    U = beamsplitter_matrix(transmittance, dim)
    out = np.tensordot(U, state, axes=([2, 3], [mode_a, mode_b]))
    return np.moveaxis(out, [0, 1], [mode_a, mode_b])


def partial_trace(state: np.ndarray, keep, dims=None) -> np.ndarray:
    """Reduced density matrix on the modes in ``keep``.

    ``state`` is either a multimode pure tensor, or (when ``dims`` is given) a
    density matrix of shape (prod(dims), prod(dims)). Kept modes are ordered
    as in the input. The trace of the result equals the squared norm (or the
    trace) of the input.
    """
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one mode")
    if dims is None:
        psi = np.asarray(state)
        for m in keep:
            _check_mode(psi, m)
        kept_dim = int(np.prod([psi.shape[m] for m in keep]))
        mat = np.moveaxis(psi, keep, range(len(keep))).reshape(kept_dim, -1)
        return mat @ mat.conj().T
    dims = list(dims)
    n = len(dims)
    for m in keep:
        if not 0 <= m < n:
            raise IndexError(f"mode {m} out of range for {n} modes")
    rho = np.asarray(state).reshape(dims + dims)
    drop = [m for m in range(n) if m not in keep]
    # trace out from the highest index so earlier axis numbers stay valid
    for m in sorted(drop, reverse=True):
        nleft = rho.ndim // 2
        rho = np.trace(rho, axis1=m, axis2=m + nleft)
    kept_dim = int(np.prod([dims[m] for m in keep]))
    return rho.reshape(kept_dim, kept_dim)


# -- channels and figures of merit -------------------------------------------


def loss_kraus(eta: float, dim: int) -> list[np.ndarray]:
    """Kraus operators of the pure-loss channel with transmissivity eta."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    ops = []
    for k in range(dim):
        A = np.zeros((dim, dim))
        for n in range(k, dim):
            A[n - k, n] = sqrt(comb(n, k) * eta ** (n - k) * (1 - eta) ** k)
        ops.append(A)
    return ops


def loss_channel(rho: np.ndarray, eta: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for A in loss_kraus(eta, rho.shape[0]):
        out += A @ rho @ A.T
    return out


def fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Overlap <psi|rho|psi> of a density matrix with a normalized pure state."""
    psi = np.asarray(psi)
    if rho.shape != (psi.shape[0],) * 2:
        raise ValueError(f"dimension mismatch: rho {rho.shape}, psi {psi.shape}")
    return float(np.real(np.vdot(psi, rho @ psi)))


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def state_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 of two mixed states."""
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    s = _psd_sqrt(rho)
    w = np.linalg.eigvalsh(s @ sigma @ s)
    return float(np.sum(np.sqrt(np.clip(w, 0, None))) ** 2)


def pure_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_density(rho: np.ndarray, herm_tol=1e-12, trace_tol=1e-10, eig_floor=-1e-9) -> None:
    """Raise ValueError unless rho is a valid density matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValueError(f"density matrix not Hermitian (max deviation {herm:.3g})")
    tr = np.trace(rho).real
    if abs(tr - 1) > trace_tol:
        raise ValueError(f"density matrix trace is {tr!r}")
    lam = np.linalg.eigvalsh(rho).min()
    if lam < eig_floor:
        raise ValueError(f"density matrix has negative eigenvalue {lam:.3g}")


def hermitize(rho: np.ndarray) -> np.ndarray:
    return (rho + rho.conj().T) / 2
