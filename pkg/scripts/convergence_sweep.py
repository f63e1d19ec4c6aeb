#!/usr/bin/env python3
"""Sweep pump strength q and Fock cutoff for the three presets.

Prints, per q, the herald probability against its lowest-order form, the
fidelity of the exact herald to the perturbative state, rho33 of the lossy
three-photon preset against eta^3, and rho11 / rho22 of the zero-three preset.
The last columns shrink as q^2; the cutoff columns show truncation is converged.

    python scripts/convergence_sweep.py --qs 0.01 0.02 0.05 0.1 0.2
"""

import argparse
import warnings

import numpy as np

from heraldfock import fock, synth
from heraldfock.herald import HeraldConfig, TruncationWarning, herald, lowest_order_probability, perturbative_output


def ideal_fidelity(q, name, dim):
    betas = synth.preset_betas(name, q)
    out = herald(HeraldConfig(q=q, betas=betas, signal_dim=dim, idler_dim=dim))
    psi = np.zeros(dim, dtype=complex)
    psi[:4] = fock.normalize(perturbative_output(q, betas))
    return fock.fidelity(out.rho, psi)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qs", type=float, nargs="+", default=[0.01, 0.02, 0.05, 0.1, 0.2])
    ap.add_argument("--dims", type=int, nargs="+", default=[6, 8, 10])
    ap.add_argument("--eta", type=float, default=0.78)
    args = ap.parse_args()
    warnings.simplefilter("ignore", TruncationWarning)

    print(f"{'q':>6} {'P/P0':>10} {'F fock3':>10} {'F cat':>10} {'F 0-3':>10} "
          f"{'rho33-eta^3':>12} {'rho11 0-3':>10} {'rho22 0-3':>10}")
    for q in args.qs:
        ratio = herald(HeraldConfig(q=q)).probability / lowest_order_probability(q)
        fids = [ideal_fidelity(q, name, 6) for name in synth.PRESETS]
        lossy = herald(HeraldConfig(q=q, eta_signal=args.eta)).rho
        zt = herald(HeraldConfig(q=q, betas=synth.preset_betas("zero-three", q))).rho
        print(f"{q:>6.3f} {ratio:>10.6f} " + " ".join(f"{f:>10.6f}" for f in fids)
              + f" {lossy[3, 3].real - args.eta**3:>12.3e} {zt[1, 1].real:>10.3e} {zt[2, 2].real:>10.3e}")

    print("\ncutoff dependence (zero-three preset, rho11):")
    print(f"{'q':>6} " + " ".join(f"{'dim ' + str(d):>14}" for d in args.dims))
    for q in args.qs:
        vals = [herald(HeraldConfig(q=q, betas=synth.preset_betas("zero-three", q), signal_dim=d,
                                    idler_dim=d)).rho[1, 1].real for d in args.dims]
        print(f"{q:>6.3f} " + " ".join(f"{v:>14.8e}" for v in vals))


if __name__ == "__main__":
    main()
