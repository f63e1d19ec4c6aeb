"""Command-line front end: ``heraldfock {synth,herald,wigner,tomo,metrics}``.

Every command writes its outputs plus a ``manifest.json`` into ``--out``.
Exit codes: 0 ok, 2 input error, 3 numerical-validity error (only raised
with ``--strict``).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, fock, herald, synth, tomo, wigner
from .io import array_from_json, array_to_json, complex_pair, read_json, write_json

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
DEFAULT_SEED = 20130101


class InputError(Exception):
    pass


class NumericalError(Exception):
    pass


def _load_rho(path) -> np.ndarray:
    try:
        rho = array_from_json(read_json(path))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"cannot read density matrix from {path}: {exc}") from exc
    if rho.ndim == 1:
        rho = fock.pure_density(fock.normalize(rho))
    try:
        fock.check_density(rho, herm_tol=1e-9, trace_tol=1e-6)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return rho


def _pad(vec: np.ndarray, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    out[: len(vec)] = vec
    return out


# -- subcommands ---------------------------------------------------------------


def cmd_synth(args) -> dict:
    if args.preset:
        target = synth.preset_target(args.preset)
    elif args.config:
        try:
            target = array_from_json(read_json(args.config))
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise InputError(f"cannot read target from {args.config}: {exc}") from exc
        if target.shape != (4,):
            raise InputError(f"target must be a 4-amplitude vector, got shape {target.shape}")
    else:
        raise InputError("synth needs --preset or --config")
    try:
        recipe = synth.solve_displacements(target, args.q)
    except synth.DegenerateTarget as exc:
        raise InputError(f"degenerate target: {exc}") from exc
    except (ValueError, synth.ZeroState) as exc:
        raise InputError(str(exc)) from exc
    predicted = synth.forward_map(recipe.betas, recipe.q)
    out = {
        "q": recipe.q,
        "betas": [complex_pair(b) for b in recipe.betas],
        "predicted_state": array_to_json(predicted),
    }
    write_json(args.out / "recipe.json", out)
    return {"outputs": ["recipe.json"], "summary": out}


def _herald_config(args) -> herald.HeraldConfig:
    if args.config:
        try:
            return herald.HeraldConfig.from_json(read_json(args.config))
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            raise InputError(f"bad herald config {args.config}: {exc}") from exc
    if not args.preset:
        raise InputError("herald needs --config or --preset")
    try:
        return herald.HeraldConfig(
            q=args.q,
            betas=synth.preset_betas(args.preset, args.q),
            signal_dim=args.dim,
            idler_dim=args.dim,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_herald(args) -> dict:
    config = _herald_config(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", herald.TruncationWarning)
        outcome = herald.herald(config)
    if outcome.warnings and args.strict:
        raise NumericalError("; ".join(outcome.warnings))
    result = outcome.to_json()
    result["warnings"] = list(outcome.warnings)
    write_json(args.out / "outcome.json", result)
    write_json(args.out / "config.json", config.to_json())
    report = tomo.metrics(outcome.rho)
    report["probability"] = outcome.probability
    if args.preset:
        target = _pad(synth.preset_target(args.preset), config.signal_dim)
        report["fidelity"] = fock.fidelity(outcome.rho, target)
    write_json(args.out / "metrics.json", report)
    return {"outputs": ["outcome.json", "config.json", "metrics.json"], "summary": report}


def cmd_wigner(args) -> dict:
    if not args.config:
        raise InputError("wigner needs --config pointing to a density matrix")
    rho = _load_rho(args.config)
    try:
        bounds, resolution = wigner.parse_grid(args.grid) if args.grid else (
            wigner.DEFAULT_BOUNDS, wigner.DEFAULT_RESOLUTION)
        grid = wigner.wigner_grid(rho, bounds, resolution)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    grid.write_csv(args.out / "wigner_grid.csv")
    grid.write_json(args.out / "wigner_grid.json")
    report = {
        "cut_angle": args.cut_angle,
        "threshold": args.threshold,
        "negative_intervals": wigner.count_negative_intervals(
            rho, args.cut_angle, threshold=args.threshold),
        "negativity_volume": grid.negative_volume(),
        "integral": grid.integral(),
        "min_w": float(grid.values.min()),
        "max_abs_w": float(np.abs(grid.values).max()),
    }
    write_json(args.out / "negativity.json", report)
    return {"outputs": ["wigner_grid.csv", "wigner_grid.json", "negativity.json"], "summary": report}


def cmd_tomo(args) -> dict:
    outputs = []
    truth = None
    if args.records:
        try:
            data = tomo.QuadratureData.read_csv(args.records)
        except (OSError, ValueError) as exc:
            raise InputError(f"bad records file {args.records}: {exc}") from exc
    elif args.config:
        truth = _load_rho(args.config)
        if args.samples < 1:
            raise InputError("--samples must be at least 1")
        if args.phases is not None and args.phases < 1:
            raise InputError("--phases must be at least 1")
        schedule = tomo.UNIFORM_SCAN if args.phases is None else list(
            np.pi * np.arange(args.phases) / args.phases)
        data = tomo.sample_quadratures(truth, args.samples, schedule, seed=args.seed)
        data.write_csv(args.out / "records.csv")
        outputs.append("records.csv")
    else:
        raise InputError("tomo needs --config (simulate) or --records (fit)")
    if len(data) == 0:
        raise InputError("no quadrature records")
    try:
        settings = tomo.TomoSettings(dim=args.dim, max_iters=args.max_iters)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", tomo.NonConvergence)
        rec = tomo.mle_reconstruct(data, settings)
    if args.strict and not rec.converged:
        raise NumericalError(f"reconstruction did not converge in {rec.iterations} iterations")
    write_json(args.out / "rho.json", array_to_json(rec.rho))
    report = tomo.metrics(rec.rho)
    if truth is not None and truth.shape[0] <= args.dim:
        padded = np.zeros((args.dim, args.dim), dtype=complex)
        padded[: truth.shape[0], : truth.shape[0]] = truth
        report["fidelity_to_truth"] = fock.state_fidelity(padded, rec.rho)
    write_json(args.out / "metrics.json", report)
    write_json(args.out / "diagnostics.json", rec.diagnostics())
    outputs += ["rho.json", "metrics.json", "diagnostics.json"]
    return {"outputs": outputs, "summary": {**report, **rec.diagnostics()}}


def cmd_metrics(args) -> dict:
    if not args.config:
        raise InputError("metrics needs --config pointing to a density matrix")
    rho = _load_rho(args.config)
    report = tomo.metrics(rho)
    if args.preset:
        d = rho.shape[0]
        if d < 4:
            raise InputError("preset fidelity needs dim >= 4")
        report["fidelity"] = fock.fidelity(rho, _pad(synth.preset_target(args.preset), d))
    write_json(args.out / "metrics.json", report)
    return {"outputs": ["metrics.json"], "summary": report}


COMMANDS = {
    "synth": cmd_synth,
    "herald": cmd_herald,
    "wigner": cmd_wigner,
    "tomo": cmd_tomo,
    "metrics": cmd_metrics,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heraldfock", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="input JSON file")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--strict", action="store_true",
                       help="treat numerical-validity warnings as errors (exit 3)")
        return p

    p = common(sub.add_parser("synth", help="target state -> displacement recipe"))
    p.add_argument("--preset", choices=synth.PRESETS)
    p.add_argument("--q", type=float, default=0.1)

    p = common(sub.add_parser("herald", help="simulate the three-fold herald"))
    p.add_argument("--preset", choices=synth.PRESETS)
    p.add_argument("--q", type=float, default=0.05)
    p.add_argument("--dim", type=int, default=6)

    p = common(sub.add_parser("wigner", help="Wigner grid and negativity report"))
    p.add_argument("--grid", help='"xmin,xmax,pmin,pmax,nx,np"')
    p.add_argument("--cut-angle", type=float, default=0.0, help="radians")
    p.add_argument("--threshold", type=float, default=wigner.DEFAULT_THRESHOLD)

    p = common(sub.add_parser("tomo", help="simulate and/or reconstruct homodyne tomography"))
    p.add_argument("--records", type=Path, help='CSV with header "theta,x" (fit mode)')
    p.add_argument("--dim", type=int, default=6)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--phases", type=int, default=None,
                   help="number of equally spaced phases (default: uniform scan)")
    p.add_argument("--max-iters", type=int, default=2000)

    p = common(sub.add_parser("metrics", help="photon-number report for a density matrix"))
    p.add_argument("--preset", choices=synth.PRESETS, help="also report fidelity to this target")
    return parser


def _manifest(args, argv, outputs) -> dict:
    inputs = [str(v) for k in ("config", "records") if (v := getattr(args, k, None))]
    return {
        "command": args.command,
        "argv": list(argv),
        "inputs": inputs,
        "outputs": outputs,
        "seed": args.seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _attach_values(argv):
    # "--grid -4,4,..." would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            out.append(f"--grid={next(it, '')}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.out.mkdir(parents=True, exist_ok=True)
    try:
        result = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    write_json(args.out / "manifest.json", _manifest(args, argv, result["outputs"]))
    print(json.dumps(result["summary"], indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
