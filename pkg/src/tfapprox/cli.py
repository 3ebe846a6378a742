"""Command-line front end.

    tfapprox approx   --input data.csv --p 6 --s 3 --n 1 --output-dir out/
    tfapprox project  --input data.csv --generators out/generators.csv --p 6 --s 3
    tfapprox zak      --input data.csv --p 6 --s 3 --output-dir out/
    tfapprox spectrum --input data.csv --p 6 --s 3 --output-dir out/
    tfapprox curve    --input data.csv --p 6 --s 3 [--n N_MAX]
    tfapprox validate --input data.csv --p 6 --s 3 --n 1 --trials 1000 --seed 7

Exit status: 0 on success, 2 for bad input or arguments, 1 for internal
failures (including a failed oracle check in `validate`).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .approximation import (
    DataSet,
    TFSubspace,
    approximation_error,
    error_curve,
    fiber_spectra,
    optimal_generators,
)
from .errors import TFApproxError
from .io import atomic_write, eigenvalue_text, fmt, read_signals, write_json, write_signals
from .lattice import make_config
from .transforms import zak
from .validation import validate_dataset

log = logging.getLogger("tfapprox")


def format_error(x: float) -> str:
    """Scientific notation with 12 digits after the point and a bare exponent."""
    mantissa, exp = f"{x:.12e}".split("e")
    return f"{mantissa}e{int(exp)}"


def _load(args):
    X = read_signals(args.input)
    config = make_config(X.shape[1], args.p, args.s)
    return DataSet(X, config)


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_approx(args) -> int:
    F = _load(args)
    result = optimal_generators(F, args.n)
    out = _outdir(args)
    gen_path = write_signals(out / "generators.csv", result.generators, count_key="n")
    eig_path = atomic_write(out / "eigenvalues.csv", eigenvalue_text(result.eigenvalues))
    manifest = {
        "config": F.config.to_dict(),
        "m": F.m,
        "n": result.n,
        "error": result.error,
        "generators_path": gen_path.name,
        "eigenvalues_path": eig_path.name,
        "seed": args.seed,
        "version": __version__,
    }
    write_json(out / "manifest.json", manifest)
    print(format_error(result.error))
    return 0


def cmd_project(args) -> int:
    F = _load(args)
    if args.generators is None:
        raise TFApproxError("project needs --generators")
    gens = read_signals(args.generators, count_key="n")
    V = TFSubspace(gens, F.config)
    error = approximation_error(F, V)
    if args.output_dir:
        from .approximation import project

        write_signals(_outdir(args) / "projection.csv", project(F.signals, V))
    print(format_error(error))
    return 0


def cmd_zak(args) -> int:
    F = _load(args)
    Z = zak(F.signals, F.config)
    rows = ["signal,omega,ell,re,im"]
    for j in range(F.m):
        for w in range(F.config.q):
            for ell in range(F.config.p):
                z = Z[j, w, ell]
                rows.append(f"{j + 1},{w},{ell},{fmt(z.real)},{fmt(z.imag)}")
    path = atomic_write(_outdir(args) / "zak.csv", "\n".join(rows) + "\n")
    print(path)
    return 0


def cmd_spectrum(args) -> int:
    F = _load(args)
    values, _ = fiber_spectra(F)
    path = atomic_write(_outdir(args) / "eigenvalues.csv", eigenvalue_text(np.moveaxis(values, -1, 0)))
    print(path)
    return 0


def cmd_curve(args) -> int:
    F = _load(args)
    n_max = F.m if args.n is None else args.n
    curve = error_curve(F, n_max)
    text = "n,error\n" + "".join(f"{n},{fmt(e)}\n" for n, e in curve)
    if args.output_dir:
        atomic_write(_outdir(args) / "curve.csv", text)
    sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    F = _load(args)
    seed = 0 if args.seed is None else args.seed
    reports = validate_dataset(F, args.n, args.trials, seed)
    payload = {"seed": seed, "trials": args.trials, "reports": [r.to_dict() for r in reports]}
    write_json(_outdir(args) / "validation.json", payload)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.case}: main={r.main:.12e} oracle={r.oracle:.12e}")
    return 0 if all(r.passed for r in reports) else 1


COMMANDS = {
    "approx": cmd_approx,
    "project": cmd_project,
    "zak": cmd_zak,
    "spectrum": cmd_spectrum,
    "curve": cmd_curve,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tfapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, type=Path)
        p.add_argument("--p", required=True, type=int)
        p.add_argument("--s", required=True, type=int)
        p.add_argument("--n", type=int, required=name in ("approx", "validate"))
        p.add_argument("--output-dir", default="." if name != "curve" and name != "project" else None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=100)
        if name == "project":
            p.add_argument("--generators", type=Path)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (TFApproxError, OSError, ValueError) as exc:
        print(f"tfapprox: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal failure")
        print(f"tfapprox: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
