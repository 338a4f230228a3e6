"""Command line front end.

Exit codes: 0 success, 2 verification mismatch, 3 solver shortfall,
4 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .asymptotic import asymptotic_seed, geometric_points
from .combinatorics import Partition, enumerate_standard_tableaux
from .exact import matrix_to_json
from .pipelines import decay_slope, polish_seed, sweep, verify
from .solver import SolverSettings, find_all_critical_points
from .specht import build_rep
from .tensor_oracle import default_n, highest_weight_space, restricted_transposition

OUTPUT_DIR_ENV = "BETHE_SN_OUTPUT_DIR"

EXIT_OK, EXIT_MISMATCH, EXIT_SHORTFALL, EXIT_CONFIG = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


def parse_shape(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as err:
        raise ConfigError(str(err)) from None


def parse_number(tok: str):
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        pass
    try:
        return complex(tok.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse {tok!r} as a number") from None


def parse_z(text: str, shape: Partition) -> list:
    z = [parse_number(tok) for tok in text.split(",") if tok.strip()]
    if len(z) != shape.N:
        raise ConfigError(f"shape {shape} needs {shape.N} points, got {len(z)}")
    for a in range(len(z)):
        for b in range(a + 1, len(z)):
            if z[a] == z[b]:
                raise ConfigError(f"coincident z: z_{a + 1} = z_{b + 1} = {z[a]}")
    return z


def _settings(args) -> SolverSettings:
    kw = {"seed": args.seed}
    if getattr(args, "tol", None) is not None:
        kw["newton_tol"] = args.tol
    if getattr(args, "gamma", None) is not None:
        kw["gamma"] = args.gamma
    if getattr(args, "nondegeneracy_tol", None) is not None:
        kw["nondegeneracy_tol"] = args.nondegeneracy_tol
    try:
        return SolverSettings(**kw)
    except ValueError as err:
        raise ConfigError(str(err)) from None


def _emit(report: dict, args, default_name: str):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    out = args.out
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = str(Path(os.environ[OUTPUT_DIR_ENV]) / default_name)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _arguments(args) -> dict:
    # the output location is not part of the result
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "verbose")}


def _header(args, command: str) -> dict:
    return {"tool": "bethe_sn", "version": __version__, "command": command, "arguments": _arguments(args)}


def cmd_tableaux(args) -> int:
    shape = parse_shape(args.shape)
    tabs = enumerate_standard_tableaux(shape)
    report = _header(args, "tableaux")
    report.update({
        "shape": list(shape.parts),
        "dim": shape.hook_length_dimension(),
        "tableaux": [{"rows": T.to_json(), "contents": list(T.content_vector())} for T in tabs],
    })
    _emit(report, args, "tableaux.json")
    return EXIT_OK


def cmd_rep(args) -> int:
    shape = parse_shape(args.shape)
    report = _header(args, "rep")
    report["specht"] = build_rep(shape).to_json()
    if args.oracle:
        n = args.n or default_n(shape)
        hw = highest_weight_space(n, shape)
        report["tensor"] = {
            "n": n,
            "dim": hw.dim,
            "generators": [matrix_to_json(restricted_transposition(n, shape, k, k + 1)) for k in range(1, shape.N)],
        }
    _emit(report, args, "rep.json")
    return EXIT_OK


def cmd_solve(args) -> int:
    shape = parse_shape(args.shape)
    z = parse_z(args.z, shape)
    result = find_all_critical_points(shape, z, _settings(args))
    report = _header(args, "solve")
    report["config"] = {"shape": list(shape.parts), "z": args.z, "settings": vars(_settings(args))}
    report.update(result.to_json())
    _emit(report, args, "points.json")
    return EXIT_SHORTFALL if result.shortfall else EXIT_OK


def cmd_verify(args) -> int:
    shape = parse_shape(args.shape)
    z = parse_z(args.z, shape)
    result = verify(shape, z, _settings(args), match_tol=args.match_tol, oracle=args.oracle, n=args.n)
    result.report["command"] = "verify"
    result.report["arguments"] = _arguments(args)
    _emit(result.report, args, "verify.json")
    return result.exit_code


def cmd_asymptotic(args) -> int:
    shape = parse_shape(args.shape)
    settings = _settings(args)
    gamma = settings.gamma
    rows = []
    for T in enumerate_standard_tableaux(shape):
        res = polish_seed(T, gamma, settings)
        entry = res.to_json()
        entry["seed"] = asymptotic_seed(T).to_json()["ratios"]
        rows.append(entry)
    report = _header(args, "asymptotic")
    report.update({"shape": list(shape.parts), "gamma": gamma,
                   "z": [str(v.real) for v in geometric_points(shape.N, gamma).real], "tableaux": rows})
    _emit(report, args, "asymptotic.json")
    return EXIT_OK if all(r["converged"] for r in rows) else EXIT_SHORTFALL


def cmd_sweep(args) -> int:
    shape = parse_shape(args.shape)
    try:
        gammas = [float(g) for g in args.gammas.split(",")]
    except ValueError:
        raise ConfigError(f"bad gamma list {args.gammas!r}") from None
    if any(g <= 1 for g in gammas):
        raise ConfigError("every gamma must exceed 1")
    settings = _settings(args)
    results = sweep(shape, gammas, settings)
    table = []
    for T in enumerate_standard_tableaux(shape):
        cells = [r for r in results if r.tableau == T]
        errs = [r.eigenvalue_error for r in cells]
        ok = all(r.converged for r in cells) and all(e > 0 for e in errs) and len(gammas) > 1
        table.append({
            "tableau": T.to_json(),
            "cells": [r.to_json() for r in cells],
            "slope": decay_slope(gammas, errs) if ok else None,
        })
    report = _header(args, "sweep")
    report.update({"shape": list(shape.parts), "gammas": gammas, "table": table})
    _emit(report, args, "sweep.json")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tableau", "gamma", "converged", "max_eigenvalue_error", "max_ratio_error"])
            for r in results:
                w.writerow([str(r.tableau), r.gamma, r.converged, r.eigenvalue_error, r.ratio_error])
    return EXIT_OK if all(r.converged for r in results) else EXIT_SHORTFALL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bethe-sn", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, z=False, gamma=False):
        sp.add_argument("--shape", required=True, help="partition, e.g. 3,2,1")
        if z:
            sp.add_argument("--z", required=True, help="comma separated points; rationals like 1/2 are exact")
        if gamma:
            sp.add_argument("--gamma", type=float, default=None, help="spread of the seed points z_j = gamma^j")
        sp.add_argument("--tol", type=float, default=None, help="Newton tolerance on the scaled residual")
        sp.add_argument("--nondegeneracy-tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help=f"output file ('-' for stdout; default ${OUTPUT_DIR_ENV} or stdout)")

    sp = sub.add_parser("tableaux", help="standard tableaux, contents and dimension")
    common(sp)
    sp.set_defaults(func=cmd_tableaux)

    sp = sub.add_parser("rep", help="export exact representation matrices")
    common(sp)
    sp.add_argument("--oracle", action="store_true", help="also export the tensor-space realization")
    sp.add_argument("--n", type=int, default=None)
    sp.set_defaults(func=cmd_rep)

    sp = sub.add_parser("solve", help="all critical points at z")
    common(sp, z=True, gamma=True)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="critical points vs direct joint spectrum")
    common(sp, z=True, gamma=True)
    sp.add_argument("--match-tol", type=float, default=1e-8)
    sp.add_argument("--oracle", action="store_true", help="cross-check against the tensor-space realization")
    sp.add_argument("--n", type=int, default=None, help="dim V for the oracle (default rows + 1)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("asymptotic", help="per-tableau seeds and polished points at z_j = gamma^j")
    common(sp, gamma=True)
    sp.set_defaults(func=cmd_asymptotic)

    sp = sub.add_parser("sweep", help="convergence of z_j * eigenvalue_j to contents over gamma")
    common(sp)
    sp.add_argument("--gammas", default="1e2,1e3,1e4")
    sp.add_argument("--csv", default=None, help="also write the table as CSV")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
