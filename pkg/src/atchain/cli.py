"""Command-line interface.

Subcommands:
  spectrum  eigenvalue report for one parameter vector
  verify    gap/multiplicity law over generated families
  eigfun    explicit gap eigenfunctions and their D-vectors
  orbits    the 6x6 orbit block of a label triple, float or exact

Exit codes: 0 all checks passed, 1 a verification failed, 2 bad usage or
input.  Output formats: json (default), csv, pretty.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .eigenstructure import a0, extract_U, psi, wilson_f
from .errors import ArgumentError, AtchainError
from .params import ParamVector, gen_uniform, is_regular, neutral_labels
from .spectral import (
    orbit_block,
    orbit_charpoly_check,
    spectrum_dense,
    spectrum_iterative,
)
from .verify import FAMILY_NAMES, predicted_multiplicity, sweep_from_config, verify_sweep


def _load_pv(args) -> ParamVector:
    if args.uniform is not None:
        mode = "rational" if getattr(args, "exact", False) else "float64"
        return gen_uniform(args.uniform, mode=mode)
    try:
        with open(args.params, "r", encoding="utf-8") as fh:
            return ParamVector.from_json(fh.read())
    except OSError as exc:
        raise ArgumentError(f"cannot read {args.params}: {exc}") from exc


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    elif fmt == "csv":
        flat = {k: v for k, v in payload.items() if not isinstance(v, (list, dict))}
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(flat))
        writer.writeheader()
        writer.writerow(flat)
        print(buf.getvalue(), end="")
    else:
        width = max(len(k) for k in payload)
        for k, v in payload.items():
            if isinstance(v, list) and len(v) > 12:
                v = f"[{', '.join(f'{x:.6g}' for x in v[:6])}, ... {len(v)} values]"
            print(f"{k:<{width}}  {v}")


def cmd_spectrum(args) -> int:
    pv = _load_pv(args)
    method = args.method
    if method == "auto":
        method = "dense" if pv.n <= 7 else "iterative"
    if method == "dense":
        rep = spectrum_dense(pv)
    else:
        rep = spectrum_iterative(pv, k=args.k, seed=args.seed)
    ns = neutral_labels(pv)
    regular = is_regular(pv).ok
    verdict = None
    if regular:
        gap_matches = abs(rep.gap - rep.lambda_star) <= args.tol_gap
        m_pred = predicted_multiplicity(pv.n, ns.count)
        verdict = (gap_matches == (ns.count >= 1)) and (
            ns.count == 0 or rep.multiplicity_at_target == m_pred
        )
    payload = {
        "n": pv.n,
        "method": rep.method,
        "regular": regular,
        "N": ns.count,
        "gap": rep.gap,
        "lambda_star": rep.lambda_star,
        "margin": rep.margin,
        "multiplicity_at_target": rep.multiplicity_at_target,
        "theorem_verdict": verdict,
        "eigenvalues": [float(v) for v in rep.eigenvalues],
    }
    _emit(payload, args.format)
    return 0 if verdict is not False else 1


def cmd_verify(args) -> int:
    if args.sweep:
        with open(args.sweep, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        rows = sweep_from_config(config)
    else:
        rows = verify_sweep(
            args.n, families=args.families, seeds=args.seeds, tol_gap=args.tol_gap
        )
    if args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].to_dict()))
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_dict())
    elif args.format == "pretty":
        for row in rows:
            status = "pass" if row.passed else "FAIL"
            extra = f"  {row.message}" if row.message else ""
            print(
                f"{status}  n={row.n} {row.family} seed={row.seed} "
                f"N={row.N} gap={row.gap} M={row.M_computed}{extra}"
            )
        n_bad = sum(not r.passed for r in rows)
        print(f"{len(rows) - n_bad}/{len(rows)} instances passed")
    else:
        for row in rows:
            print(row.to_json())
    return 0 if all(r.passed for r in rows) else 1


def cmd_eigfun(args) -> int:
    pv = _load_pv(args)
    if args.which == "wilson":
        if args.c is None:
            raise ArgumentError("--which wilson needs --c LABEL")
        e = wilson_f(pv, args.c)
    else:
        e = psi(pv)
    u = extract_U(pv, e)
    n = pv.n
    if args.which == "wilson":
        predicted_D = [
            a0(n) * ((r == args.c) - (r == args.c - 1)) for r in range(1, n)
        ]
    else:
        rho = float(pv.get(1, n)) / float(pv.get(n, 1))
        predicted_D = [a0(n) if r == 1 else rho * a0(n) if r == n - 1 else 0.0
                       for r in range(1, n)]
    d_match = bool(np.abs(u.D - np.array(predicted_D)).max() <= 1e-10)
    d_sum = float(u.D.sum())
    payload = {
        "n": n,
        "which": args.which,
        "c": args.c,
        "lam": e.lam,
        "residual": e.residual,
        "D": [float(v) for v in u.D],
        "D_predicted": predicted_D,
        "D_match": d_match,
        "D_sum": d_sum,
        # a nonzero D-sum certifies independence from the single-label family
        "independent_of_wilson_family": abs(d_sum) > 1e-10 if args.which == "psi" else None,
    }
    _emit(payload, args.format)
    return 0 if d_match else 1


def cmd_orbits(args) -> int:
    pv = _load_pv(args)
    i, j, k = args.triple
    if args.exact:
        if pv.mode != "rational":
            raise ArgumentError("--exact needs rational-mode parameters")
        chk = orbit_charpoly_check(pv, i, j, k)
        payload = {
            "triple": [i, j, k],
            "s": str(chk.s),
            "charpoly_computed": [str(c) for c in chk.computed],
            "charpoly_predicted": [str(c) for c in chk.predicted],
            "match": chk.match,
        }
        _emit(payload, args.format)
        return 0 if chk.match else 1
    block = orbit_block(pv.to_float(), i, j, k)
    computed = block.eigenvalues()
    predicted = block.eigenvalues_predicted()
    err = float(np.abs(computed - predicted).max())
    payload = {
        "triple": [i, j, k],
        "s": float(block.s),
        "matrix": [[float(v) for v in row] for row in block.matrix],
        "eigenvalues": [float(v) for v in computed],
        "eigenvalues_predicted": [float(v) for v in predicted],
        "max_error": err,
        "match": err <= 1e-12,
    }
    _emit(payload, args.format)
    return 0 if err <= 1e-12 else 1


def _add_pv_arguments(sub, exact_flag=False):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--uniform", type=int, metavar="N",
                       help="use the uniform vector on n labels")
    group.add_argument("--params", metavar="FILE",
                       help="load a parameter vector from JSON")
    if exact_flag:
        sub.add_argument("--exact", action="store_true",
                         help="exact rational charpoly comparison")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atchain",
        description="Spectral analysis of biased adjacent-transposition chains",
    )
    parser.add_argument("--version", action="version", version=f"atchain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalue report for one vector")
    _add_pv_arguments(sp)
    sp.add_argument("--method", choices=("auto", "dense", "iterative"), default="auto")
    sp.add_argument("--k", type=int, default=None, help="eigenvalues for the iterative path")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol-gap", type=float, default=1e-8)
    sp.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    sp.set_defaults(func=cmd_spectrum)

    vf = sub.add_parser("verify", help="gap/multiplicity law over families")
    vf.add_argument("--sweep", metavar="CONFIG", help="JSON sweep config file")
    vf.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    vf.add_argument("--families", nargs="+", default=list(FAMILY_NAMES))
    vf.add_argument("--seeds", type=int, default=20)
    vf.add_argument("--tol-gap", type=float, default=1e-8)
    vf.add_argument("--format", choices=("jsonl", "csv", "pretty"), default="jsonl")
    vf.set_defaults(func=cmd_verify)

    ef = sub.add_parser("eigfun", help="explicit gap eigenfunctions")
    _add_pv_arguments(ef)
    ef.add_argument("--which", choices=("wilson", "psi"), required=True)
    ef.add_argument("--c", type=int, default=None, help="neutral label for --which wilson")
    ef.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    ef.set_defaults(func=cmd_eigfun)

    ob = sub.add_parser("orbits", help="orbit block of a label triple")
    _add_pv_arguments(ob, exact_flag=True)
    ob.add_argument("--triple", type=int, nargs=3, required=True, metavar=("I", "J", "K"))
    ob.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    ob.set_defaults(func=cmd_orbits)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AtchainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
