"""Command-line front end.

Exit codes: 0 success, 1 a check failed (table diff, classification
conflict, obstruction, failed criterion), 2 usage error or malformed input.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import acceptance, bott, clifford, invariants, models, suspension
from .errors import (ClassificationConflict, EndpointAsymmetry, ModelValidationError,
                     Obstruction, TenfoldError)
from .model import KGrid, default_points, flatten, load_model, matrix_to_json
from .symmetry import DEFAULT_TOL, SymmetrySpec, classify_report

PAULI = {"s0": models.s0, "sx": models.sx, "sy": models.sy, "sz": models.sz}


class UsageError(Exception):
    pass


class Output:
    def __init__(self, args):
        self.format = getattr(args, "format", "text")
        self.quiet = getattr(args, "quiet", False)
        self.record = {}

    def line(self, text, **fields):
        self.record.update(fields)
        if not self.quiet and self.format == "text":
            print(text)

    def finish(self):
        if not self.quiet and self.format == "json":
            print(json.dumps(self.record, default=str))


def _parse_params(extra):
    params = {}
    it = iter(extra)
    for flag in it:
        if not flag.startswith("--"):
            raise UsageError(f"unexpected argument {flag!r}")
        name = flag[2:]
        if "=" in name:
            name, value = name.split("=", 1)
        else:
            value = next(it, None)
            if value is None:
                raise UsageError(f"missing value for {flag}")
        try:
            params[name] = float(value)
        except ValueError:
            raise UsageError(f"parameter {flag} needs a number, got {value!r}") from None
    return params


def _load(args, extra):
    """Resolve ``--builtin NAME --param VAL`` or a model file to (model, spec)."""
    params = _parse_params(extra)
    if args.builtin:
        if args.model:
            raise UsageError("give either a model file or --builtin, not both")
        try:
            return models.builtin(args.builtin, **params)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if params:
        raise UsageError(f"model parameters {sorted(params)} need --builtin")
    if not args.model:
        raise UsageError("no model given (file path or --builtin NAME)")
    model, syms = load_model(args.model)
    return model, SymmetrySpec.from_dict(syms)


def _grid(args, model):
    if model.dim == 0:
        return KGrid(0, 1)
    return KGrid(model.dim, args.grid or default_points(model.dim))


def cmd_classify(args, extra, out):
    model, spec = _load(args, extra)
    grid = _grid(args, model)
    report = classify_report(model, spec, grid, args.tol)
    az = report.az
    group = bott.group_at(az.family, az.s, model.dim)
    out.line(f"{az.label} s={az.s} d={model.dim} group={group}",
             label=az.label, s=az.s, d=model.dim, group=str(group))
    out.line(f"family={az.family}", family=az.family)
    for key, r in report.residuals.items():
        status = "rejected" if key in report.rejected else "accepted"
        out.line(f"symmetry={key} residual={r:.3e} {status}")
    out.record["residuals"] = report.residuals
    out.record["rejected"] = report.rejected
    return 0


def cmd_invariant(args, extra, out):
    model, spec = _load(args, extra)
    report = classify_report(model, spec, _grid(args, model), args.tol)
    az = report.az
    group = bott.group_at(az.family, az.s, model.dim)
    kind = args.type
    if kind == "auto":
        grid = KGrid(model.dim, args.grid) if args.grid else None
        result = invariants.invariant_for(model, az, model.dim, spec, grid,
                                          chiral=report.chiral_matrix)
    elif kind == "chern":
        result = invariants.chern(flatten(model, _grid(args, model)))
    elif kind == "winding":
        U_S = spec.implied_chiral
        if U_S is None:
            raise UsageError("winding needs a chiral (or T and C) representation")
        result = invariants.winding(model, U_S, _grid(args, model))
    elif kind == "majorana":
        if spec.ph is None:
            raise UsageError("majorana needs a particle-hole representation")
        result = invariants.majorana_z2(model, spec.ph)
    elif kind == "kanemele":
        if spec.tr is None:
            raise UsageError("kanemele needs a time-reversal representation")
        grid = KGrid(2, args.grid or 200)
        result = invariants.kane_mele_z2(flatten(model, grid), spec.tr, model)
    else:
        result = invariants.negative_count(model.evaluate(np.zeros(model.dim)))
    if isinstance(result, (invariants.NoInvariant, invariants.Unsupported)):
        reason = getattr(result, "reason", "")
        out.line(f"kind={result.kind} expected_group={result.group}"
                 + (f" reason={reason!r}" if reason else ""),
                 kind=result.kind, expected_group=str(result.group))
        return 0
    out.line(f"kind={result.kind} value={result.value} residual={result.residual:.3e} "
             f"expected_group={group}",
             kind=result.kind, value=result.value, residual=result.residual,
             expected_group=str(group))
    return 0


def _render(grid, family):
    p = bott.period(family)
    lines = ["AZ    s\\d " + " ".join(f"{d:>3}" for d in range(8))]
    for s in range(p):
        cells = " ".join(f"{str(grid[family, s, d]):>3}" for d in range(8))
        lines.append(f"{bott.LABELS[family][s]:<5} {s:>3} {cells}")
    return lines


def cmd_table(args, extra, out):
    if extra:
        raise UsageError(f"unexpected arguments {extra}")
    report = bott.generate_table()
    families = ("complex", "real") if args.family == "both" else (args.family,)
    out.record["table"] = [
        {"family": f, "s": s, "d": d, "group": str(g)}
        for (f, s, d), g in report.grid.items() if f in families]
    for family in families:
        for text in _render(report.grid, family):
            out.line(text)
        for s in range(bott.period(family)):
            for d in range(8):
                out.line(f"{family},{s},{d},{report.grid[family, s, d]}")
    if not args.check:
        return 0
    ident = bott.check_periodicities()
    ok = not report.diff and all(ident.values())
    for f, s, d, got, exp in report.diff:
        out.line(f"mismatch family={f} s={s} d={d} generated={got} table={exp}")
    out.line(f"{report.matches}/80 match; (1,1)-periodicity: "
             f"{'pass' if ident['(1,1)'] else 'fail'}",
             matches=report.matches, identities=ident)
    return 0 if ok else 1


def _resolve_ref(text, base_model, grid):
    if os.path.exists(text):
        ref_model, _ = load_model(text)
    elif text in PAULI:
        return PAULI[text]
    else:
        name, _, rest = text.partition(":")
        params = {}
        for item in filter(None, rest.split(",")):
            key, _, value = item.partition("=")
            params[key] = float(value)
        try:
            ref_model, _ = models.builtin(name, **params)
        except ValueError as exc:
            raise UsageError(f"--ref: {exc}") from None
    if ref_model.dim == 0:
        return flatten(ref_model).Q[0]
    if ref_model.dim != base_model.dim or ref_model.bands != base_model.bands:
        raise UsageError("reference model must match the base dimension and band count")
    return flatten(ref_model, grid)


def cmd_suspend(args, extra, out):
    model, spec = _load(args, extra)
    if model.dim != 1:
        raise UsageError("suspend supports 1D base models")
    grid = _grid(args, model)
    base = flatten(model, grid)
    ref = _resolve_ref(args.ref, model, grid)
    try:
        half = suspension.build_interpolation(base, ref, args.steps)
    except Obstruction as exc:
        out.line(f"obstruction k={exc.k[0]:.6f} theta={exc.theta:.6f} gap={exc.gap:.3e}",
                 obstruction={"k": exc.k, "theta": exc.theta, "gap": exc.gap})
        return 1
    out.line(f"min_gap={half.min_gap:.6f}", min_gap=half.min_gap)
    if args.sym == "none":
        out.line("extension=none (no symmetry partner; pump invariant needs a loop)")
        return 0
    U = spec.tr if args.sym == "T" else spec.ph
    if U is None:
        raise UsageError(f"model has no {args.sym} representation")
    try:
        full = suspension.extend_symmetric(half, args.sym, U)
    except EndpointAsymmetry as exc:
        out.line(f"endpoint_asymmetry endpoint={exc.endpoint} residual={exc.residual:.3e}",
                 endpoint_asymmetry=exc.endpoint)
        return 1
    pump = suspension.pump_chern(full)
    out.line(f"extension_residual={full.extension_residual:.3e}",
             extension_residual=full.extension_residual)
    out.line(f"pump kind=chern value={pump.value} residual={pump.residual:.3e}",
             pump=pump.value)
    return 0


def cmd_clifford(args, extra, out):
    if extra:
        raise UsageError(f"unexpected arguments {extra}")
    try:
        cs = clifford.generate(args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = clifford.clifford_residual(cs)
    mids = [clifford.midpoint_residual(cs, i) for i in range(args.k)]
    nest = all(clifford.is_complex_structure(cs.J[m], cs.J[:m]) for m in range(args.k))
    out.line(f"N={cs.N}", N=cs.N)
    out.line(f"clifford_residual={res:.3e}", clifford_residual=res)
    for i, r in enumerate(mids):
        out.line(f"midpoint i={i} residual={r:.3e}")
    out.record["midpoints"] = mids
    ok = res < 1e-12 and max(mids) < 1e-12 and nest
    out.line(f"N={cs.N} residual<1e-12 midpoints: {'pass' if ok else 'fail'}", ok=ok)
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump({"N": cs.N, "J": [matrix_to_json(J) for J in cs.J]}, fh)
    return 0 if ok else 1


def cmd_selfcheck(args, extra, out):
    if extra:
        raise UsageError(f"unexpected arguments {extra}")
    results = acceptance.run_all()
    for c in results:
        out.line(c.line())
    out.record["criteria"] = [vars(c) for c in results]
    return 0 if all(c.passed for c in results) else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--quiet", action="store_true")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("model", nargs="?", help="model file (JSON)")
    source.add_argument("--builtin", choices=sorted(models.BUILTINS))
    source.add_argument("--grid", type=int, help="k-points per axis")
    source.add_argument("--tol", type=float, default=DEFAULT_TOL)

    parser = argparse.ArgumentParser(prog="tenfold", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, source])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("invariant", parents=[common, source])
    p.add_argument("--type", default="auto",
                   choices=("auto", "chern", "winding", "majorana", "kanemele", "count"))
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("table", parents=[common])
    p.add_argument("--family", choices=("complex", "real", "both"), default="both")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("suspend", parents=[common, source])
    p.add_argument("--ref", required=True,
                   help="model file, builtin NAME[:p=v,...], or s0/sx/sy/sz")
    p.add_argument("--sym", choices=("T", "C", "none"), default="none")
    p.add_argument("--steps", type=int, default=suspension.DEFAULT_STEPS)
    p.set_defaults(func=cmd_suspend)

    p = sub.add_parser("clifford", parents=[common])
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--dump", help="write the J matrices as JSON")
    p.set_defaults(func=cmd_clifford)

    p = sub.add_parser("selfcheck", parents=[common])
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _known_flags(parser):
    flags = set()
    for action in parser._actions:
        flags.update(action.option_strings)
        for sub in getattr(action, "choices", None) or {}:
            if isinstance(action.choices, dict):
                flags |= _known_flags(action.choices[sub])
    return flags


def _split_params(argv, known):
    """Pull ``--name value`` model parameters out before argparse sees them."""
    rest, params = [], []
    it = iter(argv)
    for tok in it:
        name = tok.split("=", 1)[0]
        if tok.startswith("--") and name not in known:
            params.append(tok)
            if "=" not in tok:
                value = next(it, None)
                if value is not None:
                    params.append(value)
        else:
            rest.append(tok)
    return rest, params


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    argv, extra = _split_params(argv, _known_flags(parser))
    args = parser.parse_args(argv)
    out = Output(args)
    try:
        code = args.func(args, extra, out)
    except UsageError as exc:
        print(f"tenfold: error: {exc}", file=sys.stderr)
        return 2
    except ModelValidationError as exc:
        where = f" (R={list(exc.R)})" if exc.R is not None else ""
        print(f"tenfold: invalid model: {exc}{where}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"tenfold: cannot read input: {exc}", file=sys.stderr)
        return 2
    except ClassificationConflict as exc:
        print(f"tenfold: classification conflict: {exc}", file=sys.stderr)
        return 1
    except TenfoldError as exc:
        print(f"tenfold: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
