"""Command-line front end.

Subcommands: periods, denominators, eq1, griffiths, foliation-check, gm,
pcurvature, sch, tangency, solve-linear, hypergeo-locus, hypergeo-witness,
steenbrink.  All tabular output is comma-delimited with a header row; series
and matrices are emitted in the canonical JSON document format.  Exit codes:
0 success, 1 UNKNOWN verdict, 2 invalid input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence, Tuple

from hodgeloci import exprparse, hypergeo, ideals, pcurvature, periods
from hodgeloci.errors import (DenominatorDivisibleByP, NotIntegrable, NotIntegral,
                              OutOfDomain, ParseError, ResourceLimit, TargetOutOfRange,
                              TransversalityViolation)
from hodgeloci.forms import FormMatrix, PolyContext, integrability_check
from hodgeloci.gauss_manin import (HodgeBlocks, block_foliation_forms,
                                   linear_solve_series)
from hodgeloci.series import SparseSeries

_INVALID_INPUT = (
    ValueError, KeyError, TypeError, OSError, RuntimeError, json.JSONDecodeError,
    ParseError, NotIntegral, NotIntegrable, OutOfDomain, TargetOutOfRange,
    TransversalityViolation, DenominatorDivisibleByP,
)


# -- config and context helpers ---------------------------------------------------


def family_from_config(cfg: Mapping) -> periods.FamilySpec:
    try:
        return periods.FamilySpec(
            n=int(cfg["n"]), d=int(cfg["d"]),
            monomials=tuple(tuple(int(x) for x in a) for a in cfg["I"]),
            truncation=int(cfg["truncation"]))
    except KeyError as exc:
        raise ValueError(f"config is missing field {exc.args[0]!r}") from None


def betas_from_config(cfg: Mapping, fam: periods.FamilySpec) -> List[periods.BetaIndex]:
    beta = cfg.get("beta", "griffiths")
    if beta == "griffiths":
        return periods.griffiths_basis(fam.d, fam.n)
    if not isinstance(beta, list):
        raise ValueError('config field "beta" must be "griffiths" or a list of exponent vectors')
    return [periods.BetaIndex.make(tuple(int(x) for x in b), fam.d) for b in beta]


def _load_config(path: str) -> Mapping:
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    return cfg


def _context(args) -> PolyContext:
    names = tuple(n for n in args.vars.split(",") if n)
    laurent_names = set()
    if getattr(args, "laurent", None):
        laurent_names = {n for n in args.laurent.split(",") if n}
    unknown = laurent_names - set(names)
    if unknown:
        raise ValueError(f"laurent flag for unknown variable(s) {sorted(unknown)}")
    return PolyContext(names, tuple(n in laurent_names for n in names))


def _load_form_matrix(path: str, ctx: PolyContext) -> FormMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ValueError("matrix file must be a JSON array of arrays of 1-form expressions")
    return FormMatrix(ctx, [[exprparse.parse_oneform(e, ctx) for e in row] for row in data])


def _series_doc_str(s: SparseSeries) -> str:
    return json.dumps(s.to_doc(), separators=(",", ":"))


def _ints_csv(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x != ""]


def _fracs_csv(text: str) -> List[Fraction]:
    return [Fraction(x) for x in text.split(",") if x != ""]


# -- subcommand bodies ----------------------------------------------------------


def run_denominator_table(config: Mapping, threads: int = 1, kernel: Optional[str] = None) -> str:
    """One row per basis element: rendered monomial, lcm, factorization.

    Output is byte-stable across runs and thread counts.
    """
    fam = family_from_config(config)
    betas = betas_from_config(config, fam)

    def row(b: periods.BetaIndex) -> str:
        prof = periods.denominator_profile(periods.period_series(b, fam, kernel=kernel))
        return f"{b.monomial_str()},{prof.lcm},{prof.factorization_str()}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, betas))
    else:
        rows = [row(b) for b in betas]
    return "monomial,lcm,factorization\n" + "".join(r + "\n" for r in rows)


def _cmd_denominators(args) -> Tuple[str, int]:
    return run_denominator_table(_load_config(args.config), args.threads, args.kernel), 0


def _cmd_periods(args) -> Tuple[str, int]:
    cfg = _load_config(args.config)
    fam = family_from_config(cfg)
    betas = betas_from_config(cfg, fam)

    def entry(b):
        ps = periods.period_series(b, fam, kernel=args.kernel)
        return {"beta": list(b.beta), "k": b.k, "monomial": b.monomial_str(),
                "normalization": ps.normalization, "series": ps.series.to_doc()}

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(entry, betas))
    else:
        results = [entry(b) for b in betas]
    doc = {"family": {"n": fam.n, "d": fam.d, "I": [list(a) for a in fam.monomials],
                      "truncation": fam.truncation},
           "results": results}
    return json.dumps(doc, separators=(",", ":")) + "\n", 0


def _cmd_eq1(args) -> Tuple[str, int]:
    return _series_doc_str(periods.quartic_full_family_series(args.truncation)) + "\n", 0


def _cmd_griffiths(args) -> Tuple[str, int]:
    rows = ["beta,k,monomial"]
    for b in periods.griffiths_basis(args.d, args.n):
        rows.append(f"{' '.join(map(str, b.beta))},{b.k},{b.monomial_str()}")
    return "".join(r + "\n" for r in rows), 0


def _cmd_steenbrink(args) -> Tuple[str, int]:
    ok = periods.steenbrink_hodge_tate(args.d, _ints_csv(args.weights), args.n)
    return f"hodge_tate: {'true' if ok else 'false'}\n", 0


def _cmd_foliation_check(args) -> Tuple[str, int]:
    ctx = _context(args)
    b = _load_form_matrix(args.matrix, ctx)
    return f"integrable: {'true' if integrability_check(b) else 'false'}\n", 0


def _cmd_solve_linear(args) -> Tuple[str, int]:
    ctx = _context(args)
    b = _load_form_matrix(args.matrix, ctx)
    y = linear_solve_series(b, args.order)
    doc = {"order": args.order, "Y": [[s.to_doc() for s in row] for row in y]}
    return json.dumps(doc, separators=(",", ":")) + "\n", 0


def _cmd_gm(args) -> Tuple[str, int]:
    ctx = _context(args)
    b = _load_form_matrix(args.matrix, ctx)
    blocks = HodgeBlocks(args.m, tuple(_ints_csv(args.blocks)))
    result = block_foliation_forms(b, blocks)
    asm = result.assembly
    ctx_ext = asm.ctx
    doc = {
        "x_vars": list(asm.x_names),
        "S": [[exprparse.poly_to_expr(f, ctx_ext) for f in row] for row in asm.s],
        "C": [exprparse.poly_to_expr(f, ctx_ext) for f in asm.c],
        "A": [[exprparse.oneform_to_expr(f) for f in row] for row in asm.a.entries],
        "foliation": [exprparse.oneform_to_expr(f) for f in asm.foliation_forms],
        "block_equations": [exprparse.oneform_to_expr(f) for f in result.forms],
        "ivhs_block": [[exprparse.oneform_to_expr(f) for f in row]
                       for row in result.ivhs_block.entries],
        "checks": {"dA_eq_AwedgeA": integrability_check(b) and integrability_check(asm.a),
                   "block_span_matches": True},
    }
    return json.dumps(doc, separators=(",", ":")) + "\n", 0


def _parse_field_omegas_ideal(args, ctx):
    v = exprparse.parse_field(args.field, ctx)
    omegas = [exprparse.parse_oneform(e, ctx) for e in args.omega]
    gens = tuple(exprparse.parse_poly(e, ctx) for e in (args.ideal or []))
    return v, omegas, ideals.IdealGens(ctx, gens)


def _cmd_tangency(args) -> Tuple[str, int]:
    ctx = _context(args)
    v, omegas, ibar = _parse_field_omegas_ideal(args, ctx)
    verdict = ideals.tangency_check(v, omegas, ibar, args.deg)
    return verdict + "\n", 0 if verdict == ideals.YES else 1


def _cmd_pcurvature(args) -> Tuple[str, int]:
    ctx = _context(args)
    v, omegas, ibar = _parse_field_omegas_ideal(args, ctx)
    verdict = pcurvature.pcurvature_tangency(v, omegas, ibar, args.p, args.deg)
    return verdict + "\n", 0 if verdict == ideals.YES else 1


def _cmd_sch(args) -> Tuple[str, int]:
    ctx = _context(args)
    v = exprparse.parse_field(args.field, ctx)
    ws = [exprparse.parse_field(e, ctx) for e in args.module]
    ideal = pcurvature.sch_ideal(v, ws)
    if args.point is not None:
        point = _fracs_csv(args.point)
        ok = pcurvature.sch_contains_point(v, ws, point)
        return f"contains: {'true' if ok else 'false'}\n", 0
    lines = [exprparse.poly_to_expr(g, ctx) for g in ideal.gens]
    return "".join(l + "\n" for l in lines) if lines else "0\n", 0


def _cmd_hypergeo_locus(args) -> Tuple[str, int]:
    if args.grid < 1:
        raise ValueError("grid must have at least one point")
    lo, hi = 0.05, 0.95
    if args.grid == 1:
        grid = [0.5]
    else:
        step = (hi - lo) / (args.grid - 1)
        grid = [lo + i * step for i in range(args.grid)]
    sample = hypergeo.sample_locus(args.N, grid, tol=args.tol)
    lines = ["t1,t2,residual"]
    lines += [f"{t1:.12g},{t2:.12g},{r:.3e}" for t1, t2, r in sample.points]
    lines += [f"# skipped: t1={t1:.12g} (target ratio out of range)" for t1 in sample.skipped]
    return "".join(l + "\n" for l in lines), 0


def _cmd_hypergeo_witness(args) -> Tuple[str, int]:
    sample = hypergeo.sample_locus(args.N, [args.t1], tol=args.tol)
    lines = ["t1,t2,residual"]
    if sample.points:
        t1, t2, r = sample.points[0]
        lines.append(f"{t1:.12g},{t2:.12g},{r:.3e}")
    else:
        lines.append(f"# skipped: t1={args.t1:.12g} (target ratio out of range)")
    return "".join(l + "\n" for l in lines), 0


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hodgeloci",
        description="Exact period series, foliation tangency and Frobenius-power "
                    "checks, and hypergeometric isogeny-locus sampling.")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--output", default=None, help="write output to this path")
        p.set_defaults(fn=fn)
        return p

    p = add("periods", _cmd_periods, "period series for a deformation family config")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--kernel", choices=("auto", "py", "c"), default=None)

    p = add("denominators", _cmd_denominators, "denominator table, one row per basis form")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--kernel", choices=("auto", "py", "c"), default=None)

    p = add("eq1", _cmd_eq1, "independent full quartic-family series (35 monomials)")
    p.add_argument("--truncation", type=int, required=True)

    p = add("griffiths", _cmd_griffiths, "basis of residue classes grouped by pole order")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("steenbrink", _cmd_steenbrink, "Hodge-Tate criterion for weighted hypersurfaces")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", required=True, help="comma-separated, first weight 1")

    p = add("foliation-check", _cmd_foliation_check, "exact dB = B^B integrability check")
    p.add_argument("--vars", required=True)
    p.add_argument("--laurent", default=None)
    p.add_argument("--matrix", required=True, help="JSON array of arrays of 1-form expressions")

    p = add("solve-linear", _cmd_solve_linear, "truncated fundamental solution of dY = B*Y")
    p.add_argument("--vars", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--order", type=int, required=True)

    p = add("gm", _cmd_gm, "Hodge-block foliation assembly over the extended context")
    p.add_argument("--vars", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--blocks", required=True, help="comma-separated block sizes")

    p = add("tangency", _cmd_tangency, "bounded tangency check of a field against 1-forms")
    p.add_argument("--vars", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--omega", action="append", required=True)
    p.add_argument("--ideal", action="append", default=None)
    p.add_argument("--deg", type=int, required=True)

    p = add("pcurvature", _cmd_pcurvature, "tangency of the p-th Frobenius power mod p")
    p.add_argument("--vars", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--omega", action="append", required=True)
    p.add_argument("--ideal", action="append", default=None)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--deg", type=int, required=True)

    p = add("sch", _cmd_sch, "minor ideal of a field against a module of fields")
    p.add_argument("--vars", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--module", action="append", required=True)
    p.add_argument("--point", default=None, help="comma-separated rational coordinates")

    p = add("hypergeo-locus", _cmd_hypergeo_locus, "sample the degree-N isogeny locus")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)

    p = add("hypergeo-witness", _cmd_hypergeo_witness, "one locus point for a given t1")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = args.fn(args)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _INVALID_INPUT as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
