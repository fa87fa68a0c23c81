"""The ``fsing`` command line.

Every subcommand builds a dict of results; the report wrapper adds the job
echo, hypothesis flags and timing, then prints text or JSON.  ``sweep``
reruns a subcommand over a list of primes and prints CSV.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .errors import FsingError, ParseError, UnknownVariableError
from .field import FiniteField, check_prime, prime_field, prime_power
from .frobenius_ideals import (
    bracket_power,
    e_structure_module,
    fedder_is_fpure,
    is_rf_submodule,
)
from .groebner import Budget, Ideal, ideal_quotient
from .local_cohomology import (
    GradedHypersurface,
    degree_zero_basis,
    d_simplicity_verdict,
    dual_square_check,
    frobenius_matrix_degree_zero,
    socle_line_data,
)
from .parse import parse_matrix_rows, split_top_level
from .polynomial import PolyRing
from .semilinear import (
    SemilinearMap,
    TwistedDomain,
    counterexample_search,
    f_fixed_basis,
    fixed_space,
    matrix_json,
    matrix_text,
    stable_subspaces,
)
from .univariate import UPoly

SCHEMA_VERSION = 1


class UsageError(FsingError):
    """Bad command-line input that is not a parse error."""


# -- input helpers --

def _ring(args) -> PolyRing:
    check_prime(args.p)
    names = [v.strip() for v in args.vars.split(",") if v.strip()]
    weights = None
    if getattr(args, "weights", None):
        weights = [int(w) for w in args.weights.split(",")]
    return PolyRing(args.p, names, weights=weights, order=getattr(args, "order", "grevlex"))


def _budget(args) -> Budget:
    return Budget(max_basis_size=args.max_basis, max_steps=args.max_steps)


def _poly(ring, text, what):
    try:
        return ring.parse(text)
    except ParseError as exc:
        raise ParseError(f"{what} {text!r}: {exc.message}", text, exc.line, exc.column) from None


def _ideal(ring, text, args, what="ideal") -> Ideal:
    parts = [t.strip() for t in split_top_level(text, ",")]
    if not all(parts):
        raise UsageError(f"empty generator in {what} {text!r}")
    return Ideal(ring, [_poly(ring, t, f"{what} generator") for t in parts], _budget(args))


def _gb_text(I: Ideal) -> list[str]:
    return [str(g) for g in I.groebner().elements]


def _field(p: int, m: int) -> FiniteField:
    return prime_field(p) if m == 1 else FiniteField(p, m)


def _matrix(text: str, K: FiniteField, twisted: TwistedDomain | None):
    """Entries are polynomials in x (twisted case) and in the field generator a (when m > 1)."""
    names = (["a"] if K.m > 1 else []) + (["x"] if twisted else [])
    ring = PolyRing(K.p, names or ["_"])
    out = []
    for row in parse_matrix_rows(text):
        new = []
        for entry in row:
            try:
                ring.parse(entry)
            except UnknownVariableError:
                allowed = " and the generator a" if K.m > 1 else ""
                where = "K[x]" if twisted else str(K)
                raise UsageError(f"matrix entry {entry!r}: entries over {where} may use only "
                                 f"constants{allowed}{' and x' if twisted else ''}") from None
            except ParseError:
                pass
            f = _poly(ring, entry, "matrix entry")
            if twisted is None:
                if K.m == 1 and any(any(exp) for exp in f.terms):
                    raise UsageError(f"matrix entry {entry!r} must be a constant over {K}")
                acc = K.zero
                for exp, c in f.terms.items():
                    acc = acc + (K.gen ** exp[0] if K.m > 1 else K.one) * c
                new.append(acc)
            else:
                terms: dict = {}
                scale = K.p**twisted.depth
                for exp, c in f.terms.items():
                    a_pow = exp[0] if K.m > 1 else 0
                    x_pow = exp[-1]
                    val = K.gen**a_pow * c if K.m > 1 else K(c)
                    key = x_pow * scale
                    terms[key] = terms.get(key, K.zero) + val
                new.append(UPoly(K, terms, twisted.var))
        out.append(tuple(new))
    return tuple(out)


def _semilinear(args, twisted: bool) -> SemilinearMap:
    p, e = prime_power(args.q)
    m = args.field_degree or e
    K = _field(p, m)
    domain = TwistedDomain(K, args.depth) if twisted else K
    return SemilinearMap(_matrix(args.A, K, domain if twisted else None), e, domain)


def _vector_text(v) -> list[str]:
    return [str(x) for x in v]


# -- subcommands --

def cmd_gb(args):
    ring = _ring(args)
    I = _ideal(ring, args.ideal, args)
    gb = I.groebner()
    return {"basis": [str(g) for g in gb.elements], "order": args.order,
            "buchberger_criterion": gb.satisfies_buchberger_criterion()}


def cmd_member(args):
    ring = _ring(args)
    I = _ideal(ring, args.ideal, args)
    f = _poly(ring, args.f, "polynomial")
    return {"f": str(f), "member": I.contains(f), "normal_form": str(I.reduce(f))}


def cmd_colon(args):
    ring = _ring(args)
    I = _ideal(ring, args.ideal, args)
    J = _ideal(ring, args.by, args, "divisor ideal")
    return {"colon": _gb_text(ideal_quotient(I, J))}


def cmd_bracket(args):
    ring = _ring(args)
    I = _ideal(ring, args.ideal, args)
    B = bracket_power(I, args.e)
    return {"q": ring.p**args.e, "generators": [str(g) for g in B.generators], "basis": _gb_text(B)}


def cmd_fedder(args):
    ring = _ring(args)
    I = _ideal(ring, args.ideal, args)
    return {"method": args.method, "f_pure": fedder_is_fpure(I, args.method)}


def cmd_estructures(args):
    ring = _ring(args)
    I = _ideal(ring, args.ideal, args)
    mod = e_structure_module(I, args.e)
    return {"q": ring.p**args.e, "colon": _gb_text(mod.colon),
            "coset_generators": [str(g) for g in mod.coset_generators],
            "invariants_hold": mod.check_invariants()}


def cmd_rf(args):
    ring = _ring(args)
    tau = _ideal(ring, args.tau, args, "tau")
    I = _ideal(ring, args.ideal, args)
    return {"rf_submodule": is_rf_submodule(tau, I, args.e)}


def cmd_sl_iterate(args):
    F = _semilinear(args, twisted=True)
    A_r = F.iterate_matrix(args.r)
    return {"r": args.r, "matrix": matrix_json(A_r), "text": matrix_text(A_r)}


def cmd_sl_base_change(args):
    F = _semilinear(args, twisted=True)
    C = _matrix(args.C, F.domain.field, F.domain)
    G = F.iterate(args.r) if args.r > 1 else F
    B = G.base_change(C)
    return {"r": args.r, "matrix": matrix_json(B.A), "text": matrix_text(B.A)}


def cmd_sl_fixed(args):
    F = _semilinear(args, twisted=False)
    space = fixed_space(F)
    vecs = space.elements(args.budget)
    return {"dimension_over_prime_field": space.dimension, "count": len(vecs),
            "vectors": [_vector_text(v) for v in vecs]}


def cmd_sl_fixed_basis(args):
    F = _semilinear(args, twisted=False)
    fb = f_fixed_basis(F, args.max_ext)
    return {"extension_degree": fb.extension_degree, "iterate_identity_at": fb.period,
            "field": str(fb.field), "modulus": list(fb.field.modulus), "basis": [_vector_text(v) for v in fb.basis]}


def cmd_sl_stable(args):
    F = _semilinear(args, twisted=False)
    return {"levels": [lvl.to_dict() for lvl in stable_subspaces(F, args.r)]}


def cmd_sl_counterexample(args):
    p, _ = prime_power(args.q)
    K = _field(p, args.field_degree or 1)
    equation = None
    if args.equation:
        ring = PolyRing(p, ["alpha", "x"])
        P = _poly(ring, args.equation, "equation")
        equation = {}
        for (k, j), c in P.terms.items():
            coeff = equation.setdefault(k, UPoly(K, {}, "x"))
            equation[k] = coeff + UPoly(K, {j: K(c)}, "x")
    cert = counterexample_search(args.q, args.t_max, args.deg_max, equation, K, args.budget)
    return cert.to_dict()


def _hypersurface(args) -> GradedHypersurface:
    ring = _ring(args)
    return GradedHypersurface(_poly(ring, args.f, "polynomial"))


def cmd_lc_basis(args):
    H = _hypersurface(args)
    return {"a_invariant": H.a_invariant, "basis": [str(c) for c in degree_zero_basis(H)]}


def cmd_lc_frobenius(args):
    H = _hypersurface(args)
    basis = degree_zero_basis(H)
    M = frobenius_matrix_degree_zero(H) if basis else ()
    return {"basis": [str(c) for c in basis], "matrix": [list(r) for r in M]}


def cmd_lc_verdict(args):
    H = _hypersurface(args)
    report = d_simplicity_verdict(H, with_socle=not args.no_socle)
    out = report.to_dict()
    if not H.ring.standard_grading:
        out["experimental_grading"] = True
    return out


def cmd_lc_socle(args):
    H = _hypersurface(args)
    return {"socle_lines": [s.to_dict() for s in socle_line_data(H)]}


def cmd_lc_dual(args):
    H = _hypersurface(args)
    lines = socle_line_data(H)
    rows = []
    for s in lines:
        rows.append({"class": str(s.cls), "eigencoefficient": s.eigencoefficient,
                     "commutes": dual_square_check(H, s) if s.parameter_ideal is not None else None})
    return {"checks": rows, "all_pass": all(r["commutes"] for r in rows)}


# -- text rendering --

def _text_lines(command: str, res: dict) -> list[str]:
    if "text" in res:
        return [res["text"]]
    if command == "lc verdict":
        lines = [f"verdict: {res['verdict']}",
                 f"f = {res['f']} over F_{res['p']}, a-invariant {res['a_invariant']}",
                 f"degree-zero dimension: {res['degree_zero_dimension']}",
                 f"frobenius matrix: {res['frobenius_matrix']}",
                 f"nilpotency: {res['nilpotency']['kind']}"]
        hyp = res["hypotheses"]
        lines.append(f"isolated singularity: {hyp['isolated_singularity']}; "
                     f"large p assumed (Hara): {hyp['hara_large_p_assumed']}")
        for s in res["socle_lines"]:
            lines.append(f"socle line {s['class']}: c = {s['eigencoefficient']}, "
                         f"ann = ({', '.join(s['annihilator'])})")
        return lines
    lines = []
    for key, val in res.items():
        if isinstance(val, list) and val and isinstance(val[0], (dict, list)):
            lines.append(f"{key}:")
            lines.extend(f"  {json.dumps(v)}" for v in val)
        elif isinstance(val, list):
            lines.append(f"{key}: {', '.join(map(str, val)) if val else '(none)'}")
        elif isinstance(val, dict):
            lines.append(f"{key}: {json.dumps(val)}")
        else:
            lines.append(f"{key}: {val}")
    return lines


# -- parser --

def _add_common(sp, ring=True):
    if ring:
        sp.add_argument("--p", type=int, required=True, help="characteristic")
        sp.add_argument("--vars", default="x,y,z", help="comma-separated variable names")
        sp.add_argument("--weights", default=None, help="comma-separated positive weights (experimental)")
        sp.add_argument("--order", default="grevlex", choices=["lex", "grlex", "grevlex"])
    sp.add_argument("--format", default="text", choices=["text", "json"])
    sp.add_argument("--max-basis", type=int, default=5000)
    sp.add_argument("--max-steps", type=int, default=20_000_000)
    sp.add_argument("--no-timing", action="store_true", help="omit the timing field")


def _add_semilinear(sp, twisted: bool):
    sp.add_argument("--q", type=int, required=True, help="q = p^e, the twist")
    sp.add_argument("--A", required=True, help="matrix as [a, b; c, d]")
    sp.add_argument("--field-degree", type=int, default=None,
                    help="coefficient field F_{p^m}; defaults to m = e")
    if twisted:
        sp.add_argument("--depth", type=int, default=0, help="root depth t, u = x^(1/p^t)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fsing", description="Frobenius invariants in characteristic p")
    ap.add_argument("--version", action="version", version=f"fsing {__version__}")
    ap.add_argument("--job", help="JSON job file; its options are merged before the command line")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    def leaf(parent, name, func, help_, ring=True):
        sp = parent.add_parser(name, help=help_)
        _add_common(sp, ring)
        sp.set_defaults(func=func, cmdname=name)
        return sp

    sp = leaf(sub, "gb", cmd_gb, "reduced Groebner basis")
    sp.add_argument("--ideal", required=True)
    sp = leaf(sub, "member", cmd_member, "ideal membership")
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--f", required=True)
    sp = leaf(sub, "colon", cmd_colon, "colon ideal I : J")
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--by", required=True)
    sp = leaf(sub, "bracket-power", cmd_bracket, "Frobenius power I^[p^e]")
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--e", type=int, default=1)
    sp = leaf(sub, "fedder", cmd_fedder, "Fedder F-purity test at the irrelevant ideal")
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--method", default="colon", choices=["colon", "coefficient"])
    sp = leaf(sub, "e-structures", cmd_estructures, "(I^[q] : I) / I^[q]")
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--e", type=int, default=1)
    sp = leaf(sub, "rf-submodule", cmd_rf, "colon criterion for R[F]-submodules")
    sp.add_argument("--tau", required=True)
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--e", type=int, default=1)

    sl = sub.add_parser("semilinear", help="semilinear maps v -> A v^[q]").add_subparsers(
        dest="sl_command", metavar="OP", required=True)
    sp = leaf(sl, "iterate", cmd_sl_iterate, "A_r", ring=False)
    _add_semilinear(sp, True)
    sp.add_argument("--r", type=int, default=1)
    sp = leaf(sl, "base-change", cmd_sl_base_change, "C^-1 A_r C^[q^r]", ring=False)
    _add_semilinear(sp, True)
    sp.add_argument("--C", required=True)
    sp.add_argument("--r", type=int, default=1)
    sp = leaf(sl, "fixed", cmd_sl_fixed, "all fixed vectors over a finite field", ring=False)
    _add_semilinear(sp, False)
    sp.add_argument("--budget", type=int, default=10**6)
    sp = leaf(sl, "fixed-basis", cmd_sl_fixed_basis, "basis of fixed vectors over an extension", ring=False)
    _add_semilinear(sp, False)
    sp.add_argument("--max-ext", type=int, default=8)
    sp = leaf(sl, "stable", cmd_sl_stable, "stable subspaces of the iterates", ring=False)
    _add_semilinear(sp, False)
    sp.add_argument("--r", type=int, default=1)
    sp = leaf(sl, "counterexample", cmd_sl_counterexample, "bounded root search", ring=False)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--t-max", type=int, default=0)
    sp.add_argument("--deg-max", type=int, default=10)
    sp.add_argument("--equation", default=None, help="polynomial in alpha and x; default alpha^(q+1)+x*alpha-1")
    sp.add_argument("--field-degree", type=int, default=None)
    sp.add_argument("--budget", type=int, default=10**7)

    lc = sub.add_parser("lc", help="top local cohomology of a graded hypersurface").add_subparsers(
        dest="lc_command", metavar="OP", required=True)
    for name, func, help_ in [("basis", cmd_lc_basis, "degree-zero basis"),
                              ("frobenius", cmd_lc_frobenius, "Frobenius matrix in degree zero"),
                              ("verdict", cmd_lc_verdict, "D-simplicity verdict"),
                              ("socle", cmd_lc_socle, "F-stable socle lines"),
                              ("dual-check", cmd_lc_dual, "commuting square f^(p-1) vs monomial")]:
        sp = leaf(lc, name, func, help_)
        sp.add_argument("--f", required=True)
        if name == "verdict":
            sp.add_argument("--no-socle", action="store_true")

    sw = sub.add_parser("sweep", help="run a command over several primes, CSV output")
    sw.add_argument("--primes", required=True, help="list like 3,5,7 or a range 3..31")
    sw.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    sw.add_argument("rest", nargs=argparse.REMAINDER, help="command and its options, without --p")
    sw.set_defaults(cmdname="sweep")
    return ap


def _command_name(args) -> str:
    for attr in ("sl_command", "lc_command"):
        if getattr(args, attr, None):
            return f"{args.command} {getattr(args, attr)}"
    return args.command


def _job_echo(args) -> dict:
    skip = {"func", "cmdname", "job", "format", "no_timing", "command", "sl_command", "lc_command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _job_argv(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        job = json.load(fh)
    if not isinstance(job, dict) or "command" not in job:
        raise UsageError(f"job file {path} needs a 'command' entry")
    cmd = job.pop("command")
    argv = cmd.split() if isinstance(cmd, str) else list(cmd)
    for key, val in job.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        elif isinstance(val, list):
            argv += [flag, ",".join(map(str, val))]
        else:
            argv += [flag, str(val)]
    return argv


def parse_primes(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        cands = range(int(lo), int(hi) + 1)
        from .field import is_prime

        return [p for p in cands if is_prime(p)]
    primes = [int(t) for t in text.split(",") if t.strip()]
    for p in primes:
        check_prime(p)
    return sorted(set(primes))


def _sweep_row(argv: list[str], p: int) -> dict:
    args = build_parser().parse_args(argv + ["--p", str(p)])
    try:
        return {"ok": True, "result": args.func(args)}
    except FsingError as exc:
        return {"ok": False, "error": f"{type(exc).__name__}: {exc}"}


def run_sweep(args, out) -> int:
    rest = [a for a in args.rest if a != "--"]
    if not rest:
        raise UsageError("sweep needs a command, e.g. 'sweep --primes 3,5 lc verdict --f ...'")
    primes = parse_primes(args.primes)
    probe = build_parser().parse_args(rest + ["--p", str(primes[0])])
    name = _command_name(probe)
    degree = None
    if getattr(probe, "f", None):
        degree = _poly(_ring(probe), probe.f, "polynomial").weighted_degree()
    elif getattr(probe, "ideal", None):
        # principal ideals also get the p mod d column
        gens = _ideal(_ring(probe), probe.ideal, probe).generators
        if len(gens) == 1 and not gens[0].is_constant() and gens[0].is_homogeneous():
            degree = gens[0].weighted_degree()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_row, [rest] * len(primes), primes))
    else:
        rows = [_sweep_row(rest, p) for p in primes]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header, extract = _sweep_columns(name)
    w.writerow(["p", "p_mod_d"] + header)
    failed = False
    for p, row in zip(primes, rows):
        mod = p % degree if degree else ""
        if not row["ok"]:
            failed = True
            w.writerow([p, mod, "ERROR"] + [""] * (len(header) - 2) + [row["error"]])
        else:
            w.writerow([p, mod] + extract(row["result"]))
    out.write(buf.getvalue())
    return 1 if failed else 0


def _sweep_columns(name: str):
    if name == "lc verdict":
        return (["verdict", "degree_zero_dimension", "nilpotency", "socle_lines", "error"],
                lambda r: [r["verdict"], r["degree_zero_dimension"], r["nilpotency"]["kind"],
                           len(r["socle_lines"]), ""])
    if name == "fedder":
        return (["f_pure", "error"], lambda r: [r["f_pure"], ""])
    if name == "lc frobenius":
        return (["matrix", "error"], lambda r: [json.dumps(r["matrix"]), ""])
    return (["result", "error"], lambda r: [json.dumps(r, sort_keys=False), ""])


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        if "--job" in argv:
            i = argv.index("--job")
            if i + 1 >= len(argv):
                raise UsageError("--job needs a file name")
            path = argv[i + 1]
            argv = _job_argv(path) + argv[:i] + argv[i + 2:]
        args = ap.parse_args(argv)
        if not args.command:
            ap.print_help(sys.stderr)
            return 2
        if args.command == "sweep":
            return run_sweep(args, sys.stdout)
        start = time.perf_counter()
        result = args.func(args)
        elapsed = time.perf_counter() - start
    except ParseError as exc:
        print(f"fsing: parse error: {exc}", file=sys.stderr)
        if exc.source:
            print(f"  {exc.source}\n  {' ' * (exc.column - 1)}^", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"fsing: usage error: {exc}", file=sys.stderr)
        return 2
    except (FsingError, OSError, json.JSONDecodeError) as exc:
        print(f"fsing: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    name = _command_name(args)
    if args.format == "json":
        report = {
            "tool": "fsing",
            "version": __version__,
            "schema_version": SCHEMA_VERSION,
            "command": name,
            "job": _job_echo(args),
            "results": result,
            "hypotheses": result.get("hypotheses", {}) if isinstance(result, dict) else {},
        }
        if not args.no_timing:
            report["timing"] = {"seconds": round(elapsed, 6)}
        print(json.dumps(report, indent=2))
    else:
        for line in _text_lines(name, result):
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
