"""Command line front end: ``symmoments <subcommand> [options]``.

Exit status is 0 on success, 1 when a verification fails (the first failing
check is named on stderr) and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence, TextIO

from . import checks, combinat, eigenform, moments, quadform, sympow
from .errors import InvariantViolation, SymMomentsError

CACHE_ENV = "SYMMOMENTS_CACHE_DIR"
FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    N: int
    form: str | None
    fmt: str
    cache_dir: str
    oracle_bound: int
    threads: int


class UsageError(Exception):
    pass


# -- formatting ------------------------------------------------------------

def fmt_float(x: float) -> str:
    return "%.17g" % x


def fmt_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def to_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, %.17g floats, non-finite floats as strings."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else f'"{obj!r}"'
    if isinstance(obj, Fraction):
        return f'"{obj.numerator}/{obj.denominator}"'
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{to_json(k)}: {to_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit_rows(out: TextIO, fmt: str, header: Sequence[str], rows: Sequence[Sequence[Any]],
              meta: dict | None = None) -> None:
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(fmt_value(v) for v in row) + "\n")
    elif fmt == "json":
        doc = dict(meta or {})
        doc["rows"] = [dict(zip(header, row)) for row in rows]
        out.write(to_json(doc) + "\n")
    else:
        for k, v in (meta or {}).items():
            out.write(f"# {k}: {fmt_value(v)}\n")
        cells = [list(header)] + [[fmt_value(v) for v in row] for row in rows]
        widths = [max(len(r[j]) for r in cells) for j in range(len(header))]
        for r in cells:
            out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# -- argument helpers ------------------------------------------------------

def int_range(text: str) -> list[int]:
    """'3..8', '3,5,7' or '4'."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..", 1)
                a, b = int(lo), int(hi)
                if b < a:
                    raise argparse.ArgumentTypeError(f"empty range {part!r}")
                out.extend(range(a, b + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, list or a..b range, got {text!r}") from None
    return out


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def parse_form(text: str) -> quadform.QuadForm:
    try:
        a, b, c = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--form expects a,b,c, got {text!r}") from None
    return quadform.QuadForm(a, b, c)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="text", help="output format (default text)")
    common.add_argument("--cache-dir", default=None,
                        help=f"coefficient cache directory (default ${CACHE_ENV} or the working directory)")
    common.add_argument("--threads", type=positive_int, default=os.cpu_count() or 1,
                        help="parallelism cap (default: available cores; output is identical for any value)")
    common.add_argument("--oracle-bound", type=positive_int, default=combinat.DEFAULT_TABLEAU_BOUND,
                        help="largest dl for tableau enumeration (default %(default)s)")

    parser = argparse.ArgumentParser(prog="symmoments", description="Moments of symmetric power Hecke eigenvalues.")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("kostka", parents=[common], help="multiplicities K_{i,d,l} of (Sym^d)^{⊗l}")
    p.add_argument("--d", type=positive_int, required=True)
    p.add_argument("--l", type=positive_int, required=True)
    p.add_argument("--method", choices=("closed", "recursive", "generating", "tableau"), default="closed")

    p = sub.add_parser("theta-table", parents=[common], help="exact error-term exponents")
    p.add_argument("--d", type=int_range, required=True, help="integer, list or range such as 3..8")
    p.add_argument("--l", type=int_range, required=True, help="integer, list or range such as 3..8")
    p.add_argument("--variant", choices=moments.VARIANTS, default="plain")
    p.add_argument("--places", type=positive_int, default=9)
    p.add_argument("--unchecked", action="store_true", help="evaluate outside l >= 2, dl > 4 (no theorem behind it)")

    p = sub.add_parser("coeffs", parents=[common], help="compute Δ coefficients and write the cache")
    p.add_argument("--N", type=positive_int, default=10_000)
    p.add_argument("--load", default=None, help="validate a coefficient CSV instead of computing Δ")
    p.add_argument("--weight", type=int, default=12)
    p.add_argument("--emit", action="store_true", help="print the n,a,lambda rows")

    p = sub.add_parser("sympow", parents=[common], help="λ_{Sym^d f}(n) for n <= N")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=positive_int, default=10_000)

    p = sub.add_parser("moments", parents=[common], help="moment sums with a main-term fit")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--l", type=positive_int, required=True)
    p.add_argument("--N", type=positive_int, default=10_000)
    p.add_argument("--samples", type=positive_int, default=400)
    p.add_argument("--x-min", type=positive_int, default=None, help="smallest cutoff (default N/100)")
    p.add_argument("--form", default=None, help="a,b,c: sum over values of this quadratic form")

    p = sub.add_parser("bqf", parents=[common], help="class groups, r(n, Q) and theta coefficients")
    p.add_argument("--disc", type=int, default=None)
    p.add_argument("--form", default=None, help="a,b,c")
    p.add_argument("--limit", type=positive_int, default=100)
    p.add_argument("--chi", type=int, default=None, help="emit a_chi(n) for this character index")
    p.add_argument("--verify", action="store_true", help="check the character decomposition of r(n, Q)")

    p = sub.add_parser("verify", parents=[common], help="run invariant checks")
    p.add_argument("--suite", default="all", help="all, a module name or a check name")
    p.add_argument("--N", type=positive_int, default=10_000)
    p.add_argument("--list", action="store_true", help="list the available checks")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    cache = args.cache_dir or os.environ.get(CACHE_ENV) or "."
    return RunConfig(args.subcommand, getattr(args, "N", 1), getattr(args, "form", None), args.fmt, cache,
                     args.oracle_bound, args.threads)


# -- subcommands -----------------------------------------------------------

def cmd_kostka(args, cfg: RunConfig, out: TextIO) -> int:
    d, l = args.d, args.l
    if args.method == "closed":
        K = combinat.tensor_power_multiplicities(d, l)
    else:
        fn = {"recursive": combinat.kostka_recursive, "generating": combinat.kostka_generating,
              "tableau": lambda i, d, l: combinat.kostka_tableau(i, d, l, bound=cfg.oracle_bound)}[args.method]
        K = combinat.MultiplicityVector({i: fn(i, d, l) for i in range(d * l + 1)})
    if cfg.fmt == "text":
        out.write(f"{K}\n")
    else:
        emit_rows(out, cfg.fmt, ("i", "K"), sorted(K.items()), {"d": d, "l": l, "dim": K.dimension()})
    return 0


def cmd_theta_table(args, cfg: RunConfig, out: TextIO) -> int:
    rows = []
    for d in args.d:
        for l in args.l:
            if args.variant == "plain":
                r = moments.theta(d, l, args.places, args.unchecked)
            else:
                r = moments.theta_bqf(d, l, args.variant == "bqf_h1", args.places, args.unchecked)
            K0, K1, K2 = r.denominator_terms
            hyp = l >= 2 and d * l > 4
            rows.append((d, l, r.theta_decimal, r.theta_exact, K0, K1, K2, r.dimension, hyp))
    header = ("d", "l", "theta_decimal", "theta", "K0", "K1", "K2", "dim", "in_theorem_range")
    emit_rows(out, cfg.fmt, header, rows, {"variant": args.variant})
    return 0


def cmd_coeffs(args, cfg: RunConfig, out: TextIO) -> int:
    if args.load:
        series = eigenform.load_coefficients(args.load, args.weight)
        path = None
    else:
        series = eigenform.delta_coefficients(cfg.N)
        eigenform.validate(series)
        path = eigenform.write_coefficients(series, eigenform.cache_path(series.label, cfg.N, cfg.cache_dir))
    if args.emit:
        rows = [(n, series.a(n) if series.exact else "", float(series.normalized[n])) for n in range(1, series.N + 1)]
        emit_rows(out, cfg.fmt, ("n", "a", "lambda"), rows)
        return 0
    meta = {"label": series.label, "weight": series.weight, "N": series.N, "exact": series.exact,
            "validated": True, "cache": str(path) if path else ""}
    if cfg.fmt == "json":
        out.write(to_json(meta) + "\n")
    else:
        emit_rows(out, cfg.fmt, tuple(meta), [tuple(meta.values())])
    return 0


def _series(cfg: RunConfig, N: int) -> eigenform.CoefficientSeries:
    return eigenform.obtain_delta(N, cfg.cache_dir)


def cmd_sympow(args, cfg: RunConfig, out: TextIO) -> int:
    if args.d < 0:
        raise UsageError("--d must be nonnegative")
    S = sympow.sym_series(_series(cfg, cfg.N), args.d)
    rows = [(n, float(S.values[n])) for n in range(1, cfg.N + 1)]
    emit_rows(out, "csv" if cfg.fmt == "text" else cfg.fmt, ("n", f"lambda_sym_{args.d}"), rows)
    return 0


def cmd_moments(args, cfg: RunConfig, out: TextIO) -> int:
    if args.d < 0:
        raise UsageError("--d must be nonnegative")
    S = sympow.sym_series(_series(cfg, cfg.N), args.d)
    lo = args.x_min or max(1, cfg.N // 100)
    if lo > cfg.N:
        raise UsageError("--x-min exceeds N")
    xs = moments.log_spaced_cutoffs(lo, cfg.N, args.samples)
    if args.form:
        form = parse_form(args.form)
        counts = quadform.representation_counts(form, cfg.N)
        sums = [moments.bqf_moment_sum(S, args.l, form, x, counts) for x in xs]
    else:
        sums = moments.moment_sums(S, args.l, xs)
    fit = moments.fit_main_term(args.d, args.l, xs, sums)
    rows = [(x, s, fit.main_term(x), s - fit.main_term(x)) for x, s in zip(fit.x_samples, fit.sums)]
    meta = {"d": args.d, "l": args.l, "N": cfg.N, "form": args.form or "",
            "degree": fit.degree if fit.degree is not None else "vanishes",
            "coefficients": list(fit.fitted_coeffs),
            "residual_exponent": fit.residual_exponent_estimate,
            "window": list(fit.window)}
    if cfg.fmt == "csv":
        emit_rows(out, "csv", ("x", "S", "fit", "residual"), rows)
    else:
        emit_rows(out, cfg.fmt, ("x", "S", "fit", "residual"), rows, meta)
    return 0


def cmd_bqf(args, cfg: RunConfig, out: TextIO) -> int:
    form = parse_form(args.form) if args.form else None
    D = args.disc if args.disc is not None else (form.D if form else None)
    if D is None:
        raise UsageError("bqf needs --disc or --form")
    if form is not None and form.D != D:
        raise UsageError(f"form {form} has discriminant {form.D}, not {D}")
    G = quadform.class_group(D)
    N = args.limit
    if args.verify:
        forms = [form] if form else list(G.forms)
        for f in forms:
            res = quadform.verify_character_decomposition(G, f, N)
            if res >= 1e-9:
                raise InvariantViolation("character-decomposition", f"D={D}, Q={f}: residual {res!r}")
        if cfg.fmt == "json":
            out.write(to_json({"D": D, "checked_forms": [str(f) for f in forms], "limit": N, "ok": True}) + "\n")
        else:
            out.write(f"character decomposition ok: D={D}, forms={len(forms)}, n<={N}\n")
        return 0
    if args.chi is not None:
        if not 0 <= args.chi < G.h:
            raise UsageError(f"--chi must lie in 0..{G.h - 1}")
        theta = quadform.theta_coefficients(G, args.chi, N)
        rows = [(n, float(theta.values[n].real), float(theta.values[n].imag)) for n in range(1, N + 1)]
        emit_rows(out, "csv" if cfg.fmt == "text" else cfg.fmt, ("n", "a_chi_re", "a_chi_im"), rows)
        return 0
    if form is not None:
        r = quadform.representation_counts(form, N)
        emit_rows(out, "csv" if cfg.fmt == "text" else cfg.fmt, ("n", "r"), [(n, int(r[n])) for n in range(1, N + 1)])
        return 0
    info = {"D": D, "h": G.h, "w": G.w, "structure": list(G.structure), "fundamental": quadform.is_fundamental(D),
            "forms": [str(f) for f in G.forms]}
    if cfg.fmt == "json":
        out.write(to_json(info) + "\n")
    elif cfg.fmt == "csv":
        emit_rows(out, "csv", ("index", "a", "b", "c"), [(i, f.a, f.b, f.c) for i, f in enumerate(G.forms)])
    else:
        out.write(f"D = {D}  h = {G.h}  w = {G.w}  structure = {'x'.join(map(str, G.structure)) or '1'}\n")
        for i, f in enumerate(G.forms):
            out.write(f"{i:4d}  {f}\n")
    return 0


def cmd_verify(args, cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if args.list:
        emit_rows(out, cfg.fmt, ("check", "module", "description"),
                  [(c.name, c.module, c.doc.splitlines()[0]) for c in checks.REGISTRY.values()])
        return 0
    try:
        checks.resolve(args.suite)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}; see verify --list") from None
    ctx = checks.VerifyContext(N=cfg.N, cache_dir=cfg.cache_dir, oracle_bound=cfg.oracle_bound)
    outcomes = checks.run_suite(args.suite, ctx)
    rows = [(o.name, "pass" if o.passed else "FAIL", o.detail) for o in outcomes]
    emit_rows(out, cfg.fmt, ("check", "status", "detail"), rows, {"suite": args.suite, "N": cfg.N})
    failed = [o for o in outcomes if not o.passed]
    if failed:
        err.write(f"verification failed: {failed[0].name}: {failed[0].detail}\n")
        return 1
    return 0


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = make_config(args)
    handlers = {"kostka": cmd_kostka, "theta-table": cmd_theta_table, "coeffs": cmd_coeffs,
                "sympow": cmd_sympow, "moments": cmd_moments, "bqf": cmd_bqf}
    try:
        if cfg.subcommand == "verify":
            return cmd_verify(args, cfg, out, err)
        return handlers[cfg.subcommand](args, cfg, out)
    except UsageError as exc:
        parser.print_usage(err)
        err.write(f"symmoments: error: {exc}\n")
        return 2
    except InvariantViolation as exc:
        err.write(f"verification failed: {exc.check}: {type(exc).__name__}: {exc}\n")
        return 1
    except SymMomentsError as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
