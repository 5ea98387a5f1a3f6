"""Command-line front end for the divisor-sum laboratory.

Eight subcommands cover the library surface:

  sieve     pointwise table of one arithmetic function
  sum       one summatory value by a chosen (or auto-picked) algorithm
  explicit  truncated explicit-formula evaluation with full decomposition
  voronoi   Bessel/cosine summation formulas against exact references
  delta     error-term samples delta(x) = exact - main term
  ap        arithmetic-progression divisor/harmonic/fractional sums
  verify    self-check suites over the library invariants
  fit       log-log exponent fit of |delta| over a geometric grid

Flags use long names only.  A config file (plain key=value lines, '#'
comments) may supply a default for any flag of any subcommand; values
given on the command line win.  Reports go to --output as CSV or JSON
(stdout with --output -), and identical inputs produce byte-identical
output regardless of --workers.

Exit codes: 0 success, 2 usage or bad argument, 3 input-file problem
(also unwritable output), 4 documented resource or accuracy limit
exceeded, 5 verification-suite failure.
"""

from __future__ import annotations

import argparse
import cmath
import math
import os
import random
import sys
import tempfile

from .arith import (FnSpec, build_factor_table, dirichlet_coefficients,
                    divisor_count, divisor_count_k, divisor_count_sieve,
                    eval_arithmetic, hermite_divisor_count, sigma,
                    two_squares_count)
from .bessel import (bessel_J1, bessel_K1, bessel_Y1, _bessel_J0, _bessel_Y0,
                     divisor_delta_reference, sierpinski_sum, voronoi_full,
                     voronoi_truncated)
from .errors import (AccuracyError, PoleError, ResourceLimitError,
                     TableFormatError, VerificationError)
from .explicit import (TARGETS, TruncationConfig, delta_error,
                       evaluate_explicit, main_term, nontrivial_zero_sum,
                       trivial_zero_tail)
from .fitting import delta_samples, exponent_fit, half_integer_grid
from .reports import (DELTA_CSV_HEADER, FORMATS, emit_report, read_delta_csv,
                      render_csv, render_json)
from .summatory import (ORACLE_BOUND_DEFAULT, APSpec, ap_divisor_sum,
                        ap_main_term, brute_force_profile, brute_force_sum,
                        circle_lattice_sum, divisor_sum_from_squarefree,
                        divisor_sum_hyperbola, floor_sum, fractional_main_term,
                        fractional_part_sum, harmonic_main_term, harmonic_sum,
                        squarefree_divisor_sum)
from .zeta import (default_zero_table, load_zero_table, stieltjes, zeta,
                   zeta_constants, zeta_derivative, _lgamma_complex)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_RESOURCE = 4
EXIT_VERIFY = 5

# Emitting a row per integer has to stop somewhere well short of the sieve's
# own memory bound; 10^7 rows is already a ~200 MB text file.
SIEVE_ROWS_MAX = 10 ** 7

# Aliases accepted by --target, mapped onto explicit.TARGETS.
TARGET_ALIASES = {
    "d": "divisor_sum",
    "divisor": "divisor_sum",
    "divisor_sum": "divisor_sum",
    "two_omega": "two_omega_sum",
    "two_omega_sum": "two_omega_sum",
    "two_omega_over_n": "two_omega_over_n_sum",
    "two_omega_over_n_sum": "two_omega_over_n_sum",
}


# ---------------------------------------------------------------------------
# config file handling
# ---------------------------------------------------------------------------

def _read_config_file(path: str) -> dict[str, str]:
    """Parse a key=value defaults file into flag-name -> raw string."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FileNotFoundError(f"config file {path!r}: {exc}") from None
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        key, sep, value = body.partition("=")
        key = key.strip().lstrip("-")
        if not sep or not key:
            raise TableFormatError("expected key=value", line=lineno)
        out[key] = value.strip()
    return out


def _seed_config(parsers, config: dict[str, str]) -> None:
    """Install config values as parser defaults so the command line wins.

    A key must name a long flag of at least one subcommand; each subparser
    only receives the keys it understands.  String defaults go through the
    flag's type converter at parse time, so bad values still surface as
    usage errors; store_true flags get their strings decoded here.
    """
    known: set[str] = set()
    for sub in parsers:
        dests = {}
        for action in sub._actions:
            if not action.option_strings:
                continue
            dests[action.dest] = action
        known.update(dests)
        seed = {}
        for key, raw in config.items():
            dest = key.replace("-", "_")
            action = dests.get(dest)
            if action is None:
                continue
            if action.nargs == 0:
                # zero-arg flag (store_true style): decode the boolean here
                lowered = raw.lower()
                if lowered not in ("true", "false", "yes", "no", "1", "0"):
                    raise ValueError(f"config key {key!r} needs a boolean, got {raw!r}")
                seed[dest] = lowered in ("true", "yes", "1")
            else:
                seed[dest] = raw
        if seed:
            sub.set_defaults(**seed)
    for key in config:
        if key.replace("-", "_") not in known:
            raise ValueError(f"config key {key!r} is not a known flag")


# ---------------------------------------------------------------------------
# parser construction
# ---------------------------------------------------------------------------

def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="key=value defaults file; command line wins")
    common.add_argument("--output", default="-", metavar="PATH",
                        help="report destination, - for stdout (default -)")
    common.add_argument("--format", choices=FORMATS, default=None,
                        help="report format (default csv; explicit and fit default json)")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes for brute-force scans (default 1)")
    common.add_argument("--oracle-bound", type=int, default=ORACLE_BOUND_DEFAULT,
                        dest="oracle_bound",
                        help=f"ceiling for linear-time exact scans (default {ORACLE_BOUND_DEFAULT})")

    parser = argparse.ArgumentParser(
        prog="divlab",
        description="exact and analytic summation lab for divisor-type functions")
    subs = parser.add_subparsers(dest="command", required=True, metavar="command")
    built = []

    p = subs.add_parser("sieve", parents=[common],
                        help="tabulate one arithmetic function pointwise")
    p.add_argument("--limit", type=int, required=True,
                   help=f"tabulate n = 1..limit (at most {SIEVE_ROWS_MAX} rows)")
    p.add_argument("--fn", default="d",
                   help="function label: d, d_3, sigma_1, mu, mu_squared, omega, "
                        "big_omega, two_omega, two_big_omega, r2, d_restricted_4_1, ...")
    built.append(p)

    p = subs.add_parser("sum", parents=[common],
                        help="one summatory value sum_{n<=x} f(n)")
    p.add_argument("--fn", default="d", help="function label as for sieve")
    p.add_argument("--x", type=float, required=True, help="upper limit x >= 1")
    p.add_argument("--algorithm", default="auto",
                   choices=("auto", "brute", "hyperbola", "moebius_kernel",
                            "convolution_kernel"),
                   help="auto picks the sublinear route when one exists")
    built.append(p)

    p = subs.add_parser("explicit", parents=[common],
                        help="truncated explicit-formula evaluation")
    p.add_argument("--target", default="d",
                   help="divisor_sum (d), two_omega_sum (two_omega), or "
                        "two_omega_over_n_sum (two_omega_over_n)")
    p.add_argument("--x", type=float, required=True, help="evaluation point x > 1")
    p.add_argument("--zeros", metavar="PATH",
                   help="zero-ordinate file; default is ZD_ZEROS or the packaged table")
    p.add_argument("--pairs", type=int, default=100,
                   help="number of zero pairs in the oscillating sum (default 100)")
    p.add_argument("--tail", type=int, default=10,
                   help="number of trivial-zero tail terms (default 10)")
    p.add_argument("--tail-variant", default="residue", choices=("residue", "printed"),
                   dest="tail_variant",
                   help="tail coefficient convention (default residue)")
    p.add_argument("--tail-sign", default="minus", choices=("minus", "plus"),
                   dest="tail_sign", help="overall sign of the tail (default minus)")
    p.add_argument("--midpoint-delta", type=float, default=0.5, dest="midpoint_delta",
                   help="averaging offset for integer x (default 0.5)")
    built.append(p)

    p = subs.add_parser("voronoi", parents=[common],
                        help="Bessel/cosine summation formulas vs exact references")
    p.add_argument("--x", type=float, required=True, help="non-integer x > 1")
    p.add_argument("--kind", default="full",
                   choices=("full", "truncated", "sierpinski"),
                   help="full divisor series, truncated cosine series, or the "
                        "lattice-count series (default full)")
    p.add_argument("--terms", type=int, default=None,
                   help="series length (default 10000; 1000 for truncated)")
    built.append(p)

    p = subs.add_parser("delta", parents=[common],
                        help="error-term samples delta(x) = exact - main term")
    p.add_argument("--target", default="d", help="target as for explicit")
    p.add_argument("--x", type=float, default=None,
                   help="single sample point (alternative to a grid)")
    p.add_argument("--grid-lo", type=float, default=None, dest="grid_lo",
                   help="grid start (with --grid-hi)")
    p.add_argument("--grid-hi", type=float, default=None, dest="grid_hi",
                   help="grid end (with --grid-lo)")
    p.add_argument("--ratio", type=float, default=1.2,
                   help="geometric grid ratio (default 1.2)")
    built.append(p)

    p = subs.add_parser("ap", parents=[common],
                        help="divisor, harmonic, or fractional-part sums on a progression")
    p.add_argument("--x", type=float, required=True, help="upper limit x >= 1")
    p.add_argument("--kind", default="divisor",
                   choices=("divisor", "harmonic", "fractional"),
                   help="which progression sum to evaluate (default divisor)")
    p.add_argument("--q", type=int, default=None, help="modulus q >= 2")
    p.add_argument("--a", type=int, default=None,
                   help="residue a with 1 <= a < q and gcd(a, q) = 1")
    built.append(p)

    p = subs.add_parser("verify", parents=[common],
                        help="run self-check suites; exit 5 on any failure")
    p.add_argument("--suite", default="all",
                   choices=("identities", "summatory", "zeta", "bessel",
                            "explicit", "reports", "all"),
                   help="which suite to run (default all)")
    p.add_argument("--zeros", metavar="PATH",
                   help="zero-ordinate file for the explicit suite")
    built.append(p)

    p = subs.add_parser("fit", parents=[common],
                        help="log-log exponent fit of |delta| over a geometric grid")
    p.add_argument("--target", default="d", help="target as for explicit")
    p.add_argument("--grid-lo", type=float, required=True, dest="grid_lo",
                   help="grid start, >= 1")
    p.add_argument("--grid-hi", type=float, required=True, dest="grid_hi",
                   help="grid end, needs >= 3 decades above --grid-lo")
    p.add_argument("--ratio", type=float, default=1.2,
                   help="geometric grid ratio (default 1.2)")
    p.add_argument("--samples-output", default=None, metavar="PATH",
                   dest="samples_output",
                   help="also write the underlying delta samples as CSV")
    built.append(p)

    return parser, built


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _resolve_target(label: str) -> str:
    target = TARGET_ALIASES.get(label.strip())
    if target is None:
        raise ValueError(f"unknown target {label!r}; pick one of "
                         f"{', '.join(sorted(set(TARGET_ALIASES)))}")
    assert target in TARGETS
    return target


def _load_zeros(path: str | None):
    if path:
        return load_zero_table(path)
    return default_zero_table()


def _report_format(args) -> str:
    if args.format is not None:
        return args.format
    return "json" if args.command in ("explicit", "fit") else "csv"


def _write_rows(rows, fmt: str, path: str) -> int:
    if path == "-":
        text = render_csv(rows) if fmt == "csv" else render_json(rows)
        sys.stdout.write(text)
    else:
        emit_report(rows, fmt, path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_sieve(args) -> int:
    spec = FnSpec.parse(args.fn)
    limit = args.limit
    if limit < 1:
        raise ValueError("--limit must be >= 1")
    if limit > SIEVE_ROWS_MAX:
        raise ResourceLimitError(
            f"sieve emits one row per integer; {limit} exceeds the "
            f"{SIEVE_ROWS_MAX} row cap")
    label = spec.label()
    if spec.tag == "d":
        counts = divisor_count_sieve(limit)
        rows = [{"n": n, "fn": label, "value": int(counts[n])}
                for n in range(1, limit + 1)]
    else:
        table = build_factor_table(max(2, limit))
        rows = [{"n": n, "fn": label, "value": eval_arithmetic(spec, n, table)}
                for n in range(1, limit + 1)]
    return _write_rows(rows, _report_format(args), args.output)


def _cmd_sum(args) -> int:
    spec = FnSpec.parse(args.fn)
    algo = args.algorithm
    if algo == "auto":
        algo = {"d": "hyperbola", "two_omega": "moebius_kernel"}.get(spec.tag, "brute")
    if algo == "hyperbola":
        if spec.tag != "d":
            raise ValueError("--algorithm hyperbola computes d only")
        res = divisor_sum_hyperbola(args.x)
    elif algo == "convolution_kernel":
        if spec.tag != "d":
            raise ValueError("--algorithm convolution_kernel computes d only")
        res = divisor_sum_from_squarefree(args.x)
    elif algo == "moebius_kernel":
        if spec.tag != "two_omega":
            raise ValueError("--algorithm moebius_kernel computes two_omega only")
        res = squarefree_divisor_sum(args.x)
    else:
        res = brute_force_sum(spec, args.x, bound=args.oracle_bound,
                              workers=args.workers)
    return _write_rows([res], _report_format(args), args.output)


def _cmd_explicit(args) -> int:
    target = _resolve_target(args.target)
    zeros = _load_zeros(args.zeros)
    cfg = TruncationConfig(num_zero_pairs=args.pairs, tail_terms=args.tail,
                           midpoint_delta=args.midpoint_delta,
                           tail_variant=args.tail_variant,
                           tail_sign=-1 if args.tail_sign == "minus" else 1)
    evaluation = evaluate_explicit(target, args.x, zeros, cfg)
    fmt = _report_format(args)
    if fmt == "csv":
        raise ValueError("explicit reports are JSON only; the partial-sum "
                         "trajectory does not fit a flat CSV row")
    return _write_rows([evaluation], fmt, args.output)


def _cmd_voronoi(args) -> int:
    kind = args.kind
    n_terms = args.terms
    if n_terms is None:
        n_terms = 10 ** 3 if kind == "truncated" else 10 ** 4
    if kind == "full":
        out = voronoi_full(args.x, n_terms)
        reference = float(divisor_sum_hyperbola(args.x).value)
        row = {"x": args.x, "kind": kind, "n_terms": out.n_terms,
               "value": out.value, "reference": reference,
               "residual": out.value - reference, "last_term": out.last_term}
    elif kind == "truncated":
        value = voronoi_truncated(args.x, n_terms)
        reference = divisor_delta_reference(args.x)
        row = {"x": args.x, "kind": kind, "n_terms": n_terms, "value": value,
               "reference": reference, "residual": value - reference,
               "last_term": None}
    else:
        value = sierpinski_sum(args.x, n_terms)
        reference = float(circle_lattice_sum(math.floor(args.x)))
        row = {"x": args.x, "kind": kind, "n_terms": n_terms, "value": value,
               "reference": reference, "residual": value - reference,
               "last_term": None}
    return _write_rows([row], _report_format(args), args.output)


def _cmd_delta(args) -> int:
    target = _resolve_target(args.target)
    has_grid = args.grid_lo is not None or args.grid_hi is not None
    if args.x is not None and has_grid:
        raise ValueError("give either --x or a --grid-lo/--grid-hi pair, not both")
    if args.x is not None:
        samples = [delta_error(target, args.x)]
    else:
        if args.grid_lo is None or args.grid_hi is None:
            raise ValueError("delta needs --x or both --grid-lo and --grid-hi")
        grid = half_integer_grid(args.grid_lo, args.grid_hi, args.ratio)
        samples = delta_samples(target, grid)
    return _write_rows(samples, _report_format(args), args.output)


def _cmd_ap(args) -> int:
    if (args.q is None) != (args.a is None):
        raise ValueError("--q and --a must be given together")
    ap = APSpec(q=args.q, a=args.a) if args.q is not None else None
    xf = args.x
    if args.kind == "divisor":
        if ap is None:
            raise ValueError("--kind divisor needs --q and --a")
        res = ap_divisor_sum(xf, ap, bound=args.oracle_bound)
        value: float | int = res.value
        predicted = ap_main_term(xf, ap)
        label = res.fn
    elif args.kind == "harmonic":
        value = harmonic_sum(xf, ap)
        predicted = harmonic_main_term(xf, ap)
        label = f"harmonic_{ap.q}_{ap.a}" if ap else "harmonic"
    else:
        value = fractional_part_sum(xf, ap)
        predicted = fractional_main_term(xf, ap)
        label = f"fractional_{ap.q}_{ap.a}" if ap else "fractional"
    residual = value - predicted
    row = {"x": xf, "fn": label, "value": value, "predicted": predicted,
           "residual": residual, "residual_times_x": residual * xf}
    return _write_rows([row], _report_format(args), args.output)


def _cmd_fit(args) -> int:
    target = _resolve_target(args.target)
    grid = half_integer_grid(args.grid_lo, args.grid_hi, args.ratio)
    samples = delta_samples(target, grid)
    fit = exponent_fit(samples)
    if args.samples_output:
        emit_report(samples, "csv", args.samples_output)
    return _write_rows([fit], _report_format(args), args.output)


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------
# Each suite returns (label, passed, detail) triples.  The suites re-derive
# small instances of the library's defining identities rather than trusting
# cached constants, so a unit drift in any module shows up here.

def _suite_identities(args) -> list[tuple[str, bool, str]]:
    checks = []
    n_max = 4000
    table = build_factor_table(n_max)

    coef = dirichlet_coefficients("zeta_sq_over_zeta2s", n_max)
    bad = sum(1 for n in range(1, n_max + 1)
              if coef[n] != eval_arithmetic(FnSpec("two_omega"), n, table))
    checks.append(("squarefree_kernel", bad == 0,
                   f"2^omega coefficients, n <= {n_max}, {bad} mismatches"))

    coef = dirichlet_coefficients("zeta_cu_over_zeta2s", n_max)
    bad = sum(1 for n in range(1, n_max + 1)
              if coef[n] != divisor_count(n * n))
    checks.append(("d_of_square", bad == 0,
                   f"d(n^2) coefficients, n <= {n_max}, {bad} mismatches"))

    coef = dirichlet_coefficients("zeta_4_over_zeta2s", n_max)
    bad = sum(1 for n in range(1, n_max + 1)
              if coef[n] != divisor_count(n, table) ** 2)
    checks.append(("d_squared", bad == 0,
                   f"d(n)^2 coefficients, n <= {n_max}, {bad} mismatches"))

    for k in (3, 4, 5):
        coef = dirichlet_coefficients("zeta_k", n_max, k=k)
        bad = sum(1 for n in range(1, n_max + 1)
                  if coef[n] != divisor_count_k(n, k, table))
        checks.append((f"d_{k}_convolution", bad == 0,
                       f"d_{k} coefficients, n <= {n_max}, {bad} mismatches"))

    coef = dirichlet_coefficients("sigma_product", 2000, a=1, b=2)
    bad = sum(1 for n in range(1, 2001)
              if coef[n] != sigma(n, 1, table) * sigma(n, 2, table))
    checks.append(("sigma_product", bad == 0,
                   f"sigma_1 sigma_2 coefficients, n <= 2000, {bad} mismatches"))

    m = 20000
    counts = divisor_count_sieve(m)
    bad = sum(1 for n in range(1, m + 1)
              if hermite_divisor_count(n) != int(counts[n]))
    checks.append(("hermite", bad == 0,
                   f"floor-sum divisor count, n <= {m}, {bad} mismatches"))

    m = 2000
    lattice = sum(two_squares_count(n, table) for n in range(1, m + 1))
    expected = circle_lattice_sum(m)  # origin excluded by contract
    checks.append(("r2_vs_circle", lattice == expected,
                   f"sum r2(n <= {m}) = {lattice}, circle count {expected}"))
    return checks


def _suite_summatory(args) -> list[tuple[str, bool, str]]:
    checks = []
    frozen = [(divisor_sum_hyperbola(10).value, 27, "D(10)"),
              (divisor_sum_hyperbola(100).value, 482, "D(100)"),
              (squarefree_divisor_sum(10).value, 23, "S_2omega(10)")]
    ok = all(got == want for got, want, _ in frozen)
    checks.append(("anchor_values", ok,
                   ", ".join(f"{name} = {got} (want {want})"
                             for got, want, name in frozen)))

    m = 1500
    oracle_d = brute_force_profile(FnSpec("d"), range(1, m + 1),
                                   workers=args.workers)
    oracle_s = brute_force_profile(FnSpec("two_omega"), range(1, m + 1),
                                   workers=args.workers)
    bad = 0
    for x in range(1, m + 1):
        want_d = oracle_d[x - 1].value
        want_s = oracle_s[x - 1].value
        if divisor_sum_hyperbola(x).value != want_d:
            bad += 1
        elif divisor_sum_from_squarefree(x).value != want_d:
            bad += 1
        elif squarefree_divisor_sum(x).value != want_s:
            bad += 1
    checks.append(("algorithm_agreement", bad == 0,
                   f"three sublinear routes vs brute force, x <= {m}, "
                   f"{bad} mismatches"))

    big = 10 ** 6
    a = divisor_sum_hyperbola(big).value
    b = divisor_sum_from_squarefree(big).value
    checks.append(("hyperbola_vs_convolution", a == b,
                   f"D({big}) = {a} vs {b}"))

    x = 5000
    direct = sum(x // n for n in range(1, x + 1))
    checks.append(("floor_sum", floor_sum(x) == direct,
                   f"floor_sum({x}) = {floor_sum(x)}, direct {direct}"))
    return checks


def _suite_zeta(args) -> list[tuple[str, bool, str]]:
    checks = []
    cons = zeta_constants()
    targets = [
        ("zeta(0)", zeta(0.0).real, -0.5),
        ("zeta(2)", zeta(2.0).real, math.pi ** 2 / 6),
        ("zeta_prime(2)", cons.zeta_prime_2, -0.937548254),
        ("gamma_1", stieltjes(1), -0.072815845),
        ("zeta(-1)", zeta(-1.0).real, -1.0 / 12.0),
        ("zeta(-3)", zeta(-3.0).real, 1.0 / 120.0),
        ("zeta_prime(-2)", zeta_derivative(-2.0).real, -0.030448457),
    ]
    worst = max(abs(got - want) for _, got, want in targets)
    checks.append(("special_values", worst < 1e-8,
                   f"7 anchor constants, worst abs err {worst:.3g}"))

    residual = abs(zeta(complex(0.5, 14.134725142)))
    checks.append(("first_zero", residual < 1e-6,
                   f"|zeta(1/2 + i t_1)| = {residual:.3g}"))

    def xi(s: complex) -> complex:
        # completed form pi^(-s/2) Gamma(s/2) zeta(s), symmetric under s -> 1-s
        return cmath.exp(-0.5 * s * math.log(math.pi)
                         + _lgamma_complex(s / 2)) * zeta(s)

    worst = 0.0
    for s in (complex(0.3, 2.0), complex(0.75, 0.5), complex(0.6, 3.0)):
        lhs = xi(s)
        rhs = xi(1 - s)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    checks.append(("functional_equation", worst < 1e-8,
                   f"completed-form symmetry at 3 strip points, worst rel err {worst:.3g}"))

    worst = 0.0
    h = 1e-5
    for s in (complex(2.0, 0.0), complex(0.5, 5.0)):
        fd = (zeta(s + h) - zeta(s - h)) / (2 * h)
        got = zeta_derivative(s)
        worst = max(worst, abs(fd - got) / abs(got))
    checks.append(("derivative_fd", worst < 1e-6,
                   f"central difference vs zeta_derivative, worst rel err {worst:.3g}"))
    return checks


def _suite_bessel(args) -> list[tuple[str, bool, str]]:
    checks = []
    anchors = [
        ("J1(1)", bessel_J1(1.0), 0.44005058574493355),
        ("Y1(1)", bessel_Y1(1.0), -0.7812128213002887),
        ("K1(1)", bessel_K1(1.0), 0.6019072301972346),
    ]
    worst = max(abs(got - want) for _, got, want in anchors)
    checks.append(("anchor_values", worst < 1e-8,
                   f"J1/Y1/K1 at z = 1, worst abs err {worst:.3g}"))

    rng = random.Random(1905)
    worst = 0.0
    for _ in range(20):
        z = rng.uniform(0.5, 50.0)
        w = bessel_J1(z) * _bessel_Y0(z) - _bessel_J0(z) * bessel_Y1(z)
        worst = max(worst, abs(w - 2.0 / (math.pi * z)))
    checks.append(("wronskian", worst < 1e-8,
                   f"J1 Y0 - J0 Y1 vs 2/(pi z) at 20 points, worst abs err {worst:.3g}"))

    worst = 0.0
    for fn in (bessel_J1, bessel_Y1, bessel_K1):
        lo = fn(12.0 - 1e-9)
        hi = fn(12.0 + 1e-9)
        worst = max(worst, abs(hi - lo))
    checks.append(("branch_continuity", worst < 1e-8,
                   f"series/asymptotic handoff jump, worst {worst:.3g}"))
    return checks


def _suite_explicit(args) -> list[tuple[str, bool, str]]:
    checks = []
    zeros = _load_zeros(getattr(args, "zeros", None))

    got = nontrivial_zero_sum("two_omega_sum", 100.5, zeros, 1)[0][1]
    want = 1.368549735280956
    checks.append(("first_pair_term", abs(got - want) < 1e-9,
                   f"one-pair sum at x = 100.5: {got!r} (want {want!r})"))

    constant, main = main_term("two_omega_sum", 10)
    ok = constant == -0.5 and abs(main - 21.866763425223986) < 1e-12
    checks.append(("main_term_anchor", ok,
                   f"two_omega main term at x = 10: ({constant}, {main})"))

    worst = 0.0
    for target in ("divisor_sum", "two_omega_sum"):
        for x in (10.5, 100.5, 1000.5, 10000.5, 100000.5):
            for variant in ("residue", "printed"):
                worst = max(worst, abs(trivial_zero_tail(target, x, 10,
                                                         variant=variant)))
    checks.append(("tail_magnitude", worst <= 0.02,
                   f"|tail| over x >= 10.5, both variants: max {worst:.3g}"))

    cfg = TruncationConfig(num_zero_pairs=5, tail_terms=5)
    ev = evaluate_explicit("divisor_sum", 100, zeros, cfg)
    want_exact = (divisor_sum_hyperbola(99).value
                  + divisor_sum_hyperbola(100).value) / 2.0
    checks.append(("midpoint_average", ev.exact == want_exact,
                   f"integer x = 100 averages to {ev.exact} (want {want_exact})"))

    total = ev.constant_term + ev.main_term + ev.zero_sum_at(5) + ev.trivial_tail
    ok = abs(total - ev.total_at(5)) < 1e-12
    checks.append(("decomposition", ok,
                   f"constant+main+zeros+tail = {total} vs total_at {ev.total_at(5)}"))
    return checks


def _suite_reports(args) -> list[tuple[str, bool, str]]:
    checks = []
    want_header = "x,exact,predicted,delta,delta_over_x14,delta_over_x12"
    checks.append(("delta_header", DELTA_CSV_HEADER == want_header,
                   f"frozen header {DELTA_CSV_HEADER!r}"))

    row = divisor_sum_hyperbola(10 ** 6)
    got = render_csv([row])
    want = "x,fn,value,algorithm\n1000000,d,13970034,hyperbola\n"
    checks.append(("sum_row", got == want, f"D(10^6) CSV row {got.strip()!r}"))

    samples = [delta_error("divisor_sum", x) for x in (100.5, 1000.5, 20000.5)]
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "delta.csv")
        emit_report(samples, "csv", path)
        with open(path, "rb") as fh:
            first = fh.read()
        back = read_delta_csv(path)
        emit_report(back, "csv", path)
        with open(path, "rb") as fh:
            second = fh.read()
    checks.append(("csv_round_trip", first == second,
                   f"emit/parse/emit over {len(samples)} rows, "
                   f"{len(first)} bytes, byte-identical {first == second}"))
    return checks


SUITES = {
    "identities": _suite_identities,
    "summatory": _suite_summatory,
    "zeta": _suite_zeta,
    "bessel": _suite_bessel,
    "explicit": _suite_explicit,
    "reports": _suite_reports,
}


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    passed = 0
    total = 0
    for name in names:
        for label, ok, detail in SUITES[name](args):
            total += 1
            passed += 1 if ok else 0
            print(f"{'ok  ' if ok else 'FAIL'} {name}.{label}: {detail}")
    print(f"{passed}/{total} checks passed")
    return EXIT_OK if passed == total else EXIT_VERIFY


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_HANDLERS = {
    "sieve": _cmd_sieve,
    "sum": _cmd_sum,
    "explicit": _cmd_explicit,
    "voronoi": _cmd_voronoi,
    "delta": _cmd_delta,
    "ap": _cmd_ap,
    "verify": _cmd_verify,
    "fit": _cmd_fit,
}


def _fail(code: int, message: str) -> int:
    print(f"divlab: error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    try:
        probe, _ = pre.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or EXIT_USAGE)

    parser, subparsers = _build_parser()
    try:
        if probe.config:
            config = _read_config_file(probe.config)
            _seed_config(subparsers, config)
    except FileNotFoundError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except TableFormatError as exc:
        return _fail(EXIT_INPUT, f"config file: {exc}")
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return _HANDLERS[args.command](args)
    except FileNotFoundError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except TableFormatError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except IsADirectoryError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except PermissionError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except ResourceLimitError as exc:
        return _fail(EXIT_RESOURCE, str(exc))
    except AccuracyError as exc:
        return _fail(EXIT_RESOURCE, str(exc))
    except VerificationError as exc:
        return _fail(EXIT_VERIFY, str(exc))
    except (PoleError, ValueError, TypeError) as exc:
        return _fail(EXIT_USAGE, str(exc))
    except OSError as exc:
        return _fail(EXIT_INPUT, str(exc))


if __name__ == "__main__":
    sys.exit(main())
