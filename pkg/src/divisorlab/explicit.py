"""Explicit-formula assembly for divisor-type summatory functions.

Each supported target sum is decomposed into four pieces

    constant + main term + nontrivial-zero sum + trivial-zero tail

and the truncated decomposition is evaluated against the exact summatory
oracles.  Three targets are wired in:

    divisor_sum            D(x) = sum_{n<=x} d(n)
    two_omega_sum          S(x) = sum_{n<=x} 2^omega(n)
    two_omega_over_n_sum   T(x) = sum_{n<=x} 2^omega(n)/n

The zero sum is a conditionally structured series with no convergence
proof behind it, so nothing here asserts convergence: partial sums are
recorded as trajectories, always reduced in ascending-ordinate order,
with conjugate pairs combined analytically into twice a real part.

Integer x sits on a jump of the summatory function; following the
arithmetic-average convention the evaluation is the mean of the two
half-step evaluations at x - delta and x + delta.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

from .errors import ResourceLimitError
from .summatory import (
    ORACLE_BOUND_DEFAULT,
    auxiliary_sums,
    divisor_sum_hyperbola,
    squarefree_divisor_sum,
)
from .zeta import ZeroTable, zeta, zeta_constants, zeta_derivative, zeta_negative_special

TARGETS = ("divisor_sum", "two_omega_sum", "two_omega_over_n_sum")

TAIL_VARIANTS = ("residue", "printed")

# The exact zeta(-2n-1) values come from a Bernoulli table that stops at
# B_64, which covers tail indices n = 0..30.  Terms that far out are below
# double-precision noise for every x > 1 anyway.
TAIL_TERMS_MAX = 30


# ---------------------------------------------------------------------------
# target registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _TargetSpec:
    """Coefficients of one explicit formula.

    zero_coefficient scales the nontrivial-zero sum, power_shift moves
    both the zero-term exponent (x^{rho/2 - power_shift}) and the tail
    exponent (x^{-2n-1-power_shift}), and tail_coefficient is the
    magnitude in front of the trivial tail; the sign of the tail is a
    formula-variant flag carried by TruncationConfig.
    """

    name: str
    zero_coefficient: float
    power_shift: int
    tail_coefficient: float


_TARGET_SPECS = {
    "divisor_sum": _TargetSpec("divisor_sum", math.pi ** 2 / 3, 0, math.pi ** 2 / 6),
    "two_omega_sum": _TargetSpec("two_omega_sum", 2.0, 0, 1.0),
    "two_omega_over_n_sum": _TargetSpec("two_omega_over_n_sum", 2.0, 1, 1.0),
}


def _require_target(target: str) -> _TargetSpec:
    try:
        return _TARGET_SPECS[target]
    except KeyError:
        raise ValueError(
            f"unknown target {target!r}; expected one of {TARGETS}") from None


# ---------------------------------------------------------------------------
# configuration and result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationConfig:
    """How far to carry each truncated piece of the decomposition.

    num_zero_pairs counts conjugate zero pairs, tail_terms counts terms of
    the trivial-zero tail, and midpoint_delta is the half-step used to
    average around integer x.  tail_variant selects the denominator of the
    tail terms ("residue" uses the derivative at the actual trivial zero,
    "printed" the at-face-value form, see trivial_zero_tail) and tail_sign
    selects the overall sign of the tail; the defaults are the
    residue-derived form with the minus sign.
    """

    num_zero_pairs: int = 100
    tail_terms: int = 10
    midpoint_delta: float = 0.5
    tail_variant: str = "residue"
    tail_sign: int = -1

    def __post_init__(self) -> None:
        if self.num_zero_pairs < 0:
            raise ValueError("num_zero_pairs must be >= 0")
        if self.tail_terms < 1:
            raise ValueError("tail_terms must be >= 1")
        if not 0.0 < self.midpoint_delta < 1.0:
            raise ValueError("midpoint_delta must lie in (0, 1)")
        if self.tail_variant not in TAIL_VARIANTS:
            raise ValueError(f"tail_variant must be one of {TAIL_VARIANTS}")
        if self.tail_sign not in (-1, 1):
            raise ValueError("tail_sign must be -1 or +1")


@dataclass(frozen=True)
class FormulaEvaluation:
    """One fully decomposed truncated evaluation.

    zero_sum_partials holds (num_pairs, partial_sum) rows starting at
    (0, 0.0); the index is the number of zero pairs consumed and is
    strictly increasing while the values are free to oscillate.  exact is
    the oracle value of the target sum when x is within the oracle bound,
    else None.  averaged records whether integer-x midpoint averaging was
    applied, and zero_table_validated mirrors the validation flag of the
    zero table that produced the partial sums.
    """

    x: float
    target: str
    main_term: float
    constant_term: float
    zero_sum_partials: tuple[tuple[int, float], ...]
    trivial_tail: float
    exact: float | None = None
    averaged: bool = False
    zero_table_validated: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_partial_index", dict(self.zero_sum_partials))

    def zero_sum_at(self, num_pairs: int) -> float:
        try:
            return self._partial_index[num_pairs]
        except KeyError:
            raise ValueError(
                f"no partial sum recorded for {num_pairs} zero pairs") from None

    def total_at(self, num_pairs: int) -> float:
        return (self.constant_term + self.main_term
                + self.zero_sum_at(num_pairs) + self.trivial_tail)

    def residual_at(self, num_pairs: int) -> float:
        if self.exact is None:
            raise ValueError("no exact reference available for this x")
        return self.exact - self.total_at(num_pairs)


@dataclass(frozen=True)
class DeltaSample:
    """One row of error-term data: delta = exact - predicted."""

    x: float
    exact: float
    predicted: float
    delta: float
    delta_over_x14: float
    delta_over_x12: float

    @classmethod
    def build(cls, x: float, exact: float, predicted: float) -> "DeltaSample":
        xf = float(x)
        d = float(exact) - float(predicted)
        return cls(x=xf, exact=float(exact), predicted=float(predicted),
                   delta=d, delta_over_x14=d / xf ** 0.25,
                   delta_over_x12=d / math.sqrt(xf))


@dataclass(frozen=True)
class OmegaScanReport:
    """Extremes and sign changes of delta/x^{1/4} over a scan grid."""

    target: str
    count: int
    sup_scaled: float
    sup_x: float
    inf_scaled: float
    inf_x: float
    sign_changes: int


# ---------------------------------------------------------------------------
# main terms
# ---------------------------------------------------------------------------

def _main_value(target: str, x: float) -> float:
    """Main term without the x > 1 guard; callers pick the domain."""
    cs = zeta_constants()
    g = cs.euler_gamma
    lx = math.log(x)
    if target == "divisor_sum":
        return (lx + 2.0 * g - 1.0) * x
    lead = 6.0 / math.pi ** 2
    if target == "two_omega_sum":
        return lead * (lx + 2.0 * g - 1.0 - 12.0 * cs.zeta_prime_2 / math.pi ** 2) * x
    return lead * (lx * lx / 2.0 + (2.0 * g - 12.0 * cs.zeta_prime_2 / math.pi ** 2) * lx)


def _constant_value(target: str) -> float:
    if target == "divisor_sum":
        return -math.pi ** 2 / 12.0
    if target == "two_omega_sum":
        return -0.5
    return 2.0 * zeta_constants().euler_gamma - 1.0


def main_term(target: str, x) -> tuple[float, float]:
    """Constant and x-dependent main term of the target's formula.

    Returns (constant, main).  Requires x > 1 so the log is positive and
    the formula's derivation region applies.
    """
    _require_target(target)
    xf = float(x)
    if not xf > 1.0:
        raise ValueError("main_term needs x > 1")
    return _constant_value(target), _main_value(target, xf)


def polynomial_residue(k: int, x, *, form: str = "consistent") -> float:
    """Residue polynomial P_k for the k-fold divisor main term.

    P_2(x) = x + 2 gamma - 1 and P_3(x) is the matching quadratic; the
    main term of the k-fold divisor sum up to y is y * P_k(log y).

    The constant of P_3 carries the first Stieltjes constant with a
    minus sign; that is what the residue expansion gives and what the
    exact 3-fold divisor sums confirm (the plus-sign variant leaks a
    linear term of size 6|gamma_1| x).  form="printed" keeps the
    plus-sign variant available for comparison runs; it is not asserted
    anywhere.
    """
    if form not in ("consistent", "printed"):
        raise ValueError("form must be 'consistent' or 'printed'")
    cs = zeta_constants()
    g = cs.euler_gamma
    xf = float(x)
    if k == 2:
        return xf + 2.0 * g - 1.0
    if k == 3:
        g1 = cs.stieltjes_gamma1 if form == "printed" else -cs.stieltjes_gamma1
        return (xf * xf / 2.0 + (3.0 * g - 1.0) * xf
                + 3.0 * g * g - 3.0 * g + 3.0 * g1 + 1.0)
    raise ValueError("polynomial_residue covers k = 2 and k = 3 only")


# ---------------------------------------------------------------------------
# nontrivial-zero sum
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8192)
def _pair_weight(t: float) -> complex:
    """zeta(rho/2)^2 / (rho zeta'(rho)) for rho = 1/2 + i t.

    Cached per ordinate: the weight is x-independent, so a scan over many
    x values prices each zero once.
    """
    rho = complex(0.5, t)
    half = zeta(rho / 2.0)
    return half * half / (rho * zeta_derivative(rho))


def _pair_terms(spec: _TargetSpec, x: float, zeros: ZeroTable,
                num_pairs: int) -> list[float]:
    """Per-pair contributions c * 2 * Re[w_k x^{rho_k/2 - shift}] at one x.

    The conjugate zero contributes the conjugate term, so each pair is
    combined analytically into twice the real part; the result is exactly
    real by construction.
    """
    lx = math.log(x)
    scale = 2.0 * spec.zero_coefficient * x ** (0.25 - spec.power_shift)
    out = []
    for t in zeros.ordinates[:num_pairs]:
        w = _pair_weight(t)
        phase = cmath.exp(complex(0.0, 0.5 * t * lx))
        out.append(scale * (w * phase).real)
    return out


def nontrivial_zero_sum(target: str, x, zeros: ZeroTable,
                        num_pairs: int) -> list[tuple[int, float]]:
    """Partial sums over the first num_pairs zero pairs at x.

    Returns [(1, s_1), ..., (num_pairs, s_N)] with terms accumulated in
    ascending-ordinate order; num_pairs = 0 gives an empty list.  Integer
    x is midpoint-averaged at x - 1/2 and x + 1/2.  An unvalidated zero
    table triggers a RuntimeWarning but still evaluates.
    """
    spec = _require_target(target)
    xf = float(x)
    if not xf > 1.0:
        raise ValueError("nontrivial_zero_sum needs x > 1")
    if num_pairs < 0:
        raise ValueError("num_pairs must be >= 0")
    if num_pairs > len(zeros):
        raise ValueError(
            f"requested {num_pairs} zero pairs but the table holds {len(zeros)}")
    if not zeros.validated:
        warnings.warn(
            "zero table failed residual validation; zero-sum values may be unreliable",
            RuntimeWarning, stacklevel=2)
    if num_pairs == 0:
        return []
    if xf.is_integer():
        lo = _pair_terms(spec, xf - 0.5, zeros, num_pairs)
        hi = _pair_terms(spec, xf + 0.5, zeros, num_pairs)
        terms = [(a + b) / 2.0 for a, b in zip(lo, hi)]
    else:
        terms = _pair_terms(spec, xf, zeros, num_pairs)
    out = []
    running = 0.0
    for k, term in enumerate(terms, start=1):
        running += term
        out.append((k, running))
    return out


def zero_coefficient_partial_sum(zeros: ZeroTable,
                                 num_pairs: int) -> list[tuple[int, float]]:
    """Partial sums of the bare coefficient series zeta(rho/2)^2/(rho zeta'(rho)).

    Conjugate pairs are combined into twice the real part, so every
    increment is real.  Used to inspect the empirical boundedness of the
    coefficient series; no convergence is asserted.
    """
    if num_pairs < 0:
        raise ValueError("num_pairs must be >= 0")
    if num_pairs > len(zeros):
        raise ValueError(
            f"requested {num_pairs} zero pairs but the table holds {len(zeros)}")
    out = []
    running = 0.0
    for k, t in enumerate(zeros.ordinates[:num_pairs], start=1):
        running += 2.0 * _pair_weight(t).real
        out.append((k, running))
    return out


# ---------------------------------------------------------------------------
# trivial-zero tail
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _tail_coefficient(n: int, variant: str) -> float:
    """x-free factor of tail term n.

    The generating integrand has zeta(2s) in the denominator, so the
    residue at s = -(2n+1) picks up the derivative at the trivial zero
    -2(2n+1), giving zeta(-2n-1)^2 / (2 (2n+1) zeta'(-2(2n+1))).  The
    "printed" variant instead reads the denominator at face value as
    (2n+1) zeta'(-2n-1); both are kept so comparison runs can report
    which matches the exact data.
    """
    num = zeta_negative_special("zeta_at_neg_odd", n) ** 2
    if variant == "residue":
        den = 2.0 * (2 * n + 1) * zeta_negative_special(
            "zeta_prime_at_neg_even", 2 * n + 1)
    else:
        den = (2 * n + 1) * zeta_derivative(complex(-(2 * n + 1), 0.0)).real
    return num / den


def trivial_zero_tail(target: str, x, tail_terms: int, *,
                      variant: str = "residue", sign: int = -1) -> float:
    """Signed truncated trivial-zero tail of the target's formula.

    Sums tail_terms terms sign * coeff * sum_n c_n x^{-2n-1-shift} where
    c_n is the residue-derived (default) or printed coefficient.  The
    terms decay geometrically like x^{-2} on top of rapidly shrinking
    coefficients, so small tail_terms already saturates double precision.
    """
    spec = _require_target(target)
    xf = float(x)
    if not xf > 1.0:
        raise ValueError("trivial_zero_tail needs x > 1")
    if tail_terms < 1:
        raise ValueError("tail_terms must be >= 1")
    if tail_terms > TAIL_TERMS_MAX:
        raise ValueError(f"tail_terms capped at {TAIL_TERMS_MAX}")
    if variant not in TAIL_VARIANTS:
        raise ValueError(f"variant must be one of {TAIL_VARIANTS}")
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    total = 0.0
    for n in range(tail_terms):
        total += _tail_coefficient(n, variant) * xf ** (-(2 * n + 1 + spec.power_shift))
    return sign * spec.tail_coefficient * total


# ---------------------------------------------------------------------------
# assembled evaluation
# ---------------------------------------------------------------------------

def _exact_reference(target: str, x: float, averaged: bool) -> float | None:
    """Oracle value of the target sum, or None beyond the oracle bound.

    For averaged (integer) x with half-step delta in (0, 1) the exact side
    is (S(x - delta) + S(x + delta)) / 2 = (S(x - 1) + S(x)) / 2 exactly,
    because the summatory function is constant between integers.
    """
    if x > ORACLE_BOUND_DEFAULT:
        return None

    def at(y: float) -> float:
        if target == "divisor_sum":
            return float(divisor_sum_hyperbola(y).value)
        if target == "two_omega_sum":
            return float(squarefree_divisor_sum(y).value)
        return float(auxiliary_sums("two_omega_over_n", y))

    if averaged:
        return (at(x - 1.0) + at(x)) / 2.0
    return at(x)


def evaluate_explicit(target: str, x, zeros: ZeroTable,
                      cfg: TruncationConfig | None = None) -> FormulaEvaluation:
    """Evaluate the truncated explicit formula and attach the exact oracle.

    Integer x is averaged over x +- cfg.midpoint_delta piece by piece.
    The zero_sum_partials trajectory starts at (0, 0.0) and records one
    row per additional zero pair.
    """
    spec = _require_target(target)
    if cfg is None:
        cfg = TruncationConfig()
    xf = float(x)
    if not xf > 1.0:
        raise ValueError("evaluate_explicit needs x > 1")
    if cfg.num_zero_pairs > len(zeros):
        raise ValueError(
            f"requested {cfg.num_zero_pairs} zero pairs but the table holds {len(zeros)}")
    if not zeros.validated:
        warnings.warn(
            "zero table failed residual validation; zero-sum values may be unreliable",
            RuntimeWarning, stacklevel=2)

    averaged = xf.is_integer()
    points = (xf - cfg.midpoint_delta, xf + cfg.midpoint_delta) if averaged else (xf,)

    mains = [_main_value(target, y) for y in points]
    tails = [trivial_zero_tail(target, y, cfg.tail_terms,
                               variant=cfg.tail_variant, sign=cfg.tail_sign)
             for y in points]
    term_lists = [_pair_terms(spec, y, zeros, cfg.num_zero_pairs) for y in points]

    npts = len(points)
    main = math.fsum(mains) / npts
    tail = math.fsum(tails) / npts

    partials = [(0, 0.0)]
    running = 0.0
    for k in range(cfg.num_zero_pairs):
        running += sum(lst[k] for lst in term_lists) / npts
        partials.append((k + 1, running))

    return FormulaEvaluation(
        x=xf,
        target=target,
        main_term=main,
        constant_term=_constant_value(target),
        zero_sum_partials=tuple(partials),
        trivial_tail=tail,
        exact=_exact_reference(target, xf, averaged),
        averaged=averaged,
        zero_table_validated=zeros.validated,
    )


# ---------------------------------------------------------------------------
# error-term measurement
# ---------------------------------------------------------------------------

def delta_error(target: str, x) -> DeltaSample:
    """delta(x) = exact sum - main term, with x^{1/4} and x^{1/2} scalings.

    The constant term is deliberately excluded: the error term is defined
    against the main term alone.  The exact side is evaluated at floor(x).
    """
    _require_target(target)
    xf = float(x)
    if xf < 1.0:
        raise ValueError("delta_error needs x >= 1")
    if xf > ORACLE_BOUND_DEFAULT:
        raise ResourceLimitError(
            f"x = {xf:g} exceeds the exact-oracle bound {ORACLE_BOUND_DEFAULT:g}")
    exact = _exact_reference(target, xf, False)
    return DeltaSample.build(xf, exact, _main_value(target, xf))


def omega_scan(target: str, x_grid) -> OmegaScanReport:
    """Scan delta/x^{1/4} over a grid: extremes, locations, sign changes.

    Positive sup and negative inf together with sign changes are the
    empirical face of the two-sided oscillation of the error term; the
    report is evidence, not proof.  The grid should be ascending for the
    sign-change count to mean anything.
    """
    _require_target(target)
    xs = [float(v) for v in x_grid]
    if not xs:
        raise ValueError("omega_scan needs a nonempty grid")
    sup_scaled = inf_scaled = None
    sup_x = inf_x = None
    sign_changes = 0
    prev_sign = 0
    for xv in xs:
        sample = delta_error(target, xv)
        v = sample.delta_over_x14
        if sup_scaled is None or v > sup_scaled:
            sup_scaled, sup_x = v, xv
        if inf_scaled is None or v < inf_scaled:
            inf_scaled, inf_x = v, xv
        cur = 1 if sample.delta > 0.0 else (-1 if sample.delta < 0.0 else 0)
        if cur != 0:
            if prev_sign != 0 and cur != prev_sign:
                sign_changes += 1
            prev_sign = cur
    return OmegaScanReport(
        target=target, count=len(xs),
        sup_scaled=sup_scaled, sup_x=sup_x,
        inf_scaled=inf_scaled, inf_x=inf_x,
        sign_changes=sign_changes,
    )
