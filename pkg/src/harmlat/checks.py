"""Certified verdicts for the log-convexity inequalities of growth functions.

Every checker compares an exact rational left-hand side against a right
hand side built from certified enclosures (exp, powers, square roots).
Square-root comparisons are decided by comparing squares of rational
bounds; a verdict of ``holds`` or ``fails`` is only issued when the
enclosures separate the two sides, with precision doubling from 64 bits
up to the configured cap (default 256), after which the verdict is
``undecided``.  All comparisons are homogeneous in Q, so verdicts are
invariant under rescaling Q by a positive square.

Whether the growth values fed to a checker really come from a function
harmonic on the large ball the statement needs is the caller's
obligation; the checkers consume only the Q values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .enclosure import (
    RealEnclosure,
    enclose_pow,
    exp_enclosure,
    ln_enclosure,
    pow_enclosure,
    rational_npow,
    sqrt_enclosure,
)
from .errors import HypothesisNotMetError, InvalidParameterError
from .growth import GrowthReport
from .rationals import format_rational

HOLDS = "holds"
FAILS = "fails"
UNDECIDED = "undecided"

DEFAULT_PRECISION = 256


def _ladder(cap: int):
    if cap < 1:
        raise InvalidParameterError("precision cap must be >= 1")
    p = 64
    if cap <= p:
        yield cap
        return
    while p < cap:
        yield p
        p *= 2
    yield cap


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one inequality check with its certified ingredients.

    ``margin`` is a certified bound on (rhs - lhs): non-negative when the
    statement holds, non-positive when it fails, zero when undecided.
    """

    status: str
    lhs: Fraction
    main: RealEnclosure
    error_term: RealEnclosure
    margin: Fraction
    hypothesis_met: Optional[bool] = None
    note: str = ""
    precision_bits: int = 0

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "lhs": format_rational(self.lhs),
            "main": self.main.to_json(),
            "error_term": self.error_term.to_json(),
            "margin": format_rational(self.margin),
            "hypothesis_met": self.hypothesis_met,
            "note": self.note,
            "precision_bits": self.precision_bits,
        }


def _sqrt_form_status(lhs: Fraction, msq: RealEnclosure, err: RealEnclosure) -> str:
    """Decide lhs <= sqrt(msq) + err by squared comparisons of bounds."""
    diff_hi = lhs - err.lo
    if diff_hi <= 0 or diff_hi * diff_hi <= msq.lo:
        return HOLDS
    diff_lo = lhs - err.hi
    if diff_lo > 0 and diff_lo * diff_lo > msq.hi:
        return FAILS
    return UNDECIDED


def _sqrt_form_verdict(
    lhs: Fraction,
    msq_at,
    err_at,
    precision: int,
    hypothesis_met: Optional[bool],
    note: str,
) -> Verdict:
    """Run the precision ladder on a sqrt-form inequality.

    ``msq_at(p)`` returns the enclosure of the squared main term at
    precision p, ``err_at(p)`` the enclosure of the additive error term.
    """
    status = UNDECIDED
    msq = err = None
    prec = 0
    for p in _ladder(precision):
        prec = p
        msq = msq_at(p)
        err = err_at(p)
        status = _sqrt_form_status(lhs, msq, err)
        if status != UNDECIDED:
            break
    main = sqrt_enclosure(msq, prec)
    if status == HOLDS:
        margin = max(Fraction(0), main.lo + err.lo - lhs)
    elif status == FAILS:
        margin = min(Fraction(0), main.hi + err.hi - lhs)
    else:
        margin = Fraction(0)
    return Verdict(status, lhs, main, err, margin, hypothesis_met, note, prec)


def _check_eps(eps, lo=Fraction(0), hi=Fraction(1, 2), hi_strict=False):
    eps = Fraction(eps)
    if eps < lo or eps > hi or (hi_strict and eps == hi):
        bound = f"[{lo}, {hi})" if hi_strict else f"[{lo}, {hi}]"
        raise InvalidParameterError(f"eps must lie in {bound}, got {eps}")
    return eps


# -- the 1:2:4 inequality with error term -----------------------------------------


def three_circles_check(
    report: GrowthReport,
    n: int,
    eps,
    precision: int = DEFAULT_PRECISION,
    explore: bool = False,
) -> Verdict:
    """Check Q(2n) <= sqrt(e^(n^-2eps) Q(n) Q(4n)) + 2^(-n^(1/2-eps)) Q(4n).

    The statement is guaranteed for harmonic u and 16 < n; smaller n
    require ``explore=True`` and are marked as outside the hypotheses.
    """
    eps = _check_eps(eps)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    q_n, q_2n, q_4n = report.Q(n), report.Q(2 * n), report.Q(4 * n)
    hypothesis_met = n > 16
    if not hypothesis_met and not explore:
        raise HypothesisNotMetError(
            f"the guarantee needs n > 16 (got n={n}); pass explore=True to check anyway"
        )
    note = "" if hypothesis_met else "outside guarantee hypotheses (n <= 16): empirical check"

    def msq_at(p):
        return exp_enclosure(rational_npow(n, -2 * eps, p), p) * (q_n * q_4n)

    def err_at(p):
        return enclose_pow(2, n, Fraction(1, 2) - eps, p) * q_4n

    return _sqrt_form_verdict(q_2n, msq_at, err_at, precision, hypothesis_met, note)


def general_P_check(
    report: GrowthReport,
    n: int,
    P,
    eps,
    precision: int = DEFAULT_PRECISION,
    explore: bool = False,
) -> Verdict:
    """Check Q(floor(Pn)) <= sqrt(e^(n^-2eps) Q(n) Q(ceil(P^2 n))) + P^(-n^(1/2-eps)) Q(ceil(P^2 n)).

    Guaranteed for harmonic u when n >= 4 P^2; at P = 2 this is exactly
    :func:`three_circles_check` (with its n > 16 guard).
    """
    P = Fraction(P)
    if P <= 1:
        raise InvalidParameterError("P must be > 1")
    eps = _check_eps(eps)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    mid = _floor(P * n)
    outer = _ceil(P * P * n)
    q_n, q_mid, q_outer = report.Q(n), report.Q(mid), report.Q(outer)
    hypothesis_met = Fraction(n) >= 4 * P * P
    if not hypothesis_met and not explore:
        raise HypothesisNotMetError(
            f"the guarantee needs n >= 4P^2 = {4 * P * P} (got n={n}); "
            "pass explore=True to check anyway"
        )
    note = "" if hypothesis_met else "outside guarantee hypotheses (n < 4P^2): empirical check"

    def msq_at(p):
        return exp_enclosure(rational_npow(n, -2 * eps, p), p) * (q_n * q_outer)

    def err_at(p):
        return enclose_pow(P, n, Fraction(1, 2) - eps, p) * q_outer

    return _sqrt_form_verdict(q_mid, msq_at, err_at, precision, hypothesis_met, note)


# -- the underlying binomial inequality ----------------------------------------------


@dataclass(frozen=True)
class BinomialCheckResult:
    plain: Verdict
    max_form: Verdict


def binomial_inequality_check(
    n: int, k: int, P, eps, precision: int = DEFAULT_PRECISION
) -> BinomialCheckResult:
    """Check the per-degree binomial inequality behind the growth statements.

    Plain form:
        binom(floor(Pn), k) <= sqrt(e^(n^-2eps) binom(n,k) binom(ceil(P^2 n), k))
                               + P^(-n^(1/2-eps)) binom(ceil(P^2 n), k)

    Max form (strictly stronger, what the proof actually establishes):
        LHS <= max(sqrt-term, error-term).
    """
    if n < 0 or k < 0:
        raise InvalidParameterError("n and k must be non-negative")
    P = Fraction(P)
    if P <= 1:
        raise InvalidParameterError("P must be > 1")
    eps = _check_eps(eps)
    mid = _floor(P * n)
    outer = _ceil(P * P * n)
    lhs = Fraction(math.comb(mid, k))
    b_n = Fraction(math.comb(n, k))
    b_outer = Fraction(math.comb(outer, k))

    if n == 0:
        # degenerate: 1 <= 1 (k = 0) or 0 <= 0; constants only help
        def msq_at(p):
            return RealEnclosure.exact(b_n * b_outer)

        def err_at(p):
            return RealEnclosure.exact(0)

    else:

        def msq_at(p):
            return exp_enclosure(rational_npow(n, -2 * eps, p), p) * (b_n * b_outer)

        def err_at(p):
            return enclose_pow(P, n, Fraction(1, 2) - eps, p) * b_outer

    plain = _sqrt_form_verdict(lhs, msq_at, err_at, precision, True, "")

    status = UNDECIDED
    prec = 0
    msq = err = None
    for p in _ladder(precision):
        prec = p
        msq = msq_at(p)
        err = err_at(p)
        main_holds = lhs * lhs <= msq.lo
        err_holds = lhs <= err.lo
        if main_holds or err_holds:
            status = HOLDS
            break
        main_fails = lhs * lhs > msq.hi
        err_fails = lhs > err.hi
        if main_fails and err_fails:
            status = FAILS
            break
    main = sqrt_enclosure(msq, prec)
    if status == HOLDS:
        margin = max(Fraction(0), max(main.lo, err.lo) - lhs)
    elif status == FAILS:
        margin = min(Fraction(0), max(main.hi, err.hi) - lhs)
    else:
        margin = Fraction(0)
    max_form = Verdict(
        status, lhs, main, err, margin, True, "max-form (strengthened)", prec
    )
    return BinomialCheckResult(plain, max_form)


# -- error term omitted under a degree bound --------------------------------------------


def no_error_check(
    report: GrowthReport, M: int, n: int, eps, precision: int = DEFAULT_PRECISION
) -> Verdict:
    """Check Q(2n) <= sqrt(e^(n^-2eps) Q(n) Q(4n)) without the error term.

    Valid for harmonic polynomials of degree M once n^(1-2eps) > M^2 and
    n > 16; outside that region a HypothesisNotMetError is raised (the
    hypothesis is itself decided by certified enclosures).
    """
    eps = _check_eps(eps, hi_strict=True)
    if M < 0:
        raise InvalidParameterError("degree M must be non-negative")
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if n <= 16:
        raise HypothesisNotMetError(f"needs n > 16, got n={n}", {"reason": "n<=16"})
    expo = 1 - 2 * eps
    target = Fraction(M * M)
    met = None
    for p in _ladder(precision):
        enc = rational_npow(n, expo, p)
        if enc.lo > target:
            met = True
            break
        if enc.hi <= target:
            met = False
            break
    if met is not True:
        raise HypothesisNotMetError(
            f"needs n^(1-2eps) > M^2: n={n}, eps={eps}, M={M}",
            {"reason": "degree hypothesis", "n_power": enc.to_json(), "M_squared": str(target)},
        )
    q_n, q_2n, q_4n = report.Q(n), report.Q(2 * n), report.Q(4 * n)

    def msq_at(p):
        return exp_enclosure(rational_npow(n, -2 * eps, p), p) * (q_n * q_4n)

    def err_at(p):
        return RealEnclosure.exact(0)

    return _sqrt_form_verdict(q_2n, msq_at, err_at, precision, True, "no-error form")


# -- perturbed 1:2:4(1+delta) ratios ---------------------------------------------------


def ratio_125_check(
    report: GrowthReport, n: int, delta, precision: int = DEFAULT_PRECISION
) -> Verdict:
    """Check Q(2n) <= sqrt(Q(n) Q(ceil(4(1+delta)n))) + 2^(-2n delta) Q(ceil(4(1+delta)n)).

    Holds for harmonic u at every 0 <= n <= R; requires 0 < delta < 1/4.
    """
    delta = Fraction(delta)
    if not Fraction(0) < delta < Fraction(1, 4):
        raise InvalidParameterError(f"delta must lie in (0, 1/4), got {delta}")
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    outer = _ceil(4 * (1 + delta) * n)
    q_n, q_2n, q_outer = report.Q(n), report.Q(2 * n), report.Q(outer)
    msq = RealEnclosure.exact(q_n * q_outer)

    def msq_at(p):
        return msq

    def err_at(p):
        return pow_enclosure(Fraction(2), -2 * n * delta, p) * q_outer

    return _sqrt_form_verdict(q_2n, msq_at, err_at, precision, True, "")


# -- general aspect ratios ----------------------------------------------------------------


def derive_alpha(p, P, precision: int = DEFAULT_PRECISION) -> RealEnclosure:
    """The exponent balancing P^alpha = p^(1-alpha): alpha = ln p / (ln p + ln P)."""
    p = Fraction(p)
    P = Fraction(P)
    if p <= 1 or P <= 1:
        raise InvalidParameterError("need p > 1 and P > 1 to derive alpha")
    lp = ln_enclosure(p, precision + 16)
    lP = ln_enclosure(P, precision + 16)
    return lp / (lp + lP)


def aspect_ratio_check(
    report: GrowthReport,
    n: int,
    p,
    P,
    eps,
    alpha=None,
    precision: int = DEFAULT_PRECISION,
) -> Verdict:
    """Check the three-radii inequality at inner:mid:outer = 1 : P : pP.

    The statement is

        Q(floor(Pn)) <= e^(c n^-2eps) Q(n)^alpha Q(ceil(pPn))^(1-alpha)
                        + p^(-n^(1/2-eps)) Q(ceil(pPn)),

    with alpha solving P^alpha = p^(1-alpha) (derived via certified
    logarithms when not supplied) and c = 2(alpha P + (1-alpha)/p - 1).
    The guarantee holds for harmonic u and n large depending on (p, P);
    that threshold is not pinned numerically by the statement, so the
    verdict reports hypothesis_met = None.
    """
    p_r = Fraction(p)
    P_r = Fraction(P)
    if not (1 < P_r < p_r * P_r):
        raise InvalidParameterError(
            f"parameter order violated: need 1 < P < pP, got P={P_r}, pP={p_r * P_r}"
        )
    eps = _check_eps(eps)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    mid = _floor(P_r * n)
    outer = _ceil(p_r * P_r * n)
    q_n, q_mid, q_outer = report.Q(n), report.Q(mid), report.Q(outer)

    status = UNDECIDED
    prec = 0
    main = err = None
    for prec_try in _ladder(precision):
        prec = prec_try
        if alpha is None:
            a = derive_alpha(p_r, P_r, prec)
        else:
            a = RealEnclosure.exact(Fraction(alpha))
        one_minus_a = RealEnclosure.exact(1) - a
        c = (a * P_r + one_minus_a * Fraction(1, p_r) - 1) * 2
        if eps == 0:
            exponent = c
        else:
            exponent = c * rational_npow(n, -2 * eps, prec)
        const = exp_enclosure(exponent, prec)
        main = const * _qpow(q_n, a, prec) * _qpow(q_outer, one_minus_a, prec)
        err = enclose_pow(p_r, n, Fraction(1, 2) - eps, prec) * q_outer
        rhs = main + err
        if q_mid <= rhs.lo:
            status = HOLDS
            break
        if q_mid > rhs.hi:
            status = FAILS
            break
    if status == HOLDS:
        margin = max(Fraction(0), main.lo + err.lo - q_mid)
    elif status == FAILS:
        margin = min(Fraction(0), main.hi + err.hi - q_mid)
    else:
        margin = Fraction(0)
    return Verdict(
        status,
        q_mid,
        main,
        err,
        margin,
        None,
        "guarantee threshold n0(p, P) not pinned by the statement",
        prec,
    )


def _qpow(qvalue: Fraction, expo: RealEnclosure, prec: int) -> RealEnclosure:
    """q**expo for a non-negative rational q and an exponent in (0, 1)."""
    if qvalue < 0:
        raise InvalidParameterError("growth values cannot be negative")
    if qvalue == 0:
        return RealEnclosure.exact(0)
    return pow_enclosure(qvalue, expo, prec)


# -- continuous-time version: exact, no enclosures ---------------------------------------


def continuous_three_circles_check(qc, t) -> Verdict:
    """Check Qc(2t)^2 <= Qc(t) Qc(4t) exactly in rational arithmetic.

    ``margin`` is reported on the squared scale: Qc(t)Qc(4t) - Qc(2t)^2.
    """
    t = Fraction(t)
    if t <= 0:
        raise InvalidParameterError("t must be positive")
    lhs = qc.evaluate(2 * t)
    a = qc.evaluate(t)
    b = qc.evaluate(4 * t)
    holds = lhs * lhs <= a * b
    margin = a * b - lhs * lhs
    return Verdict(
        HOLDS if holds else FAILS,
        lhs,
        sqrt_enclosure(a * b, 64),
        RealEnclosure.exact(0),
        margin,
        True,
        "exact squared comparison; margin is on the squared scale",
        0,
    )


# -- the additive (Cauchy-Schwarz) lemma ----------------------------------------------------


def additive_lemma_property(a, b, c, d) -> bool:
    """Exact check of sqrt(ab) + sqrt(cd) <= sqrt((a+c)(b+d)) for a,b,c,d >= 0.

    Decided by squaring twice: the inequality is equivalent to
    4abcd <= (ad + cb)^2, i.e. to 0 <= (ad - cb)^2, hence always true;
    the function evaluates the squared form exactly.
    """
    a, b, c, d = (Fraction(v) for v in (a, b, c, d))
    if min(a, b, c, d) < 0:
        raise InvalidParameterError("all four values must be non-negative")
    # sqrt(ab)+sqrt(cd) <= sqrt((a+c)(b+d))
    #   <=> ab + cd + 2 sqrt(abcd) <= (a+c)(b+d) = ab + ad + cb + cd
    #   <=> 2 sqrt(abcd) <= ad + cb
    #   <=> 4 abcd <= (ad + cb)^2
    return 4 * a * b * c * d <= (a * d + c * b) ** 2


# -- violation certification and counterexample search ---------------------------------------


def convexity_defect_check(
    q_n,
    q_2n,
    q_4n,
    n: int,
    C,
    eps,
    precision: int = DEFAULT_PRECISION,
) -> Verdict:
    """Certify the violation statement Q(2n) > C sqrt(Q(n)Q(4n)) + 2^(-n^(1/2+eps)) Q(4n).

    ``holds`` means the violation inequality is certified true (the log
    convexity bound with constant C is genuinely beaten at n), ``fails``
    means it is certified false.  Used by the counterexample search and
    the conjecture scans; exponent here is 1/2 + eps.
    """
    q_n, q_2n, q_4n = Fraction(q_n), Fraction(q_2n), Fraction(q_4n)
    C = Fraction(C)
    eps = Fraction(eps)
    if C <= 0 or eps <= 0:
        raise InvalidParameterError("need C > 0 and eps > 0")
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    csq = C * C * q_n * q_4n
    status = UNDECIDED
    prec = 0
    err = None
    for p in _ladder(precision):
        prec = p
        err = enclose_pow(2, n, Fraction(1, 2) + eps, p) * q_4n
        diff_lo = q_2n - err.hi
        if diff_lo > 0 and diff_lo * diff_lo > csq:
            status = HOLDS
            break
        diff_hi = q_2n - err.lo
        if diff_hi <= 0 or diff_hi * diff_hi <= csq:
            status = FAILS
            break
    main = sqrt_enclosure(csq, prec)
    if status == HOLDS:
        margin = max(Fraction(0), (q_2n - err.hi) - main.hi)
    elif status == FAILS:
        margin = min(Fraction(0), (q_2n - err.lo) - main.lo)
    else:
        margin = Fraction(0)
    return Verdict(
        status,
        q_2n,
        main,
        err,
        margin,
        True,
        "violation form: holds means the convexity bound is beaten",
        prec,
    )


@dataclass(frozen=True)
class CounterexampleSearchResult:
    """Outcome of the scan for a certified violation near n = k^2/ln k."""

    found: bool
    k: Optional[int] = None
    n: Optional[int] = None
    verdict: Optional[Verdict] = None
    binomials: Optional[tuple] = None  # (binom(n,k), binom(2n,k), binom(4n,k))
    ratio_estimate_certified: bool = False
    square_estimate_certified: bool = False
    k_range: tuple = (0, 0)
    candidates_checked: int = 0
    undecided: tuple = ()

    def to_json(self) -> dict:
        obj = {
            "found": self.found,
            "k": self.k,
            "n": self.n,
            "k_range": list(self.k_range),
            "candidates_checked": self.candidates_checked,
        }
        if self.found:
            obj["verdict"] = self.verdict.to_json()
            obj["binomials"] = [str(b) for b in self.binomials]
            obj["ratio_estimate_certified"] = self.ratio_estimate_certified
            obj["square_estimate_certified"] = self.square_estimate_certified
        if self.undecided:
            obj["undecided"] = [list(u) for u in self.undecided]
        return obj


def _nstar_candidates(k: int, precision: int = 96) -> list:
    """Integer candidates near k^2 / ln k: both roundings and their neighbors."""
    lnk = ln_enclosure(Fraction(k), precision)
    target = RealEnclosure.exact(Fraction(k * k)) / lnk
    lo_f, hi_f = _floor(target.lo), _floor(target.hi)
    if lo_f != hi_f:
        # widen deterministically rather than refining forever
        cands = set(range(lo_f - 1, hi_f + 2))
    else:
        cands = {lo_f - 1, lo_f, lo_f + 1, lo_f + 2}
    return sorted(c for c in cands if c >= 1)


def counterexample_search(
    C,
    eps,
    k_max: int,
    k_min: int = 2,
    n0: int = 0,
    precision: int = DEFAULT_PRECISION,
) -> CounterexampleSearchResult:
    """Scan k in [k_min, k_max] for a certified violation of the C-bound.

    For each k the candidate step counts are the integer roundings of
    k^2 / ln k and their neighbors (k = 1 is skipped: ln 1 = 0).  A hit
    at (k, n) certifies that the coordinate-product harmonic function on
    Z^d (d >= k) violates Q(2n) <= C sqrt(Q(n)Q(4n)) + 2^(-n^(1/2+eps)) Q(4n),
    since its growth values are exact multiples of binom(., k).  Returns
    an explicit not-found result when the range is exhausted.
    """
    C = Fraction(C)
    eps = Fraction(eps)
    if C <= 0 or eps <= 0:
        raise InvalidParameterError("need C > 0 and eps > 0")
    if k_min < 2:
        k_min = 2
    checked = 0
    undecided = []
    for k in range(k_min, k_max + 1):
        for n in _nstar_candidates(k):
            if n <= n0:
                continue
            checked += 1
            b_n = math.comb(n, k)
            b_2n = math.comb(2 * n, k)
            b_4n = math.comb(4 * n, k)
            verdict = convexity_defect_check(b_n, b_2n, b_4n, n, C, eps, precision)
            if verdict.status == HOLDS:
                # certified intermediate estimates at the witness:
                #   binom(2n,k)/binom(4n,k) > 2^(-n^(1/2+eps))
                #   binom(2n,k)^2 > C^2 binom(n,k) binom(4n,k)
                err_unit = enclose_pow(2, n, Fraction(1, 2) + eps, precision)
                ratio_ok = Fraction(b_2n, b_4n) > err_unit.hi if b_4n else False
                square_ok = Fraction(b_2n) ** 2 > C * C * Fraction(b_n) * Fraction(b_4n)
                return CounterexampleSearchResult(
                    True,
                    k,
                    n,
                    verdict,
                    (b_n, b_2n, b_4n),
                    ratio_ok,
                    square_ok,
                    (k_min, k_max),
                    checked,
                    tuple(undecided),
                )
            if verdict.status == UNDECIDED:
                undecided.append((k, n))
    return CounterexampleSearchResult(
        False, k_range=(k_min, k_max), candidates_checked=checked, undecided=tuple(undecided)
    )
