"""Evidence pipeline for the sharp-error-term conjecture.

Produces exact growth tables Q(n), Q(2n), Q(4n) for the discretized
planar harmonics (and related families) on Z^2 and scans the residual

    (Q(2n) - C sqrt(Q(n) Q(4n))) / Q(4n)

against the conjectured error bound 2^(-n^(1/2+eps)).  Violations are
certified through the same verdict engine as the counterexample search.
Absence of violations in a finite window says nothing against the
conjecture, which only asserts the existence of some n beyond every n0
for large enough k; the scan summary states this explicitly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .checks import DEFAULT_PRECISION, FAILS, HOLDS, convexity_defect_check
from .enclosure import RealEnclosure, enclose_pow, sqrt_enclosure
from .errors import InvalidParameterError, OutOfRangeError
from .growth import GrowthReport, polynomial_report
from .polynomials import (
    MultivariatePolynomial,
    monomial_uk,
    sk_polynomial,
    tk_polynomial,
)
from .rationals import format_rational

SCAN_CSV_HEADER = (
    "n,Q_n,Q_2n,Q_4n,ratio_num,ratio_den,"
    "residual_lo,residual_hi,bound_lo,bound_hi,violation"
)


def q_table(
    family: str,
    k: int,
    n_max: int,
    d: Optional[int] = None,
    poly: Optional[MultivariatePolynomial] = None,
    limit: Optional[int] = None,
) -> GrowthReport:
    """Exact growth report of a named harmonic family member up to n_max.

    Families: "S" and "T" (discretized planar harmonics, fixed d = 2),
    "u" (coordinate product on Z^d, default d = k), "custom" (explicit
    polynomial).  Ball size is checked against the resource cap.
    """
    if family in ("S", "T") and d not in (None, 2):
        raise InvalidParameterError(f"family {family} lives on Z^2")
    if family == "S":
        P = sk_polynomial(k)
    elif family == "T":
        P = tk_polynomial(k)
    elif family == "u":
        P = monomial_uk(k if d is None else d, k)
    elif family == "custom":
        if poly is None:
            raise InvalidParameterError("custom family needs an explicit polynomial")
        P = poly
    else:
        raise InvalidParameterError(f"unknown family {family!r}")
    return polynomial_report(P, n_max, limit)


@dataclass(frozen=True)
class ScanRow:
    """One scanned step count with its exact and enclosed quantities."""

    n: int
    q_n: Fraction
    q_2n: Fraction
    q_4n: Fraction
    ratio: Optional[Fraction]  # Q(2n)^2 / (Q(n) Q(4n)); None when flagged
    residual: RealEnclosure    # (Q(2n) - C sqrt(Q(n)Q(4n))) / Q(4n)
    bound: RealEnclosure       # 2^(-n^(1/2+eps))
    violation: Optional[bool]  # None = undecided at the precision cap
    zero_flagged: bool

    def csv_fields(self) -> list:
        ratio_num = str(self.ratio.numerator) if self.ratio is not None else ""
        ratio_den = str(self.ratio.denominator) if self.ratio is not None else ""
        if self.violation is None:
            v = "?"
        else:
            v = "1" if self.violation else "0"
        return [
            str(self.n),
            format_rational(self.q_n),
            format_rational(self.q_2n),
            format_rational(self.q_4n),
            ratio_num,
            ratio_den,
            format_rational(self.residual.lo),
            format_rational(self.residual.hi),
            format_rational(self.bound.lo),
            format_rational(self.bound.hi),
            v,
        ]


@dataclass(frozen=True)
class ScanResult:
    k: int
    C: Fraction
    eps: Fraction
    family: str
    rows: tuple
    summary: dict

    def to_csv(self) -> str:
        lines = [SCAN_CSV_HEADER]
        for row in self.rows:
            lines.append(",".join(row.csv_fields()))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "kind": "conjecture_scan",
            "k": self.k,
            "C": format_rational(self.C),
            "eps": format_rational(self.eps),
            "family": self.family,
            "rows": [
                dict(zip(SCAN_CSV_HEADER.split(","), row.csv_fields())) for row in self.rows
            ],
            "summary": self.summary,
        }


def _scan_row(report, n, C, eps, precision) -> ScanRow:
    q_n, q_2n, q_4n = report.Q(n), report.Q(2 * n), report.Q(4 * n)
    zero = q_n == 0 or q_4n == 0
    ratio = None if zero else q_2n * q_2n / (q_n * q_4n)
    bound = enclose_pow(2, n, Fraction(1, 2) + eps, precision)
    if q_4n == 0:
        residual = RealEnclosure.exact(0)
        violation: Optional[bool] = False
    else:
        root = sqrt_enclosure(q_n * q_4n, precision)
        residual = (RealEnclosure.exact(q_2n) - C * root) / RealEnclosure.exact(q_4n)
        verdict = convexity_defect_check(q_n, q_2n, q_4n, n, C, eps, precision)
        violation = (
            True if verdict.status == HOLDS else False if verdict.status == FAILS else None
        )
    return ScanRow(n, q_n, q_2n, q_4n, ratio, residual, bound, violation, zero)


def default_window(k: int) -> tuple:
    """Scan window centered at k^2 / ln k with radius k."""
    if k < 2:
        raise InvalidParameterError(
            "no default window below k = 2 (ln k vanishes); pass the range explicitly"
        )
    from .enclosure import ln_enclosure

    target = RealEnclosure.exact(Fraction(k * k)) / ln_enclosure(Fraction(k), 96)
    center = (target.lo.numerator // target.lo.denominator + target.hi.numerator // target.hi.denominator) // 2
    return max(1, center - k), center + k


def conjecture_scan(
    k: int,
    C,
    eps,
    n_from: Optional[int] = None,
    n_to: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
    family: str = "S",
    report: Optional[GrowthReport] = None,
    d: Optional[int] = None,
    threads: int = 1,
    limit: Optional[int] = None,
) -> ScanResult:
    """Scan n in [n_from, n_to] for violations of the C-bound on a family member.

    An omitted range defaults to the window of radius k centered at
    k^2 / ln k.  Empty ranges produce an empty row list with a "no data"
    summary.  Rows are ordered by n regardless of thread count.
    """
    C = Fraction(C)
    eps = Fraction(eps)
    if C <= 0 or eps <= 0:
        raise InvalidParameterError("need C > 0 and eps > 0")
    if n_from is None or n_to is None:
        lo, hi = default_window(k)
        n_from = lo if n_from is None else n_from
        n_to = hi if n_to is None else n_to
    ns = [n for n in range(max(1, n_from), n_to + 1)]
    if report is None:
        if ns:
            report = q_table(family, k, 4 * max(ns), d=d, limit=limit)
    elif ns and report.n_max < 4 * max(ns):
        raise OutOfRangeError(
            f"report covers 0..{report.n_max} but the scan needs Q({4 * max(ns)})"
        )
    if not ns:
        return ScanResult(
            k, C, eps, family, (), {"rows": 0, "violations": 0, "note": "no data"}
        )
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda n: _scan_row(report, n, C, eps, precision), ns))
    else:
        rows = [_scan_row(report, n, C, eps, precision) for n in ns]
    violations = sum(1 for r in rows if r.violation)
    undecided = sum(1 for r in rows if r.violation is None)
    max_residual = max((r.residual.hi for r in rows), default=Fraction(0))
    summary = {
        "rows": len(rows),
        "violations": violations,
        "undecided": undecided,
        "max_residual_hi": format_rational(max_residual),
        "note": (
            "violations certified in this window"
            if violations
            else "no violation in this finite window; the conjecture asserts existence of "
            "some n beyond every n0 for k large, so this is not evidence against it"
        ),
    }
    return ScanResult(k, C, eps, family, tuple(rows), summary)
