"""Growth functions of lattice functions along the simple random walk.

Q_u(n) is the mean of u(X_n)^2 over the n-step simple random walk from
the origin, computed exactly as

    Q_u(n) = sum_x u(x)^2 W(n, x) / (2d)^n,

where W(n, x) counts n-step walks ending at x.  The module also builds
the forward-difference triangle of Q, its expansion in the binomial
basis (whose coefficients independently equal the iterated-Laplacian
values L^k(u^2)(0), a cross-check performed on every report), the
finite growth polynomial of the continuous-time walk for polynomial
inputs, and a seeded Monte Carlo estimator used as a statistical
oracle.

Walk counts and all origin-centered kernels are invariant under
coordinate permutations and sign flips, so the heavy convolutions run
on the orbit quotient of the ball (see :mod:`harmlat.balls`); public
tables are materialized from the quotient on demand and cached per
(d, n) incrementally.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import balls
from .errors import (
    HarmError,
    HarmonicityError,
    InvalidParameterError,
    OutOfRangeError,
    ResourceLimitError,
)
from .lattice import LatticeFunction
from .polynomials import MultivariatePolynomial, discrete_laplacian, evaluate_on_ball
from .rationals import format_rational
from .rng import GOLDEN, MIX1, MIX2, stream_state

DEFAULT_MAX_CELLS = 6_000_000


def max_cells() -> int:
    """Resource cap on ball cardinality; HARM_MAX_CELLS overrides."""
    raw = os.environ.get("HARM_MAX_CELLS")
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        v = int(raw)
        if v <= 0:
            raise ValueError
        return v
    except ValueError:
        raise ResourceLimitError(f"HARM_MAX_CELLS must be a positive integer, got {raw!r}")


def _guard_cells(d: int, R: int, limit: Optional[int] = None) -> None:
    limit = max_cells() if limit is None else limit
    cells = balls.ball_point_count(d, R)
    if cells > limit:
        raise ResourceLimitError(
            f"ball B_{R} of Z^{d} has {cells} points, above the cap {limit} "
            "(raise HARM_MAX_CELLS to override)"
        )


# -- walk counts on the orbit quotient ----------------------------------------

_walk_rows: dict = {}


def _orbit_walk_rows(d: int, n: int) -> list:
    """Rows 0..n of walk counts on orbit representatives (cached per d).

    Row m is a list of ints aligned with the first count_up_to(m) orbit
    representatives; entries are W(m, x) for any x in the orbit.
    """
    tab = balls.orbit_table(d, n)
    rows = _walk_rows.setdefault(d, [[1]])
    twod = 2 * d
    while len(rows) <= n:
        m = len(rows)  # building row m from row m-1
        prev = rows[m - 1]
        plen = len(prev)
        cur = []
        nbrs = tab.nbrs
        for i in range(tab.count_up_to(m)):
            acc = 0
            base = i * twod
            for j in nbrs[base : base + twod]:
                if 0 <= j < plen:
                    acc += prev[j]
            cur.append(acc)
        rows.append(cur)
    return rows


@dataclass(frozen=True)
class WalkCountTable:
    """Exact n-step walk counts W(n, x); nonzero entries only."""

    d: int
    n: int
    counts: dict

    def count(self, point) -> int:
        return self.counts.get(tuple(point), 0)

    def total(self) -> int:
        return sum(self.counts.values())


def walk_counts(d: int, n: int, limit: Optional[int] = None) -> WalkCountTable:
    """Materialize the full walk-count table for n steps in Z^d."""
    balls.check_dimension(d)
    if n < 0:
        raise InvalidParameterError("step count must be non-negative")
    _guard_cells(d, n, limit)
    row = _orbit_walk_rows(d, n)[n]
    po = balls.point_orbit_indices(d, n)
    counts = {}
    for p, oi in zip(balls.ball_points(d, n), po):
        w = row[oi] if oi < len(row) else 0
        if w:
            counts[p] = w
    return WalkCountTable(d, n, counts)


# -- exact growth values -------------------------------------------------------


def _orbit_square_sums(u: LatticeFunction) -> list:
    """Sum of squared scaled numerators of u over each orbit of its ball."""
    tab = balls.orbit_table(u.d, u.R)
    po = balls.point_orbit_indices(u.d, u.R)
    sums = [0] * tab.count_up_to(u.R)
    nums, _ = u.scaled_values()
    for oi, v in zip(po, nums):
        sums[oi] += v * v
    return sums


def growth_Q(u: LatticeFunction, n: int) -> Fraction:
    """Exact Q_u(n); requires n <= R so the walk stays inside the ball."""
    if n < 0 or n > u.R:
        raise OutOfRangeError(f"need 0 <= n <= {u.R}, got n={n}")
    sums = _orbit_square_sums(u)
    row = _orbit_walk_rows(u.d, n)[n]
    total = 0
    for w, s in zip(row, sums):
        if w:
            total += w * s
    _, den = u.scaled_values()
    return Fraction(total, den * den * (2 * u.d) ** n)


def _newton_via_laplacian(u: LatticeFunction) -> list:
    """All values L^k(u^2)(0), k = 0..R, via the symmetrized cascade.

    L commutes with the symmetries fixing the origin, so L^k(u^2)(0)
    equals L^k applied to the symmetrized square of u, evaluated at the
    origin; the cascade then runs on orbit representatives.
    """
    d, R = u.d, u.R
    tab = balls.orbit_table(d, R)
    sums = _orbit_square_sums(u)
    _, den = u.scaled_values()
    G = balls.group_order(d)
    twod = 2 * d
    # h[i] = G * (symmetrized u^2)(rep_i) * den^2
    h = [s * (G // sz) for s, sz in zip(sums, tab.sizes[: len(sums)])]
    out = [Fraction(h[0], G * den * den)]
    nbrs = tab.nbrs
    for k in range(1, R + 1):
        m = tab.count_up_to(R - k)
        nxt = []
        for i in range(m):
            acc = -twod * h[i]
            base = i * twod
            for j in nbrs[base : base + twod]:
                acc += h[j]
            nxt.append(acc)
        h = nxt
        out.append(Fraction(h[0], G * den * den * twod ** k))
    return out


def _difference_triangle(values: list) -> list:
    rows = [list(values)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append([b - a for a, b in zip(prev, prev[1:])])
    return rows


@dataclass(frozen=True)
class GrowthReport:
    """Q(0..N), its forward-difference triangle and binomial coefficients.

    ``triangle[k][n]`` is the k-th forward difference at n (k + n <= N);
    ``newton[k] = triangle[k][0]``.  For reports built from a lattice
    function, ``laplace_newton`` holds the independently computed values
    L^k(u^2)(0), verified equal to ``newton`` at construction.
    """

    values: tuple
    triangle: tuple
    newton: tuple
    d: Optional[int] = None
    laplace_newton: Optional[tuple] = None

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def Q(self, n: int) -> Fraction:
        if n < 0 or n >= len(self.values):
            raise OutOfRangeError(
                f"growth value at n={n} not available (report covers 0..{self.n_max})"
            )
        return self.values[n]

    @classmethod
    def from_values(cls, values, d: Optional[int] = None) -> "GrowthReport":
        vals = [Fraction(v) for v in values]
        if not vals:
            raise InvalidParameterError("a growth report needs at least Q(0)")
        tri = _difference_triangle(vals)
        return cls(
            values=tuple(vals),
            triangle=tuple(tuple(r) for r in tri),
            newton=tuple(r[0] for r in tri),
            d=d,
        )

    def to_json(self, include_newton: bool = False) -> dict:
        obj = {
            "kind": "growth_report",
            "d": self.d,
            "n_max": self.n_max,
            "values": [format_rational(v) for v in self.values],
        }
        if include_newton:
            obj["newton"] = [format_rational(v) for v in self.newton]
        return obj


def growth_report(u: LatticeFunction, n_max: Optional[int] = None) -> GrowthReport:
    """Full exact growth report of u up to n_max (default: the ball radius).

    The binomial coefficients are computed twice, from the difference
    triangle and through iterated Laplacians of u^2 at the origin; the
    two routes must agree exactly or the report is refused.
    """
    N = u.R if n_max is None else n_max
    if N < 0 or N > u.R:
        raise OutOfRangeError(f"need 0 <= n_max <= {u.R}, got {n_max}")
    sums = _orbit_square_sums(u)
    _, den = u.scaled_values()
    den2 = den * den
    twod = 2 * u.d
    values = []
    rows = _orbit_walk_rows(u.d, N)
    for n in range(N + 1):
        row = rows[n]
        total = 0
        for w, s in zip(row, sums):
            if w:
                total += w * s
        values.append(Fraction(total, den2 * twod ** n))
    tri = _difference_triangle(values)
    newton = tuple(r[0] for r in tri)
    laplace = tuple(_newton_via_laplacian(u)[: N + 1])
    if newton != laplace:
        raise HarmError(
            "internal inconsistency: difference-triangle coefficients disagree "
            "with iterated-Laplacian values"
        )
    return GrowthReport(
        values=tuple(values),
        triangle=tuple(tuple(r) for r in tri),
        newton=newton,
        d=u.d,
        laplace_newton=laplace,
    )


# -- absolute monotonicity ------------------------------------------------------


@dataclass(frozen=True)
class AbsoluteMonotonicityResult:
    holds: bool
    first_violation: Optional[tuple] = None  # (k, n)
    value: Optional[Fraction] = None


def check_absolute_monotonicity(report: GrowthReport) -> AbsoluteMonotonicityResult:
    """All forward differences non-negative on the triangle k + n <= N."""
    for k, row in enumerate(report.triangle):
        for n, v in enumerate(row):
            if v < 0:
                return AbsoluteMonotonicityResult(False, (k, n), v)
    return AbsoluteMonotonicityResult(True)


# -- continuous-time growth for polynomial inputs --------------------------------


@dataclass(frozen=True)
class ContinuousGrowthPolynomial:
    """Growth polynomial of the continuous-time walk: sum c_k t^k."""

    coeffs: tuple

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        deg = -1
        for k, c in enumerate(self.coeffs):
            if c != 0:
                deg = k
        return deg

    def to_json(self) -> dict:
        return {
            "kind": "continuous_growth",
            "coeffs": [format_rational(c) for c in self.coeffs],
        }


def continuous_growth(
    P: MultivariatePolynomial, radius: Optional[int] = None
) -> ContinuousGrowthPolynomial:
    """Exact growth polynomial of the continuous-time walk for harmonic P.

    The expansion sum_k L^k(P^2)(0) t^k / k! is a finite sum: iterated
    differences of P of order beyond deg P vanish identically.  The
    coefficients are extracted from the ball of radius ``radius``
    (default deg P, the smallest that suffices).
    """
    if not discrete_laplacian(P).is_zero():
        raise HarmonicityError("continuous-time growth requires a lattice-harmonic polynomial")
    M = max(P.degree, 0)
    if radius is None:
        radius = M
    if radius < M:
        raise InvalidParameterError(f"coefficient extraction needs radius >= deg = {M}")
    u = evaluate_on_ball(P, radius)
    a = _newton_via_laplacian(u)[: M + 1]
    coeffs = [ak / math.factorial(k) for k, ak in enumerate(a)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        coeffs = [Fraction(0)]
    return ContinuousGrowthPolynomial(tuple(coeffs))


# -- Monte Carlo oracle ------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: Fraction
    stderr: float
    samples: int
    seed: int
    workers: int


def monte_carlo_Q(
    u: LatticeFunction, n: int, samples: int, seed: int, workers: int = 1024
) -> MonteCarloEstimate:
    """Seeded Monte Carlo estimate of Q_u(n) with its standard error.

    Runs ``workers`` independent SplitMix64 streams (stream i seeded from
    (seed, i); see :mod:`harmlat.rng`), each producing walks of n steps in
    round-robin batches until ``samples`` endpoints are collected.  Steps
    are drawn by rejection, so directions are exactly uniform, and the
    estimate is a deterministic function of (seed, workers, samples).
    The mean is returned exactly; the standard error is the sample
    standard deviation of u(X_n)^2 divided by sqrt(samples).
    """
    if samples < 1:
        raise InvalidParameterError("need at least one sample")
    if n < 0 or n > u.R:
        raise OutOfRangeError(f"need 0 <= n <= {u.R}, got n={n}")
    if workers < 1:
        raise InvalidParameterError("need at least one worker stream")
    d = u.d
    twod = 2 * d
    span = 2 * n + 1
    if span ** d >= 1 << 62:
        raise ResourceLimitError("walk endpoints do not fit the packed 63-bit encoding")
    lanes = workers
    states = np.array(
        [stream_state(seed, i) for i in range(lanes)], dtype=np.uint64
    )
    golden = np.uint64(GOLDEN)
    mix1 = np.uint64(MIX1)
    mix2 = np.uint64(MIX2)
    shift30, shift27, shift31 = np.uint64(30), np.uint64(27), np.uint64(31)
    bound = np.uint64(twod)
    rejected = (1 << 64) % twod  # 0 when 2d divides 2^64: no rejection needed
    reject_limit = np.uint64((1 << 64) - rejected) if rejected else None

    def next_u64(mask=None):
        nonlocal states
        if mask is None:
            states = states + golden
            z = states.copy()
        else:
            states[mask] += golden
            z = states[mask]
        z = (z ^ (z >> shift30)) * mix1
        z = (z ^ (z >> shift27)) * mix2
        return z ^ (z >> shift31)

    endpoint_counts: dict = {}
    remaining = samples
    rows = np.arange(lanes)
    while remaining > 0:
        pos = np.zeros((lanes, d), dtype=np.int64)
        for _ in range(n):
            z = next_u64()
            if reject_limit is not None:
                bad = z >= reject_limit
                while bad.any():
                    z[bad] = next_u64(bad)
                    bad = z >= reject_limit
            direction = (z % bound).astype(np.int64)
            axis = direction >> 1
            sign = 1 - 2 * (direction & 1)
            pos[rows, axis] += sign
        take = min(lanes, remaining)
        base = np.int64(span)
        codes = np.zeros(lanes, dtype=np.int64)
        for i in range(d):
            codes = codes * base + (pos[:, i] + n)
        uniq, cnt = np.unique(codes[:take], return_counts=True)
        for code, c in zip(uniq.tolist(), cnt.tolist()):
            endpoint_counts[code] = endpoint_counts.get(code, 0) + c
        remaining -= take

    s1 = Fraction(0)
    s2 = Fraction(0)
    for code, c in endpoint_counts.items():
        coords = []
        acc = code
        for _ in range(d):
            coords.append(acc % span - n)
            acc //= span
        point = tuple(reversed(coords))
        v = u.value(point) ** 2
        s1 += c * v
        s2 += c * v * v
    mean = s1 / samples
    if samples > 1:
        var = (s2 - s1 * s1 / samples) / (samples - 1)
        stderr = math.sqrt(float(var) / samples) if var > 0 else 0.0
    else:
        stderr = 0.0
    return MonteCarloEstimate(mean, stderr, samples, seed, workers)


# -- convenience: reports from polynomials ----------------------------------------


def polynomial_report(
    P: MultivariatePolynomial, n_max: int, limit: Optional[int] = None
) -> GrowthReport:
    """Evaluate P on B_{n_max} and build its growth report."""
    if n_max < 0:
        raise InvalidParameterError("n_max must be non-negative")
    _guard_cells(P.d, n_max, limit)
    u = evaluate_on_ball(P, n_max)
    return growth_report(u)
