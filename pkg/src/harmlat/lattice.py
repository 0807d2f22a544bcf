"""Exact lattice functions on l1 balls of Z^d and the probabilistic Laplacian.

The Laplacian is normalized as the one-step random-walk generator,

    (L u)(x) = (1/2d) * sum_{s in S} u(x + s) - u(x),

with S the 2d unit steps; this is the normalization under which the
n-step walk distribution satisfies p(n+1, x) - p(n, x) = (L p)(n, x).

A :class:`LatticeFunction` is a dense table of exact rationals over a
ball, stored as integer numerators over one reduced common denominator.
All operations are pure; values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from . import balls
from .errors import (
    DomainTooSmallError,
    HarmonicityError,
    InvalidGeneratorError,
    InvalidParameterError,
    UsageError,
)
from .rationals import format_rational, parse_rational


@dataclass(frozen=True)
class LatticeBall:
    """Closed l1 ball of radius R centered at the origin of Z^d."""

    d: int
    R: int

    def __post_init__(self):
        balls.check_dimension(self.d)
        if not isinstance(self.R, int) or self.R < 0:
            raise InvalidParameterError(f"radius must be a non-negative integer, got {self.R!r}")

    @property
    def point_count(self) -> int:
        return balls.ball_point_count(self.d, self.R)

    @property
    def points(self) -> tuple:
        return balls.ball_points(self.d, self.R)

    @property
    def generators(self) -> tuple:
        return balls.unit_steps(self.d)

    def contains(self, point) -> bool:
        return len(point) == self.d and sum(abs(c) for c in point) <= self.R

    def index_of(self, point) -> int:
        return balls.ball_position(self.d, self.R)[tuple(point)]


class LatticeFunction:
    """Dense exact-rational function on a ball; equality is pointwise."""

    __slots__ = ("ball", "_nums", "_den")

    def __init__(self, ball: LatticeBall, nums: Iterable[int], den: int = 1):
        if den <= 0:
            raise InvalidParameterError("denominator must be positive")
        nums = list(nums)
        if len(nums) != ball.point_count:
            raise InvalidParameterError(
                f"expected {ball.point_count} values on B_{ball.R} of Z^{ball.d}, got {len(nums)}"
            )
        g = den
        for v in nums:
            g = math.gcd(g, v)
            if g == 1:
                break
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        self.ball = ball
        self._nums = tuple(nums)
        self._den = den

    # -- construction -------------------------------------------------

    @classmethod
    def from_values(cls, ball: LatticeBall, values: Mapping | Iterable) -> "LatticeFunction":
        """Build from a point->value mapping or a value sequence in lex order."""
        if isinstance(values, Mapping):
            pts = ball.points
            missing = [p for p in pts if p not in values]
            if missing:
                raise InvalidParameterError(f"missing value at {missing[0]}")
            seq = [Fraction(values[p]) for p in pts]
        else:
            seq = [Fraction(v) for v in values]
        den = math.lcm(*(v.denominator for v in seq)) if seq else 1
        nums = [v.numerator * (den // v.denominator) for v in seq]
        return cls(ball, nums, den)

    @classmethod
    def constant(cls, ball: LatticeBall, c) -> "LatticeFunction":
        c = Fraction(c)
        return cls(ball, [c.numerator] * ball.point_count, c.denominator)

    # -- access --------------------------------------------------------

    @property
    def d(self) -> int:
        return self.ball.d

    @property
    def R(self) -> int:
        return self.ball.R

    def scaled_values(self) -> tuple:
        """(numerator tuple, common denominator); aligned with ball.points."""
        return self._nums, self._den

    def value(self, point) -> Fraction:
        return Fraction(self._nums[self.ball.index_of(point)], self._den)

    def values(self) -> list:
        den = self._den
        return [Fraction(n, den) for n in self._nums]

    def items(self):
        den = self._den
        for p, n in zip(self.ball.points, self._nums):
            yield p, Fraction(n, den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeFunction):
            return NotImplemented
        return (
            self.ball == other.ball
            and self._den == other._den
            and self._nums == other._nums
        )

    def __hash__(self):
        return hash((self.ball, self._den, self._nums))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._nums)

    # -- pointwise algebra (exact) --------------------------------------

    def scale(self, c) -> "LatticeFunction":
        c = Fraction(c)
        return LatticeFunction(
            self.ball, [v * c.numerator for v in self._nums], self._den * c.denominator
        )

    def add(self, other: "LatticeFunction") -> "LatticeFunction":
        if self.ball != other.ball:
            raise InvalidParameterError("functions live on different balls")
        da, db = self._den, other._den
        g = math.gcd(da, db)
        ma, mb = db // g, da // g
        nums = [a * ma + b * mb for a, b in zip(self._nums, other._nums)]
        return LatticeFunction(self.ball, nums, da // g * db)

    def square(self) -> "LatticeFunction":
        return LatticeFunction(self.ball, [v * v for v in self._nums], self._den * self._den)

    def restrict(self, R: int) -> "LatticeFunction":
        """Restriction to the concentric ball of radius R <= self.R."""
        if R > self.R:
            raise DomainTooSmallError(f"cannot restrict B_{self.R} to larger B_{R}")
        if R == self.R:
            return self
        sub = LatticeBall(self.d, R)
        pos = balls.ball_position(self.d, self.R)
        nums = [self._nums[pos[p]] for p in sub.points]
        return LatticeFunction(sub, nums, self._den)

    # -- JSON wire format ------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for p, n in zip(self.ball.points, self._nums):
            entries.append(list(p) + [format_rational(Fraction(n, self._den))])
        return {"d": self.d, "R": self.R, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict, sparse: bool = False) -> "LatticeFunction":
        try:
            d, R = int(obj["d"]), int(obj["R"])
            raw = obj["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed lattice function JSON: {exc}") from exc
        ball = LatticeBall(d, R)
        table = {}
        for entry in raw:
            if len(entry) != d + 1:
                raise UsageError(f"entry {entry!r} does not have {d} coordinates and a value")
            point = tuple(int(c) for c in entry[:d])
            if not ball.contains(point):
                raise UsageError(f"point {point} lies outside B_{R}")
            if point in table:
                raise UsageError(f"duplicate entry for point {point}")
            table[point] = parse_rational(entry[d])
        if len(table) < ball.point_count:
            if not sparse:
                missing = next(p for p in ball.points if p not in table)
                raise UsageError(
                    f"missing value at {missing}; pass --sparse to default omitted points to 0"
                )
            for p in ball.points:
                table.setdefault(p, Fraction(0))
        return cls.from_values(ball, table)


# -- operators ----------------------------------------------------------


def laplacian(u: LatticeFunction) -> LatticeFunction:
    """Probabilistic Laplacian; result lives on the ball one radius smaller."""
    if u.R < 1:
        raise DomainTooSmallError("laplacian needs radius >= 1")
    d = u.d
    centers, neighbors = balls.laplacian_plan(d, u.R)
    nums, den = u.scaled_values()
    twod = 2 * d
    out = []
    pos = 0
    for c in centers:
        acc = -twod * nums[c]
        for _ in range(twod):
            acc += nums[neighbors[pos]]
            pos += 1
        out.append(acc)
    return LatticeFunction(LatticeBall(d, u.R - 1), out, den * twod)


def laplacian_power(u: LatticeFunction, k: int) -> LatticeFunction:
    """k-fold iterate of the Laplacian, shrinking the ball by k."""
    if k < 0:
        raise InvalidParameterError("k must be non-negative")
    if k > u.R:
        raise DomainTooSmallError(f"need k <= R, got k={k} on B_{u.R}")
    for _ in range(k):
        u = laplacian(u)
    return u


def directional_difference(u: LatticeFunction, step) -> LatticeFunction:
    """u_s(x) = u(x + s) - u(x) on the ball one radius smaller."""
    if u.R < 1:
        raise DomainTooSmallError("directional difference needs radius >= 1")
    step = tuple(step)
    if step not in balls.unit_steps(u.d):
        raise InvalidGeneratorError(f"{step} is not a unit generator of Z^{u.d}")
    pos = balls.ball_position(u.d, u.R)
    nums, den = u.scaled_values()
    out = []
    for p in balls.ball_points(u.d, u.R - 1):
        q = tuple(a + b for a, b in zip(p, step))
        out.append(nums[pos[q]] - nums[pos[p]])
    return LatticeFunction(LatticeBall(u.d, u.R - 1), out, den)


def is_harmonic(u: LatticeFunction) -> bool:
    """Exact test: Laplacian identically zero on the interior ball."""
    if u.R < 1:
        raise DomainTooSmallError("harmonicity is undecidable on a radius-0 ball")
    return laplacian(u).is_zero()


def sos_laplacian_power(u: LatticeFunction, k: int) -> Fraction:
    """Value of L^k(u^2) at the origin via the sum-of-squares identity.

    For harmonic u,

        L^k(u^2) = (1/(2d)^k) * sum over all k-tuples (s_1..s_k) of
                   generators of (u_{s_1...s_k})^2,

    where u_s(x) = u(x+s) - u(x).  Iterated differences commute, so the
    sum is taken over generator multisets weighted by multinomial counts,
    and each difference at the origin expands by inclusion-exclusion over
    sub-multisets.
    """
    if k < 0:
        raise InvalidParameterError("k must be non-negative")
    if k > u.R:
        raise DomainTooSmallError(f"need k <= R, got k={k} on B_{u.R}")
    if u.R >= 1 and not is_harmonic(u):
        raise HarmonicityError("sum-of-squares identity requires a harmonic function")
    d = u.d
    steps = balls.unit_steps(d)
    pos = balls.ball_position(d, u.R)
    nums, den = u.scaled_values()

    total = 0
    for multiset in combinations_with_replacement(range(2 * d), k):
        counts = [0] * (2 * d)
        for s in multiset:
            counts[s] += 1
        weight = math.factorial(k)
        for c in counts:
            weight //= math.factorial(c)
        # inclusion-exclusion over sub-multisets: prod_s (shift_s - 1)^{m_s} at 0
        value = 0
        for coeff, point in _submultisets(counts, steps, d):
            value += coeff * nums[pos[point]]
        total += weight * value * value
    return Fraction(total, den * den * (2 * d) ** k)


def _submultisets(counts, steps, d):
    """Yield (signed binomial coefficient, shift point) over sub-multisets."""
    twod = len(counts)

    def rec(axis, coeff, point):
        if axis == twod:
            yield coeff, tuple(point)
            return
        m = counts[axis]
        s = steps[axis]
        for j in range(m + 1):
            c = coeff * math.comb(m, j) * ((-1) ** (m - j))
            moved = [a + j * b for a, b in zip(point, s)]
            yield from rec(axis + 1, c, moved)

    yield from rec(0, 1, [0] * d)
