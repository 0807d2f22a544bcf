"""Certified rational enclosures of exp, log, sqrt and rational powers.

Every bound is an exact Fraction and every intermediate rounding is
directed, so for an enclosure [lo, hi] the true real value is guaranteed
to satisfy lo <= value <= hi.  No floating point is used anywhere.

Internals run in fixed point at a working precision of ``wp`` bits
(integers scaled by 2**wp) with floor/ceil rounding on the respective
bound.  exp uses argument halving plus a Taylor tail bound, log uses
the atanh series after normalizing into [1, 2), sqrt uses exact integer
square roots, and general powers reduce to exp(y * log(base)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import InvalidParameterError

Rat = Union[Fraction, int]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _fxp_floor(x: Fraction, wp: int) -> int:
    return (x.numerator << wp) // x.denominator


def _fxp_ceil(x: Fraction, wp: int) -> int:
    return _ceil_div(x.numerator << wp, x.denominator)


def _iroot(x: int, r: int) -> int:
    """floor(x ** (1/r)) for non-negative integers, exact."""
    if x < 0:
        raise InvalidParameterError("negative radicand")
    if r == 1 or x in (0, 1):
        return x
    if r == 2:
        return math.isqrt(x)
    g = 1 << _ceil_div(x.bit_length(), r)
    while True:
        nxt = ((r - 1) * g + x // g ** (r - 1)) // r
        if nxt >= g:
            return g
        g = nxt


def _perfect_root(x: int, r: int) -> Optional[int]:
    g = _iroot(x, r)
    return g if g ** r == x else None


@dataclass(frozen=True)
class RealEnclosure:
    """Closed interval [lo, hi] of exact rationals bracketing a real value."""

    lo: Fraction
    hi: Fraction
    label: str = ""

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidParameterError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, q: Rat, label: str = "") -> "RealEnclosure":
        q = Fraction(q)
        return cls(q, q, label)

    # -- queries ---------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def rel_width(self) -> Fraction:
        lo = min(abs(self.lo), abs(self.hi))
        if lo == 0:
            return self.width if self.width == 0 else Fraction(10) ** 30
        return self.width / lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, q: Rat) -> bool:
        return self.lo <= q <= self.hi

    def encloses(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def surely_le(self, other) -> bool:
        other = _coerce(other)
        return self.hi <= other.lo

    def surely_lt(self, other) -> bool:
        other = _coerce(other)
        return self.hi < other.lo

    def surely_gt(self, other) -> bool:
        other = _coerce(other)
        return self.lo > other.hi

    # -- exact interval arithmetic -----------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return RealEnclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RealEnclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RealEnclosure(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self) -> "RealEnclosure":
        if self.lo <= 0 <= self.hi:
            raise InvalidParameterError("reciprocal of an enclosure containing 0")
        return RealEnclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def powi(self, k: int) -> "RealEnclosure":
        if k < 0:
            return self.powi(-k).reciprocal()
        if k == 0:
            return RealEnclosure.exact(1)
        if k % 2 == 0 and self.lo < 0:
            m = max(abs(self.lo), abs(self.hi))
            lo = Fraction(0) if self.hi >= 0 else min(abs(self.lo), abs(self.hi))
            return RealEnclosure(lo ** k, m ** k)
        return RealEnclosure(self.lo ** k, self.hi ** k)

    def to_json(self) -> dict:
        from .rationals import format_rational

        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}


def _coerce(v) -> RealEnclosure:
    if isinstance(v, RealEnclosure):
        return v
    return RealEnclosure.exact(Fraction(v))


# -- exp ------------------------------------------------------------------


def _exp_series_fx(t_lo: int, t_hi: int, wp: int) -> tuple:
    """Fixed-point bounds of exp(t) for 0 <= t <= 1/2 (t given in fx)."""
    one = 1 << wp
    sum_lo, sum_hi = one, one
    term_lo, term_hi = one, one
    k = 0
    while True:
        k += 1
        term_lo = (term_lo * t_lo) // (one * k)
        term_hi = _ceil_div(term_hi * t_hi, one * k)
        sum_lo += term_lo
        sum_hi += term_hi
        if term_hi <= 1:
            # tail <= term * t/(k+1) * 1/(1-t) <= term * 2 * t; term < 2 ulp here
            sum_hi += _ceil_div(2 * term_hi * t_hi, one) + 1
            return sum_lo, sum_hi


def _exp_fraction(x: Fraction, prec: int) -> RealEnclosure:
    if x == 0:
        return RealEnclosure.exact(1)
    neg = x < 0
    ax = -x if neg else x
    # halve until <= 1/2
    m = max(0, (2 * ax.numerator // ax.denominator).bit_length())
    wp = prec + 2 * m + 32
    one = 1 << wp
    den = ax.denominator << m
    t_lo = (ax.numerator << wp) // den
    t_hi = _ceil_div(ax.numerator << wp, den)
    lo, hi = _exp_series_fx(t_lo, t_hi, wp)
    for _ in range(m):
        lo = (lo * lo) >> wp
        hi = _ceil_div(hi * hi, one)
    enc = RealEnclosure(Fraction(lo, one), Fraction(hi, one))
    if neg:
        enc = enc.reciprocal()
    return enc


def exp_enclosure(x, prec: int) -> RealEnclosure:
    """Certified enclosure of exp(x) for a rational or enclosed argument."""
    if isinstance(x, RealEnclosure):
        return RealEnclosure(_exp_fraction(x.lo, prec).lo, _exp_fraction(x.hi, prec).hi)
    return _exp_fraction(Fraction(x), prec)


# -- log ------------------------------------------------------------------

_ln2_cache: dict = {}


def _atanh_fx(z_lo: int, z_hi: int, wp: int) -> tuple:
    """Fixed-point bounds of atanh(z) for 0 <= z <= 1/3 (z in fx)."""
    one = 1 << wp
    zz_lo = (z_lo * z_lo) >> wp
    zz_hi = _ceil_div(z_hi * z_hi, one)
    pow_lo, pow_hi = z_lo, z_hi
    sum_lo, sum_hi = 0, 0
    j = 0
    while True:
        sum_lo += pow_lo // (2 * j + 1)
        sum_hi += _ceil_div(pow_hi, 2 * j + 1)
        nxt_hi = _ceil_div(pow_hi * zz_hi, one)
        if nxt_hi <= 1:
            # tail < pow * z^2 / (1 - z^2) <= pow * z^2 * 9/8; one extra ulp for safety
            sum_hi += _ceil_div(9 * pow_hi * zz_hi, 8 * one) + 1
            return sum_lo, sum_hi
        pow_lo = (pow_lo * zz_lo) >> wp
        pow_hi = nxt_hi
        j += 1


def _ln2_fx(wp: int) -> tuple:
    cached = _ln2_cache.get(wp)
    if cached is None:
        one = 1 << wp
        z_lo = one // 3
        z_hi = _ceil_div(one, 3)
        a_lo, a_hi = _atanh_fx(z_lo, z_hi, wp)
        cached = (2 * a_lo, 2 * a_hi)
        _ln2_cache[wp] = cached
    return cached


def _ln_fraction(x: Fraction, prec: int) -> RealEnclosure:
    if x <= 0:
        raise InvalidParameterError("log of a non-positive value")
    if x == 1:
        return RealEnclosure.exact(0)
    # normalize x = m * 2^e with m in [1, 2)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** e
    while m < 1:
        m *= 2
        e -= 1
    while m >= 2:
        m /= 2
        e += 1
    wp = prec + max(abs(e), 1).bit_length() + 32
    one = 1 << wp
    z = (m - 1) / (m + 1)
    z_lo, z_hi = _fxp_floor(z, wp), _fxp_ceil(z, wp)
    a_lo, a_hi = _atanh_fx(z_lo, z_hi, wp)
    lnm_lo, lnm_hi = 2 * a_lo, 2 * a_hi
    l2_lo, l2_hi = _ln2_fx(wp)
    if e >= 0:
        lo = lnm_lo + e * l2_lo
        hi = lnm_hi + e * l2_hi
    else:
        lo = lnm_lo + e * l2_hi
        hi = lnm_hi + e * l2_lo
    return RealEnclosure(Fraction(lo, one), Fraction(hi, one))


def ln_enclosure(x, prec: int) -> RealEnclosure:
    """Certified enclosure of the natural logarithm."""
    if isinstance(x, RealEnclosure):
        return RealEnclosure(_ln_fraction(x.lo, prec).lo, _ln_fraction(x.hi, prec).hi)
    return _ln_fraction(Fraction(x), prec)


# -- sqrt ------------------------------------------------------------------


def sqrt_enclosure(x, prec: int) -> RealEnclosure:
    """Certified enclosure of sqrt(x) via exact integer square roots."""
    if isinstance(x, RealEnclosure):
        if x.lo < 0:
            raise InvalidParameterError("sqrt of an enclosure reaching below 0")
        return RealEnclosure(
            _sqrt_fraction(x.lo, prec).lo, _sqrt_fraction(x.hi, prec).hi
        )
    return _sqrt_fraction(Fraction(x), prec)


def _sqrt_fraction(x: Fraction, prec: int) -> RealEnclosure:
    if x < 0:
        raise InvalidParameterError("sqrt of a negative value")
    if x == 0:
        return RealEnclosure.exact(0)
    wp = prec + 8
    # scale so the shifted integer has about 2*wp significant bits
    L = x.numerator.bit_length() - x.denominator.bit_length()
    s = wp - L // 2
    if s >= 0:
        t_num = x.numerator << (2 * s)
        t_lo = t_num // x.denominator
        t_hi = _ceil_div(t_num, x.denominator)
    else:
        t_den = x.denominator << (-2 * s)
        t_lo = x.numerator // t_den
        t_hi = _ceil_div(x.numerator, t_den)
    r_lo = math.isqrt(t_lo)
    r = math.isqrt(t_hi)
    r_hi = r if r * r == t_hi else r + 1
    if s >= 0:
        return RealEnclosure(Fraction(r_lo, 1 << s), Fraction(r_hi, 1 << s))
    return RealEnclosure(Fraction(r_lo << -s), Fraction(r_hi << -s))


# -- powers ------------------------------------------------------------------


def _exact_rational_power(base: Fraction, expo: Fraction) -> Optional[Fraction]:
    """base**expo when it is rational (integer exponent or perfect roots)."""
    if expo == 0:
        return Fraction(1)
    if base == 1:
        return Fraction(1)
    neg = expo < 0
    e = -expo if neg else expo
    if e.denominator == 1:
        out = base ** int(e)
    else:
        rn = _perfect_root(base.numerator, e.denominator)
        rd = _perfect_root(base.denominator, e.denominator)
        if rn is None or rd is None:
            return None
        out = Fraction(rn, rd) ** e.numerator
    return 1 / out if neg else out


def pow_enclosure(base, expo, prec: int) -> RealEnclosure:
    """Certified enclosure of base**expo for base > 0.

    ``expo`` may be a Fraction (exact powers are returned exactly when
    they are rational) or a RealEnclosure; the general case evaluates
    exp(expo * ln(base)) with directed rounding throughout.
    """
    base = Fraction(base)
    if base <= 0:
        raise InvalidParameterError("power base must be positive")
    if isinstance(expo, RealEnclosure) and expo.is_point():
        expo = expo.lo
    if not isinstance(expo, RealEnclosure):
        expo = Fraction(expo)
        exact = _exact_rational_power(base, expo)
        if exact is not None:
            return RealEnclosure.exact(exact)
        expo = RealEnclosure.exact(expo)
    if base == 1:
        return RealEnclosure.exact(1)
    inner = prec + 24
    ln_b = ln_enclosure(base, inner)
    return exp_enclosure(expo * ln_b, prec + 8)


def rational_npow(n: int, e, prec: int) -> RealEnclosure:
    """Certified enclosure of n**e for a positive integer n."""
    if n < 1:
        raise InvalidParameterError("n must be a positive integer")
    return pow_enclosure(Fraction(n), e, prec)


# -- the two public constant builders ------------------------------------------


def enclose_exp(x, precision: int) -> RealEnclosure:
    """Enclosure of exp(x), relative width at most 2**-precision."""
    if precision < 1:
        raise InvalidParameterError("precision must be >= 1")
    enc = exp_enclosure(x, precision)
    return RealEnclosure(enc.lo, enc.hi, label=f"exp({x})")


def enclose_pow(base, n: int, r, precision: int) -> RealEnclosure:
    """Enclosure of base**(-n**r) for base > 1; exact when n**r is rational.

    This is the error-term constant of the discrete log-convexity
    inequalities (base 2 or the inner/outer ratio P), with exponent
    n**r for r like 0.5 - eps.
    """
    if precision < 1:
        raise InvalidParameterError("precision must be >= 1")
    base = Fraction(base)
    if base <= 1:
        raise InvalidParameterError("base must be > 1")
    if n < 1:
        raise InvalidParameterError("n must be a positive integer")
    r = Fraction(r)
    y = _exact_rational_power(Fraction(n), r)
    if y is not None:
        expo: Union[Fraction, RealEnclosure] = -y
    else:
        expo = -rational_npow(n, r, precision + 24)
    enc = pow_enclosure(base, expo, precision)
    return RealEnclosure(enc.lo, enc.hi, label=f"{base}^(-{n}^{r})")
