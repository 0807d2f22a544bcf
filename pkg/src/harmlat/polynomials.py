"""Exact multivariate polynomials over Q and discrete-harmonic families.

Contains the formal continuous and lattice Laplacians, the shifted
binomial basis F_k with

    F_0 = 1,   F_k(x) = binom(x + (k-1)/2, k) = (1/k!) prod_{j<k} (x + (k-1)/2 - j),

the discretization map sending a harmonic polynomial P = sum a_alpha
x^alpha / alpha! on R^d to sum a_alpha F_alpha on Z^d (term-by-term
products of the univariate F's), the planar families S_k / T_k obtained
by discretizing Re (x+iy)^k / k! and Im (x+iy)^k / k!, the coordinate
products u_k = x_1 ... x_k, and reproducible random harmonic polynomials
drawn from the exact kernel of the continuous Laplacian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import balls
from .errors import HarmonicityError, InvalidParameterError, UsageError
from .lattice import LatticeBall, LatticeFunction
from .rationals import format_rational, parse_rational
from .rng import SplitMix64


class MultivariatePolynomial:
    """Polynomial in d variables with exact rational coefficients.

    Terms map exponent tuples to nonzero Fractions; the zero polynomial
    has no terms and degree -1 by convention.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Optional[dict] = None):
        if d < 1:
            raise InvalidParameterError("polynomial dimension must be >= 1")
        self.d = d
        clean = {}
        for alpha, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                alpha = tuple(int(a) for a in alpha)
                if len(alpha) != d or any(a < 0 for a in alpha):
                    raise InvalidParameterError(f"bad exponent tuple {alpha}")
                clean[alpha] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "MultivariatePolynomial":
        return cls(d, {})

    @classmethod
    def constant(cls, d: int, c) -> "MultivariatePolynomial":
        return cls(d, {tuple([0] * d): Fraction(c)})

    @classmethod
    def variable(cls, d: int, axis: int) -> "MultivariatePolynomial":
        alpha = [0] * d
        alpha[axis] = 1
        return cls(d, {tuple(alpha): Fraction(1)})

    @classmethod
    def monomial(cls, d: int, alpha: Sequence[int], c=1) -> "MultivariatePolynomial":
        return cls(d, {tuple(alpha): Fraction(c)})

    # -- basic algebra ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, Fraction(0)) + c
        return MultivariatePolynomial(self.d, terms)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return MultivariatePolynomial(self.d, {a: -c for a, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        terms: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                terms[key] = terms.get(key, Fraction(0)) + ca * cb
        return MultivariatePolynomial(self.d, terms)

    __rmul__ = __mul__

    def scale(self, c) -> "MultivariatePolynomial":
        c = Fraction(c)
        return MultivariatePolynomial(self.d, {a: v * c for a, v in self.terms.items()})

    def _coerce(self, other) -> "MultivariatePolynomial":
        if isinstance(other, MultivariatePolynomial):
            if other.d != self.d:
                raise InvalidParameterError("dimension mismatch")
            return other
        return MultivariatePolynomial.constant(self.d, other)

    def __eq__(self, other):
        if not isinstance(other, MultivariatePolynomial):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, tuple(sorted(self.terms.items()))))

    def canonical_key(self):
        return tuple(sorted(self.terms.items()))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def evaluate(self, point: Sequence) -> Fraction:
        point = [Fraction(v) for v in point]
        if len(point) != self.d:
            raise InvalidParameterError("point dimension mismatch")
        total = Fraction(0)
        for alpha, c in self.terms.items():
            v = c
            for a, x in zip(alpha, point):
                if a:
                    v *= x ** a
            total += v
        return total

    def partial(self, axis: int) -> "MultivariatePolynomial":
        terms: dict = {}
        for alpha, c in self.terms.items():
            a = alpha[axis]
            if a:
                key = list(alpha)
                key[axis] = a - 1
                key = tuple(key)
                terms[key] = terms.get(key, Fraction(0)) + c * a
        return MultivariatePolynomial(self.d, terms)

    def shift(self, axis: int, h) -> "MultivariatePolynomial":
        """Substitute x_axis -> x_axis + h (exact binomial expansion)."""
        h = Fraction(h)
        if h == 0:
            return self
        terms: dict = {}
        for alpha, c in self.terms.items():
            a = alpha[axis]
            for j in range(a + 1):
                key = list(alpha)
                key[axis] = j
                key = tuple(key)
                contrib = c * math.comb(a, j) * h ** (a - j)
                terms[key] = terms.get(key, Fraction(0)) + contrib
        return MultivariatePolynomial(self.d, terms)

    # -- wire format ---------------------------------------------------------

    def to_json(self) -> dict:
        terms = [
            {"alpha": list(a), "coeff": format_rational(c)}
            for a, c in sorted(self.terms.items())
        ]
        return {"d": self.d, "terms": terms}

    @classmethod
    def from_json(cls, obj: dict) -> "MultivariatePolynomial":
        try:
            d = int(obj["d"])
            raw = obj["terms"]
            terms = {}
            for t in raw:
                alpha = tuple(int(a) for a in t["alpha"])
                if alpha in terms:
                    raise UsageError(f"duplicate term {alpha}")
                terms[alpha] = parse_rational(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed polynomial JSON: {exc}") from exc
        return cls(d, terms)


@dataclass(frozen=True)
class DiscreteBasisElement:
    """Univariate basis element F_k: degree exactly k, leading coefficient 1/k!."""

    k: int
    polynomial: MultivariatePolynomial


# -- Laplacians acting formally on polynomials ------------------------------


def continuous_laplacian(P: MultivariatePolynomial) -> MultivariatePolynomial:
    """Formal sum of second partial derivatives."""
    out = MultivariatePolynomial.zero(P.d)
    for axis in range(P.d):
        out = out + P.partial(axis).partial(axis)
    return out


def discrete_laplacian(P: MultivariatePolynomial) -> MultivariatePolynomial:
    """Formal probabilistic lattice Laplacian (1/2d) sum_s P(x+s) - P(x)."""
    d = P.d
    acc = P.scale(-2 * d)
    for axis in range(d):
        acc = acc + P.shift(axis, 1) + P.shift(axis, -1)
    return acc.scale(Fraction(1, 2 * d))


def is_harmonic_poly(P: MultivariatePolynomial) -> bool:
    """Exact global lattice harmonicity as a polynomial identity."""
    return discrete_laplacian(P).is_zero()


# -- the shifted binomial basis ----------------------------------------------


def fk_polynomial(k: int) -> DiscreteBasisElement:
    """F_k as an exact univariate polynomial."""
    if k < 0:
        raise InvalidParameterError("k must be non-negative")
    x = MultivariatePolynomial.variable(1, 0)
    poly = MultivariatePolynomial.constant(1, 1)
    for j in range(k):
        poly = poly * (x + MultivariatePolynomial.constant(1, Fraction(k - 1, 2) - j))
    poly = poly.scale(Fraction(1, math.factorial(k)))
    return DiscreteBasisElement(k, poly)


def _embed_univariate(p: MultivariatePolynomial, d: int, axis: int) -> MultivariatePolynomial:
    terms = {}
    for (a,), c in p.terms.items():
        key = [0] * d
        key[axis] = a
        terms[tuple(key)] = c
    return MultivariatePolynomial(d, terms)


def _fk_product(alpha: Sequence[int]) -> MultivariatePolynomial:
    """F_alpha(x) = prod_l F_{alpha_l}(x_l) in len(alpha) variables."""
    d = len(alpha)
    out = MultivariatePolynomial.constant(d, 1)
    for axis, a in enumerate(alpha):
        out = out * _embed_univariate(fk_polynomial(a).polynomial, d, axis)
    return out


def sk_polynomial(k: int) -> MultivariatePolynomial:
    """S_k(x, y) = sum_{j <= k/2} (-1)^j F_{k-2j}(x) F_{2j}(y); harmonic on Z^2."""
    if k < 0:
        raise InvalidParameterError("k must be non-negative")
    out = MultivariatePolynomial.zero(2)
    for j in range(k // 2 + 1):
        out = out + _fk_product((k - 2 * j, 2 * j)).scale((-1) ** j)
    return out


def tk_polynomial(k: int) -> MultivariatePolynomial:
    """T_k(x, y) = sum_j (-1)^j F_{k-(2j+1)}(x) F_{2j+1}(y); harmonic on Z^2."""
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    out = MultivariatePolynomial.zero(2)
    for j in range((k - 1) // 2 + 1):
        out = out + _fk_product((k - (2 * j + 1), 2 * j + 1)).scale((-1) ** j)
    return out


def monomial_uk(d: int, k: int) -> MultivariatePolynomial:
    """u_k = x_1 x_2 ... x_k on Z^d; harmonic, needs k <= d."""
    balls.check_dimension(d)
    if not 1 <= k <= d:
        raise InvalidParameterError(
            f"need 1 <= k <= d for the coordinate product; got k={k}, d={d}"
        )
    alpha = tuple(1 if i < k else 0 for i in range(d))
    return MultivariatePolynomial.monomial(d, alpha)


# -- discretization of continuous harmonic polynomials ------------------------


def correspondence(P: MultivariatePolynomial) -> MultivariatePolynomial:
    """Map a continuous harmonic polynomial to a lattice-harmonic one.

    Writing P = sum a_alpha x^alpha / alpha!, the image is
    sum a_alpha F_alpha.  Requires the continuous Laplacian of P to
    vanish exactly; raises HarmonicityError carrying the residual
    otherwise.
    """
    residual = continuous_laplacian(P)
    if not residual.is_zero():
        raise HarmonicityError(
            "polynomial is not harmonic on R^d", value=residual
        )
    out = MultivariatePolynomial.zero(P.d)
    for alpha, c in P.terms.items():
        a_alpha = c
        for a in alpha:
            a_alpha *= math.factorial(a)
        out = out + _fk_product(alpha).scale(a_alpha)
    return out


# -- evaluation over balls ------------------------------------------------------


def evaluate_on_ball(P: MultivariatePolynomial, R: int) -> LatticeFunction:
    """Exact evaluation of P at every point of B_R, in ball enumeration order."""
    ball = LatticeBall(P.d, R)
    den = 1
    for c in P.terms.values():
        den = math.lcm(den, c.denominator)
    int_terms = {a: c.numerator * (den // c.denominator) for a, c in P.terms.items()}
    out: list = []
    _eval_rec(int_terms, P.d, R, out)
    return LatticeFunction(ball, out, den)


def _eval_rec(terms: dict, d: int, budget: int, out: list) -> None:
    """Append values over the lex-ordered sub-ball to ``out`` (integer terms)."""
    if d == 1:
        coeffs: dict = {}
        for (a,), c in terms.items():
            coeffs[a] = coeffs.get(a, 0) + c
        deg = max(coeffs) if coeffs else 0
        dense = [coeffs.get(i, 0) for i in range(deg + 1)]
        for v in range(-budget, budget + 1):
            acc = 0
            for c in reversed(dense):
                acc = acc * v + c
            out.append(acc)
        return
    by_exp: dict = {}
    for alpha, c in terms.items():
        by_exp.setdefault(alpha[0], {})[alpha[1:]] = c
    exps = sorted(by_exp)
    for v in range(-budget, budget + 1):
        sub: dict = {}
        for e in exps:
            w = v ** e
            if w == 0 and e > 0:
                continue
            for rest, c in by_exp[e].items():
                sub[rest] = sub.get(rest, 0) + c * w
        _eval_rec(sub, d - 1, budget - abs(v), out)


# -- reproducible random harmonic polynomials ------------------------------------


def harmonic_kernel_basis(d: int, M: int) -> list:
    """Exact basis of continuous harmonic polynomials of degree <= M.

    Computed by Gaussian elimination over Q on the monomial basis: the
    kernel of the continuous Laplacian restricted to degree <= M.
    Deterministic ordering (graded lex on monomials).
    """
    balls.check_dimension(d)
    if M < 0:
        raise InvalidParameterError("degree bound must be non-negative")
    monos = _graded_monomials(d, M)
    col_of = {a: i for i, a in enumerate(monos)}
    images = _graded_monomials(d, max(M - 2, -1)) if M >= 2 else []
    row_of = {a: i for i, a in enumerate(images)}
    # matrix rows: image monomials; columns: source monomials
    rows = [[Fraction(0)] * len(monos) for _ in images]
    for j, alpha in enumerate(monos):
        for axis in range(d):
            a = alpha[axis]
            if a >= 2:
                key = list(alpha)
                key[axis] = a - 2
                rows[row_of[tuple(key)]][j] += a * (a - 1)
    free_cols = _nullspace_free_columns(rows, len(monos))
    basis = []
    for vec in free_cols:
        terms = {monos[i]: v for i, v in enumerate(vec) if v != 0}
        basis.append(MultivariatePolynomial(d, terms))
    return basis


def _graded_monomials(d: int, M: int) -> list:
    out = []
    if M < 0:
        return out
    for total in range(M + 1):
        out.extend(sorted(_compositions(d, total)))
    return out


def _compositions(d: int, total: int):
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(d - 1, total - first):
            yield (first,) + rest


def _nullspace_free_columns(rows: list, ncols: int) -> list:
    """Kernel basis of the row system via exact reduced row echelon form."""
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, len(mat)):
            if mat[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][free]
        basis.append(vec)
    return basis


def random_harmonic(d: int, M: int, seed: int) -> MultivariatePolynomial:
    """Reproducible lattice-harmonic polynomial of degree <= M.

    Draws integer coefficients uniformly from {-9, ..., 9} (SplitMix64
    stream keyed by ``seed``) against the exact harmonic kernel basis of
    degree <= M on R^d, then discretizes through :func:`correspondence`.
    Identical (d, M, seed) always produce the identical polynomial.
    """
    if M < 0:
        raise InvalidParameterError("degree bound must be non-negative")
    basis = harmonic_kernel_basis(d, M)
    rng = SplitMix64(seed)
    P = MultivariatePolynomial.zero(d)
    for b in basis:
        c = rng.next_int(-9, 9)
        if c:
            P = P + b.scale(c)
    return correspondence(P)
