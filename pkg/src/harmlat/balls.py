"""Enumeration and symmetry quotients of l1 balls in Z^d.

Points of the closed ball ``|x|_1 <= R`` are enumerated in lexicographic
order of their coordinate tuples; every dense table in the package is
aligned with that enumeration.  The hyperoctahedral group (coordinate
permutations and sign flips) acts on each ball; walk-count tables and
origin-centered Laplacian kernels are invariant under it, so the heavy
convolutions run on the orbit quotient.  Orbit representatives are the
sorted absolute-value tuples, enumerated by (radius, lex) so that the
quotient of a smaller ball is always a prefix of a larger one.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import InvalidParameterError

MAX_DIMENSION = 8


def check_dimension(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise InvalidParameterError(f"dimension must be a positive integer, got {d!r}")
    if d > MAX_DIMENSION:
        raise InvalidParameterError(
            f"dimension {d} exceeds the hard limit {MAX_DIMENSION}; "
            "l1 ball cardinality grows too fast beyond it"
        )


def ball_point_count(d: int, R: int) -> int:
    """Number of x in Z^d with |x|_1 <= R (closed form, no enumeration)."""
    return sum((1 << i) * math.comb(d, i) * math.comb(R, i) for i in range(0, min(d, R) + 1))


@lru_cache(maxsize=None)
def ball_points(d: int, R: int) -> tuple:
    """All points of the closed l1 ball of radius R, in lex order."""
    check_dimension(d)
    if R < 0:
        raise InvalidParameterError("radius must be non-negative")
    out = []

    def rec(prefix, budget, remaining):
        if remaining == 1:
            for v in range(-budget, budget + 1):
                out.append(prefix + (v,))
            return
        for v in range(-budget, budget + 1):
            rec(prefix + (v,), budget - abs(v), remaining - 1)

    rec((), R, d)
    return tuple(out)


@lru_cache(maxsize=None)
def ball_position(d: int, R: int) -> dict:
    """Map point -> index into ball_points(d, R)."""
    return {p: i for i, p in enumerate(ball_points(d, R))}


def unit_steps(d: int) -> tuple:
    """The 2d generators (+e_1, -e_1, ..., +e_d, -e_d)."""
    steps = []
    for axis in range(d):
        for sign in (1, -1):
            steps.append(tuple(sign if j == axis else 0 for j in range(d)))
    return tuple(steps)


@lru_cache(maxsize=None)
def laplacian_plan(d: int, R: int):
    """Index plan for one Laplacian step from B_R down to B_{R-1}.

    Returns (centers, neighbors): for the i-th point of B_{R-1},
    ``centers[i]`` is its index in B_R and ``neighbors[2d*i:2d*(i+1)]``
    are the indices of its 2d neighbors in B_R.
    """
    if R < 1:
        raise InvalidParameterError("laplacian plan needs R >= 1")
    pos = ball_position(d, R)
    steps = unit_steps(d)
    centers = []
    neighbors = []
    for p in ball_points(d, R - 1):
        centers.append(pos[p])
        for s in steps:
            neighbors.append(pos[tuple(a + b for a, b in zip(p, s))])
    return centers, neighbors


def canonical_rep(point) -> tuple:
    """Orbit representative: coordinates replaced by sorted absolute values."""
    return tuple(sorted(abs(c) for c in point))


def orbit_size(d: int, rep) -> int:
    """Cardinality of the hyperoctahedral orbit of a representative."""
    perms = math.factorial(d)
    mult = 1
    run = 1
    for i in range(1, d):
        if rep[i] == rep[i - 1]:
            run += 1
        else:
            mult *= math.factorial(run)
            run = 1
    mult *= math.factorial(run)
    nonzero = sum(1 for c in rep if c != 0)
    return (perms // mult) << nonzero


def group_order(d: int) -> int:
    return math.factorial(d) << d


class OrbitTable:
    """Orbit quotient of l1 balls in a fixed dimension, grown on demand.

    ``reps`` is ordered by (radius, lex); extending the radius appends
    representatives, so indices are stable and any table computed against
    a smaller radius stays valid.
    """

    def __init__(self, d: int):
        check_dimension(d)
        self.d = d
        self.radius = -1
        self.reps: list = []
        self.index: dict = {}
        self.sizes: list = []
        self.prefix: list = []   # prefix[r] = #reps with radius <= r
        self.nbrs: list = []     # flat, 2d per rep; -1 = outside current ball

    def ensure(self, R: int) -> None:
        if R <= self.radius:
            return
        d = self.d
        for r in range(self.radius + 1, R + 1):
            new = sorted(_sorted_tuples_with_sum(d, r))
            for rep in new:
                self.index[rep] = len(self.reps)
                self.reps.append(rep)
                self.sizes.append(orbit_size(d, rep))
            self.prefix.append(len(self.reps))
        self.radius = R
        self._rebuild_neighbors()

    def _rebuild_neighbors(self) -> None:
        steps = unit_steps(self.d)
        index = self.index
        nbrs = []
        for rep in self.reps:
            for s in steps:
                q = canonical_rep(tuple(a + b for a, b in zip(rep, s)))
                nbrs.append(index.get(q, -1))
        self.nbrs = nbrs

    def count_up_to(self, r: int) -> int:
        return self.prefix[r]


def _sorted_tuples_with_sum(d: int, total: int):
    """Nondecreasing tuples of d non-negative integers with given sum."""
    out = []

    def rec(prefix, lo, remaining, left):
        if remaining == 1:
            if left >= lo:
                out.append(prefix + (left,))
            return
        # last coordinate must be >= ceil(left/remaining) is not required;
        # only nondecreasing order is.
        for v in range(lo, left + 1):
            rec(prefix + (v,), v, remaining - 1, left - v)

    rec((), 0, d, total)
    return out


_orbit_tables: dict = {}


def orbit_table(d: int, R: int) -> OrbitTable:
    """Shared orbit table for dimension d, covering radius at least R."""
    tab = _orbit_tables.get(d)
    if tab is None:
        tab = OrbitTable(d)
        _orbit_tables[d] = tab
    tab.ensure(R)
    return tab


@lru_cache(maxsize=None)
def point_orbit_indices(d: int, R: int) -> tuple:
    """Orbit index of every point of B_R, aligned with ball_points(d, R)."""
    tab = orbit_table(d, R)
    index = tab.index
    return tuple(index[canonical_rep(p)] for p in ball_points(d, R))
