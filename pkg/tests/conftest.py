"""Shared exact-harmonic corpus for the test suite.

32 members: the coordinate products on Z^2 and Z^3, the discretized
planar harmonics S_0..S_8 and T_1..T_8, and ten reproducible random
harmonic polynomials (five each on Z^2 and Z^3, degree <= 6).  Each
member carries its full growth report on the ball of radius 80, so
inner radii up to 20 can be checked at outer radius 4n.
"""

from dataclasses import dataclass

import pytest

from harmlat import (
    GrowthReport,
    MultivariatePolynomial,
    evaluate_on_ball,
    growth_report,
    monomial_uk,
    random_harmonic,
    sk_polynomial,
    tk_polynomial,
)

CORPUS_RADIUS = 80


@dataclass(frozen=True)
class CorpusMember:
    name: str
    poly: MultivariatePolynomial
    degree: int
    report: GrowthReport


def corpus_polynomials():
    polys = []
    for d in (2, 3):
        for k in range(1, d + 1):
            polys.append((f"u{k}_d{d}", monomial_uk(d, k)))
    for k in range(0, 9):
        polys.append((f"S{k}", sk_polynomial(k)))
    for k in range(1, 9):
        polys.append((f"T{k}", tk_polynomial(k)))
    for seed in (101, 102, 103, 104, 105):
        polys.append((f"rand_d2_{seed}", random_harmonic(2, 6, seed)))
    for seed in (201, 202, 203, 204, 205):
        polys.append((f"rand_d3_{seed}", random_harmonic(3, 6, seed)))
    return polys


BUILD_SECONDS = {}


@pytest.fixture(scope="session")
def corpus():
    import time

    t0 = time.time()
    members = []
    for name, poly in corpus_polynomials():
        u = evaluate_on_ball(poly, CORPUS_RADIUS)
        members.append(CorpusMember(name, poly, poly.degree, growth_report(u)))
    assert len(members) >= 20
    BUILD_SECONDS["corpus"] = time.time() - t0
    return members


@pytest.fixture(scope="session")
def corpus_build_seconds(corpus):
    return BUILD_SECONDS["corpus"]
