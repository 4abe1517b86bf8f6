from __future__ import annotations

import random

import pytest

from padic_dynamics.padic import PrimeContext
from padic_dynamics.ratmap import RationalMap, has_good_reduction

# two worked p = 3 maps used throughout
EXAMPLE1 = "-(2z^2+2z+1)/(z^3-3z^2+z+1)"
EXAMPLE2 = "(2z+3)/((z-1)(z-2))"


@pytest.fixture
def ctx3():
    return PrimeContext(3, 4)


@pytest.fixture
def ex1():
    return RationalMap.parse(EXAMPLE1)


@pytest.fixture
def ex2():
    return RationalMap.parse(EXAMPLE2)


def random_good_map(rng: random.Random, p: int, degree: int, spread: int | None = None) -> RationalMap:
    """A random map of exact degree ``degree`` with good reduction modulo p."""
    spread = spread or p * p
    while True:
        num = [rng.randint(-spread, spread) for _ in range(degree + 1)]
        den = [rng.randint(-spread, spread) for _ in range(degree + 1)]
        if num[-1] % p == 0 and den[-1] % p == 0:
            continue
        try:
            phi = RationalMap.from_polys(num, den)
        except Exception:
            continue
        if phi.degree == degree and has_good_reduction(phi, p):
            return phi


def random_good_maps(seed: int, count: int, primes=(2, 3, 5), degrees=(2, 3, 4)):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        p = primes[i % len(primes)]
        d = degrees[(i // len(primes)) % len(degrees)]
        out.append((p, random_good_map(rng, p, d)))
    return out


def _level1_is_single_cycle(num, den, p):
    d = len(num) - 1

    def step(pt):
        x, y = pt
        F = sum(c * x**i * y ** (d - i) for i, c in enumerate(num)) % p
        G = sum(c * x**i * y ** (d - i) for i, c in enumerate(den)) % p
        if G:
            return (F * pow(G, -1, p) % p, 1)
        return (1, 0) if F else None

    start = (0, 1)
    pt, steps = start, 0
    while True:
        pt = step(pt)
        steps += 1
        if pt is None or steps > p + 1:
            return False
        if pt == start:
            return steps == p + 1


def random_transitive_good_map(rng: random.Random, p: int, degree: int) -> RationalMap:
    """A random good-reduction map whose reduction cycles through all of P^1(F_p).

    Degree 2 admits no such map for odd p, so give up after many tries.
    """
    for _ in range(200000):
        num = [rng.randrange(p) for _ in range(degree + 1)]
        den = [rng.randrange(p) for _ in range(degree + 1)]
        if (num[-1] == 0 and den[-1] == 0) or not _level1_is_single_cycle(num, den, p):
            continue
        num = [c + p * rng.randint(-p, p) for c in num]
        den = [c + p * rng.randint(-p, p) for c in den]
        try:
            phi = RationalMap.from_polys(num, den)
        except Exception:
            continue
        if phi.degree == degree and has_good_reduction(phi, p):
            return phi
    raise ValueError(f"no transitive map found for p={p}, degree={degree}")
