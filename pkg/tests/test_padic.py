from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_dynamics.errors import NonUnitDenominator, NotInvertible
from padic_dynamics.padic import INF, PrimeContext, Residue, inv_mod, is_prime, to_residue, valuation


def test_valuation_examples():
    assert valuation(Fraction(3, 2), 3) == 1
    assert valuation(0, 3) == INF and math.isinf(valuation(0, 5))
    assert valuation(Fraction(13, 4), 2) == -2


def test_to_residue_examples():
    assert to_residue(Fraction(3, 2), 3, 3).value == 15
    assert to_residue(Fraction(9, 2), 3, 3).value == 18
    assert to_residue(5, 1, 5).value == 0


def test_to_residue_rejects_non_unit_denominator():
    with pytest.raises(NonUnitDenominator):
        to_residue(Fraction(1, 3), 2, 3)


def test_inv_mod_examples():
    assert inv_mod(Residue(3, 3, 2)).value == 14
    assert inv_mod(Residue(3, 3, 20)).value == 23
    assert inv_mod(Residue(5, 2, 1)).value == 1
    with pytest.raises(NotInvertible):
        inv_mod(Residue(3, 3, 6))


def test_residue_is_reduced():
    r = Residue(3, 2, -1)
    assert r.value == 8
    assert Residue(3, 2, 4) + 7 == Residue(3, 2, 2)
    assert (Residue(2, 3, 3) * Residue(2, 3, 3)).value == 1


def test_prime_context_validation():
    assert PrimeContext(7).max_level >= 3
    with pytest.raises(ValueError):
        PrimeContext(9)
    with pytest.raises(ValueError):
        PrimeContext(3, 2)
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p", [2, 3])
def test_inverse_exhaustive(p):
    for n in range(1, 6):
        m = p**n
        if m > 3**5:
            break
        for v in range(m):
            if v % p:
                assert (Residue(p, n, v) * inv_mod(Residue(p, n, v))).value == 1


nonzero = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000).filter(lambda x: x != 0)


@given(nonzero, nonzero, st.sampled_from([2, 3, 5, 7]))
def test_valuation_is_ultrametric(x, y, p):
    assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)
    if x + y != 0:
        vx, vy = valuation(x, p), valuation(y, p)
        assert valuation(x + y, p) >= min(vx, vy)
        if vx != vy:
            assert valuation(x + y, p) == min(vx, vy)


@settings(max_examples=1000)
@given(
    st.sampled_from([2, 3, 5, 7]),
    st.integers(1, 5),
    st.integers(-10**6, 10**6),
    st.integers(1, 10**6),
    st.integers(-10**6, 10**6),
    st.integers(1, 10**6),
)
def test_to_residue_is_ring_homomorphism(p, n, a, b, c, d):
    b = b * p + 1 if b % p == 0 else b
    d = d * p + 1 if d % p == 0 else d
    x, y = Fraction(a, b), Fraction(c, d)
    assert to_residue(x + y, n, p) == to_residue(x, n, p) + to_residue(y, n, p)
    assert to_residue(x * y, n, p) == to_residue(x, n, p) * to_residue(y, n, p)
