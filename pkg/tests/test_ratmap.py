from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE1, EXAMPLE2, random_good_map
from padic_dynamics.errors import IndeterminatePoint, PoleAtPoint, WrongForm
from padic_dynamics.padic import PrimeContext
from padic_dynamics.projective import ProjectivePoint as P
from padic_dynamics.projective import spherical_distance
from padic_dynamics.ratmap import (
    Chart,
    Mobius,
    RationalMap,
    StandardForm,
    chart_derivative,
    compose,
    conjugate,
    evaluate,
    has_good_reduction,
    has_nondegenerate_reduction,
    is_one_lipschitz_standard_p2,
    lipschitz_certificate,
    reduce_mod_p,
    standardize,
)


def ints(phi):
    return tuple(int(c) for c in phi.num), tuple(int(c) for c in phi.den)


def test_parse_normalizes(ex1, ex2):
    assert ex2.degree == 2 and ints(ex2) == ((3, 2, 0), (2, -3, 1))
    assert ex1.degree == 3 and ints(ex1) == ((-1, -2, -2, 0), (1, 1, -3, 1))
    assert RationalMap.parse("z") == RationalMap.identity()
    assert RationalMap.parse("z") .degree == 1


def test_normalization_cancels_gcd_and_is_idempotent():
    phi = RationalMap.parse("(z^2-1)/(2z-2)")
    assert ints(phi) == ((1, 1), (2, 0))
    assert RationalMap.from_polys(phi.num, phi.den) == phi
    assert RationalMap.parse("(1/2 z+1/3)/(z)") == RationalMap.parse("(3z+2)/(6z)")


def test_reduction_examples(ex2):
    red = reduce_mod_p(ex2, 3)
    assert (red.num, red.den) == ((0, 2), (2, 0, 1))
    assert str(red) == "2z / (z^2+2)"
    assert has_good_reduction(ex2, 3)
    bad = RationalMap.parse("(z^2+2)/z")
    red = reduce_mod_p(bad, 2)
    assert red.degree == 1 and str(red) == "z / 1"
    assert not has_good_reduction(bad, 2)


def test_first_worked_map_reduction_is_degenerate(ex1):
    # modulo 3 the numerator and denominator share z^2+z+2, so the reduction
    # collapses to degree 1; no common zero lies in P^1(F_3) though
    red = reduce_mod_p(ex1, 3)
    assert (red.num, red.den) == ((1,), (2, 1))
    assert not has_good_reduction(ex1, 3)
    assert has_nondegenerate_reduction(ex1, 3)
    assert lipschitz_certificate(ex1, 3) == "nondegenerate-reduction"


def test_evaluate_examples(ex1, ex2):
    assert evaluate(ex2, P.finite(0)) == P.finite(Fraction(3, 2))
    assert evaluate(RationalMap.identity(), P.finite(Fraction(5, 7))) == P.finite(Fraction(5, 7))
    # the numerator has degree 2 < 3, so infinity goes to a_3/b_3 = 0
    assert evaluate(ex1, P.infinity()) == P.finite(0)
    big = evaluate(ex1, P.finite(Fraction(1, 3**40)))  # 3^-40 is 3-adically close to infinity
    assert spherical_distance(big, P.finite(0), 3) >= 40


def test_evaluate_indeterminate_point():
    raw = RationalMap((Fraction(0), Fraction(1)), (Fraction(0), Fraction(1)))
    with pytest.raises(IndeterminatePoint):
        evaluate(raw, P.finite(0))


def test_chart_derivative_examples(ex2):
    I, V = Chart.IDENTITY, Chart.INVERSION
    assert chart_derivative(ex2, P.finite(0), I, I) == Fraction(13, 4)
    phi = RationalMap.from_standard([1, 0, 1, 3], [3, 1, 0])
    assert chart_derivative(phi, P.finite(0), I, V) == Fraction(3, 1)  # b_1 / a_0
    assert chart_derivative(phi, P.infinity(), V, I) == 3 - 0  # a_3 - b_3
    with pytest.raises(PoleAtPoint):
        chart_derivative(ex2, P.finite(1), I, I)


def test_chart_derivative_matches_quotient_rule():
    rng = random.Random(5)
    for _ in range(50):
        phi = random_good_map(rng, 5, rng.randint(2, 4))
        z = Fraction(rng.randint(-50, 50), rng.choice([1, 2, 3, 7]))
        f, g = phi.num, phi.den
        G = sum(c * z**i for i, c in enumerate(g))
        if G == 0:
            continue
        Fv = sum(c * z**i for i, c in enumerate(f))
        dF = sum(i * c * z ** (i - 1) for i, c in enumerate(f) if i)
        dG = sum(i * c * z ** (i - 1) for i, c in enumerate(g) if i)
        expected = (dF * G - Fv * dG) / G**2
        assert chart_derivative(phi, P.finite(z), Chart.IDENTITY, Chart.IDENTITY) == expected


def test_standardize_properties():
    rng = random.Random(11)
    for _ in range(20):
        phi = random_good_map(rng, 3, rng.randint(2, 4))
        psi, g = standardize(phi)
        assert psi(P.finite(0)) == P.infinity()
        assert psi(P.infinity()) == P.finite(1)
        StandardForm.of(psi)
        checked = 0
        while checked < 20:
            x = P.finite(Fraction(rng.randint(-99, 99), rng.randint(1, 30)))
            try:
                lhs, rhs = g(phi(x)), psi(g(x))
            except (IndeterminatePoint, ZeroDivisionError, ValueError):
                continue
            assert lhs == rhs
            checked += 1


def test_standardize_keeps_standard_maps():
    phi = RationalMap.from_standard([1, 0, 1, 3], [3, 1, 0])
    psi, g = standardize(phi)
    assert psi == phi and g.is_identity


def test_conjugate_by_identity_and_inverse():
    phi = RationalMap.parse("(z^2+3)/(2z+1)")
    g = Mobius(Fraction(2), Fraction(1), Fraction(1), Fraction(3))
    assert conjugate(phi, Mobius.identity()) == phi
    assert conjugate(conjugate(phi, g), g.inverse()) == phi


def test_standard_form_and_p2_lipschitz():
    assert is_one_lipschitz_standard_p2(([1, 0, 1, 3], [3, 1, 0]))
    assert is_one_lipschitz_standard_p2(([1, 1, 1, 2], [3, 2, 3]))
    assert not is_one_lipschitz_standard_p2(([0, 0, 1, 3], [3, 1, 0]))
    with pytest.raises(WrongForm):
        StandardForm.of(RationalMap.parse("(z^2+1)/(z^2+1/2)"))
    form = StandardForm.from_lists([1, 0, 1, 3], [3, 1, 0])
    assert form.degree == 4 and form.low_tuple() == (1, 0, 1, 3, 3, 1, 0)


def test_reduction_commutes_with_composition():
    rng = random.Random(3)
    for p in (2, 3, 5):
        for _ in range(10):
            phi = random_good_map(rng, p, 2)
            phi2 = compose(phi, phi)
            assert has_good_reduction(phi2, p)
            red, red2 = reduce_mod_p(phi, p), reduce_mod_p(phi2, p)
            for x in list(range(p)) + [None]:
                assert red2(x) == red(red(x))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]))
def test_good_reduction_maps_are_one_lipschitz(seed, p):
    rng = random.Random(seed)
    phi = random_good_map(rng, p, rng.randint(2, 4))
    for _ in range(20):
        a = P.finite(Fraction(rng.randint(-200, 200), rng.randint(1, 50)))
        b = P.finite(Fraction(rng.randint(-200, 200), rng.randint(1, 50)))
        assert spherical_distance(phi(a), phi(b), p) >= spherical_distance(a, b, p)


def test_worked_maps_round_trip_through_text():
    for text in (EXAMPLE1, EXAMPLE2):
        phi = RationalMap.parse(text)
        assert RationalMap.parse(str(phi)) == phi
    ctx = PrimeContext(3)
    assert str(reduce_mod_p(RationalMap.parse("z"), ctx)) == "z / 1"
