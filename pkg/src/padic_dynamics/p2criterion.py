"""Coefficient criterion for minimality when p = 2.

Maps are taken in the standard form

    phi(z) = (a_0 + a_1 z + ... + a_{d-1} z^{d-1} + z^d) / (b_1 z + ... + b_{d-1} z^{d-1} + z^d),

so that phi(0) = inf and phi(inf) = 1. Writing psi = 1/phi near 0 and
varphi(w) = phi(1/w) near 0, the cube factors as phi^3 = phi o varphi o psi
around 0, and the derivative terms below are those of the three factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import WrongForm
from .padic import PrimeContext, to_residue, valuation
from .ratmap import Mobius, RationalMap, StandardForm, standardize


@dataclass(frozen=True)
class CriterionTerms:
    d: int
    A: Fraction
    B: Fraction
    A1: Fraction
    A2: Fraction
    A3: Fraction
    A_prime: Fraction
    B_prime: Fraction
    A_second: Fraction
    B_second: Fraction
    eta1: Fraction | None
    eta2: Fraction
    eta: Fraction | None
    xi1: Fraction | None
    xi2: Fraction
    xi: Fraction | None


def _check_p2(ctx):
    if ctx is not None:
        p = ctx.p if isinstance(ctx, PrimeContext) else int(ctx)
        if p != 2:
            raise ValueError("the coefficient criterion is specific to p = 2")


def _form(phi) -> StandardForm:
    form = StandardForm.of(phi)
    if form.degree < 2:
        raise WrongForm("the standard form needs degree >= 2")
    return form


def _div(x, y):
    return None if y == 0 else Fraction(x) / y


def compute_terms(phi, ctx=None) -> CriterionTerms:
    """All sums and first/second derivative terms of the standard form, exactly.

    A term whose denominator vanishes (a_0 = 0 or B = 0) is None.
    """
    _check_p2(ctx)
    form = _form(phi)
    a, b, d = form.a, form.b, form.degree
    A = sum(a)
    B = sum(b[1:])
    A1 = sum(a[1::2])
    A2 = sum(a[1::4])
    A3 = sum(a[3::4])
    Ap = sum(i * c for i, c in enumerate(a))
    Bp = sum(i * c for i, c in enumerate(b))
    As = sum(i * (i - 1) * c for i, c in enumerate(a))
    Bs = sum(i * (i - 1) * c for i, c in enumerate(b))
    a0 = a[0]
    eta1 = _div(b[1], a0)
    eta2 = a[d - 1] - b[d - 1]
    eta = _div(Ap * B - Bp * A, B * B)
    xi1 = _div(2 * b[2] * a0 * a0 - 2 * a[1] * b[1] * a0, a0**3)
    xi2 = 2 * (a[d - 2] - b[d - 2]) + 2 * (b[d - 1] ** 2 - a[d - 1] * b[d - 1])
    xi = _div(As * B * B - Bs * A * B + 2 * (A * Bp * Bp - Ap * Bp * B), B**3)
    return CriterionTerms(d, A, B, A1, A2, A3, Ap, Bp, As, Bs, eta1, eta2, eta, xi1, xi2, xi)


def first_derivative_at0_of_cube(phi, ctx=None) -> Fraction:
    """(phi^3)'(0) = eta1 * eta2 * eta."""
    t = compute_terms(phi, ctx)
    if t.eta1 is None or t.eta is None:
        raise WrongForm("a_0 = 0 or B = 0: phi^3 is not regular at 0")
    return t.eta1 * t.eta2 * t.eta


def second_derivative_at0_of_cube(phi, ctx=None) -> Fraction:
    """(phi^3)''(0) = eta*eta2*xi1 + eta*eta1^2*xi2 + xi*eta1^2*eta2^2."""
    t = compute_terms(phi, ctx)
    if t.eta1 is None or t.eta is None:
        raise WrongForm("a_0 = 0 or B = 0: phi^3 is not regular at 0")
    return t.eta * t.eta2 * t.xi1 + t.eta * t.eta1**2 * t.xi2 + t.xi * t.eta1**2 * t.eta2**2


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    value: int | None  # residue of the tested quantity, None if not 2-integral
    modulus: int
    target: int

    def __str__(self):
        if self.modulus == 1:
            return f"{self.name}: {'pass' if self.passed else 'fail'}"
        shown = "n/a" if self.value is None else self.value
        return f"{self.name}: {'pass' if self.passed else 'fail'} (residue {shown} mod {self.modulus}, need {self.target})"


@dataclass(frozen=True)
class Criterion12Verdict:
    conditions: tuple
    A_mod2: int | None
    A_mod4: int | None
    coefficients: tuple
    witness: Mobius | None = None

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def first_failure(self) -> int | None:
        """1-based index of the first failing condition, None when all pass."""
        for i, c in enumerate(self.conditions, 1):
            if not c.passed:
                return i
        return None

    def lines(self) -> list:
        out = [f"{i}. {c}" for i, c in enumerate(self.conditions, 1)]
        out.append(f"A mod 2 = {self.A_mod2}, A mod 4 = {self.A_mod4}")
        out.append(f"criterion: {'satisfied' if self.overall else 'not satisfied'}")
        return out


def _res(x, modulus_exp: int):
    if valuation(x, 2) < 0:
        return None
    return to_residue(x, modulus_exp, 2).value


def _cond(name, x, modulus_exp, target):
    r = _res(x, modulus_exp)
    return Condition(name, r == target, r, 2**modulus_exp, target)


def check_criterion12(phi, ctx=None) -> Criterion12Verdict:
    """Evaluate the eight congruence conditions on the standard-form coefficients.

    ``phi`` may be a standard-form map, a :class:`StandardForm`, a pair
    ``(a_0..a_{d-1}, b_1..b_{d-1})`` or any RationalMap of degree >= 2; a map
    not in standard form is conjugated into it first and the Mobius witness
    is attached to the verdict.
    """
    _check_p2(ctx)
    witness = None
    try:
        form = _form(phi)
    except WrongForm:
        if not isinstance(phi, RationalMap):
            raise
        psi, witness = standardize(phi)
        form = _form(psi)
    a, b, d = form.a, form.b, form.degree
    t = compute_terms(form)
    integral = all(valuation(c, 2) >= 0 for c in a + b)
    eta2 = a[d - 1] - b[d - 1]
    final = a[0] * b[1] * eta2 * (t.A2 - t.A3) * t.B + 2 * (b[2] - a[1] + a[d - 2] - b[d - 2] + b[d - 1] + t.A3)
    conditions = (
        Condition("coefficients in Z_2", integral, None, 1, 0),
        _cond("a_0 = 1 mod 2", a[0], 1, 1),
        _cond("B = 1 mod 2", t.B, 1, 1),
        _cond("A = 2 mod 4", t.A, 2, 2),
        _cond("A_1 = 1 mod 2", t.A1, 1, 1),
        _cond("b_1 = 1 mod 2", b[1], 1, 1),
        _cond("a_{d-1} - b_{d-1} = 1 mod 2", eta2, 1, 1),
        _cond("a_0 b_1 (a_{d-1}-b_{d-1})(A_2-A_3) B + 2(b_2-a_1+a_{d-2}-b_{d-2}+b_{d-1}+A_3) = 1 mod 4", final, 2, 1),
    )
    return Criterion12Verdict(conditions, _res(t.A, 1), _res(t.A, 2), form.low_tuple(), witness)


def criterion12_holds(a, b) -> bool:
    """Fast path for integer tuples a = (a_0..a_{d-1}), b = (b_1..b_{d-1})."""
    d = len(a)
    A = sum(a) + 1
    B = sum(b) + 1
    aa = list(a) + [1]
    bb = [0] + list(b) + [1]
    if a[0] % 2 != 1 or B % 2 != 1 or A % 4 != 2 or sum(aa[1::2]) % 2 != 1 or bb[1] % 2 != 1:
        return False
    eta2 = aa[d - 1] - bb[d - 1]
    if eta2 % 2 != 1:
        return False
    A2, A3 = sum(aa[1::4]), sum(aa[3::4])
    final = aa[0] * bb[1] * eta2 * (A2 - A3) * B + 2 * (bb[2] - aa[1] + aa[d - 2] - bb[d - 2] + bb[d - 1] + A3)
    return final % 4 == 1
