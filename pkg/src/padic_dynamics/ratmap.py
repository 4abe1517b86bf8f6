"""Rational maps over Q viewed as maps of P^1(Q_p).

A :class:`RationalMap` stores numerator and denominator coefficient vectors of
common length d + 1, lowest degree first, after cancelling the polynomial gcd
over Q and scaling to coprime integers. Coprime integer coefficients are
p-integral with at least one unit for every prime p, so a single stored form
serves every p.

Iterates are never expanded symbolically. Orbits of long cycles are followed
in P^1(Z/p^M Z) with explicit precision bookkeeping (:class:`ApproxPoint`),
which is exact for everything that depends only on residues.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .errors import (
    IndeterminatePoint,
    NoValidBasePoint,
    NotNormalizable,
    PoleAtPoint,
    PrecisionLoss,
    WrongForm,
    ZeroDenominator,
)
from .padic import INF, PrimeContext, as_fraction, int_valuation, to_residue, valuation
from .parser import parse_coefficient_json, parse_rational_function
from .projective import ProjectiveBall, ProjectivePoint, ball_of


class Chart(enum.Enum):
    IDENTITY = "identity"
    INVERSION = "inversion"


def chart_for(point: ProjectivePoint, p: int) -> Chart:
    """Identity on the finite side (|z|_p <= 1), inversion w = 1/z around infinity."""
    return Chart.INVERSION if ball_of(point, 1, p).infinite else Chart.IDENTITY


def local_coordinate(point: ProjectivePoint, chart: Chart) -> Fraction:
    if chart is Chart.IDENTITY:
        if point.is_infinity:
            raise PoleAtPoint("infinity has no identity-chart coordinate")
        return point.x
    if point.is_infinity:
        return Fraction(0)
    if point.x == 0:
        raise PoleAtPoint("0 has no inversion-chart coordinate")
    return 1 / point.x


def from_local(u, chart: Chart) -> ProjectivePoint:
    u = as_fraction(u)
    if chart is Chart.IDENTITY:
        return ProjectivePoint.finite(u)
    return ProjectivePoint.infinity() if u == 0 else ProjectivePoint.finite(1 / u)


@dataclass(frozen=True)
class RationalMap:
    num: tuple
    den: tuple

    def __post_init__(self):
        num = [as_fraction(c) for c in self.num]
        den = [as_fraction(c) for c in self.den]
        if len(num) != len(den):
            raise ValueError("use RationalMap.from_polys for unnormalized input")
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_polys(cls, num, den) -> "RationalMap":
        """Cancel the gcd over Q and normalize to coprime integer coefficients."""
        num = poly.trim([as_fraction(c) for c in num])
        den = poly.trim([as_fraction(c) for c in den])
        if not den:
            raise ZeroDenominator("denominator polynomial is identically zero")
        if not num:
            num_r, den_r = [], [Fraction(1)]
        else:
            g = poly.gcd_q(num, den)
            num_r, _ = poly.divmod_q(num, g)
            den_r, _ = poly.divmod_q(den, g)
        d = max(poly.degree(num_r), poly.degree(den_r), 0)
        num_i, den_i = poly.primitive_integer_pair(num_r, den_r)
        num_i = num_i + [0] * (d + 1 - len(num_i))
        den_i = den_i + [0] * (d + 1 - len(den_i))
        return cls(tuple(Fraction(c) for c in num_i), tuple(Fraction(c) for c in den_i))

    @classmethod
    def parse(cls, text: str) -> "RationalMap":
        text = text.strip()
        if text.startswith("{"):
            num, den = parse_coefficient_json(text)
        else:
            num, den = parse_rational_function(text)
        return cls.from_polys(num, den)

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls.from_polys([0, 1], [1])

    @classmethod
    def from_standard(cls, a, b) -> "RationalMap":
        """Map with numerator a_0 + ... + a_{d-1} z^{d-1} + z^d and denominator
        b_1 z + ... + b_{d-1} z^{d-1} + z^d."""
        form = StandardForm.from_lists(a, b)
        return cls.from_polys(form.a, form.b)

    # -- basic data ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.num) - 1

    @property
    def num_int(self) -> tuple:
        return tuple(int(c) for c in self.num)

    @property
    def den_int(self) -> tuple:
        return tuple(int(c) for c in self.den)

    def __str__(self):
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"

    # -- evaluation ---------------------------------------------------------

    def homogeneous(self, x, y):
        d = self.degree
        F = sum(c * x**i * y ** (d - i) for i, c in enumerate(self.num))
        G = sum(c * x**i * y ** (d - i) for i, c in enumerate(self.den))
        return F, G

    def __call__(self, point) -> ProjectivePoint:
        return evaluate(self, ProjectivePoint.from_value(point))


def format_poly(coeffs, var: str = "z") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}{mono}" if Fraction(mag).denominator == 1 else f"({mag}){mono}"
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("-" if c < 0 else "+") + body)
    return "".join(terms) if terms else "0"


def parse_map(text: str) -> RationalMap:
    return RationalMap.parse(text)


def evaluate(phi: RationalMap, P: ProjectivePoint) -> ProjectivePoint:
    F, G = phi.homogeneous(P.x, P.y)
    if F == 0 and G == 0:
        raise IndeterminatePoint(f"both homogeneous forms vanish at {P}")
    return ProjectivePoint(F, G)


def compose(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """outer o inner, expanded through homogeneous forms."""
    f_in, g_in = list(inner.num), list(inner.den)
    d_out = outer.degree

    def form(coeffs):
        out = []
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            term = poly.mul(poly.power(f_in, i), poly.power(g_in, d_out - i))
            out = poly.add(out, poly.scale(term, c))
        return out

    return RationalMap.from_polys(form(outer.num), form(outer.den))


# -- reduction mod p ------------------------------------------------------------


@dataclass(frozen=True)
class ReducedMap:
    p: int
    num: tuple
    den: tuple

    @property
    def degree(self) -> int:
        return max(poly.degree(self.num), poly.degree(self.den), 0)

    def __call__(self, point):
        """Act on P^1(F_p); points are ints 0..p-1 or None for infinity."""
        p, d = self.p, self.degree
        x, y = (1, 0) if point is None else (point % p, 1)
        F = sum(c * x**i * y ** (d - i) for i, c in enumerate(self.num)) % p
        G = sum(c * x**i * y ** (d - i) for i, c in enumerate(self.den)) % p
        if G == 0:
            return None
        return F * pow(G, -1, p) % p

    def __str__(self):
        def side(c):
            text = format_poly(c)
            return f"({text})" if sum(1 for x in c if x) > 1 else text

        return f"{side(self.num)} / {side(self.den)}"


def reduce_mod_p(phi: RationalMap, ctx) -> ReducedMap:
    p = ctx.p if isinstance(ctx, PrimeContext) else int(ctx)
    coeffs = list(phi.num) + list(phi.den)
    if min(valuation(c, p) for c in coeffs) != 0:
        raise NotNormalizable("coefficients are not p-integral with a unit")
    num = poly.mod_p([int(c) for c in phi.num], p)
    den = poly.mod_p([int(c) for c in phi.den], p)
    if not num:
        return ReducedMap(p, (), (1,))
    g = poly.gcd_p(num, den, p)
    num_r, _ = poly.divmod_p(num, g, p)
    den_r, _ = poly.divmod_p(den, g, p)
    return ReducedMap(p, tuple(num_r), tuple(den_r))


def has_good_reduction(phi: RationalMap, ctx) -> bool:
    return reduce_mod_p(phi, ctx).degree == phi.degree


# -- chart derivatives ----------------------------------------------------------


def _local_pair(phi: RationalMap, in_chart: Chart, out_chart: Chart):
    """Numerator and denominator of out_chart o phi o in_chart^-1 as polynomials
    in the local coordinate (possibly with trailing zeros)."""
    f, g = list(phi.num), list(phi.den)
    if in_chart is Chart.INVERSION:
        f, g = f[::-1], g[::-1]
    if out_chart is Chart.INVERSION:
        f, g = g, f
    return f, g


def chart_derivative(phi: RationalMap, P: ProjectivePoint, in_chart: Chart, out_chart: Chart) -> Fraction:
    """Exact derivative of out_chart o phi o in_chart^-1 at the local coordinate of P."""
    u = local_coordinate(P, in_chart)
    N, D = _local_pair(phi, in_chart, out_chart)
    Dv = poly.evaluate(D, u)
    if Dv == 0:
        raise PoleAtPoint(f"chart composite has a pole at {P}")
    Nv = poly.evaluate(N, u)
    dN = poly.evaluate(poly.derivative(N), u)
    dD = poly.evaluate(poly.derivative(D), u)
    return Fraction(dN * Dv - Nv * dD) / (Dv * Dv)


def chart_second_derivative(phi: RationalMap, P: ProjectivePoint, in_chart: Chart, out_chart: Chart) -> Fraction:
    u = local_coordinate(P, in_chart)
    N, D = _local_pair(phi, in_chart, out_chart)
    g = poly.evaluate(D, u)
    if g == 0:
        raise PoleAtPoint(f"chart composite has a pole at {P}")
    f = poly.evaluate(N, u)
    f1 = poly.evaluate(poly.derivative(N), u)
    g1 = poly.evaluate(poly.derivative(D), u)
    f2 = poly.evaluate(poly.derivative(poly.derivative(N)), u)
    g2 = poly.evaluate(poly.derivative(poly.derivative(D)), u)
    return Fraction(f2 * g * g - f * g2 * g - 2 * f1 * g1 * g + 2 * f * g1 * g1) / (g**3)


# -- standardization ------------------------------------------------------------


@dataclass(frozen=True)
class Mobius:
    """z -> (a z + b) / (c z + d)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def sending_to_zero_inf_one(cls, A: ProjectivePoint, B: ProjectivePoint, C: ProjectivePoint) -> "Mobius":
        """The unique Mobius map with A -> 0, B -> inf, C -> 1."""
        # the linear form vanishing at [x : y] is y X - x Y
        la = lambda P: (P.y * C.x - P.x * C.y)  # noqa: E731
        lam = la(B) / la(A)
        return cls(lam * A.y, -lam * A.x, B.y, -B.x)

    def __call__(self, P) -> ProjectivePoint:
        P = ProjectivePoint.from_value(P)
        return ProjectivePoint(self.a * P.x + self.b * P.y, self.c * P.x + self.d * P.y)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    @property
    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d


def conjugate(phi: RationalMap, g: Mobius) -> RationalMap:
    """g o phi o g^-1."""
    h = g.inverse()
    m = ((h.a, h.b), (h.c, h.d))
    d = phi.degree
    F = poly.homogeneous_substitute(list(phi.num), d, m)
    G = poly.homogeneous_substitute(list(phi.den), d, m)
    num = poly.add(poly.scale(F, g.a), poly.scale(G, g.b))
    den = poly.add(poly.scale(F, g.c), poly.scale(G, g.d))
    return RationalMap.from_polys(num, den)


def standardize(phi: RationalMap, ctx=None, scan_limit: int = 10_000):
    """Conjugate phi so that psi(0) = inf and psi(inf) = 1.

    Scans z0 = 0, 1, 2, ... then inf for a point with z0, phi(z0), phi^2(z0)
    pairwise distinct. Returns ``(psi, g)`` with psi = g o phi o g^-1.
    """
    if phi.degree < 2:
        raise NoValidBasePoint("standardization needs degree >= 2")
    candidates = [ProjectivePoint.finite(i) for i in range(scan_limit)] + [ProjectivePoint.infinity()]
    for z0 in candidates:
        z1 = evaluate(phi, z0)
        z2 = evaluate(phi, z1)
        if z0 != z1 and z1 != z2 and z0 != z2:
            g = Mobius.sending_to_zero_inf_one(z0, z1, z2)
            if g.is_identity:
                return phi, Mobius.identity()
            return conjugate(phi, g), g
    raise NoValidBasePoint("no base point with three distinct iterates found")


@dataclass(frozen=True)
class StandardForm:
    """Coefficients of (a_0 + ... + a_d z^d) / (b_1 z + ... + b_d z^d), a_d = b_d = 1.

    ``a`` and ``b`` both have length d + 1; ``b[0] == 0``.
    """

    a: tuple
    b: tuple

    @classmethod
    def from_lists(cls, a, b) -> "StandardForm":
        """Accepts a = (a_0..a_{d-1}) and b = (b_1..b_{d-1})."""
        a = [as_fraction(c) for c in a]
        b = [as_fraction(c) for c in b]
        if len(b) != len(a) - 1:
            raise WrongForm("expected a_0..a_{d-1} and b_1..b_{d-1}")
        return cls(tuple(a + [Fraction(1)]), tuple([Fraction(0)] + b + [Fraction(1)]))

    @classmethod
    def of(cls, phi) -> "StandardForm":
        if isinstance(phi, StandardForm):
            return phi
        if isinstance(phi, (tuple, list)) and len(phi) == 2:
            return cls.from_lists(*phi)
        num, den = list(phi.num), list(phi.den)
        d = len(num) - 1
        if d < 1 or num[d] == 0 or den[d] == 0 or num[d] != den[d] or den[0] != 0:
            raise WrongForm(f"{phi} is not of the form (a_0+...+z^d)/(b_1 z+...+z^d)")
        lead = num[d]
        return cls(tuple(c / lead for c in num), tuple(c / lead for c in den))

    @property
    def degree(self) -> int:
        return len(self.a) - 1

    def to_map(self) -> RationalMap:
        return RationalMap.from_polys(self.a, self.b)

    def low_tuple(self) -> tuple:
        d = self.degree
        return tuple(self.a[:d]) + tuple(self.b[1:d])


def is_one_lipschitz_standard_p2(phi) -> bool:
    """Coefficients 2-integral, a_0 odd, sum(a) even, sum(b) odd."""
    form = StandardForm.of(phi)
    coeffs = form.a + form.b
    if any(valuation(c, 2) < 0 for c in coeffs):
        return False
    a0 = to_residue(form.a[0], 1, 2).value
    A = to_residue(sum(form.a), 1, 2).value
    B = to_residue(sum(form.b), 1, 2).value
    return a0 == 1 and A == 0 and B == 1


def has_nondegenerate_reduction(phi: RationalMap, ctx) -> bool:
    """True iff the reduced homogeneous forms share no zero on P^1(F_p).

    Weaker than good reduction (which forbids common zeros over the algebraic
    closure) but enough for phi to map every level-n ball into a level-n ball,
    i.e. to be 1-Lipschitz, and for every iterate to be an integral power
    series in the chart coordinates of each ball.
    """
    p = ctx.p if isinstance(ctx, PrimeContext) else int(ctx)
    d = phi.degree
    f = [int(c) % p for c in phi.num]
    g = [int(c) % p for c in phi.den]
    points = [(x, 1) for x in range(p)] + [(1, 0)]
    for x, y in points:
        F = sum(c * x**i * y ** (d - i) for i, c in enumerate(f)) % p
        G = sum(c * x**i * y ** (d - i) for i, c in enumerate(g)) % p
        if F == 0 and G == 0:
            return False
    return True


def lipschitz_certificate(phi: RationalMap, ctx) -> str | None:
    """Name of a certificate that phi is 1-Lipschitz on P^1(Q_p), or None."""
    p = ctx.p if isinstance(ctx, PrimeContext) else int(ctx)
    if has_good_reduction(phi, p):
        return "good-reduction"
    if p == 2:
        try:
            if is_one_lipschitz_standard_p2(phi):
                return "p2-standard-form"
        except WrongForm:
            pass
    if has_nondegenerate_reduction(phi, p):
        return "nondegenerate-reduction"
    return None


# -- residue arithmetic on P^1(Z/p^M) ------------------------------------------


@dataclass(frozen=True)
class ApproxPoint:
    """A point of P^1(Q_p) known to precision p^-prec in its chart coordinate."""

    p: int
    infinite: bool
    value: int
    prec: int

    @classmethod
    def from_point(cls, P: ProjectivePoint, p: int, prec: int) -> "ApproxPoint":
        B = ball_of(P, prec, p)
        return cls(p, B.infinite, B.rep, prec)

    @classmethod
    def from_ball(cls, B: ProjectiveBall, prec: int | None = None) -> "ApproxPoint":
        prec = B.level if prec is None else prec
        return cls(B.p, B.infinite, B.rep % B.p**prec, prec)

    def ball(self, level: int) -> ProjectiveBall:
        if level > self.prec:
            raise PrecisionLoss(f"point known to level {self.prec}, asked for {level}")
        return ProjectiveBall(self.p, level, self.infinite, self.value)

    @property
    def chart(self) -> Chart:
        return Chart.INVERSION if self.infinite else Chart.IDENTITY


def _eval_mod(coeffs, u, m):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * u + c) % m
    return acc


def _residue_valuation(r: int, p: int, cap: int):
    if r == 0:
        return cap
    return min(int_valuation(r, p), cap)


class ResidueEvaluator:
    """Fast evaluation of phi and its chart derivatives on P^1(Z/p^M)."""

    def __init__(self, phi: RationalMap, p: int):
        self.phi = phi
        self.p = p
        f, g = list(phi.num_int), list(phi.den_int)
        self._local = {
            False: (f, g),
            True: (f[::-1], g[::-1]),
        }
        self._deriv = {k: (poly.derivative(a) or [0], poly.derivative(b) or [0]) for k, (a, b) in self._local.items()}

    def step(self, pt: ApproxPoint) -> ApproxPoint:
        p = self.p
        m = p**pt.prec
        f, g = self._local[pt.infinite]
        F = _eval_mod(f, pt.value, m)
        G = _eval_mod(g, pt.value, m)
        loss = min(_residue_valuation(F, p, pt.prec), _residue_valuation(G, p, pt.prec))
        if loss >= pt.prec:
            raise PrecisionLoss("both homogeneous forms vanish to working precision")
        prec = pt.prec - loss
        scale = p**loss
        F, G = F // scale, G // scale
        m = p**prec
        if G % p:
            return ApproxPoint(p, False, F * pow(G, -1, m) % m, prec)
        return ApproxPoint(p, True, G * pow(F, -1, m) % m, prec)

    def derivative(self, pt: ApproxPoint, out_infinite: bool):
        """Derivative of the chart composite at pt; returns (value, prec)."""
        p = self.p
        m = p**pt.prec
        f, g = self._local[pt.infinite]
        df, dg = self._deriv[pt.infinite]
        if out_infinite:
            f, g, df, dg = g, f, dg, df
        u = pt.value
        N, D = _eval_mod(f, u, m), _eval_mod(g, u, m)
        dN, dD = _eval_mod(df, u, m), _eval_mod(dg, u, m)
        T = (dN * D - N * dD) % m
        vD = _residue_valuation(D, p, pt.prec)
        prec = pt.prec - 2 * vD
        if prec < 1 or _residue_valuation(T, p, pt.prec) < 2 * vD:
            raise PrecisionLoss("derivative not determined at working precision")
        mm = p**prec
        Du = (D // p**vD) % mm
        return (T // p ** (2 * vD)) * pow(Du * Du, -1, mm) % mm, prec

    def orbit(self, start: ApproxPoint, steps: int, with_derivative: bool = False):
        """Follow ``steps`` iterates. Returns (points, derivative_value, derivative_prec)
        where the derivative is that of the iterate in the charts of the first
        and last points."""
        pts = [start]
        dval, dprec = 1, INF
        cur = start
        for _ in range(steps):
            nxt = self.step(cur)
            if with_derivative:
                v, pr = self.derivative(cur, nxt.infinite)
                dprec = min(dprec, pr)
                dval = dval * v % (self.p ** int(dprec))
            pts.append(nxt)
            cur = nxt
        return pts, dval, dprec
