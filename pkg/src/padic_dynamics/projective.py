"""Points and balls of the projective line over Q_p.

A level-n ball is a ball of spherical radius p^-n. Balls with |z|_p <= 1 are
on the finite side and are labelled by z mod p^n; the others are labelled by
w = 1/z mod p^n (a multiple of p), written ``~w``. ``~0`` is the ball around
infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import INF, PrimeContext, as_fraction, valuation


def _prime(ctx_or_p) -> int:
    return ctx_or_p.p if isinstance(ctx_or_p, PrimeContext) else int(ctx_or_p)


@dataclass(frozen=True)
class ProjectivePoint:
    """A point [x : y] of P^1(Q), stored canonically as [z : 1] or [1 : 0]."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = as_fraction(self.x), as_fraction(self.y)
        if x == 0 and y == 0:
            raise ValueError("[0:0] is not a projective point")
        if y == 0:
            x, y = Fraction(1), Fraction(0)
        else:
            x, y = x / y, Fraction(1)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def finite(cls, z) -> "ProjectivePoint":
        return cls(as_fraction(z), Fraction(1))

    @classmethod
    def infinity(cls) -> "ProjectivePoint":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def from_value(cls, value) -> "ProjectivePoint":
        """Accepts a rational, a decimal/fraction string, or 'inf'/None for infinity."""
        if isinstance(value, ProjectivePoint):
            return value
        if value is None or (isinstance(value, str) and value.strip().lower() in ("inf", "oo", "infinity", "∞")):
            return cls.infinity()
        return cls.finite(value)

    @property
    def is_infinity(self) -> bool:
        return self.y == 0

    @property
    def z(self) -> Fraction | None:
        return None if self.is_infinity else self.x

    def __str__(self):
        return "inf" if self.is_infinity else str(self.x)


def spherical_distance(P: ProjectivePoint, Q: ProjectivePoint, ctx_or_p):
    """Return k with rho(P, Q) = p^-k (INF when P == Q)."""
    p = _prime(ctx_or_p)
    cross = P.x * Q.y - Q.x * P.y
    if cross == 0:
        return INF
    return (
        valuation(cross, p)
        - min(valuation(P.x, p), valuation(P.y, p))
        - min(valuation(Q.x, p), valuation(Q.y, p))
    )


@dataclass(frozen=True, order=True)
class ProjectiveBall:
    """A level-n ball, i.e. a point of P^1(Z/p^n Z).

    ``infinite`` is False for the ball z + p^n Z_p and True for the ball
    {1/w : w = rep mod p^n}.
    """

    p: int
    level: int
    infinite: bool
    rep: int

    def __post_init__(self):
        m = self.p**self.level
        object.__setattr__(self, "rep", self.rep % m)
        if self.infinite and self.rep % self.p:
            raise ValueError("an infinity-side ball label must be divisible by p")

    @property
    def label(self) -> str:
        return f"~{self.rep}" if self.infinite else str(self.rep)

    @property
    def index(self) -> int:
        """Position in :func:`enumerate_balls` order."""
        if self.infinite:
            return self.p**self.level + self.rep // self.p
        return self.rep

    def representative(self) -> ProjectivePoint:
        """The label read as an exact point: i, or 1/i with 1/0 = inf."""
        if not self.infinite:
            return ProjectivePoint.finite(self.rep)
        if self.rep == 0:
            return ProjectivePoint.infinity()
        return ProjectivePoint.finite(Fraction(1, self.rep))

    def parent(self) -> "ProjectiveBall":
        if self.level == 1:
            raise ValueError("level-1 balls have no parent ball")
        return ProjectiveBall(self.p, self.level - 1, self.infinite, self.rep)

    def ancestor(self, level: int) -> "ProjectiveBall":
        return ProjectiveBall(self.p, level, self.infinite, self.rep)

    def contains(self, point: ProjectivePoint) -> bool:
        return ball_of(point, self.level, self.p) == self

    def __str__(self):
        return self.label


def ball_from_index(index: int, level: int, ctx_or_p) -> ProjectiveBall:
    p = _prime(ctx_or_p)
    m = p**level
    if index < m:
        return ProjectiveBall(p, level, False, index)
    return ProjectiveBall(p, level, True, (index - m) * p)


def ball_count(level: int, ctx_or_p) -> int:
    p = _prime(ctx_or_p)
    return (p + 1) * p ** (level - 1)


def parse_ball_label(label: str, level: int, ctx_or_p) -> ProjectiveBall:
    p = _prime(ctx_or_p)
    label = label.strip()
    if label.startswith("~"):
        return ProjectiveBall(p, level, True, int(label[1:]))
    return ProjectiveBall(p, level, False, int(label))


def ball_of(P: ProjectivePoint, n: int, ctx_or_p) -> ProjectiveBall:
    """The unique level-n ball containing ``P``."""
    p = _prime(ctx_or_p)
    m = p**n
    if P.is_infinity:
        return ProjectiveBall(p, n, True, 0)
    z = P.x
    if valuation(z, p) >= 0:
        return ProjectiveBall(p, n, False, z.numerator * pow(z.denominator, -1, m))
    w = 1 / z
    return ProjectiveBall(p, n, True, w.numerator * pow(w.denominator, -1, m))


def enumerate_balls(n: int, ctx: PrimeContext) -> list[ProjectiveBall]:
    """All (p+1)p^(n-1) level-n balls: finite labels ascending, then ~0, ~p, ..."""
    if n < 1 or n > ctx.max_level:
        raise ValueError(f"level {n} outside 1..{ctx.max_level}")
    p = ctx.p
    m = p**n
    balls = [ProjectiveBall(p, n, False, i) for i in range(m)]
    balls.extend(ProjectiveBall(p, n, True, j) for j in range(0, m, p))
    return balls


def sub_balls(B: ProjectiveBall, ctx: PrimeContext | None = None) -> list[ProjectiveBall]:
    """The p level-(n+1) balls inside ``B``."""
    if ctx is not None and B.level + 1 > ctx.max_level:
        raise ValueError(f"level {B.level + 1} exceeds max_level {ctx.max_level}")
    p, n = B.p, B.level
    step = p**n
    return [ProjectiveBall(p, n + 1, B.infinite, B.rep + t * step) for t in range(p)]
