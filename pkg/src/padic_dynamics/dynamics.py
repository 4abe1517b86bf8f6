"""Induced dynamics on level-n balls: cycles, their (alpha, beta) invariants,
the four lift behaviours, and the two finite-level minimality tests."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import (
    BadReduction,
    ClassificationMismatch,
    DegreeTooSmall,
    InsufficientValuation,
    InvariantViolation,
    NotCertifiedLipschitz,
    PrecisionLoss,
    RepresentativeDisagreement,
)
from .padic import PrimeContext, int_valuation
from .projective import ProjectiveBall, ProjectivePoint, ball_count, ball_from_index, ball_of
from .ratmap import ApproxPoint, RationalMap, ResidueEvaluator, lipschitz_certificate

# extra p-adic digits carried beyond what a computation strictly needs
PRECISION_MARGIN = 2


def _pair_to_index(F: int, G: int, p: int, n: int) -> int:
    """Index (enumerate_balls order) of the level-n ball of the point [F : G]."""
    m = p**n
    if G != 0 and (F == 0 or int_valuation(F, p) >= int_valuation(G, p)):
        vg = int_valuation(G, p)
        s = p**vg
        return (F // s) * pow(G // s, -1, m) % m
    vf = int_valuation(F, p)
    s = p**vf
    w = (G // s) * pow(F // s, -1, m) % m
    return m + w // p


@dataclass(frozen=True)
class LevelSystem:
    """The map induced by phi on the (p+1)p^(n-1) balls of level n."""

    p: int
    level: int
    transition: tuple
    certificate: str = ""

    def __len__(self):
        return len(self.transition)

    def ball(self, index: int) -> ProjectiveBall:
        return ball_from_index(index, self.level, self.p)

    def image(self, B: ProjectiveBall) -> ProjectiveBall:
        return self.ball(self.transition[B.index])

    def as_labels(self) -> dict:
        return {self.ball(i).label: self.ball(j).label for i, j in enumerate(self.transition)}


def require_certificate(phi: RationalMap, ctx: PrimeContext) -> str:
    cert = lipschitz_certificate(phi, ctx)
    if cert is None:
        raise NotCertifiedLipschitz(f"no 1-Lipschitz certificate for {phi} at p={ctx.p}")
    return cert


def build_level_system(phi: RationalMap, n: int, ctx: PrimeContext, probe: bool = True) -> LevelSystem:
    """Image ball of every level-n ball, computed from its canonical representative.

    With ``probe`` set, each ball is also evaluated at a second representative
    (shifted by p^n) and the two images must agree.
    """
    if n < 1 or n > ctx.max_level:
        raise ValueError(f"level {n} outside 1..{ctx.max_level}")
    cert = require_certificate(phi, ctx)
    p = ctx.p
    m = p**n
    num, den = phi.num_int, phi.den_int
    d = phi.degree

    def image_index(x, y):
        xp = [x**i for i in range(d + 1)]
        yp = [y**i for i in range(d + 1)]
        F = sum(c * xp[i] * yp[d - i] for i, c in enumerate(num))
        G = sum(c * xp[i] * yp[d - i] for i, c in enumerate(den))
        return _pair_to_index(F, G, p, n)

    transition = []
    for index in range(ball_count(n, p)):
        if index < m:
            x, y = index, 1
            shifted = (index + m, 1)
        else:
            x, y = 1, (index - m) * p
            shifted = (1, y + m)
        target = image_index(x, y)
        if probe and image_index(*shifted) != target:
            raise RepresentativeDisagreement(
                f"ball {ball_from_index(index, n, p).label} has representatives with different images"
            )
        transition.append(target)
    return LevelSystem(p, n, tuple(transition), cert)


def functional_graph_cycles(mapping: dict):
    """Cycles and tails of a finite self-map given as {node: image}.

    Cycles are rotated to start at their smallest node and sorted by it.
    Returns ``(cycles, tail_target)`` where tail_target maps each non-cyclic
    node to the index of the cycle it eventually enters.
    """
    state = {}
    cycles = []
    on_cycle = {}
    for start in sorted(mapping):
        if start in state:
            continue
        path = []
        x = start
        while x not in state:
            state[x] = start
            path.append(x)
            x = mapping[x]
        if state[x] == start and x not in on_cycle:
            cyc = path[path.index(x):]
            k = cyc.index(min(cyc))
            cyc = tuple(cyc[k:] + cyc[:k])
            for y in cyc:
                on_cycle[y] = cyc
            cycles.append(cyc)
    cycles.sort(key=lambda c: c[0])
    position = {c[0]: i for i, c in enumerate(cycles)}
    tail = {}
    for node in mapping:
        if node in on_cycle:
            continue
        x = node
        while x not in on_cycle:
            x = mapping[x]
        tail[node] = position[on_cycle[x][0]]
    return cycles, tail


def cycles_of(L: LevelSystem):
    """Cycles of the level system as lists of balls, plus tail map ball -> cycle index."""
    mapping = dict(enumerate(L.transition))
    cycles, tail = functional_graph_cycles(mapping)
    ball_cycles = [[L.ball(i) for i in c] for c in cycles]
    tails = {L.ball(i).label: j for i, j in tail.items()}
    return ball_cycles, tails


class Behaviour(enum.Enum):
    GROWS = "grows"
    SPLITS = "splits"
    GROWS_TAILS = "grows-tails"
    PARTIALLY_SPLITS = "partially-splits"


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    k, x = 1, a
    while x != 1:
        x = x * a % p
        k += 1
    return k


@dataclass(frozen=True)
class CycleNode:
    level: int
    balls: tuple
    alpha: int
    beta: int | None
    behaviour: Behaviour
    order: int = 1  # multiplicative order of alpha; > 1 only for partial splits
    delta: int = 0  # phi^K(x) - x modulo p^(level+1), x the first ball's label

    @property
    def length(self) -> int:
        return len(self.balls)

    @property
    def p(self) -> int:
        return self.balls[0].p

    @property
    def labels(self) -> tuple:
        return tuple(b.label for b in self.balls)

    def expected_lift_lengths(self) -> list:
        p, K = self.p, self.length
        if self.behaviour is Behaviour.GROWS:
            return [p * K]
        if self.behaviour is Behaviour.SPLITS:
            return [K] * p
        if self.behaviour is Behaviour.GROWS_TAILS:
            return [K]
        return sorted([K] + [K * self.order] * ((p - 1) // self.order))

    def __str__(self):
        extra = f", l={self.order}" if self.behaviour is Behaviour.PARTIALLY_SPLITS else ""
        beta = "-" if self.beta is None else self.beta
        return f"level {self.level} ({' '.join(self.labels)}): alpha={self.alpha} beta={beta} {self.behaviour.value}{extra}"


def classify(alpha: int, beta: int | None, p: int):
    alpha %= p
    if alpha == 0:
        return Behaviour.GROWS_TAILS, 1
    if alpha == 1:
        return (Behaviour.SPLITS if beta == 0 else Behaviour.GROWS), 1
    return Behaviour.PARTIALLY_SPLITS, multiplicative_order(alpha, p)


def analyze_cycle(phi: RationalMap, cycle, ctx: PrimeContext, representative: ProjectivePoint | None = None) -> CycleNode:
    """Compute alpha mod p, beta mod p and the lift behaviour of a level-n cycle.

    ``cycle`` is a sequence of level-n balls forming a cycle of the induced
    map. The orbit of a representative of the first ball (its label unless
    ``representative`` is given) is followed K steps in P^1(Z/p^M Z),
    accumulating the chain-rule derivative in the chart of each ball.
    """
    balls = tuple(cycle)
    p, n, K = ctx.p, balls[0].level, len(balls)
    if representative is not None and ball_of(representative, n, p) != balls[0]:
        raise ValueError("representative is not in the first ball of the cycle")
    ev = ResidueEvaluator(phi, p)
    margin = PRECISION_MARGIN
    while True:
        prec = n + 1 + margin
        if representative is None:
            start = ApproxPoint.from_ball(balls[0], prec)
        else:
            start = ApproxPoint.from_point(representative, p, prec)
        try:
            pts, dval, dprec = ev.orbit(start, K, with_derivative=True)
        except PrecisionLoss:
            pts = None
        if pts is not None and pts[-1].prec >= n + 1 and dprec >= 1:
            break
        if margin > 64:
            raise PrecisionLoss(f"cannot follow the cycle at level {n} to precision {n + 1}")
        margin *= 2
    for j, pt in enumerate(pts[:-1]):
        if pt.ball(n) != balls[j]:
            raise InvariantViolation(f"orbit leaves the cycle at step {j}")
    end = pts[-1]
    if end.ball(n) != balls[0]:
        raise InvariantViolation("phi^K does not return to the first ball")
    m = p ** (n + 1)
    delta = (end.value - start.value) % m
    if delta % p**n:
        raise InsufficientValuation(f"phi^K(x) - x has valuation < {n}")
    alpha = dval % p
    beta = (delta // p**n) % p if alpha == 1 else None
    behaviour, order = classify(alpha, beta, p)
    return CycleNode(n, balls, alpha, beta, behaviour, order, delta)


def restricted_cycles(system: LevelSystem, balls) -> list:
    """Cycles of ``system`` inside the given set of balls (which must be invariant)."""
    idx = {b.index for b in balls}
    mapping = {}
    for i in idx:
        j = system.transition[i]
        if j not in idx:
            raise InvariantViolation(f"ball {system.ball(i).label} leaves the invariant set")
        mapping[i] = j
    cycles, _ = functional_graph_cycles(mapping)
    return [[system.ball(i) for i in c] for c in cycles]


def lift_cycle(phi: RationalMap, node: CycleNode, ctx: PrimeContext, next_system: LevelSystem | None = None) -> list:
    """All cycles of the level-(n+1) map inside the balls of ``node``, analyzed.

    Raises ClassificationMismatch when the observed lift lengths disagree with
    the node's behaviour.
    """
    n = node.level
    if n + 1 > ctx.max_level:
        raise ValueError(f"cannot lift beyond max_level {ctx.max_level}")
    if next_system is None:
        next_system = build_level_system(phi, n + 1, ctx)
    children = [ProjectiveBall(ctx.p, n + 1, b.infinite, b.rep + t * ctx.p**n) for b in node.balls for t in range(ctx.p)]
    cycles = restricted_cycles(next_system, children)
    lifts = [analyze_cycle(phi, c, ctx) for c in cycles]
    observed = sorted(len(c) for c in cycles)
    if observed != node.expected_lift_lengths():
        raise ClassificationMismatch(
            f"{node}: expected lift lengths {node.expected_lift_lengths()}, observed {observed}"
        )
    return lifts


def _require_minimality_preconditions(phi: RationalMap, ctx: PrimeContext) -> str:
    if phi.degree < 2:
        raise DegreeTooSmall("minimality criteria need degree >= 2")
    cert = lipschitz_certificate(phi, ctx)
    if cert is None:
        raise BadReduction(f"{phi} has degenerate reduction modulo {ctx.p}")
    return cert


def check_minimal_at_level(phi: RationalMap, n: int, ctx: PrimeContext, system: LevelSystem | None = None) -> bool:
    """True iff the level-n system is one cycle through all (p+1)p^(n-1) balls."""
    system = system or build_level_system(phi, n, ctx)
    N = len(system)
    x, steps = 0, 0
    while True:
        x = system.transition[x]
        steps += 1
        if x == 0:
            return steps == N
        if steps > N:
            return False


@dataclass(frozen=True)
class Thm11Verdict:
    """Minimality from level-1 transitivity and the orbit of 0 under phi^(p+1)."""

    transitive_level1: bool
    deriv_cond: bool | None = None
    valuation_cond: bool | None = None
    extra_cond_p23: bool | None = None
    minimal: bool = False
    derivative_mod_p: int | None = None
    valuation_first_return: int | None = None
    valuation_pth_return: int | None = None
    certificate: str = ""


def _residue_valuation(value: int, p: int, cap: int) -> int:
    return cap if value == 0 else min(int_valuation(value, p), cap)


def check_minimal_thm11(phi: RationalMap, ctx: PrimeContext) -> Thm11Verdict:
    cert = _require_minimality_preconditions(phi, ctx)
    p = ctx.p
    level1 = build_level_system(phi, 1, ctx)
    if not check_minimal_at_level(phi, 1, ctx, level1):
        return Thm11Verdict(False, certificate=cert)
    prec = 3 + PRECISION_MARGIN
    ev = ResidueEvaluator(phi, p)
    zero = ApproxPoint(p, False, 0, prec)
    pts, dval, _ = ev.orbit(zero, p + 1, with_derivative=True)
    first = pts[-1]
    deriv = dval % p
    v1 = _residue_valuation(first.value, p, first.prec)
    deriv_ok = deriv == 1
    val_ok = v1 == 1
    extra_ok = None
    v2 = None
    if p in (2, 3):
        pts2, _, _ = ev.orbit(zero, (p + 1) * p)
        v2 = _residue_valuation(pts2[-1].value, p, pts2[-1].prec)
        extra_ok = v2 == 2
    minimal = deriv_ok and val_ok and (extra_ok is not False)
    return Thm11Verdict(True, deriv_ok, val_ok, extra_ok, minimal, deriv, v1, v2, cert)


def minimality_level(p: int) -> int:
    return 3 if p in (2, 3) else 2


def check_minimal_levels(phi: RationalMap, ctx: PrimeContext) -> bool:
    """Minimality via transitivity on level 3 (p = 2, 3) or level 2 (p >= 5)."""
    _require_minimality_preconditions(phi, ctx)
    return check_minimal_at_level(phi, minimality_level(ctx.p), ctx)


def residue_orbit(phi: RationalMap, start, level: int, iterates: int, ctx: PrimeContext, power: int = 1) -> list:
    """Balls visited by ``start`` under phi^power, ``iterates`` times, at ``level``."""
    require_certificate(phi, ctx)
    ev = ResidueEvaluator(phi, ctx.p)
    point = ProjectivePoint.from_value(start)
    cur = ApproxPoint.from_point(point, ctx.p, level + PRECISION_MARGIN)
    out = [cur.ball(level)]
    for _ in range(iterates):
        pts, _, _ = ev.orbit(cur, power)
        cur = pts[-1]
        out.append(cur.ball(level))
    return out
