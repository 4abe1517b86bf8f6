"""Minimal decomposition P ⊔ M ⊔ B of a rational map, computed to a fixed level.

Cycles of the level-1 system are lifted level by level. Each node is settled
by its behaviour:

* grows tails: the single same-length lift is followed to ``max_level`` and
  reported as an attracting periodic orbit;
* partially splits: the same-length lift is followed the same way (an
  indifferent orbit), the longer lifts are processed further;
* splits: every lift is processed further;
* grows: a minimal component once growth is known to continue forever
  (p >= 5 at any level, p = 3 from level 2 on or when the level-1 growth
  repeats at level 2, p = 2 when two consecutive levels grow).

Anything left open at ``max_level`` is reported as unresolved. All balls of
level ``max_level`` not covered by the three parts go to the basin of the
part their forward orbit reaches.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field

from .errors import BadReduction, ClassificationMismatch, DegreeTooSmall, InvariantViolation
from .padic import PrimeContext
from .projective import ball_count, parse_ball_label, sub_balls
from .dynamics import (
    Behaviour,
    CycleNode,
    LevelSystem,
    analyze_cycle,
    build_level_system,
    cycles_of,
    lift_cycle,
    restricted_cycles,
)
from .ratmap import RationalMap, lipschitz_certificate

ATTRACTING = "attracting"
INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class OrbitPoint:
    label: str
    modulus: int


@dataclass(frozen=True)
class PeriodicOrbitRecord:
    id: str
    period: int
    kind: str
    points: tuple

    @property
    def labels(self) -> tuple:
        return tuple(pt.label for pt in self.points)


@dataclass(frozen=True)
class MinimalComponent:
    id: str
    level: int
    balls: tuple
    k: int
    ell: int
    structure_sequence_head: tuple
    rule: str
    observed_lengths: tuple = ()


@dataclass(frozen=True)
class UnresolvedNode:
    id: str
    level: int
    balls: tuple
    classification: str
    alpha: int
    beta: int | None
    history: tuple = ()


@dataclass(frozen=True)
class TreeNode:
    """One cycle of the lift tree, with what the engine decided about it."""

    id: str
    level: int
    balls: tuple
    classification: str
    alpha: int
    beta: int | None
    order: int
    parent: str | None
    outcome: str


@dataclass(frozen=True)
class OdometerStructure:
    p: int
    k: int
    ell: int

    def head(self, count: int = 4) -> tuple:
        seq = [self.k, self.k * self.ell]
        while len(seq) < count:
            seq.append(seq[-1] * self.p)
        return tuple(seq[:count])

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.head()) + ", ...)"


def odometer_structure(c: MinimalComponent, p: int | None = None) -> OdometerStructure:
    """Structure sequence (k, k*ell, k*ell*p, ...) of the odometer carried by ``c``."""
    if p is None:
        head = c.structure_sequence_head
        p = head[2] // head[1] if len(head) > 2 and head[1] else 0
    return OdometerStructure(p, c.k, c.ell)


@dataclass(frozen=True)
class DecompositionReport:
    p: int
    max_level: int
    map: str
    periodic_orbits: tuple = ()
    components: tuple = ()
    basin: dict = field(default_factory=dict)
    unresolved: tuple = ()
    lift_tree: tuple = ()

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "max_level": self.max_level,
            "map": self.map,
            "periodic_orbits": [
                {"id": o.id, "period": o.period, "kind": o.kind, "points": [asdict(pt) for pt in o.points]}
                for o in self.periodic_orbits
            ],
            "components": [
                {
                    "id": c.id,
                    "level": c.level,
                    "balls": list(c.balls),
                    "k": c.k,
                    "ell": c.ell,
                    "structure_sequence_head": list(c.structure_sequence_head),
                    "rule": c.rule,
                    "observed_lengths": list(c.observed_lengths),
                }
                for c in self.components
            ],
            "basin": dict(self.basin),
            "unresolved": [
                {
                    "id": u.id,
                    "level": u.level,
                    "balls": list(u.balls),
                    "classification": u.classification,
                    "alpha": u.alpha,
                    "beta": u.beta,
                    "history": list(u.history),
                }
                for u in self.unresolved
            ],
            "lift_tree": [{**asdict(t), "balls": list(t.balls)} for t in self.lift_tree],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "DecompositionReport":
        return cls(
            p=d["p"],
            max_level=d["max_level"],
            map=d["map"],
            periodic_orbits=tuple(
                PeriodicOrbitRecord(o["id"], o["period"], o["kind"], tuple(OrbitPoint(**pt) for pt in o["points"]))
                for o in d["periodic_orbits"]
            ),
            components=tuple(
                MinimalComponent(
                    c["id"],
                    c["level"],
                    tuple(c["balls"]),
                    c["k"],
                    c["ell"],
                    tuple(c["structure_sequence_head"]),
                    c["rule"],
                    tuple(c.get("observed_lengths", ())),
                )
                for c in d["components"]
            ),
            basin=dict(d["basin"]),
            unresolved=tuple(
                UnresolvedNode(
                    u["id"], u["level"], tuple(u["balls"]), u["classification"], u["alpha"], u["beta"], tuple(u["history"])
                )
                for u in d["unresolved"]
            ),
            lift_tree=tuple(TreeNode(**{**t, "balls": tuple(t["balls"])}) for t in d.get("lift_tree", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "DecompositionReport":
        return cls.from_dict(json.loads(text))

    # -- views -------------------------------------------------------------

    def owner_of_balls(self) -> dict:
        """Level-max_level ball label -> id of the orbit, component or unresolved node owning it."""
        owner = {}

        def claim(label, oid):
            if label in owner:
                raise InvariantViolation(f"ball {label} claimed by both {owner[label]} and {oid}")
            owner[label] = oid

        for o in self.periodic_orbits:
            for pt in o.points:
                claim(pt.label, o.id)
        for c in self.components:
            for label in expand_labels(c.balls, c.level, self.max_level, self.p):
                claim(label, c.id)
        for u in self.unresolved:
            for label in u.balls:
                claim(label, u.id)
        return owner

    def summary(self) -> str:
        lines = [f"map: {self.map}", f"p = {self.p}, max level = {self.max_level}"]
        if not self.periodic_orbits:
            lines.append("periodic orbits: none")
        for o in self.periodic_orbits:
            lines.append(f"periodic orbit {o.id}: {o.kind}, period {o.period}, mod {o.points[0].modulus}: {' '.join(o.labels)}")
        if not self.components:
            lines.append("minimal components: none")
        for c in self.components:
            seq = ", ".join(str(x) for x in c.structure_sequence_head)
            lines.append(
                f"minimal component {c.id}: level {c.level} balls {{{', '.join(c.balls)}}}, "
                f"k={c.k}, ell={c.ell}, structure ({seq}, ...), rule: {c.rule}"
            )
        targets = {}
        for label, target in self.basin.items():
            targets[target] = targets.get(target, 0) + 1
        if self.basin:
            parts = ", ".join(f"{n} -> {t}" for t, n in sorted(targets.items()))
            lines.append(f"basin: {len(self.basin)} level-{self.max_level} balls ({parts})")
        else:
            lines.append("basin: empty")
        for u in self.unresolved:
            lines.append(f"unresolved {u.id}: level {u.level} ({' '.join(u.balls)}) {u.classification}")
        return "\n".join(lines)

    def to_dot(self) -> str:
        colours = {
            Behaviour.GROWS.value: "palegreen",
            Behaviour.SPLITS.value: "lightskyblue",
            Behaviour.GROWS_TAILS.value: "salmon",
            Behaviour.PARTIALLY_SPLITS.value: "khaki",
        }
        out = ["digraph lift_tree {", "  node [shape=box, style=filled];"]
        for t in self.lift_tree:
            beta = "-" if t.beta is None else t.beta
            label = f"L{t.level}: {' '.join(t.balls)}\\n{t.classification} (a={t.alpha}, b={beta})\\n{t.outcome}"
            out.append(f'  {t.id} [label="{label}", fillcolor={colours.get(t.classification, "white")}];')
        for t in self.lift_tree:
            if t.parent is not None:
                out.append(f"  {t.parent} -> {t.id};")
        out.append("}")
        return "\n".join(out)


def expand_labels(labels, level: int, target_level: int, p: int) -> list:
    """Labels of all level-``target_level`` balls inside the given level-``level`` balls."""
    out = []
    step = p**level
    count = p ** (target_level - level)
    for label in labels:
        B = parse_ball_label(label, level, p)
        out.extend(
            ("~" if B.infinite else "") + str(B.rep + t * step) for t in range(count)
        )
    return out


@dataclass
class _Item:
    node: CycleNode
    parent: str | None
    k: int
    ell: int
    history: tuple


class _Engine:
    def __init__(self, phi: RationalMap, ctx: PrimeContext):
        self.phi = phi
        self.ctx = ctx
        self.p = ctx.p
        self.N = ctx.max_level
        self.systems: dict[int, LevelSystem] = {}
        self.orbits = []
        self.components = []
        self.unresolved = []
        self.tree = []

    def system(self, n: int) -> LevelSystem:
        if n not in self.systems:
            self.systems[n] = build_level_system(self.phi, n, self.ctx)
        return self.systems[n]

    def lifts(self, node: CycleNode) -> list:
        return lift_cycle(self.phi, node, self.ctx, self.system(node.level + 1))

    def record(self, item: _Item, outcome: str) -> str:
        node = item.node
        tid = f"n{len(self.tree)}"
        self.tree.append(
            TreeNode(tid, node.level, node.labels, node.behaviour.value, node.alpha, node.beta, node.order, item.parent, outcome)
        )
        return tid

    def growth_lengths(self, node: CycleNode) -> tuple:
        """Per-level cycle lengths of the restricted systems below a growing node, checked."""
        lengths = [node.length]
        balls = list(node.balls)
        for m in range(node.level + 1, self.N + 1):
            balls = [b for B in balls for b in sub_balls(B)]
            cycles = restricted_cycles(self.system(m), balls)
            if len(cycles) != 1 or len(cycles[0]) != len(balls):
                raise ClassificationMismatch(
                    f"component at level {node.level} ({' '.join(node.labels)}) is not a single cycle at level {m}"
                )
            lengths.append(len(balls))
        return tuple(lengths)

    def emit_component(self, item: _Item, rule: str):
        node = item.node
        observed = self.growth_lengths(node)
        cid = f"M{len(self.components)}"
        head = OdometerStructure(self.p, item.k, item.ell).head()
        self.components.append(MinimalComponent(cid, node.level, node.labels, item.k, item.ell, head, rule, observed))
        return cid

    def emit_unresolved(self, item: _Item):
        node = item.node
        uid = f"U{len(self.unresolved)}"
        self.unresolved.append(
            UnresolvedNode(uid, node.level, node.labels, node.behaviour.value, node.alpha, node.beta, item.history)
        )
        return uid

    def emit_orbit(self, item: _Item, kind: str):
        node = item.node
        oid = f"P{len(self.orbits)}"
        modulus = self.p**node.level
        points = tuple(OrbitPoint(label, modulus) for label in node.labels)
        self.orbits.append(PeriodicOrbitRecord(oid, node.length, kind, points))
        return oid

    def run(self):
        queue = deque()
        level1 = self.system(1)
        for cycle in cycles_of(level1)[0]:
            node = analyze_cycle(self.phi, cycle, self.ctx)
            queue.append(_Item(node, None, node.length, 1, ()))
        while queue:
            self.process(queue.popleft(), queue)

    def process(self, item: _Item, queue):
        node, p, N = item.node, self.p, self.N
        n = node.level
        b = node.behaviour
        history = item.history + (f"L{n}({' '.join(node.labels)}):{b.value}",)
        here = _Item(node, item.parent, item.k, item.ell, history)
        tid = f"n{len(self.tree)}"

        if b in (Behaviour.GROWS_TAILS, Behaviour.PARTIALLY_SPLITS):
            kind = ATTRACTING if b is Behaviour.GROWS_TAILS else INDIFFERENT
            if n == N:
                self.record(item, f"periodic orbit {self.emit_orbit(here, kind)}")
                return
            self.record(item, f"{kind} orbit, same-length lift followed")
            for lift in self.lifts(node):
                if lift.length == node.length and lift.behaviour is not b:
                    raise InvariantViolation(f"persistent lift of {node} behaves as {lift.behaviour.value}")
                ell = item.ell if lift.length == node.length else item.ell * node.order
                queue.append(_Item(lift, tid, item.k, ell, history))
            return

        if b is Behaviour.SPLITS:
            if n == N:
                self.record(item, f"unresolved {self.emit_unresolved(here)}")
                return
            self.record(item, "splits, lifts processed")
            for lift in self.lifts(node):
                queue.append(_Item(lift, tid, item.k, item.ell, history))
            return

        # grows: certify growth forever where the level allows it
        if p >= 5 or (p == 3 and n >= 2):
            rule = f"p={p}: grows at level {n}" if p >= 5 else f"p=3: grows at level {n} >= 2"
            self.record(item, f"component {self.emit_component(here, rule)}")
            return
        if n == N:
            self.record(item, f"unresolved {self.emit_unresolved(here)} (growth not certified)")
            return
        (lift,) = self.lifts(node)
        if lift.behaviour is Behaviour.GROWS:
            rule = f"p={p}: grows at levels {n} and {n + 1}"
            self.record(item, f"component {self.emit_component(here, rule)}")
            return
        self.record(item, "grows, lift does not grow; lift processed")
        queue.append(_Item(lift, tid, item.k, item.ell, history))


def decompose(phi: RationalMap, ctx: PrimeContext) -> DecompositionReport:
    """Decompose P^1(Q_p) under ``phi`` into periodic orbits, minimal components and basins."""
    if phi.degree < 2:
        raise DegreeTooSmall("decomposition needs degree >= 2")
    if lipschitz_certificate(phi, ctx) is None:
        raise BadReduction(f"{phi} has degenerate reduction modulo {ctx.p}")
    engine = _Engine(phi, ctx)
    engine.run()
    N = ctx.max_level
    partial = DecompositionReport(
        ctx.p, N, str(phi), tuple(engine.orbits), tuple(engine.components), {}, tuple(engine.unresolved), tuple(engine.tree)
    )
    owner = partial.owner_of_balls()
    top = engine.system(N)
    labels = [top.ball(i).label for i in range(len(top))]
    index = {label: i for i, label in enumerate(labels)}
    basin = {}
    for label in labels:
        if label in owner:
            continue
        i = index[label]
        for _ in range(len(top) + 1):
            i = top.transition[i]
            if labels[i] in owner:
                basin[label] = owner[labels[i]]
                break
        else:
            raise InvariantViolation(f"ball {label} never reaches an orbit, component or unresolved node")
    covered = len(owner) + len(basin)
    if covered != ball_count(N, ctx.p):
        raise InvariantViolation(f"coverage mismatch: {covered} of {ball_count(N, ctx.p)} balls")
    return DecompositionReport(
        ctx.p, N, str(phi), partial.periodic_orbits, partial.components, basin, partial.unresolved, partial.lift_tree
    )


def allowed_periods(p: int) -> set:
    periods = set()
    for k in range(1, p + 2):
        periods.add(k)
        for ell in range(1, p):
            if (p - 1) % ell == 0:
                periods.add(k * ell)
        if p in (2, 3):
            periods.add(k * p)
    return periods


def periodic_length_check(report: DecompositionReport, ctx: PrimeContext | None = None) -> bool:
    """True iff every periodic orbit has a length k, k*ell, or (p = 2, 3) k*p."""
    p = ctx.p if ctx is not None else report.p
    allowed = allowed_periods(p)
    return all(o.period in allowed for o in report.periodic_orbits)
