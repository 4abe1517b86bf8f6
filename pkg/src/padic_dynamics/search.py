"""Exhaustive searches over standard-form coefficient tuples.

A tuple is ``(a_0, ..., a_{d-1}, b_1, ..., b_{d-1})`` with entries in
``range(M)``; the map is (a_0 + ... + a_{d-1} z^{d-1} + z^d) / (b_1 z + ... + z^d).
Tuples are enumerated in lexicographic order.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass

from . import poly
from .dynamics import build_level_system, check_minimal_at_level, minimality_level
from .p2criterion import criterion12_holds
from .padic import PrimeContext
from .ratmap import RationalMap, has_good_reduction, lipschitz_certificate


class SearchMode(enum.Enum):
    CRITERION12 = "criterion12"
    GOOD_REDUCTION_MINIMAL = "good-reduction-minimal"
    BOTH = "both"


@dataclass(frozen=True)
class SearchSpec:
    p: int
    degree: int
    modulus: int
    mode: SearchMode = SearchMode.CRITERION12

    def __post_init__(self):
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", SearchMode(self.mode))
        if self.degree < 2:
            raise ValueError("degree must be at least 2")
        m = self.modulus
        while m > 1 and m % self.p == 0:
            m //= self.p
        if m != 1 or self.modulus < self.p:
            raise ValueError(f"modulus {self.modulus} is not a positive power of {self.p}")
        if self.mode is not SearchMode.GOOD_REDUCTION_MINIMAL and self.p != 2:
            raise ValueError("the coefficient criterion is only defined for p = 2")

    @property
    def tuple_length(self) -> int:
        return 2 * self.degree - 1

    def tuples(self):
        return itertools.product(range(self.modulus), repeat=self.tuple_length)


@dataclass(frozen=True)
class SearchHit:
    coefficients: tuple
    orbit: tuple  # labels of the cycle through ball 0 at the minimality level, starting at 0
    criterion12: bool | None
    good_reduction: bool
    minimal: bool

    def orbit_text(self) -> str:
        return " -> ".join(self.orbit)


def map_of(coefficients, degree: int) -> RationalMap:
    return RationalMap.from_standard(coefficients[:degree], coefficients[degree:])


def orbit_of_zero(phi: RationalMap, level: int, ctx: PrimeContext) -> tuple:
    """Labels visited from ball 0 until the first return, at ``level``."""
    system = build_level_system(phi, level, ctx)
    out, i = [], 0
    while True:
        out.append(system.ball(i).label)
        i = system.transition[i]
        if i == 0 or len(out) > len(system):
            return tuple(out)


def _reduction_is_good(a, b, p: int) -> bool:
    """Good reduction of the standard-form tuple: both sides are monic of degree d,
    so it is coprimality of the two sides modulo p."""
    num = poly.mod_p(list(a) + [1], p)
    den = poly.mod_p([0] + list(b) + [1], p)
    return poly.degree(poly.gcd_p(num, den, p)) == 0


def _level1_transitive(a, b, p: int) -> bool:
    """Whether the reduction of a good-reduction standard-form tuple cycles through P^1(F_p).

    Necessary for minimality, and cheap enough to run before building the map.
    """
    num = list(a) + [1]
    den = [0] + list(b) + [1]
    x, steps = 0, 0  # x in 0..p-1 finite, p for infinity
    while True:
        if x == p:
            x = 1  # phi(inf) = 1 in standard form
        else:
            F = sum(c * x**i for i, c in enumerate(num)) % p
            G = sum(c * x**i for i, c in enumerate(den)) % p
            x = p if G == 0 else F * pow(G, -1, p) % p
        steps += 1
        if x == 0:
            return steps == p + 1
        if steps > p:
            return False


def _evaluate(t, spec: SearchSpec, ctx: PrimeContext):
    d = spec.degree
    a, b = t[:d], t[d:]
    crit = None
    if spec.mode is not SearchMode.GOOD_REDUCTION_MINIMAL:
        crit = criterion12_holds(a, b)
    if spec.mode is SearchMode.CRITERION12 and not crit:
        return None
    if not crit and not (_reduction_is_good(a, b, ctx.p) and _level1_transitive(a, b, ctx.p)):
        return None
    phi = map_of(t, d)
    good = phi.degree == d and has_good_reduction(phi, ctx)
    if spec.mode is SearchMode.GOOD_REDUCTION_MINIMAL and not good:
        return None
    level = minimality_level(ctx.p)
    minimal = (
        phi.degree >= 2
        and lipschitz_certificate(phi, ctx) is not None
        and check_minimal_at_level(phi, level, ctx)
    )
    if spec.mode is SearchMode.GOOD_REDUCTION_MINIMAL and not minimal:
        return None
    if spec.mode is SearchMode.BOTH and not (crit or (good and minimal)):
        return None
    orbit = orbit_of_zero(phi, level, ctx) if lipschitz_certificate(phi, ctx) is not None else ()
    return SearchHit(tuple(t), orbit, crit, good, minimal)


def run_search(spec: SearchSpec, ctx: PrimeContext | None = None) -> list:
    """Tuples satisfying the mode's predicate, in lexicographic order.

    criterion12: the congruence conditions on the raw tuple.
    good-reduction-minimal: good reduction (of full degree d) and transitivity
    of the induced system on level 3 (p = 2, 3) or level 2 (p >= 5).
    both: tuples satisfying either predicate, with both flags recorded.
    """
    ctx = ctx or PrimeContext(spec.p, 3)
    if ctx.p != spec.p:
        raise ValueError("context prime differs from the search prime")
    hits = []
    for t in spec.tuples():
        hit = _evaluate(t, spec, ctx)
        if hit is not None:
            hits.append(hit)
    return hits


def classify_hits_by_orbit(hits) -> dict:
    """orbit -> list of coefficient tuples; keys in order of first occurrence."""
    groups: dict = {}
    for hit in hits:
        groups.setdefault(hit.orbit, []).append(hit.coefficients)
    return groups


def _header(degree: int) -> str:
    names = [f"a{i}" for i in range(degree)] + [f"b{j}" for j in range(1, degree)]
    return " ".join(names)


def render_text(hits, degree: int) -> str:
    """One block per orbit class: the orbit, then its coefficient rows."""
    groups = classify_hits_by_orbit(hits)
    lines = [f"# {_header(degree)}", f"# {len(hits)} hits in {len(groups)} orbit classes"]
    for i, (orbit, rows) in enumerate(groups.items(), 1):
        lines.append("")
        lines.append(f"orbit {i}: {' -> '.join(orbit)}")
        for row in rows:
            lines.append(" ".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def render_json(hits, spec: SearchSpec) -> str:
    doc = {
        "p": spec.p,
        "degree": spec.degree,
        "modulus": spec.modulus,
        "mode": spec.mode.value,
        "hits": [
            {
                "coefficients": list(h.coefficients),
                "orbit": list(h.orbit),
                "criterion12": h.criterion12,
                "good_reduction": h.good_reduction,
                "minimal": h.minimal,
            }
            for h in hits
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def hits_from_json(text: str) -> list:
    doc = json.loads(text)
    return [
        SearchHit(tuple(h["coefficients"]), tuple(h["orbit"]), h["criterion12"], h["good_reduction"], h["minimal"])
        for h in doc["hits"]
    ]


def parse_table(text: str) -> dict:
    """Inverse of :func:`render_text`: orbit tuple -> list of coefficient tuples."""
    groups: dict = {}
    current = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("orbit"):
            current = tuple(x.strip() for x in line.split(":", 1)[1].split("->"))
            groups[current] = []
        else:
            if current is None:
                raise ValueError("coefficient row before any orbit line")
            groups[current].append(tuple(int(x) for x in line.split()))
    return groups


def compare_golden(hits, degree: int, golden_text: str) -> list:
    """Differences between a search result and a golden table; empty when identical."""
    produced = render_text(hits, degree)
    if produced == golden_text:
        return []
    diffs = []
    want, got = parse_table(golden_text), classify_hits_by_orbit(hits)
    for orbit in want.keys() - got.keys():
        diffs.append(f"missing orbit class {' -> '.join(orbit)}")
    for orbit in got.keys() - want.keys():
        diffs.append(f"unexpected orbit class {' -> '.join(orbit)}")
    for orbit in want.keys() & got.keys():
        a, b = set(want[orbit]), set(got[orbit])
        for t in sorted(a - b):
            diffs.append(f"missing {t} in {' -> '.join(orbit)}")
        for t in sorted(b - a):
            diffs.append(f"unexpected {t} in {' -> '.join(orbit)}")
    if not diffs:
        diffs.append("same content, different layout or order")
    return diffs
