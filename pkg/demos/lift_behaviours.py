"""The four ways a cycle of balls can lift one level down, each on a small map.

Run with: python3 demos/lift_behaviours.py [--dot]
With --dot the lift tree of the last map is printed in Graphviz format.
"""

from __future__ import annotations

import sys

from padic_dynamics import PrimeContext, RationalMap
from padic_dynamics.decomposition import decompose
from padic_dynamics.dynamics import analyze_cycle, build_level_system, cycles_of, lift_cycle

CASES = [
    ("grows", "(2z+3)/((z-1)(z-2))", 3),
    ("splits", "(-z^3-3z^2-z+2)/(z^3-2z-1)", 3),
    ("grows with tails", "z^2", 3),
    ("partially splits", "(-2z^3-5z^2-2z+4)/(z^3-3z^2-z+1)", 5),
]


def show(title: str, text: str, p: int):
    ctx = PrimeContext(p, 3)
    phi = RationalMap.parse(text)
    print(f"-- {title}: {phi}, p = {p}")
    for cyc in cycles_of(build_level_system(phi, 1, ctx))[0]:
        node = analyze_cycle(phi, cyc, ctx)
        lifts = lift_cycle(phi, node, ctx)
        print(f"  {node}")
        print(f"    lifts: {[l.labels for l in lifts]} (expected lengths {node.expected_lift_lengths()})")


if __name__ == "__main__":
    for case in CASES:
        show(*case)
    if "--dot" in sys.argv:
        _, text, p = CASES[-1]
        print(decompose(RationalMap.parse(text), PrimeContext(p, 3)).to_dot())
