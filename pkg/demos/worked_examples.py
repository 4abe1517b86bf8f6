"""Two p = 3 maps traced from the level-1 action down to the minimal decomposition.

Run with: python3 demos/worked_examples.py
"""

from __future__ import annotations

from padic_dynamics import PrimeContext, RationalMap
from padic_dynamics.decomposition import decompose
from padic_dynamics.dynamics import (
    analyze_cycle,
    build_level_system,
    check_minimal_levels,
    check_minimal_thm11,
    cycles_of,
    lift_cycle,
    residue_orbit,
)
from padic_dynamics.ratmap import lipschitz_certificate, reduce_mod_p


def trace(text: str, p: int = 3, max_level: int = 4):
    ctx = PrimeContext(p, max_level)
    phi = RationalMap.parse(text)
    print(f"== {phi} over Q_{p}")
    print(f"reduction mod {p}: {reduce_mod_p(phi, ctx)}")
    print(f"1-Lipschitz certificate: {lipschitz_certificate(phi, ctx)}")

    level1 = build_level_system(phi, 1, ctx)
    print("level-1 action:", ", ".join(f"{a} -> {b}" for a, b in level1.as_labels().items()))

    cycles, tails = cycles_of(level1)
    for cyc in cycles:
        node = analyze_cycle(phi, cyc, ctx)
        print(" ", node)
        # follow the cycle down while it keeps growing
        while node.level < 3 and node.behaviour.value == "grows":
            (node,) = lift_cycle(phi, node, ctx)
            print(" ", node)
    if tails:
        print("  tails feeding cycles:", ", ".join(sorted(tails)))

    orbit = residue_orbit(phi, 0, 3, 4, ctx)
    print(f"orbit of 0 mod {p ** 3}:", " -> ".join(b.label for b in orbit))

    v = check_minimal_thm11(phi, ctx)
    print(f"minimal by first return: {v.minimal}; by level-{3 if p < 5 else 2} transitivity: {check_minimal_levels(phi, ctx)}")

    report = decompose(phi, ctx)
    print(report.summary())
    print()


if __name__ == "__main__":
    trace("-(2z^2+2z+1)/(z^3-3z^2+z+1)")
    trace("(2z+3)/((z-1)(z-2))")
