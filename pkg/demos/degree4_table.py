"""Degree-4 maps over Q_2 singled out by the coefficient criterion.

Enumerates all 4^7 standard-form tuples with entries in {0, 1, 2, 3}, prints the
hits grouped by the level-3 orbit of the ball 0, and shows the criterion's
arithmetic for one tuple.

Run with: python3 demos/degree4_table.py
"""

from __future__ import annotations

import time

from padic_dynamics.p2criterion import check_criterion12, compute_terms, first_derivative_at0_of_cube
from padic_dynamics.search import SearchSpec, render_text, run_search

if __name__ == "__main__":
    t0 = time.perf_counter()
    hits = run_search(SearchSpec(2, 4, 4))
    print(render_text(hits, 4))
    print(f"{len(hits)} hits in {time.perf_counter() - t0:.2f}s; good reduction among them: {sum(h.good_reduction for h in hits)}")

    row = ((1, 0, 1, 3), (3, 1, 0))
    t = compute_terms(row)
    print(f"\nA = {t.A}, B = {t.B}, A1 = {t.A1}, A2 = {t.A2}, A3 = {t.A3}")
    print(f"(phi^3)'(0) = {first_derivative_at0_of_cube(row)}")
    print("\n".join(check_criterion12(row).lines()))
