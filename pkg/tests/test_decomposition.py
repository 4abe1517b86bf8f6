from __future__ import annotations

import pytest

from conftest import EXAMPLE1, EXAMPLE2, random_good_maps
from padic_dynamics.decomposition import (
    DecompositionReport,
    MinimalComponent,
    OrbitPoint,
    PeriodicOrbitRecord,
    allowed_periods,
    decompose,
    expand_labels,
    odometer_structure,
    periodic_length_check,
)
from padic_dynamics.dynamics import build_level_system, residue_orbit
from padic_dynamics.errors import BadReduction, DegreeTooSmall
from padic_dynamics.padic import PrimeContext
from padic_dynamics.projective import ball_count, parse_ball_label
from padic_dynamics.ratmap import RationalMap

SPLITS_P3 = "(-z^3-3z^2-z+2)/(z^3-2z-1)"


def run(text, p, n):
    phi = RationalMap.parse(text)
    return phi, PrimeContext(p, n), decompose(phi, PrimeContext(p, n))


def test_example1_single_component():
    _, _, r = run(EXAMPLE1, 3, 5)
    assert r.periodic_orbits == () and r.unresolved == () and r.basin == {}
    (c,) = r.components
    assert (c.level, c.balls, c.k, c.ell) == (1, ("0", "2", "1", "~0"), 4, 1)
    assert c.structure_sequence_head == (4, 4, 12, 36)
    assert c.observed_lengths == (4, 12, 36, 108, 324)


def test_example2_component_and_basin():
    _, _, r = run(EXAMPLE2, 3, 4)
    (c,) = r.components
    assert (c.level, c.balls, c.k, c.ell) == (1, ("0",), 1, 1)
    assert c.rule == "p=3: grows at levels 1 and 2"
    assert len(r.basin) == 81 and set(r.basin.values()) == {c.id}
    assert r.periodic_orbits == ()


def test_z_squared_plus_one_p2_attracting_orbits():
    phi, ctx, r = run("z^2+1", 2, 4)
    assert r.components == ()
    kinds = {o.labels: (o.kind, o.period) for o in r.periodic_orbits}
    assert kinds == {("5", "10"): ("attracting", 2), ("~0",): ("attracting", 1)}


def test_z_squared_p3():
    _, _, r = run("z^2", 3, 3)
    kinds = {o.labels: o.kind for o in r.periodic_orbits}
    assert kinds == {("0",): "attracting", ("1",): "indifferent", ("~0",): "attracting"}
    assert [(c.level, c.balls, c.k, c.ell) for c in r.components] == [(2, ("4", "7"), 1, 2), (3, ("10", "19"), 1, 2)]


def test_splits_reaches_unresolved_nodes():
    _, _, r = run(SPLITS_P3, 3, 3)
    assert len(r.unresolved) == 3
    for u in r.unresolved:
        assert u.level == 3 and u.classification == "splits"
        assert len(u.history) == 3 and u.history[0] == "L1(0 1):splits"


@pytest.mark.parametrize("text,p,n", [(EXAMPLE1, 3, 4), (EXAMPLE2, 3, 4), ("z^2+1", 2, 5), ("z^2", 3, 3), (SPLITS_P3, 3, 3)])
def test_partition_and_invariance(text, p, n):
    phi, ctx, r = run(text, p, n)
    owner = r.owner_of_balls()
    assert len(owner) + len(r.basin) == ball_count(n, p)
    assert not owner.keys() & r.basin.keys()
    top = build_level_system(phi, n, ctx)
    # owned sets are forward invariant at the top level
    for label, oid in owner.items():
        image = top.image(parse_ball_label(label, n, p)).label
        assert owner.get(image) == oid


def test_attracting_orbits_fixed_by_period():
    for text, p, n in (("z^2+1", 2, 5), ("z^2", 3, 3), (SPLITS_P3, 3, 3)):
        phi, ctx, r = run(text, p, n)
        for o in r.periodic_orbits:
            for label in o.labels:
                start = parse_ball_label(label, n, p).representative()
                balls = residue_orbit(phi, start, n, 1, ctx, power=o.period)
                assert balls[1].label == label


def test_random_decompositions_cover_and_have_allowed_periods():
    for p, phi in random_good_maps(41, 24, primes=(2, 3, 5), degrees=(2, 3)):
        ctx = PrimeContext(p, 3)
        r = decompose(phi, ctx)
        assert len(r.owner_of_balls()) + len(r.basin) == ball_count(3, p)
        assert periodic_length_check(r, ctx)


def test_json_round_trip():
    for text, p, n in ((EXAMPLE1, 3, 4), ("z^2", 3, 3), (SPLITS_P3, 3, 3)):
        _, _, r = run(text, p, n)
        assert DecompositionReport.from_json(r.to_json()) == r


def test_dot_output_colours_each_node():
    _, _, r = run(SPLITS_P3, 3, 3)
    dot = r.to_dot()
    assert dot.startswith("digraph lift_tree {") and dot.rstrip().endswith("}")
    for t in r.lift_tree:
        assert f"  {t.id} [" in dot
    assert "lightskyblue" in dot
    assert dot.count("->") == sum(1 for t in r.lift_tree if t.parent is not None)


def test_summary_mentions_everything():
    _, _, r = run("z^2", 3, 3)
    text = r.summary()
    assert "periodic orbit P1: indifferent" in text
    assert "minimal component M0" in text and "basin: 25 level-3 balls" in text


def test_odometer_structures():
    c = MinimalComponent("M0", 1, ("0",), 4, 1, (4, 4, 12, 36), "rule")
    s = odometer_structure(c, 3)
    assert s.head() == (4, 4, 12, 36)
    assert str(s) == "(4, 4, 12, 36, ...)"
    assert odometer_structure(c).p == 3
    assert odometer_structure(MinimalComponent("M1", 2, ("4", "7"), 1, 2, (1, 2, 6, 18), "r"), 3).head(5) == (1, 2, 6, 18, 54)


def test_expand_labels():
    assert expand_labels(["1"], 1, 2, 3) == ["1", "4", "7"]
    assert expand_labels(["~0"], 1, 2, 2) == ["~0", "~2"]


def test_allowed_periods_p2():
    assert allowed_periods(2) == {1, 2, 3, 4, 6}


def test_period_check_rejects_bad_period():
    fake = DecompositionReport(
        2, 3, "fake", periodic_orbits=(PeriodicOrbitRecord("P0", 5, "attracting", tuple(OrbitPoint(str(i), 8) for i in range(5))),)
    )
    assert not periodic_length_check(fake)


def test_decompose_errors():
    with pytest.raises(DegreeTooSmall):
        decompose(RationalMap.parse("2z+1"), PrimeContext(3, 3))
    with pytest.raises(BadReduction):
        decompose(RationalMap.parse("z^2/3"), PrimeContext(3, 3))
