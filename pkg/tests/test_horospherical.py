import json
from pathlib import Path

import pytest
from gkmcobordism.coeff_series import QQ

from gkmcobordism.fgl import FormalGroupLaw
from gkmcobordism.gkm_model import (
    CongruenceConstraint,
    check_membership,
    congruence_system,
    congruence_system_json,
)
from gkmcobordism.horospherical import (
    PasquierTriple,
    UnresolvedSurfaceKindError,
    build_gkm,
    chi,
    point_weights,
    surface_scan,
)
from gkmcobordism.torus_ring import Character, TorusRing

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_triple_validation():
    with pytest.raises(ValueError):
        PasquierTriple(family=1, n=2).validate()
    with pytest.raises(ValueError):
        PasquierTriple(family=3, n=2, m=3).validate()
    with pytest.raises(ValueError):
        PasquierTriple(family=6).validate()
    PasquierTriple(family=3, n=4, m=2).validate()


def test_chi_values():
    assert chi(PasquierTriple(family=3, n=3, m=3)) == Character((0, 0, 1))
    assert chi(PasquierTriple(family=3, n=2, m=2)) == Character((0, 1))
    half = QQ(1, 2)
    assert chi(PasquierTriple(family=1, n=3)) == Character((half, half, -half))
    assert chi(PasquierTriple(family=2)) == Character((half, -half, -half))
    assert chi(PasquierTriple(family=5)) == Character((1, 0, -1))
    assert chi(PasquierTriple(family=4)) == Character((half, half, half, -half))


def test_surface_scans():
    none_scan = surface_scan(PasquierTriple(family=1, n=3))
    assert none_scan.kind == "none" and none_scan.root is None

    p2_scan = surface_scan(PasquierTriple(family=3, n=2, m=2))
    assert p2_scan.kind == "P2"
    assert p2_scan.root == Character((0, 2))
    assert p2_scan.pairings == (1, 0)
    assert p2_scan.fixed_points == 3

    g2_scan = surface_scan(PasquierTriple(family=5))
    assert g2_scan.kind == "Fn" and g2_scan.n == 3
    assert g2_scan.pairings == (1, 3)
    assert g2_scan.fixed_points == 4

    f4_scan = surface_scan(PasquierTriple(family=4))
    assert f4_scan.kind == "unresolved"
    assert f4_scan.fixed_points == 4

    # family 2: no positive root is proportional to chi, so no surface at all
    b3_scan = surface_scan(PasquierTriple(family=2))
    assert b3_scan.kind == "none"


def test_ig25_points_and_surfaces():
    datum = build_gkm(PasquierTriple(family=3, n=2, m=2))
    assert datum.points == ("x12", "x13", "x14", "x23", "x25", "x34", "x35", "x45")
    assert "x15" not in datum.points and "x24" not in datum.points
    assert len(datum.edges) == 8
    assert len(datum.surfaces) == 4
    point_sets = {frozenset(s.points) for s in datum.surfaces}
    assert point_sets == {
        frozenset({"x12", "x13", "x14"}),
        frozenset({"x12", "x23", "x25"}),
        frozenset({"x14", "x34", "x45"}),
        frozenset({"x25", "x35", "x45"}),
    }
    for s in datum.surfaces:
        assert s.kind == "P2"


def test_ig25_congruences_match_fixture_bytes():
    datum = build_gkm(PasquierTriple(family=3, n=2, m=2))
    built = congruence_system_json(congruence_system(datum))
    raw = json.loads((FIXTURES / "ig25_congruences.json").read_text())
    fixture = [CongruenceConstraint.from_json_obj(obj) for obj in raw]
    fixture_canonical = congruence_system_json(sorted(fixture, key=lambda c: c.sort_key()))
    assert built == fixture_canonical


def test_ig25_build_is_byte_stable():
    a = build_gkm(PasquierTriple(family=3, n=2, m=2)).dumps()
    b = build_gkm(PasquierTriple(family=3, n=2, m=2)).dumps()
    assert a == b


def test_family1_no_surfaces():
    datum = build_gkm(PasquierTriple(family=1, n=3))
    assert datum.surfaces == ()
    # 12 cosets in the flag orbit, 8 in the spinor orbit
    assert len(datum.points) == 20
    assert all(p.startswith(("y(", "z(")) for p in datum.points)
    # joining lines: one per coset of W modulo the joint stabilizer W_{a1}
    lines = [e for e in datum.edges if {e.a[0], e.b[0]} == {"y", "z"}]
    assert len(lines) == 24


def test_family2_builds_without_surfaces():
    datum = build_gkm(PasquierTriple(family=2))
    assert datum.surfaces == ()
    assert len(datum.points) == 14


def test_family5_f3_surfaces():
    datum = build_gkm(PasquierTriple(family=5))
    assert len(datum.points) == 12
    assert len(datum.surfaces) == 6
    for s in datum.surfaces:
        assert s.kind == "Fn" and s.n == 3
        # top and bottom points come from the second closed orbit
        assert s.points[0].startswith("z(") and s.points[3].startswith("z(")
        assert s.points[1].startswith("y(") and s.points[2].startswith("y(")
    system = congruence_system(datum)
    fn = [c for c in system if c.kind == "fn"]
    assert len(fn) == 6 and all(c.n == 3 for c in fn)


def test_family4_requires_override():
    with pytest.raises(UnresolvedSurfaceKindError):
        build_gkm(PasquierTriple(family=4))
    datum = build_gkm(PasquierTriple(family=4), force_kind="fn:2")
    assert datum.surfaces and all(s.kind == "Fn" and s.n == 2 for s in datum.surfaces)


def test_surface_edges_absorbed():
    # curves inside a surface with weight proportional to its root are not
    # duplicated as explicit edges
    datum = build_gkm(PasquierTriple(family=3, n=2, m=2))
    surface_pairs = set()
    for s in datum.surfaces:
        for a in s.points:
            for b in s.points:
                if a < b:
                    surface_pairs.add((a, b))
    for e in datum.edges:
        pair = tuple(sorted((e.a, e.b)))
        if pair in surface_pairs:
            for s in datum.surfaces:
                if set(pair) <= set(s.points):
                    assert not e.weight.proportional_to(s.alpha)


@pytest.mark.parametrize(
    "args, order",
    [
        (dict(family=3, n=2, m=2), 8),
        (dict(family=5), 6),
        (dict(family=1, n=3), 5),
        (dict(family=2), 5),
    ],
    ids=("ig25", "g2", "b3-spinor", "b3-quadric"),
)
def test_hyperplane_class_tuple_is_member(args, order):
    """The restriction of the hyperplane class of the defining projective
    embedding: point -> chern(point weight).  It must satisfy every edge and
    surface congruence of the built datum, which exercises the orderings and
    the correction factors against actual geometry."""
    triple = PasquierTriple(**args)
    datum = build_gkm(triple)
    ring = TorusRing(FormalGroupLaw.universal(order), datum.rank)
    weights = point_weights(triple)
    assert set(weights) == set(datum.points)
    values = {p: ring.chern(weights[p]) for p in datum.points}
    certificate = check_membership(datum, values, ring)
    assert certificate.is_member


def test_surface_points_connected_by_proportional_congruences():
    # inside each surface the chain congruences connect all its points, with
    # moduli proportional to the surface root
    for triple in (PasquierTriple(family=3, n=2, m=2), PasquierTriple(family=5)):
        datum = build_gkm(triple)
        system = congruence_system(datum)
        for s in datum.surfaces:
            inside = [
                c
                for c in system
                if c.kind == "edge"
                and set(c.points) <= set(s.points)
                and c.character.proportional_to(s.alpha)
            ]
            reached = {s.points[0]}
            changed = True
            while changed:
                changed = False
                for c in inside:
                    a, b = c.points
                    if a in reached and b not in reached:
                        reached.add(b)
                        changed = True
                    elif b in reached and a not in reached:
                        reached.add(a)
                        changed = True
            assert reached == set(s.points)


def test_build_validates():
    datum = build_gkm(PasquierTriple(family=3, n=3, m=2))
    datum.validate()
    assert len(datum.surfaces) == 12
    for s in datum.surfaces:
        assert s.kind == "P2" and len(s.points) == 3
