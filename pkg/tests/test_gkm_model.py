import json
import random

import pytest
from gkmcobordism.coeff_series import QQ

from gkmcobordism.coeff_series import TruncatedSeries
from gkmcobordism.fgl import FormalGroupLaw
from gkmcobordism.gkm_model import (
    CongruenceConstraint,
    DecompositionError,
    GkmDatum,
    GkmEdge,
    GkmValidationError,
    SurfaceComponent,
    check_membership,
    congruence_system,
    reconstruct,
    surface_decompose,
    surface_generators,
)
from gkmcobordism.torus_ring import Character, TorusRing

from conftest import random_series

TS = TruncatedSeries


def C(*coords):
    return Character(coords)


ALPHA = C(2, 0)

KINDS = [
    SurfaceComponent("P2", ("x", "y", "z"), ALPHA, model="V0V1"),
    SurfaceComponent("P2", ("x", "y", "z"), ALPHA, model="V2"),
    SurfaceComponent("F0", ("w", "x", "y", "z"), ALPHA),
    SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA, n=1),
    SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA, n=2),
    SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA, n=3),
    SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA, n=4),
]


@pytest.fixture(scope="module")
def ring():
    return TorusRing(FormalGroupLaw.universal(8), 2)


def surface_datum(surface):
    return GkmDatum(rank=2, points=surface.points, edges=(), surfaces=(surface,))


def test_single_edge_datum():
    datum = GkmDatum(
        rank=2, points=("a", "b"), edges=(GkmEdge("a", "b", C(1, 0)),)
    )
    system = congruence_system(datum)
    assert len(system) == 1
    assert system[0].kind == "edge" and system[0].points == ("a", "b")


def test_f0_congruence_shape():
    surface = SurfaceComponent("F0", ("w", "x", "y", "z"), ALPHA)
    system = congruence_system(surface_datum(surface))
    kinds = [c.kind for c in system]
    assert kinds.count("edge") == 4
    assert kinds.count("f0") == 1
    f0 = next(c for c in system if c.kind == "f0")
    assert f0.points == ("w", "x", "y", "z") and f0.power == 2


def test_datum_validation():
    with pytest.raises(GkmValidationError):
        congruence_system(
            GkmDatum(rank=2, points=("a",), edges=(GkmEdge("a", "a", C(1, 0)),))
        )
    with pytest.raises(GkmValidationError):
        congruence_system(
            GkmDatum(rank=2, points=("a", "b"), edges=(GkmEdge("a", "b", C(0, 0)),))
        )
    with pytest.raises(GkmValidationError):
        SurfaceComponent("P2", ("x", "y", "z"), ALPHA).validate()  # missing model
    with pytest.raises(GkmValidationError):
        SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA).validate()  # missing n


def test_constant_tuples_are_members(ring):
    for surface in KINDS[:3]:
        datum = surface_datum(surface)
        values = {p: ring.one() for p in surface.points}
        assert check_membership(datum, values, ring).is_member


def test_missing_point_raises(ring):
    datum = surface_datum(KINDS[0])
    with pytest.raises(GkmValidationError):
        check_membership(datum, {"x": ring.zero()}, ring)


@pytest.mark.parametrize("surface", KINDS, ids=lambda s: f"{s.kind}{s.n or ''}{s.model or ''}")
def test_generators_pass_membership(surface, ring):
    datum = surface_datum(surface)
    for gen in surface_generators(surface, ring):
        assert check_membership(datum, gen, ring).is_member


def test_p2_models_differ_in_generators(ring):
    v01 = surface_generators(KINDS[0], ring)
    v2 = surface_generators(KINDS[1], ring)
    assert v01[1]["y"] == ring.chern(C(1, 0))
    assert v01[1]["z"] == ring.chern(C(2, 0))
    assert v2[1]["y"] == ring.chern(C(2, 0))
    assert v2[1]["z"] == ring.chern(C(4, 0))
    assert v2[2]["z"] == ring.chern(C(2, 0)) * ring.chern(C(4, 0))


def test_fn_and_f0_point_generators(ring):
    f0 = surface_generators(KINDS[2], ring)
    cm = ring.chern(C(-2, 0))
    assert f0[3]["w"] == cm * cm
    f3 = surface_generators(KINDS[5], ring)
    assert f3[3]["w"] == cm * ring.chern(C(-3, 0))


def test_known_non_member(ring):
    surface = KINDS[0]
    datum = surface_datum(surface)
    values = {
        "x": ring.zero(),
        "y": ring.chern(C(1, 0)),
        "z": ring.zero(),
    }
    certificate = check_membership(datum, values, ring)
    assert not certificate.is_member
    failed = {r.constraint.kind for r in certificate.failures()}
    assert "p2" in failed
    with pytest.raises(DecompositionError):
        surface_decompose(surface, values, ring)


def test_generator_decomposes_to_unit_vector(ring):
    for surface in (KINDS[1], KINDS[2], KINDS[4]):
        gens = surface_generators(surface, ring)
        for i, gen in enumerate(gens):
            dec = surface_decompose(surface, gen, ring)
            for j, coeff in enumerate(dec.coefficients):
                expected = ring.one() if j == i else ring.zero()
                assert coeff.agrees_through(expected, dec.certified_order)


def test_decompose_linearity_example(ring):
    surface = KINDS[0]
    gens = surface_generators(surface, ring)
    alpha_class = ring.chern(ALPHA)
    values = {
        p: gens[0][p] + alpha_class * gens[1][p] for p in surface.points
    }
    dec = surface_decompose(surface, values, ring)
    assert dec.coefficients[0].agrees_through(ring.one(), dec.certified_order)
    assert dec.coefficients[1].agrees_through(alpha_class, dec.certified_order)
    assert dec.coefficients[2].agrees_through(ring.zero(), dec.certified_order)


@pytest.mark.parametrize("surface", KINDS, ids=lambda s: f"{s.kind}{s.n or ''}{s.model or ''}")
def test_decompose_round_trip_random(surface, ring, rng):
    gens = surface_generators(surface, ring)
    for _ in range(5):
        coeffs = [random_series(rng, 2, 8, terms=3) for _ in gens]
        values = reconstruct(surface, coeffs, ring)
        dec = surface_decompose(surface, values, ring)
        rebuilt = reconstruct(surface, dec.coefficients, ring)
        for p in surface.points:
            assert values[p].agrees_through(rebuilt[p], dec.certified_order)


def test_membership_invariant_under_global_multiplication(ring, rng):
    surface = KINDS[3]
    datum = surface_datum(surface)
    gens = surface_generators(surface, ring)
    coeffs = [random_series(rng, 2, 8, terms=2) for _ in gens]
    values = reconstruct(surface, coeffs, ring)
    scale = random_series(rng, 2, 8, terms=3)
    scaled = {p: v * scale for p, v in values.items()}
    assert check_membership(datum, scaled, ring).is_member


def test_additive_reduction_of_surface_conditions():
    """Under the additive law the correction factors are the constants
    1/2 and +-n/2, so the surface conditions become linear congruences."""
    ring = TorusRing(FormalGroupLaw.additive(8), 2)
    rng = random.Random(31)
    values = {
        p: random_series(rng, 2, 8, terms=3, rational_only=True)
        for p in ("w", "x", "y", "z")
    }
    half = TS.constant(QQ(1, 2), 2, 8)
    assert ring.rho_factor(1, 2, ALPHA) == half
    p2 = CongruenceConstraint("p2", ("x", "y", "z"), ALPHA, 2)
    expected = (values["x"] - values["y"]) + half * (values["z"] - values["x"])
    assert p2.residual(values, ring) == expected
    for n in (1, 2, 3, 4):
        fn = CongruenceConstraint("fn", ("w", "x", "y", "z"), ALPHA, 2, n=n)
        assert ring.rho_factor(n, 2, ALPHA) == TS.constant(QQ(n, 2), 2, 8)
        assert ring.rho_factor(-n, 2, ALPHA) == TS.constant(QQ(-n, 2), 2, 8)
        expected = TS.constant(QQ(n, 2), 2, 8) * (values["y"] - values["z"]) + TS.constant(
            QQ(-n, 2), 2, 8
        ) * (values["w"] - values["x"])
        assert fn.residual(values, ring) == expected


def test_certificate_json_round_trip(ring):
    surface = KINDS[0]
    datum = surface_datum(surface)
    gens = surface_generators(surface, ring)
    certificate = check_membership(datum, gens[1], ring)
    obj = json.loads(certificate.dumps())
    assert obj["member"] is True
    assert len(obj["constraints"]) == len(congruence_system(datum))
    reparsed = [CongruenceConstraint.from_json_obj(c["constraint"]) for c in obj["constraints"]]
    assert reparsed == congruence_system(datum)


def test_datum_json_round_trip():
    datum = GkmDatum(
        rank=2,
        points=("a", "b", "c"),
        edges=(GkmEdge("a", "b", C(1, 0)), GkmEdge("b", "c", C(0, 1))),
        surfaces=(SurfaceComponent("P2", ("a", "b", "c"), ALPHA, model="V2"),),
        ordering=(QQ(2), QQ(1)),
    )
    datum.validate()
    clone = GkmDatum.from_json_obj(json.loads(datum.dumps()))
    assert clone.points == tuple(sorted(datum.points))
    assert clone.rank == datum.rank
    assert congruence_system(clone) == congruence_system(datum)
    assert clone.dumps() == GkmDatum.from_json_obj(json.loads(clone.dumps())).dumps()
