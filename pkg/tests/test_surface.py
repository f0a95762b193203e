import pytest
from hypothesis import given, settings, strategies as st

from quadstrata.constructors import witness_catalog
from quadstrata.core import G
from quadstrata.surface import (
    HALF_TURN,
    NEGATIVE,
    POLYGON,
    POSITIVE,
    TRANSLATION,
    AlreadyGlued,
    BadOrder,
    BadType,
    DegeneratePolygon,
    EdgeRef,
    FlatSurface,
    FreeEdge,
    Gluing,
    Hop,
    LocalInvariants,
    NotClosed,
    Piece,
    SelfIntersection,
    SurfaceBuilder,
    VectorMismatch,
    analyze,
    arguments_monotone,
    ccw_crossings,
    check_half_plane,
    check_polygon,
    find_rotation_certificates,
    intersection_count,
    loop_index,
    make_polar_part_even,
    make_polar_part_odd,
    make_polar_part_order2,
    verify,
)

I = G(0, 1)
CATALOG = {e.name: e for e in witness_catalog()}


def square_torus() -> FlatSurface:
    return FlatSurface([Piece(POLYGON, "S", [1, I, -1, -I])],
                       [Gluing(EdgeRef("S", 0), EdgeRef("S", 2), TRANSLATION),
                        Gluing(EdgeRef("S", 1), EdgeRef("S", 3), TRANSLATION)])


def pillowcase() -> FlatSurface:
    # 1 x 2 rectangle, top and bottom translated, each side folded at its midpoint
    return FlatSurface([Piece(POLYGON, "R", [1, I, I, -1, -I, -I])],
                       [Gluing(EdgeRef("R", 0), EdgeRef("R", 3), TRANSLATION),
                        Gluing(EdgeRef("R", 1), EdgeRef("R", 2), HALF_TURN),
                        Gluing(EdgeRef("R", 4), EdgeRef("R", 5), HALF_TURN)])


def crossed_polar_part() -> FlatSurface:
    b = SurfaceBuilder()
    part = make_polar_part_even(4, 1, [I, I], [-I, -I]).add_to(b, "e0")
    b.glue(part.upper[0], part.lower[1], HALF_TURN)
    b.glue(part.upper[1], part.lower[0], HALF_TURN)
    return b.build()


def test_square_torus_is_a_non_primitive_torus_with_one_regular_point():
    inv = verify(square_torus())
    assert inv == LocalInvariants(1, (), (), (), True, False, marked_points=1)


def test_pillowcase_has_four_simple_poles():
    inv = verify(pillowcase())
    assert inv.genus == 0
    assert inv.zero_orders == (-1, -1, -1, -1)
    assert inv.primitive
    assert analyze(pillowcase()).vertex_angles == [1, 1, 1, 1]


def test_polar_part_glued_crosswise_is_a_genus_one_surface():
    inv = verify(crossed_polar_part())
    assert (inv.genus, inv.zero_orders, inv.pole_orders) == (1, (4,), (-4,))
    assert inv.residue_map == {"e0": G(-16)}
    assert inv.primitive
    certs = find_rotation_certificates(crossed_polar_part())
    assert certs and {c.rho for c in certs} == {1}


def test_loops_on_the_square_torus():
    s = square_torus()
    horizontal, vertical = [Hop("S", 3, 1)], [Hop("S", 0, 2)]
    assert loop_index(s, horizontal) == 0
    assert loop_index(s, vertical) == 0
    assert intersection_count(s, horizontal, vertical) == 1


def test_open_loop_is_rejected():
    with pytest.raises(NotClosed):
        loop_index(square_torus(), [Hop("S", 0, 1)])


@pytest.mark.parametrize("vectors,reason", [
    ([G(2, 2), G(0, -2), G(-2, 2), G(0, -2)], "not simple"),
    ([1, I, -1], "close up"),
    ([1, -I, -1, I], "positively oriented"),
    ([1, 1, -2], "folds back"),
])
def test_bad_polygons_are_rejected(vectors, reason):
    with pytest.raises(DegeneratePolygon, match=reason):
        check_polygon([G.coerce(v) for v in vectors])


def test_half_plane_boundary_must_be_simple():
    check_half_plane([G(1, 1), G(1, -1)], G(1))
    with pytest.raises(SelfIntersection):
        check_half_plane([G(1, 1), G(-3, -2)], G(1))
    with pytest.raises(SelfIntersection):
        check_half_plane([G(1), G(0)], G(1))


def test_builder_rejects_mismatched_and_repeated_gluings():
    b = SurfaceBuilder()
    b.add(Piece(POLYGON, "S", [1, I, -1, -I]))
    with pytest.raises(VectorMismatch):
        b.glue(EdgeRef("S", 0), EdgeRef("S", 1), TRANSLATION)
    b.glue(EdgeRef("S", 0), EdgeRef("S", 2), TRANSLATION)
    with pytest.raises(AlreadyGlued):
        b.glue(EdgeRef("S", 2), EdgeRef("S", 0), TRANSLATION)
    assert b.free_edges() == [EdgeRef("S", 1), EdgeRef("S", 3)]
    with pytest.raises(FreeEdge):
        b.build()


def test_half_turn_needs_equal_vectors():
    b = SurfaceBuilder()
    b.add(Piece(POLYGON, "S", [1, I, -1, -I]))
    with pytest.raises(VectorMismatch):
        b.glue(EdgeRef("S", 0), EdgeRef("S", 2), HALF_TURN)


def test_edited_vector_is_reported_as_a_mismatch():
    data = square_torus().to_json()
    data["pieces"][0]["vectors"][0] = G(2).to_json()
    with pytest.raises(VectorMismatch):
        FlatSurface.from_json(data)


@pytest.mark.parametrize("b,tau,error", [(5, 1, BadOrder), (2, 1, BadOrder), (6, 3, BadType), (6, 0, BadType)])
def test_even_polar_part_parameters(b, tau, error):
    with pytest.raises(error):
        make_polar_part_even(b, tau, [1], [1])


def test_odd_polar_part_needs_an_odd_order():
    with pytest.raises(BadOrder):
        make_polar_part_odd(4, "upper", [1])


@pytest.mark.parametrize("c,pieces", [(3, 1), (5, 2), (7, 3)])
def test_odd_polar_part_piece_count(c, pieces):
    assert len(make_polar_part_odd(c, "upper", [1]).pieces) == pieces


def test_even_polar_part_uses_tau_minus_one_left_and_remaining_right_domains():
    part = make_polar_part_even(10, 2, [1], [1])
    kinds = [p.kind for p in part.pieces]
    assert kinds[:2] == [POSITIVE, NEGATIVE]
    assert len(part.pieces) == 2 + 1 + 2


def test_cylinder_residue_is_the_square_of_its_circumference():
    b = SurfaceBuilder()
    a = make_polar_part_order2([G(1, 2)], prefix="A").add_to(b, "a")
    c = make_polar_part_order2([G(-1, -2)], prefix="B").add_to(b, "b")
    b.glue(a.upper[0], c.upper[0], TRANSLATION)
    inv = verify(b.build())
    assert inv.residue_map == {"a": G(1, 2).square(), "b": G(1, 2).square()}
    assert not inv.primitive  # translations only


@pytest.mark.parametrize("frm,to,expected", [
    (G(1), G(1), 2),
    (G(1), G(-1), 1),
    (G(1), I, 0),
    (I, G(1), 2),
])
def test_ccw_crossings_counts_half_turns(frm, to, expected):
    assert ccw_crossings(frm, to) == expected


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_surface_json_round_trip_is_exact(name):
    surf = CATALOG[name].build().surface
    again = FlatSurface.from_json(surf.to_json())
    assert again.to_json() == surf.to_json()
    assert verify(again) == verify(surf)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(CATALOG)),
       st.builds(G, st.integers(-3, 3), st.integers(-3, 3)).filter(bool))
def test_similarity_keeps_orders_and_scales_residues(name, lam):
    surf = CATALOG[name].build().surface
    a, b = verify(surf), verify(surf.scaled(lam))
    assert (a.genus, a.zero_orders, a.pole_orders, a.primitive) == (b.genus, b.zero_orders, b.pole_orders, b.primitive)
    assert b.residue_map == {k: v * lam.square() for k, v in a.residue_map.items()}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_degree_identity_on_catalog_surfaces(name):
    assert verify(CATALOG[name].build().surface).degree_identity_holds()


def test_monotone_arguments_in_the_right_half_plane():
    assert arguments_monotone([G(1, 2), G(1), G(1, -3)])
    assert not arguments_monotone([G(1), G(1, 2)])
    assert arguments_monotone([G(1), G(1, 2)], decreasing=False)
    assert not arguments_monotone([G(-1, 1)])
