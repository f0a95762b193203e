import dataclasses
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from quadstrata.constructors import (
    AngleMismatch,
    BadSignature,
    ChainPlan,
    ClaimMismatch,
    ClosureFailure,
    InfeasibleLengths,
    ObstructedConfiguration,
    UnsupportedCase,
    Witness,
    construct,
    construct_cc,
    construct_chain_auto,
    construct_cylinder_chain,
    construct_genus0_odd_pole,
    construct_genus1_single_zero,
    covering_recipe,
    three_pole_plan,
    witness_catalog,
)
from quadstrata.core import WHOLE, ComponentSelector, G, RootedResidueConfig, StratumSignature
from quadstrata.oracle import classify
from quadstrata.surface import find_rotation_certificates

small = st.integers(-5, 5)
nonzero = st.builds(G, small, small).filter(bool)


def sig(genus, orders):
    return StratumSignature.from_orders(genus, orders)


def doubles(*roots):
    return RootedResidueConfig([], [G.coerce(r) for r in roots])


@settings(max_examples=80, deadline=None)
@given(st.lists(nonzero, min_size=3, max_size=3))
def test_polygon_construction_realizes_the_residues_it_is_given(roots):
    s = sig(0, [1, 1, -2, -2, -2])
    cfg = doubles(*roots)
    assume(classify(s, cfg).realizable)
    try:
        w = construct_cc(s, roots)
    except Exception:
        assume(False)  # collinear roots go to the cylinder chains
    inv = w.check()
    assert inv.residue_map == {f"d{k}": r.square() for k, r in enumerate(roots)}
    assert inv.zero_orders == (1, 1)


def test_polygon_with_explicit_split_and_signs():
    s = sig(0, [1, 1, -2, -2, -2])
    roots = [1, G(0, 1), G(2, 3)]
    auto = construct_cc(s, roots)
    split, signs = auto.metadata["split"], auto.metadata["signs"]
    w = construct_cc(s, roots, split=split, signs=signs)
    assert w.check().zero_orders == (1, 1)
    assert w.metadata == auto.metadata


def test_polygon_rejects_a_wrong_closing_vector():
    with pytest.raises(ClosureFailure):
        construct_cc(sig(0, [1, 1, -2, -2, -2]), [1, G(0, 1), G(2, 3)], split=([0], [1, 2]), v=G(5, 1))


def test_polygon_rejects_a_bad_split():
    with pytest.raises(BadSignature):
        construct_cc(sig(0, [1, 1, -2, -2, -2]), [1, G(0, 1), G(2, 3)], split=([0], [0, 2]))


def test_polygon_needs_two_odd_zeros_and_double_poles():
    with pytest.raises(BadSignature):
        construct_cc(sig(1, [4, -2, -2]), [1, 2])
    with pytest.raises(BadSignature):
        construct_cc(sig(0, [1, 1, -2, -2, -2]), [1, 0, 2])


@pytest.mark.parametrize("roots", [(1, 2, 4), (1, 1, 1), (2, 3, 4), (1, 1, 5)])
def test_three_pole_plan_gives_a_chain(roots):
    s = sig(0, [1, 1, -2, -2, -2])
    w = construct_cylinder_chain(s, roots, three_pole_plan(sorted(roots)))
    assert w.check().residue_map == {f"d{k}": G(r * r) for k, r in enumerate(roots)}


def test_chain_with_an_even_cycle_has_singular_lengths():
    s = sig(0, [3, 1, -2, -2, -2, -2])
    with pytest.raises(InfeasibleLengths, match="singular"):
        construct_cylinder_chain(s, [1, 1, 1, 1], ChainPlan(((0, 1), (1, 2), (2, 3), (0, 3))))


def test_chain_with_negative_lengths_is_rejected():
    with pytest.raises(InfeasibleLengths, match="positive"):
        construct_cylinder_chain(sig(0, [1, 1, -2, -2, -2]), [1, 2, 5], ChainPlan(((0, 1), (1, 2), (0, 2))))


def test_chain_lengths_must_add_up():
    plan = ChainPlan(((0, 1), (1, 2), (0, 2)), lengths=(Fraction(1), Fraction(1), Fraction(1)))
    with pytest.raises(InfeasibleLengths):
        construct_cylinder_chain(sig(0, [1, 1, -2, -2, -2]), [2, 2, 3], plan)


def test_chain_with_the_wrong_boundary_order_gives_other_angles():
    plan = ChainPlan(((0, 2), (1, 2), (2, 2)), rotation=(((0, 0),), ((1, 0),), ((0, 1), (1, 1), (2, 0), (2, 1))))
    with pytest.raises(AngleMismatch):
        construct_cylinder_chain(sig(0, [1, 1, -2, -2, -2]), [1, 2, 5], plan)


def test_chain_needs_positive_real_roots():
    with pytest.raises(BadSignature):
        construct_cylinder_chain(sig(0, [1, 1, -2, -2, -2]), [1, G(0, 1), 3], three_pole_plan([1, 1, 3]))


def test_chain_on_a_common_complex_line():
    s = sig(0, [1, 1, -2, -2, -2])
    c = G(1, 1)
    w = construct_chain_auto(s, [c, c * G(2), c * G(-4)])
    assert w.check().residue_map == {"d0": c.square(), "d1": (c * G(2)).square(), "d2": (c * G(4)).square()}


def test_obstructed_configurations_are_refused():
    s = sig(0, [1, 1, -2, -2, -2])
    with pytest.raises(ObstructedConfiguration):
        construct(s, doubles(1, 2, 3))
    with pytest.raises(ObstructedConfiguration):
        construct_genus1_single_zero(sig(1, [4, -4]), RootedResidueConfig([0]))


def test_no_recipe_means_unsupported():
    with pytest.raises(UnsupportedCase):
        construct(sig(2, [5, 1, -2]), doubles(1))
    assert covering_recipe(sig(2, [5, 1, -2]), doubles(1)) is None


@pytest.mark.parametrize("orders,roots", [
    ([1, -3, -2], [1]),
    ([2, -3, -3], []),
    ([3, -3, -2, -2], [2, 1]),
    ([6, -4, -3, -3], [G(1, 1)]),
    ([6, -4, -3, -3], [0]),
    ([4, -3, -3, -2], [G(0, 5)]),
])
def test_odd_pole_constructions_verify(orders, roots):
    s = sig(0, orders)
    cfg = RootedResidueConfig(roots[:s.p], roots[s.p:])
    if not classify(s, cfg).realizable:
        pytest.skip("obstructed configuration")
    w = construct_genus0_odd_pole(s, cfg)
    assert w.check() == w.claimed


@pytest.mark.parametrize("ell,rho", [(2, 1), (3, 3), (4, 1), (5, 1), (5, 5), (6, 3), (6, 1)])
def test_genus_one_zero_residue_reaches_each_component(ell, rho):
    s = sig(1, [2 * ell, -2 * ell])
    w = construct_genus1_single_zero(s, RootedResidueConfig([0]), rho) if (ell, rho) != (2, 1) else None
    if w is None:
        with pytest.raises(ObstructedConfiguration):
            construct_genus1_single_zero(s, RootedResidueConfig([0]), rho)
        return
    w.check()
    assert {c.rho for c in find_rotation_certificates(w.surface)} == {rho}


@settings(max_examples=30, deadline=None)
@given(nonzero, st.sampled_from([(2, 1), (3, 1), (3, 3), (5, 5), (6, 3)]))
def test_genus_one_nonzero_residue_certifies_the_rotation_number(root, case):
    ell, rho = case
    s = sig(1, [2 * ell, -2 * ell])
    w = construct_genus1_single_zero(s, RootedResidueConfig([root]), rho)
    inv = w.check()
    assert inv.residue_map == {"e0": root.square()}
    assert w.claimed_rho == rho


def test_witness_check_catches_a_false_claim():
    w = construct(sig(0, [1, 1, -2, -2, -2]), doubles(1, G(0, 1), G(2, 3)))
    wrong = dataclasses.replace(w.claimed, zero_orders=(3, -1))
    with pytest.raises(ClaimMismatch):
        Witness(w.recipe, w.signature, w.config, w.surface, wrong).check()


def test_witness_check_catches_a_false_rotation_number():
    w = construct(sig(1, [6, -6]), RootedResidueConfig([G(1, 2)]), ComponentSelector(1))
    with pytest.raises(ClaimMismatch):
        dataclasses.replace(w, claimed_rho=3).check()


@pytest.mark.parametrize("entry", witness_catalog(), ids=lambda e: e.name)
def test_catalog_witnesses_verify_and_serialize(entry):
    w = entry.build()
    assert w.check() == w.claimed
    data = w.to_json()
    assert data["recipe"] == w.recipe and "surface" in data


def test_construct_honours_component_selection():
    s = sig(1, [6, -6])
    for rho in (1, 3):
        w = construct(s, RootedResidueConfig([G(1, 2)]), ComponentSelector(rho))
        assert w.claimed_rho == rho
    assert construct(s, RootedResidueConfig([G(1, 2)]), WHOLE).check().genus == 1
