import pytest
from hypothesis import assume, given, settings, strategies as st

from quadstrata.core import WHOLE, ComponentSelector, G, InvalidComponent, RootedResidueConfig, StratumSignature
from quadstrata.oracle import (
    ARITH_EVEN,
    ARITH_ODD,
    CROSSE,
    NOT_REALIZABLE,
    REALIZABLE,
    REALIZABLE_NO_WITNESS,
    TRIANGULAR,
    ComponentUnknownForGenusGe2,
    NonPrimitiveStratum,
    Verdict,
    arithmetic_normal_form,
    classify,
    decide,
    is_crosse,
    is_triangular,
    roots_sum_to_zero,
)

small = st.integers(-6, 6)
gaussians = st.builds(G, small, small)
nonzero = gaussians.filter(bool)


def sig(genus, orders):
    return StratumSignature.from_orders(genus, orders)


def doubles(*roots):
    return RootedResidueConfig([], [G.coerce(r) for r in roots])


@given(gaussians, gaussians, gaussians)
def test_triangular_closed_form_matches_sign_enumeration(r1, r2, r3):
    assert is_triangular(r1.square(), r2.square(), r3.square()) == roots_sum_to_zero(r1, r2, r3)


@given(gaussians, gaussians)
def test_residues_of_roots_summing_to_zero_are_triangular(r1, r2):
    assert is_triangular(r1.square(), r2.square(), (r1 + r2).square())


def test_crosse_patterns():
    assert is_crosse([1, 1, G(0, 1), G(0, 1)])
    assert is_crosse([3, 3, 3, 3])
    assert not is_crosse([1, 1, 2, 3])
    assert not is_crosse([1, 2])
    assert not is_crosse([0, 0, 1, 1])


def test_arithmetic_normal_form_extracts_coprime_integers():
    form = arithmetic_normal_form([2, -4, G(6)])
    assert form.roots == (1, 2, 3) and form.parity == "even"
    assert arithmetic_normal_form([1, G(0, 1)]) is None
    assert arithmetic_normal_form([G(0, 3), G(0, 1)]).roots == (3, 1)


STRATA_WITH_DOUBLES = [
    sig(0, [1, 1, -2, -2, -2]),
    sig(0, [3, 1, -2, -2, -2, -2]),
    sig(0, [1, -1, -2, -2]),
    sig(0, [3, 3, -2, -2, -2, -2, -2]),
    sig(0, [1, 3, -4, -2, -2]),
    sig(1, [4, -2, -2]),
]


@settings(max_examples=200)
@given(st.sampled_from(STRATA_WITH_DOUBLES), st.data(), nonzero)
def test_verdict_is_invariant_under_scaling(s, data, lam):
    ev = data.draw(st.lists(gaussians, min_size=s.p, max_size=s.p))
    db = data.draw(st.lists(nonzero, min_size=s.s, max_size=s.s))
    cfg = RootedResidueConfig(ev, db)
    assert classify(s, cfg) == classify(s, cfg.scaled(lam))


@settings(max_examples=200)
@given(st.sampled_from(STRATA_WITH_DOUBLES), st.data())
def test_verdict_ignores_the_order_of_double_poles(s, data):
    ev = data.draw(st.lists(gaussians, min_size=s.p, max_size=s.p))
    db = data.draw(st.lists(nonzero, min_size=s.s, max_size=s.s))
    perm = data.draw(st.permutations(db))
    assert classify(s, RootedResidueConfig(ev, db)).status == classify(s, RootedResidueConfig(ev, perm)).status


@given(st.lists(nonzero, min_size=3, max_size=3), st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3))
def test_verdict_depends_on_residues_not_on_root_signs(roots, signs):
    s = sig(0, [1, 1, -2, -2, -2])
    flipped = [r * G(e) for r, e in zip(roots, signs)]
    assert classify(s, doubles(*roots)) == classify(s, doubles(*flipped))


def test_verdict_invariant_between_status_and_obstruction():
    with pytest.raises(ValueError):
        Verdict(NOT_REALIZABLE, None, "Thm 1.8")
    with pytest.raises(ValueError):
        Verdict(REALIZABLE, CROSSE, "Thm 1.8")
    with pytest.raises(ValueError):
        Verdict(REALIZABLE, None, "")


def test_obstruction_families_on_double_poles():
    assert classify(sig(0, [1, -1, -2, -2]), doubles(1, -1)).obstruction == CROSSE
    assert classify(sig(0, [1, 1, -2, -2, -2]), doubles(1, 2, 3)).obstruction == TRIANGULAR
    assert classify(sig(0, [5, 1, -2, -2, -2, -2, -2]), doubles(1, 1, 1, 1, 1)).obstruction == ARITH_ODD
    assert classify(sig(0, [5, 1, -2, -2, -2, -2, -2]), doubles(1, 1, 1, 1, 2)).obstruction == ARITH_EVEN


def test_the_simplest_double_pole_stratum_realizes_every_residue():
    for r in (1, G(0, 1), G(3, -2), G(1, 7)):
        assert classify(sig(0, [-1, -1, -2]), doubles(r)).realizable


def test_all_even_genus_zero_strata_are_refused():
    with pytest.raises(NonPrimitiveStratum):
        classify(sig(0, [2, -6]), RootedResidueConfig([0]))


def test_components_are_not_computed_beyond_genus_one():
    with pytest.raises(ComponentUnknownForGenusGe2):
        classify(sig(2, [5, 1, -2]), doubles(1), ComponentSelector(1))


def test_rotation_number_must_be_legal():
    with pytest.raises(InvalidComponent):
        classify(sig(1, [4, -4]), RootedResidueConfig([1]), ComponentSelector(3))


def test_whole_exceptional_stratum_is_realizable_at_the_origin():
    s = sig(1, [6, -6])
    origin = RootedResidueConfig([0])
    assert classify(s, origin, WHOLE).realizable
    assert not classify(s, origin, ComponentSelector(1)).realizable
    assert classify(s, origin, ComponentSelector(3)).realizable


def test_decide_attaches_a_recipe_or_says_no_witness():
    v = decide(sig(0, [1, 1, -2, -2, -2]), doubles(1, 2, 4))
    assert v.status == REALIZABLE and v.witness == "cylinder_chain_search"
    v = decide(sig(2, [5, 1, -2]), doubles(1))
    assert v.status == REALIZABLE_NO_WITNESS and v.realizable
    v = decide(sig(1, [4, -4]), RootedResidueConfig([0]))
    assert v.to_json() == {"status": "NotRealizable", "obstruction": "Origin", "citation": "Thm 1.2 i"}


@settings(max_examples=60, deadline=None)
@given(st.lists(nonzero, min_size=3, max_size=4))
def test_decided_witnesses_verify(roots):
    s = sig(0, [1, 1, -2, -2, -2]) if len(roots) == 3 else sig(0, [3, 1, -2, -2, -2, -2])
    v = decide(s, doubles(*roots))
    assume(v.status == REALIZABLE)
    from quadstrata.constructors import construct

    w = construct(s, doubles(*roots))
    assert w.check() == w.claimed
