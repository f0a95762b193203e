from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quadstrata.core import (
    WHOLE,
    ComponentSelector,
    ConfigMismatch,
    DegreeMismatch,
    EmptyStratum,
    G,
    IllegalOrder,
    InvalidComponent,
    ParseError,
    RootedResidueConfig,
    StratumSignature,
    canonical_root,
    check_component,
    gaussian_sqrt,
    legal_rotation_numbers,
    max_disjoint_cylinders,
    normalize_by_first_nonzero,
    parse_gaussian,
    rational_inverse,
    solve_rational,
    stratum_nonempty_holomorphic,
    validate_signature,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(G, fractions, fractions)
nonzero_gaussians = gaussians.filter(bool)


@given(gaussians, gaussians, gaussians)
def test_field_axioms_hold_exactly(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == G(0)


@given(gaussians, nonzero_gaussians)
def test_division_inverts_multiplication(a, b):
    assert (a * b) / b == a
    assert b * (G(1) / b) == G(1)


@given(gaussians)
def test_square_root_of_a_square_is_plus_or_minus_the_root(z):
    r = gaussian_sqrt(z.square())
    assert r is not None and r.square() == z.square()
    assert r in (z, -z)


@given(nonzero_gaussians)
def test_canonical_root_picks_one_of_each_sign_pair(z):
    assert canonical_root(z) == canonical_root(-z)
    assert canonical_root(z).square() == z.square()


@pytest.mark.parametrize("text,expected", [
    ("3/2", G(Fraction(3, 2))),
    ("2i", G(0, 2)),
    ("-i", G(0, -1)),
    ("1+2/3i", G(1, Fraction(2, 3))),
    ("1/2-i", G(Fraction(1, 2), -1)),
    (" -4 ", G(-4)),
])
def test_parse_gaussian_accepts_common_spellings(text, expected):
    assert parse_gaussian(text) == expected


@pytest.mark.parametrize("text", ["", "1+", "abc", "1/0", "i+i+"])
def test_parse_gaussian_rejects_garbage(text):
    with pytest.raises(ParseError):
        parse_gaussian(text)


@given(gaussians)
def test_gaussian_json_round_trip(z):
    assert G.from_json(z.to_json()) == z


def test_signature_from_orders_sorts_singularities():
    sig = StratumSignature.from_orders(0, [1, 3, -4, -2, -2, -3, -3])
    assert sig.zeros == (3, 1)
    assert sig.even_poles == (4,)
    assert sig.odd_poles == (3, 3)
    assert sig.double_poles == 2
    assert (sig.p, sig.r, sig.s) == (1, 2, 2)
    assert StratumSignature.from_json(sig.to_json()) == sig


def test_validate_rejects_wrong_degree_and_illegal_orders():
    with pytest.raises(DegreeMismatch):
        validate_signature(StratumSignature.from_orders(1, [4, -5]))
    with pytest.raises(IllegalOrder):
        validate_signature(StratumSignature(0, [-2]))
    with pytest.raises(IllegalOrder):
        validate_signature(StratumSignature(0, [2], even_poles=[6, 5]))


def test_all_even_genus_zero_signature_forces_a_square():
    assert validate_signature(StratumSignature.from_orders(0, [2, -6])).forces_square
    assert not validate_signature(StratumSignature.from_orders(0, [1, 1, -6])).forces_square
    assert not validate_signature(StratumSignature.from_orders(1, [4, -4])).forces_square


@pytest.mark.parametrize("genus,zeros,nonempty", [
    (1, [], False),
    (1, [-1, 1], False),
    (2, [4], False),
    (2, [1, 3], False),
    (2, [2, 2], True),
    (2, [1, 1, 2], True),
    (3, [8], True),
    (0, [-1, -1, -1, -1], True),
    (1, [2, -1, -1], True),
])
def test_holomorphic_nonemptiness(genus, zeros, nonempty):
    assert stratum_nonempty_holomorphic(StratumSignature(genus, zeros)) is nonempty


def test_cylinder_bound_for_two_simple_zeros_and_a_double_zero():
    assert max_disjoint_cylinders(StratumSignature(2, [1, 1, 2])) == 3


def test_cylinder_bound_refuses_empty_strata():
    with pytest.raises(EmptyStratum):
        max_disjoint_cylinders(StratumSignature(2, [4]))


def test_holomorphic_questions_refuse_poles():
    with pytest.raises(IllegalOrder):
        stratum_nonempty_holomorphic(StratumSignature.from_orders(1, [4, -4]))


def test_config_must_match_pole_counts_and_double_roots_are_nonzero():
    sig = StratumSignature.from_orders(0, [1, 1, -2, -2, -2])
    with pytest.raises(ConfigMismatch):
        RootedResidueConfig([], [1, 2]).check_against(sig)
    with pytest.raises(ConfigMismatch):
        RootedResidueConfig([], [1, 0, 2]).check_against(sig)
    RootedResidueConfig([], [1, 2, 3]).check_against(sig)


@given(st.lists(gaussians, min_size=1, max_size=4), st.lists(nonzero_gaussians, max_size=4), nonzero_gaussians)
def test_scaling_a_config_scales_residues_by_the_square(ev, db, lam):
    cfg = RootedResidueConfig(ev, db)
    scaled = cfg.scaled(lam)
    assert scaled.residues() == tuple(r * lam.square() for r in cfg.residues())
    assert RootedResidueConfig.from_json(cfg.to_json()) == cfg


def test_normalize_divides_by_first_nonzero_entry():
    assert normalize_by_first_nonzero([0, 2, G(0, 4)]) == (G(0), G(1), G(0, 2))


@pytest.mark.parametrize("orders,legal", [
    ([4, -4], (1,)),
    ([6, -6], (1, 3)),
    ([12, -6, -6], (1, 3)),
    ([3, 3, -6], (1, 3)),
    ([5, 1, -6], (1,)),
    ([10, -10], (1, 5)),
])
def test_legal_rotation_numbers_are_odd_divisors(orders, legal):
    assert legal_rotation_numbers(StratumSignature.from_orders(1, orders)) == legal


def test_component_selector_validation():
    sig = StratumSignature.from_orders(1, [6, -6])
    check_component(sig, WHOLE)
    check_component(sig, ComponentSelector(3))
    with pytest.raises(InvalidComponent):
        check_component(sig, ComponentSelector(2))
    with pytest.raises(InvalidComponent):
        check_component(StratumSignature.from_orders(0, [1, 1, -2, -2, -2]), ComponentSelector(1))


def test_component_selector_json_forms():
    assert ComponentSelector.from_json("whole") == WHOLE
    assert ComponentSelector.from_json({"rotation_number": 3}) == ComponentSelector(3)
    assert ComponentSelector.from_json("5") == ComponentSelector(5)
    with pytest.raises(ParseError):
        ComponentSelector.from_json("many")


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_agrees_with_inverse(m, b):
    mat = [[Fraction(x) for x in row] for row in m]
    rhs = [Fraction(x) for x in b]
    x = solve_rational(mat, rhs)
    inv = rational_inverse(mat)
    assert (x is None) == (inv is None)
    if x is not None:
        assert [sum(mat[i][j] * x[j] for j in range(3)) for i in range(3)] == rhs
        assert x == [sum(inv[i][j] * rhs[j] for j in range(3)) for i in range(3)]
