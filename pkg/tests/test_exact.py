from fractions import Fraction

import pytest

from wreduce.errors import InadmissibleIndex
from wreduce.exact import (
    EulerSum,
    LinearCombination,
    MordellTornheim3,
    SingleZeta,
    Term,
    WittenSl4,
    canonicalize,
    parse,
    parse_atom,
    parse_term,
)


def test_atom_weights():
    assert SingleZeta(3).weight == 3
    assert EulerSum((4, 2)).weight == 6
    assert EulerSum((2, 1, 1)).weight == 4
    assert MordellTornheim3(2, 3, 4).weight == 9
    assert WittenSl4((1, 2, 3, 4, 5, 6)).weight == 21


def test_term_weight_and_render():
    t = Term((SingleZeta(2), MordellTornheim3(1, 1, 2)))
    assert t.weight == 6
    assert t.render() == "Z(2)*MT(1,1,2)"
    assert Term(()).render() == "1"
    assert Term(()).weight == 0


def test_term_factor_ordering_is_canonical():
    a = Term((SingleZeta(2), EulerSum((3, 1))))
    b = Term((EulerSum((3, 1)), SingleZeta(2)))
    assert a == b
    assert hash(a) == hash(b)


def test_mirror_is_an_involution():
    w = WittenSl4((2, 3, 4, 2, 3, 2))
    assert w.mirror() == WittenSl4((4, 3, 2, 3, 2, 2))
    assert w.mirror().mirror() == w
    for s in [(1, 1, 1, 1, 1, 1), (1, 2, 3, 4, 5, 6), (0, 0, 2, 2, 2, 2)]:
        assert WittenSl4(s).mirror().mirror() == WittenSl4(s)


def test_linear_combination_merges_duplicates_exactly():
    t = Term((SingleZeta(2),))
    lc = LinearCombination([(t, Fraction(1, 3))] * 3)
    assert lc.coefficient(t) == 1
    # exact cancellation drops the term entirely
    z = lc - LinearCombination.from_term(t, Fraction(1))
    assert z == LinearCombination.zero()
    assert z.render() == "0"


def test_linear_combination_algebra():
    x = LinearCombination.from_atom(SingleZeta(2))
    y = LinearCombination.from_atom(EulerSum((3, 1)))
    s = x + y
    assert s.coefficient(Term((SingleZeta(2),))) == 1
    assert (s - x) == y
    assert (-x).coefficient(Term((SingleZeta(2),))) == -1
    assert x.scale(Fraction(3, 2)).coefficient(Term((SingleZeta(2),))) == Fraction(3, 2)


def test_product_is_bilinear():
    x = LinearCombination.from_atom(SingleZeta(2))
    y = LinearCombination.from_atom(EulerSum((3, 1)))
    z = LinearCombination.from_atom(MordellTornheim3(1, 1, 2))
    lhs = (x + y).product(z)
    rhs = x.product(z) + y.product(z)
    assert lhs == rhs
    tz = Term((SingleZeta(2), MordellTornheim3(1, 1, 2)))
    assert lhs.coefficient(tz) == 1


def test_items_sorted_by_weight_then_structure():
    lc = (
        LinearCombination.from_atom(EulerSum((5, 3)))
        + LinearCombination.from_atom(SingleZeta(2))
        + LinearCombination.from_atom(EulerSum((2, 1)))
    )
    weights = [t.weight for t, _ in lc.items()]
    assert weights == sorted(weights)


def test_render_parse_round_trip():
    lc = (
        LinearCombination.from_term(
            Term((SingleZeta(3), MordellTornheim3(2, 2, 2))), Fraction(-7, 3)
        )
        + LinearCombination.from_term(Term((EulerSum((4, 1, 1)),)), Fraction(5))
        + LinearCombination.from_term(Term(()), Fraction(1, 2))
    )
    assert parse(lc.render()) == lc


def test_parse_round_trip_on_rendered_w():
    lc = LinearCombination.from_atom(WittenSl4((1, 2, 0, 3, 0, 4)))
    assert parse(lc.render()) == lc


def test_parse_accepts_w4_alias():
    assert parse_atom("W4(1,1,1,1,1,0)") == WittenSl4((1, 1, 1, 1, 1, 0))
    assert parse_atom("W(1,1,1,1,1,0)") == WittenSl4((1, 1, 1, 1, 1, 0))
    # rendering never emits the alias
    assert LinearCombination.from_atom(parse_atom("W4(1,2,3,4,5,6)")).render() == (
        "1 * W(1,2,3,4,5,6)"
    )


def test_parse_bare_term_gets_unit_coefficient():
    lc = parse("MT(2,2,2)")
    assert lc.coefficient(Term((MordellTornheim3(2, 2, 2),))) == 1


def test_parse_rejects_garbage():
    for bad in ["Q(3)", "W(1,2)", "Z()", "E(2,1,1,1)", "MT(1,2)", "Z(2) *"]:
        with pytest.raises(InadmissibleIndex):
            parse(bad)


def test_parse_term_products():
    t = parse_term("Z(2)*E(3,1)")
    assert t == Term((SingleZeta(2), EulerSum((3, 1))))


def test_canonicalize_is_idempotent():
    lc = parse("2 * Z(2)*MT(1,1,2) + -1/2 * E(3,1,1)")
    assert canonicalize(lc) == canonicalize(canonicalize(lc))
