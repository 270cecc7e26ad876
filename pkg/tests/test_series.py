import math

import pytest

import oracles
from wreduce.errors import (
    ConvergenceUnverified,
    ToleranceUnreachable,
    UnsupportedParams,
)
from wreduce.exact import (
    EulerSum,
    LinearCombination,
    MordellTornheim3,
    SingleZeta,
    Term,
    WittenSl4,
)
from wreduce.series import (
    Evaluation,
    SummationConfig,
    clear_caches,
    eval_atom,
    eval_lincomb,
)


def overlap(ev, ref):
    mid, rad = ref
    return abs(ev.midpoint - mid) <= ev.radius + rad


def test_config_validation():
    with pytest.raises(ToleranceUnreachable):
        SummationConfig(tolerance=0.0).validated()
    with pytest.raises(ToleranceUnreachable):
        SummationConfig(tolerance=-1e-6).validated()
    with pytest.raises(ToleranceUnreachable):
        SummationConfig(tolerance=1e-18).validated()
    with pytest.raises(UnsupportedParams):
        SummationConfig(max_terms=100).validated()
    with pytest.raises(UnsupportedParams):
        SummationConfig(precision_bits=64).validated()
    SummationConfig().validated()


def test_evaluation_coerces_numpy_scalars():
    import numpy as np

    ev = Evaluation(np.float64(1.5), np.float64(0.25), np.int64(7))
    assert type(ev.midpoint) is float
    assert type(ev.radius) is float
    assert type(ev.terms) is int
    assert repr(ev.midpoint) == "1.5"


def test_zeta_against_reference(cfg8):
    for s in range(2, 11):
        ev = eval_atom(SingleZeta(s), cfg8)
        assert ev.radius <= 1e-8
        assert overlap(ev, oracles.zeta_ref(s))


def test_zeta2_pinned(cfg8):
    ev = eval_atom(SingleZeta(2), cfg8)
    assert abs(ev.midpoint - math.pi**2 / 6) <= ev.radius


def test_euler_double_against_reference(cfg8):
    for s in [(2, 1), (3, 1), (2, 2), (4, 2), (5, 1), (6, 3)]:
        ev = eval_atom(EulerSum(s), cfg8)
        assert ev.radius <= 1e-8
        assert overlap(ev, oracles.euler2_ref(*s)), s


def test_euler_triple_against_reference(cfg8):
    for s in [(2, 1, 1), (3, 2, 1), (2, 2, 2), (4, 1, 2), (5, 2, 1), (2, 1, 2)]:
        ev = eval_atom(EulerSum(s), cfg8)
        assert ev.radius <= 1e-8
        assert overlap(ev, oracles.euler3_ref(*s)), s


def test_euler_inadmissible_leading_one_rejected(cfg6):
    from wreduce.errors import WreduceError

    with pytest.raises(WreduceError):
        eval_atom(EulerSum((1, 2)), cfg6)


def test_mt_against_reference(cfg8):
    for s in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (2, 2, 2), (3, 1, 2), (1, 1, 4)]:
        ev = eval_atom(MordellTornheim3(*s), cfg8)
        assert ev.radius <= 1e-8
        assert overlap(ev, oracles.mt_ref(*s)), s


def test_mt222_pinned_value(cfg8):
    ev = eval_atom(MordellTornheim3(2, 2, 2), cfg8)
    assert abs(ev.midpoint - 0.3391143539948164) <= ev.radius + 1e-13


def test_witten_separable_corner(cfg8):
    # all composite exponents zero: the sum factors into three zetas
    ev = eval_atom(WittenSl4((2, 3, 4, 0, 0, 0)), cfg8)
    z2 = eval_atom(SingleZeta(2), cfg8)
    z3 = eval_atom(SingleZeta(3), cfg8)
    z4 = eval_atom(SingleZeta(4), cfg8)
    prod = z2.midpoint * z3.midpoint * z4.midpoint
    prod_rad = (
        z2.radius * abs(z3.midpoint * z4.midpoint)
        + z3.radius * abs(z2.midpoint * z4.midpoint)
        + z4.radius * abs(z2.midpoint * z3.midpoint)
        + 1e-15
    )
    assert abs(ev.midpoint - prod) <= ev.radius + prod_rad


def test_witten_collapsed_against_reference(cfg6):
    for s in [(2, 2, 2, 2, 0, 2), (1, 1, 2, 2, 0, 1), (3, 1, 2, 2, 0, 1),
              (2, 2, 3, 2, 0, 0), (1, 2, 0, 2, 0, 3)]:
        ev = eval_atom(WittenSl4(s), cfg6)
        assert ev.radius <= 1e-6
        n = max(2 * ev.terms, 400)
        n = min(n, 900)
        assert overlap(ev, oracles.w4_ref(s, n)), s


def test_witten_general_against_reference(cfg6):
    for s in [(2, 1, 2, 1, 1, 1), (1, 2, 1, 3, 1, 2), (1, 1, 1, 1, 1, 1),
              (0, 0, 2, 2, 2, 2), (2, 3, 4, 2, 3, 2)]:
        ev = eval_atom(WittenSl4(s), cfg6)
        assert ev.radius <= 1e-6
        assert overlap(ev, oracles.w4_ref(s, 2 * ev.terms)), s


def test_witten_hub_mirror_agree(cfg6):
    # s4 = 0 dispatches via the mirror image; both spellings of the same
    # sum must agree
    w = WittenSl4((2, 1, 2, 0, 2, 2))
    ev = eval_atom(w, cfg6)
    em = eval_atom(w.mirror(), cfg6)
    assert abs(ev.midpoint - em.midpoint) <= ev.radius + em.radius


def test_convergence_gate_rejects_thin_exponents(cfg6):
    with pytest.raises(ConvergenceUnverified):
        eval_atom(WittenSl4((1, 1, 1, 1, 1, 0)), cfg6)
    with pytest.raises(ConvergenceUnverified):
        eval_atom(WittenSl4((1, 0, 1, 1, 1, 0)), cfg6)


def test_collapsed_gate_rejects_unit_row_sums(cfg6):
    # f = 0 needs c >= 2: W(a,b,1,d,0,0) carries a bare zeta(1) factor
    with pytest.raises(ConvergenceUnverified):
        eval_atom(WittenSl4((2, 2, 1, 2, 0, 0)), cfg6)
    with pytest.raises(ConvergenceUnverified):
        eval_atom(WittenSl4((2, 2, 0, 2, 0, 1)), cfg6)


def test_tolerance_unreachable_reports_certified_radius():
    cfg = SummationConfig(tolerance=1e-6)
    with pytest.raises(ToleranceUnreachable) as exc:
        eval_atom(WittenSl4((2, 1, 2, 1, 0, 0)), cfg)
    assert "certified radius" in str(exc.value)


def test_eval_is_deterministic_and_cache_transparent(cfg6):
    atom = WittenSl4((2, 1, 2, 1, 1, 1))
    a = eval_atom(atom, cfg6)
    b = eval_atom(atom, cfg6)
    assert (a.midpoint, a.radius, a.terms) == (b.midpoint, b.radius, b.terms)
    clear_caches()
    c = eval_atom(atom, cfg6)
    assert (a.midpoint, a.radius, a.terms) == (c.midpoint, c.radius, c.terms)


def test_eval_lincomb_linearity(cfg6):
    lc = LinearCombination.from_atom(MordellTornheim3(2, 2, 2))
    one = eval_lincomb(lc, cfg6)
    two = eval_lincomb(lc.scale(2), cfg6)
    assert abs(two.midpoint - 2 * one.midpoint) <= two.radius + 2 * one.radius
    assert two.radius <= 1e-6


def test_eval_lincomb_constant_term(cfg6):
    from fractions import Fraction

    lc = LinearCombination.from_term(Term(()), Fraction(5, 3))
    ev = eval_lincomb(lc, cfg6)
    assert abs(ev.midpoint - 5 / 3) < 1e-12
    assert ev.radius < 1e-12


def test_eval_lincomb_empty_is_zero(cfg6):
    ev = eval_lincomb(LinearCombination.zero(), cfg6)
    assert ev.midpoint == 0.0
    assert ev.radius == 0.0


def test_product_term_evaluation(cfg8):
    lc = LinearCombination.from_term(
        Term((SingleZeta(3), MordellTornheim3(2, 2, 2))), 1
    )
    ev = eval_lincomb(lc, cfg8)
    z3 = oracles.zeta_ref(3)
    mt = oracles.mt_ref(2, 2, 2)
    prod_mid = z3[0] * mt[0]
    prod_rad = z3[1] * abs(mt[0]) + mt[1] * abs(z3[0]) + z3[1] * mt[1]
    assert abs(ev.midpoint - prod_mid) <= ev.radius + prod_rad
