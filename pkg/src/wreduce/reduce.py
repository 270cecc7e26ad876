"""Symbolic reduction of the triple and double sums to Euler-sum bases.

The route mirrors how the values are proved reducible.  A double index
``(a, b)`` on two variables that only meet inside composite denominators
can be telescoped to its boundary columns; the binomial weights of that
telescoping drive three reductions:

* ``reduce_mt`` writes a double sum with one composite factor as a
  rational combination of depth-two Euler sums,
* ``reduce_unit_witten`` writes the unit-exponent triple sums
  ``W(a,b,1,d,0,1)`` as combinations of depth-three Euler sums,
* ``reduce_witten`` peels a general ``W(a,b,c,d,0,f)`` into single zetas
  times double sums, depth-three Euler sums, and one unit-exponent
  remainder that ``reduce_unit_witten`` finishes off.

Two transcriptions of one binomial family inside the main reduction are
circulating; both are implemented behind ``variant`` ("eq22" and
"paper-final") so the probe in ``verify`` can show which one closes
numerically.  Everything here is exact Fraction arithmetic; no floats.

The four-term exchange relation (``four_term_lhs`` / ``four_term_rhs``)
is exposed for the verifier: it is the engine behind the main reduction
and is checked as an identity in its own right.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    InadmissibleIndex,
    InadmissibleOutput,
    InternalNoncancellation,
    UnsupportedParams,
)
from .exact import (
    EulerSum,
    LinearCombination,
    MordellTornheim3,
    SingleZeta,
    Term,
    WittenSl4,
    binomial,
)

VARIANTS = ("eq22", "paper-final")


def pair_recurrence_weights(
    a: int, b: int, p: Fraction, q: Fraction
) -> tuple[list[tuple[int, Fraction]], list[tuple[int, Fraction]]]:
    """Boundary weights of the two-index telescoping.

    For any family F obeying F(a,b,s) = p F(a-1,b,s+1) + q F(a,b-1,s+1),
    repeated substitution lands on the boundary:

        F(a,b,s) = sum_j left[j] * F(0,j,a+b+s-j)
                 + sum_j right[j] * F(j,0,a+b+s-j)

    Returned as (left, right) lists of (j, weight).  ``a, b >= 1``.
    """
    if a < 1 or b < 1:
        raise InadmissibleIndex("telescoping needs both exponents positive")
    left = [
        (j, p**a * q ** (b - j) * binomial(a + b - j - 1, a - 1)) for j in range(1, b + 1)
    ]
    right = [
        (j, p ** (a - j) * q**b * binomial(a + b - j - 1, b - 1)) for j in range(1, a + 1)
    ]
    return left, right


def _euler(indices: tuple[int, ...]) -> EulerSum:
    try:
        return EulerSum(indices)
    except InadmissibleIndex as exc:
        raise InadmissibleOutput(
            f"reduction produced a non-admissible Euler sum {indices}: {exc.message}"
        ) from exc


def reduce_mt(atom: MordellTornheim3) -> LinearCombination:
    """Double sum with one composite factor as depth-two Euler sums.

    Splitting the lattice at m1 <=> m2 and telescoping each half gives

        MT(a,b,c) = sum_{j<=a} C(a+b-j-1, b-1) E(a+b+c-j, j)
                  + sum_{j<=b} C(a+b-j-1, a-1) E(a+b+c-j, j)

    for a, b >= 1.  The degenerate exponents have closed forms of their
    own: c = 0 factors into single zetas, a = 0 is itself an Euler sum,
    and a = b = 0 telescopes to a difference of single zetas.
    """
    a, b, c = atom.a, atom.b, atom.c
    if c == 0:
        return LinearCombination.from_term(
            Term((SingleZeta(a), SingleZeta(b))), Fraction(1)
        )
    if a == 0 and b == 0:
        out = LinearCombination.from_atom(SingleZeta(c - 1))
        return out + LinearCombination.from_atom(SingleZeta(c)).scale(Fraction(-1))
    if a == 0:
        return LinearCombination.from_atom(_euler((c, b)))
    out = LinearCombination.zero()
    for j in range(1, a + 1):
        out = out + LinearCombination.from_atom(_euler((a + b + c - j, j))).scale(
            Fraction(binomial(a + b - j - 1, b - 1))
        )
    for j in range(1, b + 1):
        out = out + LinearCombination.from_atom(_euler((a + b + c - j, j))).scale(
            Fraction(binomial(a + b - j - 1, a - 1))
        )
    return out


# ---------------------------------------------------------------------------
# the four-term exchange relation
#
# Moving one exponent pair (a, b) between the lone-variable slots and the
# composite slots costs only zeta-times-double-sum corrections.  The lhs
# mixes four triple sums; the rhs is free of triple sums entirely, which
# is what the main reduction exploits.

def four_term_lhs(a: int, b: int, s: tuple[int, int, int]) -> LinearCombination:
    s1, s2, s3 = s
    sign_a = Fraction((-1) ** a)
    sign_b = Fraction((-1) ** b)
    out = LinearCombination.from_atom(WittenSl4((s1, s2, a, s3, 0, b))).scale(sign_a)
    out = out + LinearCombination.from_atom(WittenSl4((s1, s2, b, s3, 0, a))).scale(sign_b)
    out = out + LinearCombination.from_atom(WittenSl4((a, 0, s2, s1, b, s3)))
    out = out + LinearCombination.from_atom(WittenSl4((b, 0, s1, s2, a, s3)))
    return out


def four_term_rhs(a: int, b: int, s: tuple[int, int, int]) -> LinearCombination:
    """Triple-sum-free side of the exchange relation.

    The divergent single-zeta pieces produced by the two telescopings
    cancel against each other; they are tracked separately and their
    exact cancellation is asserted rather than assumed.
    """
    s1, s2, s3 = s
    if a < 1 or b < 1:
        raise InadmissibleIndex("exchange relation needs positive exponents to move")
    out = LinearCombination.zero()
    stray: dict = {}  # would-be zeta(1) coefficients, keyed by companion atom

    def add_stray(mt: MordellTornheim3, coeff: Fraction) -> None:
        stray[mt] = stray.get(mt, Fraction(0)) + coeff

    for i in range(1, max(a, b) + 1):
        coeff = Fraction(
            (binomial(a + b - i - 1, a - 1) + binomial(a + b - i - 1, b - 1)) * (-1) ** i
        )
        mt = MordellTornheim3(s1, s2, s3 + a + b - i)
        if i == 1:
            add_stray(mt, coeff)
        else:
            out = out + LinearCombination.from_term(
                Term((SingleZeta(i), mt)), coeff
            )
    for i in range(1, a + 1):
        coeff = Fraction(binomial(a + b - i - 1, b - 1))
        mt = MordellTornheim3(s1, s2, s3 + a + b - i)
        if i == 1:
            add_stray(mt, coeff)
        else:
            out = out + LinearCombination.from_term(Term((SingleZeta(i), mt)), coeff)
        out = out + LinearCombination.from_atom(
            MordellTornheim3(s1 + i, s2, s3 + a + b - i)
        ).scale(-coeff)
        out = out + LinearCombination.from_atom(
            MordellTornheim3(s1, s2, s3 + a + b)
        ).scale(-coeff)
    for i in range(1, b + 1):
        coeff = Fraction(binomial(a + b - i - 1, a - 1))
        mt = MordellTornheim3(s1, s2, s3 + a + b - i)
        if i == 1:
            add_stray(mt, coeff)
        else:
            out = out + LinearCombination.from_term(Term((SingleZeta(i), mt)), coeff)
        out = out + LinearCombination.from_atom(
            MordellTornheim3(s2 + i, s1, s3 + a + b - i)
        ).scale(-coeff)
        out = out + LinearCombination.from_atom(
            MordellTornheim3(s1, s2, s3 + a + b)
        ).scale(-coeff)
    for mt, coeff in stray.items():
        if coeff != 0:
            raise InternalNoncancellation(
                f"divergent piece {coeff} * zeta(1) * {mt.render()} survived the exchange"
            )
    return out


# ---------------------------------------------------------------------------
# unit-exponent triple sums

def exchange_weights(a: int, b: int) -> list[tuple[int, Fraction]]:
    """Combined boundary weights for W(a,b,1,d,0,1) -> W(i,0,1,*,0,1) rows.

    Both boundary columns fold onto the same row family (swapping the two
    collapsed variables fixes the sum when the middle composite is
    absent), so the two telescoping weight lists merge by column index.
    """
    left, right = pair_recurrence_weights(a, b, Fraction(1), Fraction(1))
    combined: dict[int, Fraction] = {}
    for i, wgt in left + right:
        combined[i] = combined.get(i, Fraction(0)) + wgt
    return sorted(combined.items())


def unit_tail_expand(alpha: int, cap: int) -> LinearCombination:
    """W(alpha,0,1,0,0,cap) as depth-three Euler sums, cap >= 2.

    Ordering the three variables by their partial sums turns the sum into
    E(cap, alpha, 1) plus the column sums E(cap, alpha+1-i, i).
    """
    if alpha < 1 or cap < 2:
        raise InadmissibleIndex("unit tail expansion needs alpha >= 1 and cap >= 2")
    out = LinearCombination.from_atom(_euler((cap, alpha, 1)))
    for i in range(1, alpha + 1):
        out = out + LinearCombination.from_atom(_euler((cap, alpha + 1 - i, i)))
    return out


def unit_pair_split(alpha: int, delta: int) -> tuple[WittenSl4, LinearCombination]:
    """W(alpha,0,1,delta,0,1) minus its absorbed tail, alpha, delta >= 1.

    Absorbing the middle composite into the total one leaves the tail
    triple sum W(alpha,0,1,0,0,delta+1) plus explicit Euler sums; the
    tail is returned separately so it can be checked before expansion.
    """
    if alpha < 1 or delta < 1:
        raise InadmissibleIndex("unit pair split needs alpha >= 1 and delta >= 1")
    tail = WittenSl4((alpha, 0, 1, 0, 0, delta + 1))
    rest = LinearCombination.zero()
    for i in range(1, delta + 1):
        rest = rest + LinearCombination.from_atom(_euler((delta + 2 - i, i, alpha)))
    return tail, rest


def reduce_unit_witten(a: int, b: int, d: int) -> LinearCombination:
    """W(a,b,1,d,0,1) as depth-three Euler sums.

    Telescopes (a, b) to boundary rows, then splits and expands each row.
    Either of a, b may be zero (the telescoping is skipped); d may be
    zero only when both are positive, since each boundary row needs a
    positive middle exponent.
    """
    if a < 0 or b < 0 or d < 0 or a + b < 1:
        raise InadmissibleIndex("unit reduction needs a+b >= 1 and no negative exponents")

    def expand_row(alpha: int, delta: int) -> LinearCombination:
        _tail, rest = unit_pair_split(alpha, delta)
        return rest + unit_tail_expand(alpha, delta + 1)

    if a == 0 or b == 0:
        if d < 1:
            raise InadmissibleIndex("unit reduction with a boundary row needs d >= 1")
        return expand_row(a + b, d)
    out = LinearCombination.zero()
    for i, wgt in exchange_weights(a, b):
        out = out + expand_row(i, a + b + d - i).scale(wgt)
    return out


# ---------------------------------------------------------------------------
# the main reduction

def reduce_witten(
    atom: WittenSl4,
    variant: str = "eq22",
    expand_remainder: bool = False,
    expand_mt: bool = False,
) -> LinearCombination:
    """W(a,b,c,d,0,f) over the terminal basis.

    The output mixes Z(i)*MT terms, depth-three Euler sums, and one
    unit-exponent remainder W(a,b,1,c+d+f-2,0,1).  ``expand_remainder``
    rewrites the remainder through ``reduce_unit_witten``;
    ``expand_mt`` additionally rewrites every double sum through
    ``reduce_mt``.  ``variant`` selects which published transcription of
    the inner binomial family to use; "eq22" is the one every
    cross-check in the verifier confirms.
    """
    if variant not in VARIANTS:
        raise UnsupportedParams(
            f"variant must be one of {VARIANTS!r}, got {variant!r}"
        )
    s = atom.s
    a, b, c, d, e5, f = s
    if e5 != 0:
        raise UnsupportedParams(
            "reduction covers the family with a vanishing fifth exponent only"
        )
    if a < 1 or b < 1:
        raise UnsupportedParams(
            "reduction needs positive exponents on both collapsed variables"
        )
    if c < 1 or f < 1:
        if f == 0 and c >= 2:
            # no total-sum factor: the third variable separates off
            out = LinearCombination.from_term(
                Term((SingleZeta(c), MordellTornheim3(a, b, d))), Fraction(1)
            )
            return _expand_mt(out) if expand_mt else out
        raise UnsupportedParams(
            "reduction needs positive exponents on the third variable and the total sum"
        )

    if c == 1 and f == 1:
        # the peeling returns its input with coefficient one; go straight
        # to the unit reduction
        return reduce_unit_witten(a, b, d)

    w = a + b + c + d + f
    sign_c = (-1) ** c
    out = LinearCombination.zero()
    for i in range(2, c + 1):
        coeff = Fraction(binomial(c + f - i - 1, f - 1) * sign_c * (-1) ** i)
        out = out + LinearCombination.from_term(
            Term((SingleZeta(i), MordellTornheim3(a, b, c + d + f - i))), coeff
        )
    for i in range(2, f + 1):
        outer = Fraction(binomial(c + f - i - 1, c - 1) * sign_c)
        for j in range(1, a + 1):
            inner = _variant_binomial(a, b, j, b - 1, variant)
            out = out + LinearCombination.from_atom(_euler((i, w - i - j, j))).scale(
                outer * inner
            )
        for j in range(1, b + 1):
            inner = _variant_binomial(a, b, j, a - 1, variant)
            out = out + LinearCombination.from_atom(_euler((i, w - i - j, j))).scale(
                outer * inner
            )
    rem_coeff = Fraction(-sign_c * binomial(c + f - 2, c - 1))
    if expand_remainder:
        out = out + reduce_unit_witten(a, b, c + d + f - 2).scale(rem_coeff)
    else:
        out = out + LinearCombination.from_atom(
            WittenSl4((a, b, 1, c + d + f - 2, 0, 1))
        ).scale(rem_coeff)
    return _expand_mt(out) if expand_mt else out


def _variant_binomial(a: int, b: int, j: int, lower: int, variant: str) -> Fraction:
    if variant == "eq22":
        return Fraction(binomial(a + b - j - 1, lower))
    return Fraction(binomial(a + b + j - 1, lower))


def _expand_mt(lc: LinearCombination) -> LinearCombination:
    """Rewrite every double-sum factor through its Euler-sum reduction."""
    out = LinearCombination.zero()
    for term, coeff in lc.items():
        pieces = LinearCombination.from_term(Term(()), coeff)
        for factor in term.factors:
            if isinstance(factor, MordellTornheim3):
                pieces = pieces.product(reduce_mt(factor))
            else:
                pieces = pieces.product(LinearCombination.from_atom(factor))
        out = out + pieces
    return out


def reduce_any(
    lc: LinearCombination,
    variant: str = "eq22",
    expand_remainder: bool = False,
    expand_mt: bool = False,
) -> LinearCombination:
    """Reduce every reducible atom of a combination, term by term.

    Triple sums go through ``reduce_witten``; double sums through
    ``reduce_mt`` when ``expand_mt`` is set (and stay put otherwise);
    Euler sums and single zetas are already terminal.
    """
    out = LinearCombination.zero()
    for term, coeff in lc.items():
        pieces = LinearCombination.from_term(Term(()), coeff)
        for factor in term.factors:
            if isinstance(factor, WittenSl4):
                pieces = pieces.product(
                    reduce_witten(
                        factor,
                        variant=variant,
                        expand_remainder=expand_remainder,
                        expand_mt=expand_mt,
                    )
                )
            elif isinstance(factor, MordellTornheim3) and expand_mt:
                pieces = pieces.product(reduce_mt(factor))
            else:
                pieces = pieces.product(LinearCombination.from_atom(factor))
        out = out + pieces
    return out
