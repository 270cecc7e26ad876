"""Exact symbolic layer: series atoms, product terms, rational combinations.

The reduction machinery rewrites lattice sums as rational linear
combinations of four atom kinds:

* ``Z(s)``              single zeta value, s >= 2
* ``E(s1,s2[,s3])``     Euler sum over n1 > n2 (> n3) >= 1, s1 >= 2
* ``MT(a,b,c)``         double sum m1^-a m2^-b (m1+m2)^-c
* ``W(s1,...,s6)``      triple sum with denominators m1, m2, m3, m1+m2,
                        m2+m3, m1+m2+m3

Coefficients are ``fractions.Fraction``; no floats enter this module.  The
serialized form of a combination is grammar-stable, e.g.::

    3/2 * Z(3)*MT(2,2,2) + -1 * E(4,2)

and ``parse`` round-trips ``render`` exactly.  ``W`` atoms keep the slot
order they were built with: the m1 <-> m3 relabeling gives every tuple a
twin, and evaluating both orientations independently is itself one of the
verified identities, so nothing here may silently fold them together.
``canonical_atom`` exposes the folding for callers that want it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import InadmissibleIndex

RationalLike = Union[int, Fraction]


def binomial(n: int, k: int) -> int:
    """C(n, k), defined as 0 outside the Pascal triangle.

    The expansion formulas below rely on out-of-range binomials vanishing
    instead of raising, so this wrapper is used everywhere instead of
    ``math.comb``.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class SingleZeta:
    """zeta(s) = sum_{n>=1} n^-s, admissible for s >= 2."""

    s: int

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 2:
            raise InadmissibleIndex(f"Z({self.s}) diverges or is malformed")

    @property
    def weight(self) -> int:
        return self.s

    def render(self) -> str:
        return f"Z({self.s})"


@dataclass(frozen=True)
class EulerSum:
    """Nested sum over n1 > ... > nr >= 1 of prod nj^-sj, depth 2 or 3.

    Admissible when every index is >= 1 and the leading index is >= 2.
    """

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) not in (2, 3):
            raise InadmissibleIndex(f"E{idx} must have depth 2 or 3")
        if any(not isinstance(s, int) or s < 1 for s in idx):
            raise InadmissibleIndex(f"E{idx} has an index below 1")
        if idx[0] < 2:
            raise InadmissibleIndex(f"E{idx} diverges (leading index 1)")

    @property
    def weight(self) -> int:
        return sum(self.indices)

    def render(self) -> str:
        return f"E({','.join(map(str, self.indices))})"


@dataclass(frozen=True)
class MordellTornheim3:
    """MT(a,b,c) = sum_{m1,m2>=1} m1^-a m2^-b (m1+m2)^-c.

    Symmetric in (a, b); instances are stored with a <= b.  Convergence
    needs a+c >= 2, b+c >= 2 and a+b+c >= 3, which is enforced here so a
    constructed atom always denotes a finite value.
    """

    a: int
    b: int
    c: int

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if any(not isinstance(v, int) or v < 0 for v in (a, b, c)):
            raise InadmissibleIndex(f"MT({a},{b},{c}) is malformed")
        if a + c < 2 or b + c < 2 or a + b + c < 3:
            raise InadmissibleIndex(f"MT({a},{b},{c}) diverges")
        if a > b:
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def weight(self) -> int:
        return self.a + self.b + self.c

    def render(self) -> str:
        return f"MT({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class WittenSl4:
    """The six-denominator triple sum; slots are kept in the given order."""

    s: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        s = tuple(self.s)
        object.__setattr__(self, "s", s)
        if len(s) != 6 or any(not isinstance(v, int) or v < 0 for v in s):
            raise InadmissibleIndex(f"W{s} is malformed")

    @property
    def weight(self) -> int:
        return sum(self.s)

    def mirror(self) -> "WittenSl4":
        """The m1 <-> m3 relabeling twin (equal as a number)."""
        s = self.s
        return WittenSl4((s[2], s[1], s[0], s[4], s[3], s[5]))

    def render(self) -> str:
        return f"W({','.join(map(str, self.s))})"


Atom = Union[SingleZeta, EulerSum, MordellTornheim3, WittenSl4]

_ATOM_RANK = {SingleZeta: 0, EulerSum: 1, MordellTornheim3: 2, WittenSl4: 3}


def atom_key(atom: Atom) -> tuple:
    """Deterministic sort key used for term ordering and rendering."""
    rank = _ATOM_RANK[type(atom)]
    if isinstance(atom, SingleZeta):
        return (rank, (atom.s,))
    if isinstance(atom, EulerSum):
        return (rank, (len(atom.indices),) + atom.indices)
    if isinstance(atom, MordellTornheim3):
        return (rank, (atom.a, atom.b, atom.c))
    return (rank, atom.s)


def canonical_atom(atom: Atom) -> Atom:
    """Fold relabeling twins: W tuples map to the lex-min orientation."""
    if isinstance(atom, WittenSl4):
        twin = atom.mirror()
        return atom if atom.s <= twin.s else twin
    return atom


# ---------------------------------------------------------------------------
# terms and linear combinations


@dataclass(frozen=True)
class Term:
    """A product of atoms; the empty product is the constant 1."""

    factors: tuple[Atom, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.factors, key=atom_key))
        object.__setattr__(self, "factors", ordered)

    @property
    def weight(self) -> int:
        return sum(f.weight for f in self.factors)

    def render(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f.render() for f in self.factors)

    def sort_key(self) -> tuple:
        return (self.weight, len(self.factors), tuple(atom_key(f) for f in self.factors))


class LinearCombination:
    """A finite rational linear combination of terms.

    Behaves like an immutable value: arithmetic returns new instances and
    zero coefficients are dropped eagerly, so equality is exact equality of
    the represented expression.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Union[dict, Iterable[tuple[Term, RationalLike]], None] = None):
        acc: dict[Term, Fraction] = {}
        if entries:
            pairs = entries.items() if isinstance(entries, dict) else entries
            for term, coef in pairs:
                coef = Fraction(coef)
                if coef:
                    acc[term] = acc.get(term, Fraction(0)) + coef
                    if not acc[term]:
                        del acc[term]
        self._entries = acc

    # constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "LinearCombination":
        return LinearCombination()

    @staticmethod
    def from_term(term: Term, coef: RationalLike = 1) -> "LinearCombination":
        return LinearCombination([(term, coef)])

    @staticmethod
    def from_atom(atom: Atom, coef: RationalLike = 1) -> "LinearCombination":
        return LinearCombination([(Term((atom,)), coef)])

    # inspection -------------------------------------------------------

    def items(self) -> list[tuple[Term, Fraction]]:
        """Entries in deterministic (weight, structure) order."""
        return sorted(self._entries.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, term: Term) -> Fraction:
        return self._entries.get(term, Fraction(0))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self) -> Iterator[tuple[Term, Fraction]]:
        return iter(self.items())

    # algebra ----------------------------------------------------------

    def __add__(self, other: "LinearCombination") -> "LinearCombination":
        out = dict(self._entries)
        for term, coef in other._entries.items():
            out[term] = out.get(term, Fraction(0)) + coef
        return LinearCombination(out)

    def __sub__(self, other: "LinearCombination") -> "LinearCombination":
        return self + other.scale(-1)

    def scale(self, coef: RationalLike) -> "LinearCombination":
        coef = Fraction(coef)
        return LinearCombination({t: c * coef for t, c in self._entries.items()})

    def __mul__(self, coef: RationalLike) -> "LinearCombination":
        return self.scale(coef)

    __rmul__ = __mul__

    def __neg__(self) -> "LinearCombination":
        return self.scale(-1)

    def product(self, other: "LinearCombination") -> "LinearCombination":
        """Bilinear product, expanding term by term."""
        out: dict[Term, Fraction] = {}
        for t1, c1 in self._entries.items():
            for t2, c2 in other._entries.items():
                merged = Term(t1.factors + t2.factors)
                out[merged] = out.get(merged, Fraction(0)) + c1 * c2
        return LinearCombination(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearCombination) and self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    # rendering --------------------------------------------------------

    def render(self) -> str:
        if not self._entries:
            return "0"
        return " + ".join(f"{coef} * {term.render()}" for term, coef in self.items())

    def __repr__(self) -> str:
        return f"LinearCombination({self.render()})"


def canonicalize(lc: LinearCombination) -> LinearCombination:
    """Fold every atom to its canonical orientation (may merge terms)."""
    out: list[tuple[Term, Fraction]] = []
    for term, coef in lc.items():
        folded = Term(tuple(canonical_atom(f) for f in term.factors))
        out.append((folded, coef))
    return LinearCombination(out)


# ---------------------------------------------------------------------------
# parsing

_ATOM_RE = re.compile(r"^(Z|E|MT|W4|W)\((\d+(?:,\d+)*)\)$")
_COEF_RE = re.compile(r"^-?\d+(?:/\d+)?$")

_ARITY = {"Z": (1, 1), "E": (2, 3), "MT": (3, 3), "W": (6, 6)}


def parse_atom(text: str) -> Atom:
    """Parse one atom literal such as ``MT(2,2,2)`` or ``W(1,2,3,4,0,6)``.

    ``W4`` is accepted as an input alias for ``W``; rendering always
    emits ``W``, so round trips stay stable.
    """
    m = _ATOM_RE.match(text.strip())
    if not m:
        raise InadmissibleIndex(f"cannot parse atom {text!r}")
    kind, argtext = m.groups()
    if kind == "W4":
        kind = "W"
    args = tuple(int(v) for v in argtext.split(","))
    lo, hi = _ARITY[kind]
    if not lo <= len(args) <= hi:
        raise InadmissibleIndex(f"{kind} takes {lo}..{hi} indices, got {len(args)}")
    if kind == "Z":
        return SingleZeta(args[0])
    if kind == "E":
        return EulerSum(args)
    if kind == "MT":
        return MordellTornheim3(*args)
    return WittenSl4(args)


def parse_term(text: str) -> Term:
    text = text.strip()
    if text == "1":
        return Term(())
    return Term(tuple(parse_atom(p) for p in text.split("*")))


def parse(text: str) -> LinearCombination:
    """Parse the serialized combination grammar; inverse of ``render``.

    A bare term without a coefficient (``MT(2,2,2)``) is accepted with an
    implied coefficient of 1 for CLI convenience.
    """
    text = text.strip()
    if text == "0":
        return LinearCombination.zero()
    entries: list[tuple[Term, Fraction]] = []
    for piece in text.split(" + "):
        piece = piece.strip()
        if " * " in piece:
            coeftext, termtext = piece.split(" * ", 1)
            if not _COEF_RE.match(coeftext.strip()):
                raise InadmissibleIndex(f"bad coefficient {coeftext!r}")
            entries.append((parse_term(termtext), Fraction(coeftext)))
        else:
            entries.append((parse_term(piece), Fraction(1)))
    return LinearCombination(entries)
