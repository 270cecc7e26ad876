"""Certified numerical evaluation of the series atoms.

Every evaluator returns an ``Evaluation`` with a midpoint and a radius such
that the true value of the series provably lies inside
``[midpoint - radius, midpoint + radius]``.  The radius accounts for

* truncation, bounded by enclosures of the dropped tails, and
* floating-point rounding, bounded by coarse but safe models of pairwise
  and sequential accumulation error.

Tail machinery comes in two flavors.  Fixed-cutoff tails use the midpoint
integral with a curvature correction (``_em_tail``).  Parametric tails are
carried as "log-power" (LP) forms: dictionaries mapping ``(p, k)`` to an
interval coefficient, denoting ``sum coeff * u^-p * ln(u)^k``.  Summing an
LP form over ``u > U`` uses the elementary sandwich

    integral_U^inf g  - g(U)  <=  sum_{u>U} g(u)  <=  integral_U^inf g

valid for decreasing ``g``, whose closed forms exist for k in {0, 1, 2}.
All bracketing facts used here (harmonic numbers, zeta tails, prefix power
sums) are encoded once as small LP builders and composed with interval
arithmetic, so each evaluator is an assembly of audited pieces rather than
a bespoke estimate.

The triple-sum evaluator picks a strategy from the zero pattern of the
composite exponents: ``s5 = 0`` collapses (m1, m2) to their sum by
convolution, ``s6 = 0`` splits over m2 into two shifted sums, and the
general case uses a boxed lattice sum with face, edge and corner
enclosures.  The slot order given is the slot order summed; relabeling
twins are computed by genuinely different loops, which is what makes the
symmetry check in ``verify`` meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceUnverified,
    InternalNoncancellation,
    ToleranceUnreachable,
    UnsupportedParams,
)
from .exact import (
    Atom,
    EulerSum,
    LinearCombination,
    MordellTornheim3,
    SingleZeta,
    Term,
    WittenSl4,
)

EPS = 2.3e-16  # one ulp of slack over float64 unit roundoff
EULER_GAMMA = 0.5772156649015329

TOLERANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class SummationConfig:
    """Evaluation budget and target accuracy.

    ``max_terms`` caps 1-D cutoffs (and the collapsed outer sums);
    ``max_terms_3d`` caps the per-axis cutoff of boxed triple sums.
    ``precision_bits`` is fixed at native float64; other values are
    rejected rather than silently approximated.
    """

    tolerance: float = 1e-6
    max_terms: int = 10**6
    max_terms_3d: int = 400
    precision_bits: int = 53

    def validated(self) -> "SummationConfig":
        if not (self.tolerance > 0):
            raise ToleranceUnreachable(f"tolerance {self.tolerance} is not positive")
        if self.tolerance < TOLERANCE_FLOOR:
            raise ToleranceUnreachable(
                f"tolerance {self.tolerance} is below the float64 floor {TOLERANCE_FLOOR}"
            )
        if self.precision_bits != 53:
            raise UnsupportedParams(
                f"precision_bits={self.precision_bits}; only native float64 (53) is supported"
            )
        if self.max_terms < 1024:
            raise UnsupportedParams("max_terms below 1024 leaves no room for any ladder")
        if self.max_terms_3d < 16:
            raise UnsupportedParams("max_terms_3d below 16 leaves no room for any ladder")
        return self


@dataclass(frozen=True)
class Evaluation:
    """A certified enclosure: value in [midpoint - radius, midpoint + radius].

    ``terms`` records the truncation cutoff of the dominant sum, so an
    independent checker can rerun a coarser or finer truncation.
    """

    midpoint: float
    radius: float
    terms: int = 0

    def __post_init__(self) -> None:
        # numpy scalars sneak in from vectorized paths; pin the builtin
        # type so repr-based serialization stays uniform
        object.__setattr__(self, "midpoint", float(self.midpoint))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "terms", int(self.terms))


# ---------------------------------------------------------------------------
# interval and rounding helpers

Interval = tuple[float, float]  # (center, radius), radius >= 0


def _imul(a: Interval, b: Interval) -> Interval:
    am, ar = a
    bm, br = b
    return (am * bm, abs(am) * br + abs(bm) * ar + ar * br + EPS * abs(am * bm))


def _sum_err(abs_total: float, n: int) -> float:
    """Rounding bound for numpy pairwise summation of n nonnegative terms."""
    if n <= 1:
        return 0.0
    return EPS * abs_total * (math.log2(n) + 4.0)


def _cumsum(x: np.ndarray) -> tuple[np.ndarray, float]:
    """Running sums of x plus a per-entry rounding coefficient.

    Blocks of ~sqrt(n) keep the sequential-accumulation error coefficient
    near 2 sqrt(n) instead of n; the worst entry error is
    coefficient * EPS * sum(|x|).
    """
    n = x.size
    if n <= 4096:
        return np.cumsum(x), float(n + 4)
    B = 1 << int(math.isqrt(n)).bit_length()
    pad = (-n) % B
    xp = np.pad(x, (0, pad)) if pad else x
    inner = np.cumsum(xp.reshape(-1, B), axis=1)
    offsets = np.concatenate(([0.0], np.cumsum(inner[:-1, -1])))
    out = (inner + offsets[:, None]).reshape(-1)[:n]
    return out, float(B + n // B + 8)


# ---------------------------------------------------------------------------
# fixed-cutoff tail: midpoint integral with curvature correction

def _em_tail(N: float, p: float) -> Interval:
    """Enclosure of sum_{n>N} n^-p for p > 1.

    Midpoint rule on unit cells: the tail is integral_{N+1/2}^inf x^-p dx
    with per-cell error at most f''/24, whose sum is bounded by
    (|f'| + f'')(N+1/2)/24.
    """
    assert p > 1 and N >= 8
    c = N + 0.5
    integral = c ** (1.0 - p) / (p - 1.0)
    correction = (p * c ** (-p - 1.0) + p * (p + 1.0) * c ** (-p - 2.0)) / 24.0
    return (integral, correction)


# ---------------------------------------------------------------------------
# log-power (LP) forms: {(p, k): (center, radius)} meaning
#     sum over entries of  coeff * u^-p * ln(u)^k
# valid pointwise for every u in the domain the builder states (u >= 2
# unless noted).  k is capped at 2; exponents may be any float.

LogPower = dict[tuple[float, int], Interval]


def _lp_add(lp: LogPower, p: float, k: int, cm: float, cr: float) -> None:
    if k > 2:
        raise UnsupportedParams("log-power order above ln^2 is never needed here")
    old = lp.get((p, k), (0.0, 0.0))
    lp[(p, k)] = (old[0] + cm, old[1] + cr)


def _lp_scale(lp: LogPower, coef: Interval) -> LogPower:
    out: LogPower = {}
    for (p, k), c in lp.items():
        m, r = _imul(c, coef)
        _lp_add(out, p, k, m, r)
    return out


def _lp_shift(lp: LogPower, dp: float) -> LogPower:
    return {(p + dp, k): c for (p, k), c in lp.items()}


def _lp_mul(lp1: LogPower, lp2: LogPower) -> LogPower:
    out: LogPower = {}
    for (p1, k1), c1 in lp1.items():
        for (p2, k2), c2 in lp2.items():
            m, r = _imul(c1, c2)
            _lp_add(out, p1 + p2, k1 + k2, m, r)
    return out


def _lp_sum(*lps: LogPower) -> LogPower:
    out: LogPower = {}
    for lp in lps:
        for (p, k), (cm, cr) in lp.items():
            _lp_add(out, p, k, cm, cr)
    return out


def _lp_const(cm: float, cr: float = 0.0) -> LogPower:
    return {(0.0, 0): (cm, cr)}


def _logint(U: float, p: float, k: int) -> float:
    """integral_U^inf x^-p ln(x)^k dx, p > 1, k in {0, 1, 2}."""
    q = p - 1.0
    L = math.log(U)
    base = U**-q
    if k == 0:
        return base / q
    if k == 1:
        return base * (L / q + 1.0 / q**2)
    return base * (L * L / q + 2.0 * L / q**2 + 2.0 / q**3)


def _lp_point(lp: LogPower, u: float) -> Interval:
    """Pointwise enclosure of the LP form at one u."""
    L = math.log(u)
    mid = 0.0
    rad = 0.0
    for (p, k), (cm, cr) in lp.items():
        g = u**-p * L**k
        mid += cm * g
        rad += cr * g
    return (mid, rad + EPS * (abs(mid) + rad) * (len(lp) + 2))


def _lp_tail(lp: LogPower, U: int) -> Interval:
    """Enclosure of sum_{u>U} of the LP form.

    Per entry the sandwich [integral - g(U), integral] applies (the entry
    functions are decreasing for u >= 3 at the exponents used here); an
    entry with p <= 1 means the tail cannot be certified.
    """
    mid = 0.0
    rad = 0.0
    L = math.log(U)
    for (p, k), (cm, cr) in lp.items():
        if p <= 1.0:
            raise ConvergenceUnverified(
                f"tail exponent {p} (ln^{k}) is not summable past the box"
            )
        integral = _logint(U, p, k)
        width = U**-p * L**k
        lo = max(0.0, integral - width)
        mid += cm * (lo + integral) / 2.0
        rad += abs(cm) * (integral - lo) / 2.0 + cr * integral
    return (mid, rad + EPS * (abs(mid) + rad) * (len(lp) + 2))


def _lp_resum(lp: LogPower) -> LogPower:
    """The LP form of u |-> sum_{y>u} f(y), where f is the given LP form.

    Uses the same sandwich entrywise: sum_{y>u} y^-p ln^k y equals the
    closed-form integral minus an interval [0, u^-p ln^k u].
    """
    out: LogPower = {}
    for (p, k), c in lp.items():
        if p <= 1.0:
            raise ConvergenceUnverified(f"resummed exponent {p} is not summable")
        q = p - 1.0
        if k == 0:
            parts = [(q, 0, 1.0 / q)]
        elif k == 1:
            parts = [(q, 1, 1.0 / q), (q, 0, 1.0 / q**2)]
        else:
            parts = [(q, 2, 1.0 / q), (q, 1, 2.0 / q**2), (q, 0, 2.0 / q**3)]
        for pp, kk, coef in parts:
            m, r = _imul(c, (coef, 0.0))
            _lp_add(out, pp, kk, m, r)
        m, r = _imul(c, (-0.5, 0.5))  # the [-g, 0] sandwich width
        _lp_add(out, p, k, m, r)
    return out


# LP building blocks.  All are pointwise-valid enclosures for u >= 2.

def _lp_tailzeta(j: int) -> LogPower:
    """tailzeta(u, j) = sum_{n>u} n^-j as an LP form in u, j >= 2."""
    return {(float(j - 1), 0): (1.0 / (j - 1), 0.0), (float(j), 0): (-0.5, 0.5)}


def _lp_tailzeta_prev(j: int) -> LogPower:
    """tailzeta(u-1, j) = tailzeta(u, j) + u^-j."""
    lp = _lp_tailzeta(j)
    _lp_add(lp, float(j), 0, 1.0, 0.0)
    return lp


def _lp_harmonic() -> LogPower:
    """H_u = ln u + gamma + [0, 1/(2u)]."""
    return {
        (0.0, 1): (1.0, 0.0),
        (0.0, 0): (EULER_GAMMA, 2e-16),
        (1.0, 0): (0.25, 0.25),
    }


def _lp_harmonic_prev() -> LogPower:
    """H_{u-1} = H_u - 1/u."""
    lp = _lp_harmonic()
    _lp_add(lp, 1.0, 0, -1.0, 0.0)
    return lp


def _lp_pair_sum_upper(a: int, b: int, zeta_of) -> LogPower:
    """Upper bound of S_{a,b}(u) = sum_{m1+m2=u} m1^-a m2^-b as [0, X].

    Splitting at u/2: the far variable is at least u/2, the near prefix is
    bounded by its full sum (or a log cap).  Valid for u >= 2.
    """
    out: LogPower = {}
    for near, far in ((a, b), (b, a)):
        scale = float(2**far)
        if near == 0:
            # prefix count <= u/2
            _lp_add(out, float(far - 1), 0, scale / 4.0, scale / 4.0)
        elif near == 1:
            _lp_add(out, float(far), 0, scale / 2.0, scale / 2.0)
            _lp_add(out, float(far), 1, scale / 2.0, scale / 2.0)
        else:
            z = zeta_of(near)
            hi = (z.midpoint + z.radius) * scale
            _lp_add(out, float(far), 0, hi / 2.0, hi / 2.0)
    return out


# ---------------------------------------------------------------------------
# certified tables

def _power_array(U: int, e: int) -> np.ndarray:
    """[0, 1^-e, 2^-e, ..., U^-e] with an unused zero slot."""
    arr = np.zeros(U + 1)
    arr[1:] = np.arange(1, U + 1, dtype=float) ** float(-e)
    return arr


class _Workspace:
    """Per-process cache of atom evaluations and certified tables.

    Keys include the tolerance bucket so a looser request can reuse a
    tighter cached result but never the other way around.
    """

    def __init__(self):
        self.atoms: dict[tuple, Evaluation] = {}
        self.tables: dict[tuple, tuple] = {}

    def clear(self):
        self.atoms.clear()
        self.tables.clear()


_WS = _Workspace()


def clear_caches() -> None:
    """Drop all memoized evaluations (used for cold timing runs)."""
    _WS.clear()


def _bucket(tol: float) -> int:
    return max(0, math.ceil(-math.log10(tol) - 1e-9))


def _cached_atom(key: tuple, tol: float, compute) -> Evaluation:
    b = _bucket(tol)
    for bb in range(b, 14):
        hit = _WS.atoms.get(key + (bb,))
        if hit is not None and hit.radius <= tol:
            return hit
    out = compute()
    _WS.atoms[key + (b,)] = out
    return out


# ---------------------------------------------------------------------------
# single zeta

def eval_zeta(s: int, cfg: SummationConfig) -> Evaluation:
    cfg = cfg.validated()

    def compute() -> Evaluation:
        tol = cfg.tolerance
        N = 32
        while True:
            tail = _em_tail(N, float(s))
            if tail[1] + _sum_err(2.0, N) <= tol / 2.0 or N >= cfg.max_terms:
                break
            N *= 2
        tail = _em_tail(N, float(s))
        rounding = _sum_err(2.0, N)
        if tail[1] + rounding > tol:
            raise ToleranceUnreachable(
                f"zeta({s}): certified radius {tail[1] + rounding:.3e} exceeds {tol:.3e}"
            )
        n = np.arange(1, N + 1, dtype=float)
        part = float(np.sum(n ** float(-s)))
        return Evaluation(part + tail[0], tail[1] + rounding, N)

    return _cached_atom(("Z", s), cfg.tolerance, compute)


def _zeta_getter(cfg: SummationConfig):
    inner = SummationConfig(
        tolerance=max(min(cfg.tolerance * 1e-2, 1e-13), TOLERANCE_FLOOR),
        max_terms=cfg.max_terms,
        max_terms_3d=cfg.max_terms_3d,
    )

    def zeta_of(j: int) -> Evaluation:
        return eval_zeta(j, inner)

    return zeta_of


def _tailzeta_table(j: int, U: int, cfg: SummationConfig) -> tuple[np.ndarray, float]:
    """t[u] = sum_{m>u} m^-j for u = 0..U, with a uniform radius."""
    key = ("tz", j, U)
    hit = _WS.tables.get(key)
    if hit is not None:
        return hit
    z = _zeta_getter(cfg)(j)
    pref, coeff = _cumsum(np.arange(1, U + 1, dtype=float) ** float(-j))
    t = z.midpoint - np.concatenate(([0.0], pref))
    rad = z.radius + coeff * EPS * z.midpoint
    out = (t, rad)
    _WS.tables[key] = out
    return out


def _harmonic_table(U: int) -> tuple[np.ndarray, float]:
    """H[u] for u = 0..U with a uniform rounding radius."""
    key = ("H", U)
    hit = _WS.tables.get(key)
    if hit is not None:
        return hit
    Hsum, coeff = _cumsum(1.0 / np.arange(1, U + 1, dtype=float))
    H = np.concatenate(([0.0], Hsum))
    out = (H, coeff * EPS * float(H[-1]))
    _WS.tables[key] = out
    return out


# ---------------------------------------------------------------------------
# the shifted pair sum G_{c,f}(u) = sum_{m>=1} m^-c (u+m)^-f
#
# Partial fractions turn it into harmonic numbers and zeta tails:
#   1/(m^c (u+m)^f) = sum_{j<=c} A_j/m^j + sum_{j<=f} B_j/(u+m)^j
#   A_j = (-1)^(c-j) C(c+f-j-1, f-1) u^-(c+f-j)
#   B_j = (-1)^c     C(c+f-j-1, c-1) u^-(c+f-j)
# The j = 1 pieces are individually divergent but pair into A_1 * H_u; the
# pairing is exact because the two binomials coincide, which is asserted.

def _g_pf_coeffs(c: int, f: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    A = [((-1) ** (c - j) * math.comb(c + f - j - 1, f - 1), c + f - j) for j in range(1, c + 1)]
    B = [((-1) ** c * math.comb(c + f - j - 1, c - 1), c + f - j) for j in range(1, f + 1)]
    if f >= 1 and c >= 1 and A[0][0] + B[0][0] != 0:
        raise InternalNoncancellation(
            f"pair-sum partial fractions for (c,f)=({c},{f}) leave a divergent piece"
        )
    return A, B


def _g_tables(c: int, f: int, U: int, cfg: SummationConfig) -> tuple[np.ndarray, np.ndarray]:
    """(mid, rad) arrays of G_{c,f}(u) for u = 1..U (index 0 unused)."""
    if c == 0 and f == 0:
        raise ConvergenceUnverified("inner pair sum with no weight diverges")
    if c == 0:
        if f < 2:
            raise ConvergenceUnverified("inner pair sum needs f >= 2 when c = 0")
        t, rad = _tailzeta_table(f, U, cfg)
        mid = t.copy()
        return mid, np.full(U + 1, rad)
    if f == 0:
        if c < 2:
            raise ConvergenceUnverified("inner pair sum needs c >= 2 when f = 0")
        z = _zeta_getter(cfg)(c)
        return np.full(U + 1, z.midpoint), np.full(U + 1, z.radius)
    if c + f < 2:
        raise ConvergenceUnverified("inner pair sum diverges")

    u = np.arange(0, U + 1, dtype=float)
    u[0] = 1.0  # avoid 0^-k warnings; slot 0 is unused
    A, B = _g_pf_coeffs(c, f)
    H, Hrad = _harmonic_table(U)
    zeta_of = _zeta_getter(cfg)

    mid = np.zeros(U + 1)
    rad = np.zeros(U + 1)

    coefA1, powA1 = A[0]
    scaleA1 = coefA1 * u ** float(-powA1)
    mid += scaleA1 * H
    rad += np.abs(scaleA1) * Hrad

    for coef, pw in A[1:]:
        j = c + f - pw
        z = zeta_of(j)
        scale = coef * u ** float(-pw)
        mid += scale * z.midpoint
        rad += np.abs(scale) * z.radius
    for idx, (coef, pw) in enumerate(B):
        j = idx + 1
        if j == 1:
            continue  # paired into A_1 H_u
        t, trad = _tailzeta_table(j, U, cfg)
        scale = coef * u ** float(-pw)
        mid += scale * t
        rad += np.abs(scale) * trad
    rad += EPS * (np.abs(mid) + rad) * (c + f + 4)
    return mid, rad


def _lp_g_bracket(c: int, f: int, cfg: SummationConfig) -> LogPower:
    """Two-sided LP enclosure of G_{c,f}(u), valid for u >= 2."""
    zeta_of = _zeta_getter(cfg)
    if c == 0:
        return _lp_tailzeta(f)
    if f == 0:
        z = zeta_of(c)
        return _lp_const(z.midpoint, z.radius)
    out: LogPower = {}
    A, B = _g_pf_coeffs(c, f)
    coefA1, powA1 = A[0]
    for (p, k), (cm, cr) in _lp_harmonic().items():
        _lp_add(out, p + powA1, k, coefA1 * cm, abs(coefA1) * cr)
    for coef, pw in A[1:]:
        z = zeta_of(c + f - pw)
        _lp_add(out, float(pw), 0, coef * z.midpoint, abs(coef) * z.radius)
    for idx, (coef, pw) in enumerate(B):
        j = idx + 1
        if j == 1:
            continue
        for (p, k), (cm, cr) in _lp_tailzeta(j).items():
            _lp_add(out, p + pw, k, coef * cm, abs(coef) * cr)
    return out


# ---------------------------------------------------------------------------
# Mordell-Tornheim double sums

def eval_mt(atom: MordellTornheim3, cfg: SummationConfig) -> Evaluation:
    cfg = cfg.validated()

    def compute() -> Evaluation:
        a, b, c = atom.a, atom.b, atom.c
        tol = cfg.tolerance
        if c == 0:
            za = eval_zeta(a, _scaled(cfg, 0.25))
            zb = eval_zeta(b, _scaled(cfg, 0.25))
            m, r = _imul((za.midpoint, za.radius), (zb.midpoint, zb.radius))
            return Evaluation(m, r, max(za.terms, zb.terms))

        # outer sum over m2 of m2^-b G_{a,c}(m2); the LP bracket of G gives
        # a two-sided parametric tail
        lp = _lp_shift(_lp_g_bracket(a, c, cfg), float(b))
        M = 1024
        while True:
            tail = _lp_tail(lp, M)
            if tail[1] <= tol / 3.0 or M >= cfg.max_terms:
                break
            M *= 2
        tail = _lp_tail(lp, M)

        gmid, grad = _g_tables(a, c, M, cfg)
        m2pow = _power_array(M, b)
        box = float(np.dot(m2pow[1:], gmid[1:]))
        boxrad = float(np.dot(m2pow[1:], grad[1:])) + _sum_err(abs(box), M)

        radius = tail[1] + boxrad
        if radius > tol:
            raise ToleranceUnreachable(
                f"{atom.render()}: certified radius {radius:.3e} exceeds {tol:.3e}"
            )
        return Evaluation(box + tail[0], radius, M)

    return _cached_atom(("MT", atom.a, atom.b, atom.c), cfg.tolerance, compute)


def _scaled(cfg: SummationConfig, factor: float) -> SummationConfig:
    return SummationConfig(
        tolerance=max(cfg.tolerance * factor, TOLERANCE_FLOOR),
        max_terms=cfg.max_terms,
        max_terms_3d=cfg.max_terms_3d,
    )


# ---------------------------------------------------------------------------
# Euler sums

def _euler2_tail_lp(s1: int, s2: int, cfg: SummationConfig) -> LogPower:
    """LP form (in x) of x^-s1 * P_{s2}(x-1), the double-sum tail summand."""
    if s2 == 1:
        inner = _lp_harmonic_prev()
    else:
        z = _zeta_getter(cfg)(s2)
        inner = _lp_sum(_lp_const(z.midpoint, z.radius), _lp_scale(_lp_tailzeta_prev(s2), (-1.0, 0.0)))
    return _lp_shift(inner, float(s1))


def eval_euler(atom: EulerSum, cfg: SummationConfig) -> Evaluation:
    cfg = cfg.validated()
    idx = atom.indices

    def compute() -> Evaluation:
        if len(idx) == 2:
            return _euler2(idx[0], idx[1], cfg)
        return _euler3(idx[0], idx[1], idx[2], cfg)

    return _cached_atom(("E",) + idx, cfg.tolerance, compute)


def _euler2(s1: int, s2: int, cfg: SummationConfig) -> Evaluation:
    tol = cfg.tolerance
    lp = _euler2_tail_lp(s1, s2, cfg)
    X = 1024
    while True:
        tail = _lp_tail(lp, X)
        if tail[1] <= tol / 3.0 or X >= cfg.max_terms:
            break
        X *= 2
    tail = _lp_tail(lp, X)

    n = np.arange(1, X + 1, dtype=float)
    pref, coeff = _cumsum(n ** float(-s2))
    inner = np.concatenate(([0.0], pref))
    outer = n ** float(-s1)
    part = float(np.dot(outer[1:], inner[1:-1]))
    rounding = coeff * EPS * float(inner[-1]) * float(np.sum(outer[1:])) + _sum_err(part, X)

    radius = tail[1] + rounding
    if radius > tol:
        raise ToleranceUnreachable(f"E({s1},{s2}): radius {radius:.3e} exceeds {tol:.3e}")
    return Evaluation(part + tail[0], radius, X)


def _euler3_tail_lp(s1: int, s2: int, s3: int, cfg: SummationConfig) -> tuple[LogPower, int]:
    """LP form (in x) of x^-s1 * D(x-1) where D(n) = sum_{y<=n} y^-s2 P_{s3}(y-1).

    Returns the form and the cutoff floor it requires (from any recursive
    evaluation folded into constants).
    """
    zeta_of = _zeta_getter(cfg)
    if s2 >= 2:
        # D(x-1) = D_inf - sum_{y>=x} y^-s2 P_{s3}(y-1)
        dinf = eval_euler(EulerSum((s2, s3)), _scaled(cfg, 0.1))
        summand = _euler2_tail_lp(s2, s3, cfg)  # y^-s2 P_{s3}(y-1) in y
        ge_x = _lp_sum(_lp_resum(summand), summand)  # sum_{y>=x} = sum_{y>x} + at x
        d_lp = _lp_sum(_lp_const(dinf.midpoint, dinf.radius), _lp_scale(ge_x, (-1.0, 0.0)))
        return _lp_shift(d_lp, float(s1)), dinf.terms
    if s3 >= 2:
        # D(n) = zeta(s3) H_n - kappa + sum_{y>n} y^-1 tailzeta(y-1, s3)
        # with kappa = sum_m m^-s3 H_m = E(s3,1) + zeta(s3+1)
        z3 = zeta_of(s3)
        e_part = eval_euler(EulerSum((s3, 1)), _scaled(cfg, 0.1))
        z_next = zeta_of(s3 + 1)
        kappa = (e_part.midpoint + z_next.midpoint, e_part.radius + z_next.radius)
        summand = _lp_shift(_lp_tailzeta_prev(s3), 1.0)  # y^-1 tailzeta(y-1,s3)
        gt_prev = _lp_sum(_lp_resum(summand), summand)  # sum_{y>=x} = sum_{y>x-1}
        d_lp = _lp_sum(
            _lp_scale(_lp_harmonic_prev(), (z3.midpoint, z3.radius)),
            _lp_const(-kappa[0], kappa[1]),
            gt_prev,
        )
        return _lp_shift(d_lp, float(s1)), e_part.terms
    # s2 = s3 = 1: D(n) = (H_n^2 - H_n^(2)) / 2 exactly
    z2 = zeta_of(2)
    h_prev = _lp_harmonic_prev()
    h2_prev = _lp_sum(_lp_const(z2.midpoint, z2.radius), _lp_scale(_lp_tailzeta_prev(2), (-1.0, 0.0)))
    d_lp = _lp_scale(_lp_sum(_lp_mul(h_prev, h_prev), _lp_scale(h2_prev, (-1.0, 0.0))), (0.5, 0.0))
    return _lp_shift(d_lp, float(s1)), 0


def _euler3(s1: int, s2: int, s3: int, cfg: SummationConfig) -> Evaluation:
    tol = cfg.tolerance
    lp, _floor = _euler3_tail_lp(s1, s2, s3, cfg)
    X = 1024
    while True:
        tail = _lp_tail(lp, X)
        if tail[1] <= tol / 3.0 or X >= cfg.max_terms:
            break
        X *= 2
    tail = _lp_tail(lp, X)

    n = np.arange(1, X + 1, dtype=float)
    qsum, qcoeff = _cumsum(n ** float(-s3))
    q = np.concatenate(([0.0], qsum))
    middle = n ** float(-s2) * q[:-1]
    dsum, dcoeff = _cumsum(middle)
    d = np.concatenate(([0.0], dsum))
    outer = n ** float(-s1)
    part = float(np.dot(outer[2:], d[2:-1]))
    # d[k] inherits the worst q-rounding through each y^-s2 weight of the
    # middle cumsum; the outer dot weights both cumsum errors by sum(outer)
    s_mid = float(np.sum(n ** float(-s2)))
    s_out = float(np.sum(outer))
    rounding = (
        qcoeff * EPS * float(q[-1]) * s_mid * s_out
        + dcoeff * EPS * float(d[-1]) * s_out
        + _sum_err(abs(part), X)
    )

    radius = tail[1] + rounding
    if radius > tol:
        raise ToleranceUnreachable(
            f"E({s1},{s2},{s3}): radius {radius:.3e} exceeds {tol:.3e}"
        )
    return Evaluation(part + tail[0], radius, X)


# ---------------------------------------------------------------------------
# triple sums: the collapsed path (s5 = 0)
#
# With u = m1 + m2 the sum factors through the convolution
#   S_{s1,s2}(u) = sum_{m1+m2=u} m1^-s1 m2^-s2
# and the shifted pair sum over m3:
#   W = sum_u S(u) u^-s4 G_{s3,s6}(u).

def _pair_sum_table(a: int, b: int, U: int) -> tuple[np.ndarray, float, float]:
    """S_{a,b}(u) for u = 0..U.

    Returns (values, rel, abserr): the error of entry u is bounded by
    rel * S(u) + abserr.
    """
    key = ("S", a, b, U)
    hit = _WS.tables.get(key)
    if hit is not None:
        return hit
    out = np.zeros(U + 1)
    rel = 0.0
    abserr = 0.0
    if a == 0 and b == 0:
        out[2:] = np.arange(2, U + 1, dtype=float) - 1.0
    elif a == 0 or b == 0:
        e = a + b
        pref, coeff = _cumsum(np.arange(1, U + 1, dtype=float) ** float(-e))
        out[2:] = pref[: U - 1]
        abserr = coeff * EPS * float(pref[-1])
    else:
        x = np.arange(1, U, dtype=float) ** float(-a)
        y = np.arange(1, U, dtype=float) ** float(-b)
        if U <= 8192:
            conv = np.convolve(x, y)
            rel = EPS * (U + 4)
        else:
            size = 1 << ((2 * U - 2).bit_length())
            conv = np.fft.irfft(np.fft.rfft(x, size) * np.fft.rfft(y, size), size)
            abserr = EPS * 16 * (math.log2(size) + 4) * float(np.sum(x)) * float(np.sum(y))
        out[2:] = conv[: U - 1]
        out[out < 0] = 0.0
    _WS.tables[key] = (out, rel, abserr)
    return out, rel, abserr


def _collapsed_s12_lp(a: int, b: int, cfg: SummationConfig) -> LogPower:
    """LP enclosure of S_{a,b}(u); two-sided whenever a closed form exists.

    With one exponent zero the pair sum is a plain prefix sum, so an exact
    two-sided form keeps the parametric tail radius at the sandwich width
    instead of the tail value.  Otherwise the split-at-u/2 upper bound is
    used as a [0, X] interval.
    """
    if a == 0 and b == 0:
        return {(-1.0, 0): (1.0, 0.0), (0.0, 0): (-1.0, 0.0)}  # u - 1
    if a == 0 or b == 0:
        e = a + b
        if e == 1:
            return _lp_harmonic_prev()
        z = _zeta_getter(cfg)(e)
        return _lp_sum(
            _lp_const(z.midpoint, z.radius),
            _lp_scale(_lp_tailzeta_prev(e), (-1.0, 0.0)),
        )
    return _lp_pair_sum_upper(a, b, _zeta_getter(cfg))


def _eval_w4_collapsed(s: tuple[int, ...], cfg: SummationConfig) -> Evaluation:
    s1, s2, s3, s4, _s5, s6 = s
    tol = cfg.tolerance

    c, f = s3, s6
    if c + f < 2 or (f == 0 and c < 2) or (c == 0 and f < 2):
        raise ConvergenceUnverified(f"W{s}: the m3 direction cannot be certified")

    lp_outer = _lp_mul(
        _lp_shift(_collapsed_s12_lp(s1, s2, cfg), float(s4)),
        _lp_g_bracket(c, f, cfg),
    )

    U = 1024
    while True:
        tail = _lp_tail(lp_outer, U)
        if tail[1] <= tol / 2.0 or U >= cfg.max_terms:
            break
        U *= 2
    tail = _lp_tail(lp_outer, U)

    svals, srel, sabs = _pair_sum_table(s1, s2, U)
    gmid, grad = _g_tables(c, f, U, cfg)
    upow = _power_array(U, s4)
    weights = svals * upow
    box = float(np.dot(weights[2:], gmid[2:]))
    absbox = float(np.dot(weights[2:], np.abs(gmid[2:])))
    gsum = float(np.dot(upow[2:], np.abs(gmid[2:])))
    boxrad = (
        float(np.dot(weights[2:], grad[2:]))
        + srel * absbox
        + sabs * gsum
        + _sum_err(absbox, U)
    )

    radius = tail[1] + boxrad
    if radius > tol:
        raise ToleranceUnreachable(f"W{s}: certified radius {radius:.3e} exceeds {tol:.3e}")
    return Evaluation(box + tail[0], radius, U)


# ---------------------------------------------------------------------------
# triple sums: the hub path (s6 = 0, s4 > 0, s5 > 0)
#
# m1 and m3 interact only through m2:
#   W = sum_{m2} m2^-s2 G_{s1,s4}(m2) G_{s3,s5}(m2).

def _eval_w4_hub(s: tuple[int, ...], cfg: SummationConfig) -> Evaluation:
    s1, s2, s3, s4, s5, _s6 = s
    tol = cfg.tolerance
    for cc, ff in ((s1, s4), (s3, s5)):
        if cc + ff < 2 or (cc == 0 and ff < 2):
            raise ConvergenceUnverified(f"W{s}: an arm of the split sum diverges")

    lp = _lp_mul(
        _lp_shift(_lp_g_bracket(s1, s4, cfg), float(s2)),
        _lp_g_bracket(s3, s5, cfg),
    )

    M = 1024
    while True:
        tail = _lp_tail(lp, M)
        if tail[1] <= tol / 2.0 or M >= cfg.max_terms:
            break
        M *= 2
    tail = _lp_tail(lp, M)

    g1m, g1r = _g_tables(s1, s4, M, cfg)
    g2m, g2r = _g_tables(s3, s5, M, cfg)
    m2pow = _power_array(M, s2)
    prod_mid = g1m * g2m
    prod_rad = np.abs(g1m) * g2r + np.abs(g2m) * g1r + g1r * g2r
    box = float(np.dot(m2pow[1:], prod_mid[1:]))
    boxrad = float(np.dot(m2pow[1:], prod_rad[1:])) + _sum_err(abs(box), M)

    radius = tail[1] + boxrad
    if radius > tol:
        raise ToleranceUnreachable(f"W{s}: certified radius {radius:.3e} exceeds {tol:.3e}")
    return Evaluation(box + tail[0], radius, M)


# ---------------------------------------------------------------------------
# triple sums: the general boxed path (s4, s5, s6 all > 0)

def _face_tail(
    N: int,
    p: int,
    weights: np.ndarray,
    corrections: list[tuple[int, np.ndarray]],
) -> Interval:
    """Enclosure of sum over (big > N) x (small grid) with weight matrices.

    The big-variable sum is sum_{m>N} m^-p prod_j (1 + c_j/m)^-q_j; the
    product is sandwiched by 1 - A/m <= prod <= 1 - A/m + (B2 + A^2)/(2 m^2)
    with A = sum q_j c_j and B2 = sum q_j c_j^2 (from ln(1+x) bounds), so
    three zeta tails enclose the whole face.
    """
    A = np.zeros_like(weights)
    B2 = np.zeros_like(weights)
    for q, cmat in corrections:
        A += q * cmat
        B2 += q * cmat * cmat
    t0 = _em_tail(N, float(p))
    t1 = _em_tail(N, float(p + 1))
    t2 = _em_tail(N, float(p + 2))
    lo_cells = np.maximum(0.0, (t0[0] - t0[1]) - A * (t1[0] + t1[1]))
    hi_cells = (t0[0] + t0[1]) - A * np.maximum(0.0, t1[0] - t1[1]) + 0.5 * (B2 + A * A) * (
        t2[0] + t2[1]
    )
    lo = float(np.sum(weights * lo_cells))
    hi = float(np.sum(weights * hi_cells))
    mid = (lo + hi) / 2.0
    rad = (hi - lo) / 2.0 + _sum_err(abs(hi), weights.size)
    return (mid, rad)


_SPLIT2 = [(0.0, 1.0), (0.25, 0.75), (0.5, 0.5), (0.75, 0.25), (1.0, 0.0)]
_SPLIT3 = [
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.5, 0.5, 0.0),
    (0.5, 0.0, 0.5),
    (0.0, 0.5, 0.5),
    (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
]

_MEMBERS = {0: (0,), 1: (1,), 2: (2,), 3: (0, 1), 4: (1, 2), 5: (0, 1, 2)}


def _routed_region_bound(s: tuple[int, ...], N: int, big: tuple[int, ...]) -> float:
    """One-sided bound for the region where variables in ``big`` exceed N.

    Composite denominators dominate each member, so any convex split of an
    exponent across members gives a valid separable majorant; a small grid
    of splits is searched and the best certate bound returned.
    """
    import itertools

    active = [(k, _MEMBERS[k]) for k in range(6) if s[k] > 0]
    options = []
    for _k, members in active:
        if len(members) == 1:
            options.append([(1.0,)])
        elif len(members) == 2:
            options.append(_SPLIT2)
        else:
            options.append(_SPLIT3)
    best = math.inf
    for combo in itertools.product(*options):
        routed = [0.0, 0.0, 0.0]
        for (k, members), weightvec in zip(active, combo):
            for v, wfrac in zip(members, weightvec):
                routed[v] += s[k] * wfrac
        if not all(routed[v] > 1.0 for v in big):
            continue
        bound = 1.0
        for v in range(3):
            r = routed[v]
            if v in big:
                bound *= N ** (1.0 - r) / (r - 1.0)
            elif r > 1.0:
                bound *= 1.0 + 1.0 / (r - 1.0)
            elif r == 1.0:
                bound *= 1.0 + math.log(N)
            elif r > 0.0:
                bound *= 1.0 + (N ** (1.0 - r) - 1.0) / (1.0 - r)
            else:
                bound *= float(N)
        best = min(best, bound)
    return best


def _general_tail_budget(s: tuple[int, ...], N: int) -> tuple[Interval, bool]:
    """Total enclosure of everything outside the [1,N]^3 box."""
    s1, s2, s3, s4, s5, s6 = s
    m = np.arange(1, N + 1, dtype=float)
    col = m[:, None]
    row = m[None, :]

    mid = 0.0
    rad = 0.0
    # face m1 > N: small grid (m2, m3)
    w = col ** float(-s2) * row ** float(-s3) * (col + row) ** float(-s5)
    fmid, frad = _face_tail(N, s1 + s4 + s6, w, [(s4, col + 0 * row), (s6, col + row)])
    mid += fmid
    rad += frad
    # face m3 > N: small grid (m1, m2)
    w = col ** float(-s1) * row ** float(-s2) * (col + row) ** float(-s4)
    fmid, frad = _face_tail(N, s3 + s5 + s6, w, [(s5, 0 * col + row), (s6, col + row)])
    mid += fmid
    rad += frad
    # face m2 > N: small grid (m1, m3)
    w = col ** float(-s1) * row ** float(-s3)
    fmid, frad = _face_tail(
        N, s2 + s4 + s5 + s6, w, [(s4, col + 0 * row), (s5, 0 * col + row), (s6, col + row)]
    )
    mid += fmid
    rad += frad

    ok = True
    for big in [(0, 1), (0, 2), (1, 2), (0, 1, 2)]:
        bound = _routed_region_bound(s, N, big)
        if not math.isfinite(bound):
            ok = False
            break
        mid += bound / 2.0
        rad += bound / 2.0
    return (mid, rad), ok


def _general_box(s: tuple[int, ...], N: int) -> tuple[float, float]:
    s1, s2, s3, s4, s5, s6 = s
    m = np.arange(1, N + 1, dtype=float)
    v1 = m ** float(-s1)
    v2 = m ** float(-s2)
    v3 = m ** float(-s3)
    idx = np.arange(0, 2 * N + 1, dtype=float)
    idx[0] = 1.0
    tab4 = idx ** float(-s4)
    tab5 = idx ** float(-s5)
    idx3 = np.arange(0, 3 * N + 1, dtype=float)
    idx3[0] = 1.0
    tab6 = idx3 ** float(-s6)
    ints = np.arange(1, N + 1)

    total = 0.0
    for i2 in range(1, N + 1):
        colv = v1 * tab4[ints + i2]
        roww = v3 * tab5[i2 + ints]
        m6 = tab6[np.add.outer(ints + i2, ints)]
        total += v2[i2 - 1] * float(colv @ (m6 @ roww))
    err = _sum_err(total, N * N * N) + EPS * total * (math.log2(N) + 8)
    return total, err


def _eval_w4_general(s: tuple[int, ...], cfg: SummationConfig) -> Evaluation:
    s1, s2, s3, s4, s5, s6 = s
    tol = cfg.tolerance
    sigma1 = s1 + s4 + s6
    sigma2 = s2 + s4 + s5 + s6
    sigma3 = s3 + s5 + s6
    if min(sigma1, sigma2, sigma3) < 3 or sum(s) < 4:
        raise ConvergenceUnverified(
            f"W{s}: directional exponents {(sigma1, sigma2, sigma3)} below the certifiable range"
        )

    ladder = [n for n in (64, 128, 256, 400, 512) if n < cfg.max_terms_3d]
    ladder.append(cfg.max_terms_3d)
    chosen = None
    for N in ladder:
        tail, ok = _general_tail_budget(s, N)
        if not ok:
            raise ConvergenceUnverified(f"W{s}: outer regions cannot be certified")
        if tail[1] <= tol / 2.0:
            chosen = (N, tail)
            break
    if chosen is None:
        raise ToleranceUnreachable(
            f"W{s}: tail radius {tail[1]:.3e} exceeds {tol / 2:.3e} at the box cap"
        )
    N, tail = chosen
    box, boxerr = _general_box(s, N)
    radius = tail[1] + boxerr
    if radius > tol:
        raise ToleranceUnreachable(f"W{s}: certified radius {radius:.3e} exceeds {tol:.3e}")
    return Evaluation(box + tail[0], radius, N)


# ---------------------------------------------------------------------------
# triple-sum dispatch

def eval_witten4(atom: WittenSl4, cfg: SummationConfig) -> Evaluation:
    cfg = cfg.validated()
    s = atom.s

    def compute() -> Evaluation:
        s1, s2, s3, s4, s5, s6 = s
        if s1 + s4 + s6 == 0 or s2 + s4 + s5 + s6 == 0 or s3 + s5 + s6 == 0:
            raise ConvergenceUnverified(f"W{s}: a summation variable carries no weight")
        if s4 == 0 and s5 == 0 and s6 == 0:
            # no composite factor: a plain product of single zetas
            if min(s1, s2, s3) < 2:
                raise ConvergenceUnverified(f"W{s}: a factored direction diverges")
            result = (1.0, 0.0)
            terms = 0
            for e in (s1, s2, s3):
                z = eval_zeta(e, _scaled(cfg, 0.2))
                result = _imul(result, (z.midpoint, z.radius))
                terms = max(terms, z.terms)
            return Evaluation(result[0], result[1], terms)
        if s5 == 0:
            return _eval_w4_collapsed(s, cfg)
        if s4 == 0:
            # relabel m1 <-> m3 onto the collapsed form; never used by the
            # symmetry identity, whose tuples keep both composites positive
            m = atom.mirror().s
            return _eval_w4_collapsed(m, cfg)
        # outside the collapsed family, certification is offered only on
        # the directional-exponent gate
        sigma1 = s1 + s4 + s6
        sigma2 = s2 + s4 + s5 + s6
        sigma3 = s3 + s5 + s6
        if min(sigma1, sigma2, sigma3) < 3 or sum(s) < 4:
            raise ConvergenceUnverified(
                f"W{s}: directional exponents {(sigma1, sigma2, sigma3)} "
                "below the certifiable range"
            )
        if s6 == 0:
            return _eval_w4_hub(s, cfg)
        return _eval_w4_general(s, cfg)

    return _cached_atom(("W",) + s, cfg.tolerance, compute)


# ---------------------------------------------------------------------------
# atoms, terms, combinations

def eval_atom(atom: Atom, cfg: SummationConfig) -> Evaluation:
    if isinstance(atom, SingleZeta):
        return eval_zeta(atom.s, cfg)
    if isinstance(atom, EulerSum):
        return eval_euler(atom, cfg)
    if isinstance(atom, MordellTornheim3):
        return eval_mt(atom, cfg)
    if isinstance(atom, WittenSl4):
        return eval_witten4(atom, cfg)
    raise UnsupportedParams(f"unknown atom {atom!r}")


def eval_term(term: Term, cfg: SummationConfig) -> Evaluation:
    cfg = cfg.validated()
    factors = term.factors
    if not factors:
        return Evaluation(1.0, 0.0, 0)
    if len(factors) == 1:
        return eval_atom(factors[0], cfg)

    # coarse magnitudes decide how the tolerance splits across factors
    coarse_cfg = SummationConfig(
        tolerance=1e-3, max_terms=cfg.max_terms, max_terms_3d=cfg.max_terms_3d
    )
    mags = [abs(eval_atom(f, coarse_cfg).midpoint) + 1e-3 for f in factors]
    k = len(factors)
    result = (1.0, 0.0)
    max_terms_used = 0
    for i, factor in enumerate(factors):
        others = 1.0
        for j, mg in enumerate(mags):
            if j != i:
                others *= mg
        f_tol = max(cfg.tolerance / (2.0 * k * max(others, 1e-9)), TOLERANCE_FLOOR)
        ev = eval_atom(factor, SummationConfig(f_tol, cfg.max_terms, cfg.max_terms_3d))
        result = _imul(result, (ev.midpoint, ev.radius))
        max_terms_used = max(max_terms_used, ev.terms)
    return Evaluation(result[0], result[1], max_terms_used)


def eval_lincomb(lc: LinearCombination, cfg: SummationConfig) -> Evaluation:
    cfg = cfg.validated()
    entries = lc.items()
    if not entries:
        return Evaluation(0.0, 0.0, 0)
    n = len(entries)
    mid = 0.0
    rad = 0.0
    max_terms_used = 0
    for term, coef in entries:
        c = float(coef)
        share = max(cfg.tolerance / (2.0 * n * max(1.0, abs(c))), TOLERANCE_FLOOR)
        ev = eval_term(term, SummationConfig(share, cfg.max_terms, cfg.max_terms_3d))
        mid += c * ev.midpoint
        rad += abs(c) * ev.radius + EPS * abs(c * ev.midpoint) * 2
        max_terms_used = max(max_terms_used, ev.terms)
    rad += _sum_err(abs(mid) + rad, n)
    return Evaluation(mid, rad, max_terms_used)
