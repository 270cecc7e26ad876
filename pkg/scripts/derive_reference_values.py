"""Derive and cross-check the reference values frozen into the test suite.

Run from the repository root:

    python scripts/derive_reference_values.py

Section 1 verifies every symbolic rewrite the package implements as an exact
identity of Fraction-valued shell sums (see tests/oracles.py for why bounded
shells make these checks exact).  Section 2 settles which binomial variant of
the depth-reduction inner sum is correct, again exactly.  Section 3 computes
float reference values with elementary tail brackets and prints them in a
form ready to paste into tests.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from math import comb
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import oracles as orc  # noqa: E402

FAILURES = []


def check(name: str, ok: bool, detail: str = "") -> None:
    mark = "ok  " if ok else "FAIL"
    print(f"  [{mark}] {name}" + (f"  {detail}" if detail and not ok else ""))
    if not ok:
        FAILURES.append((name, detail))


def sec(title: str) -> None:
    print()
    print(title)
    print("-" * len(title))


# ---------------------------------------------------------------------------
sec("1. exact shell-sum checks of each rewrite")

t0 = time.time()

# m1 <-> m3 relabel symmetry of the six-slot sum
for s in [(1, 2, 3, 1, 2, 1), (2, 1, 1, 2, 1, 2), (1, 1, 1, 1, 1, 1)]:
    sig = (s[2], s[1], s[0], s[4], s[3], s[5])
    check(
        f"relabel symmetry {s}",
        orc.w4_shell(s, 12) == orc.w4_shell(sig, 12),
    )

# separable n3 factor: W4(a,b,c,d,0,0) against an independent loop structure
for (a, b, c, d) in [(2, 2, 3, 2), (1, 2, 2, 1)]:
    K = 13
    lhs = orc.w4_shell((a, b, c, d, 0, 0), K)
    rhs = Fraction(0)
    for n3 in range(1, K - 1):
        rhs += Fraction(1, n3**c) * orc.mt_shell(a, b, d, K - n3)
    check(f"separable factor ({a},{b},{c},{d})", lhs == rhs)

# double-zeta expansion of the three-factor double sum
for (a, b, c) in [(1, 1, 1), (1, 1, 3), (2, 2, 2), (1, 3, 2), (2, 1, 1), (3, 2, 1)]:
    check(
        f"double-zeta expansion MT({a},{b},{c})",
        orc.mt_shell(a, b, c, 16) == orc.hwz_shell(a, b, c, 16),
    )

# region splits of the six-slot sum: verify the three constrained-region
# renderings against the defining sum, on the common (v, n1, n2) space with
# the shell functional of the defining lattice.
def region_gt_shell(a, b, c, d, K):
    # v > n1+n2 region of v^-d n1^-a n2^-b (n1+n2)^-c vs W4(a,b,0,c,0,d):
    # the defining lattice is (m1,m2,m3) = (n1,n2,v-n1-n2), shell m-sum = v.
    tot = Fraction(0)
    for n1, n2 in orc.shell2(K):
        for v in range(n1 + n2 + 1, K + 1):
            tot += (
                Fraction(1, v**d)
                * orc._fpow(n1, a)
                * orc._fpow(n2, b)
                * orc._fpow(n1 + n2, c)
            )
    return tot


def region_lt_shell(a, b, c, d, K):
    # v < n1 region of v^-a n1^-c n2^-b (n1+n2)^-d vs W4(a,0,b,c,0,d):
    # (m1,m2,m3) = (v, n1-v, n2), shell = n1+n2.
    tot = Fraction(0)
    for n1, n2 in orc.shell2(K):
        for v in range(1, n1):
            tot += (
                orc._fpow(v, a)
                * orc._fpow(n1, c)
                * orc._fpow(n2, b)
                * orc._fpow(n1 + n2, d)
            )
    return tot


def region_between_shell(a, b, c, d, K):
    # n1 < v < n1+n2 region of v^-c n1^-a n2^-b (n1+n2)^-d vs W4(0,0,a,b,c,d):
    # (m1,m2,m3) = (n1+n2-v, v-n1, n1), shell = n1+n2.
    tot = Fraction(0)
    for n1, n2 in orc.shell2(K):
        for v in range(n1 + 1, n1 + n2):
            tot += (
                orc._fpow(v, c)
                * orc._fpow(n1, a)
                * orc._fpow(n2, b)
                * orc._fpow(n1 + n2, d)
            )
    return tot


for (a, b, c, d) in [(1, 1, 2, 2), (2, 1, 1, 2), (1, 2, 2, 1)]:
    check(
        f"region v>n1+n2 ({a},{b},{c},{d})",
        region_gt_shell(a, b, c, d, 12) == orc.w4_shell((a, b, 0, c, 0, d), 12),
    )
    check(
        f"region v<n1 ({a},{b},{c},{d})",
        region_lt_shell(a, b, c, d, 12) == orc.w4_shell((a, 0, b, c, 0, d), 12),
    )
    check(
        f"region n1<v<n1+n2 ({a},{b},{c},{d})",
        region_between_shell(a, b, c, d, 12) == orc.w4_shell((0, 0, a, b, c, d), 12),
    )

# three-region recombination: regions + two diagonals = full product lattice
def combine_check(s1, s2, i, c, K, swap):
    full = orc.zeta_mt_shell(i, s1, s2, c, K)
    # diagonals under the same shell functional v+n1+n2 <= K... the three
    # region terms above use shells tied to their own defining lattices, so
    # recombine directly on the (v, n1, n2) product lattice instead:
    tot = Fraction(0)
    for n1 in range(1, K + 1):
        for n2 in range(1, K + 1 - n1):
            for v in range(1, K + 1 - n1 - n2):
                base = (
                    orc._fpow(v, i)
                    * orc._fpow(n1, s1)
                    * orc._fpow(n2, s2)
                    * orc._fpow(n1 + n2, c)
                )
                tot += base
    assert tot == full
    # now the identity itself: full - (v=n1 slice) - (v=n1+n2 slice)
    diag1 = Fraction(0)
    diag2 = Fraction(0)
    for n1 in range(1, K + 1):
        for n2 in range(1, K + 1 - n1):
            if 2 * n1 + n2 <= K:
                e1 = (s2, s1) if swap else (s1, s2)
                diag1 += (
                    orc._fpow(n1, e1[0] + i) * orc._fpow(n2, e1[1]) * orc._fpow(n1 + n2, c)
                )
            if 2 * (n1 + n2) <= K:
                diag2 += (
                    orc._fpow(n1, s1) * orc._fpow(n2, s2) * orc._fpow(n1 + n2, c + i)
                )
    regions = Fraction(0)
    for n1 in range(1, K + 1):
        for n2 in range(1, K + 1 - n1):
            e1 = (s2, s1) if swap else (s1, s2)
            base1 = orc._fpow(n1, e1[0]) * orc._fpow(n2, e1[1]) * orc._fpow(n1 + n2, c)
            base = orc._fpow(n1, s1) * orc._fpow(n2, s2) * orc._fpow(n1 + n2, c)
            for v in range(1, K + 1 - n1 - n2):
                # the swapped combination swaps the integrand in the v < n1
                # and n1 < v < n1+n2 regions; the v > n1+n2 region is
                # symmetric in (n1, n2) so either orientation sums the same
                if v < n1:
                    regions += orc._fpow(v, i) * base1
                elif n1 < v < n1 + n2:
                    regions += orc._fpow(v, i) * base1
                elif v > n1 + n2:
                    regions += orc._fpow(v, i) * base
    # shells: diag slices counted with v+n1+n2 <= K require matching region
    # shells; redo regions with the same joint functional
    return regions + diag1 + diag2 == full


# the recombination uses one joint lattice and one shell functional for every
# piece, so it is exact by construction; the point is the diagonal exponents.
for (s1, s2, i, c) in [(1, 2, 2, 2), (2, 1, 2, 3), (2, 2, 3, 2)]:
    check(f"three-region recombination ({s1},{s2},{i},{c})", combine_check(s1, s2, i, c, 11, False))
    check(f"three-region recombination swapped ({s1},{s2},{i},{c})", combine_check(s1, s2, i, c, 11, True))

# row expansion of W4(a,b,1,d,0,1)
for (a, b, d) in [(1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 1), (3, 1, 2)]:
    check(
        f"unit-pair row expansion ({a},{b},{d})",
        orc.w4_shell((a, b, 1, d, 0, 1), 13) == orc.lemma_unit_rows_shell(a, b, d, 13),
    )

# first-slot/second-slot exchange when the (n2+n3) slot is empty
for (a, d) in [(1, 1), (2, 1), (1, 2), (3, 2)]:
    check(
        f"slot exchange W4({a},0,1,{d},0,1) = W4(0,{a},1,{d},0,1)",
        orc.w4_shell((a, 0, 1, d, 0, 1), 13) == orc.w4_shell((0, a, 1, d, 0, 1), 13),
    )

# triple-zeta expansions of the two unit-pair families
for (a, d) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3), (3, 3)]:
    for K in (10, 14):
        check(
            f"unit-pair triples W4({a},0,1,{d},0,1) K={K}",
            orc.w4_shell((a, 0, 1, d, 0, 1), K) == orc.unit_pair_triples_shell(a, d, K),
        )
        check(
            f"unit-tail triples W4({a},0,1,0,0,{d + 1}) K={K}",
            orc.w4_shell((a, 0, 1, 0, 0, d + 1), K)
            == orc.unit_tail_triples_shell(a, d + 1, K),
        )

print(f"  (section 1: {time.time() - t0:.1f}s)")

# ---------------------------------------------------------------------------
sec("2. binomial variant probe (exact)")

t0 = time.time()
probe_points = [
    (1, 1, 2, 1, 1),
    (1, 1, 1, 2, 1),
    (2, 1, 2, 1, 2),
    (1, 2, 2, 1, 2),
    (2, 1, 1, 1, 2),
    (1, 2, 1, 1, 2),
    (2, 2, 1, 1, 2),
    (3, 1, 1, 1, 2),
    (1, 1, 1, 1, 3),
    (2, 2, 2, 2, 2),
]
for pt in probe_points:
    a, b, c, d, f = pt
    K = 12
    lhs = orc.w4_shell((a, b, c, d, 0, f), K)
    d22 = lhs - orc.w4_reduction_rhs_shell(a, b, c, d, f, K, "eq22")
    dpf = lhs - orc.w4_reduction_rhs_shell(a, b, c, d, f, K, "paper-final")
    tag = "eq22" if d22 == 0 else ("paper-final" if dpf == 0 else "NEITHER")
    distinguishes = (d22 == 0) != (dpf == 0)
    print(
        f"  {pt}: eq22 residual {'0' if d22 == 0 else 'NONZERO'}, "
        f"paper-final residual {'0' if dpf == 0 else 'NONZERO'}"
        f"  -> {'discriminates, valid=' + tag if distinguishes else 'agree at this point'}"
    )
    if d22 != 0:
        FAILURES.append((f"variant eq22 residual at {pt}", str(d22)))
print(f"  (section 2: {time.time() - t0:.1f}s)")

# ---------------------------------------------------------------------------
sec("3. float reference values")

t0 = time.time()


def show(name: str, mid: float, rad: float) -> None:
    print(f"  {name} = {mid!r}  (+/- {rad:.2e})")


z2 = orc.zeta_ref(2)
z3 = orc.zeta_ref(3)
z4 = orc.zeta_ref(4)
z6 = orc.zeta_ref(6)
show("zeta(2)", *z2)
show("zeta(3)", *z3)
show("zeta(4)", *z4)
show("zeta(6)", *z6)

mt111 = orc.mt_ref(1, 1, 1, 6000)
mt222 = orc.mt_ref(2, 2, 2, 3000)
show("MT(1,1,1)", *mt111)
show("MT(2,2,2)", *mt222)
print(f"    MT(1,1,1) - 2*zeta(3) = {mt111[0] - 2 * z3[0]:.3e}")
print(f"    MT(2,2,2) - zeta(6)/3 = {mt222[0] - z6[0] / 3:.3e}")
check(
    "MT(1,1,1) bracket contains 2*zeta(3)",
    abs(mt111[0] - 2 * z3[0]) <= mt111[1] + 2 * z3[1],
)
check(
    "MT(2,2,2) bracket contains zeta(6)/3",
    abs(mt222[0] - z6[0] / 3) <= mt222[1] + z6[1] / 3,
)

e21 = orc.euler2_ref(2, 1)
e51 = orc.euler2_ref(5, 1)
e42 = orc.euler2_ref(4, 2)
show("E(2,1)", *e21)
show("E(5,1)", *e51)
show("E(4,2)", *e42)
print(f"    E(2,1) - zeta(3)        = {e21[0] - z3[0]:.3e}")
print(f"    4E(5,1)+2E(4,2)-MT222   = {4 * e51[0] + 2 * e42[0] - mt222[0]:.3e}")
check(
    "E(2,1) bracket contains zeta(3)",
    abs(e21[0] - z3[0]) <= e21[1] + z3[1],
)
check(
    "double-sum expansion of MT(2,2,2) holds numerically",
    abs(4 * e51[0] + 2 * e42[0] - mt222[0]) <= 4 * e51[1] + 2 * e42[1] + mt222[1],
)

e311 = orc.euler3_ref(3, 1, 1)
e221 = orc.euler3_ref(2, 2, 1)
e211 = orc.euler3_ref(2, 1, 1)
show("E(3,1,1)", *e311)
show("E(2,2,1)", *e221)
show("E(2,1,1)", *e211)
print(f"    E(2,1,1) - zeta(4)      = {e211[0] - z4[0]:.3e}")
check(
    "E(2,1,1) bracket contains zeta(4)",
    abs(e211[0] - z4[0]) <= e211[1] + z4[1],
)

w4_2232 = orc.w4_ref((2, 2, 3, 2, 0, 0), 400)
show("W4(2,2,3,2,0,0)", *w4_2232)
print(f"    vs zeta(3)*MT(2,2,2)    = {w4_2232[0] - z3[0] * mt222[0]:.3e}")
check(
    "separable W4 bracket contains zeta(3)*MT(2,2,2)",
    abs(w4_2232[0] - z3[0] * mt222[0])
    <= w4_2232[1] + z3[0] * mt222[1] + z3[1] * (mt222[0] + mt222[1]),
)

# worked unit-pair reduction at (1,1,1): expect 6 E(3,1,1) + 2 E(2,2,1)
lhs111 = orc.w4_ref((1, 1, 1, 1, 0, 1), 500)
rhs111 = 6 * e311[0] + 2 * e221[0]
show("W4(1,1,1,1,0,1)", *lhs111)
print(f"    vs 6E(3,1,1)+2E(2,2,1)  = {lhs111[0] - rhs111:.3e} (radius {lhs111[1]:.1e})")
check(
    "worked unit-pair value (1,1,1) brackets overlap",
    abs(lhs111[0] - rhs111) <= lhs111[1] + 6 * e311[1] + 2 * e221[1],
)

# alternating four-term relation, numeric spot check at a=1, b=2, s=(2,2,2)
def relation_spot(a, b, s1, s2, s3, N):
    lhs = (
        (-1) ** a * orc.w4_ref_partial((s1, s2, a, s3, 0, b), N)
        + (-1) ** b * orc.w4_ref_partial((s1, s2, b, s3, 0, a), N)
        + orc.w4_ref_partial((a, 0, s2, s1, b, s3), N)
        + orc.w4_ref_partial((b, 0, s1, s2, a, s3), N)
    )
    zeta_mid = {i: orc.zeta_ref(i)[0] for i in range(2, a + b + 1)}
    mt_mid = {}

    def mt(aa, bb, cc):
        key = (aa, bb, cc)
        if key not in mt_mid:
            mt_mid[key] = orc.mt_ref(aa, bb, cc, 2500)[0]
        return mt_mid[key]

    rhs = 0.0
    for i in range(1, max(a, b) + 1):
        coef = comb(a + b - i - 1, a - 1) + comb(a + b - i - 1, b - 1)
        if i == 1:
            continue  # the log-divergent pieces cancel; checked symbolically
        rhs += coef * (-1) ** i * zeta_mid[i] * mt(s1, s2, s3 + a + b - i)
    for i in range(1, a + 1):
        coef = comb(a + b - i - 1, b - 1)
        z = zeta_mid[i] if i >= 2 else 0.0
        rhs += coef * (
            z * mt(s1, s2, s3 + a + b - i)
            - mt(s1 + i, s2, s3 + a + b - i)
            - mt(s1, s2, s3 + a + b)
        )
    for i in range(1, b + 1):
        coef = comb(a + b - i - 1, a - 1)
        z = zeta_mid[i] if i >= 2 else 0.0
        rhs += coef * (
            z * mt(s1, s2, s3 + a + b - i)
            - mt(s2 + i, s1, s3 + a + b - i)
            - mt(s1, s2, s3 + a + b)
        )
    return lhs, rhs


for (a, b, s) in [(1, 1, (2, 2, 2)), (1, 2, (2, 2, 2)), (2, 2, (2, 3, 2))]:
    l160, r = relation_spot(a, b, *s, 160)
    l320, _ = relation_spot(a, b, *s, 320)
    # leading truncation error is ~ C/N, so 2*lhs(2N) - lhs(N) cancels it
    rich = 2 * l320 - l160
    print(
        f"  four-term relation a={a} b={b} s={s}: lhs(320)-rhs = {l320 - r:.3e}"
        f"  (lhs(160)-rhs = {l160 - r:.3e}, extrapolated = {rich - r:.3e})"
    )
    check(
        f"four-term relation trend a={a} b={b} s={s}",
        abs(l320 - r) < abs(l160 - r) and abs(rich - r) < 0.2 * abs(l160 - r) + 1e-7,
    )

print(f"  (section 3: {time.time() - t0:.1f}s)")

# ---------------------------------------------------------------------------
print()
if FAILURES:
    print(f"{len(FAILURES)} FAILURES:")
    for name, detail in FAILURES:
        print(f"  - {name}: {detail[:200]}")
    sys.exit(1)
print("all checks passed")
