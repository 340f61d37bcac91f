"""Galois profiles of quintics and signed Frobenius sampling.

The label of a monic separable quintic among the five transitive
subgroups of S5 is decided by (i) squareness of the discriminant,
(ii) existence of a rational root of the degree-6 resolvent whose
stabilizer is the metacyclic group of order 20, and (iii) for the
C5/D10 split, a certificate search for a double-transposition cycle
type among sampled primes.  The resolvent is computed from high-precision
root approximations and recognized as an exact integer polynomial at two
increasing precisions; every rational root is then certified exactly.

Frobenius data at good primes is a cycle type plus one quadratic-residue
bit per local factor; the corresponding conjugacy class representative in
(Z/2)^5 x| S5 drives the subgroup sampling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import sympy

from .exact import (
    FpPoly,
    RatPoly,
    cycle_type,
    discriminant,
    factor_fp,
    factor_q,
    fp_powmod,
    fp_rem,
    is_square_q,
    resultant,
    val_unit,
)
from .groupmod import (
    IDENTITY_PERM,
    Perm,
    TRANSITIVE_SUBGROUPS,
    WreathElement,
    perm_closure,
    perm_cycle_type,
    wreath_closure,
)

_t = sympy.Symbol("t")
_y = sympy.Symbol("y")

LABELS = ("C5", "D10", "F20", "A5", "S5", "REDUCIBLE")

# Cycle types realized by each transitive subgroup of S5.
CLASS_SETS = {
    "C5": {(1, 1, 1, 1, 1), (5,)},
    "D10": {(1, 1, 1, 1, 1), (5,), (2, 2, 1)},
    "F20": {(1, 1, 1, 1, 1), (5,), (2, 2, 1), (4, 1)},
    "A5": {(1, 1, 1, 1, 1), (5,), (2, 2, 1), (3, 1, 1)},
    "S5": {(1, 1, 1, 1, 1), (5,), (2, 2, 1), (3, 1, 1), (2, 1, 1, 1), (3, 2), (4, 1)},
}


@dataclass(frozen=True)
class GaloisProfile:
    """Classification of a quintic with its supporting evidence."""

    label: str
    disc_is_square: bool
    resolvent_root: Optional[Fraction]
    evidence: tuple[tuple[int, tuple[int, ...]], ...]
    c5_bound: Optional[int] = None  # set when C5 was concluded by certificate absence
    tschirnhausen_steps: int = 0

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label}")
        if self.label in ("C5", "D10", "A5") and not self.disc_is_square:
            raise ValueError("square discriminant expected for " + self.label)
        if self.label in ("F20", "S5") and self.disc_is_square:
            raise ValueError("nonsquare discriminant expected for " + self.label)
        if self.label in ("C5", "D10", "F20") and self.resolvent_root is None:
            raise ValueError("resolvent root expected for " + self.label)
        if self.label in ("A5", "S5") and self.resolvent_root is not None:
            raise ValueError("no resolvent root expected for " + self.label)

    @property
    def probabilistic(self) -> bool:
        return self.c5_bound is not None


def _coset_theta_patterns() -> list[Perm]:
    """Six permutations giving the distinct conjugates of the order-20 invariant."""
    seen: dict[frozenset, Perm] = {}
    for perm in itertools.permutations(range(5)):
        mons = []
        for i in range(5):
            mons.append(tuple(sorted((perm[i], perm[i], perm[(i + 1) % 5], perm[(i + 4) % 5]))))
            mons.append(tuple(sorted((perm[i], perm[i], perm[(i + 2) % 5], perm[(i + 3) % 5]))))
        sig = frozenset(mons)
        if sig not in seen:
            seen[sig] = perm
    assert len(seen) == 6
    return list(seen.values())


_THETA_REPS = _coset_theta_patterns()


def _theta_value(roots, perm: Perm):
    x = [roots[perm[i]] for i in range(5)]
    acc = 0
    for i in range(5):
        acc += x[i] ** 2 * (x[(i + 1) % 5] * x[(i + 4) % 5] + x[(i + 2) % 5] * x[(i + 3) % 5])
    return acc


def _integer_quintic(P: RatPoly) -> tuple[list[int], int]:
    """Monic integer quintic with the same splitting field: x -> x/lam scaling."""
    lam = P.denominator_lcm()
    scaled = RatPoly.of([c * Fraction(lam) ** (5 - i) for i, c in enumerate(P.coeffs)])
    coeffs = [int(c) for c in scaled.coeffs]
    assert scaled.lc == 1
    return coeffs, lam


def resolvent_sextic(P: RatPoly) -> list[int]:
    """Exact integer coefficients of the degree-6 resolvent of a monic
    integer quintic, via root approximation at two agreeing precisions."""
    coeffs, _ = _integer_quintic(P)
    height = max(abs(c) for c in coeffs)
    base = 60 + int(24 * math.log10(height + 2))
    results = []
    for dps in (base, 2 * base):
        with mpmath.workdps(dps):
            poly = [mpmath.mpf(1)] + [mpmath.mpf(c) for c in reversed(coeffs[:-1])]
            roots = mpmath.polyroots(poly, maxsteps=400, extraprec=2 * dps)
            thetas = [_theta_value(roots, perm) for perm in _THETA_REPS]
            sext = [mpmath.mpc(1)]
            for th in thetas:
                new = [mpmath.mpc(0)] * (len(sext) + 1)
                for i, c in enumerate(sext):
                    new[i] += c * (-th)
                    new[i + 1] += c
                sext = new
            ints = []
            ok = True
            for c in reversed(sext):  # high-to-low
                r = mpmath.nint(c.real)
                if abs(c - r) > mpmath.mpf(10) ** (-10):
                    ok = False
                    break
                ints.append(int(r))
            if ok:
                results.append(ints)
    if len(results) == 2 and results[0] == results[1]:
        return results[0]  # high-to-low, monic
    raise ArithmeticError("resolvent coefficients did not stabilize")


def _rational_roots_int_poly(coeffs_high_to_low: list[int]) -> list[Fraction]:
    p = sympy.Poly(coeffs_high_to_low, _y)
    out = []
    for fac, _ in p.factor_list()[1]:
        fp = sympy.Poly(fac, _y)
        if fp.degree() == 1:
            a, b = fp.all_coeffs()
            out.append(Fraction(int(-b), int(a)))
    return sorted(out)


def _is_separable_int(coeffs_high_to_low: list[int]) -> bool:
    p = sympy.Poly(coeffs_high_to_low, _y)
    return sympy.gcd(p, p.diff(_y)).is_ground


def _tschirnhausen(coeffs: list[int], c: int) -> Optional[list[int]]:
    """Monic integer quintic whose roots are r^2 + c*r over the roots r."""
    Py = sympy.Poly([1] + list(reversed(coeffs[:-1])), _y)
    res = sympy.resultant(Py.as_expr(), _t - (_y**2 + c * _y), _y)
    q = sympy.Poly(res, _t)
    if q.degree() != 5:
        return None
    cs = [int(v) for v in q.all_coeffs()]
    if cs[0] < 0:
        cs = [-v for v in cs]
    if cs[0] != 1:
        return None
    if not _is_separable_int(cs):
        return None
    return cs


def resolvent_has_rational_root(P: RatPoly) -> tuple[Optional[Fraction], int]:
    """(a rational root of a separable metacyclic resolvent or None, #transforms)."""
    coeffs, _ = _integer_quintic(P)
    work = list(reversed(coeffs))  # high-to-low
    steps = 0
    while True:
        sext = resolvent_sextic(RatPoly.of(list(reversed(work))))
        if _is_separable_int(sext):
            roots = _rational_roots_int_poly(sext)
            return (roots[0] if roots else None), steps
        steps += 1
        if steps > 12:
            raise ArithmeticError("no separable resolvent found after 12 transforms")
        nxt = _tschirnhausen(list(reversed(work)), steps)
        while nxt is None:
            steps += 1
            if steps > 12:
                raise ArithmeticError("no usable transformation found")
            nxt = _tschirnhausen(list(reversed(work)), steps)
        work = nxt


def sample_cycle_types(P: RatPoly, count: int, skip: Sequence[int] = ()) -> list[tuple[int, tuple[int, ...]]]:
    """Cycle types of P at the first `count` good odd primes."""
    disc = discriminant(P)
    lam = P.denominator_lcm()
    out = []
    p = 2
    while len(out) < count:
        p = int(sympy.nextprime(p))
        if p in skip or lam % p == 0 or val_unit(disc, p)[0] != 0:
            continue
        out.append((p, cycle_type(P, p)))
    return out


def galois_group_quintic(
    P: RatPoly,
    evidence_primes: int = 40,
    c5_bound: int = 10_000,
) -> GaloisProfile:
    """Classify Gal(P) for a monic separable quintic over Q.

    The C5/D10 split searches primes below c5_bound for a (2,2,1) cycle
    type; a D10 answer is certified, a C5 answer records the bound.
    """
    if P.degree != 5 or P.lc != 1:
        raise ValueError("monic quintic required")
    disc = discriminant(P)
    if disc == 0:
        raise ValueError("quintic is not separable")
    disc_sq = is_square_q(disc)

    fac = factor_q(P)
    if len(fac) > 1 or fac[0][1] > 1:
        return GaloisProfile("REDUCIBLE", disc_sq, None, ())

    evidence = tuple(sample_cycle_types(P, evidence_primes))
    root, steps = resolvent_has_rational_root(P)

    if root is None:
        label = "A5" if disc_sq else "S5"
        return GaloisProfile(label, disc_sq, None, evidence, tschirnhausen_steps=steps)
    if not disc_sq:
        return GaloisProfile("F20", disc_sq, root, evidence, tschirnhausen_steps=steps)

    # C5 vs D10: hunt for a double transposition below the bound
    lam = P.denominator_lcm()
    seen: list[tuple[int, tuple[int, ...]]] = list(evidence)
    for p, ct in seen:
        if ct == (2, 2, 1):
            return GaloisProfile("D10", disc_sq, root, evidence, tschirnhausen_steps=steps)
    p = seen[-1][0] if seen else 2
    while p < c5_bound:
        p = int(sympy.nextprime(p))
        if lam % p == 0 or val_unit(disc, p)[0] != 0:
            continue
        if cycle_type(P, p) == (2, 2, 1):
            return GaloisProfile("D10", disc_sq, root, evidence, tschirnhausen_steps=steps)
    return GaloisProfile("C5", disc_sq, root, evidence, c5_bound=c5_bound, tschirnhausen_steps=steps)


# ---------------------------------------------------------------------------
# Signed Frobenius data

class RamifiedPrimeError(ValueError):
    pass


@dataclass(frozen=True)
class SignedFrobenius:
    """Frobenius class datum at a good odd prime.

    Local factors are in the canonical order (degree, lifted coefficients);
    bits[j] is the quadratic-residue bit of the relevant delta representative
    evaluated at a root of the j-th local factor in F_{p^deg}.
    """

    p: int
    local_factors: tuple[FpPoly, ...]
    bits: tuple[int, ...]
    global_index: tuple[int, ...]  # which (P_i, d_i) pair each local factor reduces

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((f.degree for f in self.local_factors), reverse=True))

    def class_datum(self) -> tuple[tuple[int, int], ...]:
        """Conjugacy invariant in the wreath group: multiset of (length, bit)."""
        return tuple(sorted(((f.degree, b) for f, b in zip(self.local_factors, self.bits)), reverse=True))

    def to_wreath(self, model_perms: Optional[frozenset[Perm]] = None) -> WreathElement:
        """Concrete class representative in (Z/2)^5 x| S5.

        With no model, positions are allocated consecutively per factor with
        standard cycles.  With a model subgroup, the lexicographically
        smallest model permutation of the sampled cycle type is used, so
        representatives across primes stay inside one copy of Gal(P); sign
        bits sit on the smallest position of their cycle either way.
        """
        if model_perms is None:
            perm = [0] * 5
            sign = 0
            pos = 0
            for f, b in zip(self.local_factors, self.bits):
                d = f.degree
                for k in range(d):
                    perm[pos + k] = pos + (k + 1) % d
                if b:
                    sign |= 1 << pos
                pos += d
            if pos != 5:
                raise ValueError("local degrees do not sum to 5")
            return WreathElement(sign, tuple(perm))
        return class_representative(self.class_datum(), model_perms)


def frobenius_class(
    P: RatPoly,
    delta_factors: Sequence[tuple[RatPoly, RatPoly]],
    p: int,
) -> SignedFrobenius:
    """Cycle type of P mod p with per-factor residue bits of delta.

    delta_factors pairs each irreducible factor of P with its delta
    representative.  p must be odd, unramified for P and for delta.
    """
    if p == 2:
        raise RamifiedPrimeError("p = 2 rejected")
    disc = discriminant(P)
    if P.denominator_lcm() % p == 0 or val_unit(disc, p)[0] != 0:
        raise RamifiedPrimeError(f"{p} divides disc(P) or a denominator")
    for Pi, di in delta_factors:
        if di.is_zero:
            raise ValueError("zero delta representative")
        if di.denominator_lcm() % p == 0 or val_unit(resultant(Pi, di), p)[0] != 0:
            raise RamifiedPrimeError(f"delta ramifies at {p}")

    factors = [f for f, _ in factor_fp(FpPoly.from_ratpoly(P, p))]
    bits = []
    gidx = []
    for m in factors:
        i = _matching_global_factor(delta_factors, m, p)
        gidx.append(i)
        d_red = FpPoly.from_ratpoly(delta_factors[i][1], p)
        e = fp_rem(list(d_red.coeffs), list(m.coeffs), p)
        if not e:
            raise RamifiedPrimeError(f"delta vanishes mod ({p}, factor)")
        f = m.degree
        s = fp_powmod(e, (p**f - 1) // 2, list(m.coeffs), p)
        if s == [1]:
            bits.append(0)
        elif s == [p - 1]:
            bits.append(1)
        else:
            raise ArithmeticError("residue power not +-1; modulus not irreducible?")
    return SignedFrobenius(p, tuple(factors), tuple(bits), tuple(gidx))


def _matching_global_factor(delta_factors, m: FpPoly, p: int) -> int:
    for i, (Pi, _) in enumerate(delta_factors):
        red = FpPoly.from_ratpoly(Pi, p)
        if not fp_rem(list(red.coeffs), list(m.coeffs), p):
            return i
    raise ArithmeticError("local factor matches no global factor")


def class_representative(
    class_datum: tuple[tuple[int, int], ...], model_perms: frozenset[Perm]
) -> WreathElement:
    """Lex-min model permutation with the datum's cycle type, bits on the
    smallest position of each cycle (same-length cycles matched in order)."""
    target = tuple(sorted((l for l, _ in class_datum), reverse=True))
    candidates = sorted(p for p in model_perms if perm_cycle_type(p) == target)
    if not candidates:
        raise ValueError(f"cycle type {target} not realized in the model subgroup")
    perm = candidates[0]
    cycles = sorted(_perm_cycles(perm), key=lambda c: (-len(c), min(c)))
    entries = sorted(class_datum, key=lambda e: (-e[0], -e[1]))
    sign = 0
    for cyc, (length, bit) in zip(cycles, entries):
        assert len(cyc) == length
        if bit:
            sign |= 1 << min(cyc)
    return WreathElement(sign, perm)


def _perm_cycles(perm: Perm) -> list[list[int]]:
    seen, out = set(), []
    for i in range(5):
        if i in seen:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = perm[j]
        out.append(c)
    return out


def _model_subgroup(P: RatPoly) -> frozenset[Perm]:
    """A copy of Gal(P) inside S5 consistent with all Frobenius cycle types.

    Irreducible quintics use the standard copy of their label; reducible ones
    use the product of symmetric groups on the blocks of the factorization.
    """
    fac = factor_q(P)
    if len(fac) == 1 and fac[0][1] == 1 and fac[0][0].degree == 5:
        label = galois_group_quintic(P).label
        return perm_closure(TRANSITIVE_SUBGROUPS[label])
    gens: list[Perm] = []
    pos = 0
    for f, mult in fac:
        for _ in range(mult):
            d = f.degree
            if d >= 2:
                base = list(IDENTITY_PERM)
                base[pos], base[pos + 1] = pos + 1, pos
                gens.append(tuple(base))
                cyc = list(IDENTITY_PERM)
                for k in range(d):
                    cyc[pos + k] = pos + (k + 1) % d
                gens.append(tuple(cyc))
            pos += d
    return perm_closure(gens)


@dataclass(frozen=True)
class SubgroupSample:
    """Monotone lower bound for the image of Galois on the 10-point cover."""

    generators: tuple[WreathElement, ...]
    order: int
    stable: bool
    history: tuple[tuple[int, int], ...]  # (prime, group order after adding it)
    model_order: int = 0

    def contains_sign_part_only(self) -> bool:
        return all(g.perm == (0, 1, 2, 3, 4) for g in wreath_closure(self.generators))


def kdelta_subgroup_sample(
    P: RatPoly,
    delta_factors: Sequence[tuple[RatPoly, RatPoly]],
    prime_budget: int = 60,
) -> SubgroupSample:
    """Subgroup of (Z/2)^5 x| S5 generated by sampled Frobenius representatives.

    Representatives live in a fixed model copy of Gal(P), so the order always
    divides 16 * |model|.  Monotone in the budget; reported stable when the
    order did not grow over the last half of the budget.  Sign parts stay
    zero-sum whenever the delta data has square norm (the norm relation at
    the Frobenius level).
    """
    disc = discriminant(P)
    lam = P.denominator_lcm()
    model = _model_subgroup(P)
    gens: list[WreathElement] = []
    history: list[tuple[int, int]] = []
    group: frozenset[WreathElement] = wreath_closure([])
    p = 2
    used = 0
    while used < prime_budget:
        p = int(sympy.nextprime(p))
        if lam % p == 0 or val_unit(disc, p)[0] != 0:
            continue
        try:
            fr = frobenius_class(P, delta_factors, p)
        except RamifiedPrimeError:
            continue
        used += 1
        g = fr.to_wreath(model)
        if g not in group:
            gens.append(g)
            group = wreath_closure(gens)
        history.append((p, len(group)))
    half = len(history) // 2
    stable = len(history) >= 2 and history[half][1] == history[-1][1]
    return SubgroupSample(tuple(gens), len(group), stable, tuple(history), len(model))
