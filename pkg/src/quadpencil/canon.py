"""Canonical surface models attached to (P, delta').

The two canonical Gram matrices are weighted trace forms on the basis
1, theta, ..., theta^4 of Q[t]/(P): entries Tr(w(theta) delta' theta^(i+j))
with weights 1/P'(theta) and theta/P'(theta).  The double-cover model adds
x^2 = (trace form with weight P(b)/((b-theta) P'(theta))), and the branch
locus form drops the P(b) factor.  All traces are traces of multiplication
operators, computed from the power sums of P; no root approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import (
    RatPoly,
    Residue,
    crt_poly,
    discriminant,
    factor_q,
    inverse_mod,
    is_square_q,
    resultant,
    sqrt_in_etale,
    strip_square_content,
)
from .pencil import (
    Matrix,
    NormalizedPencil,
    Pencil,
    binary_quintic,
    delta_invariant,
    matrix_of,
    normalize_pencil,
)

DeltaInput = Union[RatPoly, Sequence[RatPoly], Sequence[int]]


def power_sums(P: RatPoly, upto: int) -> list[Fraction]:
    """s_k = sum of k-th powers of the roots, k = 0..upto (Newton)."""
    n = P.degree
    if P.lc != 1:
        raise ValueError("monic polynomial required")
    c = [P[i] for i in range(n + 1)]
    s = [Fraction(n)]
    for k in range(1, upto + 1):
        acc = Fraction(0)
        for i in range(1, k):
            acc += c[n - i] * s[k - i]
        if k <= n:
            acc += k * c[n - k]
        else:
            acc += 0
        s.append(-acc)
    return s


def trace_of(g: RatPoly, P: RatPoly, sums: Optional[list[Fraction]] = None) -> Fraction:
    """Trace of multiplication by g on Q[t]/(P)."""
    g = g % P
    if sums is None:
        sums = power_sums(P, P.degree - 1)
    return sum((g[j] * sums[j] for j in range(P.degree)), Fraction(0))


def normalize_delta(P: RatPoly, delta_prime: DeltaInput) -> RatPoly:
    """Accept a single class mod P or a per-factor list; return one class.

    Per-factor lists follow the factor order of factor_q(P) and are glued by
    CRT.  The class must be invertible modulo every factor.
    """
    if isinstance(delta_prime, RatPoly):
        d = delta_prime % P
    else:
        entries = [
            e if isinstance(e, RatPoly) else RatPoly.const(e) for e in delta_prime
        ]
        factors = [f for f, _ in factor_q(P)]
        if len(entries) != len(factors):
            raise ValueError(
                f"{len(entries)} delta entries for {len(factors)} factors"
            )
        d = crt_poly([e % f for e, f in zip(entries, factors)], factors)
    for f, _ in factor_q(P):
        if (d % f).is_zero:
            raise ValueError(f"delta' not invertible modulo {f}")
    return d


def trace_form(P: RatPoly, weight: RatPoly, delta: RatPoly) -> Matrix:
    """Gram matrix Tr(weight * delta * theta^(i+j)) on the power basis.

    weight and delta are residue classes mod P; the matrix is the Hankel
    array of the traces tau_k = Tr(weight delta theta^k), k = 0..8.
    """
    sums = power_sums(P, P.degree - 1)
    h = (weight * delta) % P
    taus = []
    cur = h
    for k in range(9):
        taus.append(trace_of(cur, P, sums))
        cur = (cur * RatPoly.of([0, 1])) % P
    return matrix_of([[taus[i + j] for j in range(5)] for i in range(5)])


@dataclass(frozen=True)
class CanonicalModel:
    """The pair of canonical quadrics of (P, delta')."""

    P: RatPoly
    delta: RatPoly  # one residue class mod P
    gram1: Matrix  # weight 1/P'
    gram2: Matrix  # weight theta/P'

    def to_pencil(self) -> Pencil:
        return Pencil(self.gram1, self.gram2)

    def delta_factors(self) -> list[tuple[RatPoly, RatPoly]]:
        return [(f, self.delta % f) for f, _ in factor_q(self.P)]

    def norm(self) -> Fraction:
        n = Fraction(1)
        for f, d in self.delta_factors():
            n *= resultant(f, d)
        return n


def canonical_quadrics(P: RatPoly, delta_prime: DeltaInput) -> CanonicalModel:
    """Gram matrices of the two trace forms cutting out the canonical model."""
    if P.degree != 5 or P.lc != 1:
        raise ValueError("monic quintic required")
    if discriminant(P) == 0:
        raise ValueError("P must be separable")
    delta = normalize_delta(P, delta_prime)
    w1 = inverse_mod(P.derivative(), P)
    g1 = trace_form(P, w1, delta)
    g2 = trace_form(P, (w1 * RatPoly.of([0, 1])) % P, delta)
    return CanonicalModel(P, delta, g1, g2)


@dataclass(frozen=True)
class KummerModel:
    """Canonical quadrics plus the double-cover equation at parameter b.

    The model lives in P^5 with coordinates (x, u0..u4): the two canonical
    quadrics in u, and x^2 = gram3(u).
    """

    base: CanonicalModel
    b: Fraction
    gram3: Matrix

    def quadrics(self) -> list[Matrix]:
        z = [Fraction(0)] * 5
        out = []
        for g, x2 in ((self.base.gram1, 0), (self.base.gram2, 0)):
            rows = [[Fraction(x2)] + z] + [[Fraction(0)] + list(row) for row in g]
            out.append(matrix_of(rows))
        rows = [[Fraction(1)] + z] + [
            [Fraction(0)] + [-x for x in row] for row in self.gram3
        ]
        out.append(matrix_of(rows))
        return out


def kummer_model(P: RatPoly, delta_prime: DeltaInput, b) -> KummerModel:
    """Double cover datum at b: gram3 = trace form with weight
    P(b) / ((b - theta) P'(theta)); requires P(b) != 0."""
    b = Fraction(b)
    if P(b) == 0:
        raise ValueError("b is a root of P")
    base = canonical_quadrics(P, delta_prime)
    w = inverse_mod((RatPoly.of([b, -1]) * P.derivative()) % P, P)
    g3 = trace_form(P, (w * P(b)) % P, base.delta)
    return KummerModel(base, b, g3)


def branch_form(P: RatPoly, delta_prime: DeltaInput, b) -> Matrix:
    """Branch locus form: weight 1 / ((b - theta) P'(theta))."""
    b = Fraction(b)
    if P(b) == 0:
        raise ValueError("b is a root of P")
    delta = normalize_delta(P, delta_prime)
    w = inverse_mod((RatPoly.of([b, -1]) * P.derivative()) % P, P)
    return trace_form(P, w, delta)


@dataclass(frozen=True)
class Genus2Model:
    """Hyperelliptic curve y^2 = a (x - b) P(x) with its twist discriminant."""

    b: Fraction
    a: Fraction
    sextic: RatPoly
    d_b: Fraction


def genus2_model(P: RatPoly, b, a=1) -> Genus2Model:
    b, a = Fraction(b), Fraction(a)
    if a == 0:
        raise ValueError("twist parameter a must be nonzero")
    if P(b) == 0:
        raise ValueError("b is a root of P")
    sextic = (RatPoly.of([-b, 1]) * P) * a
    if sextic.gcd(sextic.derivative()).degree != 0:
        raise ValueError("sextic not squarefree")
    d_b = P(b) ** 2 * discriminant(P)
    return Genus2Model(b, a, sextic, d_b)


# ---------------------------------------------------------------------------
# Round trip: canonical model -> pencil invariants -> compare

@dataclass(frozen=True)
class FactorMatch:
    input_factor: RatPoly
    recovered_factor: RatPoly
    ratio_status: str  # "square" when the classes agree

    @property
    def ok(self) -> bool:
        return self.ratio_status == "square"


@dataclass(frozen=True)
class RoundTripReport:
    P: RatPoly
    norm_value: Fraction
    det_identity_ok: bool
    norm_is_square: bool
    recovered: NormalizedPencil
    matches: tuple[FactorMatch, ...]

    @property
    def ok(self) -> bool:
        return self.det_identity_ok and all(m.ok for m in self.matches)

    def failures(self) -> list[str]:
        out = []
        if not self.det_identity_ok:
            out.append("characteristic binary form differs from N * P")
        for m in self.matches:
            if not m.ok:
                out.append(
                    f"delta class mismatch on {m.input_factor}: {m.ratio_status}"
                )
        return out


def _mobius_pullback(f: RatPoly, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> RatPoly:
    """(d t - b)^deg f * f((a - c t)/(d t - b)), expanded exactly."""
    num = RatPoly.of([a, -c])
    den = RatPoly.of([-b, d])
    deg = f.degree
    out = RatPoly(())
    num_pow = RatPoly.of([1])
    den_pows = [RatPoly.of([1])]
    for _ in range(deg):
        den_pows.append(den_pows[-1] * den)
    for k in range(deg + 1):
        out = out + RatPoly.const(f[k]) * num_pow * den_pows[deg - k]
        num_pow = num_pow * num
    return out


def roundtrip_invariants(
    P: RatPoly, delta_prime: DeltaInput, prime_budget: int = 200
) -> RoundTripReport:
    """Build the canonical quadrics, re-extract the pencil invariants, and
    certify that P and the delta square classes come back unchanged.

    The characteristic identity is exact: det(mu gram1 - nu gram2) equals
    N(delta') times the homogenized P with roots at mu/nu, and N(delta') is
    a square whenever delta' is a legitimate norm-one class.
    """
    model = canonical_quadrics(P, delta_prime)
    pencil = model.to_pencil()
    n = model.norm()

    bq = binary_quintic(pencil)  # coefficients of sum c_i mu^(5-i) nu^i
    det_ok = all(bq[i] == n * P[5 - i] for i in range(6))

    recovered = normalize_pencil(pencil)
    inv = delta_invariant(recovered, certify=False)
    a, b, c, d = recovered.chart

    matches = []
    used = set()
    for rf, rd in inv.factor_reps():
        target = None
        for j, (pf, pd) in enumerate(model.delta_factors()):
            if j in used or pf.degree != rf.degree:
                continue
            if (_mobius_pullback(pf, a, b, c, d) % rf).is_zero:
                target = (j, pf, pd)
                break
        if target is None:
            matches.append(FactorMatch(RatPoly(()), rf, "no-matching-factor"))
            continue
        j, pf, pd = target
        used.add(j)
        theta = Residue.of(RatPoly.of([a, -c]), rf) * Residue.of(
            RatPoly.of([-b, d]), rf
        ).inverse()
        mapped = _eval_poly_at_residue(pd, theta)
        ratio = Residue.of(rd, rf) * mapped.inverse()
        reduced = strip_square_content(ratio.poly)
        status = sqrt_in_etale(reduced, rf, prime_budget=prime_budget).status
        matches.append(FactorMatch(pf, rf, status))
    return RoundTripReport(P, n, det_ok, is_square_q(n), recovered, tuple(matches))


def _eval_poly_at_residue(f: RatPoly, x: Residue) -> Residue:
    acc = Residue.of(RatPoly(()), x.modulus)
    for c in reversed(f.coeffs):
        acc = acc * x + Residue.of(RatPoly.const(c), x.modulus)
    return acc
