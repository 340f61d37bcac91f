"""Tests for pencil normalization and delta invariants."""

import random
from fractions import Fraction

import pytest

from quadpencil.exact import RatPoly, is_square_q, resultant, sqrt_in_etale
from quadpencil.pencil import (
    BrauerQuotient,
    DeltaInvariant,
    InsufficientCertificatesError,
    Pencil,
    SingularPencilError,
    b_delta_group,
    char_poly_t,
    delta_invariant,
    hasse_class,
    mat_congruent,
    matrix_of,
    normalize_pencil,
    pencil_from_json,
    pencil_loads,
    pencil_dumps,
    random_pencil,
    smoothness_certificate,
    verify_norm_square,
)


def diag(*entries):
    return matrix_of([[entries[i] if i == j else 0 for j in range(5)] for i in range(5)])


DIAG_PENCIL = Pencil(diag(1, 1, 1, 1, 1), diag(0, 1, 2, 3, 4))


def poly(*coeffs):
    return RatPoly.of(coeffs)


class TestNormalization:
    def test_diag_pencil_characteristic_quintic(self):
        norm = normalize_pencil(DIAG_PENCIL)
        # det(phi2) = 0, so the identity chart is unusable and the chart is
        # a nontrivial Moebius move; P is still monic of degree 5
        assert norm.chart != (1, 0, 0, 1)
        assert norm.P.degree == 5 and norm.P.lc == 1
        # up to the chart the singular parameters are {0, 1, 1/2, 1/3, 1/4}
        # in the original s = phi1 - s phi2 parametrization; with the swap
        # chart the recovered quintic is exactly t(t-1)(t-2)(t-3)(t-4)
        assert norm.P == RatPoly.from_roots([0, 1, 2, 3, 4])

    def test_det_identity(self):
        norm = normalize_pencil(DIAG_PENCIL)
        q = char_poly_t(norm.phi1n, norm.phi2n)
        assert q == norm.P * norm.lead

    def test_singular_pencil_rejected(self):
        # phi2 = phi1 gives det(mu phi1 - nu phi1) with a quintuple root
        with pytest.raises(SingularPencilError):
            smoothness_certificate(Pencil(diag(1, 1, 1, 1, 1), diag(1, 1, 1, 1, 1)))

    def test_repeated_factor_reported(self):
        # members at t = 0 and t = 0 again: phi1 singular of corank 2
        p = Pencil(diag(0, 0, 1, 1, 1), diag(1, 1, 1, 2, 3))
        with pytest.raises(SingularPencilError):
            smoothness_certificate(p)

    def test_deep_chart_enumeration(self):
        # singular members at infinity, 0, 1, -1 and 2 knock out the first
        # several chart candidates; normalization must dig deeper
        p = Pencil(diag(1, 0, 1, -1, 2), diag(0, 1, 1, 1, 1))
        norm = normalize_pencil(p)
        assert norm.P.degree == 5
        from quadpencil.exact import discriminant

        assert discriminant(norm.P) != 0
        inv = delta_invariant(norm, certify=False)
        assert verify_norm_square(inv)


class TestDeltaInvariant:
    def test_diag_pencil_delta(self):
        # independent oracle: after the swap chart the singular member at
        # root a_i is diag(a_j - a_i), kernel e_i, restricted determinant
        # prod_{j != i} (a_j - a_i)
        norm = normalize_pencil(DIAG_PENCIL)
        inv = delta_invariant(norm)
        roots = [0, 1, 2, 3, 4]
        expected = {}
        for i, ai in enumerate(roots):
            prod = Fraction(1)
            for j, aj in enumerate(roots):
                if j != i:
                    prod *= aj - ai
            expected[ai] = prod
        for f, d in inv.factor_reps():
            root = -f[0]
            ratio = d(root) * expected[root]
            assert ratio != 0 and is_square_q(abs(ratio)) == (ratio > 0) and is_square_q(ratio)

    def test_diag_pencil_flags(self):
        norm = normalize_pencil(DIAG_PENCIL)
        inv = delta_invariant(norm)
        # 24, -6, 4, -6, 24 up to squares: 6, -6, 1, -6, 6
        by_root = {int(-f[0]): fl for f, fl in zip(inv.factors, inv.square_flags)}
        assert by_root == {
            0: "nonsquare",
            1: "nonsquare",
            2: "square",
            3: "nonsquare",
            4: "nonsquare",
        }

    def test_norm_square_law(self):
        norm = normalize_pencil(DIAG_PENCIL)
        inv = delta_invariant(norm, certify=False)
        assert verify_norm_square(inv)

    def test_norm_square_law_random(self):
        rng = random.Random(20240)
        for _ in range(12):
            pencil = random_pencil(rng)
            inv = delta_invariant(normalize_pencil(pencil), certify=False)
            assert verify_norm_square(inv)

    def test_hand_built_violation(self):
        split = RatPoly.from_roots([0, 1, 2, 3, 4])
        inv = DeltaInvariant(
            (Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
            split,
            tuple(RatPoly.of([-r, 1]) for r in range(5)),
            (poly(5), poly(1), poly(1), poly(1), poly(1)),
            ("nonsquare", "square", "square", "square", "square"),
        )
        assert not verify_norm_square(inv)

    def test_square_class_invariance_scaling(self):
        rng = random.Random(7)
        pencil = random_pencil(rng)
        lam = Fraction(3, 7)
        scaled = Pencil(
            matrix_of([[lam * x for x in row] for row in pencil.phi1]),
            matrix_of([[lam * x for x in row] for row in pencil.phi2]),
        )
        inv1 = delta_invariant(normalize_pencil(pencil))
        inv2 = delta_invariant(normalize_pencil(scaled))
        assert inv1.P == inv2.P
        assert inv1.square_flags == inv2.square_flags
        assert b_delta_group(inv1).dimension == b_delta_group(inv2).dimension

    def test_square_class_invariance_congruence(self):
        rng = random.Random(8)
        pencil = random_pencil(rng)
        u = matrix_of(
            [
                [1, 1, 0, 0, 0],
                [0, 1, 0, 0, 2],
                [0, 0, 1, 0, 0],
                [1, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ]
        )
        conj = Pencil(mat_congruent(pencil.phi1, u), mat_congruent(pencil.phi2, u))
        inv1 = delta_invariant(normalize_pencil(pencil))
        inv2 = delta_invariant(normalize_pencil(conj))
        assert inv1.P == inv2.P
        assert inv1.square_flags == inv2.square_flags

    def test_canonical_split_nontrivial_flags(self):
        # the canonical pencil of (split quintic, (5,5,1,1,1)) carries
        # exactly two nonsquare components
        from quadpencil.canon import canonical_quadrics

        model = canonical_quadrics(RatPoly.from_roots([0, 1, 2, 3, 4]), [5, 5, 1, 1, 1])
        inv = delta_invariant(normalize_pencil(model.to_pencil()))
        assert sorted(inv.square_flags) == [
            "nonsquare",
            "nonsquare",
            "square",
            "square",
            "square",
        ]

    def test_canonical_trivial_flags_all_square(self):
        from quadpencil.canon import canonical_quadrics

        model = canonical_quadrics(RatPoly.from_roots([0, 1, 2, 3, 4]), poly(1))
        inv = delta_invariant(normalize_pencil(model.to_pencil()))
        assert set(inv.square_flags) == {"square"}

    def test_chart_independence(self):
        rng = random.Random(9)
        pencil = random_pencil(rng)
        n1 = normalize_pencil(pencil)
        n2 = normalize_pencil(pencil, skip_charts=1)
        assert n1.chart != n2.chart
        i1 = delta_invariant(n1)
        i2 = delta_invariant(n2)
        assert [f.degree for f in i1.factors] == [f.degree for f in i2.factors]
        assert sorted(i1.square_flags) == sorted(i2.square_flags)
        if "undecided" not in i1.square_flags and "undecided" not in i2.square_flags:
            assert b_delta_group(i1).dimension == b_delta_group(i2).dimension


def _split_invariant(deltas):
    split = RatPoly.from_roots([0, 1, 2, 3, 4])
    flags = tuple("square" if is_square_q(d) else "nonsquare" for d in deltas)
    return DeltaInvariant(
        (Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
        split,
        tuple(RatPoly.of([-r, 1]) for r in range(5)),
        tuple(poly(d) for d in deltas),
        flags,
    )


class TestBrauerQuotient:
    def test_delta_zero(self):
        inv = _split_invariant([1, 1, 1, 1, 1])
        assert b_delta_group(inv).dimension == 0

    def test_55111(self):
        inv = _split_invariant([5, 5, 1, 1, 1])
        b = b_delta_group(inv)
        assert b.dimension == 0
        # exhaustive scan: F_2^2 vectors with square product are (0,0),(1,1)
        assert b.nonsquare_indices == (0, 1)

    def test_55551(self):
        inv = _split_invariant([5, 5, 5, 5, 1])
        b = b_delta_group(inv)
        assert b.dimension == 2

    def test_undecided_rejected(self):
        split = RatPoly.from_roots([0, 1, 2, 3, 4])
        inv = DeltaInvariant(
            (Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
            split,
            tuple(RatPoly.of([-r, 1]) for r in range(5)),
            tuple(poly(1) for _ in range(5)),
            ("undecided",) * 5,
        )
        with pytest.raises(InsufficientCertificatesError):
            b_delta_group(inv)


class TestHasseClass:
    def test_irreducible(self):
        from quadpencil.galois import galois_group_quintic

        P = poly(-2, 0, 0, 0, 0, 1)
        inv = DeltaInvariant(
            (Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
            P,
            (P,),
            (poly(1),),
            ("square",),
        )
        prof = galois_group_quintic(P)
        assert hasse_class(inv, prof).kind == "IRREDUCIBLE"

    def test_split_cases(self):
        from quadpencil.galois import galois_group_quintic

        split = RatPoly.from_roots([0, 1, 2, 3, 4])
        prof = galois_group_quintic(split)
        assert hasse_class(_split_invariant([5, 5, 5, 5, 1]), prof).kind == "SPLIT_NONTRIVIAL_BRAUER"
        assert hasse_class(_split_invariant([1, 1, 1, 1, 1]), prof).kind == "SPLIT_TRIVIAL_BRAUER"
        assert hasse_class(_split_invariant([5, 5, 1, 1, 1]), prof).kind == "SPLIT_TRIVIAL_BRAUER"


class TestJson:
    def test_roundtrip(self):
        rng = random.Random(3)
        pencil = random_pencil(rng)
        again = pencil_loads(pencil_dumps(pencil))
        assert again == pencil

    def test_malformed(self):
        with pytest.raises(ValueError):
            pencil_from_json({"phi1": [["1/1"]]})
