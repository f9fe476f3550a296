"""Curves, the group law, counting, twists, torsion.

The brute oracles here never touch the fast paths they are checking: point
counts are re-done with double loops over (x, y), group structure is read off
the full table of point orders, and extension orders are re-counted from
scratch over the extension field before being compared with the trace
recurrence.
"""

import random
from math import gcd

import pytest

from isogenion.errors import (
    BoundExceeded,
    CurveMismatch,
    NoSuchTwist,
    NotImaginaryQuadratic,
    SingularCurve,
)
from isogenion.elliptic_curve import (
    Curve,
    CurveClass,
    base_change,
    count_points,
    curve_class,
    curve_from_j,
    curve_order_over_extension,
    discriminant_frobenius_order,
    divide_point,
    embed_point,
    frobenius_endo,
    group_structure,
    is_supersingular,
    isomorphism_scale,
    j_invariant,
    point_add,
    point_order,
    quadratic_twist,
    scalar_mul,
    sylow_basis,
    torsion_basis,
    trace_over_extension,
    twist_classes,
    two_dim_dlog,
)
from isogenion.finite_field import field_create
from isogenion.intmath import factorize, valuation
from isogenion.polyring import Poly, roots, subfield_embedding


def _all_points(E):
    """Brute enumeration by the defining equation (oracle helper)."""
    pts = [E.infinity()]
    F = E.field
    for x in F.elements():
        for y in F.elements():
            if y * y == E.rhs(x):
                pts.append(E.point(x, y))
    return pts


# ---------------------------------------------------------------------------
# construction


def test_singular_curve_rejected():
    F = field_create(5)
    with pytest.raises(SingularCurve):
        Curve(F, 0, 0)
    with pytest.raises(SingularCurve):
        Curve(F, F.from_int(-3), F.from_int(2))  # x^3 - 3x + 2 = (x-1)^2(x+2)


def test_small_characteristic_rejected():
    with pytest.raises(ValueError):
        Curve(field_create(3, 2), 1, 1)


def test_mixed_field_coefficients_rejected():
    with pytest.raises(CurveMismatch):
        Curve(field_create(5), field_create(7).from_int(1), 1)


def test_point_validation():
    E = Curve(field_create(5), 1, 0)
    P = E.point(0, 0)
    assert P and P.x == E.field.zero
    with pytest.raises(ValueError):
        E.point(1, 1)  # 1 != 1 + 1 + 0


# ---------------------------------------------------------------------------
# group law


def test_two_torsion_table_gf5():
    # y^2 = x^3 + x over GF(5): exactly the four points below (oracle sweep)
    E = Curve(field_create(5), 1, 0)
    pts = _all_points(E)
    assert len(pts) == 4
    P, Q = E.point(0, 0), E.point(2, 0)
    R = point_add(P, Q)
    # elimination: the sum is a group element; it cannot be inf (Q != -P),
    # nor P or Q (that would force the other summand to be inf)
    assert R in pts and R not in (E.infinity(), P, Q)
    assert R == E.point(3, 0)


def test_identity_and_inverses():
    E = Curve(field_create(41), 15, 10)
    rng = random.Random(1)
    for _ in range(20):
        P = E.random_point(rng)
        assert point_add(P, E.infinity()) == P
        assert point_add(E.infinity(), P) == P
        assert not point_add(P, -P)
    for x, _ in roots(Poly.from_ints(E.field, [10, 15, 0, 1])):
        T = E.point(x, 0)
        assert not point_add(T, T)


def test_group_law_associative_commutative():
    cases = [
        Curve(field_create(41), 15, 10),
        Curve(field_create(7, 2), 1, 3),
    ]
    for E in cases:
        rng = random.Random(E.field.order)
        for _ in range(1000):
            P, Q, R = (E.random_point(rng) for _ in range(3))
            assert point_add(P, Q) == point_add(Q, P)
            assert point_add(point_add(P, Q), R) == point_add(P, point_add(Q, R))


def test_scalar_mul_basics():
    E = Curve(field_create(41), 15, 10)
    N = E.order
    rng = random.Random(2)
    for _ in range(15):
        P = E.random_point(rng)
        assert not scalar_mul(0, P)
        assert not scalar_mul(N, P)
        assert scalar_mul(-7, P) == -scalar_mul(7, P)
        assert scalar_mul(5, P) == P + P + P + P + P
    assert not scalar_mul(3, E.infinity())


def test_point_order_matches_brute():
    E = Curve(field_create(13), 2, 3)
    for P in _all_points(E):
        o = point_order(P)
        # brute: smallest k >= 1 with k*P = inf
        T, k = P, 1
        while T:
            T = point_add(T, P)
            k += 1
        assert o == k


def test_cross_curve_addition_rejected():
    E1 = Curve(field_create(5), 1, 0)
    E2 = Curve(field_create(5), 1, 1)
    with pytest.raises(CurveMismatch):
        point_add(E1.point(0, 0), E2.point(0, 1))


# ---------------------------------------------------------------------------
# counting


def test_count_gf5_sweep_example():
    E = Curve(field_create(5), 1, 0)
    # oracle: direct double loop
    n = 1 + sum(
        1
        for x in range(5)
        for y in range(5)
        if (y * y - (x**3 + x)) % 5 == 0
    )
    assert n == 4
    assert count_points(E) == (4, 2)


def test_count_matches_brute_random():
    rng = random.Random(3)
    for F in (field_create(41), field_create(7, 2), field_create(13)):
        for _ in range(8):
            while True:
                A = F.from_coeffs([rng.randrange(F.p) for _ in range(F.r)])
                B = F.from_coeffs([rng.randrange(F.p) for _ in range(F.r)])
                if 4 * A * A * A + 27 * B * B:
                    break
            E = Curve(F, A, B)
            assert count_points(E)[0] == len(_all_points(E))


def test_twist_orders_sum():
    F = field_create(41)
    rng = random.Random(4)
    for _ in range(10):
        while True:
            A, B = F.from_int(rng.randrange(41)), F.from_int(rng.randrange(41))
            try:
                E = Curve(F, A, B)
                break
            except SingularCurve:
                continue
        assert E.order + quadratic_twist(E).order == 2 * 41 + 2
        t = E.trace
        assert t * t <= 4 * 41


def test_count_respects_cap():
    # no sweep over q > 2^20; GF(1031^2) is past the cap
    E = Curve(field_create(1031, 2), 1, 3)
    with pytest.raises(BoundExceeded):
        count_points(E)


def test_paper_scale_orders():
    assert curve_from_j(field_create(41), 29, 6).order == 36
    assert curve_from_j(field_create(53), 0, 0).order == 54


# ---------------------------------------------------------------------------
# extensions


@pytest.mark.parametrize("p,A,B,smax", [(7, 1, 3, 5), (5, 2, 1, 6), (41, 15, 10, 3)])
def test_trace_recurrence_vs_direct_count(p, A, B, smax):
    E = Curve(field_create(p), A, B)
    for s in range(2, smax + 1):
        K = field_create(p, s)
        emb = subfield_embedding(E.field, K)
        fresh = Curve(K, emb.map(E.A), emb.map(E.B))  # no cached count
        assert count_points(fresh)[0] == curve_order_over_extension(E, s)


def test_base_change_caches_and_embeds():
    E = Curve(field_create(41), 15, 10)
    EK = base_change(E, 2)
    assert EK.field.order == 41**2
    assert EK.order == curve_order_over_extension(E, 2)
    P = E.random_point(random.Random(5))
    PK = embed_point(P, EK)
    assert EK.is_on(PK.x, PK.y)
    assert embed_point(scalar_mul(3, P), EK) == scalar_mul(3, PK)


def test_frobenius_characteristic_equation():
    E = Curve(field_create(41), 15, 10)
    t = E.trace
    for s in (2, 3):
        EK = base_change(E, s)
        rng = random.Random(6 + s)
        for _ in range(10):
            R = EK.random_point(rng)
            piR = frobenius_endo(R)
            pi2R = frobenius_endo(piR)
            assert EK.is_on(piR.x, piR.y)
            assert not point_add(
                point_add(pi2R, scalar_mul(-t, piR)), scalar_mul(41, R)
            )
        # Frobenius fixes exactly the base-field points
        P = E.random_point(rng)
        PK = embed_point(P, EK)
        assert frobenius_endo(PK) == PK


def test_supersingular_flag():
    assert is_supersingular(curve_from_j(field_create(53), 0, 0))
    assert not is_supersingular(curve_from_j(field_create(41), 29, 6))


# ---------------------------------------------------------------------------
# j-invariants and twists


def test_j_invariant_trivial_cases():
    F = field_create(41)
    assert j_invariant(Curve(F, 1, 0)) == F.from_int(1728)  # = 6 mod 41
    assert j_invariant(Curve(F, 0, 1)) == F.zero


def test_j_invariant_cm_reduction():
    # oracle first: reduce the integer j = 2^4 3^3 5^3 = 54000 mod 41
    assert 54000 % 41 == 3
    F = field_create(41)
    E = Curve(F, F.from_int(-15), F.from_int(22))
    assert j_invariant(E) == F.from_int(3)


def test_curve_from_j_traces_gf41():
    F = field_create(41)
    E = curve_from_j(F, 29, 6)
    assert j_invariant(E) == F.from_int(29) and E.trace == 6
    Et = curve_from_j(F, 29, -6)
    assert Et.order == 48
    with pytest.raises(NoSuchTwist):
        curve_from_j(F, 29, 5)


def test_curve_from_j_round_trip_sweep_gf41():
    F = field_create(41)
    for jv in range(41):
        for cls in twist_classes(F, jv):
            E = curve_from_j(F, jv, cls.trace)
            assert j_invariant(E) == F.from_int(jv)
            assert E.trace == cls.trace


def test_twist_classes_j0_supersingular():
    # p = 53 = 2 mod 3: j=0 is supersingular; exactly two classes, both t=0
    classes = twist_classes(field_create(53), 0)
    assert len(classes) == 2
    assert [c.trace for c in classes] == [0, 0]
    assert classes[0].twist_index != classes[1].twist_index
    assert classes[0] != classes[1]


def test_twist_classes_j1728():
    # 41 = 1 mod 4: four quartic twist classes with traces summing to 0
    classes = twist_classes(field_create(41), 1728)
    assert len(classes) == 4
    assert sum(c.trace for c in classes) == 0
    assert len({c.twist_index for c in classes}) == 4


def test_curve_class_canonicalization():
    F = field_create(41)
    E = curve_from_j(F, 29, 6)
    rng = random.Random(7)
    for _ in range(10):
        # (u^4 A, u^6 B) is k-isomorphic to E for every u in k*
        u = F.from_int(rng.randrange(1, 41))
        iso = Curve(F, u**4 * E.A, u**6 * E.B)
        assert curve_class(iso) == curve_class(E)
        # (d^2 A, d^3 B) is the twist: same class iff d is a square
        d = F.from_int(rng.randrange(1, 41))
        tw = Curve(F, d * d * E.A, d * d * d * E.B)
        if d.is_square():
            assert curve_class(tw) == curve_class(E)
        else:
            assert curve_class(tw) != curve_class(E)
            assert curve_class(tw).trace == -6
    assert curve_class(E).representative.trace == 6
    assert curve_class(E).twist_index == 0
    assert curve_class(quadratic_twist(E)).twist_index == 1


def test_isomorphism_scale():
    F = field_create(41)
    E = curve_from_j(F, 29, 6)
    u0 = F.from_int(8)
    iso = Curve(F, u0**4 * E.A, u0**6 * E.B)
    u = isomorphism_scale(E, iso)
    assert iso.A == u**4 * E.A and iso.B == u**6 * E.B
    with pytest.raises(ValueError):
        isomorphism_scale(E, quadratic_twist(E))
    # j = 0 and j = 1728 paths
    for jv, other in ((0, 1), (1728, 2)):
        E1 = curve_from_j(field_create(13), jv, twist_classes(field_create(13), jv)[0].trace)
        u1 = field_create(13).from_int(other)
        E2 = Curve(E1.field, u1**4 * E1.A, u1**6 * E1.B)
        w = isomorphism_scale(E1, E2)
        assert E2.A == w**4 * E1.A and E2.B == w**6 * E1.B


def test_discriminant_frobenius_order():
    assert discriminant_frobenius_order(41, 6) == (-8, 4)
    assert discriminant_frobenius_order(53, 0) == (-212, 1)
    assert discriminant_frobenius_order(53, -4) == (-4, 7)
    with pytest.raises(NotImaginaryQuadratic):
        discriminant_frobenius_order(41, 13)  # 169 > 164
    with pytest.raises(NotImaginaryQuadratic):
        discriminant_frobenius_order(49, 14)  # supersingular edge t^2 = 4q


# ---------------------------------------------------------------------------
# structure: sylow bases, discrete logs, division


def test_group_structure_matches_brute():
    rng = random.Random(8)
    for F in (field_create(13), field_create(17), field_create(5, 2)):
        for _ in range(6):
            while True:
                A = F.from_coeffs([rng.randrange(F.p) for _ in range(F.r)])
                B = F.from_coeffs([rng.randrange(F.p) for _ in range(F.r)])
                if 4 * A * A * A + 27 * B * B:
                    break
            E = Curve(F, A, B)
            pts = _all_points(E)
            exponent = 1
            for P in pts:
                o = point_order(P, len(pts))
                exponent = exponent * o // gcd(exponent, o)
            n2 = exponent
            n1 = len(pts) // n2
            assert group_structure(E) == (n1, n2)
            assert n2 % n1 == 0


def test_sylow_basis_spans():
    E = Curve(field_create(41), 15, 10)  # order 36
    for ell in (2, 3):
        S1, S2, a, b = sylow_basis(E, ell)
        assert point_order(S1) == ell**a
        if b:
            assert point_order(S2) == ell**b
        combos = {
            point_add(scalar_mul(i, S1), scalar_mul(j, S2))
            for i in range(ell**a)
            for j in range(ell**b)
        }
        assert len(combos) == ell ** (a + b)
        assert a + b == valuation(E.order, ell)


def test_two_dim_dlog_round_trip():
    E = Curve(field_create(41), 15, 10)
    S1, S2, a, b = sylow_basis(E, 2)
    rng = random.Random(9)
    for _ in range(25):
        i, j = rng.randrange(2**a), rng.randrange(2**b)
        R = point_add(scalar_mul(i, S1), scalar_mul(j, S2))
        got = two_dim_dlog(R, S1, S2, 2**a, 2**b)
        assert got is not None
        gi, gj = got
        assert point_add(scalar_mul(gi, S1), scalar_mul(gj, S2)) == R


def test_divide_point_same_field_and_extension():
    E = Curve(field_create(41), 15, 10)
    rng = random.Random(10)
    for n in (2, 3, 5, 6):
        P = E.random_point(rng)
        Q = divide_point(P, n)
        assert scalar_mul(n, Q) == embed_point(P, Q.curve)
    # a forced extension: halving a 2-torsion generator twice leaves GF(41)
    S1, _, a, _ = sylow_basis(E, 2)
    assert a == 1  # order 36, full rational 2-torsion: Sylow is Z/2 x Z/2
    Q = divide_point(S1, 4)
    assert Q.curve.field.r > 1
    assert scalar_mul(4, Q) == embed_point(S1, Q.curve)


# ---------------------------------------------------------------------------
# torsion bases


def test_torsion_basis_trivial_and_errors():
    E = Curve(field_create(41), 15, 10)
    P, Q, ext = torsion_basis(E, 1)
    assert not P and not Q and ext is E.field
    with pytest.raises(ValueError):
        torsion_basis(E, 41)
    with pytest.raises(BoundExceeded):
        torsion_basis(E, 65)


def test_torsion_basis_2_rational_for_split_cubic():
    F = field_create(41)
    E = curve_from_j(F, 5, 6)
    # oracle: the 2-division cubic must split over GF(41)
    cubic = Poly(F, [E.B, E.A, F.zero, F.one])
    assert len(roots(cubic)) == 3
    P, Q, ext = torsion_basis(E, 2)
    assert ext is F
    assert not scalar_mul(2, P) and not scalar_mul(2, Q)
    assert P != Q and P and Q


def test_torsion_basis_2_needs_extension_for_nonsplit_cubic():
    F = field_create(41)
    E = curve_from_j(F, 25, 6)
    cubic = Poly(F, [E.B, E.A, F.zero, F.one])
    assert len(roots(cubic)) == 1  # only one rational 2-torsion point
    P, Q, ext = torsion_basis(E, 2)
    assert ext.r == 2
    assert not scalar_mul(2, P) and not scalar_mul(2, Q)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8, 12])
def test_torsion_basis_properties(m):
    E = curve_from_j(field_create(41), 5, 6)
    P, Q, ext = torsion_basis(E, m)
    # annihilation and exact order at each prime
    assert not scalar_mul(m, P) and not scalar_mul(m, Q)
    for ell, _ in factorize(m):
        assert scalar_mul(m // ell, P)
    # the m^2 combinations are pairwise distinct
    combos = {
        point_add(scalar_mul(i, P), scalar_mul(j, Q))
        for i in range(m)
        for j in range(m)
    }
    assert len(combos) == m * m
    # necessary condition for full m-torsion: m | q_ext - 1 (Weil pairing)
    assert (ext.order - 1) % m == 0
    # minimality of the extension: no smaller tower step contains E[m]
    for s in range(1, ext.r // E.field.r):
        assert curve_order_over_extension(E, s) % (m * m) != 0 or not _full_torsion(
            base_change(E, s), m
        )


def _full_torsion(EK, m):
    for ell, e in factorize(m):
        _, _, _, b = sylow_basis(EK, ell)
        if b < e:
            return False
    return True
