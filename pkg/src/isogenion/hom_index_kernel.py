"""Hom modules as ideals: indices, two-generator bases, kernel ideals.

For an isogeny beta: E2 -> E1 between curves of the same trace, the set
Hom(E1, E2)*beta of all compositions alpha . beta is an ideal of End(E2).
Writing [End(E2):End(E1)] = prod ell_i^{e_i} (signed exponents, positive
when E1 sits deeper in the volcano), the index of that ideal is

    [End(E2) : Hom(E1, E2)*beta] = prod ell_i^{rho(e_i)} * deg(beta)

with rho clipping negatives to zero, and the ideal itself has a
two-generator presentation whose shape this module computes explicitly.
A consequence worth naming: beta is the quotient by a kernel ideal of
End(E2) exactly when every e_i <= 0, i.e. when no ell lets the
endomorphism ring shrink on the way from E2 to E1.  The converse
machinery (the subgroup annihilated by an ideal, the ideal annihilating
a subgroup, and the split prime-square p-part) lives here too.
"""

from __future__ import annotations

import json
from math import gcd, lcm, prod

from .elliptic_curve import (
    M_MAX,
    Curve,
    Point,
    base_change,
    curve_class,
    embed_point,
    is_supersingular,
    point_add,
    point_order,
    scalar_mul,
    two_dim_dlog,
)
from .endo_ring import annihilator_index, compute_endo_conductor, frobenius_matrix
from .errors import (
    BoundExceeded,
    CurveMismatch,
    NotIsogenous,
    OrderMismatch,
    OrdinaryOnly,
    PPartUnsupported,
    SupersingularUnsupported,
    TraceMismatch,
)
from .finite_field import R_MAX
from .intmath import prime_factors, split_discriminant, valuation
from .isogeny import Isogeny, velu
from .quadratic_order import (
    DISC_MAX,
    QuadIdeal,
    ideal_create,
    ideal_multiply,
    primes_above,
    quad_order,
    unit_ideal,
)

#: isogenies are never verified beyond this degree (torsion bases for the
#: annihilator computation must stay within M_MAX)
VERIFY_DEGREE_MAX = 36


def rho(e: int) -> int:
    """Clip a signed conductor exponent: e if e > 0, else 0."""
    if not isinstance(e, int):
        raise TypeError("exponent must be an integer")
    return e if e > 0 else 0


# ---------------------------------------------------------------------------
# endomorphism-ring profiles


def _scalar_exponent(E: Curve, ell: int, cap: int) -> int:
    """Largest a <= cap with Frobenius scalar on E[ell^a]."""
    a = 0
    while a < cap:
        fm = frobenius_matrix(E, ell ** (a + 1))
        (x, y), (z, w) = fm.matrix
        if y % fm.m or z % fm.m or (x - w) % fm.m:
            break
        a += 1
    return a


def _endo_profile(E: Curve) -> tuple[int, int, int]:
    """(D0, f, f0) for End_k(E) when that ring is imaginary quadratic.

    Ordinary curves delegate to the conductor probe.  Supersingular curves
    over the prime field keep a quadratic *rational* endomorphism ring and
    are profiled through Frobenius-scalarity instead; all other
    supersingular inputs are rejected.
    """
    if not is_supersingular(E):
        desc = compute_endo_conductor(E)
        return desc.D0, desc.f, desc.f0
    if E.field.r == 1:
        assert E.trace == 0, "supersingular over a prime field forces trace 0"
        D0, f0 = split_discriminant(-4 * E.field.p)
        f = 1
        for ell in prime_factors(f0):
            depth = valuation(f0, ell)
            f *= ell ** (depth - _scalar_exponent(E, ell, depth))
        return D0, f, f0
    raise OrdinaryOnly(
        "End_k(E) is not an imaginary quadratic order for supersingular "
        "curves beyond the prime field"
    )


def conductor_ratio(E2: Curve, E1: Curve) -> dict[int, int]:
    """Signed exponents e_ell with [End(E2):End(E1)] = prod ell^{e_ell}.

    Positive entries mean End(E1) is smaller (E1 deeper); the map is empty
    exactly when the two rings coincide.
    """
    if (E2.field.p, E2.field.r) != (E1.field.p, E1.field.r):
        raise NotIsogenous("curves live over different fields")
    if E2.trace != E1.trace:
        raise NotIsogenous(
            f"traces {E2.trace} and {E1.trace} differ; no k-isogeny exists"
        )
    _, f2, _ = _endo_profile(E2)
    _, f1, _ = _endo_profile(E1)
    out = {}
    for ell in sorted(set(prime_factors(f1)) | set(prime_factors(f2))):
        e = valuation(f1, ell) - valuation(f2, ell)
        if e:
            out[ell] = e
    return out


def corresponds_to_kernel_ideal(E2: Curve, E1: Curve) -> bool:
    """Can every isogeny E2 -> E1 be the quotient by an End(E2)-ideal?

    True iff no conductor exponent is positive; a property of the pair,
    independent of which isogeny connects it.
    """
    if E2.trace != E1.trace:
        raise TraceMismatch(
            f"traces {E2.trace} and {E1.trace} differ; the curves are not "
            "k-isogenous"
        )
    return all(e <= 0 for e in conductor_ratio(E2, E1).values())


# ---------------------------------------------------------------------------
# the annihilator lattice


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    return a, s0, t0


def _hnf2(vecs: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Lower-triangular basis ((A, 0), (c, d)) of the lattice the vectors span.

    Normalized to A > 0, d > 0, 0 <= c < A; the input must span a finite-index
    sublattice of Z^2.
    """
    c, d = 0, 0
    for x, y in vecs:
        if y == 0:
            continue
        if d == 0:
            c, d = x, y
        elif y % d:
            g, s, t = _xgcd(d, y)
            c, d = s * c + t * x, g
    assert d > 0, "vectors do not span rank two"
    A = 0
    for x, y in vecs:
        assert y % d == 0
        A = gcd(A, x - (y // d) * c)
    assert A > 0, "vectors do not span rank two"
    return A, c % A, d


def _coords(T: Point, P: Point, Q: Point, m: int) -> tuple[int, int]:
    """(x, y) with T = x*P + y*Q, moving all three onto one field first."""
    r_common = lcm(T.curve.field.r, P.curve.field.r)
    if r_common > R_MAX:
        raise BoundExceeded(
            f"no common field for the point and the basis within degree {R_MAX}"
        )
    base = P.curve
    s = r_common // base.field.r
    EK = base_change(base, s) if s > 1 else base
    Pm = P if s == 1 else embed_point(P, EK)
    Qm = Q if s == 1 else embed_point(Q, EK)
    Tm = T if T.curve == EK else embed_point(T, EK)
    dl = two_dim_dlog(Tm, Pm, Qm, m, m)
    if dl is None:
        raise AssertionError("point must lie in the torsion plane of the basis")
    return dl


def _gamma_action(E: Curve, prof: tuple[int, int, int], m: int):
    """Matrix of f*gamma on a basis of E[m], plus that basis.

    f*gamma lifts to the integral pi - u0 on E[m*w] (w the denominator
    f0/f), so the matrix comes from one Frobenius matrix there, divided by
    w and read mod m.  The result is checked against the minimal polynomial
    of f*gamma before being returned.
    """
    D0, f, f0 = prof
    u0 = (E.trace - f0 * (D0 % 2)) // 2
    w = f0 // f
    if m * w > M_MAX:
        raise BoundExceeded(
            f"f*gamma on E[{m}] needs the {m * w}-torsion; cap is {M_MAX}"
        )
    fm = frobenius_matrix(E, m * w)
    (a, b), (c, d) = fm.matrix
    mw = m * w
    ent = ((a - u0) % mw, b % mw, c % mw, (d - u0) % mw)
    assert all(z % w == 0 for z in ent), "pi - u0 must kill E[w]"
    W = tuple(z // w % m for z in ent)
    ring = quad_order(D0, f)
    tr, nm = ring.Tw, ring.Nw
    assert (W[0] * W[0] + W[1] * W[2] - tr * W[0] + nm) % m == 0
    assert (W[3] * W[3] + W[1] * W[2] - tr * W[3] + nm) % m == 0
    assert (W[1] * (W[0] + W[3] - tr)) % m == 0
    assert (W[2] * (W[0] + W[3] - tr)) % m == 0
    P, Q = fm.basis
    if w > 1:
        P, Q = scalar_mul(w, P), scalar_mul(w, Q)
    return W, P, Q


def _annihilator_lattice(
    E: Curve, prof: tuple[int, int, int], pts: list[Point], n: int
) -> tuple[int, int, int]:
    """Hermite form ((A, 0), (c, d)) of {x + y*f*gamma : kills every point}.

    n must be a multiple of the exponent of the subgroup the points
    generate; the lattice contains n*Z^2, so residues mod n determine it.
    """
    W, P, Q = _gamma_action(E, prof, n)
    images = []
    for T in pts:
        k0, k1 = _coords(T, P, Q, n)
        g0 = (W[0] * k0 + W[1] * k1) % n
        g1 = (W[2] * k0 + W[3] * k1) % n
        images.append((k0, k1, g0, g1))
    members = [
        (x, y)
        for x in range(n)
        for y in range(n)
        if all(
            (x * k0 + y * g0) % n == 0 and (x * k1 + y * g1) % n == 0
            for k0, k1, g0, g1 in images
        )
    ]
    A, c, d = _hnf2(members + [(n, 0), (0, n)])
    assert A * d * len(members) == n * n, "annihilators must form a subgroup"
    return A, c, d


# ---------------------------------------------------------------------------
# the index and its two-generator presentation


class HomIdealDescription:
    """How Hom(E1, E2)*beta sits inside End(E2).

    `conductor_ratio` carries the signed exponents e_ell of
    [End(E2):End(E1)], `backtrack_factor` the largest m with E2[m] inside
    ker(beta), and `index` the module index, always
    prod ell^{rho(e_ell)} * beta_degree.  When beta is separable, `basis`
    is the pair (first, (mult, b, correction)) presenting the ideal as

        Z*first + Z*mult*(b*correction + f*gamma),

    first = backtrack * primitive degree, mult = backtrack * prod
    ell^{rho(e_ell)}, correction = prod ell^{rho(e_ell) - e_ell}, with b
    the computed witness, reduced modulo first // (mult * correction).
    Inseparable inputs leave basis as None.
    """

    __slots__ = (
        "source_class",
        "target_class",
        "beta_degree",
        "backtrack_factor",
        "conductor_ratio",
        "index",
        "basis",
    )

    def __init__(self, src, dst, degree, backtrack, ratio, index, basis):
        self.source_class = src
        self.target_class = dst
        self.beta_degree = degree
        self.backtrack_factor = backtrack
        self.conductor_ratio = dict(ratio)
        self.index = index
        self.basis = basis

    def __repr__(self):
        return (
            f"HomIdealDescription(deg={self.beta_degree}, "
            f"ratio={self.conductor_ratio}, index={self.index}, "
            f"basis={self.basis})"
        )


def _kernel_data(beta: Isogeny) -> tuple[list[Point], int, int]:
    """(points, exponent, backtrack) for the separable kernel of beta."""
    gen = beta.kernel_gen
    if gen is None:
        return [], 1, 1
    if isinstance(gen, Point):
        return [gen], beta.separable_degree, 1
    pts = list(gen)
    n = max(point_order(T) for T in pts)
    back, rem = divmod(beta.separable_degree, n)
    assert rem == 0 and n % back == 0, "kernel is not of shape Z/m x Z/n"
    return pts, n, back


def hom_index(E2: Curve, E1: Curve, beta: Isogeny) -> HomIdealDescription:
    """The index [End(E2) : Hom(E1, E2)*beta] with the ideal's presentation.

    beta must start at exactly E2 and land on the k-isomorphism class of
    E1 (post-composing with an isomorphism changes neither the kernel nor
    the module).  Curves with trace +-2*sqrt(q) carry the full quaternion
    endomorphism ring and get index (deg beta)^2 with no quadratic
    presentation; every other supported curve goes through the conductor
    formula, and for separable beta the witness b is solved from the
    annihilator lattice of the kernel and checked against the formula.
    """
    if not isinstance(beta, Isogeny):
        raise TypeError("expected an isogeny")
    if E2.trace != E1.trace:
        raise TraceMismatch(
            f"traces {E2.trace} and {E1.trace} differ; the curves are not "
            "k-isogenous"
        )
    if beta.source_curve != E2:
        raise CurveMismatch("beta does not start at the first curve")
    if curve_class(beta.target_curve) != curve_class(E1):
        raise CurveMismatch("beta does not land on the class of the second curve")
    cls2, cls1 = curve_class(E2), curve_class(E1)
    pts, n, back = _kernel_data(beta)

    if E2.trace * E2.trace == 4 * E2.field.order:
        # quaternionic End: the index doubles up in the exponent
        return HomIdealDescription(
            cls2, cls1, beta.degree, back, {}, beta.degree**2, None
        )

    prof2 = _endo_profile(E2)
    ratio = conductor_ratio(E2, E1)
    outer = prod(ell ** rho(e) for ell, e in ratio.items())
    corr = prod(ell ** (rho(e) - e) for ell, e in ratio.items())
    assert prof2[1] % corr == 0, "correction factor must divide the conductor"
    index = outer * beta.degree
    deg_prime = beta.degree // (back * back)
    assert deg_prime % (outer * corr) == 0, (
        "every isogeny degree is divisible by prod ell^|e_ell|"
    )

    basis = None
    if beta.insep_exp == 0:
        mult = back * outer
        if n == 1:
            # beta is multiplication by `back` up to isomorphism
            assert deg_prime == 1 and outer == 1 and corr == 1
            basis = (back, (mult, 0, corr))
        else:
            A, c, d = _annihilator_lattice(E2, prof2, pts, n)
            assert A * d == index, (
                "annihilator lattice disagrees with the index formula"
            )
            assert A == back * deg_prime and d == mult, (
                "annihilator lattice does not fit the two-generator shape"
            )
            b, rem = divmod(c, mult * corr)
            assert rem == 0, (
                "annihilator lattice does not fit the two-generator shape"
            )
            basis = (back * deg_prime, (mult, b, corr))
    return HomIdealDescription(cls2, cls1, beta.degree, back, ratio, index, basis)


class HomBasis:
    """Basis of Hom(E1, E2) over the dual of a connecting isogeny.

    With beta' the primitive part of the input (backtracking stripped) and
    d' = deg beta', the module is

        Hom(E1, E2) = Z*dual(beta') + Z*outer*(b*correction + f*gamma)*dual(beta')/d'

    inside Hom(E1, E2) tensor Q; f*gamma generates End(E2).
    """

    __slots__ = (
        "source_class",
        "target_class",
        "degree",
        "outer",
        "b",
        "correction",
        "backtrack_stripped",
        "conductor_ratio",
    )

    def __init__(self, src, dst, degree, outer, b, correction, back, ratio):
        self.source_class = src
        self.target_class = dst
        self.degree = degree
        self.outer = outer
        self.b = b
        self.correction = correction
        self.backtrack_stripped = back
        self.conductor_ratio = dict(ratio)

    def __repr__(self):
        return (
            f"HomBasis(degree={self.degree}, second={self.outer}*"
            f"({self.b}*{self.correction} + fg)/{self.degree})"
        )


def hom_lattice_basis(E2: Curve, E1: Curve, beta: Isogeny) -> HomBasis:
    """Two-generator description of all of Hom(E1, E2), via beta's dual.

    The multiplication factor of beta is stripped first; the b witness is
    the one hom_index computes for the primitive part.
    """
    desc = hom_index(E2, E1, beta)
    if desc.basis is None:
        raise ValueError(
            "no quadratic presentation for this input (inseparable beta or "
            "quaternionic endomorphisms)"
        )
    first, (mult, b, corr) = desc.basis
    back = desc.backtrack_factor
    return HomBasis(
        curve_class(E1),
        curve_class(E2),
        first // back,
        mult // back,
        b,
        corr,
        back,
        desc.conductor_ratio,
    )


# ---------------------------------------------------------------------------
# ideals to subgroups and back


def kernel_of_ideal(E: Curve, I: QuadIdeal) -> list[Point]:
    """All points of H(I), the subgroup annihilated by every element of I.

    I must be an ideal of End(E) with norm coprime to p (the etale case)
    and at most M_MAX^2.  H(I) sits inside E[a*t] and is cut out there by
    the single generator t*(b + f*gamma); the identity is included, so an
    invertible I returns exactly norm(I) points.
    """
    if not isinstance(I, QuadIdeal):
        raise TypeError("expected a QuadIdeal")
    prof = _endo_profile(E)
    if quad_order(prof[0], prof[1]) != I.order:
        raise OrderMismatch(
            f"ideal belongs to {I.order!r}, not to End(E) = "
            f"QuadOrder(D0={prof[0]}, f={prof[1]})"
        )
    if I.norm % E.field.p == 0:
        raise PPartUnsupported(
            "the p-part of an ideal kernel is not an etale subgroup"
        )
    if I.norm > M_MAX * M_MAX:
        raise BoundExceeded(f"ideal norm cap is {M_MAX * M_MAX}")
    n = I.a * I.t
    if n > M_MAX:
        raise BoundExceeded(f"H(I) lives in E[{n}]; torsion cap is {M_MAX}")
    W, P, Q = _gamma_action(E, prof, n)
    m00 = (I.t * (I.b + W[0])) % n
    m01 = (I.t * W[1]) % n
    m10 = (I.t * W[2]) % n
    m11 = (I.t * (I.b + W[3])) % n
    out = []
    for s in range(n):
        for u in range(n):
            if (m00 * s + m01 * u) % n == 0 and (m10 * s + m11 * u) % n == 0:
                out.append(point_add(scalar_mul(s, P), scalar_mul(u, Q)))
    return out


def annihilator_ideal(E: Curve, points) -> QuadIdeal:
    """The full ideal of End(E) elements killing every listed point.

    The inverse direction of kernel_of_ideal.  Annihilators are ideals for
    any point set (the order is commutative), so this computes I(H) for H
    the End(E)-saturation of the subgroup the points generate; when the
    points span a Frobenius-stable subgroup, that saturation is the
    subgroup itself.  Point orders must be coprime to p.
    """
    pts = [T for T in points if T]
    prof = _endo_profile(E)
    order = quad_order(prof[0], prof[1])
    if not pts:
        return unit_ideal(order)
    n = 1
    for T in pts:
        n = lcm(n, point_order(T))
    if n % E.field.p == 0:
        raise PPartUnsupported("point orders must be coprime to p")
    if n > M_MAX:
        raise BoundExceeded(f"subgroup exponent cap is {M_MAX}")
    A, c, d = _annihilator_lattice(E, prof, pts, n)
    assert A % d == 0 and c % d == 0, "annihilators always form an ideal"
    return ideal_create(order, d, A // d, (c // d) % (A // d))


def p_part_ideal(E: Curve, e1: int, e: int) -> QuadIdeal:
    """The kernel ideal P1^e1 * P2^(e-e1) of the p-power part of an isogeny.

    P1 and P2 are the two primes of End(E) above p (ordinary curves split),
    ordered so that the Frobenius pi lies in P1: a degree-p^e isogeny whose
    inseparable exponent is e1 corresponds to this product.  P1*P2 = (p).
    """
    if not isinstance(e1, int) or not isinstance(e, int):
        raise TypeError("exponents must be integers")
    if not 0 <= e1 <= e:
        raise ValueError("exponents must satisfy 0 <= e1 <= e")
    if is_supersingular(E):
        raise SupersingularUnsupported(
            "pi is not split in the supersingular endomorphism algebra"
        )
    D0, f, f0 = _endo_profile(E)
    order = quad_order(D0, f)
    p = E.field.p
    if p**e > DISC_MAX:
        raise BoundExceeded(f"ideal norm cap is {DISC_MAX}")
    above = primes_above(order, p)
    assert len(above) == 2, "p must split in the CM order of an ordinary curve"
    u0 = (E.trace - f0 * (D0 % 2)) // 2
    ypi = f0 // f
    hits = [Pr for Pr in above if (u0 - ypi * Pr.b) % p == 0]
    assert len(hits) == 1, "pi lies in exactly one prime above p"
    P1 = hits[0]
    P2 = above[0] if P1 is above[1] else above[1]
    out = unit_ideal(order)
    for _ in range(e1):
        out = ideal_multiply(out, P1)
    for _ in range(e - e1):
        out = ideal_multiply(out, P2)
    return out


# ---------------------------------------------------------------------------
# enumeration and reporting


def stable_cyclic_kernels(E: Curve, n: int) -> list[Point]:
    """One generator per Frobenius-stable cyclic order-n subgroup of E.

    These are exactly the kernels of the non-backtracking degree-n
    isogenies leaving E.  n may be composite; n = 1 is rejected.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("subgroup order must be an integer >= 2")
    if n % E.field.p == 0:
        raise ValueError("subgroup order must be coprime to p")
    if n > M_MAX:
        raise BoundExceeded(f"torsion cap is {M_MAX}")
    fm = frobenius_matrix(E, n)
    P, Q = fm.basis
    (a, b), (c, d) = fm.matrix
    gens = []
    seen = set()
    for s in range(n):
        for u in range(n):
            if gcd(gcd(s, u), n) != 1:
                continue
            sub = frozenset(((k * s) % n, (k * u) % n) for k in range(n))
            if sub in seen:
                continue
            seen.add(sub)
            if ((a * s + b * u) % n, (c * s + d * u) % n) in sub:
                gens.append((s, u))
    return [point_add(scalar_mul(s, P), scalar_mul(u, Q)) for s, u in gens]


def _j_json(j):
    try:
        return j.lift_int()
    except ValueError:
        return list(j.lift())


def pair_report(E2: Curve, E1: Curve, degrees=(2, 3, 4, 6, 8, 9, 12)) -> str:
    """JSON summary of the Hom module between two curves.

    For each sample degree the first stable cyclic kernel on E2 whose
    quotient lands on the class of E1 is taken; degrees with no such
    isogeny (or beyond the torsion caps) are dropped from the report.
    """
    ratio = conductor_ratio(E2, E1)
    cls1 = curve_class(E1)
    sample, formula, oracle = [], [], []
    for nd in sorted(degrees):
        try:
            kernels = stable_cyclic_kernels(E2, nd)
        except BoundExceeded:
            continue
        for K in kernels:
            phi = velu(E2, K, nd)
            if curve_class(phi.target_curve) != cls1:
                continue
            try:
                desc = hom_index(E2, E1, phi)
                check = annihilator_index(E2, K, nd)
            except BoundExceeded:
                continue
            sample.append(nd)
            formula.append(desc.index)
            oracle.append(check)
            break
    doc = {
        "source_j": _j_json(curve_class(E2).j),
        "target_j": _j_json(cls1.j),
        "conductor_ratio": {str(ell): e for ell, e in ratio.items()},
        "sample_degrees": sample,
        "formula_index": formula,
        "oracle_index": oracle,
        "corresponds": corresponds_to_kernel_ideal(E2, E1),
    }
    return json.dumps(doc, sort_keys=True)
