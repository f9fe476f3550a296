"""Short Weierstrass curves y^2 = x^3 + Ax + B over GF(p^r), p > 3.

Everything here is desk-scale by design: point counting is an exhaustive
x-sweep (capped at q <= 2^20), orders over extension fields come from the
trace recurrence, and torsion bases are found by seeded random sampling whose
output is certified after the fact (so the randomness never affects
correctness, only how long the search takes).

Curves compare by value (field, A, B).  The point-count cache is write-once
per instance; base_change propagates counts to extensions so the big fields
never need a sweep.
"""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd

from .errors import (
    BoundExceeded,
    CurveMismatch,
    NoSuchTwist,
    NotImaginaryQuadratic,
    SingularCurve,
)
from .finite_field import R_MAX, Field, FieldElement, field_create
from .finite_field import sqrt as field_sqrt
from .intmath import factorize, split_discriminant, valuation
from .polyring import subfield_embedding

EXHAUSTIVE_COUNT_MAX = 2**20
M_MAX = 64


class Point:
    """A point on a specific curve; x is None exactly for the identity."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: "Curve", x, y):
        self.curve = curve
        self.x = x
        self.y = y

    def __repr__(self):
        if self.x is None:
            return "Point(inf)"
        return f"Point({self.x!r}, {self.y!r})"

    def __bool__(self):
        return self.x is not None

    def __eq__(self, other):
        return (
            isinstance(other, Point)
            and self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((self.x, self.y))

    def __neg__(self):
        if self.x is None:
            return self
        return Point(self.curve, self.x, -self.y)

    def __add__(self, other):
        return point_add(self, other)

    def __sub__(self, other):
        return point_add(self, -other)

    def __rmul__(self, m: int):
        return scalar_mul(m, self)

    def __mul__(self, m: int):
        return scalar_mul(m, self)


class Curve:
    """y^2 = x^3 + Ax + B.  A and B may be given as ints (lifted mod p)."""

    __slots__ = ("field", "A", "B", "_order", "_trace")

    def __init__(self, field: Field, A, B):
        if field.p <= 3:
            raise ValueError("short Weierstrass form needs characteristic > 3")
        if isinstance(A, int):
            A = field.from_int(A)
        if isinstance(B, int):
            B = field.from_int(B)
        if A.field is not field or B.field is not field:
            raise CurveMismatch("coefficients must lie in the stated field")
        if not (4 * A * A * A + 27 * B * B):
            raise SingularCurve(f"4A^3 + 27B^2 = 0 for A={A!r}, B={B!r}")
        self.field = field
        self.A = A
        self.B = B
        self._order = None
        self._trace = None

    def __repr__(self):
        return f"Curve({self.field!r}, A={self.A!r}, B={self.B!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.field is other.field
            and self.A == other.A
            and self.B == other.B
        )

    def __hash__(self):
        return hash((self.field, self.A, self.B))

    # -- points ------------------------------------------------------------

    def infinity(self) -> Point:
        return Point(self, None, None)

    def rhs(self, x: FieldElement) -> FieldElement:
        return (x * x + self.A) * x + self.B

    def is_on(self, x, y) -> bool:
        return y * y == self.rhs(x)

    def point(self, x, y) -> Point:
        if isinstance(x, int):
            x = self.field.from_int(x)
        if isinstance(y, int):
            y = self.field.from_int(y)
        if not self.is_on(x, y):
            raise ValueError(f"({x!r}, {y!r}) is not on {self!r}")
        return Point(self, x, y)

    def random_point(self, rng: random.Random) -> Point:
        F = self.field
        while True:
            x = F.from_coeffs([rng.randrange(F.p) for _ in range(F.r)])
            fx = self.rhs(x)
            if not fx:
                return Point(self, x, F.zero)
            pair = field_sqrt(fx)
            if pair is not None:
                return Point(self, x, pair[rng.randrange(2)])

    # -- cached invariants ---------------------------------------------------

    def _set_count(self, order: int):
        q = self.field.order
        t = q + 1 - order
        if t * t > 4 * q:
            raise AssertionError(f"Hasse violated: t={t}, q={q}")
        if self._order is not None and self._order != order:
            raise AssertionError("conflicting point counts for the same curve")
        self._order = order
        self._trace = t

    @property
    def order(self) -> int:
        if self._order is None:
            count_points(self)
        return self._order

    @property
    def trace(self) -> int:
        if self._trace is None:
            count_points(self)
        return self._trace

    def j(self) -> FieldElement:
        return j_invariant(self)


class CurveClass:
    """A k-isomorphism class: (j, trace, twist_index) with a chosen
    representative.  twist_index is the position, in the deterministic twist
    scan for this j-invariant, of the first parameter landing in the class."""

    __slots__ = ("j", "trace", "representative", "twist_index")

    def __init__(self, j, trace, representative, twist_index):
        self.j = j
        self.trace = trace
        self.representative = representative
        self.twist_index = twist_index

    def key(self):
        return (self.j.lift(), self.trace, self.twist_index)

    def __eq__(self, other):
        return (
            isinstance(other, CurveClass)
            and self.j == other.j
            and self.trace == other.trace
            and self.twist_index == other.twist_index
        )

    def __hash__(self):
        return hash((self.j, self.trace, self.twist_index))

    def __repr__(self):
        return (
            f"CurveClass(j={self.j!r}, t={self.trace}, twist={self.twist_index})"
        )


# ---------------------------------------------------------------------------
# group law


def point_add(P: Point, Q: Point) -> Point:
    if P.curve != Q.curve:
        raise CurveMismatch("points on different curves")
    if P.x is None:
        return Q
    if Q.x is None:
        return P
    if P.x == Q.x:
        if P.y != Q.y or not P.y:
            return P.curve.infinity()
        # tangent
        slope = (3 * P.x * P.x + P.curve.A) / (2 * P.y)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return Point(P.curve, x3, y3)


def scalar_mul(m: int, P: Point) -> Point:
    if m < 0:
        return scalar_mul(-m, -P)
    acc = P.curve.infinity()
    add = P
    while m:
        if m & 1:
            acc = point_add(acc, add)
        add = point_add(add, add)
        m >>= 1
    return acc


def point_order(P: Point, multiple: int | None = None) -> int:
    """The exact order of P; `multiple` may supply a known annihilator."""
    n = multiple if multiple is not None else P.curve.order
    assert not scalar_mul(n, P)
    for ell, _ in factorize(n):
        while n % ell == 0 and not scalar_mul(n // ell, P):
            n //= ell
    return n


# ---------------------------------------------------------------------------
# counting


def count_points(E: Curve) -> tuple[int, int]:
    """Exhaustive (order, trace) for q <= 2^20; caches on the curve."""
    if E._order is not None:
        return (E._order, E._trace)
    F = E.field
    q = F.order
    if q > EXHAUSTIVE_COUNT_MAX:
        raise BoundExceeded(
            f"point counting sweeps only fields with q <= 2^20 (got q={q})"
        )
    if F.r == 1:
        p = F.p
        is_sq = bytearray(p)
        for v in range(p):
            is_sq[v * v % p] = 1
        a, b = E.A.coeffs[0], E.B.coeffs[0]
        n = 1  # infinity
        for x in range(p):
            fx = (x * x + a) * x + b
            fx %= p
            if fx == 0:
                n += 1
            elif is_sq[fx]:
                n += 2
    else:
        squares = set()
        for el in F.elements():
            squares.add(el * el)
        n = 1
        for x in F.elements():
            fx = E.rhs(x)
            if not fx:
                n += 1
            elif fx in squares:
                n += 2
    E._set_count(n)
    return (n, E._trace)


def trace_over_extension(t: int, q: int, s: int) -> int:
    """Trace of Frobenius^s from the base trace t over GF(q)."""
    t_prev, t_cur = 2, t
    for _ in range(s - 1):
        t_prev, t_cur = t_cur, t * t_cur - q * t_prev
    return t_cur if s >= 1 else 2


def curve_order_over_extension(E: Curve, s: int) -> int:
    q = E.field.order
    return q**s + 1 - trace_over_extension(E.trace, q, s)


@lru_cache(maxsize=None)
def _base_change_cached(E: Curve, s: int) -> Curve:
    K = field_create(E.field.p, E.field.r * s)
    emb = subfield_embedding(E.field, K)
    EK = Curve(K, emb.map(E.A), emb.map(E.B))
    EK._set_count(curve_order_over_extension(E, s))
    return EK


def base_change(E: Curve, s: int) -> Curve:
    """E over GF(q^s), with its order filled in via the trace recurrence."""
    if s == 1:
        return E
    E.order  # ensure the base count exists before extending
    return _base_change_cached(E, s)


def embed_point(P: Point, EK: Curve) -> Point:
    if P.curve.field is EK.field:
        return P
    if P.x is None:
        return EK.infinity()
    emb = subfield_embedding(P.curve.field, EK.field)
    return Point(EK, emb.map(P.x), emb.map(P.y))


def frobenius_endo(P: Point, k: int | None = None) -> Point:
    """(x, y) -> (x^{p^k}, y^{p^k}) on the same curve.

    k defaults to the degree of the curve's coefficient field over GF(p), so
    for a base-changed curve this is the base-field Frobenius endomorphism.
    """
    E = P.curve
    F = E.field
    if k is None:
        k = _coefficient_degree(E)
    if P.x is None:
        return P
    return Point(E, F.frobenius(P.x, k), F.frobenius(P.y, k))


def _coefficient_degree(E: Curve) -> int:
    """Smallest k with A, B in GF(p^k) (so pi_{p^k} is an endomorphism)."""
    F = E.field
    for k in range(1, F.r + 1):
        if F.r % k == 0 and F.frobenius(E.A, k) == E.A and F.frobenius(E.B, k) == E.B:
            return k
    raise AssertionError("coefficients generate the whole field tower")


def is_supersingular(E: Curve) -> bool:
    return E.trace % E.field.p == 0


# ---------------------------------------------------------------------------
# j-invariants, twists, classes


def j_invariant(E: Curve) -> FieldElement:
    A3 = 4 * E.A * E.A * E.A
    disc = A3 + 27 * E.B * E.B
    return 1728 * A3 / disc


def quadratic_twist(E: Curve) -> Curve:
    d = E.field.least_nonresidue()
    return Curve(E.field, E.A * d * d, E.B * d * d * d)


def _sixth_power_test(c: FieldElement, k: int) -> bool:
    """Is c a k-th power in the multiplicative group (k in {4, 6})?"""
    q = c.field.order
    g = gcd(k, q - 1)
    return c ** ((q - 1) // g) == c.field.one


@lru_cache(maxsize=None)
def _twist_scan(field: Field, j: FieldElement) -> tuple[tuple[int, Curve], ...]:
    """All k-isomorphism classes with the given j-invariant, in scan order.

    Returns ((twist_index, representative), ...).  The scan is: for generic j
    the curve (3j(1728-j), 2j(1728-j)^2) then its quadratic twist by the least
    non-residue; for j = 0 the curves y^2 = x^3 + B and for j = 1728 the
    curves y^2 = x^3 + Ax, parameters ascending in lex order.
    """
    F = field
    if not j:
        power, count = 6, gcd(6, F.order - 1)
        make = lambda b: Curve(F, F.zero, b)
        param = lambda E: E.B
    elif j == F.from_int(1728):
        power, count = 4, gcd(4, F.order - 1)
        make = lambda a: Curve(F, a, F.zero)
        param = lambda E: E.A
    else:
        c = j * (F.from_int(1728) - j)
        base = Curve(F, 3 * c, 2 * c * (F.from_int(1728) - j))
        assert j_invariant(base) == j
        d = F.least_nonresidue()
        return ((0, base), (1, Curve(F, base.A * d * d, base.B * d * d * d)))
    classes: list[tuple[int, Curve]] = []
    for pos, el in enumerate(F.elements()):
        if not el:
            continue
        if any(_sixth_power_test(el / param(E), power) for _, E in classes):
            continue
        classes.append((pos - 1, make(el)))  # pos-1: zero was scanned first
        if len(classes) == count:
            break
    return tuple(classes)


def twist_classes(field: Field, j) -> list[CurveClass]:
    """Every k-isomorphism class with this j-invariant (counts its traces)."""
    if isinstance(j, int):
        j = field.from_int(j)
    out = []
    for idx, E in _twist_scan(field, j):
        out.append(CurveClass(j, E.trace, E, idx))
    return out


def curve_from_j(field: Field, j, trace: int) -> Curve:
    """The deterministic representative with this j-invariant and trace."""
    if isinstance(j, int):
        j = field.from_int(j)
    for _, E in _twist_scan(field, j):
        if E.trace == trace:
            return E
    raise NoSuchTwist(f"no curve over {field!r} with j={j!r} and trace {trace}")


def _isomorphic_over_k(E1: Curve, E2: Curve) -> bool:
    """Same field, same j: are they isomorphic over that field (not just
    over its closure)?"""
    j = j_invariant(E1)
    if not j:
        return _sixth_power_test(E2.B / E1.B, 6)
    if j == E1.field.from_int(1728):
        return _sixth_power_test(E2.A / E1.A, 4)
    return (E2.B * E1.A / (E1.B * E2.A)).is_square()


def isomorphism_scale(E1: Curve, E2: Curve) -> FieldElement:
    """The lex-least u with (x, y) -> (u^2 x, u^3 y) mapping E1 onto E2,
    i.e. A2 = u^4 A1 and B2 = u^6 B1.  ValueError if none exists."""
    from .polyring import Poly, roots  # local import; polyring has no curves

    F = E1.field
    if E1.field is not E2.field:
        raise CurveMismatch("isomorphism search needs a common field")
    j = j_invariant(E1)
    if j != j_invariant(E2):
        raise ValueError("different j-invariants: not isomorphic")
    if not j:
        candidates = roots(Poly(F, [-(E2.B / E1.B), F.zero, F.zero, F.zero,
                                    F.zero, F.zero, F.one]))
    elif j == F.from_int(1728):
        candidates = roots(Poly(F, [-(E2.A / E1.A), F.zero, F.zero, F.zero,
                                    F.one]))
    else:
        pair = field_sqrt(E2.B * E1.A / (E1.B * E2.A))
        candidates = [] if pair is None else [(pair[0], 1), (pair[1], 1)]
    for u, _ in candidates:
        if u and E2.A == u**4 * E1.A and E2.B == u**6 * E1.B:
            return u
    raise ValueError("not isomorphic over the base field")


def curve_class(E: Curve) -> CurveClass:
    """Canonical class identity of E: matches E against the twist scan."""
    j = j_invariant(E)
    for idx, C in _twist_scan(E.field, j):
        if _isomorphic_over_k(C, E):
            if E._order is not None and C._order is None:
                C._set_count(E.order)  # isomorphic curves share counts
            return CurveClass(j, C.trace, C, idx)
    raise AssertionError("twist scan must contain every class")


def discriminant_frobenius_order(q: int, t: int) -> tuple[int, int]:
    """t^2 - 4q = f0^2 * D0 with D0 fundamental; returns (D0, f0)."""
    disc = t * t - 4 * q
    if disc >= 0:
        raise NotImaginaryQuadratic(f"t^2 >= 4q for t={t}, q={q}")
    return split_discriminant(disc)


# ---------------------------------------------------------------------------
# Sylow bases, discrete logs, torsion


def _curve_seed(E: Curve, *extra: int) -> int:
    seed = E.field.p * 1000003 + E.field.r
    for v in (*E.A.coeffs, *E.B.coeffs, *extra):
        seed = (seed * 1000003 + v + 7) % (2**61 - 1)
    return seed


def _ell_power_order(P: Point, ell: int, cap: int) -> int:
    """k with ord(P) = ell^k, given that the order is an ell-power."""
    k = 0
    while P:
        P = scalar_mul(ell, P)
        k += 1
        if k > cap:
            raise AssertionError("point order is not the expected ell-power")
    return k


def _bottom_independent(S1: Point, a: int, S2: Point, b: int, ell: int) -> bool:
    """True if the order-ell layers of <S1>, <S2> intersect trivially."""
    U1 = scalar_mul(ell ** (a - 1), S1)
    U2 = scalar_mul(ell ** (b - 1), S2)
    T = S1.curve.infinity()
    for _ in range(ell):
        if T == U2:
            return False
        T = point_add(T, U1)
    return True


def sylow_basis(E: Curve, ell: int) -> tuple[Point, Point, int, int]:
    """Generators (S1, S2) of the ell-Sylow subgroup of E(k), with orders
    ell^a >= ell^b.  Certified: the pair is independent and a + b equals the
    full ell-valuation of |E(k)|, which forces <S1, S2> = Sylow exactly.
    """
    N = E.order
    v = valuation(N, ell)
    inf = E.infinity()
    if v == 0:
        return (inf, inf, 0, 0)
    cof = N // ell**v
    rng = random.Random(_curve_seed(E, ell))
    pool: list[tuple[Point, int]] = []
    for _ in range(600):
        T = scalar_mul(cof, E.random_point(rng))
        k = _ell_power_order(T, ell, v)
        if k == 0:
            continue
        if k == v:
            return (T, inf, v, 0)
        for S, m in pool:
            big, bk, small, sk = (S, m, T, k) if m >= k else (T, k, S, m)
            if bk + sk == v and _bottom_independent(big, bk, small, sk, ell):
                return (big, small, bk, sk)
        pool.append((T, k))
    raise AssertionError("sylow sampling failed to span; group smaller than N?")


def two_dim_dlog(
    R: Point, S1: Point, S2: Point, ord1: int, ord2: int
) -> tuple[int, int] | None:
    """(i, j) with R = i*S1 + j*S2, or None if R is outside the span.

    Brute baby-step table over <S1>; fine for the small planes used here.
    """
    if ord1 * ord2 > 2**16:
        raise BoundExceeded("discrete-log plane too large for table search")
    table = {}
    T = R.curve.infinity()
    for i in range(ord1):
        table.setdefault(T, i)
        T = point_add(T, S1)
    W = R
    for j in range(ord2):
        if W in table:
            return (table[W], (-j) % max(ord2, 1))
        W = point_add(W, S2)
    return None


def _sylow_projectors(N: int, n: int) -> list[tuple[int, int, int]]:
    """For each prime ell | gcd-ish of n and N: (ell, M, c) where M is the
    full Sylow size ell^v(N) and c*P projects P onto that Sylow factor."""
    out = []
    for ell, _ in factorize(n):
        v = valuation(N, ell)
        if v == 0:
            continue
        M = ell**v
        rest = N // M
        c = rest * pow(rest, -1, M)  # c = 0 mod rest, 1 mod M
        out.append((ell, M, c))
    return out


def divide_point(P: Point, n: int) -> Point:
    """Some Q with n*Q = P, possibly over an extension field (smallest
    extension degree that works, scanning upward).  BoundExceeded if none
    exists within the R_MAX tower."""
    if n < 1:
        raise ValueError("divisor must be positive")
    E = P.curve
    if n == 1:
        return P
    r0 = E.field.r
    for s in range(1, R_MAX // r0 + 1):
        EK = base_change(E, s)
        Q = _divide_in_field(embed_point(P, EK), n)
        if Q is not None:
            return Q
    raise BoundExceeded(f"no solution of {n}*Q = P within the extension cap")


def _divide_in_field(P: Point, n: int) -> Point | None:
    E = P.curve
    N = E.order
    parts = _sylow_projectors(N, n)
    sylows = 1
    for _, M, _ in parts:
        sylows *= M
    rest = N // sylows
    # component of P away from the primes of n: n is invertible there
    if rest > 1:
        c_rest = sylows * pow(sylows, -1, rest)  # 1 mod rest, 0 mod each Sylow
        Q = scalar_mul(c_rest * pow(n % rest, -1, rest), P)
    else:
        Q = E.infinity()
    for ell, M, c in parts:
        Pl = scalar_mul(c, P)
        v = valuation(M, ell)
        S1, S2, a, b = sylow_basis(E, ell)
        dl = two_dim_dlog(Pl, S1, S2, ell**a, ell**b)
        if dl is None:
            raise AssertionError("projection must land inside the Sylow group")
        i, j = dl
        w = valuation(n, ell)
        sol = []
        for coord, e in ((i, a), (j, b)):
            if coord % ell**min(w, e):
                return None  # not divisible in this field
            unit = pow(n // ell**w, -1, ell**e) if e else 0
            sol.append(coord // ell**min(w, e) * unit % ell**e if e else 0)
        Q = point_add(Q, point_add(scalar_mul(sol[0], S1), scalar_mul(sol[1], S2)))
    if scalar_mul(n, Q) == P:
        return Q
    return None


_TORSION: dict[tuple, tuple[Point, Point, Field]] = {}


def torsion_basis(E: Curve, m: int) -> tuple[Point, Point, Field]:
    """A basis (P, Q) of E[m] over the smallest extension containing it.

    The basis is certified by exhaustively checking that the m^2 combinations
    i*P + j*Q are pairwise distinct (m <= 64 keeps this trivial).  Bases are
    cached per (curve, m): every caller treats the choice as arbitrary, and
    recomputing them dominated profile runs.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    if m == 1:
        return (E.infinity(), E.infinity(), E.field)
    if m > M_MAX:
        raise BoundExceeded(f"torsion cap is m <= {M_MAX}")
    if m % E.field.p == 0:
        raise ValueError("m must be coprime to the characteristic")
    cached = _TORSION.get((E, m))
    if cached is not None:
        return cached
    E.order
    r0 = E.field.r
    fac = factorize(m)
    for s in range(1, R_MAX // r0 + 1):
        if curve_order_over_extension(E, s) % (m * m):
            continue
        EK = base_change(E, s)
        parts = []
        for ell, e in fac:
            S1, S2, a, b = sylow_basis(EK, ell)
            if b < e:
                parts = None
                break
            parts.append(
                (
                    scalar_mul(ell ** (a - e), S1),
                    scalar_mul(ell ** (b - e), S2),
                )
            )
        if parts is None:
            continue
        P = EK.infinity()
        Q = EK.infinity()
        for Pl, Ql in parts:
            P = point_add(P, Pl)
            Q = point_add(Q, Ql)
        _certify_basis(P, Q, m)
        _TORSION[(E, m)] = (P, Q, EK.field)
        return (P, Q, EK.field)
    raise BoundExceeded(
        f"E[{m}] needs an extension beyond the degree cap {R_MAX}"
    )


def _certify_basis(P: Point, Q: Point, m: int):
    seen = set()
    iP = P.curve.infinity()
    for _ in range(m):
        T = iP
        for _ in range(m):
            seen.add(T)
            T = point_add(T, Q)
        iP = point_add(iP, P)
    if len(seen) != m * m:
        raise AssertionError("proposed basis does not span m^2 points")


def group_structure(E: Curve) -> tuple[int, int]:
    """E(k) = Z/n1 x Z/n2 with n1 | n2; returns (n1, n2)."""
    n1 = n2 = 1
    for ell, _ in factorize(E.order):
        _, _, a, b = sylow_basis(E, ell)
        n1 *= ell**b
        n2 *= ell**a
    return (n1, n2)
