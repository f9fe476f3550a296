"""Endomorphism rings of elliptic curves over small finite fields.

For an ordinary curve E over GF(q) with Frobenius trace t, the ring End(E)
is an imaginary quadratic order squeezed between Z[pi] (discriminant
t^2 - 4q = f0^2 * D0) and the maximal order of Q(sqrt(D0)).  Its conductor
f divides f0, and the exponent of each prime ell in f is the depth of E
below the surface of its ell-isogeny structure.  This module pins that
conductor down by walking non-backtracking chains of ell-isogenies until
they hit a degree-one vertex, represents the Frobenius as an explicit 2x2
matrix on torsion bases, evaluates arbitrary order elements (u + v*pi)/w on
points by lifting through division, and measures the index of the
annihilator of a finite subgroup inside End(E).
"""

from __future__ import annotations

from math import lcm

from .errors import (
    BoundExceeded,
    CurveMismatch,
    NotInEndomorphismRing,
    OrdinaryOnly,
    WrongOrder,
)
from .finite_field import R_MAX
from .intmath import factorize
from .polyring import subfield_embedding
from .elliptic_curve import (
    M_MAX,
    Curve,
    CurveClass,
    Point,
    base_change,
    curve_class,
    discriminant_frobenius_order,
    embed_point,
    frobenius_endo,
    is_supersingular,
    j_invariant,
    point_add,
    point_order,
    scalar_mul,
    divide_point,
    torsion_basis,
    two_dim_dlog,
)
from .isogeny import dual, stable_cyclic_subgroups, velu
from .quadratic_order import QuadOrder, quad_order


# ---------------------------------------------------------------------------
# descriptors


class EndoDescriptor:
    """Where End(E) sits between Z[pi] and the maximal order.

    `f` is the conductor of End(E), `f0` that of Z[pi], and `levels` maps
    each prime dividing f0 to the exponent it carries in f.
    """

    __slots__ = ("curve_class", "D0", "f", "f0", "levels")

    def __init__(self, cls: CurveClass, D0: int, f: int, f0: int, levels: dict):
        self.curve_class = cls
        self.D0 = D0
        self.f = f
        self.f0 = f0
        self.levels = dict(levels)

    @property
    def discriminant(self) -> int:
        return self.f * self.f * self.D0

    def order(self) -> QuadOrder:
        """End(E) as an abstract quadratic order."""
        return quad_order(self.D0, self.f)

    def __repr__(self):
        return (
            f"EndoDescriptor({self.curve_class!r}, D0={self.D0}, "
            f"f={self.f}, f0={self.f0}, levels={self.levels})"
        )


class FrobeniusMatrix:
    """The q-power Frobenius on a basis (P, Q) of E[m].

    Column-vector convention: a point x*P + y*Q maps to x'*P + y'*Q with
    (x', y') = matrix @ (x, y) mod m.  m = 1 carries the empty action.
    """

    __slots__ = ("m", "basis", "matrix")

    def __init__(self, m: int, basis: tuple, matrix: tuple):
        self.m = m
        self.basis = basis
        self.matrix = matrix

    def apply(self, x: int, y: int) -> tuple[int, int]:
        (a, b), (c, d) = self.matrix
        if self.m == 1:
            return (0, 0)
        return ((a * x + b * y) % self.m, (c * x + d * y) % self.m)

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return (a * d - b * c) % self.m if self.m > 1 else 0

    @property
    def tr(self) -> int:
        (a, b), (c, d) = self.matrix
        return (a + d) % self.m if self.m > 1 else 0

    def __repr__(self):
        return f"FrobeniusMatrix(m={self.m}, matrix={self.matrix})"


# ---------------------------------------------------------------------------
# conductor probing

_DESCRIPTORS: dict[Curve, EndoDescriptor] = {}
_FROBENIUS: dict[tuple[Curve, int], FrobeniusMatrix] = {}


def _branches(E: Curve, kernels, ell: int) -> list:
    """Velu quotients for every stable order-ell subgroup of E, sorted by
    target j-invariant (then kernel polynomial) so that walks which have a
    choice of descending branch always make the same one."""
    out = []
    for gen in kernels:
        phi = velu(E, gen, ell)
        key = (
            j_invariant(phi.target_curve).lift(),
            tuple(c.lift() for c in phi.kernel_polynomial().coeffs),
        )
        out.append((key, phi))
    out.sort(key=lambda kv: kv[0])
    return [phi for _, phi in out]


def _walk_to_floor(phi, ell: int, cap: int):
    """Steps until the walk starting with `phi` reaches a degree-one vertex,
    continuing non-backtracking (never through the dual of the last step),
    or None if the floor is farther than `cap` steps away."""
    for steps in range(1, cap + 1):
        cur = phi.target_curve
        kernels = stable_cyclic_subgroups(cur, ell)
        if len(kernels) == 1:
            return steps
        if steps == cap:
            break
        back = dual(phi).kernel_polynomial()
        for cand in _branches(cur, kernels, ell):
            if cand.kernel_polynomial() != back:
                phi = cand
                break
        else:
            raise AssertionError("no non-backtracking continuation found")
    return None


def _ell_level(E: Curve, ell: int, depth: int) -> int:
    """v_ell of the conductor of End(E), given v_ell(f0) = depth >= 1.

    A vertex strictly above the floor has ell + 1 rational ell-isogenies
    (the Frobenius is scalar on E[ell] there), a floor vertex exactly one.
    A walk that starts downward descends forever, so the shortest distance
    to the floor over all starting branches is depth minus the level.
    """
    kernels = stable_cyclic_subgroups(E, ell)
    if len(kernels) == 1:
        return depth
    best = None
    for phi in _branches(E, kernels, ell):
        steps = _walk_to_floor(phi, ell, depth)
        if steps is not None and (best is None or steps < best):
            best = steps
        if best == 1:
            break
    if best is None:
        raise AssertionError("no branch reached the floor within the depth")
    return depth - best


def compute_endo_conductor(E: Curve) -> EndoDescriptor:
    """Determine End(E) for an ordinary curve.

    Probes one prime of f0 at a time by kernel enumeration; raises
    OrdinaryOnly for supersingular input and BoundExceeded when a prime of
    f0 is beyond the kernel-order cap.
    """
    cached = _DESCRIPTORS.get(E)
    if cached is not None:
        return cached
    if is_supersingular(E):
        raise OrdinaryOnly("supersingular curves have a quaternionic End(E)")
    q = E.field.order
    D0, f0 = discriminant_frobenius_order(q, E.trace)
    levels = {}
    f = 1
    for ell, depth in factorize(f0):
        lvl = _ell_level(E, ell, depth)
        levels[ell] = lvl
        f *= ell**lvl
    desc = EndoDescriptor(curve_class(E), D0, f, f0, levels)
    _DESCRIPTORS[E] = desc
    return desc


# ---------------------------------------------------------------------------
# Frobenius matrices


def frobenius_matrix(E: Curve, m: int) -> FrobeniusMatrix:
    """Matrix of the base-field Frobenius on a basis of E[m].

    Entries are found by two-dimensional discrete logarithm; the result is
    checked against x^2 - t*x + q before being returned.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("modulus must be a positive integer")
    if m > M_MAX:
        raise BoundExceeded(f"torsion cap is m <= {M_MAX}")
    cached = _FROBENIUS.get((E, m))
    if cached is not None:
        return cached
    if m == 1:
        out = FrobeniusMatrix(1, (E.infinity(), E.infinity()), ((0, 0), (0, 0)))
        _FROBENIUS[(E, m)] = out
        return out
    P, Q, _ = torsion_basis(E, m)
    r0 = E.field.r
    cols = []
    for T in (P, Q):
        dl = two_dim_dlog(frobenius_endo(T, r0), P, Q, m, m)
        if dl is None:
            raise AssertionError("Frobenius image escaped the torsion basis")
        cols.append(dl)
    (a, c), (b, d) = cols
    t, q = E.trace, E.field.order
    if ((a + d) - t) % m or ((a * d - b * c) - q) % m:
        raise AssertionError("matrix violates the characteristic polynomial")
    out = FrobeniusMatrix(m, (P, Q), ((a, b), (c, d)))
    _FROBENIUS[(E, m)] = out
    return out


# ---------------------------------------------------------------------------
# order elements acting on points


def order_generator_element(E: Curve) -> tuple[int, int, int]:
    """(u, v, w) with f*gamma = (u + v*pi)/w, the non-trivial generator of
    End(E) = Z + Z*f*gamma.

    Derived from (t, q, D0, f0, f) and verified: the element must have the
    trace and norm of f*gamma in the abstract order.
    """
    desc = compute_endo_conductor(E)
    t, q = E.trace, E.field.order
    delta = desc.D0 % 2
    u0, rem = divmod(t - desc.f0 * delta, 2)
    assert rem == 0, "trace and conductor disagree in parity"
    w = desc.f0 // desc.f
    u, v = -u0, 1
    ring = desc.order()
    assert (2 * u + v * t) == w * ring.element_trace(0, 1)
    assert (u * u + u * v * t + v * v * q) == w * w * ring.element_norm(0, 1)
    return (u, v, w)


def _check_on_curve(E: Curve, P: Point) -> None:
    C = P.curve
    if C.field.p != E.field.p or C.field.r % E.field.r:
        raise CurveMismatch("point lives over an incompatible field")
    if C != base_change(E, C.field.r // E.field.r):
        raise CurveMismatch("point is not on a base change of the curve")


def _descend_point(R: Point, C: Curve) -> Point:
    """Rewrite R, known to be rational over C's field, as a point of C."""
    if R.curve == C:
        return R
    if not R:
        return C.infinity()
    emb = subfield_embedding(C.field, R.curve.field)
    try:
        return C.point(emb.unmap(R.x), emb.unmap(R.y))
    except ValueError:
        raise AssertionError("image must be rational over the point's field")


def evaluate_order_element(E: Curve, elem: tuple, P: Point) -> Point:
    """Apply (u + v*pi)/w in End(E) to P, with elem = (u, v, w).

    P is divided by w first (possibly in an extension), u + v*pi is applied
    to the lift, and the result is descended back to P's field.  Raises
    NotInEndomorphismRing when the element is not integral for E.
    """
    u, v, w = elem
    if not all(isinstance(z, int) for z in (u, v, w)):
        raise TypeError("element coordinates must be integers")
    if w < 1:
        raise ValueError("denominator must be a positive integer")
    _check_on_curve(E, P)
    desc = compute_endo_conductor(E)
    t = E.trace
    u0 = (t - desc.f0 * (desc.D0 % 2)) // 2
    if (v * desc.f0) % (w * desc.f) or (u + v * u0) % w:
        raise NotInEndomorphismRing(
            f"({u} + {v}*pi)/{w} does not lie in the conductor-{desc.f} order"
        )
    p = E.field.p
    if w % p == 0:
        raise ValueError("denominator must be coprime to the characteristic")
    if not P:
        return P
    m = point_order(P)
    if m % p == 0:
        raise ValueError("point order must be coprime to the characteristic")
    lift = P if w == 1 else divide_point(P, w)
    r0 = E.field.r
    R = point_add(scalar_mul(u, lift), scalar_mul(v, frobenius_endo(lift, r0)))
    # lift-independence: w*R must equal (u + v*pi) applied to P itself
    up = P if lift.curve == P.curve else embed_point(P, lift.curve)
    direct = point_add(scalar_mul(u, up), scalar_mul(v, frobenius_endo(up, r0)))
    if scalar_mul(w, R) != direct:
        raise AssertionError("image depends on the choice of lift")
    return _descend_point(R, P.curve)


# ---------------------------------------------------------------------------
# annihilator indices


def _coords_in_basis(T: Point, P: Point, Q: Point, m: int) -> tuple[int, int]:
    """(x, y) with T = x*P + y*Q, embedding all three into a common field."""
    r_common = lcm(T.curve.field.r, P.curve.field.r)
    if r_common > R_MAX:
        raise BoundExceeded(
            f"no common field for the kernel and the basis within degree {R_MAX}"
        )
    base = P.curve
    s = r_common // base.field.r
    EK = base_change(base, s) if s > 1 else base
    Pm = P if s == 1 else embed_point(P, EK)
    Qm = Q if s == 1 else embed_point(Q, EK)
    Tm = T if T.curve == EK else embed_point(T, EK)
    dl = two_dim_dlog(Tm, Pm, Qm, m, m)
    if dl is None:
        raise AssertionError("kernel generator must lie in the torsion plane")
    return dl


def _gamma_matrix(E: Curve, m: int):
    """Matrix of f*gamma on E[m], plus the basis of E[m] it refers to.

    Computed on E[m*w] (w the denominator of f*gamma) where f*gamma lifts to
    the integral pi - u0, then carried down along the multiplication-by-w map.
    """
    u, v, w = order_generator_element(E)
    fm = frobenius_matrix(E, m * w)
    (a, b), (c, d) = fm.matrix
    mw = m * w
    ent = (
        (u + v * a) % mw,
        (v * b) % mw,
        (v * c) % mw,
        (u + v * d) % mw,
    )
    assert all(z % w == 0 for z in ent), "f*gamma must be integral on E[m]"
    W = tuple(z // w % m for z in ent)
    P, Q = fm.basis
    Pm = scalar_mul(w, P) if w > 1 else P
    Qm = scalar_mul(w, Q) if w > 1 else Q
    return (W[0], W[1], W[2], W[3]), Pm, Qm


def annihilator_index(E: Curve, kernel_gen, m: int) -> int:
    """[End(E) : I(<kernel_gen>)] for a point of exact order m.

    Brute force: End(E)/m*End(E) has m^2 residues x + y*f*gamma (ordinary)
    or m^4 matrix residues (supersingular, where End tensor Z/m is the full
    2x2 matrix ring); the index is the residue count divided by the number
    of residues annihilating the generator.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("order must be a positive integer")
    if m > M_MAX:
        raise BoundExceeded(f"kernel order cap is {M_MAX}")
    if m == 1:
        if isinstance(kernel_gen, Point) and kernel_gen:
            raise WrongOrder("order 1 demands a trivial generator")
        return 1
    if m % E.field.p == 0:
        raise ValueError("order must be coprime to the characteristic")
    if not isinstance(kernel_gen, Point) or not kernel_gen:
        raise WrongOrder("kernel generator must be a finite point")
    _check_on_curve(E, kernel_gen)
    if point_order(kernel_gen) != m:
        raise WrongOrder(f"generator does not have exact order {m}")

    if is_supersingular(E):
        P, Q, _ = torsion_basis(E, m)
        k0, k1 = _coords_in_basis(kernel_gen, P, Q, m)
        rows = sum(
            1
            for r0 in range(m)
            for r1 in range(m)
            if (r0 * k0 + r1 * k1) % m == 0
        )
        count = rows * rows
        assert (m**4) % count == 0
        return m**4 // count

    W, Pm, Qm = _gamma_matrix(E, m)
    k0, k1 = _coords_in_basis(kernel_gen, Pm, Qm, m)
    g0 = (W[0] * k0 + W[1] * k1) % m
    g1 = (W[2] * k0 + W[3] * k1) % m
    count = sum(
        1
        for x in range(m)
        for y in range(m)
        if (x * k0 + y * g0) % m == 0 and (x * k1 + y * g1) % m == 0
    )
    assert (m * m) % count == 0
    return m * m // count
