"""Isogenies between elliptic curves over small finite fields.

The workhorse is Velu's construction: given a Frobenius-stable cyclic
subgroup presented by a generator (possibly over an extension), it produces
the quotient curve together with explicit rational maps defined over the
base field.  On top of that sit composition, dual isogenies, pure Frobenius
powers, enumeration of all stable cyclic kernels of a given order, and the
classical modular polynomials for levels 2, 3, 5 and 7.

An :class:`Isogeny` is stored as a chain of elementary steps (one Velu
quotient per prime power, scaling isomorphisms, Frobenius powers), each a
map between concrete Weierstrass models over the base field.  Evaluation at
a point over any extension walks the chain; degrees and inseparability
exponents are tracked explicitly.
"""

from __future__ import annotations

import itertools
import os
import random
from functools import lru_cache
from importlib import resources

from .errors import (
    BoundExceeded,
    ClassMismatch,
    CurveMismatch,
    FieldMismatch,
    NotRational,
    UnsupportedLevel,
    WrongOrder,
)
from .finite_field import Field, FieldElement, R_MAX
from .polyring import Poly, poly_gcd, roots, subfield_embedding, embed_element
from .elliptic_curve import (
    M_MAX,
    Curve,
    CurveClass,
    Point,
    base_change,
    curve_class,
    frobenius_endo,
    is_supersingular,
    isomorphism_scale,
    j_invariant,
    point_add,
    point_order,
    scalar_mul,
    sylow_basis,
    torsion_basis,
)
from .intmath import factorize, multiplicative_order, prime_factors


# ---------------------------------------------------------------------------
# elementary steps
#
# Every step maps points of base_change(src, s) to points of
# base_change(dst, s) for any s; src and dst live over the common base field
# of the whole chain.


class _VeluStep:
    """x -> N/F^2, y -> y * Yn/F^3, with F the kernel polynomial."""

    __slots__ = ("src", "dst", "order", "F", "N", "Yn")

    def __init__(self, src, dst, order, F, N, Yn):
        self.src = src
        self.dst = dst
        self.order = order
        self.F = F
        self.N = N
        self.Yn = Yn


class _IsoStep:
    """(x, y) -> (u^2 x, u^3 y) onto the model with A2 = u^4 A, B2 = u^6 B."""

    __slots__ = ("src", "dst", "u")

    def __init__(self, src, dst, u):
        self.src = src
        self.dst = dst
        self.u = u


class _FrobStep:
    """p^e-power Frobenius; e < 0 (inverse on points) occurs only inside
    duals, always immediately followed by a matching _MulStep."""

    __slots__ = ("src", "dst", "e")

    def __init__(self, src, e):
        F = src.field
        k = e % F.r
        self.src = src
        self.dst = Curve(F, F.frobenius(src.A, k), F.frobenius(src.B, k))
        self.e = e


class _MulStep:
    """Multiplication by m on a fixed curve (src == dst)."""

    __slots__ = ("src", "dst", "m")

    def __init__(self, src, m):
        self.src = src
        self.dst = src
        self.m = m


@lru_cache(maxsize=None)
def _lift_poly(f: Poly, K: Field) -> Poly:
    if f.field is K:
        return f
    return subfield_embedding(f.field, K).map_poly(f)


def _apply_step(step, P: Point) -> Point:
    K = P.curve.field
    s = K.r // step.src.field.r
    dstK = base_change(step.dst, s)
    if not P:
        return dstK.infinity()
    x, y = P.x, P.y
    if isinstance(step, _VeluStep):
        Fx = _lift_poly(step.F, K).eval(x)
        if not Fx:
            return dstK.infinity()
        Fx2 = Fx * Fx
        X = _lift_poly(step.N, K).eval(x) / Fx2
        Y = y * _lift_poly(step.Yn, K).eval(x) / (Fx2 * Fx)
        return dstK.point(X, Y)
    if isinstance(step, _IsoStep):
        u = embed_element(step.u, K)
        return dstK.point(u * u * x, u * u * u * y)
    if isinstance(step, _FrobStep):
        k = step.e % K.r
        return dstK.point(K.frobenius(x, k), K.frobenius(y, k))
    if isinstance(step, _MulStep):
        return scalar_mul(step.m, P)
    raise AssertionError(f"unknown step {step!r}")


# ---------------------------------------------------------------------------
# the isogeny object


class Isogeny:
    """A morphism between chosen Weierstrass models, write-once.

    `source`/`target` are isomorphism classes; `source_curve` and
    `target_curve` are the concrete models the maps act on.  `degree` is the
    full degree and `insep_exp` the exponent e of the inseparable part p^e.
    """

    __slots__ = (
        "_steps",
        "source_curve",
        "target_curve",
        "degree",
        "insep_exp",
        "_kernel_gen",
        "_source_class",
        "_target_class",
        "_kernel_poly",
        "_maps",
        "_frozen",
    )

    def __init__(self, steps, src, dst, degree, insep_exp, kernel_gen):
        object.__setattr__(self, "_frozen", False)
        steps = tuple(steps)
        cur = src
        for st in steps:
            assert st.src == cur, "step chain is not contiguous"
            cur = st.dst
        assert cur == dst, "step chain does not end at the target"
        self._steps = steps
        self.source_curve = src
        self.target_curve = dst
        self.degree = degree
        self.insep_exp = insep_exp
        self._kernel_gen = kernel_gen
        self._source_class = None
        self._target_class = None
        self._kernel_poly = None
        self._maps = None
        object.__setattr__(self, "_frozen", True)

    def __setattr__(self, name, value):
        if self._frozen:
            raise AttributeError("Isogeny is write-once")
        object.__setattr__(self, name, value)

    def __repr__(self):
        return (
            f"Isogeny(degree={self.degree}, insep_exp={self.insep_exp}, "
            f"{self.source_curve!r} -> {self.target_curve!r})"
        )

    # -- spec'd class fields, computed lazily --------------------------------

    @property
    def source(self) -> CurveClass:
        if self._source_class is None:
            object.__setattr__(self, "_source_class", curve_class(self.source_curve))
        return self._source_class

    @property
    def target(self) -> CurveClass:
        if self._target_class is None:
            object.__setattr__(self, "_target_class", curve_class(self.target_curve))
        return self._target_class

    @property
    def separable_degree(self) -> int:
        return self.degree // self.source_curve.field.p ** self.insep_exp

    @property
    def kernel_gen(self):
        """A generator of the kernel if cyclic, else the full subgroup list.

        None for a trivial (separable part of the) kernel.
        """
        if self._kernel_gen is None and self.separable_degree > 1:
            pts = self._kernel_points()
            n = self.separable_degree
            gen = next((T for T in pts if point_order(T, n) == n), None)
            object.__setattr__(self, "_kernel_gen", gen if gen else pts)
        return self._kernel_gen

    def __call__(self, P: Point) -> Point:
        return evaluate(self, P)

    # -- kernel -------------------------------------------------------------

    def _kernel_points(self) -> list[Point]:
        """All nonzero geometric kernel points (of the separable part)."""
        n = self.separable_degree
        if n == 1:
            return []
        P1, Q1, _ = torsion_basis(self.source_curve, n)
        pts = []
        row = P1.curve.infinity()
        for _ in range(n):
            T = row
            for _ in range(n):
                if T and not evaluate(self, T):
                    pts.append(T)
                T = point_add(T, Q1)
            row = point_add(row, P1)
        assert len(pts) == n - 1, "kernel size must equal the separable degree"
        return pts

    def kernel_polynomial(self) -> Poly:
        """Monic polynomial over the base field vanishing exactly on the
        x-coordinates of the nonzero kernel points (with multiset
        convention: each point contributes one linear factor)."""
        if self._kernel_poly is not None:
            return self._kernel_poly
        base = self.source_curve.field
        if self.separable_degree == 1:
            F = Poly.from_ints(base, [1])
        elif len(self._steps) == 1 and isinstance(self._steps[0], _VeluStep):
            F = self._steps[0].F
        else:
            pts = self._kernel_points()
            K = pts[0].curve.field
            FK = Poly.from_roots(K, [T.x for T in pts])
            F = FK if K is base else subfield_embedding(base, K).unmap_poly(FK)
        object.__setattr__(self, "_kernel_poly", F)
        return F

    # -- identity and equality ------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Isogeny):
            return NotImplemented
        if (
            self.source_curve.field is not other.source_curve.field
            or self.degree != other.degree
            or self.insep_exp != other.insep_exp
        ):
            return False
        if self.source_curve == other.source_curve:
            return self.kernel_polynomial() == other.kernel_polynomial()
        if self.source != other.source:
            return False
        j = j_invariant(self.source_curve)
        F = self.source_curve.field
        if not j or j == F.from_int(1728):
            # extra automorphisms: isogenies from distinct models are not
            # identified
            return False
        u = isomorphism_scale(other.source_curve, self.source_curve)
        G = other.kernel_polynomial()
        d = G.degree()
        u2 = u * u
        moved = Poly(F, [G[k] * u2 ** (d - k) for k in range(d + 1)])
        return self.kernel_polynomial() == moved

    def __hash__(self):
        return hash(
            (self.source_curve.field, self.degree, self.insep_exp,
             j_invariant(self.source_curve))
        )

    # -- rational maps --------------------------------------------------------

    @property
    def rational_maps(self):
        """(xnum, xden, ynum, yden) over the base field:
        (x, y) -> (xnum/xden (x), y * ynum/yden (x)).
        """
        if self._maps is not None:
            return self._maps
        F = self.source_curve.field
        one = Poly.from_ints(F, [1])
        xn, xd, yn, yd = Poly.x(F), one, one, one
        for step in self._steps:
            sn, sd, tn, td = _step_maps(step)
            dx = max(sn.degree(), sd.degree())
            dy = max(tn.degree(), td.degree())
            new_xn = _subst_hom(sn, xn, xd, dx)
            new_xd = _subst_hom(sd, xn, xd, dx)
            yn = yn * _subst_hom(tn, xn, xd, dy)
            yd = yd * _subst_hom(td, xn, xd, dy)
            xn, xd = new_xn, new_xd
        g = poly_gcd(xn, xd)
        xn, xd = xn // g, xd // g
        g = poly_gcd(yn, yd)
        yn, yd = yn // g, yd // g
        c = xd.leading().inverse()
        xn, xd = xn * c, xd * c
        c = yd.leading().inverse()
        yn, yd = yn * c, yd * c
        object.__setattr__(self, "_maps", (xn, xd, yn, yd))
        return self._maps


def _step_maps(step):
    F = step.src.field
    one = Poly.from_ints(F, [1])
    if isinstance(step, _VeluStep):
        return step.N, step.F * step.F, step.Yn, step.F * step.F * step.F
    if isinstance(step, _IsoStep):
        u = step.u
        return Poly(F, [F.zero, u * u]), one, Poly.const(F, u * u * u), one
    if isinstance(step, _FrobStep) and step.e > 0:
        q = F.p ** step.e
        if q > 2**12:
            raise BoundExceeded("rational maps of this Frobenius power are huge")
        xmap = Poly(F, [F.zero] * q + [F.one])
        f = Poly(F, [step.src.B, step.src.A, F.zero, F.one])
        return xmap, one, f ** ((q - 1) // 2), one
    raise ValueError("rational maps are not available for this isogeny")


def _subst_hom(p: Poly, Xn: Poly, Xd: Poly, deg: int) -> Poly:
    """p(Xn/Xd) * Xd^deg, for deg >= deg p."""
    F = p.field
    out = Poly(F, [])
    np_ = Poly.from_ints(F, [1])
    dpows = [Poly.from_ints(F, [1])]
    for _ in range(deg):
        dpows.append(dpows[-1] * Xd)
    for i in range(p.degree() + 1):
        c = p[i]
        if c:
            out = out + np_ * dpows[deg - i] * c
        if i < p.degree():
            np_ = np_ * Xn
    return out


# ---------------------------------------------------------------------------
# construction


def _identity(E: Curve) -> Isogeny:
    return Isogeny((), E, E, 1, 0, None)


def _check_kernel_curve(E: Curve, P: Point) -> None:
    C = P.curve
    if C.field.p != E.field.p or C.field.r % E.field.r:
        raise CurveMismatch("kernel generator lives over an incompatible field")
    if C != base_change(E, C.field.r // E.field.r):
        raise CurveMismatch("kernel generator is not on a base change of E")


def velu(E: Curve, kernel_gen, order: int) -> Isogeny:
    """The separable isogeny with kernel generated by `kernel_gen`.

    `kernel_gen` must have exact order `order` (WrongOrder otherwise), with
    gcd(order, p) = 1, and generate a subgroup stable under the base-field
    Frobenius (NotRational otherwise).  It may live on any base change of E;
    the returned maps are defined over E's own field.  order = 1 gives the
    identity.
    """
    if not isinstance(order, int) or order < 1:
        raise ValueError("order must be a positive integer")
    if order == 1:
        if kernel_gen is not None and kernel_gen:
            raise WrongOrder("order 1 demands a trivial generator")
        return _identity(E)
    if order % E.field.p == 0:
        raise ValueError("kernel order must be coprime to the characteristic")
    if order > M_MAX:
        raise BoundExceeded(f"kernel order cap is {M_MAX}")
    P = kernel_gen
    if not isinstance(P, Point) or not P:
        raise WrongOrder("kernel generator must be a finite point")
    _check_kernel_curve(E, P)
    if scalar_mul(order, P):
        raise WrongOrder(f"generator is not annihilated by {order}")
    for ell in prime_factors(order):
        if not scalar_mul(order // ell, P):
            raise WrongOrder(f"generator order strictly divides {order}")
    # Frobenius stability of <P>: pi_q(P) must be a multiple of P
    R = frobenius_endo(P, E.field.r)
    W = P
    for _ in range(order - 1):
        if W == R:
            break
        W = point_add(W, P)
    else:
        raise NotRational("kernel is not stable under the base-field Frobenius")

    xs = []
    W = P
    for _ in range(order - 1):
        xs.append(W.x)
        W = point_add(W, P)
    K = P.curve.field
    FK = Poly.from_roots(K, xs)
    if K is E.field:
        F = FK
    else:
        try:
            F = subfield_embedding(E.field, K).unmap_poly(FK)
        except ValueError:
            raise NotRational("kernel polynomial does not descend to the base field")
    return _velu_from_kernel_poly(E, F, order, P)


def _velu_from_kernel_poly(E, F, n, gen):
    base = E.field
    A, B = E.A, E.B
    e1 = -F[n - 2] if n >= 2 else base.zero
    e2 = F[n - 3] if n >= 3 else base.zero
    e3 = -F[n - 4] if n >= 4 else base.zero
    p1 = e1
    p2 = e1 * p1 - 2 * e2
    p3 = e1 * p2 - e2 * p1 + 3 * e3
    v = 3 * p2 + (n - 1) * A
    w = 5 * p3 + 3 * A * p1 + 2 * (n - 1) * B
    target = Curve(base, A - 5 * v, B - 7 * w)
    f = Poly(base, [B, A, base.zero, base.one])
    Fp = F.derivative()
    Fpp = Fp.derivative()
    N = (n * Poly.x(base) - p1) * F * F - f.derivative() * Fp * F + 2 * f * (
        Fp * Fp - Fpp * F
    )
    assert N.degree() == 2 * n - 1
    Yn = N.derivative() * F - 2 * N * Fp
    step = _VeluStep(E, target, n, F, N, Yn)
    return Isogeny((step,), E, target, n, 0, gen)


def frobenius_isogeny(E: Curve, e: int) -> Isogeny:
    """The purely inseparable p^e-power Frobenius from E to E^(p^e).

    e = 0 is the identity; when e equals the field degree r this is the
    Frobenius endomorphism of E.
    """
    if not isinstance(e, int) or e < 0:
        raise ValueError("Frobenius exponent must be a nonnegative integer")
    if e == 0:
        return _identity(E)
    step = _FrobStep(E, e)
    return Isogeny((step,), E, step.dst, E.field.p**e, e, None)


def evaluate(phi: Isogeny, P: Point) -> Point:
    """phi(P).  P must lie on phi's source model or a base change of it."""
    if not isinstance(P, Point):
        raise TypeError("evaluate wants a Point")
    E0 = phi.source_curve
    C = P.curve
    if C == E0:
        s = 1
    else:
        if C.field.p != E0.field.p or C.field.r % E0.field.r:
            raise CurveMismatch("point is not on the source curve")
        s = C.field.r // E0.field.r
        if C != base_change(E0, s):
            raise CurveMismatch("point is not on the source curve")
    cur = P
    for step in phi._steps:
        if not cur:
            break
        cur = _apply_step(step, cur)
    if not cur:
        return base_change(phi.target_curve, s).infinity()
    return cur


def compose(psi: Isogeny, phi: Isogeny) -> Isogeny:
    """psi after phi.  The target class of phi must equal the source class
    of psi (ClassMismatch otherwise); a scaling isomorphism is inserted when
    the concrete models differ."""
    mid_out = phi.target_curve
    mid_in = psi.source_curve
    if mid_out.field is not mid_in.field:
        raise ClassMismatch("composition endpoints lie over different fields")
    if curve_class(mid_out) != curve_class(mid_in):
        raise ClassMismatch("target class of phi differs from source class of psi")
    sep = phi.separable_degree * psi.separable_degree
    if sep > M_MAX:
        raise BoundExceeded(f"composite separable degree cap is {M_MAX}")
    glue = ()
    if mid_out != mid_in:
        u = isomorphism_scale(mid_out, mid_in)
        glue = (_IsoStep(mid_out, mid_in, u),)
    return Isogeny(
        phi._steps + glue + psi._steps,
        phi.source_curve,
        psi.target_curve,
        phi.degree * psi.degree,
        phi.insep_exp + psi.insep_exp,
        None,
    )


# ---------------------------------------------------------------------------
# duals


def _automorphism_scales(E: Curve):
    F = E.field
    j = j_invariant(E)
    if not j:
        poly = Poly(F, [-F.one] + [F.zero] * 5 + [F.one])
    elif j == F.from_int(1728):
        poly = Poly(F, [-F.one] + [F.zero] * 3 + [F.one])
    else:
        return (F.one, -F.one)
    return tuple(r for r, _ in roots(poly))


def _generator_of_image(st: _VeluStep) -> Point:
    """A generator of phi(E[n]), the kernel of the dual of a Velu step."""
    n = st.order
    P1, Q1, _ = torsion_basis(st.src, n)
    R1 = _apply_step(st, P1)
    R2 = _apply_step(st, Q1)
    if point_order(R1, n) == n:
        return R1
    if point_order(R2, n) == n:
        return R2
    W = R1
    for _ in range(1, n):
        W = point_add(W, R2)
        if point_order(W, n) == n:
            return W
    raise AssertionError("image of the n-torsion must be cyclic of order n")


def _dual_velu_step(st: _VeluStep):
    n = st.order
    E = st.src
    tau = velu(st.dst, _generator_of_image(st), n)
    T = tau.target_curve
    u0 = isomorphism_scale(T, E)
    cands = list(dict.fromkeys(u0 * z for z in _automorphism_scales(E)))
    rng = random.Random(
        hash((E.field.p, E.field.r, E.A.coeffs, E.B.coeffs, st.F.coeffs, "dual"))
    )
    for s in (1, 2, 3, 4):
        EK = base_change(E, s)
        for _ in range(24):
            P = EK.random_point(rng)
            RHS = scalar_mul(n, P)
            LHS = _apply_step(tau._steps[0], _apply_step(st, P))
            if not RHS or not LHS:
                continue
            K = EK.field
            survivors = [
                u
                for u in cands
                if (lambda uu: uu * uu * LHS.x == RHS.x and uu**3 * LHS.y == RHS.y)(
                    embed_element(u, K)
                )
            ]
            if survivors:
                cands = survivors
            if len(cands) == 1 and survivors:
                return [tau._steps[0], _IsoStep(T, E, cands[0])]
    raise AssertionError("connecting isomorphism for the dual was not pinned down")


def _insep_of_steps(steps, supersingular: bool) -> int:
    total = 0
    for st in steps:
        if isinstance(st, _FrobStep):
            if st.e > 0:
                total += st.e
            elif supersingular:
                total += -st.e
    return total


def dual(phi: Isogeny) -> Isogeny:
    """The dual isogeny: dual(phi) o phi = [deg phi] on the source model."""
    E, E2 = phi.source_curve, phi.target_curve
    p = E.field.p
    out = []
    i = len(phi._steps) - 1
    while i >= 0:
        st = phi._steps[i]
        prev = phi._steps[i - 1] if i > 0 else None
        if (
            isinstance(st, _MulStep)
            and isinstance(prev, _FrobStep)
            and prev.e < 0
            and p ** (-prev.e) == st.m
        ):
            # dual of a Verschiebung pair [pi^-e, mul p^e] is Frobenius^e
            out.append(_FrobStep(st.dst, -prev.e))
            i -= 2
            continue
        if isinstance(st, _VeluStep):
            out.extend(_dual_velu_step(st))
        elif isinstance(st, _IsoStep):
            out.append(_IsoStep(st.dst, st.src, st.u.inverse()))
        elif isinstance(st, _FrobStep):
            assert st.e > 0, "stray inverse Frobenius outside a Verschiebung pair"
            out.append(_FrobStep(st.dst, -st.e))
            out.append(_MulStep(st.src, p**st.e))
        elif isinstance(st, _MulStep):
            out.append(st)
        else:
            raise AssertionError(f"unknown step {st!r}")
        i -= 1
    insep = _insep_of_steps(out, is_supersingular(E))
    return Isogeny(tuple(out), E2, E, phi.degree, insep, None)


# ---------------------------------------------------------------------------
# enumeration of stable cyclic kernels


def stable_cyclic_subgroups(E: Curve, ell: int, e: int = 1) -> list[Point]:
    """Generators of all Frobenius-stable cyclic subgroups of order ell^e.

    One generator per subgroup, each over the smallest extension where its
    subgroup is pointwise rational.  The Frobenius eigenvalue of a stable
    cyclic subgroup is a root c of x^2 - t x + q modulo ell^e, and the
    subgroup is pointwise rational exactly over GF(q^ord(c)); scanning those
    extension degrees in increasing order finds each subgroup once.
    """
    m = ell**e
    if m % E.field.p == 0:
        raise ValueError("subgroup order must be coprime to the characteristic")
    if m > M_MAX:
        raise BoundExceeded(f"kernel order cap is {M_MAX}")
    q = E.field.order
    t = E.trace
    eigen = [c for c in range(m) if (c * c - t * c + q) % m == 0]
    if not eigen:
        return []
    out = []
    r0 = E.field.r
    for s in sorted({multiplicative_order(c, m) for c in eigen}):
        if s * r0 > R_MAX:
            raise BoundExceeded(
                f"order-{m} kernels need extension degree {s} (cap {R_MAX // r0})"
            )
        EK = base_change(E, s)
        S1, S2, a, b = sylow_basis(EK, ell)
        if a < e:
            continue
        e2 = min(b, e)
        U1 = scalar_mul(ell ** (a - e), S1)
        U2 = scalar_mul(ell ** (b - e2), S2) if b else EK.infinity()
        cands = []
        T = U1
        for _ in range(ell**e2):
            cands.append(T)
            T = point_add(T, U2)
        if e2 == e:
            base_pt = U2
            stride = scalar_mul(ell, U1)
            for _ in range(ell ** (e - 1)):
                cands.append(base_pt)
                base_pt = point_add(base_pt, stride)
        for T in cands:
            c = _frobenius_eigenvalue(T, m, r0)
            if c is not None and multiplicative_order(c, m) == s:
                out.append(T)
    return out


def _frobenius_eigenvalue(T: Point, m: int, r0: int):
    """c with pi_q(T) = c*T, or None if <T> is not pi_q-stable."""
    R = frobenius_endo(T, r0)
    W = T
    for c in range(1, m):
        if W == R:
            return c
        W = point_add(W, T)
    return None


def cyclic_isogenies(E: Curve, n: int) -> list[Isogeny]:
    """All isogenies from E with a Frobenius-stable cyclic kernel of order n,
    built as chains of prime-power Velu quotients (one per prime dividing n).
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        return [_identity(E)]
    if n % E.field.p == 0:
        raise ValueError("n must be coprime to the characteristic")
    if n > M_MAX:
        raise BoundExceeded(f"kernel order cap is {M_MAX}")
    fac = factorize(n)
    per_prime = [stable_cyclic_subgroups(E, ell, e) for ell, e in fac]
    out = []
    for combo in itertools.product(*per_prime):
        phi = _identity(E)
        for gen, (ell, e) in zip(combo, fac):
            g = evaluate(phi, gen)
            phi = compose(velu(phi.target_curve, g, ell**e), phi)
        out.append(phi)
    return out


# ---------------------------------------------------------------------------
# modular polynomials


SUPPORTED_LEVELS = (2, 3, 5, 7)


class ModularPolynomial:
    """Phi_level as a symmetric integer coefficient table (i, j) -> c."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: dict):
        self.level = level
        self.coeffs = coeffs

    def evaluate(self, j1: FieldElement, j2: FieldElement) -> FieldElement:
        F = j1.field
        if j2.field is not F:
            raise FieldMismatch("j-invariants over different fields")
        d = self.level + 1
        p1 = [F.one]
        p2 = [F.one]
        for _ in range(d):
            p1.append(p1[-1] * j1)
            p2.append(p2[-1] * j2)
        acc = F.zero
        for (i, j), c in self.coeffs.items():
            acc = acc + p1[i] * p2[j] * c
        return acc

    def univariate(self, j0: FieldElement) -> Poly:
        """Phi_level(j0, Y) as a polynomial in Y over j0's field."""
        F = j0.field
        d = self.level + 1
        pows = [F.one]
        for _ in range(d):
            pows.append(pows[-1] * j0)
        cs = [F.zero] * (d + 1)
        for (i, j), c in self.coeffs.items():
            cs[j] = cs[j] + pows[i] * c
        return Poly(F, cs)


@lru_cache(maxsize=None)
def _load_modular_tables(source_key: str):
    if source_key:
        with open(os.path.join(source_key, "modular_polynomials.txt")) as fh:
            text = fh.read()
    else:
        text = (
            resources.files("isogenion")
            .joinpath("data/modular_polynomials.txt")
            .read_text()
        )
    tables: dict[int, dict] = {}
    for line in text.split("\n"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ell_s, i_s, j_s, c_s = line.split()
        ell, i, j, c = int(ell_s), int(i_s), int(j_s), int(c_s)
        tab = tables.setdefault(ell, {})
        tab[(i, j)] = c
        tab[(j, i)] = c
    return {ell: ModularPolynomial(ell, tab) for ell, tab in tables.items()}


def modular_polynomial(level: int) -> ModularPolynomial:
    """The classical modular polynomial Phi_level (levels 2, 3, 5, 7)."""
    tables = _load_modular_tables(os.environ.get("ISOGENION_DATA", ""))
    if level not in tables:
        raise UnsupportedLevel(
            f"no modular polynomial for level {level}; have {sorted(tables)}"
        )
    return tables[level]


def modular_adjacent(level: int, j1: FieldElement, j2: FieldElement) -> bool:
    """Whether Phi_level(j1, j2) = 0, i.e. the two j-invariants are joined
    by a cyclic isogeny of degree `level` over the algebraic closure."""
    if level not in SUPPORTED_LEVELS:
        raise UnsupportedLevel(f"supported levels: {SUPPORTED_LEVELS}")
    return not modular_polynomial(level).evaluate(j1, j2)
