"""Smallest non-trivial isogeny degrees between curve classes.

Md(E2, E1) is the least degree of a non-isomorphism isogeny E2 -> E1.
Between distinct ordinary classes of the same trace it never exceeds
eB(q, t) = floor((2/pi)sqrt(4q - t^2)): Minkowski's lattice bound puts an
ideal of that small a norm in every ideal class, and vertical steps only
trade conductor primes against the square root.  Within one class the
answer is 2, 3 or 4 and is decided by pure congruence data: a degree-2 or
degree-3 endomorphism lifts to characteristic zero, where only six
imaginary quadratic orders contain elements of norm 2 or 3, each pinned to
a single rational j-invariant.  CM_TABLE carries those six rows; the
classifier reads off the reduction type from p's residue class.

The search itself enumerates cyclic kernels degree by degree (composites
of p are handled by splicing in Frobenius steps), so every returned
minimum is exact, with the found isogeny as witness.
"""

from math import gcd

from .elliptic_curve import (
    Curve,
    base_change,
    curve_class,
    is_supersingular,
    j_invariant,
    point_add,
    scalar_mul,
    torsion_basis,
    twist_classes,
)
from .errors import BoundExceeded, NoCurveWithTrace, NotIsogenous, SearchExhausted
from .finite_field import Field, field_create
from .intmath import factorize, floor_two_over_pi_sqrt
from .isogeny import (
    compose,
    cyclic_isogenies,
    dual,
    frobenius_isogeny,
    modular_polynomial,
    velu,
)
from .polyring import roots as poly_roots

# rB enumerates every class of a trace and searches all pairs; the point
# counts behind that sweep are quadratic in q, so keep it at desk scale.
CLASS_SWEEP_MAX = 1000


def eB(q: int, t: int) -> int:
    """floor((2/pi)sqrt(4q - t^2)): the minimal-degree bound for trace t.

    Exact flooring comes from the shared rational bracketing of pi in
    intmath; no floating point is involved.
    """
    if not isinstance(q, int) or not isinstance(t, int):
        raise TypeError("q and t must be integers")
    if t * t >= 4 * q:
        raise ValueError("need t^2 < 4q for an imaginary quadratic bound")
    return floor_two_over_pi_sqrt(4 * q - t * t)


class CMTableEntry:
    """One of the six quadratic orders with an element of norm 2 or 3.

    `congruence_conditions` and `excluded_primes` are keyed by reduction
    type: the same j-invariant reduces to an ordinary curve when p splits
    in the CM field and to a supersingular one when it does not, and the
    allowed residues differ accordingly.  Excluded primes mark collisions
    where the same residue of j also carries a norm-2 endomorphism, which
    wins.
    """

    __slots__ = ("tau_label", "j_value", "md_value", "congruence_conditions", "excluded_primes")

    def __init__(self, tau_label, j_value, md_value, congruence_conditions, excluded_primes):
        self.tau_label = tau_label
        self.j_value = j_value
        self.md_value = md_value
        self.congruence_conditions = congruence_conditions
        self.excluded_primes = excluded_primes

    def __repr__(self):
        return f"CMTableEntry({self.tau_label}, j={self.j_value}, md={self.md_value})"


CM_TABLE = (
    CMTableEntry(
        "sqrt(-1)",
        1728,
        2,
        {"ordinary": [(4, (1,))], "supersingular": [(4, (3,))]},
        {"ordinary": (), "supersingular": ()},
    ),
    CMTableEntry(
        "sqrt(-2)",
        8000,
        2,
        {"ordinary": [(8, (1, 3))], "supersingular": [(8, (5, 7))]},
        {"ordinary": (), "supersingular": ()},
    ),
    CMTableEntry(
        "(1+sqrt(-7))/2",
        -3375,
        2,
        {"ordinary": [(7, (1, 2, 4))], "supersingular": [(7, (3, 5, 6))]},
        {"ordinary": (), "supersingular": ()},
    ),
    CMTableEntry(
        "(1+sqrt(-3))/2",
        0,
        3,
        {"ordinary": [(3, (1,))], "supersingular": [(3, (2,))]},
        {"ordinary": (), "supersingular": (2, 5)},
    ),
    CMTableEntry(
        "sqrt(-3)",
        54000,
        3,
        {"ordinary": [(3, (1,))], "supersingular": [(3, (2,))]},
        {"ordinary": (), "supersingular": (2, 5, 11, 17, 23)},
    ),
    CMTableEntry(
        "(1+sqrt(-11))/2",
        -32768,
        3,
        {"ordinary": [(11, (1, 3, 4, 5, 9))], "supersingular": [(11, (2, 6, 7, 8, 10))]},
        {"ordinary": (), "supersingular": (2, 7, 13, 17, 19)},
    ),
)


def md_classifier(E: Curve) -> int:
    """Md(E) over the algebraic closure, from congruence data alone.

    Returns 2 or 3 when j(E) is the reduction of one of the CM_TABLE
    j-invariants under that row's residue conditions, else 4 (the doubling
    map).  A j-invariant outside the prime field matches no row.  p = 2, 3
    are refused: their towers of extra automorphisms need separate
    bookkeeping (over those fields only j = 0 = 1728 is supersingular,
    with Md = 2).
    """
    p = E.field.p
    if p <= 3:
        raise ValueError("classification requires p > 3")
    try:
        j_int = j_invariant(E).lift_int()
    except ValueError:
        return 4
    regime = "supersingular" if is_supersingular(E) else "ordinary"
    for row in CM_TABLE:
        if (j_int - row.j_value) % p:
            continue
        if p in row.excluded_primes[regime]:
            continue
        for modulus, residues in row.congruence_conditions[regime]:
            if p % modulus in residues:
                return row.md_value
    return 4


class MdResult:
    """A proven minimal degree together with the isogeny that attains it."""

    __slots__ = ("pair", "md", "witness", "bound_eB")

    def __init__(self, pair, md, witness, bound_eB):
        self.pair = pair
        self.md = md
        self.witness = witness
        self.bound_eB = bound_eB

    def __repr__(self):
        a, b = self.pair
        return f"MdResult({a.j!r}/{a.trace} -> {b.j!r}/{b.trace}, md={self.md})"


def witness_degree_chain(phi) -> tuple:
    """Step degrees of a witness in application order (first map first).

    Velu steps report their kernel order, Frobenius steps p^|e| and
    multiplication steps m^2; model-glue isomorphisms are silent.  The
    product of the chain is deg(phi).
    """
    p = phi.source_curve.field.p
    chain = []
    pending = 1  # inverse-Frobenius factor awaiting its paired multiplication
    for step in phi._steps:
        order = getattr(step, "order", None)
        if order is not None:
            if order > 1:
                chain.append(order)
        elif hasattr(step, "e"):
            if step.e > 0:
                chain.append(p**step.e)
            elif step.e < 0:
                pending *= p ** (-step.e)
        elif hasattr(step, "m"):
            d = step.m * step.m
            assert d % pending == 0, "unmatched inverse-Frobenius step"
            if d > pending:
                chain.append(d // pending)
            pending = 1
    got = 1
    for d in chain:
        got *= d
    assert pending == 1 and got == phi.degree, (
        "step degrees must multiply to the full degree"
    )
    return tuple(chain)


# enumerations reused across the pair sweeps in rB and the bounds reports
_CYCLIC: dict = {}
_CLOSURE: dict = {}


def _cyclic_rational(E: Curve, m: int):
    got = _CYCLIC.get((E, m))
    if got is None:
        got = _CYCLIC[(E, m)] = tuple(cyclic_isogenies(E, m))
    return got


def _cyclic_closure(E: Curve, m: int):
    """Every cyclic degree-m isogeny from E over the closure.

    E[m] is made pointwise rational by a base change, after which all of
    its subgroups are Frobenius-stable and Velu applies; one generator is
    kept per line of E[m].
    """
    got = _CLOSURE.get((E, m))
    if got is not None:
        return got
    P, Q, _ = torsion_basis(E, m)
    EK = P.curve
    out = []
    seen = set()
    for x in range(m):
        for y in range(m):
            if gcd(gcd(x, y), m) != 1:
                continue
            line = frozenset(((a * x) % m, (a * y) % m) for a in range(m))
            if line in seen:
                continue
            seen.add(line)
            T = point_add(scalar_mul(x, P), scalar_mul(y, Q))
            out.append(velu(EK, T, m))
    got = _CLOSURE[(E, m)] = tuple(out)
    return got


def _lands_on(phi, target, over_k: bool) -> bool:
    if over_k:
        return curve_class(phi.target_curve).key() == target.key()
    model = phi.target_curve
    rep = target.representative
    steps = model.field.r // rep.field.r
    return j_invariant(model) == j_invariant(base_change(rep, steps))


def _degree_candidates(E: Curve, m: int, over_k: bool):
    """All candidate degree-m isogenies from E, as an iterator.

    Degrees divisible by p go through Frobenius powers.  Over GF(p) such
    degrees are never reached (the bounds sit below p); over GF(p^2) the
    inverse-Frobenius curve coincides with the Frobenius one (x^(1/p) is
    x^p there), so routing the inseparable part through Frobenius loses
    no target class.  Deeper ordinary extensions would need the dual
    direction too, so they are refused rather than searched incompletely.
    """
    p = E.field.p
    e, sep = 0, m
    while sep % p == 0:
        sep //= p
        e += 1
    if e == 0:
        yield from _cyclic_rational(E, m) if over_k else _cyclic_closure(E, m)
        return
    if E.field.r > 2 and not is_supersingular(E):
        raise BoundExceeded(
            "degrees divisible by p are only searched over GF(p) and GF(p^2)"
        )
    frob = frobenius_isogeny(E, e)
    if sep == 1:
        yield frob
        return
    if over_k:
        for phi in _cyclic_rational(frob.target_curve, sep):
            yield compose(phi, frob)
        return
    for phi in _cyclic_closure(frob.target_curve, sep):
        steps = phi.source_curve.field.r // E.field.r
        lifted = frobenius_isogeny(base_change(E, steps), e)
        yield compose(phi, lifted)


def _doubling_witness(E: Curve, over_k: bool):
    """[2] as dual(phi) o phi for some 2-isogeny phi.

    When no 2-torsion line is Frobenius-stable (odd trace), the maps are
    assembled on the base change that makes E[2] rational; the degree is
    still 4 and source and target are still E.
    """
    if over_k:
        rational = _cyclic_rational(E, 2)
        if rational:
            phi = rational[0]
            return compose(dual(phi), phi)
    phi = _cyclic_closure(E, 2)[0]
    return compose(dual(phi), phi)


def md_between(E2: Curve, E1: Curve, over_k: bool = True) -> MdResult:
    """The least degree > 1 of an isogeny E2 -> E1, with witness.

    over_k=True restricts to isogenies rational over the base field; False
    searches the closure, where classes merge by j-invariant.  The degree
    loop is capped by eB (ordinary, distinct classes), by 4 (same class:
    the doubling map always competes), or by p (supersingular beyond the
    prime field).  Kernel enumerations that overflow the extension caps
    propagate BoundExceeded rather than silently skipping a degree, so a
    returned minimum is always exact.
    """
    if not isinstance(E2, Curve) or not isinstance(E1, Curve):
        raise TypeError("md_between expects two curves")
    if E2.field != E1.field:
        raise NotIsogenous("the curves live over different fields")
    ss = is_supersingular(E2)
    if is_supersingular(E1) != ss:
        raise NotIsogenous("ordinary and supersingular curves are never isogenous")
    if over_k:
        if E2.trace != E1.trace:
            raise NotIsogenous(f"traces {E2.trace} and {E1.trace} differ")
    elif not ss and E2.trace not in (E1.trace, -E1.trace):
        raise NotIsogenous("not isogenous even over the closure")

    q, p, t = E2.field.order, E2.field.p, E2.trace
    c2, c1 = curve_class(E2), curve_class(E1)
    same = c2.key() == c1.key() if over_k else j_invariant(E2) == j_invariant(E1)
    bound_val = eB(q, t) if t * t < 4 * q else 0

    if same:
        bound = 4
    elif not ss:
        bound = bound_val
    elif E2.field.r == 1:
        bound = bound_val  # t = 0: this is floor((4/pi)sqrt(p))
    elif E2.field.r == 2:
        bound = p
    else:
        raise BoundExceeded("supersingular search beyond GF(p^2) is not supported")

    # Same class: only 2 and 3 need searching; the doubling map dual(phi)*phi
    # settles 4 without enumerating any 4-torsion.
    top = 3 if same else bound
    for m in range(2, top + 1):
        for phi in _degree_candidates(E2, m, over_k):
            if _lands_on(phi, c1, over_k):
                return MdResult((c2, c1), m, phi, bound_val)
    if same:
        return MdResult((c2, c1), 4, _doubling_witness(E2, over_k), bound_val)
    raise SearchExhausted(f"no isogeny of degree <= {bound} connects the classes")


def _classes_with_trace(field: Field, t: int):
    seen = {}
    for j in field.elements():
        for c in twist_classes(field, j):
            if c.trace == t and c.key() not in seen:
                seen[c.key()] = c
    return sorted(seen.values(), key=lambda c: c.key())


def rB(field: Field, t: int) -> tuple:
    """Largest minimal degree across one isogeny class, with its pair.

    Sweeps every unordered pair of classes of the given trace (same-class
    pairs included) and maximises md_between over the base field.
    """
    if not isinstance(field, Field):
        raise TypeError("rB expects a Field")
    if not isinstance(t, int):
        raise TypeError("the trace must be an integer")
    if field.order > CLASS_SWEEP_MAX:
        raise BoundExceeded(f"class sweeps are capped at order {CLASS_SWEEP_MAX}")
    classes = _classes_with_trace(field, t)
    if not classes:
        raise NoCurveWithTrace(f"no class over {field!r} has trace {t}")
    best = None
    for i, A in enumerate(classes):
        for B in classes[i:]:
            res = md_between(A.representative, B.representative)
            if best is None or res.md > best.md:
                best = res
    return best.md, best.pair


def _supersingular_j_invariants(F2: Field) -> list:
    """All supersingular j-invariants in GF(p^2), cheaply.

    Seeded from any trace-0 curve over the prime field (one always exists
    for p >= 5) and closed under degree-2 adjacency: the supersingular
    locus is connected under 2-isogenies and lies entirely inside GF(p^2),
    so the walk never point-counts more than the seed scan.
    """
    p = F2.p
    Fp = field_create(p)
    seed = None
    for j in Fp.elements():
        if any(c.trace == 0 for c in twist_classes(Fp, j)):
            seed = F2.from_int(j.lift_int())
            break
    assert seed is not None, "every prime field carries a trace-0 curve"
    phi2 = modular_polynomial(2)
    seen = {seed}
    frontier = [seed]
    while frontier:
        j0 = frontier.pop()
        for r, _ in poly_roots(phi2.univariate(j0)):
            if r not in seen:
                seen.add(r)
                frontier.append(r)
    return sorted(seen, key=lambda x: x.lift())


def md_supersingular_bounds(p: int) -> dict:
    """Survey of minimal degrees through the supersingular classes at p.

    Over GF(p), all distinct trace-0 pairs must sit under the Minkowski
    bound floor((4/pi)sqrt(p)).  Over GF(p^2), pairs of distinct classes
    with trace not +-2p are expected to have minimal degree exactly p
    (the p-power Frobenius being the only map that small), and trace +-2p
    pairs to agree with the closure; deviations are collected in the
    report rather than raised, and pairs whose kernel enumeration
    overflows a cap are listed as skipped.
    """
    if not isinstance(p, int) or p < 5:
        raise ValueError("p must be a prime >= 5")
    fp_bound = floor_two_over_pi_sqrt(4 * p)
    report = {
        "p": p,
        "fp_bound": fp_bound,
        "fp_pairs": [],
        "fp_bound_ok": True,
        "fp2_expected_p": [],
        "fp2_deviations": [],
        "fp2_skipped": [],
        "full_trace_matches_closure": [],
    }

    Fp = field_create(p)
    trace0 = _classes_with_trace(Fp, 0)
    for i, A in enumerate(trace0):
        for B in trace0[i + 1 :]:
            res = md_between(A.representative, B.representative)
            entry = {"pair": [A.key(), B.key()], "md": res.md}
            report["fp_pairs"].append(entry)
            if res.md > fp_bound:
                report["fp_bound_ok"] = False

    F2 = field_create(p, 2)
    by_trace: dict = {}
    for j in _supersingular_j_invariants(F2):
        for c in twist_classes(F2, j):
            if c.trace % p == 0:
                by_trace.setdefault(c.trace, {})[c.key()] = c
    for t, group in sorted(by_trace.items()):
        classes = sorted(group.values(), key=lambda c: c.key())
        full = abs(t) == 2 * p
        for i, A in enumerate(classes):
            for B in classes[i + 1 :]:
                pair = [A.key(), B.key()]
                try:
                    res = md_between(A.representative, B.representative)
                except SearchExhausted:
                    report["fp2_deviations"].append({"pair": pair, "md": f"> {p}"})
                    continue
                except BoundExceeded as exc:
                    report["fp2_skipped"].append({"pair": pair, "reason": str(exc)})
                    continue
                if full:
                    closure = md_between(A.representative, B.representative, over_k=False)
                    report["full_trace_matches_closure"].append(
                        {"pair": pair, "md": res.md, "closure_md": closure.md,
                         "equal": res.md == closure.md}
                    )
                elif res.md == p:
                    report["fp2_expected_p"].append({"pair": pair, "md": res.md})
                else:
                    report["fp2_deviations"].append({"pair": pair, "md": res.md})
    return report
