"""Dense univariate polynomials over a finite field, with factorization.

The factoring stack is squarefree decomposition -> distinct-degree ->
Cantor-Zassenhaus equal-degree splitting.  The randomized splitting step is
seeded from the polynomial's own coefficients, so factorizations (and hence
everything downstream: kernel enumeration, graph layouts, CLI output) are
bit-for-bit reproducible.

Subfield embeddings GF(p^a) -> GF(p^b) for a | b also live here, because they
are defined by the lex-least root of the small field's modulus in the big one.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from .errors import DivisionByZero, FieldMismatch
from .finite_field import Field, FieldElement


class Poly:
    """Immutable polynomial; coeffs are FieldElements, constant term first."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: Field, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_ints(field: Field, ints) -> "Poly":
        return Poly(field, [field.from_int(c) for c in ints])

    @staticmethod
    def x(field: Field) -> "Poly":
        return Poly.from_ints(field, [0, 1])

    @staticmethod
    def const(field: Field, c) -> "Poly":
        if isinstance(c, int):
            c = field.from_int(c)
        return Poly(field, [c])

    @staticmethod
    def from_roots(field: Field, roots) -> "Poly":
        out = Poly.from_ints(field, [1])
        for r in roots:
            out = out * Poly(field, [-r, field.one])
        return out

    # -- protocol ------------------------------------------------------------

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c!r}*x^{i}" if i else f"{c!r}")
        return "Poly(" + " + ".join(terms) + ")"

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.field.r, self.coeffs))
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else self.field.zero

    def leading(self) -> FieldElement:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check(self, other):
        if self.field is not other.field:
            raise FieldMismatch("polynomials over different fields")

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = Poly.const(self.field, other)
        self._check(other)
        return Poly(
            self.field,
            [
                a + b
                for a, b in itertools.zip_longest(
                    self.coeffs, other.coeffs, fillvalue=self.field.zero
                )
            ],
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = Poly.const(self.field, other)
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = Poly.const(self.field, other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        f, g = self.coeffs, other.coeffs
        out = [self.field.zero] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        inv_lead = other.leading().inverse()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(self.field, []), self
        quot = [self.field.zero] * (dq + 1)
        for shift in range(dq, -1, -1):
            c = rem[shift + other.degree()] * inv_lead
            if c:
                quot[shift] = c
                for i, oc in enumerate(other.coeffs):
                    rem[shift + i] = rem[shift + i] - c * oc
        return Poly(self.field, quot), Poly(self.field, rem[: other.degree()])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        result = Poly.from_ints(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly(
            self.field,
            [self.coeffs[i] * i for i in range(1, len(self.coeffs))],
        )

    def eval(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, fn, new_field=None) -> "Poly":
        return Poly(new_field or self.field, [fn(c) for c in self.coeffs])


def poly_gcd(f: Poly, g: Poly) -> Poly:
    while not g.is_zero():
        f, g = g, f % g
    return f.monic() if not f.is_zero() else f


def pow_mod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.from_ints(base.field, [1]) % mod
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# factorization


def _pth_root(f: Poly) -> Poly:
    """Inverse of g -> g^p applied coefficient-wise; f must be in GF(q)[x^p]."""
    field = f.field
    p = field.p
    root_exp = field.order // p  # c^(q/p) is the p-th root of c
    coeffs = []
    for i in range(0, f.degree() + 1, p):
        coeffs.append(f[i] ** root_exp)
    return Poly(field, coeffs)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """f (monic, nonzero) as a product of pairwise-coprime squarefree parts.

    Returns [(g, m), ...] with f = prod g^m, each g squarefree and monic.
    """
    out: dict[Poly, int] = {}

    def add(g: Poly, m: int):
        if g.degree() > 0:
            out[g] = out.get(g, 0) + m

    def rec(f: Poly, mult: int):
        d = f.derivative()
        if d.is_zero():
            rec(_pth_root(f), mult * f.field.p)
            return
        w = poly_gcd(f, d)
        v = f // w
        i = 1
        while v.degree() > 0:
            y = poly_gcd(v, w)
            add(v // y, mult * i)
            v, w = y, w // y
            i += 1
        if w.degree() > 0:
            rec(_pth_root(w), mult * f.field.p)

    rec(f.monic(), 1)
    # merge parts that appeared twice (possible through the p-th root path)
    return sorted(out.items(), key=lambda t: (t[1], t[0].degree(), _poly_key(t[0])))


def _poly_key(f: Poly):
    return tuple(c.coeffs for c in f.coeffs)


def _poly_seed(f: Poly) -> int:
    seed = f.field.p * 1000003 + f.field.r
    for c in f.coeffs:
        for v in c.coeffs:
            seed = (seed * 1000003 + v + 1) % (2**61 - 1)
    return seed


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Split a monic squarefree product of degree-d irreducibles."""
    field = f.field
    if f.degree() == d:
        return [f]
    q = field.order
    assert field.p != 2, "equal-degree splitting implemented for odd p"
    exponent = (q**d - 1) // 2
    while True:
        a = Poly(
            field,
            [
                field.from_coeffs([rng.randrange(field.p) for _ in range(field.r)])
                for _ in range(f.degree())
            ],
        )
        if a.degree() < 1:
            continue
        b = pow_mod(a, exponent, f) - Poly.from_ints(field, [1])
        g = poly_gcd(b, f)
        if 0 < g.degree() < f.degree():
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Full factorization into monic irreducibles: [(g, multiplicity), ...].

    Deterministic: the internal RNG is seeded from f's coefficients.  The
    factor list is sorted by (degree, coefficient order).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(_poly_seed(f))
    result: list[tuple[Poly, int]] = []
    for g, mult in squarefree_decomposition(f):
        # distinct-degree on the squarefree g
        x = Poly.x(f.field)
        w = x
        rest = g
        d = 0
        while rest.degree() > 0:
            d += 1
            if 2 * d > rest.degree():
                result.append((rest.monic(), mult))
                break
            w = pow_mod(w, f.field.order, rest)
            h = poly_gcd(w - x, rest)
            if h.degree() > 0:
                for irr in _equal_degree_split(h.monic(), d, rng):
                    result.append((irr, mult))
                rest = rest // h
                w = w % rest
    result.sort(key=lambda t: (t[0].degree(), _poly_key(t[0])))
    return result


def roots(f: Poly) -> list[tuple[FieldElement, int]]:
    """Roots of f in its own field, (root, multiplicity), sorted lex."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    # gcd with x^q - x isolates the part with roots in the field
    x = Poly.x(f.field)
    lin = poly_gcd(pow_mod(x, f.field.order, f) - x, f)
    if lin.degree() <= 0:
        return []
    out = []
    for g, _ in factor(lin):
        if g.degree() == 1:
            root = -g[0]
            mult = 0
            h = f
            while True:
                q, r = divmod(h, Poly(f.field, [-root, f.field.one]))
                if not r.is_zero():
                    break
                mult += 1
                h = q
            out.append((root, mult))
    out.sort(key=lambda t: t[0].coeffs)
    return out


# ---------------------------------------------------------------------------
# subfield embeddings


class SubfieldEmbedding:
    """GF(p^a) -> GF(p^b) for a | b, determined by the lex-least root of the
    small modulus in the big field."""

    __slots__ = ("src", "dst", "root", "_powers", "_solve_rows", "_pivots")

    def __init__(self, src: Field, dst: Field, root: FieldElement):
        self.src = src
        self.dst = dst
        self.root = root
        pw = [dst.one]
        for _ in range(src.r - 1):
            pw.append(pw[-1] * root)
        self._powers = pw
        # row-reduce the (dst.r x src.r) matrix of basis images for unmapping
        self._solve_rows, self._pivots = self._row_reduce()

    def _row_reduce(self):
        p = self.src.p
        rows = []  # each row: [matrix row | rhs placeholder handled at solve]
        # build augmented system lazily: we store RREF transform of the matrix
        mat = [[self._powers[j].coeffs[i] for j in range(self.src.r)]
               for i in range(self.dst.r)]
        ident = [[1 if i == j else 0 for j in range(self.dst.r)]
                 for i in range(self.dst.r)]
        pivots = []
        rank = 0
        for col in range(self.src.r):
            sel = None
            for row in range(rank, self.dst.r):
                if mat[row][col] % p:
                    sel = row
                    break
            if sel is None:
                continue
            mat[rank], mat[sel] = mat[sel], mat[rank]
            ident[rank], ident[sel] = ident[sel], ident[rank]
            inv = pow(mat[rank][col], -1, p)
            mat[rank] = [v * inv % p for v in mat[rank]]
            ident[rank] = [v * inv % p for v in ident[rank]]
            for row in range(self.dst.r):
                if row != rank and mat[row][col] % p:
                    c = mat[row][col]
                    mat[row] = [(a - c * b) % p for a, b in zip(mat[row], mat[rank])]
                    ident[row] = [
                        (a - c * b) % p for a, b in zip(ident[row], ident[rank])
                    ]
            pivots.append(col)
            rank += 1
        if rank != self.src.r:
            raise AssertionError("embedding matrix must have full rank")
        return (mat, ident), pivots

    def map(self, el: FieldElement) -> FieldElement:
        if el.field is self.dst:
            return el
        if el.field is not self.src:
            raise FieldMismatch("element not in the source field")
        acc = self.dst.zero
        for c, pw in zip(el.coeffs, self._powers):
            if c:
                acc = acc + pw * c
        return acc

    def unmap(self, el: FieldElement) -> FieldElement:
        """Inverse of map; raises ValueError if el is not in the image."""
        if el.field is self.src:
            return el
        if el.field is not self.dst:
            raise FieldMismatch("element not in the destination field")
        p = self.src.p
        mat, ident = self._solve_rows
        # solution coordinates: apply the recorded row transform to el's vector
        vec = list(el.coeffs)
        transformed = [
            sum(ident[row][k] * vec[k] for k in range(self.dst.r)) % p
            for row in range(self.dst.r)
        ]
        sol = [0] * self.src.r
        for rank, col in enumerate(self._pivots):
            sol[col] = transformed[rank]
        # consistency: rows beyond the rank must vanish
        for row in range(len(self._pivots), self.dst.r):
            if transformed[row] % p:
                raise ValueError("element does not lie in the subfield")
        out = self.src.from_coeffs(sol)
        if self.map(out) != el:
            raise ValueError("element does not lie in the subfield")
        return out

    def map_poly(self, f: Poly) -> Poly:
        return f.map_coeffs(self.map, self.dst)

    def unmap_poly(self, f: Poly) -> Poly:
        return f.map_coeffs(self.unmap, self.src)


@lru_cache(maxsize=None)
def subfield_embedding(src: Field, dst: Field) -> SubfieldEmbedding:
    if src is dst:
        raise ValueError("trivial embedding; use the element directly")
    if src.p != dst.p or dst.r % src.r:
        raise FieldMismatch(f"no embedding {src} -> {dst}")
    if src.r == 1:
        return SubfieldEmbedding(src, dst, dst.one)
    modulus_in_dst = Poly.from_ints(dst, src.modulus)
    rts = roots(modulus_in_dst)
    if not rts:
        raise AssertionError("modulus must split in any extension of its field")
    return SubfieldEmbedding(src, dst, rts[0][0])


def embed_element(el: FieldElement, dst: Field) -> FieldElement:
    """Convenience: embed el into dst (no-op if already there)."""
    if el.field is dst:
        return el
    return subfield_embedding(el.field, dst).map(el)
