"""Arithmetic in GF(p) and GF(p^r).

Fields are canonical: `field_create(p, r)` always picks the lexicographically
least monic irreducible modulus (coefficient tuples (c0, ..., c_{r-1})
ascending, constant term first), so two runs — or two machines — agree on
every element's coordinate vector.  Elements are immutable and hashable.

Caps: p <= 2**16 and r <= 24.  These keep exhaustive point/torsion work in
seconds; nothing here is meant for cryptographic sizes.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import BoundExceeded, DivisionByZero, FieldMismatch, NotPrime
from .intmath import is_prime, kronecker, prime_factors

__all__ = [
    "Field",
    "FieldElement",
    "field_create",
    "arith",
    "sqrt",
    "kronecker",
    "frobenius",
    "P_MAX",
    "R_MAX",
]

P_MAX = 2**16
R_MAX = 24

_EXHAUSTIVE_SQRT_MAX = 2**10


# ---------------------------------------------------------------------------
# raw polynomial helpers over GF(p): coefficient lists, constant term first.
# Used only for modulus discovery and reduction tables; public polynomial
# arithmetic lives in polyring.py.


def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = _ptrim(list(f))
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv_lead % p
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _ptrim(f)
        if not f:
            break
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _pgcd(f, g, p):
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f, g = g, _pmod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _ppow_x(e, modpoly, p):
    """x**e mod modpoly, square-and-multiply."""
    result = [1]
    base = _pmod([0, 1], modpoly, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), modpoly, p)
        base = _pmod(_pmul(base, base, p), modpoly, p)
        e >>= 1
    return result


def _is_irreducible(f, p):
    """Rabin's test for a monic f over GF(p)."""
    r = len(f) - 1
    if r <= 0:
        return False
    if f[0] == 0:  # divisible by x
        return r == 1
    xq = _ppow_x(p**r, f, p)
    if _ptrim([(c - x) % p for c, x in itertools.zip_longest(xq, [0, 1], fillvalue=0)]):
        return False
    for d in prime_factors(r):
        xe = _ppow_x(p ** (r // d), f, p)
        diff = [(c - x) % p for c, x in itertools.zip_longest(xe, [0, 1], fillvalue=0)]
        if len(_pgcd(diff, f, p)) > 1:
            return False
    return True


def _least_irreducible(p, r):
    """Lexicographically least monic irreducible of degree r over GF(p)."""
    if r == 1:
        return (0, 1)  # the convention: plain Z/p, modulus "x"
    # constant term 0 means reducible, so start each block at c0 >= 1
    for c0 in range(1, p):
        for tail in itertools.product(range(p), repeat=r - 1):
            f = [c0, *tail, 1]
            if _is_irreducible(f, p):
                return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # impossible


# ---------------------------------------------------------------------------


class FieldElement:
    """An element of GF(p^r), stored as r residues (constant term first)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- basic protocol ----------------------------------------------------

    def __repr__(self):
        if self.field.r == 1:
            return f"{self.coeffs[0]}"
        return f"{list(self.coeffs)}@GF({self.field.p}^{self.field.r})"

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.field.r, self.coeffs))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __lt__(self, other):
        """Lexicographic order on coefficient vectors (the canonical tie-break)."""
        self._check(other)
        return self.coeffs < other.coeffs

    def __le__(self, other):
        self._check(other)
        return self.coeffs <= other.coeffs

    def __bool__(self):
        return any(self.coeffs)

    def _check(self, other):
        if self.field is not other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs))
        )

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def inverse(self):
        return self.field._inv(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field.from_int(other) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- conveniences --------------------------------------------------------

    def lift(self) -> tuple:
        """The coefficient vector as plain integers."""
        return self.coeffs

    def lift_int(self) -> int:
        """The element as an integer; requires it to lie in the prime subfield."""
        if any(self.coeffs[1:]):
            raise ValueError("element is not in the prime subfield")
        return self.coeffs[0]

    def is_square(self) -> bool:
        q = self.field.order
        if not self:
            return True
        if self.field.p == 2:
            return True
        return self ** ((q - 1) // 2) == self.field.one


class Field:
    """GF(p^r) with a fixed monic irreducible modulus (degree r)."""

    __slots__ = (
        "p",
        "r",
        "modulus",
        "order",
        "zero",
        "one",
        "_red_table",
        "_frob_tables",
        "_nonresidue",
    )

    def __init__(self, p, r, modulus):
        self.p = p
        self.r = r
        self.modulus = modulus
        self.order = p**r
        self.zero = FieldElement(self, (0,) * r)
        one = [0] * r
        one[0] = 1
        self.one = FieldElement(self, tuple(one))
        # x^(r+i) mod modulus for i = 0..r-2, to reduce schoolbook products
        self._red_table = []
        cur = [(-c) % p for c in modulus[:-1]]  # x^r mod m
        for _ in range(max(0, r - 1)):
            self._red_table.append(tuple(cur))
            cur = [0] + cur
            lead = cur.pop()  # coefficient of x^r
            if lead:
                cur = [(c - lead * m) % p for c, m in zip(cur, modulus[:-1])]
        self._frob_tables = {}
        self._nonresidue = None

    def __repr__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"

    def __hash__(self):
        return hash((self.p, self.r))

    def __eq__(self, other):
        return self is other

    # -- construction ----------------------------------------------------

    def from_int(self, n: int) -> FieldElement:
        coeffs = [0] * self.r
        coeffs[0] = n % self.p
        return FieldElement(self, tuple(coeffs))

    def from_coeffs(self, seq) -> FieldElement:
        seq = list(seq)
        if len(seq) > self.r:
            raise ValueError(f"too many coefficients for degree-{self.r} field")
        seq += [0] * (self.r - len(seq))
        return FieldElement(self, tuple(c % self.p for c in seq))

    def elements(self):
        """All field elements in ascending lexicographic order."""
        for tup in itertools.product(range(self.p), repeat=self.r):
            yield FieldElement(self, tup)

    def generator_x(self) -> FieldElement:
        """The residue of x (a root of the modulus), for r > 1."""
        return self.from_coeffs([0, 1])

    # -- core arithmetic ---------------------------------------------------

    def _mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p, r = self.p, self.r
        if r == 1:
            return FieldElement(self, (a.coeffs[0] * b.coeffs[0] % p,))
        ac, bc = a.coeffs, b.coeffs
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(ac):
            if x:
                for j, y in enumerate(bc):
                    prod[i + j] += x * y
        out = [c % p for c in prod[:r]]
        for i, red in enumerate(self._red_table):
            c = prod[r + i] % p
            if c:
                for k in range(r):
                    out[k] = (out[k] + c * red[k]) % p
        return FieldElement(self, tuple(out))

    def _inv(self, a: FieldElement) -> FieldElement:
        if not a:
            raise DivisionByZero(f"inverse of 0 in {self}")
        p = self.p
        if self.r == 1:
            return FieldElement(self, (pow(a.coeffs[0], -1, p),))
        # extended Euclid in GF(p)[x] against the modulus
        r0, r1 = list(self.modulus), _ptrim(list(a.coeffs))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q = []
            rem = list(r0)
            inv_lead = pow(r1[-1], -1, p)
            while len(rem) >= len(r1) and rem:
                c = rem[-1] * inv_lead % p
                shift = len(rem) - len(r1)
                q_ext = [0] * shift + [c]
                q = [
                    (x + y) % p
                    for x, y in itertools.zip_longest(q, q_ext, fillvalue=0)
                ]
                for i, gc in enumerate(r1):
                    rem[shift + i] = (rem[shift + i] - c * gc) % p
                _ptrim(rem)
            r0, r1 = r1, rem
            qs1 = _pmul(q, s1, p)
            new_s = [
                (x - y) % p for x, y in itertools.zip_longest(s0, qs1, fillvalue=0)
            ]
            s0, s1 = s1, _ptrim(new_s)
        # r0 = gcd (a unit since modulus is irreducible); normalize
        c = pow(r0[0], -1, p)
        inv = [x * c % p for x in s0]
        inv += [0] * (self.r - len(inv))
        return FieldElement(self, tuple(inv[: self.r]))

    # -- Frobenius ---------------------------------------------------------

    def _frob_table(self, k: int):
        k %= self.r
        tbl = self._frob_tables.get(k)
        if tbl is None:
            p, r = self.p, self.r
            tbl = []
            for i in range(r):
                img = _ppow_x(i * p**k, list(self.modulus), p) if i else [1]
                img += [0] * (r - len(img))
                tbl.append(tuple(img))
            self._frob_tables[k] = tbl
        return tbl

    def frobenius(self, a: FieldElement, k: int = 1) -> FieldElement:
        """a ** (p**k); k may be any integer (taken mod r)."""
        if self.r == 1:
            return a
        k %= self.r
        if k == 0:
            return a
        tbl = self._frob_table(k)
        p, r = self.p, self.r
        out = [0] * r
        for i, c in enumerate(a.coeffs):
            if c:
                row = tbl[i]
                for j in range(r):
                    out[j] = (out[j] + c * row[j]) % p
        return FieldElement(self, tuple(out))

    def least_nonresidue(self) -> FieldElement:
        """Lexicographically least quadratic non-residue (p odd)."""
        if self._nonresidue is None:
            if self.p == 2:
                raise ValueError("every element is a square in characteristic 2")
            for el in self.elements():
                if el and not el.is_square():
                    self._nonresidue = el
                    break
        return self._nonresidue


@lru_cache(maxsize=None)
def _field_singleton(p: int, r: int) -> Field:
    return Field(p, r, _least_irreducible(p, r))


def field_create(p: int, r: int = 1) -> Field:
    """The canonical GF(p^r).  Cached, so field objects are singletons."""
    if type(p) is not int or type(r) is not int or r < 1:
        raise ValueError("p and r must be positive integers")
    if p > P_MAX or r > R_MAX:
        raise BoundExceeded(f"caps are p <= {P_MAX}, r <= {R_MAX}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return _field_singleton(p, r)


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch add/sub/mul/div by name (mostly a convenience for the CLI)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def sqrt(a: FieldElement):
    """Both square roots of `a`, or None if `a` is a non-square.

    Roots come back lexicographically-least first; sqrt(0) = (0, 0).
    """
    field = a.field
    q = field.order
    if not a:
        return (field.zero, field.zero)
    if field.p == 2:
        s = a ** (q // 2)
        return (s, s)
    if a ** ((q - 1) // 2) != field.one:
        return None
    if q <= _EXHAUSTIVE_SQRT_MAX:
        for el in field.elements():
            if el * el == a:
                return (el, -el) if el < -el else (-el, el)
        raise AssertionError("euler criterion said square")
    s = _tonelli_shanks(a)
    t = -s
    return (s, t) if s < t else (t, s)


def _tonelli_shanks(a: FieldElement) -> FieldElement:
    field = a.field
    q = field.order
    m, s = q - 1, 0
    while m % 2 == 0:
        m //= 2
        s += 1
    z = field.least_nonresidue()
    c = z**m
    x = a ** ((m + 1) // 2)
    t = a**m
    while t != field.one:
        # find least i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != field.one:
            t2 = t2 * t2
            i += 1
        b = c ** (2 ** (s - i - 1))
        x = x * b
        c = b * b
        t = t * c
        s = i
    return x


def frobenius(a: FieldElement) -> FieldElement:
    """The field-level Frobenius a -> a**p."""
    return a.field.frobenius(a, 1)
