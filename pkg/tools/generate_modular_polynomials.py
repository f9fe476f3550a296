#!/usr/bin/env python3
"""Generate classical modular polynomials for small prime levels.

Method: exact integer q-expansion arithmetic, no floating point and no
table lookups.

    j(q) = E4(q)^3 / Delta(q)

with E4 = 1 + 240 sum sigma_3(n) q^n and Delta = q prod (1-q^n)^24 (the
eta product, expanded with the pentagonal number theorem).  For a prime l,
the l+1 functions j(q^l), j(zeta^i q^(1/l)) are the roots of Phi_l(X, j(q)).
Their power sums

    s_m(q) = j^m(q^l) + sum_i j^m(zeta^i q^(1/l))

are integer Laurent series: averaging over the l-th roots of unity just
picks every l-th coefficient of j^m (times l).  Each s_m is a level-one
modular function holomorphic away from the cusp, hence an integer polynomial
in j, recovered by stripping the principal part against powers of j; the
remaining positive-degree tail must vanish identically, which is asserted
coefficient by coefficient.  Newton's identities then produce the elementary
symmetric functions e_m as integer polynomials in j (every division by m is
asserted exact), and

    Phi_l(X, Y) = sum_m (-1)^m e_m(Y) X^(l+1-m).

Self-checks before writing: symmetry in (X, Y), degree l+1, and Kronecker's
congruence Phi_l = (X^l - Y)(X - Y^l) mod l.

Output: ../src/isogenion/data/modular_polynomials.txt with lines
"l i j c" (i <= j, zero coefficients omitted).
"""

import os
import sys

LEVELS = (2, 3, 5, 7)
N = 100  # q-precision: series carried to q^(N-1)


# ---------------------------------------------------------------------------
# dense nonnegative-exponent series helpers (lists, index = exponent)


def poly_mul(a, b, limit):
    out = [0] * limit
    for i, ca in enumerate(a):
        if ca:
            top = limit - i
            for j, cb in enumerate(b[:top]):
                if cb:
                    out[i + j] += ca * cb
    return out


def series_inverse(u, limit):
    assert u[0] == 1
    inv = [0] * limit
    inv[0] = 1
    for n in range(1, limit):
        acc = 0
        for k in range(1, n + 1):
            if k < len(u) and u[k]:
                acc += u[k] * inv[n - k]
        inv[n] = -acc
    return inv


def j_series(limit):
    """Coefficients a_n of j = 1/q + 744 + ... as dict {n: a_n}, n >= -1."""
    sigma3 = [0] * limit
    for d in range(1, limit):
        for m in range(d, limit, d):
            sigma3[m] += d**3
    e4 = [240 * sigma3[n] for n in range(limit)]
    e4[0] = 1
    # eta(q)/q^(1/24) by the pentagonal number theorem
    pent = [0] * limit
    k = 0
    while True:
        done = True
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e < limit:
                pent[e] += 1 if kk % 2 == 0 else -1
                done = False
        if done:
            break
        k += 1
    p2 = poly_mul(pent, pent, limit)
    p4 = poly_mul(p2, p2, limit)
    p8 = poly_mul(p4, p4, limit)
    p16 = poly_mul(p8, p8, limit)
    phi24 = poly_mul(p16, p8, limit)  # prod (1-q^n)^24
    num = poly_mul(poly_mul(e4, e4, limit), e4, limit)
    series = poly_mul(num, series_inverse(phi24, limit), limit)
    out = {n - 1: series[n] for n in range(limit) if series[n]}
    assert out[-1] == 1 and out[0] == 744 and out[1] == 196884
    assert out[2] == 21493760 and out[3] == 864299970
    return out


# ---------------------------------------------------------------------------
# sparse Laurent series as dicts {exponent: coefficient}


def laurent_mul(a, b, hi):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e <= hi:
                out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def j_powers(j, dmax):
    """j^d for d = 1..dmax; j^d is exact on exponents <= N-1-d.

    The coefficient of q^e in j^d involves j-coefficients up to e+(d-1),
    and j itself is only known to q^(N-2), hence the shrinking window.
    """
    pows = {1: dict(j)}
    for d in range(2, dmax + 1):
        pows[d] = laurent_mul(pows[d - 1], j, N - 1 - d)
    return pows


def power_sum(jpow_m, m, ell):
    """s_m as an integer Laurent series, exact on exponents <= (N-1-m)//ell."""
    hi = (N - 1 - m) // ell
    out = {}
    for e, c in jpow_m.items():
        if e % ell == 0 and e // ell <= hi:
            out[e // ell] = out.get(e // ell, 0) + ell * c
        if e * ell <= hi:
            out[e * ell] = out.get(e * ell, 0) + c
    return {e: c for e, c in out.items() if c}, hi


def reduce_to_j_polynomial(series, hi, jpows):
    """Write a level-one modular function as an integer polynomial in j.

    Strips the principal part against j^d and asserts that everything in
    degrees 1..hi of what remains is identically zero.
    """
    cur = dict(series)
    pole = -min(cur.keys(), default=0)
    coeffs = [0] * (max(pole, 0) + 1)
    for d in range(pole, 0, -1):
        c = cur.get(-d, 0)
        if c:
            coeffs[d] = c
            for e, jc in jpows[d].items():
                if e <= hi:
                    cur[e] = cur.get(e, 0) - c * jc
    coeffs[0] = cur.pop(0, 0)
    cur.pop(-0, None)
    bad = [e for e, c in cur.items() if c and -pole <= e <= hi]
    assert not bad, f"tail does not vanish at exponents {sorted(bad)[:5]}"
    assert hi >= 5, "not enough certification window"
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs  # polynomial in j, index = degree


def polyz_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


def polyz_add(a, b, sign=1):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for j, cb in enumerate(b):
        out[j] += sign * cb
    while out and out[-1] == 0:
        out.pop()
    return out


def modular_polynomial(ell, j):
    dmax = ell * (ell + 1)
    jpows = j_powers(j, dmax)
    p = [None]  # p[m] = s_m as polynomial in j
    for m in range(1, ell + 2):
        series, hi = power_sum(jpows[m], m, ell)
        p.append(reduce_to_j_polynomial(series, hi, jpows))
    e = [[1]]  # e[0] = 1
    for m in range(1, ell + 2):
        acc = []
        for i in range(1, m + 1):
            term = polyz_mul(e[m - i], p[i])
            acc = polyz_add(acc, term, sign=(-1) ** (i - 1))
        assert all(c % m == 0 for c in acc), f"Newton division by {m} not exact"
        em = [c // m for c in acc]
        assert len(em) - 1 <= ell + 1, f"e_{m} has j-degree {len(em) - 1}"
        e.append(em)
    # Phi(X, Y) = sum_m (-1)^m e_m(Y) X^(ell+1-m)
    coeffs = {}
    for m in range(0, ell + 2):
        for d, c in enumerate(e[m]):
            if c:
                coeffs[(ell + 1 - m, d)] = (-1) ** m * c
    _self_test(ell, coeffs)
    return coeffs


def _self_test(ell, coeffs):
    deg_x = max(i for i, _ in coeffs)
    deg_y = max(j for _, j in coeffs)
    assert deg_x == deg_y == ell + 1, (deg_x, deg_y)
    assert coeffs[(ell + 1, 0)] == 1  # monic in X
    for (i, j), c in coeffs.items():
        assert coeffs.get((j, i), 0) == c, f"asymmetric at {(i, j)}"
    # Kronecker congruence: Phi = (X^l - Y)(X - Y^l) mod l
    kron = {(ell + 1, 0): 1, (ell, ell): -1, (1, 1): -1, (0, ell + 1): 1}
    seen = set()
    for (i, j), c in coeffs.items():
        assert (c - kron.get((i, j), 0)) % ell == 0, (i, j, c)
        seen.add((i, j))
    for ij, c in kron.items():
        assert ij in seen or c % ell == 0


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out_path = os.path.join(
        here, "..", "src", "isogenion", "data", "modular_polynomials.txt"
    )
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    j = j_series(N)
    lines = []
    for ell in LEVELS:
        coeffs = modular_polynomial(ell, j)
        for (i, jj), c in sorted(coeffs.items()):
            if i <= jj:
                lines.append(f"{ell} {i} {jj} {c}")
        print(f"level {ell}: {sum(1 for (i, jj) in coeffs if i <= jj)} stored "
              f"coefficients", file=sys.stderr)
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out_path}", file=sys.stderr)


if __name__ == "__main__":
    main()
