"""Independent brute-force oracles: dense linear algebra over GF(p).

Nothing here touches the Gröbner engine.  Polynomials are flattened to
coefficient vectors over the monomials of bounded total degree and the
questions become linear systems.
"""

from __future__ import annotations

import itertools


def monomials_upto(nvars: int, deg: int) -> list[tuple]:
    out = []
    for d in range(deg + 1):
        for e in itertools.product(range(d + 1), repeat=nvars):
            if sum(e) == d:
                out.append(e)
    return out


def rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Row reduced echelon form and pivot columns."""
    A = [[x % p for x in r] for r in rows]
    if not A:
        return A, []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def solve_mod_p(cols: list[list[int]], b: list[int], p: int) -> list[int] | None:
    """Some x with sum x_j cols[j] = b, or None."""
    n = len(cols)
    m = len(b)
    aug = [[cols[j][i] for j in range(n)] + [b[i]] for i in range(m)]
    R, piv = rref_mod_p(aug, p)
    if n in piv:
        return None
    x = [0] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x


def nullspace_mod_p(cols: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {x : sum x_j cols[j] = 0}."""
    n = len(cols)
    if n == 0:
        return []
    m = len(cols[0])
    R, piv = rref_mod_p([[cols[j][i] for j in range(n)] for i in range(m)], p)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for row, c in zip(R, piv):
            x[c] = (-row[f]) % p
        basis.append(x)
    return basis


def coeff_vector(f, monos: list[tuple]) -> list[int]:
    d = dict(f.items())
    extra = set(d) - set(monos)
    if extra:
        raise ValueError("polynomial exceeds the monomial window")
    return [int(d.get(m, 0)) for m in monos]


def brute_member(f, gens, p: int, cof_deg: int):
    """Cofactors of degree <= cof_deg with f = sum h_i g_i, found by linear algebra."""
    R = f.ring
    n = R.nvars
    gdeg = max(g.total_degree() for g in gens)
    window = monomials_upto(n, max(cof_deg + gdeg, f.total_degree()))
    small = monomials_upto(n, cof_deg)
    cols, labels = [], []
    for i, g in enumerate(gens):
        for m in small:
            cols.append(coeff_vector(R.monomial(m) * g, window))
            labels.append((i, m))
    x = solve_mod_p(cols, coeff_vector(f, window), p)
    if x is None:
        return None
    cof = [R.zero() for _ in gens]
    for c, (i, m) in zip(x, labels):
        if c:
            cof[i] = cof[i] + R.monomial(m, c)
    return cof


def brute_kernel(rows, p: int, deg: int):
    """Basis of vectors v with entries of degree <= deg and rows . v = 0."""
    R = rows[0][0].ring
    n = R.nvars
    k = len(rows[0])
    small = monomials_upto(n, deg)
    edeg = max(e.total_degree() for r in rows for e in r if not e.is_zero()) if any(
        not e.is_zero() for r in rows for e in r) else 0
    window = monomials_upto(n, deg + edeg)
    cols, labels = [], []
    for j in range(k):
        for m in small:
            mono = R.monomial(m)
            col = []
            for r in rows:
                col += coeff_vector(r[j] * mono, window)
            cols.append(col)
            labels.append((j, m))
    out = []
    for x in nullspace_mod_p(cols, p):
        v = [R.zero() for _ in range(k)]
        for c, (j, m) in zip(x, labels):
            if c:
                v[j] = v[j] + R.monomial(m, c)
        out.append(v)
    return out
