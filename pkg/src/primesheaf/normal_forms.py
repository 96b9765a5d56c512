"""Hermite and Smith normal forms over a Euclidean ring.

Matrices are lists of row lists.  Nothing here depends on numpy: entries may
be arbitrarily large integers or :class:`~primesheaf.ring_core.Poly` values.
"""
from __future__ import annotations

from .ring_core import _xgcd, gcd


def identity(ring, n):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def matmul(ring, A, B):
    if not A:
        return []
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = ring.zero
            for k, a in enumerate(row):
                if a:
                    acc = acc + a * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def determinant(ring, A):
    """Fraction-free determinant by Euclidean row reduction."""
    n = len(A)
    M = [list(r) for r in A]
    det = ring.one
    for c in range(n):
        while True:
            rows = [r for r in range(c, n) if M[r][c]]
            if not rows:
                return ring.zero
            piv = min(rows, key=lambda r: ring.norm(M[r][c]))
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = -det
            done = True
            for r in range(c + 1, n):
                if M[r][c]:
                    q = ring.divmod(M[r][c], M[c][c])[0]
                    M[r] = [x - q * y for x, y in zip(M[r], M[c])]
                    if M[r][c]:
                        done = False
            if done:
                break
        det = det * M[c][c]
    return det


def hermite_form(ring, rows, ncols):
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Returns ``(basis, pivots)``: the nonzero echelon rows, each with a
    canonical pivot and entries above every pivot reduced to canonical
    residues, and the pivot column of each row.  The result depends only on
    the lattice, not on the chosen generators.
    """
    M = [list(r) for r in rows if any(r)]
    basis = []
    pivots = []
    norm, dm = ring.norm, ring.divmod
    for c in range(ncols):
        live, rest = [], []
        for r in M:
            (live if r[c] else rest).append(r)
        if not live:
            continue
        while len(live) > 1:
            head = min(live, key=lambda r: norm(r[c]))
            h = head[c]
            nxt = [head]
            for r in live:
                if r is head:
                    continue
                q = dm(r[c], h)[0]
                r = [x - q * y for x, y in zip(r, head)] if q else r
                if r[c]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        head = live[0]
        u = ring.normalizer(head[c])
        if u != ring.one:
            head = [x * u for x in head]
        basis.append(head)
        pivots.append(c)
        M = rest
    # reduce entries above each pivot
    for i in range(len(basis) - 1, -1, -1):
        c, piv = pivots[i], basis[i]
        for j in range(i):
            x = basis[j][c]
            if x:
                q = ring.divmod(x, piv[c])[0]
                if q:
                    basis[j] = [a - q * b for a, b in zip(basis[j], piv)]
    return basis, pivots


def reduce_vector(ring, vec, basis, pivots):
    """Canonical residue of ``vec`` modulo the lattice in Hermite form."""
    v = list(vec)
    dm = ring.divmod
    for row, c in zip(basis, pivots):
        x = v[c]
        if x:
            q = dm(x, row[c])[0]
            if q:
                for j in range(c, len(v)):
                    if row[j]:
                        v[j] = v[j] - q * row[j]
    return tuple(v)


def smith_normal_form(ring, A, ncols=None):
    """Smith normal form with transforms.

    Returns ``(D, U, V, Vinv)`` with ``U @ A @ V == D``; ``D`` is diagonal,
    its diagonal entries are canonical and form a divisibility chain, and
    ``U``, ``V`` are unimodular.  ``Vinv`` is the exact inverse of ``V``.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    D = [list(r) for r in A]
    U = identity(ring, m)
    V = identity(ring, n)
    Vi = identity(ring, n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def combine_rows(t, i):
        # unimodular 2x2 on rows t, i zeroing D[i][t]
        a, b = D[t][t], D[i][t]
        g, x, y = _xgcd(ring, a, b)
        a_, b_ = ring.divmod(a, g)[0], ring.divmod(b, g)[0]
        for M in (D, U):
            rt, ri = M[t], M[i]
            M[t] = [x * p + y * q for p, q in zip(rt, ri)]
            M[i] = [a_ * q - b_ * p for p, q in zip(rt, ri)]

    def combine_cols(t, j):
        # unimodular 2x2 on columns t, j zeroing D[t][j]
        a, b = D[t][t], D[t][j]
        g, x, y = _xgcd(ring, a, b)
        a_, b_ = ring.divmod(a, g)[0], ring.divmod(b, g)[0]
        for M in (D, V):
            for r in M:
                p, q = r[t], r[j]
                r[t] = x * p + y * q
                r[j] = a_ * q - b_ * p
        # inverse of [[x, -b_], [y, a_]] (det 1) is [[a_, b_], [-y, x]]
        rt, rj = Vi[t], Vi[j]
        Vi[t] = [a_ * p + b_ * q for p, q in zip(rt, rj)]
        Vi[j] = [x * q - y * p for p, q in zip(rt, rj)]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or ring.norm(D[i][j]) < ring.norm(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        while True:
            for i in range(t + 1, m):
                if D[i][t]:
                    q, r = ring.divmod(D[i][t], D[t][t])
                    if r:
                        combine_rows(t, i)
                    else:
                        add_row(i, t, q)
            for j in range(t + 1, n):
                if D[t][j]:
                    q, r = ring.divmod(D[t][j], D[t][t])
                    if r:
                        combine_cols(t, j)
                    else:
                        for M in (D, V):
                            for row in M:
                                row[j] = row[j] - q * row[t]
                        Vi[t] = [a + q * b for a, b in zip(Vi[t], Vi[j])]
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            piv = D[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] and ring.divmod(D[i][j], piv)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_t += row_bad, then repeat the clearing
            add_row(t, bad, -ring.one)
        u = ring.normalizer(D[t][t])
        if u != ring.one:
            D[t] = [x * u for x in D[t]]
            U[t] = [x * u for x in U[t]]
    return D, U, V, Vi


def diagonal(ring, D, ncols):
    """Diagonal of ``D`` padded with zeros to ``ncols`` entries."""
    out = []
    for j in range(ncols):
        out.append(D[j][j] if j < len(D) else ring.zero)
    return out


def is_unimodular(ring, A) -> bool:
    return ring.is_unit(determinant(ring, A))


def chain_ok(ring, diag) -> bool:
    vals = [ring.canonical(x) for x in diag]
    for a, b in zip(vals, vals[1:]):
        if not a:
            if b:
                return False
        elif b and ring.divmod(b, a)[1]:
            return False
    return True


def lattice_gcd(ring, values):
    g = ring.zero
    for v in values:
        g = gcd(ring, g, v)
    return g
