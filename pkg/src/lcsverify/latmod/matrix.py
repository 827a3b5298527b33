"""Exact integer matrices: determinants, characteristic polynomials, Hermite and
Smith normal forms, integer kernels.

An ``IntMatrix`` is a 2-D numpy array of dtype ``object`` whose entries are
Python ints.  Polynomials are lists of ints in ascending order of degree.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ..errors import InputError, ResourceLimitError

IntMatrix = np.ndarray
Poly = list


def intmat(rows) -> IntMatrix:
    """Build an ``IntMatrix`` from nested sequences (or another array)."""
    a = np.asarray(rows, dtype=object)
    if a.ndim != 2 or 0 in a.shape:
        raise InputError(f"expected a nonempty 2-D integer array, got shape {a.shape}")
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        if isinstance(v, (bool, float)) or int(v) != v:
            raise InputError(f"matrix entry {v!r} is not an integer")
        out[idx] = int(v)
    return out


def identity(n: int) -> IntMatrix:
    m = np.empty((n, n), dtype=object)
    m.fill(0)
    for i in range(n):
        m[i, i] = 1
    return m


def zeros(r: int, c: int) -> IntMatrix:
    m = np.empty((r, c), dtype=object)
    m.fill(0)
    return m


def to_lists(a: IntMatrix) -> list[list[int]]:
    return [[int(v) for v in row] for row in a]


def companion(poly: Sequence[int]) -> IntMatrix:
    """Companion matrix of a monic polynomial given ascending."""
    if poly[-1] != 1:
        raise InputError("companion matrix needs a monic polynomial")
    n = len(poly) - 1
    m = zeros(n, n)
    for i in range(1, n):
        m[i, i - 1] = 1
    for i in range(n):
        m[i, n - 1] = -poly[i]
    return m


def _square(a: IntMatrix):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"square matrix required, got shape {a.shape}")


def det(a: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    _square(a)
    n = a.shape[0]
    m = a.copy()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k, k] == 0:
            nz = [i for i in range(k + 1, n) if m[i, k] != 0]
            if not nz:
                return 0
            i = nz[0]
            m[[k, i]] = m[[i, k]]
            sign = -sign
        piv = m[k, k]
        sub = m[k + 1:, k + 1:] * piv - np.multiply.outer(m[k + 1:, k], m[k, k + 1:])
        m[k + 1:, k + 1:] = sub // prev
        m[k + 1:, k] = 0
        prev = piv
    return sign * int(m[n - 1, n - 1])


def char_poly(a: IntMatrix) -> Poly:
    """``det(x I - a)`` by Berkowitz's division-free algorithm, ascending."""
    _square(a)
    n = a.shape[0]
    # cp of the trailing principal submatrix, descending coefficients
    cp = [1, -a[n - 1, n - 1]]
    for k in range(n - 2, -1, -1):
        sub = a[k + 1:, k + 1:]
        R = a[k, k + 1:]
        C = a[k + 1:, k]
        size = n - k
        col = [1, -a[k, k]]
        v = C
        for _ in range(size - 1):
            col.append(-R.dot(v))
            v = sub.dot(v)
        # Toeplitz (size+1) x size times cp (length size)
        new = []
        for i in range(size + 1):
            s = 0
            for j in range(max(0, i - len(col) + 1), min(i, size - 1) + 1):
                s += col[i - j] * cp[j]
            new.append(s)
        cp = new
    return [int(c) for c in reversed(cp)]


def poly_eval_matrix(p: Poly, a: IntMatrix) -> IntMatrix:
    n = a.shape[0]
    acc = zeros(n, n)
    for c in reversed(p):
        acc = acc.dot(a) + identity(n) * c
    return acc


def poly_trim(p: Poly) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: Poly, q: Poly) -> Poly:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Division by a monic ``g`` over the integers."""
    g = poly_trim(g)
    if g[-1] != 1:
        raise InputError("divisor must be monic")
    r = list(p)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [0], poly_trim(r)
    q = [0] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                r[i - dg + j] -= c * g[j]
    return poly_trim(q), poly_trim(r[:dg] or [0])


def poly_divides(g: Poly, p: Poly) -> bool:
    return poly_divmod(p, g)[1] == [0]


def poly_str(p: Poly, var: str = "x") -> str:
    terms = []
    for i, c in enumerate(p):
        if c:
            mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# ---------------------------------------------------------------------------
# normal forms


def hnf_rows(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows: echelon, positive pivots, entries above each
    pivot reduced into ``[0, pivot)``.
    """
    rows = [list(map(int, v)) for v in vectors]
    for v in rows:
        if len(v) != dim:
            raise InputError("vector length does not match the ambient dimension")
    basis: list[list[int]] = []
    r0 = 0
    for col in range(dim):
        pivot_rows = [i for i in range(r0, len(rows)) if rows[i][col] != 0]
        if not pivot_rows:
            continue
        while True:
            pivot_rows = [i for i in range(r0, len(rows)) if rows[i][col] != 0]
            best = min(pivot_rows, key=lambda i: abs(rows[i][col]))
            rows[r0], rows[best] = rows[best], rows[r0]
            done = True
            for i in range(r0 + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[r0][col]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r0])]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if rows[r0][col] < 0:
            rows[r0] = [-x for x in rows[r0]]
        r0 += 1
    basis = [r for r in rows[:r0]]
    # reduce above pivots
    for k, row in enumerate(basis):
        col = next(j for j, x in enumerate(row) if x)
        p = row[col]
        for i in range(k):
            q = basis[i][col] // p
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], row)]
    return basis


def smith_normal_form(a: IntMatrix) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Return ``(d, P, Q)`` with ``P @ a @ Q`` diagonal with entries ``d``.

    ``d`` has length ``min(rows, cols)``, is nonnegative, and satisfies
    ``d[i] | d[i+1]`` (zeros last).  ``P`` and ``Q`` are unimodular; the
    factorization is checked before returning.
    """
    a = intmat(a)
    m, n = a.shape
    A = to_lists(a)
    P = to_lists(identity(m))
    Q = to_lists(identity(n))

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        P[dst] = [x + c * y for x, y in zip(P[dst], P[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in Q:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // piv))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // piv))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = [i for i in range(t + 1, m) if any(A[i][j] % piv for j in range(t + 1, n))]
            if bad:
                add_row(bad[0], t, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            P[t] = [-x for x in P[t]]
    d = [A[i][i] for i in range(min(m, n))]
    Pm, Qm = intmat(P), intmat(Q)
    D = Pm.dot(a).dot(Qm)
    expect = zeros(m, n)
    for i, v in enumerate(d):
        expect[i, i] = v
    assert np.array_equal(D, expect), "Smith transforms failed verification"
    assert abs(det(Pm)) == 1 and abs(det(Qm)) == 1, "Smith transforms are not unimodular"
    return d, Pm, Qm


def invariant_factors(a: IntMatrix) -> list[int]:
    """Cokernel of ``a`` (as a map ``Z^cols -> Z^rows``) as an abelian-group
    signature: ``0`` for each free summand, then torsion orders ``> 1``."""
    d, _, _ = smith_normal_form(a)
    rows = a.shape[0]
    full = list(d) + [0] * (rows - len(d))
    free = sum(1 for v in full if v == 0)
    return [0] * free + sorted(v for v in full if v > 1)


def kernel_basis(a: IntMatrix) -> list[list[int]]:
    """Saturated integer basis of ``{v : a v = 0}``."""
    d, _, Q = smith_normal_form(a)
    n = a.shape[1]
    idx = [j for j in range(n) if j >= len(d) or d[j] == 0]
    return hnf_rows([[int(Q[i, j]) for i in range(n)] for j in idx], n)


def solve_rational(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i basis_i == v`` (rows independent), else None."""
    k, n = len(basis), len(v)
    if k == 0:
        return [] if not any(v) else None
    # columns are basis vectors: solve M c = v with M n x k
    M = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    piv_cols, r = [], 0
    for c in range(k):
        p = next((i for i in range(r, n) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        M[r] = [x / M[r][c] for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][k] != 0 for i in range(r, n)):
        return None
    out = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        out[c] = M[i][k]
    return out


def lattice_contains(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    c = solve_rational(basis, v)
    return c is not None and all(x.denominator == 1 for x in c)


def sublattice_index(outer: Sequence[Sequence[int]], inner: Sequence[Sequence[int]]) -> int | None:
    """``[outer : inner]`` for same-rank lattices with ``inner`` inside ``outer``.

    Returns None if the ranks differ (infinite index).  Raises if ``inner`` is
    not contained in ``outer``.
    """
    if len(outer) != len(inner):
        return None
    if not outer:
        return 1
    coords = []
    for v in inner:
        c = solve_rational(outer, v)
        if c is None or any(x.denominator != 1 for x in c):
            raise InputError("inner lattice is not contained in the outer lattice")
        coords.append([int(x) for x in c])
    return abs(det(intmat(coords)))


def compound(b: IntMatrix, k: int, size_limit: int | None = None) -> IntMatrix:
    """``k``-th compound (exterior power) matrix: all ``k x k`` minors,
    rows and columns indexed by ``k``-subsets in lexicographic order."""
    _square(b)
    n = b.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"exterior degree {k} out of range 1..{n}")
    size = comb(n, k)
    if size_limit is not None and size > size_limit:
        raise ResourceLimitError(f"exterior power of size {size} exceeds the limit {size_limit}")
    subsets = list(combinations(range(n), k))
    out = zeros(size, size)
    for i, rs in enumerate(subsets):
        rows = b[list(rs)]
        for j, cs in enumerate(subsets):
            out[i, j] = det(rows[:, list(cs)]) if k > 1 else rows[0, cs[0]]
    return out
