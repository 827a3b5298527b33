"""Deciding whether ``Z^m`` with ``t`` acting as ``A`` is residually nilpotent
over ``Z[<t>]``, through the hypothesis on ``B = A - I``: no product of a
sub-multiset of eigenvalues of ``B`` equals ``±1``.

Two independent routes:

* exterior powers -- the eigenvalues of ``compound(B, k)`` are exactly the
  ``k``-subset products, so the hypothesis holds iff every
  ``det(compound(B, k) -+ I)`` is nonzero;
* norm sequences -- for Kronecker powers of a 2x2 matrix with a conjugate
  pair of irrational eigenvalues, a ``±1`` product forces a product of
  integer norms to be ``±1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from ..errors import InputError, ResourceLimitError
from .matrix import (
    IntMatrix,
    char_poly,
    compound,
    det,
    hnf_rows,
    identity,
    intmat,
    kernel_basis,
    lattice_contains,
    poly_divides,
    poly_eval_matrix,
    sublattice_index,
)

HOLDS = "ConditionHolds"
VIOLATION = "ViolationFound"

DEFAULT_EXTERIOR_LIMIT = 200
PAPER_U = ((0, 1), (1, 3))


def paper_matrix() -> IntMatrix:
    return intmat(PAPER_U)


@dataclass
class ResNilpVerdict:
    status: str
    route: str
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def kron_power(a: IntMatrix, n: int) -> IntMatrix:
    if n < 1:
        raise InputError("Kronecker power needs n >= 1")
    out = a
    for _ in range(n - 1):
        out = np.kron(out, a)
    return out


def exterior_power(b: IntMatrix, k: int, size_limit: int | None = DEFAULT_EXTERIOR_LIMIT) -> IntMatrix:
    return compound(intmat(b), k, size_limit)


def lemma2_check_exterior(b: IntMatrix, size_limit: int = DEFAULT_EXTERIOR_LIMIT) -> ResNilpVerdict:
    """Exact check: ``det(compound(b, k) - s I) != 0`` for all ``k`` and ``s = ±1``."""
    b = intmat(b)
    n = b.shape[0]
    biggest = max(comb(n, k) for k in range(1, n + 1))
    if biggest > size_limit:
        raise ResourceLimitError(f"exterior powers of a {n}x{n} matrix reach size {biggest} > {size_limit}")
    dets = {}
    for k in range(1, n + 1):
        c = compound(b, k)
        eye = identity(c.shape[0])
        pair = []
        for sign in (1, -1):
            d = det(c - eye * sign)
            pair.append(d)
            if d == 0:
                dets[k] = pair
                return ResNilpVerdict(
                    VIOLATION,
                    "exterior",
                    witness={"k": k, "sign": sign, "certificate": f"det(L^{k}(B) - ({sign})I) = 0"},
                    details={"dets": dets},
                )
        dets[k] = pair
    return ResNilpVerdict(HOLDS, "exterior", details={"dets": dets})


# ---------------------------------------------------------------------------
# norm sequences


@dataclass
class NormSequences:
    max_index: int
    trace: int
    determinant: int
    t: list[int]
    M: list[int]
    N: list[int]

    def m(self, l: int) -> int:
        return self.M[l]

    def n(self, s: int) -> int:
        return self.N[s]


def _check_quadratic(base: IntMatrix) -> tuple[int, int]:
    base = intmat(base)
    if base.shape != (2, 2):
        raise InputError("norm sequences need a 2x2 base matrix")
    tr = int(base[0, 0] + base[1, 1])
    dt = det(base)
    return tr, dt


def norm_sequences(max_index: int, base: IntMatrix | None = None) -> NormSequences:
    """Traces ``t_s`` of ``base**s`` and the norms
    ``M_l = (a1^l - 1)(a2^l - 1)`` and ``N_s = (a1^s + 1)(a2^s + 1)``.

    Everything comes from ``t_s = tr * t_(s-1) - det * t_(s-2)``:
    ``M_l = det^l + 1 - t_l`` and ``N_s = det^s + 1 + t_s``.
    Index 0 is filled in for convenience; callers use ``1..max_index``.
    """
    if max_index < 1:
        raise InputError("max_index must be >= 1")
    tr, dt = _check_quadratic(paper_matrix() if base is None else base)
    t = [2, tr]
    for _ in range(2, max_index + 1):
        t.append(tr * t[-1] - dt * t[-2])
    M = [dt**l + 1 - t[l] for l in range(max_index + 1)]
    N = [dt**s + 1 + t[s] for s in range(max_index + 1)]
    return NormSequences(max_index, tr, dt, t[: max_index + 1], M, N)


def norm_report(seq: NormSequences) -> dict:
    """Divisibility and size facts about the norm sequences.

    ``checks`` must all hold; ``flags`` records the literal reading "N_s
    divides N_1 for odd s", which fails (e.g. ``N_3 = 36``) -- the true
    relation is the reverse divisibility, which is checked.
    """
    L = seq.max_index
    m1, n1 = seq.M[1], seq.N[1]
    rng = range(1, L + 1)
    checks = {
        "M_1 divides M_l": all(seq.M[l] % m1 == 0 for l in rng) if m1 else False,
        "N_1 divides N_s (odd s)": all(seq.N[s] % n1 == 0 for s in rng if s % 2) if n1 else False,
        "|M_l| >= 3": all(abs(seq.M[l]) >= 3 for l in rng),
        "|N_s| >= 3": all(abs(seq.N[s]) >= 3 for s in rng),
        "N_s > 1 (even s)": all(seq.N[s] > 1 for s in rng if s % 2 == 0),
    }
    literal = all(seq.N[s] != 0 and n1 % seq.N[s] == 0 for s in rng if s % 2)
    flags = []
    if not literal:
        first = next(s for s in rng if s % 2 and (seq.N[s] == 0 or n1 % seq.N[s]))
        flags.append(
            {
                "claim": "N_s divides N_1 for odd s",
                "holds": False,
                "counterexample": {"s": first, "N_s": seq.N[first], "N_1": n1},
                "note": "reverse divisibility N_1 | N_s is what holds and is checked",
            }
        )
    return {"checks": checks, "flags": flags, "M_1": m1, "N_1": n1}


def structured_product_check(
    m: int,
    max_index: int | None = None,
    base: IntMatrix | None = None,
    exterior_limit: int = DEFAULT_EXTERIOR_LIMIT,
) -> ResNilpVerdict:
    """Eigenvalue-product condition for ``base^{(x)m} - I`` via conjugate pairing.

    The eigenvalues of ``base^{(x)m}`` are ``±a^e`` (``a`` one of the two
    conjugate roots, ``e <= m``) plus rational ``±1`` when ``m`` is even.
    Pairing a ``±1`` sub-product with its conjugate gives a product of
    integers from ``{M_e, N_e : e <= m} U {0, 4}`` equal to ``1``; so
    ``|M_e|, |N_e| >= 2`` for all ``e <= m`` rules it out.  If that fails the
    exterior route decides instead.
    """
    base = paper_matrix() if base is None else intmat(base)
    tr, dt = _check_quadratic(base)
    if dt not in (1, -1):
        raise InputError("structured route needs det(base) = ±1")
    disc = tr * tr - 4 * dt
    if disc >= 0 and isqrt(disc) ** 2 == disc:
        raise InputError("characteristic polynomial is reducible; use the exterior route")
    L = m if max_index is None else max_index
    if L < m:
        raise InputError("max_index must be >= m")
    seq = norm_sequences(L, base)
    norms = {e: (seq.M[e], seq.N[e]) for e in range(1, m + 1)}
    if all(abs(a) >= 2 and abs(b) >= 2 for a, b in norms.values()):
        return ResNilpVerdict(HOLDS, "structured", details={"m": m, "norms": norms})
    k = kron_power(base, m)
    v = lemma2_check_exterior(k - identity(k.shape[0]), exterior_limit)
    v.details.update({"m": m, "norms": norms, "escalated": True})
    return v


def kron_char_poly(base: IntMatrix, m: int) -> list[int]:
    """Characteristic polynomial of ``base^{(x)m}`` for a 2x2 ``base``, built from
    eigenvalue pairing (``a1^i a2^(m-i)`` and its conjugate have sum
    ``det^i t_(m-2i)`` and product ``det^m``) instead of a determinant."""
    from .matrix import poly_mul

    seq = norm_sequences(max(m, 1), base)
    dt = seq.determinant
    out = [1]
    for i in range(0, (m + 1) // 2):
        quad = [dt**m, -(dt**i) * seq.t[m - 2 * i], 1]
        for _ in range(comb(m, i)):
            out = poly_mul(out, quad)
    if m % 2 == 0:
        lin = [-(dt ** (m // 2)), 1]
        for _ in range(comb(m, m // 2)):
            out = poly_mul(out, lin)
    return out


# ---------------------------------------------------------------------------
# lattices


def _image_lattice(b: IntMatrix) -> list[list[int]]:
    n = b.shape[0]
    return hnf_rows([[int(b[i, j]) for i in range(n)] for j in range(b.shape[1])], n)


def _apply_rows(b: IntMatrix, rows) -> list[list[int]]:
    return [[int(x) for x in b.dot(np.array(r, dtype=object))] for r in rows]


def stable_image_chain(b: IntMatrix, k_max: int) -> dict:
    """HNF bases of ``im(b^k)`` for ``k = 0..k_max`` and how they shrink.

    ``index[k]`` is ``[im(b^k) : im(b^(k+1))]`` (None when the rank drops).
    A unit part -- a nonzero sublattice ``L`` with ``b L = L`` -- lies in
    every term; a candidate from :func:`find_unit_invariant_sublattice` is
    reported only after checking it sits inside every computed term.
    """
    b = intmat(b)
    n = b.shape[0]
    if b.shape[1] != n:
        raise InputError("square matrix required")
    chain, power = [], identity(n)
    for _ in range(k_max + 1):
        chain.append(_image_lattice(power))
        power = power.dot(b)
    ranks = [len(c) for c in chain]
    index = [sublattice_index(chain[k], chain[k + 1]) for k in range(k_max)]
    covolume = []
    for c in chain:
        if len(c) == n:
            covolume.append(abs(det(intmat(c))))
        else:
            covolume.append(None)
    unit = find_unit_invariant_sublattice(b)
    candidate = None
    if unit is not None and all(all(lattice_contains(c, v) for v in unit.basis) for c in chain):
        candidate = unit.basis
    return {
        "bases": chain,
        "ranks": ranks,
        "index": index,
        "covolume": covolume,
        "reaches_zero": ranks[-1] == 0,
        "stable_rank": ranks[-1],
        "candidate_unit_part": candidate,
    }


@dataclass
class UnitLattice:
    factor: list[int]
    basis: list[list[int]]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def unit_divisors(p: list[int], degree_cap: int, max_candidates: int = 200_000) -> list[list[int]]:
    """Monic integer divisors ``g`` of ``p`` with ``g(0) = ±1`` and
    ``1 <= deg g <= degree_cap``, by Kronecker's interpolation search.
    Highest degree first."""
    from itertools import product

    from .matrix import poly_trim

    n = len(p) - 1

    def ev(q, a):
        return sum(c * a**i for i, c in enumerate(q))

    points = []
    for a in (1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8, 9, -9, 10, -10):
        if ev(p, a) != 0:
            points.append(a)
    found = []
    for k in range(min(degree_cap, n), 0, -1):
        pts = points[: k - 1]
        if len(pts) < k - 1:
            raise ResourceLimitError("not enough evaluation points for the divisor search")
        choices = [[s * d for d in _divisors(ev(p, a)) for s in (1, -1)] for a in pts]
        total = 1
        for c in choices:
            total *= len(c)
        if total * 2 > max_candidates:
            raise ResourceLimitError(f"divisor search at degree {k} needs {total * 2} candidates")
        for c0 in (1, -1):
            for vals in product(*choices):
                # solve sum_{j=1}^{k-1} c_j a^j = v - a^k - c0
                rows = [[Fraction(a**j) for j in range(1, k)] + [Fraction(v - a**k - c0)] for a, v in zip(pts, vals)]
                coeffs = _solve_square(rows)
                if coeffs is None or any(x.denominator != 1 for x in coeffs):
                    continue
                g = poly_trim([c0] + [int(x) for x in coeffs] + [1])
                if poly_divides(g, p) and g not in found:
                    found.append(g)
    return found


def _solve_square(rows):
    k = len(rows)
    M = [list(r) for r in rows]
    for c in range(k):
        p = next((i for i in range(c, k) if M[i][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        M[c] = [x / M[c][c] for x in M[c]]
        for i in range(k):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][k] for i in range(k)]


def is_unit_invariant(b: IntMatrix, basis) -> bool:
    """Certificate check ``b L = L`` by comparing Hermite normal forms."""
    if not basis:
        return False
    n = len(basis[0])
    return hnf_rows(_apply_rows(b, basis), n) == hnf_rows(basis, n)


def find_unit_invariant_sublattice(b: IntMatrix, degree_cap: int | None = None) -> UnitLattice | None:
    """Look for ``L != 0`` with ``b L = L`` as ``ker g(b)`` for a monic divisor
    ``g`` of the characteristic polynomial with ``g(0) = ±1``.

    Exhaustive only up to ``degree_cap``.  Every returned lattice has passed
    :func:`is_unit_invariant`.
    """
    b = intmat(b)
    n = b.shape[0]
    cap = n if degree_cap is None else degree_cap
    chi = char_poly(b)
    for g in unit_divisors(chi, cap):
        basis = kernel_basis(poly_eval_matrix(g, b))
        if basis and is_unit_invariant(b, basis):
            return UnitLattice(g, basis)
    return None
