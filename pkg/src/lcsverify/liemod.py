"""Lyndon-Hall bases of free Lie rings and the matrices an integer matrix
induces on Lie powers and tensor powers.

A bracket is an int (a generator) or a pair ``(left, right)``.  Brackets are
evaluated inside the tensor algebra: degree-``n`` elements are dense vectors
of length ``r**n`` indexed by monomials in lexicographic order, which is the
order in which the standard bracketing of a Lyndon word ``w`` has ``w`` as its
smallest monomial, with coefficient 1.  That triangularity is what rewrites an
arbitrary Lie element in the basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import InputError, ResourceLimitError
from .latmod.lemma import kron_power
from .latmod.matrix import IntMatrix, identity, intmat

Bracket = Union[int, tuple]

DEFAULT_DEGREE_CAP = 8
DEFAULT_KRON_SIDE = 64


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_dimension(r: int, n: int) -> int:
    """Rank of the degree-``n`` part of the free Lie ring on ``r`` generators."""
    if r < 1 or n < 1:
        raise InputError("witt_dimension needs r >= 1 and n >= 1")
    total = sum(_mobius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def lyndon_words(r: int, n: int) -> list[tuple[int, ...]]:
    """Lyndon words of length exactly ``n`` over ``0..r-1``, lexicographic (Duval)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == r - 1:
            w.pop()
    return out


def _is_lyndon(w: tuple[int, ...]) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_bracketing(w: tuple[int, ...]) -> Bracket:
    if len(w) == 1:
        return w[0]
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return (standard_bracketing(w[:i]), standard_bracketing(w[i:]))
    raise AssertionError("unreachable: a proper suffix of length 1 is always Lyndon")


@dataclass(frozen=True)
class HallElement:
    tree: Bracket
    word: tuple[int, ...]
    canonical: bool = True

    @property
    def degree(self) -> int:
        return len(self.word)

    def format(self, names=None) -> str:
        names = names or "xyzuvw"

        def rec(t):
            if isinstance(t, int):
                return names[t]
            return f"[{rec(t[0])}, {rec(t[1])}]"

        return rec(self.tree)


def hall_basis(r: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> list[HallElement]:
    if r < 1 or n < 1:
        raise InputError("hall_basis needs r >= 1 and n >= 1")
    if n > degree_cap:
        raise ResourceLimitError(f"degree {n} above the Lie degree cap {degree_cap}")
    return [HallElement(standard_bracketing(w), w) for w in lyndon_words(r, n)]


def bracket_degree(t: Bracket) -> int:
    return 1 if isinstance(t, int) else bracket_degree(t[0]) + bracket_degree(t[1])


@lru_cache(maxsize=4096)
def _tensor_vector(t: Bracket, r: int) -> tuple:
    if isinstance(t, int):
        v = [0] * r
        v[t] = 1
        return tuple(v)
    a = np.array(_tensor_vector(t[0], r), dtype=object)
    b = np.array(_tensor_vector(t[1], r), dtype=object)
    return tuple(np.multiply.outer(a, b).ravel() - np.multiply.outer(b, a).ravel())


def tensor_vector(t: Bracket, r: int) -> np.ndarray:
    """The bracket as a homogeneous element of the tensor algebra."""
    return np.array(_tensor_vector(t, r), dtype=object)


def _word_index(w, r):
    idx = 0
    for i in w:
        idx = idx * r + i
    return idx


def hall_coordinates(v: np.ndarray, r: int, n: int) -> list[int]:
    """Coordinates of a degree-``n`` Lie element in :func:`hall_basis` order."""
    basis = hall_basis(r, n, degree_cap=max(n, DEFAULT_DEGREE_CAP))
    pos = {_word_index(h.word, r): k for k, h in enumerate(basis)}
    v = np.array(v, dtype=object).copy()
    coords = [0] * len(basis)
    while True:
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return coords
        i = int(nz[0])
        if i not in pos:
            raise InputError("vector is not a Lie element: its smallest monomial is not a Lyndon word")
        k = pos[i]
        c = v[i]
        coords[k] += c
        v = v - tensor_vector(basis[k].tree, r) * c


def _apply_tensor(a: IntMatrix, v: np.ndarray, r: int, n: int) -> np.ndarray:
    t = v.reshape((r,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(a, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


@dataclass
class LiePowerMatrix:
    degree: int
    dimension: int
    matrix: IntMatrix
    basis: list[HallElement]


def lie_power_matrix(a: IntMatrix, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> LiePowerMatrix:
    """Matrix of the action on ``L^n`` induced by ``x_i -> sum_j a[j, i] x_j``,
    in Hall-basis coordinates (column ``k`` = image of basis element ``k``)."""
    a = intmat(a)
    r = a.shape[0]
    if a.shape[1] != r:
        raise InputError("square matrix required")
    basis = hall_basis(r, n, degree_cap)
    cols = []
    for h in basis:
        img = _apply_tensor(a, tensor_vector(h.tree, r), r, n)
        cols.append(hall_coordinates(img, r, n))
    dim = len(basis)
    if dim != witt_dimension(r, n):
        raise AssertionError("Hall basis size disagrees with the Witt formula")
    mat = intmat([[cols[j][i] for j in range(dim)] for i in range(dim)]) if dim else identity(0)
    return LiePowerMatrix(n, dim, mat, basis)


def kronecker_power(a: IntMatrix, n: int, max_side: int = DEFAULT_KRON_SIDE) -> IntMatrix:
    a = intmat(a)
    if n < 1:
        raise InputError("Kronecker power needs n >= 1")
    side = a.shape[0] ** n
    if side > max_side:
        raise ResourceLimitError(f"Kronecker power of side {side} exceeds the limit {max_side}")
    return kron_power(a, n)
