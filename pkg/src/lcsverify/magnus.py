"""Truncated Magnus expansions over the integers.

A series over ``rank`` noncommuting variables, truncated above degree
``cap``, is stored as one dense block per degree: block ``d`` has ``rank**d``
entries, the monomial ``X_{i1}...X_{id}`` sitting at the base-``rank`` index
``i1 i2 ... id``.  Blocks are numpy arrays of dtype ``object`` holding Python
ints, so nothing ever overflows and no floats appear.

Degree-major order of monomials is the global position
``offset(d) + index``; this is the order used for leading terms.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InputError, PrecisionError
from .words import Word

DEFAULT_CAP = 7


def _zeros(n: int) -> np.ndarray:
    a = np.empty(n, dtype=object)
    a.fill(0)
    return a


@lru_cache(maxsize=None)
def _offsets(rank: int, cap: int) -> tuple[int, ...]:
    out, acc = [], 0
    for d in range(cap + 2):
        out.append(acc)
        acc += rank**d
    return tuple(out)


def _power_index(i: int, j: int, rank: int) -> int:
    """Index of ``X_i^j`` inside block ``j``."""
    return sum(i * rank**p for p in range(j))


def binomials(e: int, upto: int) -> list[int]:
    """``C(e, j)`` for ``j = 0..upto``; valid for negative ``e`` too."""
    out = [1]
    for j in range(1, upto + 1):
        out.append(out[-1] * (e - j + 1) // j)
    return out


@dataclass(frozen=True)
class AtLeast:
    """Weight sentinel: every coefficient up to ``bound - 1`` vanished."""

    bound: int

    def __ge__(self, n):
        return self.bound >= n

    def __gt__(self, n):
        return self.bound > n

    def __repr__(self):
        return f"AtLeast({self.bound})"


class TruncSeries:
    __slots__ = ("rank", "cap", "blocks", "_low_cache", "_zpow")

    def __init__(self, rank: int, cap: int, blocks: Sequence[np.ndarray]):
        if rank < 1 or cap < 0:
            raise InputError("series needs rank >= 1 and cap >= 0")
        if len(blocks) != cap + 1:
            raise InputError(f"expected {cap + 1} degree blocks, got {len(blocks)}")
        self.rank = rank
        self.cap = cap
        self.blocks = tuple(blocks)
        self._low_cache = None
        self._zpow = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int, cap: int) -> "TruncSeries":
        return cls(rank, cap, [_zeros(rank**d) for d in range(cap + 1)])

    @classmethod
    def one(cls, rank: int, cap: int) -> "TruncSeries":
        s = cls.zero(rank, cap)
        s.blocks[0][0] = 1
        return s

    @classmethod
    def from_dict(cls, rank: int, cap: int, coeffs: dict) -> "TruncSeries":
        """``coeffs`` maps monomials (tuples of indices) to ints."""
        s = cls.zero(rank, cap)
        for mono, c in coeffs.items():
            if len(mono) <= cap:
                idx = 0
                for i in mono:
                    idx = idx * rank + i
                s.blocks[len(mono)][idx] += c
        return s

    @classmethod
    def from_flat(cls, rank: int, cap: int, flat: np.ndarray) -> "TruncSeries":
        off = _offsets(rank, cap)
        return cls(rank, cap, [flat[off[d]:off[d + 1]].copy() for d in range(cap + 1)])

    def flat(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    # -- queries ------------------------------------------------------------

    def coeff(self, mono: Sequence[int]) -> int:
        if len(mono) > self.cap:
            raise PrecisionError(f"monomial of degree {len(mono)} beyond cap {self.cap}")
        idx = 0
        for i in mono:
            idx = idx * self.rank + i
        return self.blocks[len(mono)][idx]

    def items(self):
        """Nonzero ``(monomial, coefficient)`` pairs in degree-major lexicographic order."""
        for d, block in enumerate(self.blocks):
            for idx in np.flatnonzero(block):
                mono, k = [], int(idx)
                for _ in range(d):
                    k, digit = divmod(k, self.rank)
                    mono.append(digit)
                yield tuple(reversed(mono)), block[idx]

    def is_one(self) -> bool:
        return self.blocks[0][0] == 1 and not any(np.count_nonzero(b) for b in self.blocks[1:])

    def lowest_degree(self) -> int | None:
        """Smallest ``d >= 1`` with a nonzero degree-``d`` coefficient."""
        for d in range(1, self.cap + 1):
            if np.count_nonzero(self.blocks[d]):
                return d
        return None

    def leading(self) -> tuple[int, int] | None:
        """``(position, coefficient)`` of the first nonzero term of ``self - 1``."""
        off = _offsets(self.rank, self.cap)
        for d in range(1, self.cap + 1):
            nz = np.flatnonzero(self.blocks[d])
            if nz.size:
                i = int(nz[0])
                return off[d] + i, self.blocks[d][i]
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.cap == other.cap
            and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )

    __hash__ = None

    def __repr__(self):
        return f"TruncSeries(rank={self.rank}, cap={self.cap}, {format_series(self)})"

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "TruncSeries"):
        if self.rank != other.rank or self.cap != other.cap:
            raise InputError("series have different rank or cap")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.rank, self.cap, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.rank, self.cap, [a - b for a, b in zip(self.blocks, other.blocks)])

    def scale(self, c: int) -> "TruncSeries":
        return TruncSeries(self.rank, self.cap, [b * c for b in self.blocks])

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        A, B = self.blocks, other.blocks
        a0, b0 = A[0][0], B[0][0]
        la, lb = self._low(), other._low()
        out = [_zeros(1)]
        out[0][0] = a0 * b0
        for d in range(1, self.cap + 1):
            acc = B[d] * a0 if a0 else None
            if b0 and d >= la:
                acc = A[d] * b0 if acc is None else acc + A[d] * b0
            for i in range(la, d - lb + 1):
                term = np.multiply.outer(A[i], B[d - i]).ravel()
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else _zeros(self.rank**d))
        return TruncSeries(self.rank, self.cap, out)

    def _low(self) -> int:
        """Lowest degree ``>= 1`` with a nonzero block (``cap + 1`` if none)."""
        if self._low_cache is None:
            low = self.lowest_degree()
            self._low_cache = self.cap + 1 if low is None else low
        return self._low_cache

    def mul_power_of_generator(self, i: int, e: int) -> "TruncSeries":
        """Right-multiply by ``(1 + X_i)**e`` using strided block updates."""
        r, cap = self.rank, self.cap
        c = binomials(e, cap)
        out = []
        for d in range(cap + 1):
            res = self.blocks[d].copy()
            for j in range(1, d + 1):
                if c[j]:
                    src = self.blocks[d - j]
                    if np.count_nonzero(src):
                        res[_power_index(i, j, r):: r**j] += src * c[j]
            out.append(res)
        return TruncSeries(r, cap, out)

    def _unit_part(self) -> int:
        c0 = self.blocks[0][0]
        if c0 not in (1, -1):
            raise InputError("only series with constant term ±1 are invertible over the integers")
        return c0

    def _z_powers(self) -> list["TruncSeries"]:
        """``[z, z^2, ...]`` for ``self = ±(1 + z)``, up to the last nonzero power."""
        if self._zpow is None:
            c0 = self._unit_part()
            z = TruncSeries(self.rank, self.cap, [_zeros(1)] + [b * c0 for b in self.blocks[1:]])
            out = []
            if z._low() <= self.cap:
                p = z
                for _ in range(self.cap // z._low()):
                    out.append(p)
                    p = p * z
            self._zpow = out
        return self._zpow

    def inverse(self) -> "TruncSeries":
        """Inverse of a series with constant term ``±1``."""
        return self ** -1

    def __pow__(self, n: int) -> "TruncSeries":
        # (1 + z)^n = sum C(n, k) z^k, finite because z is nilpotent after truncation
        if self.blocks[0][0] not in (1, -1) and n >= 0:
            result, base = TruncSeries.one(self.rank, self.cap), self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        c0 = self._unit_part()
        zs = self._z_powers()
        coeffs = binomials(n, len(zs))
        blocks = [_zeros(1)] + [_zeros(self.rank**d) for d in range(1, self.cap + 1)]
        blocks[0][0] = 1
        for k, z in enumerate(zs, 1):
            if coeffs[k]:
                for d in range(z._low(), self.cap + 1):
                    blocks[d] = blocks[d] + z.blocks[d] * coeffs[k]
        if c0 == -1 and n % 2:
            blocks = [-b for b in blocks]
        return TruncSeries(self.rank, self.cap, blocks)

    def truncate(self, cap: int) -> "TruncSeries":
        if cap > self.cap:
            raise PrecisionError("cannot raise the cap of an already truncated series")
        return TruncSeries(self.rank, cap, self.blocks[: cap + 1])


def commutator(u: TruncSeries, v: TruncSeries) -> TruncSeries:
    return u.inverse() * v.inverse() * u * v


def expand(w: Word, rank: int, cap: int = DEFAULT_CAP) -> TruncSeries:
    """Magnus image of ``w``: ``x_i -> 1 + X_i``, truncated above degree ``cap``."""
    if cap < 1:
        raise InputError("cap must be at least 1")
    if w.max_index() >= rank:
        raise InputError(f"word uses a generator beyond rank {rank}")
    s = TruncSeries.one(rank, cap)
    for i, e in w.letters:
        s = s.mul_power_of_generator(i, e)
    return s


def weight(w: Word, rank: int, cap: int = DEFAULT_CAP) -> int | AtLeast:
    """Lowest degree with a nonzero coefficient in ``expand(w) - 1``.

    By Magnus's theorem ``w`` lies in ``gamma_d(F) \\ gamma_(d+1)(F)`` exactly
    when this is ``d``.
    """
    d = expand(w, rank, cap).lowest_degree()
    return AtLeast(cap + 1) if d is None else d


def is_in_gamma(w: Word, n: int, rank: int, cap: int = DEFAULT_CAP) -> bool:
    if n > cap + 1:
        raise PrecisionError(f"deciding gamma_{n} needs cap >= {n - 1}, have {cap}")
    wt = weight(w, rank, cap)
    return wt >= n


class SubstitutionMap:
    """The ring endomorphism ``X_i -> P_i`` (each ``P_i`` without constant term),
    materialized as a block-triangular integer matrix on flattened series."""

    def __init__(self, images: Sequence[TruncSeries]):
        if not images:
            raise InputError("need at least one image")
        rank, cap = images[0].rank, images[0].cap
        if len(images) != rank:
            raise InputError("need one image per variable")
        for p in images:
            if p.blocks[0][0] != 0:
                raise InputError("substituted series must have zero constant term")
        self.rank, self.cap = rank, cap
        off = _offsets(rank, cap)
        n = off[cap + 1]
        cols = [None] * n
        cols[0] = TruncSeries.one(rank, cap)
        # P_(i m) = P_i * P_m, filled degree by degree
        prev = [cols[0]]
        for d in range(1, cap + 1):
            cur = []
            for i in range(rank):
                for m in prev:
                    cur.append(images[i] * m)
            for idx, s in enumerate(cur):
                cols[off[d] + idx] = s
            prev = cur
        self.matrix = np.stack([c.flat() for c in cols], axis=1)

    def __call__(self, s: TruncSeries) -> TruncSeries:
        if s.rank != self.rank or s.cap != self.cap:
            raise InputError("series does not match the substitution's rank/cap")
        return TruncSeries.from_flat(self.rank, self.cap, self.matrix.dot(s.flat()))

    @classmethod
    def from_words(cls, images: Sequence[Word], cap: int = DEFAULT_CAP) -> "SubstitutionMap":
        rank = len(images)
        one = TruncSeries.one(rank, cap)
        return cls([expand(w, rank, cap) - one for w in images])


def substitute(s: TruncSeries, phi) -> TruncSeries:
    """Apply the series endomorphism induced by an automorphism (anything with ``.images``)."""
    if len(phi.images) != s.rank:
        raise InputError("automorphism rank does not match the series")
    return SubstitutionMap.from_words(phi.images, s.cap)(s)


def format_series(s: TruncSeries, names: Sequence[str] | None = None) -> str:
    """Deterministic text form, monomials in degree-major lexicographic order."""
    names = names or [f"X{i}" for i in range(s.rank)]
    parts = []
    for mono, c in s.items():
        m = "*".join(names[i] for i in mono)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(m)
        elif c == -1:
            parts.append("-" + m)
        else:
            parts.append(f"{c}*{m}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")
