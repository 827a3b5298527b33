"""Free-group words stored run-length as ``(generator index, exponent)`` pairs.

Exponents are Python ints, so ``x**(3**40)`` is a single run and never gets
flattened.  All functions are pure; :class:`Word` is immutable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError

Run = tuple[int, int]


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise InputError("alphabet needs at least one generator")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate generator names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise InputError(f"invalid generator name {name!r}")

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown generator {name!r}; alphabet is {self.names}") from None

    def gen(self, name: str) -> "Word":
        return Word(((self.index(name), 1),))

    def gens(self) -> list["Word"]:
        return [Word(((i, 1),)) for i in range(self.rank)]

    def parse(self, text: str) -> "Word":
        return parse_word(text, self)

    def format(self, w: "Word") -> str:
        return format_word(w, self)


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  Construct through :func:`reduce` unless the
    runs are already merged and nonzero."""

    letters: tuple[Run, ...] = ()

    def __len__(self) -> int:
        """Number of runs, not letters; see :attr:`length`."""
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        return Word(_merge(list(self.letters), other.letters))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0 or not self.letters:
            return IDENTITY
        if len(self.letters) == 1:
            g, e = self.letters[0]
            return Word(((g, e * n),))
        result, base = IDENTITY, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exponent_sums(self, rank: int) -> list[int]:
        sums = [0] * rank
        for g, e in self.letters:
            sums[g] += e
        return sums

    def max_index(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def flat(self) -> list[tuple[int, int]]:
        """Letter-by-letter expansion as ``(index, ±1)``; only for short words."""
        out = []
        for g, e in self.letters:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Apply the endomorphism ``x_i -> images[i]``."""
        acc: list[Run] = []
        for g, e in self.letters:
            img = images[g]
            _merge(acc, (img ** e).letters)
        return Word(tuple(acc))


IDENTITY = Word(())


def _merge(acc: list[Run], tail: Iterable[Run]) -> tuple[Run, ...]:
    for g, e in tail:
        if acc and acc[-1][0] == g:
            s = acc[-1][1] + e
            if s:
                acc[-1] = (g, s)
            else:
                acc.pop()
        elif e:
            acc.append((g, e))
    return tuple(acc)


def reduce(raw: Iterable[Sequence[int]], rank: int | None = None) -> Word:
    """Freely reduce a raw sequence of ``(index, exponent)`` pairs."""
    acc: list[Run] = []
    for item in raw:
        g, e = int(item[0]), int(item[1])
        if g < 0 or (rank is not None and g >= rank):
            raise InputError(f"generator index {g} out of range for rank {rank}")
        _merge(acc, ((g, e),))
    return Word(tuple(acc))


def gen(i: int, e: int = 1) -> Word:
    return Word(((i, e),)) if e else IDENTITY


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def conjugate(u: Word, v: Word) -> Word:
    """``u^v = v^-1 u v``."""
    return v.inverse() * u * v


def left_normed(items: Sequence[Word]) -> Word:
    """``[a1, a2, ..., ak] = [[a1, ..., a(k-1)], ak]``."""
    if len(items) < 2:
        raise InputError("left-normed commutator needs at least two entries")
    acc = items[0]
    for w in items[1:]:
        acc = commutator(acc, w)
    return acc


def cyclic_reduce(w: Word) -> Word:
    """Strip inverse pairs from the two ends of ``w`` (a conjugate of ``w``)."""
    runs = list(w.letters)
    while len(runs) >= 2 and runs[0][0] == runs[-1][0] and (runs[0][1] > 0) != (runs[-1][1] > 0):
        (g, a), (_, b) = runs[0], runs[-1]
        s = a + b
        if s == 0:
            runs = runs[1:-1]
        elif abs(a) > abs(b):
            runs = [(g, s)] + runs[1:-1]
        else:
            runs = runs[1:-1] + [(g, s)]
        # interior runs can only merge with the new end when one side vanished
        runs = list(_merge([], runs))
    return Word(tuple(runs))


def _prefix(runs: Sequence[Run], n_letters: int) -> Word:
    out = []
    for g, e in runs:
        if n_letters <= 0:
            break
        take = min(abs(e), n_letters)
        out.append((g, take if e > 0 else -take))
        n_letters -= take
    return Word(tuple(out))


def is_proper_power(w: Word) -> tuple[Word, int]:
    """Return ``(root, k)`` with ``cyclic_reduce(w) == root**k`` and ``k`` maximal.

    Works on runs: the cyclically reduced word is rotated so that its first
    and last runs use different generators, and the period is read off the
    cyclic run sequence.  Flat letter strings are never built.
    """
    if w.is_identity():
        raise InputError("the identity word has no root")
    c = cyclic_reduce(w)
    runs = c.letters
    if len(runs) == 1:
        g, e = runs[0]
        return gen(g, 1 if e > 0 else -1), abs(e)
    cyc = list(runs)
    if cyc[0][0] == cyc[-1][0]:
        # same generator and same sign (c is cyclically reduced): merge around
        cyc = [(cyc[0][0], cyc[0][1] + cyc[-1][1])] + cyc[1:-1]
    m = len(cyc)
    for p in range(1, m + 1):
        if m % p == 0 and all(cyc[i] == cyc[(i + p) % m] for i in range(m)):
            k = m // p
            break
    root = _prefix(runs, c.length // k)
    assert root ** k == c
    return root, k


# ---------------------------------------------------------------------------
# literal syntax

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[\^*()\[\],+-]))")


def _tokenize(text: str, alphabet: Alphabet) -> list[tuple[str, str]]:
    toks: list[tuple[str, str]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            toks.append(("num", m.group("num")))
        elif m.group("id") is not None:
            ident = m.group("id")
            if ident in alphabet.names:
                toks.append(("id", ident))
            elif all(ch in alphabet.names for ch in ident):
                toks.extend(("id", ch) for ch in ident)
            else:
                raise InputError(f"unknown generator {ident!r} in {text!r}")
        else:
            toks.append(("op", m.group("op")))
    return toks


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.toks = _tokenize(text, alphabet)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise InputError(f"expected {want} at token {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Word:
        if not self.toks:
            return IDENTITY
        w = self.expr()
        if self.i != len(self.toks):
            raise InputError(f"trailing input in {self.text!r}")
        return w

    def starts_atom(self) -> bool:
        kind, val = self.peek()
        return kind == "id" or (kind == "op" and val in "([") or (kind == "num" and val == "1")

    def expr(self) -> Word:
        w = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                w = w * self.factor()
            elif self.starts_atom():
                w = w * self.factor()
            else:
                return w

    def factor(self) -> Word:
        w = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            kind, val = self.peek()
            if kind == "num" or (kind == "op" and val in "+-"):
                w = w ** self.signed_int()
            elif kind == "op" and val == "(" and self._paren_int():
                self.take()
                n = self.signed_int()
                self.take("op", ")")
                w = w ** n
            else:
                w = conjugate(w, self.atom())
        return w

    def _paren_int(self) -> bool:
        j = self.i + 1
        if j < len(self.toks) and self.toks[j] in (("op", "-"), ("op", "+")):
            j += 1
        return j + 1 < len(self.toks) and self.toks[j][0] == "num" and self.toks[j + 1] == ("op", ")")

    def signed_int(self) -> int:
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        return sign * int(self.take("num")[1])

    def atom(self) -> Word:
        kind, val = self.peek()
        if kind == "id":
            self.take()
            return self.alphabet.gen(val)
        if kind == "num" and val == "1":
            self.take()
            return IDENTITY
        if (kind, val) == ("op", "("):
            self.take()
            w = self.expr()
            self.take("op", ")")
            return w
        if (kind, val) == ("op", "["):
            self.take()
            items = [self.expr()]
            while self.peek() == ("op", ","):
                self.take()
                items.append(self.expr())
            self.take("op", "]")
            return left_normed(items)
        raise InputError(f"expected a generator, '(' or '[' at token {self.i} in {self.text!r}")


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a word literal such as ``[a, a^b]^(a^3^b * b^-1)``.

    ``^`` is left-associative; an integer exponent is a power and a word
    exponent is conjugation.  Products are ``*`` or juxtaposition and
    ``[u, v, w]`` is left-normed.
    """
    return _Parser(text, alphabet).parse()


def format_word(w: Word, alphabet: Alphabet | None = None) -> str:
    if w.is_identity():
        return "1"
    parts = []
    for g, e in w.letters:
        name = alphabet.names[g] if alphabet else f"x{g}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if any(len(p) > 1 for p in parts) else "".join(parts)
