"""Free-by-cyclic groups ``F_n x|_phi Z`` and their word problem.

Convention: ``t^-1 x t = phi(x)``.  An element is stored as ``(fiber, shift)``
meaning ``fiber * t**shift``, so

    (u, s) * (v, r) = (u * phi^-s(v), s + r).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InputError, ResourceLimitError
from .words import IDENTITY, Alphabet, Word, format_word, gen, parse_word

DEFAULT_PHI_CAP = 12


@dataclass(frozen=True)
class FreeAutomorphism:
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        object.__setattr__(self, "inverse_images", tuple(self.inverse_images))
        n = len(self.images)
        if n == 0 or len(self.inverse_images) != n:
            raise InputError("automorphism needs one image and one inverse image per generator")
        for w in self.images + self.inverse_images:
            if w.max_index() >= n:
                raise InputError("automorphism image uses a generator outside the fiber")
        for i in range(n):
            if self.inverse_images[i].substitute(self.images) != gen(i):
                raise InputError(f"phi(phi^-1(x{i})) != x{i}; inverse images are wrong")
            if self.images[i].substitute(self.inverse_images) != gen(i):
                raise InputError(f"phi^-1(phi(x{i})) != x{i}; inverse images are wrong")

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, w: Word) -> Word:
        return w.substitute(self.images)

    def inverse(self) -> "FreeAutomorphism":
        return FreeAutomorphism(self.inverse_images, self.images)

    @classmethod
    def from_images(cls, images: Sequence[Word], max_length: int = 8) -> "FreeAutomorphism":
        return cls(tuple(images), find_inverse_images(images, max_length))

    def abelianization(self) -> list[list[int]]:
        """Integer matrix whose column ``i`` is the exponent-sum vector of ``phi(x_i)``."""
        n = self.rank
        cols = [w.exponent_sums(n) for w in self.images]
        return [[cols[i][j] for i in range(n)] for j in range(n)]


def _reduced_words(rank: int, max_length: int):
    letters = [(g, s) for g in range(rank) for s in (1, -1)]
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for g, s in letters:
                if w and w[-1] == (g, -s):
                    continue
                nxt.append(w + ((g, s),))
        yield from nxt
        frontier = nxt


def find_inverse_images(images: Sequence[Word], max_length: int = 8) -> tuple[Word, ...]:
    """Search reduced words up to ``max_length`` letters for preimages of the generators."""
    from .words import reduce

    n = len(images)
    found: dict[int, Word] = {}
    for flat in _reduced_words(n, max_length):
        w = reduce(flat, n)
        img = w.substitute(images)
        if len(img.letters) == 1 and img.letters[0][1] == 1:
            i = img.letters[0][0]
            found.setdefault(i, w)
            if len(found) == n:
                return tuple(found[i] for i in range(n))
    missing = [i for i in range(n) if i not in found]
    raise InputError(
        f"no preimage of generator(s) {missing} among reduced words of length <= {max_length}; "
        "supply phi_inverse explicitly or raise the search length"
    )


@dataclass(frozen=True)
class FbcElement:
    fiber: Word = IDENTITY
    shift: int = 0

    def is_identity(self) -> bool:
        return self.shift == 0 and self.fiber.is_identity()


@dataclass
class FbcGroup:
    fiber_alphabet: Alphabet
    phi: FreeAutomorphism
    presentation_alphabet: Alphabet
    embedding: Mapping[str, FbcElement]
    phi_cap: int = DEFAULT_PHI_CAP
    name: str = "custom"
    identities: tuple = ()
    _memo: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        if self.fiber_alphabet.rank != self.phi.rank:
            raise InputError("fiber alphabet rank does not match the automorphism")
        for name in self.presentation_alphabet.names:
            if name not in self.embedding:
                raise InputError(f"presentation generator {name!r} has no embedding")
        for name, el in self.embedding.items():
            if el.fiber.max_index() >= self.fiber_alphabet.rank:
                raise InputError(f"embedding of {name!r} leaves the fiber alphabet")

    @property
    def rank(self) -> int:
        return self.phi.rank

    # -- phi powers -------------------------------------------------------

    def phi_power_image(self, i: int, k: int, cap: int | None = None) -> Word:
        """``phi^k(x_i)``, memoized per generator; ``|k|`` is capped."""
        cap = self.phi_cap if cap is None else cap
        if abs(k) > cap:
            raise ResourceLimitError(f"phi^{k} exceeds the power cap {cap}")
        if k == 0:
            return gen(i)
        key = (i, k)
        with self._lock:
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        step = self.phi.images if k > 0 else self.phi.inverse_images
        prev = [self.phi_power_image(j, k - 1 if k > 0 else k + 1, cap) for j in range(self.rank)]
        # phi^k(x_i) = phi^(k-1)(phi(x_i))
        result = step[i].substitute(prev)
        with self._lock:
            self._memo[key] = result
        return result

    def phi_power(self, w: Word, k: int) -> Word:
        if k == 0 or w.is_identity():
            return w
        imgs = [self.phi_power_image(j, k) for j in range(self.rank)]
        return w.substitute(imgs)

    # -- semidirect arithmetic --------------------------------------------

    def mul(self, p: FbcElement, q: FbcElement) -> FbcElement:
        return FbcElement(p.fiber * self.phi_power(q.fiber, -p.shift), p.shift + q.shift)

    def inv(self, p: FbcElement) -> FbcElement:
        return FbcElement(self.phi_power(p.fiber.inverse(), p.shift), -p.shift)

    def pow(self, p: FbcElement, e: int) -> FbcElement:
        if e < 0:
            p, e = self.inv(p), -e
        if p.shift == 0:
            return FbcElement(p.fiber ** e, 0)
        result, base = FbcElement(), p
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def normal_form(self, w: Word) -> FbcElement:
        if w.max_index() >= self.presentation_alphabet.rank:
            raise InputError("word is not over the presentation alphabet")
        names = self.presentation_alphabet.names
        acc = FbcElement()
        for g, e in w.letters:
            acc = self.mul(acc, self.pow(self.embedding[names[g]], e))
        return acc

    def parse(self, text: str) -> Word:
        return parse_word(text, self.presentation_alphabet)

    def verify_identity(self, lhs: Word, rhs: Word) -> "IdentityVerdict":
        """Decide ``lhs == rhs`` in the group.

        The witness carried on failure is the normal form of ``rhs^-1 * lhs``.
        """
        nf = self.normal_form(rhs.inverse() * lhs)
        return IdentityVerdict(nf.is_identity(), nf)

    def identity_suite(self, identities: Sequence[tuple[str, str, str]] | None = None) -> "IdentityReport":
        if identities is None:
            identities = self.identities
        rows = []
        for label, lhs, rhs in identities:
            l, r = self.parse(lhs), self.parse(rhs)
            v = self.verify_identity(l, r)
            rows.append(
                {
                    "name": label,
                    "lhs": lhs,
                    "rhs": rhs,
                    "equal": v.equal,
                    "lhs_normal_form": self.format_element(self.normal_form(l)),
                    "rhs_normal_form": self.format_element(self.normal_form(r)),
                    "difference": self.format_element(v.witness),
                }
            )
        return IdentityReport(rows)

    def format_element(self, p: FbcElement) -> str:
        return f"({format_word(p.fiber, self.fiber_alphabet)}, {p.shift})"

    # -- construction -----------------------------------------------------

    @classmethod
    def from_config(cls, doc: Mapping) -> "FbcGroup":
        """Build a group from a config mapping.

        Keys: ``fiber`` (list of names), ``phi`` (image literals),
        optional ``phi_inverse``, ``inverse_search_length``, ``presentation``
        (list of names), ``embedding`` (name -> ``{"fiber": literal,
        "shift": int}``), ``identities`` (list of ``[label, lhs, rhs]``).
        """
        try:
            fiber = Alphabet(tuple(doc["fiber"]))
            images = [parse_word(s, fiber) for s in doc["phi"]]
            if len(images) != fiber.rank:
                raise InputError("phi must list one image per fiber generator")
            if doc.get("phi_inverse") is not None:
                phi = FreeAutomorphism(tuple(images), tuple(parse_word(s, fiber) for s in doc["phi_inverse"]))
            else:
                phi = FreeAutomorphism.from_images(images, int(doc.get("inverse_search_length", 8)))
            pres = Alphabet(tuple(doc["presentation"]))
            emb = {}
            for name, spec in doc["embedding"].items():
                emb[name] = FbcElement(parse_word(spec.get("fiber", ""), fiber), int(spec.get("shift", 0)))
            ids = tuple((str(a), str(b), str(c)) for a, b, c in doc.get("identities", ()))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed group config: {exc!r}") from None
        return cls(
            fiber,
            phi,
            pres,
            emb,
            phi_cap=int(doc.get("phi_cap", DEFAULT_PHI_CAP)),
            name=str(doc.get("name", "custom")),
            identities=ids,
        )


@dataclass(frozen=True)
class IdentityVerdict:
    equal: bool
    witness: FbcElement


@dataclass
class IdentityReport:
    rows: list

    @property
    def passed(self) -> bool:
        return all(r["equal"] for r in self.rows)


PAPER_IDENTITIES = (
    ("defining relation", "a^(b^2)", "a * a^3^b"),
    ("cube of a", "a^3", "[a, b^2]^(b^-1)"),
    ("cube of a^b", "(a^b)^3", "[a, b^2]"),
    ("commutator with a^b", "[a^(b^2), a^b]", "[a, a^b]^(a^3^b)"),
    ("conjugated back", "[a^b, a]", "[a, a^b]^(a^3^b * b^-1)"),
    ("square of [a^b, a]", "[a^b, a]^2", "[a, a^b, a^3^b * b^-1]"),
)

PAPER_GROUP_CONFIG = {
    "name": "paper",
    "fiber": ["x", "y"],
    "phi": ["y", "x y^3"],
    "phi_inverse": ["y x^-3", "x"],
    "presentation": ["a", "b"],
    "embedding": {"a": {"fiber": "x", "shift": 0}, "b": {"fiber": "", "shift": 1}},
    "identities": [list(t) for t in PAPER_IDENTITIES],
}


def paper_group(phi_cap: int = DEFAULT_PHI_CAP) -> FbcGroup:
    """``<a, b | a^(b^2) = a a^(3b)>`` as ``F(x, y) x| Z`` with ``x -> y, y -> x y^3``."""
    return FbcGroup.from_config({**PAPER_GROUP_CONFIG, "phi_cap": phi_cap})


def relator(group: FbcGroup, identity_index: int = 0) -> Word:
    """``lhs * rhs^-1`` for one of the group's listed identities."""
    _, lhs, rhs = group.identities[identity_index]
    return group.parse(lhs) * group.parse(rhs).inverse()


__all__ = [
    "FreeAutomorphism",
    "FbcElement",
    "FbcGroup",
    "IdentityReport",
    "IdentityVerdict",
    "PAPER_IDENTITIES",
    "paper_group",
    "find_inverse_images",
    "relator",
]
