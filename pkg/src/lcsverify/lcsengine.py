"""Finite lower central series terms of ``G = F x|_phi Z`` in Magnus coordinates.

For ``n >= 2`` the term ``gamma_n(G)`` lies in the fiber ``F`` (``G/F`` is
abelian), and it contains ``gamma_n(F)``, hence ``gamma_c(F)`` for ``n <= c``.
So ``W_n = gamma_n(G)`` is faithfully represented inside ``F / gamma_c(F)``,
which the Magnus map embeds into series truncated above degree ``c - 1``.
Membership in ``gamma_n(G)`` for ``n <= c`` is therefore decided exactly.

Subgroups are kept as sifted (echelon) generating sequences.  Two elements
whose ``series - 1`` start in the same degree add in that degree when
multiplied, so reducing a leading coefficient is integer row reduction; equal
leading positions are merged by gcd combination as in Hermite normal form.
A basis is closed when every commutator with a fiber generator, every image
under ``phi`` and ``phi^-1`` and every commutator of two basis elements sifts
to the identity -- those checks are kept as closure certificates.
"""
from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputError, PrecisionError, ResourceLimitError
from .fbc import FbcGroup
from .latmod.homology import mapping_torus_homology
from .latmod.matrix import intmat, invariant_factors, identity
from .liemod import hall_basis, witt_dimension
from .magnus import _offsets, SubstitutionMap, TruncSeries, commutator as series_commutator, expand, format_series, weight
from .words import Word, commutator, format_word, gen, left_normed

log = logging.getLogger(__name__)

DEFAULT_CLASS = 7
DEFAULT_MAX_ENTRIES = 10**7
PROVENANCE_MAX_LENGTH = 64


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass
class BasisElement:
    series: TruncSeries
    inverse: TruncSeries
    position: int
    coeff: int
    degree: int
    provenance: Word | None = None


def _element(s: TruncSeries, provenance: Word | None = None) -> BasisElement:
    pos, c = s.leading()
    inv = s.inverse()
    if c < 0:
        s, inv, c = inv, s, -c
        provenance = provenance.inverse() if provenance is not None else None
    return BasisElement(s, inv, pos, c, s.lowest_degree(), provenance)


def coefficient_at(s: TruncSeries, position: int) -> int:
    off = _offsets(s.rank, s.cap)
    d = bisect_right(off, position) - 1
    return s.blocks[d][position - off[d]]


class SiftedBasis:
    """Echelon generating sequence of a subgroup of ``F / gamma_(cap+1)(F)``."""

    def __init__(self, rank: int, cap: int):
        self.rank, self.cap = rank, cap
        self.elements: list[BasisElement] = []

    def __len__(self):
        return len(self.elements)

    def _slot(self, pos: int) -> int | None:
        for k, e in enumerate(self.elements):
            if e.position == pos:
                return k
            if e.position > pos:
                return None
        return None

    def sift(self, h: TruncSeries, record: bool = False):
        """Peel basis powers off the left of ``h``.

        Returns ``(remainder, exponents)`` where ``h = prod g_k**e_k * remainder``
        with the product in basis order; the remainder is the identity iff
        ``h`` lies in the subgroup.
        """
        exps = [0] * len(self.elements) if record else None
        start = 0
        while True:
            lead = h.leading()
            if lead is None:
                return h, exps
            pos, c = lead
            k = start
            while k < len(self.elements) and self.elements[k].position < pos:
                k += 1
            if k == len(self.elements) or self.elements[k].position != pos:
                return h, exps
            g = self.elements[k]
            q, r = divmod(c, g.coeff)
            if r:
                return h, exps
            h = (g.inverse**q if q > 0 else g.series ** (-q)) * h
            if record:
                exps[k] += q
            start = k + 1

    def contains(self, h: TruncSeries) -> bool:
        return self.sift(h)[0].is_one()

    def insert(self, h: TruncSeries, provenance: Word | None = None) -> bool:
        """Add ``h`` to the generated subgroup; True if the basis changed."""
        changed = False
        queue = [(h, provenance)]
        while queue:
            s, prov = queue.pop()
            rem, _ = self.sift(s)
            if rem.is_one():
                continue
            if rem is not s:
                prov = None
            new = _element(rem, prov)
            k = self._slot(new.position)
            changed = True
            if k is None:
                self.elements.append(new)
                self.elements.sort(key=lambda e: e.position)
                continue
            old = self.elements[k]
            d, u, v = _xgcd(old.coeff, new.coeff)
            merged = _element((old.series**u) * (new.series**v))
            assert merged.position == old.position and merged.coeff == d
            self.elements[k] = merged
            queue.append((old.series, old.provenance))
            queue.append((new.series, new.provenance))
        if changed:
            self.reduce_all()
        return changed

    def reduce_all(self):
        """Bring every element's coefficient at each later pivot into
        ``[0, pivot coefficient)`` by right-multiplying with that pivot's
        element; keeps coefficients from growing across closure rounds."""
        els = self.elements
        for i in range(len(els)):
            s = els[i].series
            touched = False
            for j in range(i + 1, len(els)):
                c = coefficient_at(s, els[j].position)
                q = c // els[j].coeff
                if q:
                    g = els[j]
                    s = s * (g.inverse**q if q > 0 else g.series ** (-q))
                    touched = True
            if touched:
                e = els[i]
                els[i] = BasisElement(s, s.inverse(), e.position, e.coeff, e.degree, None)

    def check_echelon(self):
        """Leading positions strictly increase and each element, sifted by the
        earlier ones, keeps its own leading term."""
        pos = [e.position for e in self.elements]
        assert pos == sorted(set(pos)), "leading positions are not strictly increasing"
        for e in self.elements:
            assert e.series.leading() == (e.position, e.coeff), "stale leading term"
            assert e.coeff > 0


@dataclass
class EngineConfig:
    group: FbcGroup
    class_cap: int = DEFAULT_CLASS
    max_entries: int = DEFAULT_MAX_ENTRIES

    def __post_init__(self):
        if self.class_cap < 3:
            raise InputError("class cap must be at least 3")
        if self.memory_estimate() > self.max_entries:
            raise ResourceLimitError(
                f"engine would store ~{self.memory_estimate()} coefficients (limit {self.max_entries})"
            )

    @property
    def series_cap(self) -> int:
        return self.class_cap - 1

    def memory_estimate(self) -> int:
        r, cap = self.group.rank, self.series_cap
        hirsch = sum(witt_dimension(r, d) for d in range(1, cap + 1))
        block = sum(r**d for d in range(cap + 1))
        return 2 * hirsch * block


@dataclass
class ClosureStats:
    rounds: int = 0
    candidates: int = 0


class Engine:
    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self.group = cfg.group
        self.rank = cfg.group.rank
        self.c = cfg.class_cap
        self.cap = cfg.series_cap
        phi = cfg.group.phi
        self.phi_map = SubstitutionMap.from_words(phi.images, self.cap)
        self.phi_inv_map = SubstitutionMap.from_words(phi.inverse_images, self.cap)
        self.gens = [expand(gen(i), self.rank, self.cap) for i in range(self.rank)]
        self.gens_inv = [expand(gen(i, -1), self.rank, self.cap) for i in range(self.rank)]
        self.bases: dict[int, SiftedBasis] = {}
        self.stats: dict[int, ClosureStats] = {}

    # -- construction -------------------------------------------------------

    def expand(self, w: Word) -> TruncSeries:
        return expand(w, self.rank, self.cap)

    def _candidates(self, basis: SiftedBasis):
        cap = self.cap
        els = list(basis.elements)
        for e in els:
            if e.degree + 1 <= cap:
                for i in range(self.rank):
                    for x, xi in ((self.gens[i], self.gens_inv[i]), (self.gens_inv[i], self.gens[i])):
                        yield e.inverse * xi * e.series * x, None
            yield self.phi_map(e.series), None
            yield self.phi_inv_map(e.series), None
        for a in range(len(els)):
            for b in range(a + 1, len(els)):
                if els[a].degree + els[b].degree <= cap:
                    ga, gb = els[a], els[b]
                    yield ga.inverse * gb.inverse * ga.series * gb.series, None

    def closure(self, generators: Sequence[tuple[TruncSeries, Word | None]]) -> tuple[SiftedBasis, ClosureStats]:
        """Normal closure in ``G`` (conjugation by the fiber and by ``t``) of
        the given elements, as a sifted basis at its fixed point."""
        basis = SiftedBasis(self.rank, self.cap)
        for s, w in generators:
            basis.insert(s, w)
        stats = ClosureStats()
        while True:
            stats.rounds += 1
            changed = False
            for s, w in list(self._candidates(basis)):
                stats.candidates += 1
                if basis.insert(s, w):
                    changed = True
            basis.check_echelon()
            if not changed:
                return basis, stats

    def _provenance(self, w: Word | None) -> Word | None:
        return w if w is not None and w.length <= PROVENANCE_MAX_LENGTH else None

    def build(self) -> "Engine":
        r, phi = self.rank, self.group.phi
        gens = []
        for i in range(r):
            for j in range(i + 1, r):
                w = commutator(gen(i), gen(j))
                gens.append((self.expand(w), w))
        for i in range(r):
            w = gen(i, -1) * phi(gen(i))
            gens.append((self.expand(w), self._provenance(w)))
        self.bases[2], self.stats[2] = self.closure(gens)
        log.info("W_2: %d elements, %d rounds", len(self.bases[2]), self.stats[2].rounds)
        for n in range(3, self.c + 1):
            prev = self.bases[n - 1]
            gens = []
            for e in prev.elements:
                for i in range(r):
                    gens.append((series_commutator(e.series, self.gens[i]), None))
                gens.append((e.inverse * self.phi_map(e.series), None))
            self.bases[n], self.stats[n] = self.closure(gens)
            log.info("W_%d: %d elements, %d rounds", n, len(self.bases[n]), self.stats[n].rounds)
        return self

    # -- queries --------------------------------------------------------------

    def _check_n(self, n: int):
        if not 2 <= n <= self.c:
            raise InputError(f"n = {n} outside 2..{self.c}")
        if n not in self.bases:
            raise InputError("engine has not been built")

    def member(self, w: Word, n: int) -> bool:
        """Is the fiber word ``w`` in ``gamma_n(G)``?"""
        self._check_n(n)
        return self.bases[n].contains(self.expand(w))

    def member_series(self, s: TruncSeries, n: int) -> bool:
        self._check_n(n)
        return self.bases[n].contains(s)

    def exponents(self, n: int, s: TruncSeries) -> list[int]:
        rem, exps = self.bases[n].sift(s, record=True)
        if not rem.is_one():
            raise InputError(f"element is not in W_{n}")
        return exps

    def graded_invariants(self, n: int) -> list[int]:
        """``gamma_n(G) / gamma_(n+1)(G)`` as ``[0]*free + torsion orders``."""
        if n == 1:
            return mapping_torus_homology(intmat(self.group.phi.abelianization())).h1
        if not 2 <= n <= self.c - 1:
            raise InputError(f"graded invariants need 1 <= n <= {self.c - 1}")
        top, low = self.bases[n], self.bases[n + 1]
        m = len(top)
        if m == 0:
            return []
        rels = []
        for h in low.elements:
            rels.append(self.exponents(n, h.series))
        els = top.elements
        for i in range(m):
            for j in range(i + 1, m):
                conj = els[i].inverse * els[j].series * els[i].series
                e = self.exponents(n, conj)
                e[j] -= 1
                rels.append(e)
        if not any(any(r) for r in rels):
            return [0] * m
        mat = intmat([[r[k] for r in rels] for k in range(m)])
        return invariant_factors(mat)

    # -- certificates -----------------------------------------------------------

    def closure_certificates(self) -> dict[int, dict[str, bool]]:
        """Re-verify fixed-point stability of every basis from scratch."""
        out = {}
        for n, basis in self.bases.items():
            els = basis.elements
            conj = all(
                basis.contains(e.inverse * xi * e.series * x)
                for e in els
                for i in range(self.rank)
                for x, xi in ((self.gens[i], self.gens_inv[i]), (self.gens_inv[i], self.gens[i]))
            )
            phis = all(basis.contains(self.phi_map(e.series)) and basis.contains(self.phi_inv_map(e.series)) for e in els)
            comms = all(
                basis.contains(els[a].inverse * els[b].inverse * els[a].series * els[b].series)
                for a in range(len(els))
                for b in range(a + 1, len(els))
            )
            try:
                basis.check_echelon()
                echelon = True
            except AssertionError:
                echelon = False
            out[n] = {"conjugation": conj, "phi": phis, "commutator": comms, "echelon": echelon}
        return out

    def tower_holds(self) -> bool:
        return all(
            self.bases[n].contains(e.series) for n in range(2, self.c) for e in self.bases[n + 1].elements
        )

    def free_terms_contained(self, max_degree: int = 5) -> dict[int, bool]:
        """Every degree-``n`` Hall commutator of ``F`` lies in ``W_n``."""
        out = {}
        for n in range(2, min(self.c, max_degree) + 1):
            out[n] = all(self.member(hall_word(h.tree), n) for h in hall_basis(self.rank, n, degree_cap=max(n, 8)))
        return out

    def dump(self) -> str:
        lines = [f"engine class={self.c} rank={self.rank} group={self.group.name}"]
        for n in sorted(self.bases):
            b = self.bases[n]
            lines.append(f"W_{n}: {len(b)} elements, rounds={self.stats[n].rounds}")
            for e in b.elements:
                prov = format_word(e.provenance, self.group.fiber_alphabet) if e.provenance is not None else "-"
                lines.append(f"  pos={e.position} coeff={e.coeff} degree={e.degree} word={prov}")
                lines.append(f"    {format_series(e.series, list(self.group.fiber_alphabet.names))}")
        return "\n".join(lines)


def hall_word(tree) -> Word:
    """Group commutator with the shape of a bracket tree."""
    if isinstance(tree, int):
        return gen(tree)
    return commutator(hall_word(tree[0]), hall_word(tree[1]))


def build(cfg: EngineConfig) -> Engine:
    return Engine(cfg).build()


# ---------------------------------------------------------------------------
# reports


def h_side_invariants(a) -> list[int]:
    """``gamma_n(H) / gamma_(n+1)(H)`` for ``H = Z^m x|_A Z`` and finite
    ``n >= 2`` when ``A - I`` is invertible over the rationals."""
    a = intmat(a)
    return invariant_factors(a - identity(a.shape[0]))


def gamma_omega_report(engine: Engine, candidate: Word | None = None, non_member: Word | None = None) -> dict:
    """Finite-class evidence that ``gamma_omega(G)`` is the normal closure of the candidate."""
    cand = candidate if candidate is not None else commutator(gen(0), gen(1))
    bad = non_member if non_member is not None else gen(0)
    c = engine.c
    member_all = {n: engine.member(cand, n) for n in range(2, c + 1)}
    closure, stats = engine.closure([(engine.expand(cand), cand)])
    closure_in = {n: all(engine.bases[n].contains(e.series) for e in closure.elements) for n in range(2, c + 1)}
    excluded = not engine.member(bad, 2)
    homology = mapping_torus_homology(intmat(engine.group.phi.abelianization()))
    checks = {
        "candidate in every W_n": all(member_all.values()),
        "normal closure inside every W_n": all(closure_in.values()),
        "non-member excluded from W_2": excluded,
        "coker(L^2 A - I) = Z/2 and ker(A - I) = 0": homology.coker_piece == [2] and homology.ker_piece == [],
    }
    return {
        "candidate": format_word(cand, engine.group.fiber_alphabet),
        "membership": member_all,
        "closure_size": len(closure),
        "closure_rounds": stats.rounds,
        "closure_in_W": closure_in,
        "non_member": format_word(bad, engine.group.fiber_alphabet),
        "wang_pieces": {"coker": homology.coker_piece, "ker": homology.ker_piece},
        "checks": checks,
        "passed": all(checks.values()),
    }


def witness_word(k: int) -> Word:
    """``[[y, x], x, [y, x], ..., [y, x]]`` with ``k`` trailing copies of ``[y, x]``."""
    yx = commutator(gen(1), gen(0))
    return left_normed([yx, gen(0)] + [yx] * k)


def witness_report(k_max: int, cap: int | None = None) -> dict:
    if k_max < 0:
        raise InputError("k_max must be >= 0")
    need = 2 * k_max + 3
    cap = max(12, need) if cap is None else cap
    if cap < need:
        raise PrecisionError(f"witness k={k_max} needs Magnus cap >= {need}, have {cap}")
    rows = []
    for k in range(0, k_max + 1):
        w = witness_word(k)
        wt = weight(w, 2, cap)
        rows.append(
            {
                "k": k,
                "length": w.length,
                "nontrivial": not w.is_identity(),
                "weight": wt if isinstance(wt, int) else None,
                "expected_weight": 2 * k + 3,
                "in_free_term": isinstance(wt, int) and wt >= k + 2,
            }
        )
    ok = all(r["nontrivial"] and r["weight"] == r["expected_weight"] and r["in_free_term"] for r in rows)
    return {"cap": cap, "rows": rows, "passed": ok}
