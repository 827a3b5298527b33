"""One function per report section; each returns a list of entries."""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .. import lcsengine
from ..fbc import FbcGroup, relator
from ..latmod.homology import format_group, mapping_torus_homology
from ..latmod.lemma import (
    HOLDS,
    VIOLATION,
    find_unit_invariant_sublattice,
    is_unit_invariant,
    kron_char_poly,
    kron_power,
    lemma2_check_exterior,
    norm_report,
    norm_sequences,
    stable_image_chain,
    structured_product_check,
)
from ..latmod.matrix import (
    char_poly,
    compound,
    det,
    hnf_rows,
    identity,
    intmat,
    invariant_factors,
    lattice_contains,
    poly_divides,
    solve_rational,
    to_lists,
)
from ..liemod import hall_basis, lie_power_matrix, witt_dimension
from ..words import cyclic_reduce, format_word, gen, is_proper_power
from .config import Caps
from .report import Entry, entry


@dataclass
class Context:
    group: FbcGroup
    caps: Caps
    expect: dict
    relator_index: int | None = None


class NotApplicable(Exception):
    """The section does not apply to this group; reported as skipped."""


def _abelian(group: FbcGroup):
    return intmat(group.phi.abelianization())


def _quadratic_unit(a) -> bool:
    """2x2, determinant ±1, irreducible characteristic polynomial."""
    if a.shape != (2, 2) or det(a) not in (1, -1):
        return False
    tr = int(a[0, 0] + a[1, 1])
    disc = tr * tr - 4 * det(a)
    return not (disc >= 0 and isqrt(disc) ** 2 == disc)


def _ok(flag: bool) -> str:
    return "pass" if flag else "fail"


def _verdict_data(v) -> dict:
    return {"verdict": v.status, "route": v.route, "witness": v.witness, "details": v.details}


# ---------------------------------------------------------------------------


def identities(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    if not group.identities:
        raise NotApplicable("the group lists no identities")
    out = []
    for row in group.identity_suite().rows:
        name = f"identity: {row['name']}"
        out.append(entry(name, _ok(row["equal"]), row, anchor=f"{row['lhs']} = {row['rhs']}"))
    return out


def module(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    a = _abelian(group)
    n = a.shape[0]
    b = a - identity(n)
    want = expect.get("module", HOLDS)
    v = lemma2_check_exterior(b, caps.exterior_limit)
    data = {"expected": want, "matrix": to_lists(a), **_verdict_data(v)}
    if n >= 2:
        data["det(L^2 B)"] = det(compound(b, 2))
    out = [entry("module: exterior check", _ok(v.status == want), data)]

    chain = stable_image_chain(b, 12)
    cdata = {k: chain[k] for k in ("ranks", "index", "covolume", "stable_rank", "candidate_unit_part")}
    unit_part = chain["candidate_unit_part"] is not None
    out.append(entry("module: stable image chain", _ok(unit_part == (want == VIOLATION)), cdata))

    lat = find_unit_invariant_sublattice(b, min(n, caps.degree_cap))
    if lat is None:
        ldata = {"lattice": None}
        ok = want == HOLDS
    else:
        checked = is_unit_invariant(b, lat.basis)
        ldata = {"lattice": lat.basis, "factor": lat.factor, "B L = L": checked}
        ok = want == VIOLATION and checked
    out.append(entry("module: unit invariant sublattice", _ok(ok), ldata))
    return out


def tensor(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    a = _abelian(group)
    if not _quadratic_unit(a):
        raise NotApplicable("the pairing argument needs a 2x2 unit matrix with irreducible characteristic polynomial")
    want = expect.get("tensor", HOLDS)
    per_m, overall, first_bad = {}, HOLDS, None
    for m in range(1, caps.tensor_max + 1):
        v = structured_product_check(m, base=a, exterior_limit=caps.exterior_limit)
        per_m[m] = {"verdict": v.status, "route": v.route}
        if v.status == VIOLATION:
            overall, first_bad = VIOLATION, {"m": m, **_verdict_data(v)}
            break
    data = {"expected": want, "verdict": overall, "per_m": per_m, "first_violation": first_bad}
    out = [entry("tensor: structured check", _ok(overall == want), data)]

    agree = {}
    for m in range(1, min(caps.exterior_cross_max, caps.tensor_max) + 1):
        k = kron_power(a, m)
        ext = lemma2_check_exterior(k - identity(k.shape[0]), caps.exterior_limit)
        st = structured_product_check(m, base=a, exterior_limit=caps.exterior_limit)
        agree[m] = {"exterior": ext.status, "structured": st.status, "agree": ext.status == st.status}
    out.append(entry("tensor: exterior cross-check", _ok(all(r["agree"] for r in agree.values())), agree))

    if caps.tensor_max >= 2:
        # for even m the product of conjugate roots gives the rational eigenvalue det(a)^(m/2)
        k2 = kron_power(a, 2)
        lam = det(a)
        gap = {
            "m": 2,
            "eigenvalue": lam,
            "det(U^(x)2 - eigenvalue I)": det(k2 - identity(4) * lam),
            "note": "exponent 0 occurs for even m; eigenvalues 0 and -2 of U^(x)m - I are handled explicitly",
        }
        out.append(entry("tensor: even power eigenvalues", "flagged", gap))
    return out


def _tensor_char_poly(a, n: int, max_side: int = 64):
    if _quadratic_unit(a):
        return kron_char_poly(a, n)
    if a.shape[0] ** n > max_side:
        return None
    return char_poly(kron_power(a, n))


def lie(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    a = _abelian(group)
    r = a.shape[0]
    want = expect.get("lie", HOLDS)
    top = caps.degree_cap
    dims = {n: witt_dimension(r, n) for n in range(1, top + 1)}
    enum = {n: len(hall_basis(r, n, top)) for n in range(1, top + 1)}
    out = [entry("lie: witt dimensions", _ok(dims == enum), {"formula": dims, "hall_basis": enum})]
    if r < 2:
        return out

    mats = {n: lie_power_matrix(a, n, top).matrix for n in range(2, top + 1)}
    two = mats[2]
    ext2 = compound(a, 2)
    out.append(entry("lie: second power", _ok(to_lists(two) == to_lists(ext2)), {"L^2": to_lists(two), "det": det(a)}))

    contain = {}
    for n in range(2, top + 1):
        big = _tensor_char_poly(a, n)
        contain[n] = None if big is None else poly_divides(char_poly(mats[n]), big)
    checked = [v for v in contain.values() if v is not None]
    out.append(entry("lie: inside tensor power", _ok(all(checked)), {"char_poly divides": contain}))

    per_n, overall = {}, HOLDS
    for n in range(2, top + 1):
        m = mats[n]
        dim = m.shape[0]
        if dim <= caps.lie_exterior_dim:
            v = lemma2_check_exterior(m - identity(dim), caps.exterior_limit)
        elif contain.get(n) and _quadratic_unit(a):
            # eigenvalues of L^n(U) - I form a sub-multiset of those of U^(x)n - I
            v = structured_product_check(n, base=a, exterior_limit=caps.exterior_limit)
            if v.status == VIOLATION:
                # a failure on the tensor power says nothing about the sub-multiset
                per_n[n] = {"dimension": dim, "verdict": None, "route": "undecided"}
                overall = None
                continue
        else:
            per_n[n] = {"dimension": dim, "verdict": None, "route": "undecided"}
            overall = None
            continue
        per_n[n] = {"dimension": dim, "verdict": v.status, "route": v.route}
        if v.status == VIOLATION and overall == HOLDS:
            overall = VIOLATION
    status = "skipped" if overall is None else _ok(overall == want)
    out.append(entry("lie: exterior check", status, {"expected": want, "verdict": overall, "per_n": per_n}))
    return out


def norms(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    a = _abelian(group)
    if not _quadratic_unit(a):
        raise NotApplicable("norm sequences need a 2x2 unit matrix with irreducible characteristic polynomial")
    seq = norm_sequences(caps.norm_max, a)
    rep = norm_report(seq)
    m1, n1 = det(a - identity(2)), det(a + identity(2))
    first = {"M_1": seq.M[1], "N_1": seq.N[1], "det(U - I)": m1, "det(U + I)": n1}
    out = [entry("norms: first values", _ok(seq.M[1] == m1 and seq.N[1] == n1), first)]
    out.append(entry("norms: divisibility", _ok(all(rep["checks"].values())), {"L": caps.norm_max, **rep["checks"]}))
    if rep["flags"]:
        out.append(entry("norms: divisibility direction", "flagged", rep["flags"][0]))
    else:
        out.append(entry("norms: divisibility direction", "pass", {"holds": True}))
    return out


def homology(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    a = _abelian(group)
    n = a.shape[0]
    h = mapping_torus_homology(a)
    # orders of finite cokernels must match absolute determinants
    checks = {}
    d1 = det(a - identity(n))
    if d1:
        checks["|coker(A - I)| = |det(A - I)|"] = _order(h.h1[1:]) == abs(d1)
    if n >= 2:
        e = compound(a, 2)
        d2 = det(e - identity(e.shape[0]))
        if d2:
            checks["|coker(L^2 A - I)| = |det(L^2 A - I)|"] = _order(h.coker_piece) == abs(d2)
    data = {
        "H_1": format_group(h.h1),
        "H_2 pieces": {"coker(L^2 A - I)": format_group(h.coker_piece), "ker(A - I)": format_group(h.ker_piece)},
        "H_2": None if h.h2_resolved is None else format_group(h.h2_resolved),
        "note": h.note,
        "checks": checks,
    }
    out = [entry("homology: mapping torus", _ok(all(checks.values())), data)]

    if ctx.relator_index is not None:
        rel = relator(group, ctx.relator_index)
        root, k = is_proper_power(cyclic_reduce(rel))
        sums = rel.exponent_sums(group.presentation_alphabet.rank)
        h2 = "Z" if not any(sums) else "0"
        rdata = {
            "relator": format_word(rel, group.presentation_alphabet),
            "root exponent": k,
            "exponent sums": sums,
            "H_2(G)": h2,
            "reason": "a one-relator presentation whose relator is not a proper power is aspherical",
        }
        out.append(entry("homology: relator", _ok(k == 1), rdata))
    return out


def _order(sig: list[int]) -> int | None:
    if any(d == 0 for d in sig):
        return None
    out = 1
    for d in sig:
        out *= d
    return out


def lcs(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    cfg = lcsengine.EngineConfig(group, caps.class_cap, caps.engine_max_entries)
    eng = lcsengine.build(cfg)
    c = eng.c
    a = _abelian(group)
    r = a.shape[0]
    b = a - identity(r)
    sizes = {n: len(eng.bases[n]) for n in sorted(eng.bases)}
    rounds = {n: eng.stats[n].rounds for n in sorted(eng.stats)}
    out = [entry("lcs: engine", "pass", {"class": c, "basis sizes": sizes, "closure rounds": rounds})]
    out.append(entry("lcs: tower", _ok(eng.tower_holds()), {"n": list(range(2, c))}))

    x = gen(0)
    p = abs(det(b))
    if p >= 2:
        rows = {}
        power = identity(r)
        for k in range(1, min(4, c - 1) + 1):
            power = power.dot(b)
            target = [p**k] + [0] * (r - 1)
            sol = solve_rational(hnf_rows(power.T.tolist(), r), target)
            h_side = sol is not None and all(q.denominator == 1 for q in sol)
            rows[k] = {
                "word": f"x^{p ** k}",
                "in W_(k+1)": eng.member(x**(p**k), k + 1),
                "H-side solution": sol,
                "H-side member": h_side,
            }
        ok = all(v["in W_(k+1)"] and v["H-side member"] for v in rows.values())
        out.append(entry("lcs: prime powers", _ok(ok), {"p": p, "rows": rows}))
    else:
        out.append(entry("lcs: prime powers", "skipped", {"reason": "det(A - I) is 0 or ±1"}))

    inside = eng.member(x, 2)
    h_inside = lattice_contains(hnf_rows(b.T.tolist(), r), [1] + [0] * (r - 1))
    out.append(entry("lcs: non-member", _ok(not inside and not h_inside), {"x in W_2": inside, "H-side": h_inside}))

    if det(b) != 0:
        pred = invariant_factors(b)
        graded = {n: eng.graded_invariants(n) for n in range(2, c)}
        ok = all(v == pred for v in graded.values())
        out.append(entry("lcs: graded quotients", _ok(ok), {"engine": graded, "SNF(A - I)": pred}))
    else:
        out.append(entry("lcs: graded quotients", "skipped", {"reason": "A - I is singular"}))

    if r >= 2:
        rep = lcsengine.gamma_omega_report(eng)
        out.append(entry("lcs: gamma omega", _ok(rep["passed"]), rep))
    else:
        out.append(entry("lcs: gamma omega", "skipped", {"reason": "needs two fiber generators"}))

    cert = eng.closure_certificates()
    out.append(entry("lcs: closure certificates", _ok(all(all(v.values()) for v in cert.values())), cert))
    return out


def witnesses(ctx: Context) -> list[Entry]:
    group, caps, expect = ctx.group, ctx.caps, ctx.expect
    if group.rank < 2:
        raise NotApplicable("witness words need two fiber generators")
    need = 2 * caps.witness_max + 3
    rep = lcsengine.witness_report(caps.witness_max, max(caps.magnus_cap, need))
    return [entry("witnesses: weights", _ok(rep["passed"]), rep)]


SECTIONS = {
    "identities": identities,
    "module": module,
    "tensor": tensor,
    "lie": lie,
    "norms": norms,
    "homology": homology,
    "lcs": lcs,
    "witnesses": witnesses,
}

__all__ = ["SECTIONS", "Context", "NotApplicable"]
