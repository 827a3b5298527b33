"""Homology of the mapping torus ``Z^m x|_A Z`` from the Wang sequence."""
from __future__ import annotations

from dataclasses import dataclass

from .matrix import IntMatrix, compound, identity, intmat, invariant_factors, kernel_basis


@dataclass
class TorusHomology:
    h1: list[int]
    coker_piece: list[int]
    ker_piece: list[int]
    note: str | None = None

    @property
    def h2_resolved(self) -> list[int] | None:
        """H_2 when one Wang piece vanishes, else None."""
        if not self.ker_piece:
            return self.coker_piece
        if not self.coker_piece:
            return self.ker_piece
        return None


def format_group(sig: list[int]) -> str:
    """``[0, 0, 3]`` -> ``Z^2 + Z/3``; empty -> ``0``."""
    free = sig.count(0)
    parts = []
    if free:
        parts.append("Z" if free == 1 else f"Z^{free}")
    parts.extend(f"Z/{d}" for d in sig if d)
    return " + ".join(parts) or "0"


def mapping_torus_homology(a: IntMatrix) -> TorusHomology:
    """``H_1 = Z + coker(A - I)``; ``H_2`` given by its two Wang pieces
    ``coker(L^2 A - I)`` and ``ker(A - I)``."""
    a = intmat(a)
    m = a.shape[0]
    h1 = [0] + invariant_factors(a - identity(m))
    if m >= 2:
        ext = compound(a, 2)
        coker = invariant_factors(ext - identity(ext.shape[0]))
    else:
        coker = []
    ker = [0] * len(kernel_basis(a - identity(m)))
    note = None
    if coker and ker:
        note = "both Wang pieces nonzero; the extension is not resolved"
    return TorusHomology(h1, coker, ker, note)
