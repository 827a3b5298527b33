"""Named run configurations."""
from __future__ import annotations

import copy

from ..fbc import PAPER_GROUP_CONFIG
from ..latmod.lemma import HOLDS, VIOLATION

ALL_SECTIONS = ("identities", "module", "tensor", "lie", "norms", "homology", "lcs", "witnesses")

PRESETS = {
    "paper": {
        "group": {**PAPER_GROUP_CONFIG, "relator": 0},
        "sections": list(ALL_SECTIONS),
        "expect": {"module": HOLDS, "tensor": HOLDS, "lie": HOLDS},
        "expect_values": {
            "module: exterior check": {"det(L^2 B)": -3},
            "norms: first values": {"M_1": -3, "N_1": 3},
            "lie: witt dimensions": {"formula": {str(n): d for n, d in enumerate([2, 1, 2, 3, 6, 9, 18, 30], 1)}},
            "lie: second power": {"L^2": [[-1]]},
            "homology: mapping torus": {"H_1": "Z + Z/3", "H_2": "Z/2"},
            "homology: relator": {"root exponent": 1, "H_2(G)": "0"},
            "lcs: prime powers": {"p": 3},
            "lcs: graded quotients": {"SNF(A - I)": [3]},
        },
    },
    # t acts on the abelianized fiber by the companion matrix of x^2 - 3x + 1,
    # which has a unit-determinant invariant lattice, so the module check must fail
    "contrast-resnilp-fail": {
        "group": {
            "name": "contrast-resnilp-fail",
            "fiber": ["x", "y"],
            "phi": ["y", "x^-1 y^3"],
            "phi_inverse": ["x^3 y^-1", "x"],
            "presentation": ["x", "y", "t"],
            "embedding": {
                "x": {"fiber": "x", "shift": 0},
                "y": {"fiber": "y", "shift": 0},
                "t": {"fiber": "", "shift": 1},
            },
            "identities": [
                ["t conjugates x to y", "x^t", "y"],
                ["t conjugates y", "y^t", "x^-1 y^3"],
            ],
        },
        "sections": ["identities", "module", "tensor", "homology"],
        "expect": {"module": VIOLATION, "tensor": VIOLATION},
    },
    "trivial-rank1": {
        "group": {
            "name": "trivial-rank1",
            "fiber": ["x"],
            "phi": ["x"],
            "phi_inverse": ["x"],
            "presentation": ["x", "t"],
            "embedding": {"x": {"fiber": "x", "shift": 0}, "t": {"fiber": "", "shift": 1}},
            "identities": [["x and t commute", "x t", "t x"]],
        },
        "sections": ["identities", "module", "homology", "lcs"],
        "expect": {"module": HOLDS},
        "caps": {"class_cap": 4},
    },
}


def preset(name: str) -> dict:
    return copy.deepcopy(PRESETS[name])
