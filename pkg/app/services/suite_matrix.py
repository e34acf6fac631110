"""
app/services/suite_matrix.py

Declarative table of verification suites.

Each entry names the inequality a suite checks, which corpus members it
applies to, and the slack allowed on the margin rhs - lhs. verify.py uses
SUITE_MATRIX to pick members, tolerances and the order of the `all` run.
"""

from __future__ import annotations

from typing import Dict, List, Literal, TypedDict

Level = Literal["pointwise", "constants", "oracle"]

# which corpus members a suite applies to
Applies = Literal[
    "all",             # every domain
    "planar",          # ∞ not in Ω
    "convex",          # spherically convex members
    "exterior",        # canonical exterior disks
]

POINTWISE_TOL = 1e-9
CONSTANTS_TOL = 1e-7


class SuiteSpec(TypedDict):
    name: str
    label: str
    level: Level
    applies: Applies
    tolerance: float


SUITE_MATRIX: Dict[str, SuiteSpec] = {
    "lemma1": {
        "name": "lemma1",
        "label": "ε|z| ≤ 1 and ε(1+|z|²)/(1+ε|z|) ≤ d ≤ ε(1+|z|²)/(1−ε|z|)",
        "level": "pointwise",
        "applies": "planar",
        "tolerance": POINTWISE_TOL,
    },
    "minda_upper": {
        "name": "minda_upper",
        "label": "ε·μ ≤ 1, with equality at the center of a spherical disk",
        "level": "pointwise",
        "applies": "all",
        "tolerance": POINTWISE_TOL,
    },
    "minda_convex": {
        "name": "minda_convex",
        "label": "μ ≥ (1+ε²)/(2ε) on spherically convex domains, equality on hemispheres",
        "level": "pointwise",
        "applies": "convex",
        "tolerance": POINTWISE_TOL,
    },
    "main_i": {
        "name": "main_i",
        "label": "Ĉ ≤ 1/2",
        "level": "constants",
        "applies": "all",
        "tolerance": CONSTANTS_TOL,
    },
    "main_ii": {
        "name": "main_ii",
        "label": "C̃ ≤ Ĉ and C̃′ ≤ Ĉ′",
        "level": "constants",
        "applies": "all",
        "tolerance": POINTWISE_TOL,
    },
    "main_iii": {
        "name": "main_iii",
        "label": "Ĉ ≤ 2C",
        "level": "constants",
        "applies": "planar",
        "tolerance": CONSTANTS_TOL,
    },
    "main_iv": {
        "name": "main_iv",
        "label": "C ≤ 4C̃′",
        "level": "constants",
        "applies": "planar",
        "tolerance": CONSTANTS_TOL,
    },
    "corollary2": {
        "name": "corollary2",
        "label": "d_{f(Ω)}λ_{f(Ω)}(f z) / (d_Ω λ_Ω(z)) ≥ 1/2 for isometries f with f(Ω) ⊂ C",
        "level": "pointwise",
        "applies": "planar",
        "tolerance": POINTWISE_TOL,
    },
    "distortion": {
        "name": "distortion",
        "label": "d_Ω(z)|f'(z)| ≤ 2 d_{f(Ω)}(f z) for isometries f with f(Ω) ⊂ C",
        "level": "pointwise",
        "applies": "planar",
        "tolerance": POINTWISE_TOL,
    },
    "dlambda_upper": {
        "name": "dlambda_upper",
        "label": "d·λ ≤ 1",
        "level": "pointwise",
        "applies": "planar",
        "tolerance": POINTWISE_TOL,
    },
    "invariance": {
        "name": "invariance",
        "label": "ε and μ unchanged under spherical isometries (relative error)",
        "level": "pointwise",
        "applies": "all",
        "tolerance": POINTWISE_TOL,
    },
    "exterior_degeneration": {
        "name": "exterior_degeneration",
        "label": "d·λ on |z| > R at x = 10^k equals R/(x+R) and decreases",
        "level": "pointwise",
        "applies": "exterior",
        "tolerance": 1e-10,
    },
    "curvature": {
        "name": "curvature",
        "label": "|K̂ + 4| from the 5-point stencil with h = 1e-3",
        "level": "oracle",
        "applies": "all",
        "tolerance": 1e-4,
    },
    "covering": {
        "name": "covering",
        "label": "relative covering residual |λ_D − μ_Ω(p)·p#| / λ_D",
        "level": "oracle",
        "applies": "all",
        "tolerance": 1e-10,
    },
}


def suite_names() -> List[str]:
    return list(SUITE_MATRIX)
