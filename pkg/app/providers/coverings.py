# app/providers/coverings.py — universal covering projections D → Ω used as density oracles
from __future__ import annotations

"""
Each descriptor maps a point w of the unit disk to (p(w), p#(w)) where
p#(w) = |p'(w)| / (1 + |p(w)|²) is the spherical derivative. Working with p#
instead of |p'| keeps the oracle finite when p(w) = ∞ (inversion onto an
exterior disk), and the identity to check becomes

    λ_D(w) = μ_Ω(p(w)) · p#(w).

Descriptors read their parameters off the target domain. Isometry images use
"isometry-pullback": the base default descriptor post-composed with T (spherical
derivatives are unchanged by spherical isometries). A base descriptor named
explicitly for an image is post-composed the same way.
"""

import cmath
import math
from typing import Callable, Dict, List, Tuple, TypedDict

from app.services.domains import (
    Annulus,
    Domain,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
)
from app.utils.errors import UnknownCoveringDescriptor
from app.utils.sphere import INFINITY, SpherePoint

CoveringValue = Tuple[SpherePoint, float]

# base point used by the disk automorphism (p(-b) = center)
DISK_SHIFT = 0.3 - 0.2j


def _sharp(p: complex, dp: complex) -> float:
    return abs(dp) / (1.0 + abs(p) ** 2)


# -----------------------------------------------------------------------------
# descriptors
# -----------------------------------------------------------------------------

def _identity(domain: Domain, w: complex) -> CoveringValue:
    return SpherePoint.of(w), _sharp(w, 1.0)


def _disk_automorphism(domain: Domain, w: complex) -> CoveringValue:
    assert isinstance(domain, EuclideanDisk)
    b, c, R = DISK_SHIFT, domain.center, domain.radius
    den = 1.0 + b.conjugate() * w
    p = c + R * (w + b) / den
    dp = R * (1.0 - abs(b) ** 2) / den ** 2
    return SpherePoint.of(p), _sharp(p, dp)


def _exp_cayley(domain: Domain, w: complex) -> CoveringValue:
    assert isinstance(domain, PuncturedDisk)
    s = (w + 1.0) / (w - 1.0)
    p = domain.radius * cmath.exp(s)
    dp = p * (-2.0 / (w - 1.0) ** 2)
    return SpherePoint.of(p), _sharp(p, dp)


def _exp_strip(domain: Domain, w: complex) -> CoveringValue:
    assert isinstance(domain, Annulus)
    L = math.log(1.0 / domain.inner)
    k = 1j * L / math.pi
    p = cmath.exp(-0.5 * L + k * cmath.log((1.0 + w) / (1.0 - w)))
    dp = p * k * 2.0 / (1.0 - w * w)
    return SpherePoint.of(p), _sharp(p, dp)


def _cayley_halfplane(domain: Domain, w: complex) -> CoveringValue:
    assert isinstance(domain, HalfPlane)
    n = domain.normal
    p = n * (domain.offset + (1.0 + w) / (1.0 - w))
    dp = n * 2.0 / (1.0 - w) ** 2
    return SpherePoint.of(p), _sharp(p, dp)


def _inversion_exterior(domain: Domain, w: complex) -> CoveringValue:
    assert isinstance(domain, ExteriorDisk)
    R = domain.radius
    sharp = R / (abs(w) ** 2 + R * R)
    if w == 0:
        return INFINITY, sharp
    return SpherePoint.of(R / w), sharp


def _isometry_pullback(domain: Domain, w: complex) -> CoveringValue:
    assert isinstance(domain, IsometryImage)
    base = domain.base
    p, sharp = COVERINGS[_DEFAULT_FOR_KIND[base.kind]]["func"](base, w)
    return domain.T.apply(p), sharp


class CoveringSpec(TypedDict):
    name: str
    target: str                    # Domain.kind the descriptor covers
    label: str
    func: Callable[[Domain, complex], CoveringValue]


COVERINGS: Dict[str, CoveringSpec] = {
    "identity": {
        "name": "identity",
        "target": "disk",
        "label": "p(w) = w onto the unit disk",
        "func": _identity,
    },
    "disk-automorphism": {
        "name": "disk-automorphism",
        "target": "disk",
        "label": "p(w) = c + R(w+b)/(1+conj(b)w)",
        "func": _disk_automorphism,
    },
    "exp-cayley": {
        "name": "exp-cayley",
        "target": "punct",
        "label": "p(w) = R exp((w+1)/(w-1))",
        "func": _exp_cayley,
    },
    "exp-strip": {
        "name": "exp-strip",
        "target": "ann",
        "label": "p(w) = exp(-L/2 + (iL/π) log((1+w)/(1-w))), L = log(1/r)",
        "func": _exp_strip,
    },
    "cayley-halfplane": {
        "name": "cayley-halfplane",
        "target": "half",
        "label": "p(w) = n(c + (1+w)/(1-w))",
        "func": _cayley_halfplane,
    },
    "inversion-exterior": {
        "name": "inversion-exterior",
        "target": "ext",
        "label": "p(w) = R/w",
        "func": _inversion_exterior,
    },
    "isometry-pullback": {
        "name": "isometry-pullback",
        "target": "isom",
        "label": "p = T ∘ p_base, with p_base the default descriptor of the base domain",
        "func": _isometry_pullback,
    },
}

_DEFAULT_FOR_KIND = {
    "disk": "disk-automorphism",
    "punct": "exp-cayley",
    "ann": "exp-strip",
    "half": "cayley-halfplane",
    "ext": "inversion-exterior",
}


def covering_names() -> List[str]:
    return list(COVERINGS)


def default_covering(domain: Domain) -> str:
    if isinstance(domain, IsometryImage):
        return "isometry-pullback"
    return _DEFAULT_FOR_KIND[domain.kind]


def evaluate_covering(name: str, domain: Domain, w: complex) -> CoveringValue:
    """(p(w), p#(w)) for the named descriptor, post-composed with T for isometry images."""
    spec = COVERINGS.get(name)
    if spec is None:
        raise UnknownCoveringDescriptor(f"unknown covering descriptor {name!r}; known: {', '.join(COVERINGS)}")
    if spec["target"] == "isom":
        if not isinstance(domain, IsometryImage):
            raise UnknownCoveringDescriptor(f"descriptor {name!r} covers isometry images, not {domain.kind!r}")
        return spec["func"](domain, complex(w))
    base = domain.base
    if spec["target"] != base.kind:
        raise UnknownCoveringDescriptor(f"descriptor {name!r} covers {spec['target']!r} domains, not {base.kind!r}")
    if name == "identity" and not (base.center == 0 and base.radius == 1.0):
        raise UnknownCoveringDescriptor("the identity covering only applies to the unit disk")
    p, sharp = spec["func"](base, complex(w))
    if isinstance(domain, IsometryImage):
        p = domain.T.apply(p)
    return p, sharp
