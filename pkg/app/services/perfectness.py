# app/services/perfectness.py — uniform-perfectness estimates for finite compact-set samples
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.services.domains import Domain, boundary_sample
from app.utils.errors import BadParameters, DegenerateSet, LevelOutOfRange
from app.utils.sphere import SpherePoint, format_point

logger = logging.getLogger("spherical-density")

MERGE_TOL = 1e-14

GapRule = Literal["linear", "quadratic"]


# -----------------------------------------------------------------------------
# types
# -----------------------------------------------------------------------------

def _near_runs(idx: np.ndarray, values: np.ndarray) -> List[np.ndarray]:
    """Groups of `idx` whose sorted `values` chain within MERGE_TOL; singletons dropped."""
    order = idx[np.argsort(values[idx], kind="stable")]
    cuts = np.flatnonzero(np.diff(values[order]) > MERGE_TOL) + 1
    return [g for g in np.split(order, cuts) if len(g) > 1]


def _merge_duplicates(points: Iterable[complex]) -> Tuple[complex, ...]:
    """Drop points within MERGE_TOL of an earlier kept point; input order is kept."""
    arr = np.array([complex(p) for p in points], dtype=complex)
    bad = ~np.isfinite(arr)
    if bad.any():
        raise BadParameters(f"finite points only, got {arr[np.argmax(bad)]}; use contains_infinity for ∞")
    keep = np.ones(arr.size, dtype=bool)
    # two points closer than MERGE_TOL share a run in both coordinates
    for run in _near_runs(np.arange(arr.size), arr.real):
        for group in _near_runs(run, arr.imag):
            kept: List[int] = []
            for i in np.sort(group):
                if any(abs(arr[i] - arr[j]) <= MERGE_TOL for j in kept):
                    keep[i] = False
                else:
                    kept.append(int(i))
    return tuple(arr[keep].tolist())


def _cross(o: Tuple[float, float], a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(pts: np.ndarray) -> np.ndarray:
    """Convex hull vertices (monotone chain); collinear sets reduce to their two ends."""
    P = sorted(set(zip(pts.real.tolist(), pts.imag.tolist())))
    if len(P) <= 2:
        return np.array([complex(x, y) for x, y in P])
    lower: List[Tuple[float, float]] = []
    for p in P:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[float, float]] = []
    for p in reversed(P):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    return np.array([complex(x, y) for x, y in lower[:-1] + upper[:-1]])


@dataclass(frozen=True)
class CompactSetSample:
    """Finite sample of a compact set E ⊂ Ĉ; duplicates within 1e-14 are merged."""

    points: Tuple[complex, ...]
    contains_infinity: bool = False
    label: str = "sample"
    resolution: Optional[float] = None

    def __post_init__(self) -> None:
        merged = _merge_duplicates(self.points)
        object.__setattr__(self, "points", merged)
        if len(merged) + (1 if self.contains_infinity else 0) < 2:
            raise DegenerateSet(f"{self.label}: a compact set sample needs at least two distinct points")
        if self.resolution is not None and not (self.resolution > 0.0):
            raise BadParameters(f"resolution must be positive, got {self.resolution}")

    @property
    def diameter(self) -> float:
        """Euclidean diameter d(E); +inf when ∞ ∈ E."""
        if self.contains_infinity:
            return math.inf
        hull = _hull(np.asarray(self.points))
        return float(max(np.max(np.abs(hull - h)) for h in hull))


class PerfectnessWitness(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    center: str
    inner: float
    outer: float


class PerfectnessReport(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    label: str
    n_points: int
    k_hat: float
    witness: PerfectnessWitness
    diam: float
    resolution: Optional[float] = None


# -----------------------------------------------------------------------------
# estimators
# -----------------------------------------------------------------------------

def _radii(row: np.ndarray, diam: float, resolution: Optional[float]) -> np.ndarray:
    """Sorted annulus radii seen from one center (row = |E - a|, self included)."""
    d = np.sort(row[row > 0.0])
    if resolution is not None:
        d = np.concatenate([[resolution], d[d > resolution]])
    if math.isfinite(diam):
        d = np.concatenate([d, [diam]])
    return d


def up_constant_estimate(E: CompactSetSample, resolution: Optional[float] = None) -> PerfectnessReport:
    """
    k̂ = 1 / (largest ratio of consecutive radii over all centers a ∈ E∖{∞}).

    The innermost radius is the smallest sampled distance, or `resolution`
    when one is given; the outer cap is d(E).
    """
    resolution = resolution if resolution is not None else E.resolution
    pts = np.asarray(E.points)
    diam = E.diameter

    best_ratio, witness = 1.0, (pts[0], diam, diam)
    for a in pts:
        radii = _radii(np.abs(pts - a), diam, resolution)
        if len(radii) < 2:
            continue
        ratios = radii[1:] / radii[:-1]
        i = int(np.argmax(ratios))
        if ratios[i] > best_ratio:
            best_ratio, witness = float(ratios[i]), (a, float(radii[i]), float(radii[i + 1]))

    center, inner, outer = witness
    logger.debug("perfectness | %s | n=%d k_hat=%.6g", E.label, len(pts), 1.0 / best_ratio)
    return PerfectnessReport(
        label=E.label,
        n_points=len(pts) + (1 if E.contains_infinity else 0),
        k_hat=1.0 / best_ratio,
        witness=PerfectnessWitness(
            center=format_point(SpherePoint.of(complex(center))), inner=inner, outer=outer
        ),
        diam=diam,
        resolution=resolution,
    )


def brute_force_up_constant(E: CompactSetSample, resolution: Optional[float] = None) -> float:
    """Enumerate every (center, inner, outer) annulus and keep the empty ones. O(n³)."""
    resolution = resolution if resolution is not None else E.resolution
    pts = np.asarray(E.points)
    diam = E.diameter
    best = 1.0
    for a in pts:
        row = np.abs(pts - a)
        candidates = set(float(x) for x in row if x > 0.0)
        if resolution is not None:
            candidates = {x for x in candidates if x > resolution} | {float(resolution)}
        if math.isfinite(diam):
            candidates.add(diam)
        radii = sorted(candidates)
        for i, inner in enumerate(radii):
            for outer in radii[i + 1:]:
                if outer / inner <= best:
                    continue
                if not np.any((row > inner) & (row < outer)):
                    best = outer / inner
    return 1.0 / best


def annulus_members(E: CompactSetSample, center: complex, inner: float, outer: float) -> int:
    row = np.abs(np.asarray(E.points) - complex(center))
    return int(np.sum((row > inner) & (row < outer)))


# -----------------------------------------------------------------------------
# generators
# -----------------------------------------------------------------------------

def cantor_iterate(level: int) -> CompactSetSample:
    """All interval endpoints of the level-th middle-thirds step on [0, 1]."""
    if not (1 <= level <= 20):
        raise LevelOutOfRange(f"cantor level must be in 1..20, got {level}")
    # endpoints as integers over 3**level
    scale = 3 ** level
    intervals = [(0, scale)]
    for _ in range(level):
        nxt = []
        for a, b in intervals:
            third = (b - a) // 3
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        intervals = nxt
    ends = sorted({e for ab in intervals for e in ab})
    return CompactSetSample(tuple(complex(e / scale) for e in ends), label=f"cantor:{level}")


def geometric_gap_set(base: float, exponent_rule: GapRule, n: int) -> CompactSetSample:
    """{0} ∪ {base^(-e(j)) : j = 0..n} with e(j) = j or j²."""
    if not (base > 1.0 and math.isfinite(base)):
        raise BadParameters(f"base must be > 1, got {base}")
    if exponent_rule not in ("linear", "quadratic"):
        raise BadParameters(f"exponent rule must be linear or quadratic, got {exponent_rule!r}")
    if n < 3:
        raise BadParameters(f"n must be at least 3, got {n}")
    exps = [j if exponent_rule == "linear" else j * j for j in range(n + 1)]
    pts = [0j] + [complex(base ** (-e)) for e in exps]
    return CompactSetSample(tuple(pts), label=f"geom:{base!r},{exponent_rule},{n}")


def boundary_compact_set(domain: Domain, n: int = 256) -> CompactSetSample:
    """
    Boundary sample of a domain as a compact-set sample. The resolution floor is
    the mesh of the sampled arcs (largest nearest-neighbour gap among arc points),
    so isolated boundary points show up as large empty annuli.
    """
    sample = boundary_sample(domain, n)
    curves = domain.curves()
    finite = [p for p in sample.points if not p.is_infinity]
    on_arcs = np.array(
        [p.z for p, (ci, _) in zip(sample.points, sample.params)
         if not p.is_infinity and curves[ci].kind != "point"]
    )
    mesh: Optional[float] = None
    if len(on_arcs) >= 2:
        mesh = 0.0
        for start in range(0, len(on_arcs), 256):
            gaps = np.abs(on_arcs[start:start + 256, None] - on_arcs[None, :])
            rows = np.arange(len(gaps))
            gaps[rows, start + rows] = np.inf
            mesh = max(mesh, float(np.max(np.min(gaps, axis=1))))
    return CompactSetSample(
        tuple(p.z for p in finite),
        contains_infinity=len(finite) < len(sample.points),
        label=f"boundary:{domain.spec()}",
        resolution=mesh,
    )
