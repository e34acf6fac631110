# app/services/domains.py — canonical hyperbolic domains and boundary distances d, δ, ε
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Callable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from app.utils.errors import (
    BadParameters,
    InfinityHasNoEuclideanDistance,
    PointNotInDomain,
    SampleTooSmall,
)
from app.utils.search import coordinate_descent, golden_section
from app.utils.sphere import (
    INFINITY,
    ORIGIN,
    TWO_PI,
    PointLike,
    SpherePoint,
    SphericalIsometry,
    antipode,
    as_point,
    chordal,
    random_sphere_points,
    sigma_from_tau,
    tau,
    tau_from_sigma,
)

logger = logging.getLogger("spherical-density")

BOUNDARY_SAMPLES = int(os.getenv("SPHDENS_BOUNDARY_SAMPLES", "256"))
DIAMETER_SAMPLES = int(os.getenv("SPHDENS_DIAMETER_SAMPLES", "4096"))

DistanceMethod = Literal["auto", "boundary", "sampled"]

_CONVEX_TOL = 1e-12


# -----------------------------------------------------------------------------
# generalized circles as Hermitian forms
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralizedCircle:
    """
    Zero set of Φ(z) = A|z|² + conj(B)·z + B·conj(z) + D, with A, D real.

    circle |z-c| = r : (1, -c, |c|²-r²)
    line Re(n̄z) = c  : (0, n/2, -c)
    point p           : (1, -p, |p|²)      point ∞ : (0, 0, 1)

    A point component also keeps `point`: its form has b² = AD, and rounding
    under a transform leaves b² - AD at noise level, which the square root in
    the distance formula amplifies. Distances to it are measured from `point`.
    """

    A: float
    B: complex
    D: float
    point: Optional[SpherePoint] = None

    @classmethod
    def normalized(cls, A: float, B: complex, D: float) -> "GeneralizedCircle":
        scale = max(abs(A), abs(B), abs(D))
        if scale == 0.0:
            raise BadParameters("degenerate generalized circle")
        return cls(float(A) / scale, complex(B) / scale, float(D) / scale)

    @classmethod
    def at_point(cls, p: SpherePoint) -> "GeneralizedCircle":
        if p.is_infinity:
            return cls(0.0, 0j, 1.0, point=p)
        form = cls.normalized(1.0, -p.z, abs(p.z) ** 2)
        return cls(form.A, form.B, form.D, point=p)

    def value(self, z: complex) -> float:
        return self.A * abs(z) ** 2 + 2.0 * (self.B.conjugate() * z).real + self.D

    def transformed(self, T: SphericalIsometry) -> "GeneralizedCircle":
        """Image under T: H' = N* H N with N the matrix of T⁻¹."""
        if self.point is not None:
            return GeneralizedCircle.at_point(T.apply(self.point))
        N = T.inverse()._matrix()
        H = np.array([[self.A, self.B], [self.B.conjugate(), self.D]], dtype=complex)
        Hp = N.conj().T @ H @ N
        return GeneralizedCircle.normalized(Hp[0, 0].real, Hp[0, 1], Hp[1, 1].real)


def _origin_distance(A, B, D):
    """Euclidean distance from 0 to the zero set of (A, B, D); works on arrays."""
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    b = np.abs(B)
    den = b + np.sqrt(np.maximum(0.0, b * b - A * D))
    num = np.abs(D)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), np.where(num == 0.0, 0.0, np.inf))
    return out


def _tau_to_point(p: SpherePoint, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore"):
        if p.is_infinity:
            return 1.0 / np.abs(z)
        return np.abs(z - p.z) / np.abs(1.0 + np.conj(p.z) * z)


def _tau_to_form(form: GeneralizedCircle, z: np.ndarray) -> np.ndarray:
    """min over the component of τ(z, ·), for finite z (array)."""
    if form.point is not None:
        return _tau_to_point(form.point, z)
    A, B, D = form.A, form.B, form.D
    zb = np.conj(z)
    Ap = A - B * zb - np.conj(B) * z + D * np.abs(z) ** 2
    Bp = A * z + B - np.conj(B) * z * z - D * z
    Dp = A * np.abs(z) ** 2 + B * zb + np.conj(B) * z + D
    return _origin_distance(Ap.real, Bp, Dp.real)


def _tau_to_form_at_infinity(form: GeneralizedCircle) -> float:
    p = form.point
    if p is not None:
        if p.is_infinity:
            return 0.0
        return math.inf if p.z == 0 else 1.0 / abs(p.z)
    return float(_origin_distance(form.D, -np.conj(form.B), form.A))


def _euclid_to_form(form: GeneralizedCircle, z: np.ndarray) -> np.ndarray:
    if form.point is not None:
        z = np.asarray(z, dtype=complex)
        return np.full(np.shape(z), np.inf) if form.point.is_infinity else np.abs(z - form.point.z)
    A, B, D = form.A, form.B, form.D
    Bp = A * z + B
    Dp = A * np.abs(z) ** 2 + 2.0 * (np.conj(B) * z).real + D
    return _origin_distance(np.full(np.shape(z), A), Bp, Dp)


# -----------------------------------------------------------------------------
# boundary curves (parameterized components)
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryCurve:
    """circle (center, radius) | line Re(n̄z) = offset | isolated point."""

    kind: Literal["circle", "line", "point"]
    anchor: complex = 0j
    size: float = 0.0

    def point(self, phi: float) -> SpherePoint:
        if self.kind == "circle":
            return SpherePoint.of(self.anchor + self.size * complex(math.cos(phi), math.sin(phi)))
        if self.kind == "line":
            half = 0.5 * phi
            if abs(math.cos(half)) < 1e-300:
                return INFINITY
            return SpherePoint.of(self.anchor * complex(self.size, math.tan(half)))
        return SpherePoint.of(self.anchor)

    def form(self) -> GeneralizedCircle:
        if self.kind == "circle":
            c = self.anchor
            return GeneralizedCircle.normalized(1.0, -c, abs(c) ** 2 - self.size ** 2)
        if self.kind == "line":
            return GeneralizedCircle.normalized(0.0, self.anchor / 2.0, -self.size)
        return GeneralizedCircle.at_point(SpherePoint.of(self.anchor))


# -----------------------------------------------------------------------------
# Domain variants
# -----------------------------------------------------------------------------

class Domain:
    """Base of the tagged union. Subclasses are frozen dataclasses."""

    kind: str = "domain"

    # -- membership ----------------------------------------------------------
    def contains(self, z: PointLike) -> bool:
        z = as_point(z)
        if z.is_infinity:
            return self.contains_infinity
        return bool(self.contains_array(np.array([z.z]))[0])

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def contains_infinity(self) -> bool:
        return False

    # -- structure -----------------------------------------------------------
    def curves(self) -> List[BoundaryCurve]:
        raise NotImplementedError

    def boundary_point(self, curve: BoundaryCurve, phi: float) -> SpherePoint:
        return curve.point(phi)

    def components(self) -> List[GeneralizedCircle]:
        return [c.form() for c in self.curves()]

    @property
    def base(self) -> "Domain":
        return self

    @property
    def isometry(self) -> Optional[SphericalIsometry]:
        return None

    # -- closed forms (finite z inside the domain; None when not available) ----
    def _d_closed(self, z: complex) -> Optional[float]:
        return None

    def _eps_closed(self, z: SpherePoint) -> Optional[float]:
        return None

    def _sigma_diam_closed(self) -> Optional[float]:
        return None

    def _center_closed(self) -> Optional[SpherePoint]:
        return None

    # -- flags -----------------------------------------------------------------
    @property
    def spherically_convex(self) -> bool:
        return False

    @property
    def is_hemisphere(self) -> bool:
        return False

    @property
    def is_spherical_disk(self) -> bool:
        return False

    @property
    def is_planar(self) -> bool:
        return not self.contains_infinity

    @property
    def has_isolated_boundary_point(self) -> bool:
        return any(c.kind == "point" for c in self.curves())

    @property
    def radially_symmetric(self) -> bool:
        """Every density/distance factor depends on |z| only."""
        return False

    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.spec()


def _positive(name: str, value: float) -> float:
    v = float(value)
    if not (math.isfinite(v) and v > 0.0):
        raise BadParameters(f"{name} must be a positive finite number, got {value}")
    return v


@dataclass(frozen=True)
class EuclideanDisk(Domain):
    center: complex = 0j
    radius: float = 1.0
    kind = "disk"

    def __post_init__(self) -> None:
        c = complex(self.center)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise BadParameters("disk center must be finite")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", _positive("radius", self.radius))

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) < self.radius

    def curves(self) -> List[BoundaryCurve]:
        return [BoundaryCurve("circle", self.center, self.radius)]

    def _d_closed(self, z: complex) -> Optional[float]:
        return self.radius - abs(z - self.center)

    def _eps_closed(self, z: SpherePoint) -> Optional[float]:
        if self.center != 0:
            return None
        rho = z.modulus
        return (self.radius - rho) / (1.0 + self.radius * rho)

    def _sigma_diam_closed(self) -> Optional[float]:
        c, R = abs(self.center), self.radius
        if R * R - c * c <= 1.0 + _CONVEX_TOL:
            return 1.0
        return chordal(c - R, c + R)

    def _center_closed(self) -> Optional[SpherePoint]:
        return ORIGIN if self.center == 0 else None

    @property
    def _excess(self) -> float:
        return self.radius ** 2 - abs(self.center) ** 2

    @property
    def spherically_convex(self) -> bool:
        return self._excess <= 1.0 + _CONVEX_TOL

    @property
    def is_hemisphere(self) -> bool:
        return abs(self._excess - 1.0) <= _CONVEX_TOL

    @property
    def is_spherical_disk(self) -> bool:
        return True

    @property
    def radially_symmetric(self) -> bool:
        return self.center == 0

    def spec(self) -> str:
        return f"disk:{self.center.real!r},{self.center.imag!r},{self.radius!r}"


@dataclass(frozen=True)
class HalfPlane(Domain):
    """{z : Re(conj(n)·z) > c} with |n| = 1."""

    normal: complex = 1 + 0j
    offset: float = 0.0
    kind = "half"

    def __post_init__(self) -> None:
        n = complex(self.normal)
        if abs(n) == 0.0 or not math.isfinite(abs(n)):
            raise BadParameters("half-plane normal must be a nonzero finite vector")
        c = float(self.offset)
        if not math.isfinite(c):
            raise BadParameters("half-plane offset must be finite")
        object.__setattr__(self, "normal", n / abs(n))
        object.__setattr__(self, "offset", c)

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        return (np.conj(self.normal) * np.asarray(z)).real > self.offset

    def curves(self) -> List[BoundaryCurve]:
        return [BoundaryCurve("line", self.normal, self.offset)]

    def _d_closed(self, z: complex) -> Optional[float]:
        return (self.normal.conjugate() * z).real - self.offset

    def _sigma_diam_closed(self) -> Optional[float]:
        c = self.offset
        if c >= 0.0:
            return 1.0
        return 1.0 / math.hypot(1.0, c)

    def _center_closed(self) -> Optional[SpherePoint]:
        c = self.offset
        return SpherePoint.of(self.normal * (c + math.hypot(c, 1.0)))

    @property
    def spherically_convex(self) -> bool:
        return self.offset >= 0.0

    @property
    def is_hemisphere(self) -> bool:
        return self.offset == 0.0

    @property
    def is_spherical_disk(self) -> bool:
        return True

    def spec(self) -> str:
        return f"half:{self.normal.real!r},{self.normal.imag!r},{self.offset!r}"


@dataclass(frozen=True)
class ExteriorDisk(Domain):
    """{z ∈ Ĉ : |z| > R}; contains ∞."""

    radius: float = 1.0
    kind = "ext"

    def __post_init__(self) -> None:
        object.__setattr__(self, "radius", _positive("radius", self.radius))

    @property
    def contains_infinity(self) -> bool:
        return True

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        return np.abs(np.asarray(z)) > self.radius

    def curves(self) -> List[BoundaryCurve]:
        return [BoundaryCurve("circle", 0j, self.radius)]

    def _d_closed(self, z: complex) -> Optional[float]:
        return abs(z) - self.radius

    def _eps_closed(self, z: SpherePoint) -> Optional[float]:
        R = self.radius
        if z.is_infinity:
            return 1.0 / R
        rho = z.modulus
        return (rho - R) / (1.0 + R * rho)

    def _sigma_diam_closed(self) -> Optional[float]:
        R = self.radius
        return 1.0 if R >= 1.0 else 2.0 * R / (1.0 + R * R)

    def _center_closed(self) -> Optional[SpherePoint]:
        return INFINITY

    @property
    def spherically_convex(self) -> bool:
        return self.radius >= 1.0 - _CONVEX_TOL

    @property
    def is_hemisphere(self) -> bool:
        return abs(self.radius - 1.0) <= _CONVEX_TOL

    @property
    def is_spherical_disk(self) -> bool:
        return True

    @property
    def radially_symmetric(self) -> bool:
        return True

    def spec(self) -> str:
        return f"ext:{self.radius!r}"


@dataclass(frozen=True)
class PuncturedDisk(Domain):
    """{z : 0 < |z| < R}; the puncture is an isolated boundary point."""

    radius: float = 1.0
    kind = "punct"

    def __post_init__(self) -> None:
        object.__setattr__(self, "radius", _positive("radius", self.radius))

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        m = np.abs(np.asarray(z))
        return (m > 0.0) & (m < self.radius)

    def curves(self) -> List[BoundaryCurve]:
        return [BoundaryCurve("point", 0j), BoundaryCurve("circle", 0j, self.radius)]

    def _d_closed(self, z: complex) -> Optional[float]:
        rho = abs(z)
        return min(rho, self.radius - rho)

    def _eps_closed(self, z: SpherePoint) -> Optional[float]:
        rho, R = z.modulus, self.radius
        return min(rho, (R - rho) / (1.0 + R * rho))

    def _sigma_diam_closed(self) -> Optional[float]:
        return 1.0

    @property
    def radially_symmetric(self) -> bool:
        return True

    def spec(self) -> str:
        return f"punct:{self.radius!r}"


@dataclass(frozen=True)
class Annulus(Domain):
    """{z : r < |z| < 1}."""

    inner: float = 0.5
    kind = "ann"

    def __post_init__(self) -> None:
        r = float(self.inner)
        if not (0.0 < r < 1.0):
            raise BadParameters(f"annulus inner radius must lie in (0, 1), got {self.inner}")
        object.__setattr__(self, "inner", r)

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        m = np.abs(np.asarray(z))
        return (m > self.inner) & (m < 1.0)

    def curves(self) -> List[BoundaryCurve]:
        return [BoundaryCurve("circle", 0j, self.inner), BoundaryCurve("circle", 0j, 1.0)]

    def _d_closed(self, z: complex) -> Optional[float]:
        rho = abs(z)
        return min(rho - self.inner, 1.0 - rho)

    def _eps_closed(self, z: SpherePoint) -> Optional[float]:
        rho, r = z.modulus, self.inner
        return min((rho - r) / (1.0 + r * rho), (1.0 - rho) / (1.0 + rho))

    def _sigma_diam_closed(self) -> Optional[float]:
        return 1.0

    @property
    def radially_symmetric(self) -> bool:
        return True

    def spec(self) -> str:
        return f"ann:{self.inner!r}"


@dataclass(frozen=True)
class IsometryImage(Domain):
    """T(base). Nested images are flattened into a single isometry on construction."""

    T: SphericalIsometry = field(default_factory=SphericalIsometry)
    inner_domain: Domain = field(default_factory=EuclideanDisk)
    kind = "isom"

    def __post_init__(self) -> None:
        inner = self.inner_domain
        if isinstance(inner, IsometryImage):
            object.__setattr__(self, "T", self.T.compose(inner.T))
            object.__setattr__(self, "inner_domain", inner.inner_domain)

    @property
    def base(self) -> Domain:
        return self.inner_domain

    @property
    def isometry(self) -> Optional[SphericalIsometry]:
        return self.T

    @property
    def inverse(self) -> SphericalIsometry:
        return self.T.inverse()

    @property
    def contains_infinity(self) -> bool:
        return self.inner_domain.contains(self.T.pole)

    def contains(self, z: PointLike) -> bool:
        return self.inner_domain.contains(self.inverse.apply(as_point(z)))

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        w, at_inf = self.inverse.apply_array(np.asarray(z, dtype=complex))
        inside = self.inner_domain.contains_array(w)
        return np.where(at_inf, self.inner_domain.contains_infinity, inside)

    def curves(self) -> List[BoundaryCurve]:
        return self.inner_domain.curves()

    def boundary_point(self, curve: BoundaryCurve, phi: float) -> SpherePoint:
        return self.T.apply(curve.point(phi))

    def components(self) -> List[GeneralizedCircle]:
        return [c.form().transformed(self.T) for c in self.inner_domain.curves()]

    def _sigma_diam_closed(self) -> Optional[float]:
        return self.inner_domain._sigma_diam_closed()

    def _center_closed(self) -> Optional[SpherePoint]:
        c = spherical_center(self.inner_domain)
        return None if c is None else self.T.apply(c)

    @property
    def spherically_convex(self) -> bool:
        return self.inner_domain.spherically_convex

    @property
    def is_hemisphere(self) -> bool:
        return self.inner_domain.is_hemisphere

    @property
    def is_spherical_disk(self) -> bool:
        return self.inner_domain.is_spherical_disk

    def spec(self) -> str:
        a = self.T.center
        where = "inf" if a.is_infinity else f"{a.re!r},{a.im!r}"
        return f"isom:{self.T.theta!r},{where}|{self.inner_domain.spec()}"


# -----------------------------------------------------------------------------
# boundary samples
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundarySample:
    points: List[SpherePoint]
    variant: str
    n: int
    # (curve index, parameter) for every point, same order as `points`
    params: List[Tuple[int, float]] = field(default_factory=list, repr=False)


def _curve_counts(curves: Sequence[BoundaryCurve], n: int) -> List[int]:
    n_points = sum(1 for c in curves if c.kind == "point")
    n_arcs = len(curves) - n_points
    share, extra = divmod(n - n_points, max(1, n_arcs))
    counts: List[int] = []
    for c in curves:
        if c.kind == "point":
            counts.append(1)
        else:
            counts.append(share + (1 if extra > 0 else 0))
            extra -= 1
    return counts


def boundary_sample(domain: Domain, n: int) -> BoundarySample:
    if n < 16:
        raise SampleTooSmall(f"boundary sample needs n >= 16, got {n}")
    curves = domain.curves()
    points: List[SpherePoint] = []
    params: List[Tuple[int, float]] = []
    for idx, (curve, m) in enumerate(zip(curves, _curve_counts(curves, n))):
        for j in range(m):
            phi = TWO_PI * j / m
            points.append(domain.boundary_point(curve, phi))
            params.append((idx, phi))
    return BoundarySample(points=points, variant=domain.kind, n=len(points), params=params)


def _sampled_min(domain: Domain, f: Callable[[SpherePoint], float], n: int) -> float:
    """Coarse scan of every boundary component, then golden-section on the best arc."""
    curves = domain.curves()
    best = math.inf
    for curve, m in zip(curves, _curve_counts(curves, n)):
        if curve.kind == "point":
            best = min(best, f(domain.boundary_point(curve, 0.0)))
            continue
        step = TWO_PI / m
        values = [f(domain.boundary_point(curve, j * step)) for j in range(m)]
        k = int(np.argmin(values))
        g = golden_section(
            lambda phi: f(domain.boundary_point(curve, phi)),
            (k - 1) * step,
            (k + 1) * step,
            tol=1e-12,
            max_iter=200,
        )
        best = min(best, values[k], g.value)
    return best


# -----------------------------------------------------------------------------
# d_Ω, ε_Ω, δ_Ω
# -----------------------------------------------------------------------------

def _inside(domain: Domain, z: PointLike) -> SpherePoint:
    z = as_point(z)
    if not domain.contains(z):
        raise PointNotInDomain(f"{z} is not in {domain.spec()}")
    return z


def contains(domain: Domain, z: PointLike) -> bool:
    return domain.contains(z)


def euclid_dist(domain: Domain, z: PointLike, method: DistanceMethod = "auto") -> float:
    z = _inside(domain, z)
    if z.is_infinity:
        raise InfinityHasNoEuclideanDistance(f"d is not defined at infinity for {domain.spec()}")
    zc = z.z
    if method == "sampled":
        def gap(a: SpherePoint) -> float:
            return math.inf if a.is_infinity else abs(zc - a.z)

        return _sampled_min(domain, gap, BOUNDARY_SAMPLES)
    if method == "auto":
        closed = domain._d_closed(zc)
        if closed is not None:
            return closed
    return float(min(_euclid_to_form(f, np.array(zc)) for f in domain.components()))


def eps_dist(domain: Domain, z: PointLike, method: DistanceMethod = "auto") -> float:
    z = _inside(domain, z)
    if method == "sampled":
        return _sampled_min(domain, lambda a: tau(z, a), BOUNDARY_SAMPLES)
    if method == "auto":
        if isinstance(domain, IsometryImage):
            return eps_dist(domain.base, domain.inverse.apply(z), "auto")
        closed = domain._eps_closed(z)
        if closed is not None:
            return closed
    forms = domain.components()
    if z.is_infinity:
        return min(_tau_to_form_at_infinity(f) for f in forms)
    return float(min(_tau_to_form(f, np.array(z.z)) for f in forms))


def delta_dist(domain: Domain, z: PointLike, method: DistanceMethod = "auto") -> float:
    return sigma_from_tau(eps_dist(domain, z, method))


def euclid_dist_array(domain: Domain, z: np.ndarray) -> np.ndarray:
    """d_Ω on finite interior points (no membership check)."""
    z = np.asarray(z, dtype=complex)
    return np.min([_euclid_to_form(f, z) for f in domain.components()], axis=0)


def eps_dist_array(domain: Domain, z: np.ndarray) -> np.ndarray:
    """ε_Ω on finite interior points (no membership check)."""
    z = np.asarray(z, dtype=complex)
    return np.min([_tau_to_form(f, z) for f in domain.components()], axis=0)


# -----------------------------------------------------------------------------
# spherical diameter of the complement
# -----------------------------------------------------------------------------

def _point_vector(p: SpherePoint) -> np.ndarray:
    return np.array(p.to_sphere())


def _sampled_diameter(domain: Domain, n: int) -> float:
    sample = boundary_sample(domain, max(16, n))
    for a in sample.points:
        if not domain.contains(antipode(a)):
            return 1.0

    X = np.array([_point_vector(p) for p in sample.points])
    best, bi, bj = -1.0, 0, 0
    chunk = 128
    for start in range(0, len(X), chunk):
        block = np.linalg.norm(X[start:start + chunk, None, :] - X[None, :, :], axis=-1)
        k = int(np.argmax(block))
        i, j = divmod(k, len(X))
        if block[i, j] > best:
            best, bi, bj = float(block[i, j]), start + i, j

    curves = domain.curves()
    (ci, pi), (cj, pj) = sample.params[bi], sample.params[bj]

    def neg_sigma(u: float, v: float) -> float:
        return -chordal(domain.boundary_point(curves[ci], u), domain.boundary_point(curves[cj], v))

    h0 = TWO_PI / max(1, sample.n // max(1, len(curves)))
    _, value, evals = coordinate_descent(neg_sigma, (pi, pj), h0, sweeps=3, tol=1e-12)
    logger.debug("diameter search | %s | n=%d evals=%d", domain.spec(), sample.n, evals)
    return min(1.0, max(0.5 * best, -value))


def spherical_diameter_complement(
    domain: Domain,
    method: Literal["auto", "sampled"] = "auto",
    n: Optional[int] = None,
) -> float:
    if method == "auto":
        closed = domain._sigma_diam_closed()
        if closed is not None:
            return closed
    return _sampled_diameter(domain, n or DIAMETER_SAMPLES)


def tau_diameter_complement(domain: Domain, method: Literal["auto", "sampled"] = "auto") -> float:
    return tau_from_sigma(spherical_diameter_complement(domain, method))


# -----------------------------------------------------------------------------
# spherical disks: centers, τ-disks
# -----------------------------------------------------------------------------

def spherical_center(domain: Domain, method: Literal["auto", "boundary"] = "auto") -> Optional[SpherePoint]:
    """Center of a spherical disk (None for punctured disks and annuli)."""
    if not domain.is_spherical_disk:
        return None
    if method == "auto":
        closed = domain._center_closed()
        if closed is not None:
            return closed
    curve = domain.curves()[0]
    X = [_point_vector(domain.boundary_point(curve, phi)) for phi in (0.0, TWO_PI / 3, 2 * TWO_PI / 3)]
    normal = np.cross(X[1] - X[0], X[2] - X[0])
    normal /= np.linalg.norm(normal)
    for sign in (1.0, -1.0):
        candidate = SpherePoint.from_sphere(*(sign * normal))
        if domain.contains(candidate):
            return candidate
    raise BadParameters(f"no spherical center found for {domain.spec()}")


def tau_disk(z: PointLike, eps: float) -> Domain:
    """{w : τ(w, z) < eps} for finite z with eps·|z| ≤ 1, as a Euclidean disk or half-plane."""
    z = as_point(z)
    if z.is_infinity:
        raise BadParameters("tau_disk needs a finite center")
    eps = _positive("eps", eps)
    zc = z.z
    rho = abs(zc)
    gap = 1.0 - (eps * rho) ** 2
    if abs(eps * rho - 1.0) <= 1e-12:
        n = zc / rho
        return HalfPlane(n, (rho * rho - eps * eps) / (2.0 * (1.0 + eps * eps) * rho))
    if gap < 0.0:
        raise BadParameters(f"tau-disk of radius {eps} around {z} contains infinity")
    center = (1.0 + eps * eps) * zc / gap
    radius = eps * (1.0 + rho * rho) / gap
    return EuclideanDisk(center, radius)


# -----------------------------------------------------------------------------
# sampling
# -----------------------------------------------------------------------------

def random_points(domain: Domain, n: int, rng: np.random.Generator, max_batches: int = 500) -> np.ndarray:
    """n finite points of the domain, uniform w.r.t. spherical area."""
    out: List[np.ndarray] = []
    have = 0
    batch = max(64, 4 * n)
    for _ in range(max_batches):
        z = random_sphere_points(rng, batch)
        keep = z[domain.contains_array(z)]
        out.append(keep)
        have += len(keep)
        if have >= n:
            return np.concatenate(out)[:n]
    raise BadParameters(f"could not draw {n} points from {domain.spec()}")
