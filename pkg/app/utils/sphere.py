# app/utils/sphere.py — points of the Riemann sphere, σ / τ, antipodes, Isom⁺(Ĉ)
from __future__ import annotations

"""
Arithmetic on C ∪ {∞} with explicit handling of the point at infinity.

Conventions:
- chordal(z, w) = |z-w| / sqrt((1+|z|^2)(1+|w|^2)), valued in [0, 1];
  this is half the Euclidean chord on the unit sphere.
- tau(z, w) = |(z-w) / (1 + z*conj(w))|, +inf exactly at antipodal pairs.
- An isometry is stored as (theta, center) meaning
      T(z) = e^{i theta} (z - a) / (1 + conj(a) z)      (a finite)
      T(z) = -e^{i theta} / z                           (a = infinity)
  Composition goes through an SU(2) matrix and back to this form.

The public API never lets IEEE inf travel through complex division;
the *_array helpers return an explicit "at infinity" mask instead.
"""

import cmath
import math
import re
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from app.utils.errors import BadParameters, PointFormatError

TWO_PI = 2.0 * math.pi

# |1 + z conj(w)| below this is treated as an exact antipodal pair
ANTIPODAL_FLOOR = 1e-300


# -----------------------------------------------------------------------------
# SpherePoint
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class SpherePoint:
    """A finite point (re, im) or the point at infinity."""

    re: float = 0.0
    im: float = 0.0
    infinite: bool = False

    def __post_init__(self) -> None:
        if self.infinite:
            object.__setattr__(self, "re", 0.0)
            object.__setattr__(self, "im", 0.0)
            return
        re_, im_ = float(self.re), float(self.im)
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise BadParameters(f"finite point needs finite coordinates, got ({self.re}, {self.im})")
        object.__setattr__(self, "re", re_)
        object.__setattr__(self, "im", im_)

    @classmethod
    def of(cls, value: Union["SpherePoint", complex, float, int]) -> "SpherePoint":
        if isinstance(value, SpherePoint):
            return value
        z = complex(value)
        if cmath.isinf(z):
            return INFINITY
        return cls(z.real, z.imag)

    @property
    def is_infinity(self) -> bool:
        return self.infinite

    @property
    def z(self) -> complex:
        if self.infinite:
            raise BadParameters("the point at infinity has no complex coordinate")
        return complex(self.re, self.im)

    @property
    def modulus(self) -> float:
        if self.infinite:
            raise BadParameters("the point at infinity has no modulus")
        return math.hypot(self.re, self.im)

    def to_sphere(self) -> Tuple[float, float, float]:
        """Inverse stereographic projection onto the unit sphere (∞ ↦ north pole)."""
        if self.infinite:
            return (0.0, 0.0, 1.0)
        r2 = self.re * self.re + self.im * self.im
        d = 1.0 + r2
        return (2.0 * self.re / d, 2.0 * self.im / d, (r2 - 1.0) / d)

    @classmethod
    def from_sphere(cls, x: float, y: float, zc: float) -> "SpherePoint":
        n = math.sqrt(x * x + y * y + zc * zc)
        if n == 0.0:
            raise BadParameters("zero vector has no direction on the sphere")
        x, y, zc = x / n, y / n, zc / n
        gap = 1.0 - zc
        if gap <= 0.0:
            return INFINITY
        w = complex(x, y) / gap
        if cmath.isinf(w) or cmath.isnan(w):
            return INFINITY
        return cls(w.real, w.imag)

    def __str__(self) -> str:
        return format_point(self)


INFINITY = SpherePoint(infinite=True)
ORIGIN = SpherePoint(0.0, 0.0)

PointLike = Union[SpherePoint, complex, float, int]


def as_point(value: PointLike) -> SpherePoint:
    return SpherePoint.of(value)


# -----------------------------------------------------------------------------
# text form: "re+imi", "re-imi", "inf"
# -----------------------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})i$")
_REAL_RE = re.compile(rf"^([+-]?{_NUM})$")
_IMAG_RE = re.compile(rf"^([+-]?{_NUM})i$")
_ALLOWED = set("0123456789.+-eEi")


def _bad_position(text: str) -> int:
    for i, ch in enumerate(text):
        if ch not in _ALLOWED:
            return i
    return len(text)


def parse_point(text: str) -> SpherePoint:
    s = str(text).strip()
    if s.lower() in ("inf", "infinity", "∞"):
        return INFINITY
    m = _COMPLEX_RE.match(s)
    if m:
        im = float(m.group(3))
        return SpherePoint(float(m.group(1)), -im if m.group(2) == "-" else im)
    m = _REAL_RE.match(s)
    if m:
        return SpherePoint(float(m.group(1)), 0.0)
    m = _IMAG_RE.match(s)
    if m:
        return SpherePoint(0.0, float(m.group(1)))
    raise PointFormatError("malformed point", s, _bad_position(s))


def format_point(p: SpherePoint) -> str:
    if p.is_infinity:
        return "inf"
    negative_im = p.im < 0 or (p.im == 0.0 and math.copysign(1.0, p.im) < 0)
    return f"{p.re!r}{'-' if negative_im else '+'}{abs(p.im)!r}i"


# -----------------------------------------------------------------------------
# σ, τ, antipodes
# -----------------------------------------------------------------------------

def chordal(z: PointLike, w: PointLike) -> float:
    z, w = as_point(z), as_point(w)
    if z.is_infinity and w.is_infinity:
        return 0.0
    if w.is_infinity:
        return 1.0 / math.hypot(1.0, z.modulus)
    if z.is_infinity:
        return 1.0 / math.hypot(1.0, w.modulus)
    num = abs(z.z - w.z)
    return min(1.0, num / (math.hypot(1.0, z.modulus) * math.hypot(1.0, w.modulus)))


def tau(z: PointLike, w: PointLike) -> float:
    z, w = as_point(z), as_point(w)
    if z.is_infinity and w.is_infinity:
        return 0.0
    if z.is_infinity or w.is_infinity:
        finite = w if z.is_infinity else z
        m = finite.modulus
        return math.inf if m == 0.0 else 1.0 / m
    den = abs(1.0 + z.z * w.z.conjugate())
    if den < ANTIPODAL_FLOOR:
        return math.inf
    return abs(z.z - w.z) / den


def antipode(z: PointLike) -> SpherePoint:
    z = as_point(z)
    if z.is_infinity:
        return ORIGIN
    if z.z == 0:
        return INFINITY
    w = -1.0 / z.z.conjugate()
    if cmath.isinf(w):
        return INFINITY
    return SpherePoint(w.real, w.imag)


def sigma_from_tau(t: float) -> float:
    if math.isnan(t) or t < 0:
        raise BadParameters(f"tau must be in [0, +inf], got {t}")
    if math.isinf(t):
        return 1.0
    return t / math.hypot(1.0, t)


def tau_from_sigma(s: float) -> float:
    if math.isnan(s) or s < 0 or s > 1:
        raise BadParameters(f"sigma must be in [0, 1], got {s}")
    if s >= 1.0:
        return math.inf
    return s / math.sqrt((1.0 - s) * (1.0 + s))


def chordal_array(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """σ for arrays of finite points (broadcasting)."""
    return np.abs(z - w) / (np.hypot(1.0, np.abs(z)) * np.hypot(1.0, np.abs(w)))


def sphere_vectors(z: np.ndarray) -> np.ndarray:
    """Unit-sphere images of finite points, shape (..., 3)."""
    r2 = np.abs(z) ** 2
    d = 1.0 + r2
    return np.stack([2.0 * z.real / d, 2.0 * z.imag / d, (r2 - 1.0) / d], axis=-1)


# -----------------------------------------------------------------------------
# Spherical isometries
# -----------------------------------------------------------------------------

def _normalize_angle(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class SphericalIsometry:
    """T(z) = e^{iθ}(z-a)/(1+āz); center a = ∞ encodes T(z) = -e^{iθ}/z."""

    theta: float = 0.0
    center: SpherePoint = ORIGIN

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", _normalize_angle(self.theta))
        object.__setattr__(self, "center", as_point(self.center))

    @property
    def rotation(self) -> complex:
        return cmath.exp(1j * self.theta)

    @property
    def pole(self) -> SpherePoint:
        """T⁻¹(∞)."""
        return antipode(self.center)

    def apply(self, z: PointLike) -> SpherePoint:
        z = as_point(z)
        e = self.rotation
        if self.center.is_infinity:
            if z.is_infinity:
                return ORIGIN
            if z.z == 0:
                return INFINITY
            return SpherePoint.of(-e / z.z)
        a = self.center.z
        if z.is_infinity:
            if a == 0:
                return INFINITY
            return SpherePoint.of(e / a.conjugate())
        den = 1.0 + a.conjugate() * z.z
        if abs(den) < ANTIPODAL_FLOOR:
            return INFINITY
        w = e * (z.z - a) / den
        if cmath.isinf(w) or cmath.isnan(w):
            return INFINITY
        return SpherePoint(w.real, w.imag)

    def __call__(self, z: PointLike) -> SpherePoint:
        return self.apply(z)

    def apply_array(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Image of finite points; returns (values, at_infinity). Values under the mask are 0."""
        z = np.asarray(z, dtype=complex)
        e = self.rotation
        if self.center.is_infinity:
            at_inf = z == 0
            safe = np.where(at_inf, 1.0, z)
            return np.where(at_inf, 0.0, -e / safe), at_inf
        a = self.center.z
        den = 1.0 + a.conjugate() * z
        at_inf = np.abs(den) < ANTIPODAL_FLOOR
        safe = np.where(at_inf, 1.0, den)
        return np.where(at_inf, 0.0, e * (z - a) / safe), at_inf

    def derivative_modulus(self, z: PointLike) -> float:
        """|T'(z)| for finite z; +inf at the pole."""
        z = as_point(z)
        if z.is_infinity:
            raise BadParameters("|T'| is not defined at infinity; use the spherical derivative")
        if self.center.is_infinity:
            m = z.modulus
            return math.inf if m == 0.0 else 1.0 / (m * m)
        a = self.center.z
        den = abs(1.0 + a.conjugate() * z.z)
        if den < ANTIPODAL_FLOOR:
            return math.inf
        return (1.0 + abs(a) ** 2) / (den * den)

    def derivative_modulus_array(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            if self.center.is_infinity:
                return 1.0 / np.abs(z) ** 2
            a = self.center.z
            return (1.0 + abs(a) ** 2) / np.abs(1.0 + a.conjugate() * z) ** 2

    def _matrix(self) -> np.ndarray:
        e = self.rotation
        if self.center.is_infinity:
            m = np.array([[0.0, -e], [1.0, 0.0]], dtype=complex)
        else:
            a = self.center.z
            m = np.array([[e, -e * a], [a.conjugate(), 1.0]], dtype=complex)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return m / cmath.sqrt(det)

    @classmethod
    def _from_matrix(cls, m: np.ndarray) -> "SphericalIsometry":
        p, q, r, s = complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1])
        scale = max(abs(p), abs(q), abs(r), abs(s))
        if abs(s) <= 1e-15 * scale:
            return cls(cmath.phase(-q / r), INFINITY)
        # dividing by s fixes the projective scale, so no sign choice is left
        return cls(cmath.phase(p / s), SpherePoint.of((r / s).conjugate()))

    def inverse(self) -> "SphericalIsometry":
        m = self._matrix()
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)
        return SphericalIsometry._from_matrix(inv)

    def compose(self, other: "SphericalIsometry") -> "SphericalIsometry":
        """self ∘ other."""
        return SphericalIsometry._from_matrix(self._matrix() @ other._matrix())


def identity_isometry() -> SphericalIsometry:
    return SphericalIsometry(0.0, ORIGIN)


def isometry_sending_to_zero(a: PointLike, theta: float = 0.0) -> SphericalIsometry:
    return SphericalIsometry(theta, as_point(a))


def apply_isometry(T: SphericalIsometry, z: PointLike) -> SpherePoint:
    return T.apply(z)


def invert(T: SphericalIsometry) -> SphericalIsometry:
    return T.inverse()


def compose(T1: SphericalIsometry, T2: SphericalIsometry) -> SphericalIsometry:
    return T1.compose(T2)


def random_isometry(
    rng: np.random.Generator,
    *,
    spread: float = 1.5,
    infinity_rate: float = 0.1,
) -> SphericalIsometry:
    theta = float(rng.uniform(0.0, TWO_PI))
    if rng.uniform() < infinity_rate:
        return SphericalIsometry(theta, INFINITY)
    a = complex(rng.normal(0.0, spread), rng.normal(0.0, spread))
    return SphericalIsometry(theta, SpherePoint.of(a))


def random_sphere_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """n finite points, uniform on the sphere (the north pole has probability zero)."""
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    gap = np.maximum(1.0 - v[:, 2], 1e-300)
    return (v[:, 0] + 1j * v[:, 1]) / gap
