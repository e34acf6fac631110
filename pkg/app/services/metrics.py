# app/services/metrics.py — hyperbolic density λ_Ω (curvature −4), spherical density μ_Ω, oracles
from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer

from app.providers.coverings import default_covering, evaluate_covering
from app.services.domains import (
    Annulus,
    Domain,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
    euclid_dist,
    eps_dist,
)
from app.utils.errors import (
    BadParameters,
    DensityUndefinedAtInfinity,
    PointNotInDomain,
    StepTooLargeForPoint,
)
from app.utils.search import fibonacci_plane
from app.utils.sphere import PointLike, SpherePoint, as_point, format_point, sigma_from_tau

logger = logging.getLogger("spherical-density")


# -----------------------------------------------------------------------------
# closed forms on the canonical (non-image) variants
# -----------------------------------------------------------------------------

def _lambda_base(domain: Domain, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if isinstance(domain, EuclideanDisk):
        R = domain.radius
        rho = np.abs(z - domain.center)
        return R / ((R - rho) * (R + rho))
    if isinstance(domain, HalfPlane):
        d = (np.conj(domain.normal) * z).real - domain.offset
        return 1.0 / (2.0 * d)
    if isinstance(domain, ExteriorDisk):
        R = domain.radius
        rho = np.abs(z)
        return R / ((rho - R) * (rho + R))
    if isinstance(domain, PuncturedDisk):
        rho = np.abs(z)
        return 1.0 / (2.0 * rho * np.log(domain.radius / rho))
    if isinstance(domain, Annulus):
        L = math.log(1.0 / domain.inner)
        rho = np.abs(z)
        return (math.pi / (2.0 * L)) / (rho * np.sin(math.pi * np.log(1.0 / rho) / L))
    raise BadParameters(f"no closed-form density for {domain.kind!r}")


def _mu_base_at_infinity(domain: Domain) -> float:
    if isinstance(domain, ExteriorDisk):
        # (1+|z|²) R / (|z|² - R²) → R
        return domain.radius
    raise PointNotInDomain(f"infinity is not in {domain.spec()}")


def mu_array(domain: Domain, z: np.ndarray) -> np.ndarray:
    """μ_Ω on finite interior points (no membership check)."""
    z = np.asarray(z, dtype=complex)
    if isinstance(domain, IsometryImage):
        w, at_inf = domain.inverse.apply_array(z)
        base = domain.base
        safe = np.where(at_inf, _any_finite_point(base), w)
        values = (1.0 + np.abs(safe) ** 2) * _lambda_base(base, safe)
        if np.any(at_inf):
            values = np.where(at_inf, _mu_base_at_infinity(base), values)
        return values
    return (1.0 + np.abs(z) ** 2) * _lambda_base(domain, z)


def lambda_array(domain: Domain, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return mu_array(domain, z) / (1.0 + np.abs(z) ** 2)


def _any_finite_point(domain: Domain) -> complex:
    """Some interior point, used to keep masked array slots finite."""
    if isinstance(domain, EuclideanDisk):
        return domain.center
    if isinstance(domain, HalfPlane):
        return domain.normal * (domain.offset + 1.0)
    if isinstance(domain, ExteriorDisk):
        return 2.0 * domain.radius
    if isinstance(domain, PuncturedDisk):
        return 0.5 * domain.radius
    if isinstance(domain, Annulus):
        return 0.5 * (1.0 + domain.inner)
    raise BadParameters(f"unsupported domain {domain.kind!r}")


# -----------------------------------------------------------------------------
# λ_Ω, μ_Ω
# -----------------------------------------------------------------------------

def mu_density(domain: Domain, z: PointLike) -> float:
    z = as_point(z)
    if not domain.contains(z):
        raise PointNotInDomain(f"{z} is not in {domain.spec()}")
    if isinstance(domain, IsometryImage):
        return mu_density(domain.base, domain.inverse.apply(z))
    if z.is_infinity:
        return _mu_base_at_infinity(domain)
    return float(mu_array(domain, np.array([z.z]))[0])


def lambda_density(domain: Domain, z: PointLike) -> float:
    """Euclidean density; on isometry images this equals λ_base(T⁻¹z)·|(T⁻¹)'(z)|."""
    z = as_point(z)
    if not domain.contains(z):
        raise PointNotInDomain(f"{z} is not in {domain.spec()}")
    if z.is_infinity:
        raise DensityUndefinedAtInfinity(f"λ is not defined at infinity; use mu for {domain.spec()}")
    if isinstance(domain, IsometryImage):
        inv = domain.inverse
        w = inv.apply(z)
        if not w.is_infinity:
            base_lambda = float(_lambda_base(domain.base, np.array([w.z]))[0])
            return base_lambda * inv.derivative_modulus(z)
    return mu_density(domain, z) / (1.0 + z.modulus ** 2)


# -----------------------------------------------------------------------------
# DensitySample
# -----------------------------------------------------------------------------

class DensitySample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: SpherePoint
    lam: Optional[float]     # None at infinity
    mu: float
    d: Optional[float]       # None at infinity
    delta: float
    eps: float

    @field_serializer("point")
    def _ser_point(self, p: SpherePoint) -> str:
        return format_point(p)

    @property
    def eps_mu(self) -> float:
        return self.eps * self.mu

    @property
    def delta_mu(self) -> float:
        return self.delta * self.mu

    @property
    def d_lambda(self) -> Optional[float]:
        return None if self.d is None or self.lam is None else self.d * self.lam


def density_sample(domain: Domain, z: PointLike) -> DensitySample:
    z = as_point(z)
    mu = mu_density(domain, z)
    eps = eps_dist(domain, z)
    if z.is_infinity:
        lam, d = None, None
    else:
        lam, d = lambda_density(domain, z), euclid_dist(domain, z)
    return DensitySample(point=z, lam=lam, mu=mu, d=d, delta=sigma_from_tau(eps), eps=eps)


def density_scan(domain: Domain, n: int = 1024) -> List[DensitySample]:
    """Samples at the points of an n-point sphere lattice that fall inside the domain."""
    if n < 1:
        raise BadParameters(f"scan size must be positive, got {n}")
    z = fibonacci_plane(n)
    inside = z[domain.contains_array(z)]
    logger.debug("density scan | %s | %d of %d lattice points inside", domain.spec(), len(inside), n)
    return [density_sample(domain, SpherePoint.of(complex(w))) for w in inside]


# -----------------------------------------------------------------------------
# oracles
# -----------------------------------------------------------------------------

def covering_residual(domain: Domain, covering: Optional[str], w: complex) -> float:
    """|λ_D(w) − μ_Ω(p(w))·p#(w)| / λ_D(w) for a covering projection p."""
    w = complex(w)
    r = abs(w)
    if r >= 1.0:
        raise BadParameters(f"covering oracle needs |w| < 1, got {w}")
    name = covering or default_covering(domain)
    p, sharp = evaluate_covering(name, domain, w)
    lam_disk = 1.0 / ((1.0 - r) * (1.0 + r))
    return abs(lam_disk - mu_density(domain, p) * sharp) / lam_disk


def curvature_residual(domain: Domain, z: PointLike, h: float = 1e-3) -> float:
    """
    K̂ = −Δ(log λ)(z) / λ(z)² by the 5-point stencil; the exact value is −4.
    Requires d_Ω(z) > 4h.
    """
    z = as_point(z)
    if not (h > 0.0 and math.isfinite(h)):
        raise BadParameters(f"step must be positive, got {h}")
    d = euclid_dist(domain, z)
    if d <= 4.0 * h:
        raise StepTooLargeForPoint(f"d(z) = {d:.3g} is not larger than 4h = {4 * h:.3g}")
    zc = z.z
    stencil = np.array([zc, zc + h, zc - h, zc + 1j * h, zc - 1j * h])
    logs = np.log(lambda_array(domain, stencil))
    laplacian = (logs[1:].sum() - 4.0 * logs[0]) / (h * h)
    lam = math.exp(float(logs[0]))
    return float(-laplacian / (lam * lam))


DENSITY_COLUMNS = ("re", "im", "d", "delta", "eps", "lambda", "mu", "eps_mu", "delta_mu", "d_lambda")


def density_row(sample: DensitySample) -> Dict[str, Optional[float]]:
    """Flat record in DENSITY_COLUMNS order; re/im/d/lambda/d_lambda are None at infinity."""
    p = sample.point
    return {
        "re": None if p.is_infinity else p.re,
        "im": None if p.is_infinity else p.im,
        "d": sample.d,
        "delta": sample.delta,
        "eps": sample.eps,
        "lambda": sample.lam,
        "mu": sample.mu,
        "eps_mu": sample.eps_mu,
        "delta_mu": sample.delta_mu,
        "d_lambda": sample.d_lambda,
    }
