# app/services/constants.py — domain constants C, C̃, Ĉ, C̃′, Ĉ′ as searched infima
from __future__ import annotations

import logging
import math
import os
import time
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer

from app.services.domains import (
    Annulus,
    Domain,
    EuclideanDisk,
    ExteriorDisk,
    PuncturedDisk,
    eps_dist,
    eps_dist_array,
    euclid_dist,
    euclid_dist_array,
    spherical_center,
    spherical_diameter_complement,
)
from app.services.metrics import lambda_array, lambda_density, mu_array, mu_density
from app.utils.errors import BudgetTooSmall, EuclideanKindAtInfinity, PointNotInDomain
from app.utils.search import coordinate_descent, fibonacci_plane, lattice_spacing, scan_then_refine
from app.utils.sphere import (
    INFINITY,
    PointLike,
    SpherePoint,
    as_point,
    format_point,
    isometry_sending_to_zero,
    sigma_from_tau,
    tau_from_sigma,
)

logger = logging.getLogger("spherical-density")

DEFAULT_GRID = int(os.getenv("SPHDENS_GRID", "256"))
DEFAULT_REFINE_ITERS = int(os.getenv("SPHDENS_REFINE_ITERS", "200"))
DEFAULT_TARGET_TOL = float(os.getenv("SPHDENS_TARGET_TOL", "1e-10"))

Kind = Literal["d_lambda", "delta_mu", "eps_mu"]
KINDS: Tuple[Kind, ...] = ("d_lambda", "delta_mu", "eps_mu")

# how far inside the boundary an unattained infimum is witnessed
_BOUNDARY_APPROACH = 1e-10
# multi-start refinement keeps this many lattice minima
_STARTS = 8


class SearchBudget(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid: int = DEFAULT_GRID
    refine_iters: int = DEFAULT_REFINE_ITERS
    target_tol: float = DEFAULT_TARGET_TOL


class InfimumReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: str
    value: float
    witness: SpherePoint
    samples_evaluated: int
    refinement_radius: float
    closed_form_used: bool

    @field_serializer("witness")
    def _ser_witness(self, p: SpherePoint) -> str:
        return format_point(p)


class ConstantsReport(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    domain: str
    C: float
    Ctilde: float
    Chat: float
    Ctilde_prime: float
    Chat_prime: float
    sigma_diam_complement: float
    tau_diam_complement: float
    witnesses: Dict[str, str]
    budget: SearchBudget
    closed_form_used: Dict[str, bool]


# -----------------------------------------------------------------------------
# pointwise products
# -----------------------------------------------------------------------------

def pointwise_product(kind: Kind, domain: Domain, z: PointLike) -> float:
    z = as_point(z)
    if not domain.contains(z):
        raise PointNotInDomain(f"{z} is not in {domain.spec()}")
    if kind == "d_lambda":
        if z.is_infinity:
            raise EuclideanKindAtInfinity("d_lambda is not defined at infinity")
        return euclid_dist(domain, z) * lambda_density(domain, z)
    eps = eps_dist(domain, z)
    mu = mu_density(domain, z)
    if kind == "eps_mu":
        return eps * mu
    return sigma_from_tau(eps) * mu


def product_array(kind: Kind, domain: Domain, z: np.ndarray) -> np.ndarray:
    """Vectorized product on finite interior points."""
    z = np.asarray(z, dtype=complex)
    if kind == "d_lambda":
        return euclid_dist_array(domain, z) * lambda_array(domain, z)
    eps = eps_dist_array(domain, z)
    mu = mu_array(domain, z)
    if kind == "eps_mu":
        return eps * mu
    return eps / np.sqrt(1.0 + eps * eps) * mu


def _safe_product(kind: Kind, domain: Domain, z: SpherePoint) -> float:
    """Product, or +inf where the point is outside (or at ∞ for d_lambda)."""
    if (kind == "d_lambda" and z.is_infinity) or not domain.contains(z):
        return math.inf
    return pointwise_product(kind, domain, z)


# -----------------------------------------------------------------------------
# closed forms
# -----------------------------------------------------------------------------

def _closed_form(kind: Kind, domain: Domain) -> Optional[Tuple[float, SpherePoint]]:
    """Closed forms on D_rho, carried to every spherical disk by isometry invariance."""
    if kind == "d_lambda":
        if not isinstance(domain, EuclideanDisk):
            return None
        # d·λ = R/(R+|z-c|) decreases to 1/2 at the boundary
        edge = domain.center + domain.radius * (1.0 - 2.0 * _BOUNDARY_APPROACH)
        return 0.5, SpherePoint.of(edge)

    if not domain.is_spherical_disk:
        return None
    center = spherical_center(domain)
    if center is None:
        return None
    rho = eps_dist(domain, center)
    if kind == "delta_mu":
        value = rho / (1.0 + rho * rho) if rho > 1.0 else 0.5
        radial = 1.0 / rho if rho > 1.0 else rho * (1.0 - _BOUNDARY_APPROACH)
    else:
        value = 2.0 * rho / (1.0 + rho) ** 2 if rho > 1.0 else 0.5
        radial = 1.0 if rho > 1.0 else rho * (1.0 - _BOUNDARY_APPROACH)
    chart = isometry_sending_to_zero(center)
    return value, chart.inverse().apply(SpherePoint.of(radial))


# -----------------------------------------------------------------------------
# searches
# -----------------------------------------------------------------------------

def _radial_chart(domain: Domain) -> Callable[[float], float]:
    if isinstance(domain, EuclideanDisk) or isinstance(domain, PuncturedDisk):
        R = domain.radius
        return lambda u: R * u
    if isinstance(domain, Annulus):
        r = domain.inner
        return lambda u: r + (1.0 - r) * u
    if isinstance(domain, ExteriorDisk):
        R = domain.radius
        return lambda u: R / u
    raise ValueError(f"no radial chart for {domain.kind!r}")


def _radial_search(kind: Kind, domain: Domain, budget: SearchBudget) -> InfimumReport:
    chart = _radial_chart(domain)

    def f(u: float) -> float:
        return _safe_product(kind, domain, SpherePoint.of(chart(u)))

    best = scan_then_refine(f, budget.grid, tol=budget.target_tol, max_iter=budget.refine_iters)
    value, witness = best.value, SpherePoint.of(chart(best.x))
    evaluated = best.evaluations
    if domain.contains_infinity and kind != "d_lambda":
        at_inf = pointwise_product(kind, domain, INFINITY)
        evaluated += 1
        if at_inf < value:
            value, witness = at_inf, INFINITY
    return InfimumReport(
        kind=kind,
        value=value,
        witness=witness,
        samples_evaluated=evaluated,
        refinement_radius=1.0 / (budget.grid + 1.0),
        closed_form_used=False,
    )


def _lattice_search(kind: Kind, domain: Domain, budget: SearchBudget) -> InfimumReport:
    n = budget.grid * budget.grid
    z = fibonacci_plane(n)
    z = z[domain.contains_array(z)]
    evaluated = len(z)

    candidates: List[Tuple[float, SpherePoint]] = []
    if len(z):
        with np.errstate(all="ignore"):
            values = product_array(kind, domain, z)
        values = np.where(np.isfinite(values), values, np.inf)
        order = np.argsort(values)[:_STARTS]
        candidates = [(float(values[i]), SpherePoint.of(complex(z[i]))) for i in order]
    if domain.contains_infinity and kind != "d_lambda":
        candidates.append((pointwise_product(kind, domain, INFINITY), INFINITY))
        evaluated += 1

    h0 = lattice_spacing(n)
    best_value, best_point = math.inf, INFINITY
    for _, start in candidates:
        back = isometry_sending_to_zero(start).inverse()

        def f(x: float, y: float) -> float:
            return _safe_product(kind, domain, back.apply(SpherePoint(x, y)))

        (x, y), value, evals = coordinate_descent(
            f, (0.0, 0.0), h0, sweeps=3, tol=budget.target_tol, max_iter=budget.refine_iters
        )
        evaluated += evals
        if value < best_value:
            best_value, best_point = value, back.apply(SpherePoint(x, y))

    logger.debug(
        "lattice search | %s %s | starts=%d evaluated=%d value=%.12g",
        kind, domain.spec(), len(candidates), evaluated, best_value,
    )
    return InfimumReport(
        kind=kind,
        value=best_value,
        witness=best_point,
        samples_evaluated=evaluated,
        refinement_radius=h0,
        closed_form_used=False,
    )


def infimum(
    kind: Kind,
    domain: Domain,
    budget: Optional[SearchBudget] = None,
    closed_form: bool = True,
) -> InfimumReport:
    budget = budget or SearchBudget()
    if budget.grid < 64:
        raise BudgetTooSmall(f"grid must be at least 64, got {budget.grid}")
    if closed_form:
        hit = _closed_form(kind, domain)
        if hit is not None:
            value, witness = hit
            return InfimumReport(
                kind=kind,
                value=value,
                witness=witness,
                samples_evaluated=0,
                refinement_radius=0.0,
                closed_form_used=True,
            )
    if domain.radially_symmetric:
        return _radial_search(kind, domain, budget)
    return _lattice_search(kind, domain, budget)


# -----------------------------------------------------------------------------
# all five constants
# -----------------------------------------------------------------------------

def _cross_seed(reports: Dict[str, InfimumReport], domain: Domain) -> Dict[str, InfimumReport]:
    """Evaluate every kind at every witness and keep the smaller value."""
    witnesses = [r.witness for r in reports.values()]
    out: Dict[str, InfimumReport] = {}
    for kind, report in reports.items():
        best = report
        if not report.closed_form_used:
            for w in witnesses:
                value = _safe_product(kind, domain, w)
                if value < best.value:
                    best = best.model_copy(update={"value": value, "witness": w})
        out[kind] = best
    return out


def domain_constants(
    domain: Domain,
    budget: Optional[SearchBudget] = None,
    closed_form: bool = True,
) -> ConstantsReport:
    budget = budget or SearchBudget()
    started = time.perf_counter()
    reports = {kind: infimum(kind, domain, budget, closed_form) for kind in KINDS}
    reports = _cross_seed(reports, domain)
    sigma = spherical_diameter_complement(domain, "auto" if closed_form else "sampled")
    C, Ct, Ch = (reports[k].value for k in KINDS)
    logger.debug("constants | %s | %.3fs", domain.spec(), time.perf_counter() - started)
    return ConstantsReport(
        domain=domain.spec(),
        C=C,
        Ctilde=Ct,
        Chat=Ch,
        Ctilde_prime=Ct / sigma,
        Chat_prime=Ch / sigma,
        sigma_diam_complement=sigma,
        tau_diam_complement=tau_from_sigma(sigma),
        witnesses={k: format_point(r.witness) for k, r in reports.items()},
        budget=budget,
        closed_form_used={k: r.closed_form_used for k, r in reports.items()},
    )


def normalized_constants(domain: Domain, budget: Optional[SearchBudget] = None) -> Dict[str, float]:
    report = domain_constants(domain, budget)
    return {"Ctilde_prime": report.Ctilde_prime, "Chat_prime": report.Chat_prime}


def budget_trend(
    kind: Kind,
    domain: Domain,
    steps: int = 3,
    start: Optional[SearchBudget] = None,
) -> List[InfimumReport]:
    """Search reports with the grid doubling and the tolerance shrinking 100x per step."""
    budget = start or SearchBudget(grid=64, target_tol=1e-4)
    out: List[InfimumReport] = []
    for _ in range(steps):
        out.append(infimum(kind, domain, budget, closed_form=False))
        budget = budget.model_copy(
            update={"grid": budget.grid * 2, "target_tol": budget.target_tol / 100.0}
        )
    return out
