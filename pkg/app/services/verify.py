# app/services/verify.py — inequality suites over a seeded domain corpus
from __future__ import annotations

import concurrent.futures as _fut
import functools
import logging
import math
import os
import time
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.providers.coverings import default_covering
from app.services.constants import SearchBudget, domain_constants, pointwise_product
from app.services.domains import (
    Annulus,
    Domain,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
    eps_dist,
    euclid_dist,
    euclid_dist_array,
    random_points,
    spherical_center,
)
from app.services.metrics import covering_residual, curvature_residual, lambda_density, mu_density
from app.services.suite_matrix import SUITE_MATRIX, SuiteSpec, suite_names
from app.utils.errors import BadParameters, EmptyCorpus, SuiteInapplicable
from app.utils.sphere import INFINITY, SpherePoint, format_point, random_isometry

logger = logging.getLogger("spherical-density")

VERIFY_POINTS = int(os.getenv("SPHDENS_VERIFY_POINTS", "200"))
VERIFY_WORKERS = int(os.getenv("SPHDENS_VERIFY_WORKERS", "4"))

CURVATURE_STEP = 1e-3
CURVATURE_POINTS = 20
COVERING_POINTS = 50

# one check: (point label, lhs, rhs); it passes when rhs - lhs >= -tolerance
Check = Tuple[str, float, float]


class SuiteFailure(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    domain: str
    point: str
    lhs: float
    rhs: float
    margin: float


class SkippedMember(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    domain: str
    reason: str
    code: str = SuiteInapplicable.code


class SuiteReport(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    suite: str
    checks: int
    failures: List[SuiteFailure]
    worst_margin: float
    tolerance: float
    skipped: List[SkippedMember]
    passed: bool


class VerifyReport(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    seed: int
    corpus: List[str]
    suites: List[SuiteReport]
    passed: bool


# -----------------------------------------------------------------------------
# corpus
# -----------------------------------------------------------------------------

def default_corpus(seed: int = 42) -> List[Domain]:
    """Disks, exterior disks, a punctured disk, annuli, a half-plane and 4 random isometry images."""
    corpus: List[Domain] = [EuclideanDisk(0j, R) for R in (0.3, 0.5, 1.0, 2.0, 5.0)]
    corpus += [ExteriorDisk(1.0), ExteriorDisk(2.0), PuncturedDisk(1.0), Annulus(0.2), Annulus(0.5)]
    corpus.append(HalfPlane(1 + 0j, 0.0))
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xC0]))
    for base in (EuclideanDisk(0j, 0.5), EuclideanDisk(0j, 2.0), Annulus(0.5), PuncturedDisk(1.0)):
        corpus.append(IsometryImage(random_isometry(rng), base))
    return corpus


# -----------------------------------------------------------------------------
# helpers
# -----------------------------------------------------------------------------

@functools.lru_cache(maxsize=256)
def _constants(domain: Domain, budget: SearchBudget):
    return domain_constants(domain, budget, closed_form=False)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


def _sample_points(domain: Domain, rng: np.random.Generator, n: int, with_infinity: bool = True) -> List[SpherePoint]:
    pts = [SpherePoint.of(complex(z)) for z in random_points(domain, n, rng)]
    if with_infinity and domain.contains_infinity:
        pts.append(INFINITY)
    return pts


def _planar_isometry(domain: Domain, rng: np.random.Generator):
    """Random isometry f with f(Ω) ⊂ C (its pole lies outside Ω)."""
    for _ in range(1000):
        T = random_isometry(rng)
        if not domain.contains(T.pole):
            return T
    raise BadParameters(f"no isometry keeps {domain.spec()} off infinity")


# -----------------------------------------------------------------------------
# suites: each yields checks for one corpus member
# -----------------------------------------------------------------------------

def _lemma1(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    pts = _sample_points(domain, rng, n, with_infinity=False)
    center = spherical_center(domain)
    if isinstance(domain.base, HalfPlane) and center is not None and not center.is_infinity:
        # ε|z| = 1 exactly at the spherical center of a half-plane through 0
        pts.append(center)
    for z in pts:
        eps, d, r = eps_dist(domain, z), euclid_dist(domain, z), z.modulus
        label = format_point(z)
        yield label, eps * r, 1.0
        yield label, eps * (1.0 + r * r) / (1.0 + eps * r), d
        if eps * r < 1.0 - 1e-12:
            yield label, d, eps * (1.0 + r * r) / (1.0 - eps * r)


def _minda_upper(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    for z in _sample_points(domain, rng, n):
        yield format_point(z), eps_dist(domain, z) * mu_density(domain, z), 1.0
    center = spherical_center(domain)
    if center is not None:
        value = eps_dist(domain, center) * mu_density(domain, center)
        yield format_point(center), abs(value - 1.0), 0.0


def _minda_convex(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    for z in _sample_points(domain, rng, n):
        eps, mu = eps_dist(domain, z), mu_density(domain, z)
        bound = (1.0 + eps * eps) / (2.0 * eps)
        yield format_point(z), bound, mu
        if domain.is_hemisphere:
            yield format_point(z), _rel(mu, bound), 0.0


def _main_i(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    c = _constants(domain, budget)
    yield c.witnesses["eps_mu"], c.Chat, 0.5


def _main_ii(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    c = _constants(domain, budget)
    yield c.witnesses["delta_mu"], c.Ctilde, c.Chat
    yield c.witnesses["delta_mu"], c.Ctilde_prime, c.Chat_prime


def _main_iii(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    c = _constants(domain, budget)
    yield c.witnesses["d_lambda"], c.Chat, 2.0 * c.C


def _main_iv(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    c = _constants(domain, budget)
    yield c.witnesses["d_lambda"], c.C, 4.0 * c.Ctilde_prime


def _corollary2(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    T = _planar_isometry(domain, rng)
    image = IsometryImage(T, domain)
    for z in _sample_points(domain, rng, n, with_infinity=False):
        w = T.apply(z)
        before = pointwise_product("d_lambda", domain, z)
        after = pointwise_product("d_lambda", image, w)
        yield format_point(z), 0.5, after / before


def _distortion(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    T = _planar_isometry(domain, rng)
    image = IsometryImage(T, domain)
    for z in _sample_points(domain, rng, n, with_infinity=False):
        scaled = euclid_dist(domain, z) * T.derivative_modulus(z)
        yield format_point(z), 0.5, euclid_dist(image, T.apply(z)) / scaled


def _dlambda_upper(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    for z in _sample_points(domain, rng, n, with_infinity=False):
        yield format_point(z), euclid_dist(domain, z) * lambda_density(domain, z), 1.0


def _invariance(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    T = random_isometry(rng)
    image = IsometryImage(T, domain)
    for z in _sample_points(domain, rng, n):
        w = T.apply(z)
        label = format_point(z)
        eps = eps_dist(domain, z)
        yield label, _rel(eps_dist(image, w), eps), 0.0
        yield label, _rel(eps_dist(image, w, "boundary"), eps), 0.0
        yield label, _rel(mu_density(image, w), mu_density(domain, z)), 0.0


def _exterior_degeneration(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    R = domain.radius
    previous = math.inf
    for k in range(1, 7):
        x = 10.0 ** k
        value = pointwise_product("d_lambda", domain, x)
        label = format_point(SpherePoint(x, 0.0))
        yield label, abs(value - R / (x + R)), 0.0
        yield label, value, previous
        previous = value


def _curvature(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    z = random_points(domain, max(n, 2 * CURVATURE_POINTS), rng)
    keep = (euclid_dist_array(domain, z) >= 0.2) & (np.abs(z) <= 4.0)
    picked = z[keep][:CURVATURE_POINTS]
    for p in picked:
        k_hat = curvature_residual(domain, complex(p), CURVATURE_STEP)
        yield format_point(SpherePoint.of(complex(p))), abs(k_hat + 4.0), 0.0


def _covering(domain: Domain, rng: np.random.Generator, n: int, budget: SearchBudget) -> Iterator[Check]:
    name = default_covering(domain)
    r = 0.5 * np.sqrt(rng.uniform(size=COVERING_POINTS))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=COVERING_POINTS)
    for w in r * np.exp(1j * phi):
        w = complex(w)
        yield f"{name}@{format_point(SpherePoint.of(w))}", covering_residual(domain, name, w), 0.0


_CHECKERS: dict = {
    "lemma1": _lemma1,
    "minda_upper": _minda_upper,
    "minda_convex": _minda_convex,
    "main_i": _main_i,
    "main_ii": _main_ii,
    "main_iii": _main_iii,
    "main_iv": _main_iv,
    "corollary2": _corollary2,
    "distortion": _distortion,
    "dlambda_upper": _dlambda_upper,
    "invariance": _invariance,
    "exterior_degeneration": _exterior_degeneration,
    "curvature": _curvature,
    "covering": _covering,
}


def _skip_reason(spec: SuiteSpec, domain: Domain) -> Optional[str]:
    applies = spec["applies"]
    if applies == "planar" and not domain.is_planar:
        return "domain contains infinity"
    if applies == "convex" and not domain.spherically_convex:
        return "not spherically convex"
    if applies == "exterior" and not isinstance(domain, ExteriorDisk):
        return "not a canonical exterior disk"
    return None


# -----------------------------------------------------------------------------
# runners
# -----------------------------------------------------------------------------

def run_suite(
    name: str,
    corpus: Sequence[Domain],
    seed: int = 42,
    points: Optional[int] = None,
    budget: Optional[SearchBudget] = None,
) -> SuiteReport:
    spec = SUITE_MATRIX.get(name)
    if spec is None:
        raise BadParameters(f"unknown suite {name!r}; known: {', '.join(suite_names())}")
    if not corpus:
        raise EmptyCorpus("the corpus is empty")
    n = points or VERIFY_POINTS
    budget = budget or SearchBudget()
    tol = spec["tolerance"]
    suite_idx = suite_names().index(name)
    checker: Callable[..., Iterator[Check]] = _CHECKERS[name]

    started = time.perf_counter()
    checks = 0
    worst = math.inf
    failures: List[SuiteFailure] = []
    skipped: List[SkippedMember] = []
    for domain_idx, domain in enumerate(corpus):
        reason = _skip_reason(spec, domain)
        if reason is not None:
            skipped.append(SkippedMember(domain=domain.spec(), reason=reason, code=SuiteInapplicable.code))
            continue
        rng = np.random.default_rng(np.random.SeedSequence([seed, suite_idx, domain_idx]))
        member_checks = 0
        for label, lhs, rhs in checker(domain, rng, n, budget):
            member_checks += 1
            margin = rhs - lhs
            worst = min(worst, margin)
            if not (margin >= -tol):
                failures.append(SuiteFailure(domain=domain.spec(), point=label, lhs=lhs, rhs=rhs, margin=margin))
        if member_checks == 0:
            skipped.append(
                SkippedMember(domain=domain.spec(), reason="no admissible sample points", code=SuiteInapplicable.code)
            )
        checks += member_checks

    if checks == 0:
        raise SuiteInapplicable(f"suite {name} applies to no member of the corpus")
    logger.info(
        "suite %s | checks=%d failures=%d worst_margin=%.3e | %.2fs",
        name, checks, len(failures), worst, time.perf_counter() - started,
    )
    return SuiteReport(
        suite=name,
        checks=checks,
        failures=failures,
        worst_margin=worst,
        tolerance=tol,
        skipped=skipped,
        passed=not failures,
    )


def run_suites(
    names: Sequence[str],
    corpus: Sequence[Domain],
    seed: int = 42,
    points: Optional[int] = None,
    budget: Optional[SearchBudget] = None,
    workers: Optional[int] = None,
) -> VerifyReport:
    """Run several suites in parallel; results keep the order of `names`."""
    if not corpus:
        raise EmptyCorpus("the corpus is empty")
    with _fut.ThreadPoolExecutor(max_workers=workers or VERIFY_WORKERS) as pool:
        futures = [pool.submit(run_suite, name, corpus, seed, points, budget) for name in names]
        reports = [f.result() for f in futures]
    return VerifyReport(
        seed=seed,
        corpus=[d.spec() for d in corpus],
        suites=reports,
        passed=all(r.passed for r in reports),
    )
