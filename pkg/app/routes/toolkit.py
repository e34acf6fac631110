# app/routes/toolkit.py — HTTP surface over densities, constants, perfectness and verification
from __future__ import annotations

import json
import logging
import os
import threading
import time
from typing import Any, Dict, List, Optional, Tuple

from fastapi import APIRouter, HTTPException, Query
from fastapi.responses import Response

from app.services.constants import ConstantsReport, SearchBudget, domain_constants
from app.services.example1 import example1_table
from app.services.metrics import density_row, density_sample, density_scan
from app.services.perfectness import boundary_compact_set, up_constant_estimate
from app.services.suite_matrix import suite_names
from app.services.verify import default_corpus, run_suites
from app.utils.errors import ParseError, ToolkitError
from app.utils.parsing import parse_domain, parse_generator
from app.utils.sphere import parse_point

logger = logging.getLogger("spherical-density")

router = APIRouter(tags=["toolkit"])

CACHE_TTL = int(os.getenv("SPHDENS_CACHE_TTL", "600"))
CACHE_MAX_ITEMS = int(os.getenv("SPHDENS_CACHE_MAX_ITEMS", "256"))

# grids above this belong to the CLI, not a request handler
MAX_HTTP_GRID = 2048


# -----------------------------------------------------------------------------
# Simple in-memory cache for constants reports
# -----------------------------------------------------------------------------
class _TTLCache:
    """Expiring map; `set` drops stale entries and keeps at most `max_items`, oldest out first."""

    def __init__(self, ttl_sec: int, max_items: int = 256):
        self.ttl = ttl_sec
        self.max_items = max(1, max_items)
        self._data: Dict[str, Tuple[float, Any]] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)

    def get(self, key: str) -> Optional[Any]:
        with self._lock:
            row = self._data.get(key)
            if not row:
                return None
            ts, val = row
            if (time.time() - ts) > self.ttl:
                self._data.pop(key, None)
                return None
            return val

    def set(self, key: str, val: Any) -> None:
        now = time.time()
        with self._lock:
            self._data.pop(key, None)
            for k in [k for k, (ts, _) in self._data.items() if (now - ts) > self.ttl]:
                del self._data[k]
            while len(self._data) >= self.max_items:
                self._data.pop(next(iter(self._data)))
            self._data[key] = (now, val)


_constants_cache = _TTLCache(CACHE_TTL, CACHE_MAX_ITEMS)


def _json(body: str) -> Response:
    # pydantic writes ±inf as strings; JSONResponse would reject them
    return Response(content=body, media_type="application/json")


def _http_error(e: ToolkitError) -> HTTPException:
    status = 400 if isinstance(e, ParseError) else 422
    detail: Dict[str, Any] = {"error": e.code, "message": str(e)}
    if isinstance(e, ParseError) and e.position is not None:
        detail["position"] = e.position
    return HTTPException(status_code=status, detail=detail)


# -----------------------------------------------------------------------------
# Routes
# -----------------------------------------------------------------------------
@router.get("/v1/density")
def density(
    domain: str = Query(..., description="Domain spec, e.g. disk:0,0,1"),
    at: Optional[str] = Query(None, description="Point, e.g. 0.3+0.1i or inf"),
    scan: int = Query(256, ge=1, le=16384, description="Lattice size when `at` is omitted"),
):
    try:
        dom = parse_domain(domain)
        if at is not None:
            rows: List[Dict[str, Any]] = [density_row(density_sample(dom, parse_point(at)))]
        else:
            rows = [density_row(s) for s in density_scan(dom, scan)]
    except ToolkitError as e:
        raise _http_error(e)
    return _json(json.dumps({"domain": dom.spec(), "rows": rows}))


@router.get("/v1/constants")
def constants(
    domain: str = Query(..., description="Domain spec"),
    grid: Optional[int] = Query(None, ge=64, le=MAX_HTTP_GRID),
    refine: Optional[int] = Query(None, ge=1, le=2000),
    tol: Optional[float] = Query(None, gt=0.0, lt=1.0),
    closed_form: bool = Query(True, description="Use closed forms where the variant has one"),
    fresh: bool = Query(False, description="Bypass the in-memory cache"),
):
    try:
        dom = parse_domain(domain)
        defaults = SearchBudget()
        budget = SearchBudget(
            grid=grid or defaults.grid,
            refine_iters=refine or defaults.refine_iters,
            target_tol=tol or defaults.target_tol,
        )
        key = f"{dom.spec()}|{budget.grid}|{budget.refine_iters}|{budget.target_tol!r}|{closed_form}"
        report: Optional[ConstantsReport] = None if fresh else _constants_cache.get(key)
        if report is None:
            report = domain_constants(dom, budget, closed_form=closed_form)
            _constants_cache.set(key, report)
        else:
            logger.debug("constants cache hit | %s", key)
    except ToolkitError as e:
        raise _http_error(e)
    return _json(report.model_dump_json())


@router.get("/v1/perfectness")
def perfectness(
    generate: Optional[str] = Query(None, description="cantor:<level> or geom:<base>,<rule>,<n>"),
    domain: Optional[str] = Query(None, description="Estimate on a boundary sample of this domain"),
    n: int = Query(256, ge=16, le=4096, description="Boundary sample size"),
):
    if (generate is None) == (domain is None):
        raise HTTPException(
            status_code=400,
            detail={"error": "bad_parameters", "message": "give exactly one of `generate` or `domain`"},
        )
    try:
        E = parse_generator(generate) if generate is not None else boundary_compact_set(parse_domain(domain), n)
        report = up_constant_estimate(E)
    except ToolkitError as e:
        raise _http_error(e)
    return _json(report.model_dump_json())


@router.get("/v1/example1")
def example1(R: float = Query(..., gt=0.0, description="Disk radius")):
    try:
        report = example1_table(R)
    except ToolkitError as e:
        raise _http_error(e)
    return _json(report.model_dump_json())


@router.get("/v1/verify")
def verify(
    suite: str = Query("all", description="Suite name or `all`"),
    seed: int = Query(42),
    points: int = Query(50, ge=1, le=1000, description="Sample points per domain"),
):
    names = suite_names() if suite == "all" else [suite]
    try:
        report = run_suites(names, default_corpus(seed), seed=seed, points=points)
    except ToolkitError as e:
        raise _http_error(e)
    return _json(report.model_dump_json())
