# app/main.py — application object, router mounting, health
from __future__ import annotations

import importlib
import logging
import os
from typing import Dict

from fastapi import FastAPI
from fastapi.routing import APIRoute

logger = logging.getLogger("spherical-density")
logging.basicConfig(level=os.getenv("SPHDENS_LOG_LEVEL", "INFO").upper())

# name -> module exposing a module-level `router`
ROUTERS: Dict[str, str] = {"toolkit": "app.routes.toolkit"}


# --- operation ids come from route name + path -----------------------------
def _fixed_unique_id(route: APIRoute) -> str:
    return route.operation_id or f"{route.name}_{route.path}".strip("/").replace("/", "_")


app = FastAPI(
    title="Spherical Density API",
    description="Hyperbolic and spherical densities, domain constants and uniform perfectness",
    version="2026.10.19",
    generate_unique_id_function=_fixed_unique_id,
)


def _safe_include(name: str, module_path: str) -> bool:
    """Mount `module_path.router`; a broken router module is logged, not fatal."""
    try:
        router = getattr(importlib.import_module(module_path), "router", None)
    except Exception as e:
        logger.error("router %s: import of %s failed: %s", name, module_path, e)
        return False
    if router is None:
        logger.error("router %s: %s defines no `router`", name, module_path)
        return False
    app.include_router(router)
    logger.info("router %s mounted (%d routes)", name, len(router.routes))
    return True


_MOUNTED = {name: _safe_include(name, path) for name, path in ROUTERS.items()}


@app.get("/")
def root():
    return {
        "ok": True,
        "routers": [name for name, ok in _MOUNTED.items() if ok],
        "endpoints": ["/v1/density", "/v1/constants", "/v1/perfectness", "/v1/example1", "/v1/verify"],
    }


@app.get("/healthz")
def healthz():
    return {"status": "ok"}
