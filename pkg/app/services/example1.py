# app/services/example1.py — closed forms for the disk D_R against the numeric search
from __future__ import annotations

import math
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from app.services.constants import SearchBudget, domain_constants
from app.services.domains import EuclideanDisk
from app.utils.errors import BadParameters

EXAMPLE1_TOL = 1e-7


class Example1Row(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    quantity: str
    closed_form: float
    numeric: float
    abs_diff: float
    within_tolerance: bool


class Example1Report(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    R: float
    tolerance: float
    rows: List[Example1Row]
    passed: bool


def disk_closed_forms(R: float) -> dict:
    """Every constant of D_R = {|z| < R} in closed form."""
    sigma = 1.0 if R <= 1.0 else 2.0 * R / (1.0 + R * R)
    chat = 2.0 * R / (1.0 + R) ** 2 if R > 1.0 else 0.5
    return {
        "C": 0.5,
        "Ctilde": R / (1.0 + R * R) if R > 1.0 else 0.5,
        "Chat": chat,
        "sigma_diam_complement": sigma,
        "tau_diam_complement": math.inf if R <= 1.0 else 2.0 * R / (R * R - 1.0),
        "Ctilde_prime": 0.5,
        "Chat_prime": chat / sigma,
    }


def _diff(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    return abs(a - b)


def example1_table(R: float, budget: Optional[SearchBudget] = None, tol: float = EXAMPLE1_TOL) -> Example1Report:
    if not (R > 0.0 and math.isfinite(R)):
        raise BadParameters(f"R must be a positive finite number, got {R}")
    closed = disk_closed_forms(R)
    numeric = domain_constants(EuclideanDisk(0j, R), budget, closed_form=False).model_dump()

    rows: List[Example1Row] = []
    for quantity, expected in closed.items():
        got = float(numeric[quantity])
        diff = _diff(expected, got)
        rows.append(
            Example1Row(
                quantity=quantity,
                closed_form=expected,
                numeric=got,
                abs_diff=diff,
                within_tolerance=diff <= tol,
            )
        )
    return Example1Report(R=R, tolerance=tol, rows=rows, passed=all(r.within_tolerance for r in rows))
