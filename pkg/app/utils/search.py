# app/utils/search.py — golden-section search, scan-then-refine, sphere lattices
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0          # 1/phi
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0   # 1/phi^2


@dataclass(frozen=True)
class LineMinimum:
    x: float
    value: float
    evaluations: int


def golden_section(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> LineMinimum:
    """
    Golden-section search for a minimum of f on [a, b].

    Returns the best *evaluated* point, so the reported value is always
    f(x) exactly (never an interpolated guess). Stops when the bracket is
    narrower than tol * max(1, |x|) or after max_iter contractions.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    best_x, best_y = (c, yc) if yc <= yd else (d, yd)
    n = 2

    for _ in range(max_iter):
        if h <= tol * max(1.0, abs(best_x)):
            break
        if yc < yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
            n += 1
            if yc < best_y:
                best_x, best_y = c, yc
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
            n += 1
            if yd < best_y:
                best_x, best_y = d, yd

    return LineMinimum(best_x, best_y, n)


def scan_then_refine(
    f: Callable[[float], float],
    grid: int,
    *,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> LineMinimum:
    """
    Minimize f over the open interval (0, 1).

    Coarse scan at u_k = k/(grid+1), then golden-section on the bracket
    [u_{k-1}, u_{k+1}] around the best grid point.
    """
    us = [k / (grid + 1.0) for k in range(1, grid + 1)]
    values = [f(u) for u in us]
    k = int(np.argmin(values))
    lo = k / (grid + 1.0)
    hi = (k + 2) / (grid + 1.0)
    refined = golden_section(f, lo, hi, tol=tol, max_iter=max_iter)
    if values[k] <= refined.value:
        return LineMinimum(us[k], values[k], grid + refined.evaluations)
    return LineMinimum(refined.x, refined.value, grid + refined.evaluations)


def fibonacci_sphere(n: int) -> np.ndarray:
    """n nearly-uniform unit vectors (golden-angle spiral), shape (n, 3)."""
    i = np.arange(n, dtype=float) + 0.5
    zc = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(0.0, 1.0 - zc * zc))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), zc], axis=1)


def fibonacci_plane(n: int) -> np.ndarray:
    """Stereographic images of fibonacci_sphere(n); never hits the north pole."""
    v = fibonacci_sphere(n)
    return (v[:, 0] + 1j * v[:, 1]) / (1.0 - v[:, 2])


def lattice_spacing(n: int) -> float:
    """Typical chordal spacing of an n-point sphere lattice."""
    return 2.0 * math.sqrt(4.0 * math.pi / n)


def coordinate_descent(
    f: Callable[[float, float], float],
    start: Tuple[float, float],
    h0: float,
    *,
    sweeps: int = 3,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> Tuple[Tuple[float, float], float, int]:
    """
    Coordinate-wise golden-section search in a local chart.
    Each sweep searches x then y on [-h, h] around the current point; h halves per sweep.
    f may return +inf outside the admissible region.
    """
    x, y = start
    best = f(x, y)
    evals = 1
    h = h0
    for _ in range(sweeps):
        gx = golden_section(lambda t: f(t, y), x - h, x + h, tol=tol, max_iter=max_iter)
        evals += gx.evaluations
        if gx.value < best:
            x, best = gx.x, gx.value
        gy = golden_section(lambda t: f(x, t), y - h, y + h, tol=tol, max_iter=max_iter)
        evals += gy.evaluations
        if gy.value < best:
            y, best = gy.x, gy.value
        h *= 0.5
    return (x, y), best, evals
