"""1-D search kernels: bisection on monotone maps and golden-section search.

Both kernels are deterministic and allocation-free; they back the norm
computations and the conjugate-function evaluation.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import NoInteriorMinimum

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi


def bisect_nonincreasing(
    g: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    tol: float,
    max_iter: int = 200,
) -> float:
    """Locate the crossing of a nonincreasing map g with `target`.

    Requires g(lo) > target >= g(hi).  Returns the upper end of the final
    bracket, so g(result) <= target is guaranteed and the result sits within
    `tol` above the true crossing point.
    """
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def golden_section_min(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_iter: int = 400,
) -> tuple[float, float]:
    """Minimize a unimodal f on [a, b]; returns (argmin, min value)."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def golden_section_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_iter: int = 400,
) -> tuple[float, float]:
    """Maximize a unimodal f on [a, b]; returns (argmax, max value)."""
    x, fx = golden_section_min(lambda u: -f(u), a, b, tol, max_iter)
    return x, -fx


def grid_then_golden_min(
    f: Callable[[float], float],
    grid: list[float],
    tol: float,
    max_expansions: int = 60,
    expansion_factor: float = 2.0,
) -> tuple[float, float, bool]:
    """Minimize f over (0, inf) given a coarse bracketing grid.

    Evaluates f on `grid` (ascending, positive), golden-refines around the
    best point, and keeps extending the grid upward while the edge keeps
    improving by more than `tol`.  Returns (argmin, value, at_boundary):
    `at_boundary` is set when the infimum is still receding at the final
    edge, i.e. the minimum was not interior.

    Raises NoInteriorMinimum when `max_expansions` extensions still improve
    by more than `tol` each: the objective gives no sign of flattening.
    """
    xs = list(grid)
    vals = [f(x) for x in xs]
    at_boundary = False
    best = min(range(len(xs)), key=lambda i: vals[i])
    if best == len(xs) - 1:
        # still descending at the right edge: extend geometrically
        for n_ext in range(max_expansions + 1):
            if n_ext == max_expansions:
                raise NoInteriorMinimum(
                    f"objective still improving by more than {tol} after "
                    f"{max_expansions} bracket expansions"
                )
            x_new = xs[-1] * expansion_factor
            v_new = f(x_new)
            improved = vals[-1] - v_new
            xs.append(x_new)
            vals.append(v_new)
            if v_new >= vals[-2] or improved <= tol:
                break
        best = min(range(len(xs)), key=lambda i: vals[i])
        at_boundary = best == len(xs) - 1
    lo = xs[best - 1] if best > 0 else xs[0] * 0.5
    hi = xs[best + 1] if best + 1 < len(xs) else xs[-1] * expansion_factor
    x_star, v_star = golden_section_min(f, lo, hi, tol=tol * max(1.0, lo))
    if vals[best] < v_star:
        x_star, v_star = xs[best], vals[best]
    return x_star, v_star, at_boundary
