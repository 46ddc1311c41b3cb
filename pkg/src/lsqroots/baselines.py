"""Newton and secant reference solvers.

Both use the same stopping rule (|x_k - x_{k-1}| + |y_k| < tolerance) and
the same failure taxonomy as the three-point solver, so benchmark rows
are directly comparable.  Newton differentiates the expression
symbolically; secant needs a second starting point and defaults to
x0 + 0.1 when none is given (recorded in the outcome note).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .expressions import Expr, differentiate, evaluate
from .outcomes import (
    MAX_CONSECUTIVE_DOMAIN_ERRORS,
    IterationRecord,
    SolveOutcome,
    Status,
    best_iterate,
    detect_cycle,
)

METHODS = ("newton", "secant")


class ZeroDerivativeError(Exception):
    """Newton step with a derivative too close to zero."""


class FlatSecantError(Exception):
    """Secant step through two points with equal function values."""


@dataclass(frozen=True)
class BaselineConfig:
    tolerance: float = 1e-15
    max_iter: int = 500
    divergence_bound: float = 1e12
    derivative_floor: float = 1e-300

    def __post_init__(self):
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def newton_step(x: float, y: float, dy: float,
                derivative_floor: float = 1e-300) -> float:
    """x - y/dy; raises :class:`ZeroDerivativeError` on a flat tangent."""
    if abs(dy) < derivative_floor:
        raise ZeroDerivativeError(f"derivative {dy!r} too small at x={x!r}")
    return x - y / dy


def secant_step(x0: float, y0: float, x1: float, y1: float) -> float:
    """Root of the chord through (x0, y0) and (x1, y1)."""
    if y1 == y0:
        raise FlatSecantError(f"flat chord: y({x0!r}) = y({x1!r})")
    return x1 - y1 * (x1 - x0) / (y1 - y0)


def solve_baseline(method: str, f: Expr, x0: float,
                   x1: Optional[float] = None,
                   config: Optional[BaselineConfig] = None) -> SolveOutcome:
    """Run Newton or secant from x0 and classify the outcome.

    Failures are statuses, never exceptions; a persistently zero
    derivative or off-domain iterate counts as a domain-error step, and
    three in a row classify as Diverged.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if config is None:
        config = BaselineConfig()
    if not math.isfinite(x0):
        raise ValueError("x0 must be finite")

    y0 = evaluate(f, x0)
    if y0 is None:
        return SolveOutcome(Status.DOMAIN_ERROR, x0, 0, (), note="f undefined at starting point")

    note = ""
    if method == "newton":
        dfdx = differentiate(f)
        x_prev_pair = None
    else:
        if x1 is None:
            x1 = x0 + 0.1
            note = f"secant second start defaulted to x1={x1!r}"
        y1 = evaluate(f, x1)
        if y1 is None:
            return SolveOutcome(Status.DOMAIN_ERROR, x0, 0, (),
                                note=f"f undefined at second start x1={x1!r}")
        x_prev_pair = (x0, y0)
        x0, y0 = x1, y1

    x_curr, y_curr = x0, y0
    trace: list[IterationRecord] = []
    accepted: list[float] = []
    consecutive_domain = 0
    status = Status.MAX_ITERATIONS

    for _ in range(config.max_iter):
        try:
            if method == "newton":
                dy = evaluate(dfdx, x_curr)
                if dy is None:
                    raise ZeroDerivativeError(f"derivative undefined at x={x_curr!r}")
                x_new = newton_step(x_curr, y_curr, dy, config.derivative_floor)
            else:
                xp, yp = x_prev_pair
                x_new = secant_step(xp, yp, x_curr, y_curr)
        except (ZeroDerivativeError, FlatSecantError) as err:
            consecutive_domain += 1
            if not note:
                note = str(err)
            if consecutive_domain >= MAX_CONSECUTIVE_DOMAIN_ERRORS:
                status = Status.DIVERGED
                break
            continue

        y_new = evaluate(f, x_new) if math.isfinite(x_new) else None
        trace.append(IterationRecord(
            k=len(trace) + 1,
            x=x_new,
            y=math.nan if y_new is None else y_new,
        ))

        if y_new is None:
            consecutive_domain += 1
            if not math.isfinite(x_new) or consecutive_domain >= MAX_CONSECUTIVE_DOMAIN_ERRORS:
                status = Status.DIVERGED
                break
            continue
        consecutive_domain = 0

        if abs(x_new - x_curr) + abs(y_new) < config.tolerance:
            x_curr, y_curr = x_new, y_new
            status = Status.CONVERGED
            break
        if abs(x_new) > config.divergence_bound:
            status = Status.DIVERGED
            break

        accepted.append(x_new)
        if detect_cycle(accepted):
            status = Status.OSCILLATING
            break

        if method == "secant":
            x_prev_pair = (x_curr, y_curr)
        x_curr, y_curr = x_new, y_new

    if status is Status.CONVERGED:
        root = x_curr
    else:
        root = best_iterate(x0, y0, trace)
    return SolveOutcome(status, root, len(trace), tuple(trace), note=note)
