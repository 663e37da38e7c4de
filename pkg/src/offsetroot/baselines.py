"""Newton-family baselines for ``f(r) = r**d - k`` and convergence-order estimates."""

from __future__ import annotations

import enum
import math
import statistics
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_ZERO_GUARD,
    IterationConfig,
    IterationTrace,
    RootQuery,
    Verdict,
    ZeroDivisorError,
    divergence_bound,
    residual_tolerance,
    run_iteration,
    _residual,
)

__all__ = [
    "BaselineMethod",
    "ConvergenceEstimate",
    "InsufficientDataError",
    "newton_step",
    "babylonian_step",
    "halley_step",
    "run_baseline",
    "estimate_convergence",
    "ERROR_WINDOW",
]

ERROR_WINDOW = (1e-13, 1e-2)


class InsufficientDataError(ValueError):
    pass


class BaselineMethod(str, enum.Enum):
    NEWTON_RAPHSON = "NewtonRaphson"
    BABYLONIAN = "Babylonian"
    HALLEY = "Halley"
    OFFSET_FIXED_POINT = "OffsetFixedPoint"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ConvergenceEstimate:
    order: float
    rate: float
    samples_used: int


def _guard(v: float, zero_guard: float, what: str):
    if abs(v) < zero_guard:
        raise ZeroDivisorError(f"{what} = {v!r} below zero guard")


def newton_step(x_n: float, k: float, d: int, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    _guard(x_n, zero_guard, "x_n")
    return x_n - (x_n**d - k) / (d * x_n ** (d - 1))


def babylonian_step(x_n: float, k: float, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    _guard(x_n, zero_guard, "x_n")
    return (x_n + k / x_n) / 2


def halley_step(x_n: float, k: float, d: int, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    """Standard Halley update ``x - 2 f f' / (2 f'**2 - f f'')``."""
    _guard(x_n, zero_guard, "x_n")
    f = x_n**d - k
    fp = d * x_n ** (d - 1)
    fpp = d * (d - 1) * x_n ** (d - 2)
    den = 2 * fp * fp - f * fpp
    _guard(den, zero_guard, "Halley denominator")
    return x_n - 2 * f * fp / den


def run_baseline(
    method: BaselineMethod | str,
    q: RootQuery,
    x1: float,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    *,
    b: float | None = None,
) -> IterationTrace:
    """Iterate one method from the root estimate ``x1``.

    ``OffsetFixedPoint`` runs the core iteration (plus convention) with offset
    ``b`` (default ``2 * x1``) and ``c1 = x1 - b/2``, so every method starts
    from the same root estimate.
    """
    method = BaselineMethod(method)
    if x1 == 0:
        raise ValueError("starting value must be nonzero")
    if method is BaselineMethod.OFFSET_FIXED_POINT:
        b = 2 * x1 if b is None else b
        return run_iteration(q, IterationConfig(b=b, c1=x1 - b / 2, tol=tol, max_iter=max_iter))
    if method is BaselineMethod.BABYLONIAN:
        if q.d != 2:
            raise ValueError("the Babylonian method is only defined for d = 2")
        step = lambda v: babylonian_step(v, q.x)  # noqa: E731
    elif method is BaselineMethod.NEWTON_RAPHSON:
        step = lambda v: newton_step(v, q.x, q.d)  # noqa: E731
    else:
        step = lambda v: halley_step(v, q.x, q.d)  # noqa: E731

    bound = divergence_bound(q.x, 0.0)
    v = float(x1)
    iterates = [v]

    def done(verdict, est=None, res=None):
        if res is None:
            res = _residual(iterates[-1], q.x, q.d)
        return IterationTrace(tuple(iterates), verdict, 0, est, res, method=method.value)

    for _ in range(max_iter):
        try:
            vn = step(v)
        except (ZeroDivisorError, OverflowError):
            return done(Verdict.ZERO_DIVISOR_EXHAUSTED)
        iterates.append(vn)
        if not math.isfinite(vn) or abs(vn) > bound:
            return done(Verdict.DIVERGED, res=math.inf)
        if abs(vn - v) <= tol:
            res = _residual(vn, q.x, q.d)
            ok = vn > 0 and res <= residual_tolerance(q.x, tol)
            return done(Verdict.CONVERGED_CORRECT if ok else Verdict.CONVERGED_WRONG, vn, res)
        v = vn
    return done(Verdict.MAX_ITER_EXCEEDED)


def estimate_convergence(
    trace: IterationTrace, true_root: float, window: tuple[float, float] = ERROR_WINDOW
) -> ConvergenceEstimate:
    """Order and linear rate from the root-estimate errors of a trace.

    Only errors strictly inside ``window`` are used.  For each run of three
    consecutive usable errors the order is ``log(e2/e1) / log(e1/e0)``; the
    rate is ``e1/e0`` over consecutive pairs.  Both are aggregated by median.
    The rate is meaningful for linearly convergent traces only.
    """
    err = np.abs(trace.estimates() - true_root)
    lo, hi = window
    usable = (err > lo) & (err < hi)
    orders, rates = [], []
    for n in range(len(err) - 1):
        if usable[n] and usable[n + 1]:
            rates.append(err[n + 1] / err[n])
            if n + 2 < len(err) and usable[n + 2]:
                num, den = math.log(err[n + 2] / err[n + 1]), math.log(err[n + 1] / err[n])
                if den != 0:
                    orders.append(num / den)
    if not orders:
        raise InsufficientDataError(
            f"need three consecutive errors inside {window}, got {int(usable.sum())} usable"
        )
    return ConvergenceEstimate(float(statistics.median(orders)), float(statistics.median(rates)), int(usable.sum()))
