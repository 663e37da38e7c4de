"""The continued fraction generated by the square-root recurrence.

``c = b/2 - sqrt(x)`` satisfies ``c = a / (-b + c)`` with ``a = x - b**2/4``,
so unrolling gives ``a / (-b + a / (-b + ...))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DEFAULT_ZERO_GUARD, ZeroDivisorError, sqrt_step

__all__ = [
    "MAX_DEPTH",
    "DepthBudgetError",
    "GeneralizedCF",
    "build_gcf",
    "evaluate_gcf",
    "truncations",
    "gcf_iteration_equivalence",
    "format_gcf",
]

MAX_DEPTH = 10_000


class DepthBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class GeneralizedCF:
    partial_numerator: float
    partial_denominator: float
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.depth > MAX_DEPTH:
            raise DepthBudgetError(f"depth {self.depth} exceeds the cap of {MAX_DEPTH}")
        if self.partial_denominator == 0:
            raise ValueError("partial denominator must be nonzero")

    @property
    def is_simple(self) -> bool:
        return self.partial_numerator == 1


def build_gcf(x: float, b: float, depth: int) -> GeneralizedCF:
    if b == 0:
        raise ValueError("b must be nonzero")
    return GeneralizedCF(x - b * b / 4, -b, int(depth))


def evaluate_gcf(g: GeneralizedCF, zero_guard: float = DEFAULT_ZERO_GUARD) -> float:
    """Bottom-up value of the ``g.depth``-level truncation."""
    a, beta = g.partial_numerator, g.partial_denominator
    v = a / beta
    for _ in range(g.depth - 1):
        den = beta + v
        if abs(den) < zero_guard:
            raise ZeroDivisorError(f"intermediate denominator {den!r} below zero guard")
        v = a / den
    return v


def truncations(g: GeneralizedCF, depths=None) -> list[tuple[int, float]]:
    depths = range(1, g.depth + 1) if depths is None else depths
    return [(k, evaluate_gcf(GeneralizedCF(g.partial_numerator, g.partial_denominator, k))) for k in depths]


def _ulp_close(u: float, v: float, ulps: int) -> bool:
    return abs(u - v) <= ulps * math.ulp(max(abs(u), abs(v)))


def gcf_iteration_equivalence(x: float, b: float, depth: int, ulps: int = 8) -> bool:
    """True iff every truncation of depth ``k <= depth`` equals ``c_{k+1}``.

    The iterates come from the square-root map started at ``c1 = 0``.
    """
    g = build_gcf(x, b, depth)
    c = 0.0
    try:
        for k in range(1, depth + 1):
            c = sqrt_step(c, x, b)
            v = evaluate_gcf(GeneralizedCF(g.partial_numerator, g.partial_denominator, k))
            if not _ulp_close(v, c, ulps):
                return False
    except ZeroDivisorError:
        return False
    return True


def _num(v: float) -> str:
    return f"{v:.12g}"


def format_gcf(g: GeneralizedCF, style: str = "compact", levels: int = 3) -> str:
    """Plain-text rendering, ``levels`` levels deep followed by an ellipsis.

    ``compact``: ``1/(-4 + 1/(-4 + 1/(-4 + …)))``.
    ``nested``: one level per line, indented.
    """
    a, beta = _num(g.partial_numerator), _num(g.partial_denominator)
    levels = max(1, min(levels, g.depth))
    tail = "…" if g.depth > levels else ""
    if style == "compact":
        inner = f"{beta} + {tail}" if tail else beta
        s = f"{a}/({inner})"
        for _ in range(levels - 1):
            s = f"{a}/({beta} + {s})"
        return s
    if style == "nested":
        lines = []
        for i in range(levels):
            pad = "  " * i
            lines.append(f"{pad}{a}" if i == 0 else f"{pad}{beta} + {a}")
            lines.append(f"{pad}{'-' * 8}")
        pad = "  " * levels
        lines.append(f"{pad}{beta} + {tail}" if tail else f"{pad}{beta}")
        return "\n".join(lines)
    raise ValueError(f"unknown style {style!r}")
