"""Test functions with hand-written derivatives and antiderivatives.

Used by the ``verify`` subcommand and by the test-suite. The reference
callables are plain ``math`` code, independent of the expression layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import expr as ex


@dataclass(frozen=True)
class CatalogEntry:
    source: str
    derivative: Callable[[float], float]
    antiderivative: Callable[[float], float]

    @property
    def expr(self) -> ex.Expr:
        return ex.parse(self.source)

    def value(self, t: float) -> float:
        return float(ex.evaluate(self.expr, t))


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry("t", lambda t: 1.0, lambda t: t * t / 2),
    CatalogEntry("t^2", lambda t: 2 * t, lambda t: t**3 / 3),
    CatalogEntry("t^3 - 2*t", lambda t: 3 * t * t - 2, lambda t: t**4 / 4 - t * t),
    CatalogEntry("sqrt(t)", lambda t: 0.5 / math.sqrt(t), lambda t: 2.0 / 3.0 * t**1.5),
    CatalogEntry("exp(t)", math.exp, math.exp),
    CatalogEntry("sin(t)", math.cos, lambda t: -math.cos(t)),
    CatalogEntry("cos(t)", lambda t: -math.sin(t), math.sin),
    CatalogEntry("ln(t)", lambda t: 1.0 / t, lambda t: t * math.log(t) - t),
    CatalogEntry("exp(-t)", lambda t: -math.exp(-t), lambda t: -math.exp(-t)),
    CatalogEntry("1/(1 + t)", lambda t: -1.0 / (1 + t) ** 2, lambda t: math.log1p(t)),
    CatalogEntry(
        "t*exp(-t/2)",
        lambda t: math.exp(-t / 2) * (1 - t / 2),
        lambda t: -2 * t * math.exp(-t / 2) - 4 * math.exp(-t / 2),
    ),
    CatalogEntry(
        "t^1.5 + cos(2*t)",
        lambda t: 1.5 * math.sqrt(t) - 2 * math.sin(2 * t),
        lambda t: t**2.5 / 2.5 + math.sin(2 * t) / 2,
    ),
)

SOURCES: tuple[str, ...] = tuple(entry.source for entry in CATALOG)

# interval on which every catalog function is smooth and comfortably finite
SAFE_INTERVAL = (0.2, 3.0)
