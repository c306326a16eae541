"""Pointwise constitutive laws: pressure, mobility, growth and consumption."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DomainError, GrowthKind


def _check_nonnegative(n):
    n = np.asarray(n, dtype=float)
    if np.any(n < 0.0) or np.any(np.isnan(n)):
        raise DomainError("density must be nonnegative")
    return n


def pressure(n, gamma: float):
    """Power-law pressure ``n**gamma``.

    Evaluated as ``exp(gamma * log n)`` with an explicit zero branch so that
    :func:`mobility` is exactly ``exp(-pressure)`` down to the smallest
    densities.
    """
    n = _check_nonnegative(n)
    with np.errstate(divide="ignore", over="ignore"):
        p = np.where(n > 0.0, np.exp(gamma * np.log(np.where(n > 0.0, n, 1.0))), 0.0)
    return p if p.ndim else float(p)


def mobility(n, gamma: float):
    """``exp(-n**gamma)``, in ``(0, 1]`` (underflows to 0 for huge pressure)."""
    return np.exp(-np.asarray(pressure(n, gamma))) if np.ndim(n) else float(np.exp(-pressure(n, gamma)))


def psi(n):
    """Consumption rate ``psi(n) = n``."""
    n = _check_nonnegative(n)
    return n if n.ndim else float(n)


@dataclass(frozen=True)
class GrowthFn:
    kind: GrowthKind
    g0: float

    def __post_init__(self):
        object.__setattr__(self, "kind", GrowthKind(self.kind))

    def evaluate(self, c):
        if self.kind is GrowthKind.CONSTANT:
            return self.g0 * np.ones_like(c, dtype=float) if np.ndim(c) else float(self.g0)
        return self.g0 * np.asarray(c, dtype=float) if np.ndim(c) else float(self.g0 * c)

    __call__ = evaluate


def growth(c, fn: GrowthFn):
    """Growth rate at nutrient level ``c``: ``g0`` or ``g0 * c``."""
    return fn.evaluate(c)
