"""Free-boundary extraction from density fields and comparison with traces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .core import Field
from .heleshaw import FrontTrace, TraceSource

THRESHOLD = 0.5


class Crossing(NamedTuple):
    position: float
    rising: bool


@dataclass
class FrontSet:
    crossings: list[Crossing]

    @property
    def positions(self) -> np.ndarray:
        return np.array([c.position for c in self.crossings])

    @property
    def outer(self) -> float | None:
        """Outermost falling crossing, ``None`` if there is none."""
        falling = [c.position for c in self.crossings if not c.rising]
        return falling[-1] if falling else None

    def __len__(self):
        return len(self.crossings)


def extract_front(n: Field, threshold: float = THRESHOLD) -> FrontSet:
    """Threshold crossings of a 1D or radial density profile.

    Crossings are linearly interpolated between adjacent cell centres.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    if n.grid.ndim != 1:
        raise ValueError("front extraction needs a one-axis grid; use count_components in 2D")
    x = n.grid.centers(0)
    v = n.values - threshold
    above = v >= 0.0
    idx = np.nonzero(above[1:] != above[:-1])[0]
    crossings = []
    for i in idx:
        w = v[i] / (v[i] - v[i + 1])
        crossings.append(Crossing(float(x[i] + w * (x[i + 1] - x[i])), bool(above[i + 1])))
    return FrontSet(crossings)


def count_components(n: Field, threshold: float = THRESHOLD) -> int:
    """Number of 4-connected super-threshold regions of a 2D density."""
    _, count = ndimage.label(n.values >= threshold)
    return int(count)


class FrontError(NamedTuple):
    max_abs: np.ndarray
    final_abs: np.ndarray


def front_error(numerical: FrontTrace, analytic: FrontTrace) -> FrontError:
    """Per-boundary max and final-time absolute position errors.

    The analytic trace is interpolated linearly to the numerical times that
    fall inside its window.
    """
    if numerical.radii.shape[1] != analytic.radii.shape[1]:
        raise ValueError("traces track different numbers of boundaries")
    lo = max(numerical.times[0], analytic.times[0])
    hi = min(numerical.times[-1], analytic.times[-1])
    eps = 1e-12 * max(1.0, abs(hi))
    keep = (numerical.times >= lo - eps) & (numerical.times <= hi + eps)
    if hi < lo or not keep.any():
        raise ValueError("traces do not share a time window")
    t = numerical.times[keep]
    err = np.abs(numerical.radii[keep] - analytic.at(t))
    return FrontError(err.max(axis=0), err[-1])


def numerical_trace(times, fronts, labels=()) -> FrontTrace:
    return FrontTrace(np.asarray(times), np.asarray(fronts), TraceSource.NUMERICAL, labels=tuple(labels))
