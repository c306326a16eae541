"""Modified Bessel functions I0, I1, K0 and K1 for real arguments.

* ``I_nu``: ascending power series (all terms positive, no cancellation)
  up to x = 30, Hankel asymptotic expansion beyond.
* ``K_nu``: ascending series with the logarithmic term for x <= 2; for
  2 < x <= 30 the integral ``int_0^inf exp(-x cosh t) cosh(nu t) dt`` by the
  trapezoidal rule, which converges geometrically for this integrand;
  Hankel asymptotic expansion beyond.

Relative accuracy is close to machine precision on (0, 30].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError

EULER_GAMMA = 0.57721566490153286061

_I_SERIES_MAX = 30.0
_K_SERIES_MAX = 2.0


class Family(enum.Enum):
    I = "I"  # noqa: E741
    K = "K"


@dataclass(frozen=True)
class BesselKind:
    family: Family
    order: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.order not in (0, 1):
            raise ValueError("only orders 0 and 1 are available")


I0 = BesselKind(Family.I, 0)
I1 = BesselKind(Family.I, 1)
K0 = BesselKind(Family.K, 0)
K1 = BesselKind(Family.K, 1)


def _i_series(nu: int, x: float) -> float:
    q = 0.25 * x * x
    term = 1.0 if nu == 0 else 0.5 * x
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if term < 1e-17 * total:
            return total


def _hankel_sum(nu: int, x: float, sign: float) -> float:
    # sum_k sign^k a_k(nu) / x^k, stopped at the smallest term
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        new = sign * term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(new) >= abs(term) or abs(new) < 1e-17 * abs(total):
            return total
        term = new
        total += term


def _i_asymptotic(nu: int, x: float) -> float:
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * _hankel_sum(nu, x, -1.0)


def _k_asymptotic(nu: int, x: float) -> float:
    return math.sqrt(0.5 * math.pi / x) * math.exp(-x) * _hankel_sum(nu, x, 1.0)


def _k_series(nu: int, x: float) -> float:
    q = 0.25 * x * x
    log_half = math.log(0.5 * x)
    if nu == 0:
        # K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} H_k q^k / (k!)^2
        s = 0.0
        term = 1.0
        harmonic = 0.0
        k = 0
        while True:
            k += 1
            term *= q / (k * k)
            harmonic += 1.0 / k
            s += harmonic * term
            if term * harmonic < 1e-17 * abs(s):
                break
        return -(log_half + EULER_GAMMA) * _i_series(0, x) + s
    # K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!)
    term = 1.0
    psi1 = -EULER_GAMMA
    psi2 = 1.0 - EULER_GAMMA
    s = (psi1 + psi2) * term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        psi1 += 1.0 / k
        psi2 += 1.0 / (k + 1)
        add = (psi1 + psi2) * term
        s += add
        if abs(add) < 1e-17 * abs(s):
            break
    return 1.0 / x + log_half * _i_series(1, x) - 0.25 * x * s


_K_STEP = 0.125
_K_NODES = np.arange(0.0, 8.0 + _K_STEP / 2, _K_STEP)
_K_COSH_M1 = np.cosh(_K_NODES) - 1.0
_K_WEIGHTS = np.full(_K_NODES.size, _K_STEP)
_K_WEIGHTS[0] = 0.5 * _K_STEP
_K_COSH_NU = (np.ones_like(_K_NODES), np.cosh(_K_NODES))


def _k_integral(nu: int, x: float) -> float:
    # exp(-x cosh t) = exp(-x) exp(-x (cosh t - 1)); nodes beyond t = 8 are < e^-2900 relative
    f = np.exp(-x * _K_COSH_M1) * _K_COSH_NU[nu]
    return math.exp(-x) * float(_K_WEIGHTS @ f)


def _scalar(kind: BesselKind, x: float) -> float:
    if kind.family is Family.I:
        x = abs(x) if kind.order == 0 else x
        if x < 0.0:
            return -_scalar(kind, -x)
        if x == 0.0:
            return 1.0 if kind.order == 0 else 0.0
        if x <= _I_SERIES_MAX:
            return _i_series(kind.order, x)
        return _i_asymptotic(kind.order, x)
    if not x > 0.0:
        raise DomainError(f"K_{kind.order}(x) needs x > 0, got {x}")
    if x <= _K_SERIES_MAX:
        return _k_series(kind.order, x)
    if x <= _I_SERIES_MAX:
        return _k_integral(kind.order, x)
    return _k_asymptotic(kind.order, x)


def bessel(kind: BesselKind, x):
    """Evaluate the modified Bessel function ``kind`` at ``x`` (scalar or array)."""
    if np.ndim(x) == 0:
        return _scalar(kind, float(x))
    xa = np.asarray(x, dtype=float)
    return np.array([_scalar(kind, float(v)) for v in xa.ravel()]).reshape(xa.shape)


def i0(x):
    return bessel(I0, x)


def i1(x):
    return bessel(I1, x)


def k0(x):
    return bessel(K0, x)


def k1(x):
    return bessel(K1, x)
