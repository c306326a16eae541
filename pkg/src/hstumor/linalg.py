"""Linear solvers for the implicit steps.

A direct tridiagonal (Thomas) solver for 1D and radial problems and a
matrix-free conjugate gradient solver for the 2D five-point systems.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from numba import njit


class SolverError(RuntimeError):
    """Breakdown of a linear solve."""


class ConvergenceError(SolverError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass
class TridiagonalSystem:
    """``lower`` and ``upper`` have length N-1, ``diag`` and ``rhs`` length N."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.rhs) != n or len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise ValueError("inconsistent tridiagonal system sizes")

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.lower * x[:-1]
        y[:-1] += self.upper * x[1:]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)


@njit(cache=True)
def _thomas(lower, diag, upper, rhs):
    n = diag.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    x = np.empty(n)
    b = diag[0]
    if b == 0.0:
        return x, False
    cp[0] = upper[0] / b if n > 1 else 0.0
    dp[0] = rhs[0] / b
    for i in range(1, n):
        b = diag[i] - lower[i - 1] * cp[i - 1]
        if b == 0.0:
            return x, False
        if i < n - 1:
            cp[i] = upper[i] / b
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / b
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x, True


def solve_tridiagonal(sys: TridiagonalSystem) -> np.ndarray:
    """Solve a tridiagonal system by Gaussian elimination without pivoting.

    Only safe for diagonally dominant (or otherwise pivot-free) matrices,
    which is what the density and nutrient modules assemble.
    """
    x, ok = _thomas(
        np.ascontiguousarray(sys.lower, dtype=np.float64),
        np.ascontiguousarray(sys.diag, dtype=np.float64),
        np.ascontiguousarray(sys.upper, dtype=np.float64),
        np.ascontiguousarray(sys.rhs, dtype=np.float64),
    )
    if not ok:
        raise SolverError("zero pivot in tridiagonal solve; matrix is not diagonally dominant")
    return x


@dataclass
class SpdOperator:
    """Matrix-free symmetric positive definite operator.

    ``diagonal`` is optional and only used for Jacobi preconditioning.
    """

    apply: Callable[[np.ndarray], np.ndarray]
    dimension: int
    diagonal: np.ndarray | None = None


class SpdSolution(NamedTuple):
    x: np.ndarray
    iterations: int
    residual: float


def solve_spd(
    op: SpdOperator,
    b: np.ndarray,
    tol: float = 1e-10,
    max_iter: int | None = None,
    x0: np.ndarray | None = None,
    jacobi: bool = False,
) -> SpdSolution:
    """Conjugate gradients until ``||A x - b|| <= tol * ||b||``.

    With ``jacobi=True`` the operator's diagonal is used as preconditioner.
    The returned residual is the true relative residual of the final iterate.
    """
    b = np.asarray(b, dtype=float)
    shape = b.shape
    b = b.ravel()
    if b.size != op.dimension:
        raise ValueError(f"rhs has {b.size} entries, operator dimension is {op.dimension}")
    if max_iter is None:
        max_iter = 10 * op.dimension

    def A(v):
        return np.asarray(op.apply(v.reshape(shape)), dtype=float).ravel()

    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return SpdSolution(np.zeros(shape), 0, 0.0)

    if jacobi:
        if op.diagonal is None:
            raise ValueError("jacobi preconditioning needs the operator diagonal")
        dinv = 1.0 / np.asarray(op.diagonal, dtype=float).ravel()
    else:
        dinv = None

    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float).ravel()
    r = b - A(x) if x0 is not None else b.copy()
    z = r * dinv if dinv is not None else r
    p = z.copy()
    rz = r @ z
    target = tol * bnorm
    rnorm = np.linalg.norm(r)
    it = 0
    while True:
        if rnorm <= target:
            # confirm on the true residual; restart from it if the recursion drifted
            r = b - A(x)
            rnorm = np.linalg.norm(r)
            if rnorm <= target:
                break
            z = r * dinv if dinv is not None else r
            p = z.copy()
            rz = r @ z
        if it >= max_iter:
            raise ConvergenceError(
                f"CG did not converge in {max_iter} iterations (relative residual {rnorm / bnorm:.3e})",
                rnorm / bnorm,
                it,
            )
        Ap = A(p)
        pAp = p @ Ap
        if pAp <= 0.0:
            raise SolverError("operator is not positive definite (p.Ap <= 0)")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        it += 1
        rnorm = np.linalg.norm(r)
        z = r * dinv if dinv is not None else r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new

    return SpdSolution(x.reshape(shape), it, float(rnorm / bnorm))
