"""
Building blocks: Bessel functions and linear solvers
====================================================
"""
# %%
# The modified Bessel functions satisfy I0 K1 + I1 K0 = 1/x to rounding.
import numpy as np

from hstumor.specfun import i0, i1, k0, k1

for x in (0.01, 1.0, 10.0, 100.0):
    print(f"x={x:<6} x*(I0 K1 + I1 K0) - 1 = {x * (i0(x) * k1(x) + i1(x) * k0(x)) - 1:+.1e}")

# %%
# A tridiagonal solve and a matrix-free CG solve of the same 1D Laplacian.
from hstumor.linalg import SpdOperator, TridiagonalSystem, solve_spd, solve_tridiagonal

n = 200
lower = -np.ones(n - 1)
diag = np.full(n, 2.0)
rhs = np.ones(n)
x_thomas = solve_tridiagonal(TridiagonalSystem(lower, diag, lower.copy(), rhs))


def laplacian(v):
    out = 2 * v
    out[1:] -= v[:-1]
    out[:-1] -= v[1:]
    return out


sol = solve_spd(SpdOperator(laplacian, n), rhs, tol=1e-12)
print("CG iterations", sol.iterations, "difference", np.abs(sol.x - x_thomas).max())
