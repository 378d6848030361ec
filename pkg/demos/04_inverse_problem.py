"""Regularized inversion of an integral transform from point data.

Given ``y_i ~ int a(w) k(x_i, w) dmu(w)`` the Tikhonov minimizer lies in the
span of the conjugate sections, with coefficients solving
``(H + gamma I) alpha = y``.
"""
import numpy as np

from kernelsynth import (InverseProblem, forward_apply, l2_norm_sq, paley_wiener_transform,
                         preimage, solve_tikhonov)

T = paley_wiener_transform()
x = np.array([-1.7, -0.4, 0.6, 1.9])
truth = lambda w: np.exp(-4 * np.asarray(w) ** 2)
y = np.array([forward_apply(T, truth, xi) for xi in x])
y = y + 1e-3 * np.random.default_rng(0).normal(size=y.shape)

# %% Larger gamma shrinks the pre-image norm and loosens the fit
for gamma in (0.0, 1e-4, 1e-2, 1.0):
    sol = solve_tikhonov(InverseProblem(T, x, y, gamma))
    a = preimage(sol, InverseProblem(T, x, y, gamma))
    misfit = np.linalg.norm(sol.fitted - y)
    print(f"gamma={gamma:<7g} |a|^2={l2_norm_sq(a, T.measure):.6f}  misfit={misfit:.2e}  "
          f"normal residual={sol.normal_residual:.1e}")

# %% The image of the pre-image matches the fitted values
sol = solve_tikhonov(InverseProblem(T, x, y, 1e-2))
a = preimage(sol, InverseProblem(T, x, y, 1e-2))
print("\nimage of pre-image:", np.round([forward_apply(T, a, xi) for xi in x], 12))
print("fitted values:     ", np.round(sol.fitted, 12))
