"""Radial kernels as scale mixtures.

Mixing Schoenberg profiles over a scale measure gives a radial function that
is positive definite in the matching dimension; Gaussian mixtures are
positive definite in every dimension.
"""
import numpy as np

from kernelsynth import (from_atoms, gauss_legendre, gaussian_scale_mixture, gram, psd_check,
                         radial_to_kernel, schoenberg_rbf)

z = np.linspace(0, 10, 6)
unit = from_atoms([1.0], [1.0])

# %% A single unit scale recovers the classical profiles
print("d=1 profile - cos z:      ", np.abs(schoenberg_rbf(1, unit)(z) - np.cos(z)).max())
print("d=3 profile - sin(z)/z:   ", np.abs(schoenberg_rbf(3, unit)(z) - np.sinc(z / np.pi)).max())

# %% A continuous scale mixture in R^3, evaluated on random 3-d points
psi = schoenberg_rbf(3, gauss_legendre(0.5, 2.0, 32))
K = radial_to_kernel(psi, domain_dim=3)
P = np.random.default_rng(0).normal(size=(25, 3))
print("\nSchoenberg mixture in R^3:", psd_check(gram(K, P)).to_dict())

# %% Gaussian scale mixture, any dimension
G = radial_to_kernel(gaussian_scale_mixture(from_atoms([0.5, 1.0, 3.0], [0.2, 0.5, 0.3])),
                     domain_dim=5)
P5 = np.random.default_rng(1).normal(size=(25, 5))
print("Gaussian mixture in R^5: ", psd_check(gram(G, P5)).to_dict())
