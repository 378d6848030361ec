"""Integrated kernels: averaging a parametrized family against a measure.

A transform kernel ``K(x, y) = int k(x, w) conj(k(y, w)) dmu(w)`` built from
Fourier exponentials on [-1/2, 1/2] reproduces the sinc kernel, and the
Sobolev kernel of order one on the line equals ``pi exp(-2 pi |t|)``.
"""
import math

import numpy as np

from kernelsynth import (ExpansionSpec, cosine_basis, expansion_kernel, gauss_legendre, gram,
                         integrate_transform_kernel, psd_check, sobolev_kernel)
from kernelsynth.synthesis import TransformKernelSpec, fourier_transform_kernel

# %% Band-limited kernel from 64 Gauss-Legendre frequencies
K = integrate_transform_kernel(TransformKernelSpec(fourier_transform_kernel,
                                                   gauss_legendre(-0.5, 0.5, 64)))
xs = np.linspace(-2, 2, 9)
print("K(x, 0) vs sinc(x):")
for x in xs:
    print(f"  {x:+.2f}  {K(x, 0.0).real:+.15f}  {np.sinc(x):+.15f}")

# %% Sobolev kernel, truncated frequency integral plus analytic tail
S = sobolev_kernel(1, 1)
t = np.linspace(-1, 1, 5)
exact = math.pi * np.exp(-2 * math.pi * np.abs(t))
print("\nSobolev K(t, 0) and max error:",
      np.abs(S.matrix(t, [0.0])[:, 0] - exact).max())

# %% Finite expansions are kernels too
E = expansion_kernel(ExpansionSpec(cosine_basis(8), [2.0 ** -n for n in range(8)], 8))
report = psd_check(gram(E, np.linspace(0, 1, 12)))
print("\nexpansion Gram min eigenvalue:", report.min_eigenvalue, "passed:", report.passed)
