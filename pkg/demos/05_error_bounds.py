"""Pointwise error bounds through a power function.

If the unknown ``a`` lives in the RKHS of an auxiliary kernel ``G`` and is
interpolated at nodes ``W``, the transform error at ``x`` is bounded by
``||P_W||_{L2} ||a||_G ||k(x, .)||_{L2}``.  Adding nodes shrinks ``P_W``.
"""
import numpy as np

from kernelsynth import (PreimageModel, RepresenterFunction, gauss_legendre, gaussian_kernel,
                         pointwise_bound, power_values)
from kernelsynth.synthesis import TransformKernelSpec, fourier_transform_kernel

mu = gauss_legendre(0.0, 1.0, 64)
G = gaussian_kernel(0.3)
T = TransformKernelSpec(fourier_transform_kernel, mu)
a = RepresenterFunction(G, [0.25, 0.6], [1.0, -0.5j])

# %% Bound versus observed error as nodes are added
for W in ([], [0.5], [0.1, 0.4, 0.8], np.linspace(0, 1, 7)):
    rep = pointwise_bound(PreimageModel(G, W, mu), T, a, 0.7)
    print(f"{len(W)} nodes: observed {rep.observed:.3e} <= bound {rep.bound:.3e}")

# %% Nested node sets give pointwise smaller power functions
p3 = power_values(PreimageModel(G, [0.1, 0.4, 0.8], mu), mu.nodes)
p4 = power_values(PreimageModel(G, [0.1, 0.4, 0.8, 0.6], mu), mu.nodes)
print("\nmax increase of power function after adding a node:", float(np.max(p4 - p3)))
