"""Kramer-type sampling: orthogonality of node representers and the
generalized cardinal series ``g(x) = sum_n g(y_n) K(x, y_n) / K(y_n, y_n)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ArgumentError, DegenerateNodeError
from .kernel import GramMatrix, Kernel, as_points, gram
from .measure import compensated_sum
from .synthesis import TransformKernelSpec, integrate_transform_kernel

ORTHO_TOLERANCE = 1e-8


@dataclass(frozen=True)
class OrthogonalityReport:
    max_offdiag_ratio: float
    gram: GramMatrix

    @property
    def orthogonal(self) -> bool:
        return self.max_offdiag_ratio <= ORTHO_TOLERANCE


def offdiag_ratio(entries: np.ndarray, nodes=None) -> float:
    """``max_{n != m} |G_nm| / max_n G_nn``; raises on a vanishing diagonal."""
    diag = entries.diagonal().real
    bad = np.flatnonzero(diag <= 0)
    if bad.size:
        n = int(bad[0])
        where = f" y_{n}={np.ravel(nodes[n]).tolist()}" if nodes is not None else f" {n}"
        raise DegenerateNodeError(f"node representer has zero norm at node{where}")
    if entries.shape[0] == 1:
        return 0.0
    off = np.abs(entries - np.diag(entries.diagonal()))
    return float(off.max() / diag.max())


def orthogonality_check(spec: TransformKernelSpec, nodes) -> OrthogonalityReport:
    """Gram matrix of ``w -> k(y_n, w)`` in ``L2(mu)`` and its off-diagonal ratio."""
    P = as_points(nodes, spec.domain_dim)
    if P.shape[0] == 0:
        raise ArgumentError("orthogonality_check needs at least one node")
    g = gram(integrate_transform_kernel(spec), P)
    return OrthogonalityReport(offdiag_ratio(g.entries, P), g)


@dataclass(frozen=True)
class SamplingScheme:
    """Sample nodes with the kernel used for reconstruction.

    ``orthogonal`` is False when the node representers are not orthogonal to
    within ``ORTHO_TOLERANCE``; reconstruction still works but the series no
    longer interpolates the samples.
    """

    nodes: np.ndarray
    kernel: Kernel
    transform: Optional[TransformKernelSpec] = None
    diag: np.ndarray = field(init=False)
    ortho_ratio: float = field(init=False)

    def __post_init__(self):
        P = as_points(self.nodes, self.kernel.domain_dim)
        if P.shape[0] == 0:
            raise ArgumentError("a sampling scheme needs at least one node")
        if self.transform is not None:
            entries = orthogonality_check(self.transform, P).gram.entries
        else:
            entries = self.kernel.matrix(P)
        ratio = offdiag_ratio(entries, P)
        diag = self.kernel.diag(P).real
        P.setflags(write=False)
        diag.setflags(write=False)
        object.__setattr__(self, "nodes", P)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "ortho_ratio", ratio)

    @property
    def orthogonal(self) -> bool:
        return self.ortho_ratio <= ORTHO_TOLERANCE

    def __len__(self):
        return self.nodes.shape[0]


def _check_samples(scheme: SamplingScheme, samples) -> np.ndarray:
    s = np.asarray(samples, dtype=np.complex128).reshape(-1)
    if s.shape[0] != len(scheme):
        raise ArgumentError(f"{s.shape[0]} samples for {len(scheme)} nodes")
    return s


def kramer_reconstruct_many(scheme: SamplingScheme, samples, xs) -> np.ndarray:
    """Cardinal series evaluated at every point of ``xs``."""
    s = _check_samples(scheme, samples)
    X = as_points(xs, scheme.kernel.domain_dim)
    if X.shape[0] == 0:
        return np.empty(0, dtype=np.complex128)
    Kx = scheme.kernel.matrix(X, scheme.nodes)
    return compensated_sum(Kx * (s / scheme.diag))


def kramer_reconstruct(scheme: SamplingScheme, samples, x) -> complex:
    """``sum_n samples[n] K(x, y_n) / K(y_n, y_n)``."""
    point = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return complex(kramer_reconstruct_many(scheme, samples, point)[0])


def reconstruction_error_profile(scheme: SamplingScheme, target: Callable, eval_grid,
                                 samples=None) -> np.ndarray:
    """``|reconstruction - target|`` on ``eval_grid``.

    ``target`` maps an ``(n, dim)`` array of points to ``n`` values; it is
    sampled at the scheme nodes unless ``samples`` is given.
    """
    grid = np.asarray(eval_grid, dtype=np.float64)
    if grid.size == 0:
        return np.empty(0)
    X = as_points(grid, scheme.kernel.domain_dim)
    if samples is None:
        samples = np.asarray(target(scheme.nodes), dtype=np.complex128)
    approx = kramer_reconstruct_many(scheme, samples, X)
    return np.abs(approx - np.asarray(target(X), dtype=np.complex128))


def integer_nodes(n: int) -> np.ndarray:
    """Nodes ``-n, ..., n``."""
    return np.arange(-n, n + 1, dtype=np.float64)
