"""Power function, minimum-norm interpolation of a pre-image, and the
pointwise image-domain error bound

    |S(a)(x) - S(a_W)(x)| <= ||a||_G * ||P_W||_{L2(mu)} * ||k(x, .)||_{L2(mu)}.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (ArgumentError, ConditioningError, DomainError, InvariantViolation,
                     NumericalFailure)
from .kernel import GramMatrix, Kernel, as_points, gram, psd_check
from .measure import ParamMeasure, compensated_sum, weighted_sum
from .synthesis import TransformKernelSpec

POWER_CLAMP = 1e-10
BOUND_SLACK = 1e-9
JITTER_LADDER = (0.0, 1e-14, 1e-12, 1e-10)


def _row_cholesky(A: np.ndarray) -> Optional[np.ndarray]:
    """Row-by-row (Cholesky-Banachiewicz) factor ``A = L L^*``; None on breakdown.

    Row ``i`` of ``L`` depends only on rows ``< i``, so the factor of a
    leading sub-block is bitwise identical to the leading block of the full
    factor.  That makes power functions of nested node sets exactly monotone.
    """
    n = A.shape[0]
    L = np.zeros_like(A, dtype=np.complex128)
    for i in range(n):
        for j in range(i):
            s = A[i, j] - np.dot(L[i, :j], np.conj(L[j, :j]))
            L[i, j] = s / L[j, j]
        d = A[i, i].real - float(np.sum(np.abs(L[i, :i]) ** 2))
        if not d > 0:
            return None
        L[i, i] = math.sqrt(d)
    return L


def _forward(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``L V = B`` row by row (``B`` may have many columns)."""
    V = np.zeros_like(B, dtype=np.complex128)
    for i in range(L.shape[0]):
        V[i] = (B[i] - L[i, :i] @ V[:i]) / L[i, i]
    return V


def _backward(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``L^* V = B``."""
    n = L.shape[0]
    V = np.zeros_like(B, dtype=np.complex128)
    Lh = L.conj().T
    for i in range(n - 1, -1, -1):
        V[i] = (B[i] - Lh[i, i + 1:] @ V[i + 1:]) / Lh[i, i]
    return V


@dataclass(frozen=True)
class PreimageModel:
    """Auxiliary kernel ``G`` on the parameter space, observation nodes ``W``
    and the measure ``mu`` used for L2 norms."""

    G: Kernel
    W: np.ndarray
    mu: ParamMeasure
    gram_W: Optional[GramMatrix] = field(init=False)
    chol: Optional[np.ndarray] = field(init=False, repr=False)
    jitter: float = field(init=False)

    def __post_init__(self):
        W = np.asarray(self.W, dtype=np.float64)
        W = W.reshape(0, self.G.domain_dim) if W.size == 0 else as_points(W, self.G.domain_dim)
        if W.shape[0] != np.unique(W, axis=0).shape[0]:
            raise DomainError("observation nodes W must be distinct")
        W.setflags(write=False)
        object.__setattr__(self, "W", W)
        if W.shape[0] == 0:
            object.__setattr__(self, "gram_W", None)
            object.__setattr__(self, "chol", None)
            object.__setattr__(self, "jitter", 0.0)
            return
        g = gram(self.G, W)
        report = psd_check(g)
        if not report.passed:
            raise InvariantViolation("Gram matrix of G on W is not positive semidefinite",
                                     report=report.to_dict())
        A = g.hermitian_part()
        scale = max(g.trace, np.finfo(float).tiny) / W.shape[0]
        for step in JITTER_LADDER:
            L = _row_cholesky(A + step * scale * np.eye(W.shape[0]))
            if L is not None:
                break
        else:
            lam = np.linalg.eigvalsh(A)
            cond = float(lam[-1] / lam[0]) if lam[0] > 0 else float("inf")
            raise ConditioningError("Gram matrix of G on W is numerically singular",
                                    condition_estimate=cond)
        object.__setattr__(self, "gram_W", g)
        object.__setattr__(self, "chol", L)
        object.__setattr__(self, "jitter", step * scale)

    @property
    def size(self) -> int:
        return self.W.shape[0]

    def _omegas(self, omega) -> np.ndarray:
        return np.asarray(omega, dtype=np.float64).reshape(-1, self.G.domain_dim)


def power_squared(model: PreimageModel, omegas) -> np.ndarray:
    """``P_W(w)^2 = G(w, w) - G_W(w, w)`` at each point (unclamped)."""
    Om = model._omegas(omegas)
    diag = model.G.diag(Om).real
    if model.size == 0:
        return diag
    B = model.G.matrix(model.W, Om)  # G(w_j, omega)
    V = _forward(model.chol, B)
    # sequential accumulation keeps nested node sets exactly monotone
    captured = np.cumsum(np.abs(V) ** 2, axis=0)[-1]
    return diag - captured


def power_values(model: PreimageModel, omegas) -> np.ndarray:
    p2 = power_squared(model, omegas)
    if np.any(p2 < -POWER_CLAMP):
        j = int(np.argmin(p2))
        raise NumericalFailure(
            f"power function squared is {p2[j]:.3e} < -{POWER_CLAMP} at omega index {j}; "
            "G is not a valid kernel or its Gram matrix is too ill-conditioned")
    return np.sqrt(np.maximum(p2, 0.0))


def power_function(model: PreimageModel, omega) -> float:
    return float(power_values(model, omega)[0])


class RepresenterFunction:
    """``a(w) = sum_j c_j G(w, z_j)`` with exactly computable ``||a||_G``."""

    vectorized = True

    def __init__(self, G: Kernel, centers, coefficients):
        self.G = G
        C = np.asarray(centers, dtype=np.float64)
        self.centers = C.reshape(0, G.domain_dim) if C.size == 0 else as_points(C, G.domain_dim)
        self.coefficients = np.asarray(coefficients, dtype=np.complex128).reshape(-1)
        if self.coefficients.shape[0] != self.centers.shape[0]:
            raise ArgumentError(
                f"{self.coefficients.shape[0]} coefficients for {self.centers.shape[0]} centers")

    def __call__(self, omega):
        W = np.asarray(omega, dtype=np.float64)
        scalar = W.ndim == 0 or (self.G.domain_dim > 1 and W.ndim == 1)
        Om = W.reshape(-1, self.G.domain_dim)
        if self.centers.shape[0] == 0:
            out = np.zeros(Om.shape[0], dtype=np.complex128)
        else:
            out = compensated_sum(self.G.matrix(Om, self.centers) * self.coefficients)
        return complex(out[0]) if scalar else out

    def g_norm(self) -> float:
        if self.centers.shape[0] == 0:
            return 0.0
        Gz = self.G.matrix(self.centers)
        q = np.vdot(self.coefficients, Gz @ self.coefficients).real
        return math.sqrt(max(q, 0.0))


def min_norm_interpolant(model: PreimageModel, values) -> RepresenterFunction:
    """Minimum-``G``-norm function matching ``values`` on ``W``."""
    v = np.asarray(values, dtype=np.complex128).reshape(-1)
    if v.shape[0] != model.size:
        raise ArgumentError(f"{v.shape[0]} values for {model.size} nodes")
    if model.size == 0:
        return RepresenterFunction(model.G, model.W, v)
    beta = _backward(model.chol, _forward(model.chol, v[:, None]))[:, 0]
    return RepresenterFunction(model.G, model.W, beta)


@dataclass(frozen=True)
class PowerReport:
    grid: np.ndarray
    power_values: np.ndarray
    power_l2: float
    a_norm: float
    kx_l2: float
    bound: float
    observed: float

    @property
    def ratio(self) -> float:
        if self.observed == 0.0:
            return 0.0
        return self.observed / self.bound if self.bound > 0 else float("inf")

    def to_dict(self) -> dict:
        return {"power_l2": self.power_l2, "a_norm": self.a_norm, "kx_l2": self.kx_l2,
                "bound": self.bound, "observed": self.observed, "ratio": self.ratio,
                "power_values": self.power_values.tolist()}

    def power_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["omega", "power"])
        for w, p in zip(self.grid.reshape(len(self.power_values), -1), self.power_values):
            writer.writerow([*(f"{c:.17g}" for c in w), f"{p:.17g}"])
        return buf.getvalue()


def l2_norm(measure: ParamMeasure, values) -> float:
    return math.sqrt(max(float(weighted_sum(measure, np.abs(values) ** 2).real), 0.0))


def pointwise_bound(model: PreimageModel, transform: TransformKernelSpec,
                    a: RepresenterFunction, x, grid: Optional[ParamMeasure] = None,
                    check: bool = True) -> PowerReport:
    """Assemble the three bound factors and the observed image error at ``x``.

    ``a`` must be in representer form so that ``||a||_G`` is exact.  All
    factors are integrated on ``grid`` (default: the transform's measure);
    with ``check`` a violated bound raises :class:`InvariantViolation`.
    """
    if not isinstance(a, RepresenterFunction):
        raise ArgumentError("the bound needs a in representer form (RepresenterFunction)")
    mu = transform.measure if grid is None else grid
    nodes = mu.node_array()
    P = power_values(model, nodes)
    power_l2 = l2_norm(mu, P)
    a_norm = a.g_norm()
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    kx_l2 = math.sqrt(max(float(transform.section_norms_sq(point)), 0.0))

    a_W = min_norm_interpolant(model, a(model.W) if model.size else [])
    m = transform.measure
    diff = a(m.nodes) - a_W(m.nodes)
    observed = abs(complex(weighted_sum(m, diff * transform.section_values(point))))

    report = PowerReport(mu.nodes.copy(), P, power_l2, a_norm, kx_l2,
                         a_norm * power_l2 * kx_l2, observed)
    if check and report.observed > report.bound * (1.0 + BOUND_SLACK):
        raise InvariantViolation(
            f"observed error {observed:.6e} exceeds bound {report.bound:.6e}",
            report=report.to_dict())
    return report


def embedding_check(G: Kernel, a: RepresenterFunction, mu: ParamMeasure):
    """Return ``(||a||_{L2(mu)}, ||a||_G * ||d||_{L2(mu)})`` with ``d(w) = sqrt(G(w, w))``.

    The first never exceeds the second for a valid kernel.
    """
    nodes = mu.node_array()
    lhs = l2_norm(mu, a(mu.nodes))
    d = np.sqrt(np.maximum(G.diag(nodes).real, 0.0))
    return lhs, a.g_norm() * l2_norm(mu, d)
