"""Tikhonov-regularized recovery of a pre-image from samples of its transform.

Minimizes ``sum_i |y_i - (S a)(x_i)|^2 + gamma ||a||^2_{L2(mu)}`` over
``a in L2(mu)``.  The minimizer is ``a*(w) = sum_i alpha_i conj(k(x_i, w))``
where ``alpha`` solves ``(H^* H + gamma H) alpha = H^* y`` with
``H = (K(x_i, x_j))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh

from .errors import ArgumentError, ConditioningError, DomainError
from .kernel import GramMatrix, as_point, as_points, gram
from .measure import ParamMeasure, check_finite_at_nodes, compensated_sum, weighted_sum
from .synthesis import TransformKernelSpec, integrate_transform_kernel

RESIDUAL_TOLERANCE = 1e-10
JITTER_LADDER = (0.0, 1e-14, 1e-12, 1e-10)


@dataclass(frozen=True)
class InverseProblem:
    transform: TransformKernelSpec
    sample_points: np.ndarray
    data: np.ndarray
    gamma: float = 0.0

    def __post_init__(self):
        P = as_points(self.sample_points, self.transform.domain_dim)
        y = np.asarray(self.data, dtype=np.complex128).reshape(-1)
        if P.shape[0] < 1:
            raise ArgumentError("need at least one sample point")
        if y.shape[0] != P.shape[0]:
            raise ArgumentError(f"{y.shape[0]} data values for {P.shape[0]} sample points")
        if not np.all(np.isfinite(y)):
            raise ArgumentError("data must be finite")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise DomainError(f"gamma must be a finite nonnegative number, got {self.gamma}")
        object.__setattr__(self, "sample_points", P)
        object.__setattr__(self, "data", y)
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @cached_property
    def gram(self) -> GramMatrix:
        return gram(integrate_transform_kernel(self.transform), self.sample_points)


@dataclass(frozen=True)
class InverseSolution:
    alpha: np.ndarray
    gram: GramMatrix
    normal_residual: float
    fitted: np.ndarray
    objective: float
    jitter: float = 0.0
    method: str = "cholesky"

    def to_dict(self) -> dict:
        cplx = lambda v: [{"re": float(z.real), "im": float(z.imag)} for z in v]
        return {"alpha": cplx(self.alpha), "normal_residual": self.normal_residual,
                "objective": self.objective, "fitted": cplx(self.fitted)}


def normal_residual(H: np.ndarray, alpha: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """``||(H^*H + gamma H) alpha - H^* y|| / max(||H^* y||, tiny)``."""
    Hs = H.conj().T
    lhs = Hs @ (H @ alpha) + gamma * (H @ alpha)
    rhs = Hs @ y
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), np.finfo(float).tiny))


def _min_norm_solve(H, y, gamma):
    lam, V = eigh(H)
    cutoff = H.shape[0] * np.finfo(float).eps * max(abs(lam).max(), 1.0)
    keep = lam > cutoff
    coeff = (V[:, keep].conj().T @ y) / (lam[keep] + gamma)
    return V[:, keep] @ coeff, lam


def solve_tikhonov(problem: InverseProblem) -> InverseSolution:
    """Solve ``H (H + gamma I) alpha = H y`` for Hermitian PSD ``H``.

    ``H + gamma I`` is factored by Cholesky, escalating a diagonal jitter
    ``{0, 1e-14, 1e-12, 1e-10} * trace(H) / N`` until the normal-equation
    residual is below ``1e-10``.  Numerically singular ``H`` (or a ladder that
    runs out) falls back to the minimum-norm solution from an eigenbasis.
    """
    g = problem.gram
    H = g.entries
    y = problem.data
    gamma = problem.gamma
    N = problem.n
    scale = max(g.trace, np.finfo(float).tiny) / N

    alpha = None
    used_jitter, method = 0.0, "cholesky"
    singular = g.min_eigenvalue <= N * np.finfo(float).eps * max(g.trace, 1.0)
    if not singular:
        for step in JITTER_LADDER:
            A = H + (gamma + step * scale) * np.eye(N)
            try:
                factor = cho_factor(A, lower=True)
            except LinAlgError:
                continue
            candidate = cho_solve(factor, y)
            if normal_residual(H, candidate, y, gamma) <= RESIDUAL_TOLERANCE:
                alpha, used_jitter = candidate, step * scale
                break
    if alpha is None:
        alpha, lam = _min_norm_solve(H, y, gamma)
        method = "min_norm"
        res = normal_residual(H, alpha, y, gamma)
        if res > RESIDUAL_TOLERANCE:
            pos = lam[lam > 0]
            cond = float(lam.max() / pos.min()) if pos.size else float("inf")
            raise ConditioningError(
                f"normal equations unsolved to tolerance (residual {res:.3e}); "
                f"cond(H) ~ {cond:.3e}", condition_estimate=cond)

    res = normal_residual(H, alpha, y, gamma)
    fitted = H @ alpha
    misfit = float(np.sum(np.abs(y - fitted) ** 2))
    penalty = float(np.vdot(alpha, H @ alpha).real)
    return InverseSolution(alpha, g, res, fitted, misfit + gamma * penalty,
                           used_jitter, method)


class Preimage:
    """``a*(w) = sum_i alpha_i conj(k(x_i, w))``.

    Callable on a single parameter (scalar or vector) or on an array of
    parameters with trailing axis ``param_dim``.
    """

    vectorized = True

    def __init__(self, alpha, transform: TransformKernelSpec, sample_points):
        self.alpha = np.asarray(alpha, dtype=np.complex128)
        self.transform = transform
        self.sample_points = as_points(sample_points, transform.domain_dim)

    def __call__(self, omega):
        p = self.transform.measure.param_dim
        W = np.asarray(omega, dtype=np.float64)
        scalar = W.ndim == 0 or (p > 1 and W.ndim == 1)
        W = W.reshape(-1, p)
        # k(x_i, w) for each w: shape (n_w, N)
        kv = np.asarray(self.transform.k(self.sample_points[None, :, :], W[:, None, :]),
                        dtype=np.complex128)
        out = compensated_sum(np.conj(kv) * self.alpha)
        if scalar:
            return complex(out[0])
        return out.reshape(np.shape(omega)[:-1] if p > 1 else np.shape(omega))

    def values_at_nodes(self) -> np.ndarray:
        m = self.transform.measure
        return self(m.nodes)


def preimage(solution: InverseSolution, problem: InverseProblem) -> Preimage:
    return Preimage(solution.alpha, problem.transform, problem.sample_points)


def _node_values(a: Callable, measure: ParamMeasure) -> np.ndarray:
    if getattr(a, "vectorized", False):
        vals = np.asarray(a(measure.nodes), dtype=np.complex128)
    else:
        vals = np.array([complex(a(measure.node(j))) for j in range(len(measure))])
    check_finite_at_nodes(vals, measure, "pre-image")
    return vals


def l2_norm_sq(a: Callable, measure: ParamMeasure) -> float:
    """``||a||^2_{L2(mu)}`` by quadrature."""
    vals = _node_values(a, measure)
    return float(weighted_sum(measure, np.abs(vals) ** 2).real)


def forward_apply(spec: TransformKernelSpec, a: Callable, x) -> complex:
    """``(S a)(x) = int a(w) k(x, w) dmu(w)``."""
    point = as_point(x, spec.domain_dim)
    vals = _node_values(a, spec.measure) * spec.section_values(point)
    check_finite_at_nodes(vals, spec.measure)
    return complex(weighted_sum(spec.measure, vals))


def objective_audit(problem: InverseProblem, alpha, H=None) -> float:
    """``a^*H^*Ha - a^*H^*y - y^*Ha + y^*y + gamma a^*Ha`` evaluated as written."""
    a = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    if a.shape[0] != problem.n:
        raise ArgumentError(f"candidate has {a.shape[0]} coefficients, problem has {problem.n}")
    H = problem.gram.entries if H is None else H
    y = problem.data
    Ha = H @ a
    Hs = H.conj().T
    value = (np.vdot(a, Hs @ Ha) - np.vdot(a, Hs @ y) - np.vdot(y, Ha)
             + np.vdot(y, y) + problem.gamma * np.vdot(a, Ha))
    return float(value.real)
