"""Kernel synthesis by integrating kernel families against a measure.

The general construction is ``K(x, y) = int K_w(x, y) dmu(w)``.  Special cases:

* transform kernels ``K(x, y) = int k(x, w) conj(k(y, w)) dmu(w)``,
* expansion kernels ``K(x, y) = sum_n lambda_n phi_n(x) conj(phi_n(y))``,
* radial scale mixtures (Schoenberg profiles and Gaussian mixtures),

plus closed-form references (Paley-Wiener sinc kernel) and the global
Sobolev kernel evaluated by quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import comb

from .errors import ArgumentError, DomainError, EvaluationError
from .kernel import Kernel, KernelProvenance
from .measure import (ParamMeasure, Provenance, compensated_sum, gauss_legendre,
                      truncated_domain)
from .special import TAYLOR_SWITCH, cosine_power_tail, schoenberg_profile

SOBOLEV_DEFAULT_RADIUS = 50.0
SOBOLEV_DEFAULT_NODES = 2000


# -- specs -------------------------------------------------------------------

@dataclass(frozen=True)
class TransformKernelSpec:
    """Integral-transform kernel ``k(x, w)`` together with the measure on ``w``.

    ``k`` must broadcast: it receives ``x`` with shape ``(..., domain_dim)``
    and ``w`` with shape ``(..., param_dim)`` and returns shape ``(...)``.
    """

    k: Callable[[np.ndarray, np.ndarray], np.ndarray]
    measure: ParamMeasure
    domain_dim: int = 1
    label: str = "transform"

    def section_values(self, X) -> np.ndarray:
        """``k(X, w_j)`` for all nodes, shape ``(..., m)``."""
        X = np.asarray(X, dtype=np.float64)
        return np.asarray(self.k(X[..., None, :], self.measure.node_array()),
                          dtype=np.complex128)

    def section_norms_sq(self, X) -> np.ndarray:
        """``||k(x, .)||^2_{L2(mu)}`` for each point in ``X``."""
        vals = self.section_values(X)
        return compensated_sum(np.abs(vals) ** 2 * self.measure.weights).real


@dataclass(frozen=True)
class KernelFamilySpec:
    """Family ``w -> K_w`` of kernels integrated against ``measure``."""

    base: Callable[[object], Kernel]
    measure: ParamMeasure
    domain_dim: Optional[int] = None


@dataclass(frozen=True)
class ExpansionSpec:
    """Finite expansion ``sum_{n<N} lambda_n phi_n(x) conj(phi_n(y))``."""

    basis: Sequence[Callable[[np.ndarray], np.ndarray]]
    weights: Sequence[float]
    truncation: int
    domain_dim: int = 1

    def __post_init__(self):
        if self.truncation < 1:
            raise DomainError("truncation must be a positive integer")
        if len(self.basis) < self.truncation or len(self.weights) < self.truncation:
            raise ArgumentError(
                f"truncation {self.truncation} exceeds the {len(self.basis)} basis functions "
                f"/ {len(self.weights)} weights supplied")
        w = np.asarray(self.weights[: self.truncation], dtype=np.float64)
        if not np.all(w > 0):
            raise DomainError("expansion weights must be strictly positive")


@dataclass(frozen=True)
class RadialProfile:
    """Radial profile ``psi: [0, inf) -> R``; ``dim`` is the largest dimension
    on which ``psi(||x - y||)`` is known to be positive definite (None: all)."""

    func: Callable[[np.ndarray], np.ndarray]
    dim: Optional[int] = None
    label: str = "profile"
    provenance: KernelProvenance = KernelProvenance.MIXTURE

    def __call__(self, delta):
        d = np.asarray(delta, dtype=np.float64)
        if np.any(d < 0) or np.any(np.isnan(d)):
            raise DomainError(f"radial profile needs delta >= 0, got {delta!r}")
        out = self.func(d)
        return float(out) if np.ndim(out) == 0 else out


# -- helpers -------------------------------------------------------------------

def _raise_nonfinite(values, X, Y, measure: ParamMeasure, what: str):
    idx = tuple(int(v) for v in np.argwhere(~np.isfinite(values))[0])
    j = idx[-1]
    pair = idx[:-1]
    Xb = np.broadcast_to(X, np.broadcast_shapes(X.shape, Y.shape))
    Yb = np.broadcast_to(Y, Xb.shape)
    x = Xb[pair].tolist() if pair else Xb.tolist()
    y = Yb[pair].tolist() if pair else Yb.tolist()
    raise EvaluationError(
        f"{what} is {values[idx]!r} at node {j} ({measure.node(j)!r}) for pair x={x}, y={y}")


def sinpi(u):
    """``sin(pi u)``, exactly zero at integers."""
    u = np.asarray(u, dtype=np.float64)
    r = u - 2.0 * np.round(0.5 * u)
    a = np.abs(r)
    a = np.where(a > 0.5, 1.0 - a, a)
    return np.sign(r) * np.sin(math.pi * a)


def fourier_transform_kernel(x, w):
    """``k(x, w) = exp(2 pi i x . w)``."""
    return np.exp(2j * math.pi * np.sum(x * w, axis=-1))


def cosine_transform_kernel(x, w):
    return np.cos(2.0 * math.pi * np.sum(x * w, axis=-1)).astype(np.complex128)


def paley_wiener_transform(half_bandwidth: float = 0.5, n: int = 64) -> TransformKernelSpec:
    """Fourier transform kernel on ``[-b, b]`` with Gauss-Legendre nodes."""
    if not half_bandwidth > 0:
        raise DomainError("half_bandwidth must be positive")
    return TransformKernelSpec(fourier_transform_kernel,
                               gauss_legendre(-half_bandwidth, half_bandwidth, n),
                               1, f"paley_wiener_quadrature(b={half_bandwidth}, n={n})")


# -- general constructions -----------------------------------------------------

def integrate_transform_kernel(spec: TransformKernelSpec) -> Kernel:
    """``K(x, y) = sum_j w_j k(x, w_j) conj(k(y, w_j))``."""
    measure = spec.measure
    weights = measure.weights

    def func(X, Y):
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        vals = spec.section_values(X) * np.conj(spec.section_values(Y))
        if not np.all(np.isfinite(vals)):
            _raise_nonfinite(vals, X, Y, measure, f"{spec.label} integrand")
        return compensated_sum(vals * weights)

    return Kernel(func, spec.domain_dim, KernelProvenance.INTEGRATED,
                  f"integrated[{spec.label}]")


def integrate_kernel_family(spec: KernelFamilySpec) -> Kernel:
    """``K(x, y) = sum_j w_j K_{w_j}(x, y)``.

    With the counting measure on ``{1, 2}`` this is the sum ``K_1 + K_2``.
    """
    measure = spec.measure
    members = [spec.base(measure.node(j)) for j in range(len(measure))]
    dims = {k.domain_dim for k in members}
    if spec.domain_dim is not None:
        dims.add(spec.domain_dim)
    if len(dims) > 1:
        raise ArgumentError(f"family members disagree on the domain dimension: {sorted(dims)}")
    if not dims:
        raise ArgumentError("empty family: pass domain_dim explicitly")
    dim = dims.pop()
    weights = measure.weights

    def func(X, Y):
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        shape = np.broadcast_shapes(X.shape[:-1], Y.shape[:-1])
        if not members:
            return np.zeros(shape, dtype=np.complex128)
        vals = np.stack([np.broadcast_to(np.asarray(k.func(X, Y), dtype=np.complex128), shape)
                         for k in members], axis=-1)
        if not np.all(np.isfinite(vals)):
            _raise_nonfinite(vals, X, Y, measure, "family member")
        return compensated_sum(vals * weights)

    return Kernel(func, dim, KernelProvenance.MIXTURE,
                  f"family_mixture({len(members)} atoms)")


def expansion_kernel(spec: ExpansionSpec) -> Kernel:
    N = spec.truncation
    basis = list(spec.basis[:N])
    lam = np.asarray(spec.weights[:N], dtype=np.float64)

    def func(X, Y):
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        shape = np.broadcast_shapes(X.shape[:-1], Y.shape[:-1])
        terms = []
        for n, phi in enumerate(basis):
            px = np.asarray(phi(X), dtype=np.complex128)
            py = np.asarray(phi(Y), dtype=np.complex128)
            if not (np.all(np.isfinite(px)) and np.all(np.isfinite(py))):
                raise EvaluationError(f"basis function {n} is not finite at the requested points")
            terms.append(np.broadcast_to(px * np.conj(py), shape))
        return compensated_sum(np.stack(terms, axis=-1) * lam)

    return Kernel(func, spec.domain_dim, KernelProvenance.EXPANSION, f"expansion(N={N})")


def cosine_basis(count: int) -> list:
    """``phi_0 = 1``, ``phi_n(x) = sqrt(2) cos(n pi x)``: orthonormal on ``[0, 1]``."""
    def make(n):
        if n == 0:
            return lambda X: np.ones(np.shape(X)[:-1])
        return lambda X: math.sqrt(2.0) * np.cos(n * math.pi * X[..., 0])
    return [make(n) for n in range(count)]


# -- closed-form and quadrature reference kernels ---------------------------------

def paley_wiener_kernel(half_bandwidth: float = 0.5) -> Kernel:
    """Reproducing kernel of the band-limited space with spectrum in ``[-b, b]``.

    ``K(x, y) = sin(2 pi b (x - y)) / (pi (x - y))``; ``b = 1/2`` gives
    ``sinc(pi (x - y))``.
    """
    b = float(half_bandwidth)
    if not b > 0:
        raise DomainError(f"half_bandwidth must be positive, got {half_bandwidth}")

    def func(X, Y):
        t = (np.asarray(X, dtype=np.float64) - np.asarray(Y, dtype=np.float64))[..., 0]
        z = 2.0 * math.pi * b * t
        small = np.abs(z) < TAYLOR_SWITCH
        safe_t = np.where(small, 1.0, t)
        z2 = z * z
        taylor = 2.0 * b * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0)
        return np.where(small, taylor, sinpi(2.0 * b * safe_t) / (math.pi * safe_t)).astype(np.complex128)

    return Kernel(func, 1, KernelProvenance.CLOSED_FORM, f"paley_wiener(b={b})")


def gaussian_kernel(width: float = 1.0, dim: int = 1) -> Kernel:
    """``exp(-||x - y||^2 / width^2)``."""
    if not width > 0:
        raise DomainError("width must be positive")

    def func(X, Y):
        diff = np.asarray(X, dtype=np.float64) - np.asarray(Y, dtype=np.float64)
        return np.exp(-np.sum(diff * diff, axis=-1) / width ** 2).astype(np.complex128)

    return Kernel(func, dim, KernelProvenance.CLOSED_FORM, f"gaussian(width={width})")


def sobolev_measure(m: int, d: int, truncation_radius: float, nodes_per_dim: int) -> ParamMeasure:
    """``(1 + ||w||^2)^(-m) dw`` on ``[-R, R]^d``."""
    base = truncated_domain(truncation_radius, nodes_per_dim, d)
    w = base.node_array()
    density = (1.0 + np.sum(w * w, axis=1)) ** (-m)
    return ParamMeasure(base.nodes, base.weights * density, Provenance.TRUNCATED_DOMAIN)


def sobolev_tail(m: int, t, R: float) -> np.ndarray:
    """``int_{|w|>R} (1 + w^2)^(-m) exp(2 pi i t w) dw`` in one dimension.

    Expands ``(1 + w^2)^(-m) = sum_k binom(-m, k) w^(-2m-2k)`` (valid for
    ``|w| > 1``) and integrates each power exactly.
    """
    c = 2.0 * math.pi * np.abs(np.asarray(t, dtype=np.float64))
    total = np.zeros_like(c)
    for k in range(0, 60):
        coef = (-1) ** k * comb(m + k - 1, k, exact=False)
        if abs(coef) * R ** (-2 * k) < 1e-18:
            break
        total = total + coef * cosine_power_tail(2 * m + 2 * k, c, R)
    return 2.0 * total


def sobolev_kernel(m: int = 1, d: int = 1, truncation_radius: Optional[float] = None,
                   nodes_per_dim: Optional[int] = None,
                   tail_correction: Optional[bool] = None) -> Kernel:
    """Global Sobolev kernel ``int (1 + ||w||^2)^(-m) exp(2 pi i (x-y).w) dw``.

    Requires ``d < 2m``.  The integral is truncated to ``[-R, R]^d`` and
    evaluated with tensor Gauss-Legendre.  For ``d = 1`` the truncated tail is
    added back analytically (``tail_correction``, on by default there); in
    higher dimensions the truncation error is left to the caller's choice of
    ``R``.  Defaults ``R = 50`` and 2000 nodes exist only for ``m = d = 1``,
    where ``K(x, y) = pi exp(-2 pi |x - y|)``.
    """
    if int(m) != m or int(d) != d or m < 1 or d < 1:
        raise DomainError("m and d must be positive integers")
    if d >= 2 * m:
        raise DomainError(f"the Sobolev kernel needs d < 2m, got d={d}, m={m}")
    if truncation_radius is None or nodes_per_dim is None:
        if (m, d) != (1, 1):
            raise ArgumentError(
                "truncation_radius and nodes_per_dim must be given for (m, d) != (1, 1)")
        truncation_radius = SOBOLEV_DEFAULT_RADIUS if truncation_radius is None else truncation_radius
        nodes_per_dim = SOBOLEV_DEFAULT_NODES if nodes_per_dim is None else nodes_per_dim
    if tail_correction is None:
        tail_correction = d == 1
    if tail_correction and d != 1:
        raise ArgumentError("the analytic tail correction is only available for d = 1")
    if tail_correction and truncation_radius <= 1:
        raise DomainError("the tail correction needs truncation_radius > 1")

    measure = sobolev_measure(m, d, truncation_radius, nodes_per_dim)
    nodes = measure.node_array()
    weights = measure.weights
    R = float(truncation_radius)

    def func(X, Y):
        t = np.asarray(X, dtype=np.float64) - np.asarray(Y, dtype=np.float64)
        vals = np.exp(2j * math.pi * (t @ nodes.T))
        out = compensated_sum(vals * weights)
        if tail_correction:
            out = out + sobolev_tail(m, t[..., 0], R)
        return out

    label = f"sobolev(m={m}, d={d}, R={truncation_radius}, n={nodes_per_dim})"
    return Kernel(func, d, KernelProvenance.INTEGRATED, label)


# -- radial scale mixtures -------------------------------------------------------

def _check_scale_measure(measure: ParamMeasure):
    if measure.param_dim != 1:
        raise ArgumentError("scale measures live on [0, inf): nodes must be scalars")
    if np.any(measure.nodes < 0):
        raise DomainError("scale measure nodes must be nonnegative")


def schoenberg_rbf(d: int, scale_measure: ParamMeasure) -> RadialProfile:
    """Scale mixture ``psi(delta) = int Omega_d(w delta) dmu(w)`` of Schoenberg
    profiles; ``psi(||x - y||)`` is positive definite on ``R^d``."""
    if int(d) != d or d < 1:
        raise DomainError("dimension must be a positive integer")
    _check_scale_measure(scale_measure)
    scales = scale_measure.nodes
    weights = scale_measure.weights

    def func(delta):
        delta = np.asarray(delta, dtype=np.float64)
        z = delta[..., None] * scales
        return compensated_sum(schoenberg_profile(int(d), z) * weights)

    return RadialProfile(func, int(d), f"schoenberg(d={d}, {len(scale_measure)} atoms)")


def gaussian_scale_mixture(scale_measure: ParamMeasure) -> RadialProfile:
    """``psi(delta) = int exp(-(w delta)^2) dmu(w)``; positive definite in every dimension."""
    _check_scale_measure(scale_measure)
    scales = scale_measure.nodes
    weights = scale_measure.weights

    def func(delta):
        delta = np.asarray(delta, dtype=np.float64)
        z = delta[..., None] * scales
        return compensated_sum(np.exp(-(z * z)) * weights)

    return RadialProfile(func, None, f"gaussian_mixture({len(scale_measure)} atoms)")


def radial_to_kernel(psi: RadialProfile, metric: str = "euclidean",
                     domain_dim: Optional[int] = None) -> Kernel:
    """``K(x, y) = psi(||x - y||_2)``."""
    if metric != "euclidean":
        raise ArgumentError(f"unsupported metric {metric!r}; only 'euclidean' is available")
    dim = domain_dim if domain_dim is not None else (psi.dim or 1)
    if psi.dim is not None and dim > psi.dim:
        raise DomainError(
            f"profile {psi.label} is only positive definite up to dimension {psi.dim}, "
            f"asked for {dim}")

    def func(X, Y):
        diff = np.asarray(X, dtype=np.float64) - np.asarray(Y, dtype=np.float64)
        delta = np.sqrt(np.sum(diff * diff, axis=-1))
        return np.asarray(psi.func(delta), dtype=np.complex128)

    return Kernel(func, dim, psi.provenance, f"radial[{psi.label}]")
