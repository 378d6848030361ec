"""Discrete measures on a parameter space.

Every measure is a finite set of atoms (nodes with nonnegative weights).
Continuous measures enter through quadrature rules; improper integrals over
the real line are truncated to ``[-R, R]`` where ``R`` is always chosen by
the caller.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from .errors import ArgumentError, DomainError, EvaluationError

DEFAULT_INTERVAL_NODES = 64
DEFAULT_LINE_NODES = 200


class Provenance(str, Enum):
    EXPLICIT_ATOMS = "explicit_atoms"
    GAUSS_LEGENDRE = "gauss_legendre"
    TRAPEZOID = "trapezoid"
    TRUNCATED_DOMAIN = "truncated_domain"


def _compensated_real_sum(x: np.ndarray) -> np.ndarray:
    # Cascaded pairwise summation with an error-free TwoSum at every level.
    s = np.array(x, dtype=np.float64, copy=True)
    if s.shape[-1] == 0:
        return np.zeros(s.shape[:-1])
    c = np.zeros_like(s)
    while s.shape[-1] > 1:
        if s.shape[-1] % 2:
            pad = [(0, 0)] * (s.ndim - 1) + [(0, 1)]
            s = np.pad(s, pad)
            c = np.pad(c, pad)
        a = s[..., 0::2]
        b = s[..., 1::2]
        t = a + b
        bp = t - a
        err = (a - (t - bp)) + (b - bp)
        c = c[..., 0::2] + c[..., 1::2] + err
        s = t
    return s[..., 0] + c[..., 0]


def compensated_sum(values, axis: int = -1):
    """Sum ``values`` along ``axis`` with compensated (TwoSum) accumulation.

    The result for each output element depends only on the input elements
    that reduce into it, so slicing or permuting the other axes never
    changes a single bit of the result.
    """
    a = np.moveaxis(np.asarray(values), axis, -1)
    if np.iscomplexobj(a):
        return _compensated_real_sum(a.real) + 1j * _compensated_real_sum(a.imag)
    return _compensated_real_sum(a)


@dataclass(frozen=True)
class ParamMeasure:
    """Atomic measure ``sum_j w_j delta_{omega_j}``.

    ``nodes`` has shape ``(m,)`` for scalar parameters and ``(m, p)`` for
    vector parameters.
    """

    nodes: np.ndarray
    weights: np.ndarray
    provenance: Provenance = Provenance.EXPLICIT_ATOMS
    total_mass: float = field(init=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=np.float64)
        weights = np.array(self.weights, dtype=np.float64).reshape(-1)
        if nodes.ndim == 0 or nodes.ndim > 2:
            raise ArgumentError("nodes must be a sequence of scalars or of fixed-length vectors")
        if nodes.shape[0] != weights.shape[0]:
            raise ArgumentError(
                f"{nodes.shape[0]} nodes but {weights.shape[0]} weights")
        if not np.all(np.isfinite(weights)):
            raise DomainError("weights must be finite")
        if np.any(weights < 0):
            j = int(np.argmin(weights))
            raise DomainError(f"negative weight {weights[j]!r} at atom {j}")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "provenance", Provenance(self.provenance))
        object.__setattr__(self, "total_mass", float(compensated_sum(weights)))

    def __len__(self):
        return self.weights.shape[0]

    @property
    def param_dim(self) -> int:
        return 1 if self.nodes.ndim == 1 else self.nodes.shape[1]

    def node(self, j: int):
        """Return node ``j`` as a float (scalar parameters) or a 1-d array."""
        return float(self.nodes[j]) if self.nodes.ndim == 1 else self.nodes[j]

    def node_array(self) -> np.ndarray:
        """Nodes as an ``(m, p)`` array, convenient for broadcasting."""
        return self.nodes.reshape(len(self), -1)

    def to_dict(self) -> dict:
        return {"nodes": self.nodes.tolist(), "weights": self.weights.tolist(),
                "provenance": self.provenance.value}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ParamMeasure":
        try:
            return cls(data["nodes"], data["weights"],
                       data.get("provenance", Provenance.EXPLICIT_ATOMS))
        except KeyError as exc:
            raise ArgumentError(f"measure JSON is missing field {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "ParamMeasure":
        return cls.from_dict(json.loads(text))


def from_atoms(nodes, weights) -> ParamMeasure:
    return ParamMeasure(nodes, weights, Provenance.EXPLICIT_ATOMS)


def gauss_legendre(a: float, b: float, n: int = DEFAULT_INTERVAL_NODES) -> ParamMeasure:
    """Gauss-Legendre discretization of Lebesgue measure on ``[a, b]``.

    Exact for polynomials of degree ``2n - 1``.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError("interval endpoints must be finite")
    if a >= b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if int(n) != n or n < 1:
        raise DomainError(f"node count must be a positive integer, got {n}")
    x, w = roots_legendre(int(n))
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * x
    return ParamMeasure(nodes, half * w, Provenance.GAUSS_LEGENDRE)


def trapezoid(a: float, b: float, n: int) -> ParamMeasure:
    """Composite trapezoid rule with ``n >= 2`` equispaced nodes including endpoints."""
    if a >= b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if n < 2:
        raise DomainError("trapezoid rule needs at least 2 nodes")
    nodes = np.linspace(a, b, n)
    w = np.full(n, (b - a) / (n - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return ParamMeasure(nodes, w, Provenance.TRAPEZOID)


def truncated_domain(radius: float, n: int = DEFAULT_LINE_NODES, dim: int = 1) -> ParamMeasure:
    """Lebesgue measure on ``R^dim`` truncated to the cube ``[-radius, radius]^dim``.

    Tensor-product Gauss-Legendre with ``n`` nodes per axis.
    """
    if not radius > 0:
        raise DomainError(f"truncation radius must be positive, got {radius}")
    if dim < 1:
        raise DomainError("dimension must be positive")
    base = gauss_legendre(-radius, radius, n)
    if dim == 1:
        return ParamMeasure(base.nodes, base.weights, Provenance.TRUNCATED_DOMAIN)
    grids = np.meshgrid(*([base.nodes] * dim), indexing="ij")
    wgrids = np.meshgrid(*([base.weights] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return ParamMeasure(nodes, weights, Provenance.TRUNCATED_DOMAIN)


def weighted_transform(base: ParamMeasure, density: Callable) -> ParamMeasure:
    """Multiply every weight of ``base`` by ``density(node)``."""
    factors = np.empty(len(base))
    for j in range(len(base)):
        value = density(base.node(j))
        value = complex(value)
        if value.imag != 0 or not np.isfinite(value.real) or value.real < 0:
            raise DomainError(
                f"density must be finite, real and nonnegative; got {value!r} at node {base.node(j)!r}")
        factors[j] = value.real
    return ParamMeasure(base.nodes, base.weights * factors, base.provenance)


def weighted_sum(measure: ParamMeasure, values) -> complex | np.ndarray:
    """``sum_j w_j values[..., j]`` for precomputed node values."""
    return compensated_sum(np.asarray(values) * measure.weights)


def integrate(measure: ParamMeasure, f: Callable) -> complex:
    """Integrate ``f`` against ``measure``, i.e. ``sum_j w_j f(omega_j)``."""
    values = np.empty(len(measure), dtype=np.complex128)
    for j in range(len(measure)):
        v = complex(f(measure.node(j)))
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise EvaluationError(f"integrand is {v!r} at node {j} ({measure.node(j)!r})")
        values[j] = v
    return complex(weighted_sum(measure, values))


def check_finite_at_nodes(values: np.ndarray, measure: ParamMeasure, what: str = "integrand"):
    """Raise :class:`EvaluationError` naming the first node with a non-finite value."""
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = np.argwhere(bad)[0]
        j = int(idx[-1])
        raise EvaluationError(
            f"{what} is {values[tuple(idx)]!r} at node {j} ({measure.node(j)!r})")
