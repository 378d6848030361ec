"""JSON kernel specifications.

A kernel spec is an object with a ``"type"`` field naming the family plus
family-specific fields::

    {"type": "paley_wiener", "half_bandwidth": 0.5}
    {"type": "sobolev", "m": 1, "d": 1, "truncation_radius": 50, "nodes_per_dim": 2000}
    {"type": "gaussian_mixture", "scale_measure": {"nodes": [1, 2], "weights": [0.5, 0.5]}}
    {"type": "schoenberg", "d": 3, "scale_measure": {"nodes": [1], "weights": [1]}}
    {"type": "expansion", "basis": "cosine", "weights": [1, 0.5, 0.25], "truncation": 3}
    {"type": "transform_quadrature", "transform": "fourier",
     "measure": {"rule": "gauss_legendre", "interval": [-0.5, 0.5], "nodes": 64}}

Measures are either explicit atoms ``{"nodes": [...], "weights": [...]}`` or
a rule: ``gauss_legendre`` (``interval``, ``nodes``), ``trapezoid``
(``interval``, ``nodes``) or ``truncated_domain`` (``radius``, ``nodes``,
optional ``dim``).
"""
from __future__ import annotations

from typing import Any

from .errors import ArgumentError
from .kernel import Kernel
from .measure import ParamMeasure, from_atoms, gauss_legendre, trapezoid, truncated_domain
from .synthesis import (ExpansionSpec, TransformKernelSpec, cosine_basis,
                        cosine_transform_kernel, expansion_kernel, fourier_transform_kernel,
                        gaussian_kernel, gaussian_scale_mixture, integrate_transform_kernel,
                        paley_wiener_kernel, paley_wiener_transform, radial_to_kernel,
                        schoenberg_rbf, sobolev_kernel)

KNOWN_FAMILIES = ("paley_wiener", "sobolev", "gaussian_mixture", "schoenberg",
                  "expansion", "transform_quadrature")
TRANSFORMS = {"fourier": fourier_transform_kernel, "cosine": cosine_transform_kernel}
BASES = {"cosine": cosine_basis}


def _require(spec: dict, key: str) -> Any:
    try:
        return spec[key]
    except (KeyError, TypeError):
        raise ArgumentError(f"spec of type {spec.get('type')!r} is missing field {key!r}") from None


def measure_from_spec(spec: dict) -> ParamMeasure:
    if not isinstance(spec, dict):
        raise ArgumentError("a measure spec must be a JSON object")
    if "rule" not in spec:
        return from_atoms(_require(spec, "nodes"), _require(spec, "weights"))
    rule = spec["rule"]
    if rule == "gauss_legendre":
        a, b = _require(spec, "interval")
        return gauss_legendre(float(a), float(b), int(spec.get("nodes", 64)))
    if rule == "trapezoid":
        a, b = _require(spec, "interval")
        return trapezoid(float(a), float(b), int(_require(spec, "nodes")))
    if rule == "truncated_domain":
        return truncated_domain(float(_require(spec, "radius")), int(spec.get("nodes", 200)),
                                int(spec.get("dim", 1)))
    raise ArgumentError(
        f"unknown measure rule {rule!r}; known: gauss_legendre, trapezoid, truncated_domain")


def _family(spec) -> str:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ArgumentError("kernel spec must be an object with a 'type' field")
    kind = spec["type"]
    if kind not in KNOWN_FAMILIES:
        raise ArgumentError(
            f"unknown kernel family {kind!r}; known families: {', '.join(KNOWN_FAMILIES)}")
    return kind


def transform_from_spec(spec: dict) -> TransformKernelSpec:
    """Transform representation of a kernel spec (only families that have one)."""
    kind = _family(spec)
    if kind == "paley_wiener":
        return paley_wiener_transform(float(spec.get("half_bandwidth", 0.5)),
                                      int(spec.get("nodes", 64)))
    if kind == "transform_quadrature":
        name = spec.get("transform", "fourier")
        if name not in TRANSFORMS:
            raise ArgumentError(f"unknown transform {name!r}; known: {', '.join(TRANSFORMS)}")
        return TransformKernelSpec(TRANSFORMS[name], measure_from_spec(_require(spec, "measure")),
                                   int(spec.get("domain_dim", 1)), name)
    raise ArgumentError(
        f"kernel family {kind!r} has no transform representation; "
        "use paley_wiener or transform_quadrature")


def kernel_from_spec(spec: dict) -> Kernel:
    kind = _family(spec)
    if kind == "paley_wiener":
        return paley_wiener_kernel(float(spec.get("half_bandwidth", 0.5)))
    if kind == "sobolev":
        return sobolev_kernel(int(spec.get("m", 1)), int(spec.get("d", 1)),
                              spec.get("truncation_radius"), spec.get("nodes_per_dim"),
                              spec.get("tail_correction"))
    if kind == "gaussian_mixture":
        psi = gaussian_scale_mixture(measure_from_spec(_require(spec, "scale_measure")))
        return radial_to_kernel(psi, domain_dim=int(spec.get("domain_dim", 1)))
    if kind == "schoenberg":
        d = int(_require(spec, "d"))
        psi = schoenberg_rbf(d, measure_from_spec(_require(spec, "scale_measure")))
        return radial_to_kernel(psi, domain_dim=int(spec.get("domain_dim", d)))
    if kind == "expansion":
        basis = spec.get("basis", "cosine")
        if basis not in BASES:
            raise ArgumentError(f"unknown basis {basis!r}; known: {', '.join(BASES)}")
        weights = _require(spec, "weights")
        N = int(spec.get("truncation", len(weights)))
        return expansion_kernel(ExpansionSpec(BASES[basis](N), weights, N))
    return integrate_transform_kernel(transform_from_spec(spec))


def aux_kernel_from_spec(spec: dict) -> Kernel:
    """Kernel ``G`` on the parameter space; ``{"type": "gaussian", "width": w}``
    or any kernel spec."""
    if isinstance(spec, dict) and spec.get("type") == "gaussian":
        return gaussian_kernel(float(spec.get("width", 1.0)), int(spec.get("dim", 1)))
    return kernel_from_spec(spec)
