import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from kernelsynth.errors import ArgumentError, DomainError, InvariantViolation, NumericalFailure
from kernelsynth.error_bounds import (PreimageModel, RepresenterFunction, embedding_check,
                                      min_norm_interpolant, pointwise_bound, power_function,
                                      power_squared, power_values)
from kernelsynth.kernel import Kernel
from kernelsynth.measure import gauss_legendre
from kernelsynth.synthesis import TransformKernelSpec, fourier_transform_kernel, gaussian_kernel

MU = gauss_legendre(0.0, 1.0, 64)
G1 = gaussian_kernel(1.0)
T = TransformKernelSpec(fourier_transform_kernel, MU)


def test_power_vanishes_on_nodes():
    model = PreimageModel(G1, [0.1, 0.45, 0.9], MU)
    for w in model.W[:, 0]:
        assert power_function(model, w) <= 1e-7


def test_power_without_nodes_is_diagonal():
    model = PreimageModel(gaussian_kernel(0.4), [], MU)
    assert np.all(power_values(model, MU.nodes) == 1.0)


def test_power_single_node_by_hand():
    model = PreimageModel(G1, [0.0], MU)
    assert float(power_squared(model, 1.0)[0]) == pytest.approx(1 - math.exp(-2), rel=1e-14)


def test_interpolant_examples():
    model = PreimageModel(G1, [0.0, 1.0], MU)
    zero = min_norm_interpolant(model, [0, 0])
    assert np.all(zero(MU.nodes) == 0)
    beta = min_norm_interpolant(model, [1.0, 0.0]).coefficients
    e = math.exp(-1)
    assert beta == pytest.approx(np.array([1.0, -e]) / (1 - e * e), rel=1e-13)
    section = min_norm_interpolant(model, G1.matrix(model.W, [[0.0]])[:, 0])
    assert section.coefficients == pytest.approx([1.0, 0.0], abs=1e-14)
    with pytest.raises(ArgumentError):
        min_norm_interpolant(model, [1.0])


def test_interpolant_exact_and_optimal():
    rng = np.random.default_rng(8)
    G = gaussian_kernel(0.3)
    for _ in range(20):
        W = np.sort(rng.uniform(0, 1, int(rng.integers(1, 6))))
        model = PreimageModel(G, W, MU)
        a = RepresenterFunction(G, rng.uniform(0, 1, 3), rng.normal(size=3) + 1j * rng.normal(size=3))
        aW = min_norm_interpolant(model, a(W))
        assert np.max(np.abs(aW(W) - a(W))) <= 1e-8 * max(np.max(np.abs(a(W))), 1e-300)
        assert aW.g_norm() <= a.g_norm() + 1e-10


def test_model_validation():
    with pytest.raises(DomainError):
        PreimageModel(G1, [0.2, 0.2], MU)
    indefinite = Kernel(lambda X, Y: np.where(X[..., 0] == Y[..., 0], 0.5, 0.9), 1)
    with pytest.raises(InvariantViolation) as info:
        PreimageModel(indefinite, [0.0, 1.0], MU)
    assert info.value.report["passed"] is False


def test_broken_kernel_gives_numerical_failure():
    broken = Kernel(lambda X, Y: np.where(X[..., 0] == Y[..., 0], 0.5,
                                          np.exp(-(X - Y)[..., 0] ** 2)), 1)
    model = PreimageModel(broken, [0.5], MU)
    with pytest.raises(NumericalFailure):
        power_values(model, [0.51])


def full_pipeline_oracle(G, W, center, x):
    Gw = np.array([[G(u, v).real for v in W] for u in W])
    g = lambda w: np.array([G(w, v).real for v in W])
    p2 = lambda w: 1.0 - g(w) @ np.linalg.solve(Gw, g(w))
    power_l2 = math.sqrt(quad(p2, 0, 1, epsabs=1e-14, epsrel=1e-13)[0])
    beta = np.linalg.solve(Gw, g(center))
    diff = lambda w: G(w, center).real - beta @ g(w)
    re = quad(lambda w: diff(w) * math.cos(2 * math.pi * x * w), 0, 1, epsabs=1e-15)[0]
    im = quad(lambda w: diff(w) * math.sin(2 * math.pi * x * w), 0, 1, epsabs=1e-15)[0]
    return power_l2, math.hypot(re, im)


def test_full_pipeline_against_quad():
    W = [0.2, 0.8]
    a = RepresenterFunction(G1, [0.5], [1.0])
    rep = pointwise_bound(PreimageModel(G1, W, MU), T, a, 0.3)
    power_l2, observed = full_pipeline_oracle(G1, W, 0.5, 0.3)
    assert rep.a_norm == pytest.approx(1.0, rel=1e-15)
    assert rep.kx_l2 == pytest.approx(1.0, rel=1e-13)
    assert rep.power_l2 == pytest.approx(power_l2, rel=1e-8)
    assert rep.observed == pytest.approx(observed, rel=1e-8, abs=1e-15)
    assert rep.bound == pytest.approx(rep.a_norm * rep.power_l2 * rep.kx_l2, rel=1e-15)
    assert rep.ratio < 1


def test_bound_trivial_cases():
    a = RepresenterFunction(G1, [0.3, 0.7], [1.0, -2j])
    rep = pointwise_bound(PreimageModel(G1, [0.3, 0.5, 0.7], MU), T, a, 1.2)
    assert rep.observed <= 1e-12 and rep.ratio <= 1
    zero = RepresenterFunction(G1, [], [])
    rep0 = pointwise_bound(PreimageModel(G1, [0.4], MU), T, zero, 0.0)
    assert rep0.observed == 0 and rep0.a_norm == 0 and rep0.bound == 0 and rep0.ratio == 0


def test_bound_needs_representer_form():
    with pytest.raises(ArgumentError):
        pointwise_bound(PreimageModel(G1, [0.4], MU), T, lambda w: 1.0, 0.0)


def test_violation_raises_with_report():
    class Understated(RepresenterFunction):
        def g_norm(self):
            return 1e-6

    a = Understated(G1, [0.5], [1.0])
    with pytest.raises(InvariantViolation) as info:
        pointwise_bound(PreimageModel(G1, [0.2], MU), T, a, 0.3)
    assert info.value.report["observed"] > info.value.report["bound"]
    rep = pointwise_bound(PreimageModel(G1, [0.2], MU), T, a, 0.3, check=False)
    assert rep.ratio > 1


def test_power_csv_shape():
    rep = pointwise_bound(PreimageModel(G1, [0.2], MU), T, RepresenterFunction(G1, [0.5], [1]), 0)
    lines = rep.power_csv().splitlines()
    assert lines[0] == "omega,power" and len(lines) == 65
    omega, power = map(float, lines[1].split(","))
    assert omega == MU.nodes[0] and power == rep.power_values[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_bound_and_embedding_random(seed):
    rng = np.random.default_rng(seed)
    G = gaussian_kernel(0.3)
    W = rng.uniform(0, 1, int(rng.integers(0, 6)))
    nc = int(rng.integers(1, 4))
    a = RepresenterFunction(G, rng.uniform(0, 1, nc), rng.normal(size=nc) + 1j * rng.normal(size=nc))
    rep = pointwise_bound(PreimageModel(G, W, MU), T, a, rng.uniform(-3, 3))
    assert rep.ratio <= 1 + 1e-9
    lhs, rhs = embedding_check(G, a, MU)
    assert lhs <= rhs + 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_power_monotone_on_nested_sets(seed):
    rng = np.random.default_rng(seed)
    G = gaussian_kernel(0.3)
    W = rng.uniform(0, 1, int(rng.integers(0, 5)))
    W2 = np.concatenate([W, rng.uniform(0, 1, int(rng.integers(1, 3)))])
    p1 = power_values(PreimageModel(G, W, MU), MU.nodes)
    p2 = power_values(PreimageModel(G, W2, MU), MU.nodes)
    assert np.all(p2 <= p1 + 1e-12)
