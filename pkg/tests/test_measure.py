import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kernelsynth.errors import ArgumentError, DomainError, EvaluationError
from kernelsynth.measure import (ParamMeasure, Provenance, compensated_sum, from_atoms,
                                 gauss_legendre, integrate, trapezoid, truncated_domain,
                                 weighted_transform)

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_single_atom_is_dirac():
    m = from_atoms([0.7], [1.0])
    assert len(m) == 1 and m.total_mass == 1.0
    assert integrate(m, lambda w: w ** 2) == 0.7 ** 2


def test_zero_weights_give_zero_mass():
    m = from_atoms([1, 2, 3], [0, 0, 0])
    assert m.total_mass == 0.0
    assert integrate(m, lambda w: w) == 0


def test_two_atoms_mass():
    m = from_atoms([0.5, 2.0], [0.5, 0.5])
    assert m.total_mass == 1.0
    assert m.nodes.tolist() == [0.5, 2.0]
    assert m.provenance is Provenance.EXPLICIT_ATOMS


def test_from_atoms_errors():
    with pytest.raises(ArgumentError):
        from_atoms([1, 2], [1.0])
    with pytest.raises(DomainError):
        from_atoms([1, 2], [1.0, -0.1])


def test_vector_atoms():
    m = from_atoms([[0, 1], [1, 0], [2, 2]], [1, 2, 3])
    assert m.param_dim == 2
    assert m.node(2).tolist() == [2.0, 2.0]
    assert m.node_array().shape == (3, 2)


def test_gauss_legendre_one_point():
    m = gauss_legendre(-1, 1, 1)
    assert m.nodes.tolist() == [0.0]
    assert m.weights.tolist() == pytest.approx([2.0], abs=1e-15)


def test_gauss_legendre_two_point():
    m = gauss_legendre(-1, 1, 2)
    # hand solution of the 2-point moment conditions
    assert sorted(m.nodes) == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-15)
    assert m.weights.tolist() == pytest.approx([1.0, 1.0], abs=1e-15)


def test_gauss_legendre_quadratic():
    assert integrate(gauss_legendre(0, 1, 16), lambda w: w ** 2).real == pytest.approx(
        1 / 3, abs=1e-14)


def test_gauss_legendre_bad_interval():
    with pytest.raises(DomainError):
        gauss_legendre(1, 1, 4)
    with pytest.raises(DomainError):
        gauss_legendre(2, 1, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 16, 64])
def test_gauss_legendre_properties(n):
    a, b = -0.3, 1.7
    m = gauss_legendre(a, b, n)
    assert np.all((m.nodes > a) & (m.nodes < b))
    assert np.all(m.weights > 0)
    assert m.total_mass == pytest.approx(b - a, rel=1e-13)
    for deg in range(2 * n):
        exact = (b ** (deg + 1) - a ** (deg + 1)) / (deg + 1)
        got = integrate(m, lambda w: w ** deg).real
        assert abs(got - exact) <= 1e-12 * max(abs(exact), 1.0)


def test_trapezoid_linear_exact():
    m = trapezoid(0, 2, 5)
    assert m.total_mass == pytest.approx(2.0, rel=1e-15)
    assert integrate(m, lambda w: 3 * w + 1).real == pytest.approx(8.0, rel=1e-14)


def test_truncated_domain_mass():
    m = truncated_domain(5.0, 40)
    assert m.total_mass == pytest.approx(10.0, rel=1e-13)
    m2 = truncated_domain(1.0, 6, dim=2)
    assert m2.param_dim == 2 and len(m2) == 36
    assert m2.total_mass == pytest.approx(4.0, rel=1e-13)


def test_weighted_transform_identity_and_zero():
    base = gauss_legendre(-1, 1, 8)
    same = weighted_transform(base, lambda w: 1.0)
    assert np.array_equal(same.weights, base.weights)
    assert weighted_transform(base, lambda w: 0.0).total_mass == 0.0


def test_weighted_transform_lorentzian_mass():
    m = weighted_transform(gauss_legendre(-10, 10, 200), lambda w: 1 / (1 + w * w))
    assert m.total_mass == pytest.approx(2 * math.atan(10), abs=1e-6)


@pytest.mark.parametrize("bad", [-1.0, float("nan"), float("inf")])
def test_weighted_transform_rejects(bad):
    with pytest.raises(DomainError):
        weighted_transform(gauss_legendre(0, 1, 4), lambda w: bad)


def test_integrate_fourier_unit_interval():
    m = gauss_legendre(-0.5, 0.5, 64)
    assert abs(integrate(m, lambda w: np.exp(2j * np.pi * w))) <= 1e-12


def test_integrate_names_bad_node():
    m = from_atoms([0.0, 1.0, 2.0], [1, 1, 1])
    with pytest.raises(EvaluationError, match="1"):
        integrate(m, lambda w: math.inf if w == 1.0 else 1.0)


def test_compensated_sum_beats_naive():
    vals = np.array([1.0, 1e100, 1.0, -1e100])
    assert compensated_sum(vals) == 2.0
    assert compensated_sum(np.array([])) == 0.0
    z = compensated_sum(np.array([1e16 + 1j, 1.0 + 1e16j, -1e16 - 1e16j]))
    assert z == 1 + 1j


@given(st.lists(finite, min_size=1, max_size=40))
def test_json_round_trip_exact(xs):
    w = [abs(x) for x in xs]
    m = from_atoms(xs, w)
    back = ParamMeasure.from_json(m.to_json())
    assert np.array_equal(back.nodes, m.nodes)
    assert np.array_equal(back.weights, m.weights)
    assert back.provenance == m.provenance
    assert json.loads(m.to_json())["provenance"] == "explicit_atoms"


@settings(max_examples=50)
@given(st.lists(st.tuples(finite, finite, st.floats(0, 10)), min_size=1, max_size=30),
       st.floats(-5, 5), st.floats(-5, 5))
def test_integrate_linear(rows, alpha, beta):
    nodes = list(range(len(rows)))
    m = from_atoms(nodes, [r[2] for r in rows])
    f = lambda w: rows[int(w)][0]
    g = lambda w: rows[int(w)][1]
    lhs = integrate(m, lambda w: alpha * f(w) + beta * g(w))
    rhs = alpha * integrate(m, f) + beta * integrate(m, g)
    scale = sum(r[2] * (abs(alpha * r[0]) + abs(beta * r[1])) for r in rows)
    assert abs(lhs - rhs) <= 1e-13 * max(scale, 1e-300)


@given(st.lists(st.floats(0, 10), min_size=1, max_size=30), st.floats(0, 1))
def test_monotone_mass(weights, c):
    m = from_atoms(list(range(len(weights))), weights)
    assert weighted_transform(m, lambda w: c).total_mass <= m.total_mass


def test_stored_mass_matches_sum():
    rng = np.random.default_rng(1)
    w = rng.uniform(0, 1, 10000)
    m = from_atoms(np.arange(10000.0), w)
    assert m.total_mass == pytest.approx(math.fsum(w), rel=1e-14)
