"""Seeded self-audit: every module invariant checked against an analytic or
brute-force oracle.  ``run_audit(seed)`` is deterministic for a fixed seed."""
from __future__ import annotations

import math

import numpy as np

from .error_bounds import (PreimageModel, RepresenterFunction, pointwise_bound,
                           power_values)
from .inverse import (InverseProblem, forward_apply, l2_norm_sq, objective_audit, preimage,
                      solve_tikhonov)
from .kernel import cauchy_schwarz_audit, gram, psd_check
from .measure import from_atoms, gauss_legendre, integrate
from .sampling import SamplingScheme, integer_nodes, reconstruction_error_profile
from .synthesis import (ExpansionSpec, KernelFamilySpec, TransformKernelSpec, cosine_basis,
                        expansion_kernel, fourier_transform_kernel, gaussian_kernel,
                        gaussian_scale_mixture, integrate_kernel_family,
                        integrate_transform_kernel, paley_wiener_kernel,
                        paley_wiener_transform, radial_to_kernel, schoenberg_rbf,
                        sobolev_kernel)

GAMMAS = (0.0, 1e-3, 1e-1, 1.0)
BOUND_WIDTH = 0.3


def builtin_families():
    """``(name, kernel, sampler)`` for every built-in family; ``sampler(rng, n)``
    draws ``n`` points from the family's natural domain."""
    box = lambda lo, hi, d: (lambda rng, n: rng.uniform(lo, hi, (n, d)))
    scales = gauss_legendre(0.0, 3.0, 16)
    return [
        ("paley_wiener", paley_wiener_kernel(0.5), box(-2, 2, 1)),
        ("paley_wiener_quadrature", integrate_transform_kernel(paley_wiener_transform()),
         box(-2, 2, 1)),
        ("sobolev_m1_d1", sobolev_kernel(1, 1), box(-2, 2, 1)),
        ("sobolev_m2_d2", sobolev_kernel(2, 2, 8.0, 40), box(-1, 1, 2)),
        ("gaussian", gaussian_kernel(1.0, 2), box(-2, 2, 2)),
        ("gaussian_mixture", radial_to_kernel(
            gaussian_scale_mixture(from_atoms([1.0, 2.0], [0.5, 0.5])), domain_dim=2),
         box(-2, 2, 2)),
        ("schoenberg_d1", radial_to_kernel(schoenberg_rbf(1, scales)), box(-2, 2, 1)),
        ("schoenberg_d2", radial_to_kernel(schoenberg_rbf(2, scales)), box(-2, 2, 2)),
        ("schoenberg_d3", radial_to_kernel(schoenberg_rbf(3, scales)), box(-2, 2, 3)),
        ("expansion_cosine", expansion_kernel(
            ExpansionSpec(cosine_basis(8), [2.0 ** -n for n in range(8)], 8)), box(0, 1, 1)),
        ("family_mixture", integrate_kernel_family(KernelFamilySpec(
            lambda w: gaussian_kernel(w, 1), gauss_legendre(0.5, 2.0, 4))), box(-2, 2, 1)),
    ]


def separated_points(rng, n, min_gap=0.6, max_gap=1.5):
    """``n`` sorted, centred points with consecutive gaps in ``[min_gap, max_gap]``."""
    pts = np.cumsum(rng.uniform(min_gap, max_gap, n))
    return pts - pts.mean()


def random_tikhonov_problem(rng, transform, gamma, max_n=20):
    n = int(rng.integers(1, max_n + 1))
    y = rng.normal(size=n) + 1j * rng.normal(size=n)
    return InverseProblem(transform, separated_points(rng, n), y, gamma)


def _result(name, metric, tolerance, passed=None, **extra):
    passed = bool(metric <= tolerance) if passed is None else bool(passed)
    return {"name": name, "passed": passed, "metric": float(metric),
            "tolerance": float(tolerance), **extra}


def audit_measure(rng):
    worst = 0.0
    for n in (1, 2, 5, 16):
        m = gauss_legendre(0.0, 1.0, n)
        for deg in range(2 * n):
            exact = 1.0 / (deg + 1)
            worst = max(worst, abs(integrate(m, lambda w: w ** deg) - exact) / exact)
    return _result("measure.gauss_legendre_exactness", worst, 1e-12)


def audit_paley_wiener(rng, pairs=100):
    K = integrate_transform_kernel(paley_wiener_transform(0.5, 64))
    P = rng.uniform(-2, 2, (pairs, 2))
    err = max(abs(K(x, y) - np.sinc(x - y)) for x, y in P)
    return _result("synthesis.paley_wiener_consistency", err, 1e-10)


def audit_sobolev(rng):
    K = sobolev_kernel(1, 1)
    t = np.linspace(-3, 3, 241)
    vals = K.matrix(t, [0.0])[:, 0]
    err = float(np.max(np.abs(vals - math.pi * np.exp(-2 * math.pi * np.abs(t)))))
    return _result("synthesis.sobolev_oracle", err, 1e-3)


def audit_schoenberg(rng):
    z = np.linspace(0, 20, 1000)
    unit = from_atoms([1.0], [1.0])
    e1 = np.max(np.abs(schoenberg_rbf(1, unit)(z) - np.cos(z)))
    e3 = np.max(np.abs(schoenberg_rbf(3, unit)(z) - np.sinc(z / math.pi)))
    return _result("synthesis.schoenberg_identities", max(e1, e3), 1e-12)


def audit_psd(rng, sets=50, max_points=30):
    failures = []
    cs = 0.0
    for name, kernel, sampler in builtin_families():
        for _ in range(sets):
            P = sampler(rng, int(rng.integers(1, max_points + 1)))
            rep = psd_check(gram(kernel, P))
            if not rep.passed:
                failures.append(name)
        pairs = [(sampler(rng, 1)[0], sampler(rng, 1)[0]) for _ in range(20)]
        cs = max(cs, cauchy_schwarz_audit(kernel, pairs))
    return [_result("kernel_core.psd_suite", len(failures), 0, failures=sorted(set(failures))),
            _result("kernel_core.cauchy_schwarz", cs, 1 + 1e-10)]


def audit_kramer(rng):
    K = paley_wiener_kernel(0.5)
    target = lambda X: np.sinc(np.asarray(X)[:, 0] - 0.3)
    grid = np.linspace(-1, 1, 21)
    errs = {}
    for n in (25, 50, 100, 200):
        errs[n] = float(reconstruction_error_profile(SamplingScheme(integer_nodes(n), K),
                                                     target, grid).max())
    monotone = all(errs[a] >= errs[b] for a, b in ((25, 50), (50, 100), (100, 200)))
    return _result("sampling.kramer_reconstruction", errs[200], 5e-3,
                   passed=errs[200] <= 5e-3 and errs[200] < errs[25] and monotone)


def audit_inverse(rng, problems=50, perturbations=100):
    T = paley_wiener_transform()
    res = minimal = rep = fit = 0.0
    for i in range(problems):
        pb = random_tikhonov_problem(rng, T, GAMMAS[i % len(GAMMAS)])
        sol = solve_tikhonov(pb)
        res = max(res, sol.normal_residual)
        H = sol.gram.entries
        base = objective_audit(pb, sol.alpha, H)
        for _ in range(perturbations):
            d = rng.normal(size=pb.n) + 1j * rng.normal(size=pb.n)
            d *= 1e-3 / np.linalg.norm(d)
            minimal = max(minimal, base - objective_audit(pb, sol.alpha + d, H))
        a = preimage(sol, pb)
        q = np.vdot(sol.alpha, H @ sol.alpha).real
        if q > 0:
            rep = max(rep, abs(l2_norm_sq(a, T.measure) - q) / q)
        image = np.array([forward_apply(T, a, x) for x in pb.sample_points])
        scale = max(1.0, float(np.sum(np.abs(sol.alpha))))
        fit = max(fit, float(np.max(np.abs(image - H @ sol.alpha))) / scale)
    return [_result("inverse.stationarity", res, 1e-10),
            _result("inverse.minimality", minimal, 0.0),
            _result("inverse.preimage_norm", rep, 1e-10),
            _result("inverse.fitted_image", fit, 1e-12)]


def audit_power(rng, trials=100, nested=50):
    mu = gauss_legendre(0.0, 1.0, 64)
    G = gaussian_kernel(BOUND_WIDTH)
    T = TransformKernelSpec(fourier_transform_kernel, mu)
    worst = 0.0
    for _ in range(trials):
        W = rng.uniform(0, 1, int(rng.integers(0, 6)))
        nc = int(rng.integers(1, 4))
        a = RepresenterFunction(G, rng.uniform(0, 1, nc),
                                rng.normal(size=nc) + 1j * rng.normal(size=nc))
        rep = pointwise_bound(PreimageModel(G, W, mu), T, a, rng.uniform(-3, 3), check=False)
        worst = max(worst, rep.ratio)
    mono = 0.0
    for _ in range(nested):
        W = rng.uniform(0, 1, int(rng.integers(0, 5)))
        W2 = np.concatenate([W, rng.uniform(0, 1, int(rng.integers(1, 3)))])
        p1 = power_values(PreimageModel(G, W, mu), mu.nodes)
        p2 = power_values(PreimageModel(G, W2, mu), mu.nodes)
        mono = max(mono, float(np.max(p2 - p1)))
    return [_result("error_bounds.bound_validity", worst, 1 + 1e-9),
            _result("error_bounds.power_monotonicity", mono, 1e-12)]


def audit_aronszajn(rng, pairs=50):
    K1 = gaussian_kernel(1.0)
    K2 = paley_wiener_kernel(0.5)
    K = integrate_kernel_family(KernelFamilySpec(lambda w: (K1, K2)[int(w) - 1],
                                                 from_atoms([1, 2], [1.0, 1.0])))
    worst = 0.0
    for x, y in rng.uniform(-3, 3, (pairs, 2)):
        direct = K1(x, y) + K2(x, y)
        worst = max(worst, abs(K(x, y) - direct) / max(abs(direct), 1e-300))
    return _result("synthesis.aronszajn_sum", worst, 1e-15)


def run_audit(seed: int = 0, quick: bool = True) -> dict:
    """Run every suite; ``quick`` shrinks the randomized sample counts."""
    scale = 5 if quick else 1
    suites = [
        audit_measure,
        audit_paley_wiener,
        audit_sobolev,
        audit_schoenberg,
        lambda rng: audit_psd(rng, sets=50 // scale),
        audit_kramer,
        lambda rng: audit_inverse(rng, problems=50 // scale, perturbations=100 // scale),
        lambda rng: audit_power(rng, trials=100 // scale, nested=50 // scale),
        audit_aronszajn,
    ]
    results = []
    for i, suite in enumerate(suites):
        out = suite(np.random.default_rng([seed, i]))
        results.extend(out if isinstance(out, list) else [out])
    return {"seed": int(seed), "passed": all(r["passed"] for r in results), "suites": results}
