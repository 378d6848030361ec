"""Acceptance criteria, each at its stated tolerance.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python3 tests/test_acceptance.py``.
"""
import math
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from kernelsynth.audit import BOUND_WIDTH, GAMMAS, builtin_families, random_tikhonov_problem
from kernelsynth.error_bounds import (PreimageModel, RepresenterFunction, pointwise_bound,
                                      power_values)
from kernelsynth.inverse import (forward_apply, l2_norm_sq, objective_audit, preimage,
                                 solve_tikhonov)
from kernelsynth.kernel import gram, psd_check
from kernelsynth.measure import from_atoms, gauss_legendre
from kernelsynth.sampling import SamplingScheme, integer_nodes, reconstruction_error_profile
from kernelsynth.synthesis import (KernelFamilySpec, TransformKernelSpec,
                                   fourier_transform_kernel, gaussian_kernel,
                                   integrate_kernel_family, integrate_transform_kernel,
                                   paley_wiener_kernel, paley_wiener_transform, schoenberg_rbf,
                                   sobolev_kernel)

RESULTS = {}


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def check_1():
    def run():
        K = integrate_transform_kernel(TransformKernelSpec(fourier_transform_kernel,
                                                           gauss_legendre(-0.5, 0.5, 64)))
        P = np.random.default_rng(1).uniform(-2, 2, (100, 2))
        return max(abs(K(x, y) - np.sinc(x - y)) for x, y in P)
    err, secs = timed(run)
    return err <= 1e-10 and secs < 1.0, f"max error {err:.2e}, {secs:.3f} s"


def check_2():
    def run():
        K = sobolev_kernel(1, 1)
        t = np.linspace(-3, 3, 601)
        vals = K.matrix(t, [0.0])[:, 0]
        return float(np.max(np.abs(vals - math.pi * np.exp(-2 * math.pi * np.abs(t)))))
    err, secs = timed(run)
    return err <= 1e-3 and secs < 5.0, f"max error {err:.2e}, {secs:.3f} s"


def check_3():
    z = np.linspace(0, 20, 1000)
    unit = from_atoms([1.0], [1.0])
    e1 = float(np.max(np.abs(schoenberg_rbf(1, unit)(z) - np.cos(z))))
    e3 = float(np.max(np.abs(schoenberg_rbf(3, unit)(z) - np.sinc(z / np.pi))))
    err = max(e1, e3)
    return err <= 1e-12, f"cos error {e1:.2e}, sin(z)/z error {e3:.2e}"


def check_4():
    def run():
        rng = np.random.default_rng(4)
        failures, sets = [], 0
        for name, kernel, sampler in builtin_families():
            for _ in range(50):
                rep = psd_check(gram(kernel, sampler(rng, int(rng.integers(1, 31)))))
                sets += 1
                if not rep.passed:
                    failures.append((name, rep.min_eigenvalue))
        return failures, sets
    (failures, sets), secs = timed(run)
    return not failures and secs < 30.0, f"{sets} point sets, {len(failures)} failures, {secs:.2f} s"


def check_5():
    K = paley_wiener_kernel(0.5)
    target = lambda X: np.sinc(np.asarray(X)[:, 0] - 0.3)
    grid = np.linspace(-1, 1, 21)
    err = {n: float(reconstruction_error_profile(SamplingScheme(integer_nodes(n), K),
                                                 target, grid).max()) for n in (25, 200)}
    ok = err[200] <= 5e-3 and err[200] < err[25]
    return ok, f"max error N=200 {err[200]:.2e}, N=25 {err[25]:.2e}"


def _problems():
    rng = np.random.default_rng(6)
    T = paley_wiener_transform()
    return T, rng, [random_tikhonov_problem(rng, T, GAMMAS[i % 4]) for i in range(50)]


def check_6():
    T, rng, problems = _problems()
    worst_res, worst_drop = 0.0, -np.inf
    for pb in problems:
        sol = solve_tikhonov(pb)
        worst_res = max(worst_res, sol.normal_residual)
        H = sol.gram.entries
        base = objective_audit(pb, sol.alpha, H)
        for _ in range(100):
            d = rng.normal(size=pb.n) + 1j * rng.normal(size=pb.n)
            d *= 1e-3 / np.linalg.norm(d)
            worst_drop = max(worst_drop, base - objective_audit(pb, sol.alpha + d, H))
    ok = worst_res <= 1e-10 and worst_drop <= 0.0
    return ok, f"max normal residual {worst_res:.2e}, max objective drop {worst_drop:.2e}"


def check_7():
    T, _, problems = _problems()
    norm_err = fit_err = 0.0
    for pb in problems:
        sol = solve_tikhonov(pb)
        H = sol.gram.entries
        q = np.vdot(sol.alpha, H @ sol.alpha).real
        a = preimage(sol, pb)
        if q > 0:
            norm_err = max(norm_err, abs(l2_norm_sq(a, T.measure) - q) / q)
        fit_err = max(fit_err, float(np.max(np.abs(sol.fitted - H @ sol.alpha))))
        image = np.array([forward_apply(T, a, x) for x in pb.sample_points])
        scale = max(1.0, float(np.sum(np.abs(sol.alpha))))
        fit_err = max(fit_err, float(np.max(np.abs(image - H @ sol.alpha))) / scale)
    ok = norm_err <= 1e-10 and fit_err <= 1e-12
    return ok, f"norm rel error {norm_err:.2e}, fitted error {fit_err:.2e}"


def check_8():
    rng = np.random.default_rng(8)
    mu = gauss_legendre(0.0, 1.0, 64)
    G = gaussian_kernel(BOUND_WIDTH)
    T = TransformKernelSpec(fourier_transform_kernel, mu)
    worst = 0.0
    for _ in range(100):
        W = rng.uniform(0, 1, int(rng.integers(0, 6)))
        nc = int(rng.integers(1, 4))
        a = RepresenterFunction(G, rng.uniform(0, 1, nc),
                                rng.normal(size=nc) + 1j * rng.normal(size=nc))
        rep = pointwise_bound(PreimageModel(G, W, mu), T, a, rng.uniform(-3, 3), check=False)
        worst = max(worst, rep.ratio)
    mono = -np.inf
    for _ in range(50):
        W = rng.uniform(0, 1, int(rng.integers(0, 5)))
        W2 = np.concatenate([W, rng.uniform(0, 1, int(rng.integers(1, 3)))])
        p1 = power_values(PreimageModel(G, W, mu), mu.nodes)
        p2 = power_values(PreimageModel(G, W2, mu), mu.nodes)
        mono = max(mono, float(np.max(p2 - p1)))
    ok = worst <= 1 + 1e-9 and mono <= 1e-12
    return ok, f"max observed/bound {worst:.3f}, max power increase {mono:.2e}"


def check_9():
    rng = np.random.default_rng(9)
    K1, K2 = gaussian_kernel(1.0), paley_wiener_kernel(0.5)
    K = integrate_kernel_family(KernelFamilySpec(lambda w: (K1, K2)[int(w) - 1],
                                                 from_atoms([1, 2], [1.0, 1.0])))
    worst = 0.0
    for x, y in rng.uniform(-3, 3, (200, 2)):
        direct = K1(x, y) + K2(x, y)
        worst = max(worst, abs(K(x, y) - direct) / abs(direct))
    return worst <= 1e-15, f"max relative difference {worst:.2e}"


def check_10():
    with tempfile.TemporaryDirectory() as tmp:
        outs = [Path(tmp) / f"audit{i}.json" for i in (1, 2)]
        codes = [subprocess.run([sys.executable, "-m", "kernelsynth.cli", "audit", "--seed", "0",
                                 "--out", str(p)], capture_output=True).returncode for p in outs]
        same = outs[0].read_bytes() == outs[1].read_bytes()
    return same and codes == [0, 0], f"exit codes {codes}, byte-identical {same}"


CRITERIA = {
    1: ("Paley-Wiener consistency", check_1),
    2: ("Sobolev oracle", check_2),
    3: ("Schoenberg identities", check_3),
    4: ("PSD suite", check_4),
    5: ("Kramer reconstruction", check_5),
    6: ("Tikhonov stationarity and minimality", check_6),
    7: ("Representer / pre-image consistency", check_7),
    8: ("Power-bound validity", check_8),
    9: ("Aronszajn sum", check_9),
    10: ("CLI determinism", check_10),
}


def line(number, name, passed, detail):
    return f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {name}: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    name, check = CRITERIA[number]
    passed, detail = check()
    RESULTS[number] = line(number, name, passed, detail)
    assert passed, RESULTS[number]


if __name__ == "__main__":
    ok = True
    for number, (name, check) in CRITERIA.items():
        passed, detail = check()
        ok &= passed
        print(line(number, name, passed, detail), flush=True)
    sys.exit(0 if ok else 1)
