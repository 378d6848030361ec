"""Kernel abstraction, Gram assembly and positive-semidefiniteness diagnostics."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentError, EvaluationError, InvariantViolation

PSD_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12
DIAGONAL_TOLERANCE = 1e-12

_PARALLEL_MIN_ROWS = 128


class KernelProvenance(str, Enum):
    CLOSED_FORM = "closed_form"
    INTEGRATED = "integrated"
    MIXTURE = "mixture"
    EXPANSION = "expansion"


def max_workers() -> int:
    """Thread cap from ``KERNELFORGE_THREADS`` (unset or 0 means all cores)."""
    raw = os.environ.get("KERNELFORGE_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ArgumentError(f"KERNELFORGE_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ArgumentError("KERNELFORGE_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def as_point(x, dim: int) -> np.ndarray:
    p = np.asarray(x, dtype=np.float64).reshape(-1)
    if p.shape[0] != dim:
        raise ArgumentError(f"expected a point of dimension {dim}, got shape {np.shape(x)}")
    return p


def as_points(points, dim: int) -> np.ndarray:
    """Coerce a sequence of points to an ``(n, dim)`` float array."""
    P = np.asarray(points, dtype=np.float64)
    if P.ndim == 0:
        P = P.reshape(1, 1)
    elif P.ndim == 1:
        if dim != 1:
            raise ArgumentError(
                f"a flat sequence is only accepted for 1-d kernels (kernel dimension is {dim})")
        P = P[:, None]
    if P.ndim != 2 or P.shape[1] != dim:
        raise ArgumentError(f"points must have shape (n, {dim}), got {P.shape}")
    return P


@dataclass(frozen=True)
class Kernel:
    """A complex-valued positive-definite kernel on ``R^domain_dim``.

    ``func`` is vectorized: it takes two float arrays of broadcast-compatible
    shapes ``(..., domain_dim)`` and returns the kernel values with shape
    ``(...)``.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain_dim: int = 1
    provenance: KernelProvenance = KernelProvenance.CLOSED_FORM
    label: str = "kernel"

    def evaluate(self, x, y) -> complex:
        X = as_point(x, self.domain_dim)
        Y = as_point(y, self.domain_dim)
        return complex(np.asarray(self.func(X, Y)).reshape(()))

    __call__ = evaluate

    def matrix(self, X, Y=None) -> np.ndarray:
        """Kernel matrix ``(K(X[i], Y[j]))_{ij}``."""
        X = as_points(X, self.domain_dim)
        Y = X if Y is None else as_points(Y, self.domain_dim)
        return np.asarray(self.func(X[:, None, :], Y[None, :, :]), dtype=np.complex128)

    def diag(self, X) -> np.ndarray:
        X = as_points(X, self.domain_dim)
        return np.asarray(self.func(X, X), dtype=np.complex128)


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    points: np.ndarray
    min_eigenvalue: float
    trace: float
    hermitian_defect: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.entries + self.entries.conj().T)


@dataclass(frozen=True)
class PSDReport:
    passed: bool
    min_eigenvalue: float
    hermitian_defect: float
    threshold: float

    def to_dict(self) -> dict:
        return {"passed": self.passed, "min_eigenvalue": self.min_eigenvalue,
                "hermitian_defect": self.hermitian_defect, "threshold": self.threshold}


def _assemble(kernel: Kernel, P: np.ndarray) -> np.ndarray:
    n = P.shape[0]
    workers = min(max_workers(), n // _PARALLEL_MIN_ROWS)
    if workers <= 1:
        return kernel.matrix(P)
    chunks = np.array_split(np.arange(n), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(lambda rows: kernel.matrix(P[rows], P), chunks))
    return np.vstack(blocks)


def gram_from_entries(entries, points=None) -> GramMatrix:
    A = np.array(entries, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ArgumentError(f"Gram matrix must be square, got shape {A.shape}")
    defect = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    sym = 0.5 * (A + A.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym)[0]) if A.size else 0.0
    trace = float(np.sum(A.diagonal().real))
    pts = np.empty((A.shape[0], 0)) if points is None else np.asarray(points)
    A.setflags(write=False)
    return GramMatrix(A, pts, min_eig, trace, defect)


def gram(kernel: Kernel, points) -> GramMatrix:
    """Assemble ``H = (K(x_i, x_j))_{ij}`` and its spectral diagnostics.

    Duplicate points are allowed; they only make the matrix singular.
    """
    P = as_points(points, kernel.domain_dim)
    if P.shape[0] == 0:
        raise ArgumentError("gram needs at least one point")
    if not np.all(np.isfinite(P)):
        raise ArgumentError("points must have finite coordinates")
    A = _assemble(kernel, P)
    bad = ~np.isfinite(A)
    if np.any(bad):
        i, j = (int(v) for v in np.argwhere(bad)[0])
        raise EvaluationError(
            f"{kernel.label}: K(x[{i}], x[{j}]) = {A[i, j]!r} for x[{i}]={P[i].tolist()}, "
            f"x[{j}]={P[j].tolist()}")
    return gram_from_entries(A, P)


def psd_check(g: GramMatrix, tolerance: float = PSD_TOLERANCE) -> PSDReport:
    threshold = -tolerance * max(g.trace, 1.0)
    passed = g.min_eigenvalue >= threshold and g.hermitian_defect <= HERMITIAN_TOLERANCE
    return PSDReport(bool(passed), g.min_eigenvalue, g.hermitian_defect, threshold)


def cauchy_schwarz_audit(kernel: Kernel, pairs: Sequence) -> float:
    """Worst ``|K(x,y)|^2 / (K(x,x) K(y,y))`` over ``pairs`` (0/0 counts as 0)."""
    pairs = list(pairs)
    if not pairs:
        raise ArgumentError("cauchy_schwarz_audit needs at least one pair")
    worst = 0.0
    for x, y in pairs:
        kxx = kernel.evaluate(x, x).real
        kyy = kernel.evaluate(y, y).real
        for point, value in ((x, kxx), (y, kyy)):
            if value < -DIAGONAL_TOLERANCE:
                raise InvariantViolation(
                    f"{kernel.label}: negative diagonal K(x,x)={value!r} at x={np.ravel(point).tolist()}",
                    report={"x": np.ravel(point).tolist(), "diagonal": value})
        num = abs(kernel.evaluate(x, y)) ** 2
        if num == 0.0:
            ratio = 0.0
        else:
            denom = max(kxx, 0.0) * max(kyy, 0.0)
            ratio = num / denom if denom > 0 else float("inf")
        worst = max(worst, ratio)
    return worst


def format_complex(z: complex) -> str:
    """``re+imj`` with 17 significant digits (round-trips binary64)."""
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def parse_complex(text: str) -> complex:
    return complex(text.strip())


def write_gram_csv(g: GramMatrix, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(range(g.n))
    for row in g.entries:
        writer.writerow(format_complex(z) for z in row)


def gram_to_csv(g: GramMatrix) -> str:
    buf = io.StringIO()
    write_gram_csv(g, buf)
    return buf.getvalue()


def read_gram_csv(fh) -> np.ndarray:
    rows = list(csv.reader(fh))
    if not rows:
        raise ArgumentError("empty Gram CSV")
    n = len(rows[0])
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise ArgumentError(f"Gram CSV is not {n}x{n}")
    return np.array([[parse_complex(s) for s in r] for r in body], dtype=np.complex128)
