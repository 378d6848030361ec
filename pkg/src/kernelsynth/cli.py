"""Command-line driver.

    kernelsynth build-kernel       --spec K.json --out K.csv --format csv
    kernelsynth gram               --spec G.json --out G.csv
    kernelsynth sample-reconstruct --spec S.json --out S.csv
    kernelsynth solve-inverse      --spec P.json --out P.json --format json
    kernelsynth error-bound        --spec B.json --out B.json
    kernelsynth audit              --seed 0 --out audit.json

Exit status: 0 on success, 1 for argument/domain errors (JSON on stderr),
2 when a mathematical invariant fails (diagnostic report on stderr).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .audit import run_audit
from .error_bounds import PreimageModel, RepresenterFunction, pointwise_bound
from .errors import ArgumentError, InvariantViolation, KernelSynthError, NumericalFailure
from .inverse import InverseProblem, solve_tikhonov
from .kernel import format_complex, gram, psd_check, write_gram_csv
from .sampling import SamplingScheme, integer_nodes, kramer_reconstruct_many
from .specs import aux_kernel_from_spec, kernel_from_spec, transform_from_spec

COMMANDS = ("build-kernel", "gram", "sample-reconstruct", "solve-inverse", "error-bound", "audit")


@dataclass
class RunConfig:
    command: str
    spec_path: Optional[str] = None
    output_path: Optional[str] = None
    seed: int = 0
    format: str = "json"


@dataclass
class _Output:
    text: str
    failure: Optional[dict] = None
    sidecars: dict = field(default_factory=dict)  # filename suffix -> text


class _Exit(Exception):
    def __init__(self, code, payload):
        self.code = code
        self.payload = payload


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _parse_cplx(v) -> complex:
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ArgumentError(f"cannot read {v!r} as a complex number")


def _grid(spec, default=(-2.0, 2.0, 41)) -> np.ndarray:
    if spec is None:
        lo, hi, n = default
        return np.linspace(lo, hi, n)
    if isinstance(spec, list):
        return np.asarray(spec, dtype=np.float64)
    lo, hi = float(spec.get("lo", default[0])), float(spec.get("hi", default[1]))
    if "step" in spec:
        n = int(round((hi - lo) / float(spec["step"]))) + 1
    else:
        n = int(spec.get("n", default[2]))
    return np.linspace(lo, hi, n)


def _coord(p) -> str:
    return ";".join(f"{c:.17g}" for c in np.ravel(p))


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _load_spec(path: Optional[str]) -> dict:
    if path is None:
        raise ArgumentError("--spec is required for this command")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ArgumentError(f"cannot read spec {path!r}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Exit(1, {"error_kind": "parse_error",
                        "detail": f"{exc.msg} at line {exc.lineno} column {exc.colno}"})
    if not isinstance(doc, dict):
        raise ArgumentError("spec file must contain a JSON object")
    return doc


def _points(doc, key, dim):
    pts = np.asarray(doc[key], dtype=np.float64) if key in doc else None
    if pts is None:
        raise ArgumentError(f"spec is missing field {key!r}")
    return pts if dim > 1 else pts.reshape(-1)


# -- commands -------------------------------------------------------------------

def _build_kernel(doc, fmt):
    kernel = kernel_from_spec(doc.get("kernel_spec", doc))
    if "points" in doc:
        pts = np.asarray(doc["points"], dtype=np.float64)
    elif kernel.domain_dim == 1:
        pts = _grid(doc.get("grid"))
    else:
        raise ArgumentError("multi-dimensional kernels need an explicit 'points' list")
    K = kernel.matrix(pts)
    P = pts.reshape(K.shape[0], -1)
    if fmt == "csv":
        rows = [["x\\y", *(_coord(p) for p in P)]]
        rows += [[_coord(p), *(format_complex(z) for z in row)] for p, row in zip(P, K)]
        return _Output(_csv(rows))
    out = {"label": kernel.label, "provenance": kernel.provenance.value,
           "points": P.tolist(), "entries": [[_cplx(z) for z in row] for row in K]}
    return _Output(_dump_json(out))


def _gram(doc, fmt):
    kernel = kernel_from_spec(_spec_field(doc, "kernel_spec"))
    g = gram(kernel, _points(doc, "points", kernel.domain_dim))
    report = psd_check(g)
    if fmt == "csv":
        buf = io.StringIO()
        write_gram_csv(g, buf)
        text = buf.getvalue()
    else:
        text = _dump_json({"entries": [[_cplx(z) for z in row] for row in g.entries],
                           "min_eigenvalue": g.min_eigenvalue, "trace": g.trace,
                           "psd": report.to_dict()})
    failure = None
    if not report.passed:
        failure = {"error_kind": "invariant_violation",
                   "detail": "Gram matrix failed the PSD check", "report": report.to_dict()}
    return _Output(text, failure)


def _target(spec, kernel):
    kind = spec.get("type")
    if kind == "shifted_sinc":
        s = float(spec.get("shift", 0.0))
        b = float(spec.get("half_bandwidth", 0.5))
        return lambda X: 2 * b * np.sinc(2 * b * (np.asarray(X)[:, 0] - s))
    if kind == "kernel_section":
        c = np.asarray(spec["center"], dtype=np.float64).reshape(1, -1)
        return lambda X: kernel.matrix(X, c)[:, 0]
    raise ArgumentError(f"unknown target type {kind!r}; known: shifted_sinc, kernel_section")


def _sample_reconstruct(doc, fmt):
    kernel = kernel_from_spec(doc.get("kernel_spec", {"type": "paley_wiener"}))
    nodes = doc.get("nodes", {"integer_range": 200})
    nodes = integer_nodes(int(nodes["integer_range"])) if isinstance(nodes, dict) else nodes
    scheme = SamplingScheme(np.asarray(nodes, dtype=np.float64), kernel)
    target = _target(_spec_field(doc, "target"), kernel)
    grid = _grid(doc.get("grid"), default=(-1.0, 1.0, 21))
    X = grid.reshape(-1, kernel.domain_dim)
    samples = (np.asarray([_parse_cplx(v) for v in doc["samples"]]) if "samples" in doc
               else target(scheme.nodes))
    approx = kramer_reconstruct_many(scheme, samples, X)
    oracle = np.asarray(target(X), dtype=np.complex128)
    err = np.abs(approx - oracle)
    if fmt == "csv":
        rows = [["x", "reconstruction", "oracle", "error"]]
        rows += [[_coord(x), format_complex(r), format_complex(o), f"{e:.17g}"]
                 for x, r, o, e in zip(X, approx, oracle, err)]
        return _Output(_csv(rows))
    out = {"orthogonal": scheme.orthogonal, "ortho_ratio": scheme.ortho_ratio,
           "max_error": float(err.max()) if err.size else 0.0,
           "rows": [{"x": x.tolist(), "reconstruction": _cplx(r), "oracle": _cplx(o),
                     "error": float(e)} for x, r, o, e in zip(X, approx, oracle, err)]}
    return _Output(_dump_json(out))


def _solve_inverse(doc, fmt):
    transform = transform_from_spec(_spec_field(doc, "kernel_spec"))
    data = [_parse_cplx(v) for v in _spec_field(doc, "data")]
    problem = InverseProblem(transform, _points(doc, "sample_points", transform.domain_dim),
                             data, float(doc.get("gamma", 0.0)))
    sol = solve_tikhonov(problem)
    if fmt == "csv":
        rows = [["i", "x", "alpha", "fitted"]]
        rows += [[i, _coord(x), format_complex(a), format_complex(f)]
                 for i, (x, a, f) in enumerate(zip(problem.sample_points, sol.alpha, sol.fitted))]
        return _Output(_csv(rows))
    return _Output(_dump_json(sol.to_dict()))


def _error_bound(doc, fmt):
    transform = transform_from_spec(_spec_field(doc, "transform_spec"))
    G = aux_kernel_from_spec(doc.get("G", {"type": "gaussian", "width": 1.0}))
    a_spec = _spec_field(doc, "a")
    a = RepresenterFunction(G, a_spec["centers"], [_parse_cplx(c) for c in a_spec["coefficients"]])
    model = PreimageModel(G, np.asarray(doc.get("W", []), dtype=np.float64), transform.measure)
    report = pointwise_bound(model, transform, a, _spec_field(doc, "x"))
    if fmt == "csv":
        return _Output(report.power_csv(), sidecars={"_report.json": _dump_json(report.to_dict())})
    return _Output(_dump_json(report.to_dict()), sidecars={"_power.csv": report.power_csv()})


def _spec_field(doc, key):
    if key not in doc:
        raise ArgumentError(f"spec is missing field {key!r}")
    return doc[key]


def _audit(doc, fmt, seed):
    result = run_audit(seed, quick=bool(doc.get("quick", True)))
    if fmt == "csv":
        rows = [["name", "passed", "metric", "tolerance"]]
        rows += [[r["name"], r["passed"], f"{r['metric']:.17g}", f"{r['tolerance']:.17g}"]
                 for r in result["suites"]]
        text = _csv(rows)
    else:
        text = _dump_json(result)
    failure = None
    if not result["passed"]:
        failure = {"error_kind": "invariant_violation", "detail": "audit failed",
                   "report": [r for r in result["suites"] if not r["passed"]]}
    return _Output(text, failure)


def _write(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _error(payload) -> None:
    sys.stderr.write(json.dumps(payload, default=str) + "\n")


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    fmt = config.format
    try:
        if config.command not in COMMANDS:
            raise ArgumentError(f"unknown command {config.command!r}; known: {', '.join(COMMANDS)}")
        if fmt not in ("csv", "json"):
            raise ArgumentError(f"format must be csv or json, got {fmt!r}")
        if config.seed < 0 or config.seed >= 2 ** 64:
            raise ArgumentError("seed must be a 64-bit unsigned integer")
        if config.command == "audit":
            doc = _load_spec(config.spec_path) if config.spec_path else {}
            out = _audit(doc, fmt, config.seed)
        else:
            doc = _load_spec(config.spec_path)
            handler = {"build-kernel": _build_kernel, "gram": _gram,
                       "sample-reconstruct": _sample_reconstruct,
                       "solve-inverse": _solve_inverse, "error-bound": _error_bound}
            out = handler[config.command](doc, fmt)
        _write(config.output_path, out.text)
        if config.output_path is not None:
            target = Path(config.output_path)
            for suffix, text in out.sidecars.items():
                target.with_name(target.stem + suffix).write_text(text)
        if out.failure:
            _error(out.failure)
            return 2
        return 0
    except _Exit as exc:
        _error(exc.payload)
        return exc.code
    except (InvariantViolation, NumericalFailure) as exc:
        _error({"error_kind": exc.kind, "detail": str(exc),
                "report": getattr(exc, "report", None)})
        return 2
    except KernelSynthError as exc:
        payload = {"error_kind": exc.kind, "detail": str(exc)}
        if getattr(exc, "condition_estimate", None) is not None:
            payload["condition_estimate"] = exc.condition_estimate
        _error(payload)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        _error({"error_kind": "argument_error", "detail": f"malformed spec: {exc!r}"})
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kernelsynth", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", dest="spec_path")
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(RunConfig(args.command, args.spec_path, args.output_path, args.seed, args.format))


if __name__ == "__main__":
    sys.exit(main())
