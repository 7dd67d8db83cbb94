"""Batch command-line front end.

Loads a problem file, runs the requested computation, and writes a
machine-readable result (JSON, or CSV for sweeps).  Report requests also
render a figure next to the delimited output.

Exit codes: 0 success (near-pole conditions are warnings in the
diagnostics), 2 schema error, 3 computation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import models
from .distribution import zeta_eval, zeta_laurent
from .errors import NearPoleError, PoleError, SchemaError, ZetafioError
from .fio import (
    kv_trace,
    mollification_limit,
    residue_trace,
    trace_distribution,
    zeta_laurent_fio,
)
from .problems import build_distribution, build_fio, inputs_digest, load_problem
from .statphase import Phase, spherical_phase_integral, wave_trace_flat_torus, wave_trace_tail_bound

_ENV_PREFIX = "ZETAFIO_"


def _env_default(name: str, fallback=None, cast=str):
    raw = os.environ.get(_ENV_PREFIX + name.upper())
    if raw is None:
        return fallback
    return cast(raw)


def _cx(v: complex):
    v = complex(v)
    # adding +0.0 normalizes negative zeros for stable output
    return [v.real + 0.0, v.imag + 0.0]


def _json_default(obj):
    if isinstance(obj, complex):
        return _cx(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj)}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zetafio",
        description="zeta functions, Laurent expansions, and regularized "
                    "traces of Fourier integral operator symbols",
    )
    p.add_argument("--problem", required=True, help="path to a JSON problem file")
    p.add_argument("--out", default=_env_default("out"),
                   help="output path (overrides the problem file)")
    p.add_argument("--format", choices=["json", "csv"],
                   default=_env_default("format"),
                   help="output format (overrides the problem file)")
    p.add_argument("--threads", type=int, default=_env_default("threads", 1, int),
                   help="worker cap; recorded in diagnostics (evaluation is "
                        "deterministic regardless)")
    p.add_argument("--level", type=int, default=_env_default("level", None, int),
                   help="sphere quadrature level override")
    p.add_argument("--seed", type=int, default=_env_default("seed", 1234, int),
                   help="seed for the randomized validation criteria")
    p.add_argument("--timing", action="store_true",
                   help="embed wall-clock timing in the JSON result "
                        "(off by default so outputs are byte-reproducible)")
    return p


# --------------------------------------------------------------------------
# request handlers
# --------------------------------------------------------------------------

def _params(doc):
    return doc.get("params", {})


def _model_value(doc, args, diagnostics):
    """(value | series | sweep rows) for a model-kind problem."""
    name = doc["model"]
    pp = _params(doc)
    if name == "fractional_laplacian_circle":
        alpha = float(pp.get("alpha", -0.5))
        z = complex(*pp.get("z", [0.0, 0.0]))
        return models.circle_fractional_zeta(alpha, z)
    if name == "shifted_fractional":
        alpha = float(pp.get("alpha", -0.5))
        h = float(pp.get("h", 0.1))
        z = complex(*pp.get("z", [0.0, 0.0]))
        return models.shifted_fractional_zeta(alpha, h, z)
    if name == "heat":
        t = float(pp.get("t", 1.0))
        N = int(pp.get("N", 1))
        lat = _lattice_from_params(pp, N)
        diagnostics["gaussian_tail_bound"] = models.heat_gaussian_tail_bound(t, lat, N)
        return models.heat_trace_via_zeta(t, lat, N)
    if name == "wave_flat_torus":
        t = float(pp.get("t", 1.0))
        N = int(pp.get("N", 1))
        basis = np.asarray(pp.get("basis", (2.0 * math.pi * np.eye(N)).tolist()))
        r = float(pp.get("r_lattice", 2.0 * math.pi * 2000.0))
        diagnostics["lattice_tail_bound"] = wave_trace_tail_bound(basis, N, r, t)
        return wave_trace_flat_torus(t, basis, N, r)
    raise SchemaError(f"unknown model {name!r}")


def _lattice_from_params(pp, N):
    basis = np.asarray(pp.get("basis", (2.0 * math.pi * np.eye(N)).tolist()),
                       dtype=float)
    radius = float(pp.get("radius", 40.0))
    return models.LatticeSpec(basis=basis, truncation_radius=radius)


def _model_symbol(doc, args):
    name = doc["model"]
    pp = _params(doc)
    if name == "fractional_laplacian_circle":
        return models.fractional_circle_symbol(float(pp.get("alpha", -0.5)))
    if name == "heat":
        N = int(pp.get("N", 1))
        return models.heat_symbol(float(pp.get("t", 1.0)),
                                  _lattice_from_params(pp, N), N)
    raise SchemaError(f"model {name!r} does not define a symbol")


def _symbol_level(doc, args):
    if args.level is not None:
        return args.level
    if doc.get("kind") == "model":
        pp = _params(doc)
        return 6 if int(pp.get("N", 1)) >= 2 else 1
    return 5


def run_request(doc, args):
    """Execute the request; returns (payload dict, exit code)."""
    request = doc["request"]
    diagnostics = {"threads": args.threads, "seed": args.seed,
                   "sphere_level": _symbol_level(doc, args)}
    payload = {"request": request, "inputs_digest": inputs_digest(doc),
               "diagnostics": diagnostics}

    if request == "validate":
        from .acceptance import run_acceptance

        results = run_acceptance(verbose=True, seed=args.seed)
        payload["criteria"] = [
            {"index": r.index, "name": r.name, "passed": r.passed,
             "details": {k: v for k, v in r.details.items()}}
            for r in results
        ]
        ok = all(r.passed for r in results)
        payload["value"] = bool(ok)
        return payload, (0 if ok else 3)

    if request == "eval":
        z = complex(*_params(doc).get("z", [0.0, 0.0]))
        try:
            if doc["kind"] == "distribution":
                dist = build_distribution(doc["distribution"], level=args.level)
                payload["value"] = _cx(zeta_eval(dist, z))
            elif doc["kind"] == "fio":
                dist = trace_distribution(build_fio(doc["fio"]),
                                          level=_symbol_level(doc, args))
                payload["value"] = _cx(zeta_eval(dist, z))
            else:
                payload["value"] = _cx(_model_value(doc, args, diagnostics))
        except NearPoleError as exc:
            payload["value"] = None
            diagnostics["near_pole_warning"] = {
                "message": str(exc), "location": _cx(exc.location),
                "order": exc.order,
            }
        return payload, 0

    if request == "laurent":
        K = int(_params(doc).get("K", 2))
        if doc["kind"] == "distribution":
            series = zeta_laurent(build_distribution(doc["distribution"],
                                                     level=args.level), K=K)
        elif doc["kind"] == "fio":
            series = zeta_laurent_fio(build_fio(doc["fio"]), K=K,
                                      level=_symbol_level(doc, args))
        else:
            series = zeta_laurent_fio(_model_symbol(doc, args), K=K,
                                      level=_symbol_level(doc, args))
        payload["series"] = series.to_json_dict()
        return payload, 0

    if request == "residue":
        sym = build_fio(doc["fio"]) if doc["kind"] == "fio" else _model_symbol(doc, args)
        payload["value"] = _cx(residue_trace(sym, level=_symbol_level(doc, args)))
        return payload, 0

    if request == "kv":
        sym = build_fio(doc["fio"]) if doc["kind"] == "fio" else _model_symbol(doc, args)
        payload["value"] = _cx(kv_trace(sym, level=_symbol_level(doc, args)))
        return payload, 0

    if request == "mollify":
        pp = _params(doc)
        alpha = float(pp.get("alpha", -0.5))
        z = complex(*pp.get("z", [0.0, 0.0]))
        hs = [float(h) for h in pp.get("h_schedule", [0.2, 0.1, 0.05, 0.025])]
        vals = [models.shifted_fractional_zeta(alpha, h, z) for h in hs]
        fam = mollification_limit(hs, vals, exponents=[1.0, 2.0, 3.0],
                                  known_terms=[(alpha + z.real, 1.0)])
        payload["value"] = _cx(fam.target)
        diagnostics["extrapolation"] = fam.diagnostics
        payload["sweep"] = {"parameter": hs, "values": [_cx(v) for v in vals]}
        return payload, 0

    if request == "statphase":
        pp = _params(doc)
        N = int(pp.get("N", 2))
        r = float(pp.get("r", 50.0))
        J = int(pp.get("J", 0))
        v = np.asarray(pp.get("v", [1.0] + [0.0] * (N - 1)), dtype=float)
        phase = Phase(func=lambda x, y, xi, v=v: float(np.dot(np.asarray(xi), v)),
                      gradient=lambda x, y, xi, v=v: v,
                      hessian=lambda x, y, xi, v=v: np.zeros((len(v), len(v))))
        one = lambda x, y, xi: 1.0
        asym, brute, pts = spherical_phase_integral(phase, one, 0.0, 0.0, r, N=N, J=J)
        payload["value"] = _cx(asym)
        diagnostics["brute_force"] = _cx(brute)
        diagnostics["stationary_points"] = [
            {"point": p.point.tolist(), "phase": p.phase_value,
             "det": p.det, "signature": p.signature} for p in pts
        ]
        return payload, 0

    if request in ("wave", "heat", "report"):
        return _run_sweep(doc, args, payload, diagnostics)

    raise SchemaError(f"unsupported request {request!r}")


def _run_sweep(doc, args, payload, diagnostics):
    pp = _params(doc)
    kind = pp.get("sweep", "wave" if doc["request"] == "wave" else None)
    if doc["request"] in ("wave", "heat"):
        kind = doc["request"]
    if kind not in ("wave", "heat"):
        raise SchemaError("report requests need params.sweep = 'wave' or 'heat'")
    N = int(pp.get("N", 1))
    ts = [float(t) for t in pp.get("t_values", [float(pp.get("t", 1.0))])]
    rows = []
    if kind == "wave":
        basis = np.asarray(pp.get("basis", (2.0 * math.pi * np.eye(N)).tolist()))
        r = float(pp.get("r_lattice", 2.0 * math.pi * 2000.0))
        diagnostics["lattice_tail_bound"] = wave_trace_tail_bound(basis, N, r, ts[0])
        for t in ts:
            try:
                v = wave_trace_flat_torus(t, basis, N, r)
                rows.append((t, v))
            except PoleError as exc:
                diagnostics.setdefault("poles", []).append(
                    {"t": t, "message": str(exc)})
    else:
        lat = _lattice_from_params(pp, N)
        diagnostics["gaussian_tail_bound"] = models.heat_gaussian_tail_bound(
            min(ts), lat, N)
        for t in ts:
            rows.append((t, complex(models.heat_trace_via_zeta(t, lat, N))))
    payload["sweep"] = {"parameter": [r[0] for r in rows],
                        "values": [_cx(r[1]) for r in rows]}
    if len(rows) == 1:
        payload["value"] = _cx(rows[0][1])
    return payload, 0


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _write_json(path, payload):
    text = json.dumps(payload, sort_keys=True, indent=2, default=_json_default)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _write_csv(path, payload):
    rows = payload.get("sweep")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("parameter,re,im\n")
        if rows is not None:
            for p, (re, im) in zip(rows["parameter"], rows["values"]):
                fh.write(f"{p!r},{re!r},{im!r}\n")
        elif "series" in payload:
            s = payload["series"]
            for k, (re, im) in enumerate(s["coeffs"]):
                fh.write(f"{s['min_order'] + k},{re!r},{im!r}\n")
        elif payload.get("value") is not None:
            re, im = payload["value"]
            fh.write(f"0,{re!r},{im!r}\n")


def _render_figure(path, payload, doc):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sweep = payload.get("sweep")
    if not sweep or not sweep["parameter"]:
        return None
    xs = sweep["parameter"]
    re = [v[0] for v in sweep["values"]]
    im = [v[1] for v in sweep["values"]]
    fig, ax = plt.subplots(figsize=(6.0, 3.7))
    ax.plot(xs, re, "o-", ms=3, lw=1, label="Re")
    ax.plot(xs, im, "s-", ms=3, lw=1, label="Im")
    ax.set_xlabel("parameter")
    ax.set_ylabel("value")
    ax.set_title(f"{doc.get('kind', '')} {doc['request']}")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    figpath = os.path.splitext(path)[0] + ".png"
    fig.savefig(figpath, dpi=150)
    plt.close(fig)
    return figpath


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_problem(args.problem)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2

    out = doc.get("output", {})
    path = args.out or out.get("path") or "result.json"
    fmt = args.format or out.get("format") or "json"
    want_figures = bool(out.get("figures", False)) or doc["request"] == "report"

    t0 = time.perf_counter()
    try:
        payload, code = run_request(doc, args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (ZetafioError, PoleError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - t0
    if args.timing:
        payload["elapsed"] = elapsed
    else:
        print(f"elapsed: {elapsed:.3f} s", file=sys.stderr)

    if fmt == "csv":
        _write_csv(path, payload)
    else:
        _write_json(path, payload)
    if want_figures:
        fig = _render_figure(path, payload, doc)
        if fig:
            print(f"figure: {fig}", file=sys.stderr)
    print(f"result: {path}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
