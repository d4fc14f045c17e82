"""Command-line front end.

Every command prints a deterministic envelope (sorted keys, floats with 17
significant digits); ``--csv`` switches tabular payloads to CSV.

Exit codes: 0 success, 1 usage or parse error, 2 numeric-limit error,
3 selftest failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit_io import build_unitary, load_circuit
from .errors import LimitError, NotUnitaryError, ScrambleError
from .growth import GrowthKind, GrowthMethod, SearchConfig, growth_search, growth_tilde, weight_one_paulis
from .measures import (
    MeasureParams,
    complexity,
    complexity_bound,
    frontier_max_entropy,
    landmark_points,
    o_max_closed,
    o_max_spectrum,
    trivial_bound,
)
from .pauli import PRNG_NAME
from .spectrum import N_MAX, PTM_N_MAX, PauliSpectrum, check_unitary, conjugate, decompose, load_dense_operator, normalize
from .selftest import run_selftest

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_SELFTEST = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 0) -> str:
    """JSON with sorted keys and 17-significant-digit floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return json.dumps(str(obj))


def envelope(command: str, inputs: dict, results, seed=None) -> dict:
    env = {"command": command, "inputs": inputs, "results": results, "tool_version": __version__}
    if seed is not None:
        env["seed"] = seed
    return env


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _measures(s: PauliSpectrum, p: MeasureParams) -> dict:
    r = complexity(s, p)
    return {"W": r.W, "S": r.S, "R": r.R}


def _unitary(args):
    if args.circuit:
        c = load_circuit(args.circuit)
        if c.n > args.n_max:
            raise LimitError(f"n={c.n} exceeds n_max={args.n_max}")
        return build_unitary(c, args.n_max), {"circuit": args.circuit}
    u = load_dense_operator(args.operator)
    if u.n > args.n_max:
        raise LimitError(f"n={u.n} exceeds n_max={args.n_max}")
    return check_unitary(u), {"operator": args.operator}


def _observables(spec_list, n, n_max):
    if not spec_list:
        return [(P.label, PauliSpectrum.basis(P)) for P in weight_one_paulis(n)]
    out = []
    for spec in spec_list:
        if Path(spec).is_file():
            op = load_dense_operator(spec)
            if op.n != n:
                raise UsageError(f"observable {spec} acts on {op.n} qubits, unitary on {n}")
            out.append((f"file:{spec}", normalize(decompose(op, n_max))))
        else:
            try:
                out.append((spec, PauliSpectrum.from_label(spec, n)))
            except ValueError as exc:
                raise UsageError(f"observable {spec!r}: not a file and not a Pauli label ({exc})") from None
    return out


def cmd_measure(args) -> str:
    p = MeasureParams(args.a)
    u, source = _unitary(args)
    rows = []
    for label, s in _observables(args.observable, u.n, args.n_max):
        before = _measures(s, p)
        after = _measures(conjugate(u, s, args.n_max), p)
        rows.append({
            "observable": label,
            "before": before,
            "after": after,
            "delta": {k: after[k] - before[k] for k in before},
        })
    if args.csv:
        header = ["observable", "W_before", "S_before", "R_before", "W_after", "S_after", "R_after", "dW", "dS", "dR"]
        return _csv(header, [
            [r["observable"], *(r[part][k] for part in ("before", "after", "delta") for k in "WSR")] for r in rows
        ])
    inputs = dict(source, a=p.a, observables=args.observable or "all weight-1 Paulis", n_max=args.n_max)
    return dumps(envelope("measure", inputs, {"n": u.n, "observables": rows}))


def cmd_omax(args) -> str:
    p = MeasureParams(args.a)
    if args.n < 1:
        raise UsageError("n must be >= 1")
    if args.n > args.n_max:
        raise LimitError(f"n={args.n} exceeds n_max={args.n_max}")
    closed = o_max_closed(args.n, p)
    rec = complexity(o_max_spectrum(args.n, p), p)
    diff = max(abs(closed.W - rec.W), abs(closed.S - rec.S), abs(closed.R - rec.R))
    results = {
        "closed_form": {"W": closed.W, "S": closed.S, "R": closed.R},
        "recomputed": {"W": rec.W, "S": rec.S, "R": rec.R},
        "max_abs_difference": diff,
        "R_per_qubit": closed.R / args.n,
        "bound": complexity_bound(args.n, p),
        "trivial_bound": trivial_bound(args.n, p),
    }
    return dumps(envelope("omax", {"n": args.n, "a": p.a, "n_max": args.n_max}, results))


def plane_rows(n: int, p: MeasureParams, samples: int) -> list[tuple[str, float, float]]:
    rows = [(pt.label, pt.W, pt.S) for pt in landmark_points(n, p)]
    for w in np.linspace(0, n, samples):
        w = float(min(max(w, 0.0), n))
        rows.append(("frontier", w, frontier_max_entropy(n, p, w)))
    return rows


def cmd_plane(args) -> str:
    p = MeasureParams(args.a)
    if args.n < 1 or args.samples < 2:
        raise UsageError("need n >= 1 and samples >= 2")
    rows = plane_rows(args.n, p, args.samples)
    if args.csv:
        return _csv(["label", "W", "S"], rows)
    results = {"rows": [{"label": lab, "W": w, "S": s} for lab, w, s in rows]}
    return dumps(envelope("plane", {"n": args.n, "a": p.a, "samples": args.samples}, results))


_KINDS = {"E": GrowthKind.ENTANGLEMENT, "M": GrowthKind.MAGIC, "R": GrowthKind.COMPLEXITY, "RT": GrowthKind.COMPLEXITY_TILDE}


def cmd_growth(args) -> str:
    p = MeasureParams(args.a)
    kind = _KINDS[args.kind.upper()]
    u, source = _unitary(args)
    inputs = dict(source, a=p.a, kind=kind.value, n_max=args.n_max)
    seed = None
    if kind is GrowthKind.COMPLEXITY_TILDE:
        rep = growth_tilde(u, p, args.n_max)
    else:
        cfg = SearchConfig(restarts=args.restarts, max_iters=args.max_iters, step=args.step, tol=args.tol, seed=args.seed)
        rep = growth_search(u, kind, p, cfg, args.ptm_n_max)
        inputs.update(restarts=cfg.restarts, max_iters=cfg.max_iters, step=cfg.step, tol=cfg.tol,
                      ptm_n_max=args.ptm_n_max, prng=PRNG_NAME)
        seed = args.seed
    top = [{"pauli": P.label, "re": c.real, "im": c.imag} for P, c in rep.witness.top(16) if abs(c) > 0]
    results = {
        "kind": kind.value,
        "method": rep.method.value,
        "value": rep.value,
        "witness_label": rep.witness_label,
        "witness_top": top,
        "iterations": rep.iterations,
        "n": rep.witness.n,
    }
    if rep.method is GrowthMethod.LOWER_BOUND:
        results["best_seed_value"] = max(rep.seed_values.values())
    return dumps(envelope("growth", inputs, results, seed))


def cmd_selftest(args):
    results = run_selftest(args.level, args.seed)
    ok = all(r.passed for r in results)
    payload = {
        "passed": ok,
        "checks": [
            {"name": r.name, "passed": r.passed, "worst_deviation": r.worst, "tolerance": r.tolerance,
             "detail": r.detail}
            for r in results
        ],
    }
    # timings are left out so the envelope stays byte-identical across runs
    text = dumps(envelope("selftest", {"level": args.level}, payload, args.seed))
    return text, ok


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=4.0, help="logarithm base a > 1 (default 4)")
    common.add_argument("--n-max", type=int, default=N_MAX, help="largest dense qubit count (default 10)")
    common.add_argument("--ptm-n-max", type=int, default=PTM_N_MAX, help="largest transfer-matrix qubit count (default 5)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--csv", action="store_true", help="emit tabular payloads as CSV")

    parser = _Parser(prog="scramblemetry", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", parents=[common], help="W, S, R of observables before/after a unitary")
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--circuit", help="circuit file")
    src.add_argument("--operator", help="dense unitary file")
    m.add_argument("--observable", action="append", help="Pauli label (e.g. 'X0 Z1') or dense-operator file; repeatable")
    m.set_defaults(func=cmd_measure)

    o = sub.add_parser("omax", parents=[common], help="closed-form and recomputed values of the complexity maximizer")
    o.add_argument("--n", type=int, required=True)
    o.set_defaults(func=cmd_omax)

    pl = sub.add_parser("plane", parents=[common], help="landmark operators and the weight/entropy frontier")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--samples", type=int, default=101)
    pl.set_defaults(func=cmd_plane)

    g = sub.add_parser("growth", parents=[common], help="growth measures of a unitary")
    gsrc = g.add_mutually_exclusive_group(required=True)
    gsrc.add_argument("--circuit")
    gsrc.add_argument("--operator")
    g.add_argument("--kind", required=True, type=str.upper, choices=sorted(_KINDS))
    g.add_argument("--restarts", type=int, default=8)
    g.add_argument("--max-iters", type=int, default=500)
    g.add_argument("--step", type=float, default=0.1)
    g.add_argument("--tol", type=float, default=1e-8)
    g.set_defaults(func=cmd_growth)

    st = sub.add_parser("selftest", parents=[common], help="run the built-in property suite")
    st.add_argument("--level", choices=("quick", "full"), default="quick")
    st.set_defaults(func=cmd_selftest)
    return parser


def _cap_threads():
    raw = os.environ.get("SCRAMBLEMETRY_THREADS")
    if not raw:
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return
    threadpool_limits(max(1, int(raw)))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _cap_threads()
    try:
        out = args.func(args)
    except (LimitError, NotUnitaryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ScrambleError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(out, tuple):
        text, ok = out
        sys.stdout.write(text + "\n")
        return EXIT_OK if ok else EXIT_SELFTEST
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
