"""Command-line front end.

Subcommands: ``div`` (divergence between two operators), ``measure``
(entropic quantities of states and channels), ``verify`` (seeded inequality
campaigns, JSONL reports), ``gen`` (random operators and channels for
reproducible pipelines).

Operators travel as JSON files {"dims": [...], "labels": [...], "matrix":
[[[re, im], ...], ...]}; channels as {"din": d, "dout": d, "kraus":
[matrix, ...]}. Complex entries are [re, im] pairs. Infinite values print
as the JSON string "inf" since JSON has no infinity literal. Values are in
nats unless --bits is given, which only rescales the display.

Exit codes: 0 success, 1 verification failures, 2 domain error, 3 parse
error (bad flags or malformed files).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import harness
from ._backend import backend_name, compiled_available
from .channels import QuantumChannel, random_channel, random_density, random_psd
from .divergences import (
    OptimizerOptions,
    divergence_value,
    optimized_f_divergence,
    petz_renyi,
    sandwiched_renyi,
)
from .extreal import ExtendedReal
from .fkernel import FDescriptor, parse_f_spec, renyi_alpha_of
from .linops import DomainError, HermitianOperator, SystemLayout
from .measures import (
    FreeStateSet,
    MeasureOptions,
    channel_f_mutual_information,
    coherent_f_information,
    conditional_f_entropy,
    f_entropy,
    f_mutual_information,
    resource_measure,
)

_LN2 = math.log(2.0)


class ParseError(Exception):
    """Malformed input: bad flag values or files that do not match the schema."""


class _Parser(argparse.ArgumentParser):
    # Flag errors are parse errors: exit 3, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(3)


# ---------------------------------------------------------------------------
# file formats

def complex_matrix_to_json(M) -> list:
    A = np.asarray(M, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def complex_matrix_from_json(obj, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError):
        raise ParseError(f"{what} is not a numeric nested array")
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{what} entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def operator_to_json(op: HermitianOperator) -> dict:
    return {
        "dims": [int(d) for d in op.layout.dims],
        "labels": list(op.layout.labels),
        "matrix": complex_matrix_to_json(op.matrix),
    }


def operator_from_json(obj) -> HermitianOperator:
    if not isinstance(obj, dict):
        raise ParseError("operator file must hold a JSON object")
    for key in ("dims", "labels", "matrix"):
        if key not in obj:
            raise ParseError(f"operator file is missing {key!r}")
    dims = obj["dims"]
    labels = obj["labels"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise ParseError("dims must be a list of positive integers")
    if not isinstance(labels, list) or len(labels) != len(dims) or not all(isinstance(l, str) for l in labels):
        raise ParseError("labels must name each factor in dims")
    M = complex_matrix_from_json(obj["matrix"])
    total = int(np.prod(dims))
    if M.shape != (total, total):
        raise ParseError(f"matrix is {M.shape}, but dims imply {total}x{total}")
    try:
        layout = SystemLayout(tuple(zip(labels, dims)))
        return HermitianOperator(M, layout, atol=1e-9)
    except (ValueError, DomainError) as exc:
        raise ParseError(str(exc))


def channel_to_json(ch: QuantumChannel) -> dict:
    return {
        "din": ch.din,
        "dout": ch.dout,
        "kraus": [complex_matrix_to_json(K) for K in ch.kraus],
    }


def channel_from_json(obj) -> QuantumChannel:
    if not isinstance(obj, dict):
        raise ParseError("channel file must hold a JSON object")
    for key in ("din", "dout", "kraus"):
        if key not in obj:
            raise ParseError(f"channel file is missing {key!r}")
    if not isinstance(obj["kraus"], list) or not obj["kraus"]:
        raise ParseError("kraus must be a non-empty list of matrices")
    ks = [complex_matrix_from_json(K, "kraus operator") for K in obj["kraus"]]
    try:
        return QuantumChannel(tuple(ks), int(obj["din"]), int(obj["dout"]))
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc))


def _load_json(path: str):
    try:
        with open(path) as fp:
            return json.load(fp)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}")


def load_operator(path: str) -> HermitianOperator:
    return operator_from_json(_load_json(path))


def load_channel(path: str) -> QuantumChannel:
    return channel_from_json(_load_json(path))


def _emit(obj: dict, out_path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fp:
            fp.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# value plumbing

def _display_value(v: ExtendedReal, bits: bool):
    j = v.to_json()
    if bits and isinstance(j, float):
        return j / _LN2
    return j


def _parse_f(spec: str) -> FDescriptor:
    try:
        return parse_f_spec(spec)
    except (ValueError, DomainError) as exc:
        raise ParseError(f"bad f spec {spec!r}: {exc}")


def _optimizer_options(args) -> OptimizerOptions:
    kwargs = {}
    if getattr(args, "eps", None):
        try:
            kwargs["epsilon_schedule"] = tuple(float(x) for x in args.eps.split(","))
        except ValueError:
            raise ParseError(f"bad --eps list {args.eps!r}")
    for flag, field in (("max_iters", "max_iters"), ("grad_tol", "grad_tol"), ("multistarts", "multistarts"), ("fd_step", "fd_step")):
        v = getattr(args, flag, None)
        if v is not None:
            kwargs[field] = v
    if getattr(args, "pure", False):
        kwargs["force_pure"] = True
    try:
        return OptimizerOptions(**kwargs)
    except ValueError as exc:
        raise ParseError(str(exc))


# ---------------------------------------------------------------------------
# subcommands

def cmd_div(args) -> int:
    X = load_operator(args.x)
    Y = load_operator(args.y)
    spec = args.f
    opts = _optimizer_options(args)
    out = {"f": spec, "unit": "bits" if args.bits else "nats"}

    if spec.startswith("petz_renyi:"):
        try:
            alpha = float(spec.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad f spec {spec!r}")
        value = petz_renyi(X, Y, alpha)
        out["value"] = _display_value(value, args.bits)
        out["diagnostics"] = {"method": "closed", "family": "petz_renyi"}
        _emit(out, args.out)
        return 0

    log_scale_alpha = None
    if spec.startswith("renyi:"):
        f = _parse_f(spec)
        log_scale_alpha = renyi_alpha_of(f)
    else:
        f = _parse_f(spec)

    method = args.method
    if method in ("auto", "closed") and log_scale_alpha is not None and method != "numeric":
        value = sandwiched_renyi(X, Y, log_scale_alpha)
        out["value"] = _display_value(value, args.bits)
        out["diagnostics"] = {"method": "closed", "family": "sandwiched_renyi"}
        _emit(out, args.out)
        return 0

    if method == "numeric":
        res = optimized_f_divergence(X, Y, f, opts)
        value = res.value
        if log_scale_alpha is not None:
            a = log_scale_alpha
            if value.is_finite:
                q = value.value
                signed = -q if a < 1.0 else q
                if signed <= 0.0:
                    raise DomainError("numeric quasi-entropy has the wrong sign; cannot take log")
                value = ExtendedReal.finite(a / (a - 1.0) * math.log(signed))
        out["value"] = _display_value(value, args.bits)
        out["diagnostics"] = {
            "method": "numeric",
            "backend": "pure" if opts.force_pure else backend_name(f.builtin_code),
            "converged": res.converged,
            "iterations": res.iterations,
            "gradient_norm": res.gradient_norm,
            "epsilon_schedule": list(res.epsilon_schedule),
        }
        if args.tau_star:
            out["tau_star"] = complex_matrix_to_json(res.tau_star.matrix) if res.tau_star is not None else None
        _emit(out, args.out)
        return 0

    value = divergence_value(X, Y, f, method=method, opts=opts)
    out["value"] = _display_value(value, args.bits)
    out["diagnostics"] = {"method": method}
    _emit(out, args.out)
    return 0


def _measure_options(args) -> MeasureOptions:
    kwargs = {}
    if getattr(args, "sigma_starts", None) is not None:
        kwargs["sigma_starts"] = args.sigma_starts
    if getattr(args, "state_starts", None) is not None:
        kwargs["state_starts"] = args.state_starts
    try:
        return MeasureOptions(**kwargs)
    except ValueError as exc:
        raise ParseError(str(exc))


def cmd_measure(args) -> int:
    f = _parse_f(args.f)
    opts = _measure_options(args)
    kind = args.kind

    if kind == "channel_mi":
        if not args.channel:
            raise ParseError("--channel is required for channel_mi")
        ch = load_channel(args.channel)
        res = channel_f_mutual_information(ch, f, opts)
    else:
        if not args.rho:
            raise ParseError(f"--rho is required for {kind}")
        rho = load_operator(args.rho)
        if kind == "entropy":
            res = f_entropy(rho, f, opts)
        elif kind == "resource":
            if not args.free:
                raise ParseError("--free is required for resource")
            free = FreeStateSet(tuple(load_operator(p) for p in args.free))
            res = resource_measure(rho, free, f, opts)
        else:
            b = args.b or rho.layout.labels[-1]
            fn = {
                "mutual_info": f_mutual_information,
                "conditional_entropy": conditional_f_entropy,
                "coherent_info": coherent_f_information,
            }[kind]
            res = fn(rho, b, f, opts)

    out = {
        "kind": kind,
        "f": args.f,
        "unit": "bits" if args.bits else "nats",
        "value": _display_value(res.value, args.bits),
        "converged": res.converged,
    }
    if args.witness:
        out["witness"] = (
            complex_matrix_to_json(res.inner_witness.matrix) if res.inner_witness is not None else None
        )
    _emit(out, args.out)
    return 0


def cmd_verify(args) -> int:
    names = [name for name, _ in harness.ALL_CHECKS]
    kwargs = {"trials": args.trials, "seed": args.seed}
    if args.dims:
        try:
            a, b = args.dims.lower().split("x")
            kwargs["dims"] = (int(a), int(b))
        except ValueError:
            raise ParseError(f"bad --dims {args.dims!r}; expected e.g. 4x4")
    if args.slack is not None:
        kwargs["slack"] = args.slack
    if args.f:
        kwargs["f_specs"] = tuple(s.strip() for s in args.f.split(","))
    if args.alphas:
        try:
            kwargs["alphas"] = tuple(float(x) for x in args.alphas.split(","))
        except ValueError:
            raise ParseError(f"bad --alphas list {args.alphas!r}")
    try:
        cfg = harness.CheckConfig(**kwargs)
    except ValueError as exc:
        raise ParseError(str(exc))

    if args.check == "all":
        reports = harness.run_all(cfg)
    elif args.check in names:
        fn = dict(harness.ALL_CHECKS)[args.check]
        reports = [fn(cfg)]
    else:
        raise ParseError(f"unknown check {args.check!r}; choose from {', '.join(names)} or all")

    if args.out:
        with open(args.out, "w") as fp:
            harness.write_reports(reports, fp)
    else:
        harness.write_reports(reports, sys.stdout)

    failures = sum(r.failures for r in reports)
    if args.out:
        summary = {
            "schema": harness.SCHEMA_VERSION,
            "kind": "campaign",
            "checks": len(reports),
            "trials": sum(r.trials for r in reports),
            "failures": failures,
            "report": args.out,
        }
        print(json.dumps(summary, sort_keys=True, separators=(",", ":")))
    return 0 if failures == 0 else 1


def cmd_gen(args) -> int:
    what = args.what
    if what == "channel":
        ch = random_channel(args.din, args.dout, args.seed)
        _emit(channel_to_json(ch), args.out)
        return 0
    if args.dim < 1:
        raise ParseError("--dim must be >= 1")
    layout = None
    if args.labels:
        names = [s.strip() for s in args.labels.split(",")]
        dims_list = [int(x) for x in args.factor_dims.split(",")] if args.factor_dims else [args.dim]
        if len(names) != len(dims_list) or int(np.prod(dims_list)) != args.dim:
            raise ParseError("--labels/--factor-dims must multiply out to --dim")
        layout = SystemLayout(tuple(zip(names, dims_list)))
    if what == "state":
        op = random_density(args.dim, args.seed, rank=args.rank, layout=layout)
    else:
        op = random_psd(args.dim, args.seed, rank=args.rank, layout=layout)
    _emit(operator_to_json(op), args.out)
    return 0


def cmd_backend(args) -> int:
    _emit({"compiled_available": compiled_available(), "default_backend": backend_name((0, 0.0))}, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    p = _Parser(prog="qdiv", description="Optimized quantum f-divergences: compute, measure, verify, generate.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("div", help="divergence between two operators", parents=[], add_help=True)
    d.add_argument("--f", required=True, help="kernel spec: neg_log | neg_pow:b | inv_pow:b | convex_pow:b | renyi:a | petz_renyi:a")
    d.add_argument("--x", required=True, help="first operator JSON file")
    d.add_argument("--y", required=True, help="second operator JSON file")
    d.add_argument("--method", choices=("auto", "closed", "numeric"), default="auto")
    d.add_argument("--eps", help="comma-separated epsilon schedule for the numeric path")
    d.add_argument("--max-iters", dest="max_iters", type=int)
    d.add_argument("--grad-tol", dest="grad_tol", type=float)
    d.add_argument("--multistarts", type=int)
    d.add_argument("--fd-step", dest="fd_step", type=float)
    d.add_argument("--pure", action="store_true", help="force the pure-python ascent backend")
    d.add_argument("--tau-star", dest="tau_star", action="store_true", help="include the optimizing tau (numeric method)")
    d.add_argument("--bits", action="store_true", help="display in bits instead of nats")
    d.add_argument("--out", help="write the result JSON to a file instead of stdout")
    d.set_defaults(func=cmd_div)

    m = sub.add_parser("measure", help="entropic measures of states and channels")
    m.add_argument("--kind", required=True, choices=("entropy", "mutual_info", "conditional_entropy", "coherent_info", "resource", "channel_mi"))
    m.add_argument("--f", required=True, help="kernel spec (FDescriptor families)")
    m.add_argument("--rho", help="state JSON file (all kinds except channel_mi)")
    m.add_argument("--b", help="conditioning label (defaults to the last factor)")
    m.add_argument("--channel", help="channel JSON file (channel_mi)")
    m.add_argument("--free", nargs="+", help="free-state JSON files (resource)")
    m.add_argument("--sigma-starts", dest="sigma_starts", type=int)
    m.add_argument("--state-starts", dest="state_starts", type=int)
    m.add_argument("--witness", action="store_true", help="include the optimizing witness matrix")
    m.add_argument("--bits", action="store_true")
    m.add_argument("--out")
    m.set_defaults(func=cmd_measure)

    v = sub.add_parser("verify", help="run seeded verification campaigns")
    v.add_argument("--check", required=True, help="check name or 'all'")
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--dims", help="factor sizes for bipartite sampling, e.g. 4x4")
    v.add_argument("--slack", type=float)
    v.add_argument("--f", help="comma-separated kernel specs override")
    v.add_argument("--alphas", help="comma-separated alpha override")
    v.add_argument("--out", help="write the JSONL report here (default: stdout)")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate random operators and channels")
    g.add_argument("what", choices=("state", "psd", "channel"))
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--rank", type=int)
    g.add_argument("--din", type=int, default=2)
    g.add_argument("--dout", type=int, default=2)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--labels", help="comma-separated factor labels")
    g.add_argument("--factor-dims", dest="factor_dims", help="comma-separated factor sizes matching --labels")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("backend", help="report which ascent backend is active")
    b.add_argument("--out")
    b.set_defaults(func=cmd_backend)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse raises SystemExit for --help (code 0) and flag errors (3 via _Parser).
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
