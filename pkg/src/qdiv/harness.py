"""Seeded verification campaigns for the divergence inequalities.

Each check samples random instances, evaluates both sides of one proved
inequality or identity, and records per-trial results. Seeds derive from
sha256(master_seed, check_name, trial_index), so campaigns are reproducible
and trials are independent. Closed forms are used wherever the kernel is a
built-in family; the numeric tau-ascent appears only where the check is
specifically about the optimizer, and since its value is a lower bound on a
supremum, inequality checks with a numeric left-hand side can only
under-report violations (annotated on the report).

Reports serialize to JSON lines: one object per trial plus one summary
object per check, schema version 1, no timestamps, byte-identical across
re-runs with the same seed and configuration.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    apply,
    embedding_isometry,
    isometry_channel,
    petz_recovery,
    random_channel,
    random_density,
    random_psd,
    random_pure,
)
from .divergences import (
    OptimizerOptions,
    classical_f_divergence,
    cq_f_divergence,
    divergence_value,
    optimized_f_at,
    optimized_f_divergence,
    petz_renyi,
    sandwiched_quasi_entropy,
    sandwiched_vs_petz_gap,
)
from .extreal import ExtendedReal
from .fkernel import parse_f_spec, renyi_f
from .linops import HermitianOperator, PureStateVector, SystemLayout, partial_trace
from .measures import MeasureOptions, duality_pair

SCHEMA_VERSION = 1

# Slack tiers: exact closed forms, one numeric optimizer, nested optimizers.
SLACK_CLOSED = 1e-9
SLACK_NUMERIC = 1e-6
SLACK_NESTED = 1e-4

_DPI_F_SPECS = ("neg_log", "renyi:0.5", "renyi:0.75", "renyi:2", "renyi:3")
_RECOVERY_F_SPECS = ("neg_log", "renyi:0.75", "renyi:2", "convex_pow:1.5")
_DOMINATING_F_SPECS = ("neg_log", "renyi:0.75", "renyi:2", "inv_pow:-1")
_REDUCTION_F_SPECS = ("neg_log", "renyi:0.75", "renyi:2")
_SANDWICH_ALPHAS = (0.5, 0.75, 2.0, 3.0)
_DUALITY_ALPHAS = (2.0, 3.0)
_PETZ_ALPHAS = (0.0, 0.25, 0.5, 1.5, 2.0)
_REVERSED_ALPHAS = (-1.0, -0.5, -0.25)

# Numeric sides of harness checks: concavity in tau makes every interior
# stationary point global, so two starts are a parametrization safeguard.
_NUMERIC_OPTS = OptimizerOptions(multistarts=2)


@dataclass(frozen=True)
class CheckConfig:
    trials: int = 50
    dims: tuple[int, int] = (4, 4)
    slack: float | None = None
    f_specs: tuple[str, ...] | None = None
    alphas: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.slack is not None and self.slack <= 0:
            raise ValueError("slack must be positive")
        if len(self.dims) != 2 or min(self.dims) < 2:
            raise ValueError("dims must be a pair of factor sizes >= 2")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    inputs_digest: str
    lhs: ExtendedReal
    rhs: ExtendedReal
    slack: float
    violation: float
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    trials: int
    failures: int
    worst_violation: float
    seed: int
    records: tuple[TrialRecord, ...]
    annotation: str = ""


def derive_seed(master_seed: int, check_name: str, trial: int) -> int:
    """Per-trial seed: first 8 bytes of sha256('master:check:trial')."""
    digest = hashlib.sha256(f"{master_seed}:{check_name}:{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def digest_arrays(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:16]


def _sub_seeds(seed: int, k: int) -> tuple[list[int], np.random.Generator]:
    rng = np.random.default_rng(seed)
    return [int(x) for x in rng.integers(0, 2**62, size=k)], rng


def _ge_violation(lhs: ExtendedReal, rhs: ExtendedReal) -> float:
    """Signed breakage of lhs >= rhs (negative = satisfied with margin)."""
    if lhs.is_pos_inf:
        return 0.0 if rhs.is_pos_inf else float("-inf")
    if rhs.is_pos_inf:
        return float("inf")
    if rhs.is_neg_inf:
        return 0.0 if lhs.is_neg_inf else float("-inf")
    if lhs.is_neg_inf:
        return float("inf")
    return rhs.value - lhs.value


def _eq_violation(lhs: ExtendedReal, rhs: ExtendedReal) -> float:
    if lhs.kind == rhs.kind and not lhs.is_finite:
        return 0.0
    if not (lhs.is_finite and rhs.is_finite):
        return float("inf")
    return abs(lhs.value - rhs.value)


def _make_report(name: str, cfg: CheckConfig, records: list[TrialRecord], annotation: str = "") -> CheckReport:
    failures = sum(1 for r in records if not r.ok)
    worst = max((r.violation for r in records), default=float("-inf"))
    return CheckReport(name, len(records), failures, worst, cfg.seed, tuple(records), annotation)


def _state(d: int, seed: int, rank: int | None = None, layout: SystemLayout | None = None) -> HermitianOperator:
    """Unit-trace state; with rank set, exactly singular (no ridge)."""
    if rank is None:
        return random_density(d, seed, layout=layout)
    P = random_psd(d, seed, rank=rank, layout=layout)
    return HermitianOperator(P.matrix / P.trace(), P.layout)


def _x_rank(t: int, d: int) -> int | None:
    return d - 1 if t % 4 == 0 else None


def _y_rank(t: int, d: int) -> int | None:
    return d - 1 if t % 8 == 0 else None


def _optimized_value_for_spec(spec: str, X, Y) -> ExtendedReal:
    """Closed-form optimized divergence on the quasi-entropy scale.

    'renyi:a' goes through the signed-norm expression directly (range
    unchecked), which is what lets the negative control at a = 0.3 run.
    """
    if spec.startswith("renyi:"):
        alpha = float(spec.split(":", 1)[1])
        return sandwiched_quasi_entropy(X, Y, alpha, check_range=False)
    return divergence_value(X, Y, parse_f_spec(spec), method="closed")


def check_dpi_channel(cfg: CheckConfig | None = None) -> CheckReport:
    """Q_f(X||Y) >= Q_f(N(X)||N(Y)) for random channels, closed forms."""
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _DPI_F_SPECS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "dpi_channel", t)
        subs, rng = _sub_seeds(seed, 3)
        din = int(rng.integers(2, cfg.dims[0] + 1))
        dout = int(rng.integers(2, cfg.dims[1] + 1))
        X = random_psd(din, subs[0], rank=_x_rank(t, din))
        Y = random_psd(din, subs[1], rank=_y_rank(t, din))
        ch = random_channel(din, dout, subs[2])
        spec = fs[t % len(fs)]
        lhs = _optimized_value_for_spec(spec, X, Y)
        rhs = _optimized_value_for_spec(spec, apply(ch, X), apply(ch, Y))
        v = _ge_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest_arrays(X.matrix, Y.matrix, *ch.kraus), lhs, rhs, slack, v, v <= slack, spec)
        )
    return _make_report("dpi_channel", cfg, records, "closed forms on both sides")


def check_partial_trace(cfg: CheckConfig | None = None) -> CheckReport:
    """Q_f(X_AB||Y_AB) >= Q_f(X_A||Y_A), closed forms on the quasi scale."""
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _DPI_F_SPECS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "partial_trace", t)
        subs, rng = _sub_seeds(seed, 3)
        dA = int(rng.integers(2, cfg.dims[0] + 1))
        dB = int(rng.integers(2, cfg.dims[1] + 1))
        layout = SystemLayout((("A", dA), ("B", dB)))
        d = dA * dB
        if t % 8 == 4:
            # Product form with singular A-marginal: exercises the extension
            # construction on the recovery side of the theory.
            XA = random_psd(dA, subs[0], rank=dA - 1)
            XB = random_psd(dB, subs[2])
            X = HermitianOperator(np.kron(XA.matrix, XB.matrix), layout)
        else:
            X = random_psd(d, subs[0], rank=_x_rank(t, d), layout=layout)
        Y = random_psd(d, subs[1], rank=_y_rank(t, d), layout=layout)
        spec = fs[t % len(fs)]
        lhs = _optimized_value_for_spec(spec, X, Y)
        rhs = _optimized_value_for_spec(spec, partial_trace(X, "A"), partial_trace(Y, "A"))
        v = _ge_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest_arrays(X.matrix, Y.matrix), lhs, rhs, slack, v, v <= slack, spec)
        )
    return _make_report("partial_trace", cfg, records, "closed forms on both sides")


def check_isometric_invariance(cfg: CheckConfig | None = None) -> CheckReport:
    """Q_f(X||Y) = Q_f(VXV^dag||VYV^dag) for embeddings, closed and numeric."""
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _REDUCTION_F_SPECS
    slack_num = cfg.slack or SLACK_NUMERIC
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "isometric_invariance", t)
        subs, rng = _sub_seeds(seed, 2)
        d = int(rng.integers(2, 4))
        k = int(rng.integers(0, 3))
        X = random_psd(d, subs[0], rank=_x_rank(t, d))
        Y = random_psd(d, subs[1], rank=_y_rank(t, d))
        ch = isometry_channel(embedding_isometry(d, d + k))
        XE = apply(ch, X)
        YE = apply(ch, Y)
        spec = fs[t % len(fs)]
        f = parse_f_spec(spec)
        digest = digest_arrays(X.matrix, Y.matrix)
        c1 = divergence_value(X, Y, f, method="closed")
        c2 = divergence_value(XE, YE, f, method="closed")
        vc = _eq_violation(c1, c2)
        records.append(
            TrialRecord(t, seed, digest, c1, c2, 1e-8, vc, vc <= 1e-8, f"{spec} closed d={d}->{d + k}")
        )
        n1 = optimized_f_divergence(X, Y, f, _NUMERIC_OPTS).value
        n2 = optimized_f_divergence(XE, YE, f, _NUMERIC_OPTS).value
        vn = _eq_violation(n1, n2)
        records.append(
            TrialRecord(t, seed, digest, n1, n2, slack_num, vn, vn <= slack_num, f"{spec} numeric d={d}->{d + k}")
        )
    return _make_report(
        "isometric_invariance", cfg, records, "numeric values are optimizer lower bounds"
    )


def check_recovery_chain(cfg: CheckConfig | None = None) -> CheckReport:
    """Fixed-tau pairing: Q_f(X_AB||Y_AB; R_X(omega_A)) >= Q_f(X_A||Y_A; omega_A).

    R_X is the recovery channel of X_AB for the trace over B: the recovery
    isometry transports the purification of X_A onto that of X_AB, so the
    inequality needs only operator convexity. Holds for the anti-monotone
    built-ins and for x^beta with beta in [1,2] on positive definite inputs.
    """
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _RECOVERY_F_SPECS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "recovery_chain", t)
        subs, rng = _sub_seeds(seed, 3)
        dA = int(rng.integers(2, cfg.dims[0] + 1))
        dB = int(rng.integers(2, cfg.dims[1] + 1))
        layout = SystemLayout((("A", dA), ("B", dB)))
        X = random_density(dA * dB, subs[0], layout=layout)
        Y = random_density(dA * dB, subs[1], layout=layout)
        omega = random_density(dA, subs[2])
        rec = petz_recovery(X, "A", "B")
        tau = apply(rec, omega, out_layout=layout)
        spec = fs[t % len(fs)]
        f = parse_f_spec(spec)
        lhs = ExtendedReal.finite(optimized_f_at(X, Y, tau, f))
        rhs = ExtendedReal.finite(
            optimized_f_at(partial_trace(X, "A"), partial_trace(Y, "A"), omega, f)
        )
        v = _ge_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest_arrays(X.matrix, Y.matrix, omega.matrix), lhs, rhs, slack, v, v <= slack, spec)
        )
    return _make_report("recovery_chain", cfg, records, "exact fixed-tau evaluations")


def check_dominating(cfg: CheckConfig | None = None) -> CheckReport:
    """Y2 >= Y1 implies Q_f(X||Y1) >= Q_f(X||Y2) for anti-monotone kernels."""
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _DOMINATING_F_SPECS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "dominating", t)
        subs, rng = _sub_seeds(seed, 3)
        d = int(rng.integers(2, 7))
        X = random_psd(d, subs[0], rank=_x_rank(t, d))
        Y1 = random_psd(d, subs[1], rank=_y_rank(t, d))
        P = random_psd(d, subs[2], rank=max(1, d - 2))
        Y2 = HermitianOperator(Y1.matrix + P.matrix, Y1.layout)
        spec = fs[t % len(fs)]
        lhs = _optimized_value_for_spec(spec, X, Y1)
        rhs = _optimized_value_for_spec(spec, X, Y2)
        v = _ge_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest_arrays(X.matrix, Y1.matrix, Y2.matrix), lhs, rhs, slack, v, v <= slack, spec)
        )
    return _make_report("dominating", cfg, records, "closed forms on both sides")


def check_sandwich_petz(cfg: CheckConfig | None = None) -> CheckReport:
    """Sandwiched alpha divergence >= Petz at (2a-1)/a minus log Tr{X}.

    On full-rank trials the proof's witness tau = X/Tr{X} is also evaluated:
    the fixed-tau objective must reproduce the right-hand side exactly.
    """
    cfg = cfg or CheckConfig()
    alphas = cfg.alphas or _SANDWICH_ALPHAS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "sandwich_petz", t)
        subs, rng = _sub_seeds(seed, 2)
        d = int(rng.integers(2, 7))
        xr = _x_rank(t, d)
        yr = _y_rank(t, d)
        X = random_psd(d, subs[0], rank=xr)
        Y = random_psd(d, subs[1], rank=yr)
        alpha = alphas[t % len(alphas)]
        lhs, rhs = sandwiched_vs_petz_gap(X, Y, alpha)
        v = _ge_violation(lhs, rhs)
        digest = digest_arrays(X.matrix, Y.matrix)
        records.append(
            TrialRecord(t, seed, digest, lhs, rhs, slack, v, v <= slack, f"alpha={alpha:g}")
        )
        if xr is None and yr is None:
            f = renyi_f(alpha)
            Xbar = HermitianOperator(X.matrix / X.trace(), X.layout)
            q = optimized_f_at(X, Y, Xbar, f)
            sign = 1.0 if alpha > 1.0 else -1.0
            wit = ExtendedReal.finite(alpha / (alpha - 1.0) * math.log(sign * q))
            vw = _eq_violation(wit, rhs)
            records.append(
                TrialRecord(t, seed, digest, wit, rhs, 1e-8, vw, vw <= 1e-8, f"witness alpha={alpha:g}")
            )
    return _make_report("sandwich_petz", cfg, records, "closed forms; witness rows are exact evaluations")


def check_duality(cfg: CheckConfig | None = None) -> CheckReport:
    """Conditional-entropy duality on random pure tripartite states."""
    cfg = cfg or CheckConfig()
    alphas = cfg.alphas or _DUALITY_ALPHAS
    slack = cfg.slack or SLACK_NESTED
    layout = SystemLayout((("A", 2), ("B", 2), ("C", 2)))
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "duality", t)
        subs, _ = _sub_seeds(seed, 1)
        amp = random_pure(8, subs[0])
        psi = PureStateVector(amp, layout, normalized=True)
        alpha = alphas[t % len(alphas)]
        f = renyi_f(alpha)
        lhs, rhs = duality_pair(psi, f)
        v = _eq_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest_arrays(amp), lhs, rhs, slack, v, v <= slack, f"alpha={alpha:g}")
        )
    return _make_report("duality", cfg, records, "nested optimization on both sides")


def check_classical_reduction(cfg: CheckConfig | None = None) -> CheckReport:
    """Vector path equals the quantum path on diagonal inputs."""
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _REDUCTION_F_SPECS
    slack = cfg.slack or SLACK_NUMERIC
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "classical_reduction", t)
        _, rng = _sub_seeds(seed, 1)
        d = int(rng.integers(2, 5))
        lam = rng.random(d) + 0.05
        mu = rng.random(d) + 0.05
        if t % 4 == 0:
            mu[int(rng.integers(0, d))] = 0.0
        if t % 8 == 0:
            lam[int(rng.integers(0, d))] = 0.0
        if lam.max() == 0.0:
            lam[0] = 0.5
        spec = fs[t % len(fs)]
        f = parse_f_spec(spec)
        vc = classical_f_divergence(lam, mu, f, _NUMERIC_OPTS).value
        vq = optimized_f_divergence(np.diag(lam), np.diag(mu), f, _NUMERIC_OPTS).value
        v = _eq_violation(vc, vq)
        records.append(
            TrialRecord(t, seed, digest_arrays(lam, mu), vc, vq, slack, v, v <= slack, spec)
        )
    return _make_report("classical_reduction", cfg, records, "both sides numeric lower bounds")


def check_cq_reduction(cfg: CheckConfig | None = None) -> CheckReport:
    """Block optimization equals the full computation on block-diagonal inputs."""
    cfg = cfg or CheckConfig()
    fs = cfg.f_specs or _REDUCTION_F_SPECS
    slack = cfg.slack or SLACK_NUMERIC
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "cq_reduction", t)
        subs, _ = _sub_seeds(seed, 4)
        X1 = random_psd(2, subs[0], rank=1 if t % 4 == 0 else None)
        Y1 = random_psd(2, subs[1], rank=1 if t % 8 == 0 else None)
        X2 = random_psd(2, subs[2])
        Y2 = random_psd(2, subs[3])
        spec = fs[t % len(fs)]
        f = parse_f_spec(spec)
        vb = cq_f_divergence([(X1, Y1), (X2, Y2)], f, _NUMERIC_OPTS).value
        X = np.zeros((4, 4), dtype=np.complex128)
        Y = np.zeros((4, 4), dtype=np.complex128)
        X[:2, :2], X[2:, 2:] = X1.matrix, X2.matrix
        Y[:2, :2], Y[2:, 2:] = Y1.matrix, Y2.matrix
        vq = optimized_f_divergence(X, Y, f, _NUMERIC_OPTS).value
        v = _eq_violation(vb, vq)
        records.append(
            TrialRecord(t, seed, digest_arrays(X, Y), vb, vq, slack, v, v <= slack, spec)
        )
    return _make_report("cq_reduction", cfg, records, "both sides numeric lower bounds")


def check_petz_renyi_dpi(cfg: CheckConfig | None = None) -> CheckReport:
    """Petz-Renyi monotonicity under partial trace on [0,1) u (1,2]."""
    cfg = cfg or CheckConfig()
    alphas = cfg.alphas or _PETZ_ALPHAS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "petz_renyi_dpi", t)
        subs, rng = _sub_seeds(seed, 2)
        dA = int(rng.integers(2, cfg.dims[0] + 1))
        dB = int(rng.integers(2, cfg.dims[1] + 1))
        layout = SystemLayout((("A", dA), ("B", dB)))
        d = dA * dB
        X = _state(d, subs[0], rank=_x_rank(t, d), layout=layout)
        Y = _state(d, subs[1], rank=_y_rank(t, d), layout=layout)
        alpha = alphas[t % len(alphas)]
        lhs = petz_renyi(X, Y, alpha)
        rhs = petz_renyi(partial_trace(X, "A"), partial_trace(Y, "A"), alpha)
        v = _ge_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest_arrays(X.matrix, Y.matrix), lhs, rhs, slack, v, v <= slack, f"alpha={alpha:g}")
        )
    return _make_report("petz_renyi_dpi", cfg, records, "spectral closed forms")


def check_reversed_monotonicity(cfg: CheckConfig | None = None) -> CheckReport:
    """For alpha in [-1,0) the partial-trace inequality reverses; at alpha=0
    it is an equality on positive definite inputs (asserted to 1e-10)."""
    cfg = cfg or CheckConfig()
    alphas = cfg.alphas or _REVERSED_ALPHAS
    slack = cfg.slack or SLACK_CLOSED
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.seed, "reversed_monotonicity", t)
        subs, rng = _sub_seeds(seed, 2)
        dA = int(rng.integers(2, cfg.dims[0] + 1))
        dB = int(rng.integers(2, cfg.dims[1] + 1))
        layout = SystemLayout((("A", dA), ("B", dB)))
        X = random_density(dA * dB, subs[0], layout=layout)
        Y = random_density(dA * dB, subs[1], layout=layout)
        X_A = partial_trace(X, "A")
        Y_A = partial_trace(Y, "A")
        alpha = alphas[t % len(alphas)]
        digest = digest_arrays(X.matrix, Y.matrix)
        # Reversed direction: the marginal divergence dominates.
        lhs = petz_renyi(X_A, Y_A, alpha)
        rhs = petz_renyi(X, Y, alpha)
        v = _ge_violation(lhs, rhs)
        records.append(
            TrialRecord(t, seed, digest, lhs, rhs, slack, v, v <= slack, f"alpha={alpha:g} reversed")
        )
        e1 = petz_renyi(X, Y, 0.0)
        e2 = petz_renyi(X_A, Y_A, 0.0)
        v0 = _eq_violation(e1, e2)
        records.append(
            TrialRecord(t, seed, digest, e1, e2, 1e-10, v0, v0 <= 1e-10, "alpha=0 equality")
        )
    return _make_report("reversed_monotonicity", cfg, records, "spectral closed forms")


ALL_CHECKS = (
    ("dpi_channel", check_dpi_channel),
    ("partial_trace", check_partial_trace),
    ("isometric_invariance", check_isometric_invariance),
    ("recovery_chain", check_recovery_chain),
    ("dominating", check_dominating),
    ("sandwich_petz", check_sandwich_petz),
    ("duality", check_duality),
    ("classical_reduction", check_classical_reduction),
    ("cq_reduction", check_cq_reduction),
    ("petz_renyi_dpi", check_petz_renyi_dpi),
    ("reversed_monotonicity", check_reversed_monotonicity),
)


def run_all(cfg: CheckConfig | None = None) -> list[CheckReport]:
    """The full campaign in a fixed order; per-check seeds derive from cfg.seed."""
    cfg = cfg or CheckConfig()
    return [fn(cfg) for _, fn in ALL_CHECKS]


def _json_num(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def record_to_json(check_name: str, r: TrialRecord) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "trial",
        "check": check_name,
        "trial": r.trial,
        "seed": r.seed,
        "inputs": r.inputs_digest,
        "lhs": r.lhs.to_json(),
        "rhs": r.rhs.to_json(),
        "slack": r.slack,
        "violation": _json_num(r.violation),
        "ok": r.ok,
        "note": r.note,
    }


def report_to_lines(report: CheckReport) -> list[str]:
    lines = [
        json.dumps(record_to_json(report.check_name, r), sort_keys=True, separators=(",", ":"))
        for r in report.records
    ]
    summary = {
        "schema": SCHEMA_VERSION,
        "kind": "summary",
        "check": report.check_name,
        "trials": report.trials,
        "failures": report.failures,
        "worst_violation": _json_num(report.worst_violation),
        "seed": report.seed,
        "annotation": report.annotation,
    }
    lines.append(json.dumps(summary, sort_keys=True, separators=(",", ":")))
    return lines


def write_reports(reports, fp) -> None:
    """JSONL dump: every trial line, then the summary line, per check."""
    for report in reports:
        for line in report_to_lines(report):
            fp.write(line + "\n")
