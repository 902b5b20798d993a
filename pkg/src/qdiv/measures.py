"""Information measures built on the optimized f-divergence.

Every quantity here reduces to divergence evaluations: entropy against the
identity, mutual information and conditional entropy as an infimum over a
marginal state, resource measures as a minimum over a finite free set, and
the channel measure as a supremum over pure bipartite inputs. The nested
optimizations parametrize states as exp(H)/Tr{exp(H)} and run L-BFGS-B with
multistarts; inner divergence values use closed forms whenever the kernel is
a built-in family, so only custom kernels pay for the full tau-ascent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import _ascent
from .extreal import ExtendedReal
from .fkernel import FDescriptor, dual_k
from .linops import (
    DomainError,
    HermitianOperator,
    PureStateVector,
    SystemLayout,
    as_operator,
    clip_psd_eigenvalues,
    eig_hermitian,
    kron,
    partial_trace,
    vec_rowmajor,
)
from .channels import QuantumChannel
from .divergences import OptimizerOptions, divergence_value, optimized_f_divergence

_MEASURE_SEED = 90210  # fixed so repeated calls give identical results

# Eigenvalues below this are clamped before taking logs for warm starts.
_LOG_FLOOR = 1e-12

# Stand-in objective value when a divergence is infinite; large enough that
# any finite optimum beats it, small enough not to poison finite differences.
_INF_PENALTY = 1e100


@dataclass(frozen=True)
class MeasureResult:
    value: ExtendedReal
    inner_witness: HermitianOperator | None
    converged: bool

    def __post_init__(self) -> None:
        if self.inner_witness is not None:
            t = self.inner_witness.trace()
            if abs(t - 1.0) > 1e-9:
                raise ValueError(f"witness trace {t!r} is not 1 within 1e-9")
            vmin = float(np.linalg.eigvalsh(self.inner_witness.matrix).min())
            if vmin < -1e-12:
                raise ValueError(f"witness has negative eigenvalue {vmin:.3e}")


@dataclass(frozen=True)
class FreeStateSet:
    """A finite set of free states on a common dimension."""

    states: tuple[HermitianOperator, ...]

    def __post_init__(self) -> None:
        if not self.states:
            raise ValueError("free set must be nonempty")
        ops = tuple(as_operator(s) for s in self.states)
        d = ops[0].dim
        for s in ops:
            if s.dim != d:
                raise ValueError(f"free states must share a dimension; got {s.dim} and {d}")
            _require_state(s, "free state")
        object.__setattr__(self, "states", ops)


@dataclass(frozen=True)
class MeasureOptions:
    """Knobs for the nested optimizations.

    sigma_starts/sigma_maxiter drive the minimization over the marginal
    state; state_starts/state_maxiter drive the channel measure's outer
    maximization over pure inputs. method picks the divergence route.
    """

    sigma_starts: int = 5
    sigma_maxiter: int = 300
    state_starts: int = 3
    state_maxiter: int = 60
    method: str = "auto"
    inner: OptimizerOptions = field(default_factory=OptimizerOptions)

    def __post_init__(self) -> None:
        if self.sigma_starts < 1 or self.state_starts < 1:
            raise ValueError("start counts must be >= 1")
        if self.sigma_maxiter < 1 or self.state_maxiter < 1:
            raise ValueError("iteration caps must be >= 1")


def _require_state(rho: HermitianOperator, name: str = "rho") -> None:
    spec = eig_hermitian(rho)
    clip_psd_eigenvalues(spec.eigenvalues, what=name)
    t = rho.trace()
    if abs(t - 1.0) > 1e-9:
        raise DomainError(f"{name} must have unit trace, got {t!r}")


def _div(X, Y, f: FDescriptor, opts: MeasureOptions) -> tuple[ExtendedReal, bool]:
    """Divergence value plus a convergence flag (closed forms always converge)."""
    if opts.method in ("auto", "closed"):
        try:
            v = divergence_value(X, Y, f, method="closed")
            return v, True
        except ValueError:
            if opts.method == "closed":
                raise
    res = optimized_f_divergence(X, Y, f, opts.inner)
    return res.value, res.converged


def f_entropy(rho, f: FDescriptor, opts: MeasureOptions | None = None) -> MeasureResult:
    """-Q_f(rho || I): the f-analogue of the von Neumann entropy."""
    opts = opts or MeasureOptions()
    rho = as_operator(rho)
    _require_state(rho)
    eye = HermitianOperator(np.eye(rho.dim), rho.layout)
    v, ok = _div(rho, eye, f, opts)
    return MeasureResult(-v, None, ok)


def _split_bipartite(rho: HermitianOperator, b_label: str) -> tuple[tuple[str, ...], int]:
    labels = rho.layout.labels
    if b_label not in labels:
        raise DomainError(f"layout has no factor {b_label!r}; factors are {labels}")
    if labels[-1] != b_label:
        raise DomainError(f"the optimized factor {b_label!r} must be the trailing tensor factor")
    a_labels = tuple(l for l in labels if l != b_label)
    if not a_labels:
        raise DomainError("need at least one non-optimized factor")
    return a_labels, rho.layout.dim_of(b_label)


def _sigma_starts(dB: int, rho_B: HermitianOperator | None, count: int) -> list[np.ndarray]:
    n = dB * dB
    starts = [np.zeros(n)]
    if rho_B is not None:
        spec = eig_hermitian(rho_B)
        logs = np.log(np.maximum(spec.eigenvalues, _LOG_FLOOR))
        H = (spec.eigenvectors * logs) @ spec.eigenvectors.conj().T
        starts.append(_ascent.pack_hermitian(H))
    rng = np.random.default_rng(_MEASURE_SEED)
    while len(starts) < count:
        starts.append(0.5 * rng.standard_normal(n))
    return starts[:count]


def _minimize_over_sigma(
    left: HermitianOperator,
    A_part: np.ndarray,
    dB: int,
    f: FDescriptor,
    opts: MeasureOptions,
    rho_B: HermitianOperator | None,
) -> tuple[float, np.ndarray, bool]:
    """min over states sigma of Q_f(left || A_part (x) sigma)."""
    layout = left.layout

    def objective(s: np.ndarray) -> float:
        sigma = _ascent.tau_from_params(s, dB)
        Y = HermitianOperator(kron(A_part, sigma), layout, atol=1e-8)
        v, _ = _div(left, Y, f, opts)
        fv = v.as_float()
        return fv if math.isfinite(fv) else _INF_PENALTY

    best = None
    for s0 in _sigma_starts(dB, rho_B, opts.sigma_starts):
        # 3-point finite differences: the forward-difference default is too
        # noisy near the optimum (eigensolver jitter divided by a 1e-8 step).
        out = minimize(
            objective,
            s0,
            method="L-BFGS-B",
            jac="3-point",
            options={"maxiter": opts.sigma_maxiter, "ftol": 1e-14, "gtol": 1e-9},
        )
        cand = (float(out.fun), out.x, bool(out.success))
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def f_mutual_information(rho, b_label: str, f: FDescriptor, opts: MeasureOptions | None = None) -> MeasureResult:
    """inf over states sigma of Q_f(rho_AB || rho_A (x) sigma_B).

    The optimized factor must be the trailing one in rho's layout. The
    reported value is an upper bound on the infimum whenever converged is
    False (and, for custom kernels, each inner evaluation is itself a lower
    bound on a supremum; the flag carries both caveats).
    """
    opts = opts or MeasureOptions()
    rho = as_operator(rho)
    _require_state(rho)
    a_labels, dB = _split_bipartite(rho, b_label)
    rho_A = partial_trace(rho, a_labels)
    rho_B = partial_trace(rho, (b_label,))
    val, s, ok = _minimize_over_sigma(rho, rho_A.matrix, dB, f, opts, rho_B)
    sigma = HermitianOperator(
        _ascent.tau_from_params(s, dB), rho.layout.restrict((b_label,)), atol=1e-9
    )
    return MeasureResult(ExtendedReal.finite(val), sigma, ok)


def conditional_f_entropy(rho, b_label: str, f: FDescriptor, opts: MeasureOptions | None = None) -> MeasureResult:
    """-inf over states sigma of Q_f(rho_AB || I_A (x) sigma_B)."""
    opts = opts or MeasureOptions()
    rho = as_operator(rho)
    _require_state(rho)
    a_labels, dB = _split_bipartite(rho, b_label)
    dA = 1
    for l in a_labels:
        dA *= rho.layout.dim_of(l)
    rho_B = partial_trace(rho, (b_label,))
    val, s, ok = _minimize_over_sigma(rho, np.eye(dA), dB, f, opts, rho_B)
    sigma = HermitianOperator(
        _ascent.tau_from_params(s, dB), rho.layout.restrict((b_label,)), atol=1e-9
    )
    return MeasureResult(ExtendedReal.finite(-val), sigma, ok)


def coherent_f_information(rho, b_label: str, f: FDescriptor, opts: MeasureOptions | None = None) -> MeasureResult:
    """Negated conditional f-entropy of the same bipartition."""
    res = conditional_f_entropy(rho, b_label, f, opts)
    return MeasureResult(-res.value, res.inner_witness, res.converged)


def resource_measure(rho, free: FreeStateSet, f: FDescriptor, opts: MeasureOptions | None = None) -> MeasureResult:
    """min over the finite free set of Q_f(rho || sigma); zero on free states."""
    opts = opts or MeasureOptions()
    rho = as_operator(rho)
    _require_state(rho)
    best_v: ExtendedReal | None = None
    best_sigma = None
    all_ok = True
    for sigma in free.states:
        if sigma.dim != rho.dim:
            raise DomainError(f"free state dim {sigma.dim} != rho dim {rho.dim}")
        v, ok = _div(rho, sigma, f, opts)
        all_ok = all_ok and ok
        if best_v is None or v.as_float() < best_v.as_float():
            best_v = v
            best_sigma = sigma
    return MeasureResult(best_v, best_sigma, all_ok)


def channel_f_mutual_information(
    ch: QuantumChannel, f: FDescriptor, opts: MeasureOptions | None = None
) -> MeasureResult:
    """sup over pure inputs psi_RA (|R| = |A|) of the f-mutual information
    of (id_R (x) ch)(psi).

    Pure inputs are parametrized as psi proportional to (M (x) I)|Gamma> for a
    complex matrix M, which reaches every Schmidt decomposition. The witness
    is the optimizing input marginal rho_R.
    """
    opts = opts or MeasureOptions()
    din = ch.din
    n = din * din
    rng = np.random.default_rng(_MEASURE_SEED)

    def unpack_state(p: np.ndarray) -> np.ndarray | None:
        M = (p[:n] + 1j * p[n:]).reshape(din, din)
        amp = vec_rowmajor(M)
        norm = float(np.linalg.norm(amp))
        if norm < 1e-12:
            return None
        return amp / norm

    kraus_ext = [kron(np.eye(din), K) for K in ch.kraus]

    def output_state(amp: np.ndarray) -> HermitianOperator:
        psi = np.outer(amp, amp.conj())
        out_dim = din * ch.dout
        omega = np.zeros((out_dim, out_dim), dtype=np.complex128)
        for K in kraus_ext:
            omega += K @ psi @ K.conj().T
        layout = SystemLayout((("R", din), ("B", ch.dout)))
        return HermitianOperator(omega, layout, atol=1e-8)

    tracker = {"best": None}

    def neg_mi(p: np.ndarray) -> float:
        amp = unpack_state(p)
        if amp is None:
            return _INF_PENALTY
        omega = output_state(amp)
        res = f_mutual_information(omega, "B", f, opts)
        v = res.value.as_float()
        if not math.isfinite(v):
            return _INF_PENALTY
        if tracker["best"] is None or v > tracker["best"][0]:
            tracker["best"] = (v, amp, res.converged)
        return -v

    p0 = np.concatenate([np.eye(din).ravel(), np.zeros(n)])
    starts = [p0]
    while len(starts) < opts.state_starts:
        starts.append(rng.standard_normal(2 * n))

    any_success = False
    for p_start in starts:
        out = minimize(
            neg_mi,
            p_start,
            method="L-BFGS-B",
            options={"maxiter": opts.state_maxiter, "ftol": 1e-12, "gtol": 1e-7},
        )
        any_success = any_success or bool(out.success)

    value, amp, inner_ok = tracker["best"]
    rho_R = partial_trace(output_state(amp), ("R",))
    return MeasureResult(ExtendedReal.finite(value), rho_R, any_success and inner_ok)


def duality_pair(
    psi: PureStateVector,
    f: FDescriptor,
    opts: MeasureOptions | None = None,
    labels: tuple[str, str, str] = ("A", "B", "C"),
) -> tuple[ExtendedReal, ExtendedReal]:
    """(lhs, rhs) for the conditional-entropy duality on a pure tripartite state.

    lhs is the conditional f-entropy of A given B; rhs is the negated
    conditional entropy of A given C computed with the dual kernel
    k(x) = -f(1/x). The two agree for exact optimization.
    """
    opts = opts or MeasureOptions()
    a, b, c = labels
    for l in labels:
        if l not in psi.layout.labels:
            raise DomainError(f"state layout {psi.layout.labels} lacks factor {l!r}")
    if abs(psi.norm() - 1.0) > 1e-9:
        raise DomainError(f"psi must be normalized, got norm {psi.norm()!r}")
    rho = psi.density()
    rho_AB = partial_trace(rho, (a, b))
    rho_AC = partial_trace(rho, (a, c))
    lhs = conditional_f_entropy(rho_AB, b, f, opts).value
    rhs_res = conditional_f_entropy(rho_AC, c, dual_k(f), opts)
    return lhs, -rhs_res.value
