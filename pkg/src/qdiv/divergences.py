"""Optimized and Petz quantum f-divergences.

The optimized divergence of X relative to Y is a supremum over full-rank
unit-trace operators tau of the quadratic form

    Q(X|Z; tau) = <phi_X| f(tau^{-1} (x) Z^T) |phi_X>,
    |phi_X> = (X^{1/2} (x) I) |Gamma>,   Z = Y + eps * (kernel projector of Y),

evaluated in the limit eps -> 0. Three equivalent evaluation routes are
exposed (spectral double sum, explicit tensor form, relative-modular
superoperator); the numeric supremum parametrizes tau = exp(H)/Tr{exp(H)}
and ascends the concave objective. Closed forms cover the built-in kernels:
the relative entropy for -log x, and Schatten-norm expressions for the power
families. The Petz divergence is the commuting-in-spirit spectral sum over
the eigenpairs of X and Y with kernel terms resolved by f's limit at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _ascent, _backend
from .extreal import NEG_INF, POS_INF, ExtendedReal
from .fkernel import CONVEX_POW, INV_POW, NEG_LOG, NEG_POW, FDescriptor, renyi_alpha_of
from .linops import (
    DEFAULT_RANK_TOL,
    DomainError,
    HermitianOperator,
    as_operator,
    eig_hermitian,
    kernel_projector,
    kron,
    operator_norm_psd,
    psd_part_eigen,
    psd_power,
    psd_sqrt,
    schatten_norm,
    support_contained,
    support_projector,
    vec_rowmajor,
)

DEFAULT_EPSILON_SCHEDULE = (1e-2, 1e-4, 1e-6, 1e-8)

# A rung value above this that is still growing by more than the relative
# stabilization threshold is declared divergent (+inf).
DIVERGENCE_VALUE_CUTOFF = 1e6
DIVERGENCE_REL_CHANGE = 1e-3

_MULTISTART_SEED = 715517  # fixed: results must not depend on global RNG state


@dataclass(frozen=True)
class OptimizerOptions:
    """Knobs for the tau-ascent. Defaults match the package's quoted tolerances."""

    max_iters: int = 500
    grad_tol: float = 1e-7
    epsilon_schedule: tuple[float, ...] = DEFAULT_EPSILON_SCHEDULE
    multistarts: int = 3
    step_rule: str = "bb-armijo"
    fd_step: float = 1e-5
    force_pure: bool = False

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.grad_tol > 0 and self.fd_step > 0):
            raise ValueError("tolerances must be positive")
        if self.multistarts < 1:
            raise ValueError("multistarts must be >= 1")
        if not self.epsilon_schedule or any(e <= 0 for e in self.epsilon_schedule):
            raise ValueError("epsilon schedule entries must be positive")


@dataclass(frozen=True)
class DivergenceResult:
    value: ExtendedReal
    tau_star: HermitianOperator | None
    epsilon_schedule: tuple[float, ...]
    converged: bool
    iterations: int
    gradient_norm: float

    def __post_init__(self) -> None:
        if self.tau_star is not None:
            t = self.tau_star.trace()
            if abs(t - 1.0) > 1e-9:
                raise ValueError(f"tau_star trace {t!r} is not 1 within 1e-9")
            vmin = float(np.linalg.eigvalsh(self.tau_star.matrix).min())
            if vmin < -1e-12:
                raise ValueError(f"tau_star has negative eigenvalue {vmin:.3e}")


def _require_nonzero(X: HermitianOperator, name: str = "X") -> None:
    if float(np.max(np.abs(X.matrix))) == 0.0:
        raise DomainError(f"{name} = 0 is rejected: divergences from the zero operator are vacuous")


def _positive_spectrum(M, what: str) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition that insists on strict positivity."""
    spec = eig_hermitian(M)
    vmin = float(spec.eigenvalues.min())
    if vmin <= 0.0:
        raise DomainError(f"{what} must be positive definite; min eigenvalue {vmin:.6e}")
    return spec.eigenvalues, spec.eigenvectors


def optimized_f_at(X, Z, tau, f: FDescriptor) -> float:
    """Fixed-tau value via the spectral double sum.

    With Z = sum_y mu_y |phi_y><phi_y| and tau = sum_t nu_t |psi_t><psi_t|,

        Q = sum_{y,t} f(mu_y / nu_t) |<phi_y| X^{1/2} |psi_t>|^2.
    """
    X = as_operator(X)
    Z = as_operator(Z)
    tau = as_operator(tau)
    if not (X.dim == Z.dim == tau.dim):
        raise DomainError(f"dimension mismatch: X {X.dim}, Z {Z.dim}, tau {tau.dim}")
    _require_nonzero(X)
    mu, Phi = _positive_spectrum(Z, "Z")
    nu, Psi = _positive_spectrum(tau, "tau")
    W = Phi.conj().T @ psd_sqrt(X).matrix
    B = W @ Psi
    R = mu[:, None] / nu[None, :]
    return float(np.sum(f.fn(R) * (B.real**2 + B.imag**2)))


def optimized_f_at_tensor(X, Z, tau, f: FDescriptor) -> float:
    """Fixed-tau value via the explicit d^2-dimensional tensor form.

    Builds f(tau^{-1} (x) Z^T) by eigendecomposition and sandwiches it between
    purifications of X. Agrees with optimized_f_at to ~1e-9; exists as an
    independent route for cross-checking.
    """
    X = as_operator(X)
    Z = as_operator(Z)
    tau = as_operator(tau)
    if not (X.dim == Z.dim == tau.dim):
        raise DomainError(f"dimension mismatch: X {X.dim}, Z {Z.dim}, tau {tau.dim}")
    _require_nonzero(X)
    nu, Psi = _positive_spectrum(tau, "tau")
    inv_tau = (Psi / nu) @ Psi.conj().T
    M = kron(inv_tau, Z.matrix.T)
    vals, vecs = _positive_spectrum(M, "tau^{-1} (x) Z^T")
    phi = vec_rowmajor(psd_sqrt(X).matrix)  # (X^{1/2} (x) I)|Gamma>
    c = vecs.conj().T @ phi
    return float(np.sum(f.fn(vals) * (c.real**2 + c.imag**2)))


def rel_modular_eval(X, Y, tau, f: FDescriptor) -> float:
    """Fixed-tau value via the relative modular superoperator.

    Delta(Y/tau): W |-> Y W tau^{-1} is positive on Hilbert-Schmidt space;
    the value is <X^{1/2}, f(Delta)(X^{1/2})> with <A,B> = Tr{A^dag B}.
    """
    X = as_operator(X)
    Y = as_operator(Y)
    tau = as_operator(tau)
    if not (X.dim == Y.dim == tau.dim):
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}, tau {tau.dim}")
    _require_nonzero(X)
    nu, Psi = _positive_spectrum(tau, "tau")
    inv_tau = (Psi / nu) @ Psi.conj().T
    # Row-major vec turns W |-> Y W tau^{-1} into kron(Y, conj(tau^{-1})).
    D = kron(Y.matrix, inv_tau.conj())
    vals, vecs = _positive_spectrum(D, "relative modular operator")
    w = vecs.conj().T @ vec_rowmajor(psd_sqrt(X).matrix)
    return float(np.sum(f.fn(vals) * (w.real**2 + w.imag**2)))


def _random_starts(n: int, count: int) -> list[np.ndarray]:
    rng = np.random.default_rng(_MULTISTART_SEED)
    return [0.5 * rng.standard_normal(n) for _ in range(count)]


_WARM_FLOOR = 1e-12


def _warm_start_matrix(P: np.ndarray) -> np.ndarray:
    """Start at log(P/Tr{P} + floor). When the optimum sits on the simplex
    boundary (tau supported inside supp X) the softmax ascent from H = 0
    crawls; starting deep in the boundary direction removes the crawl."""
    vals, vecs = np.linalg.eigh(P)
    vals = np.maximum(vals, 0.0)
    w = np.maximum(vals / max(float(vals.sum()), _WARM_FLOOR), _WARM_FLOOR)
    H = (vecs * np.log(w)) @ vecs.conj().T
    return _ascent.pack_hermitian(H)


def _start_list(base: list[np.ndarray], n: int, multistarts: int) -> list[np.ndarray]:
    """zeros, the warm start, then seeded random draws, multistarts in total."""
    starts = [np.zeros(n)] + base + _random_starts(n, max(0, multistarts - 1 - len(base)))
    return starts[:multistarts]


def _best_ascent(runner, starts):
    """Run the ascent from each start; keep the largest value."""
    best = None
    for h0 in starts:
        out = runner(h0)
        if best is None or out[0] > best[0]:
            best = out
    return best


def _solve_rung(rootX: np.ndarray, Z: np.ndarray, f: FDescriptor, opts: OptimizerOptions, starts):
    vals, vecs = psd_part_eigen(Z, what="regularized second argument")
    mu = np.maximum(vals, 1e-300)  # eps-padding keeps these positive in exact arithmetic
    W = vecs.conj().T @ rootX

    def run(h0):
        return _backend.ascend(
            W, mu, h0, f, opts.max_iters, opts.grad_tol, opts.fd_step, force_pure=opts.force_pure
        )

    return _best_ascent(run, starts)


def optimized_f_divergence(X, Y, f: FDescriptor, opts: OptimizerOptions | None = None) -> DivergenceResult:
    """Numeric supremum over tau, swept along the epsilon schedule.

    The returned value is always a certified lower bound on the supremum;
    converged=False flags an ascent that hit max_iters first. When f diverges
    at zero and supp(X) is not inside supp(Y) the value is +inf with no
    optimizer run. When supp(X) is inside supp(Y) the objective does not
    depend on eps (the padded directions carry zero weight), so only the
    final rung is solved.
    """
    opts = opts or OptimizerOptions()
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    _require_nonzero(X)
    contained = support_contained(X, Y)
    if f.limit_at_zero.is_pos_inf and not contained:
        return DivergenceResult(POS_INF, None, (), True, 0, 0.0)

    rootX = psd_sqrt(X).matrix
    K = kernel_projector(Y).matrix
    has_kernel = float(np.trace(K).real) > 0.5  # trace counts kernel dimensions
    d = X.dim
    n = _ascent.n_params(d)

    if contained or not has_kernel:
        rungs = (opts.epsilon_schedule[-1],)
    else:
        rungs = tuple(opts.epsilon_schedule)

    warm = []
    alpha = renyi_alpha_of(f)
    if alpha is not None:
        # The stationary tau of the power families is known in closed form;
        # seeding with it makes the ascent a verification pass.
        try:
            tau_star = holder_optimal_tau(X, Y, alpha, eps=rungs[-1] if has_kernel else 0.0)
            warm.append(_warm_start_matrix(tau_star.matrix))
        except (DomainError, ValueError):
            pass
    warm.append(_warm_start_matrix(X.matrix))
    base_starts = _start_list(warm, n, opts.multistarts)
    values: list[float] = []
    best = None
    for eps in rungs:
        Z = Y.matrix + eps * K
        starts = base_starts if best is None else [best[1]] + base_starts[: opts.multistarts - 1]
        best = _solve_rung(rootX, Z, f, opts, starts)
        values.append(best[0])

    value: ExtendedReal = ExtendedReal.finite(values[-1])
    if len(values) >= 2:
        prev, last = values[-2], values[-1]
        growing = last > prev
        rel = abs(last - prev) / max(abs(prev), 1e-300)
        if last > DIVERGENCE_VALUE_CUTOFF and growing and rel > DIVERGENCE_REL_CHANGE:
            value = POS_INF

    _, h, iters, gnorm, converged = best
    tau = HermitianOperator(_ascent.tau_from_params(h, d), X.layout, atol=1e-9)
    return DivergenceResult(value, tau, rungs, bool(converged), int(iters), float(gnorm))


def quantum_relative_entropy(X, Y) -> ExtendedReal:
    """Tr{X (log X - log Y)} in nats; +inf when supp(X) is not inside supp(Y).

    X and Y are psd; X need not be normalized (no implicit rescaling).
    """
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    _require_nonzero(X)
    if not support_contained(X, Y):
        return POS_INF
    lam, U = psd_part_eigen(X, what="X")
    mu, V = psd_part_eigen(Y, what="Y")
    lcut = DEFAULT_RANK_TOL * lam.max()
    mcut = DEFAULT_RANK_TOL * (mu.max() if mu.size else 0.0)
    lkeep = lam > lcut
    mkeep = mu > mcut
    self_term = float(np.sum(lam[lkeep] * np.log(lam[lkeep])))
    overlap = np.abs(U[:, lkeep].conj().T @ V[:, mkeep]) ** 2
    cross = float(lam[lkeep] @ (overlap @ np.log(mu[mkeep]))) if mkeep.any() else 0.0
    return ExtendedReal.finite(self_term - cross)


def _sandwich_core(X: HermitianOperator, Y: HermitianOperator, alpha: float) -> HermitianOperator:
    """Y^{(1-alpha)/2alpha} X Y^{(1-alpha)/2alpha} with pseudo-powers on supp(Y)."""
    p = (1.0 - alpha) / (2.0 * alpha)
    Yp = psd_power(Y, p).matrix
    return HermitianOperator(Yp @ X.matrix @ Yp, X.layout, atol=1e-8)


def sandwiched_quasi_entropy(X, Y, alpha: float, *, check_range: bool = True) -> ExtendedReal:
    """Signed Schatten closed form: -||.||_alpha below alpha=1, +||.||_alpha above.

    check_range=False admits alpha in (0, 1/2), where the quantity is still
    well defined but data processing is known to fail; that regime exists
    here for negative-control experiments.
    """
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    _require_nonzero(X)
    if check_range:
        if not (0.5 <= alpha < 1.0 or alpha > 1.0) or math.isinf(alpha):
            raise ValueError(f"alpha must lie in [1/2,1) or (1,inf), got {alpha}")
    elif not (0.0 < alpha and not math.isinf(alpha)) or alpha == 1.0:
        raise ValueError(f"alpha must be positive, finite, and != 1, got {alpha}")
    if alpha > 1.0 and not support_contained(X, Y):
        return POS_INF
    norm = schatten_norm(_sandwich_core(X, Y, alpha), alpha)
    sign = 1.0 if alpha > 1.0 else -1.0
    return ExtendedReal.finite(sign * norm)


def sandwiched_renyi(X, Y, alpha: float, *, check_range: bool = True) -> ExtendedReal:
    """alpha/(alpha-1) * log ||Y^{(1-alpha)/2alpha} X Y^{(1-alpha)/2alpha}||_alpha."""
    q = sandwiched_quasi_entropy(X, Y, alpha, check_range=check_range)
    if q.is_pos_inf:
        return POS_INF
    norm = abs(q.value)
    if norm == 0.0:
        return POS_INF  # disjoint supports below alpha = 1
    return ExtendedReal.finite(alpha / (alpha - 1.0) * math.log(norm))


def holder_optimal_tau(X, Y, alpha: float, eps: float = 0.0) -> HermitianOperator:
    """The maximizing unit-trace tau for the power-family objective.

    tau* = A^alpha / Tr{A^alpha} with A = X^{1/2} Z^{(1-alpha)/alpha} X^{1/2}
    and Z = Y + eps * (kernel projector); the stationarity condition of
    Hoelder/reverse-Hoelder pairing, valid on both sides of alpha = 1.
    """
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    if not (0.5 <= alpha < 1.0 or alpha > 1.0) or math.isinf(alpha):
        raise ValueError(f"alpha must lie in [1/2,1) or (1,inf), got {alpha}")
    _require_nonzero(X)
    Z = Y if eps == 0.0 else HermitianOperator(
        Y.matrix + eps * kernel_projector(Y).matrix, Y.layout, atol=1e-9
    )
    Zp = psd_power(Z, (1.0 - alpha) / alpha).matrix
    rootX = psd_sqrt(X).matrix
    A = HermitianOperator(rootX @ Zp @ rootX, X.layout, atol=1e-8)
    Aa = psd_power(A, alpha)
    tr = Aa.trace()
    if tr <= 0.0:
        raise DomainError("degenerate inner operator: X^{1/2} Z^{(1-a)/a} X^{1/2} has zero trace")
    return HermitianOperator(Aa.matrix / tr, X.layout, atol=1e-9)


def petz_f_divergence(X, Y, f: FDescriptor) -> ExtendedReal:
    """Spectral Petz sum over the eigenpairs of X and Y.

    sum over x with lam_x > 0 and all y of lam_x f(mu_y/lam_x) |<x|y>|^2,
    where eigenvectors of Y in its kernel contribute through f's limit at 0:
    a divergent limit makes the whole value infinite as soon as any kept
    X-eigenvector overlaps ker Y; a finite limit contributes
    lam_x * limit * overlap.
    """
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    _require_nonzero(X)
    lam, U = psd_part_eigen(X, what="X")
    mu, V = psd_part_eigen(Y, what="Y")
    xkeep = lam > DEFAULT_RANK_TOL * lam.max()
    ypos = mu > DEFAULT_RANK_TOL * (mu.max() if mu.size else 0.0)
    lamk = lam[xkeep]
    overlap = np.abs(U[:, xkeep].conj().T @ V) ** 2  # (n_x, d) rows sum to 1
    total = 0.0
    if ypos.any():
        R = mu[ypos][None, :] / lamk[:, None]
        total += float(np.sum(lamk[:, None] * f.fn(R) * overlap[:, ypos]))
    kernel_weight = float(np.sum(lamk[:, None] * overlap[:, ~ypos])) if (~ypos).any() else 0.0
    if kernel_weight > 1e-12:
        if f.limit_at_zero.is_pos_inf:
            return POS_INF
        if f.limit_at_zero.is_neg_inf:
            return NEG_INF
        total += kernel_weight * f.limit_at_zero.value
    return ExtendedReal.finite(total)


PETZ_FORWARD_RANGE = "alpha in [0,1) or (1,2]: data processing holds forward"
PETZ_REVERSED_RANGE = "alpha in [-1,0): the partial-trace inequality reverses"


def petz_dpi_direction(alpha: float) -> str:
    """'forward' where the Petz-Renyi divergence is monotone under channels,
    'reversed' on [-1, 0) where the partial-trace inequality flips."""
    if 0.0 <= alpha < 1.0 or 1.0 < alpha <= 2.0:
        return "forward"
    if -1.0 <= alpha < 0.0:
        return "reversed"
    raise ValueError(f"alpha {alpha} outside the accepted range [-1,1) u (1,2]")


def petz_renyi(X, Y, alpha: float) -> ExtendedReal:
    """(1/(alpha-1)) log Tr{X^alpha Y^{1-alpha}} with support conventions.

    alpha in [0,1) or (1,2] is the data-processing range; alpha in [-1,0) is
    accepted but monotonicity reverses there (see petz_dpi_direction).
    alpha = 0 evaluates the limit -log Tr{Pi_X Y}.
    """
    if alpha == 1.0:
        raise ValueError("alpha = 1 is the relative-entropy limit; use quantum_relative_entropy")
    if not (-1.0 <= alpha <= 2.0):
        raise ValueError(f"alpha must lie in [-1,1) u (1,2], got {alpha}")
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    _require_nonzero(X)
    if alpha == 0.0:
        t = float(np.trace(support_projector(X).matrix @ Y.matrix).real)
        if t <= 0.0:
            return POS_INF
        return ExtendedReal.finite(-math.log(t))
    if alpha > 1.0 and not support_contained(X, Y):
        return POS_INF
    if alpha < 0.0 and not support_contained(Y, X):
        # Tr{X^alpha Y^{1-alpha}} diverges; the 1/(alpha-1) < 0 prefactor sends
        # the divergence to -inf.
        return NEG_INF
    Xh = psd_power(X, alpha / 2.0).matrix
    Y1a = psd_power(Y, 1.0 - alpha).matrix
    t = float(np.trace(Xh @ Y1a @ Xh).real)
    if t <= 0.0:
        return POS_INF if alpha < 1.0 else NEG_INF
    return ExtendedReal.finite(math.log(t) / (alpha - 1.0))


def optimized_alpha_divergence_at(X, Y, tau, beta: float) -> float:
    """Fixed-tau power-family evaluation Tr{X^{1/2} Y^beta X^{1/2} tau^{-beta}}.

    Defined here for positive definite arguments and beta in [1,2] only; no
    supremum is taken (the objective is unbounded as tau degenerates).
    """
    if not 1.0 <= beta <= 2.0:
        raise ValueError(f"beta must lie in [1,2], got {beta}")
    X = as_operator(X)
    Y = as_operator(Y)
    tau = as_operator(tau)
    if not (X.dim == Y.dim == tau.dim):
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}, tau {tau.dim}")
    _positive_spectrum(X, "X")
    Yb = _matrix_power_pd(Y, beta)
    Tb = _matrix_power_pd(tau, -beta)
    rootX = psd_sqrt(X).matrix
    return float(np.trace(rootX @ Yb @ rootX @ Tb).real)


def _matrix_power_pd(H: HermitianOperator, p: float) -> np.ndarray:
    vals, vecs = _positive_spectrum(H, "power input")
    return (vecs * vals**p) @ vecs.conj().T


def classical_f_divergence(
    lam, mu, f: FDescriptor, opts: OptimizerOptions | None = None
) -> DivergenceResult:
    """Commuting-inputs special case: sup over probability vectors.

    Maximizes sum_z lam_z f(mu_z / nu_z) over the simplex interior, with
    zero entries of mu replaced by eps along the schedule. Entries with
    lam_z = 0 are dropped: the optimum puts no mass there.
    """
    opts = opts or OptimizerOptions()
    lam = np.asarray(lam, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    if lam.ndim != 1 or lam.shape != mu.shape:
        raise DomainError(f"need equal-length vectors, got {lam.shape} and {mu.shape}")
    if lam.min() < 0 or mu.min() < 0:
        raise DomainError("entries must be nonnegative")
    if lam.max() == 0.0:
        raise DomainError("lam = 0 is rejected: divergences from the zero vector are vacuous")
    keep = lam > 0.0
    lamk = lam[keep]
    muk = mu[keep]
    zero = muk == 0.0
    if zero.any() and f.limit_at_zero.is_pos_inf:
        return DivergenceResult(POS_INF, None, (), True, 0, 0.0)

    n = lamk.size
    rungs = tuple(opts.epsilon_schedule) if zero.any() else (opts.epsilon_schedule[-1],)
    warm = np.log(np.maximum(lamk / max(float(lamk.sum()), _WARM_FLOOR), _WARM_FLOOR))
    base_starts = _start_list([warm], n, opts.multistarts)
    values: list[float] = []
    best = None
    for eps in rungs:
        mue = np.where(zero, eps, muk)
        starts = base_starts if best is None else [best[1]] + base_starts[: opts.multistarts - 1]

        def run(h0, mue=mue):
            return _ascent.ascend_vector(
                lamk, mue, h0, f.fn, opts.max_iters, opts.grad_tol, opts.fd_step
            )

        best = _best_ascent(run, starts)
        values.append(best[0])

    value: ExtendedReal = ExtendedReal.finite(values[-1])
    if len(values) >= 2:
        prev, last = values[-2], values[-1]
        if last > DIVERGENCE_VALUE_CUTOFF and last > prev and abs(last - prev) > DIVERGENCE_REL_CHANGE * abs(prev):
            value = POS_INF

    _, h, iters, gnorm, converged = best
    w = np.exp(h - h.max())
    nu_opt = np.zeros(lam.size)
    nu_opt[keep] = w / w.sum()
    # Dropped entries get an exact zero; keep tau_star as a diagonal operator
    # only when every entry survived, so the PD invariant holds.
    tau = HermitianOperator(np.diag(nu_opt)) if keep.all() else None
    return DivergenceResult(value, tau, rungs, bool(converged), int(iters), float(gnorm))


def cq_f_divergence(blocks, f: FDescriptor, opts: OptimizerOptions | None = None) -> DivergenceResult:
    """Block-diagonal special case: sup over block tau with unit total trace.

    blocks is a sequence of (X_z, Y_z) pairs of equal per-block dimension.
    Equals the full computation on the assembled block-diagonal operators.
    """
    opts = opts or OptimizerOptions()
    pairs = [(as_operator(Xz), as_operator(Yz)) for Xz, Yz in blocks]
    if not pairs:
        raise DomainError("need at least one block")
    for Xz, Yz in pairs:
        if Xz.dim != Yz.dim:
            raise DomainError(f"block dimension mismatch: {Xz.dim} vs {Yz.dim}")
    if all(float(np.max(np.abs(Xz.matrix))) == 0.0 for Xz, _ in pairs):
        raise DomainError("all X blocks are zero")

    contained = all(
        support_contained(Xz, Yz) for Xz, Yz in pairs if float(np.max(np.abs(Xz.matrix))) > 0.0
    )
    if f.limit_at_zero.is_pos_inf and not contained:
        return DivergenceResult(POS_INF, None, (), True, 0, 0.0)

    roots = [psd_sqrt(Xz).matrix for Xz, _ in pairs]
    kerns = [kernel_projector(Yz).matrix for _, Yz in pairs]
    dims = [Xz.dim for Xz, _ in pairs]
    n = sum(d * d for d in dims)
    rungs = (opts.epsilon_schedule[-1],) if contained else tuple(opts.epsilon_schedule)
    total_x = sum(float(np.trace(Xz.matrix).real) for Xz, _ in pairs)
    warm = []
    alpha = renyi_alpha_of(f)
    if alpha is not None:
        # Stationary tau of the power families is blockwise A_z^alpha with a
        # joint normalization; seed the ascent with it, as in the full path.
        try:
            parts = []
            for (Xz, Yz), rootX, K in zip(pairs, roots, kerns):
                Zz = HermitianOperator(Yz.matrix + rungs[-1] * K, atol=1e-9)
                Zp = psd_power(Zz, (1.0 - alpha) / alpha).matrix
                Az = HermitianOperator(rootX @ Zp @ rootX, atol=1e-8)
                parts.append(psd_part_eigen(psd_power(Az, alpha), what="block warm start"))
            total = sum(float(v.sum()) for v, _ in parts)
            if total > 0.0:
                hp = []
                for vals, vecs in parts:
                    w = np.maximum(vals / total, _WARM_FLOOR)
                    hp.append(_ascent.pack_hermitian((vecs * np.log(w)) @ vecs.conj().T))
                warm.append(np.concatenate(hp))
        except (DomainError, ValueError):
            pass
    warm_parts = []
    for Xz, _ in pairs:
        vals, vecs = np.linalg.eigh(Xz.matrix)
        w = np.maximum(np.maximum(vals, 0.0) / max(total_x, _WARM_FLOOR), _WARM_FLOOR)
        warm_parts.append(_ascent.pack_hermitian((vecs * np.log(w)) @ vecs.conj().T))
    warm.append(np.concatenate(warm_parts))
    base_starts = _start_list(warm, n, opts.multistarts)
    values: list[float] = []
    best = None
    for eps in rungs:
        Ws = []
        mus = []
        for (Xz, Yz), rootX, K in zip(pairs, roots, kerns):
            vals, vecs = psd_part_eigen(Yz.matrix + eps * K, what="regularized block")
            mus.append(np.maximum(vals, 1e-300))
            Ws.append(vecs.conj().T @ rootX)
        starts = base_starts if best is None else [best[1]] + base_starts[: opts.multistarts - 1]

        def run(h0, Ws=Ws, mus=mus):
            return _ascent.ascend_blocks(
                Ws, mus, h0, f.fn, opts.max_iters, opts.grad_tol, opts.fd_step
            )

        best = _best_ascent(run, starts)
        values.append(best[0])

    value: ExtendedReal = ExtendedReal.finite(values[-1])
    if len(values) >= 2:
        prev, last = values[-2], values[-1]
        if last > DIVERGENCE_VALUE_CUTOFF and last > prev and abs(last - prev) > DIVERGENCE_REL_CHANGE * abs(prev):
            value = POS_INF

    _, h, iters, gnorm, converged = best
    offsets = np.cumsum([0] + [d * d for d in dims])
    eigs = []
    Psis = []
    for z, d in enumerate(dims):
        Hz = _ascent.unpack_hermitian(h[offsets[z] : offsets[z + 1]], d)
        e, Psi = np.linalg.eigh(Hz)
        eigs.append(e)
        Psis.append(Psi)
    m = max(float(e.max()) for e in eigs)
    weights = [np.exp(np.maximum(e - m, _ascent.EXP_CLAMP)) for e in eigs]
    total = sum(float(w.sum()) for w in weights)
    blocks_tau = [(Psis[z] * (weights[z] / total)) @ Psis[z].conj().T for z in range(len(dims))]
    D = sum(dims)
    T = np.zeros((D, D), dtype=np.complex128)
    at = 0
    for z, d in enumerate(dims):
        T[at : at + d, at : at + d] = blocks_tau[z]
        at += d
    tau = HermitianOperator(T, atol=1e-9)
    return DivergenceResult(value, tau, rungs, bool(converged), int(iters), float(gnorm))


def sandwiched_vs_petz_gap(X, Y, alpha: float) -> tuple[ExtendedReal, ExtendedReal]:
    """(lhs, rhs) with lhs the sandwiched Renyi divergence at alpha and
    rhs = (Petz Renyi at (2 alpha - 1)/alpha) - log Tr{X}; lhs >= rhs always.
    """
    X = as_operator(X)
    Y = as_operator(Y)
    _require_nonzero(X)
    lhs = sandwiched_renyi(X, Y, alpha)
    ap = (2.0 * alpha - 1.0) / alpha
    p = petz_renyi(X, Y, ap)
    if not p.is_finite:
        return lhs, p
    return lhs, ExtendedReal.finite(p.value - math.log(X.trace()))


def divergence_value(X, Y, f: FDescriptor, method: str = "auto", opts: OptimizerOptions | None = None) -> ExtendedReal:
    """Optimized f-divergence value by the requested route.

    method='closed' uses the exact expressions available for the built-in
    families (-log and the +/- power kernels); method='numeric' runs the
    tau-ascent; 'auto' prefers closed and falls back to numeric.
    """
    X = as_operator(X)
    Y = as_operator(Y)
    if X.dim != Y.dim:
        raise DomainError(f"dimension mismatch: X {X.dim}, Y {Y.dim}")
    if method not in ("auto", "closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "closed"):
        closed = _closed_form(X, Y, f)
        if closed is not None:
            return closed
        if method == "closed":
            raise ValueError(f"no closed form for kernel {f.spec_string()!r}")
    return optimized_f_divergence(X, Y, f, opts).value


def _closed_form(X: HermitianOperator, Y: HermitianOperator, f: FDescriptor) -> ExtendedReal | None:
    code = f.builtin_code
    if code is None or f.name == CONVEX_POW:
        return None
    _require_nonzero(X)
    if f.name == NEG_LOG:
        if not support_contained(X, Y):
            return POS_INF
        t = X.trace()
        Xbar = HermitianOperator(X.matrix / t, X.layout)
        return ExtendedReal.finite(t * quantum_relative_entropy(Xbar, Y).value)
    beta = f.params[0]
    if f.name == NEG_POW:
        # Q = -||Y^{beta/2} X Y^{beta/2}||_{1/(1+beta)}, always finite.
        Yp = psd_power(Y, beta / 2.0).matrix
        S = HermitianOperator(Yp @ X.matrix @ Yp, X.layout, atol=1e-8)
        return ExtendedReal.finite(-schatten_norm(S, 1.0 / (1.0 + beta)))
    if f.name == INV_POW:
        if not support_contained(X, Y):
            return POS_INF
        Yp = psd_power(Y, beta / 2.0).matrix
        S = HermitianOperator(Yp @ X.matrix @ Yp, X.layout, atol=1e-8)
        if beta == -1.0:
            return ExtendedReal.finite(operator_norm_psd(S))
        return ExtendedReal.finite(schatten_norm(S, 1.0 / (1.0 + beta)))
    return None
