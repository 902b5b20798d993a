"""Pure-numpy ascent kernel for the concave tau-optimization.

The objective, with Z = Y + eps*Pi fixed and eigendecomposed as
Z = sum_y mu_y |phi_y><phi_y|, is

    Q(H) = sum_{y,t} f(mu_y / nu_t) |B[y,t]|^2,
    B = W Psi,    W = Phi^dag X^{1/2},
    nu = softmax(eigenvalues of H),    Psi = eigenvectors of H,

since tau = exp(H)/Tr{exp(H)} shares H's eigenvectors. The ascent uses
central finite-difference gradients, a Barzilai-Borwein initial step, and a
monotone Armijo backtracking safeguard. A compiled twin (_fastascent) runs
the same algorithm for the built-in kernels; results must agree up to
floating-point noise, so any algorithmic change here must be mirrored there.

Hermitian parameter packing for H (n = d*d real parameters):
    h[0:d]                real diagonal
    h[d + 2k], h[d+2k+1]  Re/Im of H[i, j] for the k-th pair i < j, row-major
"""

from __future__ import annotations

import numpy as np

ARMIJO_C1 = 1e-4
MAX_HALVINGS = 60
STEP_MIN = 1e-12
STEP_MAX = 1e6
EXP_CLAMP = -700.0  # keeps softmax weights positive in double precision


def n_params(d: int) -> int:
    return d * d


def unpack_hermitian(h: np.ndarray, d: int) -> np.ndarray:
    H = np.zeros((d, d), dtype=np.complex128)
    H[np.diag_indices(d)] = h[:d]
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            H[i, j] = h[k] + 1j * h[k + 1]
            H[j, i] = h[k] - 1j * h[k + 1]
            k += 2
    return H


def pack_hermitian(H: np.ndarray) -> np.ndarray:
    d = H.shape[0]
    h = np.empty(d * d, dtype=np.float64)
    h[:d] = np.diag(H).real
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            h[k] = H[i, j].real
            h[k + 1] = H[i, j].imag
            k += 2
    return h


def softmax_spectrum(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(nu, Psi) with nu = softmax(eigenvalues) and Psi the eigenvectors."""
    e, Psi = np.linalg.eigh(H)
    w = np.exp(np.maximum(e - e.max(), EXP_CLAMP))
    return w / w.sum(), Psi


def tau_from_params(h: np.ndarray, d: int) -> np.ndarray:
    nu, Psi = softmax_spectrum(unpack_hermitian(h, d))
    return (Psi * nu) @ Psi.conj().T


def _ascend_loop(obj, center, h0, max_iters, grad_tol, fd_step):
    """Shared BB + Armijo ascent. center(h) projects out softmax-invariant
    directions in place. Returns (value, h, iterations, grad_inf_norm, converged).
    """
    n = h0.shape[0]

    def grad(hv: np.ndarray) -> np.ndarray:
        g = np.empty(n, dtype=np.float64)
        hw = hv.copy()
        for p in range(n):
            orig = hw[p]
            hw[p] = orig + fd_step
            vp = obj(hw)
            hw[p] = orig - fd_step
            vm = obj(hw)
            hw[p] = orig
            g[p] = (vp - vm) / (2.0 * fd_step)
        center(g)
        return g

    h = np.asarray(h0, dtype=np.float64).copy()
    center(h)
    v = obj(h)
    step = 1.0
    gnorm = np.inf
    converged = False
    prev_h = prev_g = None
    it = 0
    while it < max_iters:
        it += 1
        g = grad(h)
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= grad_tol:
            converged = True
            break
        if prev_g is not None:
            s = h - prev_h
            y = g - prev_g
            denom = -float(s @ y)  # >= 0 for a concave objective
            if denom > 1e-16:
                step = float(s @ s) / denom
        step = min(max(step, STEP_MIN), STEP_MAX)
        gsq = float(g @ g)
        t = step
        accepted = False
        for _ in range(MAX_HALVINGS):
            h_try = h + t * g
            center(h_try)
            v_try = obj(h_try)
            if v_try >= v + ARMIJO_C1 * t * gsq:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        prev_h = h
        prev_g = g
        h = h_try
        v = v_try
        step = t
    return v, h, it, gnorm, converged


def _center_diag(d: int):
    def center(hv: np.ndarray) -> None:
        hv[:d] -= hv[:d].mean()

    return center


def ascend(
    W: np.ndarray,
    mu: np.ndarray,
    h0: np.ndarray,
    f_vec,
    max_iters: int,
    grad_tol: float,
    fd_step: float,
) -> tuple[float, np.ndarray, int, float, bool]:
    """Maximize Q over the Hermitian parameters of tau, starting at h0."""
    d = mu.shape[0]

    def obj(hv: np.ndarray) -> float:
        nu, Psi = softmax_spectrum(unpack_hermitian(hv, d))
        B = W @ Psi
        R = mu[:, None] / nu[None, :]
        return float(np.sum(f_vec(R) * (B.real**2 + B.imag**2)))

    return _ascend_loop(obj, _center_diag(d), h0, max_iters, grad_tol, fd_step)


def ascend_vector(
    lam: np.ndarray,
    mu: np.ndarray,
    h0: np.ndarray,
    f_vec,
    max_iters: int,
    grad_tol: float,
    fd_step: float,
) -> tuple[float, np.ndarray, int, float, bool]:
    """Classical twin: maximize sum_z lam_z f(mu_z / nu_z) over nu = softmax(h)."""

    def obj(hv: np.ndarray) -> float:
        w = np.exp(np.maximum(hv - hv.max(), EXP_CLAMP))
        nu = w / w.sum()
        return float(np.sum(lam * f_vec(mu / nu)))

    def center(hv: np.ndarray) -> None:
        hv -= hv.mean()

    return _ascend_loop(obj, center, h0, max_iters, grad_tol, fd_step)


def ascend_blocks(
    Ws: list[np.ndarray],
    mus: list[np.ndarray],
    h0: np.ndarray,
    f_vec,
    max_iters: int,
    grad_tol: float,
    fd_step: float,
) -> tuple[float, np.ndarray, int, float, bool]:
    """Block-diagonal twin: tau_hat = (+)_z exp(H_z) / sum_z Tr{exp(H_z)}.

    h0 concatenates the per-block Hermitian parameter vectors; the softmax
    normalization couples the blocks globally.
    """
    dims = [m.shape[0] for m in mus]
    offsets = np.cumsum([0] + [d * d for d in dims])

    def obj(hv: np.ndarray) -> float:
        eigs = []
        Psis = []
        for z, d in enumerate(dims):
            Hz = unpack_hermitian(hv[offsets[z] : offsets[z + 1]], d)
            e, Psi = np.linalg.eigh(Hz)
            eigs.append(e)
            Psis.append(Psi)
        m = max(float(e.max()) for e in eigs)
        weights = [np.exp(np.maximum(e - m, EXP_CLAMP)) for e in eigs]
        total = sum(float(w.sum()) for w in weights)
        val = 0.0
        for z in range(len(dims)):
            nu = weights[z] / total
            B = Ws[z] @ Psis[z]
            R = mus[z][:, None] / nu[None, :]
            val += float(np.sum(f_vec(R) * (B.real**2 + B.imag**2)))
        return val

    def center(hv: np.ndarray) -> None:
        # The invariant direction is a common shift of every block's diagonal.
        shift = 0.0
        total_d = 0
        for z, d in enumerate(dims):
            shift += hv[offsets[z] : offsets[z] + d].sum()
            total_d += d
        shift /= total_d
        for z, d in enumerate(dims):
            hv[offsets[z] : offsets[z] + d] -= shift

    return _ascend_loop(obj, center, h0, max_iters, grad_tol, fd_step)
