"""Quantum channels in Kraus form, Stinespring dilations, Petz recovery maps,
pinching and embedding isometries, and seeded random generators.

All random generators are value-semantic: they take an integer seed and are
pure functions of it, so a given seed reproduces results bit for bit within
this implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linops import (
    DEFAULT_RANK_TOL,
    DomainError,
    HermitianOperator,
    SystemLayout,
    as_operator,
    eig_hermitian,
    kernel_projector,
    partial_trace,
    psd_power,
    psd_sqrt,
)

TP_ATOL = 1e-9


@dataclass(frozen=True)
class QuantumChannel:
    """A completely positive trace-preserving map given by Kraus operators.

    kraus is a list of (dout x din) complex matrices with
    sum_i K_i^dag K_i = I within TP_ATOL.
    """

    kraus: tuple[np.ndarray, ...]
    din: int
    dout: int

    def __post_init__(self) -> None:
        ks = tuple(np.array(K, dtype=np.complex128) for K in self.kraus)
        if not ks:
            raise ValueError("a channel needs at least one Kraus operator")
        for K in ks:
            if K.shape != (self.dout, self.din):
                raise ValueError(f"Kraus shape {K.shape} != ({self.dout}, {self.din})")
            K.setflags(write=False)
        S = sum(K.conj().T @ K for K in ks)
        defect = float(np.max(np.abs(S - np.eye(self.din))))
        if defect > TP_ATOL:
            raise ValueError(f"Kraus operators are not trace preserving: |sum K^dag K - I| = {defect:.3e}")
        object.__setattr__(self, "kraus", ks)

    @staticmethod
    def from_kraus(kraus) -> "QuantumChannel":
        ks = [np.asarray(K, dtype=np.complex128) for K in kraus]
        dout, din = ks[0].shape
        return QuantumChannel(tuple(ks), din, dout)


@dataclass(frozen=True)
class Isometry:
    """V with V^dag V = I, mapping the domain layout into the codomain layout."""

    matrix: np.ndarray
    domain: SystemLayout
    codomain: SystemLayout

    def __post_init__(self) -> None:
        V = np.array(self.matrix, dtype=np.complex128)
        rows, cols = V.shape
        if rows < cols:
            raise ValueError(f"isometry must not shrink: shape {V.shape}")
        if rows != self.codomain.total_dim or cols != self.domain.total_dim:
            raise ValueError("isometry shape does not match its layouts")
        defect = float(np.max(np.abs(V.conj().T @ V - np.eye(cols))))
        if defect > TP_ATOL:
            raise ValueError(f"not an isometry: |V^dag V - I| = {defect:.3e}")
        V.setflags(write=False)
        object.__setattr__(self, "matrix", V)


def apply(ch: QuantumChannel, X: HermitianOperator, out_layout: SystemLayout | None = None) -> HermitianOperator:
    """N(X) = sum_i K_i X K_i^dag."""
    X = as_operator(X)
    if X.dim != ch.din:
        raise ValueError(f"channel expects input dim {ch.din}, got {X.dim}")
    M = X.matrix
    out = np.zeros((ch.dout, ch.dout), dtype=np.complex128)
    for K in ch.kraus:
        out += K @ M @ K.conj().T
    if out_layout is None:
        out_layout = SystemLayout.single("s", ch.dout)
    return HermitianOperator(out, out_layout, atol=1e-9)


def stinespring_isometry(ch: QuantumChannel, labels: tuple[str, str] = ("out", "env")) -> Isometry:
    """V = sum_i K_i (x) |i>_E, so that Tr_E{V X V^dag} = N(X)."""
    denv = len(ch.kraus)
    V = np.zeros((ch.dout * denv, ch.din), dtype=np.complex128)
    for i, K in enumerate(ch.kraus):
        e = np.zeros((denv, 1), dtype=np.complex128)
        e[i, 0] = 1.0
        V += np.kron(K, e)
    dom = SystemLayout.single("in", ch.din)
    cod = SystemLayout(((labels[0], ch.dout), (labels[1], denv)))
    return Isometry(V, dom, cod)


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel((np.eye(d, dtype=np.complex128),), d, d)


def isometry_channel(V: Isometry) -> QuantumChannel:
    """The channel X -> V X V^dag (single Kraus operator V)."""
    return QuantumChannel((V.matrix,), V.matrix.shape[1], V.matrix.shape[0])


def depolarizing_to_max_mixed(d: int) -> QuantumChannel:
    """Completely depolarizing channel with Kraus {|i><j| / sqrt(d)}."""
    ks = []
    for i in range(d):
        for j in range(d):
            K = np.zeros((d, d), dtype=np.complex128)
            K[i, j] = 1.0 / np.sqrt(d)
            ks.append(K)
    return QuantumChannel(tuple(ks), d, d)


def replacer_channel(sigma: HermitianOperator) -> QuantumChannel:
    """Traces out the input and prepares the fixed state sigma."""
    sigma = as_operator(sigma)
    vals, vecs = np.linalg.eigh(sigma.matrix)
    if abs(float(vals.sum()) - 1.0) > 1e-9 or vals.min() < -1e-10:
        raise DomainError("replacer target must be a density operator")
    d = sigma.dim
    ks = []
    for l in range(d):
        if vals[l] <= 0.0:
            continue
        for j in range(d):
            K = np.sqrt(max(vals[l], 0.0)) * np.outer(vecs[:, l], np.eye(d)[j])
            ks.append(K.astype(np.complex128))
    return QuantumChannel(tuple(ks), d, d)


def _split_bipartite(layout: SystemLayout, a_label: str | None, b_label: str | None) -> tuple[str, str]:
    if len(layout.factors) != 2 and (a_label is None or b_label is None):
        raise ValueError(f"need an explicitly bipartite layout, got factors {layout.factors}")
    if a_label is None:
        a_label = layout.factors[0][0]
    if b_label is None:
        b_label = layout.factors[1][0]
    return a_label, b_label


def petz_recovery(X_AB: HermitianOperator, a_label: str | None = None, b_label: str | None = None) -> QuantumChannel:
    """The Petz recovery channel of X_AB with respect to tracing out B:

        Z_A -> X_AB^{1/2} ([X_A^{-1/2} Z_A X_A^{-1/2}] (x) I_B) X_AB^{1/2}

    with Kraus operators {X_AB^{1/2} [X_A^{-1/2} (x) |j>_B]}_j. Requires X_A
    positive definite; use extended_petz_recovery otherwise.
    """
    X_AB = as_operator(X_AB)
    a_label, b_label = _split_bipartite(X_AB.layout, a_label, b_label)
    dA = X_AB.layout.dim_of(a_label)
    dB = X_AB.layout.dim_of(b_label)
    if X_AB.layout.labels != (a_label, b_label):
        raise ValueError("factor order must be (A, B)")
    X_A = partial_trace(X_AB, a_label)
    vals = np.linalg.eigvalsh(X_A.matrix)
    if vals.min() <= DEFAULT_RANK_TOL * max(vals.max(), 0.0):
        raise DomainError(
            f"X_A is singular (min eigenvalue {vals.min():.3e}); use extended_petz_recovery"
        )
    root_AB = psd_sqrt(X_AB).matrix
    inv_root_A = psd_power(X_A, -0.5).matrix
    ks = []
    for j in range(dB):
        e = np.zeros((dB, 1), dtype=np.complex128)
        e[j, 0] = 1.0
        ks.append(root_AB @ np.kron(inv_root_A, e))
    return QuantumChannel(tuple(ks), dA, dA * dB)


def extended_petz_recovery(
    X_AB: HermitianOperator,
    xi_AB: HermitianOperator | None = None,
    a_label: str | None = None,
    b_label: str | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> QuantumChannel:
    """Petz recovery extended to singular X_A by an extra action on ker X_A:

        Z_A -> X_AB^{1/2} ([X_A^{-1/2} Z_A X_A^{-1/2}] (x) I_B) X_AB^{1/2}
               + Tr{Pi_{X_A}^perp Z_A} xi_AB

    where X_A^{-1/2} is the square-root inverse on the support and xi_AB is
    any invertible density operator (default: maximally mixed). The Kraus set
    is the support family plus {sqrt(p_l) |phi_l><k| Pi_{X_A}^perp}_{l,k}.
    """
    X_AB = as_operator(X_AB)
    a_label, b_label = _split_bipartite(X_AB.layout, a_label, b_label)
    dA = X_AB.layout.dim_of(a_label)
    dB = X_AB.layout.dim_of(b_label)
    if X_AB.layout.labels != (a_label, b_label):
        raise ValueError("factor order must be (A, B)")
    dAB = dA * dB
    if xi_AB is None:
        xi_AB = HermitianOperator(np.eye(dAB) / dAB, X_AB.layout)
    else:
        xi_AB = as_operator(xi_AB)
        xi_vals = np.linalg.eigvalsh(xi_AB.matrix)
        if xi_vals.min() <= 0.0 or abs(float(xi_vals.sum()) - 1.0) > 1e-9:
            raise ValueError("xi_AB must be a positive definite unit-trace operator")
    X_A = partial_trace(X_AB, a_label)
    root_AB = psd_sqrt(X_AB).matrix
    inv_root_A = psd_power(X_A, -0.5, rank_tol=rank_tol).matrix
    K_perp = kernel_projector(X_A, rank_tol).matrix
    ks = []
    for j in range(dB):
        e = np.zeros((dB, 1), dtype=np.complex128)
        e[j, 0] = 1.0
        ks.append(root_AB @ np.kron(inv_root_A, e))
    p, phis = np.linalg.eigh(xi_AB.matrix)
    for l in range(dAB):
        if p[l] <= 0.0:
            continue
        for k in range(dA):
            bra = K_perp[k, :][None, :]  # <k| Pi^perp
            ks.append(np.sqrt(p[l]) * phis[:, l][:, None] @ bra)
    return QuantumChannel(tuple(ks), dA, dAB)


def extended_petz_isometry(
    X_AB: HermitianOperator,
    xi_AB: HermitianOperator | None = None,
    a_label: str | None = None,
    b_label: str | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> Isometry:
    """Isometric extension of the extended Petz recovery channel.

    Maps A into A (x) B (x) C (x) E where dim C = dB + dA and
    dim E = 1 + dA*dB. The first environment branch |j>_C |e>_E carries the
    support family; the branch |dB+k>_C |l>_E (l >= 1) carries the kernel
    family. Restricted to supp(X_A) with E in |e>, it is
    X_AB^{1/2} (X_A^{-1/2} . ) tensored against the B-C maximally entangled
    pair, which transports the canonical purification of X_A to that of X_AB.
    """
    X_AB = as_operator(X_AB)
    a_label, b_label = _split_bipartite(X_AB.layout, a_label, b_label)
    dA = X_AB.layout.dim_of(a_label)
    dB = X_AB.layout.dim_of(b_label)
    dAB = dA * dB
    dC = dB + dA
    dE = 1 + dAB
    if xi_AB is None:
        xi_AB = HermitianOperator(np.eye(dAB) / dAB, X_AB.layout)
    else:
        xi_AB = as_operator(xi_AB)
    X_A = partial_trace(X_AB, a_label)
    root_AB = psd_sqrt(X_AB).matrix
    inv_root_A = psd_power(X_A, -0.5, rank_tol=rank_tol).matrix
    K_perp = kernel_projector(X_A, rank_tol).matrix
    p, phis = np.linalg.eigh(xi_AB.matrix)

    V = np.zeros((dAB * dC * dE, dA), dtype=np.complex128)

    def env(c_idx: int, e_idx: int) -> np.ndarray:
        v = np.zeros((dC * dE, 1), dtype=np.complex128)
        v[c_idx * dE + e_idx, 0] = 1.0
        return v

    for j in range(dB):
        e = np.zeros((dB, 1), dtype=np.complex128)
        e[j, 0] = 1.0
        K = root_AB @ np.kron(inv_root_A, e)  # dAB x dA
        V += np.kron(K, env(j, 0))
    for l in range(dAB):
        if p[l] <= 0.0:
            continue
        for k in range(dA):
            bra = K_perp[k, :][None, :]
            K = np.sqrt(p[l]) * phis[:, l][:, None] @ bra
            V += np.kron(K, env(dB + k, 1 + l))
    dom = SystemLayout.single(a_label, dA)
    cod = SystemLayout(((a_label, dA), (b_label, dB), ("c_hat", dC), ("env", dE)))
    return Isometry(V, dom, cod)


def pinching(layout: SystemLayout, labels: tuple[str, ...] | None = None) -> QuantumChannel:
    """The decohering channel that kills off-diagonal blocks of the named
    factors' computational basis (all factors by default): idempotent,
    D(Z) = sum_z P_z Z P_z.
    """
    if labels is None:
        labels = layout.labels
    d = layout.total_dim
    dims = layout.dims
    pin_idx = [layout.index_of(lab) for lab in labels]
    grids = np.indices(dims).reshape(len(dims), -1)
    keys = [tuple(grids[i, j] for i in pin_idx) for j in range(d)]
    groups: dict[tuple, list[int]] = {}
    for j, key in enumerate(keys):
        groups.setdefault(key, []).append(j)
    ks = []
    for idxs in groups.values():
        P = np.zeros((d, d), dtype=np.complex128)
        for j in idxs:
            P[j, j] = 1.0
        ks.append(P)
    return QuantumChannel(tuple(ks), d, d)


def embedding_isometry(d_small: int, d_large: int) -> Isometry:
    """V = sum_i |i>_large <i|_small: places operators in the top-left block."""
    if d_small > d_large:
        raise ValueError(f"cannot embed dim {d_small} into smaller dim {d_large}")
    V = np.zeros((d_large, d_small), dtype=np.complex128)
    V[:d_small, :] = np.eye(d_small)
    return Isometry(V, SystemLayout.single("s", d_small), SystemLayout.single("s", d_large))


# ---------------------------------------------------------------------------
# Seeded random generators
# ---------------------------------------------------------------------------


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_psd(d: int, seed: int, rank: int | None = None, layout: SystemLayout | None = None) -> HermitianOperator:
    """G G^dag for a Ginibre G of shape (d, rank); unnormalized trace."""
    rng = _rng(seed)
    r = d if rank is None else int(rank)
    if not (1 <= r <= d):
        raise ValueError(f"rank must be in [1, {d}], got {r}")
    G = _ginibre(rng, d, r)
    return HermitianOperator(G @ G.conj().T / d, layout, atol=1e-9)


def random_density(d: int, seed: int, rank: int | None = None, layout: SystemLayout | None = None, ridge: float = 1e-6) -> HermitianOperator:
    """Unit-trace positive definite state: G G^dag / Tr plus a ridge, renormalized.

    The ridge (delta * I, delta = 1e-6) keeps even rank-restricted draws
    invertible; pass ridge=0.0 for genuinely singular states.
    """
    rng = _rng(seed)
    r = d if rank is None else int(rank)
    if not (1 <= r <= d):
        raise ValueError(f"rank must be in [1, {d}], got {r}")
    G = _ginibre(rng, d, r)
    M = G @ G.conj().T
    M /= np.trace(M).real
    if ridge > 0.0:
        M = M + ridge * np.eye(d)
        M /= np.trace(M).real
    return HermitianOperator(M, layout, atol=1e-9)


def random_pure(d: int, seed: int) -> np.ndarray:
    """A Haar-distributed unit vector."""
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_channel(din: int, dout: int, seed: int, denv: int | None = None) -> QuantumChannel:
    """A Haar-style random channel: orthonormalize a Ginibre block into an
    isometry V of shape (dout*denv, din) and slice Kraus operators along the
    environment. Default denv = din*dout spans all channels of these dims.
    """
    rng = _rng(seed)
    if denv is None:
        denv = din * dout
    if dout * denv < din:
        raise ValueError(f"dout*denv = {dout * denv} < din = {din}: no isometry exists")
    G = _ginibre(rng, dout * denv, din)
    Q, R = np.linalg.qr(G)
    # Fix the gauge so the draw is Haar, not QR-convention dependent.
    phase = np.diag(R).copy()
    phase = phase / np.abs(phase)
    V = Q * phase.conj()[None, :]
    ks = V.reshape(dout, denv, din)
    return QuantumChannel(tuple(ks[:, i, :] for i in range(denv)), din, dout)


def random_unitary(d: int, seed: int) -> np.ndarray:
    ch = random_channel(d, d, seed, denv=1)
    return ch.kraus[0]
