"""Dense complex linear algebra primitives.

Hermitian eigendecomposition, matrix functions through the eigenbasis, tensor
operations with labeled factors, canonical purifications, support/kernel
projectors, and Schatten norms. Everything is desk scale: dense storage,
total dimension up to a few dozen.

Conventions:
- vec() is row-major, so (A (x) I)|Gamma> = vec(A) with |Gamma> = sum_i |i>|i>.
- Eigenvalues ascend; eigenvector matrices hold eigenvectors as columns.
- Numerically psd inputs may carry eigenvalues in [-1e-10, 0); those are
  clipped to zero. Anything more negative is a genuine domain violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

# Eigenvalues of nominally psd operators at least this negative are errors,
# not roundoff.
PSD_CLIP_FLOOR = -1e-10

# Scale-relative rank cut for support/kernel splitting.
DEFAULT_RANK_TOL = 1e-9

HERMITICITY_ATOL = 1e-12


class DomainError(ValueError):
    """A mathematical-domain violation (non-psd input, support mismatch, ...)."""


@dataclass(frozen=True)
class SystemLayout:
    """Ordered tensor factors as (label, dim) pairs."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        labels = [lab for lab, _ in self.factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate factor labels: {labels}")
        for lab, d in self.factors:
            if d < 1:
                raise ValueError(f"factor {lab!r} has dim {d} < 1")

    @staticmethod
    def single(label: str, dim: int) -> "SystemLayout":
        return SystemLayout(((label, int(dim)),))

    @staticmethod
    def of_dims(dims: Sequence[int], labels: Sequence[str] | None = None) -> "SystemLayout":
        if labels is None:
            labels = [f"s{i}" for i in range(len(dims))]
        if len(labels) != len(dims):
            raise ValueError("labels and dims must have equal length")
        return SystemLayout(tuple((str(l), int(d)) for l, d in zip(labels, dims)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.factors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims)) if self.factors else 1

    def dim_of(self, label: str) -> int:
        for lab, d in self.factors:
            if lab == label:
                return d
        raise ValueError(f"unknown factor label {label!r}; have {self.labels}")

    def index_of(self, label: str) -> int:
        for i, (lab, _) in enumerate(self.factors):
            if lab == label:
                return i
        raise ValueError(f"unknown factor label {label!r}; have {self.labels}")

    def tensor(self, other: "SystemLayout") -> "SystemLayout":
        return SystemLayout(self.factors + other.factors)

    def restrict(self, keep: Sequence[str]) -> "SystemLayout":
        keep_set = set(keep)
        unknown = keep_set - set(self.labels)
        if unknown:
            raise ValueError(f"unknown factor labels {sorted(unknown)}; have {self.labels}")
        return SystemLayout(tuple(f for f in self.factors if f[0] in keep_set))


class HermitianOperator:
    """A complex square matrix symmetrized to exact Hermiticity at construction.

    Carries a SystemLayout for tensor-factor bookkeeping. Immutable: the
    stored array is read-only.
    """

    __slots__ = ("_matrix", "_layout")

    def __init__(self, matrix, layout: SystemLayout | None = None, *, atol: float = HERMITICITY_ATOL):
        # order="C": the float64 finiteness view below needs a contiguous
        # last axis, which transposed (Fortran-ordered) inputs lack.
        M = np.array(matrix, dtype=np.complex128, order="C")
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {M.shape}")
        if not np.all(np.isfinite(M.view(np.float64))):
            raise ValueError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
        defect = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
        if defect > atol * scale:
            raise ValueError(
                f"matrix is not Hermitian: max |M - M^dag| = {defect:.3e} exceeds {atol:.1e} * {scale:.3g}"
            )
        M = (M + M.conj().T) / 2.0
        M.setflags(write=False)
        self._matrix = M
        d = M.shape[0]
        if layout is None:
            layout = SystemLayout.single("s", d)
        if layout.total_dim != d:
            raise ValueError(f"layout dims {layout.dims} multiply to {layout.total_dim}, matrix dim is {d}")
        self._layout = layout

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def layout(self) -> SystemLayout:
        return self._layout

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self._matrix).real)

    def with_layout(self, layout: SystemLayout) -> "HermitianOperator":
        return HermitianOperator(self._matrix, layout)

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim}, layout={self._layout.factors})"


def as_operator(X, layout: SystemLayout | None = None, *, atol: float = HERMITICITY_ATOL) -> HermitianOperator:
    """Coerce an ndarray (or operator) to a HermitianOperator."""
    if isinstance(X, HermitianOperator):
        if layout is not None and layout.factors != X.layout.factors:
            return X.with_layout(layout)
        return X
    return HermitianOperator(X, layout, atol=atol)


def identity_operator(dim: int, layout: SystemLayout | None = None) -> HermitianOperator:
    return HermitianOperator(np.eye(dim, dtype=np.complex128), layout)


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


@dataclass(frozen=True)
class PureStateVector:
    """A ket with factor bookkeeping. ``normalized`` asserts unit Euclidean norm."""

    amplitudes: np.ndarray
    layout: SystemLayout
    normalized: bool = False

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(amp.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        if amp.size != self.layout.total_dim:
            raise ValueError(f"{amp.size} amplitudes vs layout dim {self.layout.total_dim}")
        if self.normalized and abs(np.linalg.norm(amp) - 1.0) > 1e-10:
            raise ValueError(f"flagged normalized but norm = {np.linalg.norm(amp)!r}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def density(self) -> HermitianOperator:
        v = self.amplitudes
        return HermitianOperator(np.outer(v, v.conj()), self.layout)


def eig_hermitian(H: HermitianOperator | np.ndarray) -> Spectrum:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    M = H.matrix if isinstance(H, HermitianOperator) else np.asarray(H, dtype=np.complex128)
    try:
        vals, vecs = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh on Hermitian input converges in practice
        norm = float(np.linalg.norm(M))
        raise DomainError(f"eigensolver failed to converge (dim {M.shape[0]}, Frobenius norm {norm:.3e}): {exc}")
    return Spectrum(vals, vecs)


def clip_psd_eigenvalues(vals: np.ndarray, *, floor: float = PSD_CLIP_FLOOR, what: str = "operator") -> np.ndarray:
    """Zero out eigenvalues in [floor, 0); reject anything more negative."""
    vals = np.asarray(vals, dtype=np.float64)
    vmin = float(vals.min()) if vals.size else 0.0
    if vmin < floor:
        raise DomainError(f"{what} is not positive semi-definite: min eigenvalue {vmin:.6e} < {floor:.1e}")
    return np.where(vals < 0.0, 0.0, vals)


def matrix_function(H: HermitianOperator, f: Callable[[np.ndarray], np.ndarray], *, name: str = "f") -> HermitianOperator:
    """Apply a scalar function to a positive definite operator via its eigenbasis.

    Requires every eigenvalue strictly positive (after clipping roundoff
    negatives to zero, which then still fail the strictness test).
    """
    H = as_operator(H)
    spec = eig_hermitian(H)
    vals = clip_psd_eigenvalues(spec.eigenvalues, what="matrix_function input")
    if vals.min() <= 0.0:
        raise DomainError(f"matrix_function({name}) needs a positive definite input; eigenvalue {vals.min():.6e} <= 0")
    mapped = np.asarray(f(vals), dtype=np.float64)
    out = (spec.eigenvectors * mapped) @ spec.eigenvectors.conj().T
    return HermitianOperator(out, H.layout, atol=1e-9)


def psd_part_eigen(H: HermitianOperator | np.ndarray, *, what: str = "operator") -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with the psd clip applied: (clipped values, vectors)."""
    spec = eig_hermitian(H)
    return clip_psd_eigenvalues(spec.eigenvalues, what=what), spec.eigenvectors


def psd_power(H: HermitianOperator, p: float, *, rank_tol: float = DEFAULT_RANK_TOL) -> HermitianOperator:
    """Pseudo-power H^p on the support of H; zero eigenvalues stay zero.

    Eigenvalues at or below rank_tol * lambda_max count as kernel, so negative
    powers are support-restricted inverses.
    """
    H = as_operator(H)
    vals, vecs = psd_part_eigen(H, what="psd_power input")
    cut = rank_tol * (vals.max() if vals.size else 0.0)
    out_vals = np.where(vals > cut, vals, 1.0) ** p
    out_vals = np.where(vals > cut, out_vals, 0.0)
    M = (vecs * out_vals) @ vecs.conj().T
    return HermitianOperator(M, H.layout, atol=1e-9)


def psd_sqrt(H: HermitianOperator) -> HermitianOperator:
    H = as_operator(H)
    vals, vecs = psd_part_eigen(H, what="psd_sqrt input")
    M = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return HermitianOperator(M, H.layout, atol=1e-9)


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product on raw matrices; (i*dB+k, j*dB+l) = A[i,j] B[k,l]."""
    return np.kron(A, B)


def kron_operator(A: HermitianOperator, B: HermitianOperator) -> HermitianOperator:
    """Kronecker product with concatenated layouts."""
    return HermitianOperator(np.kron(A.matrix, B.matrix), A.layout.tensor(B.layout), atol=1e-9)


def partial_trace(M: HermitianOperator, keep: str | Iterable[str], layout: SystemLayout | None = None) -> HermitianOperator:
    """Trace out every factor not named in ``keep``; kept factors keep their order."""
    M = as_operator(M)
    if layout is None:
        layout = M.layout
    if isinstance(keep, str):
        keep = (keep,)
    keep = tuple(keep)
    sub = layout.restrict(keep)  # validates labels
    dims = layout.dims
    n = len(dims)
    keep_idx = [i for i, (lab, _) in enumerate(layout.factors) if lab in set(keep)]
    T = M.matrix.reshape(dims + dims)
    # Contract each traced factor pair (row leg i, column leg n+i).
    traced = [i for i in range(n) if i not in keep_idx]
    for count, i in enumerate(sorted(traced)):
        off = i - count  # legs shift left as earlier ones are consumed
        legs = T.ndim // 2
        T = np.trace(T, axis1=off, axis2=legs + off)
    dkeep = sub.total_dim
    out = T.reshape(dkeep, dkeep)
    return HermitianOperator(out, sub, atol=1e-9)


def transpose_in_basis(M: HermitianOperator) -> HermitianOperator:
    """Entry-wise transpose in the computational basis (layout preserved)."""
    M = as_operator(M)
    return HermitianOperator(M.matrix.T, M.layout, atol=1e-9)


def vec_rowmajor(M: np.ndarray) -> np.ndarray:
    return np.asarray(M).reshape(-1)


def unvec_rowmajor(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d)


def max_entangled_vector(d: int, labels: tuple[str, str] = ("s", "s_ref")) -> PureStateVector:
    """Unnormalized |Gamma> = sum_i |i>|i> on d (x) d; squared norm is d."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    amp = np.eye(d, dtype=np.complex128).reshape(-1)
    layout = SystemLayout(((labels[0], d), (labels[1], d)))
    return PureStateVector(amp, layout, normalized=(d == 1))


def canonical_purification(X: HermitianOperator, ref_label: str | None = None) -> PureStateVector:
    """|phi^X> = (X^{1/2} (x) I)|Gamma>, whose reduction on the first half is X."""
    X = as_operator(X)
    root = psd_sqrt(X)  # DomainError if X is not psd
    amp = root.matrix.reshape(-1)  # row-major flatten equals (A (x) I)|Gamma>
    if ref_label is None:
        ref_label = "ref"
        while ref_label in X.layout.labels:
            ref_label += "'"
    layout = X.layout.tensor(SystemLayout.single(ref_label, X.dim))
    tr = X.trace()
    return PureStateVector(amp, layout, normalized=abs(tr - 1.0) <= 1e-10)


def support_projector(X: HermitianOperator, rank_tol: float = DEFAULT_RANK_TOL) -> HermitianOperator:
    """Orthogonal projector onto the range of a psd operator."""
    X = as_operator(X)
    vals, vecs = psd_part_eigen(X, what="support_projector input")
    cut = rank_tol * (vals.max() if vals.size else 0.0)
    mask = (vals > cut).astype(np.float64)
    P = (vecs * mask) @ vecs.conj().T
    return HermitianOperator(P, X.layout, atol=1e-9)


def kernel_projector(X: HermitianOperator, rank_tol: float = DEFAULT_RANK_TOL) -> HermitianOperator:
    """Orthogonal projector onto the null space; complements support_projector."""
    X = as_operator(X)
    P = support_projector(X, rank_tol)
    return HermitianOperator(np.eye(X.dim) - P.matrix, X.layout, atol=1e-9)


def support_contained(X: HermitianOperator, Y: HermitianOperator, *, rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """True when supp(X) is inside supp(Y), judged at the shared rank tolerance."""
    X = as_operator(X)
    Y = as_operator(Y)
    K = kernel_projector(Y, rank_tol).matrix
    leak = K @ X.matrix @ K
    xscale = float(np.max(np.abs(X.matrix))) or 1.0
    return float(np.max(np.abs(leak))) <= rank_tol * xscale


def schatten_norm(Z: HermitianOperator, alpha: float) -> float:
    """||Z||_alpha = [sum_i lambda_i^alpha]^(1/alpha) for psd Z, alpha > 0."""
    if alpha <= 0:
        raise ValueError(f"Schatten order must be positive, got {alpha}")
    Z = as_operator(Z)
    vals, _ = psd_part_eigen(Z, what="schatten_norm input")
    if not np.any(vals > 0):
        return 0.0
    # For alpha < 1 the quasi-norm amplifies eigensolver noise: a spurious
    # 1e-16-scale kernel eigenvalue contributes its alpha-th root.  Drop
    # everything below 1e-12 of the top; true spectrum there is unresolvable.
    vals = vals[vals > 1e-12 * vals.max()]
    s = float(np.sum(vals**alpha))
    return s ** (1.0 / alpha)


def operator_norm_psd(Z: HermitianOperator) -> float:
    """Largest eigenvalue of a psd operator (the alpha -> inf Schatten limit)."""
    Z = as_operator(Z)
    vals, _ = psd_part_eigen(Z, what="operator_norm input")
    return float(vals.max()) if vals.size else 0.0


def permute_vector_factors(amp: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a ket: factor i of the output is factor perm[i] of the input."""
    amp = np.asarray(amp).reshape(tuple(dims))
    return amp.transpose(tuple(perm)).reshape(-1)
