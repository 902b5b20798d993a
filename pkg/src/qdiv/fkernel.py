"""Descriptors for the scalar kernels f that generate each divergence.

Each descriptor pairs a function on (0, inf) with its limits at 0+ and inf
and two operator-theoretic flags. The flags of the built-in families are
declared by construction (they are classical facts about -log x and x^beta);
user-supplied kernels carry caller-declared flags, and the divergence
guarantees only hold when those declarations are true.

Built-in families and their CLI spellings:
    neg_log          f(x) = -log x
    neg_pow:beta     f(x) = -x^beta,  beta in (0, 1]
    inv_pow:beta     f(x) = x^beta,   beta in [-1, 0)
    convex_pow:beta  f(x) = x^beta,   beta in [1, 2]
    renyi:alpha      the matching power family with beta = (1-alpha)/alpha
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .extreal import NEG_INF, POS_INF, ExtendedReal
from .linops import DomainError

NEG_LOG = "neg_log"
NEG_POW = "neg_pow"
INV_POW = "inv_pow"
CONVEX_POW = "convex_pow"

BUILTIN_FAMILIES = (NEG_LOG, NEG_POW, INV_POW, CONVEX_POW)

# Integer codes shared with the compiled ascent kernel.
_BUILTIN_CODES = {NEG_LOG: 0, NEG_POW: 1, INV_POW: 2, CONVEX_POW: 3}


@dataclass(frozen=True)
class FDescriptor:
    name: str
    params: tuple[float, ...]
    fn: Callable[[np.ndarray], np.ndarray]
    limit_at_zero: ExtendedReal
    limit_at_infinity: ExtendedReal
    anti_monotone: bool
    operator_convex: bool
    _dual_of: "FDescriptor | None" = field(default=None, repr=False, compare=False)

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        if np.any(arr <= 0.0):
            raise DomainError(f"{self.name} has domain (0, inf); got min argument {arr.min()!r}")
        out = self.fn(arr)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    @property
    def builtin_code(self) -> tuple[int, float] | None:
        """(code, beta) for built-ins, None for user-supplied kernels."""
        code = _BUILTIN_CODES.get(self.name)
        if code is None:
            return None
        beta = self.params[0] if self.params else 0.0
        return code, beta

    def spec_string(self) -> str:
        if self.params:
            return f"{self.name}:{self.params[0]:g}"
        return self.name


def neg_log() -> FDescriptor:
    """f(x) = -log x: operator anti-monotone and operator convex."""
    return FDescriptor(
        name=NEG_LOG,
        params=(),
        fn=lambda x: -np.log(x),
        limit_at_zero=POS_INF,
        limit_at_infinity=NEG_INF,
        anti_monotone=True,
        operator_convex=True,
    )


def neg_pow(beta: float) -> FDescriptor:
    """f(x) = -x^beta for beta in (0, 1]."""
    beta = float(beta)
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"neg_pow needs beta in (0, 1], got {beta}")
    return FDescriptor(
        name=NEG_POW,
        params=(beta,),
        fn=lambda x, b=beta: -(x**b),
        limit_at_zero=ExtendedReal.finite(0.0),
        limit_at_infinity=NEG_INF,
        anti_monotone=True,
        operator_convex=True,
    )


def inv_pow(beta: float) -> FDescriptor:
    """f(x) = x^beta for beta in [-1, 0)."""
    beta = float(beta)
    if not (-1.0 <= beta < 0.0):
        raise ValueError(f"inv_pow needs beta in [-1, 0), got {beta}")
    return FDescriptor(
        name=INV_POW,
        params=(beta,),
        fn=lambda x, b=beta: x**b,
        limit_at_zero=POS_INF,
        limit_at_infinity=ExtendedReal.finite(0.0),
        anti_monotone=True,
        operator_convex=True,
    )


def convex_pow(beta: float) -> FDescriptor:
    """f(x) = x^beta for beta in [1, 2]: operator convex but not anti-monotone."""
    beta = float(beta)
    if not (1.0 <= beta <= 2.0):
        raise ValueError(f"convex_pow needs beta in [1, 2], got {beta}")
    return FDescriptor(
        name=CONVEX_POW,
        params=(beta,),
        fn=lambda x, b=beta: x**b,
        limit_at_zero=ExtendedReal.finite(0.0),
        limit_at_infinity=POS_INF,
        anti_monotone=False,
        operator_convex=True,
    )


def make_builtin(family: str, beta: float | None = None) -> FDescriptor:
    """Construct a built-in by family name; beta required for the power families."""
    if family == NEG_LOG:
        if beta is not None:
            raise ValueError("neg_log takes no parameter")
        return neg_log()
    if family == NEG_POW:
        return neg_pow(_require_beta(family, beta))
    if family == INV_POW:
        return inv_pow(_require_beta(family, beta))
    if family == CONVEX_POW:
        return convex_pow(_require_beta(family, beta))
    raise ValueError(f"unknown builtin family {family!r}; expected one of {BUILTIN_FAMILIES}")


def _require_beta(family: str, beta: float | None) -> float:
    if beta is None:
        raise ValueError(f"{family} needs a beta parameter")
    return float(beta)


def custom_f(
    name: str,
    fn: Callable[[np.ndarray], np.ndarray],
    *,
    limit_at_zero: ExtendedReal,
    limit_at_infinity: ExtendedReal,
    anti_monotone: bool,
    operator_convex: bool,
) -> FDescriptor:
    """Wrap a user-supplied kernel. Flags are taken on trust (with a warning):
    the divergence data-processing guarantees need operator anti-monotonicity,
    which is not checked numerically here.
    """
    if name in BUILTIN_FAMILIES:
        raise ValueError(f"{name!r} is reserved for the builtin family")
    warnings.warn(
        f"custom kernel {name!r}: operator flags are caller-declared; "
        "divergence monotonicity guarantees require them to actually hold",
        stacklevel=2,
    )
    return FDescriptor(
        name=name,
        params=(),
        fn=fn,
        limit_at_zero=limit_at_zero,
        limit_at_infinity=limit_at_infinity,
        anti_monotone=anti_monotone,
        operator_convex=operator_convex,
    )


def dual_k(f: FDescriptor) -> FDescriptor:
    """The conjugate kernel k(x) = -f(1/x); an involution, built-ins map to built-ins."""
    if f._dual_of is not None:
        return f._dual_of
    if f.name == NEG_LOG:
        return neg_log()  # -(-log(1/x)) = -log x
    if f.name == NEG_POW:
        return inv_pow(-f.params[0])  # -(-(1/x)^b) = x^{-b}
    if f.name == INV_POW:
        return neg_pow(-f.params[0])
    k = FDescriptor(
        name=f"dual({f.name})",
        params=f.params,
        fn=lambda x, inner=f.fn: -inner(1.0 / np.asarray(x, dtype=np.float64)),
        limit_at_zero=-f.limit_at_infinity,
        limit_at_infinity=-f.limit_at_zero,
        anti_monotone=f.anti_monotone,
        operator_convex=False,
        _dual_of=f,
    )
    return k


def renyi_f(alpha: float) -> FDescriptor:
    """The power kernel whose optimized divergence is the sandwiched Renyi
    quasi-entropy of order alpha: exponent beta = (1-alpha)/alpha.

    alpha in [1/2, 1) gives neg_pow(beta), beta in (0, 1];
    alpha in (1, inf) gives inv_pow(beta), beta in (-1, 0).
    """
    alpha = float(alpha)
    if not (0.5 <= alpha < 1.0 or alpha > 1.0) or not np.isfinite(alpha):
        raise ValueError(f"renyi_f needs alpha in [1/2, 1) or (1, inf), got {alpha}")
    beta = (1.0 - alpha) / alpha
    if alpha < 1.0:
        return neg_pow(beta)
    return inv_pow(beta)


def renyi_alpha_of(f: FDescriptor) -> float | None:
    """Recover alpha = 1/(1+beta) when f is one of the Renyi power families."""
    if f.name == NEG_POW or f.name == INV_POW:
        beta = f.params[0]
        if beta == -1.0:
            return None  # alpha = inf endpoint, excluded
        return 1.0 / (1.0 + beta)
    return None


def parse_f_spec(spec: str) -> FDescriptor:
    """Parse CLI kernel spellings: neg_log, neg_pow:b, inv_pow:b, convex_pow:b, renyi:a."""
    spec = spec.strip()
    if spec == NEG_LOG:
        return neg_log()
    if ":" not in spec:
        raise ValueError(f"bad f spec {spec!r}: expected neg_log or family:parameter")
    family, _, raw = spec.partition(":")
    try:
        param = float(raw)
    except ValueError:
        raise ValueError(f"bad f spec {spec!r}: parameter {raw!r} is not a number") from None
    if family == "renyi":
        return renyi_f(param)
    if family in (NEG_POW, INV_POW, CONVEX_POW):
        return make_builtin(family, param)
    raise ValueError(f"bad f spec {spec!r}: unknown family {family!r}")
