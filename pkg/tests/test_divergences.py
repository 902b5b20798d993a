"""Divergence evaluators: fixed-tau forms, the tau-ascent, closed forms."""

import math

import numpy as np
import pytest

from qdiv import (
    DomainError,
    ExtendedReal,
    HermitianOperator,
    OptimizerOptions,
    classical_f_divergence,
    cq_f_divergence,
    divergence_value,
    holder_optimal_tau,
    identity_operator,
    kron,
    neg_log,
    neg_pow,
    inv_pow,
    optimized_alpha_divergence_at,
    optimized_f_at,
    optimized_f_at_tensor,
    optimized_f_divergence,
    petz_dpi_direction,
    petz_f_divergence,
    petz_renyi,
    quantum_relative_entropy,
    rel_modular_eval,
    renyi_f,
    sandwiched_quasi_entropy,
    sandwiched_renyi,
    sandwiched_vs_petz_gap,
)
from qdiv.channels import random_density, random_psd

LOG2 = math.log(2.0)

FAST = OptimizerOptions(multistarts=2)


def diag_op(*vals):
    return HermitianOperator(np.diag(np.asarray(vals, dtype=float)))


# ---- optimized_f_at ----


def test_fixed_tau_all_identity_reduces_to_f1():
    for d in (2, 3):
        M = HermitianOperator(np.eye(d) / d)
        for f in (neg_log(), renyi_f(2.0), renyi_f(0.5)):
            got = optimized_f_at(M, M, M, f)
            # Tr{X} * f(1) with every eigenvalue ratio 1
            assert got == pytest.approx(float(f.fn(np.array([1.0]))[0]), abs=1e-12)


def test_fixed_tau_neg_log_at_xbar_is_relative_entropy():
    X = random_density(3, seed=40)
    Y = random_density(3, seed=41)
    got = optimized_f_at(X, Y, X, neg_log())
    want = quantum_relative_entropy(X, Y).value
    assert got == pytest.approx(want, abs=1e-10)


def test_fixed_tau_commuting_diagonal_oracle():
    rng = np.random.default_rng(42)
    lam, mu, nu = rng.random(4) + 0.1, rng.random(4) + 0.1, rng.random(4) + 0.1
    nu = nu / nu.sum()
    X, Z, tau = diag_op(*lam), diag_op(*mu), diag_op(*nu)
    for f in (neg_log(), renyi_f(2.0)):
        want = float(np.sum(lam * f.fn(mu / nu)))
        assert optimized_f_at(X, Z, tau, f) == pytest.approx(want, abs=1e-10)


def test_fixed_tau_rejects_singular_arguments():
    X = random_density(2, seed=43)
    sing = diag_op(1.0, 0.0)
    ok = diag_op(0.5, 0.5)
    with pytest.raises(DomainError):
        optimized_f_at(X, sing, ok, neg_log())
    with pytest.raises(DomainError):
        optimized_f_at(X, ok, sing, neg_log())


def test_evaluation_routes_agree():
    # tensor form, spectral double sum, relative-modular superoperator
    for seed in range(8):
        X = random_psd(3, seed=100 + seed)
        Z = random_density(3, seed=200 + seed)
        tau = random_density(3, seed=300 + seed)
        for f in (neg_log(), renyi_f(2.0), renyi_f(0.75)):
            a = optimized_f_at(X, Z, tau, f)
            b = optimized_f_at_tensor(X, Z, tau, f)
            c = rel_modular_eval(X, Z, tau, f)
            assert abs(a - b) < 1e-8
            assert abs(a - c) < 1e-8


def test_rel_modular_identity_kernel_diagonal():
    import warnings

    from qdiv import custom_f, POS_INF

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ident = custom_f(
            "identity",
            lambda x: x,
            limit_at_zero=ExtendedReal.finite(0.0),
            limit_at_infinity=POS_INF,
            anti_monotone=False,
            operator_convex=False,
        )
    lam = np.array([0.3, 0.7])
    mu = np.array([0.6, 0.4])
    nu = np.array([0.5, 0.5])
    got = rel_modular_eval(diag_op(*lam), diag_op(*mu), diag_op(*nu), ident)
    assert got == pytest.approx(float(np.sum(lam * mu / nu)), abs=1e-10)


def test_rel_modular_tau_and_y_identity():
    X = random_psd(3, seed=44)
    I3 = identity_operator(3)
    for f in (neg_log(), renyi_f(2.0)):
        got = rel_modular_eval(X, I3, I3, f)
        want = float(f.fn(np.array([1.0]))[0]) * np.trace(X.matrix).real
        assert got == pytest.approx(want, abs=1e-10)


# ---- optimized_f_divergence ----


def test_divergence_of_state_from_itself_is_zero():
    rho = random_density(3, seed=45)
    res = optimized_f_divergence(rho, rho, neg_log(), FAST)
    assert res.value.is_finite
    assert res.value.value == pytest.approx(0.0, abs=1e-8)


def test_neg_log_matches_relative_entropy():
    X = random_density(3, seed=46)
    Y = random_density(3, seed=47)
    res = optimized_f_divergence(X, Y, neg_log(), FAST)
    want = quantum_relative_entropy(X, Y).value
    assert res.value.value == pytest.approx(want, abs=1e-6)
    assert res.converged


def test_renyi_matches_closed_form():
    X = random_density(3, seed=48)
    Y = random_density(3, seed=49)
    for a in (0.5, 0.75, 2.0, 3.0):
        res = optimized_f_divergence(X, Y, renyi_f(a), FAST)
        want = sandwiched_quasi_entropy(X, Y, a).value
        assert res.value.value == pytest.approx(want, abs=1e-6)


def test_unnormalized_x_scales():
    # Q~_f(cX||Y) for f = -log: value = c*D(X||Y) + c*log c contribution
    # handled through Tr{X} D(Xbar||Y); check against the closed form route.
    X = random_psd(3, seed=50)
    Y = random_density(3, seed=51)
    res = optimized_f_divergence(X, Y, neg_log(), FAST)
    want = divergence_value(X, Y, neg_log(), method="closed")
    assert res.value.value == pytest.approx(want.value, abs=1e-6)


def test_support_violation_neg_log_is_infinite():
    X = diag_op(0.5, 0.5)
    Y = diag_op(1.0, 0.0)
    res = optimized_f_divergence(X, Y, neg_log(), FAST)
    assert res.value.is_pos_inf


def test_support_violation_below_one_stays_finite():
    # for alpha < 1 the limit f(0) is finite, no divergence
    X = diag_op(0.5, 0.5)
    Y = diag_op(1.0, 0.0)
    got = sandwiched_quasi_entropy(X, Y, 0.75)
    assert got.is_finite


def test_tau_star_is_a_state():
    X = random_density(3, seed=52)
    Y = random_density(3, seed=53)
    res = optimized_f_divergence(X, Y, neg_log(), FAST)
    tau = res.tau_star
    assert tau is not None
    assert np.trace(tau.matrix).real == pytest.approx(1.0, abs=1e-9)
    assert np.linalg.eigvalsh(tau.matrix).min() > 0.0


def test_divergence_value_routes_agree():
    X = random_density(3, seed=54)
    Y = random_density(3, seed=55)
    closed = divergence_value(X, Y, renyi_f(2.0), method="closed")
    numeric = divergence_value(X, Y, renyi_f(2.0), method="numeric", opts=FAST)
    auto = divergence_value(X, Y, renyi_f(2.0), method="auto")
    assert closed.value == pytest.approx(auto.value, abs=1e-12)
    assert closed.value == pytest.approx(numeric.value, abs=1e-6)
    with pytest.raises(ValueError):
        divergence_value(X, Y, neg_log(), method="bogus")


def test_rejects_zero_x():
    Y = random_density(2, seed=56)
    with pytest.raises(DomainError):
        optimized_f_divergence(diag_op(0.0, 0.0), Y, neg_log())


# ---- quantum_relative_entropy ----


def test_relative_entropy_self_zero():
    rho = random_density(4, seed=57)
    assert quantum_relative_entropy(rho, rho).value == pytest.approx(0.0, abs=1e-12)


def test_relative_entropy_two_point():
    assert quantum_relative_entropy(diag_op(1.0, 0.0), diag_op(0.5, 0.5)).value == pytest.approx(LOG2)


def test_relative_entropy_support_violation():
    got = quantum_relative_entropy(diag_op(0.5, 0.5), diag_op(1.0, 0.0))
    assert got.is_pos_inf


# ---- sandwiched Renyi ----


def test_sandwiched_self_zero():
    rho = random_density(3, seed=58)
    for a in (0.5, 0.75, 2.0, 3.0):
        assert sandwiched_renyi(rho, rho, a).value == pytest.approx(0.0, abs=1e-10)


def test_sandwiched_rank_one_pair():
    X = diag_op(1.0, 0.0)
    plus = HermitianOperator(np.full((2, 2), 0.5))
    assert sandwiched_quasi_entropy(X, plus, 0.5).value == pytest.approx(-0.5, abs=1e-10)
    assert sandwiched_renyi(X, plus, 0.5).value == pytest.approx(LOG2, abs=1e-10)


def test_sandwiched_support_violation_above_one():
    X = diag_op(0.5, 0.5)
    Y = diag_op(1.0, 0.0)
    assert sandwiched_renyi(X, Y, 2.0).is_pos_inf


def test_sandwiched_alpha_range():
    rho = random_density(2, seed=59)
    for a in (0.3, 1.0):
        with pytest.raises(ValueError):
            sandwiched_renyi(rho, rho, a)
    # escape hatch used by the harness negative control
    assert sandwiched_quasi_entropy(rho, rho, 0.3, check_range=False).is_finite


# ---- holder_optimal_tau ----


def test_holder_tau_diagonal_oracle():
    rng = np.random.default_rng(60)
    lam, mu = rng.random(3) + 0.1, rng.random(3) + 0.1
    X, Y = diag_op(*lam), diag_op(*mu)
    for a in (0.5, 0.75, 2.0, 3.0):
        tau = holder_optimal_tau(X, Y, a).matrix
        want = lam**a * mu ** (1.0 - a)
        want = want / want.sum()
        assert np.allclose(np.sort(np.diag(tau).real), np.sort(want), atol=1e-10)


def test_holder_tau_witnesses_closed_form():
    X = random_density(3, seed=61)
    Y = random_density(3, seed=62)
    for a in (0.5, 0.75, 2.0, 3.0):
        tau = holder_optimal_tau(X, Y, a)
        got = optimized_f_at(X, Y, tau, renyi_f(a))
        want = sandwiched_quasi_entropy(X, Y, a).value
        assert got == pytest.approx(want, abs=1e-8)


def test_holder_tau_symmetric_case():
    I3 = HermitianOperator(np.eye(3) / 3)
    tau = holder_optimal_tau(I3, I3, 2.0)
    assert np.allclose(tau.matrix, np.eye(3) / 3, atol=1e-10)


def test_holder_tau_rejects_bad_alpha():
    X = random_density(2, seed=63)
    for a in (0.3, 1.0, math.inf):
        with pytest.raises(ValueError):
            holder_optimal_tau(X, X, a)


# ---- Petz family ----


def test_petz_self_zero():
    rho = random_density(3, seed=64)
    assert petz_f_divergence(rho, rho, neg_log()).value == pytest.approx(0.0, abs=1e-10)


def test_petz_inv_pow_closed_form():
    X = random_density(3, seed=65)
    Y = random_density(3, seed=66)
    b = -0.5
    got = petz_f_divergence(X, Y, inv_pow(b))
    lx, vx = np.linalg.eigh(X.matrix)
    Xp = vx @ np.diag(lx ** (1 - b)) @ vx.conj().T
    ly, vy = np.linalg.eigh(Y.matrix)
    Yp = vy @ np.diag(ly**b) @ vy.conj().T
    want = float(np.trace(Xp @ Yp).real)
    assert got.value == pytest.approx(want, abs=1e-10)


def test_petz_inv_pow_support_violation():
    X = diag_op(0.5, 0.5)
    Y = diag_op(1.0, 0.0)
    assert petz_f_divergence(X, Y, inv_pow(-0.5)).is_pos_inf


def test_petz_neg_pow_closed_form():
    X = random_density(2, seed=67)
    Y = random_psd(2, seed=68, rank=1)
    b = 0.5
    got = petz_f_divergence(X, Y, neg_pow(b))
    lx, vx = np.linalg.eigh(X.matrix)
    Xp = vx @ np.diag(lx ** (1 - b)) @ vx.conj().T
    ly, vy = np.linalg.eigh(Y.matrix)
    ly = np.where(ly < 1e-9 * ly.max(), 0.0, ly)  # noise eigenvalue is true kernel
    Yp = vy @ np.diag(ly**b) @ vy.conj().T
    want = -float(np.trace(Xp @ Yp).real)
    assert got.value == pytest.approx(want, abs=1e-10)


def test_petz_renyi_values():
    rho = random_density(3, seed=69)
    assert petz_renyi(rho, rho, 2.0).value == pytest.approx(0.0, abs=1e-10)
    assert petz_renyi(diag_op(1.0, 0.0), diag_op(0.5, 0.5), 2.0).value == pytest.approx(LOG2)


def test_petz_renyi_zero_alpha_equality():
    X = random_density(3, seed=70)
    Y = random_psd(3, seed=71)
    want = -math.log(np.trace(Y.matrix).real)
    assert petz_renyi(X, Y, 0.0).value == pytest.approx(want, abs=1e-10)


def test_petz_renyi_alpha_domain():
    rho = random_density(2, seed=72)
    with pytest.raises(ValueError):
        petz_renyi(rho, rho, 1.0)
    with pytest.raises(ValueError):
        petz_renyi(rho, rho, 2.5)
    # reversed-monotonicity range is accepted
    assert petz_renyi(rho, rho, -0.5).value == pytest.approx(0.0, abs=1e-10)


def test_petz_dpi_direction():
    assert petz_dpi_direction(0.5) == "forward"
    assert petz_dpi_direction(2.0) == "forward"
    assert petz_dpi_direction(-0.5) == "reversed"


# ---- convex power family at fixed tau ----


def test_alpha_divergence_identity_triple():
    for b in (1.0, 1.5, 2.0):
        I3 = HermitianOperator(np.eye(3) / 3)
        assert optimized_alpha_divergence_at(I3, I3, I3, b) == pytest.approx(1.0, abs=1e-12)


def test_alpha_divergence_diagonal_oracle():
    rng = np.random.default_rng(73)
    lam, mu, nu = rng.random(3) + 0.1, rng.random(3) + 0.1, rng.random(3) + 0.1
    b = 1.5
    want = float(np.sum(lam * mu**b * nu ** (-b)))
    got = optimized_alpha_divergence_at(diag_op(*lam), diag_op(*mu), diag_op(*nu), b)
    assert got == pytest.approx(want, abs=1e-10)


def test_alpha_divergence_beta_one_cancellation():
    # cancellation Tr{X^{1/2} Y X^{1/2} Y^{-1}} = Tr{X} needs [X, Y] = 0
    from qdiv.channels import random_unitary

    rng = np.random.default_rng(74)
    U = random_unitary(3, seed=74)
    X = HermitianOperator(U @ np.diag(rng.random(3) + 0.1) @ U.conj().T)
    Y = HermitianOperator(U @ np.diag(rng.random(3) + 0.1) @ U.conj().T)
    got = optimized_alpha_divergence_at(X, Y, Y, 1.0)
    assert got == pytest.approx(np.trace(X.matrix).real, abs=1e-10)


def test_alpha_divergence_beta_range():
    rho = random_density(2, seed=76)
    with pytest.raises(ValueError):
        optimized_alpha_divergence_at(rho, rho, rho, 2.5)


# ---- classical and CQ reductions ----


def test_classical_self_zero():
    lam = np.array([0.25, 0.75])
    res = classical_f_divergence(lam, lam, neg_log(), FAST)
    assert res.value.value == pytest.approx(0.0, abs=1e-9)


def test_classical_kl_example():
    lam = np.array([0.5, 0.5])
    mu = np.array([1.0 / 3.0, 2.0 / 3.0])
    want = 0.5 * math.log(1.5) + 0.5 * math.log(0.75)
    res = classical_f_divergence(lam, mu, neg_log(), FAST)
    assert res.value.value == pytest.approx(want, abs=1e-9)


def test_classical_matches_quantum_diagonal():
    rng = np.random.default_rng(77)
    lam, mu = rng.random(3) + 0.05, rng.random(3) + 0.05
    for f in (neg_log(), renyi_f(2.0)):
        c = classical_f_divergence(lam, mu, f, FAST)
        q = optimized_f_divergence(diag_op(*lam), diag_op(*mu), f, FAST)
        assert c.value.value == pytest.approx(q.value.value, abs=1e-6)


def test_cq_single_block_reduces():
    X = random_density(2, seed=78)
    Y = random_density(2, seed=79)
    blocked = cq_f_divergence([(X, Y)], renyi_f(2.0), FAST)
    full = optimized_f_divergence(X, Y, renyi_f(2.0), FAST)
    assert blocked.value.value == pytest.approx(full.value.value, abs=1e-8)


def test_cq_equal_scaled_blocks_vanish():
    rho1 = random_density(2, seed=80)
    rho2 = random_density(2, seed=81)
    blocks = [
        (HermitianOperator(0.3 * rho1.matrix), HermitianOperator(0.3 * rho1.matrix)),
        (HermitianOperator(0.7 * rho2.matrix), HermitianOperator(0.7 * rho2.matrix)),
    ]
    res = cq_f_divergence(blocks, neg_log(), FAST)
    assert res.value.value == pytest.approx(0.0, abs=1e-8)


def test_cq_matches_assembled_block_diagonal():
    X1, Y1 = random_psd(2, seed=82), random_psd(2, seed=83)
    X2, Y2 = random_psd(2, seed=84), random_psd(2, seed=85)
    t = sum(np.trace(M.matrix).real for M in (X1, X2))
    blocks = [
        (HermitianOperator(X1.matrix / t), Y1),
        (HermitianOperator(X2.matrix / t), Y2),
    ]
    Xfull = HermitianOperator(
        np.block([[X1.matrix / t, np.zeros((2, 2))], [np.zeros((2, 2)), X2.matrix / t]])
    )
    Yfull = HermitianOperator(
        np.block([[Y1.matrix, np.zeros((2, 2))], [np.zeros((2, 2)), Y2.matrix]])
    )
    for f in (neg_log(), renyi_f(2.0)):
        vb = cq_f_divergence(blocks, f, FAST)
        vq = optimized_f_divergence(Xfull, Yfull, f, FAST)
        assert vb.value.value == pytest.approx(vq.value.value, abs=1e-6)


# ---- sandwiched vs Petz comparison ----


def test_gap_vanishes_on_equal_states():
    rho = random_density(2, seed=86)
    lhs, rhs = sandwiched_vs_petz_gap(rho, rho, 2.0)
    assert lhs.value == pytest.approx(0.0, abs=1e-10)
    assert rhs.value == pytest.approx(0.0, abs=1e-10)


def test_gap_ordering_random_qubits():
    for seed in range(10):
        X = random_density(2, seed=500 + seed)
        Y = random_density(2, seed=600 + seed)
        lhs, rhs = sandwiched_vs_petz_gap(X, Y, 2.0)
        assert lhs.value >= rhs.value - 1e-9


def test_gap_witness_at_xbar():
    # the fixed-tau evaluation at tau = Xbar reproduces the rhs exactly
    X = random_density(3, seed=87)
    Y = random_density(3, seed=88)
    a = 2.0
    _, rhs = sandwiched_vs_petz_gap(X, Y, a)
    q = optimized_f_at(X, Y, X, renyi_f(a))
    wit = a / (a - 1.0) * math.log(q)
    assert wit == pytest.approx(rhs.value, abs=1e-9)


# ---- structural invariants of the fixed-tau map ----


def test_normalization_restriction():
    # subnormalized tau never beats its normalization for anti-monotone f
    for seed in range(6):
        X = random_density(3, seed=700 + seed)
        Z = random_density(3, seed=800 + seed)
        tau = random_psd(3, seed=900 + seed)
        tau = HermitianOperator(tau.matrix / np.trace(tau.matrix).real * 0.6)
        tau_n = HermitianOperator(tau.matrix / 0.6)
        for f in (neg_log(), renyi_f(2.0)):
            a = optimized_f_at(X, Z, tau, f)
            b = optimized_f_at(X, Z, tau_n, f)
            assert a <= b + 1e-10


def test_midpoint_concavity_in_tau():
    for seed in range(6):
        X = random_density(3, seed=1000 + seed)
        Z = random_density(3, seed=1100 + seed)
        t1 = random_density(3, seed=1200 + seed)
        t2 = random_density(3, seed=1300 + seed)
        mid = HermitianOperator((t1.matrix + t2.matrix) / 2)
        for f in (neg_log(), renyi_f(2.0), renyi_f(0.75)):
            vm = optimized_f_at(X, Z, mid, f)
            v1 = optimized_f_at(X, Z, t1, f)
            v2 = optimized_f_at(X, Z, t2, f)
            assert vm >= (v1 + v2) / 2 - 1e-10


def test_numeric_value_is_lower_bound_of_closed_form():
    # iterates are feasible, so the ascent value never exceeds the supremum
    X = random_density(4, seed=89)
    Y = random_density(4, seed=90)
    res = optimized_f_divergence(X, Y, renyi_f(3.0), FAST)
    want = sandwiched_quasi_entropy(X, Y, 3.0).value
    assert res.value.value <= want + 1e-6
    assert res.value.value >= want - 1e-6
