"""Sensitivity estimators, deviation bounds, and the stochastic variance check."""

from __future__ import annotations

import math

import numpy as np
import pytest

from approx_sense import (
    DeterministicOperatorError,
    InvalidParameterError,
    StochasticOperatorError,
    StochasticRounder,
    SyntheticTask,
    UniformBox,
    UniformQuantizer,
    UnlabelledSample,
    analytic_sensitivity_upper,
    empirical_sensitivity,
    expected_sensitivity,
    fast_rate_deviation_bound,
    linear_hypothesis,
    sensitivity_deviation_bound,
    true_sensitivity_mc,
    uniform_sensitivity_constant,
    variance_condition_check,
)
from approx_sense.validation import suite_lemma1

QUANT = UniformQuantizer(step=0.5, clamp=1.0)


def _task(weights, law=None, seed=0):
    return SyntheticTask(
        teacher=linear_hypothesis(weights),
        input_law=law or UniformBox(halfwidth=1.0),
        label_noise_sd=0.0,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# empirical sensitivity
# ---------------------------------------------------------------------------


def test_empirical_sensitivity_on_grid_is_zero():
    h = linear_hypothesis([0.5, -1.0])
    sample = UnlabelledSample(inputs=np.random.default_rng(0).normal(size=(20, 2)))
    for p in (1.0, 2.0, 4.0):
        assert empirical_sensitivity(h, QUANT, sample, p).value == 0.0


def test_empirical_sensitivity_arithmetic():
    # w = 0.6 quantises to 0.5; gaps on S = {1, -2} are 0.1 and 0.2
    h = linear_hypothesis([0.6])
    sample = UnlabelledSample(inputs=[[1.0], [-2.0]])
    assert empirical_sensitivity(h, QUANT, sample, 1).value == pytest.approx(0.15, abs=1e-15)
    assert empirical_sensitivity(h, QUANT, sample, 2).value == pytest.approx(
        math.sqrt(0.025), abs=1e-15
    )


def test_empirical_sensitivity_rejects_stochastic_op():
    h = linear_hypothesis([0.3])
    sample = UnlabelledSample(inputs=[[1.0]])
    with pytest.raises(StochasticOperatorError, match="expected_sensitivity"):
        empirical_sensitivity(h, StochasticRounder(step=1.0, clamp=1.0), sample)


def test_p_must_be_at_least_one():
    h = linear_hypothesis([0.6])
    sample = UnlabelledSample(inputs=[[1.0]])
    with pytest.raises(InvalidParameterError):
        empirical_sensitivity(h, QUANT, sample, p=0.5)


def test_jensen_monotonicity_in_p():
    rng = np.random.default_rng(3)
    for _ in range(50):
        h = linear_hypothesis(rng.uniform(-1, 1, size=3))
        sample = UnlabelledSample(inputs=rng.normal(size=(15, 3)))
        op = UniformQuantizer(step=float(rng.uniform(0.1, 0.8)), clamp=1.0)
        v1 = empirical_sensitivity(h, op, sample, 1).value
        v2 = empirical_sensitivity(h, op, sample, 2).value
        v4 = empirical_sensitivity(h, op, sample, 4).value
        assert v1 <= v2 + 1e-12 and v2 <= v4 + 1e-12


# ---------------------------------------------------------------------------
# Monte Carlo true sensitivity
# ---------------------------------------------------------------------------


def test_true_sensitivity_zero_on_grid():
    est = true_sensitivity_mc(linear_hypothesis([0.5]), QUANT, _task([0.5]), 1, 1000, 1)
    assert est.value == 0.0


def test_true_sensitivity_uniform_integrals():
    # residual r = 0.1 on U[0, 1]-supported inputs via the shifted box law:
    # use U[-1, 1]: E|r x| = r/2 and sqrt(E (r x)^2) = r / sqrt(3)
    h = linear_hypothesis([0.6])
    task = _task([0.0])
    est1 = true_sensitivity_mc(h, QUANT, task, 1, 100_000, 7)
    assert abs(est1.value - 0.05) <= 3.0 * est1.standard_error
    est2 = true_sensitivity_mc(h, QUANT, task, 2, 100_000, 7)
    assert abs(est2.value - 0.1 / math.sqrt(3)) <= 3.0 * est2.standard_error


def test_true_sensitivity_deterministic_per_seed():
    h = linear_hypothesis([0.6, 0.2])
    task = _task([0.0, 0.0])
    a = true_sensitivity_mc(h, QUANT, task, 2, 500, 5)
    b = true_sensitivity_mc(h, QUANT, task, 2, 500, 5)
    assert a == b


# ---------------------------------------------------------------------------
# deviation bounds
# ---------------------------------------------------------------------------


def test_deviation_bound_formula():
    bound = sensitivity_deviation_bound(0.0, 1.0, 50, 0.05)
    assert bound.epsilon_u == pytest.approx(3.0 * math.sqrt(math.log(40.0) / 100.0), rel=1e-12)
    assert bound.components["rademacher_term"] == 0.0


def test_deviation_bound_large_m_limit():
    bound = sensitivity_deviation_bound(0.1, 1.0, 10**12, 0.05)
    assert bound.epsilon_u == pytest.approx(0.2, abs=1e-5)


def test_deviation_bound_rejects_bad_delta():
    with pytest.raises(InvalidParameterError):
        sensitivity_deviation_bound(0.0, 1.0, 50, 2.0)


def test_fast_rate_formula():
    bound = fast_rate_deviation_bound(0.05, 0.1, 1.0, 100, 0.1)
    expected = (
        0.3 + 0.1 * math.sqrt(2.0 * math.log(10.0) / 100.0) + 6.0 * math.log(10.0) / 100.0
    )
    assert bound.epsilon_u == pytest.approx(expected, rel=1e-12)
    assert set(bound.components) == {"rademacher_term", "variance_term", "fast_rate_term"}


def test_fast_rate_t_zero_drops_variance_term():
    bound = fast_rate_deviation_bound(0.05, 0.0, 1.0, 100, 0.1)
    assert bound.components["variance_term"] == 0.0
    assert bound.epsilon_u == pytest.approx(0.3 + 6.0 * math.log(10.0) / 100.0, rel=1e-12)


def test_fast_rate_decays_like_one_over_m():
    # with rad = 0 and t = 0 the bound is exactly 6 C ln(1/delta) / m
    b1 = fast_rate_deviation_bound(0.0, 0.0, 1.0, 100, 0.1).epsilon_u
    b2 = fast_rate_deviation_bound(0.0, 0.0, 1.0, 200, 0.1).epsilon_u
    assert b1 == pytest.approx(2.0 * b2, rel=1e-12)


# ---------------------------------------------------------------------------
# analytic upper bound
# ---------------------------------------------------------------------------


def test_analytic_upper_zero_on_grid():
    assert analytic_sensitivity_upper(linear_hypothesis([0.5]), QUANT, 2.0).value == 0.0


def test_analytic_upper_product():
    # ||w - Q(w)||_2 = 0.5 with w = (0.25, 0.25, 0.25, 0.25) under step 0.5
    h = linear_hypothesis([0.25, 0.25, 0.25, 0.25])
    est = analytic_sensitivity_upper(h, QUANT, 2.0)
    assert est.value == pytest.approx(1.0, rel=1e-12)


def test_analytic_upper_dominates_empirical():
    # unit-ball inputs: average feature norm is at most 1
    rng = np.random.default_rng(11)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        h = linear_hypothesis(rng.uniform(-1, 1, size=d))
        raw = rng.normal(size=(20, d))
        inputs = raw / np.maximum(1.0, np.linalg.norm(raw, axis=1))[:, None]
        sample = UnlabelledSample(inputs=inputs)
        op = UniformQuantizer(step=float(rng.uniform(0.1, 0.9)), clamp=1.0)
        upper = analytic_sensitivity_upper(h, op, 1.0).value
        assert empirical_sensitivity(h, op, sample, 1).value <= upper + 1e-12


def test_uniform_boundedness_constant():
    # every pointwise gap is within the realised uniform constant
    rng = np.random.default_rng(13)
    hypotheses = [linear_hypothesis(rng.uniform(-1, 1, size=2)) for _ in range(40)]
    inputs = rng.normal(size=(30, 2))
    C = uniform_sensitivity_constant(hypotheses, QUANT, inputs)
    from approx_sense.sensitivity import pointwise_gaps

    for h in hypotheses:
        assert np.all(pointwise_gaps(h, QUANT, inputs) <= C + 1e-12)


# ---------------------------------------------------------------------------
# stochastic operators
# ---------------------------------------------------------------------------


def test_expected_sensitivity_two_outcome():
    # at w = 0.3, step 1, single input x = 1:
    # gap is 0.3 with prob 0.7 and 0.7 with prob 0.3, so the mean is 0.42
    op = StochasticRounder(step=1.0, clamp=1.0)
    h = linear_hypothesis([0.3])
    sample = UnlabelledSample(inputs=[[1.0]])
    est = expected_sensitivity(h, op, sample, p=1, n_omega=4000, seed=2)
    assert abs(est.value - 0.42) <= 3.0 * est.standard_error


def test_expected_sensitivity_fine_grid_vanishes():
    op = StochasticRounder(step=1e-6, clamp=1.0)
    h = linear_hypothesis([0.3])
    sample = UnlabelledSample(inputs=[[1.0]])
    est = expected_sensitivity(h, op, sample, p=1, n_omega=50, seed=3)
    assert est.value <= 1e-6


def test_expected_sensitivity_deterministic_per_seed():
    op = StochasticRounder(step=0.5, clamp=1.0)
    h = linear_hypothesis([0.3, -0.2])
    sample = UnlabelledSample(inputs=np.random.default_rng(1).normal(size=(10, 2)))
    a = expected_sensitivity(h, op, sample, 1, 100, 9)
    assert a == expected_sensitivity(h, op, sample, 1, 100, 9)


def test_expected_sensitivity_rejects_deterministic_op():
    with pytest.raises(DeterministicOperatorError):
        expected_sensitivity(
            linear_hypothesis([0.3]), QUANT, UnlabelledSample(inputs=[[1.0]]), 1, 10, 0
        )


def test_variance_condition_two_outcome():
    # E |A f(1) - f(1)|^2 = 0.3 * 0.49 + 0.7 * 0.09 = 0.21
    op = StochasticRounder(step=1.0, clamp=1.0)
    h = linear_hypothesis([0.3])
    sample = UnlabelledSample(inputs=[[1.0]])
    (report,) = variance_condition_check(op, [h], sample, alpha=0.5, n_omega=4000, seed=4)
    assert abs(report.lhs - 0.21) <= 3.0 * report.lhs_standard_error
    assert report.holds == (report.lhs <= 0.25)


def test_variance_condition_on_grid_holds_for_any_alpha():
    op = StochasticRounder(step=0.5, clamp=1.0)
    h = linear_hypothesis([0.5])  # already on the grid: no randomness survives
    sample = UnlabelledSample(inputs=[[1.0], [2.0]])
    (report,) = variance_condition_check(op, [h], sample, alpha=1e-9, n_omega=50, seed=5)
    assert report.lhs == 0.0 and report.holds


def test_variance_condition_alpha_zero_fails_with_nonzero_lhs():
    op = StochasticRounder(step=1.0, clamp=1.0)
    h = linear_hypothesis([0.3])
    sample = UnlabelledSample(inputs=[[1.0]])
    (report,) = variance_condition_check(op, [h], sample, alpha=0.0, n_omega=200, seed=6)
    assert report.lhs > 0 and not report.holds


def test_variance_condition_weight_norm_capacity():
    op = StochasticRounder(step=1.0, clamp=1.0)
    h = linear_hypothesis([0.3, 0.4])
    sample = UnlabelledSample(inputs=[[1.0, 0.0]])
    (report,) = variance_condition_check(
        op, [h], sample, alpha=2.0, capacity_fn="weight_norm", n_omega=50, seed=7
    )
    assert report.capacity == pytest.approx(0.5)
    assert report.threshold == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# coverage (reduced-trial variants of the acceptance suites)
# ---------------------------------------------------------------------------


def test_deviation_coverage_small():
    report = suite_lemma1(trials=60, seed=3)
    assert report.coverage >= report.floor
    # fast-rate bound covers the same deviations at the same floor
    fast_violations = dict(report.stats)["fast_rate_violations"]
    assert 1.0 - fast_violations / report.trials >= report.floor
