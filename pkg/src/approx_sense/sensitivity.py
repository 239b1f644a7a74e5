"""Approximation sensitivity: how far predictions move under a weight transform.

The p-sensitivity of a hypothesis is the p-norm average of |f(x) - Af(x)| over
inputs, either in expectation (estimated by Monte Carlo) or over a concrete
sample.  Deviation bounds quantify how fast the empirical version converges to
the true one, uniformly over a class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ApproxOperator, Hypothesis, UnlabelledSample, apply_operator, predictions
from .errors import DeterministicOperatorError, InvalidParameterError, StochasticOperatorError
from .synthetic import SyntheticTask, derived_rng

SENSITIVITY_KINDS = ("empirical", "monte_carlo_true", "analytic_upper", "expected_stochastic")


@dataclass(frozen=True)
class SensitivityEstimate:
    p: float
    value: float
    kind: str
    provenance: str = ""
    standard_error: float | None = None

    def __post_init__(self):
        if self.kind not in SENSITIVITY_KINDS:
            raise InvalidParameterError(f"unknown sensitivity kind {self.kind!r}")
        if self.value < 0:
            raise InvalidParameterError("sensitivity value must be >= 0")

    def to_dict(self) -> dict:
        d = {"p": self.p, "value": self.value, "kind": self.kind, "provenance": self.provenance}
        if self.standard_error is not None:
            d["standard_error"] = self.standard_error
        return d


@dataclass(frozen=True)
class DeviationBound:
    """High-probability bound on sup over the class of |true - empirical| sensitivity.

    ``epsilon_u`` is always the sum of the itemised ``components``.
    """

    epsilon_u: float
    components: dict[str, float]
    delta: float
    C: float
    m: int

    def __post_init__(self):
        total = sum(self.components.values())
        if abs(total - self.epsilon_u) > 1e-12 * max(1.0, abs(total)):
            raise InvalidParameterError("epsilon_u must equal the sum of its components")


def _check_p(p: float) -> float:
    if p < 1:
        raise InvalidParameterError("p must be >= 1")
    return float(p)


def _p_mean(vals: np.ndarray, p: float) -> float:
    return float(np.mean(np.abs(vals) ** p) ** (1.0 / p))


def pointwise_gaps(h: Hypothesis, op: ApproxOperator, inputs: np.ndarray) -> np.ndarray:
    """|f(x) - Af(x)| per input row, for a deterministic operator."""
    if not op.deterministic:
        raise StochasticOperatorError(
            "pointwise gaps of a stochastic operator are undefined; "
            "use expected_sensitivity instead"
        )
    approx = apply_operator(op, h)
    return np.abs(predictions(h, inputs) - predictions(approx, inputs))


def empirical_sensitivity(
    h: Hypothesis,
    op: ApproxOperator,
    sample: UnlabelledSample,
    p: float = 1.0,
) -> SensitivityEstimate:
    """((1/m) sum |f(x) - Af(x)|^p)^(1/p) over the sample."""
    p = _check_p(p)
    gaps = pointwise_gaps(h, op, sample.inputs)
    return SensitivityEstimate(
        p=p, value=_p_mean(gaps, p), kind="empirical", provenance=sample.source_id
    )


def true_sensitivity_mc(
    h: Hypothesis,
    op: ApproxOperator,
    task: SyntheticTask,
    p: float = 1.0,
    n_mc: int = 10_000,
    seed: int = 0,
) -> SensitivityEstimate:
    """Monte Carlo estimate of the expected p-sensitivity over fresh input draws.

    The standard error of the p-th power mean is propagated through the
    1/p root by the delta method.
    """
    p = _check_p(p)
    if n_mc < 1:
        raise InvalidParameterError("n_mc must be >= 1")
    rng = derived_rng(seed, 3)
    inputs = task.draw_inputs(rng, n_mc)
    gaps = pointwise_gaps(h, op, inputs) ** p
    mean_p = float(gaps.mean())
    value = mean_p ** (1.0 / p)
    se_mean = float(gaps.std(ddof=1) / np.sqrt(n_mc)) if n_mc > 1 else 0.0
    se = se_mean / (p * mean_p ** (1.0 - 1.0 / p)) if mean_p > 0 else 0.0
    return SensitivityEstimate(
        p=p,
        value=value,
        kind="monte_carlo_true",
        provenance=f"mc:{seed}:{n_mc}",
        standard_error=se,
    )


def analytic_sensitivity_upper(
    h: Hypothesis,
    op: ApproxOperator,
    input_norm_budget: float,
) -> SensitivityEstimate:
    """Certified over-estimate ||w - Q(w)||_2 * budget of the 1-sensitivity.

    Valid via Cauchy-Schwarz whenever ``input_norm_budget`` upper-bounds the
    average feature norm of the inputs the hypothesis will meet.
    """
    if input_norm_budget < 0:
        raise InvalidParameterError("input_norm_budget must be >= 0")
    if not op.deterministic:
        raise StochasticOperatorError("analytic upper bound needs a deterministic operator")
    approx = apply_operator(op, h)
    residual = float(np.linalg.norm(h.weights - approx.weights))
    return SensitivityEstimate(
        p=1.0,
        value=residual * input_norm_budget,
        kind="analytic_upper",
        provenance=f"budget:{input_norm_budget!r}",
    )


def expected_sensitivity(
    h: Hypothesis,
    op: ApproxOperator,
    sample: UnlabelledSample,
    p: float = 1.0,
    n_omega: int = 100,
    seed: int = 0,
) -> SensitivityEstimate:
    """Mean empirical p-sensitivity over n_omega independent operator draws."""
    p = _check_p(p)
    if op.deterministic:
        raise DeterministicOperatorError(
            "operator is deterministic; use empirical_sensitivity instead"
        )
    if n_omega < 1:
        raise InvalidParameterError("n_omega must be >= 1")
    base = predictions(h, sample.inputs)
    vals = np.empty(n_omega)
    for i in range(n_omega):
        drawn = apply_operator(op, h, noise_seed=derived_rng(seed, 4, i))
        vals[i] = _p_mean(base - predictions(drawn, sample.inputs), p)
    se = float(vals.std(ddof=1) / np.sqrt(n_omega)) if n_omega > 1 else 0.0
    return SensitivityEstimate(
        p=p,
        value=float(vals.mean()),
        kind="expected_stochastic",
        provenance=f"omega:{seed}:{n_omega}",
        standard_error=se,
    )


# ---------------------------------------------------------------------------
# Deviation bounds
# ---------------------------------------------------------------------------


def sensitivity_deviation_bound(
    rad_of_sensitivity_class: float,
    C: float,
    m: int,
    delta: float,
) -> DeviationBound:
    """Uniform bound 2 R + 3 C sqrt(ln(2/delta) / (2m)) on |true - empirical|."""
    if C <= 0:
        raise InvalidParameterError("C must be positive")
    if not 0 < delta < 1:
        raise InvalidParameterError("delta must lie in (0, 1)")
    if m < 1:
        raise InvalidParameterError("m must be >= 1")
    if rad_of_sensitivity_class < 0:
        raise InvalidParameterError("Rademacher term must be >= 0")
    rad_term = 2.0 * rad_of_sensitivity_class
    conf_term = 3.0 * C * np.sqrt(np.log(2.0 / delta) / (2.0 * m))
    return DeviationBound(
        epsilon_u=rad_term + conf_term,
        components={"rademacher_term": rad_term, "confidence_term": float(conf_term)},
        delta=delta,
        C=C,
        m=m,
    )


def fast_rate_deviation_bound(
    rad: float,
    t: float,
    C: float,
    m: int,
    delta: float,
) -> DeviationBound:
    """Three-term bound 6 R + t sqrt(2 ln(1/delta) / m) + 6 C ln(1/delta) / m.

    ``t`` must uniformly bound the 2-sensitivity over the class; the variance
    of each sensitivity gap is then at most t^2, which buys the fast 1/m tail.
    """
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    if C <= 0:
        raise InvalidParameterError("C must be positive")
    if not 0 < delta < 1:
        raise InvalidParameterError("delta must lie in (0, 1)")
    if m < 1:
        raise InvalidParameterError("m must be >= 1")
    if rad < 0:
        raise InvalidParameterError("Rademacher term must be >= 0")
    rad_term = 6.0 * rad
    variance_term = float(t * np.sqrt(2.0 * np.log(1.0 / delta) / m))
    fast_term = float(6.0 * C * np.log(1.0 / delta) / m)
    return DeviationBound(
        epsilon_u=rad_term + variance_term + fast_term,
        components={
            "rademacher_term": rad_term,
            "variance_term": variance_term,
            "fast_rate_term": fast_term,
        },
        delta=delta,
        C=C,
        m=m,
    )


def uniform_sensitivity_constant(
    hypotheses: list[Hypothesis],
    op: ApproxOperator,
    inputs: np.ndarray,
) -> float:
    """Realise the uniform gap bound: sup ||w - Q(w)||_2 times max feature norm.

    By Cauchy-Schwarz every pointwise gap |f(x) - Af(x)| over the given
    hypotheses and inputs is at most this constant.
    """
    if not hypotheses:
        raise InvalidParameterError("need at least one hypothesis")
    if not op.deterministic:
        raise StochasticOperatorError("uniform constant needs a deterministic operator")
    sup_residual = 0.0
    for h in hypotheses:
        approx = apply_operator(op, h)
        sup_residual = max(sup_residual, float(np.linalg.norm(h.weights - approx.weights)))
    feats = hypotheses[0].feature_map.transform(np.asarray(inputs, dtype=float))
    max_feat = float(np.max(np.linalg.norm(feats, axis=1)))
    return sup_residual * max_feat


# ---------------------------------------------------------------------------
# Stochastic variance condition
# ---------------------------------------------------------------------------

CAPACITY_FUNCTIONS = ("constant_one", "weight_norm")


@dataclass(frozen=True)
class VarianceConditionReport:
    """Per-hypothesis check of E_omega ||A f - f||^2_(L2 empirical) <= (alpha C(f))^2."""

    lhs: float
    lhs_standard_error: float
    capacity: float
    threshold: float
    holds: bool
    n_omega: int = field(default=0)


def variance_condition_check(
    op: ApproxOperator,
    hypotheses: list[Hypothesis],
    sample: UnlabelledSample,
    alpha: float,
    capacity_fn: str = "constant_one",
    n_omega: int = 200,
    seed: int = 0,
) -> list[VarianceConditionReport]:
    """Monte Carlo check of the stochastic-operator variance condition."""
    if capacity_fn not in CAPACITY_FUNCTIONS:
        raise InvalidParameterError(f"unknown capacity function {capacity_fn!r}")
    if op.deterministic:
        raise DeterministicOperatorError("variance condition applies to stochastic operators")
    if alpha < 0:
        raise InvalidParameterError("alpha must be >= 0")
    if n_omega < 1:
        raise InvalidParameterError("n_omega must be >= 1")
    reports = []
    for j, h in enumerate(hypotheses):
        base = predictions(h, sample.inputs)
        sq = np.empty(n_omega)
        for i in range(n_omega):
            drawn = apply_operator(op, h, noise_seed=derived_rng(seed, 5, j, i))
            sq[i] = float(np.mean((predictions(drawn, sample.inputs) - base) ** 2))
        lhs = float(sq.mean())
        se = float(sq.std(ddof=1) / np.sqrt(n_omega)) if n_omega > 1 else 0.0
        cap = 1.0 if capacity_fn == "constant_one" else float(np.linalg.norm(h.weights))
        threshold = (alpha * cap) ** 2
        reports.append(
            VarianceConditionReport(
                lhs=lhs,
                lhs_standard_error=se,
                capacity=cap,
                threshold=threshold,
                holds=lhs <= threshold,
                n_omega=n_omega,
            )
        )
    return reports
