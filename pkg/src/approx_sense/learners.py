"""Learning algorithms over a searchable weight domain.

All objectives involve a quantised weight transform, so they are piecewise
constant in the weights; search is therefore exhaustive on small grids (the
oracle mode used by the tests) and seeded random sampling or coordinate
descent in higher dimension.  Ties always resolve to the lowest enumeration
index, which keeps every learner deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ApproxOperator,
    FeatureMap,
    Hypothesis,
    IdentityMap,
    LabelledSample,
    LossSpec,
    UnlabelledSample,
    apply_operator,
    loss_values,
)
from .errors import InfeasibleThresholdError, InvalidParameterError
from .radgeom import RadEstimate, mc_rademacher_rows

GRID_POINT_CAP = 1_000_000


# ---------------------------------------------------------------------------
# Search domain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchDomain:
    """Box [-halfwidth, halfwidth]^dim with a search mode.

    grid                exhaustive over a regular lattice (the oracle mode)
    random              seeded uniform draws from the box
    coordinate_descent  seeded random starts refined by per-axis sweeps
    """

    dim: int
    halfwidth: float
    mode: str = "grid"
    points_per_axis: int = 11
    n_samples: int = 200
    restarts: int = 4
    iterations: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParameterError("dim must be >= 1")
        if self.halfwidth <= 0:
            raise InvalidParameterError("halfwidth must be positive")
        if self.mode not in ("grid", "random", "coordinate_descent"):
            raise InvalidParameterError(f"unknown search mode {self.mode!r}")
        if self.points_per_axis < 2:
            raise InvalidParameterError("points_per_axis must be >= 2")
        if self.n_samples < 1 or self.restarts < 1 or self.iterations < 1:
            raise InvalidParameterError("search budget parameters must be >= 1")

    @staticmethod
    def default_for(dim: int, halfwidth: float, seed: int = 0) -> "SearchDomain":
        """Grid oracle up to three dimensions, random starts + coordinate
        descent above that."""
        if dim <= 3:
            return SearchDomain(dim=dim, halfwidth=halfwidth, mode="grid", seed=seed)
        return SearchDomain(
            dim=dim, halfwidth=halfwidth, mode="coordinate_descent", seed=seed
        )

    def axis_values(self) -> np.ndarray:
        return np.linspace(-self.halfwidth, self.halfwidth, self.points_per_axis)

    def candidate_matrix(self) -> np.ndarray:
        """Enumerated candidates for the grid and random modes."""
        if self.mode == "grid":
            if self.points_per_axis**self.dim > GRID_POINT_CAP:
                raise InvalidParameterError(
                    f"grid would hold {self.points_per_axis}^{self.dim} points; "
                    f"cap is {GRID_POINT_CAP}"
                )
            axes = [self.axis_values()] * self.dim
            mesh = np.meshgrid(*axes, indexing="ij")
            return np.stack([m.ravel() for m in mesh], axis=1)
        if self.mode == "random":
            rng = np.random.default_rng(np.random.SeedSequence(entropy=self.seed, spawn_key=(9,)))
            return rng.uniform(-self.halfwidth, self.halfwidth, size=(self.n_samples, self.dim))
        raise InvalidParameterError("coordinate_descent does not enumerate a candidate matrix")


@dataclass(frozen=True)
class SearchResult:
    weights: np.ndarray
    value: float
    trace: tuple[float, ...]
    n_evaluated: int


def _search(objective, domain: SearchDomain, feasibility=None, diagnostic=None) -> SearchResult:
    if domain.mode in ("grid", "random"):
        return _search_enumerated(objective, domain, feasibility, diagnostic)
    return _search_coordinate_descent(objective, domain, feasibility, diagnostic)


def _raise_infeasible(min_diag: float) -> None:
    raise InfeasibleThresholdError(
        "no feasible point in the search domain",
        min_sensitivity=None if math.isinf(min_diag) else min_diag,
    )


def _search_enumerated(objective, domain, feasibility, diagnostic) -> SearchResult:
    candidates = domain.candidate_matrix()
    best_w = None
    best_val = math.inf
    trace: list[float] = []
    min_diag = math.inf
    for w in candidates:
        if feasibility is not None:
            if diagnostic is not None:
                min_diag = min(min_diag, diagnostic(w))
            if not feasibility(w):
                continue
        val = float(objective(w))
        if val < best_val:
            best_val = val
            best_w = w
            trace.append(val)
    if best_w is None:
        _raise_infeasible(min_diag)
    return SearchResult(
        weights=best_w.copy(), value=best_val, trace=tuple(trace), n_evaluated=len(candidates)
    )


def _search_coordinate_descent(objective, domain, feasibility, diagnostic) -> SearchResult:
    axis = domain.axis_values()
    rng = np.random.default_rng(np.random.SeedSequence(entropy=domain.seed, spawn_key=(8,)))
    starts = rng.uniform(-domain.halfwidth, domain.halfwidth, size=(domain.restarts, domain.dim))
    best_w = None
    best_val = math.inf
    trace: list[float] = []
    min_diag = math.inf
    evaluated = 0

    def try_point(w: np.ndarray) -> float:
        nonlocal min_diag, evaluated
        evaluated += 1
        if feasibility is not None:
            if diagnostic is not None:
                min_diag = min(min_diag, diagnostic(w))
            if not feasibility(w):
                return math.inf
        return float(objective(w))

    for start in starts:
        w = axis[np.argmin(np.abs(axis[None, :] - start[:, None]), axis=1)]
        val = try_point(w)
        for _ in range(domain.iterations):
            improved = False
            for j in range(domain.dim):
                for a in axis:
                    if a == w[j]:
                        continue
                    cand = w.copy()
                    cand[j] = a
                    v = try_point(cand)
                    if v < val:
                        val = v
                        w = cand
                        improved = True
            if not improved:
                break
        if val < best_val:
            best_val = val
            best_w = w
            trace.append(val)
    if best_w is None or math.isinf(best_val):
        _raise_infeasible(min_diag)
    return SearchResult(
        weights=best_w.copy(), value=best_val, trace=tuple(trace), n_evaluated=evaluated
    )


def optimize(objective, domain: SearchDomain, feasibility=None) -> np.ndarray:
    """Minimise a weight objective over the domain; returns the best weights.

    Grid mode returns the exact lattice minimiser under the feasibility
    predicate, with ties broken toward the lower enumeration index.
    """
    return _search(objective, domain, feasibility).weights


# ---------------------------------------------------------------------------
# Learner scaffolding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdSchedule:
    """Increasing sensitivity thresholds with prior weights summing to <= 1."""

    thresholds: tuple[float, ...]
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        ts = tuple(float(t) for t in self.thresholds)
        if not ts:
            raise InvalidParameterError("schedule needs at least one threshold")
        if any(t <= 0 for t in ts):
            raise InvalidParameterError("thresholds must be positive")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidParameterError("thresholds must be strictly increasing")
        ws = tuple(float(w) for w in self.weights)
        if not ws:
            ws = tuple(2.0 ** -(k + 1) for k in range(len(ts)))
        if len(ws) != len(ts):
            raise InvalidParameterError("weights must match thresholds in length")
        if any(w <= 0 for w in ws) or sum(ws) > 1.0 + 1e-12:
            raise InvalidParameterError("weights must be positive and sum to at most 1")
        object.__setattr__(self, "thresholds", ts)
        object.__setattr__(self, "weights", ws)

    def __len__(self) -> int:
        return len(self.thresholds)


@dataclass
class LearnerOutput:
    """What a learner returns: the minimiser, its approximation, and the trail."""

    hypothesis: Hypothesis
    approx_hypothesis: Hypothesis
    objective_value: float
    objective_trace: tuple[float, ...]
    feasible: bool = True
    chosen_t: float | None = None
    chosen_k: int | None = None
    lam: float | None = None
    sensitivity_kind: str | None = None
    boundary_hits: int = 0
    clamped: bool = False
    per_lambda: list[dict] | None = None


def _resolve_feature_map(feature_map: FeatureMap | None, input_dim: int) -> FeatureMap:
    return feature_map if feature_map is not None else IdentityMap(input_dim=input_dim)


class _Workspace:
    """Precomputed feature matrices plus memoised per-weight statistics."""

    def __init__(
        self,
        op: ApproxOperator,
        loss: LossSpec,
        feature_map: FeatureMap,
        labelled: LabelledSample | None,
        unlabelled: UnlabelledSample | None,
        p: float,
    ):
        if not op.deterministic:
            raise InvalidParameterError("learners require a deterministic operator")
        if p < 1:
            raise InvalidParameterError("p must be >= 1")
        self.op = op
        self.loss = loss
        self.feature_map = feature_map
        self.p = p
        self.lab_feats = None if labelled is None else feature_map.transform(labelled.inputs)
        self.targets = None if labelled is None else labelled.targets
        self.unlab_feats = None if unlabelled is None else feature_map.transform(unlabelled.inputs)
        self._dhat_cache: dict[bytes, float] = {}

    def emp_error(self, w: np.ndarray) -> float:
        return float(loss_values(self.loss, self.lab_feats @ w, self.targets).mean())

    def approx_emp_error(self, w: np.ndarray) -> float:
        return self.emp_error(self.op.transform_weights(w))

    def dhat(self, w: np.ndarray) -> float:
        # matches empirical_sensitivity bit for bit (same matmul shapes)
        key = w.tobytes()
        cached = self._dhat_cache.get(key)
        if cached is None:
            qw = self.op.transform_weights(w)
            gaps = np.abs(self.unlab_feats @ w - self.unlab_feats @ qw)
            cached = float(np.mean(gaps**self.p) ** (1.0 / self.p))
            self._dhat_cache[key] = cached
        return cached

    def output(self, result: SearchResult, **extras) -> LearnerOutput:
        h = Hypothesis(weights=result.weights, feature_map=self.feature_map)
        return LearnerOutput(
            hypothesis=h,
            approx_hypothesis=apply_operator(self.op, h),
            objective_value=result.value,
            objective_trace=result.trace,
            **extras,
        )


# ---------------------------------------------------------------------------
# Learners
# ---------------------------------------------------------------------------


def constrained_erm(
    labelled: LabelledSample,
    unlabelled: UnlabelledSample,
    op: ApproxOperator,
    t: float,
    p: float,
    loss: LossSpec,
    domain: SearchDomain,
    feature_map: FeatureMap | None = None,
) -> LearnerOutput:
    """Minimise the empirical error of the approximated predictor subject to
    the empirical sensitivity staying strictly below ``t``.

    Raises InfeasibleThresholdError (carrying the smallest achievable
    sensitivity) when no candidate qualifies.
    """
    if t <= 0:
        raise InvalidParameterError("t must be positive")
    fm = _resolve_feature_map(feature_map, labelled.dim)
    ws = _Workspace(op, loss, fm, labelled, unlabelled, p)
    result = _search(
        ws.approx_emp_error,
        domain,
        feasibility=lambda w: ws.dhat(w) < t,
        diagnostic=ws.dhat,
    )
    return ws.output(result, chosen_t=t)


def srm_learner(
    labelled: LabelledSample,
    unlabelled: UnlabelledSample,
    op: ApproxOperator,
    schedule: ThresholdSchedule,
    epsilon_u: float,
    rad_estimator,
    loss: LossSpec,
    domain: SearchDomain,
    p: float = 1.0,
    feature_map: FeatureMap | None = None,
) -> LearnerOutput:
    """Structural risk minimisation over the threshold schedule.

    Each candidate f is charged the penalty of the smallest threshold index
    k with empirical sensitivity <= t_k + epsilon_u:

        emp_err(f) + 2 rho rad(t_k + eps_u) + 3 sqrt(ln(1 / w_k) / (2m)).

    Candidates above the last threshold are clamped to the last index so the
    learner stays total; ``rad_estimator`` maps a threshold to a RadEstimate
    for the restricted class.
    """
    if epsilon_u < 0:
        raise InvalidParameterError("epsilon_u must be >= 0")
    fm = _resolve_feature_map(feature_map, labelled.dim)
    ws = _Workspace(op, loss, fm, labelled, unlabelled, p)
    m = labelled.m
    rho = loss.lipschitz
    penalties = []
    for t_k, w_k in zip(schedule.thresholds, schedule.weights):
        rad = rad_estimator(t_k + epsilon_u)
        rad_value = rad.value if isinstance(rad, RadEstimate) else float(rad)
        penalties.append(
            2.0 * rho * rad_value + 3.0 * math.sqrt(math.log(1.0 / w_k) / (2.0 * m))
        )

    stats = {"boundary_hits": 0, "clamped": 0}

    def khat(w: np.ndarray) -> int:
        d = ws.dhat(w)
        for k, t_k in enumerate(schedule.thresholds):
            if d <= t_k + epsilon_u:
                if d == t_k + epsilon_u:
                    stats["boundary_hits"] += 1
                return k
        stats["clamped"] += 1
        return len(schedule) - 1

    def objective(w: np.ndarray) -> float:
        return ws.emp_error(w) + penalties[khat(w)]

    result = _search(objective, domain)
    chosen = khat(result.weights)
    return ws.output(
        result,
        chosen_k=chosen + 1,
        chosen_t=schedule.thresholds[chosen],
        boundary_hits=stats["boundary_hits"],
        clamped=stats["clamped"] > 0,
    )


def sensitivity_regularized_erm(
    labelled: LabelledSample,
    op: ApproxOperator,
    sensitivity_fn,
    rho: float,
    loss: LossSpec,
    domain: SearchDomain,
    feature_map: FeatureMap | None = None,
    sensitivity_label: str | None = None,
) -> LearnerOutput:
    """Minimise emp_err(Af) + rho * sensitivity_fn(f).

    ``sensitivity_fn`` maps a Hypothesis to a sensitivity value: the true
    (Monte Carlo) sensitivity, the empirical one, or an analytic upper bound.
    """
    if rho < 0:
        raise InvalidParameterError("rho must be >= 0")
    fm = _resolve_feature_map(feature_map, labelled.dim)
    ws = _Workspace(op, loss, fm, labelled, None, 1.0)

    def objective(w: np.ndarray) -> float:
        h = Hypothesis(weights=w, feature_map=fm)
        return ws.approx_emp_error(w) + rho * float(sensitivity_fn(h))

    result = _search(objective, domain)
    label = sensitivity_label or getattr(sensitivity_fn, "__name__", "custom")
    return ws.output(result, sensitivity_kind=label)


def lambda_erm(
    labelled: LabelledSample,
    unlabelled: UnlabelledSample,
    op: ApproxOperator,
    lam: float,
    p: float,
    loss: LossSpec,
    domain: SearchDomain,
    feature_map: FeatureMap | None = None,
) -> LearnerOutput:
    """Minimise emp_err(Af) + lambda * empirical sensitivity of f."""
    if lam < 0:
        raise InvalidParameterError("lambda must be >= 0")
    fm = _resolve_feature_map(feature_map, labelled.dim)
    ws = _Workspace(op, loss, fm, labelled, unlabelled, p)
    result = _search(lambda w: ws.approx_emp_error(w) + lam * ws.dhat(w), domain)
    return ws.output(result, lam=lam)


def analytic_lambda_erm(
    labelled: LabelledSample,
    op: ApproxOperator,
    lam: float,
    overline_fn,
    loss: LossSpec,
    domain: SearchDomain,
    feature_map: FeatureMap | None = None,
) -> LearnerOutput:
    """Minimise emp_err(Af) + lambda * analytic sensitivity upper bound.

    Needs no unlabelled data: ``overline_fn`` maps a Hypothesis to its
    certified sensitivity over-estimate.
    """
    if lam < 0:
        raise InvalidParameterError("lambda must be >= 0")
    fm = _resolve_feature_map(feature_map, labelled.dim)
    ws = _Workspace(op, loss, fm, labelled, None, 1.0)

    def objective(w: np.ndarray) -> float:
        h = Hypothesis(weights=w, feature_map=fm)
        return ws.approx_emp_error(w) + lam * float(overline_fn(h))

    result = _search(objective, domain)
    return ws.output(result, lam=lam, sensitivity_kind="analytic_upper")


def lambda_grid_srm(
    labelled: LabelledSample,
    unlabelled: UnlabelledSample,
    op: ApproxOperator,
    lambdas,
    weights,
    p: float,
    loss: LossSpec,
    domain: SearchDomain,
    feature_map: FeatureMap | None = None,
) -> LearnerOutput:
    """Run the lambda-regularised learner per candidate value and keep the one
    minimising emp_err(A f) + 3 sqrt(ln(1 / w_k) / (2m)).

    The per-candidate table is attached to the returned output.
    """
    lambdas = [float(v) for v in lambdas]
    weights = [float(v) for v in weights]
    if not lambdas:
        raise InvalidParameterError("need at least one lambda")
    if len(weights) != len(lambdas):
        raise InvalidParameterError("weights must match lambdas in length")
    if any(w <= 0 for w in weights) or sum(weights) > 1.0 + 1e-12:
        raise InvalidParameterError("weights must be positive and sum to at most 1")
    fm = _resolve_feature_map(feature_map, labelled.dim)
    ws = _Workspace(op, loss, fm, labelled, unlabelled, p)
    m = labelled.m

    table = []
    outputs = []
    for lam, w_k in zip(lambdas, weights):
        out = lambda_erm(labelled, unlabelled, op, lam, p, loss, domain, feature_map=fm)
        emp = ws.approx_emp_error(np.asarray(out.hypothesis.weights))
        penalty = 3.0 * math.sqrt(math.log(1.0 / w_k) / (2.0 * m))
        table.append(
            {
                "lambda": lam,
                "empirical_error": emp,
                "penalty": penalty,
                "score": emp + penalty,
            }
        )
        outputs.append(out)
    best_idx = min(range(len(table)), key=lambda i: table[i]["score"])
    chosen = outputs[best_idx]
    chosen.per_lambda = table
    chosen.lam = lambdas[best_idx]
    return chosen


def make_restricted_rad_estimator(
    domain: SearchDomain,
    labelled: LabelledSample,
    unlabelled: UnlabelledSample,
    op: ApproxOperator,
    p: float = 1.0,
    n_sigma: int = 512,
    seed: int = 0,
    feature_map: FeatureMap | None = None,
):
    """Default SRM penalty estimator.

    Realises the sensitivity-restricted class as the subset of the search
    grid whose empirical sensitivity (on the unlabelled sample) is at most
    the threshold, and Monte Carlo estimates the Rademacher complexity of its
    prediction rows on the labelled inputs.
    """
    fm = _resolve_feature_map(feature_map, labelled.dim)
    candidates = domain.candidate_matrix()
    lab_feats = fm.transform(labelled.inputs)
    unlab_feats = fm.transform(unlabelled.inputs)
    residuals = candidates - np.apply_along_axis(op.transform_weights, 1, candidates)
    gaps = np.abs(unlab_feats @ residuals.T)
    dhats = (np.mean(gaps**p, axis=0)) ** (1.0 / p)
    pred_rows = (lab_feats @ candidates.T).T

    def estimator(threshold: float) -> RadEstimate:
        mask = dhats <= threshold
        if not mask.any():
            return RadEstimate(
                value=0.0,
                method="monte_carlo",
                m=labelled.m,
                standard_error=0.0,
                n_sigma=n_sigma,
                seed=seed,
                note="restricted class empty at this threshold",
            )
        value, se = mc_rademacher_rows(pred_rows[mask], n_sigma, seed)
        return RadEstimate(
            value=value,
            method="monte_carlo",
            m=labelled.m,
            standard_error=se,
            n_sigma=n_sigma,
            seed=seed,
        )

    return estimator
