"""Named validation suites: frequency tests of the high-probability guarantees
and zero-tolerance exactness/dominance checks for the closed forms.

Every suite is a pure function of (trials, seed) and returns a CoverageReport.
Per-trial randomness comes from counter-derived seeds, so reports are
bit-identical across runs and thread counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    LabelledSample,
    LossSpec,
    StochasticRounder,
    UniformQuantizer,
    UnlabelledSample,
    apply_operator,
    empirical_error,
    linear_hypothesis,
    loss_values,
)
from .errors import UnknownSuiteError
from .learners import SearchDomain, constrained_erm, lambda_erm, sensitivity_regularized_erm
from .radgeom import (
    cluster_bound,
    crude_bounds,
    ellipse_rademacher,
    exact_rademacher_rows,
    exact_rademacher_support,
    kernel_sensitivity_class_bound,
    mc_rademacher_rows,
    positive_orthant_ball_sup,
    rotated_union_bound,
    union_ellipse_bound,
)
from .bounds import hoeffding_term, lambda_equivalence_bound, stochastic_bound
from .sensitivity import (
    empirical_sensitivity,
    fast_rate_deviation_bound,
    sensitivity_deviation_bound,
)
from .synthetic import derived_rng


@dataclass(frozen=True)
class CoverageReport:
    """Frequency with which a guarantee held across seeded trials."""

    name: str
    trials: int
    violations: int
    target: float
    floor: float
    mean_slack: float
    seed: int
    stats: tuple[tuple[str, float], ...] = ()

    @property
    def coverage(self) -> float:
        return 1.0 - self.violations / self.trials

    @property
    def passed(self) -> bool:
        return self.coverage >= self.floor

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "violations": self.violations,
            "coverage": self.coverage,
            "target": self.target,
            "floor": self.floor,
            "mean_slack": self.mean_slack,
            "passed": self.passed,
            "seed": self.seed,
            "stats": {k: v for k, v in self.stats},
        }


def _run_trials(n: int, fn, threads: int = 1) -> list:
    """Map fn over trial indices; results are collected in index order."""
    if threads <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))


def _report(name, results, target, floor, seed, stats=()) -> CoverageReport:
    violations = sum(1 for ok, _ in results if not ok)
    slacks = [s for _, s in results]
    return CoverageReport(
        name=name,
        trials=len(results),
        violations=violations,
        target=target,
        floor=floor,
        mean_slack=float(np.mean(slacks)) if slacks else 0.0,
        seed=seed,
        stats=tuple(stats),
    )


def _random_orthogonal(rng: np.random.Generator, m: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(m, m)))
    return q * np.sign(np.diag(r))


# ---------------------------------------------------------------------------
# Exactness suites for the closed forms
# ---------------------------------------------------------------------------


def suite_ellipse_exact(trials: int = 100, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Sign-pattern enumeration with analytic support values must reproduce
    the closed-form ellipse complexity to 1e-9."""
    p_choices = (1.0, 1.5, 2.0, 3.0)

    def one(i: int):
        rng = derived_rng(seed, 20, i)
        m = int(rng.integers(2, 13))
        p = p_choices[rng.integers(len(p_choices))]
        mu = rng.uniform(0.1, 3.0, size=m)
        enum = exact_rademacher_support(lambda sig: _batch_dual(sig * mu, p), m, batch=True)
        closed = ellipse_rademacher(mu, p, m).value
        gap = abs(enum - closed)
        return gap <= 1e-9, 1e-9 - gap

    results = _run_trials(trials, one, threads)
    return _report("ellipse_exact", results, 1.0, 1.0, seed)


def _batch_dual(rows: np.ndarray, p: float) -> np.ndarray:
    """Dual-exponent norm of each row."""
    rows = np.abs(rows)
    if p == 1:
        return rows.max(axis=1)
    q = p / (p - 1.0)
    return (rows**q).sum(axis=1) ** (1.0 / q)


def suite_union_exact(trials: int = 100, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Axis-aligned unions: enumeration equals the max-member closed form."""
    p_choices = (1.0, 1.5, 2.0, 3.0)

    def one(i: int):
        rng = derived_rng(seed, 21, i)
        m = int(rng.integers(2, 13))
        p = p_choices[rng.integers(len(p_choices))]
        n_ellipses = int(rng.integers(1, 6))
        mus = [rng.uniform(0.1, 3.0, size=m) for _ in range(n_ellipses)]

        def support(sig_block: np.ndarray) -> np.ndarray:
            return np.max(
                np.stack([_batch_dual(sig_block * mu, p) for mu in mus]), axis=0
            )

        enum = exact_rademacher_support(support, m, batch=True)
        closed = union_ellipse_bound(mus, p, m).value
        gap = abs(enum - closed)
        return gap <= 1e-9, 1e-9 - gap

    results = _run_trials(trials, one, threads)
    return _report("union_exact", results, 1.0, 1.0, seed)


def suite_crude_sandwich(trials: int = 50, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Enumerated complexity of the positive-orthant p-ball of radius
    R m^(1/p) sits inside the magnitude sandwich."""

    def one(i: int):
        rng = derived_rng(seed, 22, i)
        m = int(rng.integers(2, 11))
        p = 1.0 if rng.integers(2) == 0 else 2.0
        radius = float(rng.uniform(0.2, 2.0))
        full = radius * m ** (1.0 / p)
        enum = exact_rademacher_support(
            lambda sig: positive_orthant_ball_sup(sig, full, p), m
        )
        lower, upper = crude_bounds(radius, p)
        ok = lower - 1e-12 <= enum <= upper + 1e-12
        return ok, min(enum - lower, upper - enum)

    results = _run_trials(trials, one, threads)
    return _report("crude_sandwich", results, 1.0, 1.0, seed)


def suite_cluster_dominance(trials: int = 200, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Finite point sets drawn inside a clustered model never beat the
    cluster bound; zero-center models must reduce to the union value exactly."""
    p_choices = (1.0, 1.5, 2.0, 3.0)

    def one(i: int):
        rng = derived_rng(seed, 23, i)
        m = int(rng.integers(3, 9))
        p = p_choices[rng.integers(len(p_choices))]
        n_clusters = int(rng.integers(1, 5))
        comps = []
        for _ in range(n_clusters):
            mu = rng.uniform(0.2, 1.5, size=m)
            V = _random_orthogonal(rng, m)
            offset = float(np.sum(mu))
            c = rng.uniform(offset, offset + 1.0, size=m)
            comps.append((c, V, mu))
        rows = []
        for _ in range(5 * n_clusters):
            c, V, mu = comps[rng.integers(n_clusters)]
            g = rng.normal(size=m)
            z = g / np.linalg.norm(g, ord=p) * rng.uniform(0.0, 1.0)
            rows.append(c + V @ (mu * z))
        rows = np.array(rows)
        enum = exact_rademacher_rows(rows)
        bound = cluster_bound(comps, p, m).value
        ok = enum <= bound + 1e-12
        # zero-center reduction must be an identity
        zero_comps = [(np.zeros(m), V, mu) for _, V, mu in comps]
        reduced = cluster_bound(zero_comps, p, m).value
        union = rotated_union_bound([(V, mu) for _, V, mu in comps], p, m).value
        ok = ok and reduced == union
        return ok, bound - enum

    results = _run_trials(trials, one, threads)
    return _report("cluster_dominance", results, 1.0, 1.0, seed)


def suite_kernel_dominance(trials: int = 100, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Weight-distortion bound dominates the Monte Carlo complexity of
    quantised linear sensitivity sets (at 4 standard errors)."""

    def one(i: int):
        rng = derived_rng(seed, 24, i)
        d = int(rng.integers(1, 6))
        m = int(rng.integers(5, 51))
        step = float(rng.uniform(0.2, 0.8))
        inputs = rng.normal(size=(m, d))
        op = UniformQuantizer(step=step, clamp=1.0)
        # extreme residual corners (weights at grid midpoints) plus random fill
        corners = step / 2.0 * np.array(np.meshgrid(*([[-1.0, 1.0]] * d))).reshape(d, -1).T
        weights = np.vstack([corners, rng.uniform(-1.0, 1.0, size=(100, d))])
        residuals = weights - op.transform_weights(weights)
        rows = np.abs(inputs @ residuals.T).T
        value, se = mc_rademacher_rows(rows, n_sigma=1500, seed=seed * 1000 + i)
        bound = kernel_sensitivity_class_bound(
            step / 2.0 * math.sqrt(d), (inputs**2).sum(axis=1)
        ).value
        ok = value - 4.0 * se <= bound
        return ok, bound - value

    results = _run_trials(trials, one, threads)
    return _report("kernel_dominance", results, 1.0, 1.0, seed)


# ---------------------------------------------------------------------------
# Coverage suites for the high-probability statements
# ---------------------------------------------------------------------------


def _grid_weights(halfwidth: float, points: int) -> np.ndarray:
    axis = np.linspace(-halfwidth, halfwidth, points)
    mesh = np.meshgrid(axis, axis, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def suite_lemma1(trials: int = 500, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Sup over an 11 x 11 weight grid of |true - empirical| sensitivity is
    covered by the deviation bound built from the sampled complexity.

    The fast-rate bound is tracked on the same trials (stats key
    ``fast_rate_violations``).
    """
    delta = 0.1
    m = 100
    op = UniformQuantizer(step=0.5, clamp=1.0)
    grid = _grid_weights(1.0, 11)
    residuals = grid - op.transform_weights(grid)
    # high-precision Monte Carlo reference for the true 1-sensitivity
    big = derived_rng(seed, 30).uniform(-1.0, 1.0, size=(400_000, 2))
    d_true = np.abs(big @ residuals.T).mean(axis=0)
    # exact 2-sensitivity for the fast-rate variance term: ||r|| / sqrt(3)
    t_two = float(np.max(np.linalg.norm(residuals, axis=1)) / math.sqrt(3.0))
    sup_residual = float(np.max(np.linalg.norm(residuals, axis=1)))
    fast_violations = [0]

    def one(i: int):
        rng = derived_rng(seed, 31, i)
        inputs = rng.uniform(-1.0, 1.0, size=(m, 2))
        gaps = np.abs(inputs @ residuals.T)
        d_hat = gaps.mean(axis=0)
        sup_dev = float(np.max(np.abs(d_true - d_hat)))
        rad, _ = mc_rademacher_rows(gaps.T, n_sigma=800, seed=seed * 100_003 + i)
        C = sup_residual * float(np.max(np.linalg.norm(inputs, axis=1)))
        bound = sensitivity_deviation_bound(rad, C, m, delta).epsilon_u
        fast = fast_rate_deviation_bound(rad, t_two, C, m, delta).epsilon_u
        if sup_dev > fast:
            fast_violations[0] += 1
        return sup_dev <= bound, bound - sup_dev

    results = _run_trials(trials, one, threads)
    return _report(
        "lemma1",
        results,
        target=1.0 - delta,
        floor=1.0 - 2.0 * delta,
        seed=seed,
        stats=[("fast_rate_violations", float(fast_violations[0]))],
    )


class _LinearTrialContext:
    """Shared machinery for the d = 5 linear-teacher coverage suites."""

    D = 5
    M = 50
    M_U = 150
    DELTA = 0.05
    SD = 0.45
    NOISE_SD = 0.1
    N_CANDIDATES = 120

    def __init__(self, seed: int, stream: int):
        self.seed = seed
        self.stream = stream
        self.op = UniformQuantizer(step=0.5, clamp=1.0)
        self.loss = LossSpec(kind="clipped_absolute", lipschitz=1.0)
        self.x_mc = derived_rng(seed, stream, 0).normal(0.0, self.SD, size=(100_000, self.D))

    def true_d1(self, residuals: np.ndarray) -> np.ndarray:
        """Exact 1-sensitivity under the isotropic gaussian input law."""
        return np.linalg.norm(np.atleast_2d(residuals), axis=1) * self.SD * math.sqrt(2.0 / math.pi)

    def trial(self, i: int):
        rng = derived_rng(self.seed, self.stream, 1, i)
        teacher = rng.uniform(-0.8, 0.8, size=self.D)
        x_lab = rng.normal(0.0, self.SD, size=(self.M, self.D))
        y_lab = x_lab @ teacher + rng.normal(0.0, self.NOISE_SD, size=self.M)
        x_unlab = rng.normal(0.0, self.SD, size=(self.M_U, self.D))
        labelled = LabelledSample(inputs=x_lab, targets=y_lab, source_id=f"trial{i}")
        unlabelled = UnlabelledSample(inputs=x_unlab, source_id=f"trial{i}")
        domain = SearchDomain(
            dim=self.D,
            halfwidth=1.0,
            mode="random",
            n_samples=self.N_CANDIDATES,
            seed=int(rng.integers(2**63)),
        )
        cands = domain.candidate_matrix()
        residuals = cands - self.op.transform_weights(cands)
        d_true = self.true_d1(residuals)
        d_hat = np.abs(x_unlab @ residuals.T).mean(axis=0)
        y_mc = self.x_mc @ teacher + rng.normal(0.0, self.NOISE_SD, size=self.x_mc.shape[0])
        err_cand = loss_values(self.loss, self.x_mc @ cands.T, y_mc[:, None]).mean(axis=0)
        rad_rows = (x_lab @ np.unique(self.op.transform_weights(cands), axis=0).T).T
        rad_HA, _ = mc_rademacher_rows(rad_rows, n_sigma=600, seed=self.seed * 99_991 + i)
        return {
            "rng": rng,
            "teacher": teacher,
            "labelled": labelled,
            "unlabelled": unlabelled,
            "domain": domain,
            "cands": cands,
            "d_true": d_true,
            "d_hat": d_hat,
            "y_mc": y_mc,
            "err_cand": err_cand,
            "rad_HA": rad_HA,
        }

    def mc_error(self, weights: np.ndarray, y_mc: np.ndarray) -> float:
        return float(loss_values(self.loss, self.x_mc @ weights, y_mc).mean())


def suite_prop2(trials: int = 200, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Deployment guarantee for the threshold-constrained learner:
    err(A f_hat_t) <= err(f_t^*) + rho t + 2 rho rad(H_A) + 4 sqrt(ln(9/d)/2m)."""
    ctx = _LinearTrialContext(seed, 40)
    rho = ctx.loss.lipschitz
    confidence = hoeffding_term(4.0, 9.0 / ctx.DELTA, ctx.M)

    def one(i: int):
        tr = ctx.trial(i)
        t = float(tr["rng"].uniform(0.1, 0.45))
        min_dhat = float(tr["d_hat"].min())
        if min_dhat >= t:
            t = min_dhat * 1.25 + 1e-9
        out = constrained_erm(
            tr["labelled"], tr["unlabelled"], ctx.op, t, 1.0, ctx.loss, tr["domain"]
        )
        err_af = ctx.mc_error(np.asarray(out.approx_hypothesis.weights), tr["y_mc"])
        feasible_true = tr["d_true"] < t
        if feasible_true.any():
            err_star = float(tr["err_cand"][feasible_true].min())
        else:
            err_star = float(tr["err_cand"].min())
        rhs = err_star + rho * t + 2.0 * rho * tr["rad_HA"] + confidence
        return err_af <= rhs, rhs - err_af

    results = _run_trials(trials, one, threads)
    return _report("prop2", results, target=1.0 - ctx.DELTA, floor=0.9, seed=seed)


def suite_prop3(trials: int = 200, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Adaptive-threshold guarantee for the sensitivity-regularised learner:
    err(A f_hat) <= inf_t {err(f_t^*) + 2 rho t} + 2 rho rad(H_A) + 4 sqrt(ln(8/d)/2m)."""
    ctx = _LinearTrialContext(seed, 41)
    rho = ctx.loss.lipschitz
    confidence = hoeffding_term(4.0, 8.0 / ctx.DELTA, ctx.M)
    t_grid = np.arange(0.02, 0.8, 0.04)

    def one(i: int):
        tr = ctx.trial(i)

        def true_sensitivity(h) -> float:
            return float(ctx.true_d1(h.weights - ctx.op.transform_weights(h.weights))[0])

        out = sensitivity_regularized_erm(
            tr["labelled"],
            ctx.op,
            true_sensitivity,
            rho,
            ctx.loss,
            tr["domain"],
            sensitivity_label="mc_true",
        )
        err_af = ctx.mc_error(np.asarray(out.approx_hypothesis.weights), tr["y_mc"])
        best = math.inf
        for t in t_grid:
            feasible = tr["d_true"] < t
            if feasible.any():
                best = min(best, float(tr["err_cand"][feasible].min()) + 2.0 * rho * t)
        rhs = best + 2.0 * rho * tr["rad_HA"] + confidence
        return err_af <= rhs, rhs - err_af

    results = _run_trials(trials, one, threads)
    return _report("prop3", results, target=1.0 - ctx.DELTA, floor=0.9, seed=seed)


def suite_prop4(trials: int = 200, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Equivalence of the lambda-regularised and threshold-constrained
    learners at t = true sensitivity of the lambda solution."""
    delta = 0.05
    m = 50
    m_u = 100
    sd = 0.5
    op = UniformQuantizer(step=0.5, clamp=1.0)
    loss = LossSpec(kind="clipped_absolute", lipschitz=1.0)
    rho = loss.lipschitz
    domain = SearchDomain(dim=2, halfwidth=1.0, mode="grid", points_per_axis=21)
    cands = domain.candidate_matrix()
    residuals = cands - op.transform_weights(cands)
    d_true = np.linalg.norm(residuals, axis=1) * sd * math.sqrt(2.0 / math.pi)
    sup_residual = float(np.max(np.linalg.norm(residuals, axis=1)))
    quantized = np.unique(op.transform_weights(cands), axis=0)
    x_mc = derived_rng(seed, 50).normal(0.0, sd, size=(100_000, 2))

    def one(i: int):
        rng = derived_rng(seed, 51, i)
        teacher = rng.uniform(-0.8, 0.8, size=2)
        lam = float(rng.uniform(0.05, 1.0))
        x_lab = rng.normal(0.0, sd, size=(m, 2))
        y_lab = x_lab @ teacher + rng.normal(0.0, 0.1, size=m)
        x_unlab = rng.normal(0.0, sd, size=(m_u, 2))
        labelled = LabelledSample(inputs=x_lab, targets=y_lab, source_id=f"trial{i}")
        unlabelled = UnlabelledSample(inputs=x_unlab, source_id=f"trial{i}")
        y_mc = x_mc @ teacher + rng.normal(0.0, 0.1, size=x_mc.shape[0])

        out = lambda_erm(labelled, unlabelled, op, lam, 1.0, loss, domain)
        w_lambda = np.asarray(out.hypothesis.weights)
        t = float(
            np.linalg.norm(w_lambda - op.transform_weights(w_lambda)) * sd * math.sqrt(2.0 / math.pi)
        )
        # threshold-constrained oracle over the true-sensitivity class
        err_a_cand = loss_values(loss, x_lab @ op.transform_weights(cands).T, y_lab[:, None]).mean(
            axis=0
        )
        feasible = d_true <= t
        idx = int(np.flatnonzero(feasible)[np.argmin(err_a_cand[feasible])])
        lhs = float(
            loss_values(loss, x_mc @ op.transform_weights(w_lambda), y_mc).mean()
        ) - float(loss_values(loss, x_mc @ op.transform_weights(cands[idx]), y_mc).mean())

        gaps_u = np.abs(x_unlab @ residuals.T)
        rad_u, _ = mc_rademacher_rows(gaps_u.T, n_sigma=800, seed=seed * 77_003 + i)
        C = sup_residual * float(np.max(np.linalg.norm(x_unlab, axis=1)))
        eps_u = 2.0 * rad_u + 3.0 * C * math.sqrt(math.log(8.0 / delta) / (2.0 * m_u))
        rad_HA, _ = mc_rademacher_rows((x_lab @ quantized.T).T, n_sigma=800, seed=seed * 88_007 + i)
        rhs = lambda_equivalence_bound(rho, rad_HA, m, delta, lam, eps_u).value
        return lhs <= rhs, rhs - lhs

    results = _run_trials(trials, one, threads)
    return _report("prop4", results, target=1.0 - delta, floor=0.95, seed=seed)


def suite_prop10(trials: int = 300, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Fast-rate deviation bound on a uniformly low-sensitivity class
    (2-sensitivity at most t = 0.1 for every member)."""
    delta = 0.1
    m = 100
    t = 0.1
    op = UniformQuantizer(step=0.5, clamp=1.0)
    base = _grid_weights(1.0, 5)  # the on-grid weights for step 0.5
    offsets = _grid_weights(0.04, 3)
    weights = (base[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
    residuals = weights - op.transform_weights(weights)
    # uniform box inputs: 2-sensitivity is exactly ||r|| / sqrt(3) <= t
    assert float(np.max(np.linalg.norm(residuals, axis=1))) / math.sqrt(3.0) <= t
    big = derived_rng(seed, 60).uniform(-1.0, 1.0, size=(400_000, 2))
    d_true = np.abs(big @ residuals.T).mean(axis=0)
    sup_residual = float(np.max(np.linalg.norm(residuals, axis=1)))

    def one(i: int):
        rng = derived_rng(seed, 61, i)
        inputs = rng.uniform(-1.0, 1.0, size=(m, 2))
        gaps = np.abs(inputs @ residuals.T)
        sup_dev = float(np.max(np.abs(d_true - gaps.mean(axis=0))))
        rad, _ = mc_rademacher_rows(gaps.T, n_sigma=600, seed=seed * 66_601 + i)
        C = sup_residual * float(np.max(np.linalg.norm(inputs, axis=1)))
        bound = fast_rate_deviation_bound(rad, t, C, m, delta).epsilon_u
        return sup_dev <= bound, bound - sup_dev

    results = _run_trials(trials, one, threads)
    return _report("prop10", results, target=1.0 - delta, floor=0.9, seed=seed)


def suite_stochastic_unbiased(trials: int = 1, seed: int = 0, threads: int = 1) -> CoverageReport:
    """Unbiasedness of the stochastic rounder plus the singleton-family
    reduction identity of the expected-operator bound."""
    n = 100_000
    rounder = StochasticRounder(step=1.0, clamp=1.0)
    rng = derived_rng(seed, 70)
    draws = rounder.transform_weights(np.full(n, 0.3), rng)
    mean_gap = abs(float(draws.mean()) - 0.3)
    tol = 3.0 * math.sqrt(0.21 / n)
    check_mean = mean_gap <= tol

    # singleton reduction: expectations collapse to the per-operator values
    op = UniformQuantizer(step=0.5, clamp=1.0)
    h = linear_hypothesis([0.6, -0.3])
    inputs = derived_rng(seed, 71).uniform(-1.0, 1.0, size=(8, 2))
    targets = inputs @ np.array([0.5, -0.5])
    labelled = LabelledSample(inputs=inputs, targets=targets, source_id="singleton")
    loss = LossSpec(kind="clipped_absolute", lipschitz=1.0)
    err = empirical_error(apply_operator(op, h), labelled, loss)
    sens = empirical_sensitivity(h, op, UnlabelledSample(inputs=inputs), p=1.0).value
    class_weights = np.array([[0.6, -0.3], [0.5, -0.5], [-0.2, 0.9]])
    gap_rows = np.abs(inputs @ (class_weights - op.transform_weights(class_weights)).T).T
    rad = exact_rademacher_rows(gap_rows)
    report = stochastic_bound(err, sens, rad, loss.lipschitz, labelled.m, 0.1)
    check_identity = (
        report.term("expected_empirical_error") == err
        and report.term("expected_sensitivity") == loss.lipschitz * sens
        and report.term("expected_complexity") == 2.0 * loss.lipschitz * rad
    )
    results = [(check_mean, tol - mean_gap), (check_identity, 0.0)]
    return _report(
        "stochastic_unbiased",
        results,
        target=1.0,
        floor=1.0,
        seed=seed,
        stats=[("mean_gap", mean_gap), ("tolerance", tol)],
    )


SUITES = {
    "lemma1": suite_lemma1,
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "prop4": suite_prop4,
    "prop10": suite_prop10,
    "ellipse_exact": suite_ellipse_exact,
    "crude_sandwich": suite_crude_sandwich,
    "union_exact": suite_union_exact,
    "cluster_dominance": suite_cluster_dominance,
    "kernel_dominance": suite_kernel_dominance,
    "stochastic_unbiased": suite_stochastic_unbiased,
}

DEFAULT_TRIALS = {
    "lemma1": 500,
    "prop2": 200,
    "prop3": 200,
    "prop4": 200,
    "prop10": 300,
    "ellipse_exact": 100,
    "crude_sandwich": 50,
    "union_exact": 100,
    "cluster_dominance": 200,
    "kernel_dominance": 100,
    "stochastic_unbiased": 1,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0, threads: int = 1) -> CoverageReport:
    if name not in SUITES:
        raise UnknownSuiteError(
            f"unknown suite {name!r}; choose one of {sorted(SUITES)}", suite=name
        )
    trials = DEFAULT_TRIALS[name] if trials is None else trials
    return SUITES[name](trials=trials, seed=seed, threads=threads)
