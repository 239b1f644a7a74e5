"""Synthetic tasks: seeded input laws, teacher-labelled data, Monte Carlo error.

Every random draw is derived from an explicit 64-bit seed through
``numpy.random.SeedSequence`` with an integer spawn key, so results are
bit-reproducible and independent of call scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Hypothesis, LabelledSample, LossSpec, UnlabelledSample, loss_values, predictions
from .errors import InvalidParameterError


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Counter-based seed split: child streams are indexed by ``key`` integers."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo mean with its sample standard error."""

    value: float
    standard_error: float
    n: int

    def as_tuple(self) -> tuple[float, float]:
        return (self.value, self.standard_error)


# ---------------------------------------------------------------------------
# Input laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformBox:
    """Coordinates i.i.d. uniform on [-halfwidth, halfwidth]."""

    halfwidth: float = 1.0

    def __post_init__(self):
        if self.halfwidth <= 0:
            raise InvalidParameterError("halfwidth must be positive")

    def draw(self, rng: np.random.Generator, m: int, dim: int) -> np.ndarray:
        return rng.uniform(-self.halfwidth, self.halfwidth, size=(m, dim))


@dataclass(frozen=True)
class IsotropicGaussian:
    sd: float = 1.0

    def __post_init__(self):
        if self.sd <= 0:
            raise InvalidParameterError("sd must be positive")

    def draw(self, rng: np.random.Generator, m: int, dim: int) -> np.ndarray:
        return rng.normal(0.0, self.sd, size=(m, dim))


@dataclass(frozen=True)
class GaussianMixture:
    """Equal-weight mixture of isotropic components at the given centers."""

    centers: np.ndarray
    sd: float = 1.0

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if not np.all(np.isfinite(centers)):
            raise InvalidParameterError("mixture centers must be finite")
        centers.flags.writeable = False
        object.__setattr__(self, "centers", centers)
        if self.sd <= 0:
            raise InvalidParameterError("sd must be positive")

    def draw(self, rng: np.random.Generator, m: int, dim: int) -> np.ndarray:
        if self.centers.shape[1] != dim:
            raise InvalidParameterError(
                f"mixture centers have dimension {self.centers.shape[1]}, expected {dim}"
            )
        comp = rng.integers(self.centers.shape[0], size=m)
        return self.centers[comp] + rng.normal(0.0, self.sd, size=(m, dim))


InputLaw = UniformBox | IsotropicGaussian | GaussianMixture


# ---------------------------------------------------------------------------
# Tasks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SyntheticTask:
    """A teacher hypothesis plus an input law; labels get gaussian noise."""

    teacher: Hypothesis
    input_law: InputLaw
    label_noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.label_noise_sd < 0:
            raise InvalidParameterError("label_noise_sd must be >= 0")

    @property
    def input_dim(self) -> int:
        return self.teacher.feature_map.input_dim

    def draw_inputs(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return self.input_law.draw(rng, m, self.input_dim)

    def label(self, rng: np.random.Generator, inputs: np.ndarray) -> np.ndarray:
        targets = predictions(self.teacher, inputs)
        if self.label_noise_sd > 0:
            targets = targets + rng.normal(0.0, self.label_noise_sd, size=inputs.shape[0])
        return targets


def generate(
    task: SyntheticTask, m: int, labelled: bool = True
) -> LabelledSample | UnlabelledSample:
    """Draw m i.i.d. points from the task; label them with the teacher if asked.

    The draw is a pure function of ``task.seed`` (labelled and unlabelled
    requests use separate derived streams).
    """
    if m < 1:
        raise InvalidParameterError("m must be >= 1")
    stream = 0 if labelled else 1
    rng = derived_rng(task.seed, stream)
    inputs = task.draw_inputs(rng, m)
    source = f"synthetic:{task.seed}:{stream}"
    if not labelled:
        return UnlabelledSample(inputs=inputs, source_id=source)
    targets = task.label(rng, inputs)
    return LabelledSample(inputs=inputs, targets=targets, source_id=source)


def true_error_mc(
    h: Hypothesis,
    task: SyntheticTask,
    spec: LossSpec,
    n_mc: int,
    seed: int,
) -> MCEstimate:
    """Monte Carlo estimate of the expected loss of h on the task distribution."""
    if n_mc < 1:
        raise InvalidParameterError("n_mc must be >= 1")
    rng = derived_rng(seed, 2)
    inputs = task.draw_inputs(rng, n_mc)
    targets = task.label(rng, inputs)
    losses = loss_values(spec, predictions(h, inputs), targets)
    se = float(losses.std(ddof=1) / np.sqrt(n_mc)) if n_mc > 1 else 0.0
    return MCEstimate(value=float(losses.mean()), standard_error=se, n=n_mc)
