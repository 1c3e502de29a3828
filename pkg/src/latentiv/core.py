"""Shared domain types, configuration, deterministic randomness, and errors.

Everything downstream (clustering, instrument construction, conditional
independence testing, inference, benchmarking) builds on the types in this
module. All types are immutable after construction and safe to share across
threads; ``RngStream`` instances are single-owner and parallel work gets its
own derived stream.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = [
    "LatentIvError",
    "ConfigError",
    "NonFinite",
    "DegenerateData",
    "TooFewDistinctPoints",
    "NearSingular",
    "TooFewSamples",
    "ParseError",
    "MultivariatePair",
    "InvalidCpt",
    "Direction",
    "TestKind",
    "DistanceKind",
    "DecisionMode",
    "Config",
    "DataPair",
    "Verdict",
    "RngStream",
    "standardize",
    "config_to_dict",
]


# ---------------------------------------------------------------------------
# Error taxonomy
# ---------------------------------------------------------------------------


class LatentIvError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(LatentIvError, ValueError):
    """A configuration value violates its contract."""


class NonFinite(LatentIvError):
    """Input data contains NaN or infinity."""


class DegenerateData(LatentIvError):
    """Data is constant (or otherwise carries no usable variation)."""


class TooFewDistinctPoints(LatentIvError):
    """Requested more clusters than there are distinct points."""


class NearSingular(LatentIvError):
    """A conditioning correlation is too close to +/-1 to partial out."""


class TooFewSamples(LatentIvError):
    """Not enough samples for the requested operation (e.g. fold split)."""


class ParseError(LatentIvError):
    """A data or metadata file could not be parsed.

    Carries the 1-based line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MultivariatePair(LatentIvError):
    """A pair file has more than two columns and cannot be loaded as bivariate."""


class InvalidCpt(LatentIvError):
    """A conditional probability table entry is outside [0, 1]."""


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------


class Direction(enum.Enum):
    """Inferred causal relation between the two observed vectors."""

    X_TO_Y = "x_to_y"
    Y_TO_X = "y_to_x"
    CONFOUNDED = "confounded"


class TestKind(enum.Enum):
    """Which conditional independence test to run."""

    __test__ = False  # keep pytest from collecting this as a test class

    PARTIAL_CORRELATION = "cor"
    CONDITIONAL_MUTUAL_INFORMATION = "mi"


class DistanceKind(enum.Enum):
    """Distance used to compare instrument candidates (extension point)."""

    EUCLIDEAN = "euclidean"


class DecisionMode(enum.Enum):
    """How a verdict is produced.

    ``STRICT_TREE`` walks the two-test decision tree and may return
    ``CONFOUNDED``; ``FORCED_CHOICE`` always picks a direction by the sign
    of the p-value difference.
    """

    STRICT_TREE = "strict"
    FORCED_CHOICE = "forced"


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class Config:
    """Run configuration with validated defaults.

    k_clusters:    number of clusters used to build instrument candidates.
    alpha:         significance threshold for the independence tests.
    n_folds:       folds for the ensemble decision (1 = single shot).
    seed:          64-bit unsigned master seed.
    test_kind:     partial-correlation t-test or conditional-MI G-test.
    distance_kind: candidate-comparison distance (Euclidean only for now).
    standardize:   z-score both vectors before clustering so the candidate
                   distances are compared on a common scale.
    decision_mode: strict decision tree vs. forced binary choice.
    mi_level_cap:  max number of levels when discretizing continuous data
                   for the MI test.
    """

    k_clusters: int = 15
    alpha: float = 0.05
    n_folds: int = 10
    seed: int = 0
    test_kind: TestKind = TestKind.PARTIAL_CORRELATION
    distance_kind: DistanceKind = DistanceKind.EUCLIDEAN
    standardize: bool = True
    decision_mode: DecisionMode = DecisionMode.STRICT_TREE
    mi_level_cap: int = 20

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.k_clusters < 2:
            raise ConfigError(f"k_clusters must be >= 2, got {self.k_clusters}")
        if self.n_folds < 1:
            raise ConfigError(f"n_folds must be >= 1, got {self.n_folds}")
        if not (0 <= self.seed <= _U64_MAX):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.mi_level_cap < 2:
            raise ConfigError(f"mi_level_cap must be >= 2, got {self.mi_level_cap}")


def config_to_dict(cfg: Config) -> dict[str, Any]:
    """Serialize a Config to a JSON-friendly dict (enums become strings)."""
    out: dict[str, Any] = {}
    for field in dataclasses.fields(cfg):
        value = getattr(cfg, field.name)
        out[field.name] = value.value if isinstance(value, enum.Enum) else value
    return out


# ---------------------------------------------------------------------------
# Data containers
# ---------------------------------------------------------------------------


def _as_readonly_vector(v: Any, name: str) -> np.ndarray:
    arr = np.array(v, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or infinite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DataPair:
    """Two aligned observation vectors of equal length n >= 2."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _as_readonly_vector(self.x, "x"))
        object.__setattr__(self, "y", _as_readonly_vector(self.y, "y"))
        if len(self.x) != len(self.y):
            raise ValueError(f"x and y must have equal length, got {len(self.x)} and {len(self.y)}")
        if len(self.x) < 2:
            raise ValueError(f"need at least 2 samples, got {len(self.x)}")

    @property
    def n(self) -> int:
        return len(self.x)

    def swapped(self) -> "DataPair":
        """The same pair with the roles of x and y exchanged."""
        return DataPair(self.y, self.x)

    def subset(self, indices: np.ndarray) -> "DataPair":
        return DataPair(self.x[indices], self.y[indices])


@dataclass(frozen=True)
class Verdict:
    """Decision plus the two supporting p-values.

    ``p_y_indep_ix_given_x`` is the p-value of testing whether y is
    independent of the instrument of x given x; ``p_x_indep_iy_given_y``
    is the mirrored test. Both are always computed, whichever branch
    decided the direction.
    """

    direction: Direction
    p_y_indep_ix_given_x: float
    p_x_indep_iy_given_y: float

    @property
    def p_difference(self) -> float:
        """p(x indep iy | y) - p(y indep ix | x); negative favors x -> y."""
        return self.p_x_indep_iy_given_y - self.p_y_indep_ix_given_x


# ---------------------------------------------------------------------------
# Deterministic randomness
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class RngStream:
    """Seeded, platform-independent random stream.

    Wraps a counter-based Philox bit generator: identical seeds produce
    identical draw sequences across runs and platforms. ``derive`` is a pure
    function of (seed, index) and does not consume parent state, so workers
    can be given independent child streams in any order.
    """

    __slots__ = ("seed", "_gen")

    def __init__(self, seed: int):
        if not (0 <= seed <= _U64_MAX):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.Philox(key=seed))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def derive(self, index: int) -> "RngStream":
        """Child stream for task ``index``; pure in (seed, index)."""
        if index < 0:
            raise ValueError(f"derive index must be nonnegative, got {index}")
        return RngStream(_splitmix64(self.seed ^ _splitmix64(index)))

    # Thin delegates for the draws the package actually uses.

    def random(self, size: int | None = None):
        return self._gen.random(size)

    def integers(self, low: int, high: int | None = None):
        return int(self._gen.integers(low, high))

    def normal(self, loc: float, scale: float, size: int) -> np.ndarray:
        return self._gen.normal(loc, scale, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def standardize(v: Any) -> np.ndarray:
    """Z-score a vector to mean 0 and standard deviation 1 (divisor n).

    A constant input maps to the zero vector. Raises ``NonFinite`` on
    NaN/infinite entries.
    """
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    if len(arr) < 2:
        raise ValueError(f"need at least 2 entries, got {len(arr)}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("input contains NaN or infinite entries")
    centered = arr - arr.mean()
    sd = float(np.sqrt(np.mean(centered * centered)))
    if sd == 0.0:
        return np.zeros_like(arr)
    return centered / sd
