"""Seeded generators for the two simulation scenarios.

Both scenarios come in a continuous (linear mechanisms, Gaussian noise) and
a discrete (binary Bayesian network) flavor, and every sample carries the
latent vectors alongside the observations:

- chain: ix -> x -> y, with an extra latent iy attached to y,
- confounded: u -> x and u -> y (plus ix -> x, iy -> y), no x -> y edge.

Latent parents (ix, and u in the fork) default to symmetric two-point
selectors (+/- their scale) rather than Gaussians: a jointly Gaussian pair
carries no direction information at all (its standardized joint law is
exchangeable), whereas a mixture gives the observations the cluster
structure the instrument-construction step feeds on. Pass
``latent_law="gaussian"`` to get Gaussian latents; the p-value patterns of
the tests on *generated* latents are second-moment facts and hold under
either law.

The latent instrument of the effect is generated as the systematic part of
the effect plus fresh noise (continuous) or as an extra parent in the
effect's probability table (discrete). Either way, conditioning on the
effect leaves the latent dependent on the other observed variable, which is
the asymmetry the inference procedure detects. Benchmark runs never consume
these generated latents; they construct instruments by clustering.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DataPair, InvalidCpt, RngStream

__all__ = [
    "Scenario",
    "Setting",
    "ChainCpts",
    "ConfoundedCpts",
    "ScmParams",
    "SyntheticSample",
    "generate_chain_continuous",
    "generate_confounded_continuous",
    "generate_chain_discrete",
    "generate_confounded_discrete",
    "generate",
    "write_sample",
]


class Scenario(enum.Enum):
    CHAIN = "chain"
    CONFOUNDED = "confounded"


class Setting(enum.Enum):
    DISCRETE_BINARY = "discrete"
    CONTINUOUS_GAUSSIAN = "continuous"


def _check_prob(p: float, name: str) -> None:
    if not (0.0 <= p <= 1.0):
        raise InvalidCpt(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class ChainCpts:
    """Bernoulli tables for the discrete chain ix -> x -> y <- iy.

    ``y_given_x_iy[x][iy]`` marginalizes over iy to P(Y=1|X=0) = 0.2 and
    P(Y=1|X=1) = 0.8 at the defaults.
    """

    p_ix: float = 0.5
    p_iy: float = 0.5
    x_given_ix: tuple[float, float] = (0.2, 0.8)
    y_given_x_iy: tuple[tuple[float, float], tuple[float, float]] = ((0.1, 0.3), (0.7, 0.9))

    def __post_init__(self) -> None:
        _check_prob(self.p_ix, "p_ix")
        _check_prob(self.p_iy, "p_iy")
        for i, p in enumerate(self.x_given_ix):
            _check_prob(p, f"x_given_ix[{i}]")
        for a, row in enumerate(self.y_given_x_iy):
            for b, p in enumerate(row):
                _check_prob(p, f"y_given_x_iy[{a}][{b}]")


@dataclass(frozen=True)
class ConfoundedCpts:
    """Bernoulli tables for the discrete fork x <- u -> y with instruments."""

    p_u: float = 0.5
    p_ix: float = 0.5
    p_iy: float = 0.5
    x_given_u_ix: tuple[tuple[float, float], tuple[float, float]] = ((0.1, 0.3), (0.7, 0.9))
    y_given_u_iy: tuple[tuple[float, float], tuple[float, float]] = ((0.1, 0.3), (0.7, 0.9))

    def __post_init__(self) -> None:
        _check_prob(self.p_u, "p_u")
        _check_prob(self.p_ix, "p_ix")
        _check_prob(self.p_iy, "p_iy")
        for label, table in (("x_given_u_ix", self.x_given_u_ix), ("y_given_u_iy", self.y_given_u_iy)):
            for a, row in enumerate(table):
                for b, p in enumerate(row):
                    _check_prob(p, f"{label}[{a}][{b}]")


@dataclass(frozen=True)
class ScmParams:
    """Coefficients and scales of the continuous structural equations.

    x = alpha0 + alpha * ix (+ delta * u) + eps_x
    y = beta0 + beta * x            (chain)
    y = beta0 + gamma * u           (confounded), each plus eps_y

    ``sigma_i`` and ``sigma_u`` set the latent scales (a two-point latent
    takes the values +/- its scale, so its variance is the scale squared);
    their defaults put the latent separation at three noise standard
    deviations, which is what makes the cluster structure recoverable.
    Noise scales may be zero (exact deterministic mechanisms). ``cpts``
    carries the discrete tables when the discrete generators are used.
    """

    alpha0: float = 0.0
    alpha: float = 1.0
    beta0: float = 0.0
    beta: float = 1.0
    gamma: float = 1.0
    delta: float = 1.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    sigma_u: float = 3.0
    sigma_i: float = 3.0
    latent_law: str = "binary"
    cpts: ChainCpts | ConfoundedCpts | None = None

    def __post_init__(self) -> None:
        for name in ("sigma_x", "sigma_y", "sigma_u", "sigma_i"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.latent_law not in ("binary", "gaussian"):
            raise ValueError(f"latent_law must be 'binary' or 'gaussian', got {self.latent_law!r}")


@dataclass(frozen=True, eq=False)
class SyntheticSample:
    """Observations plus the generating latents for one replicate."""

    x: np.ndarray
    y: np.ndarray
    i_x: np.ndarray
    i_y: np.ndarray
    u: np.ndarray | None
    scenario: Scenario
    setting: Setting

    def to_datapair(self) -> DataPair:
        return DataPair(self.x, self.y)


def _latent(params: ScmParams, scale: float, rng: RngStream, n: int) -> np.ndarray:
    """A latent parent: symmetric two-point selector (variance scale^2) or
    Gaussian, per ``params.latent_law``."""
    if params.latent_law == "binary":
        return np.where(rng.random(n) < 0.5, -scale, scale)
    return rng.normal(0.0, scale, n)


def generate_chain_continuous(n: int, params: ScmParams, rng: RngStream) -> SyntheticSample:
    """Continuous chain: ix -> x -> y, iy = systematic part of y + noise."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    i_x = _latent(params, params.sigma_i, rng, n)
    eps_x = rng.normal(0.0, params.sigma_x, n)
    eps_y = rng.normal(0.0, params.sigma_y, n)
    eta = rng.normal(0.0, params.sigma_i, n)
    x = params.alpha0 + params.alpha * i_x + eps_x
    y_systematic = params.beta0 + params.beta * x
    y = y_systematic + eps_y
    i_y = y_systematic + eta
    return SyntheticSample(
        x=x, y=y, i_x=i_x, i_y=i_y, u=None,
        scenario=Scenario.CHAIN, setting=Setting.CONTINUOUS_GAUSSIAN,
    )


def generate_confounded_continuous(n: int, params: ScmParams, rng: RngStream) -> SyntheticSample:
    """Continuous fork: u drives both x and y; no x -> y edge."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u = _latent(params, params.sigma_u, rng, n)
    i_x = _latent(params, params.sigma_i, rng, n)
    eps_x = rng.normal(0.0, params.sigma_x, n)
    eps_y = rng.normal(0.0, params.sigma_y, n)
    eta = rng.normal(0.0, params.sigma_i, n)
    x = params.alpha0 + params.alpha * i_x + params.delta * u + eps_x
    y_systematic = params.beta0 + params.gamma * u
    y = y_systematic + eps_y
    i_y = y_systematic + eta
    return SyntheticSample(
        x=x, y=y, i_x=i_x, i_y=i_y, u=u,
        scenario=Scenario.CONFOUNDED, setting=Setting.CONTINUOUS_GAUSSIAN,
    )


def _bernoulli(p: np.ndarray | float, rng: RngStream, n: int) -> np.ndarray:
    return (rng.random(n) < p).astype(np.float64)


def generate_chain_discrete(n: int, params: ScmParams, rng: RngStream) -> SyntheticSample:
    """Ancestral sampling of the binary network ix -> x -> y <- iy."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cpts = params.cpts if params.cpts is not None else ChainCpts()
    if not isinstance(cpts, ChainCpts):
        raise InvalidCpt(f"chain generator needs ChainCpts, got {type(cpts).__name__}")
    i_x = _bernoulli(cpts.p_ix, rng, n)
    i_y = _bernoulli(cpts.p_iy, rng, n)
    p_x = np.asarray(cpts.x_given_ix)[i_x.astype(np.intp)]
    x = _bernoulli(p_x, rng, n)
    p_y = np.asarray(cpts.y_given_x_iy)[x.astype(np.intp), i_y.astype(np.intp)]
    y = _bernoulli(p_y, rng, n)
    return SyntheticSample(
        x=x, y=y, i_x=i_x, i_y=i_y, u=None,
        scenario=Scenario.CHAIN, setting=Setting.DISCRETE_BINARY,
    )


def generate_confounded_discrete(n: int, params: ScmParams, rng: RngStream) -> SyntheticSample:
    """Ancestral sampling of the binary network x <- u -> y with instruments."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cpts = params.cpts if params.cpts is not None else ConfoundedCpts()
    if not isinstance(cpts, ConfoundedCpts):
        raise InvalidCpt(f"confounded generator needs ConfoundedCpts, got {type(cpts).__name__}")
    u = _bernoulli(cpts.p_u, rng, n)
    i_x = _bernoulli(cpts.p_ix, rng, n)
    i_y = _bernoulli(cpts.p_iy, rng, n)
    p_x = np.asarray(cpts.x_given_u_ix)[u.astype(np.intp), i_x.astype(np.intp)]
    x = _bernoulli(p_x, rng, n)
    p_y = np.asarray(cpts.y_given_u_iy)[u.astype(np.intp), i_y.astype(np.intp)]
    y = _bernoulli(p_y, rng, n)
    return SyntheticSample(
        x=x, y=y, i_x=i_x, i_y=i_y, u=u,
        scenario=Scenario.CONFOUNDED, setting=Setting.DISCRETE_BINARY,
    )


_GENERATORS = {
    (Scenario.CHAIN, Setting.CONTINUOUS_GAUSSIAN): generate_chain_continuous,
    (Scenario.CHAIN, Setting.DISCRETE_BINARY): generate_chain_discrete,
    (Scenario.CONFOUNDED, Setting.CONTINUOUS_GAUSSIAN): generate_confounded_continuous,
    (Scenario.CONFOUNDED, Setting.DISCRETE_BINARY): generate_confounded_discrete,
}


def generate(
    scenario: Scenario, setting: Setting, n: int, params: ScmParams, rng: RngStream
) -> SyntheticSample:
    """Dispatch to the scenario/setting generator."""
    return _GENERATORS[(scenario, setting)](n, params, rng)


def _write_vector(path: Path, v: np.ndarray) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for value in v:
            fh.write(f"{value:.12g}\n")


def write_sample(sample: SyntheticSample, out_dir: Path | str) -> list[Path]:
    """Write a sample in the two-column layout the benchmark loader reads.

    ``data.txt`` holds x and y; the latents go to side files. Returns the
    written paths in a fixed order.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data_path = out / "data.txt"
    with open(data_path, "w", encoding="ascii") as fh:
        for xi, yi in zip(sample.x, sample.y):
            fh.write(f"{xi:.12g} {yi:.12g}\n")
    paths = [data_path]
    for name, vec in (("i_x.txt", sample.i_x), ("i_y.txt", sample.i_y), ("u.txt", sample.u)):
        if vec is not None:
            path = out / name
            _write_vector(path, vec)
            paths.append(path)
    return paths
