"""Catalog of subjective distance functions between beliefs.

A distance is evaluated pointwise here; constrained minimization lives in
`solver`. The catalog is closed: two concave generators (log-shifted and
power) and five distance families built on them. Distortion maps are shared
with the signal and persuasion modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .core import DEFAULT_POLICY, Belief, InertiaError, NumericPolicy

__all__ = [
    "DomainError",
    "TableMiss",
    "LogShifted",
    "PowerRenyi",
    "SigmaSpec",
    "sigma_eval",
    "Identity",
    "Power",
    "Sigmoid",
    "ConfirmationBias",
    "Table",
    "DeltaSpec",
    "DistortionFn",
    "BayesianDivergence",
    "Distorted",
    "Mixed",
    "SupportDependent",
    "Euclidean",
    "DistanceSpec",
    "bayesian_function",
    "distance_eval",
    "candidate_objective",
]

# Candidates are clipped here before sigma-ratio evaluation so that finite
# differences never produce negative ratios; outputs keep exact zeros.
_RATIO_CLIP = 1e-14


class DomainError(InertiaError, ValueError):
    """Generator evaluated outside its domain."""


class TableMiss(InertiaError, KeyError):
    """Table distortion queried at a probability it was not fitted on."""


# ---------------------------------------------------------------------------
# Concave generators


@dataclass(frozen=True)
class LogShifted:
    """sigma(x) = ln(a*x + b); strictly increasing, strictly concave, finite at 0."""

    a: float = 1.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if self.a <= 0 or self.b <= 0:
            raise ValueError("LogShifted needs a > 0 and b > 0")

    def __call__(self, x):
        return np.log(self.a * np.asarray(x, dtype=float) + self.b)


@dataclass(frozen=True)
class PowerRenyi:
    """sigma(x) = (x**alpha - 1) / (1 - alpha) for alpha in (0, 1)."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("PowerRenyi needs alpha in (0, 1)")

    def __call__(self, x):
        a = self.alpha
        return (np.power(np.asarray(x, dtype=float), a) - 1.0) / (1.0 - a)


SigmaSpec = Union[LogShifted, PowerRenyi]


def sigma_eval(sigma: SigmaSpec, x: float) -> float:
    """Evaluate a generator at a nonnegative point."""
    if np.any(np.asarray(x) < 0):
        raise DomainError(f"sigma is defined on [0, inf), got {x}")
    return float(sigma(x))


# ---------------------------------------------------------------------------
# Distortion maps [0, 1] -> R+ (prior distortions delta; also the f/g maps
# of the signal-structure module)


@dataclass(frozen=True)
class Identity:
    def __call__(self, x):
        return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class Power:
    exponent: float

    def __post_init__(self) -> None:
        if self.exponent <= 0:
            raise ValueError("Power distortion needs a positive exponent")

    def __call__(self, x):
        return np.power(np.asarray(x, dtype=float), self.exponent)


@dataclass(frozen=True)
class Sigmoid:
    """delta(x) = 1 / (1 + exp(a*(x0 - x))); strictly increasing, positive."""

    a: float
    x0: float = 0.5

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise ValueError("Sigmoid distortion needs a > 0")

    def __call__(self, x):
        return 1.0 / (1.0 + np.exp(self.a * (self.x0 - np.asarray(x, dtype=float))))


@dataclass(frozen=True)
class ConfirmationBias:
    """delta(x) = x + b * 1{x > 1/2}; boosts states already believed likely."""

    b: float

    def __post_init__(self) -> None:
        if self.b <= 0:
            raise ValueError("ConfirmationBias needs b > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x + self.b * (x > 0.5)


@dataclass(frozen=True)
class Table:
    """Exact-match lookup on stored probabilities (audit-fitted tables).

    No interpolation: an unseen probability raises TableMiss rather than
    silently changing posteriors.
    """

    points: tuple[tuple[float, float], ...]

    _MATCH_TOL = 1e-12

    def __init__(self, points) -> None:
        pts = tuple(sorted((float(p), float(v)) for p, v in points))
        if not pts:
            raise ValueError("Table needs at least one point")
        if any(v < 0 for _, v in pts):
            raise ValueError("Table values must be nonnegative")
        object.__setattr__(self, "points", pts)

    def lookup(self, x: float) -> float:
        for p, v in self.points:
            if abs(p - x) <= self._MATCH_TOL:
                return v
        raise TableMiss(f"no table entry for probability {x}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return np.float64(self.lookup(float(x)))
        return np.array([self.lookup(float(v)) for v in x])


DeltaSpec = Union[Identity, Power, Sigmoid, ConfirmationBias, Table]
# Signal-structure distortions are the subset usable on likelihoods/priors.
DistortionFn = Union[Identity, Power, Table]


# ---------------------------------------------------------------------------
# Distance specs


@dataclass(frozen=True)
class BayesianDivergence:
    """d_mu(pi) = beta_sigma(mu, pi); minimizer on any non-null event is Bayes."""

    sigma: SigmaSpec = LogShifted()


@dataclass(frozen=True)
class Distorted:
    """Bayesian divergence anchored at the distorted prior delta(mu)."""

    delta: DeltaSpec
    sigma: SigmaSpec = LogShifted()


@dataclass(frozen=True)
class Mixed:
    """Bayesian divergence anchored at mu + rho; complete when sp(mu) u sp(rho) = S."""

    rho: Belief
    sigma: SigmaSpec = LogShifted()


@dataclass(frozen=True)
class SupportDependent:
    """Bayes when the candidate support carries prior mass, else switch to mu_star.

    The off-support branch is shifted by sigma(1) + |sigma(0)| so every
    on-support value beats every off-support value.
    """

    mu_star: Belief
    sigma: SigmaSpec = LogShifted()


@dataclass(frozen=True)
class Euclidean:
    """Plain 2-norm between prior and candidate."""


DistanceSpec = Union[BayesianDivergence, Distorted, Mixed, SupportDependent, Euclidean]


def bayesian_function(x, y, sigma: SigmaSpec) -> float:
    """beta_sigma(x, y) = -sum_i x_i * sigma(y_i / x_i) over nonnegative vectors.

    Terms with x_i = 0 contribute 0 (the relevant limit; sums in the closed
    forms run over the anchor's support only).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("shape mismatch")
    mask = x > 0
    if not mask.any():
        return 0.0
    ratios = np.maximum(y[mask], 0.0) / x[mask]
    return float(-(x[mask] * sigma(ratios)).sum())


def _beta_batch(anchor: np.ndarray, cands: np.ndarray, sigma: SigmaSpec) -> np.ndarray:
    mask = anchor > 0
    if not mask.any():
        return np.zeros(cands.shape[0])
    ratios = np.clip(cands[:, mask], _RATIO_CLIP, None) / anchor[mask]
    return -(sigma(ratios) @ anchor[mask])


def candidate_objective(
    d: DistanceSpec, prior: Belief, policy: NumericPolicy = DEFAULT_POLICY
) -> Callable[[np.ndarray], np.ndarray]:
    """Batch evaluator: rows of a (m, n) candidate matrix -> (m,) distances.

    Accepts raw, possibly slightly infeasible rows (finite-difference probes);
    sigma ratios are clipped at 1e-14 internally. Duck-types on objects that
    provide their own `evaluate_candidates` (the ladder distance).
    """
    mu = prior.probs
    if isinstance(d, Euclidean):
        return lambda C: np.linalg.norm(np.atleast_2d(C) - mu, axis=1)
    if isinstance(d, BayesianDivergence):
        return lambda C: _beta_batch(mu, np.atleast_2d(C), d.sigma)
    if isinstance(d, Distorted):
        anchor = np.asarray(d.delta(mu), dtype=float)
        return lambda C: _beta_batch(anchor, np.atleast_2d(C), d.sigma)
    if isinstance(d, Mixed):
        anchor = mu + d.rho.probs
        return lambda C: _beta_batch(anchor, np.atleast_2d(C), d.sigma)
    if isinstance(d, SupportDependent):
        star = d.mu_star.probs
        shift = float(d.sigma(1.0)) + abs(float(d.sigma(0.0)))

        def eval_sd(C: np.ndarray) -> np.ndarray:
            C = np.atleast_2d(C)
            on_support = (np.where(C > policy.null_tol, 1.0, 0.0) @ mu) > policy.null_tol
            out = np.empty(C.shape[0])
            if on_support.any():
                out[on_support] = _beta_batch(mu, C[on_support], d.sigma)
            if (~on_support).any():
                out[~on_support] = _beta_batch(star, C[~on_support], d.sigma) + shift
            return out

        return eval_sd
    if hasattr(d, "evaluate_candidates"):
        return lambda C: d.evaluate_candidates(prior, np.atleast_2d(C), policy)
    raise TypeError(f"unknown distance spec {d!r}")


def distance_eval(
    d: DistanceSpec,
    prior: Belief,
    candidate: Belief,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    """Subjective distance from the prior to a candidate belief."""
    if prior.n != candidate.n:
        raise ValueError("prior and candidate live on different spaces")
    return float(candidate_objective(d, prior, policy)(candidate.probs[None, :])[0])
