"""Finite state spaces, beliefs, events, and the Bayesian update primitive.

Everything downstream treats beliefs as probability vectors over a fixed,
finite, labeled state space and events as subsets of state indices. All
types are immutable values and all operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "InertiaError",
    "InvalidBelief",
    "EmptySupport",
    "NullEvent",
    "NumericPolicy",
    "DEFAULT_POLICY",
    "StateSpace",
    "Event",
    "Belief",
    "support",
    "bayes_update",
    "bayes_update_weights",
    "event_mass",
    "all_nonempty_events",
]


class InertiaError(Exception):
    """Base class for every error raised by this package."""


class InvalidBelief(InertiaError):
    """Probability vector fails nonnegativity or drifts too far from sum 1."""


class EmptySupport(InertiaError):
    """All entries of a belief are numerically zero."""


class NullEvent(InertiaError):
    """Bayesian update requested on an event with numerically zero mass."""


@dataclass(frozen=True)
class NumericPolicy:
    """Shared numeric tolerances.

    null_tol: mass at or below this is treated as zero (null events, supports).
    solve_tol: solver convergence threshold.
    cmp_tol: tolerance for equality of beliefs.
    """

    null_tol: float = 1e-12
    solve_tol: float = 1e-10
    cmp_tol: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.null_tol <= self.cmp_tol:
            raise ValueError("need 0 < null_tol <= cmp_tol")
        if self.solve_tol <= 0.0:
            raise ValueError("solve_tol must be positive")


DEFAULT_POLICY = NumericPolicy()


@dataclass(frozen=True)
class Event:
    """Nonempty subset of state indices, canonicalized to a sorted tuple.

    Canonical form makes equality structural, so events can key dicts in
    the audit modules.
    """

    indices: tuple[int, ...]

    def __init__(self, indices: Iterable[int]) -> None:
        canon = tuple(sorted(set(int(i) for i in indices)))
        if not canon:
            raise ValueError("event must be nonempty")
        if canon[0] < 0:
            raise ValueError("state indices must be nonnegative")
        object.__setattr__(self, "indices", canon)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, index: int) -> bool:
        return index in self.indices

    def issubset(self, other: "Event") -> bool:
        return set(self.indices) <= set(other.indices)

    def mask(self, n: int) -> np.ndarray:
        """Boolean indicator of length n."""
        if self.indices[-1] >= n:
            raise ValueError(f"event {self.indices} out of range for n={n}")
        m = np.zeros(n, dtype=bool)
        m[list(self.indices)] = True
        return m

    def labels(self, space: "StateSpace") -> tuple[str, ...]:
        return tuple(space.labels[i] for i in self.indices)

    def sort_key(self) -> tuple:
        return (len(self.indices), self.indices)


@dataclass(frozen=True)
class StateSpace:
    """Ordered, distinct state labels; n is fixed for the life of a model."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]) -> None:
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise ValueError("state space must have at least one state")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be distinct")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown state label {label!r}") from None

    def event(self, *labels: str) -> Event:
        return Event(self.index(x) for x in labels)

    def full_event(self) -> Event:
        return Event(range(self.n))

    def all_events(self) -> Iterator[Event]:
        """All nonempty events, smallest first, in a deterministic order."""
        return all_nonempty_events(self.n)


def all_nonempty_events(n: int) -> Iterator[Event]:
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            yield Event(combo)


class Belief:
    """Probability vector over a finite state space.

    Construction renormalizes small drift (|sum - 1| <= 1e-9) and rejects
    larger deviations; entries below -1e-12 are rejected, tiny negative
    rounding noise is clamped to zero. The underlying array is read-only.
    """

    __slots__ = ("probs",)

    _RENORM_TOL = 1e-9
    _NEG_TOL = -1e-12

    def __init__(self, probs: Iterable[float]) -> None:
        p = np.array(probs, dtype=float).reshape(-1)
        if p.size < 1:
            raise InvalidBelief("belief must have at least one entry")
        if not np.all(np.isfinite(p)):
            raise InvalidBelief("belief entries must be finite")
        if np.any(p < self._NEG_TOL):
            raise InvalidBelief(f"negative entries in {p}")
        p = np.maximum(p, 0.0)
        total = float(p.sum())
        if abs(total - 1.0) > self._RENORM_TOL:
            raise InvalidBelief(f"entries sum to {total}, not 1")
        p = p / total
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Belief is immutable")

    @property
    def n(self) -> int:
        return self.probs.size

    def __getitem__(self, i: int) -> float:
        return float(self.probs[i])

    def __repr__(self) -> str:
        return f"Belief({np.array2string(self.probs, separator=', ')})"

    def approx_eq(self, other: "Belief", tol: float = DEFAULT_POLICY.cmp_tol) -> bool:
        return self.n == other.n and bool(np.max(np.abs(self.probs - other.probs)) <= tol)

    @staticmethod
    def point_mass(i: int, n: int) -> "Belief":
        p = np.zeros(n)
        p[i] = 1.0
        return Belief(p)

    @staticmethod
    def uniform(n: int) -> "Belief":
        return Belief(np.full(n, 1.0 / n))


def support(b: Belief, policy: NumericPolicy = DEFAULT_POLICY) -> Event:
    """Indices carrying mass above null_tol; EmptySupport if none do."""
    idx = np.flatnonzero(b.probs > policy.null_tol)
    if idx.size == 0:
        raise EmptySupport("belief has no entry above null_tol")
    return Event(idx.tolist())


def event_mass(b: Belief, event: Event) -> float:
    """Total probability the belief assigns to the event."""
    return float(b.probs[list(event.indices)].sum())


def bayes_update_weights(
    weights: np.ndarray, event: Event, null_tol: float = DEFAULT_POLICY.null_tol
) -> Belief:
    """Bayesian update of an arbitrary nonnegative weight vector on an event.

    The weights need not sum to one; this is the normalized restriction
    used by every closed-form posterior.
    """
    w = np.asarray(weights, dtype=float)
    mask = event.mask(w.size)
    mass = float(w[mask].sum())
    if mass <= null_tol:
        raise NullEvent(f"event {event.indices} has weight {mass} <= {null_tol}")
    out = np.where(mask, w, 0.0) / mass
    return Belief(out)


def bayes_update(b: Belief, event: Event, policy: NumericPolicy = DEFAULT_POLICY) -> Belief:
    """Bayesian update of a belief; NullEvent when the event mass is null."""
    return bayes_update_weights(b.probs, event, policy.null_tol)
