"""User-facing updating models: a prior bound to a distance, queried per event.

`update_family` is the bridge into the audit world: audits never see
distances, only the prior and the map from events to conditional beliefs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .core import (
    DEFAULT_POLICY,
    Belief,
    Event,
    InertiaError,
    NumericPolicy,
    StateSpace,
    support,
)
from .distances import DistanceSpec, Mixed, SupportDependent
from .solver import DEFAULT_SOLVER, SolverConfig
from .solver import posterior as solve_posterior

__all__ = [
    "IUModel",
    "WIUModel",
    "UpdateFamily",
    "UpdateFamilyError",
    "iu_posterior",
    "wiu_posterior",
    "update_family",
]


def _check_coverage(space: StateSpace, prior: Belief, other: Belief, policy: NumericPolicy, what: str) -> None:
    covered = np.union1d(
        np.array(support(prior, policy).indices), np.array(support(other, policy).indices)
    )
    if covered.size != space.n:
        raise ValueError(f"sp(prior) u sp({what}) must cover the whole state space")


@dataclass(frozen=True)
class IUModel:
    """A prior bound to a subjective distance on a labeled state space."""

    space: StateSpace
    prior: Belief
    distance: DistanceSpec
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self) -> None:
        if self.prior.n != self.space.n:
            raise ValueError("prior length does not match the state space")
        # Complete-updating coverage invariants bind at model-binding time.
        if isinstance(self.distance, Mixed):
            if self.distance.rho.n != self.space.n:
                raise ValueError("rho length does not match the state space")
            _check_coverage(self.space, self.prior, self.distance.rho, self.policy, "rho")
        if isinstance(self.distance, SupportDependent):
            if self.distance.mu_star.n != self.space.n:
                raise ValueError("mu_star length does not match the state space")
            _check_coverage(self.space, self.prior, self.distance.mu_star, self.policy, "mu_star")


@dataclass(frozen=True)
class WIUModel:
    """Weighted inertial updating: gamma of the prior survives every update."""

    base: IUModel
    gamma: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")


def iu_posterior(model: IUModel, event: Event, cfg: SolverConfig = DEFAULT_SOLVER) -> Belief:
    """Conditional belief for one event; supported inside the event."""
    return solve_posterior(model.distance, model.prior, event, cfg, model.policy)


def wiu_posterior(model: WIUModel, event: Event, cfg: SolverConfig = DEFAULT_SOLVER) -> Belief:
    """gamma * prior + (1 - gamma) * distance minimizer over the event."""
    inner = iu_posterior(model.base, event, cfg)
    g = model.gamma
    return Belief(g * model.base.prior.probs + (1.0 - g) * inner.probs)


@dataclass(frozen=True)
class UpdateFamily:
    """Observed conditional beliefs: a prior plus a map event -> posterior.

    This is the sole input format of every axiom audit.
    """

    space: StateSpace
    prior: Belief
    posteriors: Mapping[Event, Belief]

    def __post_init__(self) -> None:
        if self.prior.n != self.space.n:
            raise ValueError("prior length does not match the state space")
        for event, belief in self.posteriors.items():
            if belief.n != self.space.n:
                raise ValueError(f"posterior for {event.indices} has wrong length")
            if event.indices[-1] >= self.space.n:
                raise ValueError(f"event {event.indices} out of range")
        object.__setattr__(self, "posteriors", dict(self.posteriors))

    def events(self) -> list[Event]:
        return sorted(self.posteriors, key=Event.sort_key)

    def __getitem__(self, event: Event) -> Belief:
        return self.posteriors[event]

    def __contains__(self, event: Event) -> bool:
        return event in self.posteriors

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events())


class UpdateFamilyError(InertiaError):
    """One or more events failed; failures are collected, not fail-fast."""

    def __init__(self, failures: dict[Event, Exception]):
        self.failures = failures
        parts = ", ".join(
            f"{e.indices}: {type(err).__name__}({err})" for e, err in failures.items()
        )
        super().__init__(f"posterior failed on {len(failures)} event(s): {parts}")


def update_family(
    model: IUModel | WIUModel,
    events: Iterable[Event],
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> UpdateFamily:
    """Batch-generate conditionals for a list of events.

    Per-event errors are collected and raised together so table generation
    reports every hole at once.
    """
    events = list(events)
    if not events:
        raise ValueError("need at least one event")
    base = model.base if isinstance(model, WIUModel) else model
    out: dict[Event, Belief] = {}
    failures: dict[Event, Exception] = {}
    for event in events:
        try:
            if isinstance(model, WIUModel):
                out[event] = wiu_posterior(model, event, cfg)
            else:
                out[event] = iu_posterior(model, event, cfg)
        except InertiaError as err:
            failures[event] = err
    if failures:
        raise UpdateFamilyError(failures)
    return UpdateFamily(space=base.space, prior=base.prior, posteriors=out)
