"""Complete updating rules built from ordered belief ladders.

A ladder conditions on the first level that gives the observed event enough
mass. The module covers the partition (chain-rule) case, its thresholded
generalization, the two-branch hypothesis-testing rule, extraction of a
ladder from observed conditionals, and the constructive mapping from a
thresholded ladder to an equivalent hypothesis-testing model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_POLICY,
    Belief,
    Event,
    InertiaError,
    NumericPolicy,
    all_nonempty_events,
    bayes_update,
    event_mass,
    support,
)
from .distances import SigmaSpec, _beta_batch
from .models import UpdateFamily
from .audits import AuditReport, check_conditional_consistency

__all__ = [
    "LadderError",
    "Unreachable",
    "NotCPS",
    "ConstructionFailed",
    "Ladder",
    "HTModel",
    "cps_posterior",
    "ecps_posterior",
    "ht_posterior",
    "ladder_from_family",
    "check_cps",
    "ht_from_ecps",
    "LadderDistance",
    "cps_distance",
]


class LadderError(InertiaError):
    """Ladder shape does not meet the rule's requirements."""


class Unreachable(InertiaError):
    """No level gives the event enough mass."""


class NotCPS(InertiaError):
    """Observed family breaks the chain rule; carries the offending triple."""

    def __init__(self, state: int, small: Event, big: Event, observed: float, expected: float):
        self.witness = (state, small, big)
        super().__init__(
            f"chain rule fails at state {state} for F={small.indices} within "
            f"E={big.indices}: got {observed:.12g}, expected {expected:.12g}"
        )


class ConstructionFailed(InertiaError):
    """The weight-band construction could not satisfy its inequalities."""


@dataclass(frozen=True)
class Ladder:
    """Ordered beliefs; conditioning walks down until the event has mass."""

    levels: tuple[Belief, ...]

    def __init__(self, levels) -> None:
        levels = tuple(levels)
        if not levels:
            raise LadderError("ladder needs at least one level")
        n = levels[0].n
        if any(b.n != n for b in levels):
            raise LadderError("all levels must share one state space")
        object.__setattr__(self, "levels", levels)

    @property
    def n(self) -> int:
        return self.levels[0].n

    def __len__(self) -> int:
        return len(self.levels)

    def _supports(self, policy: NumericPolicy) -> list[set[int]]:
        return [set(support(b, policy).indices) for b in self.levels]

    def covers_space(self, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
        return set().union(*self._supports(policy)) == set(range(self.n))

    def is_partition(self, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
        sups = self._supports(policy)
        total = sum(len(s) for s in sups)
        return total == self.n and set().union(*sups) == set(range(self.n))

    def first_level(self, event: Event, threshold: float) -> int | None:
        for k, belief in enumerate(self.levels):
            if event_mass(belief, event) > threshold:
                return k
        return None


def cps_posterior(ladder: Ladder, event: Event, policy: NumericPolicy = DEFAULT_POLICY) -> Belief:
    """Condition on the first level giving the event positive mass.

    Requires disjoint level supports partitioning the space (the zero
    threshold variant), which also guarantees every event is reachable.
    """
    if not ladder.is_partition(policy):
        raise LadderError("partition ladder required: disjoint supports covering the space")
    k = ladder.first_level(event, policy.null_tol)
    if k is None:  # impossible for a valid partition ladder
        raise Unreachable(f"no level gives event {event.indices} positive mass")
    return bayes_update(ladder.levels[k], event, policy)


def ecps_posterior(
    ladder: Ladder, eps: float, event: Event, policy: NumericPolicy = DEFAULT_POLICY
) -> Belief:
    """Condition on the first level whose event mass strictly exceeds eps.

    Level supports may overlap; only coverage of the space is required.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    if not ladder.covers_space(policy):
        raise LadderError("level supports must cover the state space")
    k = ladder.first_level(event, max(eps, policy.null_tol))
    if k is None:
        raise Unreachable(f"no level exceeds {eps} on event {event.indices}")
    return bayes_update(ladder.levels[k], event, policy)


@dataclass(frozen=True)
class HTModel:
    """Two-branch rule: Bayes above the threshold, else maximum likelihood
    selection of a new belief from a finite second-order weight map."""

    prior: Belief
    atoms: tuple[tuple[Belief, float], ...]
    epsilon: float

    def __init__(self, prior: Belief, atoms, epsilon: float) -> None:
        atoms = tuple((b, float(w)) for b, w in atoms)
        if not atoms:
            raise ValueError("need at least one atom")
        weights = np.array([w for _, w in atoms])
        if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError("atom weights must be positive and sum to 1")
        if not 0.0 <= epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")
        top = int(np.argmax(weights))
        others = np.delete(weights, top)
        if others.size and others.max() >= weights[top]:
            raise ValueError("the prior must be the unique weight maximizer")
        if not atoms[top][0].approx_eq(prior):
            raise ValueError("the top-weight atom must equal the prior")
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "epsilon", float(epsilon))


def ht_posterior(model: HTModel, event: Event, policy: NumericPolicy = DEFAULT_POLICY) -> Belief:
    """Bayes when the prior mass beats the threshold, else the atom
    maximizing weight times event mass (ties keep the first atom inserted)."""
    if event_mass(model.prior, event) > max(model.epsilon, policy.null_tol):
        return bayes_update(model.prior, event, policy)
    best = None
    best_score = 0.0
    for belief, weight in model.atoms:
        score = weight * event_mass(belief, event)
        if score > best_score:
            best, best_score = belief, score
    if best is None or best_score <= policy.null_tol:
        raise Unreachable(f"every atom gives event {event.indices} zero likelihood")
    return bayes_update(best, event, policy)


def check_cps(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Chain-rule audit of a family; identical to conditional consistency."""
    return check_conditional_consistency(fam, policy)


def ladder_from_family(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> Ladder:
    """Extract the level beliefs a chain-rule family is built from.

    Peels the space: level k is the family's conditional on whatever states
    all earlier levels declared null. Requires the family to contain those
    residual events and to pass the chain-rule audit.
    """
    report = check_conditional_consistency(fam, policy)
    if not report.passed:
        v = report.violations[0]
        raise NotCPS(v.states[0], v.events[0], v.events[1], v.observed, v.expected)

    remaining = set(range(fam.space.n))
    levels: list[Belief] = []
    while remaining:
        residual = Event(sorted(remaining))
        if residual not in fam:
            raise ValueError(f"family is missing the residual event {residual.indices}")
        level = fam[residual]
        sp = set(support(level, policy).indices)
        if not sp <= remaining:
            raise NotCPS(min(sp - remaining), residual, fam.space.full_event(), 1.0, 0.0)
        levels.append(level)
        remaining -= sp
    return Ladder(tuple(levels))


def _atom_entries(ladder: Ladder, eps: float, policy: NumericPolicy):
    """Classify all nonempty events by level and build one atom per distinct
    conditional: the top level contributes only the prior itself (its other
    events ride the Bayes branch), deeper levels contribute the normalized
    restriction of the level to each distinct support intersection."""
    threshold = max(eps, policy.null_tol)
    classified: dict[Event, tuple[int, tuple[int, ...]]] = {}
    by_level: dict[int, dict[tuple[int, ...], None]] = {}
    level_supports = [set(support(b, policy).indices) for b in ladder.levels]
    for event in all_nonempty_events(ladder.n):
        k = ladder.first_level(event, threshold)
        if k is None:
            continue
        tee = tuple(sorted(level_supports[k] & set(event.indices)))
        classified[event] = (k, tee)
        by_level.setdefault(k, {})[tee] = None

    entries: list[tuple[int, tuple[int, ...], Belief]] = [
        (0, tuple(sorted(level_supports[0])), ladder.levels[0])
    ]
    for k in sorted(by_level):
        if k == 0:
            continue
        probs = ladder.levels[k].probs
        # supersets first: within a level, an atom whose support contains
        # another's must carry strictly more weight (inclusion is acyclic)
        for tee in sorted(by_level[k], key=lambda t: (-len(t), t)):
            raw = np.zeros(ladder.n)
            raw[list(tee)] = probs[list(tee)]
            entries.append((k, tee, Belief(raw / raw.sum())))
    return entries, classified


def ht_from_ecps(ladder: Ladder, eps: float, policy: NumericPolicy = DEFAULT_POLICY) -> HTModel:
    """Build a hypothesis-testing model replicating a thresholded ladder.

    Weights form a single strictly decreasing sequence, levels ascending and
    support-supersets first within a level, interpolated from 1 down to
    (1+q)/2 where q is the largest conditional mass on the wrong side of any
    required inequality: within a level, one atom's mass on another's event
    class; across levels, a shallower atom's mass on a deeper event. Keeping
    the smallest/largest weight ratio above q makes every maximum-likelihood
    comparison come out right; the threshold is the ladder's own eps, so a
    zero-threshold ladder yields a zero-threshold model. The equivalence is
    verified exhaustively before returning.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    if not ladder.covers_space(policy):
        raise LadderError("level supports must cover the state space")

    entries, classified = _atom_entries(ladder, eps, policy)

    seen: dict[tuple, int] = {}
    for k, _, belief in entries:
        key = tuple(np.round(belief.probs, 12))
        if key in seen:
            raise ConstructionFailed(
                f"levels {seen[key]} and {k} induce the same conditional; "
                "atom weights cannot satisfy both bands"
            )
        seen[key] = k

    # The winning atom for an event at level k must beat, weight times event
    # mass, every shallower atom and every same-level atom of a non-nested
    # class. Nested same-level classes are handled by the strict ordering.
    ratio_floor = 0.0
    witness = ""
    for event, (k, tee) in classified.items():
        if k == 0:
            continue  # Bayes branch
        for k_i, tee_i, atom_i in entries:
            if k_i > k or (k_i == k and set(tee_i) <= set(tee)):
                continue
            mass = event_mass(atom_i, event)
            if mass > ratio_floor:
                ratio_floor = mass
                witness = (
                    f"atom at level {k_i} keeps mass {mass:.6g} on the "
                    f"level-{k} event {event.indices}"
                )
    if ratio_floor >= 1.0 - 1e-9:
        raise ConstructionFailed(f"band inequality unsatisfiable: {witness}")

    count = len(entries)
    low = max((1.0 + ratio_floor) / 2.0, 0.5)
    if count == 1:
        weights = np.array([1.0])
    else:
        weights = 1.0 - (1.0 - low) * np.arange(count) / (count - 1)
    weights = weights / weights.sum()

    model = HTModel(
        prior=ladder.levels[0],
        atoms=tuple((belief, w) for (_, _, belief), w in zip(entries, weights)),
        epsilon=eps,
    )

    for event, (k, _) in classified.items():
        want = bayes_update(ladder.levels[k], event, policy)
        got = ht_posterior(model, event, policy)
        if not got.approx_eq(want, max(policy.cmp_tol, 1e-9)):
            raise ConstructionFailed(
                f"construction disagrees with the ladder on event {event.indices}"
            )
    return model


@dataclass(frozen=True)
class LadderDistance:
    """Distance whose constrained minimizer reproduces the partition-ladder rule.

    Value is the level divergence plus a per-level jump penalty, where the
    level is the first one whose support meets the candidate's. Plugs into
    the generic solver through `evaluate_candidates`.
    """

    ladder: Ladder
    sigma: SigmaSpec

    @property
    def jump_penalty(self) -> float:
        return float(self.sigma(1.0)) + abs(float(self.sigma(0.0)))

    def evaluate_candidates(self, prior: Belief, cands: np.ndarray, policy: NumericPolicy) -> np.ndarray:
        cands = np.atleast_2d(cands)
        level_probs = np.stack([b.probs for b in self.ladder.levels])
        carrier = (cands > policy.null_tol).astype(float)
        level_mass = carrier @ level_probs.T  # (rows, levels)
        alive = level_mass > policy.null_tol
        if not np.all(alive.any(axis=1)):
            raise LadderError("candidate support meets no ladder level")
        k_star = np.argmax(alive, axis=1)
        out = np.empty(cands.shape[0])
        for k in np.unique(k_star):
            rows = k_star == k
            out[rows] = _beta_batch(level_probs[k], cands[rows], self.sigma) + k * self.jump_penalty
        return out


def cps_distance(ladder: Ladder, sigma: SigmaSpec, policy: NumericPolicy = DEFAULT_POLICY) -> LadderDistance:
    """Distance evaluator for a partition ladder (Bayes within a level, a
    fixed penalty per level skipped)."""
    if not ladder.is_partition(policy):
        raise LadderError("partition ladder required")
    return LadderDistance(ladder=ladder, sigma=sigma)
