"""Revealed-preference audits over observed update families.

Every check is belief-level: the act-based postulates are tested through
their proof-level belief equivalents. Reports scan everything rather than
failing fast, and witnesses are ordered deterministically for test
stability.
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
    bayes_update,
    bayes_update_weights,
    event_mass,
    support,
)
from .distances import Table
from .models import UpdateFamily

__all__ = [
    "Violation",
    "AuditReport",
    "Inconsistent",
    "GammaMismatch",
    "CycleFound",
    "check_consequentialism",
    "check_dynamic_coherence",
    "check_dynamic_consistency",
    "check_conditional_consistency",
    "check_consistency_axiom",
    "check_iia",
    "check_monotonicity",
    "run_all_audits",
    "fit_distortion",
    "recover_wiu",
    "rank_certificate",
]

_RATIO_TOL = 1e-8


class Inconsistent(InertiaError):
    """Cross-event ratios disagree; no single distortion fits the family."""


class GammaMismatch(InertiaError):
    """Per-event mixing weights disagree (no common gamma)."""

    def __init__(self, gammas: dict[Event, float]):
        self.gammas = dict(gammas)
        listing = ", ".join(f"{e.indices}: {g:.12g}" for e, g in gammas.items())
        super().__init__(f"event-dependent mixing weights: {listing}")


class CycleFound(InertiaError):
    """Revealed preference cycles through distinct posteriors."""

    def __init__(self, events: tuple[Event, ...]):
        self.events = events
        super().__init__(
            "revealed-preference cycle with unequal posteriors through events "
            + ", ".join(str(e.indices) for e in events)
        )


@dataclass(frozen=True)
class Violation:
    """Structured witness: the events/states involved and the clashing values."""

    events: tuple[Event, ...] = ()
    states: tuple[int, ...] = ()
    observed: float | None = None
    expected: float | None = None
    note: str = ""


@dataclass(frozen=True)
class AuditReport:
    axiom: str
    violations: tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations


def _nonnull_events(fam: UpdateFamily, policy: NumericPolicy) -> list[Event]:
    return [e for e in fam.events() if event_mass(fam.prior, e) > policy.null_tol]


# ---------------------------------------------------------------------------
# Core audits


def check_consequentialism(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Posterior mass must live inside the conditioning event."""
    violations = []
    for event in fam.events():
        q = fam[event].probs
        outside = float(q.sum() - q[list(event.indices)].sum())
        if outside > policy.cmp_tol:
            violations.append(
                Violation(events=(event,), observed=outside, expected=0.0,
                          note="posterior mass outside the event")
            )
    return AuditReport("consequentialism", tuple(violations))


def _tarjan_sccs(n_nodes: int, succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index = [-1] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in range(n_nodes):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, child_pos = work[-1]
            if child_pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for i in range(child_pos, len(succ[v])):
                w = succ[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def _preference_graph(fam: UpdateFamily, policy: NumericPolicy):
    """Edge E -> F when F's posterior was feasible for E (sp(post_F) within E)."""
    events = fam.events()
    supports = [set(support(fam[e], policy).indices) for e in events]
    members = [set(e.indices) for e in events]
    succ = [
        [j for j in range(len(events)) if j != i and supports[j] <= members[i]]
        for i in range(len(events))
    ]
    return events, succ


def _scc_posterior_spread(fam: UpdateFamily, events: list[Event], comp: list[int]) -> float:
    base = fam[events[comp[0]]].probs
    spread = 0.0
    for j in comp[1:]:
        spread = max(spread, float(np.max(np.abs(fam[events[j]].probs - base))))
    return spread


def check_dynamic_coherence(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Cycles of revealed implication must share one posterior.

    An event A is revealed implied by B exactly when sp(post_B) lies inside
    A; any strongly connected set of events under that relation has to carry
    identical posteriors.
    """
    events, succ = _preference_graph(fam, policy)
    violations = []
    for comp in _tarjan_sccs(len(events), succ):
        if len(comp) < 2:
            continue
        spread = _scc_posterior_spread(fam, events, comp)
        if spread > policy.cmp_tol:
            violations.append(
                Violation(events=tuple(events[j] for j in comp), observed=spread,
                          expected=0.0, note="implication cycle with unequal posteriors")
            )
    return AuditReport("dynamic_coherence", tuple(violations))


def check_dynamic_consistency(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Non-null events must carry the Bayesian update of the prior."""
    violations = []
    for event in _nonnull_events(fam, policy):
        expected = bayes_update(fam.prior, event, policy).probs
        got = fam[event].probs
        diffs = np.abs(got - expected)
        worst = int(np.argmax(diffs))
        if diffs[worst] > policy.cmp_tol:
            violations.append(
                Violation(events=(event,), states=(worst,),
                          observed=float(got[worst]), expected=float(expected[worst]),
                          note="posterior differs from Bayesian update")
            )
    return AuditReport("dynamic_consistency", tuple(violations))


def check_conditional_consistency(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Chain rule across nested events: post_E(s) = post_F(s) * post_E(F).

    Only pairs with both events present are tested; when post_E gives F no
    mass the equation is vacuous (it already forces post_E to vanish on F).
    """
    events = fam.events()
    violations = []
    for big in events:
        big_members = set(big.indices)
        q_big = fam[big].probs
        for small in events:
            if small == big or not set(small.indices) < big_members:
                continue
            mass = float(q_big[list(small.indices)].sum())
            if mass <= policy.null_tol:
                continue
            q_small = fam[small].probs
            for s in small.indices:
                want = q_big[s] / mass
                if abs(q_small[s] - want) > policy.cmp_tol:
                    violations.append(
                        Violation(events=(small, big), states=(s,),
                                  observed=float(q_small[s]), expected=float(want),
                                  note="nested conditional breaks the chain rule")
                    )
    return AuditReport("conditional_consistency", tuple(violations))


def check_consistency_axiom(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Equally likely states stay equally likely inside any non-null event."""
    mu = fam.prior.probs
    violations = []
    for event in _nonnull_events(fam, policy):
        q = fam[event].probs
        idx = event.indices
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                s, t = idx[a], idx[b]
                if abs(mu[s] - mu[t]) <= policy.cmp_tol and abs(q[s] - q[t]) > policy.cmp_tol:
                    violations.append(
                        Violation(events=(event,), states=(s, t),
                                  observed=float(q[s] - q[t]), expected=0.0,
                                  note="equal priors, unequal posteriors")
                    )
    return AuditReport("consistency", tuple(violations))


def check_iia(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Posterior odds of a state pair must not depend on which event contains it.

    Checked across non-null proper events; pairs where any of the four
    posterior values is numerically zero are unconstrained.
    """
    full = fam.space.full_event()
    events = [e for e in _nonnull_events(fam, policy) if e != full]
    violations = []
    for i in range(len(events)):
        e1 = events[i]
        q1 = fam[e1].probs
        for j in range(i + 1, len(events)):
            e2 = events[j]
            q2 = fam[e2].probs
            shared = sorted(set(e1.indices) & set(e2.indices))
            for a in range(len(shared)):
                for b in range(a + 1, len(shared)):
                    s, t = shared[a], shared[b]
                    vals = (q1[s], q1[t], q2[s], q2[t])
                    if min(vals) <= policy.null_tol:
                        continue
                    r1 = q1[s] / q1[t]
                    r2 = q2[s] / q2[t]
                    if abs(r1 - r2) > _RATIO_TOL * max(1.0, abs(r1), abs(r2)):
                        violations.append(
                            Violation(events=(e1, e2), states=(s, t),
                                      observed=float(r1), expected=float(r2),
                                      note="posterior odds differ across events")
                        )
    return AuditReport("iia", tuple(violations))


def check_monotonicity(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> AuditReport:
    """Prior likelihood order must survive conditioning on non-null events."""
    mu = fam.prior.probs
    violations = []
    for event in _nonnull_events(fam, policy):
        q = fam[event].probs
        idx = event.indices
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                s, t = idx[a], idx[b]
                if abs(mu[s] - mu[t]) <= policy.cmp_tol:
                    reversal = abs(q[s] - q[t]) > policy.cmp_tol
                else:
                    hi, lo = (s, t) if mu[s] > mu[t] else (t, s)
                    reversal = q[hi] < q[lo] - policy.cmp_tol
                if reversal:
                    violations.append(
                        Violation(events=(event,), states=(s, t),
                                  observed=float(q[s] - q[t]),
                                  expected=float(mu[s] - mu[t]),
                                  note="likelihood ranking reversed")
                    )
    return AuditReport("monotonicity", tuple(violations))


_ALL_AUDITS = (
    ("consequentialism", check_consequentialism),
    ("dynamic_coherence", check_dynamic_coherence),
    ("dynamic_consistency", check_dynamic_consistency),
    ("conditional_consistency", check_conditional_consistency),
    ("consistency", check_consistency_axiom),
    ("iia", check_iia),
    ("monotonicity", check_monotonicity),
)


def run_all_audits(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> list[AuditReport]:
    return [fn(fam, policy) for _, fn in _ALL_AUDITS]


# ---------------------------------------------------------------------------
# Recovery of representation components


def _merge_key(delta: dict[float, float], key: float, value: float, where: str) -> None:
    if key in delta:
        old = delta[key]
        if abs(old - value) > _RATIO_TOL * max(1.0, abs(old), abs(value)):
            raise Inconsistent(
                f"distortion at prior probability {key} is {old:.12g} from one event "
                f"but {value:.12g} from {where}"
            )
    else:
        delta[key] = value


def fit_distortion(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> Table:
    """Recover the prior distortion a family reveals, as a lookup table.

    Per event, posterior ratios against a reference state give the
    distortion up to an event-specific scale; shared prior probabilities
    pin the scales against each other. The result is normalized so its
    largest value is 1 and verified to reproduce every posterior.
    """
    mu = fam.prior.probs
    full = fam.space.full_event()
    events = [e for e in fam.events() if e != full]
    if not events:
        raise ValueError("need at least one proper event to fit a distortion")

    ratios: dict[Event, dict[float, float]] = {}
    for event in events:
        q = fam[event].probs
        idx = list(event.indices)
        ref = idx[int(np.argmax(q[idx]))]
        table: dict[float, float] = {}
        for s in idx:
            key = float(mu[s])
            val = float(q[s] / q[ref])
            if key in table and abs(table[key] - val) > _RATIO_TOL * max(1.0, table[key], val):
                raise Inconsistent(
                    f"states with prior probability {key} get different posteriors in {event.indices}"
                )
            table[key] = val
        ratios[event] = table

    delta: dict[float, float] = {}
    pending = list(events)
    while pending:
        progressed = []
        for event in pending:
            table = ratios[event]
            scale = None
            for key, val in table.items():
                if key in delta and delta[key] > 0 and val > 0:
                    scale = delta[key] / val
                    break
                if key in delta and (delta[key] > 0) != (val > 0):
                    raise Inconsistent(
                        f"zero/nonzero clash at prior probability {key} in event {event.indices}"
                    )
            if scale is None:
                continue
            for key, val in table.items():
                _merge_key(delta, key, scale * val, f"event {event.indices}")
            progressed.append(event)
        if not progressed:
            # disconnected component: adopt the first pending event's scale
            seed = pending[0]
            for key, val in ratios[seed].items():
                _merge_key(delta, key, val, f"event {seed.indices}")
            progressed.append(seed)
        pending = [e for e in pending if e not in progressed]

    # verify the fitted table regenerates the observed family
    for event in events:
        weights = np.array([delta[float(mu[s])] if s in event else 0.0 for s in range(fam.space.n)])
        regenerated = bayes_update_weights(weights, event, policy.null_tol).probs
        deviation = float(np.max(np.abs(regenerated - fam[event].probs)))
        if deviation > max(policy.cmp_tol, 10 * _RATIO_TOL):
            raise Inconsistent(
                f"fitted distortion misses event {event.indices} by {deviation:.3e}"
            )

    peak = max(delta.values())
    if peak <= 0:
        raise Inconsistent("fitted distortion is identically zero")
    return Table(tuple((k, v / peak) for k, v in sorted(delta.items())))


def recover_wiu(
    fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY
) -> tuple[float, dict[Event, Belief]]:
    """Split a partially consequentialist family into (gamma, surrogate posteriors).

    gamma_E = min_s post_E(s) / prior(s) per event; a representation exists
    only when these agree, in which case the surrogates
    (post_E - gamma * prior) / (1 - gamma) land inside their events.
    """
    mu = fam.prior.probs
    if np.any(mu <= policy.null_tol):
        raise ValueError("recovery requires a full-support prior")
    full = fam.space.full_event()
    events = [e for e in fam.events() if e != full]
    if not events:
        raise ValueError("need at least one proper event")

    gammas: dict[Event, float] = {}
    for event in events:
        q = fam[event].probs
        gained = float(q[list(event.indices)].sum()) - event_mass(fam.prior, event)
        if gained < -policy.cmp_tol:
            raise ValueError(
                f"event {event.indices} loses credence; partial consequentialism fails"
            )
        gammas[event] = float(np.min(q / mu))

    values = np.array([gammas[e] for e in events])
    if float(values.max() - values.min()) > _RATIO_TOL:
        raise GammaMismatch(gammas)
    gamma = float(values.mean())
    if gamma > 1.0 - 1e-12:
        raise ValueError("posteriors equal the prior; mixing weight unidentified")
    gamma = max(gamma, 0.0)

    surrogates: dict[Event, Belief] = {}
    for event in events:
        raw = (fam[event].probs - gamma * mu) / (1.0 - gamma)
        surrogates[event] = Belief(np.maximum(raw, 0.0))
    return gamma, surrogates


def rank_certificate(fam: UpdateFamily, policy: NumericPolicy = DEFAULT_POLICY) -> dict[Event, int]:
    """Integer levels witnessing an acyclic revealed preference over events.

    Levels are longest-path depths in the condensation of the preference
    graph, so they strictly decrease along strict revealed preference.
    Existence of the certificate is exactly acyclicity; a cycle through
    distinct posteriors raises CycleFound.
    """
    events, succ = _preference_graph(fam, policy)
    comps = _tarjan_sccs(len(events), succ)
    for comp in comps:
        if len(comp) >= 2 and _scc_posterior_spread(fam, events, comp) > policy.cmp_tol:
            raise CycleFound(tuple(events[j] for j in comp))

    comp_of = {}
    for ci, comp in enumerate(comps):
        for j in comp:
            comp_of[j] = ci
    levels = [0] * len(comps)
    for ci in reversed(range(len(comps))):  # Tarjan order reversed = sources first
        for j in comps[ci]:
            for k in succ[j]:
                cj = comp_of[k]
                if cj != ci:
                    levels[cj] = max(levels[cj], levels[ci] + 1)
    return {events[j]: levels[comp_of[j]] for j in range(len(events))}
