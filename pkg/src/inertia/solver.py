"""Minimization of a catalog distance over the face of the simplex an event cuts out.

Closed forms carry the accuracy wherever one exists; a projected-gradient
descent with central-difference gradients is the single generic path for
everything else and doubles as a cross-check oracle for the closed forms.
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
    bayes_update_weights,
    event_mass,
)
from .distances import (
    BayesianDivergence,
    DistanceSpec,
    Distorted,
    Euclidean,
    Mixed,
    SupportDependent,
    candidate_objective,
)

__all__ = [
    "NoConvergence",
    "UndefinedPosterior",
    "SolverConfig",
    "project_onto_event_face",
    "closed_form_posterior",
    "minimize_over_event",
    "posterior",
]

_FD_STEP = 1e-7


class NoConvergence(InertiaError):
    """Generic solver hit max_iters while still moving."""


class UndefinedPosterior(InertiaError):
    """The distance is constant on the feasible set, so no minimizer exists."""


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 100_000
    solve_tol: float = 1e-10
    step_rule: str = "backtracking"  # or "fixed"
    eta: float = 1.0

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.solve_tol <= 0:
            raise ValueError("solve_tol must be positive")
        if self.step_rule not in ("backtracking", "fixed"):
            raise ValueError("step_rule must be 'backtracking' or 'fixed'")


DEFAULT_SOLVER = SolverConfig()


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Sort-based Euclidean projection onto the standard simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    j = np.arange(1, u.size + 1)
    rho = np.flatnonzero(u + (1.0 - css) / j > 0)[-1]
    lam = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(v + lam, 0.0)


def project_onto_event_face(v: np.ndarray, event: Event) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1, x_i = 0 off the event}."""
    v = np.asarray(v, dtype=float)
    idx = list(event.indices)
    out = np.zeros_like(v)
    out[idx] = _project_simplex(v[idx])
    return out


def closed_form_posterior(
    d: DistanceSpec,
    prior: Belief,
    event: Event,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Belief | None:
    """Exact minimizer where the catalog has one; None signals no closed form.

    BayesianDivergence and Distorted have no closed form when their anchor
    carries no mass on the event (the distance is then constant on the face).
    """
    mu = prior.probs
    if isinstance(d, BayesianDivergence):
        if event_mass(prior, event) <= policy.null_tol:
            return None
        return bayes_update_weights(mu, event, policy.null_tol)
    if isinstance(d, Distorted):
        anchor = np.asarray(d.delta(mu), dtype=float)
        if float(anchor[list(event.indices)].sum()) <= policy.null_tol:
            return None
        return bayes_update_weights(anchor, event, policy.null_tol)
    if isinstance(d, Mixed):
        return bayes_update_weights(mu + d.rho.probs, event, policy.null_tol)
    if isinstance(d, SupportDependent):
        if event_mass(prior, event) > policy.null_tol:
            return bayes_update_weights(mu, event, policy.null_tol)
        return bayes_update_weights(d.mu_star.probs, event, policy.null_tol)
    if isinstance(d, Euclidean):
        mask = event.mask(prior.n)
        shortfall = (1.0 - event_mass(prior, event)) / len(event)
        return Belief(np.where(mask, mu + shortfall, 0.0))
    return None


def minimize_over_event(
    d: DistanceSpec,
    prior: Belief,
    event: Event,
    cfg: SolverConfig = DEFAULT_SOLVER,
    policy: NumericPolicy = DEFAULT_POLICY,
    start: np.ndarray | None = None,
) -> Belief:
    """Projected-gradient argmin of the distance over the event's face.

    Gradients are central finite differences with step 1e-7; the iterate
    starts at the face barycenter (interior points avoid flat sigma
    boundaries). Stops when the accepted step moves less than solve_tol;
    NoConvergence if max_iters is reached while still moving at or above
    1e3 * solve_tol.
    """
    n = prior.n
    idx = np.array(event.indices, dtype=int)
    if idx[-1] >= n:
        raise ValueError("event out of range for the prior's space")
    objective = candidate_objective(d, prior, policy)

    if start is None:
        x = np.zeros(n)
        x[idx] = 1.0 / idx.size
    else:
        x = project_onto_event_face(np.asarray(start, dtype=float), event)

    if idx.size == 1:
        return Belief(x)  # the face is a single point

    m = idx.size
    rows = np.arange(m)
    fx = float(objective(x[None, :])[0])
    eta = cfg.eta
    movement = np.inf
    best_f, best_x, stall = fx, x.copy(), 0

    for _ in range(cfg.max_iters):
        # central differences in the interior; one-sided (with exact divisor)
        # at coordinates sitting on the boundary, where a clipped minus-probe
        # would halve the gradient and pin states that belong inside
        probes = np.repeat(x[None, :], 2 * m, axis=0)
        probes[rows, idx] += _FD_STEP
        back = np.maximum(x[idx] - _FD_STEP, 0.0)
        probes[rows + m, idx] = back
        vals = objective(probes)
        grad = np.zeros(n)
        grad[idx] = (vals[:m] - vals[m:]) / (x[idx] + _FD_STEP - back)

        if cfg.step_rule == "fixed":
            x_new = project_onto_event_face(x - cfg.eta * grad, event)
            f_new = float(objective(x_new[None, :])[0])
            bottomed = False
        else:
            while True:
                x_new = project_onto_event_face(x - eta * grad, event)
                f_new = float(objective(x_new[None, :])[0])
                decrease = float(grad @ (x - x_new))
                if f_new <= fx - 1e-4 * max(decrease, 0.0) or eta < 1e-18:
                    break
                eta *= 0.5
            bottomed = f_new > fx
            if bottomed:  # no descent at any step size: gradient noise floor
                x_new, f_new = x, fx

        movement = float(np.max(np.abs(x_new - x)))
        x, fx = x_new, f_new
        if fx < best_f - 1e-15 * (1.0 + abs(best_f)):
            best_f, best_x, stall = fx, x.copy(), 0
        else:
            stall += 1
        if movement < cfg.solve_tol or bottomed or stall >= 50:
            break
        if cfg.step_rule == "backtracking":
            eta = min(eta * 2.0, 1e6)
    else:
        if movement >= 1e3 * cfg.solve_tol:
            raise NoConvergence(
                f"still moving {movement:.3e} after {cfg.max_iters} iterations"
            )

    x = best_x if best_f < fx else x
    out = np.zeros(n)
    out[idx] = np.maximum(x[idx], 0.0)
    return Belief(out / out.sum())


def posterior(
    d: DistanceSpec,
    prior: Belief,
    event: Event,
    cfg: SolverConfig = DEFAULT_SOLVER,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Belief:
    """Single entry point: closed form when present, generic solver otherwise.

    Raises UndefinedPosterior when a Bayesian-family anchor puts no mass on
    the event (the distance is constant there, so a minimizer is meaningless).
    """
    exact = closed_form_posterior(d, prior, event, policy)
    if exact is not None:
        return exact
    if isinstance(d, (BayesianDivergence, Distorted)):
        raise UndefinedPosterior(
            f"anchor carries no mass on event {event.indices}; posterior undefined"
        )
    return minimize_over_event(d, prior, event, cfg, policy)
