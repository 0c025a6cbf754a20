"""Product state spaces (payoff state x message) and distorted signal updating.

Receiving a message is conditioning on a column event of the product space.
The updating rule applies one distortion to likelihoods and another to the
prior before renormalizing, which nests Bayes (both identities) and the
classic power-power rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audits import AuditReport, Violation
from .core import DEFAULT_POLICY, Belief, Event, InertiaError, NumericPolicy, StateSpace
from .distances import DistortionFn, Identity, Power, Table

__all__ = ["ZeroDenominator", "SignalModel", "product_prior", "grether_posterior",
           "grether_distance_check"]


class ZeroDenominator(InertiaError):
    """Distorted weights vanish for every payoff state at this message."""


def _check_distortion(fn: DistortionFn, name: str, need_increasing: bool) -> None:
    if isinstance(fn, (Identity, Power)):
        return  # increasing and positive on (0, 1] by construction
    if isinstance(fn, Table):
        vals = [v for _, v in fn.points]
        if any(v <= 0 for p, v in fn.points if p > 0):
            raise ValueError(f"{name} must be positive on (0, 1]")
        if need_increasing and any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError(f"{name} table must be strictly increasing")
        return
    raise TypeError(f"{name} must be Identity, Power, or Table")


@dataclass(frozen=True)
class SignalModel:
    """Payoff states, messages, a prior over payoff states, a likelihood
    matrix P(message | state) with unit rows, and the two distortions."""

    omega_labels: tuple[str, ...]
    message_labels: tuple[str, ...]
    p_omega: Belief
    likelihoods: np.ndarray  # shape (|omega|, |messages|)
    f: DistortionFn = Identity()
    g: DistortionFn = Identity()

    def __init__(self, omega_labels, message_labels, p_omega, likelihoods,
                 f: DistortionFn = Identity(), g: DistortionFn = Identity()) -> None:
        omega_labels = tuple(str(x) for x in omega_labels)
        message_labels = tuple(str(x) for x in message_labels)
        lk = np.array(likelihoods, dtype=float)
        if lk.shape != (len(omega_labels), len(message_labels)):
            raise ValueError("likelihood matrix shape must be (|omega|, |messages|)")
        if np.any(lk < 0) or np.any(lk > 1):
            raise ValueError("likelihoods must lie in [0, 1]")
        if np.any(np.abs(lk.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("each likelihood row must sum to 1")
        if p_omega.n != len(omega_labels):
            raise ValueError("prior length must match the payoff states")
        _check_distortion(f, "f", need_increasing=True)
        _check_distortion(g, "g", need_increasing=False)
        lk.setflags(write=False)
        object.__setattr__(self, "omega_labels", omega_labels)
        object.__setattr__(self, "message_labels", message_labels)
        object.__setattr__(self, "p_omega", p_omega)
        object.__setattr__(self, "likelihoods", lk)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @property
    def n_omega(self) -> int:
        return len(self.omega_labels)

    @property
    def n_messages(self) -> int:
        return len(self.message_labels)

    def product_space(self) -> StateSpace:
        """Row-major product labels: payoff state outer, message inner."""
        return StateSpace(
            f"{w}:{m}" for w in self.omega_labels for m in self.message_labels
        )

    def message_index(self, message) -> int:
        if isinstance(message, str):
            return self.message_labels.index(message)
        return int(message)

    def message_event(self, message) -> Event:
        """The product-space event 'this message was received'."""
        m = self.message_index(message)
        return Event(w * self.n_messages + m for w in range(self.n_omega))


def product_prior(model: SignalModel) -> Belief:
    """Joint belief on the product space: P(m|omega) * P(omega), row-major."""
    joint = model.likelihoods * model.p_omega.probs[:, None]
    return Belief(joint.reshape(-1))


def grether_posterior(model: SignalModel, message) -> Belief:
    """Distorted posterior over payoff states after one message.

    Weights f(P(m|omega)) * g(P(omega)), renormalized; ZeroDenominator when
    every weight vanishes (possible when f(0) = 0 and the message has zero
    likelihood everywhere).
    """
    m = model.message_index(message)
    weights = np.asarray(model.f(model.likelihoods[:, m]), dtype=float) * np.asarray(
        model.g(model.p_omega.probs), dtype=float
    )
    total = float(weights.sum())
    if total <= 0.0:
        raise ZeroDenominator(f"all distorted weights vanish at message {message!r}")
    return Belief(weights / total)


def grether_distance_check(
    model: SignalModel, message, policy: NumericPolicy = DEFAULT_POLICY
) -> AuditReport:
    """Reconcile the distance view with the signal view for one message.

    The joint-space distance sums g(P(omega)) * f(P(m'|omega)) against the
    log of candidate-over-prior ratios; off-message coordinates are forced
    to zero by the constraint, so minimizing the finite part over the
    message's column event is a weighted Gibbs problem whose solution is
    proportional to the weights. That closed form must agree with
    grether_posterior within 1e-8. Requires a strictly positive joint prior
    so the log ratios are defined.
    """
    mu = product_prior(model)
    if np.any(mu.probs <= 0.0):
        raise ValueError("distance check requires a strictly positive joint prior")
    m = model.message_index(message)
    joint = mu.probs.reshape(model.n_omega, model.n_messages)
    marginals = joint.sum(axis=1)
    conditionals = joint[:, m] / marginals
    weights = np.asarray(model.g(marginals), dtype=float) * np.asarray(
        model.f(conditionals), dtype=float
    )
    total = float(weights.sum())
    violations = []
    if total <= 0.0:
        violations.append(Violation(note=f"distance minimizer undefined at message {message!r}"))
    else:
        minimizer = weights / total
        direct = grether_posterior(model, message).probs
        gap = float(np.max(np.abs(minimizer - direct)))
        if gap > 1e-8:
            worst = int(np.argmax(np.abs(minimizer - direct)))
            violations.append(
                Violation(states=(worst,), observed=float(direct[worst]),
                          expected=float(minimizer[worst]),
                          note="distance minimizer and signal rule disagree")
            )
    return AuditReport("signal_distance_reconciliation", tuple(violations))
