"""Sender-optimal signal design against a distorted-updating receiver.

Binary-action environments with two or more messages. The receiver takes
the sender-preferred action when the distorted expected payoff difference
is nonnegative; the curvature of the likelihood distortion dictates the
shape of the optimal signal, so the solver dispatches on it and a grid
oracle validates the structured paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Belief, InertiaError
from .distances import DistortionFn, Identity, Power, Table

__all__ = [
    "Degenerate",
    "PersuasionEnv",
    "SignalStructure",
    "PersuasionSolution",
    "receiver_action",
    "sender_value",
    "optimize_binary",
    "optimize_rich",
    "grid_oracle",
]

_ACTION_TOL = 1e-12
_KKT_LO = 1e-12
_KKT_HI = 1e12
_KKT_ITERS = 200
_RESIDUAL_TOL = 1e-9


class Degenerate(InertiaError):
    """No aligned states or zero persuasion budget; the problem is trivial."""


@dataclass(frozen=True)
class PersuasionEnv:
    """Common prior over payoff states, receiver payoff differences, and the
    receiver's two distortions. u_diff[i] is u(a, w_i) - u(b, w_i); the
    sender always prefers action a."""

    rho: Belief
    u_diff: np.ndarray
    f: DistortionFn = Identity()
    g: DistortionFn = Identity()
    num_messages: int = 2

    def __init__(self, rho: Belief, u_diff, f: DistortionFn = Identity(),
                 g: DistortionFn = Identity(), num_messages: int = 2) -> None:
        u = np.array(u_diff, dtype=float)
        if u.shape != (rho.n,):
            raise ValueError("u_diff length must match the prior")
        if num_messages < 2:
            raise ValueError("need at least two messages")
        if not isinstance(f, (Identity, Power, Table)):
            raise TypeError("f must be Identity, Power, or Table")
        if not isinstance(g, (Identity, Power, Table)):
            raise TypeError("g must be Identity, Power, or Table")
        u.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "u_diff", u)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "num_messages", int(num_messages))

    @property
    def n(self) -> int:
        return self.rho.n

    @property
    def aligned(self) -> np.ndarray:
        """Indices where sender and receiver interests agree (u_i >= 0)."""
        return np.flatnonzero(self.u_diff >= 0)

    @property
    def opposed(self) -> np.ndarray:
        return np.flatnonzero(self.u_diff < 0)

    @property
    def delta(self) -> np.ndarray:
        """|g(rho_i) * u_i|: the per-state weights in the action constraint."""
        return np.abs(np.asarray(self.g(self.rho.probs), dtype=float) * self.u_diff)

    def guard_value(self) -> float:
        """Distorted expected payoff difference under full revelation pooling;
        persuasion is interesting only when this is negative."""
        return float((np.asarray(self.g(self.rho.probs), dtype=float) * self.u_diff).sum())


@dataclass(frozen=True)
class SignalStructure:
    """Row per message, column per payoff state; columns sum to one."""

    pi: np.ndarray

    def __init__(self, pi) -> None:
        mat = np.array(pi, dtype=float)
        if mat.ndim != 2:
            raise ValueError("signal structure must be a matrix")
        if np.any(mat < -1e-12) or np.any(mat > 1 + 1e-12):
            raise ValueError("signal probabilities must lie in [0, 1]")
        if np.any(np.abs(mat.sum(axis=0) - 1.0) > 1e-9):
            raise ValueError("each state column must sum to 1 across messages")
        mat = np.clip(mat, 0.0, 1.0)
        mat.setflags(write=False)
        object.__setattr__(self, "pi", mat)

    @staticmethod
    def binary(x: np.ndarray) -> "SignalStructure":
        x = np.asarray(x, dtype=float)
        return SignalStructure(np.stack([x, 1.0 - x]))


@dataclass(frozen=True)
class PersuasionSolution:
    signal: SignalStructure
    sender_value: float
    receiver_actions: tuple[str, ...]
    regime: str
    constraint_residual: float
    tie_flagged: bool = False


def _distorted_margin(env: PersuasionEnv, row: np.ndarray) -> float:
    g_rho = np.asarray(env.g(env.rho.probs), dtype=float)
    f_row = np.asarray(env.f(row), dtype=float)
    return float((g_rho * f_row * env.u_diff).sum())


def receiver_action(env: PersuasionEnv, signal: SignalStructure, message: int,
                    atol: float = _ACTION_TOL) -> str:
    """'a' when the distorted expected payoff difference is >= 0 (weak ties
    go to the sender-preferred action), else 'b'."""
    margin = _distorted_margin(env, signal.pi[message])
    return "a" if margin >= -atol else "b"


def sender_value(env: PersuasionEnv, signal: SignalStructure) -> float:
    """Prior-weighted mass of messages that induce action a."""
    total = 0.0
    for m in range(signal.pi.shape[0]):
        if receiver_action(env, signal, m) == "a":
            total += float(env.rho.probs @ signal.pi[m])
    return total


def _f_kind(f: DistortionFn) -> str:
    if isinstance(f, Identity):
        return "linear"
    if isinstance(f, Power):
        if f.exponent == 1.0:
            return "linear"
        return "concave" if f.exponent < 1.0 else "convex"
    return "general"


def _f_inverse(f: DistortionFn, y: float) -> float:
    if isinstance(f, Identity):
        return y
    if isinstance(f, Power):
        return float(y ** (1.0 / f.exponent))
    raise TypeError("no inverse for table distortions")


def _f_prime_inverse(f: Power, y: float) -> float:
    # f(x) = x^beta, f'(x) = beta x^(beta-1); defined for beta > 1
    beta = f.exponent
    return float((y / beta) ** (1.0 / (beta - 1.0)))


def _finish(env: PersuasionEnv, x: np.ndarray, regime: str,
            tie_flagged: bool = False, extra_rows: np.ndarray | None = None) -> PersuasionSolution:
    if extra_rows is None:
        rows = [x, 1.0 - x]
        # pad with silent messages so the structure matches num_messages
        for _ in range(env.num_messages - 2):
            rows.append(np.zeros(env.n))
        signal = SignalStructure(np.stack(rows))
    else:
        signal = SignalStructure(extra_rows)
    deltas = env.delta
    aligned, opposed = env.aligned, env.opposed
    budget = float(deltas[aligned] @ np.asarray(env.f(signal.pi[0][aligned]), dtype=float)) if aligned.size else 0.0
    spent = float(deltas[opposed] @ np.asarray(env.f(signal.pi[0][opposed]), dtype=float)) if opposed.size else 0.0
    actions = tuple(receiver_action(env, signal, m) for m in range(signal.pi.shape[0]))
    return PersuasionSolution(
        signal=signal,
        sender_value=sender_value(env, signal),
        receiver_actions=actions,
        regime=regime,
        constraint_residual=budget - spent,
        tie_flagged=tie_flagged,
    )


def optimize_binary(env: PersuasionEnv, regime_override: str | None = None) -> PersuasionSolution:
    """Optimal two-message signal: x_i = 1 on aligned states, then spend the
    distorted budget on opposed states by the regime f's curvature selects.

    linear: greedy fill by descending rho/delta with one fractional state;
    concave: enumerate 0/1 patterns plus one fractional state;
    convex with f'(0) = 0: all opposed states interior via a multiplier
    bisection on the binding constraint;
    anything else: exhaustive grid.
    """
    label = regime_override or {"linear": "LinearGreedy", "concave": "ConcaveVertex",
                                "convex": "ConvexInterior", "general": "GridFallback"}[_f_kind(env.f)]
    if env.guard_value() >= 0:
        x = np.ones(env.n)  # full pooling already persuades
        return _finish(env, x, label)
    aligned = env.aligned
    if aligned.size == 0:
        raise Degenerate("no aligned states: persuasion cannot work")
    deltas = env.delta
    budget = float(deltas[aligned] @ np.asarray(env.f(np.ones(aligned.size)), dtype=float))
    if budget <= 0:
        raise Degenerate("zero persuasion budget")

    kind = label
    if kind == "GridFallback":
        return grid_oracle(env, resolution=0.005)

    x = np.zeros(env.n)
    x[aligned] = 1.0
    # opposed states with zero constraint weight are free: reveal them fully
    free = env.opposed[deltas[env.opposed] <= 0.0]
    x[free] = 1.0
    opposed = env.opposed[deltas[env.opposed] > 0.0]
    tie_flagged = False

    if kind == "LinearGreedy":
        ratios = env.rho.probs[opposed] / deltas[opposed]
        rounded = np.round(ratios, 12)
        tie_flagged = np.unique(rounded).size < rounded.size
        order = opposed[np.lexsort((opposed, -ratios))]  # ratio desc, index asc
        remaining = budget
        for i in order:
            cost = deltas[i]
            if cost <= remaining + 1e-15:
                x[i] = 1.0
                remaining -= cost
            else:
                x[i] = min(1.0, max(0.0, remaining / deltas[i]))
                remaining = 0.0
                break
    elif kind == "ConcaveVertex":
        best_val = -np.inf
        best_x = None
        f_one = float(np.asarray(env.f(1.0), dtype=float))
        for pattern in range(1 << opposed.size):
            ones = [opposed[j] for j in range(opposed.size) if pattern >> j & 1]
            cost = float(deltas[ones].sum()) * f_one if ones else 0.0
            if cost > budget + 1e-12:
                continue
            slack = budget - cost
            base_val = float(env.rho.probs[aligned].sum() + env.rho.probs[ones].sum())
            candidates = [(base_val, None, 0.0)]
            for i in opposed:
                if i in ones:
                    continue
                xi = min(1.0, _f_inverse(env.f, slack / deltas[i])) if deltas[i] > 0 else 1.0
                candidates.append((base_val + float(env.rho.probs[i]) * xi, i, xi))
            for val, i, xi in candidates:
                if val > best_val + 1e-12:
                    best_val = val
                    trial = np.zeros(env.n)
                    trial[aligned] = 1.0
                    trial[ones] = 1.0
                    if i is not None:
                        trial[i] = xi
                    best_x = trial
        x = best_x
    else:  # ConvexInterior, f'(0) = 0
        if not isinstance(env.f, Power) or env.f.exponent <= 1.0:
            raise Degenerate("convex regime requires Power(beta > 1)")

        def spend(lam: float) -> float:
            xs = np.minimum(
                1.0,
                np.array([_f_prime_inverse(env.f, env.rho.probs[i] / (lam * deltas[i]))
                          for i in opposed]),
            )
            return float(deltas[opposed] @ np.asarray(env.f(xs), dtype=float)), xs

        lo, hi = _KKT_LO, _KKT_HI
        for _ in range(_KKT_ITERS):
            mid = np.sqrt(lo * hi)  # bisect in log space over 24 decades
            val, _ = spend(mid)
            if val > budget:
                lo = mid
            else:
                hi = mid
        _, xs = spend(hi)
        x[opposed] = xs

    return _finish(env, x, kind, tie_flagged=tie_flagged)


def optimize_rich(env: PersuasionEnv, k: int) -> PersuasionSolution:
    """Structured optimum when k >= 2 messages may induce action a.

    Concave (or linear) f: aligned states split 1/k across the k messages;
    each opposed state's mass is concentrated on a single message, all-in or
    nothing except at most one fractional state, subject to per-message
    budgets. Convex f with f'(0) = 0: aligned states go all-in on the first
    message; each opposed state gets equal interior mass on all k messages,
    sized by a multiplier bisection on the pooled constraint.
    """
    if env.num_messages < 3:
        raise ValueError("rich solver needs at least three messages")
    if not 2 <= k <= env.num_messages - 1:
        raise ValueError("k must lie in [2, num_messages - 1]")
    aligned = env.aligned
    if aligned.size == 0:
        raise Degenerate("no aligned states: persuasion cannot work")
    deltas = env.delta
    opposed = env.opposed[deltas[env.opposed] > 0.0]
    free = env.opposed[deltas[env.opposed] <= 0.0]
    kind = _f_kind(env.f)
    rows = np.zeros((env.num_messages, env.n))
    rows[0, free] = 1.0  # zero constraint weight: reveal on the first message

    if kind in ("concave", "linear"):
        f_cap = float(np.asarray(env.f(1.0 / k), dtype=float))
        per_message = float(deltas[aligned].sum()) * f_cap
        rows[:k, aligned] = 1.0 / k
        f_one = float(np.asarray(env.f(1.0), dtype=float))
        slack = np.full(k, per_message)
        # all-in states first by value density, then one fractional state
        order = opposed[np.lexsort((opposed, -env.rho.probs[opposed] / deltas[opposed]))]
        leftover = []
        for i in order:
            cost = deltas[i] * f_one
            slot = int(np.argmax(slack))
            if cost <= slack[slot] + 1e-15:
                rows[slot, i] = 1.0
                slack[slot] -= cost
            else:
                leftover.append(i)
        best_gain, best = 0.0, None
        for i in leftover:
            for slot in range(k):
                if deltas[i] <= 0 or slack[slot] <= 0:
                    continue
                xi = min(1.0, _f_inverse(env.f, slack[slot] / deltas[i]))
                gain = float(env.rho.probs[i]) * xi
                if gain > best_gain + 1e-12:
                    best_gain, best = gain, (slot, i, xi)
        if best is not None:
            slot, i, xi = best
            rows[slot, i] = xi
        regime = "ConcaveVertex"
    elif kind == "convex":
        if not isinstance(env.f, Power) or env.f.exponent <= 1.0:
            raise Degenerate("convex regime requires Power(beta > 1)")
        rows[0, aligned] = 1.0
        pooled = float(deltas[aligned] @ np.asarray(env.f(np.ones(aligned.size)), dtype=float))

        def spend(lam: float):
            ys = np.minimum(
                1.0,
                np.array([k * _f_prime_inverse(env.f, env.rho.probs[i] / (lam * deltas[i]))
                          for i in opposed]),
            )
            cost = float(k * (deltas[opposed] @ np.asarray(env.f(ys / k), dtype=float)))
            return cost, ys

        lo, hi = _KKT_LO, _KKT_HI
        for _ in range(_KKT_ITERS):
            mid = np.sqrt(lo * hi)
            val, _ = spend(mid)
            if val > pooled:
                lo = mid
            else:
                hi = mid
        _, ys = spend(hi)
        for j, i in enumerate(opposed):
            rows[:k, i] = ys[j] / k
        regime = "ConvexInterior"
    else:
        raise Degenerate("rich solver handles Identity/Power distortions only")

    rows[k] = 1.0 - rows[:k].sum(axis=0)  # residual mass on the first b-message
    return _finish(env, rows[0], regime, extra_rows=rows)


def grid_oracle(env: PersuasionEnv, resolution: float = 0.01) -> PersuasionSolution:
    """Exhaustive search over two-message signals x in [0,1]^n on a grid.

    Evaluates the true sender value of (x, 1-x), including the case where
    the second message also persuades. Intended for |omega| <= 4 at
    resolution 0.01; memory is kept flat by chunking the first axis.
    """
    n = env.n
    steps = int(round(1.0 / resolution))
    grid = np.linspace(0.0, 1.0, steps + 1)
    g_rho = np.asarray(env.g(env.rho.probs), dtype=float)
    f_grid = np.asarray(env.f(grid), dtype=float)
    f_comp = np.asarray(env.f(1.0 - grid), dtype=float)

    margin_terms = [g_rho[i] * env.u_diff[i] * f_grid for i in range(n)]
    margin_terms_c = [g_rho[i] * env.u_diff[i] * f_comp for i in range(n)]
    value_terms = [env.rho.probs[i] * grid for i in range(n)]
    value_terms_c = [env.rho.probs[i] * (1.0 - grid) for i in range(n)]

    best_val = -np.inf
    best_x = None

    # chunk over the first coordinate; broadcast the rest
    def axis_view(vec: np.ndarray, axis: int) -> np.ndarray:
        shape = [1] * (n - 1)
        shape[axis - 1] = vec.size
        return vec.reshape(shape)

    for i0 in range(grid.size):
        margin1 = margin_terms[0][i0]
        margin2 = margin_terms_c[0][i0]
        value1 = value_terms[0][i0]
        value2 = value_terms_c[0][i0]
        m1 = np.asarray(margin1)
        m2 = np.asarray(margin2)
        v1 = np.asarray(value1)
        v2 = np.asarray(value2)
        for j in range(1, n):
            m1 = m1 + axis_view(margin_terms[j], j)
            m2 = m2 + axis_view(margin_terms_c[j], j)
            v1 = v1 + axis_view(value_terms[j], j)
            v2 = v2 + axis_view(value_terms_c[j], j)
        total = np.where(m1 >= -_ACTION_TOL, v1, 0.0) + np.where(m2 >= -_ACTION_TOL, v2, 0.0)
        flat = int(np.argmax(total))
        if total.reshape(-1)[flat] > best_val:
            best_val = float(total.reshape(-1)[flat])
            idx = np.unravel_index(flat, total.shape) if n > 1 else ()
            best_x = np.array([grid[i0]] + [grid[t] for t in idx])
    return _finish(env, best_x, "GridFallback")
