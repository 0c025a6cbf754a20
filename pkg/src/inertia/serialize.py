"""JSON wire formats for models, families, ladders, and reports.

Specs serialize to tagged objects, e.g.
{"kind": "distorted", "delta": {"kind": "power", "alpha": 0.8},
 "sigma": {"kind": "log_shifted", "a": 1, "b": 1}}.
Beliefs are arrays of numbers; events are arrays of state labels resolved
against the state space.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .audits import AuditReport, Violation
from .core import Belief, Event, StateSpace
from .distances import (
    BayesianDivergence,
    ConfirmationBias,
    DeltaSpec,
    DistanceSpec,
    Distorted,
    Euclidean,
    Identity,
    LogShifted,
    Mixed,
    Power,
    PowerRenyi,
    Sigmoid,
    SigmaSpec,
    SupportDependent,
    Table,
)
from .ladders import HTModel, Ladder
from .models import IUModel, UpdateFamily, WIUModel
from .persuasion import PersuasionEnv, PersuasionSolution
from .signals import SignalModel

__all__ = [
    "sigma_to_dict", "sigma_from_dict",
    "delta_to_dict", "delta_from_dict",
    "distance_to_dict", "distance_from_dict",
    "model_to_dict", "model_from_dict",
    "family_to_dict", "family_from_dict",
    "ladder_to_dict", "ladder_from_dict",
    "ht_model_to_dict", "ht_model_from_dict",
    "signal_model_to_dict", "signal_model_from_dict",
    "persuasion_env_to_dict", "persuasion_env_from_dict",
    "report_to_dict", "report_to_text",
    "solution_to_dict",
    "load_json", "dump_json",
]


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def sigma_to_dict(s: SigmaSpec) -> dict:
    if isinstance(s, LogShifted):
        return {"kind": "log_shifted", "a": s.a, "b": s.b}
    if isinstance(s, PowerRenyi):
        return {"kind": "power_renyi", "alpha": s.alpha}
    raise TypeError(f"unknown sigma spec {s!r}")


def sigma_from_dict(d: dict) -> SigmaSpec:
    kind = d["kind"]
    if kind == "log_shifted":
        return LogShifted(a=float(d.get("a", 1.0)), b=float(d.get("b", 1.0)))
    if kind == "power_renyi":
        return PowerRenyi(alpha=float(d["alpha"]))
    raise ValueError(f"unknown sigma kind {kind!r}")


def delta_to_dict(d: DeltaSpec) -> dict:
    if isinstance(d, Identity):
        return {"kind": "identity"}
    if isinstance(d, Power):
        return {"kind": "power", "alpha": d.exponent}
    if isinstance(d, Sigmoid):
        return {"kind": "sigmoid", "a": d.a, "x0": d.x0}
    if isinstance(d, ConfirmationBias):
        return {"kind": "confirmation_bias", "b": d.b}
    if isinstance(d, Table):
        return {"kind": "table", "points": [[p, v] for p, v in d.points]}
    raise TypeError(f"unknown distortion {d!r}")


def delta_from_dict(d: dict) -> DeltaSpec:
    kind = d["kind"]
    if kind == "identity":
        return Identity()
    if kind == "power":
        return Power(exponent=float(d.get("alpha", d.get("exponent", 1.0))))
    if kind == "sigmoid":
        return Sigmoid(a=float(d["a"]), x0=float(d.get("x0", 0.5)))
    if kind == "confirmation_bias":
        return ConfirmationBias(b=float(d["b"]))
    if kind == "table":
        return Table(tuple((float(p), float(v)) for p, v in d["points"]))
    raise ValueError(f"unknown distortion kind {kind!r}")


def distance_to_dict(d: DistanceSpec) -> dict:
    if isinstance(d, BayesianDivergence):
        return {"kind": "bayesian", "sigma": sigma_to_dict(d.sigma)}
    if isinstance(d, Distorted):
        return {"kind": "distorted", "delta": delta_to_dict(d.delta),
                "sigma": sigma_to_dict(d.sigma)}
    if isinstance(d, Mixed):
        return {"kind": "mixed", "rho": d.rho.probs.tolist(),
                "sigma": sigma_to_dict(d.sigma)}
    if isinstance(d, SupportDependent):
        return {"kind": "support_dependent", "mu_star": d.mu_star.probs.tolist(),
                "sigma": sigma_to_dict(d.sigma)}
    if isinstance(d, Euclidean):
        return {"kind": "euclidean"}
    raise TypeError(f"unknown distance spec {d!r}")


def distance_from_dict(d: dict) -> DistanceSpec:
    kind = d["kind"]
    sigma = sigma_from_dict(d["sigma"]) if "sigma" in d else LogShifted()
    if kind == "bayesian":
        return BayesianDivergence(sigma=sigma)
    if kind == "distorted":
        return Distorted(delta=delta_from_dict(d["delta"]), sigma=sigma)
    if kind == "mixed":
        return Mixed(rho=Belief(d["rho"]), sigma=sigma)
    if kind == "support_dependent":
        return SupportDependent(mu_star=Belief(d["mu_star"]), sigma=sigma)
    if kind == "euclidean":
        return Euclidean()
    raise ValueError(f"unknown distance kind {kind!r}")


def model_to_dict(model: IUModel | WIUModel) -> dict:
    base = model.base if isinstance(model, WIUModel) else model
    out = {
        "states": list(base.space.labels),
        "prior": base.prior.probs.tolist(),
        "distance": distance_to_dict(base.distance),
    }
    if isinstance(model, WIUModel):
        out["gamma"] = model.gamma
    return out


def model_from_dict(d: dict) -> IUModel | WIUModel:
    base = IUModel(
        space=StateSpace(d["states"]),
        prior=Belief(d["prior"]),
        distance=distance_from_dict(d["distance"]),
    )
    if "gamma" in d and d["gamma"] is not None:
        return WIUModel(base=base, gamma=float(d["gamma"]))
    return base


def _event_from_labels(space: StateSpace, labels: list) -> Event:
    return space.event(*labels)


def family_to_dict(fam: UpdateFamily) -> dict:
    return {
        "states": list(fam.space.labels),
        "prior": fam.prior.probs.tolist(),
        "posteriors": [
            {"event": list(e.labels(fam.space)), "belief": fam[e].probs.tolist()}
            for e in fam.events()
        ],
    }


def family_from_dict(d: dict) -> UpdateFamily:
    space = StateSpace(d["states"])
    posteriors = {
        _event_from_labels(space, row["event"]): Belief(row["belief"])
        for row in d["posteriors"]
    }
    return UpdateFamily(space=space, prior=Belief(d["prior"]), posteriors=posteriors)


def ladder_to_dict(ladder: Ladder, space: StateSpace | None = None) -> dict:
    out = {"levels": [b.probs.tolist() for b in ladder.levels]}
    if space is not None:
        out["states"] = list(space.labels)
    return out


def ladder_from_dict(d: dict) -> tuple[Ladder, StateSpace | None]:
    ladder = Ladder(tuple(Belief(row) for row in d["levels"]))
    space = StateSpace(d["states"]) if "states" in d else None
    return ladder, space


def ht_model_to_dict(model: HTModel, space: StateSpace | None = None) -> dict:
    out = {
        "prior": model.prior.probs.tolist(),
        "atoms": [{"belief": b.probs.tolist(), "weight": w} for b, w in model.atoms],
        "epsilon": model.epsilon,
    }
    if space is not None:
        out["states"] = list(space.labels)
    return out


def ht_model_from_dict(d: dict) -> HTModel:
    return HTModel(
        prior=Belief(d["prior"]),
        atoms=tuple((Belief(a["belief"]), float(a["weight"])) for a in d["atoms"]),
        epsilon=float(d.get("epsilon", 0.0)),
    )


def signal_model_to_dict(model: SignalModel) -> dict:
    return {
        "omega": list(model.omega_labels),
        "messages": list(model.message_labels),
        "prior": model.p_omega.probs.tolist(),
        "likelihoods": model.likelihoods.tolist(),
        "f": delta_to_dict(model.f),
        "g": delta_to_dict(model.g),
    }


def signal_model_from_dict(d: dict) -> SignalModel:
    return SignalModel(
        omega_labels=d["omega"],
        message_labels=d["messages"],
        p_omega=Belief(d["prior"]),
        likelihoods=np.array(d["likelihoods"], dtype=float),
        f=delta_from_dict(d.get("f", {"kind": "identity"})),
        g=delta_from_dict(d.get("g", {"kind": "identity"})),
    )


def persuasion_env_to_dict(env: PersuasionEnv) -> dict:
    return {
        "rho": env.rho.probs.tolist(),
        "u_diff": env.u_diff.tolist(),
        "f": delta_to_dict(env.f),
        "g": delta_to_dict(env.g),
        "num_messages": env.num_messages,
    }


def persuasion_env_from_dict(d: dict) -> PersuasionEnv:
    return PersuasionEnv(
        rho=Belief(d["rho"]),
        u_diff=np.array(d["u_diff"], dtype=float),
        f=delta_from_dict(d.get("f", {"kind": "identity"})),
        g=delta_from_dict(d.get("g", {"kind": "identity"})),
        num_messages=int(d.get("num_messages", 2)),
    )


def _violation_to_dict(v: Violation, space: StateSpace | None) -> dict:
    out: dict[str, Any] = {}
    if v.events:
        out["events"] = [list(e.labels(space)) if space else list(e.indices) for e in v.events]
    if v.states:
        out["states"] = [space.labels[s] if space else s for s in v.states]
    if v.observed is not None:
        out["observed"] = v.observed
    if v.expected is not None:
        out["expected"] = v.expected
    out["note"] = v.note
    return out


def report_to_dict(report: AuditReport, space: StateSpace | None = None) -> dict:
    return {
        "axiom": report.axiom,
        "passed": report.passed,
        "violations": [_violation_to_dict(v, space) for v in report.violations],
    }


def report_to_text(report: AuditReport, space: StateSpace | None = None) -> str:
    status = "PASS" if report.passed else "FAIL"
    lines = [f"[{status}] {report.axiom}"]
    for v in report.violations:
        bits = []
        if v.events:
            names = ["{" + ",".join(e.labels(space) if space else map(str, e.indices)) + "}"
                     for e in v.events]
            bits.append("events " + ", ".join(names))
        if v.states:
            labels = [space.labels[s] if space else str(s) for s in v.states]
            bits.append("states " + ", ".join(labels))
        if v.observed is not None:
            bits.append(f"observed {v.observed:.6g}")
        if v.expected is not None:
            bits.append(f"expected {v.expected:.6g}")
        bits.append(v.note)
        lines.append("  - " + "; ".join(bits))
    return "\n".join(lines)


def solution_to_dict(sol: PersuasionSolution) -> dict:
    return {
        "regime": sol.regime,
        "sender_value": sol.sender_value,
        "receiver_actions": list(sol.receiver_actions),
        "constraint_residual": sol.constraint_residual,
        "tie_flagged": sol.tie_flagged,
        "signal": sol.signal.pi.tolist(),
    }
