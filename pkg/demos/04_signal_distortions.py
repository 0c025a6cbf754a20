"""Distorted updating in a signal structure.

Payoff states and messages form a product space; receiving a message is
conditioning on a column event. One distortion applied to likelihoods and
another to the prior nests Bayes and the classic power-power family:
exponents below one dampen a factor's influence, above one exaggerate it.
"""

import numpy as np

import inertia as ia

base = dict(
    omega_labels=["wH", "wL"],
    message_labels=["h", "l"],
    p_omega=ia.Belief([5 / 8, 3 / 8]),
    likelihoods=[[3 / 5, 2 / 5], [2 / 5, 3 / 5]],
)

plain = ia.SignalModel(**base)
print("joint prior over (state, message):")
print(np.round(ia.product_prior(plain).probs.reshape(2, 2), 4))

rows = [
    ("bayes", ia.Identity(), ia.Identity()),
    ("base-rate neglect + over-reaction (a=0.8, b=1.4)", ia.Power(1.4), ia.Power(0.8)),
    ("base-rate neglect + under-reaction (a=0.8, b=0.8)", ia.Power(0.8), ia.Power(0.8)),
    ("base-rate bias, accurate signals (a=1.2, b=1)", ia.Power(1.0), ia.Power(1.2)),
]
print("\nP(wH | message):")
print(f"  {'variant':<50} {'h':>8} {'l':>8}")
for name, f, g in rows:
    model = ia.SignalModel(**base, f=f, g=g)
    at_h = ia.grether_posterior(model, "h").probs[0]
    at_l = ia.grether_posterior(model, "l").probs[0]
    print(f"  {name:<50} {at_h:8.4f} {at_l:8.4f}")

print("\nreconciling the distance view with the signal rule:")
model = ia.SignalModel(**base, f=ia.Power(1.4), g=ia.Power(0.8))
for m in ("h", "l"):
    report = ia.grether_distance_check(model, m)
    print(f"  message {m}: {'PASS' if report.passed else 'FAIL'}")

print("\nidentity distortions are exactly joint-space Bayes:")
joint = ia.product_prior(plain)
for m in ("h", "l"):
    lifted = ia.bayes_update(joint, plain.message_event(m))
    marginal = lifted.probs.reshape(2, 2).sum(axis=1)
    direct = ia.grether_posterior(plain, m).probs
    print(f"  message {m}: gap {float(np.max(np.abs(marginal - direct))):.1e}")
