"""Conditioning on events the prior rules out.

A coin is believed to land heads or tails. Edges and two marked spots are
"impossible", yet beliefs after those events are pinned down by a ladder:
condition on the first level that gives the event mass. With a positive
threshold, levels that clear the event only barely are skipped. The same
behavior comes out of a two-branch hypothesis-testing model built from the
ladder, with maximum-likelihood selection over a finite set of candidate
beliefs.
"""

import numpy as np

import inertia as ia

space = ia.StateSpace(["h", "t", "e", "ep", "l1", "l2"])
ladder = ia.Ladder([
    ia.Belief([0.5, 0.5, 0, 0, 0, 0]),        # faces
    ia.Belief([0, 0, 7 / 8, 1 / 8, 0, 0]),    # edges, one worn thin
    ia.Belief([0, 0, 0, 0, 0.5, 0.5]),        # marked spots
])

not_a_face = space.event("e", "ep", "l1", "l2")
print("after 'not a face':", np.round(ia.cps_posterior(ladder, not_a_face).probs, 4))

refined = space.event("ep", "l1", "l2")
print("refined to rule out the thick edge:", ia.cps_posterior(ladder, refined).probs)

print("\nwith threshold 0.2, the thin-edge level is skipped:")
print("  ", ia.ecps_posterior(ladder, 0.2, refined).probs)

print("\nchain rule holds family-wide:")
family = ia.UpdateFamily(
    space, ladder.levels[0],
    {e: ia.cps_posterior(ladder, e) for e in space.all_events()},
)
print("  check_cps:", "PASS" if ia.check_cps(family).passed else "FAIL")

recovered = ia.ladder_from_family(family)
print("  ladder recovered from the 63 conditionals:", len(recovered), "levels")

print("\nequivalent hypothesis-testing model:")
for eps in (0.0, 0.2):
    model = ia.ht_from_ecps(ladder, eps)
    worst = 0.0
    checked = 0
    for event in space.all_events():
        if ladder.first_level(event, max(eps, 1e-12)) is None:
            continue
        want = ia.ecps_posterior(ladder, eps, event)
        got = ia.ht_posterior(model, event)
        worst = max(worst, float(np.max(np.abs(want.probs - got.probs))))
        checked += 1
    print(f"  eps={eps}: {len(model.atoms)} atoms, threshold {model.epsilon}, "
          f"{checked} events, max gap {worst:.1e}")

print("\nthe ladder is itself a distance minimization:")
dist = ia.cps_distance(ladder, ia.LogShifted(1, 1))
got = ia.minimize_over_event(dist, ladder.levels[0], not_a_face)
print("  argmin over the 'not a face' event:", np.round(got.probs, 4))
