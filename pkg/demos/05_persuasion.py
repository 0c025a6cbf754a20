"""Designing signals for a receiver who distorts likelihoods.

Three states; the sender wants action a everywhere, the receiver agrees
only in the first. How the receiver bends likelihoods decides the shape of
the optimal signal: concave bending concentrates randomization in a single
state, convex bending (slope zero at zero) spreads interior randomization
across every opposed state. A brute-force grid confirms the structured
solutions.
"""

import numpy as np

import inertia as ia

rho = ia.Belief([1 / 7, 3 / 7, 3 / 7])
u_diff = [1.0, -0.5, -1.0]

print("binary-message optimum as the likelihood distortion's curvature varies:")
for beta in (0.5, 1.0, 2.0):
    f = ia.Identity() if beta == 1.0 else ia.Power(beta)
    env = ia.PersuasionEnv(rho, u_diff, f=f)
    sol = ia.optimize_binary(env)
    print(f"  beta={beta}: regime={sol.regime:<15} first-row x={np.round(sol.signal.pi[0], 4)}"
          f" value={sol.sender_value:.4f} residual={sol.constraint_residual:.1e}")

print("\ngrid oracle at resolution 0.005 agrees:")
for beta in (0.5, 2.0):
    env = ia.PersuasionEnv(rho, u_diff, f=ia.Power(beta))
    sol = ia.optimize_binary(env)
    oracle = ia.grid_oracle(env, 0.005)
    print(f"  beta={beta}: structured {sol.sender_value:.4f} vs grid {oracle.sender_value:.4f}")

print("\nthe prior distortion g never changes the regime:")
for alpha in (0.8, 1.0, 1.2):
    env = ia.PersuasionEnv(rho, u_diff, f=ia.Power(2.0), g=ia.Power(alpha))
    print(f"  g = x^{alpha}: regime {ia.optimize_binary(env).regime}")

print("\nthree messages, two of them persuading:")
for beta in (0.5, 2.0):
    env = ia.PersuasionEnv(rho, u_diff, f=ia.Power(beta), num_messages=3)
    sol = ia.optimize_rich(env, k=2)
    print(f"  beta={beta} ({sol.regime}):")
    for m, row in enumerate(sol.signal.pi):
        print(f"    m{m+1}: {np.round(row, 4)}  -> action {sol.receiver_actions[m]}")
