import numpy as np
import pytest

import inertia as ia


@pytest.fixture
def example_env():
    """Three states, prior (1/7, 3/7, 3/7), payoff gaps (1, -1/2, -1)."""
    def make(beta: float, g=ia.Identity(), num_messages: int = 2) -> ia.PersuasionEnv:
        f = ia.Identity() if beta == 1.0 else ia.Power(beta)
        return ia.PersuasionEnv(
            rho=ia.Belief([1 / 7, 3 / 7, 3 / 7]),
            u_diff=[1.0, -0.5, -1.0],
            f=f,
            g=g,
            num_messages=num_messages,
        )

    return make


def _random_env(rng, n_states=3, beta=None, guard_slack=1e-3, u_floor=0.15,
                interior_only=False):
    while True:
        rho = ia.Belief(rng.dirichlet(np.ones(n_states)) * 0.9 + 0.1 / n_states)
        u = np.concatenate([[rng.uniform(0.2, 1.0)], -rng.uniform(u_floor, 1.0, n_states - 1)])
        f = ia.Identity() if beta is None else ia.Power(beta)
        env = ia.PersuasionEnv(rho, u, f=f)
        if env.guard_value() >= -guard_slack:
            continue
        if interior_only and beta == 2.0:
            # closed-form quadratic optimum: x_i = (rho_i/delta_i) sqrt(M/S);
            # keep only environments whose unconstrained optimum stays inside
            d = env.delta
            budget = float(d[env.aligned].sum())
            ratios = rho.probs[env.opposed] / d[env.opposed]
            total = float((rho.probs[env.opposed] * ratios).sum())
            if float(ratios.max()) * np.sqrt(budget / total) >= 0.95:
                continue
        return env


def test_receiver_action_fully_revealing_aligned(example_env):
    env = example_env(1.0)
    sig = ia.SignalStructure.binary(np.array([1.0, 0.0, 0.0]))
    assert ia.receiver_action(env, sig, 0) == "a"


def test_receiver_action_on_opposed_mass(example_env):
    env = example_env(1.0)
    sig = ia.SignalStructure.binary(np.array([0.0, 1.0, 1.0]))
    assert ia.receiver_action(env, sig, 0) == "b"


def test_receiver_action_binding_constraint(example_env):
    # 1/7 * 1 = 3/7 * (1/2) * (4/9) + 3/7 * (1/9): the margin is exactly zero
    env = example_env(2.0)
    sig = ia.SignalStructure.binary(np.array([1.0, 2 / 3, 1 / 3]))
    assert ia.receiver_action(env, sig, 0) == "a"


def test_sender_value_fully_revealing(example_env):
    env = example_env(1.0)
    sig = ia.SignalStructure(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]]))
    assert ia.sender_value(env, sig) == pytest.approx(1 / 7)


def test_sender_value_babbling_is_zero_under_guard(example_env):
    env = example_env(1.0)
    sig = ia.SignalStructure.binary(np.ones(3))
    assert ia.sender_value(env, sig) == 0.0


def test_optimize_binary_concave_beta_half(example_env):
    sol = ia.optimize_binary(example_env(0.5))
    np.testing.assert_allclose(sol.signal.pi[0], [1.0, 4 / 9, 0.0], atol=1e-12)
    assert sol.sender_value == pytest.approx(1 / 7 + 3 / 7 * 4 / 9, abs=1e-12)
    assert sol.regime == "ConcaveVertex"
    assert sol.constraint_residual >= -1e-9


def test_optimize_binary_convex_beta_two(example_env):
    sol = ia.optimize_binary(example_env(2.0))
    np.testing.assert_allclose(sol.signal.pi[0], [1.0, 2 / 3, 1 / 3], atol=1e-9)
    assert sol.sender_value == pytest.approx(4 / 7, abs=1e-9)
    assert sol.regime == "ConvexInterior"
    assert abs(sol.constraint_residual) <= 1e-9


def test_optimize_binary_linear_boundary(example_env):
    greedy = ia.optimize_binary(example_env(1.0))
    np.testing.assert_allclose(greedy.signal.pi[0], [1.0, 2 / 3, 0.0], atol=1e-12)
    # the concave enumeration at beta = 1 agrees with the greedy fill
    concave = ia.optimize_binary(example_env(1.0), regime_override="ConcaveVertex")
    np.testing.assert_allclose(concave.signal.pi[0], greedy.signal.pi[0], atol=1e-12)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_structured_beats_grid(example_env, beta):
    resolution = 0.005
    sol = ia.optimize_binary(example_env(beta))
    oracle = ia.grid_oracle(example_env(beta), resolution)
    assert sol.sender_value >= oracle.sender_value - 2 * resolution
    assert sol.constraint_residual >= -1e-9


def _both_messages_can_persuade(env, resolution):
    """Whether some binary split persuades on both messages (full persuasion).

    The negative-guard condition only rules out pooling; with concave
    distortions a split can still push both margins nonnegative, and that
    regime sits outside the one-persuading-message program."""
    grid = np.linspace(0.0, 1.0, int(round(1.0 / resolution)) + 1)
    g_rho = np.asarray(env.g(env.rho.probs), dtype=float)
    f_grid = np.asarray(env.f(grid), dtype=float)
    f_comp = np.asarray(env.f(1.0 - grid), dtype=float)
    m1 = np.zeros((grid.size,) * env.n)
    m2 = np.zeros_like(m1)
    for i in range(env.n):
        shape = [1] * env.n
        shape[i] = grid.size
        m1 = m1 + (g_rho[i] * env.u_diff[i] * f_grid).reshape(shape)
        m2 = m2 + (g_rho[i] * env.u_diff[i] * f_comp).reshape(shape)
    return bool(np.any((m1 >= -1e-12) & (m2 >= -1e-12)))


@pytest.mark.parametrize("beta", [0.5, None, 2.0])
def test_structured_beats_grid_on_random_envs(rng, beta):
    resolution = 0.02
    done = 0
    while done < 6:
        env = _random_env(rng, beta=beta)
        if _both_messages_can_persuade(env, resolution):
            continue  # full persuasion attainable: outside the program solved
        sol = ia.optimize_binary(env)
        oracle = ia.grid_oracle(env, resolution)
        assert sol.sender_value >= oracle.sender_value - 2 * resolution
        assert sol.constraint_residual >= -1e-9
        done += 1


def test_grid_oracle_values(example_env):
    assert ia.grid_oracle(example_env(2.0), 0.005).sender_value == pytest.approx(4 / 7, abs=0.01)
    assert ia.grid_oracle(example_env(0.5), 0.005).sender_value == pytest.approx(1 / 3, abs=0.01)


def test_grid_oracle_trivial_env_babbles_to_one():
    env = ia.PersuasionEnv(ia.Belief([0.6, 0.4]), [1.0, -0.5])
    assert env.guard_value() >= 0
    assert ia.grid_oracle(env, 0.01).sender_value == pytest.approx(1.0)
    assert ia.optimize_binary(env).sender_value == pytest.approx(1.0)


def test_prop7_structure_on_random_envs(rng):
    """Concave f: at most one opposed coordinate strictly inside (0, 1)."""
    for beta in (0.5, None):  # Power(0.5) and Identity
        for _ in range(25):
            env = _random_env(rng, beta=beta if beta else None)
            sol = ia.optimize_binary(env)
            x = sol.signal.pi[0][env.opposed]
            interior = np.sum((x > 1e-9) & (x < 1 - 1e-9))
            assert interior <= 1
            assert sol.constraint_residual >= -1e-9


def test_prop8_structure_on_random_envs(rng):
    """Power(beta > 1), so f'(0) = 0: no opposed coordinate sits at zero, and
    whatever is not fully revealed is strictly interior. With the sender's
    budget well short of full revelation, nothing caps at 1 either."""
    for _ in range(50):
        env = _random_env(rng, beta=2.0, u_floor=0.4, interior_only=True)
        sol = ia.optimize_binary(env)
        x = sol.signal.pi[0][env.opposed]
        assert np.all(x > 1e-9)
        assert np.all(x < 1 - 1e-9)
        assert abs(sol.constraint_residual) <= 1e-9


def test_prop8_capped_states_join_the_revealed_set(rng):
    """When a low-stakes opposed state hits the cap it is fully revealed,
    exactly the Omega_1 of the structure result; everything else stays
    interior and nothing sits at zero."""
    for _ in range(30):
        env = _random_env(rng, beta=2.0, u_floor=0.02)
        sol = ia.optimize_binary(env)
        x = sol.signal.pi[0][env.opposed]
        assert np.all(x > 1e-9)
        uncapped = x[x < 1 - 1e-12]
        assert np.all(uncapped > 1e-9)
        assert sol.constraint_residual >= -1e-9


def test_constraint_binds_at_optimum(rng):
    for beta in (0.5, 2.0):
        for _ in range(10):
            env = _random_env(rng, beta=beta)
            sol = ia.optimize_binary(env)
            assert sol.constraint_residual == pytest.approx(0.0, abs=1e-9)


def test_regime_invariant_to_prior_distortion(example_env):
    """g changes the weights, never the regime classification."""
    for beta in (0.5, 1.0, 2.0):
        base = ia.optimize_binary(example_env(beta))
        for alpha in (0.8, 1.2):
            env = example_env(beta, g=ia.Power(alpha))
            if env.guard_value() >= 0:
                continue
            shifted = ia.optimize_binary(env)
            assert shifted.regime == base.regime


def test_optimize_rich_concave_shapes(example_env):
    """|M| = 3, k = 2, beta < 1: aligned split 1/2, one interior opposed state
    on the first message only."""
    sol = ia.optimize_rich(example_env(0.5, num_messages=3), k=2)
    pi = sol.signal.pi
    assert pi[0][0] == pytest.approx(0.5)
    assert pi[1][0] == pytest.approx(0.5)
    assert 0 < pi[0][1] < 1
    assert pi[0][1] == pytest.approx(2 / 9, abs=1e-12)
    assert pi[1][1] == 0.0
    assert pi[0][2] == 0.0 and pi[1][2] == 0.0
    assert sol.regime == "ConcaveVertex"


def test_optimize_rich_convex_shapes(example_env):
    """beta > 1: aligned all-or-nothing, opposed equal and interior on both."""
    sol = ia.optimize_rich(example_env(2.0, num_messages=3), k=2)
    pi = sol.signal.pi
    assert pi[0][0] == pytest.approx(1.0)
    assert pi[1][0] == pytest.approx(0.0)
    for state in (1, 2):
        assert pi[0][state] == pytest.approx(pi[1][state], abs=1e-12)
        assert 0 < pi[0][state] < 1
    assert sol.regime == "ConvexInterior"


def test_optimize_rich_rejects_k_one(example_env):
    with pytest.raises(ValueError):
        ia.optimize_rich(example_env(0.5, num_messages=3), k=1)


def test_degenerate_no_aligned_states():
    env = ia.PersuasionEnv(ia.Belief([0.5, 0.5]), [-1.0, -0.5])
    with pytest.raises(ia.Degenerate):
        ia.optimize_binary(env)


def test_columns_remain_stochastic(example_env):
    for beta in (0.5, 2.0):
        sol = ia.optimize_rich(example_env(beta, num_messages=3), k=2)
        np.testing.assert_allclose(sol.signal.pi.sum(axis=0), np.ones(3), atol=1e-9)
