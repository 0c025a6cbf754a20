import numpy as np
import pytest

import inertia as ia
from inertia.core import DEFAULT_POLICY

from conftest import random_belief


@pytest.fixture
def two_by_two():
    """Binary payoff state, binary message: P(wH) = 5/8, symmetric 3/5 signal."""
    return dict(
        omega_labels=["wH", "wL"],
        message_labels=["h", "l"],
        p_omega=ia.Belief([5 / 8, 3 / 8]),
        likelihoods=[[3 / 5, 2 / 5], [2 / 5, 3 / 5]],
    )


def test_product_prior_values(two_by_two):
    model = ia.SignalModel(**two_by_two)
    np.testing.assert_allclose(
        ia.product_prior(model).probs, [0.375, 0.25, 0.15, 0.225], atol=1e-12
    )


def test_product_prior_uniform_case():
    model = ia.SignalModel(["a", "b"], ["x", "y"], ia.Belief([0.5, 0.5]),
                           [[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(ia.product_prior(model).probs, [0.25] * 4, atol=1e-15)


def test_product_prior_deterministic_likelihood():
    model = ia.SignalModel(["a", "b"], ["x", "y"], ia.Belief([0.7, 0.3]),
                           [[1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_allclose(ia.product_prior(model).probs, [0.7, 0, 0.3, 0], atol=1e-15)


def test_bayes_posteriors(two_by_two):
    model = ia.SignalModel(**two_by_two)
    np.testing.assert_allclose(ia.grether_posterior(model, "h").probs[0], 0.7143, atol=5e-4)
    np.testing.assert_allclose(ia.grether_posterior(model, "l").probs[0], 0.5263, atol=5e-4)


@pytest.mark.parametrize(
    "alpha, beta, at_h, at_l",
    [
        (0.8, 1.4, 0.7264, 0.4603),
        (0.8, 0.8, 0.6755, 0.5211),
        (1.2, 1.0, 0.7347, 0.5517),
    ],
)
def test_distorted_posterior_tables(two_by_two, alpha, beta, at_h, at_l):
    model = ia.SignalModel(
        **two_by_two,
        f=ia.Power(beta) if beta != 1.0 else ia.Identity(),
        g=ia.Power(alpha),
    )
    assert ia.grether_posterior(model, "h").probs[0] == pytest.approx(at_h, abs=5e-4)
    assert ia.grether_posterior(model, "l").probs[0] == pytest.approx(at_l, abs=5e-4)


def test_identity_distortions_reduce_to_joint_bayes(rng, two_by_two):
    model = ia.SignalModel(**two_by_two)
    joint = ia.product_prior(model)
    for m in ("h", "l"):
        event = model.message_event(m)
        lifted = ia.bayes_update(joint, event)
        marg = lifted.probs.reshape(2, 2).sum(axis=1)
        np.testing.assert_allclose(ia.grether_posterior(model, m).probs, marg, atol=1e-12)


def test_identity_reduction_on_random_models(rng):
    for _ in range(15):
        n_w = int(rng.integers(2, 4))
        n_m = int(rng.integers(2, 4))
        prior = random_belief(rng, n_w)
        lk = rng.dirichlet(np.ones(n_m), size=n_w)
        model = ia.SignalModel(
            [f"w{i}" for i in range(n_w)], [f"m{j}" for j in range(n_m)], prior, lk
        )
        joint = ia.product_prior(model)
        for m in range(n_m):
            if ia.event_mass(joint, model.message_event(m)) <= DEFAULT_POLICY.null_tol:
                continue
            lifted = ia.bayes_update(joint, model.message_event(m))
            marg = lifted.probs.reshape(n_w, n_m).sum(axis=1)
            np.testing.assert_allclose(
                ia.grether_posterior(model, m).probs, marg, atol=1e-10
            )


def test_posteriors_sum_to_one_and_live_on_message(two_by_two):
    model = ia.SignalModel(**two_by_two, f=ia.Power(1.4), g=ia.Power(0.8))
    for m in ("h", "l"):
        post = ia.grether_posterior(model, m)
        assert post.probs.sum() == pytest.approx(1.0)
        event = model.message_event(m)
        lifted = np.zeros(4)
        lifted[list(event.indices)] = post.probs
        assert ia.event_mass(ia.Belief(lifted), event) == pytest.approx(1.0)


def test_grether_power_pair_equals_bayes_at_unit_exponents(two_by_two):
    plain = ia.SignalModel(**two_by_two)
    powered = ia.SignalModel(**two_by_two, f=ia.Power(1.0), g=ia.Power(1.0))
    for m in ("h", "l"):
        np.testing.assert_allclose(
            ia.grether_posterior(plain, m).probs,
            ia.grether_posterior(powered, m).probs,
            atol=1e-15,
        )


def test_zero_denominator_raises():
    model = ia.SignalModel(["a", "b"], ["x", "y"], ia.Belief([0.6, 0.4]),
                           [[1.0, 0.0], [1.0, 0.0]], f=ia.Power(2.0))
    with pytest.raises(ia.ZeroDenominator):
        ia.grether_posterior(model, "y")


def test_distance_check_identity(two_by_two):
    model = ia.SignalModel(**two_by_two)
    for m in ("h", "l"):
        assert ia.grether_distance_check(model, m).passed


def test_distance_check_power_pair(two_by_two):
    model = ia.SignalModel(**two_by_two, f=ia.Power(1.4), g=ia.Power(0.8))
    for m in ("h", "l"):
        assert ia.grether_distance_check(model, m).passed


def test_distance_check_requires_positive_joint(two_by_two):
    model = ia.SignalModel(["a", "b"], ["x", "y"], ia.Belief([0.6, 0.4]),
                           [[1.0, 0.0], [0.5, 0.5]])
    with pytest.raises(ValueError):
        ia.grether_distance_check(model, "x")


def test_equal_power_collapses_to_product_space_distortion(two_by_two):
    """f = g = Power(alpha) is the product-space distorted update."""
    alpha = 0.8
    model = ia.SignalModel(**two_by_two, f=ia.Power(alpha), g=ia.Power(alpha))
    joint = ia.product_prior(model)
    space = model.product_space()
    iu = ia.IUModel(space, joint, ia.Distorted(ia.Power(alpha)))
    for m in ("h", "l"):
        event = model.message_event(m)
        lifted = ia.iu_posterior(iu, event)
        marg = lifted.probs.reshape(2, 2).sum(axis=1)
        np.testing.assert_allclose(ia.grether_posterior(model, m).probs, marg, atol=1e-12)


def test_generic_solver_cross_check_on_positive_joint(two_by_two):
    """Minimizing the weighted log objective over the message face lands on
    the signal-rule posterior (strictly positive joint prior only)."""
    model = ia.SignalModel(**two_by_two, f=ia.Power(1.4), g=ia.Power(0.8))
    joint = ia.product_prior(model)

    class _LogObjective:
        def evaluate_candidates(self, prior, cands, policy):
            joint_mat = prior.probs.reshape(2, 2)
            marg = joint_mat.sum(axis=1)
            out = []
            for row in np.atleast_2d(cands):
                total = 0.0
                for w in range(2):
                    for m in range(2):
                        weight = (marg[w] ** 0.8) * ((joint_mat[w, m] / marg[w]) ** 1.4)
                        ratio = max(row[2 * w + m], 1e-14) / joint_mat[w, m]
                        total -= weight * np.log(ratio)
                return_row = total
                out.append(return_row)
            return np.array(out)

    for m_idx, m in enumerate(("h", "l")):
        event = model.message_event(m)
        got = ia.minimize_over_event(_LogObjective(), joint, event)
        marg = got.probs.reshape(2, 2).sum(axis=1)
        np.testing.assert_allclose(marg, ia.grether_posterior(model, m).probs, atol=1e-6)


def test_signal_model_validation():
    with pytest.raises(ValueError):
        ia.SignalModel(["a"], ["x", "y"], ia.Belief([1.0]), [[0.7, 0.4]])
    with pytest.raises(ValueError):
        ia.SignalModel(["a", "b"], ["x"], ia.Belief([0.5, 0.5]), [[1.0], [1.0], [1.0]])
