"""Shared fixtures and random-instance generators for the suite."""

from __future__ import annotations

import os
import sys

import numpy as np
import pytest

import inertia as ia

SEED = int(os.environ.get("INERTIA_SEED", "20250809"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Render the acceptance criteria pass/fail lines after any run that
    exercised the acceptance module."""
    module = sys.modules.get("test_acceptance")
    if module is None or not getattr(module, "RESULTS", None):
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def table_space() -> ia.StateSpace:
    return ia.StateSpace(["s1", "s2", "s3"])


@pytest.fixture
def table_prior() -> ia.Belief:
    return ia.Belief([12 / 20, 7 / 20, 1 / 20])


@pytest.fixture
def pair_events(table_space) -> list[ia.Event]:
    return [
        table_space.event("s1", "s2"),
        table_space.event("s2", "s3"),
        table_space.event("s1", "s3"),
    ]


@pytest.fixture
def coin_space() -> ia.StateSpace:
    return ia.StateSpace(["h", "t", "e", "ep", "l1", "l2"])


@pytest.fixture
def coin_ladder() -> ia.Ladder:
    return ia.Ladder(
        [
            ia.Belief([0.5, 0.5, 0, 0, 0, 0]),
            ia.Belief([0, 0, 7 / 8, 1 / 8, 0, 0]),
            ia.Belief([0, 0, 0, 0, 0.5, 0.5]),
        ]
    )


def random_belief(rng: np.random.Generator, n: int, full_support: bool = True) -> ia.Belief:
    probs = rng.dirichlet(np.ones(n))
    if not full_support:
        keep = rng.random(n) > 0.35
        if not keep.any():
            keep[rng.integers(n)] = True
        probs = probs * keep
        probs = probs / probs.sum()
    return ia.Belief(probs)


def random_sigma(rng: np.random.Generator) -> ia.LogShifted | ia.PowerRenyi:
    if rng.random() < 0.5:
        return ia.LogShifted(a=float(rng.uniform(0.5, 3.0)), b=float(rng.uniform(0.2, 2.0)))
    return ia.PowerRenyi(alpha=float(rng.uniform(0.15, 0.85)))


def random_monotone_delta(rng: np.random.Generator):
    roll = rng.random()
    if roll < 0.4:
        return ia.Power(exponent=float(rng.uniform(0.5, 1.8)))
    if roll < 0.7:
        return ia.Sigmoid(a=float(rng.uniform(2.0, 8.0)), x0=float(rng.uniform(0.3, 0.7)))
    return ia.ConfirmationBias(b=float(rng.uniform(0.05, 0.4)))


def complementary_pair(rng: np.random.Generator, n: int) -> tuple[ia.Belief, ia.Belief]:
    """A belief with a random (possibly partial) support plus a second belief
    covering the rest of the space, as the complete-rule variants require."""
    prior = random_belief(rng, n, full_support=bool(rng.random() < 0.5))
    holes = np.flatnonzero(prior.probs <= 1e-12)
    weights = rng.dirichlet(np.ones(n))
    if holes.size:
        boost = np.zeros(n)
        boost[holes] = rng.dirichlet(np.ones(holes.size))
        weights = 0.5 * weights + 0.5 * boost
    return prior, ia.Belief(weights / weights.sum())


def random_partition_ladder(rng: np.random.Generator, n: int, min_mass: float = 0.0) -> ia.Ladder:
    """Partition ladder over n states; every entry on a level's support gets
    at least min_mass so thresholded rules stay reachable."""
    order = rng.permutation(n)
    blocks: list[list[int]] = []
    pos = 0
    while pos < n:
        width = int(rng.integers(1, min(3, n - pos) + 1))
        blocks.append(sorted(order[pos:pos + width].tolist()))
        pos += width
    levels = []
    for block in blocks:
        raw = rng.dirichlet(np.ones(len(block)))
        if min_mass > 0:
            raw = (1 - min_mass * len(block)) * raw + min_mass
        probs = np.zeros(n)
        probs[block] = raw
        levels.append(ia.Belief(probs))
    return ia.Ladder(levels)
