import math
import random

import pytest

from conftest import random_channels
from fadegap import (
    FadingDistribution,
    ValidationError,
    build_chain,
    closed_form_routes,
    envelope_integral,
    expected_capacity,
    expected_rate_of,
    multiplicative_family,
    optimal_allocation,
    prepare,
)


def pipeline(dist):
    ch = prepare(dist)
    chain = build_chain(ch)
    return ch, chain, optimal_allocation(ch, chain)


@pytest.fixture
def two_state():
    return pipeline(FadingDistribution((4, 1), (0.5, 0.5)))


def test_optimal_allocation_two_state(two_state):
    ch, chain, alloc = two_state
    assert alloc.beta == (pytest.approx(0.5, rel=1e-15), 1.0)
    assert alloc.lam[0] == pytest.approx(4.0, rel=1e-15)
    assert alloc.lam[1] == pytest.approx(4 / 3, rel=1e-15)
    assert alloc.active_states == (1, 2)


def test_optimal_allocation_epsilon_regularized_channel():
    # crossing point (0.5*6 - 1)/0.5 = 4 lies above the budget, so only the
    # strong state is active
    ch, chain, alloc = pipeline(FadingDistribution((1, 1 / 6), (0.5, 0.5)))
    assert (chain.s, chain.w) == (1, 1)
    assert alloc.beta == (1.0, 1.0)
    assert alloc.active_states == (1,)
    assert alloc.per_state_rate[1] == 0.0


def test_optimal_allocation_single_state():
    ch, chain, alloc = pipeline(FadingDistribution((2,), (1.0,)))
    assert alloc.beta == (1.0,)
    assert alloc.lam == (pytest.approx(3.0, rel=1e-15),)


def test_expected_capacity_two_state(two_state):
    ch, chain, alloc = two_state
    value = expected_capacity(ch, alloc)
    # closed form and a direct objective evaluation at the optimum
    assert value == pytest.approx(0.5 * math.log(4) + 0.5 * math.log(4 / 3), rel=1e-13)
    assert value == pytest.approx(expected_rate_of(ch, (0.5, 1.0)), rel=1e-13)
    assert value == pytest.approx(0.8369882167858357, rel=1e-12)


def test_expected_capacity_multiplicative_family():
    ch, chain, alloc = pipeline(multiplicative_family(2, 2))
    assert expected_capacity(ch, alloc) == pytest.approx(math.log(7 / 6), rel=1e-13)


def test_expected_capacity_single_state_equals_log1p_gain():
    ch, chain, alloc = pipeline(FadingDistribution((2,), (1.0,)))
    assert expected_capacity(ch, alloc) == pytest.approx(math.log(3), rel=1e-13)


def test_closed_form_routes_agree(two_state):
    ch, chain, alloc = two_state
    r1, r2 = closed_form_routes(ch, alloc)
    assert r1 == pytest.approx(r2, rel=1e-12)


def test_corrupted_allocation_is_detected(two_state):
    from fadegap import InternalConsistencyError, PowerAllocation

    ch, chain, alloc = two_state
    wrong_lam = PowerAllocation(
        beta=alloc.beta, lam=(2.0, alloc.lam[1]), per_state_rate=alloc.per_state_rate
    )
    with pytest.raises(InternalConsistencyError):
        expected_capacity(ch, wrong_lam)
    wrong_beta = PowerAllocation(
        beta=(1.0, 1.0), lam=alloc.lam, per_state_rate=alloc.per_state_rate
    )
    with pytest.raises(InternalConsistencyError):
        expected_capacity(ch, wrong_beta)


def test_expected_rate_examples(two_state):
    ch, _, _ = two_state
    assert expected_rate_of(ch, (0.0, 1.0)) == pytest.approx(math.log(2), rel=1e-15)
    for dist in random_channels(5, seed=5):
        pch = prepare(dist)
        k = pch.num_states
        beta = (0.0,) * (k - 1) + (1.0,)
        assert expected_rate_of(pch, beta) == pytest.approx(
            math.log1p(float(pch.gains[-1])), rel=1e-13
        )


@pytest.mark.parametrize(
    "beta",
    [(0.7, 0.3), (-0.1, 1.0), (0.5, 1.2), (0.5,), (0.1, 0.5, 1.0)],
)
def test_expected_rate_rejects_infeasible_beta(two_state, beta):
    ch, _, _ = two_state
    with pytest.raises(ValidationError):
        expected_rate_of(ch, beta)


def test_allocation_invariants_on_random_channels():
    for dist in random_channels(40, seed=31, max_states=8):
        ch, chain, alloc = pipeline(dist)
        prev = 0.0
        for b in alloc.beta:
            assert b >= prev - 1e-15
            prev = b
        assert alloc.beta[-1] == 1
        pw = chain.pi[chain.w - 1]
        for k, lam in enumerate(alloc.lam, start=1):
            if k > pw:
                assert lam == 1
            else:
                assert lam >= 1 - 1e-12
        for rate, b, b_prev in zip(
            alloc.per_state_rate, alloc.beta, (0.0,) + alloc.beta[:-1]
        ):
            assert rate >= 0.0
            if b == b_prev:
                assert rate == 0.0
        assert alloc.active_states == chain.active_states


def test_no_feasible_beta_beats_the_closed_form():
    rng = random.Random(17)
    for dist in random_channels(5, seed=41, max_states=6):
        ch, chain, alloc = pipeline(dist)
        best = expected_capacity(ch, alloc)
        k = ch.num_states
        for _ in range(1000):
            beta = sorted(rng.uniform(0, 1) for _ in range(k))
            assert expected_rate_of(ch, beta) <= best + 1e-12


def test_capacity_equals_envelope_integral():
    for dist in random_channels(25, seed=42, max_states=8):
        ch, chain, alloc = pipeline(dist)
        integral = envelope_integral(chain, ch, 0.0, 1.0)
        assert expected_capacity(ch, alloc) == pytest.approx(integral, abs=1e-8)


def test_capacity_is_monotone_in_gains():
    rng = random.Random(4242)
    for dist in random_channels(20, seed=43, max_states=6):
        ch, chain, alloc = pipeline(dist)
        base = expected_capacity(ch, alloc)
        gains = list(dist.gains)
        idx = rng.randrange(len(gains))
        gains[idx] *= 1 + rng.uniform(0.001, 0.2)
        bumped_ch, _, bumped_alloc = pipeline(FadingDistribution(tuple(gains), dist.probs))
        assert expected_capacity(bumped_ch, bumped_alloc) >= base - 1e-12
