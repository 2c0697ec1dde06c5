import math

import numpy as np

import pytest

from gfdiv.core.probcore import Channel, Dist
from gfdiv.exceptions import ConvexityRequiredError, ParameterRangeError
from gfdiv.generators import lookup_generator
from gfdiv.services.bounds import (
    Direction,
    blocklength_lower,
    blocklength_table,
    fano_lower,
    ht_bound_check,
    kl_comparison,
    simulate_threshold_test,
)


def _binary_entropy(eps: float) -> float:
    return -eps * math.log(eps) - (1.0 - eps) * math.log(1.0 - eps)


def test_fano_examples(pair):
    kl = pair("x", "kl")
    assert fano_lower(kl, 4, 0.0).value == pytest.approx(math.log(4.0))
    expected = math.log(4.0) - _binary_entropy(0.1) - 0.1 * math.log(3.0)
    assert fano_lower(kl, 4, 0.1).value == pytest.approx(expected)
    assert fano_lower(kl, 4, 0.1).value == pytest.approx(0.951350, abs=1e-6)


def test_fano_for_bhattacharyya_pair(pair):
    result = fano_lower(pair("neg_log1m", "one_minus_sqrt"), 2, 0.0)
    assert result.value == pytest.approx(-math.log(math.sqrt(2.0) / 2.0))
    assert result.value == pytest.approx(0.346574, abs=1e-6)
    assert result.side_conditions["g_convex"]


@pytest.mark.parametrize("M", [2, 3, 5, 8])
def test_fano_vanishes_at_uniform_guessing(pair, M):
    for name in ("kl", "squared_hellinger", "pearson_chi2"):
        value = fano_lower(pair("x", name), M, (M - 1) / M).value
        assert value == pytest.approx(0.0, abs=1e-8)


def test_fano_preconditions(pair):
    with pytest.raises(ConvexityRequiredError):
        fano_lower(pair("log1p", "pearson_chi2"), 4, 0.1)
    with pytest.raises(ParameterRangeError):
        fano_lower(pair("x", "kl"), 1, 0.1)
    with pytest.raises(ParameterRangeError):
        fano_lower(pair("x", "kl"), 4, 1.5)


def test_blocklength_examples(pair, fast_opts):
    kl = pair("x", "kl")
    result = blocklength_lower(kl, 4, 0.1, Channel.bsc(0.1), fast_opts)
    assert result.value == pytest.approx(2.58475, abs=1e-4)
    assert result.inputs_echo["capacity"] == pytest.approx(0.368064, abs=1e-6)
    assert not result.side_conditions["zero_information"]

    useless = blocklength_lower(kl, 4, 0.1, Channel([[0.5, 0.5], [0.5, 0.5]]), fast_opts)
    assert useless.value == math.inf
    assert useless.side_conditions["zero_information"]


def test_blocklength_table_is_row_major(pair, fast_opts):
    table = blocklength_table(pair("x", "kl"), Channel.bsc(0.1), [2, 4], [0.1, 0.2], fast_opts)
    assert [(r.inputs_echo["M"], r.inputs_echo["eps"]) for r in table] == [
        (2, 0.1),
        (2, 0.2),
        (4, 0.1),
        (4, 0.2),
    ]
    assert table[2].value == pytest.approx(2.58475, abs=1e-4)


@pytest.mark.parametrize(
    ("g", "f"), [("x", "kl"), ("x", "squared_hellinger"), ("neg_log1m", "one_minus_sqrt")]
)
def test_blocklength_is_monotone_in_eps_and_M(pair, fast_opts, g, f):
    Ms, epsilons = [2, 3, 4, 8, 16], [0.01, 0.05, 0.1, 0.2, 0.3, 0.45]
    table = blocklength_table(pair(g, f), Channel.bsc(0.1), Ms, epsilons, fast_opts)
    grid = np.array([result.value for result in table]).reshape(len(Ms), len(epsilons))
    assert np.all(np.diff(grid, axis=1) <= 1e-12)
    assert np.all(np.diff(grid, axis=0) >= -1e-12)
    single = blocklength_lower(pair(g, f), 8, 0.2, Channel.bsc(0.1), fast_opts)
    assert single.value == pytest.approx(grid[3, 3])


def test_ht_identity_test_is_tight(pair):
    result = ht_bound_check(
        pair("x", "kl"), Dist.bernoulli(0.9), Dist.bernoulli(0.2), n=1, alpha=0.9, beta=0.2
    )
    assert result.value == pytest.approx(0.0, abs=1e-12)
    assert result.side_conditions["consistent"]


def test_ht_equal_rates_leave_full_slack(pair):
    hellinger = pair("x", "squared_hellinger")
    p, q = Dist.bernoulli(0.7), Dist.bernoulli(0.4)
    result = ht_bound_check(hellinger, p, q, n=3, alpha=0.5, beta=0.5)
    assert result.value == pytest.approx(3 * result.inputs_echo["single_letter"])
    assert result.value >= 0.0


@pytest.mark.slow
def test_ht_simulated_threshold_test(pair):
    p, q = Dist.bernoulli(0.6), Dist.bernoulli(0.4)
    alpha, beta = simulate_threshold_test(p, q, n=10, threshold=-2.0, trials=1_000_000)
    assert alpha > beta
    result = ht_bound_check(pair("x", "kl"), p, q, n=10, alpha=alpha, beta=beta)
    assert result.side_conditions["consistent"]


def test_simulation_is_seeded():
    p, q = Dist.bernoulli(0.6), Dist.bernoulli(0.4)
    first = simulate_threshold_test(p, q, n=5, threshold=0.0, trials=20_000, seed=5)
    assert first == simulate_threshold_test(p, q, n=5, threshold=0.0, trials=20_000, seed=5)


def test_ht_preconditions(pair):
    kl = pair("x", "kl")
    with pytest.raises(ParameterRangeError):
        ht_bound_check(kl, Dist.bernoulli(0.6), Dist.bernoulli(0.4), n=0, alpha=0.5, beta=0.5)
    with pytest.raises(ParameterRangeError):
        ht_bound_check(kl, Dist.bernoulli(0.6), Dist.bernoulli(0.4), n=1, alpha=1.2, beta=0.5)


def test_kl_comparison_plus():
    square = lookup_generator("power", p=2.0)
    half, quarter = Dist.bernoulli(0.5), Dist.bernoulli(0.25)
    result = kl_comparison(square, 2.0, 1.0, half, quarter, Direction.PLUS)
    assert result.inputs_echo["bound"] == pytest.approx(math.log(4.0 / 3.0))
    assert result.value == pytest.approx(0.143841, abs=1e-6)
    assert result.side_conditions == {"envelope_holds": True, "bound_holds": True}

    same = kl_comparison(square, 2.0, 1.0, half, half, Direction.PLUS)
    assert same.value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
def test_kl_comparison_plus_over_random_pairs(rng, s):
    power = lookup_generator("power", p=s)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        p, q = Dist(rng.dirichlet(np.ones(n))), Dist(rng.dirichlet(np.ones(n)))
        result = kl_comparison(power, s, 1.0, p, q, Direction.PLUS)
        assert result.value >= -1e-10
        assert result.side_conditions == {"envelope_holds": True, "bound_holds": True}


def test_kl_comparison_minus_reports_both_readings():
    root = lookup_generator("sqrt")
    p, q = Dist.bernoulli(0.9), Dist.bernoulli(0.1)
    result = kl_comparison(root, 0.5, 1.0, p, q, Direction.MINUS)
    echo = result.inputs_echo
    assert echo["convention"] == "hat"
    assert echo["bound"] == pytest.approx(1.021651, abs=1e-6)
    assert echo["kl"] == pytest.approx(1.757779, abs=1e-6)
    assert result.value == pytest.approx(-0.736128, abs=1e-6)
    assert not result.side_conditions["bound_holds"]
    assert echo["direct_bound"] == pytest.approx(-2.0 * math.log(0.4))
    assert echo["direct_bound"] >= echo["kl"]


def test_kl_comparison_flags_envelope_violation():
    kl = lookup_generator("kl")
    result = kl_comparison(kl, 2.0, 1.0, Dist.bernoulli(0.5), Dist.bernoulli(0.25), Direction.PLUS)
    assert not result.side_conditions["envelope_holds"]


def test_kl_comparison_parameter_ranges():
    square = lookup_generator("power", p=2.0)
    half = Dist.bernoulli(0.5)
    with pytest.raises(ParameterRangeError):
        kl_comparison(square, 0.5, 1.0, half, half, Direction.PLUS)
    with pytest.raises(ParameterRangeError):
        kl_comparison(square, 2.0, 1.0, half, half, Direction.MINUS)
