import math

import numpy as np
import pytest

from gfdiv.core.probcore import Channel, Dist, product_dist, push_forward
from gfdiv.exceptions import ParameterRangeError, SizeMismatchError
from gfdiv.generators import lookup_generator
from gfdiv.services.divergence import (
    f_div,
    gf_div,
    kl_div,
    renyi_div,
    support_extension_used,
)

HALF = Dist.bernoulli(0.5)
QUARTER = Dist.bernoulli(0.25)

REGISTRY_F = [
    "kl",
    "reverse_kl",
    "squared_hellinger",
    "jensen_shannon",
    "alpha_divergence",
    "pearson_chi2",
    "triangular",
    "le_cam",
    "one_minus_sqrt",
]


def test_f_div_examples():
    assert f_div(Dist.bernoulli(0.3), Dist.bernoulli(0.3), lookup_generator("kl")) == 0.0
    assert f_div(HALF, QUARTER, lookup_generator("pearson_chi2")) == pytest.approx(1.0 / 3.0)
    assert f_div(HALF, QUARTER, lookup_generator("kl")) == pytest.approx(0.143841, abs=1e-6)


def test_support_extension_uses_slope_at_infinity():
    p, q = Dist([0.5, 0.5]), Dist([1.0, 0.0])
    assert support_extension_used(p, q)
    assert f_div(p, q, lookup_generator("kl")) == math.inf
    # f(1/2) + 0.5·slope_inf, slope_inf = 1
    expected = (1.0 - math.sqrt(0.5)) ** 2 + 0.5
    assert f_div(p, q, lookup_generator("squared_hellinger")) == pytest.approx(expected)


def test_zero_mass_under_p_uses_value_at_origin():
    p, q = Dist([1.0, 0.0]), Dist([0.5, 0.5])
    assert not support_extension_used(p, q)
    # 0.5·f(2) + 0.5·f(0) for triangular discrimination
    assert f_div(p, q, lookup_generator("triangular")) == pytest.approx(0.5 * 1 / 3 + 0.5)


@pytest.mark.parametrize("name", REGISTRY_F)
def test_divergence_bounded_by_dm(name, random_dist):
    f = lookup_generator(name)
    bound = float(f.f0) + float(f.slope_inf)
    for _ in range(20):
        value = f_div(random_dist(4), random_dist(4), f)
        assert value >= -1e-12
        assert value <= bound + 1e-9


@pytest.mark.parametrize("name", REGISTRY_F)
def test_data_processing(name, rng, random_dist):
    f = lookup_generator(name)
    for _ in range(10):
        p, q = random_dist(4), random_dist(4)
        kernel = Channel(rng.dirichlet(np.ones(3), size=4))
        processed = f_div(push_forward(p, kernel), push_forward(q, kernel), f)
        assert processed <= f_div(p, q, f) + 1e-10


def test_gf_div_examples(pair):
    chi2 = pair("log1p", "pearson_chi2")
    assert gf_div(HALF, QUARTER, chi2) == pytest.approx(math.log(4.0 / 3.0))
    assert gf_div(HALF, QUARTER, chi2) == pytest.approx(renyi_div(HALF, QUARTER, 2.0))

    bhattacharyya = pair("neg_log1m", "one_minus_sqrt")
    assert gf_div(HALF, HALF, bhattacharyya) == 0.0
    value = gf_div(Dist.bernoulli(0.9), Dist.bernoulli(0.1), bhattacharyya)
    assert value == pytest.approx(-math.log(0.6), abs=1e-6)


def test_gf_div_saturates_at_domain_edge(pair):
    bhattacharyya = pair("neg_log1m", "one_minus_sqrt")
    disjoint = gf_div(Dist([1.0, 0.0]), Dist([0.0, 1.0]), bhattacharyya)
    assert disjoint == math.inf


@pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0])
def test_renyi_matches_transformed_hellinger_order(pair, rng, alpha):
    renyi_pair = pair("renyi_G", "hellinger_order", {"alpha": alpha}, alpha=alpha)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        p, q = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
        independent = math.log(np.sum(p**alpha * q ** (1.0 - alpha))) / (alpha - 1.0)
        assert gf_div(Dist(p), Dist(q), renyi_pair) == pytest.approx(independent, abs=1e-10)
        assert renyi_div(Dist(p), Dist(q), alpha) == pytest.approx(independent, abs=1e-10)


def test_renyi_examples():
    assert renyi_div(HALF, HALF, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert renyi_div(HALF, QUARTER, 2.0) == pytest.approx(math.log(4.0 / 3.0))
    half_order = renyi_div(Dist.bernoulli(0.9), Dist.bernoulli(0.1), 0.5)
    assert half_order == pytest.approx(1.021651, abs=1e-6)
    with pytest.raises(ParameterRangeError):
        renyi_div(HALF, QUARTER, 1.0)


def test_kl_div_agrees_with_generator():
    p, q = Dist.bernoulli(0.9), Dist.bernoulli(0.1)
    assert kl_div(p, q) == pytest.approx(0.8 * math.log(9.0))
    assert kl_div(p, q) == pytest.approx(f_div(p, q, lookup_generator("kl")))


def test_size_mismatch():
    with pytest.raises(SizeMismatchError):
        f_div(Dist.uniform(2), Dist.uniform(3), lookup_generator("kl"))


@pytest.mark.slow
def test_kl_is_additive_and_chi2_multiplicative_on_products(rng):
    kl, chi2 = lookup_generator("kl"), lookup_generator("pearson_chi2")
    for _ in range(10_000):
        n, m = (int(k) for k in rng.integers(2, 5, size=2))
        p1, q1 = Dist(rng.dirichlet(np.ones(n))), Dist(rng.dirichlet(np.ones(n)))
        p2, q2 = Dist(rng.dirichlet(np.ones(m))), Dist(rng.dirichlet(np.ones(m)))
        joint_p, joint_q = product_dist(p1, p2), product_dist(q1, q2)

        additive = kl_div(p1, q1) + kl_div(p2, q2)
        assert kl_div(joint_p, joint_q) == pytest.approx(additive, abs=1e-10)

        factors = (1.0 + f_div(p1, q1, chi2)) * (1.0 + f_div(p2, q2, chi2))
        assert 1.0 + f_div(joint_p, joint_q, chi2) == pytest.approx(factors, rel=1e-10)
