import math

import numpy as np
import pytest

from gfdiv.config import get_settings
from gfdiv.core.models import Verdict
from gfdiv.core.probcore import Dist
from gfdiv.exceptions import ParameterRangeError, SizeMismatchError
from gfdiv.services.membership import check_T
from gfdiv.services.subadditivity import (
    binary_gap_at,
    binary_gap_scan,
    binary_gaps,
    combine_gap,
    div_gap,
    equivalence_curve,
    lattice_points,
    sobol_points,
)

HALF = Dist.bernoulli(0.5)
QUARTER = Dist.bernoulli(0.25)


def test_combine_gap_extended_reals():
    gaps = combine_gap(
        np.array([1.0, math.inf, 1.0, math.inf]),
        np.array([1.0, 1.0, 1.0, 0.0]),
        np.array([1.5, math.inf, math.inf, 2.0]),
    )
    assert gaps.tolist() == [0.5, 0.0, -math.inf, math.inf]
    assert not np.any(np.isnan(gaps))


def test_div_gap_examples(pair, random_dist):
    kl = pair("x", "kl")
    for _ in range(5):
        args = [random_dist(3) for _ in range(4)]
        assert div_gap(kl, *args) == pytest.approx(0.0, abs=1e-10)

    assert div_gap(pair("x", "pearson_chi2"), HALF, QUARTER, HALF, QUARTER) == pytest.approx(
        -1.0 / 9.0
    )
    assert div_gap(pair("log1p", "pearson_chi2"), HALF, QUARTER, HALF, QUARTER) == pytest.approx(
        0.0, abs=1e-10
    )
    with pytest.raises(SizeMismatchError):
        div_gap(kl, Dist.uniform(2), Dist.uniform(3), HALF, HALF)


def test_binary_gap_at_orders_arguments(pair):
    chi2 = pair("x", "pearson_chi2")
    # rY = Bern(x), qY = Bern(y), rZ = Bern(r), qZ = Bern(s)
    assert binary_gap_at(chi2, 0.25, 0.5, 0.25, 0.5) == pytest.approx(-1.0 / 9.0)
    points = np.array([[0.25, 0.5, 0.25, 0.5], [0.3, 0.6, 0.2, 0.7]])
    vectorized = binary_gaps(chi2, points)
    assert vectorized[0] == pytest.approx(-1.0 / 9.0)
    assert vectorized[1] == pytest.approx(binary_gap_at(chi2, *points[1]))


def test_lattice_is_open_and_lexicographic():
    points = lattice_points(3)
    assert points.shape == (81, 4)
    assert points.min() == pytest.approx(0.25)
    assert points.max() == pytest.approx(0.75)
    assert points[1].tolist() == pytest.approx([0.25, 0.25, 0.25, 0.5])


def test_sobol_points_are_seeded_and_interior():
    first, second = sobol_points(100, seed=7), sobol_points(100, seed=7)
    np.testing.assert_array_equal(first, second)
    assert first.shape == (100, 4)
    assert np.all((first > 0.0) & (first < 1.0))
    assert sobol_points(0, seed=7).shape == (0, 4)


def test_scan_passes_for_kl(pair):
    report = binary_gap_scan(pair("x", "kl"), grid_res=25, random_samples=4096)
    assert report.verdict is Verdict.PASS
    assert report.min_gap == pytest.approx(0.0, abs=1e-10)
    assert report.samples == 25**4 + 4096


def test_scan_fails_for_pearson_with_replayable_witness(pair):
    chi2 = pair("x", "pearson_chi2")
    report = binary_gap_scan(chi2, grid_res=25, random_samples=4096)
    assert report.verdict is Verdict.FAIL
    assert report.min_gap <= -1.0 / 9.0
    assert binary_gap_at(chi2, *report.witness) == pytest.approx(report.min_gap)


def test_scan_passes_for_squared_hellinger(pair):
    report = binary_gap_scan(pair("x", "squared_hellinger"), grid_res=25, random_samples=4096)
    assert report.verdict is Verdict.PASS


def test_scan_is_deterministic_across_threads(pair, monkeypatch):
    monkeypatch.setenv("GFDIV_SCAN_CHUNK_SIZE", "4096")
    get_settings.cache_clear()
    chi2 = pair("x", "pearson_chi2")
    single = binary_gap_scan(chi2, grid_res=12, random_samples=2048, seed=3, threads=1)
    pooled = binary_gap_scan(chi2, grid_res=12, random_samples=2048, seed=3, threads=4)
    assert single.model_dump() == pooled.model_dump()


@pytest.mark.parametrize("name", ["triangular", "le_cam"])
def test_scan_passes_for_triangular_and_le_cam(pair, name):
    report = binary_gap_scan(pair("x", name), grid_res=15, random_samples=2048)
    assert report.verdict is Verdict.PASS
    assert report.min_gap >= -1e-12


@pytest.mark.parametrize(
    ("name", "params"), [("pearson_chi2", {}), ("hellinger_order", {"alpha": 2.0})]
)
def test_scan_failure_implies_class_T_failure(pair, name, params):
    chosen = pair("x", name, **params)
    report = binary_gap_scan(chosen, grid_res=15, random_samples=2048)
    assert report.verdict is Verdict.FAIL
    assert binary_gap_at(chosen, *report.witness) == pytest.approx(report.min_gap)
    assert check_T(chosen.f).verdict is Verdict.FAIL


def test_scan_rejects_tiny_grid(pair):
    with pytest.raises(ParameterRangeError):
        binary_gap_scan(pair("x", "kl"), grid_res=1)


def test_equivalence_curve_vanishes_at_zero(pair, fast_opts):
    hellinger = pair("x", "squared_hellinger")
    laws = (Dist([0.2, 0.8]), Dist([0.6, 0.4]), Dist([0.7, 0.3]), Dist([0.1, 0.9]))
    values = equivalence_curve(hellinger, *laws, [0.0, 0.1, 0.3, 0.6, 0.9], fast_opts)
    assert values[0] == pytest.approx(0.0, abs=1e-8)
    assert all(value >= -1e-6 for value in values)


def test_equivalence_curve_rejects_bad_weights(pair):
    with pytest.raises(ParameterRangeError):
        equivalence_curve(pair("x", "kl"), HALF, QUARTER, HALF, QUARTER, [1.5])


SUBADDITIVE_PAIRS = [
    ("x", "kl"),
    ("x", "reverse_kl"),
    ("x", "squared_hellinger"),
    ("x", "jensen_shannon"),
    ("x", "alpha_divergence"),
    ("x", "triangular"),
    ("x", "le_cam"),
    ("neg_log1m", "one_minus_sqrt"),
]


@pytest.mark.slow
@pytest.mark.parametrize(("g", "f"), SUBADDITIVE_PAIRS)
def test_equivalence_curve_is_nonnegative_for_subadditive_pairs(pair, rng, fast_opts, g, f):
    chosen = pair(g, f)
    for _ in range(200):
        ny, nz = (int(n) for n in rng.integers(2, 4, size=2))
        laws = [Dist(rng.dirichlet(np.ones(n))) for n in (ny, ny, nz, nz)]
        eps = float(rng.uniform())
        (value,) = equivalence_curve(chosen, *laws, [eps], fast_opts)
        assert value >= -1e-6
