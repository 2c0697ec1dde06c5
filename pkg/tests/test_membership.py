import math

import numpy as np
import pytest

from gfdiv.core.models import Verdict
from gfdiv.core.probcore import Dist
from gfdiv.exceptions import InvalidTransformError, ParameterRangeError, SizeMismatchError
from gfdiv.generators import (
    GTransform,
    as_zero_at_one,
    curvature_shape,
    lookup_generator,
    lookup_shape,
    lookup_transform,
)
from gfdiv.services.membership import (
    TABLE_ONE,
    check_inv_gprime_concave,
    check_T,
    check_Tminus,
    check_Tplus,
    concavity_gap_at,
    count_stationary_roots,
    locate_stationary_roots,
    membership_matrix,
    tminus_gap_at,
    tplus_gap_at,
)


@pytest.mark.parametrize(
    ("name", "verdict"),
    [
        ("kl", Verdict.PASS),
        ("jensen_shannon", Verdict.PASS),
        ("squared_hellinger", Verdict.PASS),
        ("pearson_chi2", Verdict.FAIL),
    ],
)
def test_class_T_examples(name, verdict):
    assert check_T(lookup_generator(name)).verdict is verdict


def test_class_T_witness_replays():
    f = lookup_generator("pearson_chi2")
    report = check_T(f)
    assert report.target == "class_T.concavity[pearson_chi2]"
    a, b = report.witness
    assert concavity_gap_at(curvature_shape(f).fn, a, b) == pytest.approx(report.min_gap)


def test_class_T_flags_negative_shape():
    report = check_T(lookup_generator("sqrt"))
    assert report.verdict is Verdict.FAIL
    assert report.target.startswith("class_T.nonnegativity")
    assert len(report.witness) == 1


def test_class_T_is_seeded():
    f = lookup_generator("triangular")
    assert check_T(f, seed=11).model_dump() == check_T(f, seed=11).model_dump()


def test_tplus_examples():
    equality = check_Tplus(lookup_shape("power_shape", coef=2.0, gamma=2.0))
    assert equality.verdict is Verdict.PASS
    assert equality.min_gap == pytest.approx(0.0, abs=1e-9)
    assert check_Tplus(lookup_shape("log1p_shape")).verdict is Verdict.PASS
    assert check_Tplus(lookup_shape("ratio_shape", b=2.0, c=1.0)).verdict is Verdict.PASS

    le_cam = check_Tplus(curvature_shape(lookup_generator("le_cam")))
    assert le_cam.verdict is Verdict.FAIL
    x, alpha = le_cam.witness
    assert tplus_gap_at(curvature_shape(lookup_generator("le_cam")), x, alpha) == pytest.approx(
        le_cam.min_gap
    )


def test_tminus_examples():
    quarter_root = check_Tminus(lookup_shape("power_shape", coef=0.25, gamma=0.5))
    assert quarter_root.verdict is Verdict.PASS
    assert quarter_root.min_gap == pytest.approx(0.0, abs=1e-9)
    assert check_Tminus(lookup_shape("sinusoidal_shape")).verdict is Verdict.PASS

    identity = lookup_shape("power_shape", coef=1.0, gamma=1.0)
    report = check_Tminus(identity)
    assert report.verdict is Verdict.FAIL
    assert tminus_gap_at(identity, *report.witness) == pytest.approx(report.min_gap)


def test_bounded_power_shape_is_in_tminus():
    assert check_Tminus(lookup_shape("bounded_power_shape", s=0.75)).verdict is Verdict.PASS


@pytest.mark.parametrize("gamma", [2.0, 3.0, -1.0])
def test_tplus_equality_family(gamma):
    report = check_Tplus(lookup_shape("power_shape", coef=gamma * (gamma - 1.0), gamma=gamma))
    assert report.verdict is Verdict.PASS
    assert report.notes["max_abs_residual"] < 1e-8


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.7])
def test_tminus_equality_family(lam):
    report = check_Tminus(lookup_shape("power_shape", coef=lam * (1.0 - lam), gamma=lam))
    assert report.verdict is Verdict.PASS
    assert report.notes["max_abs_residual"] < 1e-8


@pytest.mark.parametrize(
    ("name", "verdict"),
    [("x", Verdict.PASS), ("log1p", Verdict.PASS), ("exp_minus_one", Verdict.FAIL)],
)
def test_inverse_derivative_concavity(name, verdict):
    assert check_inv_gprime_concave(lookup_transform(name)).verdict is verdict


def test_inverse_derivative_rejects_decreasing_transform():
    falling = GTransform(name="falling", fn=lambda x: -x, d1=lambda x: -np.ones_like(x))
    with pytest.raises(InvalidTransformError):
        check_inv_gprime_concave(falling)


def test_stationary_roots_match_cubic():
    f = as_zero_at_one(lookup_generator("power", p=3.0))
    qz, rz = Dist([0.3, 0.7]), Dist([0.6, 0.4])
    roots = locate_stationary_roots(f, qz, rz, lam=3.21875, a=-2.71875, b=3.0)
    # H(t) = t³ - 3t + 1/2
    expected = sorted(r.real for r in np.roots([1.0, 0.0, -3.0, 0.5]) if r.real > 0)
    assert roots == pytest.approx(expected, abs=1e-9)

    grid = np.geomspace(1e-6, 1e6, 1_000_000)
    values = grid**3 - 3.0 * grid + 0.5
    dense_count = int(np.count_nonzero(np.diff(np.sign(values)) != 0))
    assert len(roots) == dense_count == 2


def test_quadratic_generator_has_at_most_two_roots(rng):
    f = as_zero_at_one(lookup_generator("power", p=2.0))
    for _ in range(20):
        qz, rz = Dist(rng.dirichlet(np.ones(3))), Dist(rng.dirichlet(np.ones(3)))
        lam = float(rng.uniform(0.1, 5.0))
        a, b = rng.normal(size=2)
        assert count_stationary_roots(f, qz, rz, lam, float(a), float(b)) <= 2


def test_degenerate_kl_roots_are_affine():
    law = Dist([0.4, 0.6])
    roots = locate_stationary_roots(lookup_generator("kl"), law, law, lam=1.0, a=-1.0, b=2.0)
    assert roots == pytest.approx([0.5], rel=1e-9)


def test_stationary_roots_validate_inputs():
    kl = lookup_generator("kl")
    with pytest.raises(SizeMismatchError):
        count_stationary_roots(kl, Dist.uniform(2), Dist.uniform(3), 1.0, 0.0, 0.0)
    with pytest.raises(ParameterRangeError):
        count_stationary_roots(kl, Dist.uniform(2), Dist.uniform(2), 0.0, 0.0, 0.0)


def test_table_two_matches_expectations():
    rows = membership_matrix("2")
    assert [row.label for row, _ in rows] == ["Pearson chi2", "Triangular", "Le Cam"]
    for row, report in rows:
        assert (report.verdict is Verdict.PASS) == row.expected


@pytest.mark.slow
def test_table_one_matches_expectations():
    rows = membership_matrix("1")
    assert len(rows) == len(TABLE_ONE)
    for row, report in rows:
        assert (report.verdict is Verdict.PASS) == row.expected, row.label


def test_unknown_table():
    with pytest.raises(ParameterRangeError):
        membership_matrix("3")


def test_reports_are_finite_records():
    report = check_Tplus(lookup_shape("ratio_shape", b=2.0, c=1.0))
    assert math.isfinite(report.notes["max_abs_residual"])
    assert report.samples == report.grid_res**2
