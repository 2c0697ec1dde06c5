import math

import numpy as np
import pytest

from gfdiv.exceptions import (
    DomainViolationError,
    IndeterminateLimitError,
    InvalidGeneratorError,
    ParameterRangeError,
    SpecParseError,
    UnknownGeneratorError,
)
from gfdiv.generators import (
    Curvature,
    FGenerator,
    NormTag,
    as_one_at_one,
    as_zero_at_one,
    catalog_lookup,
    curvature_shape,
    dm_of,
    generator_from_spec,
    is_indeterminate,
    lookup_generator,
    lookup_shape,
    lookup_transform,
    make_pair,
    registry_names,
    validate_generator,
    validate_transform,
)
from gfdiv.generators import numeric

CATALOG_GENERATORS = [
    "kl",
    "reverse_kl",
    "squared_hellinger",
    "jensen_shannon",
    "alpha_divergence",
    "pearson_chi2",
    "triangular",
    "le_cam",
    "hellinger_order",
    "power",
    "kl_envelope",
    "sqrt",
    "one_minus_sqrt",
    "sinusoidal_concave",
]


@pytest.mark.parametrize(
    ("name", "expected"),
    [("kl", math.inf), ("squared_hellinger", 2.0), ("one_minus_sqrt", 1.0), ("le_cam", 0.5)],
)
def test_dm_of_catalog_entries(name, expected):
    assert dm_of(lookup_generator(name)) == expected


def test_oscillating_slope_is_indeterminate():
    wobble = FGenerator(name="wobble", fn=lambda x: x * np.sin(np.log(x)), f0=0.0)
    assert is_indeterminate(wobble.slope_inf)
    assert is_indeterminate(dm_of(wobble))
    with pytest.raises(IndeterminateLimitError):
        make_pair(lookup_transform("x"), wobble)


def test_numeric_limits_are_resolved_when_missing():
    derived = FGenerator(name="hellinger", fn=lambda x: (np.sqrt(x) - 1.0) ** 2)
    assert derived.f0 == pytest.approx(1.0)
    assert derived.slope_inf == pytest.approx(1.0, rel=1e-3)
    growing = FGenerator(name="xlogx", fn=lambda x: x * np.log(x), f0=0.0)
    assert growing.slope_inf == math.inf


def test_resolve_limit_branches():
    assert numeric.resolve_limit([2.0, 2.0, 2.0]) == 2.0
    assert numeric.resolve_limit([9.2, 13.8, 18.4]) == math.inf
    assert is_indeterminate(numeric.resolve_limit([1.0, -1.0, 1.0]))
    assert is_indeterminate(numeric.resolve_limit([1.0, math.nan, 1.0]))


def test_bhattacharyya_pair_sits_on_the_domain_edge():
    pair = make_pair(lookup_transform("neg_log1m"), lookup_generator("one_minus_sqrt"))
    assert pair.dm == pytest.approx(1.0)
    assert pair.g.nu == 1.0


def test_kl_pair_has_unbounded_domain():
    pair = make_pair(lookup_transform("x"), lookup_generator("kl"))
    assert pair.g.nu == math.inf
    assert pair.dm == math.inf


def test_pair_rejects_domain_overflow_and_wrong_track():
    with pytest.raises(DomainViolationError):
        make_pair(lookup_transform("neg_log1m"), lookup_generator("pearson_chi2"))
    with pytest.raises(DomainViolationError):
        make_pair(lookup_transform("x"), lookup_generator("sqrt"))


def test_registry_examples():
    order_two = lookup_generator("hellinger_order", alpha=2.0)
    assert order_two.value_at(3.0) == pytest.approx(8.0)
    renyi = lookup_transform("renyi_G", alpha=2.0)
    assert renyi.nu == math.inf
    assert renyi.scalar(1.0 / 3.0) == pytest.approx(math.log(4.0 / 3.0))
    assert lookup_generator("kl").d2(np.array([4.0]))[0] == pytest.approx(0.25)


@pytest.mark.parametrize("name", CATALOG_GENERATORS)
def test_catalog_generators_validate(name):
    validate_generator(lookup_generator(name))


@pytest.mark.parametrize("name", ["x", "x_pow", "log1p", "neg_log1m", "log_sinh", "renyi_G"])
def test_catalog_transforms_validate(name):
    validate_transform(lookup_transform(name))


LOG_GRID = np.geomspace(1e-3, 1e3, 100)


@pytest.mark.parametrize("name", CATALOG_GENERATORS)
def test_analytic_second_derivative_matches_finite_differences(name):
    f = lookup_generator(name)
    assert f.d1 is not None and f.d2 is not None
    exact = f.d2(LOG_GRID)
    approx = numeric.derivative(f.d1, order=1)(LOG_GRID)
    tolerance = np.maximum(1e-6, 1e-6 * np.abs(exact))
    assert np.all(np.abs(approx - exact) <= tolerance)


@pytest.mark.parametrize("name", CATALOG_GENERATORS)
def test_analytic_first_derivative_matches_finite_differences(name):
    f = lookup_generator(name)
    exact = f.d1(LOG_GRID)
    approx = numeric.derivative(f.fn, order=1)(LOG_GRID)
    tolerance = np.maximum(1e-6, 1e-6 * np.abs(exact))
    assert np.all(np.abs(approx - exact) <= tolerance)


@pytest.mark.parametrize("name", CATALOG_GENERATORS)
def test_stored_shape_is_x_squared_f_second(name):
    f = lookup_generator(name)
    if f.shape is None:
        pytest.skip("no stored shape")
    grid = np.geomspace(0.1, 10.0, 9)
    np.testing.assert_allclose(
        curvature_shape(f)(grid), grid * grid * f.second_derivative()(grid), rtol=1e-9
    )


def test_validate_generator_rejects_broken_contracts():
    unnormalized = FGenerator(name="sq", fn=lambda x: x * x, f0=0.0, slope_inf=math.inf)
    with pytest.raises(InvalidGeneratorError):
        validate_generator(unnormalized)
    concave = FGenerator(name="root", fn=lambda x: np.sqrt(x) - 1.0, f0=-1.0, slope_inf=0.0)
    with pytest.raises(InvalidGeneratorError):
        validate_generator(concave)


def test_track_conversion_round_trip():
    root = lookup_generator("sqrt")
    hat = as_zero_at_one(root)
    assert hat.norm_tag is NormTag.ZERO_AT_ONE
    assert hat.curvature is Curvature.CONVEX
    assert hat.value_at(4.0) == pytest.approx(-1.0)
    back = as_one_at_one(hat, Curvature.CONCAVE)
    assert back.value_at(4.0) == pytest.approx(2.0)
    assert back.curvature is Curvature.CONCAVE


def test_transform_guard_past_domain():
    g = lookup_transform("neg_log1m")
    assert g.scalar(1.0) == math.inf
    assert g.scalar(3.0) == math.inf
    assert g.scalar(0.5) == pytest.approx(math.log(2.0))


def test_shapes_and_parameter_ranges():
    ratio = lookup_shape("ratio_shape", b=3.0, c=1.0)
    grid = np.linspace(0.5, 3.0, 6)
    np.testing.assert_allclose(
        ratio.d2(grid), numeric.derivative(ratio.fn, order=2)(grid), rtol=1e-3
    )
    bounded = lookup_shape("bounded_power_shape", s=0.75)
    assert bounded.params["a"] == pytest.approx(0.25 * 0.75)
    with pytest.raises(ParameterRangeError):
        lookup_shape("bounded_power_shape", s=0.4)
    with pytest.raises(ParameterRangeError):
        lookup_generator("alpha_divergence", alpha=2.0)
    with pytest.raises(ParameterRangeError):
        lookup_generator("kl", beta=1.0)


def test_unknown_entries():
    with pytest.raises(UnknownGeneratorError):
        catalog_lookup("no_such_thing")
    with pytest.raises(UnknownGeneratorError):
        lookup_transform("kl")
    assert "le_cam" in registry_names()["f"]


def test_json_generator_specs():
    spec = '{"name": "alpha_divergence", "params": {"alpha": 0.3}}'
    assert generator_from_spec(spec).params["alpha"] == pytest.approx(0.3)
    with pytest.raises(SpecParseError):
        generator_from_spec('{"params": {}}')
    with pytest.raises(SpecParseError):
        generator_from_spec("{nope")


def test_tabulated_generator_interpolates_and_extends():
    nodes = [0.0, 0.5, 1.0, 2.0, 4.0]
    table = [[x, x * math.log(x) if x > 0 else 0.0] for x in nodes]
    f = generator_from_spec({"table": table, "name": "kl_table"})
    assert f.norm_tag is NormTag.ZERO_AT_ONE
    np.testing.assert_allclose(f(np.array(nodes)), [row[1] for row in table], atol=1e-12)
    tail = f(np.array([4.0, 5.0, 6.0]))
    assert tail[2] - tail[1] == pytest.approx(tail[1] - tail[0])
    with pytest.raises(SpecParseError):
        generator_from_spec({"table": [[0.0, 1.0], [1.0, 0.0]]})
