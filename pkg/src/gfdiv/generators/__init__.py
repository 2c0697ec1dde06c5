from gfdiv.generators.descriptors import (
    AdmissiblePair,
    Curvature,
    FGenerator,
    GTransform,
    NormTag,
    ShapeFunction,
    as_one_at_one,
    as_zero_at_one,
    curvature_shape,
    dm_of,
    make_pair,
    negate_shape,
    validate_generator,
    validate_transform,
)
from gfdiv.generators.numeric import INDETERMINATE, is_indeterminate
from gfdiv.generators.registry import (
    catalog_lookup,
    lookup_generator,
    lookup_shape,
    lookup_transform,
    registry_names,
)
from gfdiv.generators.tabulated import generator_from_spec, tabulated_generator

__all__ = [
    "INDETERMINATE",
    "AdmissiblePair",
    "Curvature",
    "FGenerator",
    "GTransform",
    "NormTag",
    "ShapeFunction",
    "as_one_at_one",
    "as_zero_at_one",
    "catalog_lookup",
    "curvature_shape",
    "dm_of",
    "generator_from_spec",
    "is_indeterminate",
    "lookup_generator",
    "lookup_shape",
    "lookup_transform",
    "make_pair",
    "negate_shape",
    "registry_names",
    "tabulated_generator",
    "validate_generator",
    "validate_transform",
]
