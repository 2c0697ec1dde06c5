from gfdiv.core.models import (
    BoundResult,
    ExponentCurve,
    ExponentPoint,
    InfoResult,
    ScanReport,
    SolverOpts,
    Verdict,
)
from gfdiv.core.probcore import (
    Channel,
    Dist,
    is_abs_continuous,
    joint_from,
    marginal,
    permute,
    product_channel,
    product_dist,
    push_forward,
    tv_distance,
)

__all__ = [
    "BoundResult",
    "Channel",
    "Dist",
    "ExponentCurve",
    "ExponentPoint",
    "InfoResult",
    "ScanReport",
    "SolverOpts",
    "Verdict",
    "is_abs_continuous",
    "joint_from",
    "marginal",
    "permute",
    "product_channel",
    "product_dist",
    "push_forward",
    "tv_distance",
]
