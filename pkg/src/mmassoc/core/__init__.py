"""Domain types and the throughput/utility formulas every solver shares."""

from mmassoc.core.errors import (
    ComparisonError,
    ConfigError,
    DegenerateAllocationError,
    InfeasibleInstanceError,
    InfeasibleLinkError,
    MMAssocError,
    PolicyError,
    SearchSpaceTooLargeError,
)
from mmassoc.core.metrics import (
    FeasibilityReport,
    absolute_airtime,
    cap_to_demand,
    check_finite_load_feasibility,
    equal_airtime,
    saturation_utility,
    throughput,
    utility,
)
from mmassoc.core.types import (
    TOL,
    AirtimeAllocation,
    Association,
    DemandVector,
    FractionalAssociation,
    FrameConfig,
    Frames,
    RateMatrix,
    SolveReport,
    ap_of,
    efficiencies,
    one_hot,
    validate_association,
    validate_fractional,
    validate_rates,
)

__all__ = [
    "TOL",
    "AirtimeAllocation",
    "Association",
    "ComparisonError",
    "ConfigError",
    "DegenerateAllocationError",
    "DemandVector",
    "FeasibilityReport",
    "FractionalAssociation",
    "FrameConfig",
    "Frames",
    "InfeasibleInstanceError",
    "InfeasibleLinkError",
    "MMAssocError",
    "PolicyError",
    "RateMatrix",
    "SearchSpaceTooLargeError",
    "SolveReport",
    "absolute_airtime",
    "ap_of",
    "cap_to_demand",
    "check_finite_load_feasibility",
    "efficiencies",
    "equal_airtime",
    "one_hot",
    "saturation_utility",
    "throughput",
    "utility",
    "validate_association",
    "validate_fractional",
    "validate_rates",
]
