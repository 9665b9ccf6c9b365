"""Rate-compatible polar code shortening toolkit."""

__version__ = "0.1.0"

from .construction import (
    GaParams,
    ReliabilityProfile,
    build_profile,
    ga_means,
    phi,
    phi_inv,
    sort_polarization,
)
from .shortening import (
    CodeSpec,
    ShortenPattern,
    build_code_spec,
    cw_pattern,
    pd_pattern,
    rqup_pattern,
    reduce_generator,
    validate_pattern,
)
from .codec import (
    LLR_MAX,
    SuccessiveCancellationDecoder,
    bit_reverse,
    encode,
    expand_llrs,
    ml_decode,
    polar_transform,
    sc_decode,
)
from .channel import (
    ChannelParams,
    SimPoint,
    StopRule,
    SweepResult,
    channel_llrs,
    modulate,
    run_point,
    run_sweep,
    transmit,
)
from .spectrum import (
    PathSpectrum,
    build_spectrum,
    compare_methods,
    d_sd,
    lambda_sd,
    path_zeros,
)

__all__ = [
    "__version__",
    "GaParams",
    "ReliabilityProfile",
    "build_profile",
    "ga_means",
    "phi",
    "phi_inv",
    "sort_polarization",
    "CodeSpec",
    "ShortenPattern",
    "build_code_spec",
    "cw_pattern",
    "pd_pattern",
    "rqup_pattern",
    "reduce_generator",
    "validate_pattern",
    "LLR_MAX",
    "SuccessiveCancellationDecoder",
    "bit_reverse",
    "encode",
    "expand_llrs",
    "ml_decode",
    "polar_transform",
    "sc_decode",
    "ChannelParams",
    "SimPoint",
    "StopRule",
    "SweepResult",
    "channel_llrs",
    "modulate",
    "run_point",
    "run_sweep",
    "transmit",
    "PathSpectrum",
    "build_spectrum",
    "compare_methods",
    "d_sd",
    "lambda_sd",
    "path_zeros",
]
