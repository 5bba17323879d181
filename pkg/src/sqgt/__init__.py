"""Semi-quantitative group testing: channel model, SQ-disjunct codes, decoders,
capacity bounds and random-design analysis."""
from .capacity import (
    CapacityPoint,
    SourceDistribution,
    alpha,
    capacity_search,
    entropy,
    mutual_info_i,
    necessary_tests,
    outcome_pmf,
    pmf_sum,
    sufficient_tests,
)
from .construct import ConcatCode, concat_construct, concat_decode, num_blocks
from .core import (
    CodeMatrix,
    DesignParams,
    InfeasibleSizeError,
    Quantizer,
    ValidationError,
    is_included,
    minimal_levels,
    quantize,
    sq_sum,
    syndrome,
)
from .disjunct import (
    DecodeResult,
    DisjunctReport,
    is_sq_disjunct,
    naive_decode,
    scale_code,
    unique_coordinate_check,
)
from .randomdesign import (
    CriticalRateReport,
    acceptable_row_count,
    critical_rate,
    estimate_disjunct_probability,
    random_code,
)

__version__ = "0.1.0"
