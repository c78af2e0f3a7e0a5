"""S-integers, bounded S-unit equation solving and T-sequence evidence."""

from .sinteger import (
    PrimeSet,
    SInteger,
    SUnit,
    count_s_integers,
    enumerate_s_integers,
    factor_over_s,
    format_sunit,
    inverse,
    mul,
    parse_sunit,
    value_of,
)
from .tseq import (
    CriterionQuery,
    Explicit,
    GeometricCombo,
    Primes,
    UniversalS,
    ViolationReport,
    criterion_sweep,
    estimate_tail_index,
    find_violations,
    generate,
    parse_sequence_spec,
    tail_embedding,
    universal_index,
)
from .unit_equation import (
    Decomposition,
    Solution,
    UnitEquation,
    WitnessSets,
    decompose,
    is_nondegenerate,
    solve_bounded,
    witness_sets,
)

__version__ = "0.1.0"
