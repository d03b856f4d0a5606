"""Pareto-optimal non-uniform generation in the limit: exact desk-scale simulator."""

from .collection import (
    Collection,
    WitnessResult,
    baseline_times,
    closure_dimension,
    cp_complexity,
    load_collection,
    max_finite_intersection,
)
from .generators import (
    CappedRayObliviousGenerator,
    CofiniteObliviousGenerator,
    NoisyGenerator,
    ParetoGenerator,
    PrefixBaselineGenerator,
    RepresentativeGenerator,
)
from .oracle import Dominance, dominance
from .procedures import (
    ComplexityTable,
    GroupPartition,
    best_noisy_witness,
    best_scarce_witness,
    diagonal_cell,
    diagonal_position,
    noisy_table,
    plain_table,
    representative_table,
    scarce_groups,
    schedule_from_table,
    suffers_scarcity,
)
from .setalg import (
    AtomElem,
    SetExpr,
    Token,
    cardinality,
    complement,
    intersect,
    least_new,
    make_expr,
    member,
    subtract_finite,
    union,
    universe,
    violations,
)

__all__ = [name for name in dir() if not name.startswith("_")]
