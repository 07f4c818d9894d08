from .formula import (
    FormulaTransformError,
    SubstitutionPlan,
    TransitionSets,
    expected_formula_size_bound,
    substitute_next_naive,
    transform_formula,
)
from .net import (
    InhibitorNet,
    MappedBack,
    MappingError,
    Naming,
    TransformError,
    audit_constraints,
    expected_sizes,
    lift_counterexample,
    map_counterexample_back,
    transform_net,
)
