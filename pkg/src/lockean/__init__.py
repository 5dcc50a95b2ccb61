"""Lockean belief sets over finite propositional languages.

Exact-rational tools for deciding when a threshold belief set is
deductively closed, locating the thresholds where it is, and revising a
probability so that a new piece of information becomes believed.
"""

from .analysis import (
    Classification,
    ClosureReport,
    Diagnostics,
    StepReport,
    ThresholdBand,
    belief_core,
    belief_membership,
    belief_set,
    classify,
    closed,
    closed_thresholds,
    diagnostics,
    find_steps,
    image,
    is_closed,
    lambda_max,
    minimal_members,
    theorem1_generator,
    threshold_band,
)
from .logic import (
    And,
    Bot,
    DimensionError,
    FormulaError,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    SizeGateError,
    Top,
    UnknownVariableError,
    Var,
    entails,
    equivalent,
    evaluate,
    format_formula,
    formula_of_modelset,
    models_of,
    parse_formula,
)
from .probability import (
    Distribution,
    DistributionError,
    ThresholdError,
    conditional,
    format_rational,
    jeffrey,
    kl_divergence,
    l1_distance,
    new_distribution,
    parse_rational,
    prob,
    revise_prob,
    threshold,
    uniform,
)
from .problem import Problem, ProblemError, dump_problem, load_problem, parse_problem
from .revision import (
    AgmReport,
    ClosurePrediction,
    PostulateCheck,
    RevisionOutcome,
    agm_audit,
    consequence_membership,
    predict_closure,
    revise,
)

__version__ = "0.1.0"
