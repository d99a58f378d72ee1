"""Three-valued probabilistic model checking for Markov chains with unknown labels.

A model labels each (state, proposition) pair true, false, or unknown;
formulas in a PCTL-style logic then evaluate to true, false, or unknown.
The main engine reduces each probabilistic operator to two classical
checks on binary projections of the model; an independent brute-force
oracle evaluates the three-valued semantics directly for cross-checking.
"""

from .binpctl import (
    BinVerdict,
    check_prob,
    prob0_states,
    prob1_states,
    prob_bounded_until,
    prob_next,
    prob_until,
    sat_states,
)
from .engine import (
    EngineConfig,
    ProbEvidence,
    SweepResult,
    TriVerdict,
    check_all_states,
    check_swapped_phases,
    combine_verdict,
    evaluate_nested,
    sweep_theta,
)
from .errors import (
    ConvergenceError,
    EvaluationError,
    FormulaSyntaxError,
    HorizonError,
    InvalidModelError,
    ModelFormatError,
    PathUndecided,
    QmcheckError,
    UnsupportedBoundError,
)
from .formula import (
    And,
    Atom,
    Bound,
    BoundedUntil,
    Const,
    Next,
    NormalizedFormula,
    Not,
    Or,
    PathFormula,
    Prob,
    ProbBound,
    StateFormula,
    Until,
    atom_names,
    negated_atoms,
    normalize,
    parse_formula,
    parse_path_formula,
    render_formula,
    render_path,
)
from .model import (
    BinDtmc,
    QDtmc,
    augment_negations,
    project_lower,
    project_upper,
    validate,
)
from .modelio import (
    ResultDocument,
    fixture,
    fixture_names,
    parse_model,
    render_model,
    sweep_csv,
    to_dot,
)
from .oracle import (
    MeasureEvidence,
    OracleVerdict,
    PathPrefix,
    TriMeasure,
    check_direct,
    eval_path_tri,
    measure_tri,
)
from .tri import Tri, and3, not3, or3

__version__ = "1.0.0"

__all__ = [
    "And",
    "Atom",
    "BinDtmc",
    "BinVerdict",
    "Bound",
    "BoundedUntil",
    "Const",
    "ConvergenceError",
    "EngineConfig",
    "EvaluationError",
    "FormulaSyntaxError",
    "HorizonError",
    "InvalidModelError",
    "MeasureEvidence",
    "ModelFormatError",
    "Next",
    "NormalizedFormula",
    "Not",
    "Or",
    "OracleVerdict",
    "PathFormula",
    "PathPrefix",
    "PathUndecided",
    "Prob",
    "ProbBound",
    "ProbEvidence",
    "QDtmc",
    "QmcheckError",
    "ResultDocument",
    "StateFormula",
    "SweepResult",
    "Tri",
    "TriMeasure",
    "TriVerdict",
    "UnsupportedBoundError",
    "Until",
    "and3",
    "atom_names",
    "augment_negations",
    "check_all_states",
    "check_direct",
    "check_prob",
    "check_swapped_phases",
    "combine_verdict",
    "eval_path_tri",
    "evaluate_nested",
    "fixture",
    "fixture_names",
    "measure_tri",
    "negated_atoms",
    "normalize",
    "not3",
    "or3",
    "parse_formula",
    "parse_model",
    "parse_path_formula",
    "prob0_states",
    "prob1_states",
    "prob_bounded_until",
    "prob_next",
    "prob_until",
    "project_lower",
    "project_upper",
    "render_formula",
    "render_model",
    "render_path",
    "sat_states",
    "sweep_csv",
    "sweep_theta",
    "to_dot",
    "validate",
]
