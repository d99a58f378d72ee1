"""Two-phase three-valued checking via binary projections.

A probabilistic formula is decided by two classical runs: true when it
holds in the pessimistic projection (unknown labels read as false), false
when it fails in the optimistic projection (unknown labels read as true),
unknown otherwise.  Nested probabilistic operators are evaluated innermost
first and fed back into the model as fresh three-valued propositions, which
keeps every binary run free of nesting and of negated atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .binpctl import (
    COMPARE_EPS,
    MAX_ITERATIONS,
    SOLVE_TOL,
    prob_bounded_until,
    prob_next,
    prob_until,
    sat_states,
)
from .errors import EvaluationError
from .formula import (
    And,
    Atom,
    BoundedUntil,
    Const,
    Next,
    Not,
    Or,
    PathFormula,
    Prob,
    StateFormula,
    Until,
    normalize,
    render_formula,
    render_path,
)
from .model import (
    QDtmc,
    augment_negations,
    fresh_ap_name,
    project_lower,
    project_upper,
    require_valid,
)
from .tri import Tri, and3, not3, or3

BOUNDARY_MODES = ("spec", "strict-f")


@dataclass(frozen=True)
class EngineConfig:
    """Knobs of the two-phase engine.

    ``boundary_mode`` picks the verdict when the optimistic measure hits the
    threshold exactly: ``spec`` declares false already at equality,
    ``strict-f`` only strictly beyond it.  The solver fields are passed
    through to the until solver.
    """

    boundary_mode: str = "spec"
    solve_tol: float = SOLVE_TOL
    max_iterations: int = MAX_ITERATIONS

    def __post_init__(self) -> None:
        if self.boundary_mode not in BOUNDARY_MODES:
            raise EvaluationError(
                f"unknown boundary mode {self.boundary_mode!r}; "
                f"expected one of {BOUNDARY_MODES}"
            )


@dataclass(frozen=True)
class ProbEvidence:
    """The two projection probabilities backing one probabilistic verdict."""

    formula: str
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    alias: str | None = None


@dataclass(frozen=True)
class TriVerdict:
    per_state: tuple[Tri, ...]
    at_init: Tri
    evidence: tuple[ProbEvidence, ...] = ()


@dataclass(frozen=True)
class SweepResult:
    """Threshold sweep at the initial state for a fixed path formula."""

    rows: tuple[tuple[float, Tri], ...]
    lower_at_init: float
    upper_at_init: float
    evidence: tuple[ProbEvidence, ...] = ()


def combine_verdict(
    lower: float,
    upper: float,
    theta: float,
    boundary_mode: str = "spec",
    swapped: bool = False,
) -> Tri:
    """Fuse the two projection probabilities into a three-valued verdict.

    With ``swapped`` the false test is applied first.  In spec mode a state
    whose measures hit both boundaries exactly (lower == upper == theta)
    satisfies the true and the false clause at once; the true clause wins
    in either order, mirroring the clause order of the direct semantics.
    """
    t_ok = lower >= theta - COMPARE_EPS
    if boundary_mode == "spec":
        f_ok = upper <= theta + COMPARE_EPS
    else:
        f_ok = upper < theta - COMPARE_EPS
    if swapped:
        if f_ok and not t_ok:
            return Tri.F
        if t_ok:
            return Tri.T
    else:
        if t_ok:
            return Tri.T
        if f_ok:
            return Tri.F
    return Tri.U


# --------------------------------------------------------------------------
# Core pipeline
# --------------------------------------------------------------------------

def check_all_states(
    m: QDtmc, f: StateFormula, cfg: EngineConfig | None = None
) -> TriVerdict:
    """Three-valued verdict of ``f`` at every state of ``m``."""
    return _run(m, f, cfg or EngineConfig(), swapped=False)


def check_swapped_phases(
    m: QDtmc, f: StateFormula, cfg: EngineConfig | None = None
) -> TriVerdict:
    """Like :func:`check_all_states` but testing the false phase first.

    The two-phase reduction is symmetric, so this agrees with the standard
    order; it exists to make that symmetry checkable.
    """
    return _run(m, f, cfg or EngineConfig(), swapped=True)


def _run(m: QDtmc, f: StateFormula, cfg: EngineConfig, swapped: bool) -> TriVerdict:
    require_valid(m)
    work_m, work_f = augment_negations(m, normalize(f).formula)
    evidence: list[ProbEvidence] = []
    work_m, flat = _flatten(work_m, work_f, cfg, evidence, swapped)
    per_state = tuple(_kleene_eval(work_m, flat, s) for s in range(work_m.n))
    return TriVerdict(per_state=per_state, at_init=per_state[m.init],
                      evidence=tuple(evidence))


def evaluate_nested(
    m: QDtmc, inner: Prob, cfg: EngineConfig | None = None
) -> tuple[QDtmc, str]:
    """Turn an inner probabilistic formula into a fresh labeled proposition.

    The formula is checked at every state and the resulting three-valued
    column is appended to the model; the returned atom name substitutes for
    the formula in any enclosing context.
    """
    if not isinstance(inner, Prob):
        raise EvaluationError("nested evaluation expects a probabilistic formula")
    verdict = check_all_states(m, inner, cfg)
    name = fresh_ap_name(m.aps, f"sub{len(m.aps)}")
    return m.with_ap(name, verdict.per_state), name


def sweep_theta(
    m: QDtmc,
    path: PathFormula,
    thetas: Sequence[float],
    cfg: EngineConfig | None = None,
) -> SweepResult:
    """Verdicts at the initial state of ``P>=theta [ path ]`` for each theta.

    The projection probabilities do not depend on the threshold, so they
    are computed once and re-thresholded per value.
    """
    cfg = cfg or EngineConfig()
    for theta in thetas:
        if not 0.0 <= theta <= 1.0:
            raise EvaluationError(f"sweep threshold {theta} outside [0, 1]")
    require_valid(m)
    shell = normalize(Prob(_ge_bound(0.0), path)).formula
    work_m, work_f = augment_negations(m, shell)
    assert isinstance(work_f, Prob)
    evidence: list[ProbEvidence] = []
    work_m, lower, upper = _path_probabilities(
        work_m, work_f.path, cfg, evidence, swapped=False
    )
    evidence.append(ProbEvidence(formula=render_path(work_f.path),
                                 lower=lower, upper=upper))
    rows = tuple(
        (theta,
         combine_verdict(lower[m.init], upper[m.init], theta, cfg.boundary_mode))
        for theta in thetas
    )
    return SweepResult(rows=rows, lower_at_init=lower[m.init],
                       upper_at_init=upper[m.init], evidence=tuple(evidence))


def _ge_bound(theta: float):
    from .formula import Bound, ProbBound

    return ProbBound(Bound.GE, theta)


# --------------------------------------------------------------------------
# Flattening: replace probabilistic subformulas by fresh propositions
# --------------------------------------------------------------------------

def _flatten(
    m: QDtmc,
    f: StateFormula,
    cfg: EngineConfig,
    evidence: list[ProbEvidence],
    swapped: bool,
) -> tuple[QDtmc, StateFormula]:
    if isinstance(f, (Const, Atom)):
        return m, f
    if isinstance(f, Prob):
        return _replace_prob(m, f, False, cfg, evidence, swapped)
    if isinstance(f, Not):
        if isinstance(f.child, Prob):
            return _replace_prob(m, f.child, True, cfg, evidence, swapped)
        m, child = _flatten(m, f.child, cfg, evidence, swapped)
        return m, Not(child)
    if isinstance(f, And):
        m, left = _flatten(m, f.left, cfg, evidence, swapped)
        m, right = _flatten(m, f.right, cfg, evidence, swapped)
        return m, And(left, right)
    if isinstance(f, Or):
        m, left = _flatten(m, f.left, cfg, evidence, swapped)
        m, right = _flatten(m, f.right, cfg, evidence, swapped)
        return m, Or(left, right)
    raise TypeError(f"not a state formula: {f!r}")


def _replace_prob(
    m: QDtmc,
    prob: Prob,
    negate: bool,
    cfg: EngineConfig,
    evidence: list[ProbEvidence],
    swapped: bool,
) -> tuple[QDtmc, StateFormula]:
    m, lower, upper = _path_probabilities(m, prob.path, cfg, evidence, swapped)
    theta = prob.bound.theta
    values = [
        combine_verdict(lower[s], upper[s], theta, cfg.boundary_mode, swapped)
        for s in range(m.n)
    ]
    if negate:
        values = [not3(v) for v in values]
    name = fresh_ap_name(m.aps, f"sub{len(m.aps)}")
    evidence.append(ProbEvidence(formula=render_formula(prob), lower=lower,
                                 upper=upper, alias=name))
    return m.with_ap(name, values), Atom(name)


def _path_probabilities(
    m: QDtmc,
    path: PathFormula,
    cfg: EngineConfig,
    evidence: list[ProbEvidence],
    swapped: bool,
) -> tuple[QDtmc, tuple[float, ...], tuple[float, ...]]:
    """Projection probabilities of a path formula, flattening operands first."""
    if isinstance(path, Next):
        m, arg = _flatten(m, path.arg, cfg, evidence, swapped)
        low_m, up_m = project_lower(m), project_upper(m)
        lower = prob_next(low_m, _operand_sat(low_m, arg, Tri.F))
        upper = prob_next(up_m, _operand_sat(up_m, arg, Tri.T))
        return m, lower, upper
    if isinstance(path, (Until, BoundedUntil)):
        m, lhs = _flatten(m, path.lhs, cfg, evidence, swapped)
        m, rhs = _flatten(m, path.rhs, cfg, evidence, swapped)
        low_m, up_m = project_lower(m), project_upper(m)
        sets = (
            _operand_sat(low_m, lhs, Tri.F),
            _operand_sat(low_m, rhs, Tri.F),
            _operand_sat(up_m, lhs, Tri.T),
            _operand_sat(up_m, rhs, Tri.T),
        )
        if isinstance(path, BoundedUntil):
            lower = prob_bounded_until(low_m, sets[0], sets[1], path.k)
            upper = prob_bounded_until(up_m, sets[2], sets[3], path.k)
        else:
            lower = prob_until(low_m, sets[0], sets[1],
                               tol=cfg.solve_tol, max_iterations=cfg.max_iterations)
            upper = prob_until(up_m, sets[2], sets[3],
                               tol=cfg.solve_tol, max_iterations=cfg.max_iterations)
        return m, lower, upper
    raise TypeError(f"not a path formula: {path!r}")


def _operand_sat(projected, operand: StateFormula, unknown_as: Tri) -> tuple[bool, ...]:
    """Classical satisfaction of a flattened operand in one projection.

    Unknown constants are projected like unknown labels before the binary
    run: to false in the pessimistic phase, to true in the optimistic one.
    """
    return sat_states(projected, _subst_unknown(operand, unknown_as)).sat


def _subst_unknown(f: StateFormula, value: Tri) -> StateFormula:
    if isinstance(f, Const):
        return Const(value) if f.value is Tri.U else f
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_subst_unknown(f.child, not3(value)))
    if isinstance(f, And):
        return And(_subst_unknown(f.left, value), _subst_unknown(f.right, value))
    if isinstance(f, Or):
        return Or(_subst_unknown(f.left, value), _subst_unknown(f.right, value))
    raise TypeError(f"unexpected node in flattened operand: {f!r}")


def _kleene_eval(m: QDtmc, f: StateFormula, s: int) -> Tri:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return m.labels[s][m.ap_index(f.name)]
    if isinstance(f, Not):
        return not3(_kleene_eval(m, f.child, s))
    if isinstance(f, And):
        return and3(_kleene_eval(m, f.left, s), _kleene_eval(m, f.right, s))
    if isinstance(f, Or):
        return or3(_kleene_eval(m, f.left, s), _kleene_eval(m, f.right, s))
    raise TypeError(f"probabilistic node survived flattening: {f!r}")
