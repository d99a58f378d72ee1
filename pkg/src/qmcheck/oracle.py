"""Brute-force three-valued semantics by path enumeration.

This module decides path formulas directly on the three-valued model: it
expands finite path prefixes depth-first, settles each prefix as soon as
every infinite extension agrees on the verdict, and adds up the cylinder
probabilities of the settled prefixes.  It shares no numeric machinery
with the projection-based engine; its entire purpose is to be an
independent cross-check (and a last-resort engine for tiny models).

A prefix is settled early in three situations: a true-witness has been
seen (right operand true after an all-true left prefix), falsehood is
forced (every position so far is right-false or follows a left-false
position, with at least one left-false seen), or both truth and falsehood
have become impossible.  A prefix ending in an absorbing state is settled
exactly, since its one infinite extension is known.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EvaluationError, HorizonError, PathUndecided
from .formula import (
    And,
    Atom,
    Bound,
    BoundedUntil,
    Const,
    Next,
    Not,
    Or,
    PathFormula,
    Prob,
    StateFormula,
    Until,
    render_formula,
)
from .model import QDtmc, require_valid
from .tri import Tri, and3, not3, or3

COMPARE_EPS = 1e-9
MASS_TOL = 1e-9
UNDECIDED_TOL = 1e-6
DEFAULT_HORIZON = 64

BOUNDARY_MODES = ("spec", "strict-f")


@dataclass(frozen=True)
class PathPrefix:
    """A finite path with its cylinder-set probability."""

    states: tuple[int, ...]
    measure: float

    @classmethod
    def along(cls, m: QDtmc, states: Sequence[int]) -> "PathPrefix":
        """Build a prefix from consecutive states, validating the steps."""
        measure = 1.0
        for a, b in zip(states, states[1:]):
            p = m.prob(a, b)
            if p <= 0.0:
                raise EvaluationError(f"no transition from {a} to {b}")
            measure *= p
        return cls(states=tuple(states), measure=measure)


@dataclass(frozen=True)
class TriMeasure:
    """Path mass per verdict; the three parts add up to one.

    ``undecided`` is the sub-tolerance mass still open at the horizon for
    unbounded untils; it is counted inside ``mu_u`` and doubles as an error
    bound on the reported split.
    """

    mu_t: float
    mu_f: float
    mu_u: float
    undecided: float = 0.0


# --------------------------------------------------------------------------
# Path-formula value on a single finite prefix
# --------------------------------------------------------------------------

def eval_path_tri(
    values: Sequence, path: PathFormula, closed: bool = False
) -> Tri:
    """Three-valued value of a path formula along one prefix.

    ``values`` carries the operand values per position: single Tri values
    for a next formula, ``(left, right)`` pairs for untils.  ``closed``
    asserts that the final position repeats forever (an absorbing state),
    which makes every prefix decidable.  Raises :class:`PathUndecided`
    when the prefix is too short to commit.
    """
    if not values:
        raise PathUndecided("empty path prefix")
    if isinstance(path, Next):
        if len(values) >= 2:
            return values[1]
        if closed:
            return values[0]
        raise PathUndecided("next needs the second path position")
    if not isinstance(path, (Until, BoundedUntil)):
        raise TypeError(f"not a path formula: {path!r}")

    k = path.k if isinstance(path, BoundedUntil) else None
    seq = list(values)
    if closed and k is not None and len(seq) < k + 1:
        seq += [seq[-1]] * (k + 1 - len(seq))
    if closed and k is None:
        seq.append(seq[-1])

    t_poss = True
    f_poss = True
    broken = False
    for pos, (v1, v2) in enumerate(seq):
        if k is not None and pos > k:
            break
        if v2 is Tri.T and t_poss:
            return Tri.T
        f_poss = f_poss and (v2 is Tri.F or broken)
        broken = broken or v1 is Tri.F
        t_poss = t_poss and v1 is Tri.T
        if f_poss and broken:
            return Tri.F
        if k is not None and pos == k:
            return Tri.F if f_poss else Tri.U
        if not t_poss and not f_poss:
            return Tri.U
    if closed:
        return Tri.F if f_poss else Tri.U
    raise PathUndecided("prefix exhausted before the formula was decided")


# --------------------------------------------------------------------------
# Measures by pruned depth-first enumeration
# --------------------------------------------------------------------------

def measure_tri(
    m: QDtmc,
    path: PathFormula,
    operand_envs: Sequence[Sequence[Tri]],
    horizon: int = DEFAULT_HORIZON,
) -> list[TriMeasure]:
    """Per-state verdict masses of a path formula.

    ``operand_envs`` gives the per-state values of the path formula's
    operands (one vector for next, two for untils).  Bounded formulas are
    measured exactly; unbounded untils enumerate up to ``horizon``
    transitions and fail if more than ``UNDECIDED_TOL`` of mass is still
    open there.
    """
    if isinstance(path, Next):
        (env,) = operand_envs
        return [_next_measure(m, env, s) for s in range(m.n)]
    if isinstance(path, (Until, BoundedUntil)):
        env1, env2 = operand_envs
        k = path.k if isinstance(path, BoundedUntil) else None
        if k is None and horizon < 1:
            raise EvaluationError(f"horizon must be positive, got {horizon}")
        out = []
        for s in range(m.n):
            mass = _UntilMass()
            depth = k if k is not None else horizon
            _walk_until(m, env1, env2, k, s, 1.0, 0, True, True, False, depth, mass)
            if k is None and mass.undecided > UNDECIDED_TOL:
                raise HorizonError(mass.undecided, horizon)
            out.append(
                TriMeasure(
                    mu_t=mass.t,
                    mu_f=mass.f,
                    mu_u=mass.u + mass.undecided,
                    undecided=mass.undecided,
                )
            )
        return out
    raise TypeError(f"not a path formula: {path!r}")


def _next_measure(m: QDtmc, env: Sequence[Tri], s: int) -> TriMeasure:
    mu = {Tri.T: 0.0, Tri.F: 0.0, Tri.U: 0.0}
    for t, p in m.rows[s]:
        mu[env[t]] += p
    return TriMeasure(mu_t=mu[Tri.T], mu_f=mu[Tri.F], mu_u=mu[Tri.U])


class _UntilMass:
    __slots__ = ("t", "f", "u", "undecided")

    def __init__(self) -> None:
        self.t = 0.0
        self.f = 0.0
        self.u = 0.0
        self.undecided = 0.0


def _walk_until(
    m: QDtmc,
    env1: Sequence[Tri],
    env2: Sequence[Tri],
    k: int | None,
    s: int,
    mass: float,
    pos: int,
    t_poss: bool,
    f_poss: bool,
    broken: bool,
    depth_left: int,
    acc: _UntilMass,
) -> None:
    v1, v2 = env1[s], env2[s]
    if v2 is Tri.T and t_poss:
        acc.t += mass
        return
    f_poss = f_poss and (v2 is Tri.F or broken)
    broken = broken or v1 is Tri.F
    t_poss = t_poss and v1 is Tri.T
    if f_poss and broken:
        acc.f += mass
        return
    if k is not None and pos == k:
        if f_poss:
            acc.f += mass
        else:
            acc.u += mass
        return
    if not t_poss and not f_poss:
        acc.u += mass
        return
    if m.is_absorbing(s):
        # The single extension repeats s forever; falsehood needs the
        # prefix condition plus a right-false tail, which f_poss already
        # encodes (no break seen, so the current right value must be F).
        if f_poss:
            acc.f += mass
        else:
            acc.u += mass
        return
    if depth_left == 0:
        acc.undecided += mass
        return
    for t, p in m.rows[s]:
        _walk_until(m, env1, env2, k, t, mass * p, pos + 1,
                    t_poss, f_poss, broken, depth_left - 1, acc)


# --------------------------------------------------------------------------
# Full state-formula semantics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureEvidence:
    formula: str
    measures: tuple[TriMeasure, ...]


@dataclass(frozen=True)
class OracleVerdict:
    per_state: tuple[Tri, ...]
    at_init: Tri
    evidence: tuple[MeasureEvidence, ...] = ()


def check_direct(
    m: QDtmc,
    f: StateFormula,
    horizon: int = DEFAULT_HORIZON,
    boundary_mode: str = "spec",
) -> OracleVerdict:
    """Evaluate a state formula at every state straight from the semantics."""
    if boundary_mode not in BOUNDARY_MODES:
        raise EvaluationError(
            f"unknown boundary mode {boundary_mode!r}; expected one of {BOUNDARY_MODES}"
        )
    require_valid(m)
    evidence: list[MeasureEvidence] = []
    per_state = tuple(_eval(m, f, horizon, boundary_mode, evidence))
    return OracleVerdict(per_state=per_state, at_init=per_state[m.init],
                         evidence=tuple(evidence))


def _eval(
    m: QDtmc,
    f: StateFormula,
    horizon: int,
    mode: str,
    evidence: list[MeasureEvidence],
) -> list[Tri]:
    if isinstance(f, Const):
        return [f.value] * m.n
    if isinstance(f, Atom):
        i = m.ap_index(f.name)
        return [m.labels[s][i] for s in range(m.n)]
    if isinstance(f, Not):
        return [not3(v) for v in _eval(m, f.child, horizon, mode, evidence)]
    if isinstance(f, And):
        return [and3(a, b)
                for a, b in zip(_eval(m, f.left, horizon, mode, evidence),
                                _eval(m, f.right, horizon, mode, evidence))]
    if isinstance(f, Or):
        return [or3(a, b)
                for a, b in zip(_eval(m, f.left, horizon, mode, evidence),
                                _eval(m, f.right, horizon, mode, evidence))]
    if isinstance(f, Prob):
        envs = [_eval(m, operand, horizon, mode, evidence)
                for operand in _operands(f.path)]
        measures = measure_tri(m, f.path, envs, horizon)
        evidence.append(MeasureEvidence(formula=render_formula(f),
                                        measures=tuple(measures)))
        verdicts = [
            _threshold(ms, f.bound.theta, mode) for ms in measures
        ]
        if f.bound.op is Bound.LT:
            verdicts = [not3(v) for v in verdicts]
        return verdicts
    raise TypeError(f"not a state formula: {f!r}")


def _operands(path: PathFormula) -> tuple[StateFormula, ...]:
    if isinstance(path, Next):
        return (path.arg,)
    if isinstance(path, (Until, BoundedUntil)):
        return (path.lhs, path.rhs)
    raise TypeError(f"not a path formula: {path!r}")


def _threshold(ms: TriMeasure, theta: float, mode: str) -> Tri:
    if ms.mu_t >= theta - COMPARE_EPS:
        return Tri.T
    if mode == "spec":
        if ms.mu_f >= 1.0 - theta - COMPARE_EPS:
            return Tri.F
    else:
        if ms.mu_f > 1.0 - theta + COMPARE_EPS:
            return Tri.F
    return Tri.U
