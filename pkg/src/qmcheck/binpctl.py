"""Classical two-valued PCTL model checking over boolean-labeled chains.

All operators are evaluated numerically for every state at once.  Until
probabilities are computed the standard way: graph precomputation first
(states with probability exactly 0 or 1), then a linear solve for the
remaining states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, EvaluationError
from .formula import (
    And,
    Atom,
    Bound,
    BoundedUntil,
    Const,
    Next,
    Not,
    Or,
    Prob,
    ProbBound,
    StateFormula,
    Until,
)
from .model import BinDtmc
from .tri import Tri

COMPARE_EPS = 1e-9
SOLVE_TOL = 1e-10
MAX_ITERATIONS = 1_000_000
DIRECT_SOLVE_LIMIT = 64


@dataclass(frozen=True)
class BinVerdict:
    """Per-state result of a binary check.

    ``prob`` carries the computed probability per state when the checked
    formula is itself probabilistic, else None.
    """

    sat: tuple[bool, ...]
    prob: tuple[float, ...] | None = None

    def sat_set(self) -> frozenset[int]:
        return frozenset(s for s, ok in enumerate(self.sat) if ok)


def _as_mask(states: Iterable[int] | Sequence[bool], n: int) -> list[bool]:
    if isinstance(states, (list, tuple)) and len(states) == n and all(
        isinstance(x, bool) for x in states
    ):
        return list(states)
    mask = [False] * n
    for s in states:  # type: ignore[union-attr]
        mask[int(s)] = True
    return mask


def _clamp(values: Iterable[float]) -> tuple[float, ...]:
    return tuple(min(1.0, max(0.0, v)) for v in values)


# --------------------------------------------------------------------------
# Path operators
# --------------------------------------------------------------------------

def prob_next(m: BinDtmc, target: Iterable[int] | Sequence[bool]) -> tuple[float, ...]:
    """Probability of stepping into ``target`` from each state."""
    mask = _as_mask(target, m.n)
    return _clamp(
        sum(p for t, p in m.rows[s] if mask[t]) for s in range(m.n)
    )


def prob_bounded_until(
    m: BinDtmc,
    sat1: Iterable[int] | Sequence[bool],
    sat2: Iterable[int] | Sequence[bool],
    k: int,
) -> tuple[float, ...]:
    """Probability of reaching ``sat2`` through ``sat1`` within ``k`` steps."""
    if k < 0:
        raise ValueError(f"step bound must be non-negative, got {k}")
    mask1 = _as_mask(sat1, m.n)
    mask2 = _as_mask(sat2, m.n)
    x = [1.0 if mask2[s] else 0.0 for s in range(m.n)]
    for _ in range(k):
        nxt = []
        for s in range(m.n):
            if mask2[s]:
                nxt.append(1.0)
            elif mask1[s]:
                nxt.append(sum(p * x[t] for t, p in m.rows[s]))
            else:
                nxt.append(0.0)
        x = nxt
    return _clamp(x)


def prob0_states(
    m: BinDtmc,
    sat1: Iterable[int] | Sequence[bool],
    sat2: Iterable[int] | Sequence[bool],
) -> frozenset[int]:
    """States whose until-probability is exactly 0 (cannot reach sat2 via sat1)."""
    mask1 = _as_mask(sat1, m.n)
    mask2 = _as_mask(sat2, m.n)
    preds: list[list[int]] = [[] for _ in range(m.n)]
    for s in range(m.n):
        for t, _ in m.rows[s]:
            preds[t].append(s)
    reach = [mask2[s] for s in range(m.n)]
    frontier = [s for s in range(m.n) if reach[s]]
    while frontier:
        t = frontier.pop()
        for s in preds[t]:
            if not reach[s] and mask1[s]:
                reach[s] = True
                frontier.append(s)
    return frozenset(s for s in range(m.n) if not reach[s])


def prob1_states(
    m: BinDtmc,
    sat1: Iterable[int] | Sequence[bool],
    sat2: Iterable[int] | Sequence[bool],
    zero: frozenset[int] | None = None,
) -> frozenset[int]:
    """States whose until-probability is exactly 1.

    A state fails to have probability one exactly when it can reach a
    probability-zero state while staying inside ``sat1`` minus ``sat2``.
    """
    mask1 = _as_mask(sat1, m.n)
    mask2 = _as_mask(sat2, m.n)
    if zero is None:
        zero = prob0_states(m, mask1, mask2)
    preds: list[list[int]] = [[] for _ in range(m.n)]
    for s in range(m.n):
        for t, _ in m.rows[s]:
            preds[t].append(s)
    fail = [s in zero for s in range(m.n)]
    frontier = [s for s in range(m.n) if fail[s]]
    while frontier:
        t = frontier.pop()
        for s in preds[t]:
            if not fail[s] and mask1[s] and not mask2[s]:
                fail[s] = True
                frontier.append(s)
    return frozenset(s for s in range(m.n) if not fail[s])


def prob_until(
    m: BinDtmc,
    sat1: Iterable[int] | Sequence[bool],
    sat2: Iterable[int] | Sequence[bool],
    *,
    tol: float = SOLVE_TOL,
    max_iterations: int = MAX_ITERATIONS,
    method: str = "auto",
) -> tuple[float, ...]:
    """Probability of eventually reaching ``sat2`` through ``sat1``.

    Zero- and one-probability states are fixed by graph analysis, which
    leaves a uniquely solvable linear system over the remaining states.
    ``method`` selects the solver: dense ``"direct"`` elimination,
    ``"iterative"`` Gauss-Seidel sweeps, or ``"auto"`` (direct for small
    state spaces).
    """
    mask1 = _as_mask(sat1, m.n)
    mask2 = _as_mask(sat2, m.n)
    zero = prob0_states(m, mask1, mask2)
    one = prob1_states(m, mask1, mask2, zero)
    x = [0.0] * m.n
    for s in one:
        x[s] = 1.0
    unknown = [s for s in range(m.n) if s not in zero and s not in one]
    if unknown:
        if method not in ("auto", "direct", "iterative"):
            raise ValueError(f"unknown solver method {method!r}")
        use_direct = method == "direct" or (method == "auto" and m.n <= DIRECT_SOLVE_LIMIT)
        if use_direct:
            _solve_direct(m, unknown, x)
        else:
            _solve_gauss_seidel(m, unknown, x, tol, max_iterations)
    return _clamp(x)


def _solve_direct(m: BinDtmc, unknown: list[int], x: list[float]) -> None:
    index = {s: i for i, s in enumerate(unknown)}
    k = len(unknown)
    a = np.eye(k)
    b = np.zeros(k)
    for s in unknown:
        i = index[s]
        for t, p in m.rows[s]:
            if t in index:
                a[i, index[t]] -= p
            else:
                b[i] += p * x[t]
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:  # cannot happen after precomputation
        raise ConvergenceError(float("nan"), 0) from exc
    for s in unknown:
        x[s] = float(sol[index[s]])


def _solve_gauss_seidel(
    m: BinDtmc, unknown: list[int], x: list[float], tol: float, max_iterations: int
) -> None:
    residual = float("inf")
    for _ in range(max_iterations):
        for s in unknown:
            x[s] = sum(p * x[t] for t, p in m.rows[s])
        residual = max(
            abs(x[s] - sum(p * x[t] for t, p in m.rows[s])) for s in unknown
        )
        if residual < tol:
            return
    raise ConvergenceError(residual, max_iterations)


def check_prob(values: Sequence[float], bound: ProbBound) -> frozenset[int]:
    """States whose probability meets a ``>=`` threshold (epsilon-tolerant)."""
    if bound.op is not Bound.GE:
        raise EvaluationError(
            "only '>=' bounds reach the binary threshold test; "
            "normalization rewrites '<'"
        )
    return frozenset(
        s for s, v in enumerate(values) if v >= bound.theta - COMPARE_EPS
    )


# --------------------------------------------------------------------------
# State formulas
# --------------------------------------------------------------------------

def sat_states(m: BinDtmc, f: StateFormula) -> BinVerdict:
    """Classical satisfaction set of ``f``, for every state of ``m``.

    The top-level probability values are reported when ``f`` is itself a
    probability formula.  Unknown constants are rejected: they must never
    reach the binary engine.
    """
    top_prob: tuple[float, ...] | None = None
    sat = _sat(m, f)
    if isinstance(f, Prob):
        top_prob = _path_prob(m, f)
    return BinVerdict(sat=tuple(sat), prob=top_prob)


def _sat(m: BinDtmc, f: StateFormula) -> list[bool]:
    if isinstance(f, Const):
        if f.value is Tri.U:
            raise EvaluationError(
                "unknown constant reached the binary engine; "
                "projection must eliminate it first"
            )
        return [f.value is Tri.T] * m.n
    if isinstance(f, Atom):
        i = m.ap_index(f.name)
        return [m.labels[s][i] for s in range(m.n)]
    if isinstance(f, Not):
        return [not v for v in _sat(m, f.child)]
    if isinstance(f, And):
        return [a and b for a, b in zip(_sat(m, f.left), _sat(m, f.right))]
    if isinstance(f, Or):
        return [a or b for a, b in zip(_sat(m, f.left), _sat(m, f.right))]
    if isinstance(f, Prob):
        values = _path_prob(m, f)
        inside = check_prob(values, ProbBound(Bound.GE, f.bound.theta))
        if f.bound.op is Bound.LT:
            return [s not in inside for s in range(m.n)]
        return [s in inside for s in range(m.n)]
    raise TypeError(f"not a state formula: {f!r}")


def _path_prob(m: BinDtmc, f: Prob) -> tuple[float, ...]:
    path = f.path
    if isinstance(path, Next):
        return prob_next(m, _sat(m, path.arg))
    if isinstance(path, Until):
        return prob_until(m, _sat(m, path.lhs), _sat(m, path.rhs))
    if isinstance(path, BoundedUntil):
        return prob_bounded_until(m, _sat(m, path.lhs), _sat(m, path.rhs), path.k)
    raise TypeError(f"not a path formula: {path!r}")
