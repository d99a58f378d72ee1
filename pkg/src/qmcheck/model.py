"""Markov-chain models with three-valued labeling, and their binary projections."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

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
    negated_atoms,
)
from .tri import Tri, not3

AP_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

ROW_SUM_TOL = 1e-9
PROB_RANGE_TOL = 1e-12


@dataclass(frozen=True)
class _Chain:
    """State space, transition rows and initial state shared by both model kinds.

    ``rows[s]`` holds the outgoing transitions of state ``s`` as a tuple of
    ``(target, probability)`` pairs sorted by target; zero-probability
    entries are never stored.
    """

    n: int
    init: int
    aps: tuple[str, ...]
    rows: tuple[tuple[tuple[int, float], ...], ...]

    def ap_index(self, name: str) -> int:
        try:
            return self.aps.index(name)
        except ValueError:
            raise EvaluationError(f"unknown atomic proposition {name!r}") from None

    def successors(self, s: int) -> tuple[tuple[int, float], ...]:
        return self.rows[s]

    def prob(self, s: int, t: int) -> float:
        for target, p in self.rows[s]:
            if target == t:
                return p
        return 0.0

    def is_absorbing(self, s: int) -> bool:
        row = self.rows[s]
        return len(row) == 1 and row[0][0] == s and row[0][1] >= 1.0 - PROB_RANGE_TOL


@dataclass(frozen=True)
class QDtmc(_Chain):
    """A chain whose labeling maps every (state, proposition) to a Tri value."""

    labels: tuple[tuple[Tri, ...], ...]

    @classmethod
    def build(
        cls,
        n: int,
        init: int,
        aps: Iterable[str],
        labels: Mapping[tuple[int, str], Tri | str],
        transitions: Iterable[tuple[int, int, float]],
    ) -> "QDtmc":
        """Assemble a model from loose parts; raises ValueError on bad shape."""
        ap_tuple = tuple(aps)
        rows = _build_rows(n, transitions)
        matrix = []
        for s in range(n):
            row = []
            for ap in ap_tuple:
                try:
                    value = labels[(s, ap)]
                except KeyError:
                    raise ValueError(f"unlabeled ({s},{ap})") from None
                row.append(value if isinstance(value, Tri) else Tri.from_text(value))
            matrix.append(tuple(row))
        return cls(n=n, init=init, aps=ap_tuple, rows=rows, labels=tuple(matrix))

    def label(self, s: int, ap: str) -> Tri:
        return self.labels[s][self.ap_index(ap)]

    def with_ap(self, name: str, values: Iterable[Tri]) -> "QDtmc":
        """A copy of the model extended with one more labeled proposition."""
        if name in self.aps:
            raise ValueError(f"atomic proposition {name!r} already exists")
        if not AP_RE.match(name):
            raise ValueError(f"bad atomic proposition name {name!r}")
        column = tuple(values)
        if len(column) != self.n:
            raise ValueError("label column length does not match state count")
        return QDtmc(
            n=self.n,
            init=self.init,
            aps=self.aps + (name,),
            rows=self.rows,
            labels=tuple(self.labels[s] + (column[s],) for s in range(self.n)),
        )


@dataclass(frozen=True)
class BinDtmc(_Chain):
    """A chain with plain boolean labeling, as consumed by the binary checker."""

    labels: tuple[tuple[bool, ...], ...]

    def label(self, s: int, ap: str) -> bool:
        return self.labels[s][self.ap_index(ap)]

    def sat(self, ap: str) -> frozenset[int]:
        i = self.ap_index(ap)
        return frozenset(s for s in range(self.n) if self.labels[s][i])


def _build_rows(
    n: int, transitions: Iterable[tuple[int, int, float]]
) -> tuple[tuple[tuple[int, float], ...], ...]:
    table: list[dict[int, float]] = [{} for _ in range(n)]
    for i, j, p in transitions:
        if not 0 <= i < n or not 0 <= j < n:
            raise ValueError(f"transition ({i},{j}) outside state range")
        if j in table[i]:
            raise ValueError(f"duplicate transition ({i},{j})")
        if p != 0.0:
            table[i][j] = p
    return tuple(tuple(sorted(row.items())) for row in table)


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def validate(m: QDtmc | BinDtmc) -> list[str]:
    """Every broken model invariant, with state/row indices; empty when valid."""
    issues: list[str] = []
    if m.n < 1:
        issues.append(f"state count must be positive, got {m.n}")
        return issues
    if not 0 <= m.init < m.n:
        issues.append(f"initial state {m.init} outside [0, {m.n - 1}]")
    if len(m.rows) != m.n:
        issues.append(f"expected {m.n} transition rows, found {len(m.rows)}")
        return issues
    if len(m.labels) != m.n:
        issues.append(f"expected {m.n} label rows, found {len(m.labels)}")
        return issues

    seen: set[str] = set()
    for name in m.aps:
        if not AP_RE.match(name):
            issues.append(f"bad atomic proposition name {name!r}")
        if name in seen:
            issues.append(f"duplicate atomic proposition {name!r}")
        seen.add(name)

    want_tri = isinstance(m, QDtmc)
    for s in range(m.n):
        if len(m.labels[s]) != len(m.aps):
            issues.append(f"state {s}: expected {len(m.aps)} labels, "
                          f"found {len(m.labels[s])}")
            continue
        for name, value in zip(m.aps, m.labels[s]):
            if want_tri and not isinstance(value, Tri):
                issues.append(f"state {s}: label {name} is not a truth value")
            if not want_tri and not isinstance(value, bool):
                issues.append(f"state {s}: label {name} is not boolean")

    for s in range(m.n):
        total = 0.0
        for t, p in m.rows[s]:
            if not 0 <= t < m.n:
                issues.append(f"transition ({s},{t}) outside state range")
                continue
            if p < -PROB_RANGE_TOL or p > 1.0 + PROB_RANGE_TOL:
                issues.append(f"transition ({s},{t}) probability {p!r} outside [0, 1]")
            total += p
        if abs(total - 1.0) > ROW_SUM_TOL:
            issues.append(f"row {s} sums to {total!r}, expected 1")
    return issues


def require_valid(m: QDtmc | BinDtmc) -> None:
    from .errors import InvalidModelError

    issues = validate(m)
    if issues:
        raise InvalidModelError(issues)


# --------------------------------------------------------------------------
# Projections
# --------------------------------------------------------------------------

def project_lower(m: QDtmc) -> BinDtmc:
    """Pessimistic projection: unknown labels become false."""
    return BinDtmc(
        n=m.n,
        init=m.init,
        aps=m.aps,
        rows=m.rows,
        labels=tuple(
            tuple(v is Tri.T for v in row) for row in m.labels
        ),
    )


def project_upper(m: QDtmc) -> BinDtmc:
    """Optimistic projection: unknown labels become true."""
    return BinDtmc(
        n=m.n,
        init=m.init,
        aps=m.aps,
        rows=m.rows,
        labels=tuple(
            tuple(v is not Tri.F for v in row) for row in m.labels
        ),
    )


# --------------------------------------------------------------------------
# Negation closure
# --------------------------------------------------------------------------

def fresh_ap_name(existing: Iterable[str], base: str) -> str:
    """``base``, suffixed with underscores until it collides with nothing."""
    taken = set(existing)
    name = base
    while name in taken:
        name += "_"
    return name


def augment_negations(
    m: QDtmc, f: StateFormula
) -> tuple[QDtmc, StateFormula]:
    """Make a formula negation-free on atoms.

    For every atom ``a`` that occurs negated in ``f``, append a proposition
    ``a_neg`` labeled with the three-valued negation of ``a`` at every
    state, and replace each ``!a`` in the formula by the new atom.  Models
    and formulas without negated atoms are returned unchanged.
    """
    negated = negated_atoms(f)
    if not negated:
        return m, f
    for name in sorted(negated):
        if name not in m.aps:
            raise EvaluationError(f"unknown atomic proposition {name!r}")

    renames: dict[str, str] = {}
    out = m
    for name in m.aps:  # declaration order keeps output deterministic
        if name not in negated:
            continue
        fresh = fresh_ap_name(out.aps, f"{name}_neg")
        column = [not3(out.labels[s][out.ap_index(name)]) for s in range(out.n)]
        out = out.with_ap(fresh, column)
        renames[name] = fresh
    return out, _rewrite_negated(f, renames)


def _rewrite_negated(f: StateFormula, renames: Mapping[str, str]) -> StateFormula:
    if isinstance(f, (Const, Atom)):
        return f
    if isinstance(f, Not):
        if isinstance(f.child, Atom) and f.child.name in renames:
            return Atom(renames[f.child.name])
        return Not(_rewrite_negated(f.child, renames))
    if isinstance(f, And):
        return And(_rewrite_negated(f.left, renames),
                   _rewrite_negated(f.right, renames))
    if isinstance(f, Or):
        return Or(_rewrite_negated(f.left, renames),
                  _rewrite_negated(f.right, renames))
    if isinstance(f, Prob):
        return Prob(f.bound, _rewrite_negated_path(f.path, renames))
    raise TypeError(f"not a state formula: {f!r}")


def _rewrite_negated_path(p: PathFormula, renames: Mapping[str, str]) -> PathFormula:
    if isinstance(p, Next):
        return Next(_rewrite_negated(p.arg, renames))
    if isinstance(p, Until):
        return Until(_rewrite_negated(p.lhs, renames),
                     _rewrite_negated(p.rhs, renames))
    if isinstance(p, BoundedUntil):
        return BoundedUntil(_rewrite_negated(p.lhs, renames),
                            _rewrite_negated(p.rhs, renames), p.k)
    raise TypeError(f"not a path formula: {p!r}")
