"""Shared test utilities: seeded random models/formulas and reference code."""

from __future__ import annotations

import random

from qmcheck import (
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
    QDtmc,
    StateFormula,
    Tri,
    Until,
)

THETA_GRID = tuple(round(0.1 * i, 10) for i in range(1, 10))


def random_qdtmc(
    rng: random.Random,
    max_states: int = 6,
    max_aps: int = 3,
    binary: bool = False,
) -> QDtmc:
    """A random row-stochastic model; labels T/F/? drawn 0.4/0.4/0.2."""
    n = rng.randint(2, max_states)
    aps = ("p", "q", "r")[: rng.randint(1, max_aps)]
    labels = {}
    for s in range(n):
        for a in aps:
            x = rng.random()
            if binary:
                labels[(s, a)] = Tri.T if x < 0.5 else Tri.F
            else:
                labels[(s, a)] = Tri.T if x < 0.4 else (Tri.F if x < 0.8 else Tri.U)
    trans = []
    for s in range(n):
        targets = rng.sample(range(n), rng.randint(1, min(3, n)))
        weights = [rng.random() + 0.05 for _ in targets]
        total = sum(weights)
        trans.extend((s, t, w / total) for t, w in zip(targets, weights))
    return QDtmc.build(n, rng.randrange(n), aps, labels, trans)


def random_formula(
    rng: random.Random,
    depth: int,
    aps: tuple[str, ...],
    allow_unbounded: bool = False,
    consts: tuple[Tri, ...] = (Tri.T, Tri.F, Tri.U),
    max_k: int = 4,
) -> StateFormula:
    kinds = (
        ["atom", "atom", "const"]
        if depth == 0
        else ["atom", "atom", "const", "not", "and", "or", "prob", "prob"]
    )
    kind = rng.choice(kinds)

    def sub() -> StateFormula:
        return random_formula(rng, depth - 1, aps, allow_unbounded, consts, max_k)

    if kind == "atom":
        return Atom(rng.choice(aps))
    if kind == "const":
        return Const(rng.choice(consts))
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    bound = ProbBound(
        Bound.GE if rng.random() < 0.8 else Bound.LT, rng.choice(THETA_GRID)
    )
    roll = rng.random()
    if roll < 0.4:
        return Prob(bound, Next(sub()))
    if allow_unbounded and roll < 0.6:
        return Prob(bound, Until(sub(), sub()))
    return Prob(bound, BoundedUntil(sub(), sub(), rng.randint(0, max_k)))


def random_absorbing_dag(rng: random.Random, max_states: int = 6) -> QDtmc:
    """A model whose only cycles are absorbing self-loops (forward edges)."""
    n = rng.randint(2, max_states)
    aps = ("p", "q")
    labels = {
        (s, a): (Tri.T if rng.random() < 0.5 else Tri.F)
        for s in range(n)
        for a in aps
    }
    trans = []
    for s in range(n):
        later = list(range(s + 1, n))
        if not later or rng.random() < 0.3:
            trans.append((s, s, 1.0))
            continue
        targets = rng.sample(later, rng.randint(1, min(2, len(later))))
        weights = [rng.random() + 0.05 for _ in targets]
        total = sum(weights)
        trans.extend((s, t, w / total) for t, w in zip(targets, weights))
    return QDtmc.build(n, 0, aps, labels, trans)


def enum_until_prob(m, sat1: frozenset[int], sat2: frozenset[int], s: int) -> float:
    """Reachability probability by full path expansion (absorbing-DAG models)."""
    if s in sat2:
        return 1.0
    if s not in sat1 or m.is_absorbing(s):
        return 0.0
    return sum(p * enum_until_prob(m, sat1, sat2, t) for t, p in m.rows[s])


def paper_paths() -> list[tuple[str, str]]:
    """Every (fixture, path formula) pair from the published result tables."""
    return [
        ("m1", "!p U q"),
        ("m2", "!p U q"),
        ("m1", "X q"),
        ("m2", "X q"),
        ("m3", "X q"),
        ("m4", "X q"),
        ("m3", "p U r"),
        ("m4", "p U r"),
        ("m3", "p U P>=0.8 [ X r ]"),
        ("m4", "p U P>=0.8 [ X r ]"),
        ("m3", "P>=0.2 [ p U r ] U q"),
        ("m4", "P>=0.2 [ p U r ] U q"),
        ("m5", "!q U p"),
    ]
