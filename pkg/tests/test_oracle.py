"""Direct-semantics oracle: path values, measures, full evaluation."""

import random
from itertools import product

import pytest

from qmcheck import (
    Atom,
    BoundedUntil,
    EvaluationError,
    HorizonError,
    Next,
    PathPrefix,
    PathUndecided,
    QDtmc,
    Tri,
    Until,
    augment_negations,
    check_direct,
    eval_path_tri,
    fixture,
    measure_tri,
    normalize,
    not3,
    parse_formula,
    prob_until,
    project_lower,
    project_upper,
)
from helpers import paper_paths, random_qdtmc

T, F, U = Tri.T, Tri.F, Tri.U
UNTIL = Until(Atom("a"), Atom("b"))


def env_of(m, name):
    i = m.ap_index(name)
    return [m.labels[s][i] for s in range(m.n)]


# --------------------------------------------------------------------------
# Path-level evaluation
# --------------------------------------------------------------------------

def test_next_reads_second_position():
    assert eval_path_tri([T, U], Next(Atom("a"))) is U
    assert eval_path_tri([F, T], Next(Atom("a"))) is T
    with pytest.raises(PathUndecided):
        eval_path_tri([T], Next(Atom("a")))
    assert eval_path_tri([U], Next(Atom("a")), closed=True) is U


def test_bounded_until_all_false_rhs_is_false():
    vals = [(T, F), (T, F), (T, F)]
    assert eval_path_tri(vals, BoundedUntil(Atom("a"), Atom("b"), 2)) is F


def test_bounded_until_unknown_lhs_blocks_witness():
    vals = [(U, F), (T, T)]
    assert eval_path_tri(vals, BoundedUntil(Atom("a"), Atom("b"), 1)) is U


def test_bounded_until_rhs_unknown_everywhere():
    vals = [(T, U), (T, U), (T, U)]
    assert eval_path_tri(vals, BoundedUntil(Atom("a"), Atom("b"), 2)) is U


def test_until_true_witness_with_true_prefix():
    assert eval_path_tri([(T, F), (T, T)], UNTIL) is T


def test_until_undecided_prefix_raises():
    with pytest.raises(PathUndecided):
        eval_path_tri([(T, F), (T, F)], UNTIL)


def test_until_closed_prefix_decides():
    assert eval_path_tri([(T, F), (T, F)], UNTIL, closed=True) is F
    # rhs false forever forces falsehood even through unknown lhs values
    assert eval_path_tri([(T, F), (U, F)], UNTIL, closed=True) is F
    # an unknown rhs before the lhs break keeps falsehood unreachable
    assert eval_path_tri([(T, U), (F, F)], UNTIL, closed=True) is U
    assert eval_path_tri([(T, U), (U, F)], UNTIL, closed=True) is U
    # unknown rhs at an absorbing state right after a break resolves false
    assert eval_path_tri([(F, U)], UNTIL, closed=True) is F


def ref_bounded(vals, k):
    """Quantifier-expansion reference for the bounded-until value."""
    if any(
        vals[i][1] is T and all(vals[j][0] is T for j in range(i))
        for i in range(k + 1)
    ):
        return T
    if all(
        vals[i][1] is F or any(vals[j][0] is F for j in range(i))
        for i in range(k + 1)
    ):
        return F
    return U


def test_bounded_until_matches_truth_table_expansion():
    tris = (T, F, U)
    for k in range(4):
        path = BoundedUntil(Atom("a"), Atom("b"), k)
        for vals in product(product(tris, tris), repeat=k + 1):
            assert eval_path_tri(list(vals), path) is ref_bounded(vals, k)


# --------------------------------------------------------------------------
# Measures
# --------------------------------------------------------------------------

def test_next_measures_on_m1():
    m = fixture("m1")
    measures = measure_tri(m, Next(Atom("q")), [env_of(m, "q")])
    at_init = measures[m.init]
    assert at_init.mu_t == pytest.approx(0.2, abs=1e-12)
    assert at_init.mu_f == pytest.approx(0.3, abs=1e-12)
    assert at_init.mu_u == pytest.approx(0.5, abs=1e-12)


def test_trivial_until_has_full_true_mass():
    m = fixture("m1")
    env = [T] * m.n
    for ms in measure_tri(m, UNTIL, [env, env]):
        assert ms.mu_t == pytest.approx(1.0, abs=1e-12)


def test_m5_measures_at_init():
    m, f = augment_negations(
        fixture("m5"), normalize(parse_formula("P>=0.1 [ !q U p ]")).formula
    )
    measures = measure_tri(
        m, UNTIL, [env_of(m, "q_neg"), env_of(m, "p")]
    )
    at_init = measures[m.init]
    assert at_init.mu_t == pytest.approx(0.1, abs=1e-12)
    assert at_init.mu_f == pytest.approx(0.4464, abs=1e-12)
    assert at_init.mu_u == pytest.approx(0.4536, abs=1e-12)
    assert at_init.undecided == 0.0


def test_measure_conservation_on_random_models():
    rng = random.Random(321)
    for _ in range(60):
        m = random_qdtmc(rng)
        env1 = [rng.choice((T, F, U)) for _ in range(m.n)]
        env2 = [rng.choice((T, F, U)) for _ in range(m.n)]
        k = rng.randint(0, 4)
        for ms in measure_tri(m, BoundedUntil(Atom("a"), Atom("b"), k), [env1, env2]):
            assert ms.mu_t + ms.mu_f + ms.mu_u == pytest.approx(1.0, abs=1e-9)


def test_measures_agree_with_projections_on_fixtures():
    from qmcheck import parse_path_formula, prob_bounded_until, prob_next

    for name, text in paper_paths():
        m0 = fixture(name)
        shell = normalize(parse_formula(f"P>=0.5 [ {text} ]")).formula
        m, f = augment_negations(m0, shell)
        path = f.path
        # evaluate nested operands three-valuedly first
        verdict_env = {}
        operands = (
            (path.arg,) if isinstance(path, Next) else (path.lhs, path.rhs)
        )
        envs = []
        for operand in operands:
            envs.append(check_direct(m, operand).per_state)
        measures = measure_tri(m, path, envs)
        low, up = project_lower(m), project_upper(m)
        low_sets = [
            [v is T for v in env] for env in envs
        ]
        up_sets = [
            [v is not F for v in env] for env in envs
        ]
        if isinstance(path, Next):
            plow = prob_next(low, low_sets[0])
            pup = prob_next(up, up_sets[0])
        elif isinstance(path, BoundedUntil):
            plow = prob_bounded_until(low, low_sets[0], low_sets[1], path.k)
            pup = prob_bounded_until(up, up_sets[0], up_sets[1], path.k)
        else:
            plow = prob_until(low, low_sets[0], low_sets[1])
            pup = prob_until(up, up_sets[0], up_sets[1])
        for s in range(m.n):
            assert measures[s].mu_t == pytest.approx(plow[s], abs=1e-9)
            assert measures[s].mu_f == pytest.approx(1.0 - pup[s], abs=1e-9)


def test_pruned_enumeration_matches_unpruned():
    rng = random.Random(777)
    for _ in range(25):
        m = random_qdtmc(rng, max_states=4)
        env1 = [rng.choice((T, F, U)) for _ in range(m.n)]
        env2 = [rng.choice((T, F, U)) for _ in range(m.n)]
        k = rng.randint(0, 3)
        path = BoundedUntil(Atom("a"), Atom("b"), k)
        measures = measure_tri(m, path, [env1, env2])

        for start in range(m.n):
            sums = {T: 0.0, F: 0.0, U: 0.0}

            def expand(states, mass):
                if len(states) == k + 1:
                    vals = [(env1[s], env2[s]) for s in states]
                    sums[eval_path_tri(vals, path)] += mass
                    return
                for t, p in m.rows[states[-1]]:
                    expand(states + [t], mass * p)

            expand([start], 1.0)
            ms = measures[start]
            assert ms.mu_t == pytest.approx(sums[T], abs=1e-9)
            assert ms.mu_f == pytest.approx(sums[F], abs=1e-9)
            assert ms.mu_u == pytest.approx(sums[U], abs=1e-9)


def test_horizon_error_on_undecidable_cycle():
    m = QDtmc.build(
        2, 0, ("a", "b"),
        {(0, "a"): T, (0, "b"): F, (1, "a"): T, (1, "b"): F},
        [(0, 1, 1.0), (1, 0, 1.0)],
    )
    with pytest.raises(HorizonError):
        measure_tri(m, UNTIL, [env_of(m, "a"), env_of(m, "b")], horizon=40)


def test_path_prefix_measure():
    m = fixture("m5")
    prefix = PathPrefix.along(m, [0, 2, 6, 10])
    assert prefix.measure == pytest.approx(0.9 * 0.6 * 0.84, abs=1e-12)
    with pytest.raises(EvaluationError):
        PathPrefix.along(m, [0, 7])


# --------------------------------------------------------------------------
# Full state-formula evaluation
# --------------------------------------------------------------------------

def test_check_direct_boundary_case_is_unknown():
    verdict = check_direct(fixture("m1"), parse_formula("P>=0.4 [ X q ]"))
    assert verdict.at_init is U


def test_unknown_constant_is_unknown_everywhere():
    verdict = check_direct(fixture("m1"), parse_formula("unknown"))
    assert set(verdict.per_state) == {U}


def test_lt_bound_is_negation_of_ge():
    m = fixture("m1")
    for i in range(1, 10):
        theta = round(0.1 * i, 10)
        lt = check_direct(m, parse_formula(f"P<{theta} [ X q ]")).per_state
        ge = check_direct(m, parse_formula(f"P>={theta} [ X q ]")).per_state
        assert lt == tuple(not3(v) for v in ge)


def test_check_direct_reports_measure_evidence():
    verdict = check_direct(fixture("m5"), parse_formula("P>=0.1 [ !q U p ]"))
    assert verdict.at_init is T
    ms = verdict.evidence[-1].measures[0]
    assert ms.mu_t == pytest.approx(0.1, abs=1e-9)


def test_oracle_equals_oracle_of_normalized_formula():
    rng = random.Random(2024)
    from helpers import random_formula

    for _ in range(80):
        m = random_qdtmc(rng)
        f = random_formula(rng, 3, m.aps)
        assert (
            check_direct(m, f).per_state
            == check_direct(m, normalize(f).formula).per_state
        )
