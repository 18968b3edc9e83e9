import random

import pytest

from aspkit.ground_format import (
    BasicRule,
    ChoiceRule,
    ConstraintRule,
    GroundProgram,
    WeightRule,
)
from aspkit.solver import (
    FALSE,
    TRUE,
    UNKNOWN,
    ComputeSpec,
    Conflict,
    Solver,
    well_founded,
)

import gen


def program(rules, n_atoms, compute_true=(), compute_false=(), models=0):
    symbols = {a: f"x{a}" for a in range(2, n_atoms + 2)}
    return GroundProgram(rules=list(rules), symbols=symbols,
                         compute_true=tuple(compute_true),
                         compute_false=(1,) + tuple(compute_false),
                         models=models)


def solve_all(gp, **kw):
    return list(Solver(gp, **kw).models())


# -- ComputeSpec --------------------------------------------------------------

def test_compute_spec_rejects_overlap():
    with pytest.raises(ValueError):
        ComputeSpec(required_true=(2,), required_false=(2,))


def test_compute_spec_rejects_negative_count():
    with pytest.raises(ValueError):
        ComputeSpec(model_count=-1)


# -- expand -------------------------------------------------------------------

def test_expand_forces_head_of_satisfied_count_body():
    # h :- 1 { a, not b }.   With b false the bound is met, so h follows.
    gp = program([ConstraintRule(head=2, bound=1, pos=(3,), neg=(4,)),
                  ChoiceRule(heads=(3, 4), pos=(), neg=())],
                 3, compute_false=(4,))
    s = Solver(gp)
    assert s.expand() is None
    assert s.values[2] == TRUE
    assert s.values[3] == UNKNOWN


def test_expand_backchains_required_atom():
    # h must hold and only one rule can derive it, so its body is forced.
    gp = program([BasicRule(head=2, pos=(3,), neg=(4,)),
                  ChoiceRule(heads=(3, 4), pos=(), neg=())],
                 3, compute_true=(2,))
    s = Solver(gp)
    assert s.expand() is None
    assert s.values[3] == TRUE
    assert s.values[4] == FALSE


def test_expand_contraposes_falsified_head():
    # h is required false and the rule body would fire on a true, so a is
    # forced false (the negative literal b stays open but cannot save h).
    gp = program([BasicRule(head=2, pos=(3,), neg=()),
                  ChoiceRule(heads=(3, 4), pos=(), neg=())],
                 3, compute_false=(2,))
    s = Solver(gp)
    assert s.expand() is None
    assert s.values[3] == FALSE


def test_expand_falsifies_unfounded_loop():
    # a :- b.  b :- a.  No external support, so both are false.
    gp = program([BasicRule(head=2, pos=(3,), neg=()),
                  BasicRule(head=3, pos=(2,), neg=())], 2)
    s = Solver(gp)
    assert s.expand() is None
    assert s.values[2] == FALSE
    assert s.values[3] == FALSE


def test_expand_keeps_supported_loop_open():
    # The same loop with an external door stays undetermined.
    gp = program([BasicRule(head=2, pos=(3,), neg=()),
                  BasicRule(head=3, pos=(2,), neg=()),
                  BasicRule(head=2, pos=(), neg=(4,)),
                  ChoiceRule(heads=(4,), pos=(), neg=())], 3)
    s = Solver(gp)
    assert s.expand() is None
    assert s.values[2] == UNKNOWN


def test_expand_reports_conflict_atom():
    gp = program([BasicRule(head=2, pos=(), neg=())], 1, compute_false=(2,))
    s = Solver(gp)
    c = s.expand()
    assert isinstance(c, Conflict)
    assert c.atom == 2


def test_expand_is_idempotent():
    gp = program([BasicRule(head=2, pos=(3,), neg=(4,)),
                  ChoiceRule(heads=(3, 4), pos=(), neg=()),
                  ConstraintRule(head=5, bound=1, pos=(2, 3), neg=())], 4)
    s = Solver(gp)
    assert s.expand() is None
    snap = s.state_fingerprint()
    assert s.expand() is None
    assert s.state_fingerprint() == snap


def test_expand_monotone_under_extra_assumptions():
    rng = random.Random(5)
    for _ in range(200):
        gp = gen.random_normal_ground(rng)
        atoms = sorted(gp.symbols)
        s = Solver(gp)
        if s.expand() is not None:
            continue
        fixed = {a for a in atoms if s.values[a] != UNKNOWN}
        unknown = [a for a in atoms if s.values[a] == UNKNOWN]
        if not unknown:
            continue
        pick = unknown[0]
        mark = len(s.trail)
        s._set(pick, TRUE)
        if s.expand() is None:
            grown = {a for a in atoms if s.values[a] != UNKNOWN}
            assert fixed <= grown
        s._undo_to(mark)


# -- search -------------------------------------------------------------------

def test_two_cycle_has_both_models():
    gp = program([BasicRule(head=2, pos=(), neg=(3,)),
                  BasicRule(head=3, pos=(), neg=(2,))], 2)
    assert solve_all(gp) == [(2,), (3,)]


def test_odd_loop_has_no_model():
    gp = program([BasicRule(head=2, pos=(), neg=(2,))], 1)
    assert solve_all(gp) == []


def test_choice_enumerates_all_subsets():
    gp = program([ChoiceRule(heads=(2, 3), pos=(), neg=())], 2)
    assert set(solve_all(gp)) == {(), (2,), (3,), (2, 3)}


def test_constraint_rule_counts():
    # pair :- 2 { a, b, c }.  require pair, forbid full set
    gp = program([ChoiceRule(heads=(3, 4, 5), pos=(), neg=()),
                  ConstraintRule(head=2, bound=2, pos=(3, 4, 5), neg=()),
                  BasicRule(head=1, pos=(3, 4, 5), neg=())],
                 4, compute_true=(2,))
    got = sorted(solve_all(gp))
    assert got == [(2, 3, 4), (2, 3, 5), (2, 4, 5)]


def test_weight_rule_threshold():
    gp = program([ChoiceRule(heads=(3, 4), pos=(), neg=()),
                  WeightRule(head=2, bound=5, pos=(3, 4), neg=(),
                             pos_weights=(3, 4), neg_weights=())], 3)
    models = solve_all(gp)
    with_both = [m for m in models if 3 in m and 4 in m]
    assert all(2 in m for m in with_both)
    assert all(2 not in m or (3 in m and 4 in m) for m in models)


def test_model_count_limit_is_enforced_by_the_pipeline():
    from aspkit.pipeline import solve_ground
    gp = program([ChoiceRule(heads=(2, 3, 4), pos=(), neg=())], 3, models=2)
    assert len(list(solve_ground(gp))) == 2


def test_compute_sets_filter_models():
    gp = program([ChoiceRule(heads=(2, 3), pos=(), neg=())],
                 2, compute_true=(2,), compute_false=(3,))
    assert solve_all(gp) == [(2,)]


def test_enumeration_is_deterministic():
    rng = random.Random(99)
    for _ in range(50):
        gp = gen.random_normal_ground(rng)
        assert solve_all(gp) == solve_all(gp)


def test_seeded_lookahead_sampling_keeps_model_set():
    rng = random.Random(31)
    for _ in range(60):
        gp = gen.random_normal_ground(rng)
        base = sorted(solve_all(gp))
        for seed in (1, 7):
            assert sorted(solve_all(gp, lookahead_limit=2, seed=seed)) == base


def test_full_atmost_flag_is_equivalent():
    rng = random.Random(13)
    for _ in range(150):
        gp = gen.random_normal_ground(rng)
        assert solve_all(gp) == solve_all(gp, full_atmost=True)


def test_stats_are_populated():
    gp = program([ChoiceRule(heads=(2, 3, 4), pos=(), neg=())], 3)
    s = Solver(gp)
    models = list(s.models())
    assert len(models) == 8
    assert s.stats.decisions >= 3
    assert s.stats.propagations > 0


def test_decision_bound():
    # Decisions (including backtrack flips) stay within 2**k where k counts
    # the atoms eligible for branching.
    rng = random.Random(17)
    for _ in range(300):
        gp = gen.random_normal_ground(rng)
        s = Solver(gp)
        list(s.models())
        k = len(s.branch_order)
        assert s.stats.decisions <= 2 ** k


def test_probe_restores_state_exactly():
    rng = random.Random(23)
    for _ in range(100):
        gp = gen.random_normal_ground(rng)
        s = Solver(gp)
        if s.expand() is not None:
            continue
        snap = s.state_fingerprint()
        unknown = [a for a in sorted(gp.symbols) if s.values[a] == UNKNOWN]
        for a in unknown[:4]:
            s._probe(a, TRUE)
            s._probe(a, FALSE)
            assert s.state_fingerprint() == snap


def test_lookahead_failed_literal_is_forced():
    # Probing c true wipes out both rules for h, which is required, so the
    # lookahead must settle c false without a decision.
    gp = program([BasicRule(head=2, pos=(), neg=(3,)),
                  ChoiceRule(heads=(3,), pos=(), neg=()),
                  BasicRule(head=1, pos=(2, 3), neg=())],
                 2, compute_true=(2,))
    assert solve_all(gp) == [(2,)]
    s = Solver(gp)
    list(s.models())
    assert s.stats.decisions == 0


def test_unsupported_rule_type_for_wfs():
    with pytest.raises(Exception) as err:
        well_founded([ChoiceRule(heads=(2,), pos=(), neg=())])
    assert "UnsupportedRuleType" in type(err.value).__name__
