import itertools

import pytest

from fdsolve import (EQ, LEQ, AllDifferent, Dfa, Linear, Neq, Regular, Slide,
                     StateStatus, Table, new_problem)
from fdsolve.propagators import PropagationResult

from randcsp import (product_structure_ok, random_state,
                     random_state_with_slide, support_filtered_domains)


def run_filter(state, prop):
    state.post(prop)
    return state.propagate()


# -- neq ---------------------------------------------------------------------


def test_neq_assigned_side_prunes_and_entails():
    state = new_problem([{3}, {3, 4}])
    prop = Neq(0, 1)
    state.post(prop)
    assert prop.filter(state) is PropagationResult.ENTAILED
    assert sorted(state.domains[1]) == [4]


def test_neq_disjoint_entails_without_pruning():
    state = new_problem([{3, 5}, {1, 2}])
    prop = Neq(0, 1)
    # disjointness oracle: no shared value
    assert set(state.domains[0].values).isdisjoint(state.domains[1].values)
    assert prop.filter(state) is PropagationResult.ENTAILED
    assert sorted(state.domains[0]) == [3, 5]


def test_neq_both_assigned_equal_fails():
    state = new_problem([{1}, {1}])
    assert Neq(0, 1).filter(state) is PropagationResult.FAILED


# -- linear ------------------------------------------------------------------


def test_linear_bounds_pruning():
    state = new_problem([set(range(11)), set(range(4))])
    assert run_filter(state, Linear((1, 1), (0, 1), EQ, 5)) \
        is StateStatus.BRANCHABLE
    assert sorted(state.domains[0]) == [2, 3, 4, 5]
    assert sorted(state.domains[1]) == [0, 1, 2, 3]


def test_linear_entailed_when_bounds_guarantee():
    state = new_problem([{0, 1, 2, 3}, {0, 1, 2, 3}])
    prop = Linear((1, 1), (0, 1), LEQ, 100)
    state.post(prop)
    assert prop.filter(state) is PropagationResult.ENTAILED


def test_linear_failed_when_bounds_exclude():
    state = new_problem([set(range(5, 10)), set(range(5, 10))])
    assert Linear((1, 1), (0, 1), EQ, 1).filter(state) \
        is PropagationResult.FAILED


def test_linear_validation():
    with pytest.raises(ValueError):
        Linear((0, 1), (0, 1), EQ, 3)  # zero coefficient
    with pytest.raises(ValueError):
        Linear((), (), EQ, 3)  # empty
    with pytest.raises(ValueError):
        Linear((1, 1), (0, 0), EQ, 3)  # repeated variable


def test_linear_never_removes_supported_value():
    # bounds filtering may keep unsupported values, but must never drop a
    # supported one
    import random
    checked = 0
    for seed in range(60):
        rng = random.Random(seed)
        n = rng.randint(2, 4)
        doms = [set(rng.sample(range(-2, 7), rng.randint(2, 4)))
                for _ in range(n)]
        cs = tuple(rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(n))
        rhs = rng.randint(-6, 12)
        prop = Linear(cs, tuple(range(n)), rng.choice([EQ, LEQ]), rhs)
        state = new_problem(doms)
        supported = support_filtered_domains(state, prop)
        state.post(prop)
        status = state.propagate()
        if supported is None:
            continue  # bounds reasoning need not detect hole-only conflicts
        assert status is not StateStatus.FAILED
        checked += 1
        for x, values in supported.items():
            for v in values:
                assert v in state.domains[x]
    assert checked > 20


# -- alldifferent -------------------------------------------------------------


def test_alldiff_hall_pruning():
    state = new_problem([{0, 1}, {0, 1}, {0, 1, 2}])
    assert run_filter(state, AllDifferent([0, 1, 2])) is StateStatus.BRANCHABLE
    assert sorted(state.domains[2]) == [2]


def test_alldiff_decomposable_but_stable():
    state = new_problem([{0, 1}, {0, 1}, {2, 3}, {2, 3}])
    prop = AllDifferent([0, 1, 2, 3])
    state.post(prop)
    assert prop.filter(state) is PropagationResult.STABLE
    assert all(len(d) == 2 for d in state.domains)
    assert [sorted(e) for e in prop.hyperedges(state)] == [[0, 1], [2, 3]]


def test_alldiff_duplicate_assignment_fails():
    state = new_problem([{1}, {1}, {0, 2}])
    assert AllDifferent([0, 1, 2]).filter(state) is PropagationResult.FAILED


def test_alldiff_entailed_when_assigned_distinct():
    state = new_problem([{1}, {2}, {3}])
    assert AllDifferent([0, 1, 2]).filter(state) is PropagationResult.ENTAILED


def test_alldiff_entailed_when_pairwise_disjoint():
    state = new_problem([{0, 1}, {2, 3}, {4, 5}])
    assert AllDifferent([0, 1, 2]).filter(state) is PropagationResult.ENTAILED


# -- table --------------------------------------------------------------------


def test_table_forced_support():
    state = new_problem([{0}, {0, 1}])
    assert run_filter(state, Table((0, 1), [(0, 1), (1, 0)])) \
        is StateStatus.SOLVED
    assert sorted(state.domains[1]) == [1]


def test_table_full_product_entailed():
    state = new_problem([{0, 1}, {2, 3}])
    prop = Table((0, 1), list(itertools.product([0, 1], [2, 3])))
    state.post(prop)
    assert prop.filter(state) is PropagationResult.ENTAILED


def test_table_empty_fails():
    state = new_problem([{0, 1}, {0, 1}])
    assert Table((0, 1), []).filter(state) is PropagationResult.FAILED


def test_table_arity_validation():
    with pytest.raises(ValueError):
        Table((0, 1), [(1, 2, 3)])


# -- regular ------------------------------------------------------------------


def zero_one_alternating_dfa():
    # accepts (01)*
    return Dfa(2, 0, [0], {(0, 0): 1, (1, 1): 0})


def test_regular_forces_unique_word():
    # derived oracle: of the 16 binary words of length 4, only 0101 is
    # accepted by (01)*
    dfa = zero_one_alternating_dfa()
    accepted = [w for w in itertools.product([0, 1], repeat=4)
                if dfa.accepts(w)]
    assert accepted == [(0, 1, 0, 1)]
    state = new_problem([{0, 1}] * 4)
    assert run_filter(state, Regular((0, 1, 2, 3), dfa)) is StateStatus.SOLVED
    assert [d.value() for d in state.domains] == [0, 1, 0, 1]


def test_regular_universal_dfa_entailed():
    dfa = Dfa(1, 0, [0], {(0, 0): 0, (0, 1): 0})
    state = new_problem([{0, 1}] * 3)
    prop = Regular((0, 1, 2), dfa)
    state.post(prop)
    assert prop.filter(state) is PropagationResult.ENTAILED
    assert all(len(d) == 2 for d in state.domains)


def test_regular_unreachable_finals_fail():
    dfa = Dfa(2, 0, [1], {(0, 0): 0})
    state = new_problem([{0}])
    assert Regular((0,), dfa).filter(state) is PropagationResult.FAILED


def test_dfa_validation():
    with pytest.raises(ValueError):
        Dfa(1, 1, [0], {})
    with pytest.raises(ValueError):
        Dfa(1, 0, [2], {})
    with pytest.raises(ValueError):
        Dfa(1, 0, [0], {(0, 0): 3})


# -- slide ---------------------------------------------------------------------


def test_slide_window_pruning():
    # windows must differ; middle variable assigned 0 forces both ends to 1
    state = new_problem([{0, 1}, {0}, {0, 1}])
    assert run_filter(state, Slide((0, 1, 2), 2, [(0, 1), (1, 0)])) \
        is StateStatus.SOLVED
    assert [d.value() for d in state.domains] == [1, 0, 1]


def test_slide_single_window_is_table():
    rows = [(0, 1), (1, 0)]
    for doms in ([{0}, {0, 1}], [{0, 1}, {0, 1}], [{1}, {1}]):
        s_slide = new_problem([set(d) for d in doms])
        s_table = new_problem([set(d) for d in doms])
        r1 = run_filter(s_slide, Slide((0, 1), 2, rows))
        r2 = run_filter(s_table, Table((0, 1), rows))
        assert r1 == r2
        assert [sorted(d) for d in s_slide.domains] == \
            [sorted(d) for d in s_table.domains]


def test_slide_empty_tuples_fail():
    state = new_problem([{0, 1}] * 3)
    assert Slide((0, 1, 2), 2, []).filter(state) is PropagationResult.FAILED


def test_slide_width_validation():
    with pytest.raises(ValueError):
        Slide((0, 1), 3, [(0, 0, 0)])


def test_slide_split_on_entailed_windows():
    # all tuples allowed around position 1 once it is assigned, so the
    # sequence splits there
    rows = list(itertools.product([0, 1], repeat=2))
    state = new_problem([{0, 1}, {0}, {0, 1}])
    prop = Slide((0, 1, 2), 2, rows)
    state.post(prop)
    state.propagate()
    if prop in state.propagators.values():
        edges = prop.hyperedges(state)
        assert all(len(e) == 1 for e in edges)


# -- GAC equivalence (support-filtering oracle) --------------------------------


def single_constraint_states(seed):
    import random
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    doms = [set(rng.sample(range(5), rng.randint(1, 5))) for _ in range(n)]
    kind = rng.choice(["alldifferent", "table", "regular"])
    if kind == "alldifferent" and n >= 2:
        prop = AllDifferent(range(n))
    elif kind == "table":
        full = itertools.product(*[sorted(d) for d in doms])
        prop = Table(tuple(range(n)), [t for t in full if rng.random() < 0.6])
    else:
        ns = rng.randint(2, 4)
        trans = {}
        for q in range(ns):
            for s in range(5):
                if rng.random() < 0.7:
                    trans[(q, s)] = rng.randrange(ns)
        prop = Regular(tuple(range(n)),
                       Dfa(ns, 0, [q for q in range(ns) if rng.random() < 0.5],
                           trans))
    return new_problem(doms), prop


def test_gac_equivalence_against_support_oracle():
    checked = 0
    for seed in range(120):
        state, prop = single_constraint_states(seed)
        expected = support_filtered_domains(state, prop)
        state.post(prop)
        status = state.propagate()
        if expected is None:
            assert status is StateStatus.FAILED
            continue
        checked += 1
        assert status is not StateStatus.FAILED
        for x, values in expected.items():
            assert set(state.domains[x].values) == values
    assert checked > 40


def test_filters_never_entail_while_violations_remain():
    for seed in range(80):
        state = random_state(seed)
        posted = dict(state.propagators)
        if state.propagate() is StateStatus.FAILED:
            continue
        for h, prop in posted.items():
            if h in state.propagators:
                continue
            doms = [sorted(state.domains[x]) for x in prop.vars]
            assert all(prop.satisfied(t)
                       for t in itertools.product(*doms))


# -- scope splits ---------------------------------------------------------------


def test_hyperedges_examples():
    state = new_problem([{0, 1}, {0, 1}, {2, 3}, {2, 3}])
    ad = AllDifferent([0, 1, 2, 3])
    state.post(ad)
    state.propagate()
    assert [sorted(e) for e in ad.hyperedges(state)] == [[0, 1], [2, 3]]

    state = new_problem([{0, 1, 2}] * 3)
    lin = Linear((1, 1, 1), (0, 1, 2), EQ, 3)
    state.post(lin)
    state.propagate()
    assert [sorted(e) for e in lin.hyperedges(state)] == [[0, 1, 2]]


def test_regular_hyperedges_split_at_singleton_layer():
    # (01)* over 4 vars with the first two fixed to 0,1: the automaton is
    # back in its single start state after position 1, so the runs split
    dfa = zero_one_alternating_dfa()
    state = new_problem([{0}, {1}, {0, 1}, {0, 1}])
    prop = Regular((0, 1, 2, 3), dfa)
    state.post(prop)
    state.propagate()
    if prop in state.propagators.values():
        edges = prop.hyperedges(state)
        assert all(len(e) <= 2 for e in edges)
        flat = sorted(x for e in edges for x in e)
        assert 0 not in flat and 1 not in flat


def test_hyperedges_partition_unassigned_scope():
    cases = [random_state(s) for s in range(60)]
    cases += [random_state_with_slide(s) for s in range(30)]
    for state in cases:
        if state.propagate() is StateStatus.FAILED:
            continue
        for prop in state.propagators.values():
            edges = prop.hyperedges(state)
            flat = [x for e in edges for x in e]
            unassigned = [x for x in prop.vars if len(state.domains[x]) != 1]
            assert sorted(flat) == sorted(unassigned)  # disjoint + coverage


def test_decomposition_soundness_product_structure():
    cases = [random_state(s) for s in range(60)]
    cases += [random_state_with_slide(s) for s in range(30)]
    checked = 0
    for state in cases:
        if state.propagate() is StateStatus.FAILED:
            continue
        for prop in state.propagators.values():
            assert product_structure_ok(state, prop)
            checked += 1
    assert checked > 50
