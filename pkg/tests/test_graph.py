from math import prod

from fdsolve import (EQ, AllDifferent, Linear, Neq, StateStatus,
                     brute_force_count, build_constraint_graph, components,
                     new_problem, try_decompose)
from fdsolve.graph import decompose_analysis

from randcsp import (enumerate_solutions, intro_state, random_clustered_state,
                     random_state)


def test_intro_graph_after_root_propagation():
    state = intro_state()
    assert state.propagate() is StateStatus.BRANCHABLE
    g = build_constraint_graph(state)
    assert g.nodes == frozenset({0, 1, 2, 3})
    assert sorted(sorted(e) for e, _h in g.edges) == [[0, 1], [2, 3]]


def test_alldiff_graph_decomposed():
    state = new_problem([{0, 1}, {0, 1}, {2, 3}, {2, 3}])
    state.post(AllDifferent([0, 1, 2, 3]))
    state.propagate()
    g = build_constraint_graph(state)
    assert sorted(sorted(e) for e, _h in g.edges) == [[0, 1], [2, 3]]


def test_linear_graph_single_edge():
    state = new_problem([{0, 1, 2}] * 3)
    state.post(Linear((1, 1, 1), (0, 1, 2), EQ, 3))
    state.propagate()
    g = build_constraint_graph(state)
    assert [sorted(e) for e, _h in g.edges] == [[0, 1, 2]]


def test_components_examples():
    state = intro_state()
    state.propagate()
    part = components(build_constraint_graph(state))
    assert [sorted(c) for c in part.components] == [[0, 1], [2, 3]]

    chain = new_problem([{0, 1}] * 3)
    chain.post(Neq(0, 1))
    chain.post(Neq(1, 2))
    chain.propagate()
    part = components(build_constraint_graph(chain))
    assert [sorted(c) for c in part.components] == [[0, 1, 2]]

    bare = new_problem([{0, 1}] * 3)
    part = components(build_constraint_graph(bare))
    assert [sorted(c) for c in part.components] == [[0], [1], [2]]


def test_try_decompose_intro():
    state = intro_state()
    state.propagate()
    assert try_decompose(state) == [{0, 1}, {2, 3}]


def test_try_decompose_connected_absent():
    state = new_problem([{0, 1, 2}] * 3)
    state.post(Linear((1, 1, 1), (0, 1, 2), EQ, 3))
    state.propagate()
    assert try_decompose(state) is None


def test_try_decompose_single_component_with_assigned_absent():
    state = new_problem([{7}, {9}, {0, 1}, {0, 1}, {0, 1}])
    state.post(Neq(2, 3))
    state.post(Neq(3, 4))
    state.propagate()
    assert try_decompose(state) is None


def test_try_decompose_attaches_riders_to_first_component():
    # one assigned variable and one unconstrained variable ride in the
    # first component so the returned sets cover everything
    state = new_problem([{5}, {0, 1, 2}, {0, 1}, {0, 1}, {2, 3}, {2, 3}])
    state.post(Neq(2, 3))
    state.post(Neq(4, 5))
    state.propagate()
    parts = try_decompose(state)
    assert parts == [{0, 1, 2, 3}, {4, 5}]


def test_partial_problem_restriction_and_factorization():
    # every decomposition the engine performs yields independent partial
    # problems: projections match and counts factor
    from fdsolve import dds_count
    records = []

    def hook(state, parts):
        if len(records) < 80:
            records.append((state.clone(), parts))

    for seed in range(60):
        dds_count(random_state(seed, max_vars=8, max_dom=4),
                  decompose_hook=hook)
    for seed in range(40):
        dds_count(random_clustered_state(seed), decompose_hook=hook)
    assert len(records) > 20
    for state, parts in records:
        all_vars = sorted(set().union(*parts))  # the decomposed scope
        whole = enumerate_solutions(state, scope=all_vars)
        # count factorization
        assert len(whole) == prod(brute_force_count(state, scope=p)
                                  for p in parts)
        # restriction equality on satisfiable states (projection of the
        # whole solution set equals the partial problem's solutions)
        if whole:
            for part in parts:
                idx = [all_vars.index(x) for x in sorted(part)]
                projected = {tuple(sol[i] for i in idx) for sol in whole}
                assert projected == enumerate_solutions(state, scope=part)
        # free-variable accounting: unassigned scope variables appear
        # exactly once across the parts
        unassigned = {x for x in all_vars if len(state.domains[x]) != 1}
        seen = [x for p in parts for x in p if x in unassigned]
        assert sorted(seen) == sorted(unassigned)


def test_determinism():
    for seed in (3, 17, 40):
        a = random_state(seed)
        b = random_state(seed)
        a.propagate()
        b.propagate()
        assert try_decompose(a) == try_decompose(b)
        ga, gb = build_constraint_graph(a), build_constraint_graph(b)
        assert sorted(sorted(e) for e, _ in ga.edges) == \
            sorted(sorted(e) for e, _ in gb.edges)


def test_scope_restricted_graph():
    state = intro_state()
    state.propagate()
    g = build_constraint_graph(state, scope={0, 1})
    assert g.nodes == frozenset({0, 1})
    assert [sorted(e) for e, _h in g.edges] == [[0, 1]]


def test_analysis_classifies_isolated():
    state = new_problem([{5}, {0, 1, 2}, {0, 1}, {0, 1}])
    state.post(Neq(2, 3))
    state.propagate()
    analysis = decompose_analysis(state)
    assert [sorted(c) for c in analysis.linked] == [[2, 3]]
    assert analysis.isolated == (1,)
    assert analysis.assigned == frozenset({0})
