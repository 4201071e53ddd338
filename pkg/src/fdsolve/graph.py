"""Constraint-graph reflection and connected-component decomposition.

The hypergraph is rebuilt from the propagator store on every query: nodes
are the unassigned variables, hyperedges come from each active
propagator's own scope split.  Connected components of this graph are
independent partial problems; solving them separately and multiplying the
counts is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Optional


@dataclass(frozen=True)
class ConstraintGraph:
    """Hypergraph over unassigned variables.

    ``edges`` pairs each variable set with the handle of the propagator it
    came from; edges of size < 2 are dropped at build time.
    """

    nodes: frozenset[int]
    edges: tuple[tuple[frozenset[int], int], ...]
    assigned: frozenset[int]


@dataclass(frozen=True)
class ComponentPartition:
    """Maximal connected variable sets plus the assigned variables seen."""

    components: tuple[frozenset[int], ...]
    assigned: frozenset[int]


@dataclass(frozen=True)
class DecompositionAnalysis:
    """Connected components split into constraint-bearing ones and isolated
    (unconstrained, multi-valued) variables."""

    linked: tuple[frozenset[int], ...]
    isolated: tuple[int, ...]
    assigned: frozenset[int]
    graph: ConstraintGraph


def build_constraint_graph(state, scope=None) -> ConstraintGraph:
    """Reflect the current store into an explicit hypergraph.

    ``scope`` restricts the graph to a variable subset (used by component
    sub-searches); by default all variables are considered.  Entailed
    propagators contribute nothing because the store no longer holds them.
    """
    if scope is None:
        scope_set = set(range(state.num_vars))
    else:
        scope_set = set(scope)
    nodes = frozenset(x for x in scope_set if not state.is_assigned(x))
    assigned = frozenset(x for x in scope_set if state.is_assigned(x))
    edges = []
    for handle, prop in state.propagators.items():
        if not any(x in scope_set for x in prop.vars):
            continue
        for edge in prop.hyperedges(state):
            edge = edge & nodes
            if len(edge) >= 2:
                edges.append((edge, handle))
    return ConstraintGraph(nodes=nodes, edges=tuple(edges), assigned=assigned)


def components(graph: ConstraintGraph) -> ComponentPartition:
    """Maximal connected node sets; isolated nodes are singleton components.

    Components are ordered by their lowest contained variable index.
    """
    parent = {x: x for x in graph.nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for edge, _handle in graph.edges:
        it = iter(edge)
        first = find(next(it))
        for other in it:
            r = find(other)
            if r != first:
                parent[r] = first
    groups: dict[int, list[int]] = {}
    for x in graph.nodes:
        groups.setdefault(find(x), []).append(x)
    comps = tuple(frozenset(g) for g in sorted(groups.values(), key=min))
    return ComponentPartition(components=comps, assigned=graph.assigned)


def decompose_analysis(state, scope=None) -> DecompositionAnalysis:
    """Component analysis of a propagated state.

    Splits the components into constraint-bearing ones (``linked``) and
    isolated unassigned variables, which carry no constraint and only
    multiply the solution count by their domain size.
    """
    graph = build_constraint_graph(state, scope)
    part = components(graph)
    linked = []
    isolated = []
    for comp in part.components:
        if len(comp) >= 2:
            linked.append(comp)
        else:
            isolated.extend(comp)
    return DecompositionAnalysis(linked=tuple(linked),
                                 isolated=tuple(sorted(isolated)),
                                 assigned=part.assigned,
                                 graph=graph)


def free_factor(state, isolated) -> int:
    """Count multiplier contributed by unconstrained multi-valued variables."""
    return prod(len(state.domains[x]) for x in isolated)


def try_decompose(state, scope=None) -> Optional[list[set[int]]]:
    """Partition into independent partial problems, or None.

    Returns a list only when at least two constraint-bearing components
    exist; anything else (one component, possibly with assigned or
    unconstrained variables around it) is not a profitable decomposition.
    Assigned variables and isolated unassigned variables attach to the
    first component so the returned sets cover every variable in scope.
    """
    analysis = decompose_analysis(state, scope)
    if len(analysis.linked) < 2:
        return None
    parts = [set(c) for c in analysis.linked]
    parts[0] |= set(analysis.isolated)
    parts[0] |= set(analysis.assigned)
    return parts
