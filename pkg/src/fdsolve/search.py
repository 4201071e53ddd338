"""Search engines: plain depth-first counting and decomposing counting.

Both engines branch by equality (left child posts x = v, right child posts
x != v) and clone the state before each branch.  The decomposing engine
additionally checks, at every branchable node, whether the constraint
graph has fallen apart into independent partial problems; if so it solves
the parts separately and multiplies their counts, short-circuiting once a
part has no solutions.

Cut-offs apply to full solutions only: a partial solution of one
component is counted against the limit only once every sibling component
explored before it is complete, so the certified total is a true lower
bound of the final count.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from math import prod
from typing import Callable, NamedTuple, Optional, Union

from .engine import PropagationCounters, ProblemState, StateStatus
from .graph import (build_constraint_graph, decompose_analysis, free_factor)


class Heuristic(enum.Enum):
    """Variable selection strategies; the value is chosen in scope order,
    ties always broken by lowest variable index.  The branching value is
    the domain minimum."""

    INPUT_ORDER = "input"
    FIRST_FAIL = "ff"
    MAX_DEGREE = "maxdeg"
    MAX_DEGREE_FIRST_FAIL = "maxdeg-ff"


DEFAULT_HEURISTIC = Heuristic.MAX_DEGREE_FIRST_FAIL


class BranchDecision(NamedTuple):
    variable: int
    value: int


@dataclass
class SearchStats:
    nodes: int = 0
    choice_nodes: int = 0
    decomposition_nodes: int = 0
    fails: int = 0
    solutions_found: int = 0
    propagations: int = 0
    max_depth: int = 0
    wall_time: float = 0.0


@dataclass
class CountResult:
    count: int
    exact: bool
    stats: SearchStats


@dataclass
class Leaf:
    assignment: dict[int, int]


@dataclass
class Or:
    children: list


@dataclass
class And:
    children: list
    fixed: dict[int, int] = field(default_factory=dict)


SolutionTree = Union[Leaf, Or, And]


@dataclass
class TreeResult:
    tree: SolutionTree
    exact: bool
    stats: SearchStats


class SearchTrace:
    """Bounded record of visited search nodes, for DOT export."""

    def __init__(self, max_nodes: int = 5000):
        self.max_nodes = max_nodes
        self.nodes: list[tuple[int, str]] = []          # (id, kind)
        self.edges: list[tuple[int, int, str]] = []     # (parent, child, label)
        self.truncated = False

    def add(self, parent: Optional[int], kind: str, label: str) -> Optional[int]:
        if len(self.nodes) >= self.max_nodes:
            self.truncated = True
            return None
        nid = len(self.nodes)
        self.nodes.append((nid, kind))
        if parent is not None:
            self.edges.append((parent, nid, label))
        return nid

    def count_kind(self, kind: str) -> int:
        return sum(1 for _nid, k in self.nodes if k == kind)


def trace_dot(trace: SearchTrace) -> str:
    """Render a recorded search as a DOT digraph.

    Choice nodes are circles, decomposition nodes circles with an inner
    square, failures filled boxes, solutions diamonds.
    """
    styles = {
        "choice": 'shape=circle, label=""',
        "decomposition": 'shape=circle, label="□"',
        "fail": 'shape=box, style=filled, fillcolor=gray60, label=""',
        "solution": 'shape=diamond, label=""',
    }
    lines = ["digraph search {", "  node [fontsize=10];"]
    for nid, kind in trace.nodes:
        lines.append(f"  n{nid} [{styles[kind]}];")
    for parent, child, label in trace.edges:
        lines.append(f'  n{parent} -> n{child} [label="{label}"];')
    if trace.truncated:
        lines.append('  trunc [shape=plaintext, label="(truncated)"];')
    lines.append("}")
    return "\n".join(lines)


# -- heuristics ---------------------------------------------------------


def choose(state: ProblemState, heuristic: Heuristic, scope,
           graph=None) -> BranchDecision:
    """Pick the branching variable inside ``scope`` plus its minimum value.

    Degree-based strategies count incident hyperedges of the reflected
    (constraint-decomposed) graph, the same graph decomposition checks use.
    """
    cands = sorted(x for x in scope if not state.is_assigned(x))
    if not cands:
        raise ValueError("choose() needs at least one unassigned variable in scope")
    if heuristic in (Heuristic.MAX_DEGREE, Heuristic.MAX_DEGREE_FIRST_FAIL):
        if graph is None:
            graph = build_constraint_graph(state, scope)
        degree = dict.fromkeys(cands, 0)
        for edge, _handle in graph.edges:
            for x in edge:
                if x in degree:
                    degree[x] += 1
    if heuristic is Heuristic.INPUT_ORDER:
        x = cands[0]
    elif heuristic is Heuristic.FIRST_FAIL:
        x = min(cands, key=lambda c: (len(state.domains[c]), c))
    elif heuristic is Heuristic.MAX_DEGREE:
        x = min(cands, key=lambda c: (-degree[c], c))
    else:
        x = min(cands, key=lambda c: (-degree[c], len(state.domains[c]), c))
    return BranchDecision(x, state.domains[x].min())


def order_components(component_list, state: ProblemState, heuristic: Heuristic,
                     graph=None) -> list[frozenset[int]]:
    """Order partial problems for exploration.

    The component containing the variable the heuristic would select from
    the whole undecomposed set goes first, so a failure-seeking heuristic
    fails inside the first part explored; the rest follow by lowest
    contained variable index.
    """
    comps = [frozenset(c) for c in component_list]
    union = set().union(*comps)
    picked = choose(state, heuristic, union, graph=graph).variable
    first = next(c for c in comps if picked in c)
    rest = sorted((c for c in comps if c is not first), key=min)
    return [first] + rest


# -- shared engine plumbing ----------------------------------------------


class _Cutoff:
    """Tracks certified full solutions against an optional limit."""

    __slots__ = ("limit", "certified", "hit")

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.certified = 0
        self.hit = False

    def note(self, n: int) -> None:
        if n:
            self.certified += n
            if self.limit is not None and self.certified > self.limit:
                self.hit = True


class _Run:
    __slots__ = ("heuristic", "stats", "cutoff", "trace", "hook")

    def __init__(self, heuristic, limit, trace, hook=None):
        self.heuristic = heuristic
        self.stats = SearchStats()
        self.cutoff = _Cutoff(limit)
        self.trace = trace
        self.hook = hook

    def trace_add(self, parent, kind, label):
        if self.trace is None:
            return None
        return self.trace.add(parent, kind, label)


def _enter_node(state: ProblemState, depth: int, run: _Run) -> StateStatus:
    status = state.propagate()
    run.stats.nodes += 1
    if depth > run.stats.max_depth:
        run.stats.max_depth = depth
    return status


def _prepare(root: ProblemState) -> ProblemState:
    state = root.clone()
    state.counters = PropagationCounters()
    return state


def _finish(run: _Run, state: ProblemState, t0: float) -> None:
    run.stats.wall_time = time.perf_counter() - t0
    run.stats.propagations = state.counters.propagations


# -- depth-first counting -------------------------------------------------


def dfs_count(root: ProblemState, heuristic: Heuristic = DEFAULT_HEURISTIC,
              limit: Optional[int] = None,
              trace: Optional[SearchTrace] = None) -> CountResult:
    """Count all solutions by plain depth-first search."""
    run = _Run(heuristic, limit, trace)
    state = _prepare(root)
    t0 = time.perf_counter()
    count = _dfs(state, 0, run, None, "root")
    _finish(run, state, t0)
    if run.cutoff.hit:
        return CountResult(run.cutoff.certified, False, run.stats)
    return CountResult(count, True, run.stats)


def _dfs(state: ProblemState, depth: int, run: _Run, tparent, tlabel) -> int:
    if run.cutoff.hit:
        return 0
    status = _enter_node(state, depth, run)
    if status is StateStatus.FAILED:
        run.stats.fails += 1
        run.trace_add(tparent, "fail", tlabel)
        return 0
    if status is StateStatus.SOLVED:
        run.stats.solutions_found += 1
        run.cutoff.note(1)
        run.trace_add(tparent, "solution", tlabel)
        return 1
    run.stats.choice_nodes += 1
    me = run.trace_add(tparent, "choice", tlabel)
    x, v = choose(state, run.heuristic, range(state.num_vars))
    left = state.clone()
    left.tell_eq(x, v)
    total = _dfs(left, depth + 1, run, me, f"x{x}={v}")
    if run.cutoff.hit:
        return total
    right = state.clone()
    right.tell_neq(x, v)
    total += _dfs(right, depth + 1, run, me, f"x{x}!={v}")
    return total


def dfs_enumerate(root: ProblemState, heuristic: Heuristic = DEFAULT_HEURISTIC,
                  max_solutions: int = 10 ** 6) -> tuple[list[dict[int, int]], bool, SearchStats]:
    """Collect up to ``max_solutions`` full assignments depth-first.

    The returned flag is True only when the list is known to be the whole
    solution set.
    """
    run = _Run(heuristic, None, None)
    state = _prepare(root)
    out: list[dict[int, int]] = []
    stopped = False

    def rec(st: ProblemState, depth: int) -> None:
        nonlocal stopped
        if stopped:
            return
        status = _enter_node(st, depth, run)
        if status is StateStatus.FAILED:
            run.stats.fails += 1
            return
        if status is StateStatus.SOLVED:
            run.stats.solutions_found += 1
            out.append(st.solution())
            if len(out) >= max_solutions:
                stopped = True
            return
        run.stats.choice_nodes += 1
        x, v = choose(st, run.heuristic, range(st.num_vars))
        left = st.clone()
        left.tell_eq(x, v)
        rec(left, depth + 1)
        right = st.clone()
        right.tell_neq(x, v)
        rec(right, depth + 1)

    t0 = time.perf_counter()
    rec(state, 0)
    _finish(run, state, t0)
    return out, not stopped, run.stats


# -- decomposing counting --------------------------------------------------


def dds_count(root: ProblemState, heuristic: Heuristic = DEFAULT_HEURISTIC,
              limit: Optional[int] = None,
              trace: Optional[SearchTrace] = None,
              decompose_hook: Optional[Callable] = None) -> CountResult:
    """Count all solutions, decomposing into independent partial problems
    whenever the constraint graph falls apart.

    ``decompose_hook(state, parts)`` is called at every decomposition with
    the propagated state and the variable partition (diagnostics hook; do
    not mutate the state).
    """
    run = _Run(heuristic, limit, trace, decompose_hook)
    state = _prepare(root)
    t0 = time.perf_counter()
    count = _dds(state, frozenset(range(state.num_vars)), 1, 0, run, None, "root")
    _finish(run, state, t0)
    if run.cutoff.hit:
        return CountResult(run.cutoff.certified, False, run.stats)
    return CountResult(count, True, run.stats)


def _dds(state: ProblemState, scope, mult: int, depth: int, run: _Run,
         tparent, tlabel) -> int:
    if run.cutoff.hit:
        return 0
    status = _enter_node(state, depth, run)
    if status is StateStatus.FAILED:
        run.stats.fails += 1
        run.trace_add(tparent, "fail", tlabel)
        return 0
    # a partial problem is done once its own variables are assigned
    if all(state.is_assigned(x) for x in scope):
        run.stats.solutions_found += 1
        run.cutoff.note(mult)
        run.trace_add(tparent, "solution", tlabel)
        return 1
    analysis = decompose_analysis(state, scope)
    factor = free_factor(state, analysis.isolated)
    if not analysis.linked:
        # only unconstrained variables left: every combination extends
        run.stats.solutions_found += 1
        run.cutoff.note(mult * factor)
        run.trace_add(tparent, "solution", tlabel)
        return factor
    if len(analysis.linked) >= 2:
        run.stats.decomposition_nodes += 1
        me = run.trace_add(tparent, "decomposition", tlabel)
        if run.hook is not None:
            parts = [set(c) for c in analysis.linked]
            parts[0] |= set(analysis.isolated) | set(analysis.assigned)
            run.hook(state, parts)
        ordered = order_components(analysis.linked, state, run.heuristic,
                                   graph=analysis.graph)
        total = factor
        last = len(ordered) - 1
        for i, comp in enumerate(ordered):
            child_mult = mult * total if i == last else 0
            total *= _dds(state.clone(), comp, child_mult, depth + 1, run,
                          me, f"part{i}")
            if total == 0 or run.cutoff.hit:
                break
        return total
    comp = analysis.linked[0]
    run.stats.choice_nodes += 1
    me = run.trace_add(tparent, "choice", tlabel)
    x, v = choose(state, run.heuristic, comp, graph=analysis.graph)
    left = state.clone()
    left.tell_eq(x, v)
    lc = _dds(left, comp, mult * factor, depth + 1, run, me, f"x{x}={v}")
    if run.cutoff.hit:
        return factor * lc
    right = state.clone()
    right.tell_neq(x, v)
    rc = _dds(right, comp, mult * factor, depth + 1, run, me, f"x{x}!={v}")
    return factor * (lc + rc)


# -- solution trees ---------------------------------------------------------


def dds_tree(root: ProblemState, heuristic: Heuristic = DEFAULT_HEURISTIC,
             limit: Optional[int] = None,
             trace: Optional[SearchTrace] = None) -> TreeResult:
    """Build the and/or tree compactly representing the solution set.

    With a cut-off the tree may be truncated (exact=False); truncation only
    ever drops alternatives, never component children of an and-node, so a
    truncated tree still expands to valid full assignments.
    """
    run = _Run(heuristic, limit, trace)
    state = _prepare(root)
    t0 = time.perf_counter()
    tree, _count = _tree(state, frozenset(range(state.num_vars)), 1, 0, run, None, "root")
    _finish(run, state, t0)
    return TreeResult(tree, not run.cutoff.hit, run.stats)


def _free_group(state: ProblemState, x: int) -> tuple[SolutionTree, int]:
    leaves = [Leaf({x: v}) for v in state.domains[x]]
    return Or(leaves), len(leaves)


def _tree(state: ProblemState, scope, mult: int, depth: int, run: _Run,
          tparent, tlabel) -> tuple[SolutionTree, int]:
    if run.cutoff.hit:
        return Or([]), 0
    status = _enter_node(state, depth, run)
    if status is StateStatus.FAILED:
        run.stats.fails += 1
        run.trace_add(tparent, "fail", tlabel)
        return Or([]), 0
    fixed = {x: state.value(x) for x in sorted(scope) if state.is_assigned(x)}
    if len(fixed) == len(scope):
        run.stats.solutions_found += 1
        run.cutoff.note(mult)
        run.trace_add(tparent, "solution", tlabel)
        return Leaf(fixed), 1
    analysis = decompose_analysis(state, scope)
    free_groups = []
    factor = 1
    for x in analysis.isolated:
        g, n = _free_group(state, x)
        free_groups.append(g)
        factor *= n
    if not analysis.linked:
        run.stats.solutions_found += 1
        run.cutoff.note(mult * factor)
        run.trace_add(tparent, "solution", tlabel)
        return And(free_groups, fixed), factor
    if len(analysis.linked) >= 2:
        run.stats.decomposition_nodes += 1
        me = run.trace_add(tparent, "decomposition", tlabel)
        ordered = order_components(analysis.linked, state, run.heuristic,
                                   graph=analysis.graph)
        children = []
        total = factor
        last = len(ordered) - 1
        for i, comp in enumerate(ordered):
            child_mult = mult * total if i == last else 0
            sub, cnt = _tree(state.clone(), comp, child_mult, depth + 1, run,
                             me, f"part{i}")
            children.append(sub)
            total *= cnt
            if total == 0:
                return Or([]), 0
            if run.cutoff.hit:
                break
        return And(children + free_groups, fixed), total
    comp = analysis.linked[0]
    run.stats.choice_nodes += 1
    me = run.trace_add(tparent, "choice", tlabel)
    x, v = choose(state, run.heuristic, comp, graph=analysis.graph)
    left = state.clone()
    left.tell_eq(x, v)
    branches = []
    lt, lc = _tree(left, comp, mult * factor, depth + 1, run, me, f"x{x}={v}")
    if lc:
        branches.append(lt)
    count = lc
    if not run.cutoff.hit:
        right = state.clone()
        right.tell_neq(x, v)
        rt, rc = _tree(right, comp, mult * factor, depth + 1, run, me, f"x{x}!={v}")
        if rc:
            branches.append(rt)
        count += rc
    core: SolutionTree = branches[0] if len(branches) == 1 else Or(branches)
    if fixed or free_groups:
        return And([core] + free_groups, fixed), count * factor
    return core, count * factor


def tree_count(tree: SolutionTree) -> int:
    """Solutions represented: products at and-nodes, sums at or-nodes."""
    if isinstance(tree, Leaf):
        return 1
    if isinstance(tree, Or):
        return sum(tree_count(c) for c in tree.children)
    return prod(tree_count(c) for c in tree.children)


def tree_expand(tree: SolutionTree, max_solutions: int) -> list[dict[int, int]]:
    """First ``max_solutions`` full assignments, in deterministic order
    (alternatives concatenated, and-children combined with the last child
    varying fastest)."""
    out: list[dict[int, int]] = []
    for a in _expand(tree):
        if len(out) >= max_solutions:
            break
        out.append(a)
    return out


def _expand(tree: SolutionTree):
    if isinstance(tree, Leaf):
        yield dict(tree.assignment)
        return
    if isinstance(tree, Or):
        for child in tree.children:
            yield from _expand(child)
        return

    children = tree.children

    def rec(i: int, acc: dict):
        if i == len(children):
            yield {**tree.fixed, **acc}
            return
        for part in _expand(children[i]):
            yield from rec(i + 1, {**acc, **part})

    yield from rec(0, {})
