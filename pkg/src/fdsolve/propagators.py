"""Constraint propagators: filtering, entailment detection, and scope splitting.

Each constraint class plays three roles:

* ``filter(state)`` narrows domains through the state's mutation API and
  reports ``FAILED`` / ``ENTAILED`` / ``STABLE``.
* ``satisfied(values)`` checks one full tuple against the constraint's
  declarative semantics.  This path never touches the filtering code, so
  brute-force oracles built on it stay independent of propagation.
* ``hyperedges(state)`` reports the constraint's scope split into the
  finest fragments its structure currently justifies, restricted to
  unassigned variables.  The fragments partition the unassigned scope;
  the graph layer drops fragments smaller than two variables.

Constraint instances are immutable: clones of a problem state share them.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class PropagationResult(enum.Enum):
    FAILED = "failed"
    ENTAILED = "entailed"
    STABLE = "stable"


FAILED = PropagationResult.FAILED
ENTAILED = PropagationResult.ENTAILED
STABLE = PropagationResult.STABLE

EQ = "eq"
LEQ = "leq"


def _check_distinct(vars: Sequence[int], what: str) -> tuple[int, ...]:
    vs = tuple(int(v) for v in vars)
    if len(set(vs)) != len(vs):
        raise ValueError(f"{what}: variables must be pairwise distinct, got {vs}")
    if any(v < 0 for v in vs):
        raise ValueError(f"{what}: negative variable index in {vs}")
    return vs


def _unassigned(state, vars: Iterable[int]) -> list[int]:
    return [x for x in vars if len(state.domains[x]) != 1]


@dataclass(frozen=True, eq=True)
class Neq:
    """Binary inequality x != y."""

    x: int
    y: int

    def __post_init__(self):
        _check_distinct((self.x, self.y), "Neq")

    @property
    def vars(self) -> tuple[int, ...]:
        return (self.x, self.y)

    def filter(self, state) -> PropagationResult:
        dx = state.domains[self.x]
        dy = state.domains[self.y]
        if len(dx) == 1 and len(dy) == 1:
            return FAILED if dx.value() == dy.value() else ENTAILED
        if len(dx) == 1:
            state.remove_value(self.y, dx.value())
        elif len(dy) == 1:
            state.remove_value(self.x, dy.value())
        if state.failed:
            return FAILED
        if dx.values.isdisjoint(dy.values):
            return ENTAILED
        return STABLE

    def satisfied(self, values: Sequence[int]) -> bool:
        return values[0] != values[1]

    def hyperedges(self, state) -> list[frozenset[int]]:
        free = _unassigned(state, self.vars)
        return [frozenset(free)] if free else []


@dataclass(frozen=True, eq=True)
class Linear:
    """sum(coeffs[i] * vars[i]) == rhs  (rel=EQ)  or  <= rhs  (rel=LEQ).

    Filtering is bounds consistency; the scope never splits because every
    variable functionally depends on all others.
    """

    coeffs: tuple[int, ...]
    vars: tuple[int, ...]
    rel: str
    rhs: int

    def __post_init__(self):
        vs = _check_distinct(self.vars, "Linear")
        object.__setattr__(self, "vars", vs)
        cs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if len(cs) != len(vs) or not vs:
            raise ValueError("Linear: need matching non-empty coeffs/vars")
        if any(c == 0 for c in cs):
            raise ValueError("Linear: zero coefficient")
        if self.rel not in (EQ, LEQ):
            raise ValueError(f"Linear: bad relation {self.rel!r}")

    def _bounds(self, state) -> tuple[int, int]:
        lo = hi = 0
        for a, x in zip(self.coeffs, self.vars):
            d = state.domains[x]
            if a > 0:
                lo += a * d.min()
                hi += a * d.max()
            else:
                lo += a * d.max()
                hi += a * d.min()
        return lo, hi

    def filter(self, state) -> PropagationResult:
        # loop to a local fixpoint so one filter call is idempotent
        while True:
            lo, hi = self._bounds(state)
            if lo > self.rhs:
                return FAILED
            if self.rel == EQ and hi < self.rhs:
                return FAILED
            changed = False
            for a, x in zip(self.coeffs, self.vars):
                d = state.domains[x]
                if a > 0:
                    term_lo, term_hi = a * d.min(), a * d.max()
                else:
                    term_lo, term_hi = a * d.max(), a * d.min()
                # residual interval for the term a*x
                ub = self.rhs - (lo - term_lo)
                lb = (self.rhs - (hi - term_hi)) if self.rel == EQ else None
                for v in list(d.values):
                    t = a * v
                    if t > ub or (lb is not None and t < lb):
                        if state.remove_value(x, v):
                            changed = True
                if state.failed:
                    return FAILED
            if not changed:
                break
        lo, hi = self._bounds(state)
        if self.rel == LEQ:
            return ENTAILED if hi <= self.rhs else STABLE
        if lo == hi == self.rhs:
            return ENTAILED
        return STABLE

    def satisfied(self, values: Sequence[int]) -> bool:
        total = sum(a * v for a, v in zip(self.coeffs, values))
        return total == self.rhs if self.rel == EQ else total <= self.rhs

    def hyperedges(self, state) -> list[frozenset[int]]:
        free = _unassigned(state, self.vars)
        return [frozenset(free)] if free else []


@dataclass(frozen=True, eq=True)
class AllDifferent:
    """All variables take pairwise different values.

    Filtering enforces generalized arc consistency with the matching
    construction on the variable-value graph: a value survives iff its
    edge lies in some maximum matching.  The same graph's connected
    components give the scope split.
    """

    vars: tuple[int, ...]

    def __init__(self, vars: Sequence[int]):
        vs = _check_distinct(vars, "AllDifferent")
        if len(vs) < 2:
            raise ValueError("AllDifferent: need at least 2 variables")
        object.__setattr__(self, "vars", vs)

    def _max_matching(self, doms) -> tuple[list, dict] | None:
        """Kuhn's augmenting-path matching; None if some variable stays free."""
        n = len(doms)
        match_of_var: list = [None] * n
        match_of_val: dict = {}

        def augment(i: int, seen: set) -> bool:
            for v in doms[i].values:
                if v in seen:
                    continue
                seen.add(v)
                j = match_of_val.get(v)
                if j is None or augment(j, seen):
                    match_of_var[i] = v
                    match_of_val[v] = i
                    return True
            return False

        # small domains first: cheaper augmenting on tight instances
        for i in sorted(range(n), key=lambda i: (len(doms[i]), i)):
            if not augment(i, set()):
                return None
        return match_of_var, match_of_val

    def filter(self, state) -> PropagationResult:
        n = len(self.vars)
        doms = [state.domains[x] for x in self.vars]
        matched = self._max_matching(doms)
        if matched is None:
            return FAILED
        match_of_var, match_of_val = matched

        # Régin's filtering.  Digraph: matched edge var->val, unmatched
        # edge val->var.  An unmatched edge survives iff its endpoints
        # share an SCC or its value is reachable from a free value.
        values = sorted({v for d in doms for v in d.values})
        val_id = {v: n + k for k, v in enumerate(values)}
        size = n + len(values)
        succ: list[list[int]] = [[] for _ in range(size)]
        for i in range(n):
            mv = match_of_var[i]
            succ[i].append(val_id[mv])
            for v in doms[i].values:
                if v != mv:
                    succ[val_id[v]].append(i)

        # reachability from free values
        reached = [False] * size
        stack = [val_id[v] for v in values if v not in match_of_val]
        for s in stack:
            reached[s] = True
        while stack:
            u = stack.pop()
            for w in succ[u]:
                if not reached[w]:
                    reached[w] = True
                    stack.append(w)

        scc = _tarjan(succ)

        for i in range(n):
            mv = match_of_var[i]
            for v in list(doms[i].values):
                if v == mv:
                    continue
                vid = val_id[v]
                if scc[i] != scc[vid] and not reached[vid]:
                    state.remove_value(self.vars[i], v)
        if state.failed:
            return FAILED

        if all(len(d) == 1 for d in doms):
            return ENTAILED
        # pairwise disjoint domains entail the constraint as well
        total = sum(len(d) for d in doms)
        union = set().union(*(d.values for d in doms))
        if total == len(union):
            return ENTAILED
        return STABLE

    def satisfied(self, values: Sequence[int]) -> bool:
        return len(set(values)) == len(values)

    def hyperedges(self, state) -> list[frozenset[int]]:
        # connected components of the variable-value graph, reported as
        # variable groups and restricted to unassigned variables
        doms = [state.domains[x] for x in self.vars]
        parent: dict = {}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for i, d in enumerate(doms):
            parent.setdefault(("x", i), ("x", i))
            for v in d.values:
                parent.setdefault(("v", v), ("v", v))
                union(("x", i), ("v", v))

        groups: dict = {}
        for i, x in enumerate(self.vars):
            if len(doms[i]) == 1:
                continue
            groups.setdefault(find(("x", i)), []).append(x)
        return [frozenset(g) for g in sorted(groups.values(), key=min)]


def _tarjan(succ: list[list[int]]) -> list[int]:
    """Iterative Tarjan SCC; returns component id per node."""
    n = len(succ)
    index = [0] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    visited = [False] * n
    counter = itertools.count(1)
    comp_count = 0
    stack: list[int] = []

    for root in range(n):
        if visited[root]:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                visited[node] = True
                index[node] = low[node] = next(counter)
                stack.append(node)
                on_stack[node] = True
            recurse = False
            for k in range(pi, len(succ[node])):
                w = succ[node][k]
                if not visited[w]:
                    work[-1] = (node, k + 1)
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[node] = min(low[node], index[w])
            if recurse:
                continue
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = comp_count
                    if w == node:
                        break
                comp_count += 1
            work.pop()
            if work:
                parent_node = work[-1][0]
                low[parent_node] = min(low[parent_node], low[node])
    return comp


@dataclass(frozen=True, eq=True)
class Table:
    """Extensional constraint: the variables' tuple must be in ``tuples``."""

    vars: tuple[int, ...]
    tuples: frozenset[tuple[int, ...]]

    def __init__(self, vars: Sequence[int], tuples: Iterable[Sequence[int]]):
        vs = _check_distinct(vars, "Table")
        object.__setattr__(self, "vars", vs)
        ts = frozenset(tuple(int(v) for v in t) for t in tuples)
        if any(len(t) != len(vs) for t in ts):
            raise ValueError("Table: tuple arity mismatch")
        object.__setattr__(self, "tuples", ts)

    def filter(self, state) -> PropagationResult:
        doms = [state.domains[x] for x in self.vars]
        support: list[set] = [set() for _ in self.vars]
        valid = 0
        for t in self.tuples:
            if all(t[i] in doms[i] for i in range(len(t))):
                valid += 1
                for i, v in enumerate(t):
                    support[i].add(v)
        if valid == 0:
            return FAILED
        for x, sup in zip(self.vars, support):
            state.restrict(x, sup)
        if state.failed:
            return FAILED
        prod = 1
        for d in doms:
            prod *= len(d)
        return ENTAILED if valid == prod else STABLE

    def satisfied(self, values: Sequence[int]) -> bool:
        return tuple(values) in self.tuples

    def hyperedges(self, state) -> list[frozenset[int]]:
        free = _unassigned(state, self.vars)
        return [frozenset(free)] if free else []


@dataclass(frozen=True, eq=True)
class Dfa:
    """Deterministic finite automaton over integer symbols with a partial
    transition map ``(state, symbol) -> state``."""

    state_count: int
    start: int
    finals: frozenset[int]
    transitions: dict[tuple[int, int], int]

    def __init__(self, state_count: int, start: int, finals: Iterable[int],
                 transitions: dict[tuple[int, int], int]):
        object.__setattr__(self, "state_count", int(state_count))
        object.__setattr__(self, "start", int(start))
        object.__setattr__(self, "finals", frozenset(int(f) for f in finals))
        object.__setattr__(self, "transitions",
                           {(int(q), int(s)): int(r) for (q, s), r in transitions.items()})
        if not (0 <= self.start < self.state_count):
            raise ValueError("Dfa: start state out of range")
        if any(not (0 <= f < self.state_count) for f in self.finals):
            raise ValueError("Dfa: final state out of range")
        for (q, _s), r in self.transitions.items():
            if not (0 <= q < self.state_count and 0 <= r < self.state_count):
                raise ValueError("Dfa: transition state out of range")

    def accepts(self, word: Sequence[int]) -> bool:
        q = self.start
        for s in word:
            q = self.transitions.get((q, s))
            if q is None:
                return False
        return q in self.finals


@dataclass(frozen=True, eq=True)
class Regular:
    """The variables, read as a word, must be accepted by ``dfa``.

    Filtering works on the unfolded automaton: one layer of automaton
    states per position, arcs labelled with domain values, pruned by
    forward/backward reachability.  Layers left with a single live state
    are the points where the scope splits.
    """

    vars: tuple[int, ...]
    dfa: Dfa

    def __init__(self, vars: Sequence[int], dfa: Dfa):
        vs = _check_distinct(vars, "Regular")
        if not vs:
            raise ValueError("Regular: need at least one variable")
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "dfa", dfa)

    def _layers(self, doms):
        """Forward/backward pruned unfolding.

        Returns (alive_states_per_layer, alive_arcs_per_position) where an
        arc is (state, symbol, next_state).
        """
        n = len(doms)
        fwd: list[set[int]] = [set() for _ in range(n + 1)]
        fwd[0].add(self.dfa.start)
        arcs: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        trans = self.dfa.transitions
        for i in range(n):
            nxt = fwd[i + 1]
            for q in fwd[i]:
                for s in doms[i].values:
                    r = trans.get((q, s))
                    if r is not None:
                        arcs[i].append((q, s, r))
                        nxt.add(r)
        alive: list[set[int]] = [set() for _ in range(n + 1)]
        alive[n] = fwd[n] & self.dfa.finals
        alive_arcs: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        for i in range(n - 1, -1, -1):
            keep = alive[i]
            for q, s, r in arcs[i]:
                if r in alive[i + 1]:
                    alive_arcs[i].append((q, s, r))
                    keep.add(q)
        return alive, alive_arcs

    def filter(self, state) -> PropagationResult:
        doms = [state.domains[x] for x in self.vars]
        alive, alive_arcs = self._layers(doms)
        if not alive[len(doms)]:
            return FAILED
        for i, x in enumerate(self.vars):
            state.restrict(x, {s for _q, s, _r in alive_arcs[i]})
        if state.failed:
            return FAILED
        # exact entailment: number of accepted words equals the size of
        # the domain product
        ways = {self.dfa.start: 1}
        for i in range(len(doms)):
            nxt: dict[int, int] = {}
            for q, _s, r in alive_arcs[i]:
                w = ways.get(q)
                if w:
                    nxt[r] = nxt.get(r, 0) + w
            ways = nxt
        accepted = sum(ways.values())
        prod = 1
        for d in doms:
            prod *= len(d)
        return ENTAILED if accepted == prod else STABLE

    def satisfied(self, values: Sequence[int]) -> bool:
        return self.dfa.accepts(values)

    def hyperedges(self, state) -> list[frozenset[int]]:
        doms = [state.domains[x] for x in self.vars]
        n = len(doms)
        alive, _ = self._layers(doms)
        cuts = [i for i in range(1, n) if len(alive[i]) == 1]
        edges = []
        start = 0
        for cut in cuts + [n]:
            run = [self.vars[p] for p in range(start, cut)
                   if len(doms[p]) != 1]
            if run:
                edges.append(frozenset(run))
            start = cut
        return edges


@dataclass(frozen=True, eq=True)
class Slide:
    """One k-ary extensional constraint slid over a variable sequence: each
    window of ``width`` consecutive variables must take a tuple from
    ``tuples``.

    Kept monolithic (not desugared into separate table constraints) so the
    scope can split at positions whose covering windows are all entailed.
    """

    vars: tuple[int, ...]
    width: int
    tuples: frozenset[tuple[int, ...]]

    def __init__(self, vars: Sequence[int], width: int, tuples: Iterable[Sequence[int]]):
        vs = _check_distinct(vars, "Slide")
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "width", int(width))
        ts = frozenset(tuple(int(v) for v in t) for t in tuples)
        object.__setattr__(self, "tuples", ts)
        if not (1 <= self.width <= len(vs)):
            raise ValueError("Slide: window width must be in 1..len(vars)")
        if any(len(t) != self.width for t in ts):
            raise ValueError("Slide: tuple arity mismatch")

    def _window_count(self) -> int:
        return len(self.vars) - self.width + 1

    def _scan_window(self, state, w: int):
        """Supports and valid-tuple count of window w against current domains."""
        doms = [state.domains[self.vars[w + j]] for j in range(self.width)]
        support: list[set] = [set() for _ in range(self.width)]
        valid = 0
        for t in self.tuples:
            if all(t[j] in doms[j] for j in range(self.width)):
                valid += 1
                for j, v in enumerate(t):
                    support[j].add(v)
        prod = 1
        for d in doms:
            prod *= len(d)
        return valid, prod, support

    def filter(self, state) -> PropagationResult:
        m = self._window_count()
        pending = deque(range(m))
        queued = set(pending)
        while pending:
            w = pending.popleft()
            queued.discard(w)
            valid, _prod, support = self._scan_window(state, w)
            if valid == 0:
                return FAILED
            changed_pos = []
            for j in range(self.width):
                if state.restrict(self.vars[w + j], support[j]):
                    changed_pos.append(w + j)
            if state.failed:
                return FAILED
            for p in changed_pos:
                for w2 in range(max(0, p - self.width + 1), min(m - 1, p) + 1):
                    if w2 != w and w2 not in queued:
                        pending.append(w2)
                        queued.add(w2)
        for w in range(m):
            valid, prod, _ = self._scan_window(state, w)
            if valid != prod:
                return STABLE
        return ENTAILED

    def satisfied(self, values: Sequence[int]) -> bool:
        k = self.width
        return all(tuple(values[i:i + k]) in self.tuples
                   for i in range(len(values) - k + 1))

    def hyperedges(self, state) -> list[frozenset[int]]:
        n = len(self.vars)
        m = self._window_count()
        entailed = []
        for w in range(m):
            valid, prod, _ = self._scan_window(state, w)
            entailed.append(valid == prod)
        # a position splits the sequence when every window covering it is
        # entailed; such positions are no longer tied to their neighbours
        def covering(p):
            return range(max(0, p - self.width + 1), min(m - 1, p) + 1)

        split = [all(entailed[w] for w in covering(p)) for p in range(n)]
        doms = [state.domains[x] for x in self.vars]
        edges = []
        run: list[int] = []
        for p in range(n):
            if split[p]:
                if run:
                    edges.append(frozenset(run))
                    run = []
                if len(doms[p]) != 1:
                    edges.append(frozenset([self.vars[p]]))
            else:
                if len(doms[p]) != 1:
                    run.append(self.vars[p])
        if run:
            edges.append(frozenset(run))
        return edges
