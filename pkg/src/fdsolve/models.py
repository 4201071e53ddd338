"""Benchmark model builders and the independent counting oracles.

Two model families: proper graph colorings (one all-different per large
maximal clique, binary inequalities for the remaining edges) and planar
self-avoiding walks on the square lattice (neighbour tables along the
chain plus one global all-different).  The oracles count the same objects
without any propagation: deletion-contraction for colorings, direct walk
enumeration for walks, and plain assignment enumeration for arbitrary
states.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import prod
from typing import Iterable, Optional

from .engine import ProblemState, new_problem
from .propagators import AllDifferent, Neq, Table


# -- undirected graphs ------------------------------------------------------


@dataclass(frozen=True)
class UGraph:
    """Simple undirected graph on nodes 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        object.__setattr__(self, "n", int(n))
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) outside 0..{self.n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def neighbours(self, u: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == u:
                out.add(b)
            elif b == u:
                out.add(a)
        return out


def erdos_renyi(n: int, p: float, seed: int) -> UGraph:
    """Random graph: each of the n(n-1)/2 pairs kept with probability p,
    deterministically from the seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must be in [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return UGraph(n, edges)


def maximal_cliques(g: UGraph) -> list[frozenset[int]]:
    """All maximal cliques, via Bron-Kerbosch with pivoting."""
    neigh = {u: g.neighbours(u) for u in range(g.n)}
    out: list[frozenset[int]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(sorted(p | x), key=lambda u: len(p & neigh[u]))
        for v in sorted(p - neigh[pivot]):
            expand(r | {v}, p & neigh[v], x & neigh[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(range(g.n)), set())
    return sorted(out, key=lambda c: sorted(c))


# -- graph coloring ---------------------------------------------------------


@dataclass(frozen=True)
class ColoringSpec:
    graph: UGraph
    colors: int

    def __post_init__(self):
        if self.colors < 1:
            raise ValueError("need at least one color")


def coloring_plan(g: UGraph) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """Constraint layout of the coloring model: the maximal cliques of size
    greater than two, plus the edges not inside any of them."""
    big = [c for c in maximal_cliques(g) if len(c) > 2]
    covered = set()
    for c in big:
        covered.update((min(u, v), max(u, v))
                       for u, v in itertools.combinations(sorted(c), 2))
    rest = sorted(e for e in g.edges if e not in covered)
    return big, rest


def coloring_model(spec: ColoringSpec) -> ProblemState:
    """One variable per node over 0..k-1; an all-different per maximal
    clique of size > 2, a binary inequality per remaining edge."""
    state = new_problem([range(spec.colors)] * spec.graph.n)
    big, rest = coloring_plan(spec.graph)
    for clique in big:
        state.post(AllDifferent(sorted(clique)))
    for u, v in rest:
        state.post(Neq(u, v))
    return state


def chromatic_oracle(g: UGraph, k: int, max_nodes: int = 12) -> int:
    """Exact number of proper k-colorings by deletion-contraction.

    Independent of the solver; guarded to small graphs.
    """
    if g.n > max_nodes:
        raise ValueError(f"chromatic_oracle limited to {max_nodes} nodes")
    memo: dict = {}

    def falling(n: int) -> int:
        out = 1
        for i in range(n):
            out *= (k - i)
            if out == 0:
                return 0
        return out

    def comps(nodes: frozenset, edges: frozenset) -> list[tuple[frozenset, frozenset]]:
        adj = {u: set() for u in nodes}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        seen: set = set()
        parts = []
        for start in nodes:
            if start in seen:
                continue
            stack = [start]
            comp = set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(adj[u] - comp)
            seen |= comp
            parts.append((frozenset(comp),
                          frozenset(e for e in edges if e[0] in comp)))
        return parts

    def count(nodes: frozenset, edges: frozenset) -> int:
        if not edges:
            return k ** len(nodes)
        key = (nodes, edges)
        if key in memo:
            return memo[key]
        n = len(nodes)
        m = len(edges)
        if m == n * (n - 1) // 2:
            result = falling(n)
        elif m == n - 1:
            parts = comps(nodes, edges)
            if len(parts) == 1:
                # connected with n-1 edges: a tree
                result = k * (k - 1) ** (n - 1) if n else 1
            else:
                result = prod(count(ns, es) for ns, es in parts)
        else:
            parts = comps(nodes, edges)
            if len(parts) > 1:
                result = prod(count(ns, es) for ns, es in parts)
            else:
                u, v = min(edges)
                deleted = frozenset(e for e in edges if e != (u, v))
                # contract v into u
                merged = set()
                for a, b in deleted:
                    a2 = u if a == v else a
                    b2 = u if b == v else b
                    if a2 != b2:
                        merged.add((min(a2, b2), max(a2, b2)))
                result = (count(nodes, deleted)
                          - count(nodes - {v}, frozenset(merged)))
        memo[key] = result
        return result

    nodes = frozenset(range(g.n))
    edges = frozenset(g.edges)
    return count(nodes, edges)


# -- self-avoiding lattice walks ---------------------------------------------


@dataclass(frozen=True)
class WalkSpec:
    """Chain of ``length`` monomers on the square lattice, boxed to
    [-bound, bound]^2 with the first monomer pinned to the origin."""

    length: int
    bound: Optional[int] = None

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("need at least one monomer")
        if self.bound is None:
            object.__setattr__(self, "bound", self.length)
        if self.bound < self.length:
            raise ValueError("box must hold any walk: bound >= length")


def lattice_code(x: int, y: int, bound: int) -> int:
    """Dense integer code of lattice point (x, y) inside the box."""
    side = 2 * bound + 1
    return (x + bound) * side + (y + bound)


def lattice_point(code: int, bound: int) -> tuple[int, int]:
    side = 2 * bound + 1
    return code // side - bound, code % side - bound


def saw_plan(spec: WalkSpec) -> tuple[list[set[int]], set[tuple[int, int]]]:
    """Domains plus the coded 4-neighbourhood step relation."""
    b = spec.bound
    all_points = {lattice_code(x, y, b)
                  for x in range(-b, b + 1) for y in range(-b, b + 1)}
    steps = set()
    for x in range(-b, b + 1):
        for y in range(-b, b + 1):
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                nx, ny = x + dx, y + dy
                if -b <= nx <= b and -b <= ny <= b:
                    steps.add((lattice_code(x, y, b), lattice_code(nx, ny, b)))
    domains = [{lattice_code(0, 0, b)}]
    domains.extend(set(all_points) for _ in range(spec.length - 1))
    return domains, steps


def saw_model(spec: WalkSpec) -> ProblemState:
    """Walk model: neighbour table per consecutive pair, one global
    all-different for self-avoidance."""
    domains, steps = saw_plan(spec)
    state = new_problem(domains)
    for i in range(spec.length - 1):
        state.post(Table((i, i + 1), steps))
    if spec.length >= 2:
        state.post(AllDifferent(range(spec.length)))
    return state


def saw_walk_count(length: int) -> int:
    """Brute-force walk oracle: directly enumerate self-avoiding walks of
    ``length`` monomers (length - 1 steps) from the origin."""
    if length < 1:
        raise ValueError("need at least one monomer")

    def extend(path: list[tuple[int, int]], visited: set) -> int:
        if len(path) == length:
            return 1
        x, y = path[-1]
        total = 0
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if (nx, ny) not in visited:
                visited.add((nx, ny))
                path.append((nx, ny))
                total += extend(path, visited)
                path.pop()
                visited.discard((nx, ny))
        return total

    return extend([(0, 0)], {(0, 0)})


# -- ground-truth assignment enumeration --------------------------------------


def brute_force_count(state: ProblemState, scope=None,
                      max_product: int = 10 ** 7) -> int:
    """Exact count by enumerating assignments and checking each constraint's
    tuple semantics directly; no propagation involved.

    With ``scope`` the count is of the state restricted to those variables:
    constraints crossing the scope boundary are checked by projection
    (some completion of the outside variables must exist).
    """
    if scope is None:
        vars_ = list(range(state.num_vars))
    else:
        vars_ = sorted(scope)
    scope_set = set(vars_)
    size = prod(len(state.domains[x]) for x in vars_)
    if size > max_product:
        raise ValueError(f"assignment space {size} exceeds guard {max_product}")

    inner = []
    crossing = []
    for propagator in state.propagators.values():
        touched = [x for x in propagator.vars if x in scope_set]
        if not touched:
            continue
        if len(touched) == len(propagator.vars):
            inner.append(propagator)
        else:
            crossing.append(propagator)

    cross_cache: list[dict] = [dict() for _ in crossing]

    def cross_ok(ci: int, propagator, values: dict[int, int]) -> bool:
        key = tuple(values[x] for x in propagator.vars if x in scope_set)
        cached = cross_cache[ci].get(key)
        if cached is not None:
            return cached
        outside = [x for x in propagator.vars if x not in scope_set]
        for completion in itertools.product(*(sorted(state.domains[x]) for x in outside)):
            filled = dict(zip(outside, completion))
            tup = [filled[x] if x in filled else values[x] for x in propagator.vars]
            if propagator.satisfied(tup):
                cross_cache[ci][key] = True
                return True
        cross_cache[ci][key] = False
        return False

    count = 0
    domains = [sorted(state.domains[x]) for x in vars_]
    for combo in itertools.product(*domains):
        values = dict(zip(vars_, combo))
        if all(p.satisfied([values[x] for x in p.vars]) for p in inner) and \
           all(cross_ok(ci, p, values) for ci, p in enumerate(crossing)):
            count += 1
    return count
