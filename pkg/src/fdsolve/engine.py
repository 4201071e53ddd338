"""Problem state: integer domains, a propagator store, and the fixpoint loop.

A ``ProblemState`` owns one array of finite integer domains plus the
propagators posted on them.  ``propagate`` runs queued propagators to a
mutual fixpoint and drops entailed ones from the store, so later graph
reflection only sees constraints that can still act.  States are cloned
before branching; a clone shares nothing mutable with the original except
the run-level statistics sink.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .propagators import PropagationResult


class StateStatus(enum.Enum):
    FAILED = "failed"
    SOLVED = "solved"
    BRANCHABLE = "branchable"


@dataclass
class PropagationCounters:
    """Run-level counters shared by every clone in one search run."""

    propagations: int = 0
    domain_events: int = 0


class Domain:
    """Finite set of integers.

    May be empty only transiently: emptying a domain marks the owning
    state failed.  Mutation goes through the state's API so domain events
    are recorded; readers use ``values`` (the live set, do not mutate) or
    sorted iteration.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Iterable[int]):
        self._values = {int(v) for v in values}

    @property
    def values(self) -> set[int]:
        return self._values

    def __contains__(self, v: int) -> bool:
        return v in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self):
        return iter(sorted(self._values))

    def min(self) -> int:
        return min(self._values)

    def max(self) -> int:
        return max(self._values)

    def is_singleton(self) -> bool:
        return len(self._values) == 1

    def value(self) -> int:
        """The single remaining value; only meaningful when assigned."""
        (v,) = self._values
        return v

    def copy(self) -> "Domain":
        d = Domain.__new__(Domain)
        d._values = set(self._values)
        return d

    def __repr__(self) -> str:
        return f"Domain({sorted(self._values)})"


class ProblemState:
    """Variables with finite domains plus the active propagator store."""

    __slots__ = ("domains", "propagators", "counters",
                 "_subs", "_queue", "_queued", "_failed", "_next_handle",
                 "_changed")

    def __init__(self, domains: Iterable[Iterable[int]]):
        self.domains: list[Domain] = [Domain(d) for d in domains]
        self.propagators: dict[int, object] = {}
        self._subs: list[list[int]] = [[] for _ in self.domains]
        self._queue: deque[int] = deque()
        self._queued: set[int] = set()
        self._failed = any(len(d) == 0 for d in self.domains)
        self._next_handle = 0
        self._changed: set[int] = set()
        self.counters = PropagationCounters()

    # -- introspection -------------------------------------------------

    @property
    def num_vars(self) -> int:
        return len(self.domains)

    @property
    def failed(self) -> bool:
        return self._failed

    def is_assigned(self, x: int) -> bool:
        return len(self.domains[x]) == 1

    def value(self, x: int) -> int:
        return self.domains[x].value()

    def assigned_vars(self) -> list[int]:
        return [x for x in range(self.num_vars) if len(self.domains[x]) == 1]

    def unassigned_vars(self) -> list[int]:
        return [x for x in range(self.num_vars) if len(self.domains[x]) != 1]

    # -- posting -------------------------------------------------------

    def post(self, propagator) -> int:
        """Add a propagator to the store and schedule its first run."""
        for x in propagator.vars:
            if not (0 <= x < self.num_vars):
                raise ValueError(f"unknown variable index {x}")
        handle = self._next_handle
        self._next_handle += 1
        self.propagators[handle] = propagator
        for x in propagator.vars:
            self._subs[x].append(handle)
        self._enqueue(handle)
        return handle

    # -- domain mutation (propagators and branching go through these) ---

    def remove_value(self, x: int, v: int) -> bool:
        d = self.domains[x]._values
        if v in d:
            d.discard(v)
            self._note_change(x, len(d) == 0)
            return True
        return False

    def restrict(self, x: int, allowed: set[int]) -> bool:
        d = self.domains[x]._values
        if d <= allowed:
            return False
        d &= allowed
        self._note_change(x, len(d) == 0)
        return True

    def _note_change(self, x: int, emptied: bool) -> None:
        self.counters.domain_events += 1
        self._changed.add(x)
        if emptied:
            self._failed = True

    # -- branching tells ------------------------------------------------

    def tell_eq(self, x: int, v: int) -> None:
        dom = self.domains[x]
        if dom._values == {v}:
            return
        # telling a value outside the domain empties it; the state then
        # fails at the next propagate
        dom._values = {v} if v in dom._values else set()
        self._note_change(x, len(dom._values) == 0)
        self._wake(x)

    def tell_neq(self, x: int, v: int) -> None:
        if self.remove_value(x, v):
            self._wake(x)

    def _wake(self, x: int) -> None:
        for h in self._subs[x]:
            if h in self.propagators:
                self._enqueue(h)
        self._changed.discard(x)

    def _enqueue(self, h: int) -> None:
        if h not in self._queued:
            self._queue.append(h)
            self._queued.add(h)

    # -- propagation -----------------------------------------------------

    def propagate(self) -> StateStatus:
        """Run queued propagators to mutual fixpoint.

        Entailed propagators leave the store and are never re-executed in
        this state or any clone of it.
        """
        if self._failed:
            self._queue.clear()
            self._queued.clear()
            return StateStatus.FAILED
        while self._queue:
            h = self._queue.popleft()
            self._queued.discard(h)
            prop = self.propagators.get(h)
            if prop is None:
                continue
            self._changed.clear()
            self.counters.propagations += 1
            result = prop.filter(self)
            if result is PropagationResult.FAILED or self._failed:
                self._failed = True
                self._queue.clear()
                self._queued.clear()
                return StateStatus.FAILED
            if result is PropagationResult.ENTAILED:
                del self.propagators[h]
            # each filter call is idempotent, so the running propagator
            # itself is not rescheduled for its own prunings
            for x in self._changed:
                for h2 in self._subs[x]:
                    if h2 != h and h2 in self.propagators:
                        self._enqueue(h2)
            self._changed.clear()
        if all(len(d) == 1 for d in self.domains):
            return StateStatus.SOLVED
        return StateStatus.BRANCHABLE

    # -- snapshots -------------------------------------------------------

    def clone(self) -> "ProblemState":
        """Deep, independent snapshot sharing only the counter sink."""
        new = ProblemState.__new__(ProblemState)
        new.domains = [d.copy() for d in self.domains]
        new.propagators = dict(self.propagators)
        new._subs = [list(s) for s in self._subs]
        new._queue = deque(self._queue)
        new._queued = set(self._queued)
        new._failed = self._failed
        new._next_handle = self._next_handle
        new._changed = set()
        new.counters = self.counters
        return new

    def solution(self) -> dict[int, int]:
        """Total assignment of a solved state."""
        if self._failed or self._queue or any(len(d) != 1 for d in self.domains):
            raise ValueError("solution() requires a solved state")
        return {x: d.value() for x, d in enumerate(self.domains)}


def new_problem(domains: Iterable[Iterable[int]]) -> ProblemState:
    """Fresh state with one variable per input value set and no propagators."""
    return ProblemState(domains)
