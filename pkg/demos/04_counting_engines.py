"""Counting engines compared, solution trees, and DOT traces.

Plain depth-first search re-solves independent subproblems under every
branch; the decomposing engine solves each once and multiplies.
"""
import itertools

from fdsolve import (Neq, SearchTrace, dds_count, dds_tree, dfs_count,
                     new_problem, trace_dot, tree_count, tree_expand)


def intro():
    state = new_problem([{3, 5}, {3, 4}, {1, 2}, {1, 2}])
    for i, j in itertools.combinations(range(4), 2):
        state.post(Neq(i, j))
    return state


dfs = dfs_count(intro())
dds = dds_count(intro())
print("plain DFS:       count", dfs.count, "-", dfs.stats.choice_nodes,
      "choice nodes,", dfs.stats.nodes, "nodes")
print("decomposing:     count", dds.count, "-", dds.stats.choice_nodes,
      "choice nodes +", dds.stats.decomposition_nodes,
      "decomposition node,", dds.stats.nodes, "nodes\n")

result = dds_tree(intro())
print("the solution tree multiplies partial solutions instead of")
print("enumerating their combinations:")
print(" ", result.tree)
print("  tree_count:", tree_count(result.tree))
print("  expanded:", tree_expand(result.tree, 3), "... and 3 more\n")

trace = SearchTrace()
dds_count(intro(), trace=trace)
print("a trace renders to DOT (squares-in-circles mark decompositions):")
print(trace_dot(trace))
