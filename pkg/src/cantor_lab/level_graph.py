"""The tree relation on words of a fixed length built from a family theta.

For a family ``theta_n`` with ``|theta_n| = n`` the directed relation links
``theta_k 0 w`` to ``theta_k 1 w``.  On words of length n its symmetrization is
a spanning tree, so paths between vertices are unique.
"""

from __future__ import annotations

from collections import deque
from enum import Enum
from typing import Iterator

from .report import PASS, REFUTED, Report
from .words import all_words, s_seq

__all__ = [
    "Theta",
    "related",
    "s_related",
    "neighbours",
    "edges",
    "edge_level",
    "unique_path",
    "dfs_path",
    "is_connected",
    "check_prop18",
    "check_tree",
    "level_ordering",
    "bfs_layers",
]


class Theta(Enum):
    ZEROS = "zeros"
    DENSE = "dense"

    def word(self, n: int) -> str:
        return "0" * n if self is Theta.ZEROS else s_seq(n)

    @classmethod
    def parse(cls, name: str) -> "Theta":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"theta must be 'zeros' or 'dense', got {name!r}") from None


def _check_lengths(e: str, f: str) -> None:
    if len(e) != len(f):
        raise ValueError(f"words of different lengths: {e!r}, {f!r}")


def edge_level(theta: Theta, e: str, f: str) -> int | None:
    """The k with (e, f) = (theta_k 0 w, theta_k 1 w), if any."""
    _check_lengths(e, f)
    diff = [i for i in range(len(e)) if e[i] != f[i]]
    if len(diff) != 1:
        return None
    k = diff[0]
    if e[k] == "0" and e[:k] == theta.word(k):
        return k
    return None


def related(theta: Theta, e: str, f: str) -> bool:
    return e == f or edge_level(theta, e, f) is not None


def s_related(theta: Theta, e: str, f: str) -> bool:
    return related(theta, e, f) or related(theta, f, e)


def neighbours(theta: Theta, e: str) -> Iterator[str]:
    for k in range(len(e)):
        if e[:k] == theta.word(k):
            yield e[:k] + ("1" if e[k] == "0" else "0") + e[k + 1 :]


def edges(theta: Theta, n: int) -> Iterator[tuple[str, str]]:
    for k in range(n):
        t = theta.word(k)
        for w in all_words(n - k - 1):
            yield t + "0" + w, t + "1" + w


def is_connected(theta: Theta, n: int) -> bool:
    start = "0" * n
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for u in neighbours(theta, v):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return len(seen) == 1 << n


def unique_path(theta: Theta, e: str, f: str) -> list[str]:
    """Breadth-first search from e to f in the symmetrized relation."""
    _check_lengths(e, f)
    parent = {e: None}
    queue = deque([e])
    while queue:
        v = queue.popleft()
        if v == f:
            break
        for u in neighbours(theta, v):
            if u not in parent:
                parent[u] = v
                queue.append(u)
    path = [f]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def dfs_path(theta: Theta, e: str, f: str) -> list[str]:
    """Depth-first search; an independent second way to find the path."""
    _check_lengths(e, f)
    stack = [(e, [e])]
    seen = {e}
    while stack:
        v, path = stack.pop()
        if v == f:
            return path
        for u in neighbours(theta, v):
            if u not in seen:
                seen.add(u)
                stack.append((u, path + [u]))
    raise AssertionError("level graph is not connected")


def bfs_layers(theta: Theta, root: str) -> dict[str, int]:
    dist = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in neighbours(theta, v):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def check_tree(theta: Theta, n: int) -> Report:
    """Edge count 2^n - 1 and connectivity, so the symmetrized graph is a tree."""
    params = {"theta": theta.value, "n": n}
    edge_count = sum(1 for _ in edges(theta, n))
    if edge_count != (1 << n) - 1:
        return Report("graph.tree", REFUTED, params, {"edges": edge_count})
    if not is_connected(theta, n):
        return Report("graph.tree", REFUTED, params, {"reason": "disconnected"})
    return Report("graph.tree", PASS, params, {"edges": edge_count})


def check_prop18(theta: Theta, n: int) -> Report:
    """Connectivity, acyclicity and the single change of the top differing coordinate."""
    params = {"theta": theta.value, "n": n}
    edge_count = sum(1 for _ in edges(theta, n))
    if edge_count != (1 << n) - 1:
        return Report("graph.prop18", REFUTED, params, {"reason": "edge count", "edges": edge_count})
    if not is_connected(theta, n):
        return Report("graph.prop18", REFUTED, params, {"reason": "disconnected"})
    words = list(all_words(n))
    for e in words:
        # one BFS tree per source gives every path out of e
        parent = {e: None}
        queue = deque([e])
        while queue:
            v = queue.popleft()
            for u in neighbours(theta, v):
                if u not in parent:
                    parent[u] = v
                    queue.append(u)
        for f in words:
            if f == e:
                continue
            top = max(i for i in range(n) if e[i] != f[i])
            changes = []
            v = f
            while parent[v] is not None:
                u = parent[v]
                changes.append(next(i for i in range(n) if u[i] != v[i]))
                v = u
            if changes.count(top) != 1 or max(changes) != top:
                return Report(
                    "graph.prop18",
                    REFUTED,
                    params,
                    {"reason": "top coordinate", "pair": [e, f], "changes": changes[::-1]},
                )
    return Report("graph.prop18", PASS, params, {"edges": edge_count})


def level_ordering(theta: Theta, p: int) -> list[str]:
    """Vertices of level p+1 by distance from theta_p 0, lexicographic within a layer,
    except that theta_p 1 leads the first layer."""
    root = theta.word(p) + "0"
    first = theta.word(p) + "1"
    dist = bfs_layers(theta, root)

    def key(w: str) -> tuple:
        return (dist[w], w != first, w)

    return sorted(dist, key=key)
