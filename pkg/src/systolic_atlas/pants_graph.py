"""Trivalent trees, pants gluing graphs and combinatorial curve paths.

A tree surface replaces every tree vertex by a pair of pants made of two
regular right-angled hexagons and glues pants along tree edges.  A leaf's two
free cuffs are glued to each other, turning it into a one-holed torus (a
*leaf handle*).  Curves are recorded only by the cuff edges they cross.
"""
from collections import deque
from dataclasses import dataclass
import json
import math

from .holonomy import CuffGluing, FNSurface

ARCCOSH2 = math.acosh(2.0)
TREE_CUFF = 2.0 * ARCCOSH2


class GraphError(ValueError):
    """Invalid combinatorial input (bad tree parameter, malformed path, ...)."""


@dataclass(frozen=True)
class TrivalentTree:
    """Tree stored as a parent array; vertex 0 is the centre ``O``."""

    parent: tuple
    center: int = 0

    def __post_init__(self):
        n = len(self.parent)
        if n == 0:
            raise GraphError("empty tree")
        if self.parent[self.center] != -1:
            raise GraphError("centre must be the root")
        for v, p in enumerate(self.parent):
            if v != self.center and not (0 <= p < n and p != v):
                raise GraphError(f"vertex {v} has invalid parent {p}")
        for v, deg in enumerate(self.degrees()):
            if deg not in (1, 3):
                raise GraphError(f"vertex {v} has degree {deg}; trivalent trees need 1 or 3")
        # acyclic: every vertex must reach the centre
        for v in range(n):
            seen, u = 0, v
            while u != self.center:
                u = self.parent[u]
                seen += 1
                if seen > n:
                    raise GraphError("parent array contains a cycle")

    @property
    def n_vertices(self):
        return len(self.parent)

    def children(self, v):
        return [u for u, p in enumerate(self.parent) if p == v]

    def degrees(self):
        deg = [0] * len(self.parent)
        for v, p in enumerate(self.parent):
            if p >= 0:
                deg[v] += 1
                deg[p] += 1
        return deg

    @property
    def leaves(self):
        return [v for v, d in enumerate(self.degrees()) if d == 1]

    def edges(self):
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]

    def distances_from(self, src):
        adj = [[] for _ in self.parent]
        for a, b in self.edges():
            adj[a].append(b)
            adj[b].append(a)
        dist = [-1] * len(self.parent)
        dist[src] = 0
        todo = deque([src])
        while todo:
            v = todo.popleft()
            for u in adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    todo.append(u)
        return dist

    def center_leaf_distance(self):
        d = self.distances_from(self.center)
        return min(d[v] for v in self.leaves)

    def contains_joined_tree(self, n):
        """Whether the first ``3(2^n - 1) + 1`` vertices form the joined tree of depth ``n``."""
        ref = build_joined_tree(n)
        m = ref.n_vertices
        return m <= self.n_vertices and tuple(self.parent[:m]) == ref.parent

    def to_dict(self):
        return {"parent": list(self.parent), "center": self.center}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["parent"]), d.get("center", 0))


def build_joined_tree(n):
    """Three full binary trees of depth ``n`` joined at their roots by the centre.

    Vertices are numbered breadth-first from the centre, children left to right.
    """
    if int(n) != n or n < 1:
        raise GraphError(f"tree depth n must be an integer >= 1, got {n!r}")
    n = int(n)
    parent = [-1]
    level = []
    for _ in range(3):
        parent.append(0)
        level.append(len(parent) - 1)
    for _ in range(n - 1):
        nxt = []
        for v in level:
            for _ in range(2):
                parent.append(v)
                nxt.append(len(parent) - 1)
        level = nxt
    return TrivalentTree(tuple(parent))


def tree_parameter(g):
    """The ``n`` with ``3 * 2**(n-1) <= g < 3 * 2**n``."""
    if int(g) != g or g < 3:
        raise GraphError(f"genus must be an integer >= 3, got {g!r}")
    n = 1
    while 3 * 2 ** n <= g:
        n += 1
    return n


def build_tree_for_genus(g):
    """Tree with exactly ``g`` leaves containing the joined tree of depth ``n``.

    Leaves of the joined tree are expanded breadth-first, left to right, into
    cherries until the leaf count reaches ``g``.
    """
    n = tree_parameter(g)
    base = build_joined_tree(n)
    parent = list(base.parent)
    extra = int(g) - len(base.leaves)
    for leaf in base.leaves[:extra]:
        parent += [leaf, leaf]
    return TrivalentTree(tuple(parent))


@dataclass(frozen=True)
class CuffEdge:
    pants_a: int
    slot_a: int
    pants_b: int
    slot_b: int
    length: float = TREE_CUFF
    twist: float = 0.0
    handle: bool = False


@dataclass(frozen=True)
class GluingGraph:
    n_pants: int
    edges: tuple
    center: int = 0

    def __post_init__(self):
        used = set()
        for e in self.edges:
            for slot in ((e.pants_a, e.slot_a), (e.pants_b, e.slot_b)):
                if not (0 <= slot[0] < self.n_pants and 0 <= slot[1] < 3):
                    raise GraphError(f"edge refers to missing cuff slot {slot}")
                if slot in used:
                    raise GraphError(f"cuff slot {slot} used twice")
                used.add(slot)
        if self.n_pants and len(used) != 3 * self.n_pants:
            raise GraphError("some cuff slots are unglued")

    @property
    def genus(self):
        return len(self.edges) - self.n_pants + 1

    @property
    def leaf_handles(self):
        return [i for i, e in enumerate(self.edges) if e.handle]

    def to_fn_surface(self):
        lengths = [[None] * 3 for _ in range(self.n_pants)]
        for e in self.edges:
            lengths[e.pants_a][e.slot_a] = e.length
            lengths[e.pants_b][e.slot_b] = e.length
        gl = [CuffGluing(e.pants_a, e.slot_a, e.pants_b, e.slot_b, e.twist) for e in self.edges]
        return FNSurface(tuple(tuple(x) for x in lengths), tuple(gl))

    def pants_distances(self, src):
        adj = [[] for _ in range(self.n_pants)]
        for e in self.edges:
            if e.pants_a != e.pants_b:
                adj[e.pants_a].append(e.pants_b)
                adj[e.pants_b].append(e.pants_a)
        dist = [-1] * self.n_pants
        dist[src] = 0
        todo = deque([src])
        while todo:
            v = todo.popleft()
            for u in adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    todo.append(u)
        return dist

    def to_dict(self):
        return {
            "pants": list(range(self.n_pants)),
            "center": self.center,
            "edges": [
                {
                    "pants": [e.pants_a, e.pants_b],
                    "slots": [e.slot_a, e.slot_b],
                    "length": e.length,
                    "twist": e.twist,
                    "handle": e.handle,
                }
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, d):
        edges = tuple(
            CuffEdge(e["pants"][0], e["slots"][0], e["pants"][1], e["slots"][1], e["length"], e["twist"], e["handle"])
            for e in d["edges"]
        )
        return cls(len(d["pants"]), edges, d.get("center", 0))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def surface_from_tree(tree):
    """Gluing graph of the tree surface: one pants per vertex, one handle per leaf."""
    if not isinstance(tree, TrivalentTree):
        raise GraphError("expected a TrivalentTree")
    if tree.n_vertices < 2:
        raise GraphError("tree has no edges")
    next_slot = [0] * tree.n_vertices
    edges = []

    def slot(v):
        next_slot[v] += 1
        return next_slot[v] - 1

    # parent edges first so each vertex's slot 0 faces its parent
    depth = tree.distances_from(tree.center)
    order = sorted(range(tree.n_vertices), key=lambda v: (depth[v], v))
    for v in order:
        p = tree.parent[v]
        if p >= 0:
            sv = slot(v)
            edges.append((p, v, sv))
    out = []
    for p, v, sv in edges:
        out.append(CuffEdge(p, slot(p), v, sv))
    for v in tree.leaves:
        a, b = slot(v), slot(v)
        out.append(CuffEdge(v, a, v, b, handle=True))
    return GluingGraph(tree.n_vertices, tuple(out), tree.center)


@dataclass(frozen=True)
class CurvePath:
    """Sequence of cuff-edge crossings ``(edge id, direction)``.

    Direction ``+1`` crosses from ``pants_a`` to ``pants_b``.
    """

    crossings: tuple
    closed: bool = True

    def pants_sequence(self, graph):
        if not self.crossings:
            raise GraphError("empty path is not a curve")
        seq = []
        for eid, d in self.crossings:
            if not (0 <= eid < len(graph.edges)) or d not in (1, -1):
                raise GraphError(f"bad crossing {(eid, d)}")
            e = graph.edges[eid]
            src, dst = (e.pants_a, e.pants_b) if d > 0 else (e.pants_b, e.pants_a)
            if seq and seq[-1] != src:
                raise GraphError("consecutive crossings do not share a pants")
            if not seq:
                seq.append(src)
            seq.append(dst)
        if self.closed and seq[0] != seq[-1]:
            raise GraphError("closed path does not end where it starts")
        return seq


def separating_check(graph, path):
    """True when ``path`` is certified separating: it avoids every leaf handle."""
    if not path.closed:
        raise GraphError("separating_check needs a closed path")
    path.pants_sequence(graph)
    handles = set(graph.leaf_handles)
    return not any(eid in handles for eid, _ in path.crossings)


def coverage_check(graph, paths):
    """``(covers_all, missed)``: whether the paths together visit every pants."""
    visited = set()
    for p in paths:
        if not p.closed:
            raise GraphError("coverage_check needs closed paths")
        visited.update(p.pants_sequence(graph))
    missed = frozenset(range(graph.n_pants)) - visited
    return not missed, missed


def handle_loops(graph):
    """One closed path per leaf handle, crossing only that handle."""
    return [CurvePath(((eid, 1),)) for eid in graph.leaf_handles]


def min_length_through_center(graph, center=None):
    """Pants distance from the centre to the nearest leaf, times ``arccosh 2``."""
    center = graph.center if center is None else center
    dist = graph.pants_distances(center)
    leaf_pants = {graph.edges[i].pants_a for i in graph.leaf_handles}
    if not leaf_pants:
        raise GraphError("graph has no leaf handles")
    return min(dist[p] for p in leaf_pants) * ARCCOSH2
