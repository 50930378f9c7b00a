"""Weighted clique-minor representation, reduction, and path lifting.

A minor is a graph whose vertex set is partitioned into supernodes (branch
sets), each inducing a connected subgraph, with at least one edge between
every pair of supernodes. Reduction normalizes a minor so every supernode
induces a tree, every tree leaf has an outside neighbour, exactly one edge
joins each supernode pair, and the minimum degree is 3. Every reduction step
records how suppressed degree-2 chains expand back, so any path in the
reduced graph lifts to a path in the parent with the same endpoints and the
same total weight.

Vertex ids are stable across the whole reduction chain: reductions only
delete vertices, never rename them, and supernode labels persist as well.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from collections import deque

from .errors import StructuralError, UnsupportedError
from .group import Element, FiniteAbelianGroup


@dataclass(frozen=True)
class Violation:
    """A named invariant violation with a witness, returned by checkers."""

    kind: str
    witness: object = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.witness!r}"


class TargetGraph:
    """The subcubic pattern to embed: n vertices 0..n-1 and m edges."""

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges):
        canon = []
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise StructuralError(f"target graph has a loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise StructuralError(f"target edge ({u},{v}) out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise StructuralError(f"target graph has a multi-edge {key}")
            seen.add(key)
            canon.append(key)
        canon.sort()
        self.n = int(n)
        self.edges = tuple(canon)
        degs = self.degrees()
        if any(d > 3 for d in degs):
            raise StructuralError("target graph has a vertex of degree > 3")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        degs = [0] * self.n
        for u, v in self.edges:
            degs[u] += 1
            degs[v] += 1
        return degs

    def __repr__(self) -> str:
        return f"TargetGraph(n={self.n}, m={self.m})"


class WeightedMinor:
    """A weighted graph plus a supernode partition.

    adjacency maps vertex -> {neighbour: weight}; the structure is treated
    as immutable after construction, so instances can be shared freely.
    """

    reduced = False

    def __init__(self, group: FiniteAbelianGroup, adjacency, supernodes):
        self.group = group
        self.adjacency = {int(u): dict(nbrs) for u, nbrs in adjacency.items()}
        self.supernodes = {int(k): frozenset(vs) for k, vs in supernodes.items()}
        home = {}
        for label, verts in self.supernodes.items():
            if not verts:
                raise StructuralError(f"supernode {label} is empty")
            for v in verts:
                if v in home:
                    raise StructuralError(f"vertex {v} appears in two supernodes")
                home[v] = label
        if set(home) != set(self.adjacency):
            raise StructuralError("supernode partition does not cover the vertex set")
        self.home = home

    # -- basic accessors -------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def num_supernodes(self) -> int:
        return len(self.supernodes)

    def labels(self) -> list[int]:
        return sorted(self.supernodes)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency.get(u, ())

    def weight(self, u: int, v: int) -> Element:
        try:
            return self.adjacency[u][v]
        except KeyError:
            raise StructuralError(f"no edge ({u},{v})") from None

    def edges(self):
        for u, nbrs in self.adjacency.items():
            for v, w in nbrs.items():
                if u < v:
                    yield u, v, w

    def path_weight(self, path) -> Element:
        total = self.group.zero
        for u, v in zip(path, path[1:]):
            total = self.group.add(total, self.weight(u, v))
        return total

    def cycle_weight(self, cycle) -> Element:
        total = self.path_weight(cycle)
        return self.group.add(total, self.weight(cycle[-1], cycle[0]))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def is_valid_path(self, path) -> bool:
        if not path or len(set(path)) != len(path):
            return False
        return all(self.has_edge(u, v) for u, v in zip(path, path[1:]))


class ReducedMinor(WeightedMinor):
    """A minor in reduced form; adds the unique-crossing-edge index."""

    reduced = True

    def __init__(self, group, adjacency, supernodes):
        super().__init__(group, adjacency, supernodes)
        crossing = {}
        for u, v, _ in self.edges():
            a, b = self.home[u], self.home[v]
            if a == b:
                continue
            key = (min(a, b), max(a, b))
            if key in crossing:
                raise StructuralError(f"two edges between supernodes {key}")
            crossing[key] = (u, v) if a < b else (v, u)
        self.crossing = crossing

    def crossing_edge(self, a: int, b: int) -> tuple[int, int]:
        """The unique edge between supernodes a and b, oriented (in a, in b)."""
        if a == b:
            raise StructuralError("crossing edge needs two distinct supernodes")
        u, v = self.crossing[(min(a, b), max(a, b))]
        return (u, v) if a < b else (v, u)


class LiftMap:
    """Expansion record of one reduction step: child edge -> parent path.

    Edges absent from the map lift to themselves. Vertex ids are stable, so
    the vertex origin map is the identity. Lifting a child path yields a
    parent path with the same endpoints and the same weight, and lift maps
    compose by applying them in sequence.
    """

    __slots__ = ("expansions",)

    def __init__(self, expansions=None):
        # key (min(u,v), max(u,v)) -> vertex tuple from key[0] to key[1]
        self.expansions: dict[tuple[int, int], tuple[int, ...]] = dict(expansions or {})

    def is_identity(self) -> bool:
        return not self.expansions

    def expand_edge(self, u: int, v: int) -> tuple[int, ...]:
        key = (min(u, v), max(u, v))
        path = self.expansions.get(key)
        if path is None:
            return (u, v)
        return path if path[0] == u else tuple(reversed(path))

    def lift_path(self, path) -> tuple[int, ...]:
        if len(path) == 0:
            raise StructuralError("cannot lift an empty path")
        out = [path[0]]
        for u, v in zip(path, path[1:]):
            out.extend(self.expand_edge(u, v)[1:])
        return tuple(out)

    def compose(self, outer: "LiftMap") -> "LiftMap":
        """Map lifting child paths directly into outer's parent graph."""
        flat = {}
        for key, path in self.expansions.items():
            flat[key] = outer.lift_path(path)
        return LiftMap(flat)


def lift_path(lift: LiftMap, path) -> tuple[int, ...]:
    """Expand a child-graph path into the parent graph (same endpoints/weight)."""
    return lift.lift_path(path)


# -- validation ---------------------------------------------------------


def validate_minor(G: WeightedMinor) -> Violation | None:
    """Check the three defining minor invariants; None means ok."""
    for label in G.labels():
        verts = G.supernodes[label]
        seen = {next(iter(verts))}
        queue = deque(seen)
        while queue:
            cur = queue.popleft()
            for nbr in G.adjacency[cur]:
                if nbr in verts and nbr not in seen:
                    seen.add(nbr)
                    queue.append(nbr)
        if seen != verts:
            return Violation("disconnected-supernode", label)

    joined = set()
    for u, v, w in G.edges():
        if not G.group.contains(w):
            return Violation("weight-outside-group", (u, v, w))
        a, b = G.home[u], G.home[v]
        if a != b:
            joined.add((min(a, b), max(a, b)))
    labels = G.labels()
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            if (a, b) not in joined:
                return Violation("missing-supernode-edge", (a, b))
    return None


def validate_reduced(G: ReducedMinor) -> Violation | None:
    """Check the four reduced-minor invariants on top of validate_minor."""
    bad = validate_minor(G)
    if bad is not None:
        return bad
    for label, verts in G.supernodes.items():
        tree_edges = sum(
            1 for u in verts for v in G.adjacency[u] if v in verts and u < v
        )
        if tree_edges != len(verts) - 1:
            return Violation("supernode-not-a-tree", label)
        for u in verts:
            tree_deg = sum(1 for v in G.adjacency[u] if v in verts)
            has_external = any(v not in verts for v in G.adjacency[u])
            if tree_deg <= 1 and not has_external:
                return Violation("leaf-without-external-neighbour", u)
    seen_pairs = set()
    for u, v, _ in G.edges():
        a, b = G.home[u], G.home[v]
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key in seen_pairs:
            return Violation("multiple-edges-between-supernodes", key)
        seen_pairs.add(key)
    for v in G.adjacency:
        if G.degree(v) < 3:
            return Violation("degree-below-three", v)
    return None


# -- reduction ----------------------------------------------------------


def _bfs_tree_edges(adjacency, verts) -> set[tuple[int, int]]:
    """Deterministic BFS spanning tree of the induced subgraph on verts."""
    root = min(verts)
    seen = {root}
    queue = deque([root])
    tree = set()
    while queue:
        cur = queue.popleft()
        for nbr in sorted(adjacency[cur]):
            if nbr in verts and nbr not in seen:
                seen.add(nbr)
                tree.add((min(cur, nbr), max(cur, nbr)))
                queue.append(nbr)
    if seen != set(verts):
        raise StructuralError("supernode is disconnected; cannot take a spanning tree")
    return tree


def _prune_and_suppress(group, adjacency, supernodes, expansions):
    """Shared fixpoint: drop dead leaves, then splice out degree-2 vertices.

    Mutates adjacency/supernodes/expansions in place. Suppression preserves
    the tree-degree and external-degree of the surviving endpoints, so the
    outer loop converges after at most a couple of rounds; we re-run until
    nothing changes as a guard.
    """
    home = {v: label for label, verts in supernodes.items() for v in verts}

    def delete_vertex(v):
        for nbr in list(adjacency[v]):
            del adjacency[nbr][v]
        del adjacency[v]
        label = home.pop(v)
        supernodes[label] = supernodes[label] - {v}
        if not supernodes[label]:
            raise StructuralError(f"reduction emptied supernode {label}")

    def expand(u, v):
        key = (min(u, v), max(u, v))
        path = expansions.get(key)
        if path is None:
            return (u, v)
        return path if path[0] == u else tuple(reversed(path))

    changed = True
    while changed:
        changed = False
        # leaves of the supernode tree with no outside neighbour
        while True:
            doomed = sorted(
                v
                for v in adjacency
                if sum(1 for n in adjacency[v] if home[n] == home[v]) <= 1
                and not any(home[n] != home[v] for n in adjacency[v])
                and len(supernodes[home[v]]) > 1
            )
            if not doomed:
                break
            changed = True
            for v in doomed:
                if v in adjacency and sum(
                    1 for n in adjacency[v] if home[n] == home[v]
                ) <= 1 and not any(home[n] != home[v] for n in adjacency[v]):
                    delete_vertex(v)
        # splice degree-2 vertices, accumulating weights
        heap = sorted(v for v in adjacency if len(adjacency[v]) == 2)
        heapq.heapify(heap)
        while heap:
            v = heapq.heappop(heap)
            if v not in adjacency or len(adjacency[v]) != 2:
                continue
            changed = True
            u1, u2 = sorted(adjacency[v])
            if u2 in adjacency[u1]:
                raise StructuralError(
                    f"suppressing {v} would create a parallel edge ({u1},{u2})"
                )
            w = group.add(adjacency[v][u1], adjacency[v][u2])
            left = expand(u1, v)
            right = expand(v, u2)
            expansions.pop((min(u1, v), max(u1, v)), None)
            expansions.pop((min(v, u2), max(v, u2)), None)
            delete_vertex(v)
            adjacency[u1][u2] = w
            adjacency[u2][u1] = w
            key = (min(u1, u2), max(u1, u2))
            merged = left + right[1:]
            expansions[key] = merged if key[0] == u1 else tuple(reversed(merged))
            for u in (u1, u2):
                if len(adjacency[u]) == 2:
                    heapq.heappush(heap, u)


def reduce(G: WeightedMinor) -> tuple[ReducedMinor, LiftMap]:
    """Reduce a valid minor: spanning trees, one crossing edge per pair,
    leaf pruning, then degree-2 suppression, all with deterministic
    tie-breaking. Returns the reduced minor and the lift map back to G.
    """
    if G.num_supernodes < 4:
        raise UnsupportedError("reduction requires at least 4 supernodes")
    bad = validate_minor(G)
    if bad is not None:
        raise StructuralError(f"not a valid weighted minor ({bad})")

    adjacency = {u: dict(nbrs) for u, nbrs in G.adjacency.items()}
    supernodes = dict(G.supernodes)

    # replace each supernode subgraph by its BFS spanning tree
    for label, verts in supernodes.items():
        tree = _bfs_tree_edges(adjacency, verts)
        for u in verts:
            for v in list(adjacency[u]):
                if v in verts and (min(u, v), max(u, v)) not in tree:
                    del adjacency[u][v]
                    del adjacency[v][u]

    # keep only the lexicographically smallest edge between each pair
    by_pair: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u in adjacency:
        for v in adjacency[u]:
            if u < v and G.home[u] != G.home[v]:
                a, b = G.home[u], G.home[v]
                by_pair.setdefault((min(a, b), max(a, b)), []).append((u, v))
    for pair, edges in by_pair.items():
        edges.sort()
        for u, v in edges[1:]:
            del adjacency[u][v]
            del adjacency[v][u]

    expansions: dict[tuple[int, int], tuple[int, ...]] = {}
    _prune_and_suppress(G.group, adjacency, supernodes, expansions)

    reduced = ReducedMinor(G.group, adjacency, supernodes)
    bad = validate_reduced(reduced)
    if bad is not None:
        raise StructuralError(f"reduction produced an invalid minor ({bad})")
    return reduced, LiftMap(expansions)


def delete_and_reduce(
    G: ReducedMinor, doomed
) -> tuple[ReducedMinor, LiftMap]:
    """Remove whole supernodes and re-reduce the remainder.

    Realizes the reduced-subminor relation; the returned lift map expands
    paths of the child back into G, and supernode labels are preserved.
    """
    doomed = set(doomed)
    unknown = doomed - set(G.supernodes)
    if unknown:
        raise StructuralError(f"unknown supernode labels {sorted(unknown)}")
    if not doomed:
        return G, LiftMap()
    if G.num_supernodes - len(doomed) < 4:
        raise UnsupportedError("fewer than 4 supernodes would remain")

    dead_vertices = set().union(*(G.supernodes[d] for d in doomed))
    adjacency = {
        u: {v: w for v, w in nbrs.items() if v not in dead_vertices}
        for u, nbrs in G.adjacency.items()
        if u not in dead_vertices
    }
    supernodes = {k: vs for k, vs in G.supernodes.items() if k not in doomed}

    expansions: dict[tuple[int, int], tuple[int, ...]] = {}
    _prune_and_suppress(G.group, adjacency, supernodes, expansions)

    child = ReducedMinor(G.group, adjacency, supernodes)
    bad = validate_reduced(child)
    if bad is not None:
        raise StructuralError(f"deletion produced an invalid minor ({bad})")
    return child, LiftMap(expansions)


# -- tree navigation ----------------------------------------------------


def tree_path(G: ReducedMinor, u: int, v: int, allowed) -> tuple[int, ...]:
    """The unique path between u and v inside the union of one or two
    supernodes (two trees plus their single crossing edge form a tree)."""
    allowed = set(allowed)
    verts = set().union(*(G.supernodes[a] for a in allowed))
    if u not in verts or v not in verts:
        raise StructuralError(f"endpoints {u},{v} not inside supernodes {sorted(allowed)}")
    if u == v:
        return (u,)
    parent = {u: None}
    queue = deque([u])
    while queue:
        cur = queue.popleft()
        if cur == v:
            break
        for nbr in sorted(G.adjacency[cur]):
            if nbr in verts and nbr not in parent:
                parent[nbr] = cur
                queue.append(nbr)
    if v not in parent:
        raise StructuralError(f"no path between {u} and {v} inside {sorted(allowed)}")
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    path.reverse()
    return tuple(path)


def tree_path_to_set(G: ReducedMinor, start: int, targets, allowed) -> tuple[int, ...]:
    """Shortest (unique) path from start to the nearest vertex of targets,
    restricted to the given supernode union; hits targets only at its end."""
    allowed = set(allowed)
    verts = set().union(*(G.supernodes[a] for a in allowed))
    targets = set(targets) & verts
    if start not in verts:
        raise StructuralError(f"start {start} outside supernodes {sorted(allowed)}")
    if not targets:
        raise StructuralError("no target vertices inside the allowed supernodes")
    if start in targets:
        return (start,)
    parent = {start: None}
    queue = deque([start])
    hit = None
    while queue and hit is None:
        cur = queue.popleft()
        for nbr in sorted(G.adjacency[cur]):
            if nbr in verts and nbr not in parent:
                parent[nbr] = cur
                if nbr in targets:
                    hit = nbr
                    break
                queue.append(nbr)
    if hit is None:
        raise StructuralError("targets unreachable inside the allowed supernodes")
    path = [hit]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return tuple(path)


def central_vertex(G: ReducedMinor, label: int, v1: int, v2: int, v3: int) -> int:
    """The vertex of the supernode tree joined to v1, v2, v3 by internally
    disjoint (possibly empty) paths: v3 if it lies on the v1-v2 path, else
    the first vertex of the v3-v2 path lying on it."""
    verts = G.supernodes[label]
    for v in (v1, v2, v3):
        if v not in verts:
            raise StructuralError(f"vertex {v} not in supernode {label}")
    p12 = tree_path(G, v1, v2, (label,))
    if v3 in p12:
        return v3
    on_p12 = set(p12)
    for v in tree_path(G, v3, v2, (label,)):
        if v in on_p12:
            return v
    raise StructuralError("tree paths failed to meet; supernode is not a tree")
