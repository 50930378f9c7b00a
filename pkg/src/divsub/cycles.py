"""Permissible paths and cycles, small-cycle enumeration, triad splits, and
the subgroup-restriction checker.

A path is permissible when every supernode meets it in at most one subpath; a
cycle may have one exceptional supernode met in two disjoint subpaths. In a
reduced minor consecutive supernode visits are forced through the unique
crossing edge and the unique tree path inside each supernode, so a permissible
cycle is determined by its cyclic sequence of supernode visits. Enumeration
therefore walks visit sequences instead of raw edge sets.

The same forcing collapses the restriction check: every permissible cycle on
at most five supernodes splits (along unique two-supernode chord paths) into
triangle cycles plus doubled path weights, so a minor is B-restricted exactly
when all supernode-triangle cycles have weight in B and every edge weight
doubles into B.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ResourceError, SoundnessError, StructuralError
from .group import Element, Subgroup
from .minor import ReducedMinor, Violation, tree_path, tree_path_to_set


@dataclass(frozen=True)
class PermCycle:
    """A permissible cycle as a vertex sequence (first vertex not repeated).

    visits holds the cyclic supernode sequence; exceptional names the one
    supernode met in two disjoint paths, if any.
    """

    vertices: tuple
    visits: tuple
    incident: frozenset
    exceptional: int | None = None

    def __len__(self) -> int:
        return len(self.vertices)


def _runs(G: ReducedMinor, vertices, cyclic: bool):
    """Supernode label -> list of index runs (cyclically contiguous if cyclic)."""
    n = len(vertices)
    runs: dict[int, list[list[int]]] = {}
    start = 0
    if cyclic:
        # rotate so position 0 starts a fresh run (unless the cycle is one supernode)
        first_home = G.home[vertices[0]]
        if all(G.home[v] == first_home for v in vertices):
            return {first_home: [list(range(n))]}
        while G.home[vertices[start - 1]] == G.home[vertices[start]]:
            start -= 1
    idx = start
    count = 0
    while count < n:
        home = G.home[vertices[idx % n]]
        run = []
        while count < n and G.home[vertices[idx % n]] == home:
            run.append(idx % n)
            idx += 1
            count += 1
        runs.setdefault(home, []).append(run)
    return runs


def is_permissible_path(G: ReducedMinor, path) -> bool:
    """True iff every supernode intersects the path in one (or no) subpath."""
    if not G.is_valid_path(path):
        raise StructuralError("not a path in the graph")
    runs = _runs(G, tuple(path), cyclic=False)
    return all(len(r) == 1 for r in runs.values())


def is_permissible_cycle(G: ReducedMinor, cycle) -> bool:
    """True iff at most one supernode meets the cycle in two disjoint paths
    and every other in at most one.

    An exceptional supernode forces incidence with at least five supernodes
    in a reduced minor; cycles claiming one with fewer are rejected.
    """
    cycle = tuple(cycle)
    if len(cycle) < 3 or not G.is_valid_path(cycle) or not G.has_edge(cycle[-1], cycle[0]):
        raise StructuralError("not a cycle in the graph")
    runs = _runs(G, cycle, cyclic=True)
    doubled = [label for label, r in runs.items() if len(r) == 2]
    if any(len(r) > 2 for r in runs.values()) or len(doubled) > 1:
        return False
    if doubled and len(runs) < 5:
        return False
    return True


def _visit_paths(G: ReducedMinor, seq):
    """Vertex runs for each visit of the cyclic supernode sequence, or None
    if the sequence does not give a simple cycle (overlapping revisits)."""
    r = len(seq)
    paths = []
    for t in range(r):
        prev_label = seq[t - 1]
        here = seq[t]
        next_label = seq[(t + 1) % r]
        entry = G.crossing_edge(prev_label, here)[1]
        exit_ = G.crossing_edge(here, next_label)[0]
        paths.append(tree_path(G, entry, exit_, (here,)))
    seen: set = set()
    for p in paths:
        if seen & set(p):
            return None
        seen |= set(p)
    return paths


def _cycle_from_visits(G: ReducedMinor, seq) -> PermCycle | None:
    paths = _visit_paths(G, seq)
    if paths is None:
        return None
    vertices = tuple(v for p in paths for v in p)
    labels = set(seq)
    exceptional = None
    counts = {s: seq.count(s) for s in labels}
    for s, c in counts.items():
        if c == 2:
            exceptional = s
        elif c > 2:
            return None
    return PermCycle(vertices, tuple(seq), frozenset(labels), exceptional)


def triangle_cycle(G: ReducedMinor, a: int, b: int, c: int) -> PermCycle:
    """The unique permissible cycle through three supernodes."""
    cyc = _cycle_from_visits(G, (a, b, c))
    if cyc is None:
        raise SoundnessError("triangle visits cannot overlap in a reduced minor")
    return cyc


def _simple_visit_sequences(subset):
    """Canonical cyclic orders of distinct labels: min label first, oriented."""
    first, *rest = sorted(subset)
    for perm in itertools.permutations(rest):
        if len(perm) < 2 or perm[0] < perm[-1]:
            yield (first,) + perm


def _exceptional_visit_sequences(subset):
    """Canonical T,x,y,T,z,w patterns over a 5-subset (T met twice)."""
    for T in sorted(subset):
        others = sorted(set(subset) - {T})
        for perm in itertools.permutations(others):
            x, y, z, w = perm
            orbit = [(x, y, z, w), (z, w, x, y), (y, x, w, z), (w, z, y, x)]
            if perm == min(orbit):
                yield (T, x, y, T, z, w)


def enumerate_small_permissible_cycles(
    G: ReducedMinor, max_supernodes: int = 5, subset_cycle_cap: int = 10_000
):
    """Yield every permissible cycle on at most max_supernodes supernodes.

    Deterministic order: subset size ascending (triangles first), subsets
    lexicographic, then canonical visit order with simple cycles before
    exceptional ones. The per-subset cap guards against pathological inputs
    and raises rather than truncating silently.
    """
    if max_supernodes < 3:
        raise StructuralError("need max_supernodes >= 3")
    labels = G.labels()
    for size in range(3, min(max_supernodes, len(labels)) + 1):
        for subset in itertools.combinations(labels, size):
            yielded = 0
            seqs = list(_simple_visit_sequences(subset))
            if size == 5:
                seqs.extend(_exceptional_visit_sequences(subset))
            for seq in seqs:
                cyc = _cycle_from_visits(G, seq)
                if cyc is None:
                    continue
                yielded += 1
                if yielded > subset_cycle_cap:
                    raise ResourceError(
                        f"cycle cap {subset_cycle_cap} exceeded on subset {subset}"
                    )
                yield cyc


@dataclass(frozen=True)
class TriadSplit:
    """A cycle split by three access paths from fresh supernodes.

    Q[j] runs from u[j] (the only vertex used in n_supernodes[j]) through
    t_supernodes[j] to the cycle attachment a[j]. The attachments cut the
    cycle into three arcs; x[j] is the weight of the arc avoiding a[j], and
    arcs[j] holds that arc's vertices (cycle-forward orientation). The deltas
    satisfy delta[j] = x[j] + x[j+1] - x[j+2] (indices mod 3).
    """

    cycle: PermCycle
    t_supernodes: tuple
    n_supernodes: tuple
    u: tuple
    q_paths: tuple
    attachments: tuple
    x: tuple
    deltas: tuple
    arcs: tuple


def triad_split(G: ReducedMinor, C: PermCycle) -> TriadSplit:
    """Split a small permissible cycle per the connector construction.

    Chooses the three lowest-index supernodes meeting the cycle in exactly
    one nonempty path, and the three lowest-index supernodes disjoint from
    the cycle; everything else is forced.
    """
    A = G.group
    runs = _runs(G, C.vertices, cyclic=True)
    singles = sorted(label for label, r in runs.items() if len(r) == 1)
    if len(singles) < 3:
        raise StructuralError("cycle has fewer than three singly-visited supernodes")
    t_sel = tuple(singles[:3])
    free = sorted(set(G.supernodes) - C.incident)
    if len(free) < 3:
        raise ResourceError("fewer than three supernodes disjoint from the cycle")
    n_sel = tuple(free[:3])

    us, qs, attach = [], [], []
    for T, N in zip(t_sel, n_sel):
        u, b = G.crossing_edge(N, T)
        run_vertices = {C.vertices[i] for i in runs[T][0]}
        inner = tree_path_to_set(G, b, run_vertices, (T,))
        us.append(u)
        qs.append((u,) + inner)
        attach.append(inner[-1])

    verts = C.vertices
    L = len(verts)
    pos = {attach[j]: verts.index(attach[j]) for j in range(3)}
    order = sorted(range(3), key=lambda j: pos[attach[j]])
    arcs_fwd = []
    for t in range(3):
        p = pos[attach[order[t]]]
        q = pos[attach[order[(t + 1) % 3]]]
        idxs = [p]
        i = p
        while i != q:
            i = (i + 1) % L
            idxs.append(i)
        arcs_fwd.append(tuple(verts[i] for i in idxs))

    arc_for: dict[int, tuple] = {}
    for arc in arcs_fwd:
        ends = {arc[0], arc[-1]}
        avoided = next(j for j in range(3) if attach[j] not in ends)
        arc_for[avoided] = arc

    def arc_weight(arc):
        return G.path_weight(arc)

    x = tuple(arc_weight(arc_for[j]) for j in range(3))
    deltas = tuple(
        A.sub(A.add(x[j], x[(j + 1) % 3]), x[(j + 2) % 3]) for j in range(3)
    )
    return TriadSplit(
        cycle=C,
        t_supernodes=t_sel,
        n_supernodes=n_sel,
        u=tuple(us),
        q_paths=tuple(qs),
        attachments=tuple(attach),
        x=x,
        deltas=deltas,
        arcs=tuple(arc_for[j] for j in range(3)),
    )


# -- restriction checking -------------------------------------------------


class AttachmentWeights:
    """Lazy per-supernode tree-path weights between crossing attachments.

    Supernodes of size one contribute zero; larger ones get one BFS per
    distinct attachment vertex on first use.
    """

    def __init__(self, G: ReducedMinor):
        self.G = G
        self._dist: dict[int, dict[int, dict[int, Element]]] = {}

    def _tables(self, label):
        tables = self._dist.get(label)
        if tables is None:
            G = self.G
            A = G.group
            verts = G.supernodes[label]
            tables = {}
            attach_vertices = {
                G.crossing_edge(label, other)[0]
                for other in G.supernodes
                if other != label
            }
            for v in attach_vertices:
                dist = {v: A.zero}
                stack = [v]
                while stack:
                    cur = stack.pop()
                    for nbr, w in G.adjacency[cur].items():
                        if nbr in verts and nbr not in dist:
                            dist[nbr] = A.add(dist[cur], w)
                            stack.append(nbr)
                tables[v] = dist
            self._dist[label] = tables
        return tables

    def weight(self, label: int, other1: int, other2: int) -> Element:
        """Weight of the tree path inside `label` between its attachments
        toward other1 and other2."""
        G = self.G
        if len(G.supernodes[label]) == 1:
            return G.group.zero
        u = G.crossing_edge(label, other1)[0]
        v = G.crossing_edge(label, other2)[0]
        if u == v:
            return G.group.zero
        return self._tables(label)[u][v]


def attachment_pair_weights(G: ReducedMinor) -> AttachmentWeights:
    return AttachmentWeights(G)


def triangle_weight(
    G: ReducedMinor, pair_weights: AttachmentWeights, a: int, b: int, c: int
) -> Element:
    A = G.group
    a, b, c = sorted((a, b, c))
    w = A.zero
    for p, q in ((a, b), (b, c), (a, c)):
        u, v = G.crossing_edge(p, q)
        w = A.add(w, G.weight(u, v))
    w = A.add(w, pair_weights.weight(a, b, c))
    w = A.add(w, pair_weights.weight(b, a, c))
    w = A.add(w, pair_weights.weight(c, a, b))
    return w


def restriction_violation(
    G: ReducedMinor, B: Subgroup, method: str = "triangles"
) -> Violation | None:
    """First witness that G is not B-restricted, or None.

    method "triangles" checks all doubled edge weights plus all supernode
    triangles, which is equivalent to checking every permissible cycle on at
    most five supernodes; method "enumerate" streams those cycles directly.
    """
    A = G.group
    if B.parent != A:
        raise StructuralError("subgroup belongs to a different group")
    if len(B.elements) == A.order:
        return None
    for u, v, w in sorted(G.edges()):
        if A.double(w) not in B.elements:
            return Violation("edge-doubling-outside-subgroup", (u, v, w))
    if method == "enumerate":
        for cyc in enumerate_small_permissible_cycles(G):
            if G.cycle_weight(cyc.vertices) not in B.elements:
                return Violation("cycle-weight-outside-subgroup", cyc)
        return None
    if method != "triangles":
        raise StructuralError(f"unknown method {method!r}")
    pair_weights = attachment_pair_weights(G)
    for a, b, c in itertools.combinations(G.labels(), 3):
        if triangle_weight(G, pair_weights, a, b, c) not in B.elements:
            return Violation("cycle-weight-outside-subgroup", triangle_cycle(G, a, b, c))
    return None


def verify_restricted(G: ReducedMinor, B: Subgroup, method: str = "triangles") -> bool:
    """True iff every permissible cycle on at most five supernodes has weight
    in B and every edge weight doubles into B (which certifies that every
    permissible cycle of any size does)."""
    return restriction_violation(G, B, method=method) is None
