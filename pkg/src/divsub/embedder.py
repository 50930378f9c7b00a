"""The embedding pipeline: collect one connector per target edge with
subgroup-descent accounting, reserve four-supernode clusters, colour central
vertices by the halving quotient, route weight-zero subdivision paths, and
emit a certificate that an independent checker accepts.

Stage graphs form a chain under deletion+reduction; every stage records the
lift map to its parent, so paths found late in the chain can be expanded back
into the original input graph with their weights intact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .connector import Connector, DescentOutcome, build_connector, realize
from .errors import ResourceError, SoundnessError, StructuralError
from .group import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    halving_preimage,
    quotient,
    sigma,
    whole_group,
)
from .minor import (
    LiftMap,
    ReducedMinor,
    TargetGraph,
    Violation,
    WeightedMinor,
    central_vertex,
    delete_and_reduce,
    reduce,
    tree_path,
    validate_minor,
)


class EmbedFailure(ResourceError):
    """Raised when the pipeline runs out of supernodes below the bound."""

    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


def required_supernodes(H: TargetGraph, A: FiniteAbelianGroup) -> int:
    """The guarantee threshold 7m|A| + 4n sigma(A) + 14|A|."""
    return 7 * H.m * A.order + 4 * H.n * sigma(A) + 14 * A.order


@dataclass
class Stage:
    """One graph in the reduction chain with the lift to its parent."""

    graph: ReducedMinor
    lift: LiftMap
    parent: int | None


@dataclass(frozen=True)
class LedgerEntry:
    connector: Connector
    subgroup: Subgroup
    stage: int


@dataclass
class ConnectorLedger:
    """m connectors, the stage chain that produced them, and spend counters."""

    entries: list[LedgerEntry]
    stages: list[Stage]
    final_stage: int
    final_subgroup: Subgroup
    descents: int
    spent_case1: int
    spent_case2: int

    @property
    def final_graph(self) -> ReducedMinor:
        return self.stages[self.final_stage].graph

    def lift_to_stage(self, path, from_stage: int, to_stage: int):
        """Lift a path down the chain from one stage to an earlier one."""
        cur = from_stage
        path = tuple(path)
        while cur != to_stage:
            stage = self.stages[cur]
            if stage.parent is None:
                raise StructuralError("target stage is not an ancestor")
            path = stage.lift.lift_path(path)
            cur = stage.parent
        return path


def collect_connectors(
    G0: ReducedMinor, A: FiniteAbelianGroup, m: int, subset_cycle_cap: int = 10_000
) -> ConnectorLedger:
    """Collect m connectors, descending to proper subgroups when forced.

    Case (1) events record a connector and remove its supernodes; case (2)
    events swap in the descended subgroup and subminor and retry.
    """
    stages = [Stage(G0, LiftMap(), None)]
    entries: list[LedgerEntry] = []
    B = whole_group(A)
    cur = 0
    descents = 0
    spent1 = 0
    spent2 = 0
    max_descents = max(1, A.order.bit_length() + 1)
    while len(entries) < m:
        G = stages[cur].graph
        out = build_connector(G, B, subset_cycle_cap=subset_cycle_cap)
        if isinstance(out, DescentOutcome):
            descents += 1
            if descents > max_descents:
                raise SoundnessError("descended more often than log2|A| allows")
            if out.graph is None:
                raise EmbedFailure(
                    f"connector {len(entries)}",
                    f"{G.num_supernodes} supernodes <= 7|B| = {7 * len(B.elements)}",
                )
            spent2 += out.lost
            stages.append(Stage(out.graph, out.lift, cur))
            cur = len(stages) - 1
            B = out.subgroup
            continue
        entries.append(LedgerEntry(connector=out, subgroup=B, stage=cur))
        spent1 += len(out.homes)
        nxt, lift = delete_and_reduce(G, out.homes)
        stages.append(Stage(nxt, lift, cur))
        cur = len(stages) - 1
    return ConnectorLedger(
        entries=entries,
        stages=stages,
        final_stage=cur,
        final_subgroup=B,
        descents=descents,
        spent_case1=spent1,
        spent_case2=spent2,
    )


@dataclass(frozen=True)
class Cluster:
    """Four reserved supernodes: a central one holding the branch vertex and
    three side supernodes giving the subdivision paths disjoint exits."""

    central: int
    center: int
    sides: tuple
    side_attach: dict  # side label -> (vertex in side adjacent to central)

    def side_labels(self) -> tuple:
        return self.sides


def select_clusters(Gm: ReducedMinor, count: int) -> list[Cluster]:
    """Group the 4*count lowest-labelled supernodes into consecutive clusters
    and mark each cluster's central vertex."""
    labels = Gm.labels()
    if len(labels) < 4 * count:
        raise EmbedFailure("clusters", f"need {4 * count} supernodes, have {len(labels)}")
    clusters = []
    for c in range(count):
        group4 = labels[4 * c : 4 * c + 4]
        central = group4[0]
        sides = tuple(group4[1:])
        attach = {}
        nbrs_in_central = []
        for side in sides:
            inside, outside = Gm.crossing_edge(central, side)
            attach[side] = outside
            nbrs_in_central.append(inside)
        center = central_vertex(Gm, central, *nbrs_in_central)
        clusters.append(
            Cluster(central=central, center=center, sides=sides, side_attach=attach)
        )
    return clusters


def pick_branch_vertices(
    Gm: ReducedMinor,
    Bm: Subgroup,
    clusters: list[Cluster],
    n: int,
) -> list[Cluster]:
    """Choose n clusters whose central vertices pairwise connect by tree
    paths of weight inside Bm.

    Central vertices are coloured by the coset (in the halving preimage of Bm
    modulo Bm) of their tree-path weight back to the first cluster; the
    largest colour class has at least n members when enough clusters exist.
    """
    A = Gm.group
    if not clusters:
        if n == 0:
            return []
        raise EmbedFailure("branch-vertices", "no clusters available")
    Bp = halving_preimage(A, Bm)
    for u, v, w in Gm.edges():
        if w not in Bp.elements:
            raise SoundnessError("edge weight does not halve into the final subgroup")
    view = quotient(Bp, Bm)
    first = clusters[0]
    classes: dict[Element, list[Cluster]] = {}
    for cl in clusters:
        if cl is first:
            weight = A.zero
        else:
            path = tree_path(Gm, first.center, cl.center, (first.central, cl.central))
            weight = Gm.path_weight(path)
        classes.setdefault(view.coset_label_of(weight), []).append(cl)
    # largest class, ties broken toward the smallest canonical coset label
    best = max(len(v) for v in classes.values())
    label = min(k for k, v in classes.items() if len(v) == best)
    chosen = classes[label]
    if len(chosen) < n:
        raise EmbedFailure(
            "branch-vertices", f"largest colour class has {len(chosen)} < n = {n}"
        )
    picked = chosen[:n]
    for i in range(len(picked)):
        for j in range(i + 1, len(picked)):
            a, b = picked[i], picked[j]
            path = tree_path(Gm, a.center, b.center, (a.central, b.central))
            if Gm.path_weight(path) not in Bm.elements:
                raise SoundnessError("chosen branch pair weight escapes the subgroup")
    return picked


@dataclass(frozen=True)
class Subdivision:
    """Certificate: branch vertices and weight-zero subdivision paths in the
    original graph."""

    group: FiniteAbelianGroup
    branch_map: dict
    paths: dict  # H-edge (i, j) -> vertex tuple
    stats: dict = field(default_factory=dict)


def _first_vertex_in(G, path, label):
    for idx, v in enumerate(path):
        if G.home[v] == label:
            return idx
    raise SoundnessError(f"path never enters supernode {label}")


def route_subdivision_path(
    ledger: ConnectorLedger,
    k: int,
    cluster_i: Cluster,
    cluster_j: Cluster,
    side_i: int,
    side_j: int,
) -> tuple:
    """Route the k-th target edge through its connector, returning a path in
    the ledger's base stage (stage 0) of weight zero."""
    entry = ledger.entries[k]
    F = entry.connector
    Bk = entry.subgroup
    Gm = ledger.final_graph
    Gk = ledger.stages[entry.stage].graph
    A = Gm.group

    yi, yj = cluster_i.center, cluster_j.center
    q1_m = tree_path(Gm, yi, cluster_i.side_attach[side_i], (cluster_i.central, side_i))
    q2_m = tree_path(Gm, yj, cluster_j.side_attach[side_j], (cluster_j.central, side_j))

    q1 = ledger.lift_to_stage(q1_m, ledger.final_stage, entry.stage)
    q2 = ledger.lift_to_stage(q2_m, ledger.final_stage, entry.stage)

    # trim the lifted side paths at the first vertex inside the side supernode
    p1_idx = _first_vertex_in(Gk, q1, side_i)
    p2_idx = _first_vertex_in(Gk, q2, side_j)
    q1_bar = q1[: p1_idx + 1]
    q2_bar = q2[: p2_idx + 1]
    p1, p2 = q1_bar[-1], q2_bar[-1]

    t1, t2 = F.endpoints
    T1, T2 = Gk.home[t1], Gk.home[t2]
    q3_bar = tree_path(Gk, p1, t1, (side_i, T1))
    q4_bar = tree_path(Gk, p2, t2, (side_j, T2))

    prefix = q1_bar + q3_bar[1:]  # y_i .. p1 .. t1
    suffix = tuple(reversed(q2_bar + q4_bar[1:]))  # t2 .. p2 .. y_j

    s = A.sum(
        (
            Gk.path_weight(prefix),
            Gk.path_weight(realize(F, A.zero)),
            Gk.path_weight(suffix),
        )
    )
    if s not in Bk.elements:
        raise SoundnessError(
            f"routing weight {s!r} escapes the stage subgroup for edge {k}"
        )
    switched = realize(F, A.neg(s))
    path_k = prefix + switched[1:] + suffix[1:]
    if len(set(path_k)) != len(path_k):
        raise SoundnessError("subdivision path is not simple in its stage graph")
    if Gk.path_weight(path_k) != A.zero:
        raise SoundnessError("subdivision path weight is not zero before lifting")
    return ledger.lift_to_stage(path_k, entry.stage, 0)


def embed(
    G: WeightedMinor,
    H: TargetGraph,
    subset_cycle_cap: int = 10_000,
    enforce_bound: bool = False,
) -> Subdivision:
    """Find an A-divisible H-subdivision in a weighted clique minor.

    Succeeds whenever f meets the 7m|A| + 4n sigma(A) + 14|A| bound; smaller
    instances are attempted best-effort and fail with a staged diagnostic.
    """
    A = G.group
    bad = validate_minor(G)
    if bad is not None:
        raise StructuralError(f"invalid input minor ({bad})")
    bound = required_supernodes(H, A)
    if enforce_bound and G.num_supernodes < bound:
        raise EmbedFailure("bound", f"f = {G.num_supernodes} < required {bound}")

    G0, lift0 = reduce(G)
    ledger = collect_connectors(G0, A, H.m, subset_cycle_cap=subset_cycle_cap)
    Gm = ledger.final_graph
    sig = sigma(A)
    clusters = select_clusters(Gm, H.n * sig)
    picked = pick_branch_vertices(Gm, ledger.final_subgroup, clusters, H.n)

    branch_map = {v: picked[v].center for v in range(H.n)}
    used_sides: dict[int, set] = {v: set() for v in range(H.n)}
    cluster_supernodes = {
        lab for cl in clusters for lab in (cl.central,) + cl.sides
    }
    paths: dict = {}
    for k, (i, j) in enumerate(H.edges):
        side_i = next(s for s in picked[i].sides if s not in used_sides[i])
        side_j = next(s for s in picked[j].sides if s not in used_sides[j])
        used_sides[i].add(side_i)
        used_sides[j].add(side_j)
        path0 = route_subdivision_path(ledger, k, picked[i], picked[j], side_i, side_j)
        path = lift0.lift_path(path0)
        _assert_routing_invariant(G, picked, cluster_supernodes, i, j, side_i, side_j, path)
        paths[(i, j)] = path

    sub = Subdivision(
        group=A,
        branch_map=branch_map,
        paths=paths,
        stats={
            "connectors": H.m,
            "descents": ledger.descents,
            "supernodes_spent": {
                "connectors": ledger.spent_case1,
                "descents": ledger.spent_case2,
                "clusters": 4 * H.n * sig,
            },
            "bound": bound,
            "f": G.num_supernodes,
        },
    )
    bad = verify_subdivision(G, H, A, sub)
    if bad is not None:
        raise SoundnessError(f"emitted subdivision failed verification ({bad})")
    return sub


def _assert_routing_invariant(G, picked, cluster_supernodes, i, j, side_i, side_j, path):
    """Each path avoids every cluster supernode except its own endpoints'
    central supernodes and one side supernode at each end."""
    allowed = {
        picked[i].central,
        picked[j].central,
        side_i,
        side_j,
    }
    for v in path:
        home = G.home[v]
        if home in cluster_supernodes and home not in allowed:
            raise SoundnessError(
                f"path for edge ({i},{j}) enters reserved supernode {home}"
            )


def verify_subdivision(
    G: WeightedMinor, H: TargetGraph, A: FiniteAbelianGroup, sub: Subdivision
) -> Violation | None:
    """Independent certificate checker; uses only G, H and the certificate."""
    if sub.group != A or G.group != A:
        return Violation("group-mismatch", (sub.group, A))
    if sorted(sub.branch_map) != list(range(H.n)):
        return Violation("branch-map-keys", sorted(sub.branch_map))
    images = list(sub.branch_map.values())
    if len(set(images)) != len(images):
        return Violation("branch-map-not-injective", images)
    for v, g in sub.branch_map.items():
        if g not in G.adjacency:
            return Violation("branch-vertex-missing", (v, g))
    expected_edges = set(H.edges)
    got_edges = {(min(i, j), max(i, j)) for i, j in sub.paths}
    if got_edges != expected_edges:
        return Violation("path-edge-set-mismatch", sorted(got_edges ^ expected_edges))
    interiors: dict = {}
    branch_vertices = set(images)
    for (i, j), path in sorted(sub.paths.items()):
        path = tuple(path)
        if len(path) < 2 or len(set(path)) != len(path):
            return Violation("path-not-simple", (i, j))
        if {path[0], path[-1]} != {sub.branch_map[i], sub.branch_map[j]}:
            return Violation("path-endpoints-mismatch", (i, j))
        total = A.zero
        for u, v in zip(path, path[1:]):
            if not G.has_edge(u, v):
                return Violation("path-edge-missing", (i, j, u, v))
            total = A.add(total, G.weight(u, v))
        if total != A.zero:
            return Violation("path-weight-nonzero", (i, j, total))
        inner = set(path[1:-1])
        if inner & branch_vertices:
            return Violation("path-through-branch-vertex", (i, j))
        interiors[(i, j)] = inner
    keys = sorted(interiors)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            shared = interiors[keys[a]] & interiors[keys[b]]
            if shared:
                return Violation("paths-share-internal-vertex", (keys[a], keys[b], min(shared)))
    for (i, j), path in sub.paths.items():
        ends = {path[0], path[-1]}
        for key, inner in interiors.items():
            if key == (min(i, j), max(i, j)):
                continue
            if ends & inner:
                return Violation("endpoint-inside-other-path", (i, j, key))
    return None
