import itertools

import pytest

from divsub.cycles import (
    enumerate_small_permissible_cycles,
    is_permissible_cycle,
    is_permissible_path,
    restriction_violation,
    triad_split,
    triangle_cycle,
    verify_restricted,
)
from divsub.generators import GenSpec, SplitMix64, gen_minor
from divsub.group import FiniteAbelianGroup, generate_subgroup, trivial_subgroup, whole_group
from divsub.minor import reduce, tree_path
from .conftest import tree_supernode_minor

Z2 = FiniteAbelianGroup([2])
Z4 = FiniteAbelianGroup([4])


def reduced_instance(shape="subdivided-clique", f=8, group=Z4, seed=0, mode="random"):
    G = gen_minor(GenSpec(shape, f=f, group=group, weight_mode=mode, seed=seed))
    R, _ = reduce(G)
    return R


# -- permissibility -------------------------------------------------------


def test_tree_paths_are_permissible(treeminor):
    assert is_permissible_path(treeminor, tree_path(treeminor, 0, 7, (0, 5)))
    assert is_permissible_path(treeminor, tree_path(treeminor, 3, 4, (1, 2)))


def test_path_reentering_supernode_not_permissible(treeminor):
    # leaves supernode 0 at vertex 0 and re-enters it at vertex 1
    path = (0, 3, 7, 1)
    assert treeminor.is_valid_path(path) and not is_permissible_path(treeminor, path)


def test_permissible_path_random_tree_paths():
    R = reduced_instance(shape="blownup-clique", f=8, seed=3)
    labels = R.labels()
    rng = SplitMix64(5)
    for _ in range(40):
        a, b = rng.choice(labels), rng.choice(labels)
        if a == b:
            continue
        u = rng.choice(sorted(R.supernodes[a]))
        v = rng.choice(sorted(R.supernodes[b]))
        assert is_permissible_path(R, tree_path(R, u, v, (a, b)))


def test_triangle_is_permissible_cycle(k4):
    cyc = triangle_cycle(k4, 0, 1, 2)
    assert is_permissible_cycle(k4, cyc.vertices)
    assert cyc.incident == frozenset({0, 1, 2})


def test_cycle_reentering_two_supernodes_rejected():
    # two supernodes {0,1} and {2,3} visited alternately: two runs each
    A = Z2
    adjacency = {v: {} for v in range(4)}

    def add(u, v):
        adjacency[u][v] = A.zero
        adjacency[v][u] = A.zero

    for u, v in [(0, 2), (2, 1), (1, 3), (3, 0)]:
        add(u, v)
    from divsub.minor import WeightedMinor

    G = WeightedMinor(A, adjacency, {0: {0, 1}, 1: {2, 3}})
    cycle = (0, 2, 1, 3)
    assert G.is_valid_path(cycle) and G.has_edge(3, 0)
    assert not is_permissible_cycle(G, cycle)


def test_exceptional_cycle_accepted(treeminor):
    # meets supernode 0 in the two disjoint runs {0} and {2}, five supernodes
    cycle = (0, 3, 5, 2, 6, 4)
    assert is_permissible_cycle(treeminor, cycle)


def test_exceptional_cycle_needs_five_supernodes():
    # hand-built non-reduced graph: supernode 0 = {0,1} met in two disjoint
    # paths by a cycle through only four supernodes -> rejected defensively
    A = Z2
    adjacency = {v: {} for v in range(6)}

    def add(u, v):
        adjacency[u][v] = A.zero
        adjacency[v][u] = A.zero

    for u, v in [(0, 2), (2, 1), (1, 3), (3, 0), (0, 1), (2, 4), (3, 4), (1, 5), (2, 5), (4, 5)]:
        add(u, v)
    from divsub.minor import WeightedMinor

    G = WeightedMinor(A, adjacency, {0: {0, 1}, 1: {2}, 2: {3}, 3: {4}, 4: {5}})
    G.crossing = {}  # not used by the permissibility check
    cycle = (0, 2, 1, 3)  # supernode 0 entered twice
    assert not is_permissible_cycle(G, cycle)


# -- enumeration ----------------------------------------------------------


def brute_force_small_cycles(G, max_supernodes=5):
    """All simple cycles, filtered to permissible ones on few supernodes,
    keyed by edge set."""
    verts = sorted(G.adjacency)
    found = {}
    for s in verts:

        def extend(path):
            last = path[-1]
            for nbr in sorted(G.adjacency[last]):
                if nbr == s and len(path) >= 3:
                    cyc = tuple(path)
                    key = frozenset(
                        (min(u, v), max(u, v)) for u, v in zip(cyc, cyc[1:] + cyc[:1])
                    )
                    if key not in found:
                        incident = {G.home[v] for v in cyc}
                        if len(incident) <= max_supernodes and is_permissible_cycle(G, cyc):
                            found[key] = cyc
                elif nbr > s and nbr not in path:
                    extend(path + [nbr])

        extend([s])
    return found


def cycle_key(cyc):
    return frozenset(
        (min(u, v), max(u, v)) for u, v in zip(cyc.vertices, cyc.vertices[1:] + cyc.vertices[:1])
    )


def test_enumerate_k4_triangles_first(k4):
    cycles = list(enumerate_small_permissible_cycles(k4))
    assert [sorted(c.incident) for c in cycles[:4]] == [
        [0, 1, 2],
        [0, 1, 3],
        [0, 2, 3],
        [1, 2, 3],
    ]
    # K_4: 4 triangles + 3 four-vertex cycles
    assert len(cycles) == 7


def test_every_three_subset_has_a_triangle():
    R = reduced_instance(f=7, seed=11)
    for subset in itertools.combinations(R.labels(), 3):
        cyc = triangle_cycle(R, *subset)
        assert cyc.incident == frozenset(subset)
        assert is_permissible_cycle(R, cyc.vertices)


@pytest.mark.parametrize("seed", [0, 1])
def test_enumeration_matches_brute_force(seed):
    R = reduced_instance(shape="blownup-clique", f=6, group=Z2, seed=seed)
    assert R.num_vertices <= 30
    expected = brute_force_small_cycles(R)
    got = {}
    for cyc in enumerate_small_permissible_cycles(R):
        assert is_permissible_cycle(R, cyc.vertices)
        key = cycle_key(cyc)
        assert key not in got, "cycle yielded twice"
        got[key] = cyc
    assert set(got) == set(expected)


def test_enumeration_finds_exceptional_cycles():
    # treeminor supernode 0 is a path 0-1-2; a cycle through 0,...,2 using
    # both 0 and 2 but not 1 meets supernode 0 in two disjoint paths
    G = tree_supernode_minor()
    expected = brute_force_small_cycles(G)
    exceptional = [
        c for c in expected.values() if any(
            len(r) == 2 for r in __import__("divsub.cycles", fromlist=["_runs"])._runs(
                G, c, cyclic=True
            ).values()
        )
    ]
    assert exceptional, "fixture should admit an exceptional permissible cycle"
    got = {cycle_key(c): c for c in enumerate_small_permissible_cycles(G)}
    assert set(got) == set(expected)
    assert any(c.exceptional is not None for c in got.values())


# -- triad split ----------------------------------------------------------


def test_triad_delta_identity_paper_example():
    A = Z4
    x = [(1,), (2,), (0,)]
    deltas = [
        A.sub(A.add(x[j], x[(j + 1) % 3]), x[(j + 2) % 3]) for j in range(3)
    ]
    assert deltas == [(3,), (1,), (3,)]
    assert A.sum(deltas) == A.sum(x) == (3,)


def test_triad_split_zero_weights():
    R = reduced_instance(f=7, seed=12, mode="zero")
    ts = triad_split(R, triangle_cycle(R, 0, 1, 2))
    assert ts.x == (R.group.zero,) * 3
    assert ts.deltas == (R.group.zero,) * 3
    assert ts.t_supernodes == (0, 1, 2)
    assert ts.n_supernodes == (3, 4, 5)


def test_triad_split_needs_three_free_supernodes(k4):
    from divsub.errors import ResourceError

    with pytest.raises(ResourceError):
        triad_split(k4, triangle_cycle(k4, 0, 1, 2))


@pytest.mark.parametrize("seed", [2, 3, 4])
def test_triad_split_recomputed_segments(seed):
    R = reduced_instance(f=9, seed=seed)
    A = R.group
    count = 0
    for cyc in enumerate_small_permissible_cycles(R):
        if count >= 25:
            break
        count += 1
        ts = triad_split(R, cyc)
        # deltas satisfy their defining identities and sum to the cycle weight
        for j in range(3):
            assert ts.deltas[j] == A.sub(A.add(ts.x[j], ts.x[(j + 1) % 3]), ts.x[(j + 2) % 3])
        assert A.sum(ts.deltas) == A.sum(ts.x) == R.cycle_weight(cyc.vertices)
        # independent recomputation: each stored arc avoids its attachment
        # and its weight equals walking the cycle between the other two
        for j in range(3):
            arc = ts.arcs[j]
            assert ts.attachments[j] not in arc
            assert {arc[0], arc[-1]} == {ts.attachments[(j + 1) % 3], ts.attachments[(j + 2) % 3]}
            assert R.path_weight(arc) == ts.x[j]
        # access paths: pairwise disjoint, inner vertices inside T_j,
        # meeting the cycle exactly at the attachment
        for j in range(3):
            q = ts.q_paths[j]
            assert q[0] == ts.u[j] and q[-1] == ts.attachments[j]
            assert set(q[1:-1]) <= R.supernodes[ts.t_supernodes[j]]
            assert set(q) & set(cyc.vertices) == {ts.attachments[j]}
        for i, j in itertools.combinations(range(3), 2):
            assert not (set(ts.q_paths[i]) & set(ts.q_paths[j]))


# -- restriction checking -------------------------------------------------


def test_whole_group_always_restricted():
    R = reduced_instance(f=8, seed=6)
    assert verify_restricted(R, whole_group(R.group))


def test_unit_weighted_odd_triangle_not_zero_restricted():
    R = reduced_instance(f=6, group=Z2, seed=1, mode="unit")
    # K_f reduced from lengths>=1 paths: some triangle has odd total length
    B0 = trivial_subgroup(Z2)
    bad = restriction_violation(R, B0)
    assert bad is not None and bad.kind in (
        "cycle-weight-outside-subgroup",
        "edge-doubling-outside-subgroup",
    )


def test_adversarial_instance_is_zero_restricted():
    G = gen_minor(GenSpec("adversarial-divisible", f=8, group=Z2, seed=4))
    R, _ = reduce(G)
    assert verify_restricted(R, trivial_subgroup(Z2))


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_triangle_method_matches_enumeration(seed):
    A = Z4
    R = reduced_instance(shape="blownup-clique", f=7, group=A, seed=seed)
    for B in (trivial_subgroup(A), generate_subgroup(A, [(2,)]), whole_group(A)):
        assert verify_restricted(R, B, method="triangles") == verify_restricted(
            R, B, method="enumerate"
        )


def test_even_weights_restricted_to_even_subgroup():
    # force all weights into {0,2} <= Z_4: every cycle weight stays inside
    G = gen_minor(GenSpec("subdivided-clique", f=7, group=Z4, weight_mode="random", seed=8))
    doubled = {
        u: {v: G.group.double(w) for v, w in nbrs.items()} for u, nbrs in G.adjacency.items()
    }
    from divsub.minor import WeightedMinor

    G2 = WeightedMinor(G.group, doubled, G.supernodes)
    R, _ = reduce(G2)
    B = generate_subgroup(Z4, [(2,)])
    assert verify_restricted(R, B)


def test_restriction_matches_exhaustive_all_cycle_check():
    # on a tiny instance, compare the small-cycle certificate against a full
    # enumeration of every permissible cycle of any size
    A = Z4
    for seed in (0, 1, 2):
        R = reduced_instance(shape="blownup-clique", f=6, group=A, seed=seed)
        assert R.num_vertices <= 30
        for B in (trivial_subgroup(A), generate_subgroup(A, [(2,)]), whole_group(A)):
            exhaustive = all(
                R.cycle_weight(cyc) in B.elements
                for cyc in brute_force_small_cycles(R, max_supernodes=6).values()
            ) and all(A.double(w) in B.elements for _, _, w in R.edges())
            assert verify_restricted(R, B) == exhaustive


def test_restriction_implies_random_large_permissible_cycles_in_subgroup():
    # the lemma's conclusion, sampled: weights of permissible cycles of any
    # size land in B once the small-cycle certificate passes
    G = gen_minor(GenSpec("adversarial-divisible", f=9, group=Z2, seed=10))
    R, _ = reduce(G)
    B = trivial_subgroup(Z2)
    assert verify_restricted(R, B)
    rng = SplitMix64(42)
    labels = R.labels()
    checked = 0
    for _ in range(400):
        size = rng.randint(3, min(8, len(labels)))
        subset = []
        pool = list(labels)
        for _ in range(size):
            subset.append(pool.pop(rng.randint(0, len(pool) - 1)))
        seqs = list(itertools.permutations(subset))
        seq = seqs[rng.randint(0, len(seqs) - 1)]
        from divsub.cycles import _cycle_from_visits

        cyc = _cycle_from_visits(R, seq)
        if cyc is None:
            continue
        if not is_permissible_cycle(R, cyc.vertices):
            continue
        checked += 1
        assert R.cycle_weight(cyc.vertices) in B.elements
    assert checked >= 200
