import pytest

from divsub.group import FiniteAbelianGroup
from divsub.generators import SplitMix64
from divsub.minor import ReducedMinor, WeightedMinor


def k4_minor(group=None, weights=None):
    """K_4 with singleton supernodes; already reduced."""
    A = group or FiniteAbelianGroup([2])
    adjacency = {i: {} for i in range(4)}
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    for idx, (u, v) in enumerate(edges):
        w = weights[idx] if weights else A.zero
        adjacency[u][v] = w
        adjacency[v][u] = w
    return ReducedMinor(A, adjacency, {i: {i} for i in range(4)})


def tree_supernode_minor(group=None):
    """f=6 reduced minor whose supernode 0 induces the path 0-1-2.

    Supernodes: X0={0,1,2} (tree 0-1-2), X1..X5 singletons {3},{4},{5},{6},{7}.
    Crossings from X0: 0-3, 0-4, 2-5, 2-6, 1-7; singletons pairwise adjacent.
    """
    A = group or FiniteAbelianGroup([4])
    verts = range(8)
    adjacency = {v: {} for v in verts}

    def add(u, v, w):
        adjacency[u][v] = w
        adjacency[v][u] = w

    rng = SplitMix64(99)
    edges = [(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6), (1, 7)]
    edges += [(u, v) for u in (3, 4, 5, 6, 7) for v in (3, 4, 5, 6, 7) if u < v]
    for u, v in edges:
        add(u, v, rng.element(A))
    supernodes = {0: {0, 1, 2}, 1: {3}, 2: {4}, 3: {5}, 4: {6}, 5: {7}}
    return ReducedMinor(A, adjacency, supernodes)


def random_walk_path(G: WeightedMinor, rng: SplitMix64, max_len=12):
    """A random simple path in G (for lift/weight oracles)."""
    verts = sorted(G.adjacency)
    start = rng.choice(verts)
    path = [start]
    used = {start}
    for _ in range(rng.randint(1, max_len)):
        nxt = [v for v in sorted(G.adjacency[path[-1]]) if v not in used]
        if not nxt:
            break
        v = rng.choice(nxt)
        path.append(v)
        used.add(v)
    return path


@pytest.fixture
def k4():
    return k4_minor()


@pytest.fixture
def treeminor():
    return tree_supernode_minor()
