"""Seeded, deterministic instance generation.

All randomness flows through SplitMix64, a small named 64-bit generator,
so a fixed seed yields a bitwise-identical instance on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralError
from .group import Element, FiniteAbelianGroup
from .minor import TargetGraph, WeightedMinor, validate_minor

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 PRNG (Steele/Lea/Flood mixing constants)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise StructuralError(f"empty range [{lo},{hi}]")
        span = hi - lo + 1
        # rejection sampling to keep the distribution exactly uniform
        limit = (_MASK + 1) - ((_MASK + 1) % span)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + (x % span)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(0, i)
            seq[i], seq[j] = seq[j], seq[i]

    def element(self, A: FiniteAbelianGroup) -> Element:
        return tuple(self.randint(0, d - 1) for d in A.cyclic_factors)


SHAPES = ("subdivided-clique", "blownup-clique", "adversarial-divisible")
WEIGHT_MODES = ("unit", "random", "zero")


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a generated weighted clique minor."""

    shape: str
    f: int
    group: FiniteAbelianGroup
    weight_mode: str = "unit"
    seed: int = 0
    min_length: int = 1
    max_length: int = 3
    max_tree_size: int = 4

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise StructuralError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.weight_mode not in WEIGHT_MODES:
            raise StructuralError(f"unknown weight mode {self.weight_mode!r}")
        if self.f < 4:
            raise StructuralError("need at least 4 supernodes")
        if not (1 <= self.min_length <= self.max_length):
            raise StructuralError("need 1 <= min_length <= max_length")
        if self.max_tree_size < 1:
            raise StructuralError("max_tree_size must be positive")


def unit_element(A: FiniteAbelianGroup) -> Element:
    """All-ones residue vector; equals 1 for cyclic groups."""
    return A.element([1] * len(A.cyclic_factors))


def _edge_weight(rng: SplitMix64, A: FiniteAbelianGroup, mode: str) -> Element:
    if mode == "unit":
        return unit_element(A)
    if mode == "zero":
        return A.zero
    return rng.element(A)


def _subdivided_clique(spec: GenSpec, rng: SplitMix64, lengths=None) -> WeightedMinor:
    """K_f with every edge replaced by a path; interior vertices are split
    between the two endpoint supernodes so each supernode stays connected."""
    A = spec.group
    f = spec.f
    adjacency: dict[int, dict[int, Element]] = {i: {} for i in range(f)}
    members: dict[int, set[int]] = {i: {i} for i in range(f)}
    nxt = f

    def add_edge(u, v):
        w = _edge_weight(rng, A, spec.weight_mode)
        adjacency[u][v] = w
        adjacency[v][u] = w

    for i in range(f):
        for j in range(i + 1, f):
            if lengths is None:
                L = rng.randint(spec.min_length, spec.max_length)
            else:
                L = lengths(rng)
            interior = list(range(nxt, nxt + L - 1))
            nxt += L - 1
            split = rng.randint(0, L - 1)
            for t, z in enumerate(interior):
                adjacency[z] = {}
                members[i if t < split else j].add(z)
            chain = [i] + interior + [j]
            for u, v in zip(chain, chain[1:]):
                add_edge(u, v)
    return WeightedMinor(A, adjacency, members)


def _blownup_clique(spec: GenSpec, rng: SplitMix64) -> WeightedMinor:
    """Each supernode is a random tree; one random edge joins every pair."""
    A = spec.group
    adjacency: dict[int, dict[int, Element]] = {}
    members: dict[int, list[int]] = {}
    nxt = 0
    for i in range(spec.f):
        size = rng.randint(1, spec.max_tree_size)
        verts = list(range(nxt, nxt + size))
        nxt += size
        members[i] = verts
        for v in verts:
            adjacency[v] = {}
        for t in range(1, size):
            u = verts[rng.randint(0, t - 1)]
            v = verts[t]
            w = _edge_weight(rng, A, spec.weight_mode)
            adjacency[u][v] = w
            adjacency[v][u] = w
    for i in range(spec.f):
        for j in range(i + 1, spec.f):
            u = rng.choice(members[i])
            v = rng.choice(members[j])
            w = _edge_weight(rng, A, spec.weight_mode)
            adjacency[u][v] = w
            adjacency[v][u] = w
    return WeightedMinor(A, adjacency, {k: set(v) for k, v in members.items()})


def _adversarial_divisible(spec: GenSpec, rng: SplitMix64) -> WeightedMinor:
    """Unit weights over Z_q with every subdivided edge of length divisible
    by q, so every path between branch vertices has length 0 mod q."""
    if len(spec.group.cyclic_factors) != 1 or spec.group.order < 2:
        raise StructuralError("adversarial-divisible needs a cyclic group Z_q, q >= 2")
    q = spec.group.order
    forced = GenSpec(
        shape="subdivided-clique",
        f=spec.f,
        group=spec.group,
        weight_mode="unit",
        seed=spec.seed,
        min_length=q,
        max_length=2 * q,
        max_tree_size=spec.max_tree_size,
    )
    return _subdivided_clique(forced, rng, lengths=lambda r: q * r.randint(1, 2))


def gen_minor(spec: GenSpec) -> WeightedMinor:
    """Generate a valid weighted clique minor; deterministic in the seed."""
    rng = SplitMix64(spec.seed)
    if spec.shape == "subdivided-clique":
        G = _subdivided_clique(spec, rng)
    elif spec.shape == "blownup-clique":
        G = _blownup_clique(spec, rng)
    else:
        G = _adversarial_divisible(spec, rng)
    bad = validate_minor(G)
    if bad is not None:
        raise StructuralError(f"generator produced an invalid minor ({bad})")
    return G


def unit_weighting(G: WeightedMinor, q: int) -> WeightedMinor:
    """Reweight every edge to 1 in Z_q; a Z_q-divisible subdivision of the
    result is exactly a q-divisible one."""
    if q < 2:
        raise StructuralError("need q >= 2")
    A = FiniteAbelianGroup([q])
    one = (1 % q,)
    adjacency = {u: {v: one for v in nbrs} for u, nbrs in G.adjacency.items()}
    return WeightedMinor(A, adjacency, G.supernodes)


def _petersen() -> TargetGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return TargetGraph(10, outer + spokes + inner)


def random_subcubic(n: int, seed: int) -> TargetGraph:
    """Sample simple graphs on n vertices, rejecting until one is subcubic."""
    if n < 1:
        raise StructuralError("need n >= 1")
    rng = SplitMix64(seed)
    target_m = n if n > 2 else n - 1
    while True:
        edges = set()
        attempts = 0
        while len(edges) < target_m and attempts < 8 * target_m + 8:
            attempts += 1
            u = rng.randint(0, n - 1)
            v = rng.randint(0, n - 1)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        degs = [0] * n
        for u, v in edges:
            degs[u] += 1
            degs[v] += 1
        if all(d <= 3 for d in degs):
            return TargetGraph(n, sorted(edges))


def gen_target(name: str) -> TargetGraph:
    """Named target graphs: C_k, P_k, K_4, petersen, random-subcubic(n, seed)."""
    name = name.strip()
    if name == "K_4":
        return TargetGraph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    if name == "petersen":
        return _petersen()
    if name.startswith("C_"):
        k = int(name[2:])
        if k < 3:
            raise StructuralError("cycles need k >= 3")
        return TargetGraph(k, [(i, (i + 1) % k) for i in range(k)])
    if name.startswith("P_"):
        k = int(name[2:])
        if k < 1:
            raise StructuralError("paths need k >= 1")
        return TargetGraph(k, [(i, i + 1) for i in range(k - 1)])
    if name.startswith("random-subcubic(") and name.endswith(")"):
        inner = name[len("random-subcubic(") : -1]
        parts = [p.strip() for p in inner.split(",")]
        if len(parts) != 2:
            raise StructuralError("random-subcubic takes (n, seed)")
        return random_subcubic(int(parts[0]), int(parts[1]))
    raise StructuralError(f"unknown target graph name {name!r}")
