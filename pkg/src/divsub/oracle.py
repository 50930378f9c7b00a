"""Exhaustive search for divisible subdivisions in tiny weighted graphs.

Ground truth for the embedder at desk scale: backtracking over injective
branch maps and vertex-disjoint path systems with a per-path weight-zero
constraint. Verdicts are explicit ("witness", "none", "budget-exceeded");
a truncated search never reports "none".
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .embedder import Subdivision, verify_subdivision
from .errors import SoundnessError, StructuralError
from .group import FiniteAbelianGroup
from .minor import TargetGraph, WeightedMinor


@dataclass(frozen=True)
class SearchBudget:
    max_vertices: int = 14
    max_paths_per_pair: int = 200_000
    time_cap_seconds: float = 60.0

    def __post_init__(self):
        if self.max_vertices < 1 or self.max_paths_per_pair < 1 or self.time_cap_seconds <= 0:
            raise StructuralError("budget fields must be positive")


@dataclass(frozen=True)
class OracleResult:
    verdict: str  # "witness" | "none" | "budget-exceeded"
    subdivision: Subdivision | None = None
    reason: str = ""


class _BudgetHit(Exception):
    pass


def brute_force_subdivision(
    G: WeightedMinor,
    H: TargetGraph,
    A: FiniteAbelianGroup,
    budget: SearchBudget = SearchBudget(),
) -> OracleResult:
    """Decide existence of an A-divisible H-subdivision exhaustively.

    G is used purely as a weighted graph; its supernode partition is ignored.
    """
    if G.group != A:
        raise StructuralError("instance group does not match the requested group")
    if G.num_vertices > budget.max_vertices:
        return OracleResult("budget-exceeded", reason="too many vertices")
    deadline = time.monotonic() + budget.time_cap_seconds
    h_deg = H.degrees()

    # route scarce edges first: endpoints of high total degree constrain most
    edge_order = sorted(H.edges, key=lambda e: (-(h_deg[e[0]] + h_deg[e[1]]), e))
    paths_tried = [0]

    def check_budget():
        if time.monotonic() > deadline:
            raise _BudgetHit("time cap exceeded")
        if paths_tried[0] > budget.max_paths_per_pair:
            raise _BudgetHit("per-pair path cap exceeded")

    def route(idx, branch, used, acc):
        if idx == len(edge_order):
            return dict(acc)
        check_budget()
        hu, hv = edge_order[idx]
        s, t = branch[hu], branch[hv]
        blocked = (used | set(branch.values())) - {s, t}

        def dfs(path, weight):
            check_budget()
            cur = path[-1]
            for nbr in sorted(G.adjacency[cur]):
                if nbr in blocked or nbr in path:
                    continue
                w = A.add(weight, G.adjacency[cur][nbr])
                if nbr == t:
                    paths_tried[0] += 1
                    if w == A.zero:
                        acc[(min(hu, hv), max(hu, hv))] = tuple(path) + (t,)
                        found = route(idx + 1, branch, used | set(path[1:]), acc)
                        if found is not None:
                            return found
                        del acc[(min(hu, hv), max(hu, hv))]
                    continue
                res = dfs(path + [nbr], w)
                if res is not None:
                    return res
            return None

        return dfs([s], A.zero)

    candidates = sorted(G.adjacency)
    order = sorted(range(H.n), key=lambda v: (-h_deg[v], v))
    branch: dict[int, int] = {}

    def assign(pos):
        if pos == len(order):
            return route(0, branch, set(), {})
        check_budget()
        hv = order[pos]
        for g in candidates:
            if g in branch.values():
                continue
            if len(G.adjacency[g]) < h_deg[hv]:
                continue
            branch[hv] = g
            found = assign(pos + 1)
            if found is not None:
                return found
            del branch[hv]
        return None

    try:
        found = assign(0)
    except _BudgetHit as hit:
        return OracleResult("budget-exceeded", reason=str(hit))
    if found is None:
        return OracleResult("none")
    sub = Subdivision(group=A, branch_map=dict(branch), paths=found, stats={"oracle": True})
    bad = verify_subdivision(G, H, A, sub)
    if bad is not None:
        raise SoundnessError(f"oracle witness failed verification ({bad})")
    return OracleResult("witness", subdivision=sub)


def cross_check(
    G: WeightedMinor,
    H: TargetGraph,
    A: FiniteAbelianGroup,
    budget: SearchBudget = SearchBudget(),
    embedder_subdivision: Subdivision | None = None,
) -> str:
    """Compare the oracle verdict against the embedder on a tiny instance.

    Embedder success must imply an oracle witness; the converse may fail
    below the supernode bound, which is reported but expected.
    """
    from .embedder import EmbedFailure, embed

    oracle = brute_force_subdivision(G, H, A, budget)
    if embedder_subdivision is not None:
        embedded = verify_subdivision(G, H, A, embedder_subdivision) is None
    else:
        try:
            embed(G, H)
            embedded = True
        except EmbedFailure:
            embedded = False
    if oracle.verdict == "budget-exceeded":
        return f"indeterminate: oracle budget exceeded ({oracle.reason})"
    if embedded and oracle.verdict == "none":
        return "divergence: embedder produced a subdivision the oracle says cannot exist"
    if embedded:
        return "consistent"
    if oracle.verdict == "witness":
        return "embedder incomplete below bound (expected)"
    return "consistent: no subdivision exists and the embedder found none"
