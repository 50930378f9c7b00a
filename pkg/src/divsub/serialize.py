"""JSON schemas and DOT export.

Instance files: {"group": "Z_2", "num_vertices": N,
                 "supernodes": [[v, ...], ...],
                 "edges": [[u, v, [r_1, ..., r_k]], ...]}
Target files:   {"n": n, "edges": [[i, j], ...]}
Certificates:   {"group": ..., "branch_map": {"i": v, ...},
                 "paths": [{"edge": [i, j], "vertices": [...], "weight": [...]}, ...],
                 "stats": {...}}

Dumps are canonical (sorted keys, fixed separators) so identical values
serialize to identical bytes.
"""

from __future__ import annotations

import json

from .connector import Connector
from .embedder import Subdivision
from .errors import UsageError
from .group import parse_group_spec
from .minor import LiftMap, ReducedMinor, TargetGraph, WeightedMinor


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _expect(cond, where, msg):
    if not cond:
        raise UsageError(f"{where}: {msg}")


def instance_to_obj(G: WeightedMinor) -> dict:
    supernodes = [sorted(G.supernodes[label]) for label in G.labels()]
    edges = [[u, v, list(w)] for u, v, w in sorted(G.edges())]
    return {
        "group": G.group.spec_string(),
        "num_vertices": G.num_vertices,
        "supernodes": supernodes,
        "edges": edges,
    }


def instance_from_obj(obj, reduced: bool = False) -> WeightedMinor:
    _expect(isinstance(obj, dict), "instance", "expected a JSON object")
    for key in ("group", "supernodes", "edges"):
        _expect(key in obj, "instance", f"missing key {key!r}")
    try:
        group = parse_group_spec(obj["group"])
    except Exception as exc:
        raise UsageError(f"instance.group: {exc}") from exc
    supernodes_raw = obj["supernodes"]
    _expect(isinstance(supernodes_raw, list) and supernodes_raw, "instance.supernodes",
            "expected a nonempty list")
    supernodes = {}
    adjacency = {}
    for label, verts in enumerate(supernodes_raw):
        _expect(isinstance(verts, list) and verts, f"instance.supernodes[{label}]",
                "expected a nonempty list of vertex ids")
        supernodes[label] = set(int(v) for v in verts)
        for v in supernodes[label]:
            _expect(v not in adjacency, f"instance.supernodes[{label}]",
                    f"vertex {v} appears twice")
            adjacency[v] = {}
    for idx, edge in enumerate(obj["edges"]):
        _expect(isinstance(edge, list) and len(edge) == 3, f"instance.edges[{idx}]",
                "expected [u, v, [residues...]]")
        u, v, res = edge
        u, v = int(u), int(v)
        _expect(u in adjacency and v in adjacency, f"instance.edges[{idx}]",
                "edge endpoint not in any supernode")
        _expect(u != v, f"instance.edges[{idx}]", "loops are not allowed")
        _expect(v not in adjacency[u], f"instance.edges[{idx}]", "duplicate edge")
        try:
            w = group.element(res)
        except Exception as exc:
            raise UsageError(f"instance.edges[{idx}]: {exc}") from exc
        adjacency[u][v] = w
        adjacency[v][u] = w
    if "num_vertices" in obj:
        _expect(int(obj["num_vertices"]) == len(adjacency), "instance.num_vertices",
                f"does not match the {len(adjacency)} partitioned vertices")
    cls = ReducedMinor if reduced else WeightedMinor
    try:
        return cls(group, adjacency, supernodes)
    except Exception as exc:
        raise UsageError(f"instance: {exc}") from exc


def target_to_obj(H: TargetGraph) -> dict:
    return {"n": H.n, "edges": [list(e) for e in H.edges]}


def target_from_obj(obj) -> TargetGraph:
    _expect(isinstance(obj, dict), "target", "expected a JSON object")
    for key in ("n", "edges"):
        _expect(key in obj, "target", f"missing key {key!r}")
    try:
        return TargetGraph(int(obj["n"]), [tuple(e) for e in obj["edges"]])
    except Exception as exc:
        raise UsageError(f"target: {exc}") from exc


def certificate_to_obj(sub: Subdivision) -> dict:
    paths = [
        {
            "edge": [int(i), int(j)],
            "vertices": list(path),
            "weight": list(sub.group.zero),
        }
        for (i, j), path in sorted(sub.paths.items())
    ]
    return {
        "group": sub.group.spec_string(),
        "branch_map": {str(k): int(v) for k, v in sorted(sub.branch_map.items())},
        "paths": paths,
        "stats": sub.stats,
    }


def certificate_from_obj(obj) -> Subdivision:
    _expect(isinstance(obj, dict), "certificate", "expected a JSON object")
    for key in ("group", "branch_map", "paths"):
        _expect(key in obj, "certificate", f"missing key {key!r}")
    group = parse_group_spec(obj["group"])
    try:
        branch_map = {int(k): int(v) for k, v in obj["branch_map"].items()}
    except Exception as exc:
        raise UsageError(f"certificate.branch_map: {exc}") from exc
    paths = {}
    for idx, entry in enumerate(obj["paths"]):
        _expect(isinstance(entry, dict) and "edge" in entry and "vertices" in entry,
                f"certificate.paths[{idx}]", "expected {edge, vertices}")
        i, j = (int(x) for x in entry["edge"])
        paths[(min(i, j), max(i, j))] = tuple(int(v) for v in entry["vertices"])
    return Subdivision(
        group=group, branch_map=branch_map, paths=paths, stats=obj.get("stats", {})
    )


def connector_to_obj(F: Connector) -> dict:
    return {
        "endpoints": list(F.endpoints),
        "paths": [list(p) for p in F.paths],
        "cycles": [
            {
                "entry": link.entry,
                "exit": link.exit,
                "y_arc": list(link.y_arc),
                "x_arc": list(link.x_arc),
                "delta": list(link.delta),
            }
            for link in F.links
        ],
        "realizable": sorted(list(s) for s in F.realizable),
        "home_supernodes": sorted(F.homes),
    }


def liftmap_to_obj(lift: LiftMap) -> dict:
    return {
        "expansions": [
            {"edge": [u, v], "path": list(path)}
            for (u, v), path in sorted(lift.expansions.items())
        ]
    }


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def save_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


_PALETTE = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
]


def to_dot(G: WeightedMinor, layout_hints: bool = True) -> str:
    """Graphviz export with vertices coloured by supernode.

    Layout hints (same-supernode clustering) are skipped on large instances.
    """
    lines = ["graph minor {"]
    lines.append('  node [style=filled, shape=circle, fontsize=8];')
    use_clusters = layout_hints and G.num_vertices <= 300
    for idx, label in enumerate(G.labels()):
        color = _PALETTE[idx % len(_PALETTE)]
        body = [
            f'    v{v} [fillcolor="{color}", label="{v}"];'
            for v in sorted(G.supernodes[label])
        ]
        if use_clusters:
            lines.append(f"  subgraph cluster_{label} {{")
            lines.append(f'    label="X{label}";')
            lines.extend(body)
            lines.append("  }")
        else:
            lines.extend(body)
    for u, v, w in sorted(G.edges()):
        wtxt = ",".join(str(r) for r in w)
        lines.append(f'  v{u} -- v{v} [label="{wtxt}", fontsize=7];')
    lines.append("}")
    return "\n".join(lines) + "\n"
