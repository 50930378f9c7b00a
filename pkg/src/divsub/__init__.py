"""Divisible subdivisions in weighted clique minors.

Weighted clique minors over a finite abelian group contain, once large
enough, a subdivision of any given subcubic graph in which every
subdivision path has total weight zero; this package generates instances,
builds such subdivisions constructively with certificate output, and
verifies every claim independently at desk scale.
"""

from .connector import Connector, DescentOutcome, build_connector, check_connector, realize
from .cycles import (
    enumerate_small_permissible_cycles,
    is_permissible_cycle,
    is_permissible_path,
    triad_split,
    verify_restricted,
)
from .embedder import (
    Subdivision,
    collect_connectors,
    embed,
    required_supernodes,
    verify_subdivision,
)
from .generators import GenSpec, SplitMix64, gen_minor, gen_target, unit_weighting
from .group import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    enumerate_subgroups,
    generate_subgroup,
    halving_preimage,
    parse_group_spec,
    quotient,
    sigma,
    sumset,
)
from .minor import (
    LiftMap,
    ReducedMinor,
    TargetGraph,
    WeightedMinor,
    central_vertex,
    delete_and_reduce,
    lift_path,
    reduce,
    tree_path,
    validate_minor,
)
from .oracle import SearchBudget, brute_force_subdivision, cross_check

__version__ = "0.1.0"

__all__ = [
    "Connector",
    "DescentOutcome",
    "Element",
    "FiniteAbelianGroup",
    "GenSpec",
    "LiftMap",
    "ReducedMinor",
    "SearchBudget",
    "SplitMix64",
    "Subdivision",
    "Subgroup",
    "TargetGraph",
    "WeightedMinor",
    "brute_force_subdivision",
    "build_connector",
    "central_vertex",
    "check_connector",
    "collect_connectors",
    "cross_check",
    "delete_and_reduce",
    "embed",
    "enumerate_small_permissible_cycles",
    "enumerate_subgroups",
    "gen_minor",
    "gen_target",
    "generate_subgroup",
    "halving_preimage",
    "is_permissible_cycle",
    "is_permissible_path",
    "lift_path",
    "parse_group_spec",
    "quotient",
    "realize",
    "reduce",
    "required_supernodes",
    "sigma",
    "sumset",
    "triad_split",
    "tree_path",
    "unit_weighting",
    "validate_minor",
    "verify_restricted",
    "verify_subdivision",
]
