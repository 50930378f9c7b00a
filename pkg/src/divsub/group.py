"""Finite abelian group arithmetic.

Groups are explicit direct sums of cyclic factors Z_{d_1} x ... x Z_{d_k};
elements are canonical residue tuples. Subgroups are stored as explicit
element sets, which keeps every lemma checkable by enumeration at desk scale.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import ResourceError, StructuralError

Element = tuple[int, ...]

#: Largest group order accepted by subgroup enumeration.
DEFAULT_ORDER_CAP = 512

#: Safety valve for pathological subgroup lattices (e.g. high-rank 2-groups).
SUBGROUP_COUNT_CAP = 100_000


class FiniteAbelianGroup:
    """Z_{d_1} x ... x Z_{d_k} with componentwise modular arithmetic."""

    __slots__ = ("cyclic_factors", "order", "zero")

    def __init__(self, cyclic_factors):
        factors = tuple(int(d) for d in cyclic_factors)
        if not factors or any(d < 1 for d in factors):
            raise StructuralError(f"cyclic factors must be positive integers, got {factors!r}")
        self.cyclic_factors = factors
        order = 1
        for d in factors:
            order *= d
        self.order = order
        self.zero: Element = (0,) * len(factors)

    def element(self, residues) -> Element:
        """Canonicalize a residue vector (reduce each entry mod its factor)."""
        residues = tuple(int(r) for r in residues)
        if len(residues) != len(self.cyclic_factors):
            raise StructuralError(
                f"element has {len(residues)} residues, group has {len(self.cyclic_factors)} factors"
            )
        return tuple(r % d for r, d in zip(residues, self.cyclic_factors))

    def contains(self, a: Element) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == len(self.cyclic_factors)
            and all(0 <= r < d for r, d in zip(a, self.cyclic_factors))
        )

    def _check(self, a: Element) -> None:
        if not self.contains(a):
            raise StructuralError(f"{a!r} is not a canonical element of {self}")

    def add(self, a: Element, b: Element) -> Element:
        self._check(a)
        self._check(b)
        return tuple((x + y) % d for x, y, d in zip(a, b, self.cyclic_factors))

    def neg(self, a: Element) -> Element:
        self._check(a)
        return tuple((-x) % d for x, d in zip(a, self.cyclic_factors))

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def double(self, a: Element) -> Element:
        return self.add(a, a)

    def scale(self, k: int, a: Element) -> Element:
        self._check(a)
        return tuple((k * x) % d for x, d in zip(a, self.cyclic_factors))

    def sum(self, items) -> Element:
        total = self.zero
        for a in items:
            total = self.add(total, a)
        return total

    def elements(self):
        """All elements in lexicographic residue order."""
        return itertools.product(*(range(d) for d in self.cyclic_factors))

    def spec_string(self) -> str:
        return " x ".join(f"Z_{d}" for d in self.cyclic_factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.cyclic_factors == other.cyclic_factors

    def __hash__(self) -> int:
        return hash(self.cyclic_factors)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({self.spec_string()})"


_FACTOR_RE = re.compile(r"^Z_?(\d+)(?:\^(\d+))?$", re.IGNORECASE)


def parse_group_spec(spec: str) -> FiniteAbelianGroup:
    """Parse a group spec string: "Z_q", "Z_a x Z_b x ...", "Z2^d" sugar.

    Underscores are optional and 'x' separates factors; "Z2^3" means
    Z_2 x Z_2 x Z_2.
    """
    factors: list[int] = []
    for part in re.split(r"\s*[x×]\s*", spec.strip()):
        m = _FACTOR_RE.match(part.strip())
        if not m:
            raise StructuralError(f"cannot parse group factor {part!r} in spec {spec!r}")
        base = int(m.group(1))
        power = int(m.group(2)) if m.group(2) else 1
        if base < 1 or power < 1:
            raise StructuralError(f"invalid factor {part!r} in group spec {spec!r}")
        factors.extend([base] * power)
    return FiniteAbelianGroup(factors)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `parent`, stored as an explicit element set plus generators."""

    parent: FiniteAbelianGroup
    elements: frozenset
    generators: tuple = ()

    def __post_init__(self):
        if self.parent.zero not in self.elements:
            raise StructuralError("subgroup must contain the zero element")

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, a: Element) -> bool:
        return a in self.elements

    def is_subset_of(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def is_proper_subgroup_of(self, other: "Subgroup") -> bool:
        return self.elements < other.elements

    def sorted_elements(self) -> list[Element]:
        return sorted(self.elements)

    def canonical_key(self):
        return (len(self.elements), self.sorted_elements())

    def __repr__(self) -> str:
        return f"Subgroup({sorted(self.elements)!r})"


def whole_group(A: FiniteAbelianGroup) -> Subgroup:
    gens = tuple(
        A.element([1 if i == j else 0 for j in range(len(A.cyclic_factors))])
        for i in range(len(A.cyclic_factors))
    )
    return Subgroup(A, frozenset(A.elements()), gens)


def trivial_subgroup(A: FiniteAbelianGroup) -> Subgroup:
    return Subgroup(A, frozenset([A.zero]), ())


def generate_subgroup(A: FiniteAbelianGroup, gens) -> Subgroup:
    """Smallest subgroup of A containing every element of `gens`.

    The empty generating set yields the trivial subgroup {0}.
    """
    gens = [A.element(g) for g in gens]
    closed = {A.zero}
    frontier = [A.zero]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = A.add(cur, g)
            if nxt not in closed:
                closed.add(nxt)
                frontier.append(nxt)
    # gens have finite order, so closure under addition already gives negation.
    return Subgroup(A, frozenset(closed), tuple(sorted(set(gens))))


def sumset(A: FiniteAbelianGroup, parts) -> frozenset:
    """Sumset A_1 + ... + A_k; the empty list of parts yields {0}."""
    acc = {A.zero}
    for part in parts:
        part = [A.element(p) for p in part]
        if not part:
            raise StructuralError("sumset parts must be nonempty")
        acc = {A.add(a, p) for a in acc for p in part}
    return frozenset(acc)


def enumerate_subgroups(
    A: FiniteAbelianGroup,
    order_cap: int = DEFAULT_ORDER_CAP,
    count_cap: int = SUBGROUP_COUNT_CAP,
) -> list[Subgroup]:
    """Every subgroup of A exactly once, canonically ordered.

    Computed as the join-closure of all cyclic subgroups, which avoids the
    2^|A| subset blowup. Ordered by size, then lexicographic element list.
    """
    if A.order > order_cap:
        raise ResourceError(f"group order {A.order} exceeds enumeration cap {order_cap}")
    cyclics: dict[frozenset, tuple] = {frozenset([A.zero]): ()}
    for a in A.elements():
        sg = generate_subgroup(A, [a])
        cyclics.setdefault(sg.elements, sg.generators)
    found: dict[frozenset, tuple] = dict(cyclics)
    frontier = list(cyclics.items())
    while frontier:
        elems, gens = frontier.pop()
        for celems, cgens in cyclics.items():
            if celems <= elems:
                continue
            joined = generate_subgroup(A, tuple(set(gens) | set(cgens)))
            if joined.elements not in found:
                if len(found) >= count_cap:
                    raise ResourceError(
                        f"subgroup count exceeds cap {count_cap} for {A.spec_string()}"
                    )
                found[joined.elements] = joined.generators
                frontier.append((joined.elements, joined.generators))
    subgroups = [Subgroup(A, elems, gens) for elems, gens in found.items()]
    subgroups.sort(key=Subgroup.canonical_key)
    return subgroups


def halving_preimage(A: FiniteAbelianGroup, B: Subgroup) -> Subgroup:
    """The subgroup {a in A : a + a in B}; always contains B."""
    if B.parent != A:
        raise StructuralError("subgroup does not belong to this group")
    elems = frozenset(a for a in A.elements() if A.double(a) in B.elements)
    return Subgroup(A, elems, tuple(sorted(elems)))


def sigma(A: FiniteAbelianGroup, order_cap: int = DEFAULT_ORDER_CAP) -> int:
    """max over subgroups B of |{a : 2a in B}| / |B|.

    The preimage set is itself a subgroup containing B, so the ratio is the
    index of B in it and the maximum is an exact positive integer.
    """
    best = 1
    for B in enumerate_subgroups(A, order_cap=order_cap):
        pre = halving_preimage(A, B)
        if len(pre.elements) % len(B.elements) != 0:
            raise AssertionError("halving preimage size not divisible by subgroup size")
        best = max(best, len(pre.elements) // len(B.elements))
    return best


@dataclass(frozen=True)
class QuotientView:
    """Coset partition of `numerator` by `denominator` with canonical labels.

    The label of a coset is its lexicographically smallest element.
    """

    numerator: Subgroup
    denominator: Subgroup
    cosets: tuple
    labels: tuple

    def coset_label_of(self, a: Element) -> Element:
        for label, coset in zip(self.labels, self.cosets):
            if a in coset:
                return label
        raise StructuralError(f"{a!r} is not in the numerator subgroup")

    @property
    def size(self) -> int:
        return len(self.cosets)


def quotient(Bp: Subgroup, B: Subgroup) -> QuotientView:
    """Coset partition Bp / B; requires B <= Bp."""
    if Bp.parent != B.parent:
        raise StructuralError("subgroups live in different groups")
    if not B.elements <= Bp.elements:
        raise StructuralError("denominator is not contained in numerator")
    A = Bp.parent
    seen: set = set()
    cosets = []
    for a in sorted(Bp.elements):
        if a in seen:
            continue
        coset = frozenset(A.add(a, b) for b in B.elements)
        seen |= coset
        cosets.append(coset)
    cosets.sort(key=lambda c: min(c))
    labels = tuple(min(c) for c in cosets)
    return QuotientView(Bp, B, tuple(cosets), labels)
