"""Finite permutation groups at desk scale.

Groups are stored as explicit, canonically sorted element lists (orders
up to a small bound), which keeps intersection, index and subgroup
enumeration trivially correct. Scenario files write permutations in
1-based disjoint-cycle notation, e.g. ``"(1 2 3)(4 5)"``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ArgumentError, ContainmentError, ParseError, SizeError

MAX_ENUMERATION_ORDER = 48


@dataclass(frozen=True, order=True)
class Perm:
    """Permutation of ``{0, ..., n-1}`` given by its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ArgumentError(f"images {self.images} are not a bijection of 0..{n - 1}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        # function composition: (p * q)(i) = p(q(i))
        if self.degree != other.degree:
            raise ArgumentError("cannot compose permutations of different degree")
        return Perm(tuple(self.images[other.images[i]] for i in range(self.degree)))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))


def identity_perm(degree: int) -> Perm:
    return Perm(tuple(range(degree)))


def perm_from_cycles(cycles: list[list[int]], degree: int) -> Perm:
    """Permutation from 0-based cycles, applied rightmost cycle first."""
    result = identity_perm(degree)
    for cycle in cycles:
        images = list(range(degree))
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            if not (0 <= a < degree):
                raise ArgumentError(f"point {a} outside degree {degree}")
            images[a] = b
        result = result * Perm(tuple(images))
    return result


_CYCLE_TOKEN = re.compile(r"\s*(\(|\)|\d+|,)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse 1-based disjoint-cycle notation such as ``"(1 2 3)(4 5)"``.

    ``"()"`` and the empty string denote the identity.
    """
    cycles: list[list[int]] = []
    current: list[int] | None = None
    pos = 0
    stripped = text.strip()
    if stripped in ("", "()"):
        return identity_perm(degree)
    while pos < len(text):
        match = _CYCLE_TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r} in cycle string", pos)
        token = match.group(1)
        if token == "(":
            if current is not None:
                raise ParseError("nested '(' in cycle string", pos)
            current = []
        elif token == ")":
            if current is None:
                raise ParseError("unmatched ')' in cycle string", pos)
            cycles.append(current)
            current = None
        elif token == ",":
            if current is None:
                raise ParseError("',' outside cycle", pos)
        else:
            if current is None:
                raise ParseError(f"point {token} outside parentheses", pos)
            point = int(token)
            if not (1 <= point <= degree):
                raise ParseError(f"point {point} outside 1..{degree}", pos)
            current.append(point - 1)
        pos = match.end()
    if current is not None:
        raise ParseError("unclosed '(' in cycle string", len(text))
    for cycle in cycles:
        if len(cycle) != len(set(cycle)):
            raise ParseError("repeated point within a cycle")
    return perm_from_cycles(cycles, degree)


def format_cycles(perm: Perm) -> str:
    """1-based disjoint-cycle string; identity prints as ``"()"``."""
    seen: set[int] = set()
    parts = []
    for start in range(perm.degree):
        if start in seen or perm(start) == start:
            seen.add(start)
            continue
        cycle = [start]
        seen.add(start)
        point = perm(start)
        while point != start:
            cycle.append(point)
            seen.add(point)
            point = perm(point)
        parts.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
    return "".join(parts) if parts else "()"


class PermGroup:
    """Finite permutation group stored by its full, sorted element list."""

    def __init__(self, degree: int, elements):
        elems = tuple(sorted(set(elements)))
        if not elems:
            raise ArgumentError("a group needs at least the identity")
        for g in elems:
            if g.degree != degree:
                raise ArgumentError("element degree mismatch")
        self.degree = degree
        self.elements = elems
        self._element_set = frozenset(elems)
        self._validate()

    def _validate(self):
        if identity_perm(self.degree) not in self._element_set:
            raise ArgumentError("group does not contain the identity")
        for g in self.elements:
            if g.inverse() not in self._element_set:
                raise ArgumentError(f"missing inverse of {format_cycles(g)}")
            for h in self.elements:
                if g * h not in self._element_set:
                    raise ArgumentError("element list is not closed under products")
        if math.factorial(self.degree) % len(self.elements) != 0:
            raise ArgumentError("order violates Lagrange's theorem")  # pragma: no cover

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, perm: Perm) -> bool:
        return perm in self._element_set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={len(self)})"

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self._element_set <= other._element_set


def _orbit_closure(degree: int, seed) -> tuple[Perm, ...]:
    elements = {identity_perm(degree)}
    frontier = [identity_perm(degree)]
    generators = list(seed)
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = x * g
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(elements)


def closure(degree: int, generators) -> PermGroup:
    """Smallest group on ``degree`` points containing the generators."""
    gens = list(generators)
    for g in gens:
        if g.degree != degree:
            raise ArgumentError(f"generator degree {g.degree} does not match {degree}")
    return PermGroup(degree, _orbit_closure(degree, gens))


def index(big: PermGroup, small: PermGroup) -> int:
    """Subgroup index ``[G : H]``; requires elementwise containment."""
    if not small.is_subgroup_of(big):
        raise ContainmentError("H is not a subgroup of G")
    return len(big) // len(small)


def intersect(k: PermGroup, ell: PermGroup) -> PermGroup:
    """Elementwise intersection of two groups of the same degree."""
    if k.degree != ell.degree:
        raise ArgumentError("cannot intersect groups of different degree")
    return PermGroup(k.degree, k._element_set & ell._element_set)


def intermediate_subgroups(
    big: PermGroup,
    small: PermGroup,
    max_order: int = MAX_ENUMERATION_ORDER,
) -> list[PermGroup]:
    """All subgroups ``M`` with ``H <= M <= G``, endpoints included.

    Works by repeatedly extending known intermediate subgroups by a single
    element of ``G`` and closing; complete because every intermediate
    subgroup is reached from ``H`` through a maximal chain.
    """
    if not small.is_subgroup_of(big):
        raise ContainmentError("H is not a subgroup of G")
    if len(big) > max_order:
        raise SizeError(f"group order {len(big)} exceeds enumeration bound {max_order}")
    found: dict[tuple, PermGroup] = {small.elements: small}
    frontier = [small]
    while frontier:
        nxt = []
        for m in frontier:
            for g in big.elements:
                if g in m:
                    continue
                closed = _orbit_closure(big.degree, m.elements + (g,))
                key = tuple(sorted(closed))
                if key not in found:
                    grp = PermGroup(big.degree, closed)
                    found[key] = grp
                    nxt.append(grp)
        frontier = nxt
    return sorted(found.values(), key=lambda grp: (len(grp), grp.elements))


def conjugacy_classes(group: PermGroup) -> list[frozenset[Perm]]:
    """Conjugacy classes of the group, as frozensets of elements."""
    remaining = set(group.elements)
    classes = []
    while remaining:
        g = min(remaining)
        cls = frozenset(h * g * h.inverse() for h in group.elements)
        classes.append(cls)
        remaining -= cls
    return classes


def symmetric(n: int) -> PermGroup:
    """Full symmetric group on ``n`` points."""
    if n < 1:
        raise ArgumentError("degree must be >= 1")
    gens = []
    if n >= 2:
        gens.append(perm_from_cycles([[0, 1]], n))
    if n >= 3:
        gens.append(perm_from_cycles([list(range(n))], n))
    return closure(n, gens)


def cyclic(n: int) -> PermGroup:
    """Cyclic group generated by the n-cycle on ``n`` points."""
    if n < 1:
        raise ArgumentError("degree must be >= 1")
    if n == 1:
        return closure(1, [])
    return closure(n, [perm_from_cycles([list(range(n))], n)])


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order ``2n`` acting on the vertices of an n-gon."""
    if n < 3:
        raise ArgumentError("dihedral group needs n >= 3")
    rotation = perm_from_cycles([list(range(n))], n)
    reflection = Perm(tuple((n - i) % n for i in range(n)))
    return closure(n, [rotation, reflection])


def klein_four() -> PermGroup:
    """Klein four-group of double transpositions inside S4."""
    return closure(
        4,
        [perm_from_cycles([[0, 1], [2, 3]], 4), perm_from_cycles([[0, 2], [1, 3]], 4)],
    )


def trivial(degree: int) -> PermGroup:
    """The one-element group on ``degree`` points."""
    return closure(degree, [])
