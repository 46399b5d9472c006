"""Stability parameters for degree g-1 sheaves, their polytopes, and the twist action.

A stability parameter is stored by its two-vertex coordinates: the exact
rational value phi+(i, S) it assigns to the S side of the two-vertex graph of
each admissible pair.  Those coordinates determine a unique compatible vertex
assignment on every graph of loop-free circuit rank 0, computed here by
subtree sums.  All arithmetic is exact; parameters on a wall are representable
but every polytope-dependent operation rejects them with the wall named.
"""

from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateParameter,
    DegreeSumMismatch,
    EmptyOrFullSubset,
    GraphMismatch,
    InadmissiblePair,
    InvalidParameter,
    NonAmple,
    NotTreeLike,
)
from .graphs import (
    BoundaryPair,
    MarkedGraph,
    admissible_pairs,
    boundary_pair_of_edge,
    check_gn,
    contract,
    crossing_edge_indices,
    genus,
    loop_free_circuit_rank,
)

HALF = Fraction(1, 2)


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise InvalidParameter(f"floating point is not allowed, got {value!r}")
    return Fraction(value)


class StabilityParameter:
    """An element of the stability space, stored by its coordinates phi+(i, S)."""

    def __init__(self, g: int, n: int, coords: Mapping[BoundaryPair, Fraction]):
        check_gn(g, n)
        pairs = admissible_pairs(g, n)
        values = {pair: _as_fraction(c) for pair, c in coords.items()}
        if set(values) != set(pairs):
            missing = [str(p) for p in pairs if p not in values]
            stray = [str(p) for p in values if p not in set(pairs)]
            raise InvalidParameter(
                f"coordinates must cover exactly the admissible pairs of (g,n)=({g},{n});"
                f" missing {missing}, stray {stray}"
            )
        self.g = g
        self.n = n
        self._coords = values

    @property
    def pairs(self) -> tuple[BoundaryPair, ...]:
        return admissible_pairs(self.g, self.n)

    @property
    def coords(self) -> Mapping[BoundaryPair, Fraction]:
        return MappingProxyType(self._coords)

    def phi_plus(self, pair: BoundaryPair) -> Fraction:
        try:
            return self._coords[pair]
        except KeyError:
            raise InadmissiblePair(f"{pair} is not admissible for (g,n)=({self.g},{self.n})")

    def phi_minus(self, pair: BoundaryPair) -> Fraction:
        return self.g - 1 - self.phi_plus(pair)

    def _key(self):
        return (self.g, self.n, tuple(self._coords[p] for p in self.pairs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilityParameter):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}:{self._coords[p]}" for p in self.pairs)
        return f"StabilityParameter(g={self.g}, n={self.n}, {{{inner}}})"


class PolytopeLabel:
    """The integer vector d(i, S) naming a stability polytope."""

    def __init__(self, g: int, n: int, label: Mapping[BoundaryPair, int]):
        check_gn(g, n)
        pairs = admissible_pairs(g, n)
        values = {}
        for pair, d in label.items():
            if not isinstance(d, int) or isinstance(d, bool):
                raise InvalidParameter(f"label values must be integers, got {d!r} at {pair}")
            values[pair] = d
        if set(values) != set(pairs):
            raise InvalidParameter(
                f"label must cover exactly the admissible pairs of (g,n)=({g},{n})"
            )
        self.g = g
        self.n = n
        self._label = values

    @property
    def pairs(self) -> tuple[BoundaryPair, ...]:
        return admissible_pairs(self.g, self.n)

    @property
    def label(self) -> Mapping[BoundaryPair, int]:
        return MappingProxyType(self._label)

    def d(self, pair: BoundaryPair) -> int:
        try:
            return self._label[pair]
        except KeyError:
            raise InadmissiblePair(f"{pair} is not admissible for (g,n)=({self.g},{self.n})")

    def _key(self):
        return (self.g, self.n, tuple(self._label[p] for p in self.pairs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolytopeLabel):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}:{self._label[p]}" for p in self.pairs)
        return f"PolytopeLabel(g={self.g}, n={self.n}, {{{inner}}})"


class GraphParameter:
    """A vertex assignment on one graph summing to g - 1."""

    def __init__(self, graph: MarkedGraph, values: Mapping[str, Fraction]):
        vals = {v: _as_fraction(c) for v, c in values.items()}
        if set(vals) != set(graph.vertices):
            raise GraphMismatch("values must be defined on exactly the vertices of the graph")
        total = sum(vals.values())
        target = genus(graph) - 1
        if total != target:
            raise InvalidParameter(f"values must sum to g-1 = {target}, got {total}")
        self.graph = graph
        self._values = vals

    @property
    def values(self) -> Mapping[str, Fraction]:
        return MappingProxyType(self._values)

    def value(self, v: str) -> Fraction:
        return self._values[v]

    def subset_sum(self, subset: Iterable[str]) -> Fraction:
        return sum((self._values[v] for v in subset), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphParameter):
            return NotImplemented
        return self.graph == other.graph and self._values == other._values

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}:{self._values[v]}" for v in self.graph.vertices)
        return f"GraphParameter({{{inner}}})"


# -- walls and labels ----------------------------------------------------------


def _wall_hit(value: Fraction):
    """The integer d with value == d + 1/2, or None when value is off every wall."""
    shifted = value - HALF
    if shifted.denominator == 1:
        return int(shifted)
    return None


def first_wall(phi: StabilityParameter):
    """The first wall (pair, d) the parameter lies on, in canonical pair order, or None."""
    for pair in phi.pairs:
        d = _wall_hit(phi.phi_plus(pair))
        if d is not None:
            return pair, d
    return None


def is_nondegenerate(phi: StabilityParameter) -> bool:
    """True when no coordinate is a half-odd integer, i.e. the parameter is off every wall."""
    return first_wall(phi) is None


def polytope_label(phi: StabilityParameter) -> PolytopeLabel:
    """The polytope containing phi: d(i, S) is the integer nearest to phi+(i, S)."""
    wall = first_wall(phi)
    if wall is not None:
        pair, d = wall
        raise DegenerateParameter(
            f"parameter lies on wall H({pair}, d={d}): phi+{pair} = {phi.phi_plus(pair)}"
            f" sits between labels d={d} and d={d + 1}",
            pair=pair,
            d=d,
        )
    return PolytopeLabel(
        phi.g, phi.n, {pair: _nearest_int(phi.phi_plus(pair)) for pair in phi.pairs}
    )


def _nearest_int(value: Fraction) -> int:
    return math.floor(value + HALF)


# -- constructors ----------------------------------------------------------------


def _check_degrees(g: int, n: int, degrees: Sequence[int]) -> tuple[int, ...]:
    degrees = tuple(degrees)
    if len(degrees) != n or not all(isinstance(d, int) and not isinstance(d, bool) for d in degrees):
        raise DegreeSumMismatch(f"expected {n} integer degrees, got {degrees!r}")
    if sum(degrees) != g - 1:
        raise DegreeSumMismatch(f"degrees must sum to g-1 = {g - 1}, got {sum(degrees)}")
    return degrees


def phi_from_degrees(g: int, n: int, degrees: Sequence[int]) -> StabilityParameter:
    """The integral parameter with phi+(i, S) equal to the partial sum d_S.

    This is the parameter under which the line bundle twisted by the degree
    vector along the markings is stable; it is always nondegenerate.
    """
    check_gn(g, n)
    degrees = _check_degrees(g, n, degrees)
    coords = {
        pair: Fraction(sum(degrees[j - 1] for j in pair.S)) for pair in admissible_pairs(g, n)
    }
    return StabilityParameter(g, n, coords)


def degree_sum(degrees: Sequence[int], pair: BoundaryPair) -> int:
    """Partial sum d_S of a degree vector over the marking side S."""
    return sum(degrees[j - 1] for j in pair.S)


def phi_from_label(label: PolytopeLabel) -> StabilityParameter:
    """An interior point of the named polytope: phi+(i, S) = d(i, S) exactly."""
    return StabilityParameter(
        label.g, label.n, {pair: Fraction(label.d(pair)) for pair in label.pairs}
    )


def canonical_parameter(g: int, n: int) -> StabilityParameter:
    """Half the dualizing multidegree: phi+(i, S) = i - 1/2 on every pair.

    Lies on every wall family, so it is degenerate whenever any admissible
    pair exists; it corresponds to classical slope stability.
    """
    check_gn(g, n)
    return StabilityParameter(g, n, {pair: pair.i - HALF for pair in admissible_pairs(g, n)})


def dualizing_degree(G: MarkedGraph, v: str) -> int:
    """Degree of the dualizing sheaf on the component of v: 2 g(v) - 2 + valence."""
    return 2 * G.genus_of[v] - 2 + G.valence[v]


def phi_from_slope(
    G: MarkedGraph, A: Mapping[str, int], M: Mapping[str, int] | None = None
) -> GraphParameter:
    """The vertex assignment equivalent to slope stability for the polarization A twisted by M.

    values(v) = (A(v)/deg A) deg M + deg_v(omega)/2 - M(v).  A must be positive
    on every vertex; missing entries of M default to 0.
    """
    M = dict(M or {})
    for v in G.vertices:
        a = A.get(v)
        if not isinstance(a, int) or a <= 0:
            raise NonAmple(f"polarization must be a positive integer on every vertex, got {a!r} at {v}")
    deg_a = sum(A[v] for v in G.vertices)
    deg_m = sum(M.get(v, 0) for v in G.vertices)
    values = {
        v: Fraction(A[v], deg_a) * deg_m + Fraction(dualizing_degree(G, v), 2) - M.get(v, 0)
        for v in G.vertices
    }
    return GraphParameter(G, values)


# -- extension to graphs ---------------------------------------------------------


def _tree_structure(G: MarkedGraph, root: str):
    """Parent pointers and reverse-BFS order of the spanning tree of a rank-0 graph."""
    adjacency: dict[str, list[tuple[int, str]]] = {v: [] for v in G.vertices}
    for i in G.nonloop_indices:
        a, b = G.edges[i]
        adjacency[a].append((i, b))
        adjacency[b].append((i, a))
    parent: dict[str, tuple[int, str] | None] = {root: None}
    order = [root]
    queue = [root]
    while queue:
        v = queue.pop(0)
        for i, w in adjacency[v]:
            if w not in parent:
                parent[w] = (i, v)
                order.append(w)
                queue.append(w)
    return parent, order


def extend_to_graph(
    phi: StabilityParameter, G: MarkedGraph, root: str | None = None
) -> GraphParameter:
    """The unique vertex assignment on a rank-0 graph compatible with all contractions.

    Rooting the spanning tree anywhere, the sum over each descendant subtree
    is prescribed by the coordinate of the boundary pair its parent edge cuts
    out; vertex values are recovered as subtree-sum differences.  The result
    does not depend on the chosen root.
    """
    if loop_free_circuit_rank(G) != 0:
        raise NotTreeLike("parameters only extend to graphs of loop-free circuit rank 0")
    if genus(G) != phi.g or G.n != phi.n:
        raise GraphMismatch(
            f"graph has (g,n)=({genus(G)},{G.n}) but parameter has ({phi.g},{phi.n})"
        )
    if root is None:
        root = G.vertices[0]
    elif root not in G.genus_of:
        raise GraphMismatch(f"root {root!r} is not a vertex of the graph")

    total = Fraction(phi.g - 1)
    if len(G.vertices) == 1:
        return GraphParameter(G, {root: total})

    parent, order = _tree_structure(G, root)
    subtree = {root: total}
    for v in order[1:]:
        edge_index, _ = parent[v]
        pair, one_side = boundary_pair_of_edge(G, edge_index)
        # The descendant side of the parent edge is the side not containing the root.
        subtree[v] = phi.phi_plus(pair) if root not in one_side else phi.phi_minus(pair)

    values = dict(subtree)
    for v in order[1:]:
        _, p = parent[v]
        values[p] -= subtree[v]
    return GraphParameter(G, values)


def check_compatibility(pG: GraphParameter, edge_indices: Iterable[int], pH: GraphParameter) -> bool:
    """True when pH equals the pushforward of pG along the contraction of the given edges."""
    H, vertex_map = contract(pG.graph, edge_indices)
    if H != pH.graph:
        raise GraphMismatch("second parameter does not live on the contracted graph")
    sums = {w: Fraction(0) for w in H.vertices}
    for v, value in pG.values.items():
        sums[vertex_map[v]] += value
    return all(pH.value(w) == sums[w] for w in H.vertices)


# -- wall functionals --------------------------------------------------------------


def ell(pG: GraphParameter, subset: Iterable[str], d: int) -> Fraction:
    """The affine functional d - phi(subset) + (#crossing edges)/2 whose zero locus is a wall."""
    V0 = frozenset(subset)
    G = pG.graph
    if not V0 <= set(G.vertices):
        raise GraphMismatch(f"subset {sorted(V0)} contains non-vertices")
    if not V0 or V0 == frozenset(G.vertices):
        raise EmptyOrFullSubset("the subset must be proper and nonempty")
    crossing = len(crossing_edge_indices(G, V0))
    return d - pG.subset_sum(V0) + Fraction(crossing, 2)


# -- flatness and reducedness -------------------------------------------------------


def is_theta_flat(phi: StabilityParameter) -> bool:
    """True when the polytope of phi touches the canonical parameter: every d(i, S) is i-1 or i.

    Exactly these polytopes give a theta divisor that is flat over the moduli
    space, and they all share one divisor class.
    """
    label = polytope_label(phi)
    return all(label.d(pair) in (pair.i - 1, pair.i) for pair in label.pairs)


def is_theta_reduced(phi: StabilityParameter) -> bool:
    """True when the polytope of phi is adjacent (coordinatewise) to a flat one."""
    label = polytope_label(phi)
    return all(
        pair.i - 2 <= label.d(pair) <= pair.i + 1 for pair in label.pairs
    )


# -- twist action --------------------------------------------------------------------


def _check_twist(g: int, n: int, twist: Mapping[BoundaryPair, int]) -> dict[BoundaryPair, int]:
    pairs = set(admissible_pairs(g, n))
    out = {}
    for pair, t in twist.items():
        if pair not in pairs:
            raise InadmissiblePair(f"twist supported on inadmissible pair {pair}")
        if not isinstance(t, int) or isinstance(t, bool):
            raise InvalidParameter(f"twist coefficients must be integers, got {t!r}")
        out[pair] = t
    return out


def twist_label(label: PolytopeLabel, twist: Mapping[BoundaryPair, int]) -> PolytopeLabel:
    """Translate a polytope label by a boundary twist: d'(i, S) = d(i, S) + t(i, S).

    A positive coefficient is one copy of the boundary line bundle raising the
    S-side degree by 1; missing pairs act trivially.
    """
    t = _check_twist(label.g, label.n, twist)
    return PolytopeLabel(
        label.g, label.n, {pair: label.d(pair) + t.get(pair, 0) for pair in label.pairs}
    )


def connecting_twist(label1: PolytopeLabel, label2: PolytopeLabel) -> dict[BoundaryPair, int]:
    """The unique twist carrying the first polytope to the second: t = d2 - d1."""
    if (label1.g, label1.n) != (label2.g, label2.n):
        raise InvalidParameter("labels live over different (g, n)")
    return {pair: label2.d(pair) - label1.d(pair) for pair in label1.pairs}


def twist_parameter(phi: StabilityParameter, twist: Mapping[BoundaryPair, int]) -> StabilityParameter:
    """Translate a parameter coordinatewise by an integer twist (phi+ += t)."""
    t = _check_twist(phi.g, phi.n, twist)
    return StabilityParameter(
        phi.g, phi.n, {pair: phi.phi_plus(pair) + t.get(pair, 0) for pair in phi.pairs}
    )
