"""Multidegrees of degree g-1 sheaves and their stability against a vertex parameter.

A line bundle is recorded by its per-vertex degrees; a rank-1 torsion-free
sheaf additionally records the set of nodes (edges) where it fails to be
locally free, with its degrees read on the partial normalization.  Stability
is the system of partial-degree lower bounds against the parameter; testing
only elementary subgraphs is equivalent to testing all subgraphs, and both
routes are implemented.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    DegenerateParameter,
    DegreeSumMismatch,
    EmptySubset,
    GraphMismatch,
    InvalidGraph,
    NotTreeLike,
)
from .graphs import (
    MarkedGraph,
    boundary_pair_of_edge,
    crossing_edge_indices,
    elementary_subgraphs,
    genus,
    loop_free_circuit_rank,
)
from .stability import HALF, GraphParameter, _tree_structure


class Multidegree:
    """Per-vertex degrees of a line bundle of total degree g - 1."""

    def __init__(self, graph: MarkedGraph, deg: Mapping[str, int]):
        values = dict(deg)
        if set(values) != set(graph.vertices):
            raise GraphMismatch("degrees must be defined on exactly the vertices of the graph")
        for v, d in values.items():
            if not isinstance(d, int) or isinstance(d, bool):
                raise DegreeSumMismatch(f"degrees must be integers, got {d!r} at {v}")
        target = genus(graph) - 1
        if sum(values.values()) != target:
            raise DegreeSumMismatch(
                f"total degree must be g-1 = {target}, got {sum(values.values())}"
            )
        self.graph = graph
        self._deg = values

    @property
    def deg(self) -> Mapping[str, int]:
        return MappingProxyType(self._deg)

    # Line bundles are the torsion-free sheaves with no failures; sharing
    # these accessors lets every stability routine accept either type.
    @property
    def norm_deg(self) -> Mapping[str, int]:
        return MappingProxyType(self._deg)

    @property
    def failures(self) -> frozenset[int]:
        return frozenset()

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self._deg[v] for v in self.graph.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multidegree):
            return NotImplemented
        return self.graph == other.graph and self._deg == other._deg

    def __hash__(self) -> int:
        return hash((self.graph, self.as_tuple()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}:{self._deg[v]}" for v in self.graph.vertices)
        return f"Multidegree({{{inner}}})"


class TorsionFreeDegree:
    """A rank-1 torsion-free sheaf of total degree g - 1, by normalization degrees and failure nodes.

    ``failures`` is a set of edge indices; the sum of the normalization
    degrees plus the failure count must equal g - 1.
    """

    def __init__(self, graph: MarkedGraph, norm_deg: Mapping[str, int], failures: Iterable[int] = ()):
        values = dict(norm_deg)
        if set(values) != set(graph.vertices):
            raise GraphMismatch("degrees must be defined on exactly the vertices of the graph")
        for v, d in values.items():
            if not isinstance(d, int) or isinstance(d, bool):
                raise DegreeSumMismatch(f"degrees must be integers, got {d!r} at {v}")
        fail = frozenset(failures)
        for i in fail:
            if not isinstance(i, int) or not 0 <= i < len(graph.edges):
                raise InvalidGraph(f"failure index {i!r} out of range for {len(graph.edges)} edges")
        target = genus(graph) - 1
        if sum(values.values()) + len(fail) != target:
            raise DegreeSumMismatch(
                f"normalization degrees plus failures must equal g-1 = {target},"
                f" got {sum(values.values())} + {len(fail)}"
            )
        self.graph = graph
        self._norm_deg = values
        self.failures = fail

    @property
    def norm_deg(self) -> Mapping[str, int]:
        return MappingProxyType(self._norm_deg)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorsionFreeDegree):
            return NotImplemented
        return (
            self.graph == other.graph
            and self._norm_deg == other._norm_deg
            and self.failures == other.failures
        )

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}:{self._norm_deg[v]}" for v in self.graph.vertices)
        return f"TorsionFreeDegree({{{inner}}}, failures={sorted(self.failures)})"


Sheaf = Multidegree | TorsionFreeDegree


def partial_degree(F: Sheaf, subset: Iterable[str]) -> int:
    """Degree of the maximal torsion-free quotient on a subcurve.

    Sums the normalization degrees over the subset and counts the failure
    edges internal to it (a failure loop is internal to its vertex).
    """
    V0 = frozenset(subset)
    if not V0:
        raise EmptySubset("partial degrees need a nonempty vertex subset")
    G = F.graph
    if not V0 <= set(G.vertices):
        raise GraphMismatch(f"subset {sorted(V0)} contains non-vertices")
    internal = sum(
        1 for i in F.failures if G.edges[i][0] in V0 and G.edges[i][1] in V0
    )
    return sum(F.norm_deg[v] for v in V0) + internal


def failure_crossings(F: Sheaf, subset: frozenset[str]) -> int:
    """Number of failure nodes joining the subset to its complement."""
    G = F.graph
    return sum(1 for i in F.failures if (G.edges[i][0] in subset) != (G.edges[i][1] in subset))


def stability_inequality(pG: GraphParameter, F: Sheaf, subset: frozenset[str], strict: bool) -> bool:
    """The lower-bound form on one subgraph: deg_{V0}(F) >= phi(V0) - (#crossing)/2."""
    bound = pG.subset_sum(subset) - Fraction(len(crossing_edge_indices(pG.graph, subset)), 2)
    lhs = partial_degree(F, subset)
    return lhs > bound if strict else lhs >= bound


def symmetric_inequality(pG: GraphParameter, F: Sheaf, subset: frozenset[str], strict: bool) -> bool:
    """The two-sided form on one subgraph, equivalent to the lower bound on both sides.

    |deg_{V0}(F) - phi(V0) + delta/2| <= (#crossing - delta)/2, where delta
    counts failure nodes crossing the subset.
    """
    delta = failure_crossings(F, subset)
    crossing = len(crossing_edge_indices(pG.graph, subset))
    lhs = abs(partial_degree(F, subset) - pG.subset_sum(subset) + Fraction(delta, 2))
    rhs = Fraction(crossing - delta, 2)
    return lhs < rhs if strict else lhs <= rhs


def _all_proper_subsets(G: MarkedGraph):
    verts = G.vertices
    for r in range(1, len(verts)):
        for combo in itertools.combinations(verts, r):
            yield frozenset(combo)


def is_semistable(pG: GraphParameter, F: Sheaf, strict: bool = False, mode: str = "elementary") -> bool:
    """Whether the sheaf satisfies the stability bound on every subgraph of the chosen mode.

    mode="elementary" checks only subgraphs with connected complement on both
    sides, which suffices; mode="all" checks every proper subgraph.  The two
    agree on all inputs.
    """
    if F.graph != pG.graph:
        raise GraphMismatch("sheaf and parameter live on different graphs")
    if mode == "elementary":
        subsets = elementary_subgraphs(pG.graph)
    elif mode == "all":
        subsets = _all_proper_subsets(pG.graph)
    else:
        raise ValueError(f"mode must be 'elementary' or 'all', got {mode!r}")
    return all(stability_inequality(pG, F, subset, strict) for subset in subsets)


def stable_multidegree(pG: GraphParameter) -> Multidegree:
    """The unique stable line-bundle multidegree on a rank-0 graph.

    Rooting the spanning tree, the partial degree on every descendant subtree
    is forced to the integer nearest its parameter sum; per-vertex degrees are
    the subtree differences.  Raises DegenerateParameter when some subtree sum
    is half-odd (the parameter sits on the corresponding wall).
    """
    G = pG.graph
    if loop_free_circuit_rank(G) != 0:
        raise NotTreeLike("unique stable multidegrees require loop-free circuit rank 0")
    root = G.vertices[0]
    total = genus(G) - 1
    if len(G.vertices) == 1:
        return Multidegree(G, {root: total})

    parent, order = _tree_structure(G, root)
    children: dict[str, list[str]] = {v: [] for v in G.vertices}
    for v in order[1:]:
        children[parent[v][1]].append(v)

    subtree_sum: dict[str, Fraction] = {}
    for v in reversed(order):
        acc = pG.value(v)
        for c in children[v]:
            acc += subtree_sum[c]
        subtree_sum[v] = acc

    rounded: dict[str, int] = {root: total}
    for v in order[1:]:
        s = subtree_sum[v]
        if (s - HALF).denominator == 1:
            edge_index, _ = parent[v]
            pair, one_side = boundary_pair_of_edge(G, edge_index)
            phi_plus = s if root not in one_side else genus(G) - 1 - s
            d = int(phi_plus - HALF)
            raise DegenerateParameter(
                f"subtree sum {s} is half-odd: parameter lies on wall H({pair}, d={d})",
                pair=pair,
                d=d,
            )
        rounded[v] = math.floor(s + HALF)

    deg = {}
    for v in G.vertices:
        deg[v] = rounded[v] - sum(rounded[c] for c in children[v])
    return Multidegree(G, deg)


def all_stable_multidegrees_bruteforce(pG: GraphParameter, strict: bool = False) -> list[Multidegree]:
    """Every (semi)stable line-bundle multidegree, by exhaustive search.

    The search box comes from the singleton-subgraph inequalities (degree of
    each vertex within half its non-loop valence of its parameter value),
    widened by one on each side for safety; candidates summing to g - 1 are
    filtered by the full-subgraph stability test.  Results are sorted by
    degree tuple.  This is deliberately independent of `stable_multidegree`.
    """
    G = pG.graph
    verts = G.vertices
    k = len(verts)
    total = genus(G) - 1
    if k == 1:
        return [Multidegree(G, {verts[0]: total})]

    nonloop_valence = {v: 0 for v in verts}
    for i in G.nonloop_indices:
        a, b = G.edges[i]
        nonloop_valence[a] += 1
        nonloop_valence[b] += 1

    lo = []
    hi = []
    for v in verts:
        half_spread = Fraction(nonloop_valence[v], 2)
        lo.append(math.ceil(pG.value(v) - half_spread) - 1)
        hi.append(math.floor(pG.value(v) + half_spread) + 1)

    # Clear denominators once so the inner loop is pure integer arithmetic:
    # deg(V0) >= phi(V0) - cross/2 becomes scale*deg(V0) >= threshold(V0).
    scale = 2 * math.lcm(*(pG.value(v).denominator for v in verts))
    phi_scaled = [int(pG.value(v) * scale) for v in verts]
    subsets = []
    for r in range(1, k):
        for combo in itertools.combinations(range(k), r):
            subset = frozenset(verts[i] for i in combo)
            crossing = len(crossing_edge_indices(G, subset))
            threshold = sum(phi_scaled[i] for i in combo) - (scale // 2) * crossing
            subsets.append((combo, threshold))

    suffix_lo = [0] * (k + 1)
    suffix_hi = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_lo[i] = suffix_lo[i + 1] + lo[i]
        suffix_hi[i] = suffix_hi[i + 1] + hi[i]

    found: list[tuple[int, ...]] = []

    def admits(degs: list[int]) -> bool:
        for combo, threshold in subsets:
            s = 0
            for i in combo:
                s += degs[i]
            s *= scale
            if s < threshold or (strict and s == threshold):
                return False
        return True

    def search(i: int, acc: int, degs: list[int]) -> None:
        if i == k - 1:
            d = total - acc
            if lo[i] <= d <= hi[i]:
                degs.append(d)
                if admits(degs):
                    found.append(tuple(degs))
                degs.pop()
            return
        for d in range(lo[i], hi[i] + 1):
            rest = total - acc - d
            if suffix_lo[i + 1] <= rest <= suffix_hi[i + 1]:
                degs.append(d)
                search(i + 1, acc + d, degs)
                degs.pop()

    search(0, 0, [])
    found.sort()
    return [Multidegree(G, dict(zip(verts, degs))) for degs in found]
