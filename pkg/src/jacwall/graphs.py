"""Stable marked dual graphs: invariants, contractions, and boundary combinatorics.

A marked graph is the combinatorial shadow of a nodal curve: vertices carry
nonnegative genera, edges are nodes (loops allowed), and markings 1..n are
assigned to vertices.  Everything here is immutable and pure, so all
operations are safe to call concurrently.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    InadmissiblePair,
    InvalidGN,
    InvalidGraph,
    LoopEdge,
    NotTreeLike,
)

Edge = tuple[str, str]


def check_gn(g: int, n: int) -> None:
    """Validate a (genus, marking count) pair, raising InvalidGN otherwise."""
    if not isinstance(g, int) or not isinstance(n, int):
        raise InvalidGN(f"g and n must be integers, got g={g!r}, n={n!r}")
    if g < 0:
        raise InvalidGN(f"genus must be nonnegative, got g={g}")
    if n < 1:
        raise InvalidGN(f"at least one marking is required, got n={n}")
    if g == 0 and n < 3:
        raise InvalidGN(f"genus 0 requires n >= 3, got n={n}")


@dataclass(frozen=True)
class BoundaryPair:
    """Index (i, S) of a boundary divisor: a genus-i side carrying the markings S, with 1 in S."""

    i: int
    S: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "S", frozenset(self.S))
        if not all(isinstance(j, int) and j >= 1 for j in self.S):
            raise InadmissiblePair(f"markings must be positive integers, got {sorted(self.S)}")
        if 1 not in self.S:
            raise InadmissiblePair(f"marking 1 must lie on the S side, got S={sorted(self.S)}")
        if not isinstance(self.i, int) or self.i < 0:
            raise InadmissiblePair(f"side genus must be a nonnegative integer, got i={self.i!r}")

    def is_admissible(self, g: int, n: int) -> bool:
        """True when (i, S) indexes a boundary divisor of the genus-g, n-marked moduli space."""
        if not 0 <= self.i <= g:
            return False
        if not self.S <= frozenset(range(1, n + 1)):
            return False
        if self.i == g and len(self.S) > n - 2:
            return False
        if self.i == 0 and len(self.S) < 2:
            return False
        return True

    @property
    def sort_key(self) -> tuple[int, int]:
        """Canonical order: by side genus, then by S as a bitmask."""
        return (self.i, sum(1 << (j - 1) for j in self.S))

    def __str__(self) -> str:
        return "({},{{{}}})".format(self.i, ",".join(str(j) for j in sorted(self.S)))


def normalize_pair(g: int, n: int, i: int, markings: Iterable[int]) -> BoundaryPair:
    """Return the admissible pair for the side (i, markings), flipping to the side with marking 1.

    A side not containing marking 1 is replaced by its complement (g - i, S^c).
    Raises InadmissiblePair when the normalized pair is not admissible.
    """
    check_gn(g, n)
    S = frozenset(markings)
    all_marks = frozenset(range(1, n + 1))
    if not S <= all_marks:
        raise InadmissiblePair(f"markings {sorted(S)} not contained in 1..{n}")
    if 1 not in S:
        i, S = g - i, all_marks - S
    pair = BoundaryPair(i, S)
    if not pair.is_admissible(g, n):
        raise InadmissiblePair(f"pair {pair} is not admissible for (g,n)=({g},{n})")
    return pair


class MarkedGraph:
    """An immutable connected stable marked graph.

    Vertices are string ids with nonnegative genera.  Edges form a multiset of
    unordered id pairs, stored sorted so that every edge is addressed by its
    index into ``edges`` (this keeps parallel edges and loops unambiguous).
    Markings 1..n map to vertex ids.

    Construction validates connectedness and stability: every genus-0 vertex
    must have valence (loops counted twice) plus markings at least 3.
    """

    def __init__(
        self,
        genera: Mapping[str, int],
        edges: Iterable[Sequence[str]],
        markings: Mapping[int, str],
    ):
        genus_of = dict(genera)
        if not genus_of:
            raise InvalidGraph("a graph needs at least one vertex")
        for v, gv in genus_of.items():
            if not isinstance(v, str) or not v:
                raise InvalidGraph(f"vertex ids must be nonempty strings, got {v!r}")
            if not isinstance(gv, int) or gv < 0:
                raise InvalidGraph(f"genus of {v} must be a nonnegative integer, got {gv!r}")

        edge_list: list[Edge] = []
        for e in edges:
            a, b = e
            if a not in genus_of or b not in genus_of:
                raise InvalidGraph(f"edge ({a!r},{b!r}) has an unknown endpoint")
            edge_list.append((a, b) if a <= b else (b, a))
        edge_list.sort()

        marking_of = {}
        for j, v in dict(markings).items():
            if not isinstance(j, int):
                raise InvalidGraph(f"marking labels must be integers, got {j!r}")
            if v not in genus_of:
                raise InvalidGraph(f"marking {j} placed on unknown vertex {v!r}")
            marking_of[j] = v
        n = len(marking_of)
        if set(marking_of) != set(range(1, n + 1)) or n < 1:
            raise InvalidGraph(f"markings must be exactly 1..n, got {sorted(marking_of)}")

        self._genus_of = genus_of
        self.edges: tuple[Edge, ...] = tuple(edge_list)
        self._marking_of = marking_of

        self._check_connected()
        self._check_stable()

    # -- derived views ------------------------------------------------------

    @property
    def genus_of(self) -> Mapping[str, int]:
        return MappingProxyType(self._genus_of)

    @property
    def marking_of(self) -> Mapping[int, str]:
        return MappingProxyType(self._marking_of)

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self._genus_of))

    @property
    def n(self) -> int:
        return len(self._marking_of)

    @cached_property
    def valence(self) -> Mapping[str, int]:
        """Incident edge count per vertex, loops counted twice."""
        val = {v: 0 for v in self._genus_of}
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        return MappingProxyType(val)

    @cached_property
    def loops_at(self) -> Mapping[str, int]:
        counts = {v: 0 for v in self._genus_of}
        for a, b in self.edges:
            if a == b:
                counts[a] += 1
        return MappingProxyType(counts)

    @cached_property
    def nonloop_indices(self) -> tuple[int, ...]:
        return tuple(i for i, (a, b) in enumerate(self.edges) if a != b)

    @cached_property
    def markings_at(self) -> Mapping[str, int]:
        counts = {v: 0 for v in self._genus_of}
        for v in self._marking_of.values():
            counts[v] += 1
        return MappingProxyType(counts)

    def is_loop(self, edge_index: int) -> bool:
        a, b = self.edges[edge_index]
        return a == b

    # -- validation ---------------------------------------------------------

    def _check_connected(self) -> None:
        verts = set(self._genus_of)
        adjacency: dict[str, set[str]] = {v: set() for v in verts}
        for a, b in self.edges:
            if a != b:
                adjacency[a].add(b)
                adjacency[b].add(a)
        start = next(iter(verts))
        seen = {start}
        stack = [start]
        while stack:
            for w in adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != verts:
            raise InvalidGraph("graph is not connected")

    def _check_stable(self) -> None:
        for v, gv in self._genus_of.items():
            if gv == 0 and self.valence[v] + self.markings_at[v] < 3:
                raise InvalidGraph(
                    f"unstable: genus-0 vertex {v} has valence {self.valence[v]} "
                    f"and {self.markings_at[v]} markings"
                )

    # -- value semantics ----------------------------------------------------

    def _key(self):
        return (tuple(sorted(self._genus_of.items())), self.edges, tuple(sorted(self._marking_of.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MarkedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        genera = ",".join(f"{v}:{g}" for v, g in sorted(self._genus_of.items()))
        return f"MarkedGraph({genera}; edges={list(self.edges)}; n={self.n})"


# -- invariants --------------------------------------------------------------


def genus(G: MarkedGraph) -> int:
    """Arithmetic genus: sum of vertex genera minus #vertices plus #edges plus 1."""
    return sum(G.genus_of.values()) - len(G.vertices) + len(G.edges) + 1


def loop_free_circuit_rank(G: MarkedGraph) -> int:
    """First Betti number after contracting all loops: #non-loop edges - #vertices + 1."""
    return len(G.nonloop_indices) - len(G.vertices) + 1


# -- contraction -------------------------------------------------------------


def contract(G: MarkedGraph, edge_indices: Iterable[int]) -> tuple[MarkedGraph, dict[str, str]]:
    """Contract the given edges, returning the new graph and the vertex map.

    Non-loop edges merge their endpoints (genera add); loops disappear and add
    1 to the genus of their vertex, as does every contracted edge that has
    become a loop after earlier merges.  The merged vertex takes the
    lexicographically smallest constituent id, so the vertex map is
    reproducible.  Edges outside the set are re-routed; parallel edges whose
    endpoints merge are retained as loops.
    """
    idxs = sorted(set(edge_indices))
    for i in idxs:
        if not 0 <= i < len(G.edges):
            raise InvalidGraph(f"edge index {i} out of range for {len(G.edges)} edges")

    parent = {v: v for v in G.vertices}

    def find(v: str) -> str:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for i in idxs:
        a, b = G.edges[i]
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    members: dict[str, list[str]] = {}
    for v in G.vertices:
        members.setdefault(find(v), []).append(v)

    contracted_in_class = {root: 0 for root in members}
    for i in idxs:
        contracted_in_class[find(G.edges[i][0])] += 1

    new_genera = {}
    for root, group in members.items():
        extra = contracted_in_class[root] - (len(group) - 1)
        new_genera[root] = sum(G.genus_of[v] for v in group) + extra

    idx_set = set(idxs)
    new_edges = [(find(a), find(b)) for i, (a, b) in enumerate(G.edges) if i not in idx_set]
    new_markings = {j: find(v) for j, v in G.marking_of.items()}

    H = MarkedGraph(new_genera, new_edges, new_markings)
    vertex_map = {v: find(v) for v in G.vertices}
    return H, vertex_map


# -- boundary combinatorics ----------------------------------------------------


def _component(G: MarkedGraph, start: str, skip_index: int) -> frozenset[str]:
    """Vertices reachable from start along non-loop edges, ignoring one edge index."""
    seen = {start}
    stack = [start]
    adjacency: dict[str, list[str]] = {v: [] for v in G.vertices}
    for i, (a, b) in enumerate(G.edges):
        if i != skip_index and a != b:
            adjacency[a].append(b)
            adjacency[b].append(a)
    while stack:
        for w in adjacency[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def boundary_pair_of_edge(G: MarkedGraph, edge_index: int) -> tuple[BoundaryPair, frozenset[str]]:
    """The boundary pair (i, S) cut out by a non-loop edge of a rank-0 graph.

    Removing the edge splits the vertices in two; the returned pair records
    the arithmetic genus (vertex genera plus loops) and markings of the side
    containing marking 1, which is also returned.
    """
    if loop_free_circuit_rank(G) != 0:
        raise NotTreeLike("boundary pairs are only defined for loop-free circuit rank 0")
    a, b = G.edges[edge_index]
    if a == b:
        raise LoopEdge(f"edge {edge_index} is a loop at {a}")
    side = _component(G, G.marking_of[1], edge_index)
    i = sum(G.genus_of[v] + G.loops_at[v] for v in side)
    S = frozenset(j for j, v in G.marking_of.items() if v in side)
    pair = BoundaryPair(i, S)
    if not pair.is_admissible(genus(G), G.n):
        raise InvalidGraph(f"edge {edge_index} cuts out inadmissible pair {pair}")
    return pair, side


def two_vertex_graph(g: int, n: int, pair: BoundaryPair) -> MarkedGraph:
    """The two-vertex one-edge graph of type (i, S): genera (i, g-i), markings S on v1."""
    check_gn(g, n)
    if not pair.is_admissible(g, n):
        raise InadmissiblePair(f"pair {pair} is not admissible for (g,n)=({g},{n})")
    markings = {j: "v1" if j in pair.S else "v2" for j in range(1, n + 1)}
    return MarkedGraph({"v1": pair.i, "v2": g - pair.i}, [("v1", "v2")], markings)


@lru_cache(maxsize=None)
def admissible_pairs(g: int, n: int) -> tuple[BoundaryPair, ...]:
    """All admissible pairs (i, S) in canonical order (by i, then S as a bitmask)."""
    check_gn(g, n)
    rest = range(2, n + 1)
    pairs = []
    for i in range(g + 1):
        for r in range(n):
            for extra in itertools.combinations(rest, r):
                pair = BoundaryPair(i, frozenset((1,) + extra))
                if pair.is_admissible(g, n):
                    pairs.append(pair)
    pairs.sort(key=lambda p: p.sort_key)
    return tuple(pairs)


# -- elementary subgraphs ------------------------------------------------------


def _subset_key(subset: frozenset[str]) -> tuple[int, tuple[str, ...]]:
    return (len(subset), tuple(sorted(subset)))


def _induced_connected(G: MarkedGraph, subset: frozenset[str]) -> bool:
    if not subset:
        return False
    adjacency: dict[str, list[str]] = {v: [] for v in subset}
    for a, b in G.edges:
        if a != b and a in subset and b in subset:
            adjacency[a].append(b)
            adjacency[b].append(a)
    start = next(iter(subset))
    seen = {start}
    stack = [start]
    while stack:
        for w in adjacency[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(subset)


def elementary_subgraphs_bruteforce(G: MarkedGraph) -> list[frozenset[str]]:
    """Every proper nonempty vertex subset inducing a connected subgraph with connected complement.

    This is the defining enumeration; `elementary_subgraphs` may dispatch to a
    faster equivalent path.
    """
    verts = G.vertices
    all_verts = frozenset(verts)
    found = []
    for r in range(1, len(verts)):
        for combo in itertools.combinations(verts, r):
            subset = frozenset(combo)
            if _induced_connected(G, subset) and _induced_connected(G, all_verts - subset):
                found.append(subset)
    found.sort(key=_subset_key)
    return found


def elementary_subgraphs(G: MarkedGraph) -> list[frozenset[str]]:
    """Elementary subgraphs of G, using the two-sides-of-an-edge fast path at rank 0."""
    if loop_free_circuit_rank(G) != 0:
        return elementary_subgraphs_bruteforce(G)
    all_verts = frozenset(G.vertices)
    found = []
    for i in G.nonloop_indices:
        side = _component(G, G.edges[i][0], i)
        found.append(side)
        found.append(all_verts - side)
    found.sort(key=_subset_key)
    return found


def crossing_edge_indices(G: MarkedGraph, subset: frozenset[str]) -> tuple[int, ...]:
    """Indices of edges with exactly one endpoint in the subset (loops never cross)."""
    return tuple(i for i, (a, b) in enumerate(G.edges) if (a in subset) != (b in subset))


# -- corpus generator ----------------------------------------------------------


@lru_cache(maxsize=None)
def _tree_shapes(k: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Trees on vertices 0..k-1 up to isomorphism, as sorted edge tuples."""
    if k == 1:
        return ((),)
    if k == 2:
        return (((0, 1),),)
    perms = list(itertools.permutations(range(k)))
    shapes = {}
    for seq in itertools.product(range(k), repeat=k - 2):
        # Pruefer decoding
        degree = [1] * k
        for x in seq:
            degree[x] += 1
        edges = []
        leaves = sorted(v for v in range(k) if degree[v] == 1)
        for x in seq:
            leaf = leaves.pop(0)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
            if degree[x] == 1:
                bisect.insort(leaves, x)
        u, v = [w for w in range(k) if degree[w] == 1]
        edges.append((min(u, v), max(u, v)))
        canon = min(
            tuple(sorted((min(p[a], p[b]), max(p[a], p[b])) for a, b in edges)) for p in perms
        )
        shapes.setdefault(canon, tuple(sorted(edges)))
    return tuple(shapes[key] for key in sorted(shapes))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_tree_type_graphs(g: int, n: int, max_vertices: int) -> list[MarkedGraph]:
    """A corpus of stable marked graphs of genus g with n markings and rank 0.

    Covers, for each vertex count up to ``max_vertices``, every tree shape,
    every distribution of genera and loops, and every marking assignment,
    deduplicated up to isomorphism.  Intended as a test corpus; the
    enumeration cost grows quickly with ``max_vertices``.
    """
    check_gn(g, n)
    if not isinstance(max_vertices, int) or max_vertices < 1:
        raise InvalidGN(f"max_vertices must be a positive integer, got {max_vertices!r}")

    out: list[MarkedGraph] = []
    for k in range(1, max_vertices + 1):
        perms = list(itertools.permutations(range(k)))
        seen: set[tuple] = set()
        for tree_edges in _tree_shapes(k):
            tree_valence = [0] * k
            for a, b in tree_edges:
                tree_valence[a] += 1
                tree_valence[b] += 1
            for split in _compositions(g, 2 * k):
                genera, loops = split[:k], split[k:]
                for marks in itertools.product(range(k), repeat=n):
                    mark_count = [0] * k
                    for m in marks:
                        mark_count[m] += 1
                    if any(
                        genera[v] == 0
                        and tree_valence[v] + 2 * loops[v] + mark_count[v] < 3
                        for v in range(k)
                    ):
                        continue
                    all_edges = list(tree_edges) + [(v, v) for v in range(k) for _ in range(loops[v])]
                    key = min(
                        (
                            tuple(sorted((min(p[a], p[b]), max(p[a], p[b])) for a, b in all_edges)),
                            tuple(genera[q] for q in _inverse(p, k)),
                            tuple(p[m] for m in marks),
                        )
                        for p in perms
                    )
                    if key in seen:
                        continue
                    seen.add(key)
                    ids = [f"v{v + 1}" for v in range(k)]
                    out.append(
                        MarkedGraph(
                            {ids[v]: genera[v] for v in range(k)},
                            [(ids[a], ids[b]) for a, b in all_edges],
                            {j + 1: ids[marks[j]] for j in range(n)},
                        )
                    )
    return out


def _inverse(perm: tuple[int, ...], k: int) -> tuple[int, ...]:
    inv = [0] * k
    for old, new in enumerate(perm):
        inv[new] = old
    return tuple(inv)
