"""Exact minimum-weight perfect matching over restricted graphs.

Two matchers share one contract (defect nodes in, restricted-graph edges
out):

* :class:`BlossomMatcher` runs Dijkstra from every defect, builds the
  complete defect graph and solves it exactly with Edmonds' blossom
  algorithm on integer weights.  It keeps the full path structure and is
  the reference route used for traces and small instances.
* :class:`PyMatchingMatcher` hands the restricted graph to PyMatching's
  sparse blossom, which is far faster for Monte Carlo campaigns.  It only
  reports the edge set of the solution (mod 2).

:func:`mwpm_oracle` is an independent subset dynamic program used to check
:func:`mwpm` on small graphs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
import numpy as np

from .lattice import RestrictedGraph

# integer weight unit for the exact engine; jitter lives far below it
WEIGHT_SCALE = 1 << 32
JITTER = 2e-6


class MatchingError(ValueError):
    """Structural problem with a matching instance."""


class CapacityError(MatchingError):
    """Instance too large for an exponential reference algorithm."""


# --------------------------------------------------------------------------
# shortest paths
# --------------------------------------------------------------------------


@dataclass
class PathTables:
    """Single-source shortest path results, one row per source."""

    sources: list[int]
    dist: dict[int, list]
    pred_edge: dict[int, list[int]]
    pred_node: dict[int, list[int]]

    def path_edges(self, source: int, target: int) -> list[int]:
        """Edges on the stored shortest path from ``source`` to ``target``."""
        edges = []
        pe, pn = self.pred_edge[source], self.pred_node[source]
        node = target
        while node != source:
            e = pe[node]
            if e < 0:
                raise MatchingError(f"node {target} unreachable from {source}")
            edges.append(e)
            node = pn[node]
        edges.reverse()
        return edges


def shortest_paths(g: RestrictedGraph, sources, weights=None, adjacency=None) -> PathTables:
    """Dijkstra from each source.  Ties go to the smaller predecessor index
    so results are deterministic.  Unreachable nodes get ``math.inf``."""
    w = (g.weights if weights is None else weights).tolist()
    if min(w, default=0) < 0:
        raise MatchingError("negative edge weight")
    adj = adjacency if adjacency is not None else g.adjacency()
    n = g.num_nodes
    tables = PathTables([], {}, {}, {})
    for s in sources:
        s = int(s)
        dist = [math.inf] * n
        pe = [-1] * n
        pn = [-1] * n
        dist[s] = 0
        heap = [(0, s)]
        done = [False] * n
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, e in adj[u]:
                nd = du + w[e]
                if nd < dist[v] or (nd == dist[v] and not done[v] and u < pn[v]):
                    dist[v] = nd
                    pe[v] = e
                    pn[v] = u
                    heapq.heappush(heap, (nd, v))
        tables.sources.append(s)
        tables.dist[s] = dist
        tables.pred_edge[s] = pe
        tables.pred_node[s] = pn
    return tables


# --------------------------------------------------------------------------
# defect graphs and matchings
# --------------------------------------------------------------------------


@dataclass
class DefectGraph:
    """Complete graph over defects, each with a virtual boundary partner.

    Nodes ``0..k-1`` are the defects (restricted-graph nodes ``defects``),
    nodes ``k..2k-1`` their virtual partners.  ``boundary_target[i]`` is the
    boundary node closest to defect ``i``.
    """

    defects: list[int]
    edges: list[tuple[int, int, object]]
    boundary_target: list[int]
    tables: PathTables | None = field(default=None, repr=False)

    @property
    def num_nodes(self) -> int:
        return 2 * len(self.defects)

    def to_json(self) -> dict:
        return {
            "defects": list(self.defects),
            "edges": [[u, v, float(w)] for u, v, w in self.edges],
            "boundary_target": list(self.boundary_target),
        }


@dataclass(frozen=True)
class WeightedGraph:
    """Plain undirected graph: ``edges`` holds ``(u, v, weight)`` triples."""

    num_nodes: int
    edges: tuple


def random_graph(rng: np.random.Generator, max_nodes: int = 14, max_weight: int = 20,
                 density: float = 0.5) -> WeightedGraph:
    """Random even-order graph with integer weights and a perfect matching.

    A random perfect matching is always included so the instance is
    feasible; other pairs are added with probability ``density``.
    """
    n = 2 * int(rng.integers(1, max_nodes // 2 + 1))
    perm = rng.permutation(n)
    edges = {}
    for a, b in zip(perm[::2].tolist(), perm[1::2].tolist()):
        edges[(min(a, b), max(a, b))] = int(rng.integers(0, max_weight + 1))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in edges and rng.random() < density:
                edges[(a, b)] = int(rng.integers(0, max_weight + 1))
    return WeightedGraph(n, tuple((a, b, w) for (a, b), w in sorted(edges.items())))


@dataclass
class Matching:
    pairs: list[tuple[int, int]]
    weight: object
    paths: list[list[int]] = field(default_factory=list)

    def edge_multiset(self) -> list[int]:
        return [e for p in self.paths for e in p]


def build_defect_graph(g: RestrictedGraph, defects, weights=None, adjacency=None) -> DefectGraph:
    defects = [int(x) for x in defects]
    if any(g.is_boundary[x] for x in defects):
        raise MatchingError("defects must be real check nodes")
    if len(set(defects)) != len(defects):
        raise MatchingError("duplicate defect")
    k = len(defects)
    if k == 0:
        return DefectGraph([], [], [], None)
    tables = shortest_paths(g, defects, weights, adjacency)
    bnodes = g.boundary_nodes.tolist()
    edges = []
    targets = []
    for i, a in enumerate(defects):
        da = tables.dist[a]
        for j in range(i + 1, k):
            dab = da[defects[j]]
            if dab != math.inf:
                edges.append((i, j, dab))
        b = min(bnodes, key=lambda x: (da[x], x))
        targets.append(b)
        if da[b] == math.inf:
            raise MatchingError(f"defect {a} cannot reach the boundary")
        edges.append((i, k + i, da[b]))
    for i in range(k):
        for j in range(i + 1, k):
            edges.append((k + i, k + j, 0))
    return DefectGraph(defects, edges, targets, tables)


def _jittered(edges, seed):
    """Lexicographic perturbation: scale integer weights and add a random
    offset smaller than any weight quantum summed over a matching."""
    rng = np.random.default_rng(seed)
    m = len(edges)
    span = 1 << 20
    factor = span * (m + 1)
    out = []
    for (u, v, w), r in zip(edges, rng.integers(0, span, size=m).tolist()):
        if int(w) != w:
            raise MatchingError("perturbation requires integer weights")
        out.append((u, v, int(w) * factor + r))
    return out


def mwpm(g, seed: int | None = None) -> Matching:
    """Exact minimum-weight perfect matching of a graph with ``num_nodes``
    and an ``edges`` list of ``(u, v, weight)``.

    With ``seed`` set, ties between optimal matchings are broken by a random
    infinitesimal perturbation instead of by node order.
    """
    n = g.num_nodes
    if n % 2:
        raise MatchingError("odd number of nodes has no perfect matching")
    if n == 0:
        return Matching([], 0)
    edges = list(g.edges)
    work = _jittered(edges, seed) if seed is not None else edges
    if any(w < 0 for _, _, w in work):
        raise MatchingError("negative edge weight")
    big = max((w for _, _, w in work), default=0) + 1
    gx = nx.Graph()
    gx.add_nodes_from(range(n))
    for u, v, w in work:
        if gx.has_edge(u, v):
            if big - w <= gx[u][v]["weight"]:
                continue
        gx.add_edge(u, v, weight=big - w)
    mate = nx.max_weight_matching(gx, maxcardinality=True)
    if 2 * len(mate) != n:
        raise MatchingError("graph has no perfect matching")
    best = {}
    for u, v, w in edges:
        key = (min(u, v), max(u, v))
        if key not in best or w < best[key]:
            best[key] = w
    pairs = sorted((min(u, v), max(u, v)) for u, v in mate)
    return Matching(pairs, sum(best[p] for p in pairs))


def mwpm_oracle(g, max_nodes: int = 20) -> Matching:
    """Minimum-weight perfect matching by dynamic programming over subsets."""
    n = g.num_nodes
    if n > max_nodes:
        raise CapacityError(f"oracle limited to {max_nodes} nodes, got {n}")
    if n % 2:
        raise MatchingError("odd number of nodes has no perfect matching")
    w = {}
    for u, v, x in g.edges:
        key = (min(u, v), max(u, v))
        if key not in w or x < w[key]:
            w[key] = x
    nbrs = [[] for _ in range(n)]
    for (u, v), x in w.items():
        nbrs[u].append((v, x))
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(mask):
        # mask = set of nodes already matched
        if mask == full:
            return (0, ())
        i = (~mask & (mask + 1)).bit_length() - 1  # lowest free node
        out = None
        for j, x in nbrs[i]:
            if mask >> j & 1:
                continue
            sub = best(mask | (1 << i) | (1 << j))
            if sub is None:
                continue
            cand = (sub[0] + x, ((i, j),) + sub[1])
            if out is None or cand[0] < out[0]:
                out = cand
        return out

    res = best(0)
    best.cache_clear()
    if res is None:
        raise MatchingError("graph has no perfect matching")
    return Matching(sorted(res[1]), res[0])


def recover_paths(m: Matching, dg: DefectGraph) -> Matching:
    """Attach restricted-graph edge paths to each matched pair.  Virtual
    partners resolve to the defect's nearest boundary node; two virtual
    partners matched together resolve to the empty path."""
    k = len(dg.defects)
    paths = []
    for u, v in m.pairs:
        if u >= k and v >= k:
            paths.append([])
        elif u < k and v < k:
            paths.append(dg.tables.path_edges(dg.defects[u], dg.defects[v]))
        else:
            i = u if u < k else v
            paths.append(dg.tables.path_edges(dg.defects[i], dg.boundary_target[i]))
    return Matching(list(m.pairs), m.weight, paths)


# --------------------------------------------------------------------------
# matchers used by the decoders
# --------------------------------------------------------------------------


def jitter_weights(weights: np.ndarray, u: np.ndarray | None, amplitude: float = JITTER) -> np.ndarray:
    """Perturb edge weights with uniform variates ``u`` in [0, 1).

    Positive weights move by ``amplitude * w * (2u - 1)``, zero weights by
    ``amplitude * u``.  Replacing ``u`` with ``1 - u`` negates every
    difference between two jitter sums, which is how antithetic tie probes
    are formed.
    """
    w = np.asarray(weights, dtype=float)
    if u is None:
        return w.copy()
    return np.where(w > 0, w * (1.0 + amplitude * (2.0 * u - 1.0)), amplitude * u)


def to_integer_weights(weights: np.ndarray) -> list[int]:
    return [int(round(x * WEIGHT_SCALE)) for x in np.asarray(weights, dtype=float).tolist()]


class BlossomMatcher:
    """Reference matcher: shortest paths + exact blossom on the defect graph."""

    def __init__(self, g: RestrictedGraph, weights: np.ndarray | None = None):
        self.graph = g
        self.weights = np.asarray(g.weights if weights is None else weights, dtype=float)
        self.int_weights = np.array(to_integer_weights(self.weights), dtype=object)
        self._adj = g.adjacency()

    def solve(self, defects, seed: int | None = None) -> tuple[Matching, DefectGraph]:
        dg = build_defect_graph(self.graph, defects, self.int_weights, self._adj)
        m = mwpm(dg, seed=seed)
        m = recover_paths(m, dg)
        m.weight = m.weight / WEIGHT_SCALE
        return m, dg

    def solve_edges(self, defects) -> np.ndarray:
        m, _ = self.solve(defects)
        out = np.zeros(self.graph.num_edges, dtype=np.uint8)
        for e in m.edge_multiset():
            out[e] ^= 1
        return out


class PyMatchingMatcher:
    """Sparse-blossom matcher.  Parallel edges are merged, keeping the
    lightest; the solution is returned as a 0/1 vector over graph edges."""

    def __init__(self, g: RestrictedGraph, weights: np.ndarray | None = None):
        import pymatching

        self.graph = g
        w = np.asarray(g.weights if weights is None else weights, dtype=float)
        self.weights = w
        real = np.flatnonzero(~g.is_boundary)
        self.det_of_node = np.full(g.num_nodes, -1, dtype=np.int64)
        self.det_of_node[real] = np.arange(len(real))
        best: dict[tuple[int, int], int] = {}
        du = self.det_of_node[g.edge_u]
        dv = self.det_of_node[g.edge_v]
        for e, (a, b) in enumerate(zip(du.tolist(), dv.tolist())):
            key = (a, b) if a <= b else (b, a)
            cur = best.get(key)
            if cur is None or w[e] < w[cur]:
                best[key] = e
        m = pymatching.Matching()
        for (a, b), e in best.items():
            if a < 0:
                m.add_boundary_edge(b, fault_ids={e}, weight=w[e])
            else:
                m.add_edge(a, b, fault_ids={e}, weight=w[e])
        m.ensure_num_fault_ids(g.num_edges)
        self._m = m
        self.num_detectors = len(real)

    def detector_vector(self, defects) -> np.ndarray:
        syn = np.zeros(self.num_detectors, dtype=np.uint8)
        syn[self.det_of_node[np.asarray(list(defects), dtype=np.int64)]] = 1
        return syn

    def solve_edges(self, defects) -> np.ndarray:
        if len(defects) == 0:
            return np.zeros(self.graph.num_edges, dtype=np.uint8)
        return self._m.decode(self.detector_vector(defects))

    def solve_batch(self, det_syndromes: np.ndarray) -> np.ndarray:
        """Rows of detector syndromes -> rows of edge indicator vectors."""
        if len(det_syndromes) == 0:
            return np.zeros((0, self.graph.num_edges), dtype=np.uint8)
        return self._m.decode_batch(det_syndromes)
