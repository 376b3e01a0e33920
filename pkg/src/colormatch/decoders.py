"""Restricted and correlated matching decoders for the 4.8.8 color code.

A decode runs minimum-weight perfect matching on two restricted lattices in
turn.  The restricted decoder matches them independently.  The correlated
decoder first matches on one lattice, marks every red check that some
matched path passes straight through, and zeroes the weights of the second
lattice's edges at those red checks before matching again.  Both stages are
then lifted to a qubit correction by solving, block by block, for the
corner subset whose green-side and blue-side parities agree with the two
matchings.

The same code serves code-capacity decoding (one round) and phenomenological
decoding on space-time graphs built by :func:`build_spacetime_graph`.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field, replace

import numpy as np

from .lattice import BLUE, GREEN, RED, ColorCodeLattice, RestrictedGraph, restricted_graph
from .matching import BlossomMatcher, PyMatchingMatcher, jitter_weights

RB_THEN_RG = "Rb_then_Rg"
RG_THEN_RB = "Rg_then_Rb"


class DecodingError(RuntimeError):
    """Inconsistent syndrome or a broken internal invariant."""


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder settings.

    ``order`` names the lattice matched first; ``Rb_then_Rg`` is tuned for
    the logical whose representative lies on the blue (left) boundary, i.e.
    failures along rows of red squares.  ``wb_placement`` puts the boundary
    discount on the first-stage lattice (default) or on the second.
    """

    order: str = RB_THEN_RG
    w_b: float = 0.999
    zero_weight_enabled: bool = True
    zero_vertical: bool = True
    wb_placement: str = "first"
    engine: str = "pymatching"
    seed: int | None = None

    def __post_init__(self):
        if self.order not in (RB_THEN_RG, RG_THEN_RB):
            raise ValueError(f"unknown order {self.order!r}")
        if not (0.0 < self.w_b <= 1.0):
            raise ValueError(f"w_b must lie in (0, 1], got {self.w_b}")
        if self.wb_placement not in ("first", "second"):
            raise ValueError(f"unknown wb_placement {self.wb_placement!r}")
        if self.engine not in ("pymatching", "blossom"):
            raise ValueError(f"unknown engine {self.engine!r}")

    @property
    def tuned_logical(self) -> str:
        return BLUE if self.order == RB_THEN_RG else GREEN

    @classmethod
    def restricted(cls, **kw) -> "DecoderConfig":
        kw.setdefault("w_b", 1.0)
        return cls(zero_weight_enabled=False, **kw)

    @classmethod
    def for_logical(cls, logical: str, **kw) -> "DecoderConfig":
        return cls(order=RB_THEN_RG if logical == BLUE else RG_THEN_RB, **kw)


@dataclass
class Correction:
    qubits: np.ndarray  # 0/1 per qubit
    residual_zero: bool
    flags: dict | None = None
    trace: dict | None = field(default=None, repr=False)

    @property
    def support(self) -> list[int]:
        return np.flatnonzero(self.qubits).tolist()


# --------------------------------------------------------------------------
# graphs
# --------------------------------------------------------------------------


def build_spacetime_graph(
    g: RestrictedGraph,
    rounds: int,
    p: float | None = None,
    q: float | None = None,
    red_vertical: bool = True,
    check_colors: dict | None = None,
) -> RestrictedGraph:
    """Stack ``rounds`` copies of a 2-D restricted graph.

    Horizontal edges repeat each round with the 2-D weights; vertical edges
    join ``(check, t)`` to ``(check, t+1)``.  The last round is measured
    perfectly, so no vertical edge leaves it.  Each round gets its own
    virtual boundary node.  Vertical weights are ``log((1-q)/q)`` relative to
    the data weight ``log((1-p)/p)`` and equal 1 when ``p == q``.
    ``red_vertical=False`` drops vertical edges on red checks, which requires
    ``check_colors`` (check id -> color).
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if g.rounds != 1:
        raise ValueError("expected a 2-D restricted graph")
    vweight = 1.0
    if p is not None and q is not None and p != q:
        if not (0 < p < 0.5 and 0 < q < 0.5):
            raise ValueError("p and q must lie in (0, 0.5) when they differ")
        vweight = math.log((1 - q) / q) / math.log((1 - p) / p)

    base_nodes = g.num_nodes
    node_check = np.tile(g.node_check, rounds)
    node_round = np.repeat(np.arange(rounds), base_nodes)
    is_boundary = np.tile(g.is_boundary, rounds)
    node_of = {}
    for t in range(rounds):
        for k in range(base_nodes):
            node_of[(int(g.node_check[k]), t)] = t * base_nodes + k

    eu = [g.edge_u + t * base_nodes for t in range(rounds)]
    ev = [g.edge_v + t * base_nodes for t in range(rounds)]
    eq = [g.edge_qubit] * rounds
    er = [np.full(g.num_edges, t) for t in range(rounds)]
    ew = [g.weights] * rounds
    ed = [g.discounted] * rounds

    real = np.flatnonzero(~g.is_boundary)
    if not red_vertical:
        if check_colors is None:
            raise ValueError("check_colors is required to drop red vertical edges")
        real = np.array([k for k in real if check_colors[int(g.node_check[k])] != RED], dtype=np.int64)
    for t in range(rounds - 1):
        eu.append(real + t * base_nodes)
        ev.append(real + (t + 1) * base_nodes)
        eq.append(np.full(len(real), -1))
        er.append(np.full(len(real), t))
        ew.append(np.full(len(real), vweight))
        ed.append(np.zeros(len(real), dtype=bool))

    return RestrictedGraph(
        removed=g.removed,
        rounds=rounds,
        node_check=node_check,
        node_round=node_round,
        is_boundary=is_boundary,
        edge_u=np.concatenate(eu).astype(np.int64),
        edge_v=np.concatenate(ev).astype(np.int64),
        edge_qubit=np.concatenate(eq).astype(np.int64),
        edge_round=np.concatenate(er).astype(np.int64),
        weights=np.concatenate(ew).astype(float),
        discounted=np.concatenate(ed).astype(bool),
        node_of=node_of,
    )


# --------------------------------------------------------------------------
# marking and lifting
# --------------------------------------------------------------------------


def path_nodes(g: RestrictedGraph, start: int, path: list[int]) -> list[int]:
    nodes = [start]
    for e in path:
        u, v = int(g.edge_u[e]), int(g.edge_v[e])
        nodes.append(v if nodes[-1] == u else u)
    return nodes


def mark_traversed(paths, g: RestrictedGraph, red_nodes: np.ndarray, starts=None) -> set[int]:
    """Red nodes lying strictly inside some path (two incident path edges).

    ``paths`` is a list of edge lists.  When ``starts`` (the first node of
    each path) is omitted it is inferred from the path's first edge.
    """
    red = set(int(x) for x in np.flatnonzero(red_nodes)) if red_nodes.dtype == bool else set(red_nodes.tolist())
    marked: set[int] = set()
    for k, path in enumerate(paths):
        if len(path) < 2:
            continue
        if starts is not None:
            s = starts[k]
        else:
            e0, e1 = path[0], path[1]
            a, b = int(g.edge_u[e0]), int(g.edge_v[e0])
            s = a if b in (int(g.edge_u[e1]), int(g.edge_v[e1])) else b
        nodes = path_nodes(g, s, path)
        marked.update(x for x in nodes[1:-1] if x in red)
    return marked


def mark_from_edges(edge_vec: np.ndarray, g: RestrictedGraph, red_mask: np.ndarray, defect_mask: np.ndarray) -> np.ndarray:
    """Marking from an edge indicator vector (no path order available).

    A red node is traversed when at least two solution edges meet there and
    it is not simply a path end: non-defects need degree >= 2, defects >= 3.
    """
    sel = np.flatnonzero(edge_vec)
    deg = np.bincount(g.edge_u[sel], minlength=g.num_nodes) + np.bincount(g.edge_v[sel], minlength=g.num_nodes)
    need = np.where(defect_mask, 3, 2)
    return red_mask & (deg >= need)


class BlockSolver:
    """Per-block parity solve from two stage matchings to a correction."""

    def __init__(self, lat: ColorCodeLattice):
        n, nb = lat.n, len(lat.blocks)
        self.n = n
        self.block = np.array(lat.qubit_block, dtype=np.int64)
        self.gside = np.zeros(n, dtype=np.int64)
        self.bside = np.zeros(n, dtype=np.int64)
        # table[block, code, slot] -> qubit flipped?, code = g0 | g1<<1 | b0<<2 | b1<<3
        self.corner_qubit = np.zeros((nb, 2, 2), dtype=np.int64)
        self.table = np.zeros((nb, 16, 2, 2), dtype=np.uint8)
        self.valid = np.zeros(16, dtype=bool)
        for blk in lat.blocks:
            greens = sorted({lab[0] for lab in blk.labels.values()}, key=repr)
            blues = sorted({lab[1] for lab in blk.labels.values()}, key=repr)
            for name, q in blk.corners.items():
                gl, bl = blk.labels[name]
                gi, bj = greens.index(gl), blues.index(bl)
                self.gside[q], self.bside[q] = gi, bj
                self.corner_qubit[blk.id, gi, bj] = q
            for code in range(16):
                g0, g1, b0, b1 = code & 1, code >> 1 & 1, code >> 2 & 1, code >> 3 & 1
                if (g0 ^ g1) != (b0 ^ b1):
                    continue
                self.valid[code] = True
                best = None
                for t in (0, 1):
                    x = np.array([[t, g0 ^ t], [b0 ^ t, g1 ^ b0 ^ t]], dtype=np.uint8)
                    key = (int(x.sum()), sorted(int(self.corner_qubit[blk.id][i, j]) for i in range(2) for j in range(2) if x[i, j]))
                    if best is None or key < best[0]:
                        best = (key, x)
                self.table[blk.id, code] = best[1]

    def lift(self, xb: np.ndarray, xg: np.ndarray) -> np.ndarray:
        """``xb``/``xg``: per-qubit parities of first (R_b) and second (R_g)
        lattice path edges.  Returns the 0/1 correction per qubit."""
        nb = self.table.shape[0]
        codes = np.zeros(nb, dtype=np.int64)
        for arr, side, shift in ((xb, self.gside, 0), (xg, self.bside, 2)):
            sel = np.flatnonzero(arr & 1)
            if len(sel):
                bits = np.zeros((nb, 2), dtype=np.int64)
                np.add.at(bits, (self.block[sel], side[sel]), 1)
                codes |= (bits[:, 0] & 1) << shift | (bits[:, 1] & 1) << (shift + 1)
        if not self.valid[codes].all():
            bad = np.flatnonzero(~self.valid[codes]).tolist()
            raise DecodingError(f"red parity disagreement between stages at blocks {bad}")
        x = self.table[np.arange(nb), codes]  # (nb, 2, 2)
        out = np.zeros(self.n, dtype=np.uint8)
        flipped = x.reshape(nb, 4).astype(bool)
        out[self.corner_qubit.reshape(nb, 4)[flipped]] = 1
        return out


def lift_correction(paths_b, paths_g, lat: ColorCodeLattice, solver: BlockSolver | None = None) -> Correction:
    """Lift two qubit multisets (first-stage R_b and second-stage R_g edges)
    to a correction.  The residual-zero flag is left unset (no syndrome)."""
    solver = solver or BlockSolver(lat)
    xb = np.zeros(lat.n, dtype=np.uint8)
    xg = np.zeros(lat.n, dtype=np.uint8)
    for q in paths_b:
        xb[q] ^= 1
    for q in paths_g:
        xg[q] ^= 1
    return Correction(solver.lift(xb, xg), residual_zero=True)


def syndrome_of(lat_h: np.ndarray, qubits: np.ndarray) -> np.ndarray:
    return (lat_h @ qubits.astype(np.int64)) & 1


def check_failure(error, corr, lat: ColorCodeLattice, h: np.ndarray | None = None) -> dict:
    """Per-logical failure flags of the residual ``error + correction``.

    ``error`` and ``corr`` are 0/1 vectors (or :class:`Correction`).
    Raises :class:`DecodingError` if the residual is not a stabilizer or
    logical (nonzero syndrome).
    """
    e = np.asarray(error, dtype=np.uint8)
    c = np.asarray(corr.qubits if isinstance(corr, Correction) else corr, dtype=np.uint8)
    res = e ^ c
    h = lat.check_matrix() if h is None else h
    if syndrome_of(h, res).any():
        raise DecodingError("residual has nonzero syndrome")
    return {u: bool(res[list(lat.logicals[u])].sum() & 1) for u in (GREEN, BLUE)}


# --------------------------------------------------------------------------
# the decoder
# --------------------------------------------------------------------------


class Decoder:
    """Two-stage matching decoder bound to one lattice and configuration.

    ``rounds == 1`` gives code-capacity decoding; ``rounds > 1`` decodes
    difference syndromes on space-time graphs.  The per-shot tie-break is
    drawn from a fixed pool of ``pool`` jitter realizations so the
    first-stage matcher can be reused across shots.
    """

    def __init__(self, lat: ColorCodeLattice, cfg: DecoderConfig, rounds: int = 1,
                 p: float | None = None, q: float | None = None,
                 red_vertical: bool = True, pool: int = 16, cache_size: int = 256):
        self.lat = lat
        self.cfg = cfg
        self.rounds = rounds
        self.h = lat.check_matrix()
        self.color = np.array([c.color for c in lat.checks])
        self.solver = BlockSolver(lat)

        first, second = (BLUE, GREEN) if cfg.order == RB_THEN_RG else (GREEN, BLUE)
        rows = "top_bottom" if cfg.tuned_logical == BLUE else "left_right"
        disc_first = cfg.wb_placement == "first"
        g1 = restricted_graph(lat, first, cfg.w_b, discount=disc_first, rows=rows)
        g2 = restricted_graph(lat, second, cfg.w_b, discount=not disc_first, rows=rows)
        colors = {c.id: c.color for c in lat.checks}
        if rounds > 1:
            g1 = build_spacetime_graph(g1, rounds, p, q, red_vertical, colors)
            g2 = build_spacetime_graph(g2, rounds, p, q, red_vertical, colors)
        self.g1, self.g2 = g1, g2
        self.first, self.second = first, second
        self.red1 = np.array([c >= 0 and colors[int(c)] == RED for c in g1.node_check.tolist()])
        self.red2 = np.array([c >= 0 and colors[int(c)] == RED for c in g2.node_check.tolist()])
        # map first-stage red nodes to second-stage nodes of the same (check, round)
        self.node1_to_2 = np.full(g1.num_nodes, -1, dtype=np.int64)
        for (c, t), k in g1.node_of.items():
            if c >= 0 and (c, t) in g2.node_of:
                self.node1_to_2[k] = g2.node_of[(c, t)]
        # second-stage edges incident to each node, and vertical edge lookup
        self.inc2 = [[] for _ in range(g2.num_nodes)]
        for e, (a, b) in enumerate(zip(g2.edge_u.tolist(), g2.edge_v.tolist())):
            if g2.edge_qubit[e] >= 0:
                self.inc2[a].append(e)
                self.inc2[b].append(e)
        self.vert2 = {}
        for e in np.flatnonzero(g2.edge_qubit < 0).tolist():
            self.vert2[(int(g2.edge_u[e]), int(g2.edge_v[e]))] = e
        # detector index of each (check, round) in each graph
        self._node_lookup = {}
        for name, g in (("1", g1), ("2", g2)):
            table = np.full((rounds, len(lat.checks)), -1, dtype=np.int64)
            for (c, t), k in g.node_of.items():
                if c >= 0:
                    table[t, c] = k
            self._node_lookup[name] = table
        self.pool = max(1, int(pool))
        self._u1 = {}
        self._u2 = {}
        self._m1 = {}
        self._cache: OrderedDict = OrderedDict()
        self._cache_size = cache_size

    # -- jitter ------------------------------------------------------------

    def _uniforms(self, k: int, which: int, antithetic: bool = False):
        store = self._u1 if which == 1 else self._u2
        if k not in store:
            g = self.g1 if which == 1 else self.g2
            seed = (0 if self.cfg.seed is None else int(self.cfg.seed), 977, k, which)
            store[k] = np.random.default_rng(np.random.SeedSequence(seed)).random(g.num_edges)
        u = store[k]
        return 1.0 - u if antithetic else u

    def _matcher(self, g, weights):
        if self.cfg.engine == "blossom":
            return BlossomMatcher(g, weights)
        return PyMatchingMatcher(g, weights)

    def _first_matcher(self, key):
        if key not in self._m1:
            if key is None:
                w = self.g1.weights.copy()
            else:
                w = jitter_weights(self.g1.weights, self._uniforms(key[0], 1, key[1]))
            self._m1[key] = self._matcher(self.g1, w)
        return self._m1[key]

    def _second_matcher(self, key, zeroed: tuple):
        ck = (key, zeroed)
        m = self._cache.get(ck)
        if m is not None:
            self._cache.move_to_end(ck)
            return m
        w = self.g2.weights.copy()
        if zeroed:
            w[list(zeroed)] = 0.0
        if key is not None:
            w = jitter_weights(w, self._uniforms(key[0], 2, key[1]))
        m = self._matcher(self.g2, w)
        self._cache[ck] = m
        if len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)
        return m

    def tie_key(self, rng: np.random.Generator | None):
        """Pick a jitter realization for one shot (None = deterministic)."""
        if rng is None:
            return None
        return (int(rng.integers(self.pool)), False)

    # -- decoding ----------------------------------------------------------

    def defects(self, syn: np.ndarray, which: str) -> np.ndarray:
        syn = np.asarray(syn).reshape(self.rounds, -1)
        table = self._node_lookup[which]
        t, c = np.nonzero(syn)
        nodes = table[t, c]
        return np.sort(nodes[nodes >= 0])

    def zeroed_edges(self, marked1: np.ndarray, vertical_used: list[tuple[int, int]]) -> tuple:
        zero = set()
        for k in marked1.tolist():
            k2 = self.node1_to_2[k]
            if k2 >= 0:
                zero.update(self.inc2[k2])
        if self.cfg.zero_vertical:
            for a, b in vertical_used:
                a2, b2 = self.node1_to_2[a], self.node1_to_2[b]
                e = self.vert2.get((min(a2, b2), max(a2, b2)))
                if e is not None:
                    zero.add(e)
        return tuple(sorted(zero))

    def decode(self, syn: np.ndarray, key=None, trace: bool = False) -> Correction:
        """Decode one syndrome (per check, or rounds x checks differences).

        ``key`` selects the tie-break jitter: ``None`` for the unperturbed
        weights, or ``(index, antithetic)`` from :meth:`tie_key`.
        """
        syn = np.asarray(syn, dtype=np.uint8).reshape(self.rounds, -1)
        d1 = self.defects(syn, "1")
        d2 = self.defects(syn, "2")
        m1 = self._first_matcher(key)
        tr = {} if trace else None

        if self.cfg.engine == "blossom":
            match1, dg1 = m1.solve(d1.tolist())
            edges1 = np.zeros(self.g1.num_edges, dtype=np.uint8)
            for e in match1.edge_multiset():
                edges1[e] ^= 1
            starts = []
            k = len(dg1.defects)
            for u, v in match1.pairs:
                starts.append(dg1.defects[u] if u < k else (dg1.defects[v] if v < k else -1))
            marked = sorted(mark_traversed(match1.paths, self.g1, np.flatnonzero(self.red1), starts))
            marked = np.array(marked, dtype=np.int64)
            vertical_used = [
                (int(self.g1.edge_u[e]), int(self.g1.edge_v[e]))
                for e in match1.edge_multiset()
                if self.g1.edge_qubit[e] < 0 and self.red1[self.g1.edge_u[e]]
            ]
            if tr is not None:
                tr["stage1"] = {"pairs": match1.pairs, "weight": float(match1.weight),
                                "paths": match1.paths, "defect_graph": dg1.to_json()}
        else:
            edges1 = m1.solve_edges(d1)
            dmask = np.zeros(self.g1.num_nodes, dtype=bool)
            dmask[d1] = True
            marked = np.flatnonzero(mark_from_edges(edges1, self.g1, self.red1, dmask))
            vsel = np.flatnonzero(edges1 & (self.g1.edge_qubit < 0))
            vertical_used = [
                (int(self.g1.edge_u[e]), int(self.g1.edge_v[e])) for e in vsel.tolist()
                if self.red1[self.g1.edge_u[e]]
            ]
            if tr is not None:
                tr["stage1"] = {"edges": np.flatnonzero(edges1).tolist()}

        zeroed = self.zeroed_edges(marked, vertical_used) if self.cfg.zero_weight_enabled else ()
        m2 = self._second_matcher(key, zeroed)
        if self.cfg.engine == "blossom":
            match2, dg2 = m2.solve(d2.tolist())
            edges2 = np.zeros(self.g2.num_edges, dtype=np.uint8)
            for e in match2.edge_multiset():
                edges2[e] ^= 1
            if tr is not None:
                tr["stage2"] = {"pairs": match2.pairs, "weight": float(match2.weight),
                                "paths": match2.paths, "defect_graph": dg2.to_json()}
        else:
            edges2 = m2.solve_edges(d2)
            if tr is not None:
                tr["stage2"] = {"edges": np.flatnonzero(edges2).tolist()}

        corr = self._lift(edges1, edges2)
        final_syn = np.bitwise_xor.reduce(syn, axis=0)
        ok = not np.any(syndrome_of(self.h, corr) ^ final_syn)
        if not ok:
            raise DecodingError("correction does not reproduce the syndrome")
        if tr is not None:
            tr.update({
                "defects_first": self.g1.node_check[d1].tolist(),
                "defects_second": self.g2.node_check[d2].tolist(),
                "marked": [[int(self.g1.node_check[k]), int(self.g1.node_round[k])] for k in marked.tolist()],
                "zeroed_edges": list(zeroed),
                "correction": np.flatnonzero(corr).tolist(),
            })
        return Correction(corr, residual_zero=ok, trace=tr)

    def _lift(self, edges1: np.ndarray, edges2: np.ndarray) -> np.ndarray:
        xs = {}
        for g, edges, color in ((self.g1, edges1, self.first), (self.g2, edges2, self.second)):
            sel = np.flatnonzero(edges & (g.edge_qubit >= 0))
            x = np.zeros(self.lat.n, dtype=np.uint8)
            np.bitwise_xor.at(x, g.edge_qubit[sel], 1)
            xs[color] = x
        return self.solver.lift(xs[BLUE], xs[GREEN])

    def decode_batch(self, syndromes: np.ndarray, key=None) -> np.ndarray:
        """Decode many syndromes with one shared tie-break realization.

        Uses the batch interface of the matcher for the first stage and
        groups shots by their zeroed edge set for the second.
        """
        syndromes = np.asarray(syndromes, dtype=np.uint8).reshape(len(syndromes), self.rounds, -1)
        shots = len(syndromes)
        out = np.zeros((shots, self.lat.n), dtype=np.uint8)
        if shots == 0:
            return out
        if self.cfg.engine == "blossom":
            for s in range(shots):
                out[s] = self.decode(syndromes[s], key).qubits
            return out
        m1 = self._first_matcher(key)
        det1 = self._detector_rows(syndromes, "1", m1)
        e1 = m1.solve_batch(det1)
        groups: dict[tuple, list[int]] = {}
        if self.cfg.zero_weight_enabled:
            sel_v = np.flatnonzero((self.g1.edge_qubit < 0) & self.red1[self.g1.edge_u])
            for s in range(shots):
                dmask = np.zeros(self.g1.num_nodes, dtype=bool)
                dmask[self.defects(syndromes[s], "1")] = True
                marked = np.flatnonzero(mark_from_edges(e1[s], self.g1, self.red1, dmask))
                used = sel_v[e1[s, sel_v] > 0]
                vu = [(int(self.g1.edge_u[e]), int(self.g1.edge_v[e])) for e in used.tolist()]
                groups.setdefault(self.zeroed_edges(marked, vu), []).append(s)
        else:
            groups[()] = list(range(shots))
        for zeroed, members in groups.items():
            m2 = self._second_matcher(key, zeroed)
            det2 = self._detector_rows(syndromes[members], "2", m2)
            e2 = m2.solve_batch(det2)
            for row, s in enumerate(members):
                out[s] = self._lift(e1[s], e2[row])
        final = np.bitwise_xor.reduce(syndromes, axis=1)
        if np.any(((out.astype(np.int64) @ self.h.T.astype(np.int64)) & 1) ^ final):
            raise DecodingError("correction does not reproduce the syndrome")
        return out

    def _detector_rows(self, syndromes, which, matcher):
        table = self._node_lookup[which]
        det = np.zeros((len(syndromes), matcher.num_detectors), dtype=np.uint8)
        valid = table >= 0
        nodes = table[valid]
        dets = matcher.det_of_node[nodes]
        det[:, dets] = syndromes[:, valid]
        return det


def decode_restricted(lat: ColorCodeLattice, syn, cfg: DecoderConfig | None = None, key=None) -> Correction:
    cfg = replace(cfg, zero_weight_enabled=False) if cfg is not None else DecoderConfig.restricted()
    return Decoder(lat, cfg).decode(syn, key)


def decode_correlated(lat: ColorCodeLattice, syn, cfg: DecoderConfig | None = None, key=None) -> Correction:
    cfg = cfg or DecoderConfig()
    if not cfg.zero_weight_enabled:
        raise ValueError("correlated decoding needs zero_weight_enabled")
    return Decoder(lat, cfg).decode(syn, key)


def decode_correlated_spacetime(lat: ColorCodeLattice, syn, cfg: DecoderConfig | None = None,
                                key=None, p=None, q=None, red_vertical: bool = True) -> Correction:
    cfg = cfg or DecoderConfig()
    syn = np.asarray(syn)
    rounds = syn.shape[0]
    return Decoder(lat, cfg, rounds=rounds, p=p, q=q, red_vertical=red_vertical).decode(syn, key)
