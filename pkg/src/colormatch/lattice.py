"""Surface and 4.8.8 color code lattices, and restricted matching graphs.

Both lattices live on a "doubled" grid of side ``L = 2m - 1`` for a surface
code of distance ``m``.  Sites ``(i, j)`` with ``i + j`` even hold surface
qubits; sites with ``i + j`` odd hold checks: ``(even, odd)`` are X (vertex)
checks and ``(odd, even)`` are Z (face) checks.

The color code of distance ``d = 2m`` is obtained by replacing every surface
qubit with a red square of four qubits (a [[4,2,2]] block).  Surface X checks
become blue octagons and Z checks become green octagons, so a square at an
``(even, even)`` site has blue octagons to its left/right and green ones
above/below, while an ``(odd, odd)`` square is rotated by 90 degrees.  Each
square corner touches the square, one vertical neighbour octagon and one
horizontal neighbour octagon.  Missing neighbours mark lattice boundaries:
the top and bottom boundaries are green, left and right are blue.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

RED, GREEN, BLUE = "red", "green", "blue"
COLORS = (RED, GREEN, BLUE)

# corner name -> (row offset, col offset) of the qubit inside its square,
# and the grid directions of its vertical / horizontal neighbour octagons
_CORNERS = {
    "NW": ((0, 0), (-1, 0), (0, -1)),
    "NE": ((0, 1), (-1, 0), (0, 1)),
    "SW": ((1, 0), (1, 0), (0, -1)),
    "SE": ((1, 1), (1, 0), (0, 1)),
}


class LatticeError(ValueError):
    """Raised for invalid lattice parameters."""


# --------------------------------------------------------------------------
# surface code
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceCodeLattice:
    """Unrotated surface code with smooth top/bottom and rough left/right
    boundaries.  ``qubits[k]`` is the grid coordinate of qubit ``k``."""

    distance: int
    qubits: tuple[tuple[int, int], ...]
    orientation: tuple[str, ...]  # "h" or "v" per qubit
    x_checks: tuple[tuple[int, ...], ...]
    z_checks: tuple[tuple[int, ...], ...]
    x_check_sites: tuple[tuple[int, int], ...]
    z_check_sites: tuple[tuple[int, int], ...]
    boundaries: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.qubits)

    def qubit_index(self) -> dict[tuple[int, int], int]:
        return {site: k for k, site in enumerate(self.qubits)}


def build_surface_lattice(d: int) -> SurfaceCodeLattice:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise LatticeError(f"surface code distance must be an integer >= 2, got {d!r}")
    d = int(d)
    size = 2 * d - 1
    qubits = tuple((i, j) for i in range(size) for j in range(size) if (i + j) % 2 == 0)
    index = {s: k for k, s in enumerate(qubits)}
    orientation = tuple("h" if i % 2 == 0 else "v" for i, _ in qubits)

    def support(i, j):
        nb = [(i - 1, j), (i, j - 1), (i, j + 1), (i + 1, j)]
        return tuple(sorted(index[s] for s in nb if s in index))

    x_sites = tuple((i, j) for i in range(0, size, 2) for j in range(1, size, 2))
    z_sites = tuple((i, j) for i in range(1, size, 2) for j in range(0, size, 2))
    # row-major ordering over all check sites
    x_sites = tuple(sorted(x_sites))
    z_sites = tuple(sorted(z_sites))
    return SurfaceCodeLattice(
        distance=d,
        qubits=qubits,
        orientation=orientation,
        x_checks=tuple(support(*s) for s in x_sites),
        z_checks=tuple(support(*s) for s in z_sites),
        x_check_sites=x_sites,
        z_check_sites=z_sites,
        boundaries={"top": "smooth", "bottom": "smooth", "left": "rough", "right": "rough"},
    )


# --------------------------------------------------------------------------
# color code
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    id: int
    color: str
    site: tuple[int, int]
    support: tuple[int, ...]


@dataclass(frozen=True)
class Block:
    """A red square (one [[4,2,2]] block) standing in for one surface qubit.

    ``corners`` maps a corner name (NW, NE, SW, SE) to a color qubit, and
    ``labels`` maps the same names to the (green, blue) octagon check ids the
    corner touches; ``None`` means the corner faces a boundary of that color.
    """

    id: int
    host: int
    site: tuple[int, int]
    check: int
    orientation: int
    corners: dict
    labels: dict
    l1: tuple[int, int]
    l2: tuple[int, int]
    diag: tuple[int, int]

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(sorted(self.corners.values()))

    def corner_map(self) -> dict:
        """(green label, blue label) -> qubit."""
        return {self.labels[c]: q for c, q in self.corners.items()}


@dataclass(frozen=True)
class ColorCodeLattice:
    distance: int
    surface: SurfaceCodeLattice
    qubits: tuple[tuple[int, int], ...]
    checks: tuple[Check, ...]
    blocks: tuple[Block, ...]
    qubit_block: tuple[int, ...]
    qubit_checks: dict  # qubit -> {color: check id or None}
    logicals: dict  # color -> tuple of qubits (support of X/Z logical)
    boundary_colors: dict

    @property
    def n(self) -> int:
        return len(self.qubits)

    def checks_of(self, color: str) -> list[Check]:
        return [c for c in self.checks if c.color == color]

    def check_matrix(self) -> np.ndarray:
        """Face-qubit incidence matrix (same for X and Z type checks)."""
        h = np.zeros((len(self.checks), self.n), dtype=np.uint8)
        for c in self.checks:
            h[c.id, list(c.support)] = 1
        return h

    def to_json(self) -> dict:
        checks = []
        for c in self.checks:
            for kind in ("X", "Z"):
                checks.append({"id": c.id, "color": c.color, "kind": kind,
                               "site": list(c.site), "support": list(c.support)})
        blocks = [
            {
                "id": b.id,
                "host": b.host,
                "check": b.check,
                "orientation": b.orientation,
                "corners": {k: v for k, v in sorted(b.corners.items())},
                "labels": {k: list(v) for k, v in sorted(b.labels.items())},
                "L1": list(b.l1),
                "L2": list(b.l2),
                "DIAG": list(b.diag),
            }
            for b in self.blocks
        ]
        return {
            "distance": self.distance,
            "qubits": [list(q) for q in self.qubits],
            "checks": checks,
            "blocks": blocks,
            "logicals": {k: list(v) for k, v in self.logicals.items()},
            "boundary_colors": self.boundary_colors,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_color_lattice(d: int) -> ColorCodeLattice:
    """Build the 4.8.8 color code of even distance ``d >= 4`` by block
    substitution on the distance ``d/2`` surface code."""
    if not isinstance(d, (int, np.integer)) or d < 4 or d % 2:
        raise LatticeError(f"color code distance must be an even integer >= 4, got {d!r}")
    d = int(d)
    surf = build_surface_lattice(d // 2)
    size = 2 * surf.distance - 1

    # faces in row-major order over the doubled grid
    face_sites = [(i, j) for i in range(size) for j in range(size)]
    face_id = {s: k for k, s in enumerate(face_sites)}

    def face_color(i, j):
        if (i + j) % 2 == 0:
            return RED
        return BLUE if i % 2 == 0 else GREEN

    # qubits: corner (di, dj) of square (i, j) sits at (2i + di, 2j + dj)
    qsites = sorted(
        (2 * i + di, 2 * j + dj)
        for (i, j) in surf.qubits
        for (di, dj), _, _ in _CORNERS.values()
    )
    qindex = {s: k for k, s in enumerate(qsites)}

    supports: dict[tuple[int, int], list[int]] = {s: [] for s in face_sites}
    qubit_checks: dict[int, dict] = {}
    blocks = []
    for b, (i, j) in enumerate(surf.qubits):
        corners, labels = {}, {}
        for name, ((di, dj), vdir, hdir) in _CORNERS.items():
            q = qindex[(2 * i + di, 2 * j + dj)]
            corners[name] = q
            supports[(i, j)].append(q)
            touched = {RED: face_id[(i, j)], GREEN: None, BLUE: None}
            for di2, dj2 in (vdir, hdir):
                s = (i + di2, j + dj2)
                if 0 <= s[0] < size and 0 <= s[1] < size:
                    supports[s].append(q)
                    touched[face_color(*s)] = face_id[s]
                else:
                    # the missing octagon has the color the neighbour would have had
                    pass
            qubit_checks[q] = touched
            labels[name] = (touched[GREEN], touched[BLUE])
        # a boundary corner has None labels; recover side identity for the
        # corner map from the direction so labels stay pairwise distinct
        labels = _distinct_labels(i, j, labels)
        orientation = 0 if i % 2 == 0 else 90
        # L1 shares a blue side (flips the two green sides), L2 shares a green side
        if orientation == 0:
            l1 = (corners["NW"], corners["SW"])
            l2 = (corners["NW"], corners["NE"])
        else:
            l1 = (corners["NW"], corners["NE"])
            l2 = (corners["NW"], corners["SW"])
        diag = tuple(sorted(set(l1) ^ set(l2)))
        blocks.append(Block(
            id=b, host=b, site=(i, j), check=face_id[(i, j)], orientation=orientation,
            corners=corners, labels=labels,
            l1=tuple(sorted(l1)), l2=tuple(sorted(l2)), diag=diag,
        ))

    checks = tuple(
        Check(id=face_id[s], color=face_color(*s), site=s, support=tuple(sorted(supports[s])))
        for s in face_sites
    )
    qubit_block = [0] * len(qsites)
    for blk in blocks:
        for q in blk.corners.values():
            qubit_block[q] = blk.id

    # logical supports: the top (green) boundary and the left (blue) boundary
    top = tuple(sorted(blk.corners[c] for blk in blocks if blk.site[0] == 0 for c in ("NW", "NE")))
    left = tuple(sorted(blk.corners[c] for blk in blocks if blk.site[1] == 0 for c in ("NW", "SW")))
    return ColorCodeLattice(
        distance=d,
        surface=surf,
        qubits=tuple(qsites),
        checks=checks,
        blocks=tuple(blocks),
        qubit_block=tuple(qubit_block),
        qubit_checks=qubit_checks,
        logicals={GREEN: top, BLUE: left},
        boundary_colors={"top": GREEN, "bottom": GREEN, "left": BLUE, "right": BLUE},
    )


def _distinct_labels(i, j, labels):
    """Replace missing octagons by side tags ("bd", direction) so the four
    corner labels of a boundary block stay pairwise distinct."""
    out = {}
    for name, (g, b) in labels.items():
        _, vdir, hdir = _CORNERS[name]
        if i % 2 == 0:
            gdir, bdir = vdir, hdir
        else:
            gdir, bdir = hdir, vdir
        out[name] = (g if g is not None else ("bd",) + gdir,
                     b if b is not None else ("bd",) + bdir)
    return out


def is_boundary_label(label) -> bool:
    return isinstance(label, tuple)


def block_error_support(block: Block, kind: str) -> tuple[int, int]:
    """Two-qubit support of the L1, L2 or DIAG operator of ``block``."""
    try:
        return {"L1": block.l1, "L2": block.l2, "DIAG": block.diag}[kind]
    except KeyError:
        raise ValueError(f"unknown block operator {kind!r}") from None


# --------------------------------------------------------------------------
# restricted matching graphs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RestrictedGraph:
    """Matching substrate over red checks plus one octagon color.

    Node ``k`` is check ``node_check[k]`` in round ``node_round[k]``; nodes
    flagged in ``is_boundary`` are virtual boundary nodes (one per round).
    Edge ``e`` joins ``edge_u[e]`` and ``edge_v[e]``.  Horizontal edges carry
    a qubit in ``edge_qubit``; vertical (measurement) edges carry ``-1``.
    """

    removed: str
    rounds: int
    node_check: np.ndarray
    node_round: np.ndarray
    is_boundary: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_qubit: np.ndarray
    edge_round: np.ndarray
    weights: np.ndarray
    discounted: np.ndarray  # boolean, edge carries the boundary-row discount
    node_of: dict = field(repr=False)  # (check, round) -> node; boundary: (-1, round)

    @property
    def num_nodes(self) -> int:
        return len(self.node_check)

    @property
    def num_edges(self) -> int:
        return len(self.edge_u)

    @property
    def boundary_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.is_boundary)

    def with_weights(self, weights: np.ndarray) -> "RestrictedGraph":
        w = np.asarray(weights, dtype=float)
        if w.shape != self.weights.shape or (w < 0).any():
            raise ValueError("weights must be nonnegative and one per edge")
        return _replace(self, weights=w)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-node list of (neighbour, edge index)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_nodes)]
        for e, (u, v) in enumerate(zip(self.edge_u.tolist(), self.edge_v.tolist())):
            adj[u].append((v, e))
            adj[v].append((u, e))
        return adj


def _replace(obj, **kw):
    from dataclasses import replace
    return replace(obj, **kw)


def restricted_graph(
    lat: ColorCodeLattice,
    removed: str,
    w_b: float = 1.0,
    discount: bool | None = None,
    rows: str = "top_bottom",
) -> RestrictedGraph:
    """Restricted lattice obtained by deleting the ``removed`` color.

    Every qubit becomes one edge between its red check and its check of the
    kept octagon color, or the virtual boundary node when that octagon is
    missing.  With ``discount`` true, all edges of the red checks in the
    boundary rows (``rows="top_bottom"``) or columns (``rows="left_right"``)
    weigh ``w_b``.  ``discount`` defaults to true for ``removed="blue"``.
    """
    if removed not in (GREEN, BLUE):
        raise LatticeError(f"removed color must be green or blue, got {removed!r}")
    if not (0.0 < w_b <= 1.0):
        raise LatticeError(f"w_b must lie in (0, 1], got {w_b!r}")
    if discount is None:
        discount = removed == BLUE
    kept = GREEN if removed == BLUE else BLUE

    node_checks = [c.id for c in lat.checks if c.color in (RED, kept)]
    node_of = {(c, 0): k for k, c in enumerate(node_checks)}
    bnode = len(node_checks)
    node_of[(-1, 0)] = bnode

    last = 2 * lat.surface.distance - 2
    u, v, qub, disc = [], [], [], []
    for q in range(lat.n):
        blk = lat.blocks[lat.qubit_block[q]]
        partner = lat.qubit_checks[q][kept]
        u.append(node_of[(blk.check, 0)])
        v.append(bnode if partner is None else node_of[(partner, 0)])
        qub.append(q)
        i, j = blk.site
        edge_row = i if rows == "top_bottom" else j
        disc.append(bool(discount) and edge_row in (0, last))
    disc_arr = np.array(disc, dtype=bool)
    weights = np.where(disc_arr, float(w_b), 1.0)
    n_nodes = bnode + 1
    return RestrictedGraph(
        removed=removed,
        rounds=1,
        node_check=np.array(node_checks + [-1], dtype=np.int64),
        node_round=np.zeros(n_nodes, dtype=np.int64),
        is_boundary=np.arange(n_nodes) == bnode,
        edge_u=np.array(u, dtype=np.int64),
        edge_v=np.array(v, dtype=np.int64),
        edge_qubit=np.array(qub, dtype=np.int64),
        edge_round=np.zeros(len(u), dtype=np.int64),
        weights=weights,
        discounted=disc_arr,
        node_of=node_of,
    )


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a 0/1 matrix (rows as arrays or int bitmasks)."""
    vecs = []
    for r in rows:
        if isinstance(r, (int, np.integer)):
            vecs.append(int(r))
        else:
            vecs.append(int("".join("1" if x else "0" for x in r) or "0", 2))
    rank = 0
    pivots: dict[int, int] = {}
    for x in vecs:
        while x:
            top = x.bit_length() - 1
            if top in pivots:
                x ^= pivots[top]
            else:
                pivots[top] = x
                rank += 1
                break
    return rank


def _mask(qubits) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def min_logical_weight(lat: ColorCodeLattice, max_weight: int) -> int | None:
    """Smallest weight <= ``max_weight`` of an X operator commuting with all
    Z checks and anticommuting with a logical Z, by exhaustive search.
    Returns None when no such operator exists up to ``max_weight``."""
    ncheck = len(lat.checks)
    sig = [0] * lat.n
    for c in lat.checks:
        for q in c.support:
            sig[q] |= 1 << c.id
    for k, color in enumerate((GREEN, BLUE)):
        for q in lat.logicals[color]:
            sig[q] |= 1 << (ncheck + k)
    check_mask = (1 << ncheck) - 1
    n = lat.n

    for w in range(1, max_weight + 1):
        # depth-first enumeration of all weight-w subsets with running XOR
        stack = [(0, 0, 0)]  # (next qubit, depth, accumulated signature)
        while stack:
            start, depth, acc = stack.pop()
            if depth == w:
                if acc and not (acc & check_mask):
                    return w
                continue
            for q in range(start, n - (w - depth) + 1):
                stack.append((q + 1, depth + 1, acc ^ sig[q]))
    return None


def validate(lat: ColorCodeLattice, distance_check_max: int = 6) -> dict[str, bool]:
    """Run the lattice invariants; failures are reported, never raised."""
    d = lat.distance
    m = d // 2
    report: dict[str, bool] = {}
    report["qubit_count"] = lat.n == 2 * (d - 1) ** 2 + 2
    report["block_count"] = len(lat.blocks) == 2 * m * m - 2 * m + 1
    report["face_count"] = len(lat.checks) == 4 * m * m - 4 * m + 1

    masks = [_mask(c.support) for c in lat.checks]
    report["commutation"] = all(
        bin(a & b).count("1") % 2 == 0 for a, b in itertools.combinations(masks, 2)
    )
    # X and Z checks share supports, so the full CSS rank is twice the face rank
    report["rank"] = 2 * gf2_rank(masks) == lat.n - 2

    cover = sorted(q for b in lat.blocks for q in b.corners.values())
    report["block_partition"] = cover == list(range(lat.n))

    corner_ok = True
    for b in lat.blocks:
        labs = list(b.labels.values())
        greens = {g for g, _ in labs}
        blues = {x for _, x in labs}
        corner_ok &= len(set(labs)) == 4 and len(greens) == 2 and len(blues) == 2
        corner_ok &= set(labs) == set(itertools.product(greens, blues))
        corner_ok &= len(b.diag) == 2 and set(b.diag) == set(b.l1) ^ set(b.l2)
    report["block_corners"] = corner_ok

    lg, lb = _mask(lat.logicals[GREEN]), _mask(lat.logicals[BLUE])
    report["logicals_commute_with_checks"] = all(
        bin(lg & c).count("1") % 2 == 0 and bin(lb & c).count("1") % 2 == 0 for c in masks
    )
    report["logicals_anticommute"] = bin(lg & lb).count("1") % 2 == 1
    report["logical_weight"] = len(lat.logicals[GREEN]) == d and len(lat.logicals[BLUE]) == d
    if d <= distance_check_max:
        report["distance"] = min_logical_weight(lat, d - 1) is None
    return report
