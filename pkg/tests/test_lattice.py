import json

import numpy as np
import pytest

from colormatch.lattice import (
    BLUE, GREEN, RED, LatticeError, block_error_support, build_color_lattice,
    build_surface_lattice, gf2_rank, min_logical_weight, restricted_graph, validate,
)


@pytest.mark.parametrize("d", [4, 6, 8, 10])
def test_counts(d):
    lat = build_color_lattice(d)
    m = d // 2
    assert lat.n == 2 * (d - 1) ** 2 + 2
    assert len(lat.blocks) == 2 * m * m - 2 * m + 1
    assert len(lat.checks) == 4 * m * m - 4 * m + 1
    assert len(lat.checks_of(RED)) == len(lat.blocks)


def test_known_small_sizes():
    # d=4: 20 qubits, 5 squares, 4 octagons
    lat = build_color_lattice(4)
    assert (lat.n, len(lat.checks_of(RED)), len(lat.checks_of(GREEN)) + len(lat.checks_of(BLUE))) == (20, 5, 4)


@pytest.mark.parametrize("d", [4, 6, 8])
def test_invariants(d):
    report = validate(build_color_lattice(d), distance_check_max=6)
    assert all(report.values()), report


def test_rank_encodes_two_logicals():
    lat = build_color_lattice(6)
    h = lat.check_matrix()
    assert 2 * gf2_rank(h) == lat.n - 2


def test_weight_three_error_is_not_logical_at_d4():
    lat = build_color_lattice(4)
    assert min_logical_weight(lat, 3) is None
    assert min_logical_weight(lat, 4) == 4


def test_block_operators():
    lat = build_color_lattice(6)
    h = lat.check_matrix()
    for b in lat.blocks:
        for kind in ("L1", "L2", "DIAG"):
            sup = block_error_support(b, kind)
            e = np.zeros(lat.n, dtype=np.int64)
            e[list(sup)] = 1
            syn = (h.astype(np.int64) @ e) & 1
            # two-qubit block errors never flip the red square
            assert syn[b.check] == 0
            colors = {lat.checks[c].color for c in np.flatnonzero(syn)}
            if kind == "L1":
                assert colors <= {GREEN}
            elif kind == "L2":
                assert colors <= {BLUE}
    with pytest.raises(ValueError):
        block_error_support(lat.blocks[0], "XX")


def test_logical_supports_on_boundaries():
    lat = build_color_lattice(8)
    top = {lat.blocks[lat.qubit_block[q]].site[0] for q in lat.logicals[GREEN]}
    left = {lat.blocks[lat.qubit_block[q]].site[1] for q in lat.logicals[BLUE]}
    assert top == {0} and left == {0}


def test_json_roundtrip():
    lat = build_color_lattice(4)
    data = json.loads(lat.dumps())
    assert data["distance"] == 4
    assert len(data["checks"]) == 2 * len(lat.checks)
    assert {c["kind"] for c in data["checks"]} == {"X", "Z"}
    assert len(data["blocks"]) == 5


@pytest.mark.parametrize("bad", [3, 2, 0, -4, 5])
def test_rejects_bad_distance(bad):
    with pytest.raises(LatticeError):
        build_color_lattice(bad)


def test_surface_lattice():
    s = build_surface_lattice(3)
    assert s.n == 13
    with pytest.raises(LatticeError):
        build_surface_lattice(1)


def test_restricted_graph_shape():
    lat = build_color_lattice(6)
    for removed, kept in ((BLUE, GREEN), (GREEN, BLUE)):
        g = restricted_graph(lat, removed)
        assert g.num_edges == lat.n
        colors = {lat.checks[c].color for c in g.node_check.tolist() if c >= 0}
        assert colors == {RED, kept}
        assert g.boundary_nodes.tolist() == [g.num_nodes - 1]


def test_restricted_graph_discount():
    lat = build_color_lattice(6)
    g = restricted_graph(lat, BLUE, w_b=0.999)
    last = 2 * lat.surface.distance - 2
    for e in range(g.num_edges):
        row = lat.blocks[lat.qubit_block[g.edge_qubit[e]]].site[0]
        assert (g.weights[e] == 0.999) == (row in (0, last))
    g2 = restricted_graph(lat, GREEN, w_b=0.999)
    assert np.all(g2.weights == 1.0)
    with pytest.raises(LatticeError):
        restricted_graph(lat, RED)
    with pytest.raises(LatticeError):
        restricted_graph(lat, BLUE, w_b=0.0)
