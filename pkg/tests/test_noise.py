import numpy as np
import pytest

from colormatch.experiment import RunConfig, run
from colormatch.lattice import build_color_lattice
from colormatch.noise import (
    NoiseError, NoiseSpec, batch_rng, block_maps, logical_flips, sample_bitflip,
    sample_depolarizing_mapped, sample_shots, syndrome,
)


@pytest.fixture(scope="module")
def lat():
    return build_color_lattice(6)


def test_spec_validation():
    with pytest.raises(NoiseError):
        NoiseSpec("toric", 0.1)
    with pytest.raises(NoiseError):
        NoiseSpec("color", 1.2)
    with pytest.raises(NoiseError):
        NoiseSpec("color", 0.1, rounds=3)
    with pytest.raises(NoiseError):
        NoiseSpec("color", 0.1, model="phenomenological", rounds=0)
    assert NoiseSpec("color", 0.1).meas_q == 0.1
    assert not NoiseSpec("surface", 0.1).red_measurements


def test_batch_rng_is_keyed():
    a = batch_rng(7, 3).random(5)
    assert np.array_equal(a, batch_rng(7, 3).random(5))
    assert not np.array_equal(a, batch_rng(7, 4).random(5))
    with pytest.raises(NoiseError):
        batch_rng(-1, 0)


def test_bitflip_rate(lat):
    e = sample_bitflip(lat, 0.1, 20_000, batch_rng(0, 0))
    assert abs(e.mean() - 0.1) < 0.003


def test_depolarizing_mapped_structure(lat):
    maps = block_maps(lat)
    e = sample_depolarizing_mapped(lat, 0.3, 5_000, batch_rng(1, 0), maps)
    h = lat.check_matrix()
    red = [c.id for c in lat.checks_of("red")]
    # mapped errors commute with every red square
    assert not syndrome(h, e)[:, red].any()
    # per block: weight 0 or 2, and each Pauli appears with rate p/3
    w = np.stack([e[:, list(b.qubits)].sum(axis=1) for b in lat.blocks], axis=1)
    assert set(np.unique(w)) <= {0, 2}
    assert abs((w > 0).mean() - 0.3) < 0.01
    b0 = lat.blocks[0]
    kinds = []
    for s in range(len(e)):
        sup = tuple(np.flatnonzero(e[s, list(b0.qubits)]))
        if sup:
            kinds.append(tuple(np.array(b0.qubits)[list(sup)]))
    counts = {k: kinds.count(k) / len(kinds) for k in set(kinds)}
    assert set(counts) == {tuple(b0.l1), tuple(b0.l2), tuple(b0.diag)}
    assert all(abs(v - 1 / 3) < 0.05 for v in counts.values())


def test_phenomenological_differences(lat):
    spec = NoiseSpec("color", 0.05, model="phenomenological", rounds=5)
    shots = sample_shots(lat, spec, 200, batch_rng(2, 0))
    assert shots.syndromes.shape == (200, 5, len(lat.checks))
    final = np.bitwise_xor.reduce(shots.syndromes, axis=1)
    assert np.array_equal(final, syndrome(lat.check_matrix(), shots.errors))


def test_surface_phenomenological_has_no_red_flips(lat):
    spec = NoiseSpec("surface", 0.2, model="phenomenological", rounds=4)
    shots = sample_shots(lat, spec, 200, batch_rng(3, 0))
    red = [c.id for c in lat.checks_of("red")]
    assert not shots.syndromes[:, :, red].any()


def test_logical_flips(lat):
    res = np.zeros((2, lat.n), dtype=np.uint8)
    res[1, list(lat.logicals["green"])] = 1
    f = logical_flips(lat, res)
    assert f["blue"].tolist() == [False, True]


def test_worker_count_does_not_change_tallies():
    cfg = RunConfig(d=4, noise=NoiseSpec("color", 0.08), shots=1200, batch=200, seed=11)
    a = run(cfg, workers=1)
    b = run(cfg, workers=3)
    assert a == b
    assert a.shots == 1200 and 0 < a.fail_any <= a.shots


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(d=4, noise=NoiseSpec("color", 0.1), decoder="unified")
    with pytest.raises(ValueError):
        RunConfig(d=4, noise=NoiseSpec("color", 0.1), logicals=("red",))
