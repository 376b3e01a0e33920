"""Error and syndrome sampling.

Two code families share one lattice.  The color family puts independent
bit flips on every color qubit.  The surface family draws depolarizing
errors on the surface qubits and maps each Pauli to the two-qubit operator
of its red block (X -> L1, Z -> L2, Y -> the diagonal), so decoding the
color code decodes the surface code.

Randomness is counter based: batch ``b`` of a run with master seed ``s``
draws from ``SeedSequence([s, b])``.  Results therefore depend only on the
seed and the batch size, never on how batches are spread over workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ColorCodeLattice

COLOR = "color"
SURFACE = "surface"
CODE_CAPACITY = "code_capacity"
PHENOMENOLOGICAL = "phenomenological"


class NoiseError(ValueError):
    """Invalid noise configuration."""


@dataclass(frozen=True)
class NoiseSpec:
    """Noise model for one sampling run.

    ``family`` selects bit flips on the color code or mapped depolarizing
    noise on the surface code.  ``model`` is code capacity (one perfect
    round) or phenomenological (``rounds`` noisy rounds with measurement
    flip rate ``q`` followed by a perfect one).  ``q`` defaults to ``p``.
    """

    family: str
    p: float
    model: str = CODE_CAPACITY
    rounds: int = 1
    q: float | None = None

    def __post_init__(self):
        if self.family not in (COLOR, SURFACE):
            raise NoiseError(f"unknown code family {self.family!r}")
        if self.model not in (CODE_CAPACITY, PHENOMENOLOGICAL):
            raise NoiseError(f"unknown noise model {self.model!r}")
        if not (0.0 <= self.p <= 1.0):
            raise NoiseError(f"p must lie in [0, 1], got {self.p}")
        if self.q is not None and not (0.0 <= self.q <= 1.0):
            raise NoiseError(f"q must lie in [0, 1], got {self.q}")
        if self.rounds < 1:
            raise NoiseError("rounds must be >= 1")
        if self.model == CODE_CAPACITY and self.rounds != 1:
            raise NoiseError("code capacity noise has a single round")

    @property
    def meas_q(self) -> float:
        return self.p if self.q is None else self.q

    @property
    def red_measurements(self) -> bool:
        # red checks are gauge products of the surface code, not measured
        return self.family == COLOR


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    """Independent stream for one batch, keyed by (seed, batch index)."""
    if seed < 0 or batch < 0:
        raise NoiseError("seed and batch index must be nonnegative")
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(batch)]))


def block_maps(lat: ColorCodeLattice) -> np.ndarray:
    """(blocks, 3, n) uint8 supports of L1, L2 and DIAG for each block."""
    out = np.zeros((len(lat.blocks), 3, lat.n), dtype=np.uint8)
    for b in lat.blocks:
        for k, sup in enumerate((b.l1, b.l2, b.diag)):
            out[b.id, k, list(sup)] = 1
    return out


def sample_bitflip(lat: ColorCodeLattice, p: float, shots: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.random((shots, lat.n)) < p).astype(np.uint8)


def sample_depolarizing_mapped(lat: ColorCodeLattice, p: float, shots: int,
                               rng: np.random.Generator, maps: np.ndarray | None = None) -> np.ndarray:
    """Depolarizing errors on surface qubits, lifted to color qubit flips."""
    maps = block_maps(lat) if maps is None else maps
    nb = len(lat.blocks)
    u = rng.random((shots, nb))
    # 0 = I, 1 = X, 2 = Z, 3 = Y with probability p/3 each
    pauli = np.zeros((shots, nb), dtype=np.int64)
    pauli[u < p] = 1 + np.floor(u[u < p] / (p / 3)).astype(np.int64).clip(0, 2)
    err = np.zeros((shots, lat.n), dtype=np.int64)
    for k in range(3):  # X -> L1, Z -> L2, Y -> DIAG
        err += (pauli == k + 1).astype(np.int64) @ maps[:, k, :].astype(np.int64)
    # blocks have disjoint supports, so sums are already 0/1
    return err.astype(np.uint8)


def sample_data(lat: ColorCodeLattice, spec: NoiseSpec, shots: int, rng: np.random.Generator,
                maps: np.ndarray | None = None) -> np.ndarray:
    if spec.family == COLOR:
        return sample_bitflip(lat, spec.p, shots, rng)
    return sample_depolarizing_mapped(lat, spec.p, shots, rng, maps)


def syndrome(h: np.ndarray, errors: np.ndarray) -> np.ndarray:
    return ((errors.astype(np.int64) @ h.T.astype(np.int64)) & 1).astype(np.uint8)


@dataclass
class ShotBatch:
    errors: np.ndarray  # (shots, n) accumulated data error
    syndromes: np.ndarray  # (shots, checks) or (shots, rounds, checks) differences


def sample_shots(lat: ColorCodeLattice, spec: NoiseSpec, shots: int, rng: np.random.Generator,
                 h: np.ndarray | None = None, maps: np.ndarray | None = None,
                 red_mask: np.ndarray | None = None) -> ShotBatch:
    """Draw errors and the syndromes a decoder sees.

    Phenomenological shots return per-round difference syndromes: round
    ``t`` reports ``s_t xor s_(t-1)`` where ``s_t`` is the noisy measurement
    of the accumulated error.  The last round is noiseless, so the XOR over
    rounds equals the true final syndrome.
    """
    h = lat.check_matrix() if h is None else h
    if spec.model == CODE_CAPACITY:
        err = sample_data(lat, spec, shots, rng, maps)
        return ShotBatch(err, syndrome(h, err))
    r = spec.rounds
    nc = h.shape[0]
    if red_mask is None:
        red_mask = np.array([c.color == "red" for c in lat.checks])
    measured = np.ones(nc, dtype=bool) if spec.red_measurements else ~red_mask
    acc = np.zeros((shots, lat.n), dtype=np.uint8)
    prev = np.zeros((shots, nc), dtype=np.uint8)
    diffs = np.zeros((shots, r, nc), dtype=np.uint8)
    for t in range(r):
        acc ^= sample_data(lat, spec, shots, rng, maps)
        s = syndrome(h, acc)
        if t < r - 1:
            flips = (rng.random((shots, nc)) < spec.meas_q) & measured
            s = s ^ flips.astype(np.uint8)
        diffs[:, t] = s ^ prev
        prev = s
    return ShotBatch(acc, diffs)


def logical_flips(lat: ColorCodeLattice, residual: np.ndarray) -> dict[str, np.ndarray]:
    """Per-logical failure indicator of residual errors (rows)."""
    out = {}
    for color, sup in lat.logicals.items():
        out[color] = np.bitwise_xor.reduce(residual[:, list(sup)], axis=1).astype(bool)
    return out
