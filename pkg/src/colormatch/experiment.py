"""Monte Carlo sampling of logical failure rates.

Shots are split into fixed-size batches.  Batch ``b`` draws its errors and
its tie-break keys from ``batch_rng(seed, b)``, and per-batch tallies are
integers, so totals are identical for any number of worker processes.
"""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import dataclass, replace

import numpy as np

from .analysis.fitting import SampleRecord
from .decoders import Decoder, DecoderConfig
from .lattice import BLUE, GREEN, build_color_lattice
from .noise import PHENOMENOLOGICAL, NoiseSpec, batch_rng, block_maps, logical_flips, sample_shots

DECODERS = ("correlated", "restricted")


@dataclass(frozen=True)
class RunConfig:
    d: int
    noise: NoiseSpec
    decoder: str = "correlated"
    shots: int = 10_000
    seed: int = 0
    batch: int = 1_000
    w_b: float = 0.999
    engine: str = "pymatching"
    logicals: tuple = (GREEN, BLUE)
    pool: int = 16

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.shots < 0 or self.batch < 1:
            raise ValueError("shots must be >= 0 and batch >= 1")
        if not set(self.logicals) <= {GREEN, BLUE} or not self.logicals:
            raise ValueError(f"logicals must be a nonempty subset of green/blue, got {self.logicals}")


class _Worker:
    """Holds the lattice and decoders for one process."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lat = build_color_lattice(cfg.d)
        self.h = self.lat.check_matrix()
        self.maps = block_maps(self.lat)
        self.red = np.array([c.color == "red" for c in self.lat.checks])
        spec = cfg.noise
        kw = {}
        if spec.model == PHENOMENOLOGICAL:
            kw = dict(rounds=spec.rounds, p=spec.p, q=spec.meas_q, red_vertical=spec.red_measurements)
        self.decoders = {}
        if cfg.decoder == "restricted":
            dc = DecoderConfig.restricted(engine=cfg.engine, seed=cfg.seed)
            dec = Decoder(self.lat, dc, pool=cfg.pool, **kw)
            for color in cfg.logicals:
                self.decoders[color] = dec
        else:
            for color in cfg.logicals:
                dc = DecoderConfig.for_logical(color, w_b=cfg.w_b, engine=cfg.engine, seed=cfg.seed)
                self.decoders[color] = Decoder(self.lat, dc, pool=cfg.pool, **kw)

    def run_batch(self, b: int) -> np.ndarray:
        """(fail_g, fail_b, fail_any) for batch ``b``."""
        cfg = self.cfg
        k = min(cfg.batch, cfg.shots - b * cfg.batch)
        if k <= 0:
            return np.zeros(3, dtype=np.int64)
        rng = batch_rng(cfg.seed, b)
        shots = sample_shots(self.lat, cfg.noise, k, rng, h=self.h, maps=self.maps, red_mask=self.red)
        ties = rng.integers(cfg.pool, size=k)
        fails = {c: np.zeros(k, dtype=bool) for c in (GREEN, BLUE)}
        done: dict[int, dict] = {}
        for color in cfg.logicals:
            dec = self.decoders[color]
            if id(dec) not in done:
                corr = np.zeros((k, self.lat.n), dtype=np.uint8)
                for key in np.unique(ties).tolist():
                    sel = np.flatnonzero(ties == key)
                    corr[sel] = dec.decode_batch(shots.syndromes[sel], key=(key, False))
                done[id(dec)] = logical_flips(self.lat, shots.errors ^ corr)
            fails[color] = done[id(dec)][color]
        any_ = fails[GREEN] | fails[BLUE]
        return np.array([fails[GREEN].sum(), fails[BLUE].sum(), any_.sum()], dtype=np.int64)


_WORKER: _Worker | None = None


def _init(cfg: RunConfig):
    global _WORKER
    _WORKER = _Worker(cfg)


def _task(b: int) -> np.ndarray:
    return _WORKER.run_batch(b)


def run(cfg: RunConfig, workers: int = 1) -> SampleRecord:
    """Sample ``cfg.shots`` shots and return the tallies."""
    nb = -(-cfg.shots // cfg.batch)
    if workers <= 1 or nb <= 1:
        w = _Worker(cfg)
        parts = [w.run_batch(b) for b in range(nb)]
    else:
        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_init, initargs=(cfg,)) as pool:
            parts = pool.map(_task, range(nb), chunksize=1)
    tot = np.sum(parts, axis=0) if parts else np.zeros(3, dtype=np.int64)
    return SampleRecord(
        family=cfg.noise.family, decoder=cfg.decoder, d=cfg.d, p=cfg.noise.p,
        rounds=cfg.noise.rounds, shots=cfg.shots, fail_g=int(tot[0]), fail_b=int(tot[1]),
        fail_any=int(tot[2]), seed=cfg.seed,
    )


def sweep(base: RunConfig, distances, p_values, workers: int = 1, rounds_per_d=None,
          progress=None) -> list[SampleRecord]:
    """Run a grid over distances and physical rates.

    ``rounds_per_d`` maps d to a round count for phenomenological noise
    (for example ``lambda d: d``).
    """
    out = []
    for d in distances:
        for p in p_values:
            spec = replace(base.noise, p=float(p))
            if rounds_per_d is not None:
                spec = replace(spec, rounds=int(rounds_per_d(d)))
            rec = run(replace(base, d=int(d), noise=spec), workers=workers)
            out.append(rec)
            if progress is not None:
                progress(rec)
    return out
