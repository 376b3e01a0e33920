"""Low-error-rate failure curves by fixed-weight stratification.

For iid bit flips the number of flipped qubits is binomial, so

    P_fail(p) = sum_w C(n, w) p^w (1 - p)^(n - w) f_w

where f_w is the failure probability given a uniformly random weight-w
error.  Strata below d/2 are exactly zero.  Each f_w is estimated once,
either exactly (enumeration with tie-break resampling) when the stratum is
small or by Monte Carlo over uniform weight-w sets, and then reused for
every p.  Weights above ``w_max`` are dropped; the dropped binomial mass is
reported as a bound on the truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.stats import binom

from ..decoders import Decoder, DecoderConfig
from ..lattice import ColorCodeLattice, build_color_lattice
from ..noise import batch_rng
from .enumeration import _error_rows, _logical_vec, enumerate_failures


@dataclass
class Stratum:
    weight: int
    method: str  # "zero", "exact" or "mc"
    f: float
    stderr: float
    samples: int


@dataclass
class LowRateEstimate:
    d: int
    n: int
    decoder: str
    p: np.ndarray
    p_fail: np.ndarray
    stderr: np.ndarray
    truncation: np.ndarray
    strata: list[Stratum] = field(default_factory=list)
    estimator: str = "fixed-weight stratification"

    def loglog_slope(self, pmax: float | None = None) -> float:
        sel = self.p <= pmax if pmax is not None else np.ones(len(self.p), dtype=bool)
        if sel.sum() < 2:
            raise ValueError("need at least two p values for a slope")
        return float(np.polyfit(np.log(self.p[sel]), np.log(self.p_fail[sel]), 1)[0])

    def leading_count(self) -> float:
        """Estimated number of failing minimum-weight configurations."""
        s = self.strata[0] if self.strata else None
        for st in self.strata:
            if st.f > 0:
                s = st
                break
        return s.f * comb(self.n, s.weight) if s is not None else 0.0


def sample_weight_errors(n: int, w: int, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random weight-w subsets of n qubits, as 0/1 rows."""
    keys = rng.random((shots, n))
    idx = np.argpartition(keys, w - 1, axis=1)[:, :w] if w > 0 else np.zeros((shots, 0), dtype=np.int64)
    return _error_rows(idx, n)


def stratum_mc(dec: Decoder, lat: ColorCodeLattice, w: int, shots: int, seed: int,
               logical: str, batch: int = 20_000) -> Stratum:
    lvec = _logical_vec(lat, logical)
    h = dec.h.astype(np.int64)
    fails = 0
    done = 0
    b = 0
    while done < shots:
        k = min(batch, shots - done)
        rng = batch_rng(seed, 10_000 * w + b)
        err = sample_weight_errors(lat.n, w, k, rng)
        syn = (err.astype(np.int64) @ h.T) & 1
        tie = rng.integers(dec.pool, size=k)
        for key in np.unique(tie).tolist():
            sel = np.flatnonzero(tie == key)
            corr = dec.decode_batch(syn[sel], key=(key, False))
            fails += int(((((err[sel] ^ corr).astype(np.int64)) @ lvec) & 1).sum())
        done += k
        b += 1
    f = fails / shots
    return Stratum(w, "mc", f, float(np.sqrt(max(f * (1 - f), 1.0 / shots**2) / shots)), shots)


def lowrate_estimate(
    d: int,
    cfg: DecoderConfig,
    p_values,
    shots_per_weight: int = 20_000,
    w_max: int | None = None,
    exact_limit: int = 30_000,
    repeats: int = 16,
    seed: int = 0,
    logical: str | None = None,
    lat: ColorCodeLattice | None = None,
) -> LowRateEstimate:
    """Stratified estimate of the logical failure rate at each ``p``."""
    lat = lat or build_color_lattice(d)
    n = lat.n
    m = d // 2
    w_max = w_max if w_max is not None else min(n, 3 * m)
    if w_max < m:
        raise ValueError("w_max must be at least d/2")
    logical = logical or cfg.tuned_logical
    dec = Decoder(lat, cfg, pool=repeats)
    strata = []
    for w in range(0, w_max + 1):
        if w < m:
            strata.append(Stratum(w, "zero", 0.0, 0.0, 0))
        elif comb(n, w) <= exact_limit:
            res = enumerate_failures(d, cfg, weight=w, repeats=repeats, logical=logical, lat=lat)
            strata.append(Stratum(w, "exact", res.expected / comb(n, w), res.stderr / comb(n, w), comb(n, w)))
        else:
            strata.append(stratum_mc(dec, lat, w, shots_per_weight, seed, logical))
    p = np.asarray(list(p_values), dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise ValueError("p values must lie in (0, 1)")
    ws = np.arange(w_max + 1)
    pmf = binom.pmf(ws[None, :], n, p[:, None])
    f = np.array([s.f for s in strata])
    se = np.array([s.stderr for s in strata])
    name = "correlated" if cfg.zero_weight_enabled else "restricted"
    return LowRateEstimate(
        d=d, n=n, decoder=name, p=p,
        p_fail=pmf @ f,
        stderr=np.sqrt((pmf**2) @ (se**2)),
        truncation=binom.sf(w_max, n, p),
        strata=strata,
    )
