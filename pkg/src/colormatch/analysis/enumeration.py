"""Exhaustive enumeration of fixed-weight errors.

Degenerate matchings are resolved by the decoder's weight jitter, so a
configuration's failure is a fraction over tie-break realizations.  The
expected failure count is the sum of these fractions.

Optional screening decodes every configuration with the first ``screen``
tie-break realizations only; configurations that fail at least once get the
remaining ones.  A configuration with failure fraction f is missed with
probability (1 - f)^screen, which biases the count low by at most that much.
Antithetic pairs (u, 1 - u) are no substitute: with ties in both stages the
two flips cancel and both decodes can succeed.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..decoders import Decoder, DecoderConfig
from ..lattice import BLUE, ColorCodeLattice, build_color_lattice
from ..matching import CapacityError

MAX_CONFIGS = 10**7
PATTERN_LETTERS = "DESN"


@dataclass
class EnumerationResult:
    d: int
    weight: int
    decoder: str
    logical: str
    configurations: int
    repeats: int
    expected: float
    stderr: float
    failing: dict = field(repr=False, default_factory=dict)  # qubit tuple -> fraction
    screened: int = 0

    def by_row(self, lat: ColorCodeLattice) -> Counter:
        """Expected failures grouped by the set of block rows touched."""
        out = Counter()
        for qs, f in self.failing.items():
            rows = tuple(sorted({lat.blocks[lat.qubit_block[q]].site[0] for q in qs}))
            out[rows] += f
        return out


def _logical_vec(lat: ColorCodeLattice, logical: str) -> np.ndarray:
    v = np.zeros(lat.n, dtype=np.int64)
    v[list(lat.logicals[logical])] = 1
    return v


def _error_rows(combos: np.ndarray, n: int) -> np.ndarray:
    e = np.zeros((len(combos), n), dtype=np.uint8)
    if len(combos):
        e[np.arange(len(combos))[:, None], combos] = 1
    return e


def failure_fractions(dec: Decoder, errors: np.ndarray, logical_vec: np.ndarray,
                      keys) -> np.ndarray:
    """Failure count over ``keys`` for each error row."""
    h = dec.h.astype(np.int64)
    syn = (errors.astype(np.int64) @ h.T) & 1
    fails = np.zeros(len(errors), dtype=np.int64)
    for key in keys:
        corr = dec.decode_batch(syn, key=key)
        fails += ((errors ^ corr).astype(np.int64) @ logical_vec) & 1
    return fails


def _chunks(n: int, w: int, size: int):
    it = itertools.combinations(range(n), w)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def enumerate_failures(
    d: int,
    cfg: DecoderConfig,
    weight: int | None = None,
    repeats: int = 32,
    logical: str | None = None,
    screen: int | None = None,
    chunk: int = 50_000,
    lat: ColorCodeLattice | None = None,
    progress=None,
) -> EnumerationResult:
    """Decode every weight-``weight`` error and sum failure fractions.

    ``weight`` defaults to ``d // 2``.  ``logical`` defaults to the logical
    the decoder order is tuned for.  ``screen=None`` gives every
    configuration all ``repeats`` decodes.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    lat = lat or build_color_lattice(d)
    weight = d // 2 if weight is None else int(weight)
    total = comb(lat.n, weight)
    if total > MAX_CONFIGS:
        raise CapacityError(f"{total} configurations exceed the limit of {MAX_CONFIGS}")
    logical = logical or cfg.tuned_logical
    lvec = _logical_vec(lat, logical)
    if screen is not None and not (1 <= screen <= repeats):
        raise ValueError("screen must lie in [1, repeats]")
    dec = Decoder(lat, cfg, pool=repeats)
    keys = [(k, False) for k in range(repeats)]
    head, tail = (keys[:screen], keys[screen:]) if screen else ([], keys)

    failing: dict[tuple, float] = {}
    var = 0.0
    screened = 0
    done = 0
    for combos in _chunks(lat.n, weight, chunk):
        errors = _error_rows(combos, lat.n)
        fails = np.zeros(len(combos), dtype=np.int64)
        if head:
            fails = failure_fractions(dec, errors, lvec, head)
            sel = np.flatnonzero(fails > 0)
            screened += len(sel)
            combos, errors, fails = combos[sel], errors[sel], fails[sel]
        if len(combos):
            fails = fails + failure_fractions(dec, errors, lvec, tail)
            for row in np.flatnonzero(fails).tolist():
                f = fails[row] / repeats
                failing[tuple(combos[row].tolist())] = f
                var += f * (1 - f) / repeats
        done += chunk
        if progress is not None:
            progress(min(done, total), total)

    name = "correlated" if cfg.zero_weight_enabled else "restricted"
    return EnumerationResult(
        d=d, weight=weight, decoder=name, logical=logical, configurations=total,
        repeats=repeats, expected=float(sum(failing.values())), stderr=float(np.sqrt(var)),
        failing=failing, screened=screened,
    )


# --------------------------------------------------------------------------
# boundary-row patterns
# --------------------------------------------------------------------------


def block_options(block) -> dict[str, list[tuple[int, ...]]]:
    """Per-square error choices along a row: two diagonals, two edges
    parallel to the row, four single qubits, or nothing."""
    qs = set(block.qubits)
    return {
        "D": [tuple(sorted(block.diag)), tuple(sorted(qs - set(block.diag)))],
        "E": [tuple(sorted(block.l2)), tuple(sorted(qs - set(block.l2)))],
        "S": [(q,) for q in block.qubits],
        "N": [()],
    }


LETTER_WEIGHT = {"D": 2, "E": 2, "S": 1, "N": 0}


def row_patterns(m: int, require_d: bool = True) -> list[str]:
    """Multisets over {D, E, S, N} of size ``m`` and total weight ``m``."""
    out = []
    for combo in itertools.combinations_with_replacement(PATTERN_LETTERS, m):
        if sum(LETTER_WEIGHT[c] for c in combo) != m:
            continue
        if require_d and "D" not in combo:
            continue
        out.append("".join(combo))
    return out


def pattern_configurations(blocks, pattern: str):
    """All qubit sets realizing ``pattern`` on the ordered ``blocks``."""
    letters = sorted(pattern)
    for arrangement in sorted(set(itertools.permutations(letters))):
        choices = [block_options(b)[c] for b, c in zip(blocks, arrangement)]
        for pick in itertools.product(*choices):
            yield tuple(sorted(q for part in pick for q in part))


def pattern_label(pattern: str) -> str:
    order = {c: k for k, c in enumerate(PATTERN_LETTERS)}
    return "{" + ",".join(sorted(pattern, key=order.__getitem__)) + "}"


@dataclass
class PatternCount:
    pattern: str
    configurations: int
    expected: float  # mean over tie-break resamples
    deterministic: int  # unperturbed weights, single decode
    stderr: float


def enumerate_boundary_patterns(
    d: int,
    w_b: float,
    repeats: int = 16,
    row: int = 0,
    patterns: list[str] | None = None,
    engine: str = "pymatching",
    lat: ColorCodeLattice | None = None,
) -> dict[str, PatternCount]:
    """Failure counts of weight-d/2 errors confined to one boundary row.

    Uses the correlated decoder tuned for the blue logical (row failures)
    and counts failures of that logical.
    """
    if d < 6 or d % 2:
        raise ValueError("boundary patterns need even d >= 6")
    lat = lat or build_color_lattice(d)
    m = d // 2
    blocks = sorted((b for b in lat.blocks if b.site[0] == row), key=lambda b: b.site[1])
    if len(blocks) != m:
        raise ValueError(f"row {row} holds {len(blocks)} red squares, expected {m}")
    cfg = DecoderConfig(w_b=w_b, engine=engine)
    dec = Decoder(lat, cfg, pool=repeats)
    lvec = _logical_vec(lat, BLUE)
    keys = [(k, False) for k in range(repeats)]
    out = {}
    for pat in patterns or row_patterns(m):
        configs = list(pattern_configurations(blocks, pat))
        errors = _error_rows(np.array(configs, dtype=np.int64), lat.n) if configs else \
            np.zeros((0, lat.n), dtype=np.uint8)
        frac = failure_fractions(dec, errors, lvec, keys) / repeats
        det = failure_fractions(dec, errors, lvec, [None])
        out[pat] = PatternCount(
            pattern=pattern_label(pat),
            configurations=len(configs),
            expected=float(frac.sum()),
            deterministic=int(det.sum()),
            stderr=float(np.sqrt(np.sum(frac * (1 - frac)) / repeats)),
        )
    return out


def pattern_theory(pattern: str, m: int) -> int:
    """Closed-form per-row count for a boundary pattern.

    A pattern with 2i diagonals, j edges, M - 4i - 2j singles and the rest
    empty matches term (i, j) of the boundary excess; any other pattern is
    predicted to be corrected.
    """
    from .counts import boundary_terms

    c = Counter(pattern)
    if c["D"] % 2 or c["D"] == 0:
        return 0
    i, j = c["D"] // 2, c["E"]
    if c["S"] != m - 4 * i - 2 * j or c["N"] != 2 * i + j:
        return 0
    return boundary_terms(m).get((i, j), 0) // 2


def boundary_table(d: int, repeats: int = 16, row: int | None = None,
                   engine: str = "pymatching") -> list[dict]:
    """Rows (pattern, N, N', N_b) for one boundary row of distance ``d``.

    N and N' are deterministic counts (unperturbed weights) at w_b = 1 and
    w_b = 0.999; the tie-break expectations are reported alongside.
    ``row`` defaults to the bottom boundary row of red squares.
    """
    lat = build_color_lattice(d)
    row = d - 2 if row is None else row
    plain = enumerate_boundary_patterns(d, 1.0, repeats, row=row, engine=engine, lat=lat)
    tuned = enumerate_boundary_patterns(d, 0.999, repeats, row=row, engine=engine, lat=lat)
    out = []
    for pat in plain:
        out.append({
            "d": d,
            "row": row,
            "pattern": plain[pat].pattern,
            "configurations": plain[pat].configurations,
            "N": plain[pat].deterministic,
            "N_prime": tuned[pat].deterministic,
            "N_b": pattern_theory(pat, d // 2),
            "N_expected": round(plain[pat].expected, 4),
            "N_prime_expected": round(tuned[pat].expected, 4),
        })
    return out
