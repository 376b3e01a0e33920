from fractions import Fraction
from math import comb

import numpy as np
import pytest

from colormatch.analysis.counts import (
    boundary_ratio, boundary_terms, failure_counts, n_boundary, n_fail_correlated,
    n_fail_restricted, n_fail_unified,
)
from colormatch.analysis.enumeration import (
    enumerate_boundary_patterns, enumerate_failures, pattern_configurations, pattern_theory,
    row_patterns,
)
from colormatch.analysis.fitting import (
    FitDomainError, SampleRecord, crossing_points, fit_threshold, read_records, write_records,
)
from colormatch.analysis.lowrate import lowrate_estimate, sample_weight_errors
from colormatch.decoders import DecoderConfig
from colormatch.lattice import build_color_lattice
from colormatch.matching import CapacityError


# -- closed forms -----------------------------------------------------------

def test_restricted_counts():
    assert [n_fail_restricted(m) for m in (2, 3, 4)] == [24, 240, 2240]


def test_unified_counts():
    assert [n_fail_unified(m) for m in (2, 3, 4)] == [20, 168, 1328]


def test_boundary_counts():
    assert n_boundary(2) == n_boundary(3) == 0
    assert n_boundary(4) == 12
    assert n_boundary(6) == 2080
    assert boundary_terms(6) == {(1, 0): 1920, (1, 1): 160}


def test_correlated_and_ratio():
    assert n_fail_correlated(3) == 168
    assert n_fail_correlated(4) == 1340
    assert boundary_ratio(4) == Fraction(12, 1328)
    r = [boundary_ratio(m) for m in range(4, 51)]
    assert all(x < Fraction(1, 4) for x in r)
    assert all(b >= a for a, b in zip(r, r[1:]))


def test_counts_are_exact_integers_for_large_m():
    for m in range(1, 60):
        t = failure_counts(m)
        assert isinstance(t.restricted, int) and isinstance(t.boundary, int)
        assert t.correlated == t.unified + t.boundary


def test_bad_m():
    with pytest.raises(ValueError):
        n_fail_restricted(0)
    with pytest.raises(ValueError):
        n_fail_unified(2.5)


# -- enumeration -------------------------------------------------------------

def test_weight_one_never_fails_at_d4():
    for cfg in (DecoderConfig.restricted(), DecoderConfig()):
        assert enumerate_failures(4, cfg, weight=1, repeats=4).expected == 0


def test_restricted_enumeration_d4():
    res = enumerate_failures(4, DecoderConfig.restricted(), repeats=32)
    assert abs(res.expected - 24) <= 3 * res.stderr + 1e-9
    # every failing configuration sits in a single row of red squares
    lat = build_color_lattice(4)
    assert all(len(rows) == 1 for rows in res.by_row(lat))


def test_screening_keeps_certain_failures():
    full = enumerate_failures(4, DecoderConfig.restricted(), repeats=16)
    screened = enumerate_failures(4, DecoderConfig.restricted(), repeats=16, screen=6)
    assert screened.expected <= full.expected + 1e-9
    with pytest.raises(ValueError):
        enumerate_failures(4, DecoderConfig(), repeats=4, screen=5)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        enumerate_failures(16, DecoderConfig(), repeats=1)


def test_pattern_alphabet():
    assert row_patterns(3) == ["DSN"]
    assert sorted(row_patterns(4)) == sorted(["DDNN", "DENN", "DSSN"])
    lat = build_color_lattice(8)
    row = sorted((b for b in lat.blocks if b.site[0] == 0), key=lambda b: b.site[1])
    # {D,S,S,N}: C(4,1) C(3,1) x 2 x 4^2 placements
    configs = list(pattern_configurations(row, "DSSN"))
    assert len(configs) == len(set(configs)) == comb(4, 1) * comb(3, 1) * 2 * 16
    assert all(len(c) == 4 for c in configs)


def test_pattern_theory():
    assert pattern_theory("DDNN", 4) == 6
    assert pattern_theory("DDSNN", 5) == 96
    assert pattern_theory("DDENNN", 6) == 80
    assert pattern_theory("DDSSNN", 6) == 960
    assert pattern_theory("DSN", 3) == 0


def test_boundary_weight_removes_single_diagonal_failures():
    tab1 = enumerate_boundary_patterns(6, 1.0, repeats=8, row=4)
    tab2 = enumerate_boundary_patterns(6, 0.999, repeats=8, row=4)
    assert tab1["DSN"].expected > 0
    assert tab2["DSN"].expected == 0 and tab2["DSN"].deterministic == 0
    with pytest.raises(ValueError):
        enumerate_boundary_patterns(6, 1.0, row=1)


# -- fitting -----------------------------------------------------------------

def _synthetic(p_th=0.10, nu=1.5, shots=200_000, seed=0):
    rng = np.random.default_rng(seed)
    recs = []
    for d in (8, 12, 16):
        for p in np.linspace(0.085, 0.115, 7):
            x = (p - p_th) * d ** (1 / nu)
            rate = 0.12 + 0.9 * x + 2.0 * x * x
            k = int(rng.binomial(shots, rate))
            recs.append(SampleRecord("color", "correlated", d, float(p), 1, shots, 0, k, k, seed))
    return recs


def test_fit_recovers_synthetic_threshold():
    res = fit_threshold(_synthetic(), bootstrap=40)
    lo, hi = res.ci["p_th"]
    assert lo <= 0.10 <= hi
    assert abs(res.p_th - 0.10) < 0.002
    assert abs(res.nu - 1.5) < 0.3
    assert res.window[0] <= res.p_th <= res.window[1]


def test_fit_rejects_bad_domains():
    recs = _synthetic()
    with pytest.raises(FitDomainError):
        fit_threshold([r for r in recs if r.d == 8], bootstrap=0)
    below = [r for r in recs if r.p < 0.095]
    with pytest.raises(FitDomainError):
        fit_threshold(below + [r for r in recs if 0.095 <= r.p < 0.099], bootstrap=0)


def test_crossings_near_threshold():
    xs = crossing_points(_synthetic())
    assert xs and all(abs(p - 0.10) < 0.004 for _, _, p in xs)


def test_records_roundtrip(tmp_path):
    recs = _synthetic()[:3]
    path = tmp_path / "samples.csv"
    write_records(path, recs)
    assert read_records(path) == recs
    with pytest.raises(ValueError):
        SampleRecord("color", "correlated", 8, 0.1, 1, 10, 0, 11, 11, 0)


# -- stratified estimate -----------------------------------------------------

def test_weight_sampler():
    e = sample_weight_errors(20, 3, 500, np.random.default_rng(0))
    assert np.all(e.sum(axis=1) == 3)


def test_lowrate_d4_leading_order():
    est = lowrate_estimate(4, DecoderConfig.restricted(), [1e-5, 1e-4, 1e-3], shots_per_weight=2000,
                           w_max=4, repeats=16)
    assert est.strata[0].method == "zero" and est.strata[2].method == "exact"
    assert abs(est.loglog_slope() - 2.0) < 0.05
    assert abs(est.leading_count() - 24) < 3
    assert np.all(est.truncation < 1e-6)
