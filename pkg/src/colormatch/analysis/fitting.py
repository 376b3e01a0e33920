"""Threshold estimation by finite-size scaling.

Near the threshold the failure rate of every distance collapses onto one
curve in the rescaled rate x = (p - p_th) d^(1/nu).  A quadratic
A x^2 + B x + C is fitted to all points at once.  For fixed (p_th, nu) the
coefficients are a weighted linear least-squares problem, so the search
runs over a coarse (p_th, nu) grid and is then refined jointly with
``scipy.optimize.least_squares``.  Confidence intervals come from a
parametric bootstrap that redraws each failure count from its binomial.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import least_squares


class FitDomainError(ValueError):
    """Records do not support a threshold fit."""


@dataclass(frozen=True)
class SampleRecord:
    family: str
    decoder: str
    d: int
    p: float
    rounds: int
    shots: int
    fail_g: int
    fail_b: int
    fail_any: int
    seed: int

    def __post_init__(self):
        if self.shots < 0:
            raise ValueError("shots must be nonnegative")
        for name in ("fail_g", "fail_b", "fail_any"):
            v = getattr(self, name)
            if not (0 <= v <= self.shots):
                raise ValueError(f"{name}={v} outside [0, shots={self.shots}]")

    def rate(self, which: str = "fail_any") -> float:
        return getattr(self, which) / self.shots if self.shots else float("nan")


RECORD_FIELDS = [f for f in SampleRecord.__dataclass_fields__]


def write_records(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=RECORD_FIELDS)
        w.writeheader()
        for r in records:
            w.writerow(asdict(r))


def read_records(path) -> list[SampleRecord]:
    types = {"d": int, "p": float, "rounds": int, "shots": int, "fail_g": int,
             "fail_b": int, "fail_any": int, "seed": int}
    with open(path, newline="") as fh:
        return [SampleRecord(**{k: types.get(k, str)(v) for k, v in row.items() if k in RECORD_FIELDS})
                for row in csv.DictReader(fh)]


@dataclass
class FitResult:
    p_th: float
    nu: float
    A: float
    B: float
    C: float
    ci: dict = field(default_factory=dict)  # name -> (lo, hi)
    residual_norm: float = 0.0
    window: tuple = (0.0, 0.0)
    distances: tuple = ()
    which: str = "fail_any"

    def to_json(self) -> dict:
        out = asdict(self)
        out["ci"] = {k: list(v) for k, v in self.ci.items()}
        out["window"] = list(self.window)
        out["distances"] = list(self.distances)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _arrays(records, which):
    d = np.array([r.d for r in records], dtype=float)
    p = np.array([r.p for r in records], dtype=float)
    n = np.array([r.shots for r in records], dtype=float)
    k = np.array([getattr(r, which) for r in records], dtype=float)
    return d, p, n, k


def _sigma(y, n):
    # floor the variance so points with zero failures keep finite weight
    return np.sqrt(np.maximum(y * (1 - y), 1.0 / n) / n)


def _linear(p_th, nu, d, p, y, s):
    x = (p - p_th) * d ** (1.0 / nu)
    X = np.stack([x * x, x, np.ones_like(x)], axis=1) / s[:, None]
    coef, *_ = np.linalg.lstsq(X, y / s, rcond=None)
    r = X @ coef - y / s
    return coef, float(r @ r)


def _fit_once(d, p, y, s, grid_pth, grid_nu, start=None):
    if start is None:
        best = None
        for pt in grid_pth:
            for nu in grid_nu:
                coef, rss = _linear(pt, nu, d, p, y, s)
                if best is None or rss < best[0]:
                    best = (rss, pt, nu, coef)
        _, pt0, nu0, coef0 = best
        start = np.array([pt0, nu0, *coef0])

    def resid(theta):
        pt, nu, a, b, c = theta
        x = (p - pt) * d ** (1.0 / nu)
        return (a * x * x + b * x + c - y) / s

    lo = [p.min(), 0.2, -np.inf, -np.inf, -np.inf]
    hi = [p.max(), 10.0, np.inf, np.inf, np.inf]
    start = np.clip(start, [v + 1e-12 if np.isfinite(v) else -1e300 for v in lo],
                    [v - 1e-12 if np.isfinite(v) else 1e300 for v in hi])
    sol = least_squares(resid, start, bounds=(lo, hi), x_scale="jac")
    return sol.x, float(np.sqrt(np.sum(sol.fun**2)))


def check_bracketing(records, which: str = "fail_any") -> None:
    """Require >= 3 distances, >= 5 p values and a sign change in the
    ordering of the largest and smallest distance across the window."""
    ds = sorted({r.d for r in records})
    ps = sorted({r.p for r in records})
    if len(ds) < 3:
        raise FitDomainError(f"need at least 3 distances, got {ds}")
    if len(ps) < 5:
        raise FitDomainError(f"need at least 5 p values, got {len(ps)}")
    rate = {(r.d, r.p): r.rate(which) for r in records}
    lo_p, hi_p = ps[0], ps[-1]
    try:
        below = rate[(ds[-1], lo_p)] < rate[(ds[0], lo_p)]
        above = rate[(ds[-1], hi_p)] > rate[(ds[0], hi_p)]
    except KeyError as exc:
        raise FitDomainError(f"missing grid point {exc}") from None
    if not (below and above):
        raise FitDomainError("curves do not cross inside the p window")


def fit_threshold(records, which: str = "fail_any", bootstrap: int = 200,
                  seed: int = 0, level: float = 0.95) -> FitResult:
    """Fit the threshold and scaling exponent from sample records."""
    records = list(records)
    check_bracketing(records, which)
    d, p, n, k = _arrays(records, which)
    y = k / n
    s = _sigma(y, n)
    grid_pth = np.linspace(p.min(), p.max(), 61)
    grid_nu = np.linspace(0.5, 3.0, 26)
    theta, rnorm = _fit_once(d, p, y, s, grid_pth, grid_nu)

    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(bootstrap):
        yb = rng.binomial(n.astype(np.int64), np.clip(y, 0, 1)) / n
        tb, _ = _fit_once(d, p, yb, _sigma(yb, n), grid_pth, grid_nu, start=theta)
        draws.append(tb)
    ci = {}
    names = ("p_th", "nu", "A", "B", "C")
    if draws:
        arr = np.array(draws)
        a = (1 - level) / 2
        for j, name in enumerate(names):
            lo, hi = np.quantile(arr[:, j], [a, 1 - a])
            ci[name] = (float(min(lo, theta[j])), float(max(hi, theta[j])))
    if not (p.min() <= theta[0] <= p.max()):
        raise FitDomainError("fitted threshold falls outside the p window")
    return FitResult(
        p_th=float(theta[0]), nu=float(theta[1]), A=float(theta[2]), B=float(theta[3]),
        C=float(theta[4]), ci=ci, residual_norm=rnorm,
        window=(float(p.min()), float(p.max())), distances=tuple(sorted({int(v) for v in d})),
        which=which,
    )


def crossing_points(records, which: str = "fail_any") -> list[tuple[int, int, float]]:
    """Pairwise crossings of linearly interpolated curves (d1, d2, p)."""
    by_d: dict[int, list] = {}
    for r in records:
        by_d.setdefault(r.d, []).append((r.p, r.rate(which)))
    out = []
    ds = sorted(by_d)
    for i, d1 in enumerate(ds):
        for d2 in ds[i + 1:]:
            a = dict(by_d[d1])
            b = dict(by_d[d2])
            ps = sorted(set(a) & set(b))
            diff = [b[q] - a[q] for q in ps]
            for j in range(len(ps) - 1):
                if diff[j] < 0 <= diff[j + 1] or diff[j] <= 0 < diff[j + 1]:
                    t = -diff[j] / (diff[j + 1] - diff[j]) if diff[j + 1] != diff[j] else 0.0
                    out.append((d1, d2, ps[j] + t * (ps[j + 1] - ps[j])))
                    break
    return out
