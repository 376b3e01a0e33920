"""Closed-form counts of minimum-weight failure configurations.

All four evaluators return exact Python integers.  ``M = d/2`` is the
number of red squares along one row of the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb


def _check_m(m: int) -> int:
    if int(m) != m or m < 1:
        raise ValueError(f"M must be a positive integer, got {m!r}")
    return int(m)


def _half_m_times(m: int, total: int) -> int:
    val = Fraction(m, 2) * total
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral count {val} at M={m}")
    return int(val)


def n_fail_restricted(m: int) -> int:
    """Failures of the restricted decoder: all weight-M row errors, half guessed wrong."""
    m = _check_m(m)
    total = sum(comb(m, k) * comb(m - k, k) * 4 ** (m - k) for k in range(m // 2 + 1))
    return _half_m_times(m, total)


def n_fail_unified(m: int) -> int:
    """Failures of the unified decoder (no diagonal block errors)."""
    m = _check_m(m)
    total = sum(
        comb(m, k) * comb(m - k, k) * 2**k * 4 ** (m - 2 * k) for k in range(m // 2 + 1)
    )
    return _half_m_times(m, total)


def boundary_terms(m: int) -> dict[tuple[int, int], int]:
    """Per-(i, j) terms of the boundary excess, summed over both boundary rows.

    ``i`` counts adjacent diagonal pairs and ``j`` the weight-2 edge errors.
    The factor ``4^(M - 3i - 3j/2)`` is evaluated as a power of two; its
    exponent must be a nonnegative integer for every admissible term.
    """
    m = _check_m(m)
    out = {}
    for i in range(1, m // 4 + 1):
        jmax = (m - 4 * i) // 2
        for j in range(jmax + 1):
            rest = m - 4 * i - 2 * j
            if rest < 0:
                continue
            exp2 = 2 * m - 6 * i - 3 * j
            if exp2 < 0:
                raise ArithmeticError(f"non-integral power at M={m}, i={i}, j={j}")
            out[(i, j)] = comb(m - i, i) * comb(m - 2 * i, j) * comb(m - 2 * i - j, rest) * 2**exp2
    return out


def n_boundary(m: int) -> int:
    """Extra boundary failures of the correlated decoder (both rows)."""
    return sum(boundary_terms(m).values())


def n_fail_correlated(m: int) -> int:
    return n_fail_unified(m) + n_boundary(m)


def boundary_ratio(m: int) -> Fraction:
    """Relative excess of the correlated decoder over the unified one."""
    return Fraction(n_boundary(m), n_fail_unified(m))


@dataclass(frozen=True)
class FailureCountTable:
    m: int
    restricted: int
    unified: int
    boundary: int
    correlated: int
    ratio: Fraction

    @property
    def d(self) -> int:
        return 2 * self.m

    def __post_init__(self):
        if self.correlated != self.unified + self.boundary:
            raise ArithmeticError("correlated count must equal unified + boundary")
        if min(self.restricted, self.unified, self.boundary) < 0:
            raise ArithmeticError("negative count")

    def as_row(self) -> dict:
        return {
            "d": self.d,
            "M": self.m,
            "restricted": self.restricted,
            "unified": self.unified,
            "boundary": self.boundary,
            "correlated": self.correlated,
            "ratio": float(self.ratio),
        }


def failure_counts(m: int) -> FailureCountTable:
    return FailureCountTable(
        m=m,
        restricted=n_fail_restricted(m),
        unified=n_fail_unified(m),
        boundary=n_boundary(m),
        correlated=n_fail_correlated(m),
        ratio=boundary_ratio(m),
    )
