"""Difference-Toda operators acting on degree-indexed generating series.

A series here is a box-truncated family of exact rational coefficients
indexed by degree vectors.  The two difference operators act through shift
monomials: shifting slot j of the degree lattice multiplies the coefficient
by t_j^sigma v^{d_j - d_{j-1}} (sigma = -1 in our conventions; the
calibration is a test target).  Both distinguished series -- the Whittaker
pairing series and the coefficient-sum series -- are eigenfunctions with
eigenvalue sum_i t_i^{2 sigma}.

Coefficient recursions, with d_0 = d_n = 0 and absent (negative) degrees
contributing zero:

- sum-type operator:   (S s)_d = sum_j shift_j(d)^2 s_d
                        + v^{-2} sum_i shift_i(d-e_i) shift_{i+1}(d-e_i) s_{d-e_i}
- difference-type op:  (G s)_d = sum_j shift_j(d)^2 s_d
                        - sum_{j>=2} shift_j(d)^2 s_{d-e_{j-1}}
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

from .fixed_points import DegreeVector, all_degrees
from .operators import ModuleContext, _padded
from .symbolic import (
    LaurentPoly,
    RatFunc,
    RatSum,
    TVRing,
    UsageError,
    eq_exact,
)
from .whittaker import rgamma_char, whittaker_k, whittaker_pair_localized

DEFAULT_SIGMA = -1


@dataclass
class TodaSeries:
    """A box truncation of a degree-indexed series with rational coefficients."""

    n: int
    box: int
    coeffs: Dict[DegreeVector, RatFunc]

    def __post_init__(self) -> None:
        for d in self.coeffs:
            if len(d) != self.n - 1 or any(not 0 <= x <= self.box for x in d):
                raise UsageError(f"degree {d} outside the series box")

    def coeff(self, ring: TVRing, degree: DegreeVector) -> RatFunc:
        if any(x < 0 for x in degree):
            return RatFunc.zero(ring)
        got = self.coeffs.get(tuple(degree))
        if got is None:
            raise UsageError(f"degree {degree} missing from the series box")
        return got


def shift_monomial(ring: TVRing, j: int, degree: DegreeVector,
                   sigma: int = DEFAULT_SIGMA) -> LaurentPoly:
    """Multiplier picked up by the j-th lattice shift at degree d:
    t_j^sigma v^{d_j - d_{j-1}}  (j runs 1..n, d_0 = d_n = 0)."""
    if not 1 <= j <= ring.n:
        raise UsageError(f"shift index {j} out of range 1..{ring.n}")
    d = _padded(tuple(degree))
    return ring.t_monomial({j: sigma}, v_power=d[j] - d[j - 1])


def _minus_unit(degree: DegreeVector, i: int) -> DegreeVector:
    return tuple(x - (1 if k == i else 0) for k, x in enumerate(degree, 1))


def apply_sum_op(ring: TVRing, s: TodaSeries,
                 sigma: int = DEFAULT_SIGMA) -> TodaSeries:
    """The sum-type difference operator (all squared shifts plus the
    v^{-2}-weighted nearest-neighbor products)."""
    n = s.n
    out: Dict[DegreeVector, RatFunc] = {}
    for d in s.coeffs:
        total = RatSum(ring)
        diag = ring.zero()
        for j in range(1, n + 1):
            diag = diag + shift_monomial(ring, j, d, sigma) ** 2
        total.add(s.coeffs[d].scale_poly(diag))
        for i in range(1, n):
            src = _minus_unit(d, i)
            c = s.coeff(ring, src)
            if not c.is_zero():
                m = ring.v(-2) * shift_monomial(ring, i, src, sigma) \
                    * shift_monomial(ring, i + 1, src, sigma)
                total.add(c.scale_poly(m))
        out[d] = total.to_ratfunc()
    return TodaSeries(n, s.box, out)


def apply_difference_op(ring: TVRing, s: TodaSeries,
                        sigma: int = DEFAULT_SIGMA) -> TodaSeries:
    """The difference-type operator (squared shifts minus the lattice-lowered
    squared shifts)."""
    n = s.n
    out: Dict[DegreeVector, RatFunc] = {}
    for d in s.coeffs:
        total = RatSum(ring)
        diag = ring.zero()
        for j in range(1, n + 1):
            diag = diag + shift_monomial(ring, j, d, sigma) ** 2
        total.add(s.coeffs[d].scale_poly(diag))
        for j in range(2, n + 1):
            src = _minus_unit(d, j - 1)
            c = s.coeff(ring, src)
            if not c.is_zero():
                total.add(c.scale_poly(-(shift_monomial(ring, j, d, sigma) ** 2)))
        out[d] = total.to_ratfunc()
    return TodaSeries(n, s.box, out)


def eigenvalue_monomial_sum(ring: TVRing,
                            sigma: int = DEFAULT_SIGMA) -> LaurentPoly:
    """The common eigenvalue sum_{i=1}^n t_i^{2 sigma}."""
    total = ring.zero()
    for i in range(1, ring.n + 1):
        total = total + ring.t_monomial({i: 2 * sigma})
    return total


def whittaker_pair_series(ctx: ModuleContext, box: int) -> TodaSeries:
    """Coefficients: the pairing of the two Whittaker vectors per degree."""
    return TodaSeries(ctx.n, box, {
        d: whittaker_pair_localized(ctx, d)
        for d in all_degrees(ctx.n, box)
    })


def coefficient_sum_series(ctx: ModuleContext, box: int) -> TodaSeries:
    """Coefficients: the sum of localized structure-sheaf coefficients
    (the global-sections character) per degree."""
    return TodaSeries(ctx.n, box, {
        d: rgamma_char(ctx, whittaker_k(ctx, d))
        for d in all_degrees(ctx.n, box)
    })


def check_eigen(ring: TVRing, s: TodaSeries, applied: TodaSeries,
                sigma: int = DEFAULT_SIGMA) -> List[dict]:
    """Per-degree records comparing an applied operator against eigenvalue
    times the original series."""
    lam = eigenvalue_monomial_sum(ring, sigma)
    records = []
    for d in sorted(s.coeffs):
        ok = eq_exact(applied.coeffs[d], s.coeffs[d].scale_poly(lam))
        records.append({"degree": list(d),
                        "status": "pass" if ok else "fail"})
    return records


def verify_toda(ctx: ModuleContext, box: int,
                sigma: int = DEFAULT_SIGMA) -> List[dict]:
    """Both eigen-equations over the box: the sum-type operator on the
    Whittaker pairing series and the difference-type operator on the
    coefficient-sum series."""
    ring = ctx.ring
    records = []
    pair_series = whittaker_pair_series(ctx, box)
    for r in check_eigen(ring, pair_series,
                         apply_sum_op(ring, pair_series, sigma), sigma):
        records.append({"check": "sum-op-eigen", **r})
    sheaf_series = coefficient_sum_series(ctx, box)
    for r in check_eigen(ring, sheaf_series,
                         apply_difference_op(ring, sheaf_series, sigma), sigma):
        records.append({"check": "difference-op-eigen", **r})
    return records


def calibrate_sign(ctx: ModuleContext, box: int) -> Dict[int, bool]:
    """Which shift-monomial sign makes the eigen-equations hold.  Returns
    {sigma: all-pass}; the working convention is sigma = -1, and the
    opposite sign must fail (non-vacuity of the calibration)."""
    out = {}
    for sigma in (-1, 1):
        records = verify_toda(ctx, box, sigma)
        out[sigma] = all(r["status"] == "pass" for r in records)
    return out
