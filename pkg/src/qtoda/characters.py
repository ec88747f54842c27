"""Torus characters of tangent spaces and localization weights.

Everything here is exact Laurent arithmetic in the torus ring
Z[t_1^{±1},..,t_n^{±1},v^{±1/2}].  Conventions, fixed once:

- The j-th coordinate line of the framing carries weight t_j^2.
- Twisting by -a multiplies the fiber weight by v^{-2a}, so the summand
  with twist a in a flag stage contributes fiber weight t_j^2 v^{-2a}; the
  degree-l section of a length-d torsion quotient of the j-th line has
  weight t_j^2 v^{-2l}.

Tangent characters at a fixed point come in two independent forms: a
first-principles "chain" computation from sheaf-Hom characters of the flag
(the oracle), and a closed multiplicity formula used by the fast paths.
Their agreement is a test target, not an assumption.
"""

from __future__ import annotations

from typing import List, Literal, Sequence, Tuple

from .fixed_points import FixedPoint
from .symbolic import (
    DegeneracyError,
    LaurentPoly,
    RatFunc,
    TVRing,
    UsageError,
    geometric_block,
)

Orientation = Literal["A", "B"]
Stage = Tuple[int, ...]


def line_weight(ring: TVRing, j: int, twist: int) -> LaurentPoly:
    """Fiber weight t_j^2 v^{-2*twist} of the twisted j-th coordinate line."""
    return ring.t_monomial({j: 2}, v_power=-2 * twist)


def weight_ratio(ring: TVRing, k: int, j: int, v_power: int = 0) -> LaurentPoly:
    """The monomial t_k^2 t_j^{-2} v^{v_power}."""
    exps = {k: 2} if k == j else {k: 2, j: -2}
    if k == j:
        exps = {k: 0}
    return ring.t_monomial(exps, v_power=v_power)


def _hom_into_quotient(ring: TVRing, sub: Stage, quot: Stage) -> LaurentPoly:
    """Character of Hom(U, W/U') for stages of twisted coordinate lines.

    U has summands (twist sub[j-1], line j); W/U' is torsion of length
    quot[k-1] on lines k <= len(quot) and the full line for k > len(quot).
    Hom from a twist-a line into the length-b torsion piece of line k
    contributes t_k^2 t_j^{-2} (v^{2(a-b+1)} + .. + v^{2a}); into the full
    line k it contributes t_k^2 t_j^{-2} (1 + v^2 + .. + v^{2a}).
    """
    total = ring.zero()
    for j, a in enumerate(sub, start=1):
        for k in range(1, ring.n + 1):
            m = weight_ratio(ring, k, j)
            if k <= len(quot):
                total = total + geometric_block(a - quot[k - 1] + 1, a, m)
            else:
                total = total + geometric_block(0, a, m)
    return total


def based_correction(ring: TVRing) -> LaurentPoly:
    """Character of the strictly-upper-triangular framing directions, which a
    based (framed) moduli problem removes."""
    total = ring.zero()
    for j in range(1, ring.n + 1):
        for k in range(j + 1, ring.n + 1):
            total = total + weight_ratio(ring, k, j)
    return total


def chain_tangent_char(ring: TVRing, stages: Sequence[Stage]) -> LaurentPoly:
    """Tangent character of a based chain of twisted-line stages inside the
    trivial rank-n sheaf, from sheaf-Hom characters.

    The chain is U_1 <= U_2 <= .. <= U_L < W; the character is
    sum_l [Hom(U_l, W/U_l) - Hom(U_l, W/U_{l+1})] minus the framing
    correction.  This is the first-principles oracle.
    """
    total = ring.zero()
    for l, stage in enumerate(stages):
        total = total + _hom_into_quotient(ring, stage, stage)
        if l + 1 < len(stages):
            total = total - _hom_into_quotient(ring, stage, stages[l + 1])
    return total - based_correction(ring)


def tangent_char_oracle(ring: TVRing, p: FixedPoint) -> LaurentPoly:
    """Tangent character at a fixed point, via the chain oracle."""
    _check_ring(ring, p)
    return chain_tangent_char(ring, p.rows)


def tangent_char(ring: TVRing, p: FixedPoint) -> LaurentPoly:
    """Tangent character at a fixed point, closed multiplicity formula.

    For each ordered pair of lines (j, k) the multiplicity of the weight
    t_k^2 t_j^{-2} v^{2l} is read off the triangular array directly; no
    sheaf cohomology is recomputed.  Must agree with tangent_char_oracle.
    """
    _check_ring(ring, p)
    n = ring.n
    total = ring.zero()
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            m = weight_ratio(ring, k, j)
            if j < k:
                a = p.entry(k - 1, j)
                total = total + geometric_block(0, a, m)
                total = total - geometric_block(a - p.entry(k, k) + 1, a, m)
            for i in range(max(j, k), n):
                lo = p.entry(i, j) - p.entry(i, k) + 1
                hi = p.entry(i, j) - p.entry(i + 1, k)
                total = total + geometric_block(lo, hi, m)
    return total - based_correction(ring)


def _modification_stages(p: FixedPoint, i: int, j: int) -> List[Stage]:
    """Stage list for the chain with an extra colength-one stage at row i.

    The extra stage raises the (i, j) twist by one, so it sits between the
    original rows i-1 and i.
    """
    if not (1 <= i <= p.n - 1 and 1 <= j <= i):
        raise UsageError("modification position out of range")
    if j != i and p.entry(i - 1, j) <= p.entry(i, j):
        raise UsageError("modification breaks column monotonicity")
    raised = tuple(
        a + (1 if c == j else 0) for c, a in enumerate(p.rows[i - 1], start=1)
    )
    stages = list(p.rows)
    stages.insert(i - 1, raised)
    return stages


def corr_tangent_char_oracle(ring: TVRing, p: FixedPoint, i: int,
                             j: int) -> LaurentPoly:
    """Tangent character of the colength-one modification correspondence at
    the fixed pair (p, p raised at (i, j)), via the chain oracle."""
    _check_ring(ring, p)
    return chain_tangent_char(ring, _modification_stages(p, i, j))


def corr_tangent_char(ring: TVRing, p: FixedPoint, i: int, j: int) -> LaurentPoly:
    """Closed form of the correspondence tangent character.

    Equals the tangent character of the lower point plus the directions of
    moving the modification, minus the directions lost to the containment
    constraint from row i-1.  Must agree with corr_tangent_char_oracle.
    """
    _check_ring(ring, p)
    if not (1 <= i <= p.n - 1 and 1 <= j <= i):
        raise UsageError("modification position out of range")
    a = p.entry(i, j)
    total = tangent_char(ring, p)
    for k in range(1, i + 1):
        dk = p.entry(i, k) + (1 if k == j else 0)
        total = total + _ratio_jk(ring, j, k, 2 * dk - 2 * a)
    for k in range(1, i):
        total = total - _ratio_jk(ring, j, k, 2 * p.entry(i - 1, k) - 2 * a)
    return total


def _ratio_jk(ring: TVRing, j: int, k: int, v_power: int) -> LaurentPoly:
    """The monomial t_j^2 t_k^{-2} v^{v_power}."""
    exps = {j: 2, k: -2} if j != k else {}
    return ring.t_monomial(exps, v_power=v_power)


def modification_weight(ring: TVRing, p: FixedPoint, i: int, j: int) -> LaurentPoly:
    """Weight of the tautological quotient line at the fixed pair: the length-
    one torsion W_i / W'_i sits at twist a_{ij} of line j."""
    _check_ring(ring, p)
    return line_weight(ring, j, p.entry(i, j))


def char_dimension(chi: LaurentPoly) -> int:
    """Number of tangent weights counted with multiplicity."""
    return chi.eval_at_ones()


def sym_inverse(chi: LaurentPoly, orientation: Orientation = "A") -> RatFunc:
    """Inverse of the orientation product over the character's weights.

    Orientation "A": prod_w (1 - w)^{-mult}; orientation "B" uses the dual
    weights, prod_w (1 - w^{-1})^{-mult}.  Raises DegeneracyError if the
    trivial weight occurs or a multiplicity is negative.
    """
    ring = chi.ring
    if not isinstance(ring, TVRing):
        raise UsageError("character must live in a torus ring")
    factor_list = []
    for exps, mult in chi.sorted_terms():
        if mult < 0:
            raise DegeneracyError("negative weight multiplicity in character")
        if all(e == 0 for e in exps):
            raise DegeneracyError("trivial weight in character: point not isolated")
        if orientation == "B":
            exps = tuple(-e for e in exps)
        w = ring.monomial(exps)
        factor_list.append((ring.one() - w, -mult))
    return RatFunc.from_factors(ring, ring.one(), factor_list)


def structure_sheaf_coeffs(ring: TVRing, points: Sequence[FixedPoint],
                           orientation: Orientation = "A") -> List[RatFunc]:
    """Localized coefficients of the structure-sheaf class in the fixed-point
    basis: one orientation-product inverse per point."""
    return [sym_inverse(tangent_char(ring, p), orientation) for p in points]


def det_weight(ring: TVRing, p: FixedPoint) -> LaurentPoly:
    """Normalized determinant-of-cohomology weight of the tautological flag.

    Product over all entries a = a_{ij} of t_j^{-2a} v^{a(a-1)}; the
    normalization makes the zero-degree point carry weight 1.  Raising
    entry (i, j) by one multiplies the weight by t_j^{-2} v^{2a}.
    """
    _check_ring(ring, p)
    total = ring.one()
    for i in range(1, p.n):
        for j in range(1, i + 1):
            a = p.entry(i, j)
            total = total * ring.t_monomial({j: -2 * a}, v_power=a * (a - 1))
    return total


def _check_ring(ring: TVRing, p: FixedPoint) -> None:
    if ring.n != p.n:
        raise UsageError("ring rank and fixed-point rank differ")
