"""Bilinear pairing on the graded module and the two Whittaker vectors.

The pairing is characterized by two properties: the degree-zero basis
vector pairs to 1 with itself, and the raising operator for each row is
adjoint to the lowering operator.  Geometrically it is a global-sections
pairing twisted by the determinant line, which localizes to a closed
per-point weight: a degree-dependent monomial times det-weight over the
orientation factor.

The two distinguished vectors are:

- the structure-sheaf vector, an eigenvector of every twisted lowering
  generator with eigenvalue 1/(1 - v^2);
- the inverse-determinant vector, an eigenvector of every pairing-adjoint
  twisted raising generator with the same eigenvalue.

Their pairing degree by degree has a closed product form; its agreement
with the direct localized computation is a test target.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .characters import det_weight
from .fixed_points import DegreeVector, FixedPoint
from .operators import (
    ModuleContext,
    ModuleVector,
    Truncation,
    apply_op,
    compose,
    op_K,
    op_f,
    _one_minus,
    _padded,
)
from .symbolic import (
    LaurentPoly,
    RatFunc,
    RatSum,
    TVRing,
    UsageError,
    eq_exact,
    generic_ring,
)


# ---------------------------------------------------------------------------
# The pairing
# ---------------------------------------------------------------------------

def pairing_prefactor(ring: TVRing, degree: DegreeVector) -> LaurentPoly:
    """Degree-dependent monomial m_d in the localized pairing weight:
    (-1)^{sum d} v^{sum 2i d_i^2 - sum_{i>=2} (2i-1) d_i d_{i-1}}
    prod_i t_i^{(2i-1)(d_{i-1} - d_i)}  (with d_0 = d_n = 0)."""
    d = _padded(tuple(degree))
    m = len(degree)
    v_power = sum(2 * i * d[i] ** 2 for i in range(1, m + 1)) \
        - sum((2 * i - 1) * d[i] * d[i - 1] for i in range(2, m + 1))
    t_exps = {i: (2 * i - 1) * (d[i - 1] - d[i]) for i in range(1, m + 2)}
    sign = -1 if sum(degree) % 2 else 1
    return ring.t_monomial(t_exps, v_power=v_power, coeff=sign)


def pairing_weight(ctx: ModuleContext, p: FixedPoint) -> RatFunc:
    """Per-point weight theta_p = m_d * det_weight(p) / sym_factor(p)."""
    pref = pairing_prefactor(ctx.ring, p.degree) * det_weight(ctx.ring, p)
    return RatFunc.from_poly(pref) / ctx.sym_factor(p)


def shapovalov_pair(ctx: ModuleContext, x: ModuleVector,
                    y: ModuleVector) -> RatFunc:
    """The pairing of two graded vectors; distinct degrees are orthogonal."""
    if tuple(x.degree) != tuple(y.degree):
        return RatFunc.zero(ctx.ring)
    total = RatSum(ctx.ring)
    for p, xc in x.coeffs.items():
        yc = y.coeffs.get(p)
        if yc is not None:
            total.add(xc * yc * pairing_weight(ctx, p))
    return total.to_ratfunc()


def rgamma_char(ctx: ModuleContext, x: ModuleVector) -> RatFunc:
    """Global-sections character of a localized class: the plain coefficient
    sum (each fixed-point class contributes 1)."""
    return RatSum(ctx.ring, list(x.coeffs.values())).to_ratfunc()


# ---------------------------------------------------------------------------
# Whittaker vectors
# ---------------------------------------------------------------------------

def whittaker_k(ctx: ModuleContext, degree: Sequence[int]) -> ModuleVector:
    """Degree-d component of the structure-sheaf Whittaker vector: the
    localized structure-sheaf class, coefficient sym_factor(p) at p."""
    degree = tuple(degree)
    return ModuleVector(degree, {p: ctx.sym_factor(p)
                                 for p in ctx.points(degree)})


def dual_whittaker_prefactor(ring: TVRing, degree: DegreeVector) -> LaurentPoly:
    """Scalar in front of the inverse-determinant class:
    v^{sum (1-2i) d_i^2 - sum_{i>=2} (2-2i) d_i d_{i-1} - sum d_i}
    prod_i t_i^{(2-2i)(d_{i-1} - d_i)}."""
    d = _padded(tuple(degree))
    m = len(degree)
    v_power = sum((1 - 2 * i) * d[i] ** 2 for i in range(1, m + 1)) \
        - sum((2 - 2 * i) * d[i] * d[i - 1] for i in range(2, m + 1)) \
        - sum(degree)
    t_exps = {i: (2 - 2 * i) * (d[i - 1] - d[i]) for i in range(1, m + 2)}
    return ring.t_monomial(t_exps, v_power=v_power)


def whittaker_w(ctx: ModuleContext, degree: Sequence[int]) -> ModuleVector:
    """Degree-d component of the dual Whittaker vector: the localized class
    of the inverse determinant line, scaled by its degree prefactor."""
    degree = tuple(degree)
    pref = dual_whittaker_prefactor(ctx.ring, degree)
    coeffs = {}
    for p in ctx.points(degree):
        exps, coeff = det_weight(ctx.ring, p).monomial_parts()
        inv_det = ctx.ring.monomial(tuple(-e for e in exps), coeff)
        coeffs[p] = ctx.sym_factor(p).scale_poly(pref * inv_det)
    return ModuleVector(degree, coeffs)


def dual_raising_op(ctx: ModuleContext, i: int):
    """The pairing-adjoint of the twisted raising generator: K_i^{2i} f_i."""
    return compose(op_K(ctx, i, 2 * i), op_f(ctx, i), label=f"e{i}*")


def _vectors_equal(a: ModuleVector, b: ModuleVector) -> bool:
    if tuple(a.degree) != tuple(b.degree):
        return False
    for p in set(a.coeffs) | set(b.coeffs):
        ca, cb = a.coeffs.get(p), b.coeffs.get(p)
        if ca is None or cb is None:
            present = ca if cb is None else cb
            if not present.is_zero():
                return False
            continue
        if not eq_exact(ca, cb):
            return False
    return True


def _eigen_scale(ctx: ModuleContext) -> RatFunc:
    """The common Whittaker eigenvalue 1 / (1 - v^2)."""
    return RatFunc.from_frac(ctx.ring.one(),
                             ctx.ring.one() - ctx.ring.v(2))


def lowering_eigen_check(ctx: ModuleContext, i: int,
                         degree: Sequence[int]) -> bool:
    """f_i applied to the structure-sheaf vector at degree d + e_i equals
    1/(1-v^2) times its degree-d component."""
    src = tuple(d + (1 if k == i else 0)
                for k, d in enumerate(tuple(degree), start=1))
    tr = Truncation(ctx.n, max(src) + 1)
    got = apply_op(op_f(ctx, i), whittaker_k(ctx, src), tr)
    want = whittaker_k(ctx, tuple(degree))
    scale = _eigen_scale(ctx)
    want = ModuleVector(want.degree,
                        {p: c * scale for p, c in want.coeffs.items()})
    return _vectors_equal(got, want)


def dual_eigen_check(ctx: ModuleContext, i: int,
                     degree: Sequence[int]) -> bool:
    """K_i^{2i} f_i applied to the dual vector at degree d + e_i equals
    1/(1-v^2) times its degree-d component."""
    src = tuple(d + (1 if k == i else 0)
                for k, d in enumerate(tuple(degree), start=1))
    tr = Truncation(ctx.n, max(src) + 1)
    got = apply_op(dual_raising_op(ctx, i), whittaker_w(ctx, src), tr)
    want = whittaker_w(ctx, tuple(degree))
    scale = _eigen_scale(ctx)
    want = ModuleVector(want.degree,
                        {p: c * scale for p, c in want.coeffs.items()})
    return _vectors_equal(got, want)


# ---------------------------------------------------------------------------
# The pushforward summation identity behind the dual eigen-property
# ---------------------------------------------------------------------------

def line_pushforward_sides(n: int, i: int, upper: Sequence[int],
                           mid: Sequence[int]) -> Tuple[RatFunc, RatFunc]:
    """Both sides of the identity expressing the pushforward of the
    tautological quotient line through the modification correspondence as a
    scalar multiple of the structure sheaf.

    For row data a_{i-1,*} = upper (length i-1) and a_{i,*} = mid (length
    i), the left side is
      sum_j t_j^2 v^{-2 a_ij} (1-v^2)^{-1}
            prod_{k<=i, k!=j} (1 - t_j^2 t_k^{-2} v^{2a_ik - 2a_ij})^{-1}
            prod_{k<=i-1}     (1 - t_j^2 t_k^{-2} v^{2a_{i-1,k} - 2a_ij})
    and the right side is t_i^2 v^{2 d_{i-1} - 2 d_i} (1-v^2)^{-1}.
    """
    upper = tuple(int(a) for a in upper)
    mid = tuple(int(a) for a in mid)
    if len(upper) != i - 1 or len(mid) != i:
        raise UsageError(f"row lengths must be {i - 1} and {i}")
    if not 1 <= i <= n - 1:
        raise UsageError("row index out of range")
    ring = tv_ring_cached(n)
    one_minus_v2 = [(ring.one() - ring.v(2), -1)]
    parts: List[RatFunc] = []
    for j in range(1, i + 1):
        a = mid[j - 1]
        unit = ring.t_monomial({j: 2}, v_power=-2 * a)
        factors: List[Tuple[LaurentPoly, int]] = list(one_minus_v2)
        for k in range(1, i + 1):
            if k != j:
                factors.append(
                    (_one_minus(ring, j, k, 2 * mid[k - 1] - 2 * a), -1))
        for k in range(1, i):
            factors.append(
                (_one_minus(ring, j, k, 2 * upper[k - 1] - 2 * a), 1))
        parts.append(RatFunc.from_factors(ring, unit, factors))
    lhs = RatSum(ring, parts).to_ratfunc()
    rhs_unit = ring.t_monomial({i: 2}, v_power=2 * sum(upper) - 2 * sum(mid))
    rhs = RatFunc.from_factors(ring, rhs_unit, one_minus_v2)
    return lhs, rhs


def partial_fraction_identity(i: int) -> bool:
    """sum_{j<=i} prod_{k<=i-1} (p_k - s_j) prod_{k<=i, k!=j} (s_k - s_j)^{-1}
    equals 1, in fully independent variables."""
    if i < 1:
        raise UsageError("need i >= 1")
    names = [f"s{j}" for j in range(1, i + 1)] \
        + [f"p{k}" for k in range(1, i)]
    ring = generic_ring(names)
    s = [ring.var(j) for j in range(i)]
    p = [ring.var(i + k) for k in range(i - 1)]
    parts = []
    for j in range(i):
        factors: List[Tuple[LaurentPoly, int]] = []
        for pk in p:
            factors.append((pk - s[j], 1))
        for k in range(i):
            if k != j:
                factors.append((s[k] - s[j], -1))
        parts.append(RatFunc.from_factors(ring, ring.one(), factors))
    return eq_exact(RatSum(ring, parts).to_ratfunc(), RatFunc.one(ring))


# ---------------------------------------------------------------------------
# The pairing of the two Whittaker vectors
# ---------------------------------------------------------------------------

def whittaker_pair_closed(ctx: ModuleContext,
                          degree: Sequence[int]) -> RatFunc:
    """Closed form of the Whittaker pairing at one degree:
    (-1)^{sum d} v^{sum d_i^2 - sum d_i d_{i-1} - sum d_i}
    prod_i t_i^{d_{i-1} - d_i} times the coefficient sum of the localized
    structure-sheaf class."""
    degree = tuple(degree)
    d = _padded(degree)
    m = len(degree)
    v_power = sum(d[i] ** 2 for i in range(1, m + 1)) \
        - sum(d[i] * d[i - 1] for i in range(2, m + 1)) - sum(degree)
    t_exps = {i: d[i - 1] - d[i] for i in range(1, m + 2)}
    sign = -1 if sum(degree) % 2 else 1
    pref = ctx.ring.t_monomial(t_exps, v_power=v_power, coeff=sign)
    return rgamma_char(ctx, whittaker_k(ctx, degree)).scale_poly(pref)


def whittaker_pair_localized(ctx: ModuleContext,
                             degree: Sequence[int]) -> RatFunc:
    """The same pairing computed directly from the two vectors."""
    degree = tuple(degree)
    return shapovalov_pair(ctx, whittaker_k(ctx, degree),
                           whittaker_w(ctx, degree))


# cached torus rings keyed by rank, so repeated identity checks share one
_RING_CACHE = {}


def tv_ring_cached(n: int) -> TVRing:
    ring = _RING_CACHE.get(n)
    if ring is None:
        from .symbolic import tv_ring
        ring = _RING_CACHE[n] = tv_ring(n)
    return ring
