"""Raising/lowering/diagonal operators on the graded module of fixed-point
classes, and exhaustive verification of the quantum-group relations.

The module M = ⊕_d M_d has one basis vector per fixed point.  Diagonal
operators act by a degree-dependent monomial; the raising operator for row
i moves along single-entry increments of the triangular array, the lowering
operator along decrements.  Off-adjacency entries vanish.

Every non-diagonal operator has two independent construction paths:

- "closed": the factored product formula for each matrix entry;
- "geometric": the localization ratio S(correspondence) / S(source) of
  symmetric-algebra characters, scaled by the tautological line weight for
  the raising direction.

Their entrywise agreement is an acceptance test, not an assumption.

Relation checks run over a degree truncation box.  A check at a basis
vector is attempted only when the whole relation orbit (every intermediate
degree) stays inside the box; degrees below zero are genuinely absent from
the module and need no special casing.  Identities that fail in the free
parameter ring are retried modulo the determinant constraint
t_1 ... t_n = 1 (the natural parameter space is the SL_n torus), and the
mode is reported per record.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple

from .characters import (
    Orientation,
    corr_tangent_char,
    modification_weight,
    sym_inverse,
    tangent_char,
)
from .fixed_points import (
    DegreeVector,
    FixedPoint,
    Rows,
    all_degrees,
    enumerate_points,
    lower_moves,
    raise_moves,
)
from .symbolic import (
    LaurentPoly,
    RatFunc,
    RatSum,
    TVRing,
    UsageError,
    sum_is_zero,
    tv_ring,
)

EntryPath = Literal["closed", "geometric"]
TwistPath = Literal["composite", "direct"]


@dataclass(frozen=True)
class Truncation:
    """Componentwise degree cap defining the working box."""

    n: int
    cap: int

    def __post_init__(self) -> None:
        if self.cap < 0:
            raise UsageError("truncation cap must be nonnegative")

    def contains(self, degree: DegreeVector) -> bool:
        return all(0 <= d <= self.cap for d in degree)

    def degrees(self) -> List[DegreeVector]:
        return all_degrees(self.n, self.cap)


@dataclass(frozen=True)
class SevostyanovChoice:
    """The fixed twist data: matrices n_ij and c_ij = n_ij - n_ji."""

    rank: int
    n_matrix: Tuple[Tuple[int, ...], ...]
    c_matrix: Tuple[Tuple[int, ...], ...]

    @staticmethod
    def standard(n: int) -> "SevostyanovChoice":
        """n_{ii} = -2i, n_{i,i±1} = i, else 0; hence c_{i,i+1} = -1,
        c_{i+1,i} = 1, else 0."""
        m = n - 1
        nm = [[0] * m for _ in range(m)]
        for i in range(1, m + 1):
            nm[i - 1][i - 1] = -2 * i
            if i + 1 <= m:
                nm[i - 1][i] = i
            if i - 1 >= 1:
                nm[i - 1][i - 2] = i
        cm = [[nm[a][b] - nm[b][a] for b in range(m)] for a in range(m)]
        return SevostyanovChoice(
            rank=n,
            n_matrix=tuple(tuple(r) for r in nm),
            c_matrix=tuple(tuple(r) for r in cm),
        )

    def c(self, i: int, j: int) -> int:
        return self.c_matrix[i - 1][j - 1]

    def __post_init__(self) -> None:
        m = self.rank - 1
        for a in range(m):
            for b in range(m):
                if self.c_matrix[a][b] != self.n_matrix[a][b] - self.n_matrix[b][a]:
                    raise UsageError("c matrix is not the antisymmetrization of n")


@dataclass
class ModuleVector:
    """An element of one graded piece, as coefficients on fixed points."""

    degree: DegreeVector
    coeffs: Dict[FixedPoint, RatFunc]

    def __post_init__(self) -> None:
        for p in self.coeffs:
            if p.degree != tuple(self.degree):
                raise UsageError("coefficient key has the wrong degree")

    def coeff(self, p: FixedPoint, ring: TVRing) -> RatFunc:
        got = self.coeffs.get(p)
        return got if got is not None else RatFunc.zero(ring)


def _monomial_pow(p: LaurentPoly, m: int) -> LaurentPoly:
    """Integer (possibly negative) power of a ±1-coefficient monomial."""
    exps, coeff = p.monomial_parts()
    if coeff not in (1, -1):
        raise UsageError("expected a unit monomial")
    return p.ring.monomial(tuple(e * m for e in exps), coeff ** (m & 1) if m else 1)


class GradedOperator:
    """A degree-homogeneous operator given by its action on basis vectors."""

    def __init__(self, label: str, shift: Tuple[int, ...],
                 fn: Callable[[FixedPoint], List[Tuple[FixedPoint, RatFunc]]]):
        self.label = label
        self.shift = shift
        self._fn = fn
        self._cache: Dict[Rows, List[Tuple[FixedPoint, RatFunc]]] = {}

    def terms(self, p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        out = self._cache.get(p.rows)
        if out is None:
            out = self._fn(p)
            for q, _ in out:
                if tuple(a + b for a, b in zip(p.degree, self.shift)) != q.degree:
                    raise UsageError(f"{self.label}: entry violates declared shift")
            self._cache[p.rows] = out
        return out


class ModuleContext:
    """Shared caches: ring, fixed points, localization factors."""

    def __init__(self, n: int, orientation: Orientation = "A"):
        self.n = n
        self.ring: TVRing = tv_ring(n)
        self.orientation: Orientation = orientation
        self._points: Dict[DegreeVector, List[FixedPoint]] = {}
        self._sym: Dict[Rows, RatFunc] = {}
        self._corr_sym: Dict[Tuple[Rows, int, int], RatFunc] = {}

    def points(self, degree: Sequence[int]) -> List[FixedPoint]:
        key = tuple(degree)
        if key not in self._points:
            self._points[key] = enumerate_points(self.n, key)
        return self._points[key]

    def sym_factor(self, p: FixedPoint) -> RatFunc:
        """S-character of the tangent space at p (the localization factor)."""
        if p.rows not in self._sym:
            self._sym[p.rows] = sym_inverse(tangent_char(self.ring, p),
                                            self.orientation)
        return self._sym[p.rows]

    def corr_sym_factor(self, p: FixedPoint, i: int, j: int) -> RatFunc:
        """S-character of the correspondence tangent space at (p, p+e_{ij})."""
        key = (p.rows, i, j)
        if key not in self._corr_sym:
            self._corr_sym[key] = sym_inverse(
                corr_tangent_char(self.ring, p, i, j), self.orientation)
        return self._corr_sym[key]

    # -- diagonal scalars --------------------------------------------------

    def k_scalar(self, i: int, degree: DegreeVector) -> LaurentPoly:
        """t_{i+1} t_i^{-1} v^{2d_i - d_{i-1} - d_{i+1} + 1} (d_0 = d_n = 0)."""
        self._check_row(i)
        d = _padded(degree)
        return self.ring.t_monomial(
            {i + 1: 1, i: -1}, v_power=2 * d[i] - d[i - 1] - d[i + 1] + 1)

    def l_scalar(self, i: int, degree: DegreeVector) -> LaurentPoly:
        """t_1^{-1}..t_i^{-1} v^{d_i + i(n-i)/2}; half-integer v-exponent."""
        self._check_row(i)
        d = _padded(degree)
        return self.ring.t_monomial(
            {k: -1 for k in range(1, i + 1)},
            v_doubled_extra=2 * d[i] + i * (self.n - i))

    def _check_row(self, i: int) -> None:
        if not 1 <= i <= self.n - 1:
            raise UsageError(f"row index {i} out of range 1..{self.n - 1}")


def _padded(degree: DegreeVector) -> Dict[int, int]:
    d = {k: v for k, v in enumerate(degree, start=1)}
    d[0] = 0
    d[len(degree) + 1] = 0
    return d


def _unit_vec(n: int, i: int, sign: int = 1) -> Tuple[int, ...]:
    return tuple(sign if k == i else 0 for k in range(1, n))


# ---------------------------------------------------------------------------
# Diagonal operators
# ---------------------------------------------------------------------------

def op_scalar(ctx: ModuleContext,
              scalar: Callable[[DegreeVector], RatFunc],
              label: str = "scalar") -> GradedOperator:
    def fn(p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        return [(p, scalar(p.degree))]
    return GradedOperator(label, (0,) * (ctx.n - 1), fn)


def op_K(ctx: ModuleContext, i: int, power: int = 1) -> GradedOperator:
    ctx._check_row(i)
    return op_scalar(
        ctx,
        lambda d: RatFunc.from_poly(_monomial_pow(ctx.k_scalar(i, d), power)),
        label=f"K{i}^{power}",
    )


def op_L(ctx: ModuleContext, i: int, power: int = 1) -> GradedOperator:
    ctx._check_row(i)
    return op_scalar(
        ctx,
        lambda d: RatFunc.from_poly(_monomial_pow(ctx.l_scalar(i, d), power)),
        label=f"L{i}^{power}",
    )


# ---------------------------------------------------------------------------
# Raising / lowering operators
# ---------------------------------------------------------------------------

def _one_minus(ring: TVRing, t_num: int, t_den: int, v_power: int) -> LaurentPoly:
    """1 - t_{t_num}^2 t_{t_den}^{-2} v^{v_power}."""
    exps = {t_num: 2, t_den: -2} if t_num != t_den else {}
    return ring.one() - ring.t_monomial(exps, v_power=v_power)


def _raise_prefactor(ctx: ModuleContext, i: int, degree: DegreeVector) -> LaurentPoly:
    """-t_{i+1}^{-i-1} t_i^{i-1} v^{(i-1)d_{i-1} + (i+1)d_{i+1} - 2i d_i - i}."""
    d = _padded(degree)
    return ctx.ring.t_monomial(
        {i + 1: -i - 1, i: i - 1},
        v_power=(i - 1) * d[i - 1] + (i + 1) * d[i + 1] - 2 * i * d[i] - i,
        coeff=-1,
    )


def _lower_prefactor(ctx: ModuleContext, i: int, degree: DegreeVector) -> LaurentPoly:
    """t_{i+1}^i t_i^{-i} v^{2i d_i - i d_{i-1} - i d_{i+1} - i}."""
    d = _padded(degree)
    return ctx.ring.t_monomial(
        {i + 1: i, i: -i},
        v_power=2 * i * d[i] - i * d[i - 1] - i * d[i + 1] - i,
    )


def _raise_entry_closed(ctx: ModuleContext, p: FixedPoint, i: int,
                        j: int) -> RatFunc:
    """Factored product for the raising entry at move (i, j), without the
    degree prefactor."""
    ring = ctx.ring
    a = p.entry(i, j)
    factors: List[Tuple[LaurentPoly, int]] = [(ring.one() - ring.v(2), -1)]
    for k in range(1, i + 1):
        if k != j:
            factors.append(
                (_one_minus(ring, j, k, 2 * p.entry(i, k) - 2 * a), -1))
    for k in range(1, i):
        factors.append(
            (_one_minus(ring, j, k, 2 * p.entry(i - 1, k) - 2 * a), 1))
    lam = ring.t_monomial({j: 2}, v_power=-2 * a)
    return RatFunc.from_factors(ring, lam, factors)


def _lower_entry_closed(ctx: ModuleContext, p: FixedPoint, i: int,
                        j: int) -> RatFunc:
    """Factored product for the lowering entry at move (i, j), without the
    degree prefactor."""
    ring = ctx.ring
    a = p.entry(i, j)
    factors: List[Tuple[LaurentPoly, int]] = [(ring.one() - ring.v(2), -1)]
    for k in range(1, i + 1):
        if k != j:
            factors.append(
                (_one_minus(ring, k, j, 2 * a - 2 * p.entry(i, k)), -1))
    for k in range(1, i + 2):
        factors.append(
            (_one_minus(ring, k, j, 2 * a - 2 * p.entry(i + 1, k)), 1))
    return RatFunc.from_factors(ring, ring.one(), factors)


def _raise_entry_geometric(ctx: ModuleContext, p: FixedPoint, i: int,
                           j: int) -> RatFunc:
    lam = modification_weight(ctx.ring, p, i, j)
    return (ctx.corr_sym_factor(p, i, j) / ctx.sym_factor(p)).scale_poly(lam)


def _lower_entry_geometric(ctx: ModuleContext, p: FixedPoint, q: FixedPoint,
                           i: int, j: int) -> RatFunc:
    # the correspondence pair is (q, p): q is the lower point raised at (i, j)
    return ctx.corr_sym_factor(q, i, j) / ctx.sym_factor(p)


def op_E(ctx: ModuleContext, i: int, path: EntryPath = "closed") -> GradedOperator:
    """The raising operator for row i: degree d -> d + e_i."""
    ctx._check_row(i)

    def fn(p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        pref = _raise_prefactor(ctx, i, p.degree)
        out = []
        for q, j in raise_moves(p, i):
            if path == "closed":
                entry = _raise_entry_closed(ctx, p, i, j)
            else:
                entry = _raise_entry_geometric(ctx, p, i, j)
            out.append((q, entry.scale_poly(pref)))
        return out

    return GradedOperator(f"E{i}", _unit_vec(ctx.n, i), fn)


def op_F(ctx: ModuleContext, i: int, path: EntryPath = "closed") -> GradedOperator:
    """The lowering operator for row i: degree d -> d - e_i."""
    ctx._check_row(i)

    def fn(p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        pref = _lower_prefactor(ctx, i, p.degree)
        out = []
        for q, j in lower_moves(p, i):
            if path == "closed":
                entry = _lower_entry_closed(ctx, p, i, j)
            else:
                entry = _lower_entry_geometric(ctx, p, q, i, j)
            out.append((q, entry.scale_poly(pref)))
        return out

    return GradedOperator(f"F{i}", _unit_vec(ctx.n, i, -1), fn)


def op_e(ctx: ModuleContext, i: int, path: TwistPath = "composite") -> GradedOperator:
    """Twisted raising generator: E_i K_i^i as a composite, or directly the
    geometric kernel with its own monomial prefactor."""
    ctx._check_row(i)
    if path == "composite":
        return compose(op_E(ctx, i), op_K(ctx, i, i), label=f"e{i}")

    def fn(p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        d = _padded(p.degree)
        pref = ctx.ring.t_monomial(
            {i + 1: -1, i: -1}, v_power=d[i + 1] - d[i - 1], coeff=-1)
        return [(q, _raise_entry_geometric(ctx, p, i, j).scale_poly(pref))
                for q, j in raise_moves(p, i)]

    return GradedOperator(f"e{i}", _unit_vec(ctx.n, i), fn)


def op_f(ctx: ModuleContext, i: int, path: TwistPath = "composite") -> GradedOperator:
    """Twisted lowering generator: K_i^{-i} F_i as a composite, or directly
    the plain pushforward-pullback kernel."""
    ctx._check_row(i)
    if path == "composite":
        return compose(op_K(ctx, i, -i), op_F(ctx, i), label=f"f{i}")

    def fn(p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        return [(q, _lower_entry_geometric(ctx, p, q, i, j))
                for q, j in lower_moves(p, i)]

    return GradedOperator(f"f{i}", _unit_vec(ctx.n, i, -1), fn)


# ---------------------------------------------------------------------------
# Operator algebra on basis vectors
# ---------------------------------------------------------------------------

def compose(*ops: GradedOperator, label: Optional[str] = None) -> GradedOperator:
    """Composition; ops are applied right to left, as written."""
    if not ops:
        raise UsageError("empty composition")
    shift = tuple(sum(s) for s in zip(*(op.shift for op in ops)))

    def fn(p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
        frontier: List[Tuple[FixedPoint, RatFunc]] = [(p, None)]  # type: ignore
        for op in reversed(ops):
            nxt: Dict[Rows, Tuple[FixedPoint, List[RatFunc]]] = {}
            for q, coeff in frontier:
                for r, entry in op.terms(q):
                    total = entry if coeff is None else entry * coeff
                    slot = nxt.setdefault(r.rows, (r, []))
                    slot[1].append(total)
            frontier = []
            for r, parts in nxt.values():
                if len(parts) == 1:
                    frontier.append((r, parts[0]))
                else:
                    frontier.append((r, RatSum(parts[0].ring, parts).to_ratfunc()))
        return [(q, c) for q, c in frontier if c is not None and not c.is_zero()]

    return GradedOperator(label or "∘".join(op.label for op in ops), shift, fn)


def apply_op(op: GradedOperator, x: ModuleVector, tr: Truncation) -> ModuleVector:
    """Exact sparse matrix-vector product; targets outside the box drop."""
    target = tuple(a + b for a, b in zip(x.degree, op.shift))
    out: Dict[FixedPoint, RatSum] = {}
    if tr.contains(target):
        for p, c in x.coeffs.items():
            for q, entry in op.terms(p):
                out.setdefault(q, RatSum(entry.ring)).add(entry * c)
    coeffs = {q: s.to_ratfunc() for q, s in out.items()}
    return ModuleVector(target, {q: c for q, c in coeffs.items() if not c.is_zero()})


def basis_vector(ctx: ModuleContext, p: FixedPoint) -> ModuleVector:
    return ModuleVector(p.degree, {p: RatFunc.one(ctx.ring)})


# ---------------------------------------------------------------------------
# Relation verification
# ---------------------------------------------------------------------------

Term = Tuple[RatFunc, Tuple[GradedOperator, ...]]


def _orbit_in_box(tr: Truncation, degree: DegreeVector,
                  terms: Sequence[Term]) -> bool:
    """True when every intermediate degree of every term stays under the cap.

    Degrees with negative components are fine: the module genuinely has no
    such graded pieces, so the operators vanish there by themselves.
    """
    for _, chain in terms:
        cum = list(degree)
        for op in reversed(chain):
            cum = [a + b for a, b in zip(cum, op.shift)]
            if any(c > tr.cap for c in cum):
                return False
    return True


def _term_action(term: Term, p: FixedPoint) -> List[Tuple[FixedPoint, RatFunc]]:
    coeff, chain = term
    frontier: List[Tuple[FixedPoint, RatFunc]] = [(p, coeff)]
    for op in reversed(chain):
        nxt: List[Tuple[FixedPoint, RatFunc]] = []
        for q, c in frontier:
            for r, entry in op.terms(q):
                nxt.append((r, entry * c))
        frontier = nxt
    return frontier


def _identity_holds(ctx: ModuleContext, terms: Sequence[Term], p: FixedPoint,
                    seed: int) -> Tuple[bool, str, Optional[dict]]:
    """Check that sum of terms annihilates [p]; returns (ok, mode, witness)."""
    buckets: Dict[Rows, Tuple[FixedPoint, RatSum]] = {}
    for term in terms:
        for q, c in _term_action(term, p):
            buckets.setdefault(q.rows, (q, RatSum(ctx.ring)))[1].add(c)
    mode = "free"
    for q, total in buckets.values():
        if sum_is_zero(total, seed=seed):
            continue
        mode = "modulo-det"
        if not _zero_mod_det(ctx.ring, total.to_ratfunc()):
            witness = {
                "source": p.to_json(),
                "target": q.to_json(),
                "entry": total.to_ratfunc().to_json(),
            }
            return False, mode, witness
    return True, mode, None


def _zero_mod_det(ring: TVRing, r: RatFunc) -> bool:
    """Is r zero after imposing t_1 ... t_n = 1?"""
    if r.is_zero():
        return True
    num, den = r.num_den()
    if ring.substitute_det_one(den).is_zero():
        raise UsageError("denominator degenerates under the determinant relation")
    return ring.substitute_det_one(num).is_zero()


def _one(ctx: ModuleContext) -> RatFunc:
    return RatFunc.one(ctx.ring)


def _const(ctx: ModuleContext, p: LaurentPoly) -> RatFunc:
    return RatFunc.from_poly(p)


def _cartan_commutator_rhs(ctx: ModuleContext, i: int) -> GradedOperator:
    """(K_i - K_i^{-1}) / (v - v^{-1}) as a diagonal operator."""
    ring = ctx.ring

    def scalar(d: DegreeVector) -> RatFunc:
        kappa = ctx.k_scalar(i, d)
        return RatFunc.from_frac(kappa - _monomial_pow(kappa, -1),
                                 ring.v(1) - ring.v(-1))

    return op_scalar(ctx, scalar, label=f"(K{i}-K{i}^-1)/(v-v^-1)")


def relation_suite(ctx: ModuleContext) -> List[Tuple[str, dict, List[Term]]]:
    """All relation instances as (name, params, terms-summing-to-zero)."""
    n = ctx.n
    ring = ctx.ring
    rng = range(1, n)
    v = lambda k: _const(ctx, ring.v(k))
    suite: List[Tuple[str, dict, List[Term]]] = []

    E = {i: op_E(ctx, i) for i in rng}
    F = {i: op_F(ctx, i) for i in rng}
    e = {i: op_e(ctx, i) for i in rng}
    f = {i: op_f(ctx, i) for i in rng}
    L = {i: op_L(ctx, i) for i in rng}
    Linv = {i: op_L(ctx, i, -1) for i in rng}
    cho = SevostyanovChoice.standard(n)

    for i, j in itertools.product(rng, rng):
        # diagonal-conjugation: L_i X_j L_i^{-1} = v^{±δ_ij} X_j
        suite.append((
            "diagonal-conjugates-raising", {"i": i, "j": j},
            [(_one(ctx), (L[i], E[j], Linv[i])),
             (-v(1 if i == j else 0), (E[j],))],
        ))
        suite.append((
            "diagonal-conjugates-lowering", {"i": i, "j": j},
            [(_one(ctx), (L[i], F[j], Linv[i])),
             (-v(-1 if i == j else 0), (F[j],))],
        ))
        suite.append((
            "diagonal-conjugates-twisted-raising", {"i": i, "j": j},
            [(_one(ctx), (L[i], e[j], Linv[i])),
             (-v(1 if i == j else 0), (e[j],))],
        ))
        suite.append((
            "diagonal-conjugates-twisted-lowering", {"i": i, "j": j},
            [(_one(ctx), (L[i], f[j], Linv[i])),
             (-v(-1 if i == j else 0), (f[j],))],
        ))
        # commutator of raising and lowering
        comm_terms: List[Term] = [
            (_one(ctx), (E[i], F[j])),
            (-_one(ctx), (F[j], E[i])),
        ]
        if i == j:
            comm_terms.append((-_one(ctx), (_cartan_commutator_rhs(ctx, i),)))
        suite.append(("raising-lowering-commutator", {"i": i, "j": j}, comm_terms))
        # twisted commutator with the c-matrix weight
        tw_terms: List[Term] = [
            (_one(ctx), (e[i], f[j])),
            (-v(cho.c(i, j)), (f[j], e[i])),
        ]
        if i == j:
            tw_terms.append((-_one(ctx), (_cartan_commutator_rhs(ctx, i),)))
        suite.append(("twisted-commutator", {"i": i, "j": j}, tw_terms))

        if abs(i - j) > 1:
            suite.append(("distant-raising-commute", {"i": i, "j": j},
                          [(_one(ctx), (E[i], E[j])), (-_one(ctx), (E[j], E[i]))]))
            suite.append(("distant-lowering-commute", {"i": i, "j": j},
                          [(_one(ctx), (F[i], F[j])), (-_one(ctx), (F[j], F[i]))]))
            suite.append(("distant-twisted-raising-commute", {"i": i, "j": j},
                          [(_one(ctx), (e[i], e[j])), (-_one(ctx), (e[j], e[i]))]))
            suite.append(("distant-twisted-lowering-commute", {"i": i, "j": j},
                          [(_one(ctx), (f[i], f[j])), (-_one(ctx), (f[j], f[i]))]))

        if abs(i - j) == 1:
            vv = _const(ctx, ring.v(1) + ring.v(-1))
            suite.append(("serre-raising", {"i": i, "j": j},
                          [(_one(ctx), (E[i], E[i], E[j])),
                           (-vv, (E[i], E[j], E[i])),
                           (_one(ctx), (E[j], E[i], E[i]))]))
            suite.append(("serre-lowering", {"i": i, "j": j},
                          [(_one(ctx), (F[i], F[i], F[j])),
                           (-vv, (F[i], F[j], F[i])),
                           (_one(ctx), (F[j], F[i], F[i]))]))
            # In the deformed Serre relation the twist exponent is indexed
            # by the outer generator first: v^{c(j,i)}, the transpose of the
            # exponent appearing in the mixed commutator.  Verified by
            # exhaustive probe over candidate exponents at low degrees.
            c = cho.c(j, i)
            suite.append(("serre-twisted-raising", {"i": i, "j": j},
                          [(_one(ctx), (e[i], e[i], e[j])),
                           (-(vv * v(c)), (e[i], e[j], e[i])),
                           (v(2 * c), (e[j], e[i], e[i]))]))
            suite.append(("serre-twisted-lowering", {"i": i, "j": j},
                          [(_one(ctx), (f[i], f[i], f[j])),
                           (-(vv * v(c)), (f[i], f[j], f[i])),
                           (v(2 * c), (f[j], f[i], f[i]))]))
    return suite


def cartan_monomial_records(ctx: ModuleContext, tr: Truncation) -> List[dict]:
    """The purely diagonal relations: K_i as a ratio of squares of the L's.

    K_1 = L_1^2 L_2^{-1}; interior K_i = L_{i-1}^{-1} L_i^2 L_{i+1}^{-1};
    K_{n-1} = L_{n-2}^{-1} L_{n-1}^2 (for n = 2 simply K_1 = L_1^2).  The
    outermost identity needs the determinant constraint t_1..t_n = 1.
    """
    ring = ctx.ring
    records = []
    for i in range(1, ctx.n):
        for d in tr.degrees():
            lhs = ctx.k_scalar(i, d)
            rhs = ring.one()
            for k, power in ((i - 1, -1), (i, 2), (i + 1, -1)):
                if 1 <= k <= ctx.n - 1:
                    rhs = rhs * _monomial_pow(ctx.l_scalar(k, d), power)
            diff = lhs - rhs
            if diff.is_zero():
                status, mode = "pass", "free"
            elif ring.substitute_det_one(diff).is_zero():
                status, mode = "pass", "modulo-det"
            else:
                status, mode = "fail", "modulo-det"
            records.append({
                "check": "diagonal-consistency",
                "i": i,
                "degree": list(d),
                "mode": mode,
                "status": status,
            })
    return records


def verify_relations(ctx: ModuleContext, tr: Truncation,
                     seed: int = 0) -> List[dict]:
    """Run the whole relation suite over the truncation box.

    One record per (relation, indices, degree); a record passes when the
    identity annihilates every basis vector of that degree.  Records are
    skipped when the relation orbit leaves the box.
    """
    records = cartan_monomial_records(ctx, tr)
    for name, params, terms in relation_suite(ctx):
        for d in tr.degrees():
            if not _orbit_in_box(tr, d, terms):
                records.append({
                    "check": name, **params, "degree": list(d),
                    "mode": "free", "status": "skipped-out-of-box",
                })
                continue
            status, mode, witness = "pass", "free", None
            for p in ctx.points(d):
                ok, m, w = _identity_holds(ctx, terms, p, seed)
                if m == "modulo-det":
                    mode = "modulo-det"
                if not ok:
                    status, witness = "fail", w
                    break
            rec = {"check": name, **params, "degree": list(d),
                   "mode": mode, "status": status}
            if witness:
                rec["witness"] = witness
            records.append(rec)
    return records


def diagonality_check(ctx: ModuleContext, i: int, tr: Truncation) -> List[dict]:
    """All off-diagonal entries of E_i F_i - F_i E_i must vanish exactly."""
    E, F = op_E(ctx, i), op_F(ctx, i)
    records = []
    for d in tr.degrees():
        if not tr.contains(tuple(a + b for a, b in zip(d, E.shift))):
            records.append({"check": "commutator-diagonality", "i": i,
                            "degree": list(d), "status": "skipped-out-of-box"})
            continue
        ok = True
        for p in ctx.points(d):
            buckets: Dict[Rows, Tuple[FixedPoint, RatSum]] = {}
            for term in ((_one(ctx), (E, F)), (-_one(ctx), (F, E))):
                for q, c in _term_action(term, p):
                    buckets.setdefault(q.rows, (q, RatSum(ctx.ring)))[1].add(c)
            for q, total in buckets.values():
                if q.rows != p.rows and not sum_is_zero(total, seed=1):
                    ok = False
        records.append({"check": "commutator-diagonality", "i": i,
                        "degree": list(d), "status": "pass" if ok else "fail"})
    return records


# ---------------------------------------------------------------------------
# The commutator summation identity
# ---------------------------------------------------------------------------

def _check_summation_rows(i: int, rows: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    if len(rows) != 3:
        raise UsageError("expected three consecutive rows of array data")
    upper, mid, low = (tuple(int(a) for a in r) for r in rows)
    if len(upper) != i - 1 or len(mid) != i or len(low) != i + 1:
        raise UsageError(f"row lengths must be {i - 1}, {i}, {i + 1}")
    return upper, mid, low


def summation_identity_sides(n: int, i: int,
                        rows: Sequence[Sequence[int]]) -> Tuple[RatFunc, RatFunc]:
    """Both sides of the diagonal-commutator summation identity, in the torus
    variables, for given row data (rows i-1, i, i+1 of a triangular array).

    The left side is the weighted difference of the two Cartan monomials;
    the right side is the signed sum over columns of factored products.
    Their equality is what makes the raising/lowering commutator diagonal
    entries close into (K_i - K_i^{-1})/(v - v^{-1}).
    """
    if not 1 <= i <= n - 1:
        raise UsageError("row index out of range")
    upper, mid, low = _check_summation_rows(i, rows)
    ring = tv_ring(n)
    Du, Dm, Dl = sum(upper), sum(mid), sum(low)

    head = ring.t_monomial({i: 1, i + 1: -1}, v_power=Du - 2 * Dm + Dl - 1) \
        - ring.t_monomial({i: -1, i + 1: 1}, v_power=-Du + 2 * Dm - Dl + 1)
    scale = ((ring.one() - ring.v(2)) ** 2) \
        * ring.t_monomial({i: 1, i + 1: 1}, v_power=Du - Dl)
    lhs = RatFunc.from_frac(head * scale, ring.v(1) - ring.v(-1))

    def half(shifted: bool) -> RatFunc:
        # shifted=True is the first sum (v-exponents carry +2 in the s-slots)
        s = 2 if shifted else 0
        parts = []
        for j in range(1, i + 1):
            a = mid[j - 1]
            unit = ring.t_monomial({j: 2}, v_power=-2 * a + s)
            factors: List[Tuple[LaurentPoly, int]] = [
                (_one_minus(ring, i, j, 2 * a - 2 * low[i - 1] + (0 if shifted else 2)), 1),
                (_one_minus(ring, i + 1, j, 2 * a - 2 * low[i] + (0 if shifted else 2)), 1),
            ]
            for k in range(1, i + 1):
                if k == j:
                    continue
                b = mid[k - 1]
                factors.append((_one_minus(ring, k, j, 2 * a - 2 * b + (0 if shifted else 2)), -1))
                factors.append((_one_minus(ring, j, k, 2 * b - 2 * a + (2 if shifted else 0)), -1))
            for k in range(1, i):
                factors.append((_one_minus(ring, k, j, 2 * a - 2 * low[k - 1] + (0 if shifted else 2)), 1))
                factors.append((_one_minus(ring, j, k, 2 * upper[k - 1] - 2 * a + (2 if shifted else 0)), 1))
            parts.append(RatFunc.from_factors(ring, unit, factors))
        return RatSum(ring, parts).to_ratfunc()

    rhs = half(True) - half(False)
    return lhs, rhs


def summation_identity_sides_generic(i: int) -> Tuple[RatFunc, RatFunc]:
    """Both sides of the same identity in fully independent variables
    s_1..s_i, r_1..r_{i+1}, p_1..p_{i-1}, q (one variable per array slot)."""
    from .symbolic import generic_ring

    if i < 1:
        raise UsageError("need i >= 1")
    names = [f"s{j}" for j in range(1, i + 1)] \
        + [f"r{k}" for k in range(1, i + 2)] \
        + [f"p{k}" for k in range(1, i)] + ["q"]
    ring = generic_ring(names)
    s = [ring.var(j) for j in range(i)]
    r = [ring.var(i + k) for k in range(i + 1)]
    p = [ring.var(2 * i + 1 + k) for k in range(i - 1)]
    q = ring.var(ring.nvars - 1)

    big = q
    for x in s:
        big = big * ring.monomial(tuple(-2 * e for e in x.monomial_parts()[0]))
    for x in p + r:
        big = big * x
    lhs = RatFunc.from_poly((ring.one() - q) * (big - ring.one()))

    def half(q_on_r: bool) -> RatFunc:
        parts = []
        for j in range(i):
            exps = tuple(-2 * e for e in s[j].monomial_parts()[0])
            unit = ring.monomial(exps)
            factors: List[Tuple[LaurentPoly, int]] = []
            for rk in r:
                factors.append((s[j] - (q * rk if q_on_r else rk), 1))
            for pk in p:
                factors.append((pk - (s[j] if q_on_r else q * s[j]), 1))
            for k in range(i):
                if k == j:
                    continue
                if q_on_r:
                    factors.append((s[j] - q * s[k], -1))
                    factors.append((s[k] - s[j], -1))
                else:
                    factors.append((s[j] - s[k], -1))
                    factors.append((s[k] - q * s[j], -1))
            parts.append(RatFunc.from_factors(ring, unit, factors))
        return RatSum(ring, parts).to_ratfunc()

    rhs = half(False).scale_poly(q) - half(True)
    return lhs, rhs


def verify_summation_identity(n: int, i: int, rows: Sequence[Sequence[int]],
                exact: Optional[bool] = None, seed: int = 0,
                trials: int = 5) -> bool:
    """Verify the summation identity in both variable systems.

    The torus-variable form is checked for the supplied row data; the
    independent-variable form is checked once per i.  Exact cross-multiplied
    equality by default for i <= 2, seeded random evaluation otherwise.
    """
    from .symbolic import eq_exact, eq_random

    if exact is None:
        exact = i <= 2
    lhs_o, rhs_o = summation_identity_sides(n, i, rows)
    lhs_s, rhs_s = summation_identity_sides_generic(i)
    if exact:
        return eq_exact(lhs_o, rhs_o) and eq_exact(lhs_s, rhs_s)
    return eq_random(lhs_o, rhs_o, trials=trials, seed=seed) \
        and eq_random(lhs_s, rhs_s, trials=trials, seed=seed + 1)
