"""Exact sparse Laurent-polynomial and rational-function arithmetic.

The coefficient ring for everything downstream is the integer Laurent ring
Z[t_1^{±1},...,t_n^{±1}, v^{±1/2}] and its fraction field.  A Laurent
polynomial is a dict from exponent tuples to arbitrary-precision ints; the
zero polynomial is the empty dict.

Half-integer powers of v occur in a few diagonal operators, so the last
exponent slot counts units of v^(1/2): the monomial v^k is stored with last
exponent 2k.  Helper constructors on :class:`TVRing` hide this.

Rational functions keep numerator/denominator factors as multisets of
tracked canonical factors instead of expanded products.  Every localization
quantity in this package is born as a monomial times a product of
(1 - monomial) binomials, so tracked factors cancel syntactically and
nothing ever needs a multivariate GCD.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]
Terms = Dict[Exponent, int]


class UsageError(ValueError):
    """Raised when operands are structurally incompatible (e.g. mixed rings)."""


class ArithmeticDomainError(ZeroDivisionError):
    """Raised on division by the zero polynomial."""


class EvaluationError(ValueError):
    """Raised when an evaluation point hits a zero denominator."""


class DegeneracyError(ValueError):
    """Raised when a localization weight degenerates (trivial tangent weight)."""


@dataclass(frozen=True)
class Ring:
    """A parameter space: an ordered tuple of variable names."""

    names: Tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.const(1)

    def const(self, c: int) -> "LaurentPoly":
        if c == 0:
            return self.zero()
        return LaurentPoly(self, {(0,) * self.nvars: int(c)})

    def var(self, idx: int, power: int = 1) -> "LaurentPoly":
        exps = [0] * self.nvars
        exps[idx] = power
        return LaurentPoly(self, {tuple(exps): 1})

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        if len(exps) != self.nvars:
            raise UsageError(f"expected {self.nvars} exponents, got {len(exps)}")
        if coeff == 0:
            return self.zero()
        return LaurentPoly(self, {tuple(int(e) for e in exps): int(coeff)})


@dataclass(frozen=True)
class TVRing(Ring):
    """The torus character ring with t_1..t_n and the doubled-v slot."""

    n: int = 0

    def t(self, i: int, power: int = 1) -> "LaurentPoly":
        """The monomial t_i^power, 1-based index."""
        if not 1 <= i <= self.n:
            raise UsageError(f"t index {i} out of range 1..{self.n}")
        return self.var(i - 1, power)

    def v(self, power: int = 1) -> "LaurentPoly":
        """The monomial v^power (stored with doubled exponent)."""
        return self.var(self.n, 2 * power)

    def v_half(self, doubled_power: int) -> "LaurentPoly":
        """The monomial v^(doubled_power/2)."""
        return self.var(self.n, doubled_power)

    def t_monomial(self, t_exps: Mapping[int, int], v_power: int = 0,
                   v_doubled_extra: int = 0, coeff: int = 1) -> "LaurentPoly":
        """Monomial coeff * prod t_i^{t_exps[i]} * v^{v_power + v_doubled_extra/2}."""
        exps = [0] * self.nvars
        for i, e in t_exps.items():
            if not 1 <= i <= self.n:
                raise UsageError(f"t index {i} out of range 1..{self.n}")
            exps[i - 1] = int(e)
        exps[self.n] = 2 * v_power + v_doubled_extra
        return self.monomial(exps, coeff)

    def substitute_det_one(self, p: "LaurentPoly") -> "LaurentPoly":
        """Substitute t_n := (t_1 ... t_{n-1})^{-1}, leaving v untouched."""
        if p.ring != self:
            raise UsageError("polynomial from a different ring")
        out: Terms = {}
        for exps, c in p.terms.items():
            en = exps[self.n - 1]
            new = list(exps)
            for j in range(self.n - 1):
                new[j] -= en
            new[self.n - 1] = 0
            key = tuple(new)
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
        return LaurentPoly(self, out)


def tv_ring(n: int) -> TVRing:
    """The ring Z[t_1^{±1},..,t_n^{±1}, v^{±1/2}] for rank parameter n."""
    if n < 1:
        raise UsageError("need at least one t variable")
    return TVRing(names=tuple(f"t{i}" for i in range(1, n + 1)) + ("v",), n=n)


def generic_ring(names: Sequence[str]) -> Ring:
    """A plain Laurent ring in the named variables."""
    return Ring(names=tuple(names))


def _grlex_key(exps: Exponent) -> Tuple[int, Exponent]:
    return (sum(exps), exps)


class LaurentPoly:
    """Immutable-by-convention sparse Laurent polynomial over Z."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Terms):
        self.ring = ring
        self.terms = terms
        self._hash: int | None = None

    @staticmethod
    def _merge(ring: Ring, a: Terms, b: Terms, sign: int) -> "LaurentPoly":
        out = dict(a)
        for e, c in b.items():
            nc = out.get(e, 0) + sign * c
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
        return LaurentPoly(ring, out)

    def _check(self, other: "LaurentPoly") -> None:
        if self.ring != other.ring:
            raise UsageError("operands live in different rings")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return self._merge(self.ring, self.terms, other.terms, 1)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return self._merge(self.ring, self.terms, other.terms, -1)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: Terms = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                nc = out.get(e, 0) + ca * cb
                if nc:
                    out[e] = nc
                else:
                    out.pop(e, None)
        return LaurentPoly(self.ring, out)

    def scalar_mul(self, c: int) -> "LaurentPoly":
        if c == 0:
            return self.ring.zero()
        return LaurentPoly(self.ring, {e: c * k for e, k in self.terms.items()})

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise UsageError("negative power of a general polynomial; use RatFunc")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.ring.nvars: 1}

    def monomial_parts(self) -> Tuple[Exponent, int]:
        if len(self.terms) != 1:
            raise UsageError("not a monomial")
        [(e, c)] = self.terms.items()
        return e, c

    def sorted_terms(self) -> List[Tuple[Exponent, int]]:
        """Terms in canonical (graded-lexicographic) order."""
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]))

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.names, tuple(self.sorted_terms())))
        return self._hash

    def eval(self, point: "EvalPoint") -> Fraction:
        """Exact evaluation at a point with nonzero coordinates."""
        if len(point.values) != self.ring.nvars:
            raise UsageError("evaluation point has wrong arity")
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = Fraction(c)
            for val, e in zip(point.values, exps):
                if e:
                    term *= val ** e
            total += term
        return total

    def eval_at_ones(self) -> int:
        """Sum of coefficients: evaluation with every variable set to 1."""
        return sum(self.terms.values())

    def to_json(self) -> list:
        """Canonical form: list of [exponent-vector, decimal-string] pairs.

        For torus rings the final exponent counts half-units of v.
        """
        return [[list(e), str(c)] for e, c in self.sorted_terms()]

    @staticmethod
    def from_json(ring: Ring, data: Iterable) -> "LaurentPoly":
        terms: Terms = {}
        for exps, coeff in data:
            e = tuple(int(x) for x in exps)
            if len(e) != ring.nvars:
                raise UsageError("exponent vector has wrong arity")
            c = int(coeff)
            if c:
                terms[e] = terms.get(e, 0) + c
        return LaurentPoly(ring, {e: c for e, c in terms.items() if c != 0})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for exps, c in self.sorted_terms():
            factors = [f"{name}^{e}" for name, e in zip(self.ring.names, exps) if e]
            mono = "*".join(factors) if factors else "1"
            bits.append(f"{c}*{mono}")
        return " + ".join(bits)


@dataclass(frozen=True)
class EvalPoint:
    """Exact rational values, one per ring variable, all nonzero."""

    values: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(v == 0 for v in self.values):
            raise UsageError("evaluation point coordinates must be nonzero")

    @staticmethod
    def of(*values) -> "EvalPoint":
        return EvalPoint(tuple(Fraction(v) for v in values))


# ---------------------------------------------------------------------------
# Rational functions with tracked factors
# ---------------------------------------------------------------------------

FactorKey = Tuple[Tuple[Exponent, int], ...]


def _canonical_factor(p: LaurentPoly) -> Tuple[LaurentPoly, Exponent, int]:
    """Scale a nonzero factor to canonical form.

    Returns (canonical, shift_exps, sign) with p = sign * mono(shift) * canonical,
    where canonical's graded-lex-least term is a positive constant.
    """
    exps, coeff = min(p.terms.items(), key=lambda item: _grlex_key(item[0]))
    sign = 1 if coeff > 0 else -1
    canon = {
        tuple(x - y for x, y in zip(e, exps)): sign * c for e, c in p.terms.items()
    }
    return LaurentPoly(p.ring, canon), exps, sign


def _factor_key(p: LaurentPoly) -> FactorKey:
    return tuple(sorted(p.terms.items(), key=lambda item: _grlex_key(item[0])))


class RatFunc:
    """A rational function num/den over a Laurent ring.

    Internally: a residual Laurent polynomial `unit` times a product of
    canonical tracked factors with integer (possibly negative) exponents.
    Denominators are expanded only on demand; identical factors cancel at
    the multiset level.  No polynomial GCD is ever computed, so num/den
    pairs need not be fully reduced.
    """

    __slots__ = ("ring", "unit", "factors")

    def __init__(self, ring: Ring, unit: LaurentPoly,
                 factors: Dict[FactorKey, Tuple[LaurentPoly, int]]):
        self.ring = ring
        self.unit = unit
        self.factors = factors

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_poly(p: LaurentPoly) -> "RatFunc":
        return RatFunc(p.ring, p, {})

    @staticmethod
    def from_frac(num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        if den.is_zero():
            raise ArithmeticDomainError("zero denominator")
        return RatFunc.from_poly(num)._with_factor(den, -1)

    @staticmethod
    def from_factors(ring: Ring, unit: LaurentPoly,
                     factor_list: Iterable[Tuple[LaurentPoly, int]]) -> "RatFunc":
        """Build unit * prod f_i^{e_i} with factor tracking."""
        r = RatFunc(ring, unit, {})
        for f, e in factor_list:
            r = r._with_factor(f, e)
        return r

    @staticmethod
    def one(ring: Ring) -> "RatFunc":
        return RatFunc(ring, ring.one(), {})

    @staticmethod
    def zero(ring: Ring) -> "RatFunc":
        return RatFunc(ring, ring.zero(), {})

    def _with_factor(self, f: LaurentPoly, e: int) -> "RatFunc":
        if e == 0 or self.unit.is_zero():
            return self
        if f.is_zero():
            if e < 0:
                raise ArithmeticDomainError("zero denominator factor")
            return RatFunc.zero(self.ring)
        canon, shift, sign = _canonical_factor(f)
        unit = self.unit * self.ring.monomial(tuple(x * e for x in shift))
        if sign < 0 and e % 2:
            unit = -unit
        factors = dict(self.factors)
        if not canon.is_one():
            key = _factor_key(canon)
            old = factors.get(key)
            ne = (old[1] if old else 0) + e
            if ne:
                factors[key] = (canon, ne)
            else:
                factors.pop(key, None)
        return RatFunc(self.ring, unit, factors)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "RatFunc") -> None:
        if self.ring != other.ring:
            raise UsageError("operands live in different rings")

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        if self.unit.is_zero() or other.unit.is_zero():
            return RatFunc.zero(self.ring)
        factors = dict(self.factors)
        for key, (canon, e) in other.factors.items():
            old = factors.get(key)
            ne = (old[1] if old else 0) + e
            if ne:
                factors[key] = (canon, ne)
            else:
                factors.pop(key, None)
        return RatFunc(self.ring, self.unit * other.unit, factors)

    def inv(self) -> "RatFunc":
        if self.unit.is_zero():
            raise ArithmeticDomainError("division by zero")
        factors = {k: (c, -e) for k, (c, e) in self.factors.items()}
        return RatFunc(self.ring, self.ring.one(), factors)._with_factor(self.unit, -1)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        return self * other.inv()

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.ring, -self.unit, dict(self.factors))

    def __add__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        return rat_sum(self.ring, [self, other])

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def scale_poly(self, p: LaurentPoly) -> "RatFunc":
        if p.is_zero():
            return RatFunc.zero(self.ring)
        return RatFunc(self.ring, self.unit * p, dict(self.factors))

    # -- views --------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit.is_zero()

    @property
    def num(self) -> LaurentPoly:
        out = self.unit
        for canon, e in self.factors.values():
            if e > 0:
                out = out * (canon ** e)
        return out

    @property
    def den(self) -> LaurentPoly:
        out = self.ring.one()
        for canon, e in self.factors.values():
            if e < 0:
                out = out * (canon ** (-e))
        return out

    def num_den(self) -> Tuple[LaurentPoly, LaurentPoly]:
        return self.num, self.den

    def eval(self, point: EvalPoint) -> Fraction:
        total = self.unit.eval(point)
        for canon, e in self.factors.values():
            val = canon.eval(point)
            if val == 0:
                if e < 0:
                    raise EvaluationError("zero denominator factor at point")
                return Fraction(0)
            total *= val ** e
        return total

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self) -> str:
        num, den = self.num_den()
        return f"({num!r})/({den!r})"


def normalize(r: RatFunc) -> RatFunc:
    """Re-anchor a rational function.

    Cancels shared tracked factors and monomial content (the tracked
    representation keeps these current, so this re-canonicalizes and drops
    exponent-0 entries).  The equality class is unchanged.  No multivariate
    GCD is taken: untracked common polynomial factors stay put.
    """
    out = RatFunc(r.ring, r.unit, {})
    for canon, e in r.factors.values():
        out = out._with_factor(canon, e)
    return out


def rat_sum(ring: Ring, terms: Sequence[RatFunc]) -> RatFunc:
    """Sum of rational functions over a shared least common tracked denominator."""
    live = [t for t in terms if not t.unit.is_zero()]
    if not live:
        return RatFunc.zero(ring)
    if len(live) == 1:
        return live[0]
    need: Dict[FactorKey, Tuple[LaurentPoly, int]] = {}
    for t in live:
        for key, (canon, e) in t.factors.items():
            if e < 0:
                old = need.get(key)
                if old is None or -e > old[1]:
                    need[key] = (canon, -e)
    total = ring.zero()
    for t in live:
        part = t.unit
        for key, (canon, n) in need.items():
            e = t.factors.get(key, (canon, 0))[1]
            lift = e + n
            if lift:
                part = part * (canon ** lift)
        for key, (canon, e) in t.factors.items():
            if e > 0 and key not in need:
                part = part * (canon ** e)
        total = total + part
    factors = {key: (canon, -n) for key, (canon, n) in need.items()}
    return RatFunc(ring, total, factors)


class RatSum:
    """A lazy finite sum of factored rational functions.

    Used for module-vector coefficients so operator compositions stay in
    factored form; expansion happens only at equality checks.
    """

    __slots__ = ("ring", "parts")

    def __init__(self, ring: Ring, parts: Sequence[RatFunc] = ()):
        self.ring = ring
        self.parts: List[RatFunc] = [p for p in parts if not p.is_zero()]

    def copy(self) -> "RatSum":
        return RatSum(self.ring, list(self.parts))

    def add(self, term: RatFunc) -> None:
        if not term.is_zero():
            self.parts.append(term)

    def extend(self, other: "RatSum") -> None:
        self.parts.extend(other.parts)

    def times(self, r: RatFunc) -> "RatSum":
        return RatSum(self.ring, [p * r for p in self.parts])

    def __neg__(self) -> "RatSum":
        return RatSum(self.ring, [-p for p in self.parts])

    def is_structurally_zero(self) -> bool:
        return not self.parts

    def to_ratfunc(self) -> RatFunc:
        if not self.parts:
            return RatFunc.zero(self.ring)
        return rat_sum(self.ring, self.parts)

    def eval(self, point: EvalPoint) -> Fraction:
        return sum((p.eval(point) for p in self.parts), Fraction(0))


# ---------------------------------------------------------------------------
# Equality oracles
# ---------------------------------------------------------------------------

RANDOM_EVAL_LO = 2
RANDOM_EVAL_HI = 1 << 20
_RETRY_BUDGET = 200


def eq_exact(a: RatFunc, b: RatFunc) -> bool:
    """True iff a == b as rational functions, by exact cross-multiplication.

    Shared tracked factors cancel before anything is expanded.
    """
    a._check(b)
    return (a - b).is_zero()


def random_point(ring: Ring, rng: random.Random) -> EvalPoint:
    return EvalPoint(
        tuple(Fraction(rng.randint(RANDOM_EVAL_LO, RANDOM_EVAL_HI))
              for _ in range(ring.nvars))
    )


def _zero_on_random_points(diff: RatSum, trials: int, rng: random.Random) -> bool:
    for _ in range(trials):
        for _ in range(_RETRY_BUDGET):
            point = random_point(diff.ring, rng)
            try:
                if diff.eval(point) != 0:
                    return False
                break
            except EvaluationError:
                continue
        else:
            raise EvaluationError("no denominator-safe point within retry budget")
    return True


def eq_random(a: RatFunc, b: RatFunc, trials: int = 5, seed: int = 0) -> bool:
    """Seeded probabilistic equality via evaluation at large random points.

    Deterministic for fixed (seed, inputs); False only on a genuinely
    nonzero difference, True with overwhelming probability on equality.
    """
    if trials < 1:
        raise UsageError("trials must be >= 1")
    a._check(b)
    return _zero_on_random_points(RatSum(a.ring, [a, -b]), trials, random.Random(seed))


def sum_is_zero(s: RatSum, seed: int = 0, prescreen_trials: int = 2) -> bool:
    """Zero test for a lazy sum: cheap random prescreen, then exact combine."""
    if not s.parts:
        return True
    if not _zero_on_random_points(s, prescreen_trials, random.Random(seed)):
        return False
    return s.to_ratfunc().is_zero()


def geometric_block(lo: int, hi: int, m: LaurentPoly) -> LaurentPoly:
    """Sum_{l=lo}^{hi} v^{2l} * m; the zero polynomial when lo > hi."""
    ring = m.ring
    if not isinstance(ring, TVRing):
        raise UsageError("geometric_block needs a torus ring")
    total = ring.zero()
    for l in range(lo, hi + 1):
        total = total + m * ring.v(2 * l)
    return total
