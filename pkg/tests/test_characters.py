"""Tests for tangent characters and localization weights.

The closed multiplicity formulas are validated against the independent
sheaf-Hom chain oracle across a grid of ranks and degrees.
"""

import itertools

import pytest

from qtoda.characters import (
    char_dimension,
    corr_tangent_char,
    corr_tangent_char_oracle,
    det_weight,
    line_weight,
    modification_weight,
    structure_sheaf_coeffs,
    sym_inverse,
    tangent_char,
    tangent_char_oracle,
)
from qtoda.fixed_points import FixedPoint, enumerate_points, raise_moves
from qtoda.symbolic import DegeneracyError, EvalPoint, RatFunc, eq_exact, tv_ring


def grid(max_n, max_total):
    for n in range(2, max_n + 1):
        ring = tv_ring(n)
        for degree in itertools.product(range(max_total + 1), repeat=n - 1):
            if sum(degree) > max_total:
                continue
            yield n, ring, degree


class TestTangentChar:
    @pytest.mark.parametrize("n,ring,degree", list(grid(4, 4)),
                             ids=lambda x: str(x))
    def test_closed_form_matches_oracle(self, n, ring, degree):
        for p in enumerate_points(n, degree):
            assert tangent_char(ring, p) == tangent_char_oracle(ring, p)

    @pytest.mark.parametrize("n,ring,degree", list(grid(4, 3)),
                             ids=lambda x: str(x))
    def test_dimension(self, n, ring, degree):
        # the moduli space is smooth of dimension 2 * (total degree)
        for p in enumerate_points(n, degree):
            assert char_dimension(tangent_char(ring, p)) == 2 * sum(degree)

    def test_isolated_and_multiplicity_positive(self):
        ring = tv_ring(3)
        for p in enumerate_points(3, (2, 3)):
            chi = tangent_char(ring, p)
            for exps, mult in chi.sorted_terms():
                assert mult > 0
                assert any(e != 0 for e in exps)

    def test_rank_two_by_hand(self):
        # single row (d): weights v^{2l} and t2^2 t1^{-2} v^{2l} for l = 1..d
        ring = tv_ring(2)
        d = 3
        p = FixedPoint(2, ((d,),))
        chi = tangent_char(ring, p)
        expected = ring.zero()
        for l in range(1, d + 1):
            expected = expected + ring.v(2 * l)
            expected = expected + ring.t_monomial({2: 2, 1: -2}, v_power=2 * l)
        assert chi == expected


class TestCorrespondenceChar:
    @pytest.mark.parametrize("n,ring,degree", list(grid(4, 3)),
                             ids=lambda x: str(x))
    def test_closed_form_matches_oracle(self, n, ring, degree):
        for p in enumerate_points(n, degree):
            for i in range(1, n):
                for _, j in raise_moves(p, i):
                    assert corr_tangent_char(ring, p, i, j) == \
                        corr_tangent_char_oracle(ring, p, i, j)

    @pytest.mark.parametrize("n,ring,degree", list(grid(4, 3)),
                             ids=lambda x: str(x))
    def test_dimension(self, n, ring, degree):
        # the modification correspondence is smooth of dimension 2|d| + 1
        for p in enumerate_points(n, degree):
            for i in range(1, n):
                for _, j in raise_moves(p, i):
                    chi = corr_tangent_char(ring, p, i, j)
                    assert char_dimension(chi) == 2 * sum(degree) + 1

    def test_isolated(self):
        ring = tv_ring(3)
        for p in enumerate_points(3, (1, 2)):
            for i in (1, 2):
                for _, j in raise_moves(p, i):
                    chi = corr_tangent_char(ring, p, i, j)
                    for exps, mult in chi.sorted_terms():
                        assert mult > 0
                        assert any(e != 0 for e in exps)

    def test_modification_weight(self):
        ring = tv_ring(3)
        p = FixedPoint(3, ((2,), (1, 3)))
        assert modification_weight(ring, p, 2, 1) == line_weight(ring, 1, 1)
        assert modification_weight(ring, p, 2, 2) == line_weight(ring, 2, 3)


class TestSymInverse:
    def test_simple(self):
        ring = tv_ring(2)
        chi = ring.t_monomial({1: 2}) + ring.v(2).scalar_mul(2)
        s = sym_inverse(chi)
        expected = RatFunc.from_frac(
            ring.one(),
            (ring.one() - ring.t_monomial({1: 2}))
            * (ring.one() - ring.v(2)) * (ring.one() - ring.v(2)),
        )
        assert eq_exact(s, expected)

    def test_orientations_differ_by_sign_and_monomial(self):
        ring = tv_ring(2)
        w = ring.t_monomial({2: 2, 1: -2}, v_power=1)
        a = sym_inverse(w, "A")
        b = sym_inverse(w, "B")
        # 1/(1-w^{-1}) == -w/(1-w)  =>  b == -w * a
        assert eq_exact(b, -(a.scale_poly(w)))

    def test_trivial_weight_rejected(self):
        ring = tv_ring(2)
        with pytest.raises(DegeneracyError):
            sym_inverse(ring.one() + ring.v(2))

    def test_negative_multiplicity_rejected(self):
        ring = tv_ring(2)
        with pytest.raises(DegeneracyError):
            sym_inverse(-ring.v(2))

    def test_structure_sheaf_coeffs(self):
        ring = tv_ring(2)
        pts = enumerate_points(2, (2,))
        coeffs = structure_sheaf_coeffs(ring, pts)
        assert len(coeffs) == 1
        chi = tangent_char(ring, pts[0])
        prod = RatFunc.one(ring)
        for exps, mult in chi.sorted_terms():
            for _ in range(mult):
                prod = prod * RatFunc.from_poly(ring.one() - ring.monomial(exps))
        assert eq_exact(coeffs[0] * prod, RatFunc.one(ring))


class TestDetWeight:
    def test_zero_point_is_one(self):
        ring = tv_ring(3)
        assert det_weight(ring, FixedPoint.zero(3)).is_one()

    def test_raise_cocycle(self):
        # raising entry (i, j) from a multiplies the weight by t_j^{-2} v^{2a}
        ring = tv_ring(3)
        for p in enumerate_points(3, (1, 2)):
            for i in (1, 2):
                for q, j in raise_moves(p, i):
                    a = p.entry(i, j)
                    step = ring.t_monomial({j: -2}, v_power=2 * a)
                    assert det_weight(ring, q) == det_weight(ring, p) * step

    def test_explicit_value(self):
        ring = tv_ring(2)
        p = FixedPoint(2, ((3,),))
        assert det_weight(ring, p) == ring.t_monomial({1: -6}, v_power=6)


def test_sym_inverse_nonzero_at_generic_point():
    ring = tv_ring(3)
    p = enumerate_points(3, (2, 1))[0]
    s = sym_inverse(tangent_char(ring, p))
    pt = EvalPoint.of(2, 3, 5, 7)
    assert s.eval(pt) != 0
