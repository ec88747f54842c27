"""Tests for the triangular-array fixed-point combinatorics."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtoda.fixed_points import (
    FixedPoint,
    all_degrees,
    degrees_of_total,
    enumerate_points,
    kostant_count,
    lower_moves,
    point_index,
    raise_moves,
)
from qtoda.symbolic import UsageError


class TestFixedPoint:
    def test_validation(self):
        FixedPoint(3, ((2,), (1, 5)))
        with pytest.raises(UsageError):
            FixedPoint(3, ((2,), (3, 0)))  # column 1 increases downward
        with pytest.raises(UsageError):
            FixedPoint(3, ((2,), (1,)))  # wrong row length
        with pytest.raises(UsageError):
            FixedPoint(2, ((-1,),))

    def test_entry_conventions(self):
        p = FixedPoint(3, ((2,), (1, 5)))
        assert p.entry(1, 1) == 2
        assert p.entry(2, 2) == 5
        assert p.entry(0, 1) == 0
        assert p.entry(3, 2) == 0
        with pytest.raises(UsageError):
            p.entry(1, 2)

    def test_degree(self):
        p = FixedPoint(4, ((3,), (2, 4), (0, 1, 2)))
        assert p.degree == (3, 6, 3)
        assert p.total_degree() == 12

    def test_json_round_trip(self):
        p = FixedPoint(3, ((2,), (1, 5)))
        assert FixedPoint.from_json(p.to_json()) == p

    def test_zero_point(self):
        assert FixedPoint.zero(4).degree == (0, 0, 0)


degree_cases = [
    (n, d)
    for n in (2, 3, 4)
    for d in itertools.product(range(4), repeat=n - 1)
]


class TestEnumeration:
    @pytest.mark.parametrize("n,degree", degree_cases)
    def test_count_matches_root_combinations(self, n, degree):
        pts = enumerate_points(n, degree)
        assert len(pts) == kostant_count(n, degree)

    def test_small_counts_by_hand(self):
        # single row of length 1: exactly one array per degree
        assert len(enumerate_points(2, (5,))) == 1
        # n=3, degree (1,1): arrays ((1),(0,1)) and ((1),(1,0))
        pts = enumerate_points(3, (1, 1))
        assert {p.rows for p in pts} == {((1,), (0, 1)), ((1,), (1, 0))}
        # n=3, degree (0,1): column 1 capped at 0, so only ((0),(0,1))
        assert [p.rows for p in enumerate_points(3, (0, 1))] == [((0,), (0, 1))]

    def test_all_points_valid_and_distinct(self):
        pts = enumerate_points(4, (2, 3, 1))
        assert len({p.rows for p in pts}) == len(pts)
        for p in pts:
            assert p.degree == (2, 3, 1)

    def test_stable_order(self):
        a = enumerate_points(3, (2, 2))
        b = enumerate_points(3, (2, 2))
        assert [p.rows for p in a] == [p.rows for p in b]

    def test_bad_degree(self):
        with pytest.raises(UsageError):
            enumerate_points(3, (1,))
        with pytest.raises(UsageError):
            enumerate_points(2, (-1,))


class TestDegreeHelpers:
    def test_all_degrees(self):
        assert all_degrees(2, 2) == [(0,), (1,), (2,)]
        assert len(all_degrees(3, 2)) == 9

    def test_degrees_of_total(self):
        assert set(degrees_of_total(3, 2)) == {(0, 2), (1, 1), (2, 0)}


@st.composite
def fixed_point_strategy(draw):
    n = draw(st.integers(2, 4))
    degree = tuple(draw(st.integers(0, 3)) for _ in range(n - 1))
    pts = enumerate_points(n, degree)
    return pts[draw(st.integers(0, len(pts) - 1))]


class TestMoves:
    @given(fixed_point_strategy())
    @settings(max_examples=60, deadline=None)
    def test_moves_change_one_row_degree(self, p):
        for i in range(1, p.n):
            for q, j in lower_moves(p, i):
                assert q.degree == tuple(
                    d - (1 if k == i else 0) for k, d in enumerate(p.degree, 1)
                )
                assert q.entry(i, j) == p.entry(i, j) - 1
            for q, j in raise_moves(p, i):
                assert q.degree == tuple(
                    d + (1 if k == i else 0) for k, d in enumerate(p.degree, 1)
                )
                assert q.entry(i, j) == p.entry(i, j) + 1

    @given(fixed_point_strategy())
    @settings(max_examples=60, deadline=None)
    def test_moves_are_adjoint_pairs(self, p):
        # q is reached from p by lowering row i iff p is reached from q by raising
        for i in range(1, p.n):
            for q, j in lower_moves(p, i):
                assert (p, j) in [(r, c) for r, c in raise_moves(q, i)]
            for q, j in raise_moves(p, i):
                assert (p, j) in [(r, c) for r, c in lower_moves(q, i)]

    def test_moves_partition_target_degree(self):
        # every point of degree d+e_i is reached by exactly one raise from degree d
        n, degree, i = 3, (1, 2), 1
        target = tuple(d + (1 if k == i else 0) for k, d in enumerate(degree, 1))
        reached = []
        for p in enumerate_points(n, degree):
            reached.extend(q.rows for q, _ in raise_moves(p, i))
        target_rows = {p.rows for p in enumerate_points(n, target)}
        assert set(reached) <= target_rows

    def test_zero_point_has_no_lowers(self):
        p = FixedPoint.zero(3)
        assert lower_moves(p, 1) == [] and lower_moves(p, 2) == []
        assert len(raise_moves(p, 1)) == 1 and len(raise_moves(p, 2)) == 1


def test_point_index():
    pts = enumerate_points(3, (1, 1))
    idx = point_index(pts)
    for k, p in enumerate(pts):
        assert idx[p.rows] == k
