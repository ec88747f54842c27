"""Torus fixed points of quasiflag spaces as triangular degree arrays.

A fixed point for rank parameter n and degree vector (d_1,..,d_{n-1}) is a
triangular array of nonnegative integers: row i (1-based, i = 1..n-1) has
entries (a_{i1},..,a_{ii}), row i sums to d_i, and each column is weakly
decreasing downwards (a_{ij} >= a_{i+1,j}).  Row i records the twist of the
j-th coordinate summand inside the i-th member of the flag of subsheaves.

The number of such arrays equals the number of ways to write the degree
vector as a sum of positive roots of sl_n (interval vectors); this module
provides both counts so the bijection can be tested.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from .symbolic import UsageError

DegreeVector = Tuple[int, ...]
Rows = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class FixedPoint:
    """A triangular array indexing one torus fixed point."""

    n: int
    rows: Rows

    def __post_init__(self) -> None:
        if self.n < 2:
            raise UsageError("rank parameter must be at least 2")
        if len(self.rows) != self.n - 1:
            raise UsageError(f"expected {self.n - 1} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows, start=1):
            if len(row) != i:
                raise UsageError(f"row {i} must have {i} entries")
            for a in row:
                if a < 0:
                    raise UsageError("entries must be nonnegative")
        for i in range(1, self.n - 1):
            upper, lower = self.rows[i - 1], self.rows[i]
            for j in range(i):
                if upper[j] < lower[j]:
                    raise UsageError(
                        f"column {j + 1} increases from row {i} to row {i + 1}"
                    )

    def entry(self, i: int, j: int) -> int:
        """Entry a_{ij}, with boundary conventions a_{0,*} = a_{n,*} = 0."""
        if i == 0 or i >= self.n:
            return 0
        if not 1 <= j <= i:
            raise UsageError(f"column {j} out of range for row {i}")
        return self.rows[i - 1][j - 1]

    @property
    def degree(self) -> DegreeVector:
        return tuple(sum(row) for row in self.rows)

    def total_degree(self) -> int:
        return sum(self.degree)

    def replace(self, i: int, j: int, value: int) -> "FixedPoint":
        """A copy with entry (i, j) set to value."""
        rows = [list(r) for r in self.rows]
        rows[i - 1][j - 1] = value
        return FixedPoint(self.n, tuple(tuple(r) for r in rows))

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @staticmethod
    def from_json(data: dict) -> "FixedPoint":
        return FixedPoint(int(data["n"]), tuple(tuple(int(a) for a in r)
                                                for r in data["rows"]))

    @staticmethod
    def zero(n: int) -> "FixedPoint":
        """The unique fixed point of degree zero."""
        return FixedPoint(n, tuple((0,) * i for i in range(1, n)))

    def __repr__(self) -> str:
        body = "; ".join(",".join(map(str, r)) for r in self.rows)
        return f"FixedPoint(n={self.n}, [{body}])"


def _row_choices(length: int, total: int,
                 caps: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Compositions of `total` into `length` parts with parts 1..length-1 capped.

    The final part is uncapped (a new coordinate line enters the flag there).
    """
    if length == 1:
        yield (total,)
        return

    def rec(j: int, remaining: int, acc: List[int]) -> Iterator[Tuple[int, ...]]:
        if j == length - 1:
            acc.append(remaining)
            yield tuple(acc)
            acc.pop()
            return
        for a in range(min(remaining, caps[j]) + 1):
            acc.append(a)
            yield from rec(j + 1, remaining - a, acc)
            acc.pop()

    yield from rec(0, total, [])


def enumerate_points(n: int, degree: Sequence[int]) -> List[FixedPoint]:
    """All fixed points for the given rank and degree vector, in a stable order."""
    degree = tuple(int(d) for d in degree)
    if len(degree) != n - 1:
        raise UsageError(f"degree vector must have {n - 1} components")
    if any(d < 0 for d in degree):
        raise UsageError("degree components must be nonnegative")

    points: List[FixedPoint] = []

    def rec(i: int, acc: List[Tuple[int, ...]]) -> None:
        if i == n:
            points.append(FixedPoint(n, tuple(acc)))
            return
        caps = acc[-1] if acc else ()
        for row in _row_choices(i, degree[i - 1], caps):
            acc.append(row)
            rec(i + 1, acc)
            acc.pop()

    rec(1, [])
    return points


def _positive_interval_vectors(n: int) -> List[DegreeVector]:
    """Indicator vectors of intervals [j, i] inside 1..n-1 (positive roots)."""
    out = []
    for j in range(1, n):
        for i in range(j, n):
            out.append(tuple(1 if j <= k <= i else 0 for k in range(1, n)))
    return out


def kostant_count(n: int, degree: Sequence[int]) -> int:
    """Number of ways to write the degree vector as an N-combination of
    interval vectors.  Independent counting oracle for enumerate_points."""
    degree = tuple(int(d) for d in degree)
    if len(degree) != n - 1:
        raise UsageError(f"degree vector must have {n - 1} components")
    roots = _positive_interval_vectors(n)

    @lru_cache(maxsize=None)
    def count(idx: int, rest: DegreeVector) -> int:
        if all(r == 0 for r in rest):
            return 1
        if idx == len(roots):
            return 0
        root = roots[idx]
        total = 0
        cur = rest
        while all(c >= 0 for c in cur):
            total += count(idx + 1, cur)
            cur = tuple(c - r for c, r in zip(cur, root))
        return total

    return count(0, degree)


def all_degrees(n: int, box: int) -> List[DegreeVector]:
    """All degree vectors with each component in 0..box, in lexicographic order."""
    return [tuple(d) for d in itertools.product(range(box + 1), repeat=n - 1)]


def degrees_of_total(n: int, total: int) -> List[DegreeVector]:
    """All degree vectors with component sum equal to `total`."""
    out = []
    for d in itertools.product(range(total + 1), repeat=n - 1):
        if sum(d) == total:
            out.append(tuple(d))
    return out


# ---------------------------------------------------------------------------
# Elementary moves (simple raising / lowering of one row's total degree)
# ---------------------------------------------------------------------------

def lower_moves(p: FixedPoint, i: int) -> List[Tuple[FixedPoint, int]]:
    """Fixed points reachable by decrementing one entry of row i.

    Decrementing column j is allowed when a_{ij} > a_{i+1,j} (with the
    convention that row n is zero), which keeps columns weakly decreasing
    and entries nonnegative.  Returns (new point, column) pairs; the new
    point has row-i degree lowered by one.
    """
    if not 1 <= i <= p.n - 1:
        raise UsageError(f"row index {i} out of range")
    out = []
    for j in range(1, i + 1):
        below = p.entry(i + 1, j) if i + 1 <= p.n - 1 else 0
        if p.entry(i, j) > below:
            out.append((p.replace(i, j, p.entry(i, j) - 1), j))
    return out


def raise_moves(p: FixedPoint, i: int) -> List[Tuple[FixedPoint, int]]:
    """Fixed points reachable by incrementing one entry of row i.

    Incrementing column j is allowed when j == i (the diagonal entry has no
    cap) or a_{i-1,j} > a_{ij}.  Returns (new point, column) pairs; the new
    point has row-i degree raised by one.
    """
    if not 1 <= i <= p.n - 1:
        raise UsageError(f"row index {i} out of range")
    out = []
    for j in range(1, i + 1):
        if j == i or p.entry(i - 1, j) > p.entry(i, j):
            out.append((p.replace(i, j, p.entry(i, j) + 1), j))
    return out


def point_index(points: Sequence[FixedPoint]) -> Dict[Rows, int]:
    """Map from row data to position, for vector bookkeeping."""
    return {p.rows: k for k, p in enumerate(points)}
