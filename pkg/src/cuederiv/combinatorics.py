"""Partitions, standard Young tableaux counts, and merged-derivative weights.

Everything here is exact integer combinatorics.  Partitions are stored dense
(nonzero parts only) and read with zero padding, since every formula downstream
indexes parts past the length of the partition.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial


class Partition:
    """A weakly decreasing sequence of positive integers.

    Reading ``parts[i]`` past the number of stored parts returns 0.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts if p != 0)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts {parts} are not weakly decreasing")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts {parts} contain a negative entry")
        self.parts = parts

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """The i-th part (0-based), 0 when i >= length."""
        if i < 0:
            raise IndexError("negative part index")
        return self.parts[i] if i < len(self.parts) else 0

    def padded(self, m: int) -> tuple[int, ...]:
        """Parts padded with zeros to length m; requires m >= length."""
        if m < len(self.parts):
            raise ValueError(f"cannot pad {self} to length {m} < {len(self.parts)}")
        return self.parts + (0,) * (m - len(self.parts))

    def hook_lengths(self):
        """Hook length of every box, row by row."""
        cols = conjugate_parts(self.parts)
        return [
            [self.parts[i] - j + cols[j] - i - 1 for j in range(self.parts[i])]
            for i in range(len(self.parts))
        ]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.part(i)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"


class DescendingComposition:
    """A strictly decreasing tuple q_1 > ... > q_n >= 0 summing to n(n+1)/2.

    These index the terms of the merged multi-derivative expansion; the
    companion weight is :func:`omega_weight`.
    """

    __slots__ = ("q",)

    def __init__(self, q):
        q = tuple(int(v) for v in q)
        n = len(q)
        if n < 1:
            raise ValueError("composition must be nonempty")
        if any(a <= b for a, b in zip(q, q[1:])) or q[-1] < 0:
            raise ValueError(f"{q} is not strictly decreasing and non-negative")
        if sum(q) != n * (n + 1) // 2:
            raise ValueError(f"{q} does not sum to n(n+1)/2 = {n*(n+1)//2}")
        self.q = q

    @property
    def order(self) -> int:
        return len(self.q)

    def to_partition(self) -> Partition:
        """The partition lambda with lambda_j = q_j - n + j (1-based j)."""
        n = len(self.q)
        return Partition(self.q[j] - n + (j + 1) for j in range(n))

    @classmethod
    def from_partition(cls, lam: Partition, n: int) -> "DescendingComposition":
        padded = lam.padded(n)
        return cls(padded[j] + n - (j + 1) for j in range(n))

    def __eq__(self, other):
        return isinstance(other, DescendingComposition) and self.q == other.q

    def __hash__(self):
        return hash(self.q)

    def __repr__(self):
        return f"DescendingComposition{self.q}"


def enumerate_partitions(m: int) -> list[Partition]:
    """All partitions of weight m, in descending lexicographic order.

    m = 0 yields the single empty partition.
    """
    if m < 0:
        raise ValueError("weight must be non-negative")
    result: list[Partition] = []

    def descend(remaining, cap, prefix):
        if remaining == 0:
            result.append(Partition(prefix))
            return
        for first in range(min(cap, remaining), 0, -1):
            descend(remaining - first, first, prefix + (first,))

    descend(m, m if m else 1, ())
    return result


@lru_cache(maxsize=None)
def partition_count(m: int) -> int:
    """p(m) via the Euler pentagonal recurrence."""
    if m < 0:
        return 0
    if m == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > m and g2 > m:
            break
        sign = -1 if k % 2 == 0 else 1
        if g1 <= m:
            total += sign * partition_count(m - g1)
        if g2 <= m:
            total += sign * partition_count(m - g2)
        k += 1
    return total


def syt_count(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam (hook length formula)."""
    if lam.weight == 0:
        return 1
    hook_product = 1
    for row in lam.hook_lengths():
        for h in row:
            hook_product *= h
    numerator = factorial(lam.weight)
    count, remainder = divmod(numerator, hook_product)
    if remainder:
        raise ArithmeticError(
            f"hook product {hook_product} does not divide {lam.weight}! for {lam}"
        )
    return count


def conjugate_parts(parts) -> tuple[int, ...]:
    """Column lengths of the Young diagram with the given row lengths."""
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > j) for j in range(parts[0]))


def enumerate_standard_tableaux(lam: Partition) -> list[tuple[tuple[int, ...], ...]]:
    """All standard fillings of lam by backtracking; brute-force oracle for syt_count."""
    m = lam.weight
    if m == 0:
        return [()]
    shape = lam.parts
    rows = len(shape)
    fillings: list[tuple[tuple[int, ...], ...]] = []
    grid = [[0] * shape[i] for i in range(rows)]
    fill_len = [0] * rows

    def place(value):
        if value > m:
            fillings.append(tuple(tuple(row) for row in grid))
            return
        for i in range(rows):
            j = fill_len[i]
            if j >= shape[i]:
                continue
            if i > 0 and fill_len[i - 1] <= j:
                continue
            grid[i][j] = value
            fill_len[i] += 1
            place(value + 1)
            fill_len[i] -= 1

    place(1)
    return fillings


@lru_cache(maxsize=None)
def _omega(q: tuple[int, ...]) -> int:
    n = len(q)
    if n == 1:
        return 1
    if q == tuple(range(n, 0, -1)):
        return 1
    # q[-1] == 0 here: remove one unit from each entry and a second unit from
    # position j wherever the strict descent allows it.
    total = 0
    for j in range(n - 1):
        gap = q[j] - (q[j + 1] if j + 1 < n else 0)
        if gap >= 2:
            reduced = tuple(
                q[i] - 2 if i == j else q[i] - 1 for i in range(n - 1)
            )
            total += _omega(reduced)
    return total


def omega_weight(q: DescendingComposition) -> int:
    """Weight of the composition in the merged-derivative expansion.

    Computed by the corner-sum recursion, independently of syt_count, so the
    identity omega(q) == f_lambda stays a genuine cross-check.
    """
    return _omega(q.q)


def partition_factorial(lam: Partition, m: int):
    """Product of (lambda_i + m - i)! over i = 1..m with zero padding."""
    if m < lam.length:
        raise ValueError(f"m = {m} is smaller than the length of {lam}")
    padded = lam.padded(m)
    product = 1
    for i, part in enumerate(padded):
        product *= factorial(part + m - (i + 1))
    return product
