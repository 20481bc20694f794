"""Partition lattice of ``{1..k}`` with exact Moebius values and meet-matrix determinants.

Order: ``P <= Q`` iff ``Q`` refines ``P``. The bottom is the one-block
partition, the top is all singletons, and the meet of two partitions merges
blocks along the union of their equivalence relations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .errors import CapExceededError

LATTICE_K_CAP = 8
DET_K_CAP = 6


@dataclass(frozen=True, order=True)
class Partition:
    """Blocks are ascending tuples sorted by their minimum element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bs = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in bs):
            raise ValueError("blocks must be non-empty")
        flat = [x for b in bs for x in b]
        if len(flat) != len(set(flat)):
            raise ValueError("blocks overlap")
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise ValueError("blocks must cover 1..k")
        return cls(tuple(sorted(bs)))

    @classmethod
    def bottom(cls, k: int) -> "Partition":
        return cls((tuple(range(1, k + 1)),)) if k else cls(())

    @classmethod
    def top(cls, k: int) -> "Partition":
        return cls(tuple((i,) for i in range(1, k + 1)))

    @property
    def k(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def rank(self) -> int:
        return len(self.blocks) - 1

    def block_of(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        where = other.block_of()
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def leq(self, other: "Partition") -> bool:
        """Lattice order: ``self <= other`` iff ``other`` refines ``self``."""
        return other.refines(self)

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def meet(p: Partition, q: Partition) -> Partition:
    """Finest partition refined by both: components of the joint equivalence."""
    if p.k != q.k:
        raise ValueError(f"partitions of different ground sets ({p.k} vs {q.k})")
    parent = list(range(p.k + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p, q):
        for b in part.blocks:
            for x in b[1:]:
                parent[find(x)] = find(b[0])
    groups: dict[int, list[int]] = {}
    for x in range(1, p.k + 1):
        groups.setdefault(find(x), []).append(x)
    return Partition.of(groups.values())


def set_partitions(k: int) -> Iterator[Partition]:
    """All partitions of ``{1..k}`` via restricted growth strings."""
    if k == 0:
        yield Partition(())
        return

    def rec(i: int, labels: list[int], used: int):
        if i == k:
            blocks: list[list[int]] = [[] for _ in range(used)]
            for x, lab in enumerate(labels, start=1):
                blocks[lab].append(x)
            yield Partition.of(blocks)
            return
        for lab in range(used + 1):
            labels.append(lab)
            yield from rec(i + 1, labels, max(used, lab + 1))
            labels.pop()

    yield from rec(0, [], 0)


def bell(k: int) -> int:
    """Bell numbers from the Bell triangle (independent of the enumeration)."""
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def mobius_bottom(p: Partition) -> int:
    """Closed form of the Moebius value from the bottom: ``(-1)^r r!``."""
    return (-1) ** p.rank * math.factorial(p.rank)


class LatticeTable:
    """All partitions of ``{1..k}`` ordered by block count then blocks.

    Index 0 is the bottom, the last index is the top.
    """

    def __init__(self, k: int):
        if k > LATTICE_K_CAP:
            raise CapExceededError(f"partition lattices are capped at k = {LATTICE_K_CAP} (B_8 = 4140)")
        self.k = k
        self.parts = sorted(set_partitions(k), key=lambda p: (len(p.blocks), p.blocks))
        self.index = {p: i for i, p in enumerate(self.parts)}
        self._meet: dict[tuple[int, int], int] = {}
        self._leq: list[list[bool]] | None = None

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def bottom(self) -> Partition:
        return self.parts[0]

    @property
    def top(self) -> Partition:
        return self.parts[-1]

    def meet_index(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        if key not in self._meet:
            self._meet[key] = self.index[meet(self.parts[i], self.parts[j])]
        return self._meet[key]

    def mobius_bottom_values(self) -> list[int]:
        return [mobius_bottom(p) for p in self.parts]

    @property
    def leq(self) -> list[list[bool]]:
        if self._leq is None:
            self._leq = [[p.leq(q) for q in self.parts] for p in self.parts]
        return self._leq

    def below(self, j: int) -> list[int]:
        """Indices ``i`` with ``P_i <= P_j``."""
        return [i for i in range(len(self.parts)) if self.leq[i][j]]


@lru_cache(maxsize=None)
def lattice(k: int) -> LatticeTable:
    return LatticeTable(k)


def mobius_recursive(table: LatticeTable, x: int = 0) -> list[int]:
    """``mu(P_x, P_y)`` for every ``y`` from the defining recursion
    ``mu(x, x) = 1``, ``mu(x, y) = -sum_{x <= z < y} mu(x, z)``."""
    leq = table.leq
    mu = [0] * len(table)
    # ranks strictly increase along chains, and the table is rank-sorted
    for y in range(len(table)):
        if not leq[x][y]:
            continue
        if y == x:
            mu[y] = 1
            continue
        mu[y] = -sum(mu[z] for z in range(y) if leq[x][z] and leq[z][y])
    return mu


def mobius_matrix(table: LatticeTable) -> list[list[int]]:
    return [mobius_recursive(table, x) for x in range(len(table))]


def indicator_bottom(table: LatticeTable) -> list[int]:
    """``f(P) = 1`` iff ``P`` is the one-block partition."""
    return [1 if p == table.bottom else 0 for p in table.parts]


def meet_matrix(table: LatticeTable, f: Sequence[int] | None = None) -> list[list[int]]:
    """``A[i][j] = f(P_i meet P_j)``."""
    f = indicator_bottom(table) if f is None else f
    n = len(table)
    return [[f[table.meet_index(i, j)] for j in range(n)] for i in range(n)]


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free integer determinant."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[-1][-1]


def solve_exact(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve ``a x = b`` over the rationals; raises on a singular system."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [row[-1] for row in m]


def meet_matrix_det(k: int, fault: Callable[[list[list[int]]], None] | None = None) -> int:
    """Determinant of the indicator meet-matrix on the partitions of ``{1..k}``.

    ``fault`` may mutate the matrix before elimination (negative-control hook).
    """
    if k > DET_K_CAP:
        raise CapExceededError(f"meet-matrix determinants are capped at k = {DET_K_CAP}")
    a = meet_matrix(lattice(k))
    if fault is not None:
        fault(a)
    return bareiss_det(a)


def flip_last_entry(a: list[list[int]]) -> None:
    a[-1][-1] = 1 - a[-1][-1]


def product_formula(table: LatticeTable, f: Sequence[int], mu: list[list[int]] | None = None) -> int:
    """``prod_j sum_{z <= P_j} f(z) mu(z, P_j)``; the determinant of any meet-matrix equals this."""
    mu = mobius_matrix(table) if mu is None else mu
    out = 1
    for j in range(len(table)):
        out *= sum(f[z] * mu[z][j] for z in table.below(j))
    return out
