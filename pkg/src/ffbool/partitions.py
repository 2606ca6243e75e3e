"""Set partitions of finite sets of positive integers.

A :class:`Partition` is stored in canonical form: every block is a sorted
tuple and blocks are ordered by their least element.  Restrictions keep the
original element labels, so a partition may live on any finite ground set,
not only on ``{1, ..., n}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

from .errors import SizeLimitError

#: default maximum ground-set size for exhaustive enumeration (Bell(10) = 115975)
DEFAULT_CAP = 10


@dataclass(frozen=True, order=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if list(block) != sorted(block):
                raise ValueError(f"block {block} is not sorted")
            if seen.intersection(block) or len(set(block)) != len(block):
                raise ValueError("blocks are not disjoint")
            seen.update(block)
        if [b[0] for b in self.blocks] != sorted(b[0] for b in self.blocks):
            raise ValueError("blocks are not ordered by least element")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        canon = sorted(tuple(sorted(b)) for b in blocks)
        return cls(tuple(canon))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read the ``1,2|3,5,7,8|4,6`` text form."""
        text = text.strip()
        if not text:
            raise ValueError("empty partition string")
        try:
            blocks = [[int(x) for x in chunk.split(",")] for chunk in text.split("|")]
        except ValueError:
            raise ValueError(f"malformed partition string {text!r}") from None
        if any(x < 1 for b in blocks for x in b):
            raise ValueError(f"malformed partition string {text!r}")
        return cls.from_blocks(blocks)

    @classmethod
    def one(cls, ground: Iterable[int]) -> "Partition":
        g = tuple(sorted(ground))
        return cls((g,)) if g else cls(())

    @classmethod
    def zero(cls, ground: Iterable[int]) -> "Partition":
        return cls(tuple((x,) for x in sorted(ground)))

    @property
    def ground(self) -> tuple[int, ...]:
        return tuple(sorted(x for b in self.blocks for x in b))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self) -> dict[int, int]:
        """Map each element to the position of its block."""
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __str__(self):
        return "|".join(",".join(map(str, b)) for b in self.blocks)


def _check_same_ground(sigma: Partition, pi: Partition):
    if sigma.ground != pi.ground:
        raise ValueError(f"partitions live on different ground sets: {sigma} vs {pi}")


def bell_number(n: int) -> int:
    """Bell numbers via the recurrence B(n+1) = sum_k C(n,k) B(k)."""
    from math import comb

    b = [1]
    for m in range(n):
        b.append(sum(comb(m, k) * b[k] for k in range(m + 1)))
    return b[n]


def partitions_of(ground: Sequence[int], cap: int | None = None) -> list[Partition]:
    """All partitions of ``ground`` in lexicographic restricted-growth order."""
    g = tuple(sorted(ground))
    cap = DEFAULT_CAP if cap is None else cap
    if len(g) > cap:
        raise SizeLimitError("partition enumeration", len(g), cap)
    return list(_partitions_cached(g))


@lru_cache(maxsize=256)
def _partitions_cached(g: tuple[int, ...]) -> tuple[Partition, ...]:
    n = len(g)
    if n == 0:
        return (Partition(()),)
    out = []
    rgs = [0] * n

    def rec(k: int, top: int):
        if k == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for x, lab in zip(g, rgs):
                blocks[lab].append(x)
            out.append(Partition(tuple(tuple(b) for b in blocks)))
            return
        for lab in range(top + 2):
            rgs[k] = lab
            rec(k + 1, max(top, lab))

    rgs[0] = 0
    rec(1, 0)
    return tuple(out)


def enumerate_partitions(n: int, cap: int | None = None) -> list[Partition]:
    """All partitions of ``{1..n}``; there are Bell(n) of them."""
    if n < 1:
        raise ValueError("n must be positive")
    return partitions_of(range(1, n + 1), cap)


def leq(sigma: Partition, pi: Partition) -> bool:
    """Reversed refinement order: every block of sigma sits inside a block of pi."""
    _check_same_ground(sigma, pi)
    where = pi.block_of()
    return all(len({where[x] for x in b}) == 1 for b in sigma.blocks)


def meet(sigma: Partition, pi: Partition) -> Partition:
    _check_same_ground(sigma, pi)
    pieces = []
    for b in sigma.blocks:
        sb = set(b)
        for c in pi.blocks:
            common = sb.intersection(c)
            if common:
                pieces.append(common)
    return Partition.from_blocks(pieces)


def join(sigma: Partition, pi: Partition) -> Partition:
    """Join in the lattice of all partitions (connected components)."""
    _check_same_ground(sigma, pi)
    parent = {x: x for x in sigma.ground}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in sigma.blocks + pi.blocks:
        for x in b[1:]:
            parent[find(x)] = find(b[0])
    groups: dict[int, list[int]] = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return Partition.from_blocks(groups.values())


def restrict(pi: Partition, S: Iterable[int]) -> Partition:
    """Blocks ``V & S``; elements of ``S`` keep their labels."""
    s = set(S)
    if not s:
        raise ValueError("cannot restrict to the empty set")
    if not s <= set(pi.ground):
        raise ValueError(f"{sorted(s - set(pi.ground))} not in the ground set")
    return Partition.from_blocks(
        [x for x in b if x in s] for b in pi.blocks if s.intersection(b)
    )


def kernel(omega: Sequence[Hashable]) -> Partition:
    """Partition of ``{1..n}`` grouping positions with equal labels."""
    if len(omega) == 0:
        raise ValueError("kernel of an empty sequence")
    groups: dict[Hashable, list[int]] = {}
    for k, lab in enumerate(omega, start=1):
        groups.setdefault(lab, []).append(k)
    return Partition.from_blocks(groups.values())


def is_noncrossing_under(pi: Partition, order: Sequence[int]) -> bool:
    """Noncrossing test where ``order`` lists the ground set from smallest to largest.

    Scans in the given order with a stack of open blocks: revisiting a block
    that is not on top of the stack means some later-opened block is still
    open, i.e. a crossing.
    """
    if sorted(order) != list(pi.ground):
        raise ValueError(f"order {tuple(order)} is not a permutation of the ground set")
    where = pi.block_of()
    remaining = {i: len(b) for i, b in enumerate(pi.blocks)}
    stack: list[int] = []
    for x in order:
        b = where[x]
        if remaining[b] < len(pi.blocks[b]):
            if stack[-1] != b:
                return False
        else:
            stack.append(b)
        remaining[b] -= 1
        if remaining[b] == 0:
            stack.pop()
    return True
