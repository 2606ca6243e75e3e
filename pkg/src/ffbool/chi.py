"""Face labelings and interval-bi-noncrossing partitions.

A :class:`ChiMap` assigns to every element of a finite ground set one of the
faces ``L`` (left), ``R`` (right) or ``C`` (central).  It induces the total
order in which L/C elements come first in increasing order, followed by the
R elements in decreasing order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .partitions import Partition, is_noncrossing_under, partitions_of

FACES = ("L", "R", "C")


@dataclass(frozen=True)
class ChiMap:
    labels: tuple[str, ...]
    ground: tuple[int, ...] = ()

    def __post_init__(self):
        labels = tuple(str(x).upper() for x in self.labels)
        if not labels:
            raise ValueError("a face map needs at least one label")
        bad = [x for x in labels if x not in FACES]
        if bad:
            raise ValueError(f"invalid face labels {bad}; expected l, r or c")
        object.__setattr__(self, "labels", labels)
        ground = tuple(self.ground) or tuple(range(1, len(labels) + 1))
        if len(ground) != len(labels):
            raise ValueError("ground set and labels differ in length")
        if list(ground) != sorted(set(ground)):
            raise ValueError("ground set must be strictly increasing")
        object.__setattr__(self, "ground", ground)

    @classmethod
    def parse(cls, text: str) -> "ChiMap":
        """Read the ``llrclcrl`` text form."""
        return cls(tuple(text.strip()))

    @property
    def n(self) -> int:
        return len(self.labels)

    def label(self, x: int) -> str:
        return self.labels[self.ground.index(x)]

    def as_dict(self) -> dict[int, str]:
        return dict(zip(self.ground, self.labels))

    def restrict(self, S: Iterable[int]) -> "ChiMap":
        lab = self.as_dict()
        s = sorted(set(S))
        missing = [x for x in s if x not in lab]
        if missing or not s:
            raise ValueError(f"cannot restrict to {s}")
        return ChiMap(tuple(lab[x] for x in s), tuple(s))

    def normalized(self) -> "ChiMap":
        """Same labels on ``{1..n}``."""
        return ChiMap(self.labels)

    def __str__(self):
        return "".join(self.labels).lower()


def chi_order(chi: ChiMap) -> tuple[int, ...]:
    """Ground elements listed from smallest to largest in the face order."""
    first = [x for x, f in zip(chi.ground, chi.labels) if f != "R"]
    last = [x for x, f in zip(chi.ground, chi.labels) if f == "R"]
    return tuple(first + last[::-1])


def _check(pi: Partition, chi: ChiMap):
    if pi.ground != chi.ground:
        raise ValueError(f"partition {pi} and face map {chi} live on different sets")


def is_chi_noncrossing(pi: Partition, chi: ChiMap) -> bool:
    _check(pi, chi)
    return is_noncrossing_under(pi, chi_order(chi))


def is_chi_interval(pi: Partition, chi: ChiMap) -> bool:
    """Every block straddling a central element (in the natural order) contains it."""
    _check(pi, chi)
    central = [x for x, f in zip(chi.ground, chi.labels) if f == "C"]
    for b in pi.blocks:
        lo, hi = b[0], b[-1]
        for j in central:
            if lo < j < hi and j not in b:
                return False
    return True


def is_ibnc(pi: Partition, chi: ChiMap) -> bool:
    return is_chi_noncrossing(pi, chi) and is_chi_interval(pi, chi)


def enumerate_ibnc(chi: ChiMap, cap: int | None = None) -> list[Partition]:
    """IBNC(chi) by filtering all partitions, in canonical enumeration order."""
    partitions_of(chi.ground, cap)  # cap check only
    return list(_ibnc_cached(chi))


@lru_cache(maxsize=4096)
def _ibnc_cached(chi: ChiMap) -> tuple[Partition, ...]:
    return tuple(p for p in partitions_of(chi.ground, len(chi.ground)) if is_ibnc(p, chi))


def enumerate_chi_noncrossing(chi: ChiMap, cap: int | None = None) -> list[Partition]:
    return [p for p in partitions_of(chi.ground, cap) if is_chi_noncrossing(p, chi)]


def enumerate_bnc(chibar: ChiMap, cap: int | None = None) -> list[Partition]:
    """Bi-noncrossing partitions: the case of a face map without central labels."""
    if "C" in chibar.labels:
        raise ValueError("bi-noncrossing partitions need a map into {l, r}")
    return enumerate_ibnc(chibar, cap)


def render_diagram(chi: ChiMap, pi: Partition | None = None) -> str:
    """Plain-text picture of a face map, optionally annotated with a partition.

    Rows run top to bottom in natural order.  L and C elements sit in the left
    column, R elements in the right one; central rows are drawn as ``o`` on a
    dashed rule, the others as ``*``.  With a partition, each node carries its
    block number (blocks numbered from 1 in canonical order).
    """
    if pi is not None:
        _check(pi, chi)
        where = pi.block_of()
    w = max(len(str(x)) for x in chi.ground) + 2
    lines = []
    for x, f in zip(chi.ground, chi.labels):
        left = "" if f == "R" else f"{x} {'o' if f == 'C' else '*'}"
        mid = "- - - - " if f == "C" else " " * 8
        right = f"* {x}" if f == "R" else ("-" * w if f == "C" else "")
        row = f"{left:>{w}}{mid}{right:<{w}}"
        if pi is not None:
            row += f"  [{where[x] + 1}]"
        if f == "C":
            row += "  central"
        lines.append(row.rstrip())
    return "\n".join(lines)
