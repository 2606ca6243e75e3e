"""The lattice IBNC(chi) and its factorization over central cut points.

Interior central elements ``l_1 < ... < l_m`` cut the ground set into the
overlapping intervals ``[l_{i-1}, l_i]``.  Restricting a partition to these
intervals gives an order isomorphism onto a product of noncrossing lattices;
:func:`decompose` and :func:`compose` are the two directions of it.
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chi import ChiMap, enumerate_ibnc, is_ibnc
from .errors import DomainError
from .partitions import Partition, leq, restrict, meet


def c_positions(chi: ChiMap) -> tuple[int, ...]:
    """Cut points ``(l_0, l_1, ..., l_m, l_{m+1})`` with the ground endpoints as sentinels."""
    g = chi.ground
    interior = [x for x, f in zip(g[1:-1], chi.labels[1:-1]) if f == "C"]
    return (g[0], *interior, g[-1])


def intervals(chi: ChiMap) -> list[tuple[int, ...]]:
    """Ground elements of each interval ``[l_{i-1}, l_i]``."""
    cuts = c_positions(chi)
    if len(cuts) == 2 and cuts[0] == cuts[1]:
        return [chi.ground]
    return [
        tuple(x for x in chi.ground if lo <= x <= hi) for lo, hi in zip(cuts, cuts[1:])
    ]


def components(chi: ChiMap) -> list[ChiMap]:
    return [chi.restrict(iv) for iv in intervals(chi)]


def decompose(pi: Partition, chi: ChiMap) -> tuple[Partition, ...]:
    if not is_ibnc(pi, chi):
        raise DomainError(f"{pi} is not interval-bi-noncrossing for {chi}")
    return tuple(restrict(pi, iv) for iv in intervals(chi))


def compose(parts, chi: ChiMap) -> Partition:
    """Glue per-interval partitions along their shared cut points."""
    ivs = intervals(chi)
    parts = tuple(parts)
    if len(parts) != len(ivs):
        raise DomainError(f"expected {len(ivs)} parts, got {len(parts)}")
    for part, iv, sub in zip(parts, ivs, components(chi)):
        if part.ground != iv:
            raise DomainError(f"part {part} does not live on the interval {iv}")
        if not is_ibnc(part, sub):
            raise DomainError(f"part {part} is not interval-bi-noncrossing for {sub}")

    parent = {x: x for x in chi.ground}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in parts:
        for b in part.blocks:
            for x in b[1:]:
                parent[find(x)] = find(b[0])
    groups: dict[int, list[int]] = {}
    for x in chi.ground:
        groups.setdefault(find(x), []).append(x)
    pi = Partition.from_blocks(groups.values())
    if not is_ibnc(pi, chi):
        raise DomainError(f"glued partition {pi} is not interval-bi-noncrossing")
    return pi


def order_matrix(elems: list[Partition], ground) -> np.ndarray:
    """``M[i, j] = leq(elems[i], elems[j])``.

    With ``lab[j, x]`` the block number of ``x`` in ``elems[j]`` and
    ``rep[i, x]`` the least element of the block of ``x`` in ``elems[i]``,
    ``elems[i] <= elems[j]`` iff ``lab[j, x] == lab[j, rep[i, x]]`` for all x.
    """
    pos = {x: k for k, x in enumerate(ground)}
    m, n = len(elems), len(ground)
    lab = np.zeros((m, n), dtype=np.int16)
    rep = np.zeros((m, n), dtype=np.int16)
    for i, p in enumerate(elems):
        for b_no, b in enumerate(p.blocks):
            for x in b:
                lab[i, pos[x]] = b_no
                rep[i, pos[x]] = pos[b[0]]
    out = np.empty((m, m), dtype=bool)
    for i in range(m):
        out[i] = (lab[:, rep[i]] == lab).all(axis=1)
    return out


@dataclass(eq=False)
class IbncLattice:
    """IBNC(chi) enumerated, with its order matrix.

    ``mobius_memo`` is filled lazily by :mod:`ffbool.mobius`; writes go through
    ``lock``.
    """

    chi: ChiMap
    elements: list[Partition]
    leq_matrix: np.ndarray
    c_interior: tuple[int, ...]
    index: dict[Partition, int] = field(repr=False)
    mobius_memo: dict = field(default_factory=dict, repr=False)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @classmethod
    def build(cls, chi: ChiMap, elements=None) -> "IbncLattice":
        elems = list(enumerate_ibnc(chi, cap=max(chi.n, 1)) if elements is None else elements)
        mat = order_matrix(elems, chi.ground)
        return cls(
            chi=chi,
            elements=elems,
            leq_matrix=mat,
            c_interior=c_positions(chi),
            index={p: i for i, p in enumerate(elems)},
        )

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return p in self.index

    def idx(self, p: Partition) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise DomainError(f"{p} is not an element of IBNC({self.chi})") from None

    @property
    def bottom(self) -> Partition:
        return Partition.zero(self.chi.ground)

    @property
    def top(self) -> Partition:
        return Partition.one(self.chi.ground)

    def below(self, j: int) -> np.ndarray:
        return np.flatnonzero(self.leq_matrix[:, j])

    def above(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.leq_matrix[i, :])


_CACHE: dict[ChiMap, IbncLattice] = {}
_CACHE_LOCK = threading.Lock()


def _disk_path(chi: ChiMap) -> Path | None:
    root = os.environ.get("IBNC_CACHE_DIR")
    if not root or chi.ground != tuple(range(1, chi.n + 1)):
        return None
    return Path(root) / f"ibnc-{chi}.json"


def get_lattice(chi: ChiMap) -> IbncLattice:
    """Process-wide memoized lattice for ``chi``.

    Lookups are lock-free; construction happens outside the lock and the first
    inserted instance wins.  If ``IBNC_CACHE_DIR`` is set, element lists of
    face maps on ``{1..n}`` are also kept on disk.
    """
    lat = _CACHE.get(chi)
    if lat is not None:
        return lat
    elements = None
    path = _disk_path(chi)
    if path is not None and path.exists():
        elements = [Partition.parse(s) for s in json.loads(path.read_text())["elements"]]
    lat = IbncLattice.build(chi, elements)
    if path is not None and elements is None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"chi": str(chi), "elements": [str(p) for p in lat.elements]}))
    with _CACHE_LOCK:
        return _CACHE.setdefault(chi, lat)


def join_bruteforce(sigma: Partition, pi: Partition, lattice: IbncLattice) -> Partition:
    """Least upper bound by search over the element list."""
    i, j = lattice.idx(sigma), lattice.idx(pi)
    ups = np.flatnonzero(lattice.leq_matrix[i] & lattice.leq_matrix[j])
    for u in ups:
        if lattice.leq_matrix[u, ups].all():
            return lattice.elements[u]
    raise DomainError(f"no least upper bound for {sigma}, {pi}")  # unreachable in a lattice


def join(sigma: Partition, pi: Partition, lattice: IbncLattice, method: str = "components") -> Partition:
    """Join in IBNC(chi), computed per interval and glued back together."""
    lattice.idx(sigma)
    lattice.idx(pi)
    if method == "search":
        return join_bruteforce(sigma, pi, lattice)
    if method != "components":
        raise ValueError(f"unknown join method {method!r}")
    chi = lattice.chi
    parts = []
    for s, p, sub in zip(decompose(sigma, chi), decompose(pi, chi), components(chi)):
        parts.append(join_bruteforce(s, p, get_lattice(sub)))
    return compose(parts, chi)


def lattice_meet(sigma: Partition, pi: Partition, lattice: IbncLattice) -> Partition:
    lattice.idx(sigma)
    lattice.idx(pi)
    out = meet(sigma, pi)
    lattice.idx(out)
    return out


def down_interval(pi: Partition, lattice: IbncLattice) -> list[Partition]:
    """All lattice elements below ``pi``."""
    j = lattice.idx(pi)
    return [lattice.elements[i] for i in lattice.below(j)]


def interval_size_by_blocks(pi: Partition, chi: ChiMap) -> int:
    """Product over the blocks of ``pi`` of the restricted IBNC sizes."""
    out = 1
    for b in pi.blocks:
        out *= len(get_lattice(chi.restrict(b)))
    return out


def leq_in(sigma: Partition, pi: Partition, lattice: IbncLattice) -> bool:
    return bool(lattice.leq_matrix[lattice.idx(sigma), lattice.idx(pi)])


__all__ = [
    "IbncLattice",
    "c_positions",
    "intervals",
    "components",
    "decompose",
    "compose",
    "get_lattice",
    "join",
    "join_bruteforce",
    "lattice_meet",
    "down_interval",
    "interval_size_by_blocks",
    "leq",
    "leq_in",
]
