"""Incidence algebra of an IBNC lattice.

Incidence functions are stored as dense square matrices indexed by lattice
elements, with zeros off the order relation.  Convolution is then a matrix
product.  Matrices are ``int64`` while all values are integers and switch to
``object`` arrays of :class:`~fractions.Fraction` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .chi import ChiMap
from .errors import DomainError
from .lattice import IbncLattice, components, decompose, get_lattice, intervals
from .partitions import Partition, restrict

_INT_LIMIT = 2**62


def _exact(mat: np.ndarray) -> np.ndarray:
    """Prefer an int64 matrix when every entry is an integer of safe size."""
    if mat.dtype != object:
        return mat
    flat = mat.ravel()
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in flat):
        ints = [int(v) for v in flat]
        if all(abs(v) < _INT_LIMIT for v in ints):
            return np.array(ints, dtype=np.int64).reshape(mat.shape)
    return mat


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        bound = np.abs(a).max(initial=0) * np.abs(b).max(initial=0) * a.shape[1]
        if bound < _INT_LIMIT:
            return a @ b
    out = a.astype(object) @ b.astype(object)
    return _exact(out)


@dataclass(eq=False)
class IncidenceFunction:
    lattice: IbncLattice
    values: np.ndarray

    def __post_init__(self):
        m = len(self.lattice)
        if self.values.shape != (m, m):
            raise ValueError("incidence matrix has the wrong shape")
        if (self.values[~self.lattice.leq_matrix] != 0).any():
            raise ValueError("incidence function is nonzero off the order relation")

    def __call__(self, sigma: Partition, pi: Partition) -> Fraction:
        i, j = self.lattice.idx(sigma), self.lattice.idx(pi)
        if not self.lattice.leq_matrix[i, j]:
            raise DomainError(f"{sigma} is not <= {pi}")
        return Fraction(self.values[i, j])

    def at(self, i: int, j: int) -> Fraction:
        return Fraction(self.values[i, j])

    def items(self) -> Iterable[tuple[Partition, Partition, Fraction]]:
        els = self.lattice.elements
        for i, j in zip(*np.nonzero(self.lattice.leq_matrix)):
            yield els[i], els[j], Fraction(self.values[i, j])

    def __eq__(self, other):
        if not isinstance(other, IncidenceFunction):
            return NotImplemented
        return self.lattice is other.lattice and bool((self.values == other.values).all())

    __hash__ = None


def delta(lattice: IbncLattice) -> IncidenceFunction:
    return IncidenceFunction(lattice, np.eye(len(lattice), dtype=np.int64))


def zeta(lattice: IbncLattice) -> IncidenceFunction:
    return IncidenceFunction(lattice, lattice.leq_matrix.astype(np.int64))


def convolve(f: IncidenceFunction, g: IncidenceFunction) -> IncidenceFunction:
    """``(f*g)(a, b) = sum over a <= c <= b of f(a, c) g(c, b)``."""
    if f.lattice is not g.lattice:
        raise ValueError("incidence functions live on different lattices")
    return IncidenceFunction(f.lattice, _matmul(f.values, g.values))


def linear_extension(lattice: IbncLattice) -> list[int]:
    """Element indices ordered finest first; refines the partial order."""
    return sorted(range(len(lattice)), key=lambda i: (-len(lattice.elements[i]), i))


def mobius_bruteforce(lattice: IbncLattice) -> IncidenceFunction:
    """Mobius function by the interval recursion, memoized on the lattice.

    ``mu(a, a) = 1`` and ``mu(a, b) = -sum_{a <= c < b} mu(a, c)``.
    """
    memo = lattice.mobius_memo.get("matrix")
    if memo is not None:
        return IncidenceFunction(lattice, memo)
    m = len(lattice)
    Z = lattice.leq_matrix
    order = linear_extension(lattice)
    mu = np.zeros((m, m), dtype=np.int64)
    # one column at a time: mu[a, c] vanishes unless a <= c, so the column sum
    # over c < b is automatically restricted to a <= c < b
    for b in order:
        strictly_below = Z[:, b].copy()
        strictly_below[b] = False
        mu[:, b] = -mu[:, strictly_below].sum(axis=1)
        mu[b, b] = 1
    with lattice.lock:
        lattice.mobius_memo.setdefault("matrix", mu)
    return IncidenceFunction(lattice, lattice.mobius_memo["matrix"])


def mobius_value(lattice: IbncLattice, sigma: Partition, pi: Partition) -> int:
    return int(mobius_bruteforce(lattice)(sigma, pi))


def mobius_to_top(sigma: Partition | None, chi: ChiMap | None) -> int:
    """``mu(sigma, 1)`` in IBNC(chi); the empty set contributes 1."""
    if sigma is None or chi is None or sigma.n == 0:
        return 1
    lat = get_lattice(chi)
    return mobius_value(lat, sigma, lat.top)


def _check_pair(sigma: Partition, pi: Partition, lattice: IbncLattice):
    i, j = lattice.idx(sigma), lattice.idx(pi)
    if not lattice.leq_matrix[i, j]:
        raise DomainError(f"{sigma} is not <= {pi}")


def mobius_product(sigma: Partition, pi: Partition, lattice: IbncLattice) -> int:
    """``mu(sigma, pi)`` as a product over the blocks V of pi of ``mu(sigma|V, 1_V)``."""
    _check_pair(sigma, pi, lattice)
    out = 1
    for V in pi.blocks:
        out *= mobius_to_top(restrict(sigma, V), lattice.chi.restrict(V))
    return out


def mobius_components(sigma: Partition, pi: Partition, lattice: IbncLattice) -> int:
    """``mu(sigma, pi)`` as a product over the noncrossing interval components."""
    _check_pair(sigma, pi, lattice)
    chi = lattice.chi
    out = 1
    for s, p, sub in zip(decompose(sigma, chi), decompose(pi, chi), components(chi)):
        out *= mobius_value(get_lattice(sub), s, p)
    return out


def mobius_blocks_by_components(sigma: Partition, pi: Partition, lattice: IbncLattice) -> int:
    """Double product over blocks of pi and interval pieces of each block.

    A block may miss an interval entirely; the empty piece contributes 1.
    """
    _check_pair(sigma, pi, lattice)
    chi = lattice.chi
    out = 1
    for V in pi.blocks:
        for iv in intervals(chi):
            piece = sorted(set(V).intersection(iv))
            if not piece:
                out *= mobius_to_top(None, None)
                continue
            out *= mobius_to_top(restrict(sigma, piece), chi.restrict(piece))
    return out
