"""Exact truncated full Fock space over ``Q^d``.

Basis vectors are tensor words over ``{1..d}`` of length at most ``D``; the
empty word is the vacuum.  Operators are sparse column-major dictionaries
with integer or :class:`~fractions.Fraction` entries.  Every operator carries
``degree_raise``, an upper bound on how much it can raise tensor degree; a
product of operators applied to the vacuum is exact as long as the raises
add up to at most ``D``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import SizeLimitError, TruncationError
from .moments import Letter, MomentFunctional

#: default cap on the number of basis vectors
BASIS_CAP = 200_000


def _num(x):
    """Keep integers as ints; everything else becomes a Fraction."""
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else q


class FockBasis:
    """Graded-lexicographic basis of the truncated Fock space; index 0 is the vacuum."""

    def __init__(self, d: int, D: int, cap: int = BASIS_CAP):
        if d < 1 or D < 1:
            raise ValueError("need d >= 1 and D >= 1")
        size = sum(d**k for k in range(D + 1))
        if size > cap:
            raise SizeLimitError("Fock basis", size, cap)
        self.d, self.D = d, D
        self.words: list[tuple[int, ...]] = [
            w for k in range(D + 1) for w in product(range(1, d + 1), repeat=k)
        ]
        self.index = {w: i for i, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)

    def __repr__(self):
        return f"FockBasis(d={self.d}, D={self.D})"

    def vector(self, *words: tuple[int, ...]) -> dict[int, int]:
        """Sum of basis vectors, e.g. ``vector((1, 2))`` is ``e1 (x) e2``."""
        out: dict[int, int] = {}
        for w in words:
            i = self.index[tuple(w)]
            out[i] = out.get(i, 0) + 1
        return out

    def degree(self, i: int) -> int:
        return len(self.words[i])


def _check_h(h, basis: FockBasis) -> list:
    h = [_num(x) for x in h]
    if len(h) != basis.d:
        raise ValueError(f"vector of length {len(h)} on a basis with d={basis.d}")
    return h


@dataclass(eq=False)
class FockOperator:
    basis: FockBasis
    cols: dict[int, dict[int, object]] = field(default_factory=dict)
    degree_raise: int = 0

    def apply(self, vec: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        cols = self.cols
        for j, x in vec.items():
            col = cols.get(j)
            if col:
                for i, a in col.items():
                    v = out.get(i, 0) + a * x
                    if v:
                        out[i] = v
                    else:
                        out.pop(i, None)
        return out

    def _same(self, other: "FockOperator"):
        if other.basis is not self.basis:
            raise ValueError("operators on different Fock bases")

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._same(other)
        cols = {}
        for j, col in other.cols.items():
            v = self.apply(col)
            if v:
                cols[j] = v
        return FockOperator(self.basis, cols, self.degree_raise + other.degree_raise)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._same(other)
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            tgt = cols.setdefault(j, {})
            for i, a in col.items():
                v = tgt.get(i, 0) + a
                if v:
                    tgt[i] = v
                else:
                    tgt.pop(i, None)
        cols = {j: c for j, c in cols.items() if c}
        return FockOperator(self.basis, cols, max(self.degree_raise, other.degree_raise))

    def __mul__(self, s) -> "FockOperator":
        s = _num(s)
        if not s:
            return FockOperator(self.basis, {}, 0)
        cols = {j: {i: a * s for i, a in c.items()} for j, c in self.cols.items()}
        return FockOperator(self.basis, cols, self.degree_raise)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def adjoint(self) -> "FockOperator":
        """Transpose; the inner product makes tensor words orthonormal and entries are real."""
        cols: dict[int, dict[int, object]] = {}
        for j, col in self.cols.items():
            for i, a in col.items():
                cols.setdefault(i, {})[j] = a
        rise = max(
            (self.basis.degree(i) - self.basis.degree(j) for j, c in cols.items() for i in c),
            default=0,
        )
        return FockOperator(self.basis, cols, max(rise, 0))

    def entry(self, row: int, col: int):
        return self.cols.get(col, {}).get(row, 0)

    def is_zero(self, max_degree: int | None = None) -> bool:
        """True if every column (of degree at most ``max_degree``) vanishes."""
        for j, c in self.cols.items():
            if c and (max_degree is None or self.basis.degree(j) <= max_degree):
                return False
        return True

    def triples(self) -> list[tuple[int, int, object]]:
        return sorted((i, j, a) for j, c in self.cols.items() for i, a in c.items())

    def to_dense(self) -> np.ndarray:
        m = len(self.basis)
        out = np.zeros((m, m), dtype=object)
        for i, j, a in self.triples():
            out[i, j] = Fraction(a)
        return out

    def to_csv(self) -> str:
        rows = ["row,col,value"]
        for i, j, a in self.triples():
            q = Fraction(a)
            rows.append(f"{i},{j},{q.numerator if q.denominator == 1 else q}")
        return "\n".join(rows) + "\n"


def identity(basis: FockBasis) -> FockOperator:
    return FockOperator(basis, {i: {i: 1} for i in range(len(basis))})


def _unit(i: int, d: int) -> list[int]:
    if not 1 <= i <= d:
        raise ValueError(f"index {i} out of range 1..{d}")
    return [1 if k == i else 0 for k in range(1, d + 1)]


def left_creation(h, basis: FockBasis) -> FockOperator:
    """``l(h) xi = h`` and ``l(h) w = h (x) w``; degree-D inputs go to zero."""
    h = _check_h(h, basis)
    cols = {}
    for j, w in enumerate(basis.words):
        if len(w) < basis.D:
            col = {basis.index[(a,) + w]: c for a, c in enumerate(h, start=1) if c}
            if col:
                cols[j] = col
    return FockOperator(basis, cols, 1)


def right_creation(h, basis: FockBasis) -> FockOperator:
    """``r(h) xi = h`` and ``r(h) w = w (x) h``."""
    h = _check_h(h, basis)
    cols = {}
    for j, w in enumerate(basis.words):
        if len(w) < basis.D:
            col = {basis.index[w + (a,)]: c for a, c in enumerate(h, start=1) if c}
            if col:
                cols[j] = col
    return FockOperator(basis, cols, 1)


def left_annihilation(h, basis: FockBasis) -> FockOperator:
    """Adjoint of :func:`left_creation`: strips the first tensor factor against ``h``."""
    h = _check_h(h, basis)
    cols = {}
    for j, w in enumerate(basis.words):
        if w and h[w[0] - 1]:
            cols[j] = {basis.index[w[1:]]: h[w[0] - 1]}
    return FockOperator(basis, cols, 0)


def right_annihilation(h, basis: FockBasis) -> FockOperator:
    """Adjoint of :func:`right_creation`: strips the last tensor factor against ``h``."""
    h = _check_h(h, basis)
    cols = {}
    for j, w in enumerate(basis.words):
        if w and h[w[-1] - 1]:
            cols[j] = {basis.index[w[:-1]]: h[w[-1] - 1]}
    return FockOperator(basis, cols, 0)


def _diagonal(basis: FockBasis, keep) -> FockOperator:
    return FockOperator(basis, {j: {j: 1} for j, w in enumerate(basis.words) if keep(w)}, 0)


def projection_level(i, basis: FockBasis) -> FockOperator:
    """Projection onto the vacuum and ``e_i``; ``i`` may be a set of indices."""
    idx = {i} if isinstance(i, int) else set(i)
    for k in idx:
        _unit(k, basis.d)
    return _diagonal(basis, lambda w: len(w) == 0 or (len(w) == 1 and w[0] in idx))


def projection_block(i: int, basis: FockBasis) -> FockOperator:
    """Projection onto the vacuum and all tensor powers of ``e_i``."""
    _unit(i, basis.d)
    return _diagonal(basis, lambda w: all(a == i for a in w))


def projection_degree(k: int, basis: FockBasis) -> FockOperator:
    """Projection onto tensor degrees ``0..k``; ``k=1`` gives the vacuum plus H."""
    return _diagonal(basis, lambda w: len(w) <= k)


def vacuum_expectation(ops: Sequence[FockOperator]) -> Fraction:
    """``<op_1 op_2 ... op_k xi, xi>`` computed exactly."""
    if not ops:
        return Fraction(1)
    basis = ops[0].basis
    need = sum(op.degree_raise for op in ops)
    if need > basis.D:
        raise TruncationError(
            f"product may reach tensor degree {need} but the basis is truncated at "
            f"D={basis.D}; rebuild with D >= {need}"
        )
    vec: dict[int, object] = {0: 1}
    for op in reversed(ops):
        if op.basis is not basis:
            raise ValueError("operators on different Fock bases")
        vec = op.apply(vec)
        if not vec:
            return Fraction(0)
    return Fraction(vec.get(0, 0))


class FockFunctional(MomentFunctional):
    """Vacuum moments of words whose letters stand for Fock operators."""

    def __init__(self, ops: Mapping[Letter, FockOperator], max_len: int | None = None):
        ops = dict(ops)
        basis = next(iter(ops.values())).basis
        if any(op.basis is not basis for op in ops.values()):
            raise ValueError("operators on different Fock bases")
        self.basis = basis
        self.ops = ops
        super().__init__(sorted(ops), basis.D if max_len is None else max_len)
        self._memo: dict[tuple, Fraction] = {}
        self._states: dict[tuple, list] = {}

    def moment(self, word):
        v = self._memo.get(word)
        if v is None:
            try:
                ops = [self.ops[l] for l in word]
            except KeyError as exc:
                raise ValueError(f"letter {exc.args[0]} has no operator") from None
            v = self._memo[word] = vacuum_expectation(ops)
        return v

    def _state_list(self, alphabets: tuple) -> list:
        """Vectors ``w xi`` for all words in the product of ``alphabets``, C order."""
        if not alphabets:
            return [{0: 1}]
        got = self._states.get(alphabets)
        if got is not None:
            return got
        rest = self._state_list(alphabets[1:])
        out = []
        for letter in alphabets[0]:
            op = self.ops[letter]
            out.extend(op.apply(v) if v else v for v in rest)
        if len(alphabets) < self.max_len:
            self._states[alphabets] = out
        return out

    def moment_array(self, alphabets: Sequence[Sequence[Letter]]) -> np.ndarray:
        """Moments of every word choosing position k from ``alphabets[k]``."""
        alphabets = tuple(tuple(a) for a in alphabets)
        if len(alphabets) > self.max_len:
            raise TruncationError(f"words of length {len(alphabets)} exceed max_len={self.max_len}")
        need = sum(max((self.ops[l].degree_raise for l in a), default=0) for a in alphabets)
        if need > self.basis.D:
            raise TruncationError(f"words may reach degree {need} > D={self.basis.D}")
        vals = [v.get(0, 0) if v else 0 for v in self._state_list(alphabets)]
        shape = tuple(len(a) for a in alphabets)
        if all(isinstance(v, int) for v in vals):
            return np.array(vals, dtype=np.int64).reshape(shape)
        arr = np.empty(len(vals), dtype=object)
        arr[:] = [Fraction(v) for v in vals]
        return arr.reshape(shape)


@dataclass
class FockTriple:
    """The three faces attached to one index of the Fock model."""

    index: int
    left: tuple[FockOperator, FockOperator]
    right: tuple[FockOperator, FockOperator]
    central: tuple[FockOperator, FockOperator]

    def letters(self) -> dict[Letter, FockOperator]:
        i = str(self.index)
        out = {}
        for face, pair in (("L", self.left), ("R", self.right), ("C", self.central)):
            out[Letter(i, face, "creation")] = pair[0]
            out[Letter(i, face, "annihilation")] = pair[1]
        return out


def build_triples(k: int, basis: FockBasis) -> list[FockTriple]:
    """One triple per basis direction ``e_i``.

    Left face ``l_i, l_i*``; right face ``r_i, r_i*``; central face
    ``P_i l_i P_i, P_i l_i* P_i`` with ``P_i`` the projection onto the vacuum
    and ``e_i``.
    """
    if basis.d != k:
        raise ValueError(f"{k} triples need a basis with d={k}, got d={basis.d}")
    out = []
    for i in range(1, k + 1):
        e = _unit(i, k)
        li, lis = left_creation(e, basis), left_annihilation(e, basis)
        ri, ris = right_creation(e, basis), right_annihilation(e, basis)
        P = projection_level(i, basis)
        out.append(FockTriple(i, (li, lis), (ri, ris), (P @ li @ P, P @ lis @ P)))
    return out


def triples_functional(triples: Iterable[FockTriple], max_len: int | None = None) -> FockFunctional:
    ops: dict[Letter, FockOperator] = {}
    for t in triples:
        ops.update(t.letters())
    return FockFunctional(ops, max_len)


def fock_model(k: int, D: int) -> FockFunctional:
    """Moment functional of ``k`` Fock triples on a basis truncated at ``D``."""
    basis = FockBasis(k, D)
    return triples_functional(build_triples(k, basis))
