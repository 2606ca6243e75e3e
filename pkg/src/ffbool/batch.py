"""Evaluate cumulants for all words sharing one face pattern at once.

For a face pattern ``(f_1, ..., f_n)`` the words are the cells of the grid
``alphabet(f_1) x ... x alphabet(f_n)``.  The lattice, its Mobius matrix
and the block structure are shared by all cells, so each ``phi_sigma`` becomes
an elementwise product of broadcast moment arrays and the cumulant sums
become matrix products.  Arithmetic is exact: ``int64`` when a bound on
every intermediate stays below ``2**62``, Python objects (ints/Fractions)
otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .chi import FACES, ChiMap
from .cumulants import moment_recursion_star, one_block_cumulant, star_coefficients
from .errors import MissingMomentError
from .lattice import get_lattice
from .mobius import mobius_bruteforce
from .moments import Letter, MomentFunctional
from .partitions import kernel

_LIMIT = 2**62


def _exact_array(vals: list, shape) -> np.ndarray:
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in vals):
        ints = [int(v) for v in vals]
        if all(abs(v) < _LIMIT for v in ints):
            return np.array(ints, dtype=np.int64).reshape(shape)
    arr = np.empty(len(vals), dtype=object)
    arr[:] = [Fraction(v) for v in vals]
    return arr.reshape(shape)


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(Fraction(v)) for v in a.ravel())
    return int(np.abs(a).max())


@dataclass
class PatternResult:
    """Moments, one-block cumulants and star predictions for one face pattern."""

    faces: tuple[str, ...]
    alphabets: list[list[Letter]]
    moments: np.ndarray
    kappa: np.ndarray
    star: np.ndarray | None
    mixed: np.ndarray

    def word(self, cell: tuple[int, ...]) -> tuple:
        return tuple(a[k] for a, k in zip(self.alphabets, cell))

    def cells(self, mask: np.ndarray) -> Iterable[tuple[int, ...]]:
        return (tuple(int(x) for x in c) for c in np.argwhere(mask))


class BatchEvaluator:
    def __init__(self, phi: MomentFunctional, letters: Sequence[Letter] | None = None):
        self.phi = phi
        letters = phi.letters if letters is None else letters
        self.alph = {f: sorted(l for l in letters if l.face == f) for f in FACES}
        self._arrays: dict[tuple, np.ndarray] = {}

    def alphabets(self, faces) -> list[list[Letter]]:
        return [self.alph[f] for f in faces]

    def moment_array(self, faces: tuple[str, ...]) -> np.ndarray:
        faces = tuple(faces)
        got = self._arrays.get(faces)
        if got is not None:
            return got
        alphs = self.alphabets(faces)
        if hasattr(self.phi, "moment_array"):
            arr = self.phi.moment_array(alphs)
            if arr.dtype == object:
                arr = _exact_array(list(arr.ravel()), arr.shape)
        else:
            vals = [self.phi(w) for w in product(*alphs)]
            arr = _exact_array(vals, tuple(len(a) for a in alphs))
        self._arrays[faces] = arr
        return arr

    def evaluate(self, faces: Sequence[str], star: bool = True) -> PatternResult:
        faces = tuple(faces)
        n = len(faces)
        chi = ChiMap(faces)
        lat = get_lattice(chi)
        mu = mobius_bruteforce(lat).values
        alphs = self.alphabets(faces)
        shape = tuple(len(a) for a in alphs)
        cells = int(np.prod(shape))

        block_arrays = {}
        for p in lat.elements:
            for b in p.blocks:
                if b not in block_arrays:
                    sub = self.moment_array(tuple(faces[k - 1] for k in b))
                    bshape = [shape[k - 1] if k in b else 1 for k in range(1, n + 1)]
                    block_arrays[b] = sub.reshape(bshape)
        top = lat.idx(lat.top)

        amax = max((_absmax(a) for a in block_arrays.values()), default=0)
        use_int = all(a.dtype != object for a in block_arrays.values())
        if use_int:
            phi_bound = max(amax, 1) ** n
            mu_bound = int(np.abs(mu).sum(axis=0).max())
            use_int = phi_bound * mu_bound * len(lat) < _LIMIT
        dtype = np.int64 if use_int else object

        Phi = np.empty((len(lat), cells), dtype=dtype)
        for s, p in enumerate(lat.elements):
            acc = None
            for b in p.blocks:
                a = block_arrays[b] if use_int else block_arrays[b].astype(object)
                acc = a if acc is None else acc * a
            Phi[s] = np.broadcast_to(acc, shape).ravel()

        weights = mu[:, top] if use_int else mu[:, top].astype(object)
        kappa = (weights @ Phi).reshape(shape)
        moments = Phi[top].reshape(shape)

        # index sequence of each cell, grouped into distinct kernels
        idx_names = sorted({l.index for a in alphs for l in a})
        code = {x: i for i, x in enumerate(idx_names)}
        grids = np.meshgrid(*[np.array([code[l.index] for l in a]) for a in alphs], indexing="ij")
        omegas = np.stack([g.ravel() for g in grids], axis=-1) if n else np.zeros((1, 0), int)
        uniq, inverse = np.unique(omegas, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).ravel()
        mixed = np.array([len(set(row)) > 1 for row in uniq])[inverse].reshape(shape)

        star_arr = None
        if star:
            C = np.stack([star_coefficients(chi, kernel(tuple(row))) for row in uniq], axis=1)
            if not use_int:
                C = C.astype(object)
            star_arr = (Phi * C[:, inverse]).sum(axis=0).reshape(shape)
        return PatternResult(faces, alphs, moments, kappa, star_arr, mixed)


@dataclass
class MixedCumulantReport:
    """Outcome of a vanishing-mixed-cumulant scan."""

    max_n: int
    checked: int = 0
    violations: list = field(default_factory=list)
    gaps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.gaps

    def summary(self) -> str:
        return (
            f"{self.checked} mixed words up to length {self.max_n}: "
            f"{len(self.violations)} nonzero mixed cumulants, {len(self.gaps)} oracle gaps"
        )


def _faces_present(letters) -> list[str]:
    return [f for f in FACES if any(l.face == f for l in letters)]


def mixed_cumulant_report(phi: MomentFunctional, index_set=None, max_n: int = 4) -> MixedCumulantReport:
    """Scan every word with a non-constant index sequence up to ``max_n``."""
    letters = [l for l in phi.letters if index_set is None or l.index in {str(i) for i in index_set}]
    ev = BatchEvaluator(phi, letters)
    rep = MixedCumulantReport(max_n)
    faces = _faces_present(letters)
    for n in range(2, max_n + 1):
        for pattern in product(faces, repeat=n):
            try:
                res = ev.evaluate(pattern, star=False)
            except MissingMomentError:
                _scalar_scan(phi, ev.alphabets(pattern), rep)
                continue
            rep.checked += int(res.mixed.sum())
            for cell in res.cells(res.mixed & (res.kappa != 0)):
                rep.violations.append((res.word(cell), Fraction(res.kappa[cell])))
    return rep


def _scalar_scan(phi, alphs, rep: MixedCumulantReport):
    for w in product(*alphs):
        if len({l.index for l in w}) < 2:
            continue
        rep.checked += 1
        try:
            v = one_block_cumulant(w, phi)
        except MissingMomentError as exc:
            rep.gaps.append((w, str(exc)))
            continue
        if v:
            rep.violations.append((w, v))


@dataclass
class StarReport:
    """Direct moments against the recursion prediction."""

    max_n: int
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def star_agreement_report(phi: MomentFunctional, max_n: int, letters=None) -> StarReport:
    """Compare every moment up to ``max_n`` with the recursion prediction."""
    letters = phi.letters if letters is None else letters
    ev = BatchEvaluator(phi, letters)
    rep = StarReport(max_n)
    faces = _faces_present(letters)
    for n in range(1, max_n + 1):
        for pattern in product(faces, repeat=n):
            res = ev.evaluate(pattern, star=True)
            rep.checked += res.moments.size
            for cell in res.cells(res.moments != res.star):
                w = res.word(cell)
                rep.mismatches.append((w, Fraction(res.moments[cell]), Fraction(res.star[cell])))
    return rep


def spot_check(phi: MomentFunctional, words: Iterable[tuple]) -> list:
    """Scalar recomputation of cumulants and star values for a handful of words.

    Returns ``(word, kappa, star)`` triples through the Fraction code path, for
    cross-checking the vectorized evaluation.
    """
    return [(w, one_block_cumulant(w, phi), moment_recursion_star(w, phi)) for w in words]
