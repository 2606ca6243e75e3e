"""Free-free-Boolean cumulants and the moment-cumulant transforms.

For a word ``w`` with face map ``chi`` and ``pi`` in IBNC(chi)::

    kappa_pi(w) = sum over sigma <= pi in IBNC(chi) of mu(sigma, pi) * phi_sigma(w)

where ``phi_sigma`` multiplies the moments of the block subwords.  The
one-block cumulant of a subword only depends on the subword itself, since
restricting a face map to a block and renumbering preserves both the face
order and the natural order.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .chi import ChiMap
from .errors import DomainError, MissingMomentError
from .lattice import get_lattice
from .mobius import mobius_bruteforce
from .moments import (
    Letter,
    MomentFunctional,
    TableMoments,
    all_words,
    subword,
    word_chi,
    word_omega,
    word_str,
)
from .partitions import Partition, kernel


def _check_word_partition(pi: Partition, word: Sequence) -> None:
    if pi.ground != tuple(range(1, len(word) + 1)):
        raise ValueError(f"partition {pi} does not match a word of length {len(word)}")


def phi_partitioned(phi: Callable, pi: Partition, word: Sequence[Letter]) -> Fraction:
    """Product over the blocks of ``pi`` of the moments of the block subwords."""
    word = tuple(word)
    _check_word_partition(pi, word)
    out = Fraction(1)
    for V in pi.blocks:
        out *= phi(subword(word, V))
        if not out:
            break
    return out


def _check_chi(chi: ChiMap, word) -> None:
    if chi.ground != tuple(range(1, len(word) + 1)) or chi.labels != word_chi(word).labels:
        raise DomainError(f"face map {chi} does not match the faces of {word_str(word)}")


def cumulant(chi: ChiMap, pi: Partition, word: Sequence[Letter], phi: Callable) -> Fraction:
    """The free-free-Boolean cumulant ``kappa_{chi, pi}`` of ``word``."""
    word = tuple(word)
    _check_chi(chi, word)
    _check_word_partition(pi, word)
    lat = get_lattice(chi)
    j = lat.idx(pi)
    mu = mobius_bruteforce(lat).values
    total = Fraction(0)
    for i in lat.below(j):
        coeff = int(mu[i, j])
        if coeff:
            total += coeff * phi_partitioned(phi, lat.elements[i], word)
    return total


def one_block_cumulant(word: Sequence[Letter], phi: Callable) -> Fraction:
    word = tuple(word)
    chi = word_chi(word)
    return cumulant(chi, Partition.one(chi.ground), word, phi)


class CumulantOracle:
    """Memoized one-block cumulants of a moment functional."""

    def __init__(self, phi: Callable):
        self.phi = phi
        self._memo: dict[tuple, Fraction] = {}

    def __call__(self, word: Sequence[Letter]) -> Fraction:
        word = tuple(word)
        v = self._memo.get(word)
        if v is None:
            v = self._memo[word] = one_block_cumulant(word, self.phi)
        return v


def _kappa_lookup(kappa) -> Callable:
    if isinstance(kappa, Mapping):
        def look(w):
            try:
                return kappa[w]
            except KeyError:
                raise MissingMomentError(word_str(w)) from None
        return look
    return kappa


def moments_from_cumulants(chi: ChiMap, word: Sequence[Letter], kappa) -> Fraction:
    """Moment of ``word`` as the sum over IBNC(chi) of products of block cumulants.

    ``kappa`` maps a (sub)word to its one-block cumulant; either a callable or
    a mapping.  Missing entries raise :class:`MissingMomentError` naming the
    subword.
    """
    word = tuple(word)
    _check_chi(chi, word)
    look = _kappa_lookup(kappa)
    total = Fraction(0)
    for pi in get_lattice(chi).elements:
        prod = Fraction(1)
        for V in pi.blocks:
            sw = subword(word, V)
            try:
                prod *= look(sw)
            except KeyError:
                raise MissingMomentError(word_str(sw)) from None
            if not prod:
                break
        total += prod
    return total


def required_subwords(word: Sequence[Letter]) -> set[tuple]:
    """Block subwords over all of IBNC(chi); the words either transform reads."""
    word = tuple(word)
    blocks = {b for p in get_lattice(word_chi(word)).elements for b in p.blocks}
    return {subword(word, b) for b in blocks}


def missing_subwords(words: Iterable[Sequence[Letter]], table: Mapping) -> list[tuple]:
    """Subwords needed by ``words`` but absent from ``table``, shortest first."""
    need = set()
    for w in words:
        need |= required_subwords(w)
    return sorted((w for w in need if w not in table), key=lambda w: (len(w), w))


def star_coefficients(chi: ChiMap, eps: Partition) -> np.ndarray:
    """``c[sigma] = sum over pi in IBNC(chi) with sigma <= pi <= eps of mu(sigma, pi)``."""
    lat = get_lattice(chi)
    key = ("star", eps)
    got = lat.mobius_memo.get(key)
    if got is not None:
        return got
    where = eps.block_of()
    below_eps = np.array(
        [all(len({where[x] for x in b}) == 1 for b in p.blocks) for p in lat.elements],
        dtype=np.int64,
    )
    c = mobius_bruteforce(lat).values @ below_eps
    with lat.lock:
        lat.mobius_memo[key] = c
    return c


def moment_recursion_star(word: Sequence[Letter], phi: Callable) -> Fraction:
    """Mixed moment predicted from lower-order moments under independence.

    Sums ``c[sigma] * phi_sigma(word)`` over IBNC(chi) with ``c`` from
    :func:`star_coefficients` and ``eps`` the kernel of the index sequence.
    """
    word = tuple(word)
    if not word:
        raise ValueError("empty word")
    chi = word_chi(word)
    eps = kernel(word_omega(word))
    lat = get_lattice(chi)
    c = star_coefficients(chi, eps)
    total = Fraction(0)
    for i in np.flatnonzero(c):
        total += int(c[i]) * phi_partitioned(phi, lat.elements[i], word)
    return total


def cumulant_table(phi: MomentFunctional, max_n: int | None = None, words=None) -> dict:
    """One-block cumulants for every word of the functional's alphabet (or ``words``)."""
    oracle = CumulantOracle(phi)
    if words is None:
        words = all_words(phi.letters, phi.max_len if max_n is None else max_n)
    return {tuple(w): oracle(w) for w in words}


def moments_from_cumulant_table(letters: Sequence[Letter], kappa: Mapping, max_n: int | None = None) -> TableMoments:
    """Rebuild a moment table from a table of one-block cumulants."""
    if max_n is None:
        max_n = max((len(w) for w in kappa), default=0)
    values = {}
    for w in all_words(letters, max_n):
        if w in kappa:
            values[w] = moments_from_cumulants(word_chi(w), w, kappa)
    return TableMoments(letters, values, max_n)


def ffb_convolve(mu_a: MomentFunctional, mu_b: MomentFunctional, max_n: int) -> TableMoments:
    """Additive free-free-Boolean convolution of two distributions on one alphabet.

    The two inputs are treated as independent copies: their one-block
    cumulants add letter by letter, and the moments are rebuilt from the sum.
    """
    if set(mu_a.letters) != set(mu_b.letters):
        raise ValueError("convolution needs both functionals on the same alphabet")
    ka, kb = CumulantOracle(mu_a), CumulantOracle(mu_b)
    memo: dict[tuple, Fraction] = {}

    def kappa(w):
        v = memo.get(w)
        if v is None:
            v = memo[w] = ka(w) + kb(w)
        return v

    letters = mu_a.letters
    values = {w: moments_from_cumulants(word_chi(w), w, kappa) for w in all_words(letters, max_n)}
    return TableMoments(letters, values, max_n)


def vanishing_mixed_cumulants_report(phi: MomentFunctional, index_set: Iterable | None = None, max_n: int = 4):
    """Check that one-block cumulants of words mixing several indices are zero.

    Thin wrapper over :func:`ffbool.batch.mixed_cumulant_report`.
    """
    from .batch import mixed_cumulant_report

    return mixed_cumulant_report(phi, index_set=index_set, max_n=max_n)
