"""The free-free-Boolean central limit law and the CLT scaling harness.

The limit law with covariance ``C`` has one-block cumulants ``C[k, l]`` on
two-letter words ``z_k z_l`` and zero on every other length.  Its moments are
therefore sums over the pair partitions in IBNC of products of covariances.

Covariance files look like::

    {"universe": [{"id": "i", "face": "l"}, {"id": "k", "face": "c"}],
     "C": [["1", "0"], ["0", "1/2"]]}
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .chi import ChiMap, is_ibnc
from .cumulants import CumulantOracle, ffb_convolve, moments_from_cumulants
from .errors import DomainError
from .fock import (
    FockBasis,
    FockFunctional,
    left_annihilation,
    left_creation,
    projection_degree,
    right_annihilation,
    right_creation,
)
from .moments import (
    FunctionMoments,
    Letter,
    MomentFunctional,
    TableMoments,
    all_words,
    format_rational,
    parse_rational,
    word_omega,
)
from .partitions import Partition

TAG = "z"


@dataclass
class CovMatrix:
    """Covariance over a universe of identifiers, each carrying a face.

    No symmetry is assumed.
    """

    ids: tuple[str, ...]
    faces: tuple[str, ...]
    C: tuple[tuple[Fraction, ...], ...]
    pos: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.ids = tuple(str(i) for i in self.ids)
        self.faces = tuple(str(f).upper() for f in self.faces)
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate identifiers in the universe")
        if len(self.faces) != len(self.ids) or any(f not in "LRC" for f in self.faces):
            raise ValueError("every identifier needs a face among l, r, c")
        n = len(self.ids)
        if len(self.C) != n or any(len(row) != n for row in self.C):
            raise ValueError(f"covariance must be {n}x{n}")
        self.C = tuple(tuple(parse_rational(x) for x in row) for row in self.C)
        self.pos = {k: i for i, k in enumerate(self.ids)}

    def __call__(self, k, l) -> Fraction:
        return self.C[self.pos[str(k)]][self.pos[str(l)]]

    def face(self, k) -> str:
        try:
            return self.faces[self.pos[str(k)]]
        except KeyError:
            raise DomainError(f"symbol {k!r} is not in the universe") from None

    def letters(self) -> tuple[Letter, ...]:
        return tuple(Letter(i, f, TAG) for i, f in zip(self.ids, self.faces))

    def to_json(self) -> str:
        doc = {
            "universe": [{"id": i, "face": f.lower()} for i, f in zip(self.ids, self.faces)],
            "C": [[format_rational(x) for x in row] for row in self.C],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CovMatrix":
        doc = json.loads(text)
        u = doc["universe"]
        return cls(tuple(d["id"] for d in u), tuple(d["face"] for d in u), tuple(map(tuple, doc["C"])))

    @classmethod
    def read(cls, path) -> "CovMatrix":
        return cls.from_json(Path(path).read_text())


def chi_from_omega(omega: Sequence, cov: CovMatrix) -> ChiMap:
    """Face map of an index sequence: each position gets the face of its symbol."""
    if not omega:
        raise ValueError("empty index sequence")
    return ChiMap(tuple(cov.face(k) for k in omega))


def pair_partitions(n: int) -> Iterable[Partition]:
    """All pairings of ``{1..n}`` (none for odd ``n``), built by recursive matching."""

    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for j in range(1, len(rest)):
            b = rest[j]
            for tail in rec(rest[1:j] + rest[j + 1:]):
                yield ((a, b),) + tail

    if n % 2:
        return
    for blocks in rec(tuple(range(1, n + 1))):
        yield Partition.from_blocks(blocks)


def gamma_c_moment(cov: CovMatrix, omega: Sequence) -> Fraction:
    """Moment of ``z_{omega(1)} ... z_{omega(n)}`` under the limit law.

    Sum over pairings in IBNC of the face map of ``omega`` of the product of
    ``C[omega(a), omega(b)]`` over pairs ``a < b``.
    """
    omega = tuple(str(k) for k in omega)
    chi = chi_from_omega(omega, cov)
    total = Fraction(0)
    for p in pair_partitions(len(omega)):
        if not is_ibnc(p, chi):
            continue
        prod = Fraction(1)
        for a, b in p.blocks:
            prod *= cov(omega[a - 1], omega[b - 1])
            if not prod:
                break
        total += prod
    return total


def gamma_c_cumulants(cov: CovMatrix):
    """Cumulant oracle of the limit law: ``C`` on pairs, zero elsewhere."""

    def kappa(word) -> Fraction:
        if len(word) != 2:
            return Fraction(0)
        return cov(word[0].index, word[1].index)

    return kappa


def gamma_c_functional(cov: CovMatrix, max_len: int = 6) -> MomentFunctional:
    return FunctionMoments(lambda w: gamma_c_moment(cov, word_omega(w)), cov.letters(), max_len)


def gamma_c_from_cumulants(cov: CovMatrix, word) -> Fraction:
    return moments_from_cumulants(ChiMap(tuple(l.face for l in word)), word, gamma_c_cumulants(cov))


def covariance_from_vectors(h: Mapping, hstar: Mapping, faces: Mapping) -> CovMatrix:
    """``C[k, l] = <h(l), h*(k)>`` for rational vectors."""
    ids = tuple(str(k) for k in faces)
    h = {str(k): v for k, v in h.items()}
    hstar = {str(k): v for k, v in hstar.items()}

    def dot(u, v):
        return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))

    C = tuple(tuple(dot(h[l], hstar[k]) for l in ids) for k in ids)
    return CovMatrix(ids, tuple(faces[k] for k in faces), C)


def fock_gaussian_family(h: Mapping, hstar: Mapping, basis: FockBasis, faces: Mapping) -> FockFunctional:
    """Fock realization of the limit law.

    Left symbols act as ``l(h) + l*(h*)``, right ones as ``r(h) + r*(h*)``,
    and central ones as the compression of the left operator by the
    projection onto the vacuum plus the one-particle space.
    """
    P = projection_degree(1, basis)
    ops = {}
    for k, face in faces.items():
        face = str(face).upper()
        a, b = h[k], hstar[k]
        if face == "R":
            op = right_creation(a, basis) + right_annihilation(b, basis)
        else:
            op = left_creation(a, basis) + left_annihilation(b, basis)
            if face == "C":
                op = P @ op @ P
        ops[Letter(str(k), face, TAG)] = op
    return FockFunctional(ops)


# -- CLT scaling --------------------------------------------------------------


@dataclass
class ScalingRow:
    m: int
    N: int
    normalized: dict  # word -> kappa_m(S_N) * N^(m/2 - 1)
    constant: bool  # normalized values equal those of the base


@dataclass
class ScalingReport:
    N_list: tuple[int, ...]
    max_n: int
    base_cumulants: dict
    rows: list[ScalingRow]

    @property
    def ok(self) -> bool:
        return all(r.constant for r in self.rows)

    def table(self) -> str:
        """One line per (m, N) with the largest normalized cumulant and the decay factor."""
        out = ["m  N   max|kappa_m(S_N)|*N^(m/2-1)  N^(1-m/2)  constant"]
        for r in self.rows:
            top = max((abs(v) for v in r.normalized.values()), default=Fraction(0))
            decay = f"N^{format_rational(Fraction(2 - r.m, 2))}"
            out.append(f"{r.m}  {r.N:<3} {format_rational(top):<29} {decay:<10} {'yes' if r.constant else 'NO'}")
        return "\n".join(out)


def _sum_of_copies(base: MomentFunctional, N: int, max_n: int) -> MomentFunctional:
    """Distribution of ``N`` independent copies added together, by repeated doubling."""
    acc = None
    power = base
    while N:
        if N & 1:
            acc = power if acc is None else ffb_convolve(acc, power, max_n)
        N >>= 1
        if N:
            power = ffb_convolve(power, power, max_n)
    return acc


def clt_scaling_report(base: MomentFunctional, N_list: Sequence[int] = (1, 4, 16), max_n: int = 6) -> ScalingReport:
    """Normalized cumulants of ``S_N = N^(-1/2) (z_1 + ... + z_N)``.

    Cumulants are multilinear, so ``kappa_m(S_N) = N^(-m/2) kappa_m(T_N)``
    with ``T_N`` the unnormalized sum.  The rational quantity
    ``kappa_m(T_N) / N`` is reported; it must equal the base cumulant for
    every ``N``, which is the statement that ``kappa_m(S_N)`` scales like
    ``N^(1 - m/2)``.
    """
    for l in base.letters:
        if base((l,)) != 0:
            raise DomainError(f"first moment of {l} is {base((l,))}; the CLT needs centered variables")
    words = list(all_words(base.letters, max_n))
    kb = CumulantOracle(base)
    base_k = {w: kb(w) for w in words}
    rows = []
    for N in N_list:
        if N < 1:
            raise ValueError("N must be positive")
        kt = CumulantOracle(_sum_of_copies(base, N, max_n))
        for m in range(1, max_n + 1):
            norm = {w: kt(w) / N for w in words if len(w) == m}
            rows.append(ScalingRow(m, N, norm, all(norm[w] == base_k[w] for w in norm)))
    return ScalingReport(tuple(N_list), max_n, base_k, rows)


def random_centered_table(letters: Sequence[Letter], max_n: int, seed: int = 0) -> TableMoments:
    """Random rational moments with every first moment zero."""
    rng = random.Random(seed)
    values = {}
    for w in all_words(letters, max_n):
        values[w] = Fraction(0) if len(w) == 1 else Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return TableMoments(letters, values, max_n)


def demo_universe() -> CovMatrix:
    """One symbol per face with a nonsymmetric covariance."""
    C = ((1, Fraction(1, 2), 0), (0, 2, 1), (Fraction(-1, 3), 0, 1))
    return CovMatrix(("i", "j", "k"), ("L", "R", "C"), C)
