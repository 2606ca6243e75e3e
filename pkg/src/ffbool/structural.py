"""Exact checks of the structural properties of the Fock triples.

Four families of identities, each evaluated on the vacuum state:

* commutation of the block projection with the creation/annihilation
  operators of its own index;
* the monotone and classical-independence factorizations between faces of
  complementary index sets;
* stability under grouping: merging two indices into one triple keeps the
  mixed cumulants against a third index at zero;
* boundary replacement: a central or right letter at either end of a word
  can be swapped for the left letter of the same index and tag.

Every failure is recorded with the word (or basis vector) that witnesses it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .batch import mixed_cumulant_report
from .fock import (
    FockBasis,
    FockFunctional,
    FockOperator,
    FockTriple,
    build_triples,
    left_annihilation,
    left_creation,
    projection_block,
    projection_level,
    right_annihilation,
    right_creation,
    triples_functional,
    vacuum_expectation,
)
from .moments import Letter, word_str


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, witness, detail: str = ""):
        self.failures.append((witness, detail))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "ok": self.ok,
            "failures": [{"witness": str(w), "detail": d} for w, d in self.failures[:20]],
        }


@dataclass
class StructuralReport:
    results: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.checked} checked, {len(r.failures)} failures"
            for r in self.results
        ]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [r.to_json() for r in self.results]}


def _word_text(word) -> str:
    return word_str(word) if word else "<empty>"


# -- (a) commutation ------------------------------------------------------


def check_commutators(basis: FockBasis, triples: Sequence[FockTriple]) -> CheckResult:
    """``[block projection of i, x] = 0`` for the four operators of index ``i``.

    Only columns of degree at most ``D - 1`` are inspected: beyond that the
    creation operators are cut off by the truncation.
    """
    res = CheckResult("commutator")
    for t in triples:
        P = projection_block(t.index, basis)
        named = {"l": t.left[0], "l*": t.left[1], "r": t.right[0], "r*": t.right[1]}
        for name, x in named.items():
            comm = P @ x - x @ P
            res.checked += 1
            if not comm.is_zero(max_degree=basis.D - 1):
                bad = [(basis.words[c], basis.words[r], v) for r, c, v in comm.triples()
                       if basis.degree(c) <= basis.D - 1]
                res.fail(f"{name}_{t.index}", f"nonzero entries {bad[:3]}")
    return res


# -- (b) monotone and classical independence ------------------------------


def _face_letters(phi: FockFunctional, indices, face: str) -> list[Letter]:
    idx = {str(i) for i in indices}
    return [l for l in phi.letters if l.index in idx and l.face == face]


def check_monotone(phi: FockFunctional, inner: Sequence[Letter], outer: Sequence[Letter],
                   max_len: int, name: str) -> CheckResult:
    """Monotone factorization of ``inner`` against ``outer``.

    For every word over both letter sets, each maximal run of ``inner``
    letters flanked on both sides by ``outer`` letters is one element of the
    algebra generated by ``inner``; its moment must split off.
    """
    res = CheckResult(name)
    inner_set = set(inner)
    letters = list(inner) + list(outer)
    for n in range(3, max_len + 1):
        for w in product(letters, repeat=n):
            flags = [l in inner_set for l in w]
            k = 1
            while k < n - 1:
                if not flags[k] or flags[k - 1]:
                    k += 1
                    continue
                end = k
                while end < n and flags[end]:
                    end += 1
                if end < n:
                    res.checked += 1
                    lhs = phi(w)
                    rhs = phi(w[k:end]) * phi(w[:k] + w[end:])
                    if lhs != rhs:
                        res.fail(_word_text(w), f"{lhs} != {rhs}")
                k = end
    return res


def check_classical(phi: FockFunctional, left: Sequence[Letter], right: Sequence[Letter],
                    max_len: int) -> CheckResult:
    """``phi(w) = phi(w|left) * phi(w|right)`` for words mixing the two sets."""
    res = CheckResult("classical independence")
    lset = set(left)

    def m(sub):
        return phi(sub) if sub else Fraction(1)

    for n in range(2, max_len + 1):
        for w in product(list(left) + list(right), repeat=n):
            a = tuple(l for l in w if l in lset)
            b = tuple(l for l in w if l not in lset)
            if not a or not b:
                continue
            res.checked += 1
            lhs, rhs = phi(w), m(a) * m(b)
            if lhs != rhs:
                res.fail(_word_text(w), f"{lhs} != {rhs}")
    return res


def check_monotone_example(basis: FockBasis, triples: Sequence[FockTriple]) -> CheckResult:
    """Sum operators ``x = l_1 + l_1*`` and ``y = b_2 + b_2*`` (central face of 2).

    ``phi(x y x)`` must equal ``phi(y) * phi(x x)``; both sides vanish here
    because ``phi(y) = 0`` and ``phi(x y x) = 0``.
    """
    res = CheckResult("monotone example")
    t1, t2 = triples[0], triples[1]
    x = t1.left[0] + t1.left[1]
    y = t2.central[0] + t2.central[1]
    lhs = vacuum_expectation([x, y, x])
    rhs = vacuum_expectation([y]) * vacuum_expectation([x, x])
    res.checked = 1
    if lhs != rhs:
        res.fail("x y x", f"{lhs} != {rhs}")
    return res


# -- (c) grouping ---------------------------------------------------------


def grouped_functional(D: int = 4) -> FockFunctional:
    """Two triples over ``Q^3``: indices 1 and 2 merged into ``"12"``, and ``"3"``.

    The merged central face is compressed by the projection onto the vacuum
    plus ``span{e1, e2}``.  Products of generators (``l1 l2*`` and friends)
    are added as single letters so the check covers the generated algebras,
    not just their generators.
    """
    basis = FockBasis(3, D)
    e = {i: [1 if k == i else 0 for k in range(1, 4)] for i in (1, 2, 3)}
    ops: dict[Letter, FockOperator] = {}

    def add(index, face, tag, op):
        ops[Letter(index, face, tag)] = op

    PA = projection_level({1, 2}, basis)
    for i in (1, 2):
        l, ls = left_creation(e[i], basis), left_annihilation(e[i], basis)
        r, rs = right_creation(e[i], basis), right_annihilation(e[i], basis)
        add("12", "L", f"a{i}", l)
        add("12", "L", f"a{i}*", ls)
        add("12", "R", f"a{i}", r)
        add("12", "R", f"a{i}*", rs)
        add("12", "C", f"a{i}", PA @ l @ PA)
        add("12", "C", f"a{i}*", PA @ ls @ PA)
    for face in "LRC":
        add("12", face, "a1a2*", ops[Letter("12", face, "a1")] @ ops[Letter("12", face, "a2*")])
    t3 = build_triples_subset(basis, 3)
    ops.update(t3.letters())
    return FockFunctional(ops, D)


def build_triples_subset(basis: FockBasis, i: int) -> FockTriple:
    """The Fock triple of index ``i`` inside a basis with more directions."""
    e = [1 if k == i else 0 for k in range(1, basis.d + 1)]
    l, ls = left_creation(e, basis), left_annihilation(e, basis)
    r, rs = right_creation(e, basis), right_annihilation(e, basis)
    P = projection_level(i, basis)
    return FockTriple(i, (l, ls), (r, rs), (P @ l @ P, P @ ls @ P))


def check_grouping(max_len: int = 4) -> CheckResult:
    res = CheckResult("grouping")
    rep = mixed_cumulant_report(grouped_functional(max_len), max_n=max_len)
    res.checked = rep.checked
    for w, v in rep.violations:
        res.fail(_word_text(w), f"cumulant {v}")
    for w, msg in rep.gaps:
        res.fail(_word_text(w), msg)
    return res


# -- (d) boundary replacement ---------------------------------------------


def _to_left(letter: Letter) -> Letter:
    return Letter(letter.index, "L", letter.tag)


def check_boundary(phi: FockFunctional, max_len: int) -> CheckResult:
    """Central or right letters at the ends of a word act like left letters."""
    res = CheckResult("boundary replacement")
    for n in range(2, max_len + 1):
        for w in product(phi.letters, repeat=n):
            first, last = w[0], w[-1]
            if first.face == "L" and last.face == "L":
                continue
            t = list(w)
            t[0], t[-1] = _to_left(first), _to_left(last)
            res.checked += 1
            lhs, rhs = phi(w), phi(tuple(t))
            if lhs != rhs:
                res.fail(_word_text(w), f"{lhs} != {rhs}")
    return res


# -- all together -----------------------------------------------------------


def structural_tests(basis: FockBasis | None = None, triples: Sequence[FockTriple] | None = None,
                     max_len: int = 5, group_max_len: int = 4) -> StructuralReport:
    """Run every structural check on a two-index model (built if not given)."""
    if basis is None:
        basis = FockBasis(2, max_len)
    if triples is None:
        triples = build_triples(basis.d, basis)
    if basis.D < max_len:
        raise ValueError(f"basis truncated at D={basis.D} cannot evaluate words of length {max_len}")
    phi = triples_functional(triples, max_len)
    ids = [t.index for t in triples]
    results = [check_commutators(basis, triples)]
    for r in range(1, len(ids)):
        for L in combinations(ids, r):
            rest = [i for i in ids if i not in L]
            central = _face_letters(phi, rest, "C")
            for face, label in (("L", "left"), ("R", "right")):
                inner = _face_letters(phi, L, face)
                results.append(check_monotone(phi, inner, central, max_len,
                                              f"monotone {label}{list(L)} to central{rest}"))
            cl = check_classical(phi, _face_letters(phi, L, "L"), _face_letters(phi, rest, "R"), max_len)
            cl.name = f"classical independence left{list(L)} right{rest}"
            results.append(cl)
    if len(triples) >= 2:
        results.append(check_monotone_example(basis, triples))
    results.append(check_grouping(group_max_len))
    results.append(check_boundary(phi, max_len))
    return StructuralReport(results)
