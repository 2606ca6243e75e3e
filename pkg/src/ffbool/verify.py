"""Verification suites behind ``ffbool verify``.

Each suite returns a :class:`SuiteResult`: named exact checks with a short
detail line, plus optional free text (the CLT scaling table).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import comb

import numpy as np

from .batch import mixed_cumulant_report, star_agreement_report
from .chi import ChiMap, enumerate_chi_noncrossing, enumerate_ibnc
from .climit import (
    TAG,
    clt_scaling_report,
    covariance_from_vectors,
    demo_universe,
    fock_gaussian_family,
    gamma_c_from_cumulants,
    gamma_c_moment,
    random_centered_table,
)
from .fock import FockBasis, fock_model
from .lattice import c_positions, compose, components, decompose, get_lattice
from .mobius import convolve, delta, mobius_bruteforce, mobius_product, mobius_to_top, zeta
from .moments import Letter
from .partitions import Partition
from .structural import structural_tests

SUITES = ("lattice", "mobius", "independence", "clt")

EXAMPLE_CHI = "llrcrcrl"


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)  # (label, ok, detail)
    text: str = ""

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, label: str, ok: bool, detail: str = ""):
        self.checks.append((label, bool(ok), detail))

    def lines(self) -> list[str]:
        out = [f"{'PASS' if ok else 'FAIL'} {self.name}/{label}" + (f": {d}" if d else "")
               for label, ok, d in self.checks]
        if self.text:
            out.append(self.text)
        return out

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": [{"name": l, "ok": ok, "detail": d} for l, ok, d in self.checks],
        }


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def ibnc_count_formula(chi: ChiMap) -> int:
    cuts = c_positions(chi)
    if chi.n == 1:
        return 1
    out = 1
    for a, b in zip(cuts, cuts[1:]):
        out *= catalan(chi.ground.index(b) - chi.ground.index(a) + 1)
    return out


def random_chi(rng: random.Random, n_max: int, n_min: int = 1, faces: str = "lrc") -> ChiMap:
    n = rng.randint(n_min, n_max)
    return ChiMap(tuple(rng.choice(faces) for _ in range(n)))


def suite_lattice(max_n: int = 7, seed: int = 0, samples: int = 40) -> SuiteResult:
    res = SuiteResult("lattice")
    rng = random.Random(seed)

    bad = []
    for _ in range(samples):
        chi = random_chi(rng, max_n)
        if len(enumerate_ibnc(chi)) != ibnc_count_formula(chi):
            bad.append(str(chi))
    res.add("counting formula", not bad, f"{samples} random maps, n <= {max_n}" + (f"; bad {bad[:3]}" if bad else ""))

    example = len(enumerate_ibnc(ChiMap.parse(EXAMPLE_CHI)))
    res.add("n=8 example count", example == 350, f"|IBNC({EXAMPLE_CHI})| = {example}")

    bad = []
    checked = 0
    for n in range(1, max_n + 1):
        for mid in product("lr", repeat=max(n - 2, 0)):
            for ends in product("lrc", repeat=min(n, 2)):
                labels = (ends[0], *mid, ends[-1]) if n >= 2 else ends
                chi = ChiMap(labels)
                checked += 1
                if set(enumerate_ibnc(chi)) != set(enumerate_chi_noncrossing(chi)):
                    bad.append(str(chi))
    res.add("ends-only central maps", not bad, f"{checked} maps checked")

    bad = []
    for _ in range(max(samples // 4, 1)):
        chi = random_chi(rng, min(max_n, 7), n_min=2)
        lat = get_lattice(chi)
        parts = [decompose(p, chi) for p in lat.elements]
        if any(compose(d, chi) != p for d, p in zip(parts, lat.elements)):
            bad.append(str(chi))
            continue
        size = 1
        prod_leq = np.ones_like(lat.leq_matrix, dtype=bool)
        for k, sub in enumerate(components(chi)):
            sl = get_lattice(sub)
            size *= len(sl)
            ix = np.array([sl.idx(d[k]) for d in parts])
            prod_leq &= sl.leq_matrix[np.ix_(ix, ix)].astype(bool)
        if size != len(lat) or len(set(parts)) != len(lat):
            bad.append(str(chi))
        elif not np.array_equal(prod_leq, lat.leq_matrix.astype(bool)):
            bad.append(str(chi))
    res.add("interval decomposition", not bad, (f"bad {bad[:3]}" if bad else ""))
    return res


def suite_mobius(max_n: int = 6, seed: int = 0, samples: int = 20) -> SuiteResult:
    res = SuiteResult("mobius")
    rng = random.Random(seed)
    bad, pairs = [], 0
    inv_bad = []
    for _ in range(samples):
        chi = random_chi(rng, max_n)
        lat = get_lattice(chi)
        mu = mobius_bruteforce(lat)
        for i, j in zip(*np.nonzero(lat.leq_matrix)):
            pairs += 1
            s, p = lat.elements[i], lat.elements[j]
            if mobius_product(s, p, lat) != mu.at(i, j):
                bad.append((str(chi), str(s), str(p)))
        z, d = zeta(lat), delta(lat)
        if convolve(mu, z) != d or convolve(z, mu) != d:
            inv_bad.append(str(chi))
    res.add("block product formula", not bad, f"{pairs} comparable pairs" + (f"; bad {bad[:2]}" if bad else ""))
    res.add("inverse of zeta", not inv_bad, f"{samples} lattices")
    chi = ChiMap.parse(EXAMPLE_CHI)
    v = mobius_to_top(Partition.zero(chi.ground), chi)
    res.add("n=8 example value", v == -20, f"mu(0, 1) = {v}")
    return res


def suite_independence(indices: int = 2, max_n: int = 5) -> SuiteResult:
    res = SuiteResult("independence")
    phi = fock_model(indices, max_n)
    rep = mixed_cumulant_report(phi, max_n=max_n)
    res.add("mixed cumulants", rep.ok, f"{rep.checked} mixed words, {len(rep.violations)} nonzero mixed cumulants")
    star = star_agreement_report(phi, max_n)
    res.add("moment recursion", star.ok, f"{star.checked} words, {len(star.mismatches)} mismatches")
    if indices >= 2:
        basis = phi.basis
        st = structural_tests(basis, None, max_len=min(max_n, 5), group_max_len=min(max_n, 4))
        for r in st.results:
            res.add(r.name, r.ok, f"{r.checked} checked")
    return res


def suite_clt(max_n: int = 6, seed: int = 0, N_list=(1, 4, 16)) -> SuiteResult:
    res = SuiteResult("clt")
    cov = demo_universe()
    bad, n_words = [], 0
    for n in range(1, max_n + 1):
        for om in product(cov.ids, repeat=n):
            w = tuple(Letter(k, cov.face(k), TAG) for k in om)
            n_words += 1
            if gamma_c_moment(cov, om) != gamma_c_from_cumulants(cov, w):
                bad.append("".join(om))
    res.add("pair sum vs cumulant expansion", not bad, f"{n_words} index sequences")

    h = {"i": [1, 0, 0], "j": [0, 1, 1], "k": [1, 1, 0]}
    hs = {"i": [1, 2, 0], "j": [0, 1, 0], "k": [0, 1, 1]}
    faces = {"i": "L", "j": "R", "k": "C"}
    cv = covariance_from_vectors(h, hs, faces)
    phi = fock_gaussian_family(h, hs, FockBasis(3, max_n), faces)
    bad = [w for w in phi.words(max_n) if phi(w) != gamma_c_moment(cv, [l.index for l in w])]
    res.add("Fock realization", not bad, f"covariance <h(l), h*(k)>, words <= {max_n}")

    base = random_centered_table(cov.letters(), max_n, seed)
    rep = clt_scaling_report(base, N_list, max_n)
    res.add("scaling", rep.ok, f"N in {list(N_list)}, m <= {max_n}")
    res.text = rep.table()
    return res


def run_suite(name: str, max_n: int | None = None, indices: int = 2, seed: int = 0) -> list[SuiteResult]:
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, max_n, indices, seed)]
    kw = {} if max_n is None else {"max_n": max_n}
    if name == "lattice":
        return [suite_lattice(seed=seed, **kw)]
    if name == "mobius":
        return [suite_mobius(seed=seed, **kw)]
    if name == "independence":
        return [suite_independence(indices, **kw)]
    if name == "clt":
        return [suite_clt(seed=seed, **kw)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
