import json
import random

import pytest
from hypothesis import given, strategies as st

from ffbool import lattice as lat_mod
from ffbool.chi import ChiMap, enumerate_ibnc, is_ibnc
from ffbool.errors import DomainError
from ffbool.lattice import (
    c_positions,
    compose,
    components,
    decompose,
    down_interval,
    get_lattice,
    interval_size_by_blocks,
    intervals,
    join,
    join_bruteforce,
    lattice_meet,
)
from ffbool.partitions import Partition, leq, partitions_of, restrict

P = Partition.parse
CHI8 = ChiMap.parse("llrcrcrl")
PI3 = P("1,2|3,4,6,8|5|7")

chis = st.text("lrc", min_size=1, max_size=7).map(ChiMap.parse)


def test_c_positions_examples():
    assert c_positions(CHI8) == (1, 4, 6, 8)
    assert c_positions(ChiMap.parse("lrrl")) == (1, 4)
    assert c_positions(ChiMap.parse("clc")) == (1, 3)
    assert intervals(CHI8) == [(1, 2, 3, 4), (4, 5, 6), (6, 7, 8)]


def test_decompose_example():
    assert decompose(PI3, CHI8) == (P("1,2|3,4"), Partition.from_blocks([(4, 6), (5,)]),
                                    Partition.from_blocks([(6, 8), (7,)]))
    one = Partition.one(range(1, 9))
    assert decompose(one, CHI8) == tuple(Partition.one(iv) for iv in intervals(CHI8))
    zero = Partition.zero(range(1, 9))
    assert decompose(zero, CHI8) == tuple(Partition.zero(iv) for iv in intervals(CHI8))
    with pytest.raises(DomainError):
        decompose(P("1,8|2,3,4,5,6,7"), CHI8)


def test_compose_examples():
    for p in get_lattice(CHI8).elements:
        assert compose(decompose(p, CHI8), CHI8) == p
    ivs = intervals(CHI8)
    assert compose([Partition.zero(iv) for iv in ivs], CHI8) == Partition.zero(range(1, 9))
    assert compose([Partition.one(iv) for iv in ivs], CHI8) == Partition.one(range(1, 9))
    with pytest.raises(DomainError):
        compose([Partition.one(ivs[0])], CHI8)
    with pytest.raises(DomainError):
        bad = [Partition.from_blocks([(1, 4), (2, 3)]), Partition.one(ivs[1]), Partition.one(ivs[2])]
        compose(bad, CHI8)


def test_lattice_contents():
    lat = get_lattice(CHI8)
    assert lat.elements == enumerate_ibnc(CHI8)
    assert lat.bottom in lat and lat.top in lat
    for i in range(0, len(lat), 37):
        for j in range(0, len(lat), 29):
            assert bool(lat.leq_matrix[i, j]) == leq(lat.elements[i], lat.elements[j])
    with pytest.raises(DomainError):
        lat.idx(P("1,8|2,3,4,5,6,7"))


def test_join_examples():
    lat = get_lattice(ChiMap.parse("lll"))
    assert join(P("1,3|2"), P("1|2,3"), lat) == Partition.one((1, 2, 3))
    lat8 = get_lattice(CHI8)
    assert join(PI3, lat8.bottom, lat8) == PI3
    assert join(PI3, lat8.top, lat8) == lat8.top
    with pytest.raises(ValueError):
        join(PI3, PI3, lat8, method="guess")


def test_down_interval_examples():
    lat = get_lattice(CHI8)
    assert down_interval(lat.bottom, lat) == [lat.bottom]
    assert down_interval(lat.top, lat) == lat.elements
    # the blocks {1,2}, {3,4,6,8}, {5}, {7} contribute 2 * 8 * 1 * 1
    assert len(down_interval(PI3, lat)) == 16 == interval_size_by_blocks(PI3, CHI8)
    assert len(get_lattice(CHI8.restrict((3, 4, 6, 8)))) == 8


def test_meet_stays_in_lattice():
    lat = get_lattice(CHI8)
    a, b = PI3, P("1,2,3,4|5|6,7,8")
    assert lattice_meet(a, b, lat) == P("1,2|3,4|5|6,8|7")


@given(chis)
def test_decomposition_is_order_isomorphism(chi):
    lat = get_lattice(chi)
    parts = [decompose(p, chi) for p in lat.elements]
    size = 1
    for sub in components(chi):
        size *= len(get_lattice(sub))
    assert size == len(lat) == len(set(parts))
    rng = random.Random(len(lat))
    for _ in range(40):
        i, j = rng.randrange(len(lat)), rng.randrange(len(lat))
        comp = all(leq(a, b) for a, b in zip(parts[i], parts[j]))
        assert comp == bool(lat.leq_matrix[i, j])


@given(chis)
def test_join_methods_agree_and_are_least(chi):
    lat = get_lattice(chi)
    rng = random.Random(len(lat))
    for _ in range(10):
        s, p = rng.choice(lat.elements), rng.choice(lat.elements)
        j = join(s, p, lat)
        assert j == join_bruteforce(s, p, lat) == join(s, p, lat, method="search")
        uppers = [u for u in lat.elements if leq(s, u) and leq(p, u)]
        assert j in uppers and all(leq(j, u) for u in uppers)


@given(chis)
def test_down_interval_factorizes_over_blocks(chi):
    lat = get_lattice(chi)
    for p in lat.elements[:: max(1, len(lat) // 10)]:
        assert len(down_interval(p, lat)) == interval_size_by_blocks(p, chi)


@given(chis)
def test_below_membership_is_blockwise(chi):
    # sigma <= pi is in IBNC iff each restriction to a block of pi is
    lat = get_lattice(chi)
    rng = random.Random(chi.n)
    allp = partitions_of(chi.ground)
    for p in rng.sample(lat.elements, min(4, len(lat))):
        for s in allp:
            if not leq(s, p):
                continue
            blockwise = all(is_ibnc(restrict(s, V), chi.restrict(V)) for V in p.blocks)
            assert blockwise == is_ibnc(s, chi)


def test_disk_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("IBNC_CACHE_DIR", str(tmp_path))
    monkeypatch.setattr(lat_mod, "_CACHE", {})
    chi = ChiMap.parse("lrcl")
    first = get_lattice(chi)
    path = tmp_path / "ibnc-lrcl.json"
    doc = json.loads(path.read_text())
    assert doc["chi"] == "lrcl" and len(doc["elements"]) == len(first)
    monkeypatch.setattr(lat_mod, "_CACHE", {})
    again = get_lattice(chi)
    assert again is not first and again.elements == first.elements
