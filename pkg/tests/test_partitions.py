import pytest
from hypothesis import given, strategies as st

from ffbool.errors import SizeLimitError
from ffbool.partitions import (
    Partition,
    bell_number,
    enumerate_partitions,
    is_noncrossing_under,
    join,
    kernel,
    leq,
    meet,
    partitions_of,
    restrict,
)

from oracles import bell, set_partitions

P = Partition.parse


def test_parse_and_canonical_form():
    p = P("4,6|1,2|8,3,5,7")
    assert p.blocks == ((1, 2), (3, 5, 7, 8), (4, 6))
    assert str(p) == "1,2|3,5,7,8|4,6"
    assert P(str(p)) == p


@pytest.mark.parametrize("bad", ["", "1,,2", "1|a", "0,1", "1,2|2,3"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        P(bad)


@pytest.mark.parametrize("n,count", [(1, 1), (3, 5), (4, 15)])
def test_enumeration_counts(n, count):
    assert len(enumerate_partitions(n)) == count


def test_enumeration_matches_bell_recurrence():
    for n in range(1, 9):
        assert len(enumerate_partitions(n)) == bell(n) == bell_number(n)


def test_enumeration_is_every_partition_once():
    ours = {p.blocks for p in enumerate_partitions(5)}
    assert ours == set(set_partitions(range(1, 6)))


def test_cap():
    with pytest.raises(SizeLimitError, match="cap 4"):
        enumerate_partitions(5, cap=4)
    assert len(partitions_of((2, 5, 9), cap=3)) == 5


def test_leq_examples():
    assert leq(P("1|2|3"), P("1,2|3"))
    assert not leq(P("1,2|3"), P("1|2,3"))
    assert leq(P("1,3|2"), P("1,3|2"))
    with pytest.raises(ValueError):
        leq(P("1|2"), P("1|2|3"))


def test_meet_examples():
    assert meet(P("1,2|3,4"), P("1,2,3|4")) == P("1,2|3|4")
    pi = P("1,3|2,4")
    assert meet(pi, Partition.one(range(1, 5))) == pi
    assert meet(Partition.zero(range(1, 5)), pi) == Partition.zero(range(1, 5))


def test_restrict_examples():
    pi = P("1,2|3,5,7,8|4,6")
    assert restrict(pi, range(4, 9)) == Partition.from_blocks([(5, 7, 8), (4, 6)])
    S = (2, 4, 5)
    assert restrict(Partition.one(range(1, 6)), S) == Partition.one(S)
    assert restrict(Partition.zero(range(1, 6)), S) == Partition.zero(S)
    for bad in ((), (0, 1), (9,)):
        with pytest.raises(ValueError):
            restrict(pi, bad)


def test_kernel_examples():
    assert kernel("aba") == P("1,3|2")
    assert kernel("xxxx") == Partition.one(range(1, 5))
    assert kernel("wxyz") == Partition.zero(range(1, 5))
    with pytest.raises(ValueError):
        kernel("")


def test_noncrossing_examples():
    ident = (1, 2, 3, 4)
    assert is_noncrossing_under(P("1,3|2"), (1, 2, 3))
    assert not is_noncrossing_under(P("1,3|2,4"), ident)
    assert is_noncrossing_under(P("1,3|2,4"), (1, 3, 2, 4))
    with pytest.raises(ValueError):
        is_noncrossing_under(P("1,3|2,4"), (1, 1, 2, 3))


def test_leq_is_partial_order():
    parts = enumerate_partitions(5)
    for a in parts:
        assert leq(a, a)
        for b in parts:
            if leq(a, b) and leq(b, a):
                assert a == b
    # transitivity on a sample of triples
    for a in parts[::7]:
        for b in parts[::5]:
            if leq(a, b):
                assert all(leq(a, c) for c in parts if leq(b, c))


def test_meet_and_join_are_extremal():
    parts = enumerate_partitions(5)
    for s in parts[::3]:
        for p in parts[::4]:
            lower = [t for t in parts if leq(t, s) and leq(t, p)]
            m = meet(s, p)
            assert m in lower and all(leq(t, m) for t in lower)
            upper = [t for t in parts if leq(s, t) and leq(p, t)]
            j = join(s, p)
            assert j in upper and all(leq(j, t) for t in upper)


n_and_two = st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.sampled_from(enumerate_partitions(n)), st.sampled_from(enumerate_partitions(n)),
                        st.sets(st.integers(1, n), min_size=1))
)


@given(n_and_two)
def test_restrict_preserves_order(args):
    s, p, S = args
    if leq(s, p):
        assert leq(restrict(s, S), restrict(p, S))
    m = meet(s, p)
    assert leq(m, s) and leq(m, p)
