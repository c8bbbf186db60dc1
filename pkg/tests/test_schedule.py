import pytest

from adversim.schedule import PairSchedule
from adversim.utils import format_pair, parse_pair


def test_round_robin_cycles_in_lexicographic_order():
    rr = PairSchedule.round_robin(3)
    assert rr.pairs == ((0, 1), (0, 2), (1, 2))
    assert rr.cycle_length == 3
    assert rr.pair_at(4) == (0, 2)
    assert rr.take(4) == [(0, 1), (0, 2), (1, 2), (0, 1)]
    assert rr.is_round_robin()
    assert rr.to_string() == "RR"


def test_parse_normalizes_pairs():
    s = PairSchedule.parse("2-1, 0-1,0-2", 3)
    assert s.pairs == ((1, 2), (0, 1), (0, 2))
    assert s.to_string() == "1-2,0-1,0-2"
    assert not s.is_round_robin()
    assert PairSchedule.parse("rr", 4) == PairSchedule.round_robin(4)


def test_repeated_pairs_are_allowed_when_every_pair_appears():
    s = PairSchedule(3, [(0, 1), (0, 1), (0, 2), (1, 2)])
    assert len(s) == 4
    assert list(s)[1] == (0, 1)


def test_unfair_or_malformed_schedules_are_rejected():
    with pytest.raises(ValueError):
        PairSchedule(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        PairSchedule(3, [])
    with pytest.raises(ValueError):
        PairSchedule(3, [(0, 0), (0, 1), (0, 2), (1, 2)])
    with pytest.raises(ValueError):
        PairSchedule(3, [(0, 3)])
    with pytest.raises(ValueError):
        PairSchedule(1)
    with pytest.raises(IndexError):
        PairSchedule.round_robin(3).pair_at(-1)


def test_pair_text_helpers():
    assert parse_pair("3-1") == (1, 3)
    assert format_pair((0, 2)) == "0-2"
    with pytest.raises(ValueError):
        parse_pair("1-1")
    with pytest.raises(ValueError):
        parse_pair("a-b")
    with pytest.raises(ValueError):
        parse_pair("0-1-2")


def test_schedules_hash_by_content():
    a = PairSchedule.parse("1-2,0-1,0-2", 3)
    b = PairSchedule(3, [(2, 1), (1, 0), (2, 0)])
    assert a == b
    assert len({a, b}) == 1
    assert a != PairSchedule.round_robin(3)
