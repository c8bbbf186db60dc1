import pickle

import pytest

from adversim.view import View


def test_views_are_interned_by_content():
    assert View(0, "a") is View(0, "a")
    assert View(0, "a") != View(0, "b")
    assert View(0, "a") != View(1, "a")


def test_extend_records_senders_per_round():
    v0, v1, v2 = View(0, 10), View(1, 11), View(2, 12)
    after = v0.extend({2: v2, 1: v1})
    assert after.depth == 1
    assert after.heard_from(1) == frozenset({1, 2})
    assert [s for s, _ in after.rounds[0]] == [1, 2]

    silent = after.extend({})
    assert silent.depth == 2
    assert silent.heard_from(2) == frozenset()
    assert silent.rounds[0] == after.rounds[0]


def test_same_history_gives_same_digest_regardless_of_insertion_order():
    v1, v2 = View(1, "x"), View(2, "y")
    a = View(0, "w").extend({1: v1, 2: v2})
    b = View(0, "w").extend({2: v2, 1: v1})
    assert a is b
    assert a.digest == b.digest


def test_nested_views_are_shared():
    v1 = View(1, 1).extend({})
    a = View(0, 0).extend({}).extend({1: v1})
    b = View(2, 2).extend({}).extend({1: v1})
    assert a.rounds[1][0][1] is b.rounds[1][0][1]


def test_malformed_histories_are_rejected():
    v0, v1 = View(0, 0), View(1, 1)
    with pytest.raises(ValueError):
        v0.extend({0: v0})
    with pytest.raises(ValueError):
        v0.extend({2: v1})
    with pytest.raises(ValueError):
        v0.extend({}).extend({1: v1}).extend({1: v1})
    with pytest.raises(TypeError):
        v0.extend({1: "not a view"})


def test_views_are_immutable_and_picklable():
    v = View(0, (1, 2)).extend({1: View(1, 3)})
    with pytest.raises(AttributeError):
        v.item = 5
    assert pickle.loads(pickle.dumps(v)) is v
    assert v.to_primitive()["digest"] == v.digest
