import pytest

from adversim.adversary import AdversarySpec
from adversim.analyzer import AnalyzerProperty
from adversim.analyzers import KingLivenessAnalyzer, KingSoundnessAnalyzer
from adversim.engine import Engine
from adversim.graph import Tournament
from adversim.protocols import (
    KnowledgeVector,
    RegisterProtocol,
    RegisterSimOutcome,
    WriteTriplet,
    check_king_soundness,
    king_condition,
    simulate_rwwf,
    validate_swsr_histories,
    vector_rank,
)
from adversim.protocols.register import Operation, default_budget, history_violations, write_values


def _triplet(writer, seq=1, n=3, final=False):
    return WriteTriplet(writer, write_values(n, writer, f"v{writer}", seq, ()), seq, final=final)


def _kv(owner, *triplets, n=3):
    latest = [None] * n
    for t in triplets:
        latest[t.writer] = t
    return KnowledgeVector(owner, tuple(latest))


def test_write_triplet_validation():
    with pytest.raises(ValueError):
        WriteTriplet(0, (None, 1), 0)
    with pytest.raises(ValueError):
        WriteTriplet(2, (None, 1), 1)
    with pytest.raises(ValueError):
        WriteTriplet(0, (5, 1), 1)
    assert write_values(3, 1, "x", 1, ()) == ("x", None, "x")
    assert write_values(2, 0, "x", 2, (1, 1)) == (None, (2, (1, 1)))


def test_knowledge_vector_needs_its_own_write():
    with pytest.raises(ValueError):
        KnowledgeVector(0, (None, None))
    with pytest.raises(ValueError):
        KnowledgeVector(0, (_triplet(1, n=2), None))


def test_merge_keeps_the_most_advanced_write():
    a = _kv(0, _triplet(0), _triplet(1, seq=1))
    b = _kv(1, _triplet(1, seq=2), _triplet(2, final=True))
    merged = a.merge([b])
    assert merged.owner == 0
    assert merged.summary() == (1, 2, 1)
    assert merged.done == frozenset({2})
    assert vector_rank(merged) > vector_rank(a)


def test_final_triplet_outranks_the_same_write():
    plain = _kv(0, _triplet(0), _triplet(1))
    final = _kv(1, _triplet(1, final=True))
    merged = plain.merge([final])
    assert merged.latest[1].final
    assert merged.done == frozenset({1})


def test_king_condition():
    mine = _kv(0, _triplet(0))
    assert king_condition(mine, {})
    assert not king_condition(mine, {1: _kv(1, _triplet(1))})
    assert king_condition(mine, {1: _kv(1, _triplet(1), _triplet(0))})
    # senders known to be done do not need the write
    assert king_condition(mine, {1: _kv(1, _triplet(1, final=True))})


def test_protocol_needs_processor_count():
    with pytest.raises(ValueError):
        RegisterProtocol()
    with pytest.raises(ValueError):
        RegisterProtocol(n=2, writes=0)


def test_single_processor_writes_every_round():
    outcome = simulate_rwwf(1, 3)
    assert outcome.all_done
    assert outcome.rounds == 3
    assert outcome.output_rounds == [3]
    assert [op.kind for op in outcome.operations] == ["write", "read"] * 3


def test_transitive_rounds_crown_the_source_first():
    outcome = simulate_rwwf(3, 1, rcgs=[Tournament.transitive(3)] * 3)
    assert outcome.output_rounds == [1, 2, 3]
    assert validate_swsr_histories(outcome)
    rounds = [entry["round"] for entry in outcome.linearization]
    assert rounds == sorted(rounds)
    # the source's write takes effect when processor 1 first reads it
    assert {"kind": "write", "pid": 0, "seq": 1, "round": 2} in outcome.linearization


@pytest.mark.parametrize("seed", range(10))
def test_sampled_histories_are_valid(seed):
    outcome = simulate_rwwf(3, 2, seed=seed)
    assert outcome.all_done
    assert all(r is not None for r in outcome.output_rounds)
    assert history_violations(outcome) == []
    assert len(outcome.linearization) == len(outcome.operations) == 12


@pytest.mark.parametrize("seed", range(5))
def test_sampled_histories_are_valid_for_four_processors(seed):
    outcome = simulate_rwwf(4, 3, seed=seed)
    assert outcome.all_done
    assert outcome.rounds <= default_budget(4, 3)
    assert validate_swsr_histories(outcome)


@pytest.mark.slow
def test_histories_are_valid_for_many_seeds():
    for seed in range(10_000):
        outcome = simulate_rwwf(4, 3, seed=seed)
        assert outcome.all_done, seed
        assert validate_swsr_histories(outcome), seed


def test_decreasing_read_is_rejected():
    outcome = RegisterSimOutcome(
        n=2,
        writes=2,
        budget=10,
        rounds=3,
        operations=[
            Operation(0, "write", 1, 1),
            Operation(0, "read", 1, 1, (1, 0)),
            Operation(1, "write", 2, 1),
            Operation(1, "read", 2, 1, (1, 1)),
            Operation(1, "write", 3, 2),
            Operation(1, "read", 3, 2, (0, 2)),
        ],
    )
    problems = history_violations(outcome)
    assert "a reader saw a writer's sequence number decrease" in problems
    assert "a read missed a write completed in an earlier round" in problems
    assert not validate_swsr_histories(outcome)


def test_read_from_the_future_is_rejected():
    outcome = RegisterSimOutcome(
        n=2,
        writes=1,
        budget=10,
        rounds=1,
        operations=[Operation(0, "write", 1, 1), Operation(0, "read", 1, 1, (1, 2))],
    )
    assert history_violations(outcome) == ["a read returned a write issued after the read"]


def test_alternation_is_required():
    outcome = RegisterSimOutcome(n=1, writes=1, budget=1, rounds=1, operations=[Operation(0, "read", 1, 0, (0,))])
    assert "processor 0 does not alternate write and read" in history_violations(outcome)


def test_outcome_document_round_trip():
    outcome = simulate_rwwf(3, 2, seed=7)
    data = outcome.to_dict()
    assert data["kind"] == "register-outcome"
    assert RegisterSimOutcome.from_dict(data) == outcome
    with pytest.raises(ValueError):
        RegisterSimOutcome.from_dict({"kind": "trace"})
    assert len(outcome.to_frame()) == 12
    assert len(outcome.reads_frame()) == 18


def test_kings_are_sound_on_every_two_round_execution():
    prop = AnalyzerProperty(KingSoundnessAnalyzer)
    verdict = Engine().run_exhaustive(RegisterProtocol(n=3, writes=2), AdversarySpec.tp_complete(3), 2, [0, 1, 2], prop)
    assert verdict.holds
    assert verdict.executions == 729


@pytest.mark.slow
def test_kings_are_sound_on_every_three_round_execution():
    prop = AnalyzerProperty(KingSoundnessAnalyzer)
    verdict = Engine().run_exhaustive(RegisterProtocol(n=3, writes=2), AdversarySpec.tp_complete(3), 3, [0, 1, 2], prop)
    assert verdict.holds


def test_soundness_is_only_certified_under_tp_complete():
    trace = Engine().run(RegisterProtocol(n=3), AdversarySpec.tp(3), 3, [0, 1, 2])
    with pytest.raises(ValueError):
        check_king_soundness(trace)


def test_liveness_analyzer():
    engine = Engine()
    trace = engine.run(RegisterProtocol(n=2), AdversarySpec.tp_complete(2), 2, [0, 1], seed=1)
    analyzer = KingLivenessAnalyzer(trace)
    analyzer.run()
    assert analyzer.get_analysis()["passed"] is True
    idle = engine.run(RegisterProtocol(n=2), AdversarySpec.tp_complete(2), 0, [0, 1])
    analyzer = KingLivenessAnalyzer(idle)
    analyzer.run()
    assert analyzer.get_analysis()["failures"] == [{"round": 0, "reason": "no processor finished"}]


def test_default_budget():
    assert default_budget(4, 3) == 768
