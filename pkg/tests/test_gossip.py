import pytest

from adversim.adversary import AdversarySpec
from adversim.analyzer import AnalyzerProperty
from adversim.analyzers import GossipProgressAnalyzer, TournamentEmulationAnalyzer
from adversim.engine import Engine
from adversim.errors import ProtocolViolation
from adversim.graph import Rcg, contains_tournament
from adversim.protocols import GossipProtocol, check_gossip_progress, emulate_tp_complete_over_tp, gossip_rounds
from adversim.protocols.gossip import emulated_rcg, heard_by
from adversim.trace import ExecutionTrace


def test_gossip_rounds():
    assert [gossip_rounds(n) for n in (1, 2, 3, 5)] == [1, 3, 5, 9]


def test_emulated_rcg_has_edge_when_id_is_known():
    rcg = emulated_rcg([frozenset({0}), frozenset({0, 1}), frozenset({1, 2})])
    assert rcg.edges == ((0, 1), (1, 2))


def test_gossip_receive_takes_the_union():
    protocol = GossipProtocol(rounds=1)
    state = protocol.init(0, "x")
    nxt = protocol.receive(state, {1: frozenset({1, 3}), 2: frozenset({2})})
    assert nxt.s == frozenset({0, 1, 2, 3})
    assert nxt.round == 1
    assert protocol.output(state) is None
    assert protocol.output(nxt) == nxt.s


def test_emulation_holds_on_every_execution_for_two_processors():
    prop = AnalyzerProperty(TournamentEmulationAnalyzer)
    verdict = Engine().run_exhaustive(GossipProtocol(rounds=3), AdversarySpec.tp(2), 3, [0, 1], prop)
    assert verdict.holds
    assert verdict.executions == 27


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_emulation_holds_on_sampled_executions(n):
    for seed in range(20):
        result = emulate_tp_complete_over_tp(list(range(n)), seed=seed)
        assert contains_tournament(result.rcg)
        assert result.trace.rounds == gossip_rounds(n)
        assert all(out is not None for out in result.trace.outputs)
        assert check_gossip_progress(result.trace) == []


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_emulation_holds_for_many_seeds(n):
    for seed in range(100_000):
        assert contains_tournament(emulate_tp_complete_over_tp(list(range(n)), seed=seed).rcg)


def test_progress_is_measured_by_who_heard_of_each_endpoint():
    rounds = [Rcg(3, ((1, 2), (2, 0), (2, 1))), Rcg(3, ((0, 2), (2, 1)))]
    trace = Engine().replay(GossipProtocol(), AdversarySpec.tp(3), [0, 1, 2], rounds)
    assert check_gossip_progress(trace) == []
    # the id sets of the uncovered pair do not grow in round 2
    before, after = trace.states[1], trace.states[2]
    assert len(before[0].s) + len(before[1].s) == len(after[0].s) + len(after[1].s) == 4
    assert heard_by(after, 0) == frozenset({0, 2})


def test_too_few_rounds_raise_a_protocol_violation():
    with pytest.raises(ProtocolViolation) as info:
        emulate_tp_complete_over_tp([0, 1, 2], rounds=1, rcgs=[Rcg(3, ((0, 1), (1, 2)))])
    assert info.value.detail == [(0, 2)]
    assert info.value.trace.violations[0]["uncovered"] == [[0, 2]]


def test_progress_check_needs_tp():
    trace = Engine().run(GossipProtocol(rounds=3), AdversarySpec.tp_complete(3), 3, [0, 1, 2])
    with pytest.raises(ValueError):
        check_gossip_progress(trace)
    analyzer = GossipProgressAnalyzer(trace)
    analyzer.run()
    assert analyzer.get_analysis()["passed"] is None
    assert "skipped" in analyzer.get_analysis()


def test_emulation_analyzer_works_from_saved_outputs(tmp_path):
    trace = emulate_tp_complete_over_tp([0, 1, 2, 3], seed=3).trace
    loaded = ExecutionTrace.load(trace.save(tmp_path / "gossip.json"))
    analyzer = TournamentEmulationAnalyzer(loaded)
    analyzer.run()
    analysis = analyzer.get_analysis()
    assert analysis["passed"] is True
    assert analysis["first_violating_round"] is None


def test_emulation_analyzer_reports_uncovered_pairs():
    trace = Engine().replay(GossipProtocol(rounds=1), AdversarySpec.tp(3), [0, 1, 2], [Rcg(3, ((0, 1), (1, 2)))])
    analyzer = TournamentEmulationAnalyzer(trace)
    analyzer.run()
    analysis = analyzer.get_analysis()
    assert analysis["passed"] is False
    assert analysis["failures"] == [{"round": 1, "uncovered": [[0, 2]]}]
