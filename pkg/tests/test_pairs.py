import pytest

from adversim.adversary import AdversarySpec, validate
from adversim.analyzer import AnalyzerProperty
from adversim.analyzers import PairsTranslationAnalyzer
from adversim.engine import Engine
from adversim.graph import Rcg, contains_tournament
from adversim.protocols import PairFilter, PairsCollector, tp_complete_to_tp_pairs, tp_pairs_to_tp_complete
from adversim.schedule import PairSchedule


def test_collector_needs_a_schedule():
    with pytest.raises(TypeError):
        PairsCollector()
    with pytest.raises(TypeError):
        PairFilter(schedule="RR")


def test_describe_uses_the_schedule_string():
    schedule = PairSchedule.parse("1-2,0-1,0-2", 3)
    assert PairsCollector(schedule=schedule).describe() == {"name": "pairs-collect", "params": {"schedule": "1-2,0-1,0-2"}}
    assert PairFilter(schedule=PairSchedule.round_robin(3)).describe()["params"] == {"schedule": "RR"}


def test_one_sweep_emulates_a_tp_complete_round():
    result = tp_pairs_to_tp_complete(["a", "b", "c", "d"], seed=2)
    assert contains_tournament(result.rcg)
    assert result.trace.rounds == 6
    for j, delivered in result.delivered.items():
        for i, item in delivered.items():
            assert result.rcg.has_edge(i, j)
            assert item == "abcd"[i]


def test_collect_holds_on_every_sweep_for_three_processors():
    schedule = PairSchedule.round_robin(3)
    verdict = Engine().run_exhaustive(
        PairsCollector(schedule=schedule),
        AdversarySpec.tp_pairs(3, schedule),
        3,
        [0, 1, 2],
        AnalyzerProperty(PairsTranslationAnalyzer),
    )
    assert verdict.holds
    assert verdict.executions == 27


def test_sweep_replay_rejects_an_unscheduled_pair():
    with pytest.raises(ValueError):
        tp_pairs_to_tp_complete([0, 1, 2], rcgs=[Rcg(3, ((1, 2),)), Rcg(3, ((0, 2),)), Rcg(3, ((1, 2),))])


def test_filter_keeps_the_scheduled_pair():
    rounds = [Rcg.complete(3), Rcg(3, ((0, 1), (2, 0), (2, 1))), Rcg(3, ((1, 0), (0, 2), (1, 2)))]
    kept = tp_complete_to_tp_pairs([0, 1, 2], rcgs=rounds)
    schedule = PairSchedule.round_robin(3)
    assert kept == [g.restrict(schedule.pair_at(idx)) for idx, g in enumerate(rounds)]


@pytest.mark.parametrize("n", [3, 4])
def test_filtered_rounds_are_legal_pair_rounds(n):
    schedule = PairSchedule.round_robin(n)
    spec = AdversarySpec.tp_pairs(n, schedule)
    for seed in range(10):
        kept = tp_complete_to_tp_pairs(list(range(n)), seed=seed)
        assert len(kept) == schedule.cycle_length
        assert all(validate(spec, idx, g) for idx, g in enumerate(kept))


@pytest.mark.slow
def test_filter_holds_on_every_three_round_execution():
    schedule = PairSchedule.round_robin(3)
    verdict = Engine().run_exhaustive(
        PairFilter(schedule=schedule),
        AdversarySpec.tp_complete(3),
        3,
        [0, 1, 2],
        AnalyzerProperty(PairsTranslationAnalyzer),
    )
    assert verdict.holds
    assert verdict.executions == 27**3


def test_analyzer_skips_mismatched_protocols():
    schedule = PairSchedule.round_robin(3)
    trace = Engine().run(PairFilter(schedule=schedule), AdversarySpec.tp_pairs(3, schedule), 3, [0, 1, 2])
    analyzer = PairsTranslationAnalyzer(trace)
    analyzer.run()
    assert analyzer.get_analysis()["passed"] is None
