import json
from dataclasses import replace

import pytest

from adversim.complex import (
    as_schedule,
    build,
    check_boundary_path,
    check_chromatic,
    check_sperner,
    cross_validate,
    export,
    from_json,
    initial_complex,
    xy_split_round,
)
from adversim.errors import MalformedComplexError, UnsupportedDimensionError
from adversim.plot import ComplexPlot


def test_initial_complex():
    c = initial_complex(3, ["a", "b", "c"])
    assert c.tops == [(0, 1, 2)]
    assert [v.carrier for v in c.vertices] == [frozenset({0}), frozenset({1}), frozenset({2})]
    assert c.k == 0
    with pytest.raises(ValueError):
        initial_complex(0)
    with pytest.raises(ValueError):
        initial_complex(3, [1, 2])


def test_one_split_of_an_edge():
    c = build(2, None, 1)
    assert len(c.vertices) == 4
    assert len(c.tops) == 3
    assert c.schedule == ((0, 1),)
    assert check_boundary_path(c, 0, 1)
    assert [c.vertex(v).color for v in (0, 2, 3, 1)] == [0, 1, 0, 1]


def test_three_rounds_give_twenty_seven_triangles():
    c = build(3, "RR", 3)
    assert len(c.tops) == 27
    assert c.schedule == ((0, 1), (0, 2), (1, 2))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("k", [0, 1, 3, 6])
def test_splits_stay_chromatic_and_sperner(n, k):
    c = build(n, None, k)
    assert len(c.tops) == 3**k
    assert check_chromatic(c)
    assert check_sperner(c)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_boundary_paths(k):
    c = build(3, "RR", k)
    assert all(check_boundary_path(c, i, j) for i, j in ((0, 1), (0, 2), (1, 2)))


def test_padded_schedule():
    schedule = as_schedule(3, "1-2")
    assert schedule.pairs == ((1, 2), (0, 1), (0, 2))
    assert as_schedule(3, [(2, 0)]).pairs == ((0, 2), (0, 1), (1, 2))
    assert as_schedule(3, None).is_round_robin()


def test_split_rejects_bad_pairs_and_loaded_complexes():
    c = build(3, None, 1)
    with pytest.raises(ValueError):
        xy_split_round(c, (1, 1))
    with pytest.raises(ValueError):
        xy_split_round(c, (0, 3))
    loaded = from_json(export(c, "json"))
    with pytest.raises(MalformedComplexError):
        xy_split_round(loaded, (0, 1))


def test_json_export_round_trip():
    c = build(3, "1-2,0-1,0-2", 2)
    data = json.loads(export(c, "json"))
    assert data["schedule"] == "1-2,0-1"
    assert data["k"] == 2
    loaded = from_json(data)
    assert loaded.to_dict() == c.to_dict()
    assert check_chromatic(loaded)


def test_dot_export():
    text = export(build(2, None, 1), "dot").decode()
    assert text.startswith("graph complex {")
    assert "  0 -- 2;" in text
    assert text.count("--") == 3


def test_svg_is_deterministic():
    c = build(3, None, 2)
    first = export(c, "svg2d")
    assert b"<svg" in first
    assert export(c, "svg2d") == first


def test_plot_saves_the_svg(tmp_path):
    c = build(3, None, 1)
    out = tmp_path / "complex.svg"
    ComplexPlot(c, title="one split").plot(savefig=str(out))
    assert out.read_bytes() == ComplexPlot(c, title="one split").to_svg()


def test_svg_needs_three_processors():
    with pytest.raises(UnsupportedDimensionError):
        export(build(2, None, 1), "svg2d")
    with pytest.raises(UnsupportedDimensionError):
        ComplexPlot(build(4, None, 0))


def test_unknown_export_format():
    with pytest.raises(ValueError):
        export(build(2, None, 0), "png")


@pytest.mark.parametrize("n,k", [(2, 0), (2, 3), (2, 4), (3, 1), (3, 3), (3, 4), (4, 2), (4, 3)])
def test_complex_matches_executions(n, k):
    c = build(n, "RR", k)
    result = cross_validate(c, n, "RR", k)
    assert result
    assert result.executions == result.tops == 3**k


def test_cross_validation_reports_a_mismatch():
    result = cross_validate(build(3, "RR", 2), 3, "RR", 3)
    assert not result.ok
    assert result.witness["reason"] == "simplices and executions differ"
    assert result.to_dict()["executions"] == 27


def test_first_split_of_a_triangle():
    assert len(initial_complex(1).tops) == 1
    c = xy_split_round(initial_complex(3), (1, 2))
    assert len(c.vertices) == 5
    assert len(c.tops) == 3
    assert all(0 in top for top in c.tops)
    assert check_boundary_path(c, 1, 2)


def test_recolored_vertex_breaks_sperner():
    c = build(3, None, 1)
    z = c.vertices[-1]
    c.vertices[-1] = replace(z, color=2)
    assert 2 not in z.carrier
    assert not check_sperner(c)
