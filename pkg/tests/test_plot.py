import pytest

from branchmap.errors import ScaleError
from branchmap.plot import PlotSpec, render_plot_svg


def test_single_point_linear_is_valid_svg():
    svg = render_plot_svg(PlotSpec(rows=((1, 0),), kind="points"))
    assert svg.startswith("<svg xmlns=")
    assert svg.count("<circle") == 1
    assert svg.rstrip().endswith("</svg>")


def test_log_scale_rejects_values_below_one():
    with pytest.raises(ScaleError):
        render_plot_svg(PlotSpec(rows=((1, 0), (2, 5)), kind="points", scale="log"))


def test_log_axis_top_tick_covers_max(m7):
    from branchmap.trajectory import step_sequence

    terms = step_sequence(m7, 235).terms
    rows = tuple(enumerate(terms))
    svg = render_plot_svg(
        PlotSpec(rows=rows, kind="line", scale="log", x_label="step", y_label="value")
    )
    assert ">1000000<" in svg  # the decade above the 428688 peak
    assert svg.count("<polyline") == 1


def test_byte_identical_for_identical_inputs():
    spec = PlotSpec(rows=((0, 3), (1, 7), (2, 1)), kind="line")
    assert render_plot_svg(spec) == render_plot_svg(spec)


def test_mark_per_profile_row():
    rows = tuple((n, n % 7) for n in range(1, 101))
    svg = render_plot_svg(PlotSpec(rows=rows, kind="points"))
    assert svg.count("<circle") == 100


def test_empty_rows_rejected():
    with pytest.raises(ValueError):
        render_plot_svg(PlotSpec(rows=(), kind="line"))


def test_huge_log_ticks_render_full_decimal():
    rows = ((0, 1), (1, 10**26))
    svg = render_plot_svg(PlotSpec(rows=rows, kind="line", scale="log"))
    assert ">" + "1" + "0" * 26 + "<" in svg
    assert "e+" not in svg


def test_linear_ticks_are_round_numbers():
    from branchmap.plot import _linear_ticks

    assert _linear_ticks(428688) == [i * 100000 for i in range(6)]
    assert _linear_ticks(52)[:3] == [0, 20, 40]
    assert _linear_ticks(0) == [0, 1]
