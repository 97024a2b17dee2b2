from fractions import Fraction

import pytest

import tropcy as tc


@pytest.fixture
def report():
    r = tc.Report("checks", ["item", "value"])
    r.add("third", Fraction(1, 3), ok=True)
    r.add("flag", False)
    r.add("missing", None, ok=False)
    r.add("point", (Fraction(1, 2), 0))
    return r


@pytest.fixture
def no_color(monkeypatch):
    monkeypatch.setattr(tc.display_params, "color_scheme", "no-color")


def test_rows_and_flags(report):
    assert len(report) == 4
    assert not report.ok
    assert report.failures() == [["missing", None]]
    with pytest.raises(ValueError, match="expected 2 values; got 1"):
        report.add("lonely")


def test_to_dict(report):
    d = report.to_dict()
    assert d["ok"] is False
    assert d["rows"] == [
        ["third", "1/3"],
        ["flag", "no"],
        ["missing", "-"],
        ["point", "(1/2, 0)"],
    ]
    assert d["status"] == [True, None, False, None]


def test_to_frame(report):
    df = report.to_frame()
    assert list(df.columns) == ["item", "value", "status"]
    assert df["value"].tolist() == ["1/3", "no", "-", "(1/2, 0)"]
    informational = tc.Report("info", ["a"])
    informational.add(1)
    assert list(informational.to_frame().columns) == ["a"]


def test_plain_repr(report, no_color):
    text = repr(report)
    assert "\x1b[" not in text
    lines = text.splitlines()
    assert lines[0] == "checks"
    assert lines[1].split() == ["item", "value", "status"]
    assert lines[2].split() == ["third", "1/3", "ok"]
    assert lines[4].split() == ["missing", "-", "FAIL"]


def test_colored_repr(report, monkeypatch):
    monkeypatch.setattr(tc.display_params, "color_scheme", "dark")
    assert "\x1b[" in repr(report)


def test_notes(no_color):
    r = tc.Report("t", ["x"])
    r.add(0.5)
    r.note("a note")
    assert r.ok
    assert repr(r).splitlines()[-1] == "a note"
    assert r.to_dict()["notes"] == ["a note"]


def test_html(report, monkeypatch):
    html = report.to_html()
    assert html.startswith("<p><b>checks</b></p>")
    assert "<td>FAIL</td>" in html and "<th>status</th>" in html
    assert report._repr_mimebundle_() == {"text/html": html}
    monkeypatch.setattr(tc.display_params, "use_mimebundle", False)
    assert report._repr_mimebundle_() is None


def test_html_escapes():
    r = tc.Report("a < b", ["x"])
    r.add("<&>")
    assert "a &lt; b" in r.to_html() and "&lt;&amp;&gt;" in r.to_html()


def test_display_params_validation():
    params = type(tc.display_params)()
    assert params.color_scheme == "dark"
    assert params.defaults()["float_digits"] == 12
    with pytest.raises(ValueError):
        params.color_scheme = "light"
    with pytest.raises(TypeError):
        params.float_digits = "3"
    with pytest.raises(ValueError):
        params.float_digits = 40
    params.float_digits = 3
    assert params.float_digits == 3
