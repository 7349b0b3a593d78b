import io
import json

import pytest

from app.core.errors import UsageError
from app.views.table_view import TableView, format_cell

RECORDS = [
    {"M": 1, "ranks": [2, 3], "polynomial": "M + 1", "bound_attaining": True},
    {"M": 2, "ranks": [], "polynomial": None, "bound_attaining": False},
]
COLUMNS = ["M", "ranks", "polynomial", "bound_attaining"]


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell([1, [2, 3]]) == "1 2 3"
    assert format_cell(True) == "yes"
    assert format_cell(0) == "0"


def test_tsv():
    text = TableView(RECORDS, COLUMNS).render("tsv")
    assert text.splitlines() == [
        "M\tranks\tpolynomial\tbound_attaining",
        "1\t2 3\tM + 1\tyes",
        "2\t\t\tno",
    ]


def test_json_lines_keep_types():
    lines = TableView(RECORDS, ["M", "ranks"]).render("json").splitlines()
    assert [json.loads(line) for line in lines] == [{"M": 1, "ranks": [2, 3]}, {"M": 2, "ranks": []}]


def test_markdown_escapes_pipes():
    text = TableView([{"polynomial": "period 2: 2 | 1"}]).render("md")
    assert text.splitlines()[2] == "| period 2: 2 \\| 1 |"


def test_columns_default_to_first_record():
    assert TableView(RECORDS).columns == COLUMNS
    assert TableView([]).render("json") == ""


def test_unknown_format():
    with pytest.raises(UsageError):
        TableView(RECORDS).render("csv")


def test_write_to_path_or_stream(tmp_path):
    view = TableView(RECORDS, COLUMNS)
    out = tmp_path / "ranks.tsv"
    view.write("tsv", out=str(out))
    assert out.read_text() == view.render("tsv")

    stream = io.StringIO()
    view.write("md", stream=stream)
    assert stream.getvalue().startswith("| M | ranks |")
    with pytest.raises(UsageError):
        view.write("tsv", out=str(tmp_path / "missing" / "ranks.tsv"))
