"""
Contains interaction tools: display_params, Report.

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, List, Literal, Optional, Sequence, Tuple, get_args

import pandas as pd
from colorama import Fore, Style

from .utils.exact import format_fraction
from .utils.validator import SimpleValidator

if TYPE_CHECKING:
    from dataclasses import Field


__all__ = ["display_params", "Report"]

ColorSchemeStr = Literal["dark", "no-color"]
TableStyleStr = Literal["classic", "plain"]


@dataclass
class DisplayParams:
    """Parameters for displaying."""

    color_scheme: ColorSchemeStr = SimpleValidator(
        str, literal=get_args(ColorSchemeStr), default="dark"
    )
    table_style: TableStyleStr = SimpleValidator(
        str, literal=get_args(TableStyleStr), default="classic"
    )
    use_mimebundle: bool = SimpleValidator(bool, default=True)
    float_digits: int = SimpleValidator(int, ge=1, le=17, default=12)

    def defaults(self) -> Dict[str, Any]:
        """Returns the default values as a dict."""
        fields: Dict[str, "Field"] = getattr(self.__class__, "__dataclass_fields__")
        return {k: getattr(v.default, "default") for k, v in fields.items()}


display_params = DisplayParams()


def format_value(x: Any) -> str:
    """Plain-text rendering of a report cell."""
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, float):
        return f"{x:.{display_params.float_digits}g}"
    if isinstance(x, tuple) and all(isinstance(c, (int, Fraction)) for c in x):
        return "(" + ", ".join(format_fraction(c) for c in x) + ")"
    if x is None:
        return "-"
    return str(x)


class Report:
    """
    A titled table of checks or measurements; rows may carry a pass flag.

    Parameters
    ----------
    title : str
        Report title.
    columns : Sequence[str]
        Column names.

    """

    def __init__(self, title: str, columns: Sequence[str]) -> None:
        self.title = title
        self.columns = list(columns)
        self.rows: List[List[Any]] = []
        self.flags: List[Optional[bool]] = []
        self.notes: List[str] = []

    def __repr__(self) -> str:
        flagged = any(f is not None for f in self.flags)
        head = self.columns + (["status"] if flagged else [])
        body = [[format_value(v) for v in row] for row in self.rows]
        widths = [len(h) for h in head]
        for row in body:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(cell))
        lines = [self.__style(self.title, None, bold=True)]
        lines.append("  ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip())
        for row, flag in zip(body, self.flags):
            text = "  ".join(c.ljust(w) for c, w in zip(row, widths))
            if flag is not None:
                text += "  " + self.__style("ok" if flag else "FAIL", flag)
            lines.append(text.rstrip())
        lines.extend(self.notes)
        return "\n".join(lines)

    def _repr_mimebundle_(self, *_, **__) -> Optional[Dict[str, Any]]:
        if display_params.use_mimebundle:
            return {"text/html": self.to_html()}

    def __len__(self) -> int:
        return len(self.rows)

    @staticmethod
    def __style(text: str, flag: Optional[bool], bold: bool = False) -> str:
        if display_params.color_scheme == "no-color":
            return text
        color = {True: Fore.GREEN, False: Fore.RED}.get(flag, "")
        return f"{Style.BRIGHT if bold else ''}{color}{text}{Style.RESET_ALL}"

    def add(self, *values: Any, ok: Optional[bool] = None) -> None:
        """
        Appends a row.

        Parameters
        ----------
        *values : Any
            One value per column.
        ok : Optional[bool], optional
            Pass flag of the row, by default None (informational row).

        Raises
        ------
        ValueError
            Raised when the number of values differs from the number of columns.

        """
        if len(values) != len(self.columns):
            raise ValueError(
                f"expected {len(self.columns)} values; got {len(values)} instead"
            )
        self.rows.append(list(values))
        self.flags.append(ok)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def ok(self) -> bool:
        return all(f is not False for f in self.flags)

    def failures(self) -> List[List[Any]]:
        return [row for row, f in zip(self.rows, self.flags) if f is False]

    def to_frame(self) -> pd.DataFrame:
        """The rows as a DataFrame, with a `status` column when flags exist."""
        df = pd.DataFrame(
            [[format_value(v) for v in row] for row in self.rows], columns=self.columns
        )
        if any(f is not None for f in self.flags):
            df["status"] = self.flags
        return df

    def to_html(self) -> str:
        """Return an HTML string for representation."""
        flagged = any(f is not None for f in self.flags)
        html_maker = HTMLTableMaker(
            index=list(range(len(self.rows))),
            columns=self.columns + (["status"] if flagged else []),
        )
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                html_maker[i, j] = make_plain_text(format_value(v))
            if flagged and self.flags[i] is not None:
                html_maker[i, len(row)] = "ok" if self.flags[i] else "FAIL"
        return f"<p><b>{make_plain_text(self.title)}</b></p>\n" + html_maker.make()

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready rendering."""
        return {
            "title": self.title,
            "ok": self.ok,
            "columns": self.columns,
            "rows": [[format_value(v) for v in row] for row in self.rows],
            "status": list(self.flags),
            "notes": list(self.notes),
        }


@dataclass
class HTMLTableMaker:
    """
    Make an HTML table.

    Parameters
    ----------
    index : list
        Table index.
    columns : list
        Table columns.

    """

    index: list
    columns: list

    def __post_init__(self):
        self.data = [
            ["" for _ in range(len(self.columns))] for _ in range(len(self.index))
        ]

    def __getitem__(self, __key: Tuple[int, int]) -> str:
        return self.data[__key[0]][__key[1]]

    def __setitem__(self, __key: Tuple[int, int], __value: str) -> None:
        self.data[__key[0]][__key[1]] = __value

    def make(self) -> str:
        """Make a string of the HTML table."""
        if display_params.table_style == "classic":
            tstyle = """<style type="text/css">
.table-classic th {
  text-align: center;
}
.table-classic td {
  text-align: right;
}
</style>
<table class="table-classic">"""
        else:
            tstyle = "<table>"
        thead = "\n      ".join(f"<th>{x}</th>" for x in self.columns)
        rows = []
        for x in self.data:
            row = "</td>\n      <td>".join(x)
            rows.append("    <tr>\n      <td>" + row + "</td>\n    </tr>\n")
        tbody = "".join(rows)
        return f"""{tstyle}
  <thead>
    <tr>
      {thead}
    </tr>
  </thead>
  <tbody>
{tbody}  </tbody>
</table>
"""


def make_plain_text(text: str) -> str:
    """Escape a string for HTML output."""
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )
