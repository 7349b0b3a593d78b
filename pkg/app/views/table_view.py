# File: app/views/table_view.py

import json
import logging

from app import settings
from app.core.errors import UsageError

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

FORMATS = ("tsv", "json", "md")


def format_cell(value) -> str:
    """
    Renders one table cell: lists become space-separated values, None an
    empty cell, booleans yes/no.
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return " ".join(format_cell(v) for v in value)
    return str(value)


class TableView:
    """
    Formats result records (dicts) as TSV with a header row, JSON lines, or a
    Markdown table. Column order is fixed by `columns`.
    """

    def __init__(self, records, columns=None):
        """
        Initializes the view with a list of records and the columns to show
        (default: the keys of the first record).
        """
        self.records = list(records)
        if columns is None:
            columns = list(self.records[0].keys()) if self.records else []
        self.columns = list(columns)

    def render(self, fmt: str = "tsv") -> str:
        if fmt == "tsv":
            return self.format_tsv()
        if fmt == "json":
            return self.format_json()
        if fmt == "md":
            return self.format_markdown()
        raise UsageError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")

    def format_tsv(self) -> str:
        lines = ["\t".join(self.columns)]
        for record in self.records:
            lines.append("\t".join(format_cell(record.get(c)) for c in self.columns))
        return "\n".join(lines) + "\n"

    def format_json(self) -> str:
        """One JSON object per record, keys in column order."""
        lines = [
            json.dumps({c: record.get(c) for c in self.columns}, default=str)
            for record in self.records
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    def format_markdown(self) -> str:
        lines = [
            "| " + " | ".join(self.columns) + " |",
            "|" + "|".join(" --- " for _ in self.columns) + "|",
        ]
        for record in self.records:
            cells = [format_cell(record.get(c)).replace("|", "\\|") for c in self.columns]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def write(self, fmt: str = "tsv", out=None, stream=None):
        """Writes the rendered table to `out` (a path) or to `stream`."""
        text = self.render(fmt)
        if out:
            try:
                with open(out, "w", encoding="utf-8") as f:
                    f.write(text)
                logger.info(f"Wrote {len(self.records)} records to {out}")
            except OSError as e:
                logger.error(f"Failed to write {out}: {e}")
                raise UsageError(f"cannot write {out}: {e}")
        else:
            stream.write(text)
        return text
