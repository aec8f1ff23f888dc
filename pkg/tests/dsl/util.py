from rich.console import Console
from rich.table import Table

from entropy_lab.report import COLUMNS, ReportRow


def render_rows(rows: list[ReportRow]) -> str:
    """Report rows as a plain-text table, for assertion messages."""
    table = Table(*COLUMNS)
    for row in rows:
        table.add_row(*("" if value is None else str(value) for value in row.model_dump().values()))

    console = Console(width=160, record=True, markup=False, color_system=None)
    with console.capture() as capture:
        console.print(table)
    return capture.get()
