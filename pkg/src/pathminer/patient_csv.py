"""Reading and writing the tabular patient-data format.

The file is comma-separated UTF-8 with a header row. Required columns (case
insensitive): PatID, LVEF, HFrEF, HFmrEF, HFpEF, Weight, HF diagnosis,
NT pro-BNP, Diabetes, CKD, Outcome, WBC, hsTNT, IL-6, Urea, Beta-Blocker,
ACE-I/ARNI, SGLT-2, MRA, Timestamp. Extra columns are carried along as text
attributes. An empty cell means the value is absent.
"""

import csv
import io
from datetime import date

from .errors import RowError, SchemaError
from .model import Outcome, PatientDatum

# Column name -> PatientDatum field, in canonical file order.
COLUMNS: tuple[tuple[str, str], ...] = (
    ("PatID", "pat_id"),
    ("LVEF", "lvef"),
    ("HFrEF", "hfref"),
    ("HFmrEF", "hfmref"),
    ("HFpEF", "hfpef"),
    ("Weight", "weight"),
    ("HF diagnosis", "hf_diagnosis_year"),
    ("NT pro-BNP", "nt_pro_bnp"),
    ("Diabetes", "diabetes"),
    ("CKD", "ckd"),
    ("Outcome", "outcome"),
    ("WBC", "wbc"),
    ("hsTNT", "hstnt"),
    ("IL-6", "il6"),
    ("Urea", "urea"),
    ("Beta-Blocker", "beta_blocker"),
    ("ACE-I/ARNI", "acei_arni"),
    ("SGLT-2", "sglt2"),
    ("MRA", "mra"),
    ("Timestamp", "timestamp"),
)

_INT_FIELDS = {"lvef", "hf_diagnosis_year"}
_BOOL_FIELDS = {"hfref", "hfmref", "hfpef", "diabetes", "ckd"}
_REAL_FIELDS = {
    "weight", "nt_pro_bnp", "wbc", "hstnt", "il6", "urea",
    "beta_blocker", "acei_arni", "sglt2", "mra",
}

_TRUE = {"1", "true"}
_FALSE = {"0", "false"}


def _parse_cell(field: str, text: str, row: int):
    if field == "pat_id":
        if not text:
            raise RowError(row, "PatID must not be empty")
        return text
    if not text:
        return None
    if field == "timestamp":
        try:
            return date.fromisoformat(text)
        except ValueError:
            raise RowError(row, f"bad date {text!r}, expected YYYY-MM-DD") from None
    if field == "outcome":
        try:
            return Outcome(text)
        except ValueError:
            raise RowError(row, f"unknown outcome label {text!r}") from None
    if field in _BOOL_FIELDS:
        lowered = text.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise RowError(row, f"bad boolean {text!r} in column for {field}")
    if field in _INT_FIELDS:
        try:
            return int(text)
        except ValueError:
            raise RowError(row, f"bad integer {text!r} in column for {field}") from None
    try:
        return float(text)
    except ValueError:
        raise RowError(row, f"bad number {text!r} in column for {field}") from None


def parse_patient_csv(data: bytes | str) -> list[PatientDatum]:
    """Parse a patient table into typed rows.

    Row indices are assigned in file order starting at 1 and are later used
    to break timestamp ties deterministically.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty file: header row required") from None

    lookup = {name.strip().lower(): i for i, name in enumerate(header)}
    positions: dict[str, int] = {}
    for column, field in COLUMNS:
        if column.lower() not in lookup:
            raise SchemaError(f"missing required column {column!r}")
        positions[field] = lookup[column.lower()]
    known = set(positions.values())
    extras = [(name.strip(), i) for i, name in enumerate(header) if i not in known]

    rows: list[PatientDatum] = []
    for row_index, cells in enumerate(reader, start=1):
        if not any(cell.strip() for cell in cells):
            continue
        values = {}
        for field, pos in positions.items():
            cell = cells[pos].strip() if pos < len(cells) else ""
            values[field] = _parse_cell(field, cell, row_index)
        if values["timestamp"] is None:
            raise RowError(row_index, "Timestamp must not be empty")
        extra = {}
        for name, pos in extras:
            cell = cells[pos].strip() if pos < len(cells) else ""
            if cell:
                extra[name] = cell
        try:
            rows.append(PatientDatum(row_index=row_index, extra=extra, **values))
        except Exception as exc:
            raise RowError(row_index, str(exc)) from None
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Outcome):
        return value.value
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def write_patient_csv(rows) -> bytes:
    """Serialize patient rows back to the canonical column layout.

    Absent values become empty cells and booleans are written as 0/1, so a
    parse -> write -> parse round trip is a fixpoint.
    """
    extra_names = sorted({name for r in rows for name in r.extra})
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([column for column, _ in COLUMNS] + extra_names)
    for row in rows:
        cells = [_format_cell(getattr(row, field)) for _, field in COLUMNS]
        cells.extend(row.extra.get(name, "") for name in extra_names)
        writer.writerow(cells)
    return out.getvalue().encode("utf-8")
