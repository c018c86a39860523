from datetime import date

import pytest

from pathminer.errors import RowError, SchemaError
from pathminer.model import Outcome
from pathminer.patient_csv import parse_patient_csv, write_patient_csv

HEADER = (
    "PatID,LVEF,HFrEF,HFmrEF,HFpEF,Weight,HF diagnosis,NT pro-BNP,Diabetes,"
    "CKD,Outcome,WBC,hsTNT,IL-6,Urea,Beta-Blocker,ACE-I/ARNI,SGLT-2,MRA,Timestamp"
)


def csv_of(*rows: str) -> bytes:
    return ("\n".join((HEADER,) + rows) + "\n").encode()


def test_parses_example_table(table_rows):
    assert len(table_rows) == 4
    first = table_rows[0]
    assert first.pat_id == "007"
    assert first.lvef == 50
    assert first.hfpef is True and first.hfref is False
    assert first.nt_pro_bnp == 750.5
    assert first.diabetes is True
    assert first.ckd is None
    assert first.outcome is None
    assert first.timestamp == date(2023, 2, 20)
    assert first.row_index == 1
    assert table_rows[2].outcome is Outcome.DEATH_HF
    assert table_rows[3].pat_id == "008"
    assert table_rows[3].nt_pro_bnp is None


def test_unknown_outcome_label_is_row_error():
    data = csv_of("007,50,0,0,1,80,2017,750.5,1,,Cardiac_Arrest,,,,,,,,,2023-02-20")
    with pytest.raises(RowError, match="row 1"):
        parse_patient_csv(data)


def test_missing_required_column_names_it():
    broken = HEADER.replace("NT pro-BNP,", "")
    data = (broken + "\n").encode()
    with pytest.raises(SchemaError, match="NT pro-BNP"):
        parse_patient_csv(data)


def test_bad_date_reports_row_number():
    data = csv_of(
        "007,50,0,0,1,80,2017,750.5,1,,,,,,,,,,,2023-02-20",
        "008,50,0,0,1,80,2017,750.5,1,,,,,,,,,,,20/02/2023",
    )
    with pytest.raises(RowError, match="row 2"):
        parse_patient_csv(data)


def test_bad_number_reports_row_number():
    data = csv_of("007,abc,0,0,1,80,2017,750.5,1,,,,,,,,,,,2023-02-20")
    with pytest.raises(RowError, match="row 1"):
        parse_patient_csv(data)


def test_header_match_is_case_insensitive():
    data = (HEADER.lower() + "\n007,50,0,0,1,,,,,,,,,,,,,,,2023-02-20\n").encode()
    rows = parse_patient_csv(data)
    assert rows[0].lvef == 50


def test_booleans_accept_words_and_digits():
    data = csv_of("007,50,FALSE,false,TRUE,,,,1,0,,,,,,,,,,2023-02-20")
    row = parse_patient_csv(data)[0]
    assert row.hfpef is True and row.hfref is False
    assert row.diabetes is True and row.ckd is False


def test_extra_columns_preserved_as_text():
    data = (
        HEADER
        + ",Note\n007,50,0,0,1,80,2017,750.5,1,,,,24.9,10.5,38,100,50,10,12.5,2023-02-20,stable\n"
    ).encode()
    rows = parse_patient_csv(data)
    assert rows[0].extra == {"Note": "stable"}


def test_round_trip_is_fixpoint(table_rows):
    written = write_patient_csv(table_rows)
    reparsed = parse_patient_csv(written)
    assert reparsed == list(table_rows)
    assert write_patient_csv(reparsed) == written


def test_empty_patid_rejected():
    data = csv_of(",50,0,0,1,,,,,,,,,,,,,,,2023-02-20")
    with pytest.raises(RowError):
        parse_patient_csv(data)
