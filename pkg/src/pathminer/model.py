"""Domain model shared by every analysis stage.

Patient records are sparse: any clinical attribute may be absent. Absence is
encoded as ``None`` and is deliberately distinct from 0, ``False``, and the
empty string; no stage of the pipeline may impute over it silently.
"""

import enum
from dataclasses import dataclass, field
from datetime import date

from .errors import InputError

# One clinical attribute value: a number, flag, text, calendar date, or
# None when the source recorded nothing.
AttrValue = int | float | bool | str | date | None

VISIT_BEFORE = "Visit before CO"
VISIT_AFTER = "Visit after CO"


class Outcome(enum.Enum):
    """Adverse cardiovascular endpoints that may appear in a record."""

    HF = "HF"
    MI = "MI"
    STROKE = "Stroke"
    CV = "CV"
    DEATH_ANY_CAUSE = "Death_AnyCause"
    DEATH_HF = "Death_HF"

    @property
    def is_death(self) -> bool:
        return self in (Outcome.DEATH_ANY_CAUSE, Outcome.DEATH_HF)


OUTCOME_LABELS: tuple[str, ...] = tuple(o.value for o in Outcome)

# Every activity label an event log produced by this package may contain.
ACTIVITY_LABELS: tuple[str, ...] = (VISIT_BEFORE, VISIT_AFTER) + OUTCOME_LABELS


class Phenotype(enum.Enum):
    """Heart-failure phenotype by left ventricular ejection fraction."""

    HFREF = "HFrEF"
    HFMREF = "HFmrEF"
    HFPEF = "HFpEF"


def classify_phenotype(lvef: int) -> Phenotype:
    """Map an LVEF percentage to its phenotype class.

    The boundary value 40 belongs to HFrEF; 41-49 is HFmrEF; 50 and above
    is HFpEF. Values outside [0, 100] are rejected.
    """
    if not 0 <= lvef <= 100:
        raise InputError(f"LVEF must lie in [0, 100], got {lvef}")
    if lvef <= 40:
        return Phenotype.HFREF
    if lvef <= 49:
        return Phenotype.HFMREF
    return Phenotype.HFPEF


@dataclass(frozen=True)
class PatientDatum:
    """One row of patient data: biomarkers, medication doses, comorbidity
    flags, an optional outcome, and the date of the record."""

    pat_id: str
    timestamp: date
    row_index: int
    lvef: int | None = None
    hfref: bool | None = None
    hfmref: bool | None = None
    hfpef: bool | None = None
    weight: float | None = None
    hf_diagnosis_year: int | None = None
    nt_pro_bnp: float | None = None
    diabetes: bool | None = None
    ckd: bool | None = None
    outcome: Outcome | None = None
    wbc: float | None = None
    hstnt: float | None = None
    il6: float | None = None
    urea: float | None = None
    beta_blocker: float | None = None
    acei_arni: float | None = None
    sglt2: float | None = None
    mra: float | None = None
    extra: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.lvef is not None and not 0 <= self.lvef <= 100:
            raise InputError(f"LVEF must lie in [0, 100], got {self.lvef}")
        flags = (self.hfref, self.hfmref, self.hfpef)
        if all(f is not None for f in flags) and sum(bool(f) for f in flags) > 1:
            raise InputError(
                f"patient {self.pat_id}: more than one phenotype flag set"
            )


# Clinical fields copied onto events by the transform stage, in the order of
# the source table.
CLINICAL_FIELDS: tuple[str, ...] = (
    "lvef",
    "hfref",
    "hfmref",
    "hfpef",
    "weight",
    "hf_diagnosis_year",
    "nt_pro_bnp",
    "diabetes",
    "ckd",
    "outcome",
    "wbc",
    "hstnt",
    "il6",
    "urea",
    "beta_blocker",
    "acei_arni",
    "sglt2",
    "mra",
)


@dataclass(frozen=True)
class Event:
    """A case/activity/timestamp triple with an attribute payload."""

    case_id: str
    activity: str
    timestamp: date
    attributes: dict[str, AttrValue] = field(default_factory=dict)

    def __post_init__(self):
        if not self.activity:
            raise InputError("event activity must be non-empty")


@dataclass(frozen=True)
class EventLog:
    """A collection of events with a deterministic trace view.

    Traces group events by case and order them by timestamp; events with
    equal timestamps keep their insertion order, which for transformed
    patient data is source-row order.
    """

    events: tuple[Event, ...] = ()

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def case_ids(self) -> tuple[str, ...]:
        return tuple(sorted({e.case_id for e in self.events}))

    def activities(self) -> set[str]:
        return {e.activity for e in self.events}

    def traces(self) -> dict[str, tuple[Event, ...]]:
        grouped: dict[str, list[Event]] = {}
        for event in self.events:
            grouped.setdefault(event.case_id, []).append(event)
        return {
            case: tuple(sorted(grouped[case], key=lambda e: e.timestamp))
            for case in sorted(grouped)
        }

    def activity_sequences(self) -> dict[str, tuple[str, ...]]:
        return {
            case: tuple(e.activity for e in trace)
            for case, trace in self.traces().items()
        }


@dataclass(frozen=True)
class PatientSequence:
    """All rows of one patient, sorted by (timestamp, source row)."""

    pat_id: str
    data: tuple[PatientDatum, ...]

    def __post_init__(self):
        for earlier, later in zip(self.data, self.data[1:]):
            if later.timestamp < earlier.timestamp:
                raise InputError(
                    f"patient {self.pat_id}: sequence timestamps decrease"
                )

    def __len__(self) -> int:
        return len(self.data)


def build_sequences(data) -> dict[str, PatientSequence]:
    """Partition patient rows into per-patient sequences.

    Rows are ordered by timestamp; the source row index breaks ties, so the
    result is total and deterministic even for same-day records.
    """
    grouped: dict[str, list[PatientDatum]] = {}
    for datum in data:
        grouped.setdefault(datum.pat_id, []).append(datum)
    return {
        pat_id: PatientSequence(
            pat_id,
            tuple(sorted(rows, key=lambda d: (d.timestamp, d.row_index))),
        )
        for pat_id, rows in sorted(grouped.items())
    }
