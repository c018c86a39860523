"""Decision mining at Petri-net places.

A decision instance is recorded every time a token in the place of interest
is consumed during the aligned replay of a trace: ``chosen`` is the label of
the consuming transition ("None" for any silent alternative) and the
features are the attributes of the most recent visible event at the moment
the token was deposited (trace-initial tokens fall back to the first
event's attributes). Traces that do not align at cost zero have no
unambiguous decision path; they are skipped and counted.
"""

import random
from collections import Counter, deque
from dataclasses import dataclass, field

from .classifiers import DecisionTreeClassifier, make_classifier
from .conformance import align_log
from .errors import InputError
from .model import AttrValue, EventLog
from .petri import PetriNet, decision_points, semantics
from .stats import case_phenotype

SILENT_CHOICE = "None"


@dataclass(frozen=True)
class DecisionInstance:
    case_id: str
    place: str
    features: dict[str, AttrValue]
    chosen: str


@dataclass(frozen=True)
class ExtractionResult:
    instances: tuple[DecisionInstance, ...]
    skipped_cases: tuple[str, ...]


def extract_instances(
    net: PetriNet, log: EventLog, place: str, *, heuristic: str = "none"
) -> ExtractionResult:
    """Replay aligned traces and capture every choice made at ``place``."""
    if place not in {dp.place for dp in decision_points(net)}:
        raise InputError(f"{place!r} is not a decision point of the net")

    sem = semantics(net)
    by_id = {t.id: t for t in net.transitions}
    alignments = align_log(net, log, heuristic=heuristic)
    traces = log.traces()

    instances: list[DecisionInstance] = []
    skipped: list[str] = []
    for case in sorted(traces):
        alignment = alignments[case]
        if alignment.total_cost != 0:
            skipped.append(case)
            continue
        events = traces[case]
        first_attrs = events[0].attributes if events else {}

        queues: dict[str, deque] = {p: deque() for p in net.places}
        for p, count in net.initial_marking.items():
            for _ in range(count):
                queues[p].append(None)  # resolved to the first event later

        latest_attrs = None
        event_cursor = 0
        for tid in alignment.model_projection():
            transition = by_id[tid]
            event_attrs = None
            if not transition.silent:
                event_attrs = events[event_cursor].attributes
                event_cursor += 1
            for p in sem.pre[tid]:
                deposit_context = queues[p].popleft()
                if p == place:
                    features = deposit_context if deposit_context is not None else first_attrs
                    chosen = transition.label if transition.label else SILENT_CHOICE
                    instances.append(DecisionInstance(case, place, features, chosen))
            produced_context = event_attrs if event_attrs is not None else latest_attrs
            if event_attrs is not None:
                latest_attrs = event_attrs
            for p in sem.post[tid]:
                queues[p].append(produced_context)
    return ExtractionResult(tuple(instances), tuple(skipped))


def distribution(instances) -> dict[str, float]:
    """Label shares as percentages, ordered by descending share."""
    counts = Counter(inst.chosen for inst in instances)
    total = sum(counts.values())
    if total == 0:
        return {}
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return {label: 100.0 * count / total for label, count in ordered}


@dataclass(frozen=True)
class ClassifierReport:
    kind: str
    accuracy: float  # percentage on the holdout
    confusion: dict[str, dict[str, int]]
    train_size: int
    test_size: int
    degenerate: bool = False
    detail: dict = field(default_factory=dict)


def _stratified_split(labels: list[str], split: float, seed: int):
    """Deterministic stratified holdout; returns (train_idx, test_idx)."""
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    train: list[int] = []
    test: list[int] = []
    for label in sorted(by_label):
        indices = list(by_label[label])
        random.Random(f"{seed}:{label}").shuffle(indices)
        n_test = min(len(indices) - 1, round(split * len(indices)))
        n_test = max(n_test, 0)
        test.extend(indices[:n_test])
        train.extend(indices[n_test:])
    if not test and len(labels) >= 2:
        # tiny sets: surrender one training row of the largest class
        largest = max(sorted(by_label), key=lambda l: len(by_label[l]))
        moved = next(i for i in train if labels[i] == largest)
        train.remove(moved)
        test.append(moved)
    return sorted(train), sorted(test)


def train_classifier(
    instances, kind: str, split: float = 0.2, seed: int = 0
) -> ClassifierReport:
    """Train one classifier on a stratified holdout and score it.

    Deterministic under ``seed``. A single-class instance set short-circuits
    to a degenerate 100%-accuracy report.
    """
    instances = list(instances)
    if len(instances) < 2:
        raise InputError("at least two decision instances are required")
    if not 0.0 < split < 1.0:
        raise InputError(f"split must lie in (0, 1), got {split}")
    labels = [inst.chosen for inst in instances]
    rows = [inst.features for inst in instances]

    distinct = sorted(set(labels))
    if len(distinct) == 1:
        only = distinct[0]
        return ClassifierReport(
            kind=kind,
            accuracy=100.0,
            confusion={only: {only: len(instances)}},
            train_size=len(instances),
            test_size=0,
            degenerate=True,
        )

    train_idx, test_idx = _stratified_split(labels, split, seed)
    model = make_classifier(kind)
    model.fit([rows[i] for i in train_idx], [labels[i] for i in train_idx])

    confusion: dict[str, dict[str, int]] = {}
    correct = 0
    for i in test_idx:
        predicted = model.predict(rows[i])
        confusion.setdefault(labels[i], {}).setdefault(predicted, 0)
        confusion[labels[i]][predicted] += 1
        if predicted == labels[i]:
            correct += 1
    accuracy = 100.0 * correct / len(test_idx)
    detail: dict = {}
    if isinstance(model, DecisionTreeClassifier):
        detail["root_split"] = model.root_split()
    return ClassifierReport(
        kind=kind,
        accuracy=accuracy,
        confusion=confusion,
        train_size=len(train_idx),
        test_size=len(test_idx),
        detail=detail,
    )


@dataclass(frozen=True)
class DecisionMiningReport:
    place: str
    phenotype_filter: str | None
    n_instances: int
    skipped_cases: tuple[str, ...]
    distribution: dict[str, float]
    classifiers: tuple[ClassifierReport, ...]


def mine_place(
    net: PetriNet,
    log: EventLog,
    place: str,
    kinds,
    *,
    phenotype_filter: str | None = None,
    split: float = 0.2,
    seed: int = 0,
    heuristic: str = "none",
) -> DecisionMiningReport:
    """Distribution plus classifier reports for one decision place,
    optionally restricted to cases of one phenotype."""
    if phenotype_filter is not None:
        keep = {
            case
            for case, trace in log.traces().items()
            if case_phenotype(trace) == phenotype_filter
        }
        log = EventLog(tuple(e for e in log if e.case_id in keep))
    extraction = extract_instances(net, log, place, heuristic=heuristic)
    reports = tuple(
        train_classifier(extraction.instances, kind, split=split, seed=seed)
        for kind in kinds
    )
    return DecisionMiningReport(
        place=place,
        phenotype_filter=phenotype_filter,
        n_instances=len(extraction.instances),
        skipped_cases=extraction.skipped_cases,
        distribution=distribution(extraction.instances),
        classifiers=reports,
    )
