"""Labeled Petri nets with silent transitions and token-firing semantics."""

from dataclasses import dataclass

from .errors import InputError, SemanticsError
from .model import VISIT_AFTER, VISIT_BEFORE, Outcome


@dataclass(frozen=True)
class Transition:
    """A net transition; ``label is None`` marks it silent."""

    id: str
    label: str | None = None

    @property
    def silent(self) -> bool:
        return self.label is None


class Marking:
    """An immutable multiset of place ids."""

    __slots__ = ("_counts", "_key")

    def __init__(self, places=()):
        counts: dict[str, int] = {}
        if isinstance(places, dict):
            items = places.items()
        else:
            items = ((p, 1) for p in places)
        for place, n in items:
            if n < 0:
                raise InputError(f"negative token count for place {place}")
            if n:
                counts[place] = counts.get(place, 0) + n
        self._counts = counts
        self._key = tuple(sorted(counts.items()))

    def __getitem__(self, place: str) -> int:
        return self._counts.get(place, 0)

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, Marking) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}:{n}" for p, n in self._key)
        return f"Marking({{{inner}}})"

    def items(self):
        return self._key

    def key(self) -> tuple:
        return self._key


@dataclass(frozen=True)
class PetriNet:
    places: frozenset[str]
    transitions: tuple[Transition, ...]
    arcs: frozenset[tuple[str, str]]
    initial_marking: Marking
    final_marking: Marking
    name: str = "net"

    def __post_init__(self):
        trans_ids = {t.id for t in self.transitions}
        if len(trans_ids) != len(self.transitions):
            raise InputError("duplicate transition ids")
        if trans_ids & self.places:
            raise InputError("place and transition ids overlap")
        for source, target in self.arcs:
            src_place = source in self.places
            tgt_place = target in self.places
            if src_place == tgt_place:
                raise InputError(f"arc {source}->{target} is not bipartite")
            if source not in self.places | trans_ids or target not in self.places | trans_ids:
                raise InputError(f"arc {source}->{target} references unknown id")
        for marking in (self.initial_marking, self.final_marking):
            for place in marking:
                if place not in self.places:
                    raise InputError(f"marking references unknown place {place}")

    def __eq__(self, other) -> bool:
        """Structural equality; transition order and net name are cosmetic."""
        return (
            isinstance(other, PetriNet)
            and self.places == other.places
            and frozenset(self.transitions) == frozenset(other.transitions)
            and self.arcs == other.arcs
            and self.initial_marking == other.initial_marking
            and self.final_marking == other.final_marking
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.places,
                frozenset(self.transitions),
                self.arcs,
                self.initial_marking,
                self.final_marking,
            )
        )

    def transition(self, tid: str) -> Transition:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise InputError(f"unknown transition {tid}")

    def preset(self, tid: str) -> tuple[str, ...]:
        return tuple(sorted(s for s, t in self.arcs if t == tid))

    def postset(self, tid: str) -> tuple[str, ...]:
        return tuple(sorted(t for s, t in self.arcs if s == tid))

    def place_outputs(self, place: str) -> tuple[str, ...]:
        return tuple(sorted(t for s, t in self.arcs if s == place))

    def visible_transitions(self) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if not t.silent)

    def labels(self) -> set[str]:
        return {t.label for t in self.transitions if t.label is not None}


@dataclass(frozen=True)
class DecisionPoint:
    """A place where more than one transition competes for the token."""

    place: str
    transitions: tuple[Transition, ...]


class _Semantics:
    """Cached preset/postset lookup for repeated firing on one net."""

    def __init__(self, net: PetriNet):
        self.net = net
        self.pre: dict[str, tuple[str, ...]] = {}
        self.post: dict[str, tuple[str, ...]] = {}
        for t in net.transitions:
            self.pre[t.id] = net.preset(t.id)
            self.post[t.id] = net.postset(t.id)

    def enabled(self, marking: Marking) -> list[Transition]:
        out = []
        for t in self.net.transitions:
            need: dict[str, int] = {}
            for place in self.pre[t.id]:
                need[place] = need.get(place, 0) + 1
            if all(marking[p] >= n for p, n in need.items()):
                out.append(t)
        return out

    def fire(self, marking: Marking, tid: str) -> Marking:
        counts = dict(marking.items())
        for place in self.pre[tid]:
            if counts.get(place, 0) <= 0:
                raise SemanticsError(f"transition {tid} is not enabled")
            counts[place] -= 1
        for place in self.post[tid]:
            counts[place] = counts.get(place, 0) + 1
        return Marking({p: n for p, n in counts.items() if n})


def semantics(net: PetriNet) -> _Semantics:
    return _Semantics(net)


def enabled(net: PetriNet, marking: Marking) -> list[Transition]:
    """Transitions whose every input place holds a token under ``marking``."""
    return semantics(net).enabled(marking)


def fire(net: PetriNet, marking: Marking, transition: str | Transition) -> Marking:
    """Fire a transition: consume one token per input arc, produce one per
    output arc. Firing a disabled transition is an error."""
    tid = transition.id if isinstance(transition, Transition) else transition
    net.transition(tid)
    return semantics(net).fire(marking, tid)


def decision_points(net: PetriNet) -> list[DecisionPoint]:
    """All places with at least two outgoing arcs, with their transitions."""
    by_id = {t.id: t for t in net.transitions}
    points = []
    for place in sorted(net.places):
        outs = net.place_outputs(place)
        if len(outs) >= 2:
            points.append(DecisionPoint(place, tuple(by_id[t] for t in outs)))
    return points


# Stable ids for the hand-built treatment-path reference model. Place names
# follow the usual sequential convention; the decision-mining API and the
# simulator address places by these ids.
P_START, P1, P2, P3, P4, P_END = "p0", "p1", "p2", "p3", "p4", "p_end"


def build_dejure() -> PetriNet:
    """The expert reference model of treatment paths.

    From the start, a patient either has a first visit or skips straight to
    the central state p1. At p1 the record may continue with more visits
    (self-loop), branch into one of the four cardiovascular outcomes, or
    move silently to p4 where it ends in a death event or in silence. After
    an outcome, optional follow-up visits lead back to p1, so recurrent
    outcomes remain replayable.
    """
    transitions = (
        Transition("visit_first", VISIT_BEFORE),
        Transition("skip_first_visit"),
        Transition("visit_repeat", VISIT_BEFORE),
        Transition("co_hf", Outcome.HF.value),
        Transition("co_cv", Outcome.CV.value),
        Transition("co_stroke", Outcome.STROKE.value),
        Transition("co_mi", Outcome.MI.value),
        Transition("end_record"),
        Transition("visit_after", VISIT_AFTER),
        Transition("skip_after_visit"),
        Transition("visit_after_repeat", VISIT_AFTER),
        Transition("back_to_watch"),
        Transition("death_any", Outcome.DEATH_ANY_CAUSE.value),
        Transition("death_hf", Outcome.DEATH_HF.value),
        Transition("end_without_death"),
    )
    arcs = {
        (P_START, "visit_first"), ("visit_first", P1),
        (P_START, "skip_first_visit"), ("skip_first_visit", P1),
        (P1, "visit_repeat"), ("visit_repeat", P1),
        (P1, "co_hf"), ("co_hf", P2),
        (P1, "co_cv"), ("co_cv", P2),
        (P1, "co_stroke"), ("co_stroke", P2),
        (P1, "co_mi"), ("co_mi", P2),
        (P1, "end_record"), ("end_record", P4),
        (P2, "visit_after"), ("visit_after", P3),
        (P2, "skip_after_visit"), ("skip_after_visit", P3),
        (P3, "visit_after_repeat"), ("visit_after_repeat", P3),
        (P3, "back_to_watch"), ("back_to_watch", P1),
        (P4, "death_any"), ("death_any", P_END),
        (P4, "death_hf"), ("death_hf", P_END),
        (P4, "end_without_death"), ("end_without_death", P_END),
    }
    return PetriNet(
        places=frozenset({P_START, P1, P2, P3, P4, P_END}),
        transitions=transitions,
        arcs=frozenset(arcs),
        initial_marking=Marking([P_START]),
        final_marking=Marking([P_END]),
        name="dejure",
    )
