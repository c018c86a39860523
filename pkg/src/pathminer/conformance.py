"""Alignment-based conformance checking.

Alignments pair a trace with a model execution under the standard cost
function: synchronous and silent moves are free, log moves and visible
model moves cost one each. The search is uniform-cost best-first over the
synchronous product; an optional marking-equation lower bound (LP
relaxation) can be enabled as an admissible heuristic, and equality of the
two modes is covered by the test-suite oracles.

Metric conventions, fixed here so results are deterministic:

- fitness(net, log) = 1 - sum(optimal cost) / sum(|trace| + M) where M is
  the cost of the cheapest model-only path from the initial to the final
  marking (the alignment of the empty trace).
- precision is escaping-edges style over aligned visible prefixes: at each
  prefix state, the visible transitions enabled (after saturating silent
  moves) but never observed as the next visible step count as escaping.
- generalization = 1 - mean over visible transitions of 1/sqrt(executions),
  where transitions never executed contribute 1.
- simplicity = 1 / (1 + max(0, mean node degree - 2)).
- f1 = harmonic mean of fitness and precision.
"""

import heapq
import itertools
import math
from dataclasses import dataclass

from .errors import InputError, ModelError, ResourceError
from .model import Event, EventLog
from .petri import Marking, PetriNet, semantics

SYNC = "synchronous"
LOG = "log"
MODEL = "model"
SILENT = "silent"

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class Move:
    kind: str
    activity: str | None = None
    transition: str | None = None

    @property
    def cost(self) -> int:
        return 0 if self.kind in (SYNC, SILENT) else 1


@dataclass(frozen=True)
class Alignment:
    moves: tuple[Move, ...]
    total_cost: int

    def log_projection(self) -> tuple[str, ...]:
        return tuple(
            m.activity for m in self.moves if m.kind in (SYNC, LOG)
        )

    def model_projection(self) -> tuple[str, ...]:
        """Ids of transitions fired in the model, silents included."""
        return tuple(
            m.transition for m in self.moves if m.kind in (SYNC, MODEL, SILENT)
        )

    def visible_model_projection(self) -> tuple[str, ...]:
        return tuple(
            m.transition for m in self.moves if m.kind in (SYNC, MODEL)
        )


def _as_labels(trace) -> tuple[str, ...]:
    return tuple(e.activity if isinstance(e, Event) else str(e) for e in trace)


class _MarkingEquationBound:
    """LP relaxation of the synchronous-product marking equation.

    Any completion to the final state fires a non-negative combination of
    product transitions whose net token effect bridges current and target
    markings, so the LP optimum never exceeds the true remaining cost.
    """

    def __init__(self, net: PetriNet, labels: tuple[str, ...]):
        import numpy as np

        self._np = np
        sem = semantics(net)
        model_places = sorted(net.places)
        place_index = {p: i for i, p in enumerate(model_places)}
        n_model = len(model_places)
        n_pos = len(labels) + 1

        columns = []
        costs = []
        for t in net.transitions:
            effect = np.zeros(n_model + n_pos)
            for p in sem.pre[t.id]:
                effect[place_index[p]] -= 1
            for p in sem.post[t.id]:
                effect[place_index[p]] += 1
            columns.append(effect)
            costs.append(0.0 if t.silent else 1.0)
            if not t.silent:
                for i, label in enumerate(labels):
                    if label == t.label:
                        sync = effect.copy()
                        sync[n_model + i] -= 1
                        sync[n_model + i + 1] += 1
                        columns.append(sync)
                        costs.append(0.0)
        for i in range(len(labels)):
            effect = np.zeros(n_model + n_pos)
            effect[n_model + i] -= 1
            effect[n_model + i + 1] += 1
            columns.append(effect)
            costs.append(1.0)

        self._matrix = np.column_stack(columns) if columns else np.zeros((n_model + n_pos, 0))
        self._costs = np.array(costs)
        self._place_index = place_index
        self._n_model = n_model
        self._n_pos = n_pos
        self._final = net.final_marking
        self._cache: dict[tuple, float] = {}

    def __call__(self, marking: Marking, pos: int) -> float:
        key = (marking.key(), pos)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        from scipy.optimize import linprog

        np = self._np
        target = np.zeros(self._n_model + self._n_pos)
        for place, count in self._final.items():
            target[self._place_index[place]] += count
        target[-1] += 1
        for place, count in marking.items():
            target[self._place_index[place]] -= count
        target[self._n_model + pos] -= 1

        result = linprog(
            self._costs, A_eq=self._matrix, b_eq=target, method="highs"
        )
        bound = result.fun if result.status == 0 else math.inf
        value = max(0.0, bound if bound is not None else 0.0)
        self._cache[key] = value
        return value


def align(
    net: PetriNet,
    trace,
    *,
    cap: int = DEFAULT_CAP,
    heuristic: str = "none",
) -> Alignment:
    """Compute a minimal-cost alignment of ``trace`` against ``net``.

    Raises :class:`ModelError` when the final marking cannot be reached and
    :class:`ResourceError` when more than ``cap`` search states are
    expanded.
    """
    labels = _as_labels(trace)
    sem = semantics(net)
    if heuristic == "none":
        h = lambda marking, pos: 0.0
    elif heuristic == "marking_eq":
        h = _MarkingEquationBound(net, labels)
    else:
        raise InputError(f"unknown heuristic {heuristic!r}")

    n = len(labels)
    start = (net.initial_marking.key(), 0)
    goal = (net.final_marking.key(), n)
    best: dict[tuple, int] = {start: 0}
    parent: dict[tuple, tuple[tuple, Move]] = {}
    tie = itertools.count()
    heap = [(h(net.initial_marking, 0), next(tie), 0, net.initial_marking, 0)]
    expanded = 0

    while heap:
        _, _, g, marking, pos = heapq.heappop(heap)
        state = (marking.key(), pos)
        if g > best.get(state, math.inf):
            continue
        if state == goal:
            moves: list[Move] = []
            cursor = state
            while cursor != start:
                cursor, move = parent[cursor]
                moves.append(move)
            moves.reverse()
            return Alignment(tuple(moves), g)
        expanded += 1
        if expanded > cap:
            raise ResourceError(cap)

        def push(cost: int, next_marking: Marking, next_pos: int, move: Move):
            next_state = (next_marking.key(), next_pos)
            next_g = g + cost
            if next_g < best.get(next_state, math.inf):
                best[next_state] = next_g
                parent[next_state] = (state, move)
                bound = h(next_marking, next_pos)
                if math.isfinite(bound):
                    heapq.heappush(
                        heap, (next_g + bound, next(tie), next_g, next_marking, next_pos)
                    )

        for t in sem.enabled(marking):
            fired = sem.fire(marking, t.id)
            if t.silent:
                push(0, fired, pos, Move(SILENT, transition=t.id))
            else:
                if pos < n and t.label == labels[pos]:
                    push(0, fired, pos + 1, Move(SYNC, activity=t.label, transition=t.id))
                push(1, fired, pos, Move(MODEL, activity=t.label, transition=t.id))
        if pos < n:
            push(1, marking, pos + 1, Move(LOG, activity=labels[pos]))

    raise ModelError("final marking is unreachable for this trace")


def align_log(
    net: PetriNet, log: EventLog, *, cap: int = DEFAULT_CAP, heuristic: str = "none"
) -> dict[str, Alignment]:
    """Align every trace of ``log``, reusing results across equal variants."""
    cache: dict[tuple[str, ...], Alignment] = {}
    out: dict[str, Alignment] = {}
    for case, trace in log.traces().items():
        labels = _as_labels(trace)
        if labels not in cache:
            cache[labels] = align(net, labels, cap=cap, heuristic=heuristic)
        out[case] = cache[labels]
    return out


def model_path_cost(net: PetriNet, *, cap: int = DEFAULT_CAP) -> int:
    """Cost of the cheapest model-only run (the empty-trace alignment)."""
    return align(net, (), cap=cap).total_cost


def fitness(
    net: PetriNet, log: EventLog, *, cap: int = DEFAULT_CAP, heuristic: str = "none"
) -> float:
    traces = log.traces()
    if not traces:
        return 1.0
    worst_model = model_path_cost(net, cap=cap)
    alignments = align_log(net, log, cap=cap, heuristic=heuristic)
    total_cost = sum(a.total_cost for a in alignments.values())
    total_worst = sum(len(t) + worst_model for t in traces.values())
    if total_worst == 0:
        return 1.0
    return 1.0 - total_cost / total_worst


def _silent_closure_enabled(net: PetriNet, sem, marking: Marking, cache: dict) -> frozenset[str]:
    """Visible transitions fireable from ``marking`` after any run of silents."""
    key = marking.key()
    cached = cache.get(key)
    if cached is not None:
        return cached
    seen = {key}
    frontier = [marking]
    visible: set[str] = set()
    while frontier:
        current = frontier.pop()
        for t in sem.enabled(current):
            if t.silent:
                nxt = sem.fire(current, t.id)
                if nxt.key() not in seen:
                    seen.add(nxt.key())
                    frontier.append(nxt)
            else:
                visible.add(t.id)
    result = frozenset(visible)
    cache[key] = result
    return result


def precision(
    net: PetriNet, log: EventLog, *, cap: int = DEFAULT_CAP, heuristic: str = "none"
) -> float:
    sem = semantics(net)
    alignments = align_log(net, log, cap=cap, heuristic=heuristic)
    by_transition = {t.id: t for t in net.transitions}

    weight: dict[tuple, int] = {}
    observed: dict[tuple, set[str]] = {}
    markings_at: dict[tuple, set[Marking]] = {}

    for case in sorted(alignments):
        marking = net.initial_marking
        prefix: tuple[str, ...] = ()
        weight[prefix] = weight.get(prefix, 0) + 1
        markings_at.setdefault(prefix, set()).add(marking)
        for tid in alignments[case].model_projection():
            transition = by_transition[tid]
            if transition.silent:
                marking = sem.fire(marking, tid)
                continue
            observed.setdefault(prefix, set()).add(tid)
            marking = sem.fire(marking, tid)
            prefix = prefix + (tid,)
            weight[prefix] = weight.get(prefix, 0) + 1
            markings_at.setdefault(prefix, set()).add(marking)

    closure_cache: dict = {}
    escaping_mass = 0
    enabled_mass = 0
    for prefix, w in weight.items():
        enabled: set[str] = set()
        for marking in markings_at[prefix]:
            enabled |= _silent_closure_enabled(net, sem, marking, closure_cache)
        seen = observed.get(prefix, set())
        enabled_mass += w * len(enabled)
        escaping_mass += w * len(enabled - seen)
    if enabled_mass == 0:
        return 1.0
    return 1.0 - escaping_mass / enabled_mass


def generalization(
    net: PetriNet, log: EventLog, *, cap: int = DEFAULT_CAP, heuristic: str = "none"
) -> float:
    visible = net.visible_transitions()
    if not visible:
        return 1.0
    counts = {t.id: 0 for t in visible}
    for alignment in align_log(net, log, cap=cap, heuristic=heuristic).values():
        for tid in alignment.visible_model_projection():
            counts[tid] += 1
    penalty = sum(
        1.0 if c == 0 else 1.0 / math.sqrt(c) for c in counts.values()
    )
    return 1.0 - penalty / len(visible)


def simplicity(net: PetriNet) -> float:
    degree: dict[str, int] = {p: 0 for p in net.places}
    degree.update({t.id: 0 for t in net.transitions})
    for source, target in net.arcs:
        degree[source] += 1
        degree[target] += 1
    if not degree:
        return 1.0
    mean_degree = sum(degree.values()) / len(degree)
    return 1.0 / (1.0 + max(0.0, mean_degree - 2.0))


def f1(fitness_value: float, precision_value: float) -> float:
    if fitness_value + precision_value == 0:
        return 0.0
    return 2 * fitness_value * precision_value / (fitness_value + precision_value)


@dataclass(frozen=True)
class ConformanceReport:
    fitness: float
    precision: float
    generalization: float
    simplicity: float
    f1: float


def conformance_report(
    net: PetriNet, log: EventLog, *, cap: int = DEFAULT_CAP, heuristic: str = "none"
) -> ConformanceReport:
    """Evaluate the full metric suite of a model against a log."""
    fit = fitness(net, log, cap=cap, heuristic=heuristic)
    prec = precision(net, log, cap=cap, heuristic=heuristic)
    gen = generalization(net, log, cap=cap, heuristic=heuristic)
    return ConformanceReport(fit, prec, gen, simplicity(net), f1(fit, prec))
