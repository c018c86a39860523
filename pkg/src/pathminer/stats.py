"""Nonparametric cohort statistics over activity occurrence counts.

The Kruskal-Wallis omnibus test and Dunn's pairwise post-hoc test (with
Bonferroni adjustment) are implemented directly on mid-ranks, including the
usual tie corrections. Tail probabilities come from an in-house regularized
incomplete gamma (chi-square) and the complementary error function (normal),
keeping results reproducible to well below 1e-12 without depending on a
statistics library.

Cohorts cross a comorbidity axis (diabetes or CKD, taken from the first
event of each case) with the initial heart-failure phenotype, giving six
groups; the per-case occurrence counts of each activity are the samples
compared across groups.
"""

import math
from dataclasses import dataclass

from .errors import InputError
from .model import (
    VISIT_AFTER,
    VISIT_BEFORE,
    Event,
    EventLog,
    Phenotype,
    classify_phenotype,
)

# The activity rows of a cohort report, in canonical order: the two visit
# activities, the four hospitalization outcomes, then the two deaths.
ANALYSIS_ACTIVITIES: tuple[str, ...] = (
    VISIT_BEFORE,
    VISIT_AFTER,
    "CV",
    "HF",
    "Stroke",
    "MI",
    "Death_AnyCause",
    "Death_HF",
)

COHORT_AXES = ("diabetes", "ckd")
_AXIS_PREFIX = {"diabetes": "D", "ckd": "CKD"}

_PHENOTYPE_ORDER = ("HFmrEF", "HFpEF", "HFrEF")


def count_c(activity: str, case: str, log: EventLog) -> int:
    """How often ``activity`` occurs in the given case."""
    return sum(1 for e in log if e.case_id == case and e.activity == activity)


def count_l(activity: str, log: EventLog) -> list[int]:
    """Case-wise occurrence counts of ``activity``, one entry per case.

    The multiset is materialized as a list ordered by case id.
    """
    counts = {case: 0 for case in log.case_ids()}
    for event in log:
        if event.activity == activity:
            counts[event.case_id] += 1
    return [counts[case] for case in sorted(counts)]


# --- rank machinery and tail probabilities ---------------------------------


def midranks(values) -> list[float]:
    """Ranks 1..n with tied values sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def _tie_sum(values) -> float:
    """Sum of t^3 - t over groups of tied values."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values() if t > 1))


def _gamma_series(a: float, x: float, eps: float = 1e-15, itmax: int = 1000) -> float:
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(itmax):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * eps:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float, eps: float = 1e-15, itmax: int = 1000) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, itmax + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), series for small x and a
    Lentz continued fraction otherwise."""
    if a <= 0 or x < 0:
        raise InputError("gamma_q requires a > 0 and x >= 0")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution with ``df`` degrees."""
    return gamma_q(df / 2.0, x / 2.0)


def normal_sf(z: float) -> float:
    """Upper tail of the standard normal distribution."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# --- the tests --------------------------------------------------------------


@dataclass(frozen=True)
class KruskalResult:
    h: float
    df: int
    p_value: float


@dataclass(frozen=True)
class DunnMatrix:
    labels: tuple[str, ...]
    p_values: tuple[tuple[float, ...], ...]

    def pair(self, a: str, b: str) -> float:
        return self.p_values[self.labels.index(a)][self.labels.index(b)]


def _validate_groups(groups):
    if len(groups) < 2:
        raise InputError("at least two groups are required")
    if any(len(g) == 0 for g in groups):
        raise InputError("every group must be non-empty")
    if sum(len(g) for g in groups) < 3:
        raise InputError("at least three observations are required")


def kruskal_wallis(groups) -> KruskalResult:
    """Rank-based k-group omnibus test with tie correction.

    H = [12 / (N (N+1)) * sum R_j^2 / n_j - 3 (N+1)] / (1 - sum(t^3 - t) / (N^3 - N)).
    When every observation is tied the correction degenerates and the result
    is defined as H = 0, p = 1. The p-value is the chi-square upper tail
    with k - 1 degrees of freedom.
    """
    groups = [list(g) for g in groups]
    _validate_groups(groups)
    pooled = [v for g in groups for v in g]
    n_total = len(pooled)
    ranks = midranks(pooled)

    h_raw = 0.0
    offset = 0
    for g in groups:
        rank_sum = sum(ranks[offset:offset + len(g)])
        h_raw += rank_sum * rank_sum / len(g)
        offset += len(g)
    h_raw = 12.0 / (n_total * (n_total + 1)) * h_raw - 3.0 * (n_total + 1)

    correction = 1.0 - _tie_sum(pooled) / (n_total**3 - n_total)
    df = len(groups) - 1
    if correction <= 0.0:
        return KruskalResult(0.0, df, 1.0)
    h = h_raw / correction
    if h < 0.0:  # guard against round-off below zero
        h = 0.0
    return KruskalResult(h, df, chi2_sf(h, df))


def dunn_bonferroni(groups, labels=None) -> DunnMatrix:
    """Dunn's pairwise z-tests on mean ranks, Bonferroni-adjusted.

    z_ij = (Rbar_i - Rbar_j) / sqrt((N (N+1) / 12 - T) (1/n_i + 1/n_j)) with
    tie term T = sum(t^3 - t) / (12 (N - 1)); the two-sided normal p-value
    is multiplied by the number of pairs and clipped at 1.
    """
    groups = [list(g) for g in groups]
    _validate_groups(groups)
    if labels is None:
        labels = tuple(f"group{i + 1}" for i in range(len(groups)))
    labels = tuple(labels)
    if len(labels) != len(groups):
        raise InputError("labels and groups disagree in length")

    pooled = [v for g in groups for v in g]
    n_total = len(pooled)
    ranks = midranks(pooled)
    mean_ranks = []
    offset = 0
    for g in groups:
        mean_ranks.append(sum(ranks[offset:offset + len(g)]) / len(g))
        offset += len(g)

    tie_term = _tie_sum(pooled) / (12.0 * (n_total - 1))
    variance_factor = n_total * (n_total + 1) / 12.0 - tie_term

    k = len(groups)
    pair_count = k * (k - 1) // 2
    matrix = [[1.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            scale = variance_factor * (1.0 / len(groups[i]) + 1.0 / len(groups[j]))
            if scale <= 0.0:
                z = 0.0
            else:
                z = abs(mean_ranks[i] - mean_ranks[j]) / math.sqrt(scale)
            adjusted = min(1.0, pair_count * 2.0 * normal_sf(z))
            matrix[i][j] = matrix[j][i] = adjusted
    return DunnMatrix(labels, tuple(tuple(row) for row in matrix))


# --- cohort comparison -------------------------------------------------------


def case_phenotype(trace: tuple[Event, ...]) -> str | None:
    """Initial phenotype of a case: the first event's phenotype flags, or
    its LVEF when no flag is set. None when undeterminable."""
    if not trace:
        return None
    attrs = trace[0].attributes
    for key, phenotype in (("hfref", Phenotype.HFREF),
                           ("hfmref", Phenotype.HFMREF),
                           ("hfpef", Phenotype.HFPEF)):
        if attrs.get(key) is True:
            return phenotype.value
    lvef = attrs.get("lvef")
    if isinstance(lvef, int) and not isinstance(lvef, bool) and 0 <= lvef <= 100:
        return classify_phenotype(lvef).value
    return None


def case_flag(trace: tuple[Event, ...], axis: str) -> int | None:
    """Comorbidity flag (0/1) of a case from its first event, or None."""
    if not trace:
        return None
    value = trace[0].attributes.get(axis)
    if isinstance(value, bool):
        return int(value)
    return None


@dataclass(frozen=True)
class ActivityTest:
    activity: str
    testable: bool
    reason: str = ""
    kruskal: KruskalResult | None = None
    dunn: DunnMatrix | None = None


@dataclass(frozen=True)
class CohortReport:
    axis: str
    alpha: float
    group_labels: tuple[str, ...]
    group_sizes: dict[str, int]
    excluded_cases: int
    rows: tuple[ActivityTest, ...]


def group_label(axis: str, flag: int, phenotype: str) -> str:
    return f"{_AXIS_PREFIX[axis]}={flag} and {phenotype}"


def compare_cohorts(log: EventLog, axis: str, alpha: float = 0.05) -> CohortReport:
    """Kruskal-Wallis per activity across the six comorbidity-phenotype
    groups, with Dunn post-hoc matrices where the omnibus test rejects.

    Cases whose flag or phenotype cannot be determined are excluded and
    counted. An activity whose six groups cannot all be populated is flagged
    not testable instead of raising.
    """
    if axis not in COHORT_AXES:
        raise InputError(f"axis must be one of {COHORT_AXES}, got {axis!r}")

    traces = log.traces()
    keys = [
        (flag, phenotype)
        for flag in (0, 1)
        for phenotype in _PHENOTYPE_ORDER
    ]
    members: dict[tuple[int, str], list[str]] = {key: [] for key in keys}
    excluded = 0
    for case, trace in traces.items():
        flag = case_flag(trace, axis)
        phenotype = case_phenotype(trace)
        if flag is None or phenotype is None:
            excluded += 1
            continue
        members[(flag, phenotype)].append(case)

    labels = tuple(group_label(axis, flag, phenotype) for flag, phenotype in keys)
    sizes = {
        group_label(axis, flag, phenotype): len(members[(flag, phenotype)])
        for flag, phenotype in keys
    }

    case_counts: dict[tuple[str, str], int] = {}
    for event in log:
        key = (event.case_id, event.activity)
        case_counts[key] = case_counts.get(key, 0) + 1

    rows: list[ActivityTest] = []
    for activity in ANALYSIS_ACTIVITIES:
        groups = [
            [case_counts.get((case, activity), 0) for case in members[key]]
            for key in keys
        ]
        if any(not g for g in groups):
            rows.append(ActivityTest(activity, False, reason="empty group"))
            continue
        result = kruskal_wallis(groups)
        dunn = None
        if result.p_value < alpha:
            dunn = dunn_bonferroni(groups, labels)
        rows.append(ActivityTest(activity, True, kruskal=result, dunn=dunn))
    return CohortReport(axis, alpha, labels, sizes, excluded, tuple(rows))
