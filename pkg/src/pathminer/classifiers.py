"""Small deterministic classifiers over attribute-map features.

All four models consume rows as ``{attribute: value}`` dicts in which any
value may be None. Missing data is part of the contract, never imputed
behind the caller's back:

- majority: ignores features entirely.
- naive Bayes: a missing value simply drops that feature's likelihood term.
- logistic regression: numeric features are mean-imputed and paired with a
  missing indicator column; categoricals are one-hot with an explicit
  missing category.
- decision tree: missing is its own branch content; numeric splits route
  missing rows to whichever side scores better, and categorical splits may
  test for missingness itself.

Nothing here draws randomness: training is deterministic given the rows.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InputError

MISSING = "⊥"  # rendering of an absent categorical value

KINDS = ("majority", "naive-bayes", "logistic", "decision-tree")

# priority when a feature shows mixed value types across rows
_RANK = {"unknown": 0, "numeric": 1, "categorical": 2, "ignored": 3}


def _feature_space(rows: list[dict]) -> dict[str, str]:
    """Infer feature names and kinds (numeric/categorical) over all rows.

    Booleans and strings are categorical; ints and floats numeric; a
    feature mixing both is treated as categorical. Dates and other types
    are ignored.
    """
    kinds: dict[str, str] = {}

    def observe(name: str, kind: str):
        if _RANK[kind] > _RANK.get(kinds.get(name, "unknown"), 0):
            kinds[name] = kind

    for row in rows:
        for name, value in row.items():
            if value is None:
                kinds.setdefault(name, "unknown")
            elif isinstance(value, (bool, str)):
                observe(name, "categorical")
            elif isinstance(value, (int, float)):
                observe(name, "numeric")
            else:
                observe(name, "ignored")
    return {
        name: kind
        for name, kind in sorted(kinds.items())
        if kind in ("numeric", "categorical")
    }


def _categorical(value) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class MajorityClassifier:
    """Predicts the most frequent training label, ties broken
    lexicographically."""

    kind = "majority"

    def fit(self, rows, labels):
        counts = Counter(labels)
        top = max(counts.values())
        self.label_ = min(l for l, c in counts.items() if c == top)
        return self

    def predict(self, row) -> str:
        return self.label_


class NaiveBayesClassifier:
    """Gaussian/categorical naive Bayes with per-row feature skipping."""

    kind = "naive-bayes"

    def fit(self, rows, labels):
        self.space_ = _feature_space(rows)
        self.classes_ = sorted(set(labels))
        counts = Counter(labels)
        total = len(labels)
        self.log_prior_ = {c: math.log(counts[c] / total) for c in self.classes_}

        self.gaussians_: dict[tuple[str, str], tuple[float, float]] = {}
        self.cat_logp_: dict[tuple[str, str, str], float] = {}
        self.categories_: dict[str, list[str]] = {}

        for name, kind in self.space_.items():
            if kind == "numeric":
                for c in self.classes_:
                    values = [
                        float(r[name])
                        for r, l in zip(rows, labels)
                        if l == c and r.get(name) is not None
                    ]
                    if values:
                        mean = sum(values) / len(values)
                        var = sum((v - mean) ** 2 for v in values) / len(values)
                        self.gaussians_[(c, name)] = (mean, var + 1e-9)
            else:
                cats = sorted(
                    {_categorical(r[name]) for r in rows if r.get(name) is not None}
                )
                self.categories_[name] = cats
                for c in self.classes_:
                    observed = [
                        _categorical(r[name])
                        for r, l in zip(rows, labels)
                        if l == c and r.get(name) is not None
                    ]
                    denominator = len(observed) + len(cats)
                    tally = Counter(observed)
                    for cat in cats:
                        self.cat_logp_[(c, name, cat)] = math.log(
                            (tally[cat] + 1) / denominator
                        )
        return self

    def predict(self, row) -> str:
        best_label = None
        best_score = -math.inf
        for c in self.classes_:
            score = self.log_prior_[c]
            for name, kind in self.space_.items():
                value = row.get(name)
                if value is None:
                    continue
                if kind == "numeric":
                    stats = self.gaussians_.get((c, name))
                    if stats is None:
                        continue
                    mean, var = stats
                    score += -0.5 * math.log(2 * math.pi * var) - (
                        (float(value) - mean) ** 2
                    ) / (2 * var)
                else:
                    cat = _categorical(value)
                    logp = self.cat_logp_.get((c, name, cat))
                    if logp is None:
                        cats = self.categories_.get(name, [])
                        logp = -math.log(len(cats) + 1) if cats else 0.0
                    score += logp
            if best_label is None or score > best_score:
                best_label, best_score = c, score
        return best_label


class LogisticClassifier:
    """Multinomial softmax regression trained by full-batch gradient
    descent from a zero start; no randomness involved."""

    kind = "logistic"

    def __init__(self, epochs: int = 400, learning_rate: float = 0.5, l2: float = 1e-3):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.l2 = l2

    def _encode(self, row) -> np.ndarray:
        parts = []
        for name, kind in self.space_.items():
            value = row.get(name)
            if kind == "numeric":
                mean, std = self.scaling_[name]
                if value is None:
                    parts.extend((0.0, 1.0))
                else:
                    parts.extend(((float(value) - mean) / std, 0.0))
            else:
                cats = self.categories_[name]
                cat = _categorical(value)
                parts.extend(1.0 if cat == c else 0.0 for c in cats)
        parts.append(1.0)  # intercept
        return np.array(parts)

    def fit(self, rows, labels):
        self.space_ = _feature_space(rows)
        self.classes_ = sorted(set(labels))
        self.scaling_ = {}
        self.categories_ = {}
        for name, kind in self.space_.items():
            if kind == "numeric":
                values = [float(r[name]) for r in rows if r.get(name) is not None]
                mean = sum(values) / len(values) if values else 0.0
                var = (
                    sum((v - mean) ** 2 for v in values) / len(values)
                    if values
                    else 0.0
                )
                self.scaling_[name] = (mean, math.sqrt(var) or 1.0)
            else:
                cats = {_categorical(r.get(name)) for r in rows}
                self.categories_[name] = sorted(cats)

        matrix = np.stack([self._encode(r) for r in rows])
        index = {c: i for i, c in enumerate(self.classes_)}
        target = np.zeros((len(rows), len(self.classes_)))
        for i, label in enumerate(labels):
            target[i, index[label]] = 1.0

        self.weights_ = np.zeros((matrix.shape[1], len(self.classes_)))
        n = len(rows)
        for _ in range(self.epochs):
            scores = matrix @ self.weights_
            scores -= scores.max(axis=1, keepdims=True)
            exp = np.exp(scores)
            probs = exp / exp.sum(axis=1, keepdims=True)
            gradient = matrix.T @ (probs - target) / n + self.l2 * self.weights_
            self.weights_ -= self.learning_rate * gradient
        return self

    def predict(self, row) -> str:
        scores = self._encode(row) @ self.weights_
        return self.classes_[int(np.argmax(scores))]


@dataclass
class _TreeNode:
    prediction: str
    feature: str | None = None
    threshold: float | None = None
    category: str | None = None
    missing_left: bool = True
    left: "_TreeNode | None" = None
    right: "_TreeNode | None" = None


class DecisionTreeClassifier:
    """CART-style tree on gini impurity with explicit missing handling."""

    kind = "decision-tree"

    def __init__(self, max_depth: int = 6, min_leaf: int = 5, min_split: int = 10):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.min_split = min_split

    @staticmethod
    def _gini(counter: Counter, n: int) -> float:
        if n == 0:
            return 0.0
        return 1.0 - sum((c / n) ** 2 for c in counter.values())

    @staticmethod
    def _majority(labels) -> str:
        counts = Counter(labels)
        top = max(counts.values())
        return min(l for l, c in counts.items() if c == top)

    def _best_split(self, rows, labels):
        n = len(rows)
        parent = self._gini(Counter(labels), n)
        best = None  # (gain, feature, kind-specific payload)
        for name, kind in self.space_.items():
            if kind == "numeric":
                present = [
                    (float(r[name]), l)
                    for r, l in zip(rows, labels)
                    if r.get(name) is not None
                ]
                missing_labels = [l for r, l in zip(rows, labels) if r.get(name) is None]
                if len(present) < 2:
                    continue
                present.sort(key=lambda pair: pair[0])
                missing_counter = Counter(missing_labels)
                left_counter: Counter = Counter()
                right_counter = Counter(l for _, l in present)
                n_left = 0
                n_right = len(present)
                for i in range(len(present) - 1):
                    value, label = present[i]
                    left_counter[label] += 1
                    right_counter[label] -= 1
                    n_left += 1
                    n_right -= 1
                    if present[i + 1][0] == value:
                        continue
                    threshold = (value + present[i + 1][0]) / 2.0
                    for missing_left in (True, False):
                        lc = left_counter.copy()
                        rc = right_counter.copy()
                        ln, rn = n_left, n_right
                        if missing_labels:
                            if missing_left:
                                lc.update(missing_counter)
                                ln += len(missing_labels)
                            else:
                                rc.update(missing_counter)
                                rn += len(missing_labels)
                        if ln < self.min_leaf or rn < self.min_leaf:
                            continue
                        score = (
                            ln / n * self._gini(lc, ln)
                            + rn / n * self._gini(rc, rn)
                        )
                        gain = parent - score
                        key = (-gain, name, threshold, not missing_left)
                        if best is None or key < best[0]:
                            best = (key, name, "numeric", threshold, missing_left, gain)
            else:
                values = [_categorical(r.get(name)) for r in rows]
                for category in sorted(set(values)):
                    left_idx = [i for i, v in enumerate(values) if v == category]
                    right_idx = [i for i, v in enumerate(values) if v != category]
                    if len(left_idx) < self.min_leaf or len(right_idx) < self.min_leaf:
                        continue
                    lc = Counter(labels[i] for i in left_idx)
                    rc = Counter(labels[i] for i in right_idx)
                    score = (
                        len(left_idx) / n * self._gini(lc, len(left_idx))
                        + len(right_idx) / n * self._gini(rc, len(right_idx))
                    )
                    gain = parent - score
                    key = (-gain, name, category, False)
                    if best is None or key < best[0]:
                        best = (key, name, "categorical", category, True, gain)
        if best is None or best[5] <= 1e-12:
            return None
        return best[1:]

    def _build(self, rows, labels, depth: int) -> _TreeNode:
        node = _TreeNode(prediction=self._majority(labels))
        if (
            depth >= self.max_depth
            or len(rows) < self.min_split
            or len(set(labels)) == 1
        ):
            return node
        split = self._best_split(rows, labels)
        if split is None:
            return node
        name, kind, pivot, missing_left, _gain = split
        if kind == "numeric":
            left_idx, right_idx = [], []
            for i, row in enumerate(rows):
                value = row.get(name)
                if value is None:
                    (left_idx if missing_left else right_idx).append(i)
                elif float(value) <= pivot:
                    left_idx.append(i)
                else:
                    right_idx.append(i)
            node.feature, node.threshold, node.missing_left = name, pivot, missing_left
        else:
            values = [_categorical(r.get(name)) for r in rows]
            left_idx = [i for i, v in enumerate(values) if v == pivot]
            right_idx = [i for i, v in enumerate(values) if v != pivot]
            node.feature, node.category = name, pivot
        node.left = self._build(
            [rows[i] for i in left_idx], [labels[i] for i in left_idx], depth + 1
        )
        node.right = self._build(
            [rows[i] for i in right_idx], [labels[i] for i in right_idx], depth + 1
        )
        return node

    def fit(self, rows, labels):
        self.space_ = _feature_space(rows)
        self.root_ = self._build(list(rows), list(labels), 0)
        return self

    def predict(self, row) -> str:
        node = self.root_
        while node.left is not None:
            if node.threshold is not None:
                value = row.get(node.feature)
                if value is None:
                    node = node.left if node.missing_left else node.right
                elif float(value) <= node.threshold:
                    node = node.left
                else:
                    node = node.right
            else:
                value = _categorical(row.get(node.feature))
                node = node.left if value == node.category else node.right
        return node.prediction

    def root_split(self) -> dict:
        root = self.root_
        if root.left is None:
            return {}
        if root.threshold is not None:
            return {"feature": root.feature, "threshold": root.threshold}
        return {"feature": root.feature, "category": root.category}


def make_classifier(kind: str):
    if kind == "majority":
        return MajorityClassifier()
    if kind == "naive-bayes":
        return NaiveBayesClassifier()
    if kind == "logistic":
        return LogisticClassifier()
    if kind == "decision-tree":
        return DecisionTreeClassifier()
    raise InputError(f"unknown classifier kind {kind!r}; expected one of {KINDS}")
