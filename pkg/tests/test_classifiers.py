import random

import pytest

from pathminer.classifiers import (
    DecisionTreeClassifier,
    LogisticClassifier,
    MajorityClassifier,
    NaiveBayesClassifier,
    make_classifier,
)
from pathminer.errors import InputError


def planted_rows(n, seed, threshold=1000.0, missing_rate=0.0):
    """Rows where the label is decided by nt_pro_bnp against a threshold."""
    rng = random.Random(seed)
    rows, labels = [], []
    for _ in range(n):
        value = round(rng.uniform(100.0, 2000.0), 1)
        row = {
            "nt_pro_bnp": value,
            "lvef": rng.randint(10, 70),
            "diabetes": rng.random() < 0.4,
        }
        if missing_rate and rng.random() < missing_rate:
            row["lvef"] = None
        rows.append(row)
        labels.append("Death_HF" if value > threshold else "None")
    return rows, labels


class TestMajority:
    def test_predicts_mode(self):
        model = MajorityClassifier().fit([{}] * 5, ["a", "b", "b", "b", "a"])
        assert model.predict({}) == "b"

    def test_tie_breaks_lexicographically(self):
        model = MajorityClassifier().fit([{}] * 4, ["b", "a", "b", "a"])
        assert model.predict({}) == "a"


class TestNaiveBayes:
    def test_learns_numeric_separation(self):
        rows, labels = planted_rows(400, seed=1)
        model = NaiveBayesClassifier().fit(rows, labels)
        assert model.predict({"nt_pro_bnp": 1900.0}) == "Death_HF"
        assert model.predict({"nt_pro_bnp": 150.0}) == "None"

    def test_missing_feature_is_skipped(self):
        rows, labels = planted_rows(400, seed=2)
        model = NaiveBayesClassifier().fit(rows, labels)
        prediction = model.predict({"nt_pro_bnp": None, "lvef": 30})
        assert prediction in ("Death_HF", "None")  # prior-driven, no crash

    def test_categorical_features(self):
        rows = [{"flag": True}] * 30 + [{"flag": False}] * 30
        labels = ["yes"] * 30 + ["no"] * 30
        model = NaiveBayesClassifier().fit(rows, labels)
        assert model.predict({"flag": True}) == "yes"
        assert model.predict({"flag": False}) == "no"


class TestLogistic:
    def test_learns_numeric_separation(self):
        rows, labels = planted_rows(400, seed=3)
        model = LogisticClassifier().fit(rows, labels)
        correct = sum(model.predict(r) == l for r, l in zip(rows, labels))
        assert correct / len(rows) >= 0.95

    def test_deterministic(self):
        rows, labels = planted_rows(120, seed=4, missing_rate=0.2)
        a = LogisticClassifier().fit(rows, labels)
        b = LogisticClassifier().fit(rows, labels)
        assert all(a.predict(r) == b.predict(r) for r in rows)

    def test_handles_missing_numerics(self):
        rows, labels = planted_rows(200, seed=5, missing_rate=0.5)
        model = LogisticClassifier().fit(rows, labels)
        assert model.predict({"nt_pro_bnp": None, "lvef": None}) in ("Death_HF", "None")


class TestDecisionTree:
    def test_recovers_planted_threshold_at_root(self):
        rows, labels = planted_rows(600, seed=6)
        model = DecisionTreeClassifier().fit(rows, labels)
        root = model.root_split()
        assert root["feature"] == "nt_pro_bnp"
        assert abs(root["threshold"] - 1000.0) < 60.0
        correct = sum(model.predict(r) == l for r, l in zip(rows, labels))
        assert correct / len(rows) >= 0.98

    def test_missing_values_route_consistently(self):
        rows, labels = planted_rows(300, seed=7, missing_rate=0.3)
        model = DecisionTreeClassifier().fit(rows, labels)
        assert model.predict({"nt_pro_bnp": None, "lvef": None}) in ("Death_HF", "None")

    def test_categorical_split_on_missingness(self):
        # the label is determined by whether the flag is recorded at all
        rows = [{"flag": True} for _ in range(30)] + [{"flag": None} for _ in range(30)]
        labels = ["recorded"] * 30 + ["absent"] * 30
        model = DecisionTreeClassifier(min_leaf=2, min_split=4).fit(rows, labels)
        assert model.predict({"flag": True}) == "recorded"
        assert model.predict({"flag": None}) == "absent"


def test_unknown_kind_rejected():
    with pytest.raises(InputError):
        make_classifier("svm")


def test_sanity_floor_against_majority():
    rows, labels = planted_rows(500, seed=8)
    majority = MajorityClassifier().fit(rows, labels)
    baseline = sum(majority.predict(r) == l for r, l in zip(rows, labels)) / len(rows)
    for kind in ("naive-bayes", "decision-tree"):
        model = make_classifier(kind).fit(rows, labels)
        score = sum(model.predict(r) == l for r, l in zip(rows, labels)) / len(rows)
        assert score >= baseline - 0.005
