"""Stochastic cohort generation on the treatment-path reference model.

Each simulated patient performs a random walk over the reference net,
sampling the outgoing transition at every decision place from a configured
probability map keyed by transition label, with ``"None"`` standing for the
silent alternative. Every visible firing emits one patient-data row: visit
labels leave the outcome empty, outcome labels fill it, and the walk stops
at the final place, so deaths are always last. Timestamps strictly increase
per patient by sampled day gaps.

Clinical attributes are sampled once per patient (records repeat them row
by row, like the source registry) from per-attribute samplers with an
optional missing-rate. These defaults are plumbing: they produce plausible
but synthetic values.

Configuration is also accepted as JSON::

    {
      "patients": 240,
      "seed": 7,
      "start_date": "2019-04-01",
      "start_window_days": 365,
      "gap_days": [7, 120],
      "places": {"p1": {"None": 91.86, "HF": 5.78, ...}, ...},
      "attributes": {"lvef": {"kind": "uniform_int", "low": 10, "high": 70}, ...}
    }

Place weights are normalized; they only need to be non-negative with a
positive sum. Omitted places and attributes keep their defaults.
"""

import json
import random
from dataclasses import dataclass, field
from datetime import date, timedelta

from .errors import ConfigError
from .model import Outcome, PatientDatum, classify_phenotype
from .petri import P1, P2, P3, P4, P_END, P_START, build_dejure

SILENT_LABEL = "None"

_OUTCOME_BY_LABEL = {o.value: o for o in Outcome}

# Transition label by place, derived from the reference net structure.
_PLACE_CHOICES: dict[str, dict[str, str]] = {
    P_START: {"Visit before CO": "visit_first", SILENT_LABEL: "skip_first_visit"},
    P1: {
        "Visit before CO": "visit_repeat",
        "HF": "co_hf",
        "CV": "co_cv",
        "Stroke": "co_stroke",
        "MI": "co_mi",
        SILENT_LABEL: "end_record",
    },
    P2: {"Visit after CO": "visit_after", SILENT_LABEL: "skip_after_visit"},
    P3: {"Visit after CO": "visit_after_repeat", SILENT_LABEL: "back_to_watch"},
    P4: {
        "Death_AnyCause": "death_any",
        "Death_HF": "death_hf",
        SILENT_LABEL: "end_without_death",
    },
}

# Default decision probabilities. The observed next-activity shares at the
# two clinically interesting places drive p1 and p4; the remaining places
# have no published distribution, so the start place mirrors p1's dominant
# share for the visit-versus-skip choice and the follow-up places use even
# odds.
DEFAULT_PLACE_WEIGHTS: dict[str, dict[str, float]] = {
    P_START: {"Visit before CO": 91.86, SILENT_LABEL: 8.14},
    P1: {
        SILENT_LABEL: 91.86,
        "HF": 5.78,
        "CV": 1.90,
        "Stroke": 0.30,
        "MI": 0.15,
    },
    P2: {"Visit after CO": 50.0, SILENT_LABEL: 50.0},
    P3: {"Visit after CO": 50.0, SILENT_LABEL: 50.0},
    P4: {SILENT_LABEL: 98.29, "Death_AnyCause": 1.39, "Death_HF": 0.33},
}


@dataclass(frozen=True)
class AttributeSampler:
    """Distribution spec for one clinical attribute.

    kinds: uniform (real in [low, high], rounded to ``decimals``),
    uniform_int, bernoulli (``p``), constant (``value``), absent.
    A draw is replaced by None with probability ``missing_rate``.
    """

    kind: str
    low: float = 0.0
    high: float = 1.0
    decimals: int = 1
    p: float = 0.5
    value: object = None
    missing_rate: float = 0.0

    def sample(self, rng: random.Random):
        if self.missing_rate and rng.random() < self.missing_rate:
            return None
        if self.kind == "uniform":
            return round(rng.uniform(self.low, self.high), self.decimals)
        if self.kind == "uniform_int":
            return rng.randint(int(self.low), int(self.high))
        if self.kind == "bernoulli":
            return rng.random() < self.p
        if self.kind == "constant":
            return self.value
        if self.kind == "absent":
            return None
        raise ConfigError(f"unknown sampler kind {self.kind!r}")


DEFAULT_ATTRIBUTE_SAMPLERS: dict[str, AttributeSampler] = {
    "lvef": AttributeSampler("uniform_int", low=10, high=70),
    "weight": AttributeSampler("uniform", low=50, high=120, missing_rate=0.05),
    "hf_diagnosis_year": AttributeSampler("uniform_int", low=2005, high=2022, missing_rate=0.05),
    "nt_pro_bnp": AttributeSampler("uniform", low=50, high=5000, missing_rate=0.05),
    "diabetes": AttributeSampler("bernoulli", p=0.4),
    "ckd": AttributeSampler("bernoulli", p=0.3),
    "wbc": AttributeSampler("uniform", low=4, high=15, missing_rate=0.1),
    "hstnt": AttributeSampler("uniform", low=5, high=100, missing_rate=0.1),
    "il6": AttributeSampler("uniform", low=1, high=50, missing_rate=0.1),
    "urea": AttributeSampler("uniform", low=15, high=60, missing_rate=0.1),
    "beta_blocker": AttributeSampler("uniform", low=2.5, high=200, missing_rate=0.2),
    "acei_arni": AttributeSampler("uniform", low=2.5, high=100, missing_rate=0.2),
    "sglt2": AttributeSampler("uniform", low=5, high=25, missing_rate=0.2),
    "mra": AttributeSampler("uniform", low=12.5, high=50, missing_rate=0.2),
}

_SAMPLED_FIELDS = tuple(DEFAULT_ATTRIBUTE_SAMPLERS)


def _normalize_weights(place: str, weights: dict[str, float]) -> dict[str, float]:
    choices = _PLACE_CHOICES[place]
    unknown = set(weights) - set(choices)
    if unknown:
        raise ConfigError(f"place {place}: unknown choice labels {sorted(unknown)}")
    if any(w < 0 for w in weights.values()):
        raise ConfigError(f"place {place}: negative weight")
    total = sum(weights.values())
    if total <= 0:
        raise ConfigError(f"place {place}: weights sum to zero")
    return {label: weights[label] / total for label in sorted(weights)}


@dataclass(frozen=True)
class SimulationConfig:
    patients: int = 240
    seed: int = 7
    start_date: date = date(2019, 4, 1)
    start_window_days: int = 365
    gap_days: tuple[int, int] = (7, 120)
    place_probs: dict[str, dict[str, float]] = field(default_factory=dict)
    attributes: dict[str, AttributeSampler] = field(default_factory=dict)

    def __post_init__(self):
        if self.patients < 0:
            raise ConfigError("patients must be non-negative")
        lo, hi = self.gap_days
        if not 1 <= lo <= hi:
            raise ConfigError("gap_days must satisfy 1 <= min <= max")
        probs = {
            place: _normalize_weights(place, dict(DEFAULT_PLACE_WEIGHTS[place]))
            for place in _PLACE_CHOICES
        }
        for place, weights in self.place_probs.items():
            if place not in _PLACE_CHOICES:
                raise ConfigError(f"unknown decision place {place!r}")
            probs[place] = _normalize_weights(place, dict(weights))
        object.__setattr__(self, "place_probs", probs)
        samplers = dict(DEFAULT_ATTRIBUTE_SAMPLERS)
        for name, sampler in self.attributes.items():
            if name not in samplers:
                raise ConfigError(f"unknown attribute {name!r}")
            samplers[name] = sampler
        object.__setattr__(self, "attributes", samplers)


def load_config(data: bytes | str, **overrides) -> SimulationConfig:
    """Build a config from JSON, with keyword arguments taking precedence."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config JSON must be an object")

    kwargs = {}
    try:
        if "patients" in doc:
            kwargs["patients"] = int(doc["patients"])
        if "seed" in doc:
            kwargs["seed"] = int(doc["seed"])
        if "start_date" in doc:
            kwargs["start_date"] = date.fromisoformat(doc["start_date"])
        if "start_window_days" in doc:
            kwargs["start_window_days"] = int(doc["start_window_days"])
        if "gap_days" in doc:
            gap = doc["gap_days"]
            if not (isinstance(gap, list) and len(gap) == 2):
                raise ConfigError("gap_days must be a [min, max] pair")
            kwargs["gap_days"] = (int(gap[0]), int(gap[1]))
        if "places" in doc:
            kwargs["place_probs"] = {
                place: {str(k): float(v) for k, v in weights.items()}
                for place, weights in doc["places"].items()
            }
        if "attributes" in doc:
            samplers = {}
            for name, spec in doc["attributes"].items():
                if not isinstance(spec, dict) or "kind" not in spec:
                    raise ConfigError(f"attribute {name!r}: sampler needs a kind")
                samplers[name] = AttributeSampler(**spec)
            kwargs["attributes"] = samplers
    except ConfigError:
        raise
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None
    kwargs.update(overrides)
    return SimulationConfig(**kwargs)


def _sample_patient_attrs(rng: random.Random, config: SimulationConfig) -> dict:
    attrs = {
        name: config.attributes[name].sample(rng) for name in _SAMPLED_FIELDS
    }
    lvef = attrs.get("lvef")
    if lvef is None:
        attrs.update(hfref=None, hfmref=None, hfpef=None)
    else:
        phenotype = classify_phenotype(lvef).value
        attrs["hfref"] = phenotype == "HFrEF"
        attrs["hfmref"] = phenotype == "HFmrEF"
        attrs["hfpef"] = phenotype == "HFpEF"
    return attrs


def _choose(rng: random.Random, probs: dict[str, float]) -> str:
    draw = rng.random()
    cumulative = 0.0
    last = None
    for label, p in probs.items():
        cumulative += p
        last = label
        if draw < cumulative:
            return label
    return last  # guard against float round-off at the top end


def simulate_detailed(config: SimulationConfig):
    """Run the walk and also report per-place decision counts.

    Returns ``(rows, decisions)`` where ``decisions`` maps each decision
    place to a label -> count dict of the choices actually drawn.
    """
    net = build_dejure()
    postset_place = {
        tid: net.postset(tid)[0]
        for choices in _PLACE_CHOICES.values()
        for tid in choices.values()
    }
    decisions: dict[str, dict[str, int]] = {
        place: {label: 0 for label in sorted(_PLACE_CHOICES[place])}
        for place in _PLACE_CHOICES
    }

    rows: list[PatientDatum] = []
    row_index = 0
    gap_lo, gap_hi = config.gap_days
    for index in range(config.patients):
        rng = random.Random(f"{config.seed}:{index}")
        attrs = _sample_patient_attrs(rng, config)
        pat_id = f"{index + 1:04d}"
        current = config.start_date + timedelta(
            days=rng.randrange(max(1, config.start_window_days))
        )
        place = P_START
        first_row = True
        while place != P_END:
            label = _choose(rng, config.place_probs[place])
            decisions[place][label] += 1
            transition = _PLACE_CHOICES[place][label]
            if label != SILENT_LABEL:
                if not first_row:
                    current += timedelta(days=rng.randint(gap_lo, gap_hi))
                first_row = False
                row_index += 1
                outcome = _OUTCOME_BY_LABEL.get(label)
                rows.append(
                    PatientDatum(
                        pat_id=pat_id,
                        timestamp=current,
                        row_index=row_index,
                        outcome=outcome,
                        **attrs,
                    )
                )
            place = postset_place[transition]
    return rows, decisions


def simulate(config: SimulationConfig) -> list[PatientDatum]:
    """Generate a synthetic cohort; same seed, same rows, bit for bit."""
    rows, _ = simulate_detailed(config)
    return rows
