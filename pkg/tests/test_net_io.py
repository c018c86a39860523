import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathminer.errors import FormatError
from pathminer.net_io import read_net_json, write_dot, write_net_json
from pathminer.petri import Marking, PetriNet, Transition


def test_dejure_json_round_trip(dejure):
    recovered = read_net_json(write_net_json(dejure))
    assert recovered == dejure
    assert write_net_json(recovered) == write_net_json(dejure)


def test_dangling_arc_is_format_error(dejure):
    doc = json.loads(write_net_json(dejure))
    doc["arcs"].append({"source": "p0", "target": "ghost"})
    with pytest.raises(FormatError, match="ghost"):
        read_net_json(json.dumps(doc))


def test_malformed_json_rejected():
    with pytest.raises(FormatError):
        read_net_json(b"{")


def test_dot_marks_silent_transitions_black(dejure):
    dot = write_dot(dejure).decode()
    assert dot.startswith('digraph "dejure" {')
    assert dot.rstrip().endswith("}")
    assert "fillcolor=black" in dot
    assert 'label="Visit before CO"' in dot
    assert dot.count("{") == dot.count("}")


def test_dot_renders_places_as_circles(dejure):
    dot = write_dot(dejure).decode()
    assert "shape=circle" in dot
    assert "shape=box" in dot


@st.composite
def nets(draw):
    n_places = draw(st.integers(min_value=2, max_value=6))
    n_transitions = draw(st.integers(min_value=1, max_value=6))
    places = [f"p{i}" for i in range(n_places)]
    transitions = []
    arcs = set()
    for i in range(n_transitions):
        label = draw(st.one_of(st.none(), st.text(min_size=1, max_size=5)))
        transitions.append(Transition(f"t{i}", label))
        source = draw(st.sampled_from(places))
        target = draw(st.sampled_from(places))
        arcs.add((source, f"t{i}"))
        arcs.add((f"t{i}", target))
    initial = draw(st.sampled_from(places))
    final = draw(st.sampled_from(places))
    return PetriNet(
        places=frozenset(places),
        transitions=tuple(transitions),
        arcs=frozenset(arcs),
        initial_marking=Marking([initial]),
        final_marking=Marking([final]),
        name=draw(st.sampled_from(["n1", "n2"])),
    )


@settings(max_examples=60, deadline=None)
@given(nets())
def test_json_round_trip_identity(net):
    assert read_net_json(write_net_json(net)) == net
