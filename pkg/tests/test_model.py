from __future__ import annotations

import math
import pickle

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chofisher.errors import DomainError, LabelParseError
from chofisher.model import UNCONFINED, StateSpec, System, format_state_label, parse_radius, parse_state_label


@pytest.mark.parametrize("label,expected", [("1g", (0, 4)), ("1s", (0, 0)), ("2m", (1, 9)), ("2p", (1, 1)), ("3D", (2, 2))])
def test_parse_state_label(label, expected):
    assert parse_state_label(label) == expected


@pytest.mark.parametrize("label", ["0s", "1j", "s1", "", "12", "1ss", "-1p"])
def test_parse_state_label_rejects(label):
    with pytest.raises(LabelParseError):
        parse_state_label(label)


@given(n_r=st.integers(0, 20), l=st.integers(0, 16))
def test_label_round_trip(n_r, l):
    assert parse_state_label(format_state_label(n_r, l)) == (n_r, l)


def test_letters_skip_j():
    assert [format_state_label(0, l)[1] for l in range(10)] == list("spdfghiklm")


def test_spec_invariants():
    with pytest.raises(DomainError):
        StateSpec(0, 1, 2, 1.0, 1.0, "cho")
    with pytest.raises(DomainError):
        StateSpec(0, 0, 0, 1.0, UNCONFINED, "pisb")
    with pytest.raises(DomainError):
        StateSpec(0, 0, 0, 1.0, 2.0, "fho")
    with pytest.raises(DomainError):
        StateSpec(0, 0, 0, -1.0, 2.0, "cho")
    with pytest.raises(DomainError):
        StateSpec(0, 0, 0, 1.0, 0.0, "cho")
    with pytest.raises(DomainError):
        StateSpec(-1, 0, 0, 1.0, 1.0, "cho")


def test_spec_principal_number_is_derived():
    spec = StateSpec(2, 3, -1, 1.0, 1.0, System.CHO)
    assert spec.n == 7
    assert spec.label == "3f"
    assert "n" not in {f for f in spec.__dataclass_fields__}


def test_unconfined_is_a_distinct_value():
    assert parse_radius("inf") is UNCONFINED
    assert parse_radius(math.inf) is UNCONFINED
    assert parse_radius("2.5") == 2.5
    assert StateSpec(0, 0, r_c="inf").r_c is UNCONFINED
    assert pickle.loads(pickle.dumps(UNCONFINED)) is UNCONFINED
    assert str(UNCONFINED) == "inf" and float(UNCONFINED) == math.inf
