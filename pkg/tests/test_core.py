import pytest
from hypothesis import given, strategies as st

from credalchain.core import (ContractError, IndexSets, LabelState, PartialLabelVector,
                              ProbInterval, decide, dual)

R, I, A = LabelState.RELEVANT, LabelState.IRRELEVANT, LabelState.ABSTAIN


@st.composite
def intervals(draw, strict=False):
    a = draw(st.floats(0, 1))
    b = draw(st.floats(0, 1))
    lo, up = min(a, b), max(a, b)
    if strict and lo == up:
        if up <= 0.5:
            up = lo + 1e-9
        else:
            lo = up - 1e-9
    return ProbInterval(lo, up)


@pytest.mark.parametrize("lo, up, expected", [
    (0.55, 0.70, R),
    (0.20, 0.40, I),
    (0.10, 0.60, A),
    (0.5, 0.9, A),
    (0.1, 0.5, A),
])
def test_decide(lo, up, expected):
    assert decide(ProbInterval(lo, up)) is expected


def test_decide_precise_tie():
    half = ProbInterval.precise(0.5)
    assert decide(half) is A
    assert decide(half, precise_tie_to_one=True) is R
    assert decide(ProbInterval(0.4, 0.6), precise_tie_to_one=True) is A


def test_decide_rejects_non_interval():
    with pytest.raises(ContractError):
        decide((0.2, 0.3))


@pytest.mark.parametrize("lo, up", [(-0.1, 0.5), (0.2, 1.2), (0.6, 0.4), (float("nan"), 0.5)])
def test_invalid_interval(lo, up):
    with pytest.raises(ContractError):
        ProbInterval(lo, up)


def test_interval_tolerance_absorbs_rounding():
    iv = ProbInterval(0.3 + 1e-13, 0.3)
    assert iv.lower > iv.upper


@pytest.mark.parametrize("iv, expected", [
    ((0.3, 0.7), (0.3, 0.7)),
    ((0.1, 0.6), (0.4, 0.9)),
    ((0.5, 0.5), (0.5, 0.5)),
])
def test_dual_examples(iv, expected):
    out = dual(ProbInterval(*iv))
    assert out.lower == pytest.approx(expected[0], abs=1e-15)
    assert out.upper == pytest.approx(expected[1], abs=1e-15)


@given(intervals())
def test_dual_involution(iv):
    assert dual(dual(iv)) == iv
    assert dual(iv).upper + iv.lower == 1.0


@given(intervals(strict=True))
def test_decide_commutes_with_dual(iv):
    flip = {R: I, I: R, A: A}
    assert decide(dual(iv)) is flip[decide(iv)]


@given(st.floats(0, 1))
def test_precise_never_abstains_with_tie_rule(p):
    assert decide(ProbInterval.precise(p), precise_tie_to_one=True) is not A


def test_partial_vector_roundtrip():
    v = PartialLabelVector.parse("0,*,1")
    assert list(v) == [I, A, R]
    assert str(v) == "0,*,1"
    assert v.determined_indices == [0, 2]
    assert v.abstained_indices == [1]
    assert sorted(v.determined_indices + v.abstained_indices) == list(range(v.m))
    assert not v.is_complete


def test_index_sets():
    sets = IndexSets.from_states([R, A, I, A])
    assert sets.relevant == {0} and sets.irrelevant == {2} and sets.abstained == {1, 3}
    assert sets.determined == {0: 1, 2: 0}
    assert len(sets) == 4
    with pytest.raises(ContractError):
        IndexSets(frozenset({1}), frozenset({1}))
