from __future__ import annotations

import pytest
from hypothesis import given

from pislice.terms import (
    A_HOLE,
    HOLE,
    NIL,
    TAU,
    Bang,
    BOut,
    Choice,
    IllFormed,
    In,
    Input,
    Nu,
    Out,
    Output,
    Par,
    Renaming,
    check_action,
    has_hole,
    is_bound,
    size,
    target_context,
    well_formed,
)

from strategies import processes


def test_binders_extend_the_context():
    assert well_formed(Input(0, Output(0, 0, NIL)), 1)
    assert well_formed(Nu(Output(1, 0, NIL)), 1)
    assert not well_formed(Output(1, 0, NIL), 1)
    assert not well_formed(Nu(Output(2, 0, NIL)), 1)


def test_hole_is_well_formed_anywhere():
    assert well_formed(HOLE, 0)
    assert well_formed(Par(HOLE, Nu(HOLE)), 0)


def test_erased_payload_is_well_formed():
    assert well_formed(Output(0, None, NIL), 1)


def test_action_classification():
    assert is_bound(In(0)) and is_bound(BOut(0))
    assert not is_bound(Out(0, 0)) and not is_bound(TAU)
    with pytest.raises(IllFormed):
        is_bound(A_HOLE)
    assert target_context(In(0), 3) == 4
    assert target_context(Out(0, 1), 3) == 3


def test_check_action_rejects_out_of_range():
    check_action(Out(1, 0), 2)
    with pytest.raises(IllFormed):
        check_action(Out(2, 0), 2)


def test_size_counts_nodes_but_not_payloads():
    assert size(NIL) == 1
    assert size(Output(0, 0, NIL)) == 2
    assert size(Par(Input(0, NIL), Output(0, None, NIL))) == 5
    assert size(Bang(Choice(NIL, NIL))) == 4


def test_has_hole():
    assert not has_hole(Par(NIL, NIL))
    assert has_hole(Par(NIL, Nu(HOLE)))
    assert has_hole(Output(0, None, NIL))


def test_renaming_validates_its_images():
    rho = Renaming(2, (1, None, 0))
    assert rho.source == 3
    assert rho(0) == 1 and rho(1) is None and rho(None) is None
    assert rho.is_sliced()
    with pytest.raises(IllFormed):
        Renaming(2, (2,))


@given(processes(2))
def test_generated_processes_are_well_formed(p):
    assert well_formed(p, 2)
    assert not has_hole(p)
