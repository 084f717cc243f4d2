from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from pislice import renaming as ren
from pislice.corpus import processes_up_to
from pislice.lattice import enumerate_slices, leq, renaming_slices
from pislice.terms import A_HOLE, HOLE, NIL, TAU, IllFormed, Input, Nu, Out, Output, Renaming

from strategies import processes


def test_push_pop_swap():
    assert ren.push(3)(0) == 1
    assert ren.pop(2, 3)(0) == 2
    assert ren.pop(2, 3)(1) == 0
    sw = ren.swap(1)
    assert (sw(0), sw(1), sw(2)) == (1, 0, 2)
    assert ren.compose(sw, sw) == ren.identity(3)


def test_lift():
    assert ren.lift(ren.identity(2)) == ren.identity(3)
    assert ren.lift(ren.push(2))(1) == 2
    assert ren.lift(Renaming(2, (None, None)))(1) is None
    assert ren.unlift(ren.lift(ren.swap(0))) == ren.swap(0)


def test_apply_action():
    assert ren.apply_action(ren.push(1), TAU) == TAU
    assert ren.apply_action(ren.push(1), Out(0, 0)) == Out(1, 1)
    assert ren.apply_action(ren.push(1), A_HOLE) == A_HOLE


def test_apply_process_goes_under_binders():
    assert ren.apply_process(ren.push(1), HOLE) == HOLE
    assert ren.apply_process(ren.push(1), Nu(Output(1, 0, NIL))) == Nu(Output(2, 0, NIL))
    p = Nu(Nu(Output(1, 0, NIL)))
    assert ren.apply_process(ren.swap(0), p.body.body) == Output(0, 1, NIL)


def test_erased_channel_is_rejected():
    with pytest.raises(IllFormed):
        ren.apply_process(Renaming(1, (None,)), Output(0, 0, NIL))


@given(processes(2, depth=3))
def test_identity_is_neutral(p):
    assert ren.apply_process(ren.identity(2), p) == p


@given(processes(2, depth=3))
def test_swap_is_an_involution(p):
    sw = ren.swap(0)
    assert ren.apply_process(sw, ren.apply_process(sw, p)) == p


@given(processes(2, depth=3))
def test_pop_after_push_is_identity(p):
    assert ren.apply_process(ren.compose(ren.pop(0, 2), ren.push(2)), p) == p


def test_name_galois_connection_exhaustive():
    for rho in (ren.push(2), ren.swap(1), ren.pop(1, 2)):
        for x in range(rho.source):
            for sigma, z in itertools.product(renaming_slices(rho), (None, x)):
                z2 = ren.name_gc_fwd(rho, x, sigma, z)
                back = ren.name_gc_bwd(rho, x, z2)
                assert leq(back, (sigma, z))
            for z2 in (None, rho(x)):
                sigma, z = ren.name_gc_bwd(rho, x, z2)
                assert leq(z2, ren.name_gc_fwd(rho, x, sigma, z))


def test_unapp_examples():
    assert ren.name_gc_bwd(ren.push(2), 1, None) == (Renaming(3, (None, None)), None)
    assert ren.name_gc_bwd(ren.push(2), 1, 2) == (Renaming(3, (None, 2)), 1)


def test_process_renaming_examples():
    rho = ren.push(1)
    assert ren.ren_fwd(rho, NIL, rho, HOLE) == HOLE
    assert ren.ren_bwd(rho, NIL, HOLE) == (Renaming(2, (None,)), HOLE)
    p = Input(0, Output(1, 0, NIL))
    sigma, r = ren.ren_bwd(rho, p, Input(1, Output(2, None, HOLE)))
    assert r == Input(0, Output(1, None, HOLE))
    assert sigma == Renaming(2, (None,))


@pytest.mark.parametrize("ctx", [1, 2])
def test_process_renaming_galois_connection_exhaustive(ctx):
    rhos = [ren.push(ctx), ren.pop(0, ctx - 1) if ctx > 1 else ren.pop(0, 1), ren.identity(ctx)]
    if ctx >= 2:
        rhos.append(ren.swap(ctx - 2))
    for rho in rhos:
        for p in processes_up_to(4, rho.source):
            target = ren.apply_process(rho, p)
            for sigma in renaming_slices(rho):
                for r in enumerate_slices(p, None):
                    out = ren.ren_fwd(rho, p, sigma, r)
                    assert leq(out, target)
                    assert leq(ren.ren_bwd(rho, p, out), (sigma, r))
            for r2 in enumerate_slices(target, None):
                sigma, r = ren.ren_bwd(rho, p, r2)
                assert leq(r2, ren.ren_fwd(rho, p, sigma, r))


@given(st.data())
def test_process_renaming_full_slices_give_the_renamed_process(data):
    p = data.draw(processes(2, depth=3))
    rho = data.draw(st.sampled_from([ren.push(2), ren.swap(0), ren.pop(0, 1)]))
    assert ren.ren_fwd(rho, p, rho, p) == ren.apply_process(rho, p)
