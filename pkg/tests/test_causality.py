from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from pislice import causality as cz
from pislice.gallery import EXTRUSION_SOURCE
from pislice.lattice import enumerate_slices
from pislice.semantics import Rule, Trace, enumerate_transitions, run_trace
from pislice.syntax import load
from pislice.terms import NIL, BOut, Choice, Input, Output, Par

from strategies import processes


def _rules(t):
    yield t.rule
    for s in t.premises:
        yield from _rules(s)


def _extrusion():
    p, ctx, _ = load(EXTRUSION_SOURCE)
    return p, ctx, enumerate_transitions(p, ctx)


def test_disjoint_outputs_are_concurrent_with_eq_braiding():
    p = Par(Output(0, 0, NIL), Output(0, 0, NIL))
    t, u = enumerate_transitions(p, 1)
    assert cz.concurrent(t, u) and cz.concurrent(u, t)
    assert not cz.concurrent(t, t)
    assert cz.compute_braiding(t, u).kind is cz.BraidKind.EQ
    assert cz.residual(u, t).source == t.target


def test_choice_branches_conflict():
    t, u = enumerate_transitions(Choice(Output(0, 0, NIL), Output(0, 0, NIL)), 1)
    assert not cz.concurrent(t, u)
    with pytest.raises(cz.NotConcurrent):
        cz.residual(u, t)


def test_sync_conflicts_with_its_own_halves():
    ts = enumerate_transitions(Par(Input(0, NIL), Output(0, 0, NIL)), 1)
    assert [cz.concurrent(ts[2], s) for s in ts[:2]] == [False, False]


def test_two_inputs_swap_the_top_binders():
    t, u = enumerate_transitions(Par(Input(0, Output(0, 0, NIL)), Input(0, Output(0, 0, NIL))), 1)
    g = cz.compute_braiding(t, u)
    assert g.kind is cz.BraidKind.SWAP_TOP
    assert g.describe() == "SwapTop"


def test_residual_still_extrudes_the_other_name():
    _, _, ts = _extrusion()
    r = cz.residual(ts[1], ts[0])
    assert r.action == BOut(1)
    assert Rule.EXTRUDE in _rules(r)
    assert r.source == ts[0].target


def test_extrusion_syncs_close_with_a_bound_leaf():
    _, _, ts = _extrusion()
    for i, j in ((4, 7), (5, 6)):
        g = cz.compute_braiding(ts[i], ts[j])
        assert g.kind is cz.BraidKind.BOUND
        assert isinstance(g.phi, cz.Leaf)
        assert cz.format_braid(g.phi) == "(νν swap)(·|·)"


def test_extrusion_leaf_under_a_parallel_context():
    p, ctx, _ = _extrusion()
    q = Par(p, p.right.right)
    ts = enumerate_transitions(q, ctx)
    g = cz.compute_braiding(ts[4], ts[7])
    assert isinstance(g.phi, cz.ParLeft) and isinstance(g.phi.phi, cz.Leaf)
    assert g.describe() == "Bound ((νν swap)(·|·) | ·)"


def test_braid_checks_and_inverse():
    _, _, ts = _extrusion()
    g = cz.compute_braiding(ts[4], ts[7])
    cz.check_braid(g.phi)
    assert cz.braid_source(g.phi) == g.left and cz.braid_target(g.phi) == g.right
    inv = g.inverse()
    assert (inv.left, inv.right) == (g.right, g.left)


def test_extrusion_isos_and_pentagons():
    p, ctx, _ = _extrusion()
    for q in (p, Par(p, p.right.right)):
        ts = enumerate_transitions(q, ctx)
        for t in ts:
            for u in ts:
                if t is not u and cz.concurrent(t, u):
                    assert cz.iso_roundtrip_failures(cz.compute_braiding(t, u)) == 0
                    assert cz.check_pentagon(t, u, cap=1024, samples=40, rng=random.Random(0))


@given(processes(2, depth=3))
def test_concurrency_is_irreflexive_and_symmetric(p):
    ts = enumerate_transitions(p, 2)
    for t in ts:
        assert not cz.concurrent(t, t)
        for u in ts:
            assert cz.concurrent(t, u) == cz.concurrent(u, t)


@given(processes(2, depth=3))
def test_residuals_are_derivable_and_close_pentagons(p):
    ts = enumerate_transitions(p, 2)
    for t in ts:
        for u in ts:
            if t is not u and cz.concurrent(t, u):
                r = cz.residual(u, t)
                assert r in enumerate_transitions(t.target, t.target_ctx)
                g = cz.compute_braiding(t, u)
                assert cz.iso_roundtrip_failures(g) == 0
                assert cz.pentagon_report(t, u, cap=512, samples=20, rng=random.Random(1)).failures == 0


def test_permute_the_extrusion_run_at_its_end():
    p, ctx, ts = _extrusion()
    tr = Trace(p, ctx, (ts[4], cz.residual(ts[7], ts[4])))
    new, g = cz.permute_adjacent(tr, 0)
    assert new.steps[0] == ts[7]
    assert g.kind is cz.BraidKind.BOUND
    assert all(cz.slice_invariant(tr, new, g, r) for r in enumerate_slices(new.end, None))


def test_permute_interior_pair_with_eq_braiding():
    p, ctx, _ = load("free a b c; a<a>.0 | b<b>.0 | c<c>.0")
    tr = run_trace(p, ctx, (0, 0, 0))
    new, g = cz.permute_adjacent(tr, 0)
    assert g.kind is cz.BraidKind.EQ
    assert new.end == tr.end and new.steps[2] == tr.steps[2]
    assert all(cz.slice_invariant(tr, new, g, r) for r in enumerate_slices(new.end, None))
    back, _ = cz.permute_adjacent(new, 0)
    assert back.steps == tr.steps


def test_permute_dependent_steps_fails():
    p, ctx, _ = load("free a; a<a>.a<a>.0")
    with pytest.raises(cz.NotConcurrent):
        cz.permute_adjacent(run_trace(p, ctx, (0, 0)), 0)


def test_permute_interior_non_trivial_braiding_is_refused():
    p, ctx, _ = load("free a; a(u).u<u>.0 | a(v).v<v>.0 | a<a>.0")
    tr = run_trace(p, ctx, (0, 1, 0))
    with pytest.raises(cz.BraidingError):
        cz.permute_adjacent(tr, 0)
    _, g = cz.permute_adjacent(Trace(tr.start, tr.ctx, tr.steps[:2]), 0)
    assert g.kind is cz.BraidKind.SWAP_TOP
